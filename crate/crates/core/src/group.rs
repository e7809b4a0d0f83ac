//! Matrices over `F_{q^2}`, unitary predicates, transvections,
//! quasi-reflections and the ambient groups used by the constructions.

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{BraidScalars, Elem, Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("vector {0:?} is not isotropic")]
    Anisotropic(Vec<u32>),
    #[error("vector {0:?} is isotropic")]
    Isotropic(Vec<u32>),
    #[error("transvection scalar must be non-zero with trace zero")]
    BadTransvectionScalar,
    #[error("quasi-reflection scalar must have norm one")]
    BadReflectionScalar,
    #[error("alpha*conj(alpha) + beta*conj(beta) != 1")]
    NotOnUnitCircle,
    #[error("index {i} out of range for dimension {n}")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("cannot combine elements of different ambient kinds")]
    MixedKinds,
    #[error("element encoding needs {bits} bits, more than the 128 available")]
    EncodingTooWide { bits: u32 },
    #[error("matrix is singular")]
    Singular,
}

/// Square matrix over a finite field, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub n: usize,
    pub e: Vec<Elem>,
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat {
            n,
            e: vec![Elem::ZERO; n * n],
        }
    }

    pub fn identity(f: &Field, n: usize) -> Mat {
        Mat::scalar(f, n, f.one())
    }

    pub fn scalar(_f: &Field, n: usize, c: Elem) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.e[i * n + i] = c;
        }
        m
    }

    pub fn diag(d: &[Elem]) -> Mat {
        let n = d.len();
        let mut m = Mat::zero(n);
        for (i, &c) in d.iter().enumerate() {
            m.e[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Mat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat {
            n,
            e: rows.concat(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.e[i * self.n + j] = v;
    }

    pub fn mul(&self, f: &Field, other: &Mat) -> Mat {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.e[k * n + j];
                    if !b.is_zero() {
                        let idx = i * n + j;
                        out.e[idx] = f.add(out.e[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Mat {
        Mat {
            n: self.n,
            e: self.e.iter().map(|&x| f.mul(c, x)).collect(),
        }
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Mat {
        Mat {
            n: self.n,
            e: self.e.iter().map(|&x| g(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.e[j * n + i] = self.e[i * n + j];
            }
        }
        m
    }

    /// `conj(x)^T`.
    pub fn conj_transpose(&self, f: &Field) -> Mat {
        self.transpose().map(|x| f.bar(x))
    }

    pub fn det(&self, f: &Field) -> Elem {
        let n = self.n;
        let mut a = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Elem::ZERO;
            };
            if p != c {
                for j in 0..n {
                    a.e.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = a.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for r in c + 1..n {
                let factor = f.mul(a.get(r, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(c, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat, GroupError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(f, n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a.get(r, c).is_zero())
                .ok_or(GroupError::Singular)?;
            if p != c {
                for j in 0..n {
                    a.e.swap(p * n + j, c * n + j);
                    inv.e.swap(p * n + j, c * n + j);
                }
            }
            let pi = f.inv(a.get(c, c));
            for j in 0..n {
                a.set(c, j, f.mul(a.get(c, j), pi));
                inv.set(c, j, f.mul(inv.get(c, j), pi));
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = a.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(c, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(c, j))));
                }
            }
        }
        Ok(inv)
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Mat {
        let mut result = Mat::identity(f, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self, f: &Field) -> bool {
        *self == Mat::identity(f, self.n)
    }

    pub fn is_unitary(&self, f: &Field) -> bool {
        self.mul(f, &self.conj_transpose(f)).is_identity(f)
    }

    pub fn is_special_unitary(&self, f: &Field) -> bool {
        self.is_unitary(f) && self.det(f) == f.one()
    }

    pub fn is_monomial(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).filter(|&j| !self.get(i, j).is_zero()).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_unipotent_upper(&self, f: &Field) -> bool {
        self.is_upper_triangular() && (0..self.n).all(|i| self.get(i, i) == f.one())
    }

    /// Scales so that the first non-zero entry in row-major order is 1.
    pub fn projective_canon(&self, f: &Field) -> Mat {
        match self.e.iter().find(|x| !x.is_zero()) {
            Some(&lead) if lead != f.one() => self.scale(f, f.inv(lead)),
            _ => self.clone(),
        }
    }

    /// Row-major nested arrays of field literals.
    pub fn to_literals(&self, f: &Field) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| f.literal(self.get(i, j))).collect())
            .collect()
    }
}

/// `F_{q^2}^n` with the form `f(u, v) = Σ u_i conj(v_i)`.
#[derive(Clone, Debug)]
pub struct HermitianSpace {
    pub field: Field,
    pub n: usize,
}

impl HermitianSpace {
    pub fn new(field: Field, n: usize) -> Result<HermitianSpace, GroupError> {
        field.q()?;
        Ok(HermitianSpace { field, n })
    }

    pub fn form(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &self.field;
        u.iter()
            .zip(v)
            .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, f.bar(b))))
    }

    fn outer(&self, v: &[Elem], c: Elem) -> Mat {
        // I + c · v · conj(v)^T, the matrix of u -> u + c f(u, v) v.
        let f = &self.field;
        let mut m = Mat::identity(f, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let t = f.mul(c, f.mul(v[i], f.bar(v[j])));
                m.set(i, j, f.add(m.get(i, j), t));
            }
        }
        m
    }

    /// `X_{v,μ}: u -> u + μ f(u, v) v`.
    pub fn transvection(&self, v: &[Elem], mu: Elem) -> Result<Mat, GroupError> {
        let f = &self.field;
        if !self.form(v, v).is_zero() {
            return Err(GroupError::Anisotropic(v.iter().map(|e| e.0).collect()));
        }
        if mu.is_zero() || !f.trace(mu)?.is_zero() {
            return Err(GroupError::BadTransvectionScalar);
        }
        Ok(self.outer(v, mu))
    }

    /// `Y_{v,μ}: u -> u + (μ - 1) f(u, v) / f(v, v) v`.
    pub fn quasi_reflection(&self, v: &[Elem], mu: Elem) -> Result<Mat, GroupError> {
        let f = &self.field;
        let fvv = self.form(v, v);
        if fvv.is_zero() {
            return Err(GroupError::Isotropic(v.iter().map(|e| e.0).collect()));
        }
        if f.norm(mu)? != f.one() {
            return Err(GroupError::BadReflectionScalar);
        }
        Ok(self.outer(v, f.div(f.sub(mu, f.one()), fvv)))
    }
}

/// `x_i(α, β)`: the block `[[α, β], [-conj β, conj α]]` at rows and columns `i, i+1` (1-based).
pub fn x_block(f: &Field, n: usize, i: usize, alpha: Elem, beta: Elem) -> Result<Mat, GroupError> {
    if i == 0 || i >= n {
        return Err(GroupError::IndexOutOfRange { i, n });
    }
    if f.add(f.norm(alpha)?, f.norm(beta)?) != f.one() {
        return Err(GroupError::NotOnUnitCircle);
    }
    let mut m = Mat::identity(f, n);
    let (a, b) = (i - 1, i);
    m.set(a, a, alpha);
    m.set(a, b, beta);
    m.set(b, a, f.neg(f.bar(beta)));
    m.set(b, b, f.bar(alpha));
    Ok(m)
}

/// The scalar `ζ` for odd `i` and `ζ⁻¹` for even `i`.
pub fn xi_scalar(f: &Field, i: usize, sc: &BraidScalars) -> Elem {
    if i % 2 == 1 {
        sc.zeta
    } else {
        f.inv(sc.zeta)
    }
}

/// `x_i = x_i(1 + ζ', -ζ' η⁻¹)` with `ζ'` from [`xi_scalar`].
pub fn make_xi(f: &Field, n: usize, i: usize, sc: &BraidScalars) -> Result<Mat, GroupError> {
    let z = xi_scalar(f, i, sc);
    let alpha = f.add(f.one(), z);
    let beta = f.neg(f.mul(z, f.inv(sc.eta)));
    x_block(f, n, i, alpha, beta)
}

/// The isotropic vector `(0, .., 1, η, .., 0)` with the 1 at position `i` (1-based).
pub fn xi_vector(f: &Field, n: usize, i: usize, sc: &BraidScalars) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; n];
    v[i - 1] = f.one();
    v[i] = sc.eta;
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AmbientKind {
    SU,
    PSU,
    GU,
    PGU,
    PGUPhi,
}

impl AmbientKind {
    pub fn is_projective(self) -> bool {
        matches!(self, AmbientKind::PSU | AmbientKind::PGU | AmbientKind::PGUPhi)
    }
}

/// Element of one of the ambient groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Plain(Mat),
    /// Class modulo scalars, represented with first non-zero entry equal to 1.
    Projective(Mat),
    /// `(A, k)` standing for `[A]·Φ^k`.
    PhiExtended { mat: Mat, phi: u32 },
}

impl GroupElement {
    pub fn mat(&self) -> &Mat {
        match self {
            GroupElement::Plain(m) | GroupElement::Projective(m) => m,
            GroupElement::PhiExtended { mat, .. } => mat,
        }
    }

    pub fn phi_exp(&self) -> u32 {
        match self {
            GroupElement::PhiExtended { phi, .. } => *phi,
            _ => 0,
        }
    }
}

/// Minimal group interface shared by the matrix groups and the abstract test groups.
///
/// `key` must be injective; chains and the oracle compare elements through it.
pub trait Group: Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn key(&self, a: &Self::Elem) -> u128;
    fn from_key(&self, k: u128) -> Self::Elem;

    /// `g x g⁻¹`.
    fn conj(&self, g: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut r = self.identity();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn commute(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

/// One of SU_n(q), PSU_n(q), GU_n(q), PGU_n(q) or PGU_n(q)⟨Φ⟩ over a fixed `F_{q^2}`.
#[derive(Clone, Debug)]
pub struct AmbientGroup {
    pub kind: AmbientKind,
    pub n: usize,
    pub field: Field,
    /// `Φ` acts entrywise as `x -> x^(s^phi_frobenius)`.
    pub phi_frobenius: u32,
    /// Order of `Φ`; 1 when there is no field automorphism.
    pub phi_order: u32,
    entry_bits: u32,
    phi_bits: u32,
}

impl AmbientGroup {
    pub fn new(kind: AmbientKind, n: usize, field: Field) -> Result<AmbientGroup, GroupError> {
        AmbientGroup::build(kind, n, field, 0, 1)
    }

    /// `PGU_n(q)⟨Φ⟩` with `Φ: x -> x^(s^phi_frobenius)` of order `phi_order`.
    pub fn with_phi(
        n: usize,
        field: Field,
        phi_frobenius: u32,
        phi_order: u32,
    ) -> Result<AmbientGroup, GroupError> {
        AmbientGroup::build(AmbientKind::PGUPhi, n, field, phi_frobenius, phi_order)
    }

    fn build(
        kind: AmbientKind,
        n: usize,
        field: Field,
        phi_frobenius: u32,
        phi_order: u32,
    ) -> Result<AmbientGroup, GroupError> {
        field.q()?;
        let entry_bits = 64 - (field.size() - 1).leading_zeros();
        let phi_bits = 32 - (phi_order.max(1) - 1).leading_zeros();
        let bits = (n * n) as u32 * entry_bits + phi_bits;
        if bits > 128 {
            return Err(GroupError::EncodingTooWide { bits });
        }
        Ok(AmbientGroup {
            kind,
            n,
            field,
            phi_frobenius,
            phi_order,
            entry_bits,
            phi_bits,
        })
    }

    /// Wraps a matrix of GU_n(q) as an element of this group.
    pub fn element(&self, m: &Mat) -> GroupElement {
        self.element_with_phi(m, 0)
    }

    pub fn element_with_phi(&self, m: &Mat, phi: u32) -> GroupElement {
        match self.kind {
            AmbientKind::SU | AmbientKind::GU => GroupElement::Plain(m.clone()),
            AmbientKind::PSU | AmbientKind::PGU => {
                GroupElement::Projective(m.projective_canon(&self.field))
            }
            AmbientKind::PGUPhi => GroupElement::PhiExtended {
                mat: m.projective_canon(&self.field),
                phi: phi % self.phi_order,
            },
        }
    }

    /// The generator `Φ` itself (identity matrix, exponent 1).
    pub fn phi(&self) -> GroupElement {
        self.element_with_phi(&Mat::identity(&self.field, self.n), 1)
    }

    /// `Φ^k` applied entrywise.
    pub fn apply_phi(&self, m: &Mat, k: u32) -> Mat {
        let e = (self.phi_frobenius * (k % self.phi_order.max(1))) % self.field.degree();
        if e == 0 {
            return m.clone();
        }
        m.map(|x| self.field.frobenius(x, e))
    }

    pub fn ext_mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let f = &self.field;
        match (self.kind, a, b) {
            (AmbientKind::SU | AmbientKind::GU, GroupElement::Plain(x), GroupElement::Plain(y)) => {
                Ok(GroupElement::Plain(x.mul(f, y)))
            }
            (
                AmbientKind::PSU | AmbientKind::PGU,
                GroupElement::Projective(x),
                GroupElement::Projective(y),
            ) => Ok(GroupElement::Projective(x.mul(f, y).projective_canon(f))),
            (
                AmbientKind::PGUPhi,
                GroupElement::PhiExtended { mat: x, phi: k },
                GroupElement::PhiExtended { mat: y, phi: l },
            ) => {
                let m = x.mul(f, &self.apply_phi(y, *k)).projective_canon(f);
                Ok(GroupElement::PhiExtended {
                    mat: m,
                    phi: (k + l) % self.phi_order,
                })
            }
            _ => Err(GroupError::MixedKinds),
        }
    }

    pub fn ext_inv(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        let f = &self.field;
        match (self.kind, a) {
            (AmbientKind::SU | AmbientKind::GU, GroupElement::Plain(x)) => {
                Ok(GroupElement::Plain(x.inverse(f)?))
            }
            (AmbientKind::PSU | AmbientKind::PGU, GroupElement::Projective(x)) => {
                Ok(GroupElement::Projective(x.inverse(f)?.projective_canon(f)))
            }
            (AmbientKind::PGUPhi, GroupElement::PhiExtended { mat, phi }) => {
                let k = (self.phi_order - phi % self.phi_order) % self.phi_order;
                let m = self.apply_phi(&mat.inverse(f)?, k).projective_canon(f);
                Ok(GroupElement::PhiExtended { mat: m, phi: k })
            }
            _ => Err(GroupError::MixedKinds),
        }
    }

    /// `g x g⁻¹`.
    pub fn ext_conj(&self, g: &GroupElement, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.ext_mul(&self.ext_mul(g, x)?, &self.ext_inv(g)?)
    }

    pub fn proj_canon(&self, m: &Mat) -> GroupElement {
        self.element(m)
    }

    /// Scalars `c·I` lying in the centre of the linear group (`SU` or `GU`)
    /// whose quotient this kind is.
    pub fn central_scalars(&self) -> Vec<Elem> {
        let f = &self.field;
        let q = f.q().expect("ambient fields have even degree");
        let special = matches!(self.kind, AmbientKind::SU | AmbientKind::PSU);
        f.elements()
            .skip(1)
            .filter(|&c| {
                f.pow(c, q as i64 + 1) == f.one() && (!special || f.pow(c, self.n as i64) == f.one())
            })
            .collect()
    }

    pub fn to_json(&self, g: &GroupElement) -> serde_json::Value {
        serde_json::json!({
            "kind": format!("{:?}", self.kind),
            "matrix": g.mat().to_literals(&self.field),
            "phi_exp": g.phi_exp(),
        })
    }
}

impl Group for AmbientGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        self.element(&Mat::identity(&self.field, self.n))
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.ext_mul(a, b).expect("elements of one ambient group")
    }

    fn inv(&self, a: &GroupElement) -> GroupElement {
        self.ext_inv(a).expect("group elements are invertible")
    }

    fn key(&self, a: &GroupElement) -> u128 {
        let mut k: u128 = a.phi_exp() as u128;
        for &x in &a.mat().e {
            k = (k << self.entry_bits) | x.0 as u128;
        }
        k
    }

    fn from_key(&self, mut k: u128) -> GroupElement {
        let nn = self.n * self.n;
        let mask = (1u128 << self.entry_bits) - 1;
        let mut e = vec![Elem::ZERO; nn];
        for slot in e.iter_mut().rev() {
            *slot = Elem((k & mask) as u32);
            k >>= self.entry_bits;
        }
        let m = Mat { n: self.n, e };
        let phi = (k & ((1u128 << self.phi_bits.max(1)) - 1)) as u32;
        match self.kind {
            AmbientKind::SU | AmbientKind::GU => GroupElement::Plain(m),
            AmbientKind::PSU | AmbientKind::PGU => GroupElement::Projective(m),
            AmbientKind::PGUPhi => GroupElement::PhiExtended { mat: m, phi },
        }
    }

    fn pow(&self, a: &GroupElement, mut e: u64) -> GroupElement {
        let mut result = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> Field {
        Field::new(2, 4).unwrap()
    }

    #[test]
    fn identity_predicates() {
        let f = f16();
        let i = Mat::identity(&f, 3);
        assert!(i.is_special_unitary(&f));
        assert!(i.is_monomial() && i.is_diagonal());
        assert!(i.is_upper_triangular() && i.is_unipotent_upper(&f));
    }

    #[test]
    fn inverse_and_det() {
        let f = Field::new(3, 2).unwrap();
        let sc = BraidScalars::select(&f).unwrap();
        let x = make_xi(&f, 3, 1, &sc).unwrap();
        let y = x.inverse(&f).unwrap();
        assert!(x.mul(&f, &y).is_identity(&f));
        assert_eq!(y, x.conj_transpose(&f));
        assert_eq!(x.det(&f), f.one());
    }

    #[test]
    fn x_block_rejects_off_circle() {
        let f = f16();
        assert_eq!(
            x_block(&f, 2, 1, f.one(), f.one()),
            Err(GroupError::NotOnUnitCircle)
        );
        assert!(x_block(&f, 2, 2, Elem::ZERO, f.one()).is_err());
        let s = x_block(&f, 3, 2, Elem::ZERO, f.one()).unwrap();
        assert!(s.is_monomial() && s.is_special_unitary(&f));
    }

    #[test]
    fn key_roundtrip() {
        let f = Field::new(5, 6).unwrap();
        let g = AmbientGroup::with_phi(3, f.clone(), 2, 3).unwrap();
        let m = Mat::diag(&[f.generator(), f.one(), f.from_int(3)]);
        let a = g.element_with_phi(&m, 2);
        assert_eq!(g.from_key(g.key(&a)), a);
        assert!(AmbientGroup::with_phi(4, f, 2, 3).is_err());
    }

    #[test]
    fn phi_semidirect_product() {
        let f = Field::new(5, 6).unwrap();
        let g = AmbientGroup::with_phi(2, f.clone(), 2, 3).unwrap();
        let a = g.element(&Mat::diag(&[f.generator(), f.one()]));
        let phi = g.phi();
        let lhs = g.mul(&phi, &a);
        let expect = g.element_with_phi(&g.apply_phi(a.mat(), 1), 1);
        assert_eq!(lhs, expect);
        assert!(g.is_identity(&g.pow(&phi, 3)));
        assert!(g.is_identity(&g.mul(&g.inv(&lhs), &lhs)));
    }
}
