//! Shared exact checks used by several test targets. Each returns the number
//! of cases it examined, or a description of the first mismatch.

#![allow(dead_code)]

use qsphere::bruhat::bruhat_normal_form;
use qsphere::field::BraidScalars;
use qsphere::group::{make_xi, xi_scalar, xi_vector, HermitianSpace};
use qsphere::{Elem, Field, Mat};

pub type Outcome = Result<usize, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn mat3(rows: [[Elem; 3]; 3]) -> Mat {
    Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// Projective points of `F^n`, normalised so the first non-zero entry is 1.
pub fn projective_points(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let elems: Vec<Elem> = f.elements().collect();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let mut idx = vec![0usize; free];
        loop {
            let mut v = vec![Elem::ZERO; n];
            v[lead] = f.one();
            for (k, &i) in idx.iter().enumerate() {
                v[lead + 1 + k] = elems[i];
            }
            out.push(v);
            let mut k = 0;
            while k < free {
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
    out
}

fn is_multiple(f: &Field, v: &[Elem], w: &[Elem]) -> bool {
    let Some(k) = v.iter().position(|e| !e.is_zero()) else {
        return w.iter().all(|e| e.is_zero());
    };
    if w[k].is_zero() {
        return false;
    }
    let c = f.div(w[k], v[k]);
    v.iter().zip(w).all(|(&a, &b)| f.mul(c, a) == b)
}

/// Braid relations, distant commutation and `ord(x_i) = char` in `SU_n(q)`.
pub fn braid_relations(n: usize, q: u64) -> Outcome {
    let f = Field::quadratic_over(q).map_err(|e| e.to_string())?;
    let sc = BraidScalars::select(&f).map_err(|e| e.to_string())?;
    let xs: Vec<Mat> = (1..n).map(|i| make_xi(&f, n, i, &sc).unwrap()).collect();
    let char = f.characteristic();
    let mut cases = 0;
    for (i, x) in xs.iter().enumerate() {
        ensure!(x.is_special_unitary(&f), "x_{} not in SU", i + 1);
        ensure!(!x.is_identity(&f) && x.pow(&f, char).is_identity(&f), "ord(x_{}) != {char}", i + 1);
        cases += 1;
    }
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            let (a, b) = (&xs[i], &xs[j]);
            if j == i + 1 {
                let l = a.mul(&f, b).mul(&f, a);
                ensure!(l == b.mul(&f, a).mul(&f, b), "braid relation fails at i = {}", i + 1);
            } else {
                ensure!(a.mul(&f, b) == b.mul(&f, a), "x_{} and x_{} do not commute", i + 1, j + 1);
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `x_i` is the transvection along `(.., 1, η, ..)` with scalar `ζ'`.
pub fn xi_transvection(n: usize, q: u64) -> Outcome {
    let f = Field::quadratic_over(q).map_err(|e| e.to_string())?;
    let sc = BraidScalars::select(&f).map_err(|e| e.to_string())?;
    let space = HermitianSpace::new(f.clone(), n).map_err(|e| e.to_string())?;
    for i in 1..n {
        let t = space
            .transvection(&xi_vector(&f, n, i, &sc), xi_scalar(&f, i, &sc))
            .map_err(|e| e.to_string())?;
        ensure!(t == make_xi(&f, n, i, &sc).unwrap(), "x_{i} differs from its transvection");
    }
    Ok(n - 1)
}

/// The closed form of `x_1 x_2 x_1` in `SU_3(q)`.
pub fn explicit_x1x2x1(q: u64) -> Outcome {
    let f = Field::quadratic_over(q).map_err(|e| e.to_string())?;
    let sc = BraidScalars::select(&f).map_err(|e| e.to_string())?;
    let (z, e) = (sc.zeta, sc.eta);
    let (zi, ei) = (f.inv(z), f.inv(e));
    let one = f.one();
    let opz = f.add(one, z);
    let omzi = f.sub(one, zi);
    let expected = mat3([
        [opz, f.neg(f.mul(ei, opz)), f.mul(ei, ei)],
        [f.mul(e, opz), f.add(f.sub(f.neg(z), one), zi), f.mul(ei, omzi)],
        [f.mul(e, e), f.neg(f.mul(e, omzi)), omzi],
    ]);
    let x1 = make_xi(&f, 3, 1, &sc).unwrap();
    let x2 = make_xi(&f, 3, 2, &sc).unwrap();
    ensure!(x1.mul(&f, &x2).mul(&f, &x1) == expected, "x1 x2 x1 differs at q = {q}");
    Ok(9)
}

pub struct Grid {
    pub f: Field,
    pub space: HermitianSpace,
    pub isotropic: Vec<Vec<Elem>>,
    pub anisotropic: Vec<Vec<Elem>>,
    pub all: Vec<Vec<Elem>>,
    pub trace_zero: Vec<Elem>,
    pub norm_one: Vec<Elem>,
}

/// Projective points of `F_16^3`, split by isotropy, with the admissible scalars.
pub fn f16_grid() -> Grid {
    let f = Field::quadratic_over(4).unwrap();
    let space = HermitianSpace::new(f.clone(), 3).unwrap();
    let all = projective_points(&f, 3);
    let (isotropic, anisotropic): (Vec<_>, Vec<_>) =
        all.iter().cloned().partition(|v| space.form(v, v).is_zero());
    let trace_zero = f
        .elements()
        .filter(|&m| !m.is_zero() && f.trace(m).unwrap().is_zero())
        .collect();
    let norm_one = f
        .elements()
        .filter(|&m| !m.is_zero() && f.norm(m).unwrap() == f.one())
        .collect();
    Grid { f, space, isotropic, anisotropic, all, trace_zero, norm_one }
}

/// Rescaling, additivity, commutation, conjugation, fixed complement and the
/// braid criterion for transvections, over every isotropic point pair.
pub fn transvection_suite(grid: &Grid) -> Outcome {
    let Grid { f, space, isotropic, all, trace_zero, .. } = grid;
    let units: Vec<Elem> = f.elements().filter(|e| !e.is_zero()).collect();
    let id = Mat::identity(f, 3);
    let tv = |v: &[Elem], mu: Elem| space.transvection(v, mu).unwrap();
    let mut cases = 0;
    for v in isotropic {
        for &mu in trace_zero {
            let x = tv(v, mu);
            ensure!(x.is_special_unitary(f), "X not special unitary");
            for &g in &units {
                let gv: Vec<Elem> = v.iter().map(|&c| f.mul(g, c)).collect();
                ensure!(tv(&gv, mu) == tv(v, f.mul(f.norm(g).unwrap(), mu)), "rescaling fails at {v:?}");
                cases += 1;
            }
            for &mu2 in trace_zero {
                let prod = x.mul(f, &tv(v, mu2));
                let sum = f.add(mu, mu2);
                let want = if sum.is_zero() { id.clone() } else { tv(v, sum) };
                ensure!(prod == want, "additivity fails at {v:?}");
                cases += 1;
            }
            for u in all {
                if space.form(u, v).is_zero() {
                    ensure!(&x.apply(f, u) == u, "complement not fixed at {v:?}, {u:?}");
                    cases += 1;
                }
            }
            for w in isotropic {
                let (fvw, fwv) = (space.form(v, w), space.form(w, v));
                let g = tv(w, trace_zero[0]);
                let conj = g.mul(f, &x).mul(f, &g.inverse(f).unwrap());
                ensure!(conj == tv(&g.apply(f, v), mu), "conjugation fails at {v:?}, {w:?}");
                for &mu2 in trace_zero {
                    let y = tv(w, mu2);
                    let commute = x.mul(f, &y) == y.mul(f, &x);
                    ensure!(commute == fvw.is_zero(), "commutation criterion fails at {v:?}, {w:?}");
                    if !fvw.is_zero() {
                        let braid = x.mul(f, &y).mul(f, &x) == y.mul(f, &x).mul(f, &y);
                        let crit = f.add(f.one(), f.mul(f.mul(mu, mu2), f.mul(fvw, fwv)));
                        ensure!(braid == crit.is_zero(), "braid criterion fails at {v:?}, {w:?}");
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

/// Representative independence, multiplicativity, commutation, conjugation
/// and eigenvectors for quasi-reflections, over every anisotropic point pair.
pub fn quasi_reflection_suite(grid: &Grid) -> Outcome {
    let Grid { f, space, anisotropic, all, norm_one, .. } = grid;
    let units: Vec<Elem> = f.elements().filter(|e| !e.is_zero()).collect();
    let nontrivial: Vec<Elem> = norm_one.iter().copied().filter(|&m| m != f.one()).collect();
    let qr = |v: &[Elem], mu: Elem| space.quasi_reflection(v, mu).unwrap();
    let mut cases = 0;
    for v in anisotropic {
        for &mu in norm_one {
            let y = qr(v, mu);
            ensure!(y.is_unitary(f) && y.det(f) == mu, "Y not unitary of determinant μ");
            for &g in &units {
                let gv: Vec<Elem> = v.iter().map(|&c| f.mul(g, c)).collect();
                ensure!(qr(&gv, mu) == y, "Y depends on the representative at {v:?}");
                cases += 1;
            }
            for &mu2 in norm_one {
                ensure!(y.mul(f, &qr(v, mu2)) == qr(v, f.mul(mu, mu2)), "multiplicativity fails at {v:?}");
                cases += 1;
            }
            let scaled: Vec<Elem> = v.iter().map(|&c| f.mul(mu, c)).collect();
            ensure!(y.apply(f, v) == scaled, "Y(v) != μv at {v:?}");
            for u in all {
                if space.form(u, v).is_zero() {
                    ensure!(&y.apply(f, u) == u, "complement not fixed at {v:?}");
                    cases += 1;
                }
            }
        }
        for w in anisotropic {
            let g = qr(w, nontrivial[0]);
            let gi = g.inverse(f).unwrap();
            let expect = space.form(v, w).is_zero() || is_multiple(f, v, w);
            for &mu in &nontrivial {
                let y = qr(v, mu);
                ensure!(g.mul(f, &y).mul(f, &gi) == qr(&g.apply(f, v), mu), "conjugation fails at {v:?}, {w:?}");
                for &mu2 in &nontrivial {
                    let z = qr(w, mu2);
                    ensure!((y.mul(f, &z) == z.mul(f, &y)) == expect, "commutation criterion fails at {v:?}, {w:?}");
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

/// Entrywise formula for `Y_{(α,1,1),μ}` over `F_{q^2}`.
pub fn reflection_display_rank_three(q: u64) -> Outcome {
    let f = Field::quadratic_over(q).unwrap();
    let space = HermitianSpace::new(f.clone(), 3).unwrap();
    let (one, two) = (f.one(), f.from_int(2));
    let mut cases = 0;
    for alpha in f.elements() {
        let aa = f.norm(alpha).unwrap();
        let d = f.add(two, aa);
        if d.is_zero() {
            continue;
        }
        let (ab, di) = (f.bar(alpha), f.inv(d));
        for mu in f.elements().filter(|&m| !m.is_zero() && f.norm(m).unwrap() == one) {
            let m1 = f.sub(mu, one);
            let s = |x: Elem| f.mul(di, x);
            let diag = s(f.add(f.add(aa, mu), one));
            let expected = mat3([
                [s(f.add(two, f.mul(mu, aa))), s(f.mul(m1, alpha)), s(f.mul(m1, alpha))],
                [s(f.mul(m1, ab)), diag, s(m1)],
                [s(f.mul(m1, ab)), s(m1), diag],
            ]);
            ensure!(space.quasi_reflection(&[alpha, one, one], mu).unwrap() == expected, "rank-three display differs at α = {alpha:?}");
            cases += 1;
        }
    }
    Ok(cases)
}

/// The rank-two display, which under the sesquilinear form is the
/// quasi-reflection along `(1, α)`, the `x_1`-image of `(α, 1)`.
pub fn reflection_display_rank_two(q: u64) -> Outcome {
    let f = Field::quadratic_over(q).unwrap();
    let space = HermitianSpace::new(f.clone(), 2).unwrap();
    let one = f.one();
    let swap = Mat::from_rows(&[vec![Elem::ZERO, one], vec![one, Elem::ZERO]]);
    let mut cases = 0;
    for alpha in f.elements() {
        let aa = f.norm(alpha).unwrap();
        let d = f.add(one, aa);
        if d.is_zero() {
            continue;
        }
        let di = f.inv(d);
        for mu in f.elements().filter(|&m| !m.is_zero() && f.norm(m).unwrap() == one) {
            let m1 = f.sub(mu, one);
            let shown = Mat::from_rows(&[
                vec![f.mul(di, f.add(aa, mu)), f.mul(di, f.mul(m1, f.bar(alpha)))],
                vec![f.mul(di, f.mul(m1, alpha)), f.mul(di, f.add(one, f.mul(mu, aa)))],
            ]);
            let y1 = space.quasi_reflection(&[alpha, one], mu).unwrap();
            let y2 = space.quasi_reflection(&[one, alpha], mu).unwrap();
            ensure!(shown == y2, "rank-two display differs at α = {alpha:?}");
            ensure!(swap.mul(&f, &y1).mul(&f, &swap) == y2, "x_1 does not swap the reflections");
            cases += 1;
        }
    }
    Ok(cases)
}

/// Bruhat `u`-entries of the five non-trivial braids of `S_3^U`, and the
/// two middle matrices entrywise.
pub fn su3_normal_form_table(q: u64) -> Outcome {
    let f = Field::quadratic_over(q).unwrap();
    let sc = BraidScalars::select(&f).unwrap();
    let (z, e) = (sc.zeta, sc.eta);
    let (zi, ei) = (f.inv(z), f.inv(e));
    let ei2 = f.mul(ei, ei);
    let one = f.one();
    let x1 = make_xi(&f, 3, 1, &sc).unwrap();
    let x2 = make_xi(&f, 3, 2, &sc).unwrap();
    let u12 = f.mul(f.sub(zi, one), ei);
    let u23 = f.mul(f.sub(z, one), ei);
    let zero = Elem::ZERO;
    let table = [
        ("x1", x1.clone(), [u12, zero, zero]),
        ("x2", x2.clone(), [zero, zero, u23]),
        ("x1x2", x1.mul(&f, &x2), [zero, f.mul(f.sub(z, one), ei2), u23]),
        ("x2x1", x2.mul(&f, &x1), [u12, f.mul(f.sub(one, zi), ei2), zero]),
        ("x1x2x1", x1.mul(&f, &x2).mul(&f, &x1), [u12, f.mul(f.sub(one, zi), ei2), u23]),
    ];
    for (name, x, want) in &table {
        let nf = bruhat_normal_form(&f, x).map_err(|e| e.to_string())?;
        ensure!(nf.product(&f) == *x, "{name}: b·w·u does not multiply back");
        let got = [nf.u.get(0, 1), nf.u.get(0, 2), nf.u.get(1, 2)];
        ensure!(got == *want, "{name}: u-entries {got:?}, expected {want:?} at q = {q}");
    }
    let opz = f.add(one, z);
    let omzi = f.sub(one, zi);
    let x12 = mat3([
        [opz, f.neg(f.mul(opz, ei)), ei2],
        [f.mul(z, e), f.sub(zi, z), f.mul(omzi, ei)],
        [zero, f.mul(zi, e), omzi],
    ]);
    let x21 = mat3([
        [opz, f.neg(f.mul(z, ei)), zero],
        [f.mul(opz, e), f.sub(zi, z), f.neg(f.mul(zi, ei))],
        [f.mul(e, e), f.mul(f.sub(zi, one), e), omzi],
    ]);
    ensure!(x1.mul(&f, &x2) == x12, "x1 x2 differs at q = {q}");
    ensure!(x2.mul(&f, &x1) == x21, "x2 x1 differs at q = {q}");
    Ok(table.len())
}
