//! Bruhat normal form `x = b·ẇ·u` in `SL_n(q^2)` with `u ∈ U⁻_w`.
//!
//! `ẇ` is the product of the blocks `x_i(0, 1)` along the normal-form word of
//! `w`; column `j` of `ẇ` has its non-zero entry in row `w(j)`.

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{rho, Permutation};
use crate::field::{Elem, Field};
use crate::group::{x_block, GroupError, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruhatError {
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("l(w s_{i}) != l(w) + 1")]
    LengthPrecondition { i: usize },
    #[error("second factor is not in the cell of s_{i}")]
    NotSimpleCell { i: usize },
    #[error("carried entry mismatch at ({i}, {}): got {got:?}, expected {expected:?}", i + 1)]
    CarriedEntry { i: usize, got: Elem, expected: Elem },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatForm {
    pub b: Mat,
    pub w: Permutation,
    pub u: Mat,
}

impl BruhatForm {
    pub fn product(&self, f: &Field) -> Mat {
        self.b.mul(f, &w_lift(f, &self.w)).mul(f, &self.u)
    }

    /// `u_{i,i+1}` with 1-based `i`.
    pub fn u_super(&self, i: usize) -> Elem {
        self.u.get(i - 1, i)
    }

    pub fn to_json(&self, f: &Field) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            b: Vec<Vec<String>>,
            w: Permutation,
            u: Vec<Vec<String>>,
        }
        serde_json::to_value(Out {
            b: self.b.to_literals(f),
            w: self.w.clone(),
            u: self.u.to_literals(f),
        })
        .expect("serialisable")
    }
}

/// The fixed lift `ẇ`.
pub fn w_lift(f: &Field, w: &Permutation) -> Mat {
    let n = w.n();
    rho(w).letters.iter().fold(Mat::identity(f, n), |acc, &i| {
        acc.mul(f, &x_block(f, n, i, Elem::ZERO, f.one()).expect("unit block"))
    })
}

/// Decomposes `x` by a column sweep: for each column, repeatedly clear the
/// lowest non-zero entry sitting in a row already claimed by an earlier
/// column (column operation with that earlier column); the first lowest
/// entry in an unclaimed row becomes the pivot and fixes `w(j)`.
pub fn bruhat_normal_form(f: &Field, x: &Mat) -> Result<BruhatForm, BruhatError> {
    if x.det(f) != f.one() {
        return Err(BruhatError::NotSpecial);
    }
    let n = x.n;
    let mut m = x.clone();
    // r accumulates the column operations: x · r = b ẇ.
    let mut r = Mat::identity(f, n);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut img = vec![0usize; n];
    for j in 0..n {
        loop {
            let low = (0..n)
                .rev()
                .find(|&row| !m.get(row, j).is_zero())
                .expect("non-singular matrix");
            match owner[low] {
                None => {
                    owner[low] = Some(j);
                    img[j] = low + 1;
                    break;
                }
                Some(k) => {
                    let c = f.neg(f.div(m.get(low, j), m.get(low, k)));
                    for row in 0..n {
                        let v = f.add(m.get(row, j), f.mul(c, m.get(row, k)));
                        m.set(row, j, v);
                        let v = f.add(r.get(row, j), f.mul(c, r.get(row, k)));
                        r.set(row, j, v);
                    }
                }
            }
        }
    }
    let w = Permutation::from_one_line(&img).expect("pivots are distinct rows");
    let u = r.inverse(f)?;
    let b = m.mul(f, &w_lift(f, &w).inverse(f)?);
    debug_assert!(b.is_upper_triangular());
    debug_assert!(u.is_unipotent_upper(f));
    Ok(BruhatForm { b, w, u })
}

pub fn pi_b(f: &Field, x: &Mat) -> Result<Permutation, BruhatError> {
    Ok(bruhat_normal_form(f, x)?.w)
}

/// True when every non-zero strictly upper entry `(i, j)` of `u` has `w(i) > w(j)`.
pub fn in_u_minus(f: &Field, u: &Mat, w: &Permutation) -> bool {
    let n = u.n;
    u.is_unipotent_upper(f)
        && (0..n).all(|i| {
            (i + 1..n).all(|j| u.get(i, j).is_zero() || w.images()[i] > w.images()[j])
        })
}

/// Normal form of `x·y` for `y` in the cell of `s_i` with `l(w s_i) = l(w) + 1`,
/// checked to carry `u_{i,i+1}` over from `y`.
pub fn refined_product_check(
    f: &Field,
    x: &BruhatForm,
    y: &BruhatForm,
    i: usize,
) -> Result<BruhatForm, BruhatError> {
    let n = x.w.n();
    if y.w != Permutation::simple(n, i) {
        return Err(BruhatError::NotSimpleCell { i });
    }
    let ws = x.w.mul_simple(i);
    if ws.length() != x.w.length() + 1 {
        return Err(BruhatError::LengthPrecondition { i });
    }
    let prod = x.product(f).mul(f, &y.product(f));
    let form = bruhat_normal_form(f, &prod)?;
    let expected = y.u_super(i);
    let got = form.u_super(i);
    if form.w != ws || got != expected {
        return Err(BruhatError::CarriedEntry {
            i,
            got,
            expected,
        });
    }
    Ok(form)
}
