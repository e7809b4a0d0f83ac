//! The subgroup `B_n^U = ⟨x_1, .., x_{n-1}⟩ ≤ SU_n(q)` and its unitary
//! permutation braids `S_n^U`, with executable versions of their structural
//! theorems. Every check returns a [`TheoremReport`].

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bruhat::{bruhat_normal_form, BruhatError};
use crate::coxeter::{rho, sn_normal_form, Permutation};
use crate::field::{BraidScalars, Elem, Field, FieldError};
use crate::group::{make_xi, AmbientGroup, AmbientKind, GroupError, Mat};

#[derive(Debug, Error)]
pub enum UbraidError {
    #[error("q = {q} is too small: the construction needs q >= 4")]
    FieldTooSmall { q: u64 },
    #[error("step for {w:?} at i = {i}: {detail}")]
    StepViolation {
        w: Permutation,
        i: usize,
        detail: String,
    },
    #[error("normal form profile of {w:?}: {detail}")]
    ProfileMismatch { w: Permutation, detail: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bruhat(#[from] BruhatError),
}

/// Structured verdict of a theorem check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub parameters: serde_json::Value,
    pub cases_checked: usize,
    pub failures: Vec<String>,
}

impl TheoremReport {
    pub fn new(theorem: &str, parameters: serde_json::Value) -> TheoremReport {
        TheoremReport {
            theorem: theorem.to_string(),
            parameters,
            cases_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, results: Vec<Option<String>>) {
        self.cases_checked += results.len();
        self.failures.extend(results.into_iter().flatten());
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryPermBraid {
    pub perm: Permutation,
    pub mat: Mat,
    pub len: usize,
}

/// Whether `x_i` is expected to have order 2 (even characteristic) or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepMode {
    Strict,
    Involutive,
}

impl StepMode {
    pub fn for_field(f: &Field) -> StepMode {
        if f.characteristic() == 2 {
            StepMode::Involutive
        } else {
            StepMode::Strict
        }
    }
}

/// `ψ(ρ(w))`: the product of the `x_i` along the normal-form word of `w`.
pub fn psi_rho(f: &Field, sc: &BraidScalars, w: &Permutation) -> Result<UnitaryPermBraid, UbraidError> {
    let n = w.n();
    let mut mat = Mat::identity(f, n);
    for &i in &rho(w).letters {
        mat = mat.mul(f, &make_xi(f, n, i, sc)?);
    }
    Ok(UnitaryPermBraid {
        perm: w.clone(),
        mat,
        len: w.length(),
    })
}

/// The cached set `S_n^U`, indexed by permutation.
#[derive(Clone, Debug)]
pub struct SunTable {
    pub field: Field,
    pub n: usize,
    pub scalars: BraidScalars,
    pub braids: Vec<UnitaryPermBraid>,
    /// `x_1, .., x_{n-1}` (index `i - 1`).
    pub xs: Vec<Mat>,
    pub xs_inv: Vec<Mat>,
    by_perm: HashMap<Permutation, usize>,
    by_mat: HashMap<Mat, usize>,
}

/// All `n!` unitary permutation braids of `SU_n(q)`.
pub fn enumerate_sun(f: &Field, n: usize, sc: &BraidScalars) -> Result<SunTable, UbraidError> {
    let q = f.q()?;
    if q < 4 {
        return Err(UbraidError::FieldTooSmall { q });
    }
    let braids = Permutation::all(n)
        .into_par_iter()
        .map(|w| psi_rho(f, sc, &w))
        .collect::<Result<Vec<_>, _>>()?;
    let xs = (1..n)
        .map(|i| make_xi(f, n, i, sc))
        .collect::<Result<Vec<_>, _>>()?;
    let xs_inv = xs.iter().map(|x| x.conj_transpose(f)).collect();
    let by_perm = braids
        .iter()
        .enumerate()
        .map(|(k, b)| (b.perm.clone(), k))
        .collect();
    let by_mat = braids
        .iter()
        .enumerate()
        .map(|(k, b)| (b.mat.clone(), k))
        .collect();
    Ok(SunTable {
        field: f.clone(),
        n,
        scalars: *sc,
        braids,
        xs,
        xs_inv,
        by_perm,
        by_mat,
    })
}

impl SunTable {
    pub fn len(&self) -> usize {
        self.braids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.braids.is_empty()
    }

    /// The unique `w` with `ψ(ρ(w)) = m`, if any.
    pub fn membership(&self, m: &Mat) -> Option<&Permutation> {
        self.by_mat.get(m).map(|&k| &self.braids[k].perm)
    }

    pub fn get(&self, w: &Permutation) -> Option<&UnitaryPermBraid> {
        self.by_perm.get(w).map(|&k| &self.braids[k])
    }

    /// `x_i^ε` for `ε = ±1`.
    pub fn x_pow(&self, i: usize, eps: i32) -> &Mat {
        if eps > 0 {
            &self.xs[i - 1]
        } else {
            &self.xs_inv[i - 1]
        }
    }

    /// Number of distinct matrices; `n!` when `ψ ∘ ρ` is injective.
    pub fn distinct_matrices(&self) -> usize {
        self.by_mat.len()
    }

    fn params(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "q": self.field.q().ok(),
            "zeta": self.field.literal(self.scalars.zeta),
            "eta": self.field.literal(self.scalars.eta),
        })
    }

    /// The unique sign `ε` with `x·x_i^ε ∈ S_n^U`, and that successor.
    ///
    /// In involutive mode `x_i^{-1} = x_i`, so `ε = +1` and only membership is required.
    pub fn step_epsilon(
        &self,
        x: &UnitaryPermBraid,
        i: usize,
        mode: StepMode,
    ) -> Result<(i32, &UnitaryPermBraid), UbraidError> {
        let f = &self.field;
        let violation = |detail: String| UbraidError::StepViolation {
            w: x.perm.clone(),
            i,
            detail,
        };
        let up = self.membership(&x.mat.mul(f, self.x_pow(i, 1)));
        let down = self.membership(&x.mat.mul(f, self.x_pow(i, -1)));
        let (eps, w) = match mode {
            StepMode::Involutive => {
                if self.x_pow(i, 1) != self.x_pow(i, -1) {
                    return Err(violation("x_i is not an involution".into()));
                }
                (1, up.ok_or_else(|| violation("x·x_i is not a permutation braid".into()))?)
            }
            StepMode::Strict => match (up, down) {
                (Some(w), None) => (1, w),
                (None, Some(w)) => (-1, w),
                (Some(_), Some(_)) => return Err(violation("both signs are admissible".into())),
                (None, None) => return Err(violation("no sign is admissible".into())),
            },
        };
        let next = self.get(w).expect("table is complete");
        let shift = next.len as i64 - x.len as i64;
        let ok = match mode {
            StepMode::Strict => shift == eps as i64,
            StepMode::Involutive => shift.abs() == 1,
        };
        if !ok {
            return Err(violation(format!("length shifts by {shift} for ε = {eps}")));
        }
        if *w != x.perm.mul_simple(i) {
            return Err(violation(format!("successor {w:?} is not w·s_i")));
        }
        Ok((eps, next))
    }
}

/// `Σ_j η^{j-i} x_{ij}` (1-based `i`).
pub fn weighted_row_sum(f: &Field, eta: Elem, x: &Mat, i: usize) -> Elem {
    (1..=x.n).fold(Elem::ZERO, |acc, j| {
        let w = f.pow(eta, j as i64 - i as i64);
        f.add(acc, f.mul(w, x.get(i - 1, j - 1)))
    })
}

/// `Σ_i (-η)^{j-i} x_{ij}` (1-based `j`).
pub fn weighted_col_sum(f: &Field, eta: Elem, x: &Mat, j: usize) -> Elem {
    let minus_eta = f.neg(eta);
    (1..=x.n).fold(Elem::ZERO, |acc, i| {
        let w = f.pow(minus_eta, j as i64 - i as i64);
        f.add(acc, f.mul(w, x.get(i - 1, j - 1)))
    })
}

fn weighted_sums_failure(f: &Field, eta: Elem, x: &Mat) -> Option<String> {
    let one = f.one();
    (1..=x.n)
        .find(|&k| weighted_row_sum(f, eta, x, k) != one || weighted_col_sum(f, eta, x, k) != one)
        .map(|k| format!("weighted sum at index {k} differs from 1 for {:?}", x.to_literals(f)))
}

/// Weighted sums over all of `S_n^U` and over `samples` random words in
/// `x_i^{±1}` of length up to `max_len`.
pub fn check_weighted_sums(table: &SunTable, samples: usize, max_len: usize, seed: u64) -> TheoremReport {
    let f = &table.field;
    let eta = table.scalars.eta;
    let mut report = TheoremReport::new("weighted-sums", table.params());
    report.parameters["samples"] = samples.into();
    report.parameters["seed"] = seed.into();
    report.absorb(
        table
            .braids
            .par_iter()
            .map(|b| weighted_sums_failure(f, eta, &b.mat))
            .collect(),
    );
    if table.n >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<Vec<(usize, i32)>> = (0..samples)
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                (0..len)
                    .map(|_| (rng.gen_range(1..table.n), if rng.gen_bool(0.5) { 1 } else { -1 }))
                    .collect()
            })
            .collect();
        report.absorb(
            words
                .par_iter()
                .map(|word| {
                    let m = word.iter().fold(Mat::identity(f, table.n), |m, &(i, e)| {
                        m.mul(f, table.x_pow(i, e))
                    });
                    weighted_sums_failure(f, eta, &m)
                })
                .collect(),
        );
    }
    report
}

/// For all `x, x' ∈ S_n^U`: `x⁻¹x'` monomial implies `x = x'`.
pub fn check_faithful_on_torus(table: &SunTable) -> TheoremReport {
    let f = &table.field;
    let mut report = TheoremReport::new("faithful-torus", table.params());
    let results = table
        .braids
        .par_iter()
        .flat_map_iter(|x| {
            let xinv = x.mat.conj_transpose(f);
            table.braids.iter().map(move |y| {
                let g = xinv.mul(f, &y.mat);
                (g.is_monomial() && x.perm != y.perm)
                    .then(|| format!("{:?}^-1 · {:?} is monomial", x.perm, y.perm))
            })
        })
        .collect();
    report.absorb(results);
    report
}

/// Exactly one admissible sign (or, in involutive mode, closure under
/// `x_i`) for every `(x, i)`, with the matching length shift.
pub fn check_no_squares(table: &SunTable, mode: StepMode) -> TheoremReport {
    let mut report = TheoremReport::new("no-squares", table.params());
    report.parameters["mode"] = serde_json::to_value(mode).expect("serialisable");
    let results = table
        .braids
        .par_iter()
        .flat_map_iter(|x| {
            (1..table.n).map(move |i| table.step_epsilon(x, i, mode).err().map(|e| e.to_string()))
        })
        .collect();
    report.absorb(results);
    report
}

fn involutive_ok(table: &SunTable, i: usize) -> bool {
    table.x_pow(i, 1) != table.x_pow(i, -1)
}

/// For every central scalar `z` of `GU_n(q)`: if `x·x_i^ε ∈ S_n^U` then
/// `x·x_i^{-ε}·z ∉ S_n^U`. Each case is decided twice, by table lookup and
/// by the weighted row sum (which equals `z` on `B_n^U·z`).
pub fn centre_twisted_uniqueness(table: &SunTable) -> Result<TheoremReport, UbraidError> {
    let f = &table.field;
    let gu = AmbientGroup::new(AmbientKind::GU, table.n, f.clone())?;
    let centre = gu.central_scalars();
    let eta = table.scalars.eta;
    let mut report = TheoremReport::new("centre-twisted-uniqueness", table.params());
    report.parameters["central_scalars"] = centre.len().into();
    let results = table
        .braids
        .par_iter()
        .flat_map_iter(|x| {
            let centre = &centre;
            (1..table.n).flat_map(move |i| {
                [1, -1].into_iter().flat_map(move |eps| {
                    let forward = table.membership(&x.mat.mul(f, table.x_pow(i, eps))).is_some();
                    let back = x.mat.mul(f, table.x_pow(i, -eps));
                    centre.iter().map(move |&z| {
                        let m = back.scale(f, z);
                        let lookup = table.membership(&m).is_some();
                        let at = || format!("{:?}, i = {i}, ε = {eps}, z = {}", x.perm, f.literal(z));
                        if z != f.one() {
                            // B_n^U·z has weighted row sums z, so it misses S_n^U.
                            if weighted_row_sum(f, eta, &m, 1) != z {
                                return Some(format!("weighted row sum is not z at {}", at()));
                            }
                            return lookup.then(|| format!("x·x_i^-ε·z in S_n^U at {}", at()));
                        }
                        (involutive_ok(table, i) && forward && lookup)
                            .then(|| format!("both signs admissible at {}", at()))
                    })
                })
            })
        })
        .collect();
    report.absorb(results);
    Ok(report)
}

/// Bruhat data of a unitary permutation braid, checked against closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormProfile {
    /// `u_{i,i+1}` for `i = 1..n-1`.
    pub u_super: Vec<Elem>,
    /// Bottom row of the leading block `A` (empty for the identity).
    pub bottom_row: Vec<Elem>,
}

/// Expected `u_{i,i+1}`: zero off the finishing set, else `(ζ⁻¹-1)η⁻¹` for odd
/// `i` and `(ζ-1)η⁻¹` for even `i`.
pub fn expected_u_super(f: &Field, sc: &BraidScalars, w: &Permutation, i: usize) -> Elem {
    if !w.finishing_set().contains(&i) {
        return Elem::ZERO;
    }
    let z = if i % 2 == 1 { f.inv(sc.zeta) } else { sc.zeta };
    f.div(f.sub(z, f.one()), sc.eta)
}

/// Expected bottom row `(a_{l+1,j})_j` of the leading `(l+1)`-block when the
/// last non-trivial normal-form segment is `s_l ⋯ s_k`.
pub fn expected_bottom_row(f: &Field, sc: &BraidScalars, l: usize, k: usize) -> Vec<Elem> {
    let z = if l % 2 == 1 { sc.zeta } else { f.inv(sc.zeta) };
    let eta = sc.eta;
    let one_minus_z = f.sub(f.one(), z);
    (1..=l + 1)
        .map(|j| {
            if j < k {
                Elem::ZERO
            } else if j == k {
                let lead = f.pow(eta, (l + 1 - k) as i64);
                if k % 2 == l % 2 {
                    f.mul(z, lead)
                } else {
                    lead
                }
            } else {
                let e = l + 1 - j;
                let sign = if e.is_multiple_of(2) { f.one() } else { f.neg(f.one()) };
                f.mul(sign, f.mul(f.pow(eta, e as i64), one_minus_z))
            }
        })
        .collect()
}

/// Computes the Bruhat form of `x` and checks `π_b(x) = w`, the superdiagonal
/// of `u`, the block shape with its bottom row, and the zero-prefix bound.
pub fn normal_form_profile(
    f: &Field,
    sc: &BraidScalars,
    x: &UnitaryPermBraid,
) -> Result<NormalFormProfile, UbraidError> {
    let n = x.perm.n();
    let mismatch = |detail: String| UbraidError::ProfileMismatch {
        w: x.perm.clone(),
        detail,
    };
    let form = bruhat_normal_form(f, &x.mat)?;
    if form.w != x.perm {
        return Err(mismatch(format!("π_b gives {:?}", form.w)));
    }
    let u_super: Vec<Elem> = (1..n).map(|i| form.u_super(i)).collect();
    for (i, &got) in (1..n).zip(&u_super) {
        let want = expected_u_super(f, sc, &x.perm, i);
        if got != want {
            return Err(mismatch(format!(
                "u_{{{i},{}}} = {}, expected {}",
                i + 1,
                f.literal(got),
                f.literal(want)
            )));
        }
    }
    let segments = sn_normal_form(&x.perm);
    let Some(l) = (1..n).rev().find(|&l| !segments[l - 1].is_empty()) else {
        return Ok(NormalFormProfile {
            u_super,
            bottom_row: Vec::new(),
        });
    };
    let k = *segments[l - 1].last().expect("non-empty segment");
    // Block shape: identity outside the leading (l+1)-block.
    for r in 0..n {
        for c in 0..n {
            if (r > l || c > l) && x.mat.get(r, c) != if r == c { f.one() } else { Elem::ZERO } {
                return Err(mismatch(format!("entry ({}, {}) breaks the block shape", r + 1, c + 1)));
            }
        }
    }
    let bottom_row: Vec<Elem> = (0..=l).map(|c| x.mat.get(l, c)).collect();
    if bottom_row != expected_bottom_row(f, sc, l, k) {
        return Err(mismatch(format!("bottom row differs for l = {l}, k = {k}")));
    }
    // Every row of the block has a non-zero entry among its first k columns.
    for r in 0..=l {
        if (0..k).all(|c| x.mat.get(r, c).is_zero()) {
            return Err(mismatch(format!("row {} vanishes on columns 1..={k}", r + 1)));
        }
    }
    Ok(NormalFormProfile { u_super, bottom_row })
}

pub fn check_normal_form_profiles(table: &SunTable) -> TheoremReport {
    let mut report = TheoremReport::new("normal-form-profiles", table.params());
    let results = table
        .braids
        .par_iter()
        .map(|x| {
            normal_form_profile(&table.field, &table.scalars, x)
                .err()
                .map(|e| e.to_string())
        })
        .collect();
    report.absorb(results);
    report
}

/// `x·x_i = x'` exactly when `w' = w s_i` and the length goes up.
pub fn check_adjacency_transfer(table: &SunTable) -> TheoremReport {
    let f = &table.field;
    let mut report = TheoremReport::new("adjacency-transfer", table.params());
    let results = table
        .braids
        .par_iter()
        .flat_map_iter(|x| {
            (1..table.n).flat_map(move |i| {
                let prod = x.mat.mul(f, table.x_pow(i, 1));
                table.braids.iter().map(move |y| {
                    let lhs = prod == y.mat;
                    let rhs = y.perm == x.perm.mul_simple(i) && y.len == x.len + 1;
                    (lhs != rhs && !(lhs && table.x_pow(i, 1) == table.x_pow(i, -1)))
                        .then(|| format!("{:?}·x_{i} vs {:?}", x.perm, y.perm))
                })
            })
        })
        .collect();
    report.absorb(results);
    report
}
