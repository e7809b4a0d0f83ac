//! Signed simplicial chains in the order complex of elementary abelian
//! `p`-subgroups, the chains `C_E` and `C_{E,X,h}`, and Q-sphere verification.
//!
//! Subgroups are sorted vectors of element keys, so simplices compare by value
//! and conjugate simplices are identified without any further bookkeeping.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{corner_subset, Permutation};
use crate::group::{AmbientGroup, Group, GroupElement, GroupError, Mat};
use crate::oracle;
use crate::ubraid::TheoremReport;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("generators are dependent: span has {got} elements, expected {expected}")]
    Dependent { got: usize, expected: usize },
    #[error("X and h have different lengths ({x} vs {h})")]
    Shape { x: usize, h: usize },
    #[error("h vanishes at X[{0}]")]
    ZeroWeight(usize),
    #[error("map hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("mesh export needs r <= 3, got r = {0}")]
    MeshDimension(usize),
    #[error("mesh export needs permutation labels on X")]
    MissingLabels,
    #[error("inconsistent corner labels: {0}")]
    Geometry(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Ordered sequence of `r - 1` distinct indices from `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tuple {
    pub r: usize,
    pub entries: Vec<usize>,
}

impl Tuple {
    pub fn new(r: usize, entries: Vec<usize>) -> Option<Tuple> {
        let mut seen = vec![false; r + 1];
        if entries.len() + 1 != r {
            return None;
        }
        for &i in &entries {
            if i == 0 || i > r || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Tuple { r, entries })
    }

    /// The index not listed.
    pub fn missing(&self) -> usize {
        (1..=self.r).find(|i| !self.entries.contains(i)).expect("r - 1 entries")
    }

    /// `(-1)^(n+m)`: `n` transpositions sort the entries, and the sorted
    /// sequence differs from `[1, .., r-1]` in `m` places.
    pub fn sgn(&self) -> i32 {
        let e = &self.entries;
        let inversions = (0..e.len())
            .flat_map(|a| (a + 1..e.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| e[a] > e[b])
            .count();
        let mut sorted = e.clone();
        sorted.sort_unstable();
        let m = sorted.iter().enumerate().filter(|&(k, &v)| v != k + 1).count();
        if (inversions + m) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// All `r!` tuples for `r`, in lexicographic order.
pub fn all_tuples(r: usize) -> Vec<Tuple> {
    if r == 0 {
        return Vec::new();
    }
    Permutation::all(r)
        .into_iter()
        .map(|w| Tuple {
            r,
            entries: w.one_line()[..r - 1].to_vec(),
        })
        .collect()
}

/// Sign of a permutation.
pub fn perm_sign(w: &Permutation) -> i32 {
    if w.length().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub type Subgroup = Arc<Vec<u128>>;
/// Strictly increasing chain of subgroups; the empty simplex is the augmentation.
pub type Simplex = Vec<Subgroup>;

/// Sparse integer chain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    pub coeffs: BTreeMap<Simplex, BigInt>,
}

impl Chain {
    pub fn new() -> Chain {
        Chain::default()
    }

    pub fn add(&mut self, s: Simplex, c: impl Into<BigInt>) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(s.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&s);
        }
    }

    pub fn coeff(&self, s: &Simplex) -> BigInt {
        self.coeffs.get(s).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dimension of the stored simplices (`-1` for the augmentation, `None` if empty).
    pub fn dim(&self) -> Option<isize> {
        self.coeffs.keys().next().map(|s| s.len() as isize - 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|(s, c)| {
                    serde_json::json!({
                        "simplex": s.iter().map(|g| g.iter().map(|k| k.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

/// Alternating face sum; a vertex maps to the empty simplex.
pub fn boundary(c: &Chain) -> Chain {
    let mut acc: BTreeMap<Simplex, BigInt> = BTreeMap::new();
    for (s, coeff) in &c.coeffs {
        if s.is_empty() {
            continue;
        }
        for j in 0..s.len() {
            let mut face = s.clone();
            face.remove(j);
            let term = if j % 2 == 0 { coeff.clone() } else { -coeff.clone() };
            *acc.entry(face).or_insert_with(BigInt::zero) += term;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Chain { coeffs: acc }
}

fn sorted_keys<G: Group>(g: &G, elems: impl IntoIterator<Item = G::Elem>) -> Vec<u128> {
    let mut v: Vec<u128> = elems.into_iter().map(|e| g.key(&e)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Subgroup generated by pairwise commuting elements of order dividing `p`.
pub fn span<G: Group>(g: &G, gens: &[G::Elem], p: u64) -> Vec<G::Elem> {
    let mut set = vec![g.identity()];
    for x in gens {
        let mut next = Vec::with_capacity(set.len() * p as usize);
        let mut power = g.identity();
        for _ in 0..p {
            next.extend(set.iter().map(|s| g.mul(s, &power)));
            power = g.mul(&power, x);
        }
        set = next;
    }
    set
}

/// `E_{[i_1..i_l]}`: the span of every generator except the removed ones.
pub fn sub_e<G: Group>(g: &G, e_gens: &[G::Elem], removed: &[usize], p: u64) -> Result<Subgroup, ChainError> {
    let kept: Vec<G::Elem> = (1..=e_gens.len())
        .filter(|i| !removed.contains(i))
        .map(|i| e_gens[i - 1].clone())
        .collect();
    let keys = sorted_keys(g, span(g, &kept, p));
    let expected = (p as usize).pow(kept.len() as u32);
    if keys.len() != expected {
        return Err(ChainError::Dependent {
            got: keys.len(),
            expected,
        });
    }
    Ok(Arc::new(keys))
}

/// All `2^r` subgroups `E_S`, indexed by the bitmask of removed generators.
struct SubgroupTable {
    by_mask: Vec<Subgroup>,
}

impl SubgroupTable {
    fn new<G: Group>(g: &G, e_gens: &[G::Elem], p: u64) -> Result<SubgroupTable, ChainError> {
        let r = e_gens.len();
        let by_mask = (0..1usize << r)
            .map(|mask| {
                let removed: Vec<usize> = (1..=r).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                sub_e(g, e_gens, &removed, p)
            })
            .collect::<Result<_, _>>()?;
        Ok(SubgroupTable { by_mask })
    }

    fn top(&self) -> &Subgroup {
        &self.by_mask[0]
    }

    /// `σ_i` as a list of subgroups, smallest first.
    fn sigma(&self, t: &Tuple) -> Simplex {
        let mut mask = 0usize;
        let mut flag = vec![self.by_mask[0].clone()];
        for &i in &t.entries {
            mask |= 1 << (i - 1);
            flag.push(self.by_mask[mask].clone());
        }
        flag.reverse();
        flag
    }
}

/// `σ_i` for `E`.
pub fn sigma<G: Group>(g: &G, e_gens: &[G::Elem], p: u64, t: &Tuple) -> Result<Simplex, ChainError> {
    Ok(SubgroupTable::new(g, e_gens, p)?.sigma(t))
}

/// `τ_i`: `σ_i` without its top vertex `E`.
pub fn tau<G: Group>(g: &G, e_gens: &[G::Elem], p: u64, t: &Tuple) -> Result<Simplex, ChainError> {
    let mut s = sigma(g, e_gens, p, t)?;
    s.pop();
    Ok(s)
}

/// `C_E = Σ sgn(i) σ_i`.
pub fn chain_ce<G: Group>(g: &G, e_gens: &[G::Elem], p: u64) -> Result<Chain, ChainError> {
    let table = SubgroupTable::new(g, e_gens, p)?;
    let mut c = Chain::new();
    for t in all_tuples(e_gens.len()) {
        c.add(table.sigma(&t), t.sgn());
    }
    Ok(c)
}

/// `(-1)^(r-1) Σ sgn(i) τ_i`.
pub fn tau_sum<G: Group>(g: &G, e_gens: &[G::Elem], p: u64) -> Result<Chain, ChainError> {
    let table = SubgroupTable::new(g, e_gens, p)?;
    let r = e_gens.len();
    let sign = if r % 2 == 1 { 1 } else { -1 };
    let mut c = Chain::new();
    for t in all_tuples(r) {
        let mut s = table.sigma(&t);
        s.pop();
        c.add(s, sign * t.sgn());
    }
    Ok(c)
}

/// Conjugates every subgroup of a simplex by `x` through the key map of `E`.
fn conjugate_simplex(s: &Simplex, map: &HashMap<u128, u128>) -> Simplex {
    s.iter()
        .map(|sub| {
            let mut v: Vec<u128> = sub.iter().map(|k| map[k]).collect();
            v.sort_unstable();
            Arc::new(v)
        })
        .collect()
}

/// `x ↦ x·k·x⁻¹` on the keys of `E`.
fn conjugation_map<G: Group>(g: &G, x: &G::Elem, e_keys: &[u128]) -> HashMap<u128, u128> {
    let xinv = g.inv(x);
    e_keys
        .iter()
        .map(|&k| {
            let y = g.mul(&g.mul(x, &g.from_key(k)), &xinv);
            (k, g.key(&y))
        })
        .collect()
}

/// Whether `X` carries the strict condition (c), its order-2 variant (c2),
/// or neither (the degenerate chain checked against the raw hypotheses).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SphereMode {
    Strict,
    Involutive,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct QSphere<G: Group> {
    pub p: u64,
    pub e_gens: Vec<G::Elem>,
    pub x_set: Vec<G::Elem>,
    pub x_gens: Vec<G::Elem>,
    pub h: Vec<i64>,
    pub mode: SphereMode,
    /// Permutation labels of `X` when it is indexed by `S_n`; used by the mesh export.
    pub perm_labels: Option<Vec<Permutation>>,
}

impl<G: Group> QSphere<G> {
    pub fn rank(&self) -> usize {
        self.e_gens.len()
    }

    fn check_shape(&self) -> Result<(), ChainError> {
        if self.x_set.len() != self.h.len() {
            return Err(ChainError::Shape {
                x: self.x_set.len(),
                h: self.h.len(),
            });
        }
        if let Some(k) = self.h.iter().position(|&v| v == 0) {
            return Err(ChainError::ZeroWeight(k));
        }
        Ok(())
    }
}

/// `C_{E,X,h}` together with, for every simplex, the number of pairs `(y, j)`
/// contributing to it.
#[derive(Clone, Debug)]
pub struct AccumulatedChain {
    pub chain: Chain,
    pub contributions: BTreeMap<Simplex, usize>,
    /// `ʸσ_j` for every `(y, j)`, in `X × T^r` order.
    pub conjugated: Vec<Vec<Simplex>>,
    pub tuples: Vec<Tuple>,
}

impl AccumulatedChain {
    /// `C_{x,i}`: coefficient of `ˣσ_i`.
    pub fn coeff_c(&self, x: usize, t: usize) -> BigInt {
        self.chain.coeff(&self.conjugated[x][t])
    }

    /// `D_{x,i}`: coefficient of `ˣτ_i` in the boundary.
    pub fn coeff_d(&self, boundary: &Chain, x: usize, t: usize) -> BigInt {
        let mut s = self.conjugated[x][t].clone();
        s.pop();
        boundary.coeff(&s)
    }
}

pub fn chain_ce_xh<G: Group>(g: &G, sphere: &QSphere<G>) -> Result<AccumulatedChain, ChainError> {
    sphere.check_shape()?;
    let table = SubgroupTable::new(g, &sphere.e_gens, sphere.p)?;
    let tuples = all_tuples(sphere.rank());
    let base: Vec<(Simplex, i32)> = tuples.iter().map(|t| (table.sigma(t), t.sgn())).collect();
    let e_keys = table.top().clone();
    let conjugated: Vec<Vec<Simplex>> = sphere
        .x_set
        .par_iter()
        .map(|x| {
            let map = conjugation_map(g, x, &e_keys);
            base.iter().map(|(s, _)| conjugate_simplex(s, &map)).collect()
        })
        .collect();
    let mut chain = Chain::new();
    let mut contributions = BTreeMap::new();
    for (row, &hx) in conjugated.iter().zip(&sphere.h) {
        for (s, (_, sg)) in row.iter().zip(&base) {
            *chain.coeffs.entry(s.clone()).or_insert_with(BigInt::zero) += BigInt::from(hx * *sg as i64);
            *contributions.entry(s.clone()).or_insert(0) += 1;
        }
    }
    chain.coeffs.retain(|_, v| !v.is_zero());
    Ok(AccumulatedChain {
        chain,
        contributions,
        conjugated,
        tuples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub passed: bool,
    pub cases_checked: usize,
    pub failures: Vec<String>,
}

impl ConditionVerdict {
    pub fn from_results(results: Vec<Option<String>>) -> ConditionVerdict {
        let cases_checked = results.len();
        let failures: Vec<String> = results.into_iter().flatten().collect();
        ConditionVerdict {
            passed: failures.is_empty(),
            cases_checked,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReport {
    pub mode: SphereMode,
    pub rank: usize,
    pub e_order: usize,
    pub x_size: usize,
    /// Conjugates `ˣE` pairwise distinct, i.e. no `x⁻¹x'` normalises `E`.
    pub a: ConditionVerdict,
    /// `x_i` centralises `E_i`.
    pub b: ConditionVerdict,
    /// Stepping condition (c) or (c2), with `h` antisymmetric.
    pub c: ConditionVerdict,
}

impl SphereReport {
    pub fn passed(&self) -> bool {
        self.a.passed && self.b.passed && self.c.passed
    }
}

fn key_index<G: Group>(g: &G, xs: &[G::Elem]) -> HashMap<u128, usize> {
    xs.iter().enumerate().map(|(k, x)| (g.key(x), k)).collect()
}

/// Checks (a), (b) and (c) or (c2) according to the sphere's mode.
pub fn verify_qsphere<G: Group>(g: &G, sphere: &QSphere<G>) -> Result<SphereReport, ChainError> {
    sphere.check_shape()?;
    let r = sphere.rank();
    let e = sub_e(g, &sphere.e_gens, &[], sphere.p)?;
    // (a): x⁻¹x' ∈ N(E) iff ˣE = ˣ'E.
    let conjugates: Vec<Vec<u128>> = sphere
        .x_set
        .par_iter()
        .map(|x| {
            let map = conjugation_map(g, x, &e);
            let mut v: Vec<u128> = map.into_values().collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut seen: HashMap<&Vec<u128>, usize> = HashMap::new();
    let a_results = conjugates
        .iter()
        .enumerate()
        .map(|(k, c)| seen.insert(c, k).map(|prev| format!("X[{prev}]⁻¹·X[{k}] normalises E")))
        .collect();
    let a = ConditionVerdict::from_results(a_results);

    let mut b_results = Vec::new();
    for i in 1..=r {
        for j in (1..=r).filter(|&j| j != i) {
            let ok = g.commute(&sphere.x_gens[i - 1], &sphere.e_gens[j - 1]);
            b_results.push((!ok).then(|| format!("x_{i} does not commute with e_{j}")));
        }
    }
    let b = ConditionVerdict::from_results(b_results);

    let index = key_index(g, &sphere.x_set);
    let lookup = |y: &G::Elem| index.get(&g.key(y)).copied();
    let involution_ok: Vec<bool> = sphere
        .x_gens
        .iter()
        .map(|xi| g.is_identity(&g.mul(xi, xi)) && !g.is_identity(xi))
        .collect();
    let c_results = sphere
        .x_set
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, x)| {
            let lookup = &lookup;
            let involution_ok = &involution_ok;
            (1..=r).map(move |i| {
                let xi = &sphere.x_gens[i - 1];
                let up = lookup(&g.mul(x, xi));
                let down = lookup(&g.mul(x, &g.inv(xi)));
                let target = match sphere.mode {
                    SphereMode::Involutive => {
                        if !involution_ok[i - 1] {
                            return Some(format!("x_{i} does not have order 2"));
                        }
                        up
                    }
                    _ => match (up, down) {
                        (Some(t), None) | (None, Some(t)) => Some(t),
                        (Some(_), Some(_)) => {
                            return Some(format!("X[{k}]·x_{i}^±1 both lie in X"));
                        }
                        (None, None) => None,
                    },
                };
                match target {
                    None => Some(format!("X[{k}]·x_{i}^ε leaves X")),
                    Some(t) if sphere.h[k] + sphere.h[t] != 0 => {
                        Some(format!("h(X[{k}]) + h(X[{t}]) != 0 at i = {i}"))
                    }
                    Some(_) => None,
                }
            })
        })
        .collect();
    let c = ConditionVerdict::from_results(c_results);
    Ok(SphereReport {
        mode: sphere.mode,
        rank: r,
        e_order: e.len(),
        x_size: sphere.x_set.len(),
        a,
        b,
        c,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub is_cycle: bool,
    pub support_size: usize,
}

pub fn verify_cycle_nonzero(c: &Chain) -> CycleVerdict {
    CycleVerdict {
        is_cycle: boundary(c).is_zero(),
        support_size: c.len(),
    }
}

/// Group homomorphisms between ambient groups used to push spheres forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientMap {
    Identity,
    /// `SU → PSU` or `GU → PGU`.
    CenterQuotient,
    /// `M ↦ [diag(M, 1)]` from dimension `n - 1` into the projective group of dimension `n`.
    BlockInclusion,
}

impl AmbientMap {
    pub fn apply(self, src: &AmbientGroup, dst: &AmbientGroup, g: &GroupElement) -> GroupElement {
        match self {
            AmbientMap::Identity => g.clone(),
            AmbientMap::CenterQuotient => dst.element(g.mat()),
            AmbientMap::BlockInclusion => {
                let f = &src.field;
                let n = dst.n;
                let m = g.mat();
                let mut big = Mat::identity(f, n);
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        big.set(i, j, m.get(i, j));
                    }
                }
                dst.element(&big)
            }
        }
    }

    /// A preimage of an element in the image, as an element of `src`.
    fn lift(self, src: &AmbientGroup, dst: &AmbientGroup, h: &GroupElement) -> Option<GroupElement> {
        let f = &src.field;
        match self {
            AmbientMap::Identity => Some(h.clone()),
            AmbientMap::CenterQuotient => Some(GroupElement::Plain(h.mat().clone())),
            AmbientMap::BlockInclusion => {
                let n = dst.n;
                let m = h.mat();
                let c = m.get(n - 1, n - 1);
                if c.is_zero() || (0..n - 1).any(|k| !m.get(n - 1, k).is_zero() || !m.get(k, n - 1).is_zero()) {
                    return None;
                }
                let inv = f.inv(c);
                let mut small = Mat::zero(n - 1);
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        small.set(i, j, f.mul(inv, m.get(i, j)));
                    }
                }
                Some(GroupElement::Plain(small))
            }
        }
    }

    /// The kernel, as scalar matrices of `src`.
    fn kernel(self, src: &AmbientGroup) -> Vec<GroupElement> {
        match self {
            AmbientMap::Identity | AmbientMap::BlockInclusion => vec![src.identity()],
            AmbientMap::CenterQuotient => src
                .central_scalars()
                .into_iter()
                .map(|c| GroupElement::Plain(Mat::scalar(&src.field, src.n, c)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurjectivityCheck {
    /// `⟨φ(X)⟩` was enumerated and every element normalising `φ(E)` lifts into `N_G(E)`.
    Enumerated { generated_order: usize, normaliser_order: usize },
    /// `⟨φ(X)⟩` exceeds the enumeration cap; the clause is assumed, and
    /// condition (a) is still verified directly on the image.
    Assumed { cap: usize },
    Failed { witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageReport {
    pub map: AmbientMap,
    pub kernel_order: usize,
    pub kernel_normalises_e: bool,
    pub kernel_meets_e_trivially: bool,
    pub surjectivity: SurjectivityCheck,
    /// `x·x_i^ε ∈ XK` for exactly one `ε` (strict spheres only).
    pub unique_step_mod_kernel: Option<ConditionVerdict>,
    pub injective_on_x: bool,
}

impl ImageReport {
    pub fn passed(&self) -> bool {
        self.kernel_normalises_e
            && self.kernel_meets_e_trivially
            && !matches!(self.surjectivity, SurjectivityCheck::Failed { .. })
            && self.unique_step_mod_kernel.as_ref().is_none_or(|v| v.passed)
            && self.injective_on_x
    }
}

/// Pushes a sphere through `map`, checking the kernel hypotheses.
pub fn image_sphere(
    src: &AmbientGroup,
    dst: &AmbientGroup,
    map: AmbientMap,
    sphere: &QSphere<AmbientGroup>,
    cap: usize,
) -> Result<(QSphere<AmbientGroup>, ImageReport), ChainError> {
    sphere.check_shape()?;
    let phi = |g: &GroupElement| map.apply(src, dst, g);
    let e = sub_e(src, &sphere.e_gens, &[], sphere.p)?;
    let e_set: HashSet<u128> = e.iter().copied().collect();
    let kernel = map.kernel(src);
    let normalises = |k: &GroupElement| {
        sphere
            .e_gens
            .iter()
            .all(|x| e_set.contains(&src.key(&src.conj(k, x))))
    };
    let kernel_normalises_e = kernel.iter().all(normalises);
    let kernel_meets_e_trivially = kernel
        .iter()
        .filter(|k| e_set.contains(&src.key(k)))
        .count()
        == 1;

    let image_x: Vec<GroupElement> = sphere.x_set.iter().map(phi).collect();
    let injective_on_x = image_x.iter().map(|y| dst.key(y)).collect::<HashSet<_>>().len() == image_x.len();

    let unique_step_mod_kernel = (sphere.mode == SphereMode::Strict).then(|| {
        let index = key_index(dst, &image_x);
        let results = sphere
            .x_set
            .iter()
            .enumerate()
            .flat_map(|(k, x)| {
                let index = &index;
                sphere.x_gens.iter().enumerate().map(move |(i, xi)| {
                    let up = index.contains_key(&dst.key(&phi(&src.mul(x, xi))));
                    let down = index.contains_key(&dst.key(&phi(&src.mul(x, &src.inv(xi)))));
                    (up == down).then(|| format!("X[{k}]·x_{}^ε in XK for {} signs", i + 1, up as u8 * 2))
                })
            })
            .collect();
        ConditionVerdict::from_results(results)
    });

    let image_e: Vec<GroupElement> = sphere.e_gens.iter().map(phi).collect();
    let surjectivity = if map == AmbientMap::Identity {
        SurjectivityCheck::Enumerated {
            generated_order: 0,
            normaliser_order: 0,
        }
    } else {
        match oracle::enumerate_group(dst, &image_x, cap) {
            Err(_) => SurjectivityCheck::Assumed { cap },
            Ok(gen) => {
                let fe: HashSet<u128> = span(dst, &image_e, sphere.p).iter().map(|y| dst.key(y)).collect();
                let normaliser: Vec<u128> = gen
                    .keys
                    .par_iter()
                    .copied()
                    .filter(|&k| {
                        let m = dst.from_key(k);
                        image_e.iter().all(|y| fe.contains(&dst.key(&dst.conj(&m, y))))
                    })
                    .collect();
                let witness = normaliser.iter().find(|&&k| {
                    let m = dst.from_key(k);
                    !map.lift(src, dst, &m).is_some_and(|l| normalises(&l))
                });
                match witness {
                    Some(&k) => SurjectivityCheck::Failed {
                        witness: format!("{:?}", dst.to_json(&dst.from_key(k))),
                    },
                    None => SurjectivityCheck::Enumerated {
                        generated_order: gen.keys.len(),
                        normaliser_order: normaliser.len(),
                    },
                }
            }
        }
    };

    let image = QSphere {
        p: sphere.p,
        e_gens: image_e,
        x_set: image_x,
        x_gens: sphere.x_gens.iter().map(phi).collect(),
        h: sphere.h.clone(),
        mode: sphere.mode,
        perm_labels: sphere.perm_labels.clone(),
    };
    let report = ImageReport {
        map,
        kernel_order: kernel.len(),
        kernel_normalises_e,
        kernel_meets_e_trivially,
        surjectivity,
        unique_step_mod_kernel,
        injective_on_x,
    };
    Ok((image, report))
}

/// Abstract simplicial complex spanned by the top simplices of a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    pub dimension: usize,
    /// Vertex rank (rank of the subgroup) and unit-sphere position.
    pub vertices: Vec<TriVertex>,
    /// Vertex indices of each top simplex, smallest subgroup first.
    pub cells: Vec<TriCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriVertex {
    pub id: usize,
    pub rank: usize,
    pub position: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriCell {
    pub vertices: Vec<usize>,
    /// Permutation label of the conjugating element.
    pub label: Vec<usize>,
    pub coeff: i64,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Distinct edges among all cells.
    pub fn edge_count(&self) -> usize {
        self.faces_of_size(2).len()
    }

    fn faces_of_size(&self, k: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for c in &self.cells {
            let m = c.vertices.len();
            for mask in 0u32..(1 << m) {
                if mask.count_ones() as usize == k {
                    let mut f: Vec<usize> = (0..m).filter(|b| mask & (1 << b) != 0).map(|b| c.vertices[b]).collect();
                    f.sort_unstable();
                    out.insert(f);
                }
            }
        }
        out
    }

    /// `Σ (-1)^k f_k` over all faces of the cells.
    pub fn euler_characteristic(&self) -> i64 {
        let top = self.cells.first().map_or(0, |c| c.vertices.len());
        (1..=top)
            .map(|k| {
                let n = self.faces_of_size(k).len() as i64;
                if k % 2 == 1 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Every codimension-one face lies in exactly two cells.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        let Some(first) = self.cells.first() else {
            return true;
        };
        let k = first.vertices.len() - 1;
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.cells {
            for skip in 0..c.vertices.len() {
                let mut f: Vec<usize> = c.vertices.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                f.sort_unstable();
                if f.len() == k {
                    *count.entry(f).or_insert(0) += 1;
                }
            }
        }
        count.values().all(|&c| c == 2)
    }

    /// OFF mesh; for `r = 2` the cells are 2-vertex polygons.
    pub fn to_off(&self) -> String {
        let mut out = format!("OFF\n{} {} 0\n", self.vertices.len(), self.cells.len());
        for v in &self.vertices {
            let mut p = v.position.clone();
            p.resize(3, 0.0);
            out.push_str(&format!("{:.6} {:.6} {:.6}\n", p[0], p[1], p[2]));
        }
        for c in &self.cells {
            let ids: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{} {}\n", ids.len(), ids.join(" ")));
        }
        out
    }
}

/// Orthonormal coordinates of the sum-zero hyperplane of `R^n`, `n <= 4`.
fn project(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    // Gram-Schmidt on e_1 - e_2, e_1 + e_2 - 2e_3, ... (Helmert basis).
    let out: Vec<f64> = (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            (v[..k].iter().sum::<f64>() - k as f64 * v[k]) / norm
        })
        .collect();
    let len = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len == 0.0 {
        out
    } else {
        out.iter().map(|x| x / len).collect()
    }
}

/// Realises the complex of `C_{E,X,h}` on the unit sphere: the rank-one
/// subgroup `ˣ⟨e_k⟩` sits at the normalised centred indicator of `w({1..k})`
/// (`w` the label of `x`), and larger subgroups at the normalised sum of
/// their rank-one generators.
pub fn triangulate<G: Group>(g: &G, sphere: &QSphere<G>) -> Result<Triangulation, ChainError> {
    let r = sphere.rank();
    if r > 3 {
        return Err(ChainError::MeshDimension(r));
    }
    let labels = sphere.perm_labels.as_ref().ok_or(ChainError::MissingLabels)?;
    let acc = chain_ce_xh(g, sphere)?;
    let n = r + 1;
    let corner = |w: &Permutation, k: usize| -> Vec<f64> {
        let s = corner_subset(w, k);
        let ind: Vec<f64> = (1..=n).map(|j| if s.contains(&j) { 1.0 } else { 0.0 }).collect();
        let mean = k as f64 / n as f64;
        ind.iter().map(|x| x - mean).collect()
    };
    let mut ids: HashMap<Subgroup, usize> = HashMap::new();
    let mut vertices: Vec<TriVertex> = Vec::new();
    let mut cells = Vec::new();
    for (xk, row) in acc.conjugated.iter().enumerate() {
        let w = &labels[xk];
        for (t, s) in acc.tuples.iter().zip(row) {
            // Vertex l of σ_i (from the top) keeps the generators outside i_1..i_l.
            let mut cell = Vec::new();
            for (depth, sub) in s.iter().enumerate() {
                let removed = &t.entries[..t.entries.len() - depth];
                let kept: Vec<usize> = (1..=r).filter(|i| !removed.contains(i)).collect();
                let mut sum = vec![0.0; n];
                for &k in &kept {
                    for (a, b) in sum.iter_mut().zip(corner(w, k)) {
                        *a += b;
                    }
                }
                let pos = project(&sum);
                let id = match ids.get(sub) {
                    Some(&id) => {
                        let old = &vertices[id].position;
                        if old.iter().zip(&pos).any(|(a, b)| (a - b).abs() > 1e-9) {
                            return Err(ChainError::Geometry(format!(
                                "subgroup of rank {} placed twice at different points",
                                kept.len()
                            )));
                        }
                        id
                    }
                    None => {
                        let id = vertices.len();
                        ids.insert(sub.clone(), id);
                        vertices.push(TriVertex {
                            id,
                            rank: kept.len(),
                            position: pos,
                        });
                        id
                    }
                };
                cell.push(id);
            }
            let coeff = acc.chain.coeff(s);
            cells.push(TriCell {
                vertices: cell,
                label: w.one_line(),
                coeff: i64::try_from(coeff).unwrap_or(0),
            });
        }
    }
    Ok(Triangulation {
        dimension: r - 1,
        vertices,
        cells,
    })
}

/// `Z_p^r` with elements as exponent vectors.
#[derive(Clone, Debug)]
pub struct ElementaryAbelian {
    pub p: u64,
    pub r: usize,
}

impl ElementaryAbelian {
    pub fn basis(&self) -> Vec<Vec<u64>> {
        (0..self.r)
            .map(|i| (0..self.r).map(|j| u64::from(i == j)).collect())
            .collect()
    }
}

impl Group for ElementaryAbelian {
    type Elem = Vec<u64>;

    fn identity(&self) -> Vec<u64> {
        vec![0; self.r]
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    fn key(&self, a: &Vec<u64>) -> u128 {
        a.iter().fold(0u128, |k, &x| k * self.p as u128 + x as u128)
    }

    fn from_key(&self, mut k: u128) -> Vec<u64> {
        let mut v = vec![0; self.r];
        for slot in v.iter_mut().rev() {
            *slot = (k % self.p as u128) as u64;
            k /= self.p as u128;
        }
        v
    }
}

/// Symmetric group on `degree <= 25` points.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
}

impl Group for PermGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn key(&self, a: &Permutation) -> u128 {
        a.images().iter().fold(0u128, |k, &x| (k << 5) | x as u128)
    }

    fn from_key(&self, mut k: u128) -> Permutation {
        let mut img = vec![0usize; self.degree];
        for slot in img.iter_mut().rev() {
            *slot = (k & 31) as usize + 1;
            k >>= 5;
        }
        Permutation::from_one_line(&img).expect("valid key")
    }
}

/// `sgn(σ) = sgn(i)·sgn(j)` for every pair of tuples with `r <= r_max`,
/// where `σ(j_l) = i_l` and `σ` sends the missing index of `j` to that of `i`.
pub fn check_signature_product(r_max: usize) -> TheoremReport {
    let mut report = TheoremReport::new("signature", serde_json::json!({ "r_max": r_max }));
    for r in 1..=r_max {
        let ts = all_tuples(r);
        for i in &ts {
            for j in &ts {
                let mut img = vec![0; r];
                for (&jl, &il) in j.entries.iter().zip(&i.entries) {
                    img[jl - 1] = il;
                }
                img[j.missing() - 1] = i.missing();
                let sigma = Permutation::from_one_line(&img).expect("bijection");
                report.cases_checked += 1;
                if perm_sign(&sigma) != i.sgn() * j.sgn() {
                    report.failures.push(format!("{:?} vs {:?}", i.entries, j.entries));
                }
            }
        }
    }
    report
}

/// `d(C_E) = (-1)^(r-1) Σ sgn(i) τ_i` and `d∘d = 0` on `Z_p^r`, `r <= r_max`.
pub fn check_boundary_formula(p: u64, r_max: usize) -> Result<TheoremReport, ChainError> {
    let mut report = TheoremReport::new("boundary", serde_json::json!({ "p": p, "r_max": r_max }));
    for r in 1..=r_max {
        let g = ElementaryAbelian { p, r };
        let gens = g.basis();
        let d = boundary(&chain_ce(&g, &gens, p)?);
        report.cases_checked += 1;
        if d != tau_sum(&g, &gens, p)? {
            report.failures.push(format!("boundary formula fails at r = {r}"));
        }
        if !boundary(&d).is_zero() {
            report.failures.push(format!("d∘d != 0 at r = {r}"));
        }
    }
    Ok(report)
}

/// `true` when every coefficient is `±1`.
pub fn unit_coefficients(c: &Chain) -> bool {
    c.coeffs.values().all(|v| v.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_examples() {
        assert_eq!(Tuple::new(4, vec![1, 4, 2]).unwrap().sgn(), 1);
        assert_eq!(Tuple::new(4, vec![1, 2, 3]).unwrap().sgn(), 1);
        assert!(Tuple::new(3, vec![1, 1]).is_none());
        assert_eq!(all_tuples(3).len(), 6);
    }

    #[test]
    fn rank_one_chain_is_a_vertex() {
        let g = ElementaryAbelian { p: 3, r: 1 };
        let c = chain_ce(&g, &g.basis(), 3).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeffs.values().next().unwrap(), &BigInt::from(1));
        // the augmentation sees it
        assert_eq!(boundary(&c).len(), 1);
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let g = ElementaryAbelian { p: 3, r: 2 };
        let gens = vec![vec![1, 0], vec![2, 0]];
        assert!(matches!(chain_ce(&g, &gens, 3), Err(ChainError::Dependent { .. })));
    }

    #[test]
    fn boundary_of_ce_is_tau_sum() {
        for r in 1..=3 {
            let g = ElementaryAbelian { p: 3, r };
            let c = chain_ce(&g, &g.basis(), 3).unwrap();
            assert_eq!(boundary(&c), tau_sum(&g, &g.basis(), 3).unwrap(), "r = {r}");
            assert!(boundary(&boundary(&c)).is_zero());
        }
    }
}
