//! Brute-force ground truth: group closure, the poset of elementary abelian
//! `p`-subgroups, `p`-rank, reduced homology of the order complex, and
//! certification of top-dimensional classes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{boundary, span, Chain, Simplex, Subgroup};
use crate::field::{BraidScalars, Elem, Field};
use crate::group::{make_xi, x_block, AmbientGroup, AmbientKind, Group, GroupElement, GroupError, Mat};

/// Default closure cap, in elements.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("closure exceeded the cap of {cap} elements (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("chain has dimension {got}, top dimension is {expected}")]
    DimensionMismatch { got: isize, expected: isize },
    #[error("simplex count {count} exceeds the guard {guard}")]
    TooLarge { count: usize, guard: usize },
    #[error("centralizer scan needs PGU_2(q)⟨Φ⟩, got {0}")]
    WrongAmbient(String),
}

/// Closed subset of an ambient group, as sorted keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedGroup {
    pub keys: Vec<u128>,
    pub generators: usize,
}

impl EnumeratedGroup {
    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn contains(&self, k: u128) -> bool {
        self.keys.binary_search(&k).is_ok()
    }
}

/// Breadth-first closure of `gens` under right multiplication.
pub fn enumerate_group<G: Group>(g: &G, gens: &[G::Elem], cap: usize) -> Result<EnumeratedGroup, OracleError> {
    let id = g.identity();
    let mut seen: HashSet<u128> = HashSet::from([g.key(&id)]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<(u128, G::Elem)> = frontier
            .par_iter()
            .flat_map_iter(|x| {
                gens.iter().map(move |s| {
                    let y = g.mul(x, s);
                    (g.key(&y), y)
                })
            })
            .collect();
        frontier = Vec::new();
        for (k, y) in products {
            if seen.insert(k) {
                frontier.push(y);
            }
        }
        if seen.len() > cap {
            return Err(OracleError::CapExceeded {
                cap,
                reached: seen.len(),
            });
        }
    }
    let mut keys: Vec<u128> = seen.into_iter().collect();
    keys.sort_unstable();
    Ok(EnumeratedGroup {
        keys,
        generators: gens.len(),
    })
}

/// The braid generators `x_i`, the torus blocks `diag(t, conj t)` for `t`
/// of order `q + 1`, and one block `[[α, β], [-conj β, conj α]]` with the
/// first `α, β` (encoding order) that are non-zero with `α ∉ F_q`. Callers
/// confirm the generated order against [`su_order`].
pub fn su_generators(f: &Field, n: usize, sc: &BraidScalars) -> Result<Vec<Mat>, GroupError> {
    let q = f.q()?;
    let t = f.first_of_order(q + 1)?;
    let one = f.one();
    let (a, b) = f
        .elements()
        .filter(|&a| !a.is_zero() && f.bar(a) != a)
        .find_map(|a| {
            let na = f.norm(a).ok()?;
            f.elements()
                .find(|&b| !b.is_zero() && f.norm(b).is_ok_and(|nb| f.add(na, nb) == one))
                .map(|b| (a, b))
        })
        .ok_or(GroupError::NotOnUnitCircle)?;
    let mut gens = Vec::with_capacity(3 * (n - 1));
    for i in 1..n {
        gens.push(make_xi(f, n, i, sc)?);
        gens.push(x_block(f, n, i, t, Elem::ZERO)?);
        gens.push(x_block(f, n, i, a, b)?);
    }
    Ok(gens)
}

/// `|SU_n(q)| = q^{n(n-1)/2} ∏_{i=2}^{n} (q^i - (-1)^i)`.
pub fn su_order(n: u32, q: u64) -> u128 {
    let q = q as i128;
    let mut order = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        order *= q.pow(i) - if i % 2 == 0 { 1 } else { -1 };
    }
    order as u128
}

/// Generators of the whole ambient group: [`su_generators`], plus a
/// scalar-free diagonal of determinant `ω` (order `q + 1`) for GU and PGU,
/// plus `Φ` when present.
pub fn ambient_generators(g: &AmbientGroup) -> Result<Vec<GroupElement>, GroupError> {
    let f = &g.field;
    let sc = BraidScalars::select(f)?;
    let mut gens: Vec<GroupElement> = su_generators(f, g.n, &sc)?.iter().map(|m| g.element(m)).collect();
    if matches!(g.kind, AmbientKind::GU | AmbientKind::PGU | AmbientKind::PGUPhi) {
        let w = f.first_of_order(f.q()? + 1)?;
        let mut d = vec![f.one(); g.n];
        d[0] = w;
        gens.push(g.element(&Mat::diag(&d)));
    }
    if g.kind == AmbientKind::PGUPhi {
        gens.push(g.phi());
    }
    Ok(gens)
}

/// Order of the ambient group from the closed formulas.
pub fn ambient_order(g: &AmbientGroup) -> Result<u128, GroupError> {
    let q = g.field.q()?;
    let su = su_order(g.n as u32, q);
    Ok(match g.kind {
        AmbientKind::SU | AmbientKind::PGU => su,
        AmbientKind::PSU => su / (g.n as u128).gcd(&(q as u128 + 1)),
        AmbientKind::GU => su * (q as u128 + 1),
        AmbientKind::PGUPhi => su * g.phi_order as u128,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetNode {
    pub keys: Subgroup,
    pub rank: usize,
}

/// Non-trivial elementary abelian `p`-subgroups ordered by inclusion.
#[derive(Clone, Debug)]
pub struct ApPoset {
    pub p: u64,
    pub nodes: Vec<PosetNode>,
    /// `below[k]`: indices of the nodes strictly contained in node `k`.
    pub below: Vec<Vec<usize>>,
    index: HashMap<Subgroup, usize>,
}

impl ApPoset {
    pub fn p_rank(&self) -> usize {
        self.nodes.iter().map(|n| n.rank).max().unwrap_or(0)
    }

    pub fn count_of_rank(&self, r: usize) -> usize {
        self.nodes.iter().filter(|n| n.rank == r).count()
    }

    pub fn node_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Whether `s` is a strictly increasing chain of poset nodes.
    pub fn is_chain(&self, s: &Simplex) -> bool {
        let ids: Option<Vec<usize>> = s.iter().map(|v| self.node_of(v)).collect();
        let Some(ids) = ids else {
            return false;
        };
        ids.windows(2).all(|w| self.below[w[1]].contains(&w[0]))
    }

    /// All chains with `k + 1` elements (the `k`-simplices), smallest first.
    pub fn simplices(&self, k: usize, guard: usize) -> Result<Vec<Vec<usize>>, OracleError> {
        let mut level: Vec<Vec<usize>> = (0..self.nodes.len()).map(|v| vec![v]).collect();
        for _ in 0..k {
            let mut next = Vec::new();
            for c in &level {
                let top = *c.last().expect("non-empty");
                for (v, below) in self.below.iter().enumerate() {
                    if below.contains(&top) {
                        let mut d = c.clone();
                        d.push(v);
                        next.push(d);
                    }
                }
                if next.len() > guard {
                    return Err(OracleError::TooLarge {
                        count: next.len(),
                        guard,
                    });
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Nodes with ranks and the covering relation.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| serde_json::json!({"id": id, "rank": n.rank, "order": n.keys.len()}))
            .collect();
        let edges: Vec<_> = self
            .below
            .iter()
            .enumerate()
            .flat_map(|(hi, lows)| {
                lows.iter()
                    .filter(move |&&lo| self.nodes[lo].rank + 1 == self.nodes[hi].rank)
                    .map(move |&lo| [lo, hi])
            })
            .collect();
        serde_json::json!({"p": self.p, "nodes": nodes, "covers": edges})
    }
}

/// Elements of order exactly `p`, then their cyclic subgroups, then
/// commuting joins one rank at a time.
pub fn enumerate_ap<G: Group>(g: &G, group: &EnumeratedGroup, p: u64) -> ApPoset {
    let order_p: Vec<u128> = group
        .keys
        .par_iter()
        .copied()
        .filter(|&k| {
            let x = g.from_key(k);
            !g.is_identity(&x) && g.is_identity(&g.pow(&x, p))
        })
        .collect();
    // Cyclic subgroups, each with one generator.
    let mut cyclic: BTreeMap<Vec<u128>, G::Elem> = BTreeMap::new();
    for &k in &order_p {
        let x = g.from_key(k);
        let mut keys: Vec<u128> = span(g, std::slice::from_ref(&x), p).iter().map(|y| g.key(y)).collect();
        keys.sort_unstable();
        cyclic.entry(keys).or_insert(x);
    }
    let cyc: Vec<(Vec<u128>, G::Elem)> = cyclic.into_iter().collect();
    let commuting: Vec<Vec<usize>> = (0..cyc.len())
        .into_par_iter()
        .map(|a| {
            (0..cyc.len())
                .filter(|&b| b != a && g.commute(&cyc[a].1, &cyc[b].1))
                .collect()
        })
        .collect();

    let mut nodes: Vec<PosetNode> = Vec::new();
    let mut gens_of: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Subgroup, usize> = HashMap::new();
    for (a, (keys, _)) in cyc.iter().enumerate() {
        let s: Subgroup = Arc::new(keys.clone());
        index.insert(s.clone(), nodes.len());
        nodes.push(PosetNode { keys: s, rank: 1 });
        gens_of.push(vec![a]);
    }
    let mut layer: Vec<usize> = (0..nodes.len()).collect();
    let mut rank = 1;
    while !layer.is_empty() {
        rank += 1;
        let mut next = Vec::new();
        for &v in &layer {
            let gens = gens_of[v].clone();
            let members: HashSet<u128> = nodes[v].keys.iter().copied().collect();
            let candidates: BTreeSet<usize> = commuting[gens[0]]
                .iter()
                .copied()
                .filter(|c| gens[1..].iter().all(|gg| commuting[*gg].contains(c)))
                .filter(|&c| !members.contains(&g.key(&cyc[c].1)))
                .collect();
            for c in candidates {
                let mut elems: Vec<G::Elem> = gens.iter().map(|&k| cyc[k].1.clone()).collect();
                elems.push(cyc[c].1.clone());
                let mut keys: Vec<u128> = span(g, &elems, p).iter().map(|y| g.key(y)).collect();
                keys.sort_unstable();
                let s: Subgroup = Arc::new(keys);
                if !index.contains_key(&s) {
                    index.insert(s.clone(), nodes.len());
                    nodes.push(PosetNode { keys: s, rank });
                    let mut ng = gens.clone();
                    ng.push(c);
                    gens_of.push(ng);
                    next.push(nodes.len() - 1);
                }
            }
        }
        layer = next;
    }

    let sets: Vec<HashSet<u128>> = nodes.iter().map(|n| n.keys.iter().copied().collect()).collect();
    let below: Vec<Vec<usize>> = (0..nodes.len())
        .into_par_iter()
        .map(|hi| {
            (0..nodes.len())
                .filter(|&lo| nodes[lo].rank < nodes[hi].rank && nodes[lo].keys.iter().all(|k| sets[hi].contains(k)))
                .collect()
        })
        .collect();
    ApPoset {
        p,
        nodes,
        below,
        index,
    }
}

pub fn p_rank(poset: &ApPoset) -> usize {
    poset.p_rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopClassVerdict {
    /// A non-zero cycle in top dimension, hence a non-zero class.
    NonzeroClass { dimension: usize, support: usize },
    ZeroChain,
    NotACycle { boundary_support: usize },
    /// Some simplex is not a chain of the poset.
    ForeignSimplex,
}

/// A non-zero cycle of dimension `rk_p - 1` cannot be a boundary: there
/// are no simplices one dimension up.
pub fn certify_top_class(chain: &Chain, poset: &ApPoset) -> Result<TopClassVerdict, OracleError> {
    let top = poset.p_rank() as isize - 1;
    let Some(dim) = chain.dim() else {
        return Ok(TopClassVerdict::ZeroChain);
    };
    if dim != top {
        return Err(OracleError::DimensionMismatch { got: dim, expected: top });
    }
    if !chain.coeffs.keys().all(|s| poset.is_chain(s)) {
        return Ok(TopClassVerdict::ForeignSimplex);
    }
    let d = boundary(chain);
    if !d.is_zero() {
        return Ok(TopClassVerdict::NotACycle {
            boundary_support: d.len(),
        });
    }
    Ok(TopClassVerdict::NonzeroClass {
        dimension: top as usize,
        support: chain.len(),
    })
}

type SparseRow = Vec<(usize, BigInt)>;

fn content(row: &SparseRow) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v))
}

/// `a·x - b·y` on sorted sparse rows.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, a * vx)
            }
            (Some((cx, _)), Some((cy, vy))) if cy < cx => {
                j += 1;
                (*cy, -(b * vy))
            }
            (Some((cx, vx)), Some((_, vy))) => {
                i += 1;
                j += 1;
                (*cx, a * vx - b * vy)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, a * vx)
            }
            (None, Some((cy, vy))) => {
                j += 1;
                (*cy, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Exact rank over `Q` by fraction-free elimination on sparse rows, with
/// every reduced row divided by its content.
pub fn exact_rank(rows: Vec<SparseRow>) -> usize {
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for mut row in rows {
        row.sort_by_key(|e| e.0);
        row.retain(|e| !e.1.is_zero());
        while let Some((lead, b)) = row.first().cloned() {
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let a = p[0].1.clone();
                    let g = a.gcd(&b);
                    row = combine(&(&a / &g), &row, &(&b / &g), p);
                    let c = content(&row);
                    if !c.is_zero() && !c.is_one() {
                        for e in row.iter_mut() {
                            e.1 /= &c;
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

/// Non-zero invariant factors of an integer matrix given as sparse rows.
///
/// Unit entries are pivoted away first; what remains is reduced densely.
pub fn smith_invariants(rows: Vec<SparseRow>, ncols: usize, dense_guard: usize) -> Result<Vec<BigInt>, OracleError> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|e| !e.1.is_zero()).collect())
        .collect();
    let mut factors = Vec::new();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }
    let mut alive: BTreeSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    loop {
        let pivot = alive.iter().find_map(|&i| {
            rows[i]
                .iter()
                .find(|(_, v)| v.abs().is_one())
                .map(|(&c, v)| (i, c, v.clone()))
        });
        let Some((pi, pc, pv)) = pivot else {
            break;
        };
        let prow = std::mem::take(&mut rows[pi]);
        alive.remove(&pi);
        for &c in prow.keys() {
            col_rows[c].remove(&pi);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for oi in others {
            // row_o -= (a / pv) · pivot row, exact since pv is a unit.
            let factor = &rows[oi][&pc] * &pv;
            for (&c, v) in &prow {
                let entry = rows[oi].entry(c).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[oi].remove(&c);
                    col_rows[c].remove(&oi);
                } else {
                    col_rows[c].insert(oi);
                }
            }
            if rows[oi].is_empty() {
                alive.remove(&oi);
            }
        }
        // Column operations now clear the pivot row without touching others.
        factors.push(BigInt::one());
    }
    let rest: Vec<&BTreeMap<usize, BigInt>> = alive.iter().map(|&i| &rows[i]).collect();
    if rest.is_empty() {
        return Ok(factors);
    }
    let cols: Vec<usize> = rest.iter().flat_map(|r| r.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    if rest.len() * cols.len() > dense_guard {
        return Err(OracleError::TooLarge {
            count: rest.len() * cols.len(),
            guard: dense_guard,
        });
    }
    let cpos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut m: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); cols.len()];
            for (c, x) in r.iter() {
                v[cpos[c]] = x.clone();
            }
            v
        })
        .collect();
    factors.extend(dense_smith(&mut m));
    Ok(factors)
}

fn dense_smith(m: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest non-zero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                for j in t..cols {
                    let d = &q * &m[t][j];
                    m[i][j] -= d;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for row in m.iter_mut().take(rows).skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot into row t.
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
        if let Some(i) = bad {
            for j in t..cols {
                let v = m[i][j].clone();
                m[t][j] += v;
            }
            continue;
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Rationals,
    Integers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiResult {
    pub degree: usize,
    pub rank: usize,
    /// Torsion coefficients of `H̃_k(·; Z)` (integer mode only).
    pub torsion: Vec<String>,
}

fn boundary_rows(poset: &ApPoset, k: usize, guard: usize) -> Result<(Vec<SparseRow>, usize, usize), OracleError> {
    // Rows indexed by k-simplices, columns by (k-1)-simplices (augmentation when k = 0).
    let top = poset.simplices(k, guard)?;
    if k == 0 {
        let rows = top.iter().map(|_| vec![(0, BigInt::one())]).collect();
        return Ok((rows, top.len(), 1));
    }
    let faces = poset.simplices(k - 1, guard)?;
    let index: HashMap<&Vec<usize>, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let rows = top
        .iter()
        .map(|s| {
            let mut row: SparseRow = (0..s.len())
                .map(|j| {
                    let mut f = s.clone();
                    f.remove(j);
                    let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    (index[&f], sign)
                })
                .collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();
    Ok((rows, top.len(), faces.len()))
}

/// Reduced Betti number `rank H̃_k` of the order complex.
pub fn betti(poset: &ApPoset, k: usize, mode: Coefficients, guard: usize) -> Result<BettiResult, OracleError> {
    let (dk, ck, _) = boundary_rows(poset, k, guard)?;
    let rank_k = exact_rank(dk);
    let (dk1, _, ncols) = boundary_rows(poset, k + 1, guard)?;
    let torsion = match mode {
        Coefficients::Rationals => Vec::new(),
        Coefficients::Integers => smith_invariants(dk1.clone(), ncols, guard)?
            .into_iter()
            .filter(|f| !f.is_one())
            .map(|f| f.to_string())
            .collect(),
    };
    let rank_k1 = exact_rank(dk1);
    Ok(BettiResult {
        degree: k,
        rank: ck - rank_k - rank_k1,
        torsion,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerScan {
    pub elements_scanned: u64,
    pub centralizer_order: u64,
    /// Elements of order `p` centralising `E` that lie outside `E`.
    pub extra_order_p: u64,
}

/// Scans every element of `PGU_2(q)⟨Φ⟩`, counting the centraliser of `E`
/// and the order-`p` elements in it outside `E`.
///
/// The projective classes are listed directly: `[[1, b], [-d·conj(b), d]]`
/// with `N(d) = 1`, `N(b) != -1`, and `[[0, 1], [c, 0]]` with `N(c) = 1`.
pub fn centralizer_scan_pgu2_phi(
    group: &AmbientGroup,
    e_gens: &[GroupElement],
    p: u64,
) -> Result<CentralizerScan, OracleError> {
    if group.kind != AmbientKind::PGUPhi || group.n != 2 {
        return Err(OracleError::WrongAmbient(format!("{:?} of degree {}", group.kind, group.n)));
    }
    let f = &group.field;
    let q = f.q().expect("even degree") as i64;
    let one = f.one();
    let minus_one = f.neg(one);
    let circle: Vec<Elem> = f.elements().skip(1).filter(|&c| f.pow(c, q + 1) == one).collect();
    let e_keys: HashSet<u128> = span(group, e_gens, p).iter().map(|x| group.key(x)).collect();
    let mut mats: Vec<Mat> = circle
        .iter()
        .map(|&c| Mat::from_rows(&[vec![Elem::ZERO, one], vec![c, Elem::ZERO]]))
        .collect();
    let bs: Vec<Elem> = f.elements().filter(|&b| f.mul(b, f.bar(b)) != minus_one).collect();
    let results: Vec<(u64, u64, u64)> = bs
        .par_iter()
        .map(|&b| {
            let mut acc = (0u64, 0u64, 0u64);
            for &d in &circle {
                let m = Mat::from_rows(&[vec![one, b], vec![f.neg(f.mul(d, f.bar(b))), d]]);
                for k in 0..group.phi_order {
                    let x = group.element_with_phi(&m, k);
                    acc.0 += 1;
                    if e_gens.iter().all(|e| group.commute(&x, e)) {
                        acc.1 += 1;
                        if !group.is_identity(&x)
                            && group.is_identity(&group.pow(&x, p))
                            && !e_keys.contains(&group.key(&x))
                        {
                            acc.2 += 1;
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut scan = CentralizerScan {
        elements_scanned: 0,
        centralizer_order: 0,
        extra_order_p: 0,
    };
    for (a, b, c) in results {
        scan.elements_scanned += a;
        scan.centralizer_order += b;
        scan.extra_order_p += c;
    }
    for m in mats.drain(..) {
        for k in 0..group.phi_order {
            let x = group.element_with_phi(&m, k);
            scan.elements_scanned += 1;
            if e_gens.iter().all(|e| group.commute(&x, e)) {
                scan.centralizer_order += 1;
                if !group.is_identity(&x) && group.is_identity(&group.pow(&x, p)) && !e_keys.contains(&group.key(&x)) {
                    scan.extra_order_p += 1;
                }
            }
        }
    }
    Ok(scan)
}

/// Outcome of the brute-force pass over a constructed sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SphereOracle {
    Completed {
        group_order: usize,
        expected_order: String,
        p_rank: usize,
        subgroups: usize,
        certificate: TopClassVerdict,
        top_homology: Option<BettiResult>,
        top_homology_note: Option<String>,
    },
    Skipped { reason: String },
}

impl SphereOracle {
    /// `true` when the group has its expected order, the chain sits in top
    /// dimension, and the class is certified non-zero.
    pub fn passed(&self) -> bool {
        match self {
            SphereOracle::Completed {
                group_order,
                expected_order,
                certificate,
                top_homology,
                ..
            } => {
                *expected_order == group_order.to_string()
                    && matches!(certificate, TopClassVerdict::NonzeroClass { .. })
                    && top_homology.as_ref().is_none_or(|b| b.rank >= 1 && b.torsion.is_empty())
            }
            SphereOracle::Skipped { .. } => true,
        }
    }
}

/// Enumerates the ambient group, its poset for `p`, certifies `chain`, and
/// cross-checks with integral top homology when the boundary matrices fit
/// under `guard` simplices.
pub fn sphere_oracle(g: &AmbientGroup, chain: &Chain, p: u64, cap: usize, guard: usize) -> Result<SphereOracle, OracleError> {
    let expected = ambient_order(g).map_err(|e| OracleError::WrongAmbient(e.to_string()))?;
    if expected > cap as u128 {
        return Ok(SphereOracle::Skipped {
            reason: format!("group order {expected} exceeds the enumeration cap {cap}"),
        });
    }
    let gens = ambient_generators(g).map_err(|e| OracleError::WrongAmbient(e.to_string()))?;
    let group = enumerate_group(g, &gens, cap)?;
    let poset = enumerate_ap(g, &group, p);
    let certificate = certify_top_class(chain, &poset)?;
    let top = poset.p_rank().saturating_sub(1);
    let (top_homology, top_homology_note) = match betti(&poset, top, Coefficients::Integers, guard) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SphereOracle::Completed {
        group_order: group.order(),
        expected_order: expected.to_string(),
        p_rank: poset.p_rank(),
        subgroups: poset.nodes.len(),
        certificate,
        top_homology,
        top_homology_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::ElementaryAbelian;

    #[test]
    fn z3_squared_poset() {
        let g = ElementaryAbelian { p: 3, r: 2 };
        let all = enumerate_group(&g, &g.basis(), 100).unwrap();
        assert_eq!(all.order(), 9);
        let poset = enumerate_ap(&g, &all, 3);
        assert_eq!(poset.count_of_rank(1), 4);
        assert_eq!(poset.count_of_rank(2), 1);
        assert_eq!(poset.p_rank(), 2);
        // a cone on the top vertex
        for k in 0..=1 {
            let b = betti(&poset, k, Coefficients::Integers, 10_000).unwrap();
            assert_eq!(b.rank, 0, "degree {k}");
            assert!(b.torsion.is_empty());
        }
    }

    #[test]
    fn cap_is_reported() {
        let g = ElementaryAbelian { p: 5, r: 3 };
        assert!(matches!(
            enumerate_group(&g, &g.basis(), 10),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn smith_finds_torsion() {
        let rows = vec![vec![(0, BigInt::from(2)), (1, BigInt::from(4))], vec![(0, BigInt::from(6)), (1, BigInt::from(8))]];
        let f = smith_invariants(rows, 2, 100).unwrap();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![(0, BigInt::from(2)), (1, BigInt::from(3))],
            vec![(0, BigInt::from(4)), (1, BigInt::from(6))],
            vec![(1, BigInt::from(5))],
        ];
        assert_eq!(exact_rank(rows), 2);
    }
}
