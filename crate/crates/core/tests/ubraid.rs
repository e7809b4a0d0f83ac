//! Unitary permutation braids: weighted sums, faithfulness on the torus,
//! the no-squares step and its involutive variant, checked both through the
//! library reports and against oracles written here from scratch.

use std::collections::{HashMap, HashSet};

use qsphere::field::BraidScalars;
use qsphere::ubraid::{
    centre_twisted_uniqueness, check_adjacency_transfer, check_faithful_on_torus,
    check_no_squares, check_normal_form_profiles, check_weighted_sums, enumerate_sun, StepMode,
};
use qsphere::{Elem, Field, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [u64; 2] = [4, 9];

fn inversions(w: &[usize]) -> usize {
    (0..w.len())
        .flat_map(|i| (i + 1..w.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i] > w[j])
        .count()
}

/// `S_n^U` built by walking up the weak order: `x_{w s_i} = x_w x_i` when
/// the length grows. Keys are 0-based one-line permutations.
fn braids_by_walk(f: &Field, xs: &[Mat], n: usize) -> HashMap<Vec<usize>, Mat> {
    let mut out = HashMap::new();
    let start: Vec<usize> = (0..n).collect();
    out.insert(start.clone(), Mat::identity(f, n));
    let mut frontier = vec![start];
    while let Some(w) = frontier.pop() {
        let m = out[&w].clone();
        for i in 0..n - 1 {
            if w[i] < w[i + 1] {
                let mut v = w.clone();
                v.swap(i, i + 1);
                if !out.contains_key(&v) {
                    out.insert(v.clone(), m.mul(f, &xs[i]));
                    frontier.push(v);
                }
            }
        }
    }
    out
}

fn setup(n: usize, q: u64) -> (Field, BraidScalars, Vec<Mat>) {
    let f = Field::quadratic_over(q).unwrap();
    let sc = BraidScalars::select(&f).unwrap();
    let xs = (1..n)
        .map(|i| qsphere::group::make_xi(&f, n, i, &sc).unwrap())
        .collect();
    (f, sc, xs)
}

fn column_eta(f: &Field, eta: Elem, n: usize) -> Vec<Elem> {
    (1..=n as i64).map(|j| f.pow(eta, j)).collect()
}

fn row_eta(f: &Field, eta: Elem, n: usize) -> Vec<Elem> {
    let m = f.neg(eta);
    (1..=n as i64).map(|i| f.pow(m, -i)).collect()
}

/// Row sums equal one iff `x` fixes `(η, η², …)`, column sums iff the row
/// vector `((-η)^{-1}, (-η)^{-2}, …)` is fixed on the left.
fn fixes_weight_vectors(f: &Field, eta: Elem, x: &Mat) -> bool {
    let n = x.n;
    let c = column_eta(f, eta, n);
    let r = row_eta(f, eta, n);
    x.apply(f, &c) == c && x.transpose().apply(f, &r) == r
}

#[test]
fn walk_agrees_with_normal_form_table() {
    for q in FIELDS {
        for n in 2..=5 {
            let (f, sc, xs) = setup(n, q);
            let table = enumerate_sun(&f, n, &sc).unwrap();
            let walk = braids_by_walk(&f, &xs, n);
            assert_eq!(walk.len(), table.len());
            assert_eq!(table.distinct_matrices(), table.len(), "ψ∘ρ not injective");
            for b in &table.braids {
                let key: Vec<usize> = b.perm.images().to_vec();
                assert_eq!(walk[&key], b.mat, "n={n} q={q} w={:?}", b.perm);
                assert_eq!(inversions(&key), b.len);
            }
        }
    }
}

#[test]
fn weighted_sums() {
    for q in FIELDS {
        let (f, sc, _) = setup(4, q);
        let table = enumerate_sun(&f, 4, &sc).unwrap();
        let report = check_weighted_sums(&table, 1000, 30, 0x5eed);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.cases_checked, 24 + 1000);
        for b in &table.braids {
            assert!(fixes_weight_vectors(&f, sc.eta, &b.mat));
        }
    }
    // Independent random words in x_i^{±1}, several ranks.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in FIELDS {
        for n in 3..=5 {
            let (f, sc, xs) = setup(n, q);
            let inv: Vec<Mat> = xs.iter().map(|x| x.inverse(&f).unwrap()).collect();
            for _ in 0..1000 / 3 {
                let len = rng.gen_range(0..40);
                let m = (0..len).fold(Mat::identity(&f, n), |m, _| {
                    let i = rng.gen_range(0..n - 1);
                    m.mul(&f, if rng.gen_bool(0.5) { &xs[i] } else { &inv[i] })
                });
                assert!(fixes_weight_vectors(&f, sc.eta, &m));
            }
        }
    }
}

/// Canonical form of the coset `x·(monomial)`: normalise each column so its
/// first non-zero entry is 1, then sort the columns.
fn monomial_coset_key(f: &Field, x: &Mat) -> Vec<Vec<Elem>> {
    let n = x.n;
    let mut cols: Vec<Vec<Elem>> = (0..n)
        .map(|c| {
            let col: Vec<Elem> = (0..n).map(|r| x.get(r, c)).collect();
            let lead = *col.iter().find(|e| !e.is_zero()).unwrap();
            let li = f.inv(lead);
            col.iter().map(|&e| f.mul(li, e)).collect()
        })
        .collect();
    cols.sort();
    cols
}

#[test]
fn faithful_on_torus() {
    for q in FIELDS {
        for n in 2..=4 {
            let (f, sc, _) = setup(n, q);
            let table = enumerate_sun(&f, n, &sc).unwrap();
            let report = check_faithful_on_torus(&table);
            assert!(report.passed(), "{:?}", report.failures);
            assert_eq!(report.cases_checked, table.len() * table.len());
            let keys: HashSet<_> = table.braids.iter().map(|b| monomial_coset_key(&f, &b.mat)).collect();
            assert_eq!(keys.len(), table.len(), "two braids share a monomial coset");
        }
    }
}

#[test]
fn no_squares_strict_and_involutive() {
    for (q, mode) in [(9u64, StepMode::Strict), (4, StepMode::Involutive)] {
        for n in 2..=4 {
            let (f, sc, xs) = setup(n, q);
            assert_eq!(StepMode::for_field(&f), mode);
            let table = enumerate_sun(&f, n, &sc).unwrap();
            let report = check_no_squares(&table, mode);
            assert!(report.passed(), "{:?}", report.failures);
            assert_eq!(report.cases_checked, table.len() * (n - 1));

            let walk = braids_by_walk(&f, &xs, n);
            let by_mat: HashMap<&Mat, &Vec<usize>> = walk.iter().map(|(w, m)| (m, w)).collect();
            for (w, x) in &walk {
                for i in 0..n - 1 {
                    let up = x.mul(&f, &xs[i]);
                    let down = x.mul(&f, &xs[i].inverse(&f).unwrap());
                    let hits: Vec<(i64, &Vec<usize>)> = [(1, &up), (-1, &down)]
                        .into_iter()
                        .filter_map(|(e, m)| by_mat.get(m).map(|v| (e, *v)))
                        .collect();
                    let mut ws = w.clone();
                    ws.swap(i, i + 1);
                    match mode {
                        StepMode::Strict => {
                            assert_eq!(hits.len(), 1, "w={w:?} i={}", i + 1);
                            let (eps, v) = hits[0];
                            assert_eq!(*v, ws);
                            assert_eq!(inversions(v) as i64 - inversions(w) as i64, eps);
                        }
                        StepMode::Involutive => {
                            assert_eq!(up, down);
                            assert_eq!(by_mat.get(&up), Some(&&ws));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn structural_companions() {
    for q in FIELDS {
        for n in 2..=4 {
            let (f, sc, _) = setup(n, q);
            let table = enumerate_sun(&f, n, &sc).unwrap();
            for report in [
                check_normal_form_profiles(&table),
                check_adjacency_transfer(&table),
                centre_twisted_uniqueness(&table).unwrap(),
            ] {
                assert!(report.passed(), "{} at n={n} q={q}: {:?}", report.theorem, report.failures);
                assert!(report.cases_checked > 0);
            }
        }
    }
}

#[test]
fn corrupted_braid_is_caught() {
    let (f, sc, _) = setup(3, 9);
    let mut table = enumerate_sun(&f, 3, &sc).unwrap();
    let k = table.braids.iter().position(|b| b.len == 2).unwrap();
    let m = &mut table.braids[k].mat;
    let e = m.get(0, 0);
    m.set(0, 0, f.add(e, f.one()));
    assert!(!check_weighted_sums(&table, 0, 0, 1).passed());
    assert!(!check_normal_form_profiles(&table).passed());
}
