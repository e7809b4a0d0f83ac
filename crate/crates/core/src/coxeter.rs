//! Symmetric-group combinatorics: lengths, reduced words, finishing sets and
//! the normal form `w = w_1 w_2 ⋯ w_{n-1}` with `w_i = s_i s_{i-1} ⋯ s_k`.
//!
//! Permutations compose as functions, `(v w)(j) = v(w(j))`, so right
//! multiplication by `s_i` swaps the one-line entries at positions `i, i+1`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Permutation of `{1..n}`, stored 0-based in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_line(&v).ok_or_else(|| serde::de::Error::custom("not a permutation"))
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            img: (0..n).collect(),
        }
    }

    /// From 1-based one-line notation `[w(1), ..., w(n)]`.
    pub fn from_one_line(v: &[usize]) -> Option<Permutation> {
        let n = v.len();
        let mut seen = vec![false; n];
        for &x in v {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(Permutation {
            img: v.iter().map(|&x| x - 1).collect(),
        })
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x + 1).collect()
    }

    /// The simple transposition `s_i = (i, i+1)`, `1 <= i < n`.
    pub fn simple(n: usize, i: usize) -> Permutation {
        assert!(i >= 1 && i < n, "s_{i} is not a generator of S_{n}");
        let mut p = Permutation::identity(n);
        p.img.swap(i - 1, i);
        p
    }

    pub fn n(&self) -> usize {
        self.img.len()
    }

    /// `w(j)` with 1-based argument and value.
    pub fn apply(&self, j: usize) -> usize {
        self.img[j - 1] + 1
    }

    /// 0-based image table.
    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            img: other.img.iter().map(|&j| self.img[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = vec![0; self.n()];
        for (j, &w) in self.img.iter().enumerate() {
            img[w] = j;
        }
        Permutation { img }
    }

    /// `w s_i`.
    pub fn mul_simple(&self, i: usize) -> Permutation {
        let mut p = self.clone();
        p.img.swap(i - 1, i);
        p
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &w)| i == w)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.img[i] > self.img[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `F(w) = {i : w(i) > w(i+1)}`, 1-based.
    pub fn finishing_set(&self) -> Vec<usize> {
        (1..self.n())
            .filter(|&i| self.img[i - 1] > self.img[i])
            .collect()
    }

    /// All permutations of `{1..n}` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { img: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    pub fn longest(n: usize) -> Permutation {
        Permutation {
            img: (0..n).rev().collect(),
        }
    }
}

/// Positive braid word; letters are generator indices in `1..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<usize>) -> BraidWord {
        assert!(letters.iter().all(|&i| i >= 1 && i < n), "letter out of range");
        BraidWord { n, letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Underlying permutation `s_{i_1} ⋯ s_{i_r}`.
pub fn pi(word: &BraidWord) -> Permutation {
    word.letters
        .iter()
        .fold(Permutation::identity(word.n), |w, &i| w.mul_simple(i))
}

pub fn is_reduced(word: &BraidWord) -> bool {
    pi(word).length() == word.len()
}

/// Segments `w_1, ..., w_{n-1}` of the normal form; segment `i` is the
/// letter list `[i, i-1, ..., k]` (empty when `w_i = 1`).
pub fn sn_normal_form(w: &Permutation) -> Vec<Vec<usize>> {
    let n = w.n();
    let mut segments = vec![Vec::new(); n.saturating_sub(1)];
    let mut v = w.clone();
    for i in (1..n).rev() {
        // v fixes i+2..n; the segment c = s_i ⋯ s_k sends k to i+1, so k = v⁻¹(i+1).
        let k = v.img.iter().position(|&x| x == i).unwrap() + 1;
        if k <= i {
            let seg: Vec<usize> = (k..=i).rev().collect();
            let c = pi(&BraidWord::new(n, seg.clone()));
            v = v.compose(&c.inverse());
            segments[i - 1] = seg;
        }
    }
    debug_assert!(v.is_identity());
    segments
}

/// The normal-form word of `w`; reduced, so `ρ` is well defined.
pub fn rho(w: &Permutation) -> BraidWord {
    BraidWord::new(w.n(), sn_normal_form(w).concat())
}

/// `w' = w s_i`; such pairs are adjacent chambers of the Coxeter complex.
pub fn coxeter_adjacent(w: &Permutation, w2: &Permutation, i: usize) -> bool {
    i >= 1 && i < w.n() && *w2 == w.mul_simple(i)
}

/// `(w, m) -> w({1..m})` as a sorted 1-based set; the corners of chamber `w`.
pub fn corner_subset(w: &Permutation, m: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (1..=m).map(|j| w.apply(j)).collect();
    s.sort_unstable();
    s
}
