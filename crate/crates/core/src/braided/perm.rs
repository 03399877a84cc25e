//! Permutations, reduced words and shuffles.
//!
//! A permutation is stored as its array of images on 0-based positions: the
//! letter sitting at position `k` is moved to position `σ(k)`. Products
//! compose right to left, `(στ)(k) = σ(τ(k))`.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Validates that `images` is a bijection of `0..len`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Simple transposition `s_j` (1-based, swaps positions `j` and `j+1`).
    pub fn simple(n: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(j - 1, j);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (k, &s) in self.0.iter().enumerate() {
            inv[s] = k;
        }
        Perm(inv)
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        let mut n = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    n += 1;
                }
            }
        }
        n
    }

    /// All permutations of `0..n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur = Self::identity(n).0;
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// A braid word on `strands` strands; letter `±i` is `τ_i^{±1}` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Option<Self> {
        let ok = letters.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) < strands);
        ok.then_some(BraidWord { strands, letters })
    }

    /// The permutation underlying a positive or mixed word.
    pub fn permutation(&self) -> Perm {
        let mut p = Perm::identity(self.strands);
        for &l in &self.letters {
            p = p.compose(&Perm::simple(self.strands, l.unsigned_abs() as usize));
        }
        p
    }
}

/// Positive braid word along a reduced decomposition of `sigma`.
///
/// Deterministic rule: repeatedly strip the smallest right descent, which
/// writes `σ = (σ s_j) s_j` with `l(σ s_j) = l(σ) − 1`.
pub fn matsumoto_lift(sigma: &Perm) -> BraidWord {
    let n = sigma.len();
    let mut cur = sigma.0.clone();
    let mut rev = Vec::new();
    while let Some(j) = (0..n.saturating_sub(1)).find(|&j| cur[j] > cur[j + 1]) {
        cur.swap(j, j + 1);
        rev.push(j as i32 + 1);
    }
    rev.reverse();
    BraidWord { strands: n, letters: rev }
}

/// All `(p,q)`-shuffles with their lengths, ordered lexicographically by the
/// image set `{σ(0) < ⋯ < σ(p−1)}`.
pub fn shuffles(p: usize, q: usize) -> Vec<(Perm, usize)> {
    let n = p + q;
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..p).collect();
    loop {
        let mut images = Vec::with_capacity(n);
        images.extend_from_slice(&subset);
        let mut len = 0;
        let mut k = 0;
        for pos in 0..n {
            if k < p && subset[k] == pos {
                k += 1;
            } else {
                images.push(pos);
                // every chosen element above `pos` is an inversion with it
                len += p - k;
            }
        }
        out.push((Perm(images), len));
        // next p-subset in lexicographic order
        let Some(i) = (0..p).rev().find(|&i| subset[i] < n - p + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..p {
            subset[j] = subset[j - 1] + 1;
        }
    }
    out
}
