//! Braided vector spaces and the braid-group action on tensor powers.
//!
//! A basis of V^⊗n is indexed by length-n words over `0..d`, encoded
//! big-endian in base d. Every operator is a sparse column map.

mod perm;
pub mod presets;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use perm::{matsumoto_lift, shuffles, BraidWord, Perm};

use crate::error::{Error, Result};
use crate::linalg::{self, kernel_of_map, RrefBuilder, SVec, Scalar};
use crate::scalar::{is_regular_exact, CycloField};

pub const DEFAULT_BUDGET: usize = 8;

/// How a space was declared; kept for reports and fast paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Explicit,
    Diagonal(Vec<Vec<Scalar>>),
    Scalar(Scalar),
    Flip,
    Preset(String),
}

impl Kind {
    pub fn tag(&self) -> String {
        match self {
            Kind::Explicit => "explicit".into(),
            Kind::Diagonal(_) => "diagonal".into(),
            Kind::Scalar(_) => "scalar".into(),
            Kind::Flip => "flip".into(),
            Kind::Preset(p) => format!("preset:{p}"),
        }
    }
}

/// A vector of V^⊗n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub degree: usize,
    pub entries: SVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeInfo {
    pub mark: Scalar,
    pub regular: bool,
}

/// Memo keys for per-space operator caches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum MemoKey {
    Delta(usize, usize),
    Block(usize, usize),
}

struct Inner {
    field: &'static CycloField,
    dim: usize,
    budget: usize,
    kind: Kind,
    c: Vec<SVec>,
    c_inv: Vec<SVec>,
    min_poly: OnceLock<Vec<Scalar>>,
    memo: Mutex<HashMap<MemoKey, Arc<Vec<SVec>>>>,
}

/// A validated braided vector space; cheap to clone.
#[derive(Clone)]
pub struct BraidedSpace(Arc<Inner>);

impl std::fmt::Debug for BraidedSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BraidedSpace({}, d={}, {:?})", self.kind().tag(), self.dim(), self.field())
    }
}

pub fn pow_usize(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Letters of the word with index `w` and length `n`.
pub fn word_letters(d: usize, n: usize, mut w: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = w % d;
        w /= d;
    }
    out
}

pub fn word_index(d: usize, letters: &[usize]) -> usize {
    letters.iter().fold(0, |acc, &l| acc * d + l)
}

/// `x0x1x1`-style name of a basis word; `1` for the empty word.
pub fn word_name(d: usize, n: usize, w: usize) -> String {
    if n == 0 {
        return "1".into();
    }
    word_letters(d, n, w).iter().map(|l| format!("x{l}")).collect()
}

impl BraidedSpace {
    /// Builds a space from the columns of c on V⊗V (column `i*d+j` is
    /// `c(x_i⊗x_j)`), checking invertibility and the braid equation.
    pub fn new(
        field: &'static CycloField,
        dim: usize,
        c: Vec<SVec>,
        kind: Kind,
        budget: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadParams("dimension must be positive".into()));
        }
        let n2 = dim * dim;
        if c.len() != n2 || c.iter().flatten().any(|(i, _)| *i as usize >= n2) {
            return Err(Error::BadParams(format!("braiding must be a {n2}x{n2} matrix")));
        }
        if c.iter().flatten().any(|(_, v)| v.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let c_inv = invert(field, &c).ok_or(Error::SingularBraiding)?;
        let space = BraidedSpace(Arc::new(Inner {
            field,
            dim,
            budget,
            kind,
            c,
            c_inv,
            min_poly: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        }));
        if let Some(w) = space.ybe_witness() {
            return Err(Error::YBENotSatisfied(w));
        }
        Ok(space)
    }

    /// Builds c from a rule giving `c(x_i⊗x_j)` as `(k, l, coefficient)` terms
    /// meaning `coefficient · x_k⊗x_l`.
    pub fn from_rule(
        field: &'static CycloField,
        dim: usize,
        kind: Kind,
        budget: usize,
        rule: impl Fn(usize, usize) -> Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut cols = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let terms = rule(i, j)
                    .into_iter()
                    .map(|(k, l, v)| ((k * dim + l) as u32, v))
                    .collect();
                cols.push(linalg::collect_terms(terms));
            }
        }
        Self::new(field, dim, cols, kind, budget)
    }

    /// Same space with a different degree budget (caches are not shared).
    pub fn with_budget(&self, budget: usize) -> Self {
        BraidedSpace(Arc::new(Inner {
            field: self.0.field,
            dim: self.0.dim,
            budget,
            kind: self.0.kind.clone(),
            c: self.0.c.clone(),
            c_inv: self.0.c_inv.clone(),
            min_poly: self.0.min_poly.clone(),
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn field(&self) -> &'static CycloField {
        self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn budget(&self) -> usize {
        self.0.budget
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// `c(x_i⊗x_j)` as a vector of V⊗V.
    pub fn c_column(&self, i: usize, j: usize) -> &SVec {
        &self.0.c[i * self.0.dim + j]
    }

    pub fn c_columns(&self) -> &[SVec] {
        &self.0.c
    }

    pub fn c_inv_columns(&self) -> &[SVec] {
        &self.0.c_inv
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.0.budget {
            return Err(Error::DegreeBudgetExceeded { degree: n, budget: self.0.budget });
        }
        Ok(())
    }

    /// dim V^⊗n.
    pub fn words(&self, n: usize) -> usize {
        pow_usize(self.0.dim, n)
    }

    pub fn one(&self) -> Scalar {
        self.0.field.one()
    }

    pub(crate) fn memo_get(&self, key: MemoKey) -> Option<Arc<Vec<SVec>>> {
        self.0.memo.lock().unwrap().get(&key).cloned()
    }

    pub(crate) fn memo_put(&self, key: MemoKey, v: Vec<SVec>) -> Arc<Vec<SVec>> {
        let mut m = self.0.memo.lock().unwrap();
        m.entry(key).or_insert_with(|| Arc::new(v)).clone()
    }

    /// Applies `c_i^{±1}` (1-based `i`) to a vector of V^⊗n.
    pub fn apply_generator(&self, x: &[(u32, Scalar)], n: usize, i: usize, inverse: bool) -> SVec {
        debug_assert!(i >= 1 && i < n);
        let d = self.0.dim;
        let low = pow_usize(d, n - i - 1);
        let block = d * d;
        let mat = if inverse { &self.0.c_inv } else { &self.0.c };
        let mut terms = Vec::with_capacity(x.len() * 2);
        for (w, v) in x {
            let w = *w as usize;
            let mid = (w / low) % block;
            let base = w - mid * low;
            for (p, s) in &mat[mid] {
                terms.push(((base + *p as usize * low) as u32, s * v));
            }
        }
        linalg::collect_terms(terms)
    }

    /// `ρ(word)(x)`: the rightmost letter acts first.
    pub fn apply_letters(&self, x: &[(u32, Scalar)], n: usize, letters: &[i32]) -> SVec {
        let mut cur = x.to_vec();
        for &l in letters.iter().rev() {
            cur = self.apply_generator(&cur, n, l.unsigned_abs() as usize, l < 0);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    pub fn braid_apply(&self, word: &BraidWord, x: &TensorVector) -> Result<TensorVector> {
        if word.strands != x.degree {
            return Err(Error::DegreeMismatch { expected: word.strands, got: x.degree });
        }
        Ok(TensorVector { degree: x.degree, entries: self.apply_letters(&x.entries, x.degree, &word.letters) })
    }

    /// `ρ(ι(σ))` applied to `x`.
    pub fn apply_perm_lift(&self, sigma: &Perm, x: &[(u32, Scalar)]) -> SVec {
        self.apply_letters(x, sigma.len(), &matsumoto_lift(sigma).letters)
    }

    fn ybe_witness(&self) -> Option<(usize, usize, usize)> {
        let d = self.0.dim;
        let one = self.one();
        for w in 0..d * d * d {
            let e = vec![(w as u32, one.clone())];
            if self.apply_letters(&e, 3, &[1, 2, 1]) != self.apply_letters(&e, 3, &[2, 1, 2]) {
                let l = word_letters(d, 3, w);
                return Some((l[0], l[1], l[2]));
            }
        }
        None
    }

    /// Monic minimal polynomial of c, lowest coefficient first.
    pub fn min_poly(&self) -> &[Scalar] {
        self.0.min_poly.get_or_init(|| minimal_polynomial(self.0.field, &self.0.c))
    }

    /// The mark q when (c+1)(c−q) = 0.
    pub fn hecke(&self) -> Option<HeckeInfo> {
        let p = self.min_poly();
        let f = self.0.field;
        let mark = match p.len() {
            2 => p[0].neg(),
            3 => {
                // (X+1)(X−q) = X² + (1−q)X − q
                let q = p[0].neg();
                if p[1] != &f.one() - &q {
                    return None;
                }
                q
            }
            _ => return None,
        };
        Some(HeckeInfo { regular: is_regular_exact(&mark), mark })
    }

    /// The diagonal matrix `q` when c(x_i⊗x_j) = q_ij x_j⊗x_i.
    pub fn diagonal_matrix(&self) -> Option<Vec<Vec<Scalar>>> {
        let d = self.0.dim;
        let mut q = vec![vec![self.0.field.zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let col = self.c_column(i, j);
                if col.len() != 1 || col[0].0 as usize != j * d + i {
                    return None;
                }
                q[i][j] = col[0].1.clone();
            }
        }
        Some(q)
    }

    /// The block braiding V^⊗p ⊗ V^⊗q → V^⊗q ⊗ V^⊗p as columns over V^⊗(p+q),
    /// the lift of the permutation moving the first p strands past the last q.
    pub fn braiding_block(&self, p: usize, q: usize) -> Result<Arc<Vec<SVec>>> {
        self.check_degree(p + q)?;
        if let Some(m) = self.memo_get(MemoKey::Block(p, q)) {
            return Ok(m);
        }
        let chi = block_rotation(p, q);
        let letters = matsumoto_lift(&chi).letters;
        let n = p + q;
        let one = self.one();
        let cols = (0..self.words(n))
            .map(|w| self.apply_letters(&[(w as u32, one.clone())], n, &letters))
            .collect();
        Ok(self.memo_put(MemoKey::Block(p, q), cols))
    }
}

/// χ: positions `0..p` go to `q..q+p`, positions `p..p+q` go to `0..q`.
pub fn block_rotation(p: usize, q: usize) -> Perm {
    Perm((0..p).map(|i| q + i).chain(0..q).collect())
}

/// Applies a column map to a sparse vector.
pub fn apply_cols(cols: &[SVec], x: &[(u32, Scalar)]) -> SVec {
    let mut terms = Vec::new();
    for (j, v) in x {
        for (i, s) in &cols[*j as usize] {
            terms.push((*i, s * v));
        }
    }
    linalg::collect_terms(terms)
}

fn invert(field: &'static CycloField, c: &[SVec]) -> Option<Vec<SVec>> {
    let n = c.len() as u32;
    let mut b = RrefBuilder::new();
    for (j, col) in c.iter().enumerate() {
        let mut row = col.clone();
        row.push((n + j as u32, field.one()));
        b.insert(&row);
    }
    let s = b.finish(0, 2 * c.len());
    if s.dim() != c.len() || s.rows().iter().any(|r| r[0].0 >= n) {
        return None;
    }
    Some(
        s.rows()
            .iter()
            .map(|r| r[1..].iter().map(|(i, v)| (i - n, v.clone())).collect())
            .collect(),
    )
}

fn flatten(cols: &[SVec]) -> SVec {
    let n = cols.len() as u32;
    let mut out = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            out.push((i * n + j as u32, v.clone()));
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

fn compose(a: &[SVec], b: &[SVec]) -> Vec<SVec> {
    b.iter().map(|col| apply_cols(a, col)).collect()
}

fn minimal_polynomial(field: &'static CycloField, c: &[SVec]) -> Vec<Scalar> {
    let n = c.len();
    let mut powers: Vec<SVec> = vec![flatten(&identity_cols(field, n))];
    let mut cur = identity_cols(field, n);
    let mut b = RrefBuilder::new();
    b.insert(&powers[0]);
    loop {
        cur = compose(c, &cur);
        let flat = flatten(&cur);
        powers.push(flat.clone());
        if !b.insert(&flat) {
            let k = powers.len() - 1;
            let ker = kernel_of_map(field, 0, k + 1, n * n, |j| powers[j as usize].clone());
            // the dependency is unique up to scale since lower powers are independent
            let rel = &ker.rows()[0];
            let lead = linalg::get(rel, k as u32).expect("relation involves the top power").clone();
            let inv = lead.inv().expect("nonzero");
            let mut out = vec![field.zero(); k + 1];
            for (i, v) in rel {
                out[*i as usize] = v * &inv;
            }
            return out;
        }
    }
}

fn identity_cols(field: &'static CycloField, n: usize) -> Vec<SVec> {
    (0..n as u32).map(|i| vec![(i, field.one())]).collect()
}
