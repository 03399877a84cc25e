//! Sparse exact linear algebra over a cyclotomic field.
//!
//! Vectors are sorted `(index, value)` lists without stored zeros. Subspaces
//! are kept in reduced row echelon form with increasing pivots, which makes
//! the representation canonical.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::scalar::{CycloField, CycloScalar};

pub type Scalar = CycloScalar;
/// Sparse vector: strictly increasing indices, nonzero values.
pub type SVec = Vec<(u32, Scalar)>;

/// `a·x` (dropping zero results).
pub fn scale(x: &[(u32, Scalar)], a: &Scalar) -> SVec {
    if a.is_zero() {
        return Vec::new();
    }
    if a.is_one() {
        return x.to_vec();
    }
    x.iter().map(|(i, v)| (*i, v * a)).collect()
}

/// `y + a·x`.
pub fn axpy(y: &[(u32, Scalar)], a: &Scalar, x: &[(u32, Scalar)]) -> SVec {
    if a.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, &x[j].1 * a));
            j += 1;
        } else {
            let v = &y[i].1 + &(&x[j].1 * a);
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(y: &[(u32, Scalar)], x: &[(u32, Scalar)]) -> SVec {
    match x.first() {
        None => y.to_vec(),
        Some((_, v)) => axpy(y, &v.field().one(), x),
    }
}

pub fn sub(y: &[(u32, Scalar)], x: &[(u32, Scalar)]) -> SVec {
    match x.first() {
        None => y.to_vec(),
        Some((_, v)) => axpy(y, &v.field().from_int(-1), x),
    }
}

pub fn get(x: &[(u32, Scalar)], idx: u32) -> Option<&Scalar> {
    x.binary_search_by_key(&idx, |e| e.0).ok().map(|k| &x[k].1)
}

/// Collects unsorted terms with repeated indices into a sparse vector.
pub fn collect_terms(mut terms: Vec<(u32, Scalar)>) -> SVec {
    if terms.len() <= 1 {
        terms.retain(|t| !t.1.is_zero());
        return terms;
    }
    terms.sort_by_key(|t| t.0);
    let mut out: SVec = Vec::with_capacity(terms.len());
    for (i, v) in terms {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = &last.1 + &v,
            _ => {
                if let Some(last) = out.last() {
                    if last.1.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, v));
            }
        }
    }
    if out.last().is_some_and(|l| l.1.is_zero()) {
        out.pop();
    }
    out.retain(|t| !t.1.is_zero());
    out
}

/// Dense accumulator with ordered extraction of nonzero positions.
struct OrderedAcc {
    vals: Vec<Option<Scalar>>,
    heap: BinaryHeap<Reverse<u32>>,
    queued: Vec<bool>,
}

impl OrderedAcc {
    fn new(n: usize) -> Self {
        OrderedAcc { vals: vec![None; n], heap: BinaryHeap::new(), queued: vec![false; n] }
    }

    fn add(&mut self, i: u32, v: &Scalar) {
        let slot = &mut self.vals[i as usize];
        match slot {
            Some(s) => *s = &*s + v,
            None => *slot = Some(v.clone()),
        }
        if !self.queued[i as usize] {
            self.queued[i as usize] = true;
            self.heap.push(Reverse(i));
        }
    }

    fn sub_scaled(&mut self, x: &[(u32, Scalar)], a: &Scalar) {
        for (i, v) in x {
            self.add(*i, &(v * a).neg());
        }
    }

    /// Smallest position with a nonzero value, removing it from the queue.
    fn pop_nonzero(&mut self) -> Option<(u32, Scalar)> {
        while let Some(Reverse(i)) = self.heap.pop() {
            self.queued[i as usize] = false;
            if let Some(v) = self.vals[i as usize].take() {
                if !v.is_zero() {
                    return Some((i, v));
                }
            }
        }
        None
    }

    fn drain_sorted(&mut self) -> SVec {
        let mut out = Vec::new();
        while let Some(e) = self.pop_nonzero() {
            out.push(e);
        }
        out
    }
}

/// Kernel of a linear map given column by column.
///
/// Columns must be supplied in strictly decreasing source order. Because
/// every image row is expressed through earlier (larger) independent
/// columns, each kernel vector has its smallest index at a dependent column
/// with coefficient 1 and vanishes at every other dependent column: the
/// collected kernel basis is therefore already canonical.
pub struct KernelBuilder {
    field: &'static CycloField,
    acc: OrderedAcc,
    rows: HashMap<u32, (SVec, SVec)>,
    kernel: Vec<SVec>,
    last_src: Option<u32>,
    local: Option<HashMap<u32, u32>>,
}

impl KernelBuilder {
    /// Target indices are used directly (must be `< target_dim`).
    pub fn new(field: &'static CycloField, target_dim: usize) -> Self {
        KernelBuilder {
            field,
            acc: OrderedAcc::new(target_dim),
            rows: HashMap::new(),
            kernel: Vec::new(),
            last_src: None,
            local: None,
        }
    }

    /// Target indices are arbitrary and renumbered internally; at most
    /// `max_distinct` distinct indices may occur.
    pub fn with_sparse_target(field: &'static CycloField, max_distinct: usize) -> Self {
        let mut b = Self::new(field, max_distinct);
        b.local = Some(HashMap::new());
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn push_column(&mut self, src: u32, image: &[(u32, Scalar)]) {
        if let Some(last) = self.last_src {
            assert!(src < last, "kernel columns must be decreasing");
        }
        self.last_src = Some(src);
        let one = self.field.one();
        if let Some(map) = self.local.as_mut() {
            for (i, v) in image {
                let next = map.len() as u32;
                let li = *map.entry(*i).or_insert(next);
                self.acc.add(li, v);
            }
        } else {
            for (i, v) in image {
                self.acc.add(*i, v);
            }
        }
        let mut combo: SVec = vec![(src, one)];
        while let Some((pos, val)) = self.acc.pop_nonzero() {
            if let Some((row, rcombo)) = self.rows.get(&pos) {
                // row[0] is the pivot with value 1
                self.acc.sub_scaled(&row[1..], &val);
                combo = axpy(&combo, &val.neg(), rcombo);
            } else {
                let inv = val.inv().expect("nonzero pivot");
                let mut row = vec![(pos, self.field.one())];
                for (i, v) in self.acc.drain_sorted() {
                    row.push((i, &v * &inv));
                }
                let combo = scale(&combo, &inv);
                self.rows.insert(pos, (row, combo));
                return;
            }
        }
        self.kernel.push(combo);
    }

    /// Kernel basis in canonical reduced row echelon form.
    pub fn finish(mut self) -> Vec<SVec> {
        self.kernel.sort_by_key(|r| r[0].0);
        self.kernel
    }
}

/// Fully reduced incremental row echelon form.
pub struct RrefBuilder {
    rows: Vec<SVec>,
    pivot_row: HashMap<u32, usize>,
}

impl Default for RrefBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl RrefBuilder {
    pub fn new() -> Self {
        RrefBuilder { rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        let mut b = Self::new();
        for (k, r) in s.rows.iter().enumerate() {
            b.pivot_row.insert(r[0].0, k);
        }
        b.rows = s.rows.clone();
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in insertion order.
    pub fn pivots(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn reduce(&self, v: &[(u32, Scalar)]) -> SVec {
        let mut out = v.to_vec();
        for (i, c) in v {
            if let Some(&k) = self.pivot_row.get(i) {
                out = axpy(&out, &c.neg(), &self.rows[k]);
            }
        }
        out
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[(u32, Scalar)]) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let r = scale(&r, &lead.inv().expect("nonzero"));
        for row in self.rows.iter_mut() {
            if let Some(c) = get(row, p) {
                let c = c.clone();
                *row = axpy(row, &c.neg(), &r);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn finish(self, degree: usize, ambient: usize) -> Subspace {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        Subspace::from_rref_rows(degree, ambient, rows)
    }
}

const FREE: u32 = 1 << 31;

/// A subspace of a coordinate space of dimension `ambient`, in canonical
/// reduced row echelon form.
#[derive(Clone)]
pub struct Subspace {
    degree: usize,
    ambient: usize,
    rows: Vec<SVec>,
    /// For each column: row index of its pivot, or `FREE | quotient coordinate`.
    index: Vec<u32>,
    free_cols: Vec<u32>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.ambient == other.ambient && self.rows == other.rows
    }
}
impl Eq for Subspace {}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(deg {}, dim {} of {})", self.degree, self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(degree: usize, ambient: usize) -> Self {
        Self::from_rref_rows(degree, ambient, Vec::new())
    }

    pub fn full(field: &'static CycloField, degree: usize, ambient: usize) -> Self {
        let rows = (0..ambient as u32).map(|i| vec![(i, field.one())]).collect();
        Self::from_rref_rows(degree, ambient, rows)
    }

    /// Wraps rows that are already canonical.
    pub fn from_rref_rows(degree: usize, ambient: usize, rows: Vec<SVec>) -> Self {
        let mut index = vec![FREE; ambient];
        for (k, r) in rows.iter().enumerate() {
            debug_assert!(r[0].1.is_one());
            index[r[0].0 as usize] = k as u32;
        }
        let mut free_cols = Vec::with_capacity(ambient - rows.len());
        for (c, slot) in index.iter_mut().enumerate() {
            if *slot & FREE != 0 {
                *slot = FREE | free_cols.len() as u32;
                free_cols.push(c as u32);
            }
        }
        debug_assert!(rows.windows(2).all(|w| w[0][0].0 < w[1][0].0));
        debug_assert!(rows.iter().all(|r| r[1..].iter().all(|(c, _)| index[*c as usize] & FREE != 0)));
        Subspace { degree, ambient, rows, index, free_cols }
    }

    pub fn span<'a>(degree: usize, ambient: usize, vecs: impl IntoIterator<Item = &'a SVec>) -> Self {
        let mut b = RrefBuilder::new();
        for v in vecs {
            b.insert(v);
        }
        b.finish(degree, ambient)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Columns that are not pivots, increasing: a basis of the quotient.
    pub fn free_cols(&self) -> &[u32] {
        &self.free_cols
    }

    pub fn pivot_row(&self, col: u32) -> Option<usize> {
        let s = self.index[col as usize];
        (s & FREE == 0).then_some(s as usize)
    }

    pub fn free_coord(&self, col: u32) -> Option<usize> {
        let s = self.index[col as usize];
        (s & FREE != 0).then_some((s & !FREE) as usize)
    }

    /// Normal form: the unique representative supported on free columns.
    pub fn reduce(&self, v: &[(u32, Scalar)]) -> SVec {
        let mut terms: Vec<(u32, Scalar)> = Vec::with_capacity(v.len());
        for (c, x) in v {
            match self.pivot_row(*c) {
                None => terms.push((*c, x.clone())),
                Some(k) => {
                    for (c2, y) in &self.rows[k][1..] {
                        terms.push((*c2, (y * x).neg()));
                    }
                }
            }
        }
        collect_terms(terms)
    }

    pub fn contains(&self, v: &[(u32, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Class of `v` in quotient coordinates (indices into `free_cols`).
    pub fn quotient_coords(&self, v: &[(u32, Scalar)]) -> SVec {
        let mut r = self.reduce(v);
        for e in r.iter_mut() {
            e.0 = self.free_coord(e.0).expect("reduced vector is free") as u32;
        }
        r
    }

    /// Class of a single basis vector in quotient coordinates.
    pub fn class_of(&self, col: u32, one: &Scalar) -> SVec {
        match self.pivot_row(col) {
            None => vec![(self.free_coord(col).unwrap() as u32, one.clone())],
            Some(k) => self.rows[k][1..]
                .iter()
                .map(|(c, y)| (self.free_coord(*c).unwrap() as u32, y.neg()))
                .collect(),
        }
    }

    /// Coefficients of `v` in the row basis, if `v` lies in the subspace.
    pub fn coords_in_basis(&self, v: &[(u32, Scalar)]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        let field = v.first().map(|e| e.1.field());
        Some(
            self.rows
                .iter()
                .map(|r| match get(v, r[0].0) {
                    Some(x) => x.clone(),
                    None => field.unwrap_or_else(|| r[0].1.field()).zero(),
                })
                .collect(),
        )
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut b = RrefBuilder::from_subspace(self);
        for r in &other.rows {
            b.insert(r);
        }
        b.finish(self.degree, self.ambient)
    }

    /// `self + span(extra)` where every vector of `extra` is supported on
    /// free columns of `self` and `extra` is itself canonical.
    pub fn extend_by_free(&self, extra: Vec<SVec>) -> Subspace {
        if extra.is_empty() {
            return self.clone();
        }
        let ex = Subspace::from_rref_rows(self.degree, self.ambient, extra);
        let mut rows: Vec<SVec> = self.rows.iter().map(|r| ex.reduce(r)).collect();
        rows.extend(ex.rows);
        rows.sort_by_key(|r| r[0].0);
        Subspace::from_rref_rows(self.degree, self.ambient, rows)
    }
}

/// Kernel of `x ↦ Σ_j x_j f(j)` over source columns `0..n_src`, when the
/// images live in a space of dimension `target_dim`.
pub fn kernel_of_map(
    field: &'static CycloField,
    degree: usize,
    n_src: usize,
    target_dim: usize,
    mut f: impl FnMut(u32) -> SVec,
) -> Subspace {
    let mut kb = KernelBuilder::new(field, target_dim);
    for j in (0..n_src as u32).rev() {
        let img = f(j);
        kb.push_column(j, &img);
    }
    Subspace::from_rref_rows(degree, n_src, kb.finish())
}
