//! Brackets, universal enveloping algebras U(V,c,b) = T/((Id−b)[E]) as
//! filtered quotients, and the PBW, Lie and primitivity verdicts.
//!
//! Above the bracket cutoff no generators are imposed. This is the ideal
//! generated by (Id−b)[E_n] for n up to the cutoff; for the zero bracket the
//! cutoff is the whole budget, so U = S(V,c).

use serde::Serialize;

use crate::braided::{block_rotation, matsumoto_lift, word_name, BraidedSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, kernel_of_map, RrefBuilder, SVec, Scalar, Subspace};
use crate::tensor::{delta_component, primitives_e};
use crate::tower::{ideal_closure, symmetric_step, IdealTower};

/// Values of b on the canonical bases of E_2, …, E_cutoff.
#[derive(Clone, Debug)]
pub struct BracketTable {
    space: BraidedSpace,
    cutoff: usize,
    /// `bases[n]` is E_n (empty below 2).
    bases: Vec<Subspace>,
    /// `values[n][k]` = b_n(k-th basis row of E_n), a vector of V.
    values: Vec<Vec<SVec>>,
}

impl BracketTable {
    pub fn zero(space: &BraidedSpace, cutoff: usize) -> Result<Self> {
        Self::from_pairs(space, cutoff, &[])
    }

    /// Determines b_n from images of elements spanning E_n. Degrees with no
    /// pairs get the zero map.
    pub fn from_pairs(space: &BraidedSpace, cutoff: usize, pairs: &[(usize, SVec, SVec)]) -> Result<Self> {
        space.check_degree(cutoff)?;
        let d = space.dim();
        let mut bases = Vec::new();
        let mut values = Vec::new();
        for n in 0..=cutoff {
            let e = primitives_e(space, n)?;
            let here: Vec<&(usize, SVec, SVec)> = pairs.iter().filter(|p| p.0 == n).collect();
            let k = e.dim();
            let vals = if here.is_empty() {
                vec![Vec::new(); k]
            } else {
                // rows [coords of u | b(u)] in ambient k + d
                let mut rb = RrefBuilder::new();
                for (_, u, v) in &here {
                    let coords = e.coords_in_basis(u).ok_or_else(|| {
                        Error::DomainMismatch(format!("a degree-{n} bracket argument is not in E_{n}"))
                    })?;
                    if v.iter().any(|(i, _)| *i as usize >= d) {
                        return Err(Error::BadParams("bracket values must lie in V".into()));
                    }
                    let mut row: SVec = coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (j as u32, c))
                        .collect();
                    row.extend(v.iter().map(|(i, s)| (k as u32 + i, s.clone())));
                    rb.insert(&row);
                }
                let s = rb.finish(n, k + d);
                if s.rows().iter().any(|r| r[0].0 as usize >= k) {
                    return Err(Error::DomainMismatch(format!("inconsistent bracket values in degree {n}")));
                }
                if s.dim() < k {
                    return Err(Error::ValidationError(format!(
                        "bracket values do not determine b on all of E_{n} ({} of {k} directions)",
                        s.dim()
                    )));
                }
                s.rows()
                    .iter()
                    .map(|r| r[1..].iter().map(|(i, v)| (i - k as u32, v.clone())).collect())
                    .collect()
            };
            bases.push(e);
            values.push(vals);
        }
        Ok(BracketTable { space: space.clone(), cutoff, bases, values })
    }

    pub fn space(&self) -> &BraidedSpace {
        &self.space
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis(&self, n: usize) -> &Subspace {
        &self.bases[n]
    }

    pub fn values(&self, n: usize) -> &[SVec] {
        &self.values[n]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_empty())
    }

    /// b_n(x) for x ∈ E_n; `None` if x ∉ E_n or n is above the cutoff.
    pub fn apply(&self, n: usize, x: &[(u32, Scalar)]) -> Option<SVec> {
        if n > self.cutoff {
            return None;
        }
        let coords = self.bases[n].coords_in_basis(x)?;
        let mut out: SVec = Vec::new();
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = linalg::axpy(&out, c, &self.values[n][k]);
            }
        }
        Some(out)
    }

    /// Returns a table extended to degree `n` with the given values on the
    /// canonical basis of E_n.
    pub fn with_degree(&self, n: usize, vals: Vec<SVec>) -> Result<Self> {
        let mut t = self.clone();
        while t.cutoff < n {
            t.cutoff += 1;
            let e = primitives_e(&t.space, t.cutoff)?;
            t.values.push(vec![Vec::new(); e.dim()]);
            t.bases.push(e);
        }
        if vals.len() != t.bases[n].dim() {
            return Err(Error::DomainMismatch(format!("expected {} values in degree {n}", t.bases[n].dim())));
        }
        t.values[n] = vals;
        Ok(t)
    }
}

fn block_letters(p: usize, q: usize) -> Vec<i32> {
    matsumoto_lift(&block_rotation(p, q)).letters
}

/// Checks c(b⊗V) = (V⊗b)c_{E,V} and c(V⊗b) = (b⊗V)c_{V,E} on every basis
/// element of every E_n up to the cutoff.
pub fn validate_bracket(table: &BracketTable) -> Result<()> {
    let space = &table.space;
    let d = space.dim();
    for n in 2..=table.cutoff {
        let e = &table.bases[n];
        let dn = space.words(n) as u32;
        let right = block_letters(n, 1);
        let left = block_letters(1, n);
        for (k, u) in e.rows().iter().enumerate() {
            let bu = &table.values[n][k];
            for v in 0..d as u32 {
                // c^{n,1}(u⊗v) ∈ V⊗E_n
                let x: SVec = linalg::collect_terms(u.iter().map(|(w, s)| (w * d as u32 + v, s.clone())).collect());
                let y = space.apply_letters(&x, n + 1, &right);
                let mut rhs: Vec<(u32, Scalar)> = Vec::new();
                for (l, part) in split_first_letter(&y, dn) {
                    let img = table.apply(n, &part).ok_or_else(|| {
                        Error::Internal(format!("c^{{{n},1}} does not map E_{n}⊗V into V⊗E_{n}"))
                    })?;
                    rhs.extend(img.into_iter().map(|(i, s)| (l * d as u32 + i, s)));
                }
                let lhs = crate::braided::apply_cols(space.c_columns(), &linalg::collect_terms(bu.iter().map(|(i, s)| (i * d as u32 + v, s.clone())).collect()));
                if lhs != linalg::collect_terms(rhs) {
                    return Err(Error::NotABracket {
                        n,
                        witness: format!("c(b⊗V) ≠ (V⊗b)c_{{E,V}} on (E_{n} basis #{k}) ⊗ x{v}"),
                    });
                }
                // c^{1,n}(v⊗u) ∈ E_n⊗V
                let x: SVec = u.iter().map(|(w, s)| (v * dn + w, s.clone())).collect();
                let y = space.apply_letters(&x, n + 1, &left);
                let mut rhs: Vec<(u32, Scalar)> = Vec::new();
                for (l, part) in split_last_letter(&y, d) {
                    let img = table.apply(n, &part).ok_or_else(|| {
                        Error::Internal(format!("c^{{1,{n}}} does not map V⊗E_{n} into E_{n}⊗V"))
                    })?;
                    rhs.extend(img.into_iter().map(|(i, s)| (i * d as u32 + l, s)));
                }
                let lhs = crate::braided::apply_cols(space.c_columns(), &bu.iter().map(|(i, s)| (v * d as u32 + i, s.clone())).collect::<SVec>());
                if lhs != linalg::collect_terms(rhs) {
                    return Err(Error::NotABracket {
                        n,
                        witness: format!("c(V⊗b) ≠ (b⊗V)c_{{V,E}} on x{v} ⊗ (E_{n} basis #{k})"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Splits a vector of V⊗V^⊗n by its first letter.
fn split_first_letter(y: &[(u32, Scalar)], dn: u32) -> Vec<(u32, SVec)> {
    let mut out: Vec<(u32, SVec)> = Vec::new();
    for (w, s) in y {
        let (l, r) = (w / dn, w % dn);
        match out.last_mut() {
            Some((ll, part)) if *ll == l => part.push((r, s.clone())),
            _ => out.push((l, vec![(r, s.clone())])),
        }
    }
    out
}

/// Splits a vector of V^⊗n⊗V by its last letter.
fn split_last_letter(y: &[(u32, Scalar)], d: usize) -> Vec<(u32, SVec)> {
    let mut parts: Vec<SVec> = vec![Vec::new(); d];
    for (w, s) in y {
        parts[*w as usize % d].push((w / d as u32, s.clone()));
    }
    parts.into_iter().enumerate().filter(|(_, p)| !p.is_empty()).map(|(l, p)| (l as u32, p)).collect()
}

/// Coordinates on the filtered space T_(M) = ⊕_{k≤M} V^⊗k, ordered by
/// degree descending so that a row's pivot sits in its top degree.
#[derive(Clone, Debug)]
pub struct FilteredCoords {
    d: usize,
    top: usize,
    offsets: Vec<usize>,
}

impl FilteredCoords {
    pub fn new(d: usize, top: usize) -> Self {
        let mut offsets = vec![0; top + 1];
        let mut acc = 0;
        for k in (0..=top).rev() {
            offsets[k] = acc;
            acc += d.pow(k as u32);
        }
        FilteredCoords { d, top, offsets }
    }

    pub fn ambient(&self) -> usize {
        self.offsets[0] + 1
    }

    pub fn index(&self, k: usize, w: usize) -> u32 {
        (self.offsets[k] + w) as u32
    }

    pub fn degree_of(&self, idx: u32) -> usize {
        let idx = idx as usize;
        (0..=self.top).find(|&k| idx >= self.offsets[k] && idx < self.offsets[k] + self.d.pow(k as u32)).unwrap()
    }

    pub fn split(&self, idx: u32) -> (usize, usize) {
        let k = self.degree_of(idx);
        (k, idx as usize - self.offsets[k])
    }

    /// Readable form `2*x0x1 + -1*x1`.
    pub fn render(&self, x: &[(u32, Scalar)]) -> String {
        if x.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = x
            .iter()
            .map(|(i, s)| {
                let (k, w) = self.split(*i);
                format!("({s})*{}", word_name(self.d, k, w))
            })
            .collect();
        parts.join(" + ")
    }
}

#[derive(Clone, Debug)]
pub struct FilteredQuotient {
    table: BracketTable,
    n: usize,
    slack: usize,
    coords: FilteredCoords,
    ideal: Subspace,
    /// `counts[m][k]`: rows with pivot degree ≤ k once generators of top
    /// degree ≤ m are in.
    counts: Vec<Vec<usize>>,
    s_tower: IdealTower,
    unconstrained: Vec<usize>,
    warnings: Vec<String>,
}

/// Builds the span of x(u − b(u))y for u in the E_n bases, n ≤ cutoff, level
/// by level in the top degree m = |x| + n + |y| ≤ N + slack.
pub fn enveloping_filtration(table: &BracketTable, n: usize, slack: usize) -> Result<FilteredQuotient> {
    let space = &table.space;
    let top = n + slack;
    space.check_degree(top)?;
    let d = space.dim();
    let coords = FilteredCoords::new(d, top);
    let mut warnings = Vec::new();
    let mut es = Vec::new();
    for k in 0..=top {
        es.push(primitives_e(space, k)?);
    }
    let beyond: Vec<usize> = (table.cutoff + 1..=top).filter(|&k| es[k].dim() > 0).collect();
    if !beyond.is_empty() {
        warnings.push(format!(
            "E_n is nonzero above the bracket cutoff {} in degrees {:?}; no relations are imposed there",
            table.cutoff, beyond
        ));
    }
    let s_tower = symmetric_step(&IdealTower::zero(space, top)?)?;
    let gen_upto = table.cutoff.min(top);
    let b_tower = ideal_closure(space, &es[..=gen_upto], top)?;
    let unconstrained: Vec<usize> = (0..=top).filter(|&k| b_tower.component(k) != s_tower.component(k)).collect();

    let mut rb = RrefBuilder::new();
    let mut counts = vec![vec![0; top + 1]; top + 1];
    for m in 0..=top {
        for g in 2..=gen_upto.min(m) {
            let e = &table.bases[g];
            for (kk, u) in e.rows().iter().enumerate() {
                let bu = &table.values[g][kk];
                let rest = m - g;
                for p in 0..=rest {
                    let q = rest - p;
                    let dq = d.pow(q as u32);
                    for x in 0..d.pow(p as u32) {
                        for y in 0..dq {
                            let mut row: SVec = Vec::with_capacity(u.len() + bu.len());
                            let hi = (x * d.pow(g as u32)) * dq;
                            for (w, s) in u {
                                row.push((coords.index(m, hi + *w as usize * dq + y), s.clone()));
                            }
                            let lo = (x * d) * dq;
                            for (v, s) in bu {
                                row.push((coords.index(p + 1 + q, lo + *v as usize * dq + y), s.neg()));
                            }
                            row.sort_by_key(|e| e.0);
                            rb.insert(&row);
                        }
                    }
                }
            }
        }
        let mut hist = vec![0usize; top + 1];
        for p in rb.pivots() {
            hist[coords.degree_of(p)] += 1;
        }
        let mut acc = 0;
        for k in 0..=top {
            acc += hist[k];
            counts[m][k] = acc;
        }
    }
    let ideal = rb.finish(top, coords.ambient());
    Ok(FilteredQuotient { table: table.clone(), n, slack, coords, ideal, counts, s_tower, unconstrained, warnings })
}

impl FilteredQuotient {
    pub fn top(&self) -> usize {
        self.n + self.slack
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Degrees where E_n above the cutoff is not already in the ideal
    /// generated by lower primitives.
    pub fn unconstrained_degrees(&self) -> &[usize] {
        &self.unconstrained
    }

    pub fn coords(&self) -> &FilteredCoords {
        &self.coords
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// dim T_(k) − dim(ideal ∩ T_(k)) for k ≤ N + slack.
    pub fn dims_u(&self) -> Vec<usize> {
        let m = self.top();
        let mut total = 0;
        (0..=m)
            .map(|k| {
                total += self.coords.d.pow(k as u32);
                total - self.counts[m][k]
            })
            .collect()
    }

    /// Degree k ≤ N is stable if the count does not move over m ∈ [N, N+slack].
    pub fn stabilized(&self) -> Vec<bool> {
        (0..=self.n)
            .map(|k| (self.n..=self.top()).all(|m| self.counts[m][k] == self.counts[self.top()][k]))
            .collect()
    }

    pub fn s_dims(&self) -> Vec<usize> {
        self.s_tower.dims()
    }

    /// ideal ∩ T_(k) as a subspace of T_(k) in its own filtered coordinates.
    pub fn truncated_ideal(&self, k: usize) -> (FilteredCoords, Subspace) {
        let shift = self.coords.offsets[k] as u32;
        let small = FilteredCoords::new(self.coords.d, k);
        let rows: Vec<SVec> = self
            .ideal
            .rows()
            .iter()
            .filter(|r| self.coords.degree_of(r[0].0) <= k)
            .map(|r| r.iter().map(|(i, s)| (i - shift, s.clone())).collect())
            .collect();
        let amb = small.ambient();
        (small, Subspace::from_rref_rows(k, amb, rows))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PbwStatus {
    PbwConsistent { n: usize, slack: usize },
    FailsCertified { degree: usize, witness: String },
    /// Neither verdict is justified at this budget.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct PbwVerdict {
    #[serde(flatten)]
    pub status: PbwStatus,
    pub gr_dims: Vec<usize>,
    pub s_dims: Vec<usize>,
    pub diagnostics: Vec<String>,
}

/// θ-comparison of gr′(U) with S(V,c) in degrees ≤ N.
pub fn pbw_check(fq: &FilteredQuotient) -> Result<PbwVerdict> {
    let dims = fq.dims_u();
    let s = fq.s_dims();
    let n = fq.n;
    let gr: Vec<usize> = (0..=n).map(|k| dims[k] - if k == 0 { 0 } else { dims[k - 1] }).collect();
    let sigma: Vec<usize> = (0..=n).scan(0, |acc, k| { *acc += s[k]; Some(*acc) }).collect();
    let mut diagnostics = Vec::new();
    for k in 0..=n {
        if gr[k] > s[k] || dims[k] > sigma[k] {
            let msg = format!("gr′ exceeds S in degree {k}: {} > {}", gr[k], s[k]);
            if fq.unconstrained.iter().any(|&u| u <= k) {
                diagnostics.push(msg);
            } else {
                return Err(Error::Internal(msg));
            }
        }
    }
    for k in 0..=n {
        if dims[k] < sigma[k] {
            let witness = leading_part_witness(fq, k)
                .ok_or_else(|| Error::Internal(format!("no witness for the dimension drop in degree {k}")))?;
            return Ok(PbwVerdict {
                status: PbwStatus::FailsCertified { degree: k, witness },
                gr_dims: gr,
                s_dims: s[..=n].to_vec(),
                diagnostics,
            });
        }
    }
    let stable = fq.stabilized().iter().all(|&b| b);
    let status = if gr[..] == s[..=n] && stable {
        PbwStatus::PbwConsistent { n, slack: fq.slack }
    } else {
        PbwStatus::Inconclusive { reason: "filtration dimensions exceed the symmetric algebra at this budget".into() }
    };
    Ok(PbwVerdict { status, gr_dims: gr, s_dims: s[..=n].to_vec(), diagnostics })
}

/// An ideal element of filtration degree ≤ k whose leading homogeneous part
/// is not a relation of S(V,c).
fn leading_part_witness(fq: &FilteredQuotient, k: usize) -> Option<String> {
    for r in fq.ideal.rows() {
        let deg = fq.coords.degree_of(r[0].0);
        if deg > k {
            continue;
        }
        let lead: SVec = r
            .iter()
            .take_while(|(i, _)| fq.coords.degree_of(*i) == deg)
            .map(|(i, s)| (fq.coords.split(*i).1 as u32, s.clone()))
            .collect();
        if !fq.s_tower.component(deg).contains(&lead) {
            return Some(fq.coords.render(r));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LieVerdict {
    IsLieUpTo { n: usize, slack: usize },
    FailsCertified { witness: String },
}

/// V ∩ ideal: nonzero means i_U is not injective.
pub fn lie_check(fq: &FilteredQuotient) -> LieVerdict {
    let (small, low) = fq.truncated_ideal(1);
    let d = fq.coords.d;
    let unit = small.index(0, 0);
    if low.contains(&[(unit, fq.table.space.one())]) {
        return LieVerdict::FailsCertified { witness: "1 lies in the ideal".into() };
    }
    // rows with pivot in degree 1 whose degree-0 part can be cancelled
    let rows = low.rows();
    let k = kernel_of_map(fq.table.space.field(), 0, rows.len(), 1, |j| {
        rows[j as usize].iter().filter(|(i, _)| *i == unit).map(|(_, s)| (0, s.clone())).collect()
    });
    if let Some(comb) = k.rows().first() {
        let mut v: SVec = Vec::new();
        for (j, s) in comb {
            v = linalg::axpy(&v, s, &rows[*j as usize]);
        }
        let _ = d;
        return LieVerdict::FailsCertified { witness: small.render(&v) };
    }
    LieVerdict::IsLieUpTo { n: fq.n, slack: fq.slack }
}

/// Solution space of Δ(x) = x⊗1 + 1⊗x on T_(N)/(ideal ∩ T_(N)); true iff it
/// is exactly the image of V, mapped injectively.
pub fn primitive_check(fq: &FilteredQuotient, n: usize) -> Result<bool> {
    if n > fq.top() {
        return Err(Error::DegreeBudgetExceeded { degree: n, budget: fq.top() });
    }
    let space = &fq.table.space;
    let d = space.dim();
    let (small, f) = fq.truncated_ideal(n);
    let free = f.free_cols().to_vec();
    let nf = free.len() as u32;
    let one = space.one();
    // class of a homogeneous word in quotient coordinates
    let class = |k: usize, w: usize| f.quotient_coords(&[(small.index(k, w), one.clone())]);
    let mut deltas = Vec::new();
    for k in 0..=n {
        let mut row = Vec::new();
        for a in 1..k {
            row.push(delta_component(space, a, k - a)?);
        }
        deltas.push(row);
    }
    let unit = class(0, 0);
    let ker = kernel_of_map(space.field(), 0, free.len(), (nf * nf) as usize, |j| {
        let (k, w) = small.split(free[j as usize]);
        if k == 0 {
            return linalg::scale(&tensor_classes(&unit, &unit, nf), &one.neg());
        }
        let mut terms = Vec::new();
        for (ai, a) in (1..k).enumerate() {
            let db = d.pow((k - a) as u32);
            for (t, s) in &deltas[k][ai][w] {
                let (x, y) = (*t as usize / db, *t as usize % db);
                let pair = tensor_classes(&class(a, x), &class(k - a, y), nf);
                terms.extend(pair.into_iter().map(|(i, u)| (i, &u * s)));
            }
        }
        linalg::collect_terms(terms)
    });
    let v_injective = (0..d).all(|w| f.free_coord(small.index(1, w)).is_some());
    Ok(v_injective && ker.dim() == d && (0..d).all(|w| {
        let j = f.free_coord(small.index(1, w)).unwrap_or(usize::MAX);
        ker.rows().iter().any(|r| r.len() == 1 && r[0].0 as usize == j)
    }))
}

fn tensor_classes(a: &[(u32, Scalar)], b: &[(u32, Scalar)], nf: u32) -> SVec {
    let mut out = Vec::new();
    for (i, u) in a {
        for (j, v) in b {
            out.push((i * nf + j, u * v));
        }
    }
    linalg::collect_terms(out)
}

/// Normal forms of the E_n basis inside the computed quotient; each must lie
/// in V for the multiplication to induce a bracket.
pub fn bracket_from_multiplication(fq: &FilteredQuotient, n: usize) -> Result<Vec<SVec>> {
    let (small, f) = fq.truncated_ideal(n);
    let e = primitives_e(&fq.table.space, n)?;
    let mut out = Vec::new();
    for u in e.rows() {
        let x: SVec = u.iter().map(|(w, s)| (small.index(n, *w as usize), s.clone())).collect();
        let r = linalg::collect_terms(f.reduce(&x));
        let mut v = Vec::new();
        for (i, s) in &r {
            let (k, w) = small.split(*i);
            if k != 1 {
                return Err(Error::NotABracket {
                    n,
                    witness: format!("the product {} does not reduce into V", small.render(&x)),
                });
            }
            v.push((w as u32, s.clone()));
        }
        out.push(v);
    }
    Ok(out)
}

/// Whether the braiding carries (u − b(u))⊗V into V⊗ideal and V⊗(u − b(u))
/// into ideal⊗V for every generator, checked against the computed span.
pub fn braiding_stability_check(fq: &FilteredQuotient) -> Result<bool> {
    let t = &fq.table;
    let space = &t.space;
    let d = space.dim();
    let top = fq.top();
    for g in 2..=t.cutoff.min(top.saturating_sub(1)) {
        let (small, f) = fq.truncated_ideal(g);
        for (k, u) in t.bases[g].rows().iter().enumerate() {
            let bu = &t.values[g][k];
            for v in 0..d as u32 {
                // c(g⊗v): per homogeneous part
                let hi = space.apply_letters(&linalg::collect_terms(u.iter().map(|(w, s)| (w * d as u32 + v, s.clone())).collect()), g + 1, &block_letters(g, 1));
                let lo = space.apply_letters(&linalg::collect_terms(bu.iter().map(|(w, s)| (w * d as u32 + v, s.clone())).collect()), 2, &[1]);
                let mut parts: Vec<SVec> = vec![Vec::new(); d];
                let dg = space.words(g) as u32;
                for (w, s) in &hi {
                    parts[(w / dg) as usize].push((small.index(g, (w % dg) as usize), s.clone()));
                }
                for (w, s) in &lo {
                    parts[(w / d as u32) as usize].push((small.index(1, (w % d as u32) as usize), s.neg()));
                }
                if parts.into_iter().any(|p| !f.contains(&linalg::collect_terms(p))) {
                    return Ok(false);
                }
                let hi = space.apply_letters(&u.iter().map(|(w, s)| (v * dg + w, s.clone())).collect::<SVec>(), g + 1, &block_letters(1, g));
                let lo = space.apply_letters(&bu.iter().map(|(w, s)| (v * d as u32 + w, s.clone())).collect::<SVec>(), 2, &[1]);
                let mut parts: Vec<SVec> = vec![Vec::new(); d];
                for (w, s) in &hi {
                    parts[(w % d as u32) as usize].push((small.index(g, (w / d as u32) as usize), s.clone()));
                }
                for (w, s) in &lo {
                    parts[(w % d as u32) as usize].push((small.index(1, (w / d as u32) as usize), s.neg()));
                }
                if parts.into_iter().any(|p| !f.contains(&linalg::collect_terms(p))) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckePresentation {
    pub mark: String,
    /// Relations c(z) − qz − [z]_b for z running over the basis words of V⊗V,
    /// rendered in filtered coordinates.
    pub relations: Vec<String>,
    pub image_is_e2: bool,
    pub bracket_vanishes: bool,
}

/// Quadratic-inhomogeneous presentation of U for a Hecke braiding with
/// regular mark; `Ok(None)` if the braiding is not of Hecke type.
pub fn hecke_presentation(table: &BracketTable) -> Result<Option<HeckePresentation>> {
    let space = &table.space;
    let Some(h) = space.hecke() else {
        return Ok(None);
    };
    if !h.regular {
        return Err(Error::IrregularMark(h.mark.to_string()));
    }
    if (3..=table.cutoff).any(|n| table.values[n].iter().any(|v| !v.is_empty())) {
        return Err(Error::BadParams("Hecke presentation needs a bracket supported in degree 2".into()));
    }
    let d = space.dim();
    let coords = FilteredCoords::new(d, 2);
    let e2 = table.basis(2);
    let mut images = Vec::new();
    let mut relations = Vec::new();
    let mut all_zero = true;
    for z in 0..(d * d) as u32 {
        let cz = &space.c_columns()[z as usize];
        let u = linalg::axpy(cz, &h.mark.neg(), &[(z, space.one())]);
        let bz = table.apply(2, &u).ok_or_else(|| Error::Internal("Im(c − q) is not inside E_2".into()))?;
        all_zero &= bz.is_empty();
        let mut rel: SVec = u.iter().map(|(w, s)| (coords.index(2, *w as usize), s.clone())).collect();
        rel.extend(bz.iter().map(|(w, s)| (coords.index(1, *w as usize), s.neg())));
        relations.push(coords.render(&linalg::collect_terms(rel)));
        images.push(u);
    }
    let im = Subspace::span(2, d * d, &images);
    let image_is_e2 = &im == e2;
    if !image_is_e2 {
        return Err(Error::Internal("Im(c − q) differs from E_2".into()));
    }
    Ok(Some(HeckePresentation { mark: h.mark.to_string(), relations, image_is_e2, bracket_vanishes: all_zero }))
}

/// b₂(e₁e₀ − e₀e₁) = e₁, b₂(e₂e₀ − e₀e₂) = e₂, b₂(e₂e₁ − mu e₁e₂) = 0 on
/// the gurevich preset with the same `mu`.
pub fn gurevich_bracket(space: &BraidedSpace, mu: &Scalar) -> Result<BracketTable> {
    if space.dim() != 3 {
        return Err(Error::BadParams("the gurevich bracket needs a 3-dimensional space".into()));
    }
    let f = space.field();
    let one = f.one();
    let pair = |a: u32, b: u32, s: Scalar| linalg::collect_terms(vec![(a * 3 + b, one.clone()), (b * 3 + a, s)]);
    let pairs = vec![
        (2, pair(1, 0, one.neg()), vec![(1, one.clone())]),
        (2, pair(2, 0, one.neg()), vec![(2, one.clone())]),
        (2, pair(2, 1, mu.neg()), vec![]),
    ];
    BracketTable::from_pairs(space, 2, &pairs)
}

/// sl₂ on three letters x0, x1, x2 (e, f, h): [x0,x1] = x2, [x2,x0] = 2x0,
/// [x2,x1] = −2x1, as b₂ on the antisymmetric tensors.
pub fn sl2_bracket(space: &BraidedSpace) -> Result<BracketTable> {
    if space.dim() != 3 {
        return Err(Error::BadParams("the sl2 bracket needs a 3-dimensional space".into()));
    }
    let f = space.field();
    let one = f.one();
    let wedge = |a: u32, b: u32| linalg::collect_terms(vec![(a * 3 + b, one.clone()), (b * 3 + a, one.neg())]);
    let pairs = vec![
        (2, wedge(0, 1), vec![(2, one.clone())]),
        (2, wedge(2, 0), vec![(0, f.from_int(2))]),
        (2, wedge(2, 1), vec![(1, f.from_int(-2))]),
    ];
    BracketTable::from_pairs(space, 2, &pairs)
}

/// Extends `table` to degree n by multiplying the E_n basis inside the
/// filtered quotient.
pub fn extend_by_multiplication(table: &BracketTable, n: usize, slack: usize) -> Result<BracketTable> {
    let fq = enveloping_filtration(table, n, slack)?;
    let vals = bracket_from_multiplication(&fq, n)?;
    table.with_degree(n, vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::presets;
    use crate::scalar::field_make;

    #[test]
    fn zero_bracket_is_symmetric_algebra() {
        let f = field_make(1);
        let g = presets::gurevich(f, f.from_int(2), 6).unwrap();
        let t = BracketTable::zero(&g, 5).unwrap();
        validate_bracket(&t).unwrap();
        let fq = enveloping_filtration(&t, 3, 2).unwrap();
        let s = fq.s_dims();
        let sigma: Vec<usize> = s.iter().scan(0, |a, x| { *a += x; Some(*a) }).collect();
        assert_eq!(fq.dims_u(), sigma);
        assert!(matches!(pbw_check(&fq).unwrap().status, PbwStatus::PbwConsistent { .. }));
        assert_eq!(lie_check(&fq), LieVerdict::IsLieUpTo { n: 3, slack: 2 });
    }

    #[test]
    fn gurevich_enveloping() {
        let f = field_make(1);
        let mu = f.from_int(2);
        let g = presets::gurevich(f, mu.clone(), 6).unwrap();
        let t = gurevich_bracket(&g, &mu).unwrap();
        validate_bracket(&t).unwrap();
        let fq = enveloping_filtration(&t, 4, 2).unwrap();
        let v = pbw_check(&fq).unwrap();
        assert_eq!(v.gr_dims, vec![1, 3, 6, 10, 15]);
        let binom: Vec<usize> = (0..=4).map(|n| (n + 1) * (n + 2) * (n + 3) / 6).collect();
        assert_eq!(fq.dims_u()[..=4], binom[..]);
        assert!(matches!(v.status, PbwStatus::PbwConsistent { .. }));
        assert!(matches!(lie_check(&fq), LieVerdict::IsLieUpTo { .. }));
        assert!(primitive_check(&fq, 4).unwrap());
        assert_eq!(bracket_from_multiplication(&fq, 2).unwrap(), t.values(2).to_vec());
        assert!(braiding_stability_check(&fq).unwrap());
    }

    #[test]
    fn sl2_is_classical_pbw() {
        let f = field_make(1);
        let fl = presets::flip(f, 3, 6).unwrap();
        let t = sl2_bracket(&fl).unwrap();
        validate_bracket(&t).unwrap();
        let fq = enveloping_filtration(&t, 4, 2).unwrap();
        let binom: Vec<usize> = (0..=6).map(|n| (n + 1) * (n + 2) * (n + 3) / 6).collect();
        assert_eq!(fq.dims_u()[..=4], binom[..=4]);
        assert!(matches!(pbw_check(&fq).unwrap().status, PbwStatus::PbwConsistent { n: 4, slack: 2 }));
        assert!(primitive_check(&fq, 3).unwrap());
        let p = hecke_presentation(&t).unwrap().unwrap();
        assert!(!p.bracket_vanishes);
        assert_eq!(p.relations.len(), 9);
    }

    #[test]
    fn scalar_root_of_unity_primitives() {
        let f = field_make(3);
        let sc = presets::scalar(f, 2, f.zeta_pow(1), 5).unwrap();
        let t = BracketTable::zero(&sc, 5).unwrap();
        let fq = enveloping_filtration(&t, 4, 1).unwrap();
        assert!(primitive_check(&fq, 4).unwrap());
    }

    #[test]
    fn jacobi_violation_is_caught() {
        let f = field_make(1);
        let fl = presets::flip(f, 3, 5).unwrap();
        let one = f.one();
        let wedge = |a: u32, b: u32| linalg::collect_terms(vec![(a * 3 + b, one.clone()), (b * 3 + a, one.neg())]);
        let pairs = vec![
            (2, wedge(0, 1), vec![(2, one.clone())]),
            (2, wedge(1, 2), vec![(0, one.clone())]),
            (2, wedge(2, 0), vec![(0, one.clone())]),
        ];
        let t = BracketTable::from_pairs(&fl, 2, &pairs).unwrap();
        validate_bracket(&t).unwrap();
        let fq = enveloping_filtration(&t, 3, 0).unwrap();
        assert!(matches!(lie_check(&fq), LieVerdict::FailsCertified { .. }));
    }

    #[test]
    fn hecke_presentations() {
        let f = field_make(1);
        let fl = presets::flip(f, 2, 4).unwrap();
        let p = hecke_presentation(&BracketTable::zero(&fl, 2).unwrap()).unwrap().unwrap();
        assert!(p.image_is_e2 && p.bracket_vanishes);
        let rack = presets::d4_rack(f, 4).unwrap();
        assert!(hecke_presentation(&BracketTable::zero(&rack, 2).unwrap()).unwrap().is_none());
        let f4 = field_make(4);
        let sc = presets::scalar(f4, 2, f4.zeta_pow(1), 4).unwrap();
        assert!(matches!(hecke_presentation(&BracketTable::zero(&sc, 2).unwrap()), Err(Error::IrregularMark(_))));
    }

    #[test]
    fn domain_errors() {
        let f = field_make(1);
        let fl = presets::flip(f, 2, 4).unwrap();
        let bad = vec![(2, vec![(0, f.one())], vec![(0, f.one())])];
        assert!(matches!(BracketTable::from_pairs(&fl, 2, &bad), Err(Error::DomainMismatch(_))));
    }
}
