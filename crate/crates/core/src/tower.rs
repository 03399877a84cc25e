//! Graded bialgebra quotients T(V,c)/I presented by ideal towers, the
//! symmetric-algebra step and the strongness degree.

use serde::Serialize;

use crate::braided::{block_rotation, matsumoto_lift, BraidedSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, kernel_of_map, RrefBuilder, SVec, Scalar, Subspace};
use crate::par;
use crate::tensor::{delta_component, nichols_kernels, primitives_e};

/// Per-degree components J_0, …, J_D of a two-sided ideal.
#[derive(Clone, Debug)]
pub struct IdealTower {
    space: BraidedSpace,
    cutoff: usize,
    comps: Vec<Subspace>,
    /// Class of every word of degree n in V^⊗n/J_n coordinates.
    classes: Vec<Vec<SVec>>,
    /// For each closure or step: the degrees and dimensions of what was adjoined.
    log: Vec<Vec<(usize, usize)>>,
}

/// Who supplied the generators: user mistakes and implementation faults are
/// reported differently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    User,
    Primitive,
}

fn class_table(space: &BraidedSpace, j: &Subspace) -> Vec<SVec> {
    let one = space.one();
    (0..j.ambient() as u32).map(|w| j.class_of(w, &one)).collect()
}

impl IdealTower {
    /// The zero ideal: the quotient is T(V,c) itself.
    pub fn zero(space: &BraidedSpace, cutoff: usize) -> Result<Self> {
        space.check_degree(cutoff)?;
        let comps: Vec<Subspace> = (0..=cutoff).map(|n| Subspace::zero(n, space.words(n))).collect();
        let classes = comps.iter().map(|j| class_table(space, j)).collect();
        Ok(IdealTower { space: space.clone(), cutoff, comps, classes, log: Vec::new() })
    }

    pub fn space(&self) -> &BraidedSpace {
        &self.space
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn component(&self, n: usize) -> &Subspace {
        &self.comps[n]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.comps
    }

    pub fn generator_log(&self) -> &[Vec<(usize, usize)>] {
        &self.log
    }

    /// dim V^⊗n − dim J_n for n ≤ D.
    pub fn dims(&self) -> Vec<usize> {
        self.comps.iter().map(|j| j.codim()).collect()
    }

    /// Class of a vector of degree n in V^⊗n/J_n coordinates.
    pub fn class(&self, n: usize, x: &[(u32, Scalar)]) -> SVec {
        let mut terms = Vec::new();
        for (w, v) in x {
            for (q, s) in &self.classes[n][*w as usize] {
                terms.push((*q, s * v));
            }
        }
        linalg::collect_terms(terms)
    }

    /// (π_a⊗π_b)Δ^{a,b}(x), in coordinates q_a·codim(J_b) + q_b.
    fn split_class(&self, a: usize, b: usize, delta: &[SVec], x: &[(u32, Scalar)]) -> SVec {
        let d = self.space.dim();
        let db = d.pow(b as u32);
        let cb = self.comps[b].codim() as u32;
        let mut terms = Vec::new();
        for (w, v) in x {
            for (t, s) in &delta[*w as usize] {
                let (u, r) = (*t as usize / db, *t as usize % db);
                let sv = s * v;
                for (q1, s1) in &self.classes[a][u] {
                    let s1v = s1 * &sv;
                    for (q2, s2) in &self.classes[b][r] {
                        terms.push((q1 * cb + q2, &s1v * s2));
                    }
                }
            }
        }
        linalg::collect_terms(terms)
    }
}

/// Smallest tower containing the generators (indexed by degree) that is
/// closed under concatenation with V on both sides up to `cutoff`.
pub fn ideal_closure(space: &BraidedSpace, generators: &[Subspace], cutoff: usize) -> Result<IdealTower> {
    let base = IdealTower::zero(space, cutoff)?;
    close(&base, generators, Origin::User)
}

fn close(base: &IdealTower, generators: &[Subspace], origin: Origin) -> Result<IdealTower> {
    let space = &base.space;
    let d = space.dim();
    let field = space.field();
    let cutoff = base.cutoff;
    for g in generators.iter() {
        if g.degree() > cutoff && g.dim() > 0 {
            return Err(Error::DegreeBudgetExceeded { degree: g.degree(), budget: cutoff });
        }
        if g.degree() < 2 && g.dim() > 0 {
            return Err(Error::BadParams("generators must have degree at least 2".into()));
        }
    }
    let gen_at = |n: usize| generators.iter().filter(move |g| g.degree() == n);
    let mut out = IdealTower::zero(space, cutoff)?;
    let mut adjoined = Vec::new();
    for n in 2..=cutoff {
        let prev = &out.comps[n - 1];
        let prev_classes = &out.classes[n - 1];
        let cprev = prev.codim();
        // W = (V^⊗(n−1)/J_{n−1}) ⊗ V, and J_{n−1}⊗V is the kernel of V^⊗n → W.
        let to_w = |x: &[(u32, Scalar)]| -> SVec {
            let mut terms = Vec::new();
            for (w, v) in x {
                let (u, l) = (*w as usize / d, *w as usize % d);
                for (q, s) in &prev_classes[u] {
                    terms.push((q * d as u32 + l as u32, s * v));
                }
            }
            linalg::collect_terms(terms)
        };
        let mut rb = RrefBuilder::new();
        let shift = space.words(n - 1) as u32;
        for r in prev.rows() {
            for v in 0..d as u32 {
                let lifted: SVec = r.iter().map(|(w, s)| (v * shift + w, s.clone())).collect();
                rb.insert(&to_w(&lifted));
            }
        }
        for r in base.comps[n].rows() {
            rb.insert(&to_w(r));
        }
        let mut gdim = 0;
        for g in gen_at(n) {
            for r in g.rows() {
                if rb.insert(&to_w(r)) {
                    gdim += 1;
                }
            }
        }
        if gdim > 0 {
            adjoined.push((n, gdim));
        }
        let r_space = rb.finish(n, cprev * d);
        let one = space.one();
        let elem = |w: u32| to_w(&[(w, one.clone())]);
        let j = kernel_of_map(field, n, space.words(n), r_space.codim(), |w| r_space.quotient_coords(&elem(w)));
        out.classes[n] = class_table(space, &j);
        out.comps[n] = j;
    }
    out.log = base.log.clone();
    out.log.push(adjoined);
    for g in generators {
        check_generators(&out, g, origin)?;
    }
    Ok(out)
}

fn fail(origin: Origin, degree: usize, witness: String) -> Error {
    match origin {
        Origin::User => Error::NotACoideal { degree, witness },
        Origin::Primitive => Error::Internal(format!("primitive-generated ideal is not a coideal in degree {degree}: {witness}")),
    }
}

/// Coideal and braiding-stability conditions on a generating set.
fn check_generators(t: &IdealTower, g: &Subspace, origin: Origin) -> Result<()> {
    let n = g.degree();
    let space = &t.space;
    let d = space.dim();
    for a in 1..n {
        let delta = delta_component(space, a, n - a)?;
        for r in g.rows() {
            if !t.split_class(a, n - a, &delta, r).is_empty() {
                return Err(fail(origin, n, format!("Δ^{{{a},{}}} of a generator leaves J⊗T + T⊗J", n - a)));
            }
        }
    }
    // c^{1,n}(V⊗g) ⊆ J_n⊗V and c^{n,1}(g⊗V) ⊆ V⊗J_n
    let right = matsumoto_lift(&block_rotation(1, n)).letters;
    let left = matsumoto_lift(&block_rotation(n, 1)).letters;
    let dn = space.words(n) as u32;
    for r in g.rows() {
        for v in 0..d as u32 {
            let x: SVec = r.iter().map(|(w, s)| (v * dn + w, s.clone())).collect();
            let y = space.apply_letters(&x, n + 1, &right);
            if !class_tensor_v(t, n, &y, true).is_empty() {
                return Err(fail(origin, n, "braiding V past a generator leaves J⊗V".into()));
            }
            let x: SVec = r.iter().map(|(w, s)| (w * d as u32 + v, s.clone())).collect();
            let x = linalg::collect_terms(x);
            let y = space.apply_letters(&x, n + 1, &left);
            if !class_tensor_v(t, n, &y, false).is_empty() {
                return Err(fail(origin, n, "braiding a generator past V leaves V⊗J".into()));
            }
        }
    }
    Ok(())
}

/// (π_n⊗id) on V^⊗n⊗V if `first`, else (id⊗π_n) on V⊗V^⊗n.
fn class_tensor_v(t: &IdealTower, n: usize, y: &[(u32, Scalar)], first: bool) -> SVec {
    let d = t.space.dim();
    let dn = t.space.words(n);
    let cn = t.comps[n].codim() as u32;
    let mut terms = Vec::new();
    for (w, s) in y {
        let w = *w as usize;
        if first {
            let (u, l) = (w / d, w % d);
            for (q, x) in &t.classes[n][u] {
                terms.push((q * d as u32 + l as u32, x * s));
            }
        } else {
            let (l, u) = (w / dn, w % dn);
            for (q, x) in &t.classes[n][u] {
                terms.push((l as u32 * cn + q, x * s));
            }
        }
    }
    linalg::collect_terms(terms)
}

/// The subspace K_n ⊇ J_n of V^⊗n with K_n/J_n = E_n(T/J).
pub fn quotient_primitives(t: &IdealTower, n: usize) -> Result<Subspace> {
    let space = &t.space;
    if n > t.cutoff {
        return Err(Error::DegreeBudgetExceeded { degree: n, budget: t.cutoff });
    }
    if n <= 1 {
        return Ok(t.comps[n].clone());
    }
    let deltas = (1..n).map(|a| delta_component(space, a, n - a)).collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::new();
    let mut total = 0u32;
    for a in 1..n {
        offsets.push(total);
        total += (t.comps[a].codim() * t.comps[n - a].codim()) as u32;
    }
    let one = space.one();
    let images = par::map_range(space.words(n), |w| {
        let mut out = Vec::new();
        for (k, a) in (1..n).enumerate() {
            let img = t.split_class(a, n - a, &deltas[k], &[(w as u32, one.clone())]);
            out.extend(img.into_iter().map(|(i, s)| (i + offsets[k], s)));
        }
        out
    });
    Ok(kernel_of_map(space.field(), n, space.words(n), total as usize, |w| images[w as usize].clone()))
}

/// Rows of `k` whose pivots are free for `j`: canonical lifts of K/J.
pub fn complement_rows(k: &Subspace, j: &Subspace) -> Vec<SVec> {
    k.rows().iter().filter(|r| j.free_coord(r[0].0).is_some()).cloned().collect()
}

/// S(B) = B/(E(B)) for B = T/J: adjoins all quotient primitives of degrees
/// 2..D and closes again.
pub fn symmetric_step(t: &IdealTower) -> Result<IdealTower> {
    let mut gens = Vec::new();
    for n in 2..=t.cutoff {
        let k = quotient_primitives(t, n)?;
        if k.dim() > t.comps[n].dim() {
            let reps = complement_rows(&k, &t.comps[n]);
            gens.push(Subspace::from_rref_rows(n, k.ambient(), reps));
        }
    }
    if gens.is_empty() {
        let mut same = t.clone();
        same.log.push(Vec::new());
        return Ok(same);
    }
    close(t, &gens, Origin::Primitive)
}

/// Whether the last step adjoined nothing.
pub fn is_fixpoint_step(t: &IdealTower) -> bool {
    t.log.last().is_some_and(|l| l.is_empty())
}

/// For the k-th iterate: Δ̄^{a,b} is injective on T/J for all a,b ≥ 1 with
/// a+b ≤ min(k+1, D).
pub fn injectivity_ladder_check(t: &IdealTower, k: usize) -> Result<bool> {
    let space = &t.space;
    for n in 2..=(k + 1).min(t.cutoff) {
        for a in 1..n {
            let delta = delta_component(space, a, n - a)?;
            let one = space.one();
            let cb = (t.comps[a].codim() * t.comps[n - a].codim()).max(1);
            let ker = kernel_of_map(space.field(), n, space.words(n), cb, |w| {
                t.split_class(a, n - a, &delta, &[(w, one.clone())])
            });
            if ker != t.comps[n] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SdegStatus {
    Certified,
    LowerBoundAtCutoff,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepTrace {
    pub dims: Vec<usize>,
    pub adjoined: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SdegVerdict {
    pub value: usize,
    pub status: SdegStatus,
    /// Which criterion certified the value, if any.
    pub certificate: Option<String>,
    pub tower_trace: Vec<StepTrace>,
}

/// The iterates T, S(T), S^[2](T), … up to the first fixpoint in degrees ≤ D.
/// At most D−1 steps are non-trivial, since the k-th iterate has no
/// primitives in degrees 2..k+1.
pub fn tower_iterates(space: &BraidedSpace, cutoff: usize) -> Result<Vec<IdealTower>> {
    let mut iters = vec![IdealTower::zero(space, cutoff)?];
    loop {
        let next = symmetric_step(iters.last().unwrap())?;
        if is_fixpoint_step(&next) {
            break;
        }
        let k = iters.len();
        if !injectivity_ladder_check(&next, k)? {
            return Err(Error::Internal(format!("iterate {k} has a non-injective low-degree coproduct")));
        }
        iters.push(next);
        if iters.len() > cutoff + 1 {
            return Err(Error::Internal("tower failed to stabilize within the cutoff".into()));
        }
    }
    Ok(iters)
}

pub fn sdeg(space: &BraidedSpace, cutoff: usize) -> Result<SdegVerdict> {
    if cutoff < 2 {
        return Err(Error::BadParams("sdeg needs a cutoff of at least 2".into()));
    }
    let iters = tower_iterates(space, cutoff)?;
    let value = iters.len() - 1;
    let last = iters.last().unwrap();
    let trace = iters
        .iter()
        .skip(1)
        .map(|t| StepTrace { dims: t.dims(), adjoined: t.log.last().cloned().unwrap_or_default() })
        .collect();
    let mut certificate = None;
    if let Some(nz) = last.dims().iter().position(|&x| x == 0) {
        certificate = Some(format!("graded component {nz} of the stable quotient vanishes"));
    } else if let Some(h) = space.hecke() {
        if h.regular {
            let e2 = primitives_e(space, 2)?.dim();
            let expected = usize::from(e2 > 0);
            if value != expected {
                return Err(Error::Internal(format!(
                    "Hecke braiding with regular mark gave {value} steps, expected {expected}"
                )));
            }
            certificate = Some(format!("Hecke type with regular mark {}", h.mark));
        }
    }
    let status = if certificate.is_some() { SdegStatus::Certified } else { SdegStatus::LowerBoundAtCutoff };
    Ok(SdegVerdict { value, status, certificate, tower_trace: trace })
}

/// Degree n read from the (n−1)-th iterate, or the stable one if earlier.
pub fn nichols_via_tower(space: &BraidedSpace, cutoff: usize) -> Result<Vec<usize>> {
    let iters = tower_iterates(space, cutoff)?;
    Ok((0..=cutoff)
        .map(|n| {
            let k = n.saturating_sub(1).min(iters.len() - 1);
            iters[k].comps[n].codim()
        })
        .collect())
}

/// The closure of E_2 agrees with ker Γ_n in every degree ≤ D.
pub fn is_quadratic(space: &BraidedSpace, cutoff: usize) -> Result<bool> {
    if cutoff < 3 {
        return Err(Error::BadParams("quadraticity needs a cutoff of at least 3".into()));
    }
    let e2 = primitives_e(space, 2)?;
    let t = ideal_closure(space, &[e2], cutoff)?;
    let ker = nichols_kernels(space, cutoff)?;
    Ok((0..=cutoff).all(|n| t.comps[n] == ker[n]))
}
