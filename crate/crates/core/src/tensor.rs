//! Graded components of the braided tensor bialgebra T(V,c).
//!
//! V^⊗a ⊗ V^⊗b is identified with V^⊗(a+b) by concatenating words, so every
//! component Δ^{a,b} is a column map on the words of length a+b.

use std::sync::Arc;

use crate::braided::{apply_cols, shuffles, BraidedSpace, MemoKey, Perm};
use crate::error::Result;
use crate::linalg::{self, KernelBuilder, SVec, Scalar, Subspace};
use crate::par;

/// Δ^{a,b}: column `w` is Σ over (a,b)-shuffles σ of ρ(ι(σ^{−1}))(e_w).
pub fn delta_component(space: &BraidedSpace, a: usize, b: usize) -> Result<Arc<Vec<SVec>>> {
    let n = a + b;
    space.check_degree(n)?;
    if let Some(m) = space.memo_get(MemoKey::Delta(a, b)) {
        return Ok(m);
    }
    let lifts: Vec<Vec<i32>> = shuffles(a, b)
        .iter()
        .map(|(s, _)| crate::braided::matsumoto_lift(&s.inverse()).letters)
        .collect();
    let one = space.one();
    let cols = par::map_range(space.words(n), |w| {
        let e = [(w as u32, one.clone())];
        let mut terms = Vec::new();
        for l in &lifts {
            terms.extend(space.apply_letters(&e, n, l));
        }
        linalg::collect_terms(terms)
    });
    Ok(space.memo_put(MemoKey::Delta(a, b), cols))
}

/// Γ_{a,b} = m∘Δ^{a,b}; juxtaposition is the identity on word coordinates.
pub fn gamma_block(space: &BraidedSpace, a: usize, b: usize) -> Result<Arc<Vec<SVec>>> {
    delta_component(space, a, b)
}

/// The quantum symmetrizer Γ_n with its rank.
#[derive(Clone, Debug)]
pub struct Symmetrizer {
    pub n: usize,
    pub matrix: Vec<SVec>,
    pub rank: usize,
}

/// Tensor product of column maps `f: V^⊗p → V^⊗p'` and `g: V^⊗r → V^⊗r'`
/// applied to a vector of V^⊗(p+r).
fn tensor_apply(
    d: usize,
    r: usize,
    r_out: usize,
    f: &dyn Fn(usize) -> SVec,
    g: &dyn Fn(usize) -> SVec,
    x: &[(u32, Scalar)],
) -> SVec {
    let dr = d.pow(r as u32);
    let dr_out = d.pow(r_out as u32) as u32;
    let mut terms = Vec::new();
    for (w, v) in x {
        let (u, t) = (*w as usize / dr, *w as usize % dr);
        let fu = f(u);
        let gt = g(t);
        for (i, s) in &fu {
            let sv = s * v;
            for (j, s2) in &gt {
                terms.push((i * dr_out + j, &sv * s2));
            }
        }
    }
    linalg::collect_terms(terms)
}

fn identity_col(one: &Scalar) -> impl Fn(usize) -> SVec + '_ {
    move |w| vec![(w as u32, one.clone())]
}

/// Γ_n via Γ_n = m(Γ_{n−1}⊗Id)Δ^{n−1,1}.
pub fn gamma(space: &BraidedSpace, n: usize) -> Result<Symmetrizer> {
    space.check_degree(n)?;
    let d = space.dim();
    let one = space.one();
    let mut cur: Vec<SVec> = vec![vec![(0, one.clone())]];
    for k in 1..=n {
        let delta = delta_component(space, k - 1, 1)?;
        let prev = &cur;
        let f = |u: usize| prev[u].clone();
        let id = identity_col(&one);
        cur = (0..space.words(k))
            .map(|w| tensor_apply(d, 1, 1, &f, &id, &delta[w]))
            .collect();
    }
    let rank = rank_of_columns(space, n, &cur);
    Ok(Symmetrizer { n, matrix: cur, rank })
}

/// Σ_σ ρ(ι(σ))(e_w) over all of S_n, for small n.
pub fn gamma_direct(space: &BraidedSpace, n: usize) -> Result<Vec<SVec>> {
    space.check_degree(n)?;
    let perms = Perm::all(n);
    let lifts: Vec<Vec<i32>> = perms.iter().map(|p| crate::braided::matsumoto_lift(p).letters).collect();
    let one = space.one();
    Ok((0..space.words(n))
        .map(|w| {
            let e = [(w as u32, one.clone())];
            let mut t = Vec::new();
            for l in &lifts {
                t.extend(space.apply_letters(&e, n, l));
            }
            linalg::collect_terms(t)
        })
        .collect())
}

fn rank_of_columns(space: &BraidedSpace, n: usize, cols: &[SVec]) -> usize {
    let words = space.words(n);
    let mut kb = KernelBuilder::new(space.field(), words);
    for w in (0..cols.len()).rev() {
        kb.push_column(w as u32, &cols[w]);
    }
    kb.rank()
}

/// Union-find components of the words of length n under the support of all
/// c_i. Every ρ(β) preserves the span of each component.
pub fn orbit_blocks(space: &BraidedSpace, n: usize) -> Vec<Vec<u32>> {
    let words = space.words(n);
    let mut parent: Vec<u32> = (0..words as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let one = space.one();
    for w in 0..words {
        for i in 1..n {
            for (t, _) in space.apply_generator(&[(w as u32, one.clone())], n, i, false) {
                let (a, b) = (find(&mut parent, w as u32), find(&mut parent, t));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for w in 0..words as u32 {
        let r = find(&mut parent, w);
        groups.entry(r).or_default().push(w);
    }
    groups.into_values().collect()
}

/// Kernel of `x ↦ (f_1 x, …, f_k x)` for column maps preserving the orbit
/// blocks, computed block by block.
pub fn blockwise_kernel(space: &BraidedSpace, n: usize, maps: &[Arc<Vec<SVec>>]) -> Subspace {
    let words = space.words(n);
    if maps.is_empty() {
        return Subspace::full(space.field(), n, words);
    }
    let blocks = orbit_blocks(space, n);
    let parts = par::map_vec(&blocks, |blk| {
        let mut kb = KernelBuilder::with_sparse_target(space.field(), blk.len() * maps.len());
        for &w in blk.iter().rev() {
            kb.push_column(w, &stacked(maps, words, w as usize));
        }
        kb.finish()
    });
    let mut rows: Vec<SVec> = parts.into_iter().flatten().collect();
    rows.sort_by_key(|r| r[0].0);
    Subspace::from_rref_rows(n, words, rows)
}

fn stacked(maps: &[Arc<Vec<SVec>>], words: usize, w: usize) -> SVec {
    let mut out = Vec::new();
    for (k, m) in maps.iter().enumerate() {
        let off = (k * words) as u32;
        out.extend(m[w].iter().map(|(i, v)| (i + off, v.clone())));
    }
    out
}

/// E_n(V,c) = ⋂_{a+b=n, a,b≥1} ker Δ^{a,b}; zero for n ≤ 1.
pub fn primitives_e(space: &BraidedSpace, n: usize) -> Result<Subspace> {
    space.check_degree(n)?;
    if n <= 1 {
        return Ok(Subspace::zero(n, space.words(n)));
    }
    let maps = (1..n).map(|a| delta_component(space, a, n - a)).collect::<Result<Vec<_>>>()?;
    Ok(blockwise_kernel(space, n, &maps))
}

/// ker Γ_n for 0 ≤ n ≤ D, by the recursion
/// ker Γ_n = {x : Δ^{n−1,1}x ∈ ker Γ_{n−1} ⊗ V}.
pub fn nichols_kernels(space: &BraidedSpace, top: usize) -> Result<Vec<Subspace>> {
    space.check_degree(top)?;
    let d = space.dim();
    let mut out = vec![Subspace::zero(0, 1)];
    for n in 1..=top {
        let prev = &out[n - 1];
        let delta = delta_component(space, n - 1, 1)?;
        let one = space.one();
        let target = prev.codim() * d;
        let k = crate::linalg::kernel_of_map(space.field(), n, space.words(n), target, |w| {
            let mut terms = Vec::new();
            for (t, v) in &delta[w as usize] {
                let (u, l) = (*t as usize / d, *t as usize % d);
                for (q, s) in prev.class_of(u as u32, &one) {
                    terms.push((q * d as u32 + l as u32, &s * v));
                }
            }
            linalg::collect_terms(terms)
        });
        out.push(k);
    }
    Ok(out)
}

/// [rank Γ_0, …, rank Γ_D].
pub fn nichols_dims(space: &BraidedSpace, top: usize) -> Result<Vec<usize>> {
    Ok(nichols_kernels(space, top)?.iter().map(|k| k.codim()).collect())
}

/// Γ_{a+b} = m(Γ_a⊗Γ_b)Δ^{a,b}, compared exactly.
pub fn gamma_factorization_check(space: &BraidedSpace, a: usize, b: usize) -> Result<bool> {
    let n = a + b;
    let ga = gamma(space, a)?;
    let gb = gamma(space, b)?;
    let gn = gamma(space, n)?;
    let delta = delta_component(space, a, b)?;
    let f = |u: usize| ga.matrix[u].clone();
    let g = |t: usize| gb.matrix[t].clone();
    Ok((0..space.words(n)).all(|w| tensor_apply(space.dim(), b, b, &f, &g, &delta[w]) == gn.matrix[w]))
}

/// (Δ^{a,b}⊗Id)Δ^{a+b,c} = (Id⊗Δ^{b,c})Δ^{a,b+c} on every basis word.
pub fn coassociativity_check(space: &BraidedSpace, a: usize, b: usize, c: usize) -> Result<bool> {
    let n = a + b + c;
    let left_outer = delta_component(space, a + b, c)?;
    let left_inner = delta_component(space, a, b)?;
    let right_outer = delta_component(space, a, b + c)?;
    let right_inner = delta_component(space, b, c)?;
    let one = space.one();
    let d = space.dim();
    let li = |u: usize| left_inner[u].clone();
    let ri = |t: usize| right_inner[t].clone();
    let id = identity_col(&one);
    Ok((0..space.words(n)).all(|w| {
        let l = tensor_apply(d, c, c, &li, &id, &left_outer[w]);
        let r = tensor_apply(d, b + c, b + c, &id, &ri, &right_outer[w]);
        l == r
    }))
}

/// Δ^{a,n−a}(xy) against the braided product of Δ(x) and Δ(y), for x of
/// degree p and y of degree r.
pub fn multiplicativity_check(space: &BraidedSpace, p: usize, x: &SVec, r: usize, y: &SVec, a: usize) -> Result<bool> {
    let n = p + r;
    let d = space.dim();
    let xy = concat(d, r, x, y);
    let lhs = apply_cols(&delta_component(space, a, n - a)?, &xy);
    let mut terms = Vec::new();
    for i in 0..=p.min(a) {
        let k = a - i;
        if k > r {
            continue;
        }
        let j = p - i;
        let l = r - k;
        let dx = apply_cols(&delta_component(space, i, j)?, x);
        let dy = apply_cols(&delta_component(space, k, l)?, y);
        let blk = space.braiding_block(j, k)?;
        for (wx, vx) in &dx {
            let (x1, x2) = (*wx as usize / d.pow(j as u32), *wx as usize % d.pow(j as u32));
            for (wy, vy) in &dy {
                let (y1, y2) = (*wy as usize / d.pow(l as u32), *wy as usize % d.pow(l as u32));
                let mid = x2 * d.pow(k as u32) + y1;
                let coef = vx * vy;
                for (m2, s) in &blk[mid] {
                    // m2 = y1'·x2' has length k+j
                    let word = ((x1 * d.pow((k + j) as u32) + *m2 as usize) * d.pow(l as u32)) + y2;
                    terms.push((word as u32, s * &coef));
                }
            }
        }
    }
    Ok(lhs == linalg::collect_terms(terms))
}

/// Concatenation product V^⊗p × V^⊗r → V^⊗(p+r).
pub fn concat(d: usize, r: usize, x: &[(u32, Scalar)], y: &[(u32, Scalar)]) -> SVec {
    let dr = d.pow(r as u32) as u32;
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * dr + j, a * b));
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::presets;
    use crate::error::Error;
    use crate::scalar::{field_make, q_factorial, q_int};
    use proptest::prelude::*;

    #[test]
    fn delta_examples() {
        let f = field_make(1);
        let fl = presets::flip(f, 2, 6).unwrap();
        let d11 = delta_component(&fl, 1, 1).unwrap();
        // x⊗y = word 1
        assert_eq!(d11[1], vec![(1, f.one()), (2, f.one())]);
        let d03 = delta_component(&fl, 0, 3).unwrap();
        assert!(d03.iter().enumerate().all(|(w, c)| c == &vec![(w as u32, f.one())]));
        let f5 = field_make(5);
        let q = f5.zeta_pow(2);
        let sc = presets::scalar(f5, 1, q.clone(), 6).unwrap();
        let d = delta_component(&sc, 1, 1).unwrap();
        assert_eq!(d[0], vec![(0, &f5.one() + &q)]);
    }

    #[test]
    fn gamma_examples() {
        let f = field_make(4);
        let q = f.zeta_pow(1);
        let sc = presets::scalar(f, 2, q.clone(), 6).unwrap();
        for n in 0..5 {
            let g = gamma(&sc, n).unwrap();
            let qf = q_factorial(n as u32, &q);
            for (w, col) in g.matrix.iter().enumerate() {
                if qf.is_zero() {
                    assert!(col.is_empty());
                } else {
                    assert_eq!(col, &vec![(w as u32, qf.clone())]);
                }
            }
            // Γ_{n,1} = (n+1)_q Id
            let g1 = gamma_block(&sc, n, 1).unwrap();
            let qi = q_int(n as u32 + 1, &q);
            assert!(g1.iter().enumerate().all(|(w, c)| if qi.is_zero() { c.is_empty() } else { c == &vec![(w as u32, qi.clone())] }));
        }
        // Γ_2 = Id + c
        let f1 = field_make(1);
        let rack = presets::d4_rack(f1, 6).unwrap();
        let g2 = gamma(&rack, 2).unwrap();
        for w in 0..16 {
            let mut expect = rack.c_columns()[w].clone();
            expect = linalg::add(&expect, &[(w as u32, f1.one())]);
            assert_eq!(g2.matrix[w], expect);
        }
    }

    #[test]
    fn recursion_matches_direct_sum() {
        let f = field_make(1);
        let g = presets::gurevich(f, f.from_int(2), 6).unwrap();
        for n in 0..5 {
            assert_eq!(gamma(&g, n).unwrap().matrix, gamma_direct(&g, n).unwrap());
        }
    }

    #[test]
    fn primitives_examples() {
        let f = field_make(1);
        let fl = presets::flip(f, 2, 6).unwrap();
        let e2 = primitives_e(&fl, 2).unwrap();
        let expect = Subspace::span(2, 4, &[vec![(1, f.one()), (2, f.from_int(-1))]]);
        assert_eq!(e2, expect);
        let rack = presets::d4_rack(f, 6).unwrap();
        assert_eq!(primitives_e(&rack, 2).unwrap().dim(), 8);
        // dimension 12 and 32 were cross-checked by an independent sympy computation
        assert_eq!(primitives_e(&rack, 3).unwrap().dim(), 12);
        assert_eq!(primitives_e(&rack, 4).unwrap().dim(), 32);
        assert!(matches!(primitives_e(&rack, 7), Err(Error::DegreeBudgetExceeded { .. })));
    }

    #[test]
    fn nichols_examples() {
        let f = field_make(4);
        let sc = presets::scalar(f, 2, f.zeta_pow(1), 6).unwrap();
        assert_eq!(nichols_dims(&sc, 6).unwrap(), vec![1, 2, 4, 8, 0, 0, 0]);
        let f1 = field_make(1);
        let fl = presets::flip(f1, 2, 6).unwrap();
        assert_eq!(nichols_dims(&fl, 4).unwrap(), vec![1, 2, 3, 4, 5]);
        let m = f1.from_int(-1);
        let ql = presets::quantum_linear(f1, vec![vec![m.clone(), f1.from_int(2)], vec![f1.from_rational(crate::scalar::Rational::new(1, 2)), m]], 6).unwrap();
        assert_eq!(nichols_dims(&ql, 3).unwrap(), vec![1, 2, 1, 0]);
        // oracle: ranks of the direct symmetrizer
        let rack = presets::d4_rack(f1, 6).unwrap();
        let dims = nichols_dims(&rack, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(dims[n], rank_of_columns(&rack, n, &gamma_direct(&rack, n).unwrap()));
        }
    }

    #[test]
    fn structural_identities() {
        let f = field_make(1);
        let rack = presets::d4_rack(f, 6).unwrap();
        assert!(gamma_factorization_check(&rack, 2, 1).unwrap());
        assert!(gamma_factorization_check(&rack, 0, 3).unwrap());
        let g = presets::gurevich(f, f.from_int(2), 6).unwrap();
        for (a, b, c) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2)] {
            assert!(coassociativity_check(&g, a, b, c).unwrap());
            assert!(coassociativity_check(&rack, a, b, c).unwrap());
        }
        // E_2 = ker(Id + c)
        let idc: Vec<SVec> = (0..9).map(|w| linalg::add(&g.c_columns()[w], &[(w as u32, f.one())])).collect();
        let k = crate::linalg::kernel_of_map(f, 2, 9, 9, |w| idc[w as usize].clone());
        assert_eq!(k, primitives_e(&g, 2).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn delta_is_multiplicative(p in 1usize..3, r in 1usize..3, seed in proptest::collection::vec(-2i64..3, 18), a in 0usize..5) {
            let f = field_make(1);
            let g = presets::gurevich(f, f.from_int(2), 6).unwrap();
            let a = a.min(p + r);
            let mk = |len: usize, off: usize| linalg::collect_terms((0..3usize.pow(len as u32)).map(|w| (w as u32, f.from_int(seed[(w + off) % seed.len()]))).collect());
            let x = mk(p, 0);
            let y = mk(r, 7);
            prop_assert!(multiplicativity_check(&g, p, &x, r, &y, a).unwrap());
        }
    }
}
