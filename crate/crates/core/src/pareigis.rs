//! The ζ-eigenspaces V^⊗n(ζ), the operators Π_ζⁿ, Pareigis brackets
//! [x]_ζⁿ = b_n Π_ζⁿ(x) and exact checkers for the identities PL1–PL3.

use serde::Serialize;

use crate::braided::{BraidedSpace, Perm};
use crate::enveloping::BracketTable;
use crate::error::{Error, Result};
use crate::linalg::{self, kernel_of_map, KernelBuilder, SVec, Scalar, Subspace};
use crate::scalar::root_order;
use crate::tensor::primitives_e;

/// PL checks enumerate S_n; beyond this degree they are refused.
pub const PL_MAX_DEGREE: usize = 6;

#[derive(Clone, Debug)]
pub struct ZetaSpace {
    pub n: usize,
    pub zeta: Scalar,
    pub subspace: Subspace,
}

/// V^⊗(n+1)(−1, ζ) ⊆ V ⊗ V^⊗n(ζ).
#[derive(Clone, Debug)]
pub struct MixedZetaSpace {
    pub n: usize,
    pub zeta: Scalar,
    pub subspace: Subspace,
}

fn check_primitive(n: usize, zeta: &Scalar) -> Result<()> {
    if root_order(zeta) != Some(n as u32) {
        return Err(Error::RootOrderMismatch(format!("{zeta} is not a primitive {n}-th root of unity")));
    }
    Ok(())
}

/// Largest subspace of `w` stable under the given generators c_i.
fn stable_part(space: &BraidedSpace, n: usize, mut w: Subspace, gens: &[usize]) -> Subspace {
    loop {
        if w.dim() == 0 || gens.is_empty() {
            return w;
        }
        let codim = w.codim();
        let rows = w.rows().to_vec();
        let k = kernel_of_map(space.field(), 0, rows.len(), gens.len() * codim, |j| {
            let mut out = Vec::new();
            for (g, &i) in gens.iter().enumerate() {
                let img = space.apply_generator(&rows[j as usize], n, i, false);
                out.extend(w.quotient_coords(&img).into_iter().map(|(c, s)| (c + (g * codim) as u32, s)));
            }
            out
        });
        if k.dim() == rows.len() {
            return w;
        }
        let vecs: Vec<SVec> = k.rows().iter().map(|a| combine(a, &rows)).collect();
        w = Subspace::span(n, w.ambient(), &vecs);
    }
}

fn combine(coeffs: &[(u32, Scalar)], rows: &[SVec]) -> SVec {
    let mut v: SVec = Vec::new();
    for (j, a) in coeffs {
        v = linalg::axpy(&v, a, &rows[*j as usize]);
    }
    v
}

/// The fixpoint of W ↦ {x ∈ W : c_i x ∈ W} starting from ⋂ ker(c_i² − ζ²),
/// without any condition on the order of ζ.
pub(crate) fn eigen_space(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<Subspace> {
    space.check_degree(n)?;
    let words = space.words(n);
    if n < 2 {
        return Ok(Subspace::full(space.field(), n, words));
    }
    let z2 = zeta * zeta;
    let w0 = kernel_of_map(space.field(), n, words, (n - 1) * words, |w| {
        let e = vec![(w, space.one())];
        let mut out = Vec::new();
        for i in 1..n {
            let y = space.apply_generator(&space.apply_generator(&e, n, i, false), n, i, false);
            let y = linalg::axpy(&y, &z2.neg(), &e);
            out.extend(y.into_iter().map(|(c, s)| (c + ((i - 1) * words) as u32, s)));
        }
        out
    });
    let gens: Vec<usize> = (1..n).collect();
    Ok(stable_part(space, n, w0, &gens))
}

pub fn zeta_space(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<ZetaSpace> {
    check_primitive(n, zeta)?;
    Ok(ZetaSpace { n, zeta: zeta.clone(), subspace: eigen_space(space, n, zeta)? })
}

/// σ ▶ x = ζ^{−l(σ)} ι(σ) ▷ x.
pub fn act(space: &BraidedSpace, zeta: &Scalar, sigma: &Perm, x: &[(u32, Scalar)]) -> Result<SVec> {
    let f = zeta.pow(-(sigma.length() as i64))?;
    Ok(linalg::scale(&space.apply_perm_lift(sigma, x), &f))
}

/// Σ_σ σ ▶ x by the coset factorization S_k = S_{k−1}·{s_{k−1}⋯s_j}, for
/// any x (no membership test).
pub(crate) fn pi_raw(space: &BraidedSpace, n: usize, zeta: &Scalar, x: &[(u32, Scalar)]) -> Result<SVec> {
    let zi = zeta.inv()?;
    let mut y = x.to_vec();
    for k in (2..=n).rev() {
        let mut acc: SVec = Vec::new();
        let mut term = y.clone();
        let mut f = space.one();
        // j = k, k−1, …, 1: term = c_{k−1}⋯c_j y, weight ζ^{−(k−j)}
        for j in (1..=k).rev() {
            if j < k {
                term = space.apply_letters(&y, n, &((j as i32)..(k as i32)).rev().collect::<Vec<_>>());
                f = &f * &zi;
            }
            acc = linalg::axpy(&acc, &f, &term);
        }
        y = acc;
    }
    Ok(y)
}

/// Π_ζⁿ as the literal sum over all n! permutations.
pub fn pi_zeta_direct(space: &BraidedSpace, n: usize, zeta: &Scalar, x: &[(u32, Scalar)]) -> Result<SVec> {
    let mut acc: Vec<(u32, Scalar)> = Vec::new();
    for s in Perm::all(n) {
        acc.extend(act(space, zeta, &s, x)?);
    }
    Ok(linalg::collect_terms(acc))
}

pub fn pi_zeta(space: &BraidedSpace, zs: &ZetaSpace, x: &[(u32, Scalar)]) -> Result<SVec> {
    if !zs.subspace.contains(x) {
        return Err(Error::NotInZetaSpace);
    }
    pi_raw(space, zs.n, &zs.zeta, x)
}

/// Images of the basis of V^⊗n(ζ) under Π_ζⁿ.
fn pi_images(space: &BraidedSpace, zs: &ZetaSpace) -> Result<Vec<SVec>> {
    zs.subspace.rows().iter().map(|r| pi_raw(space, zs.n, &zs.zeta, r)).collect()
}

#[allow(non_snake_case)]
pub fn check_pi_in_E(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<bool> {
    let zs = zeta_space(space, n, zeta)?;
    let e = primitives_e(space, n)?;
    Ok(pi_images(space, &zs)?.iter().all(|v| e.contains(v)))
}

/// Whether Σ_{ζ primitive n-th} Im Π_ζⁿ = E_n.
pub fn check_pi_su(space: &BraidedSpace, n: usize) -> Result<bool> {
    let roots = space
        .field()
        .primitive_roots_of_order(n as u32)
        .ok_or_else(|| Error::RootOrderMismatch(format!("primitive {n}-th roots are not all in the field")))?;
    let e = primitives_e(space, n)?;
    let mut ims = Vec::new();
    for z in &roots {
        let zs = zeta_space(space, n, z)?;
        ims.extend(pi_images(space, &zs)?);
    }
    Ok(Subspace::span(n, space.words(n), &ims) == e)
}

/// {x ∈ V⊗V^⊗n(ζ) : c_1²((1⊗φ) ▶ x) = (1⊗φ) ▶ x for all φ ∈ S_n}, computed
/// as the largest 1⊗S_n-stable subspace of the φ = 1 condition.
pub fn mixed_zeta_space(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<MixedZetaSpace> {
    check_primitive(n, zeta)?;
    space.check_degree(n + 1)?;
    let base = tail_space(space, n, zeta)?;
    let k = kernel_of_map(space.field(), 0, base.len(), space.words(n + 1), |j| {
        let b = &base[j as usize];
        let y = space.apply_generator(&space.apply_generator(b, n + 1, 1, false), n + 1, 1, false);
        linalg::sub(&y, b)
    });
    let vecs: Vec<SVec> = k.rows().iter().map(|a| combine(a, &base)).collect();
    let w = Subspace::span(n + 1, space.words(n + 1), &vecs);
    let gens: Vec<usize> = (2..=n).collect();
    Ok(MixedZetaSpace { n, zeta: zeta.clone(), subspace: stable_part(space, n + 1, w, &gens) })
}

/// The same space by enumerating every φ ∈ S_n.
pub fn mixed_zeta_space_direct(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<Subspace> {
    check_primitive(n, zeta)?;
    let base = tail_space(space, n, zeta)?;
    let perms = Perm::all(n);
    let words = space.words(n + 1);
    let mut kb = KernelBuilder::with_sparse_target(space.field(), perms.len() * words);
    for j in (0..base.len() as u32).rev() {
        let b = &base[j as usize];
        let mut out = Vec::new();
        for (p, phi) in perms.iter().enumerate() {
            let lifted = shift_perm(phi);
            let y = act(space, zeta, &lifted, b)?;
            let z = space.apply_generator(&space.apply_generator(&y, n + 1, 1, false), n + 1, 1, false);
            out.extend(linalg::sub(&z, &y).into_iter().map(|(c, s)| (c + (p * words) as u32, s)));
        }
        kb.push_column(j, &out);
    }
    let vecs: Vec<SVec> = kb.finish().iter().map(|a| combine(a, &base)).collect();
    Ok(Subspace::span(n + 1, words, &vecs))
}

/// 1⊗φ as a permutation of n+1 positions.
fn shift_perm(phi: &Perm) -> Perm {
    let mut im = vec![0];
    im.extend((0..phi.len()).map(|k| phi.0[k] + 1));
    Perm::new(im).expect("shifted permutation")
}

/// Basis e_v ⊗ r of V ⊗ V^⊗n(ζ).
fn tail_space(space: &BraidedSpace, n: usize, zeta: &Scalar) -> Result<Vec<SVec>> {
    let zs = eigen_space(space, n, zeta)?;
    let dn = space.words(n) as u32;
    let mut out = Vec::new();
    for v in 0..space.dim() as u32 {
        for r in zs.rows() {
            out.push(r.iter().map(|(w, s)| (v * dn + w, s.clone())).collect());
        }
    }
    Ok(out)
}

/// [x]_ζⁿ = b_n(Π_ζⁿ x).
pub fn induced_bracket(table: &BracketTable, zs: &ZetaSpace, x: &[(u32, Scalar)]) -> Result<SVec> {
    let space = table.space();
    let p = pi_zeta(space, zs, x)?;
    table
        .apply(zs.n, &p)
        .ok_or_else(|| Error::DomainMismatch(format!("Π_ζ^{} lands outside the bracket domain", zs.n)))
}

/// Replaces the `len` letters starting at `pos` by f(block) ∈ V, in a vector
/// of V^⊗total.
fn contract(
    space: &BraidedSpace,
    x: &[(u32, Scalar)],
    total: usize,
    pos: usize,
    len: usize,
    f: &dyn Fn(&SVec) -> Option<SVec>,
) -> Option<SVec> {
    let d = space.dim() as u32;
    let tail = space.words(total - pos - len) as u32;
    let blk = space.words(len) as u32;
    let mut groups: std::collections::BTreeMap<(u32, u32), SVec> = Default::default();
    for (w, s) in x {
        let pre = w / (blk * tail);
        let mid = (w / tail) % blk;
        let suf = w % tail;
        groups.entry((pre, suf)).or_default().push((mid, s.clone()));
    }
    let mut out = Vec::new();
    for ((pre, suf), part) in groups {
        let v = f(&linalg::collect_terms(part))?;
        out.extend(v.into_iter().map(|(i, s)| ((pre * d + i) * tail + suf, s)));
    }
    Some(linalg::collect_terms(out))
}

#[derive(Clone, Debug, Serialize)]
pub struct PlReport {
    pub pl1: bool,
    pub pl2: bool,
    pub pl3: bool,
    pub diagnostics: Vec<String>,
}

/// Exact check of PL1 on V^⊗n(ζ), PL2 on V^⊗(n+1)(ζ) and PL3 on
/// V^⊗(n+1)(−1, ζ) for the brackets induced by `table`.
pub fn verify_pl(table: &BracketTable, n: usize, zeta: &Scalar) -> Result<PlReport> {
    check_primitive(n, zeta)?;
    if n > PL_MAX_DEGREE {
        return Err(Error::BadParams(format!("PL checks are capped at degree {PL_MAX_DEGREE}")));
    }
    let space = table.space();
    space.check_degree(n + 1)?;
    if n > table.cutoff() || table.cutoff() < 2 {
        return Err(Error::DegreeBudgetExceeded { degree: n.max(2), budget: table.cutoff() });
    }
    let field = space.field();
    let m1 = field.from_int(-1);
    let mut diagnostics = Vec::new();
    let br_n = |y: &SVec| -> Option<SVec> { table.apply(n, &pi_raw(space, n, zeta, y).ok()?) };
    let br_2 = |y: &SVec| -> Option<SVec> { table.apply(2, &pi_raw(space, 2, &m1, y).ok()?) };

    let zs = zeta_space(space, n, zeta)?;
    let mut pl1 = true;
    'outer: for r in zs.subspace.rows() {
        let base = br_n(r);
        for i in 1..n {
            let s = act(space, zeta, &Perm::simple(n, i), r)?;
            if br_n(&s) != base || base.is_none() {
                pl1 = false;
                break 'outer;
            }
        }
    }
    if !pl1 {
        diagnostics.push(format!("PL1 fails in degree {n}"));
    }

    let big = eigen_space(space, n + 1, zeta)?;
    let zi = zeta.inv()?;
    let mut pl2 = true;
    for x in big.rows() {
        let mut sum: SVec = Vec::new();
        let mut f = space.one();
        let mut ok = true;
        for i in 1..=n + 1 {
            let letters: Vec<i32> = (1..i as i32).collect();
            let y = linalg::scale(&space.apply_letters(x, n + 1, &letters), &f);
            f = &f * &zi;
            match contract(space, &y, n + 1, 1, n, &br_n).and_then(|z| br_2(&z)) {
                Some(v) => sum = linalg::add(&sum, &v),
                None => ok = false,
            }
        }
        if !ok {
            diagnostics.push("PL2: an intermediate vector left the bracket domain".into());
        }
        if !ok || !sum.is_empty() {
            pl2 = false;
            break;
        }
    }
    if !pl2 {
        diagnostics.push(format!("PL2 fails in degree {}", n + 1));
    }

    let mixed = mixed_zeta_space(space, n, zeta)?;
    let mut pl3 = true;
    for x in mixed.subspace.rows() {
        let lhs = contract(space, x, n + 1, 1, n, &br_n).and_then(|z| br_2(&z));
        let mut rhs = Some(Vec::new());
        for i in 1..=n {
            let letters: Vec<i32> = (1..i as i32).rev().collect();
            let y = space.apply_letters(x, n + 1, &letters);
            let v = contract(space, &y, n + 1, i - 1, 2, &br_2).and_then(|z| br_n(&z));
            rhs = rhs.zip(v).map(|(a, b)| linalg::add(&a, &b));
        }
        if lhs.is_none() || lhs != rhs {
            pl3 = false;
            break;
        }
    }
    if !pl3 {
        diagnostics.push(format!("PL3 fails in degree {}", n + 1));
    }
    if !(pl1 && pl2 && pl3) {
        diagnostics.push("the bracket may not be braided Lie beyond the checked budget; see lie_check".into());
    }
    Ok(PlReport { pl1, pl2, pl3, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::presets;
    use crate::enveloping::{extend_by_multiplication, gurevich_bracket, sl2_bracket, validate_bracket};
    use crate::scalar::field_make;

    #[test]
    fn degree_two_remark() {
        let f = field_make(1);
        let g = presets::gurevich(f, f.from_int(2), 4).unwrap();
        let m1 = f.from_int(-1);
        let zs = zeta_space(&g, 2, &m1).unwrap();
        for r in zs.subspace.rows() {
            let cc = g.apply_generator(&g.apply_generator(r, 2, 1, false), 2, 1, false);
            assert_eq!(&cc, r);
            let p = pi_zeta(&g, &zs, r).unwrap();
            assert_eq!(p, linalg::sub(r, &g.apply_generator(r, 2, 1, false)));
            let pp = pi_zeta(&g, &zs, &p).unwrap();
            assert_eq!(pp, linalg::scale(&p, &f.from_int(2)));
        }
        assert!(check_pi_su(&g, 2).unwrap());
    }

    #[test]
    fn recursion_matches_direct_sum() {
        let f = field_make(3);
        let rack = presets::d4_rack(f, 4).unwrap();
        let z = f.zeta_pow(1);
        let zs = zeta_space(&rack, 3, &z).unwrap();
        for r in zs.subspace.rows().iter().take(6) {
            assert_eq!(pi_raw(&rack, 3, &z, r).unwrap(), pi_zeta_direct(&rack, 3, &z, r).unwrap());
        }
        let e = vec![(5, f.one())];
        assert_eq!(pi_raw(&rack, 3, &z, &e).unwrap(), pi_zeta_direct(&rack, 3, &z, &e).unwrap());
    }

    #[test]
    fn flip_and_scalar_spaces() {
        let f = field_make(3);
        let fl = presets::flip(f, 2, 4).unwrap();
        assert_eq!(zeta_space(&fl, 3, &f.zeta_pow(1)).unwrap().subspace.dim(), 0);
        // E_3 is the degree-3 part of the free Lie algebra, of dimension
        // (2³ − 2)/3 = 2 by Witt's formula, so the sum of images misses it
        assert_eq!(primitives_e(&fl, 3).unwrap().dim(), 2);
        assert!(!check_pi_su(&fl, 3).unwrap());
        let q = f.zeta_pow(1).neg();
        let sc = presets::scalar(f, 2, q, 4).unwrap();
        // q² = ζ² for q = −ζ
        assert_eq!(zeta_space(&sc, 3, &f.zeta_pow(1)).unwrap().subspace.dim(), 8);
        assert!(matches!(zeta_space(&fl, 2, &f.one()), Err(Error::RootOrderMismatch(_))));
    }

    #[test]
    fn mixed_space_routes_agree() {
        let f = field_make(1);
        let g = presets::gurevich(f, f.from_int(2), 4).unwrap();
        let m1 = f.from_int(-1);
        assert_eq!(mixed_zeta_space(&g, 2, &m1).unwrap().subspace, mixed_zeta_space_direct(&g, 2, &m1).unwrap());
        let f3 = field_make(3);
        let rack = presets::d4_rack(f3, 4).unwrap();
        let z = f3.zeta_pow(1);
        assert_eq!(mixed_zeta_space(&rack, 3, &z).unwrap().subspace, mixed_zeta_space_direct(&rack, 3, &z).unwrap());
    }

    fn with_cube_roots_check(table: &BracketTable) {
        let f = table.space().field();
        let m1 = f.from_int(-1);
        let r = verify_pl(table, 2, &m1).unwrap();
        assert!(r.pl1 && r.pl2 && r.pl3, "{:?}", r.diagnostics);
        let t3 = extend_by_multiplication(table, 3, 1).unwrap();
        validate_bracket(&t3).unwrap();
        for z in f.primitive_roots_of_order(3).unwrap() {
            let r = verify_pl(&t3, 3, &z).unwrap();
            assert!(r.pl1 && r.pl2 && r.pl3, "{:?}", r.diagnostics);
        }
    }

    #[test]
    fn pl_identities_hold_for_fixtures() {
        let f = field_make(3);
        let fl = presets::flip(f, 3, 5).unwrap();
        with_cube_roots_check(&sl2_bracket(&fl).unwrap());
        let mu = f.from_int(2);
        let g = presets::gurevich(f, mu.clone(), 5).unwrap();
        with_cube_roots_check(&gurevich_bracket(&g, &mu).unwrap());
        with_cube_roots_check(&BracketTable::zero(&g, 3).unwrap());
    }

    #[test]
    fn jacobi_violation_breaks_pl2() {
        let f = field_make(1);
        let fl = presets::flip(f, 3, 4).unwrap();
        let one = f.one();
        let wedge = |a: u32, b: u32| linalg::collect_terms(vec![(a * 3 + b, one.clone()), (b * 3 + a, one.neg())]);
        let pairs = vec![
            (2, wedge(0, 1), vec![(2, one.clone())]),
            (2, wedge(1, 2), vec![(0, one.clone())]),
            (2, wedge(2, 0), vec![(0, one.clone())]),
        ];
        let t = BracketTable::from_pairs(&fl, 2, &pairs).unwrap();
        let r = verify_pl(&t, 2, &f.from_int(-1)).unwrap();
        assert!(r.pl1 && !r.pl2);
    }
}
