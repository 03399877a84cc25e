//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use braidwork::braided::{presets, shuffles, BraidedSpace};
use braidwork::enveloping::*;
use braidwork::linalg::{self, SVec, Scalar, Subspace};
use braidwork::pareigis::*;
use braidwork::scalar::{field_make, q_binomial, CycloField, Rational};
use braidwork::tensor::*;
use braidwork::tower::*;
use braidwork::{Error, Result};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestRunner};

/// Named sub-checks of one criterion; the criterion passes iff all do.
#[derive(Default)]
struct Checks(Vec<(String, bool, String)>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.note(name, ok, String::new());
    }

    fn note(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push((name.into(), ok, detail.into()));
    }
}

type Criterion = (&'static str, Option<u64>, fn(&mut Checks) -> Result<()>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("scalar braiding", Some(5), scalar_braiding),
        ("Hecke/flip", Some(30), hecke_flip),
        ("D4 rack", Some(600), d4_rack),
        ("two-dimensional diagonal", Some(60), twodim),
        ("Cartan A2", Some(300), cartan_a2),
        ("Gurevich enveloping algebra", Some(120), gurevich),
        ("Hecke rigidity", Some(60), hecke_rigidity),
        ("Pareigis suite", Some(300), pareigis_suite),
        ("Nichols cross-check", Some(900), nichols_cross_check),
        ("structural suites", None, structural),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let mut checks = Checks::default();
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut checks)));
        let elapsed = start.elapsed();
        match outcome {
            Ok(Ok(())) => {}
            Ok(Err(e)) => checks.note("completed without error", false, e.to_string()),
            Err(_) => checks.note("completed without panic", false, ""),
        }
        if let Some(secs) = limit {
            checks.note(format!("runtime < {secs} s"), elapsed < Duration::from_secs(secs), format!("{elapsed:.1?}"));
        }
        let pass = checks.0.iter().all(|c| c.1);
        failed += usize::from(!pass);
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {name}: {verdict} ({} checks, {elapsed:.1?})", i + 1, checks.0.len());
        for (what, ok, detail) in &checks.0 {
            if !ok {
                println!("    failed: {what} {detail}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn int(f: &'static CycloField, n: i64) -> Scalar {
    f.from_int(n)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every fixture with the field it naturally lives in.
fn all_presets(budget: usize) -> Result<Vec<(&'static str, BraidedSpace)>> {
    let q = field_make(1);
    let f2 = field_make(2);
    let f3 = field_make(3);
    let f4 = field_make(4);
    Ok(vec![
        ("scalar_zeta4", presets::scalar(f4, 2, f4.zeta_pow(1), budget)?),
        ("scalar_two", presets::scalar(q, 2, int(q, 2), budget)?),
        ("flip2", presets::flip(q, 2, budget)?),
        ("flip3", presets::flip(q, 3, budget)?),
        ("d4_rack", presets::d4_rack(q, budget)?),
        ("twodim_sdeg2", presets::twodim_sdeg2(f2, budget)?),
        ("cartan_A2_root3", presets::cartan_an(f3, 2, f3.zeta_pow(1), budget)?),
        ("cartan_A2_generic", presets::cartan_an(q, 2, int(q, 2), budget)?),
        ("gurevich", presets::gurevich(q, int(q, 2), budget)?),
        ("standard_hecke", presets::standard_hecke(q, 2, int(q, 3), budget)?),
    ])
}

fn scalar_braiding(c: &mut Checks) -> Result<()> {
    let f = field_make(4);
    let sc = presets::scalar(f, 2, f.zeta_pow(1), 6)?;
    let dims = nichols_dims(&sc, 6)?;
    c.note("nichols_dims(6) = [1,2,4,8,0,0,0]", dims == [1, 2, 4, 8, 0, 0, 0], format!("{dims:?}"));
    let v = sdeg(&sc, 6)?;
    c.check("sdeg = 1 certified for q = ζ4", v.value == 1 && v.status == SdegStatus::Certified);
    let q = field_make(1);
    let reg = presets::scalar(q, 2, int(q, 2), 5)?;
    let v = sdeg(&reg, 5)?;
    c.check("sdeg = 0 certified for q = 2 at D = 5", v.value == 0 && v.status == SdegStatus::Certified);
    Ok(())
}

fn hecke_flip(c: &mut Checks) -> Result<()> {
    let f = field_make(1);
    for d in [2, 3] {
        let fl = presets::flip(f, d, 6)?;
        let v = sdeg(&fl, 6)?;
        c.note(format!("d={d}: sdeg ≤ 1 at D = 6"), v.value <= 1, format!("got {}", v.value));
        let e2 = primitives_e(&fl, 2)?.dim();
        c.note(format!("d={d}: dim E_2 = d(d−1)/2"), e2 == d * (d - 1) / 2, format!("got {e2}"));
        let dims = nichols_dims(&fl, 6)?;
        let want: Vec<usize> = (0..=6).map(|n| binomial(n + d - 1, d - 1)).collect();
        c.note(format!("d={d}: Nichols dims are C(n+d−1, d−1)"), dims == want, format!("{dims:?}"));
    }
    Ok(())
}

/// Sum of words z_{i1}⋯z_{ik} (letters given as index lists) with signs.
fn zpoly(terms: &[(i64, &[usize])]) -> SVec {
    let f = field_make(1);
    linalg::collect_terms(
        terms
            .iter()
            .map(|(s, w)| (w.iter().fold(0u32, |acc, &l| acc * 4 + l as u32), int(f, *s)))
            .collect(),
    )
}

fn d4_rack(c: &mut Checks) -> Result<()> {
    let f = field_make(1);
    let rack = presets::d4_rack(f, 6)?;
    let e2 = primitives_e(&rack, 2)?;
    let listed: Vec<SVec> = vec![
        zpoly(&[(1, &[0, 0])]),
        zpoly(&[(1, &[1, 1])]),
        zpoly(&[(1, &[2, 2])]),
        zpoly(&[(1, &[3, 3])]),
        zpoly(&[(1, &[0, 2]), (1, &[2, 0])]),
        zpoly(&[(1, &[1, 3]), (1, &[3, 1])]),
        zpoly(&[(1, &[0, 1]), (1, &[1, 2]), (1, &[2, 3]), (1, &[3, 0])]),
        zpoly(&[(1, &[0, 3]), (1, &[1, 0]), (1, &[2, 1]), (1, &[3, 2])]),
    ];
    let span = Subspace::span(2, 16, &listed);
    c.note("E_2 is 8-dimensional", e2.dim() == 8, format!("got {}", e2.dim()));
    c.check("E_2 equals the span of the listed generators", span == e2);

    let ideal = ideal_closure(&rack, &[e2], 4)?;
    let e3 = primitives_e(&rack, 3)?;
    c.check("E_3 ⊆ ideal(E_2) in degree 3", e3.is_subspace_of(ideal.component(3)));
    let e4 = primitives_e(&rack, 4)?;
    let contained = e4.is_subspace_of(ideal.component(4));
    c.note("E_4(V,c) = 0", e4.dim() == 0, format!("(dim E_4 = {}, E_4 ⊆ ideal(E_2)_4: {contained})", e4.dim()));

    let a = zpoly(&[(1, &[1, 2]), (1, &[0, 1])]);
    let b = zpoly(&[(1, &[1, 0]), (1, &[2, 1])]);
    let a2 = concat(4, 2, &a, &a);
    c.check("a² ∉ ideal(E_2) in degree 4", !ideal.component(4).contains(&a2));
    // a², b², ab+ba become primitive once E_2 is divided out
    let s = symmetric_step(&IdealTower::zero(&rack, 4)?)?;
    let k4 = quotient_primitives(&s, 4)?;
    let ab = linalg::add(&concat(4, 2, &a, &b), &concat(4, 2, &b, &a));
    c.check("a², b², ab+ba are primitive in S(V,c)", [a2, concat(4, 2, &b, &b), ab].iter().all(|x| k4.contains(x)));

    let v = sdeg(&rack, 6)?;
    c.note("sdeg = 2 at D = 6", v.value == 2, format!("got {} ({:?})", v.value, v.status));
    c.check("is_quadratic(4) = false", !is_quadratic(&rack, 4)?);
    Ok(())
}

fn twodim(c: &mut Checks) -> Result<()> {
    let tw = presets::twodim_sdeg2(field_make(2), 6)?;
    let v = sdeg(&tw, 6)?;
    c.note("sdeg = 2 at D = 6", v.value == 2, format!("got {} ({:?})", v.value, v.status));
    Ok(())
}

fn cartan_a2(c: &mut Checks) -> Result<()> {
    let f3 = field_make(3);
    let root = presets::cartan_an(f3, 2, f3.zeta_pow(1), 9)?;
    let v = sdeg(&root, 9)?;
    // ⌈1 + log₂ 2⌉ = 2
    c.note("q = ζ3: sdeg = 2 at D = 9", v.value == 2, format!("got {} ({:?})", v.value, v.status));
    let f = field_make(1);
    let generic = presets::cartan_an(f, 2, int(f, 2), 6)?;
    let v = sdeg(&generic, 6)?;
    c.note("q = 2: sdeg = 1", v.value == 1, format!("got {}", v.value));
    Ok(())
}

fn gurevich(c: &mut Checks) -> Result<()> {
    let f = field_make(1);
    let mu = int(f, 2);
    let g = presets::gurevich(f, mu.clone(), 6)?;
    let t = gurevich_bracket(&g, &mu)?;
    c.check("validate_bracket passes", validate_bracket(&t).is_ok());
    let fq = enveloping_filtration(&t, 4, 2)?;
    c.check("lie_check is_lie_up_to(4, 2)", lie_check(&fq) == LieVerdict::IsLieUpTo { n: 4, slack: 2 });
    let v = pbw_check(&fq)?;
    let consistent = matches!(v.status, PbwStatus::PbwConsistent { n: 4, slack: 2 });
    c.note("pbw_check pbw_consistent", consistent, format!("{:?}", v.status));
    c.note("gr′ dims [1,3,6,10,15]", v.gr_dims == [1, 3, 6, 10, 15], format!("{:?}", v.gr_dims));
    c.check("is_quadratic = true", is_quadratic(&g, 5)?);
    c.check("primitive_check true", primitive_check(&fq, 4)?);
    Ok(())
}

fn hecke_rigidity(c: &mut Checks) -> Result<()> {
    let marks = vec![(2, 1), (3, 1), (-2, 1), (1, 2), (-1, 3)];
    let strategy = (2usize..=3, prop::sample::select(marks), prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3));
    let mut runner = TestRunner::new(Config { cases: 32, failure_persistence: None, ..Config::default() });
    let tried = std::cell::Cell::new(0);
    let result = runner.run(&strategy, |(d, (num, den), raw)| {
        let f = field_make(1);
        let space = presets::standard_hecke(f, d, f.from_rational(Rational::new(num, den)), 4).unwrap();
        let zero = BracketTable::zero(&space, 2).unwrap();
        let k = zero.basis(2).dim();
        let vals: Vec<SVec> = raw
            .iter()
            .take(k)
            .map(|r| r[..d].iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, f.from_int(x))).collect())
            .collect();
        prop_assume!(vals.iter().any(|v| !v.is_empty()));
        tried.set(tried.get() + 1);
        let t = zero.with_degree(2, vals).unwrap();
        let rejected = match validate_bracket(&t) {
            Err(Error::NotABracket { .. }) => true,
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            Ok(()) => {
                let fq = enveloping_filtration(&t, 2, 1).unwrap();
                matches!(lie_check(&fq), LieVerdict::FailsCertified { .. })
            }
        };
        prop_assert!(rejected, "a nonzero bracket survived on a Hecke space with mark {num}/{den}");
        Ok(())
    });
    c.note("every nonzero degree-2 candidate is rejected", result.is_ok(), result.err().map(|e| e.to_string()).unwrap_or_default());
    c.note("at least 32 candidates tried", tried.get() >= 32, format!("got {}", tried.get()));
    Ok(())
}

fn pareigis_suite(c: &mut Checks) -> Result<()> {
    // Π_{−1}² on V^⊗2(−1), and Im Π_{−1}² = E_2, for every preset
    for (name, space) in all_presets(4)? {
        let m1 = space.field().from_int(-1);
        let zs = zeta_space(&space, 2, &m1)?;
        let mut ok = true;
        for r in zs.subspace.rows() {
            ok &= pi_zeta(&space, &zs, r)? == linalg::sub(r, &space.apply_generator(r, 2, 1, false));
        }
        c.check(format!("{name}: Π_{{−1}}²(x) = x − c(x)"), ok);
        c.check(format!("{name}: Im Π_{{−1}}² = E_2"), check_pi_su(&space, 2)?);
    }

    // Σ over (i, n−i)-shuffles of ζ^{l(σ)} is the Gaussian binomial, for every ζ with ζ^m = 1
    let mut identity = true;
    let mut vanishing = true;
    for m in [1u32, 2, 3, 4, 5, 6, 12] {
        let f = field_make(m);
        for k in 0..m as i64 {
            let z = f.zeta_pow(k);
            for n in 0..=6usize {
                for i in 0..=n {
                    let mut sum = f.zero();
                    for (_, len) in shuffles(i, n - i) {
                        sum = &sum + &z.pow(len as i64)?;
                    }
                    let qb = q_binomial(n as u32, i as u32, &z);
                    identity &= sum == qb;
                    // the binomial vanishes strictly inside the row when ζ has order n
                    if n >= 2 && 0 < i && i < n && braidwork::scalar::root_order(&z) == Some(n as u32) {
                        vanishing &= qb.is_zero();
                    }
                }
            }
        }
    }
    c.check("shuffle-length identity for n ≤ 6 and all ζ | m", identity);
    c.check("Gaussian binomials vanish at primitive n-th roots", vanishing);

    // Δ^{a,n−a} Π_ζⁿ x = 0 on V^⊗n(ζ), with the recursion checked against the n!-term sum
    let f3 = field_make(3);
    let spaces = vec![
        ("flip2", presets::flip(f3, 2, 4)?),
        ("d4_rack", presets::d4_rack(f3, 4)?),
        ("gurevich", presets::gurevich(f3, int(f3, 2), 4)?),
        ("scalar −ζ3", presets::scalar(f3, 2, f3.zeta_pow(1).neg(), 4)?),
    ];
    for (name, space) in &spaces {
        for n in [2usize, 3] {
            for z in f3.primitive_roots_of_order(n as u32).unwrap() {
                let zs = zeta_space(space, n, &z)?;
                let mut ok = true;
                for r in zs.subspace.rows() {
                    let p = pi_zeta(space, &zs, r)?;
                    ok &= p == pi_zeta_direct(space, n, &z, r)?;
                    for a in 1..n {
                        ok &= apply_cols(&delta_component(space, a, n - a)?, &p).is_empty();
                    }
                }
                c.check(format!("{name}: Δ-components of Π_{z}^{n} vanish (dim V({z}) = {})", zs.subspace.dim()), ok);
            }
        }
    }

    // PL1–PL3 for the gurevich and sl₂ fixtures at n = 2, 3
    let mu = int(f3, 2);
    let g = presets::gurevich(f3, mu.clone(), 5)?;
    let fl = presets::flip(f3, 3, 5)?;
    for (name, table) in [("gurevich", gurevich_bracket(&g, &mu)?), ("sl2", sl2_bracket(&fl)?)] {
        let r = verify_pl(&table, 2, &int(f3, -1))?;
        c.note(format!("{name}: PL at n = 2"), r.pl1 && r.pl2 && r.pl3, format!("{:?}", r.diagnostics));
        let t3 = extend_by_multiplication(&table, 3, 1)?;
        for z in f3.primitive_roots_of_order(3).unwrap() {
            let r = verify_pl(&t3, 3, &z)?;
            c.note(format!("{name}: PL at n = 3, ζ = {z}"), r.pl1 && r.pl2 && r.pl3, format!("{:?}", r.diagnostics));
        }
    }
    Ok(())
}

fn apply_cols(cols: &[SVec], x: &[(u32, Scalar)]) -> SVec {
    braidwork::braided::apply_cols(cols, x)
}

fn nichols_cross_check(c: &mut Checks) -> Result<()> {
    for (name, space) in all_presets(5)? {
        let a = nichols_dims(&space, 5)?;
        let b = nichols_via_tower(&space, 5)?;
        c.note(format!("{name}: rank of Γ = stable tower components"), a == b, format!("{a:?} vs {b:?}"));
    }
    let f = field_make(4);
    let i = f.zeta_pow(1);
    let pool: Vec<Scalar> = vec![
        f.one(),
        int(f, -1),
        i.clone(),
        i.neg(),
        int(f, 2),
        f.from_rational(Rational::new(-1, 2)),
        &i + &f.one(),
    ];
    let strategy = (1usize..=3, 3usize..=5, prop::collection::vec(0..pool.len(), 9));
    let mut runner = TestRunner::deterministic();
    for case in 0..20 {
        let (d, top, picks) = strategy.new_tree(&mut runner).unwrap().current();
        let q: Vec<Vec<Scalar>> = (0..d).map(|r| (0..d).map(|s| pool[picks[r * 3 + s]].clone()).collect()).collect();
        let space = presets::quantum_linear(f, q, top)?;
        let a = nichols_dims(&space, top)?;
        let b = nichols_via_tower(&space, top)?;
        c.note(format!("random diagonal #{case} (d={d}, D={top})"), a == b, format!("{a:?} vs {b:?}"));
    }
    Ok(())
}

fn structural(c: &mut Checks) -> Result<()> {
    let f = field_make(1);
    let one = f.one();
    // c(x0x0) = x0x0 + x0x1 with the rest fixed is invertible but not a braiding
    let mut cols: Vec<SVec> = (0..4u32).map(|w| vec![(w, one.clone())]).collect();
    cols[0] = vec![(0, one.clone()), (1, one.clone())];
    cols[1] = vec![(2, one.clone())];
    cols[2] = vec![(1, one.clone())];
    let bad = BraidedSpace::new(f, 2, cols, braidwork::braided::Kind::Explicit, 3);
    c.check("YBE: a non-braiding matrix is rejected", matches!(bad, Err(Error::YBENotSatisfied(_))));

    for (name, space) in all_presets(5)? {
        let d = space.dim();
        let top = if d > 3 { 4 } else { 5 };

        let n = 4;
        let mut braid = true;
        for w in 0..space.words(n) as u32 {
            let e = vec![(w, space.one())];
            let ap = |l: &[i32]| space.apply_letters(&e, n, l);
            braid &= ap(&[1, 2, 1]) == ap(&[2, 1, 2]) && ap(&[2, 3, 2]) == ap(&[3, 2, 3]);
            braid &= ap(&[1, 3]) == ap(&[3, 1]) && ap(&[1, -1]) == e && ap(&[-3, 3]) == e;
        }
        c.check(format!("{name}: braid relations for ρ on V^⊗4"), braid);

        let mut coassoc = true;
        let mut gamma = true;
        for n in 2..=top {
            for a in 1..n {
                gamma &= gamma_factorization_check(&space, a, n - a)?;
                for b in 1..n - a {
                    coassoc &= coassociativity_check(&space, a, b, n - a - b)?;
                }
            }
        }
        c.check(format!("{name}: coassociativity of Δ components up to degree {top}"), coassoc);
        c.check(format!("{name}: Γ-factorization up to degree {top}"), gamma);

        let iters = tower_iterates(&space, top)?;
        let mut ladder = true;
        for (k, t) in iters.iter().enumerate() {
            ladder &= injectivity_ladder_check(t, k)?;
        }
        c.check(format!("{name}: injectivity ladder on {} iterates", iters.len()), ladder);

        if d <= 3 {
            let fq = enveloping_filtration(&BracketTable::zero(&space, 3)?, 3, 1)?;
            let v = pbw_check(&fq)?;
            c.check(format!("{name}: θ bound for the zero bracket"), v.gr_dims.iter().zip(&v.s_dims).all(|(g, s)| g <= s));
        }
    }

    let mu = int(f, 2);
    let g = presets::gurevich(f, mu.clone(), 6)?;
    let fl = presets::flip(f, 3, 5)?;
    for (name, table, n) in [("gurevich", gurevich_bracket(&g, &mu)?, 4), ("sl2", sl2_bracket(&fl)?, 3)] {
        let v = pbw_check(&enveloping_filtration(&table, n, 2)?)?;
        c.check(format!("{name}: θ bound gr′ ≤ S"), v.gr_dims.iter().zip(&v.s_dims).all(|(g, s)| g <= s));
    }
    Ok(())
}
