use braidwork::braided::presets;
use braidwork::enveloping::*;
use braidwork::linalg::SVec;
use braidwork::scalar::{field_make, Rational};
use braidwork::Error;
use proptest::prelude::*;

fn table_from(space: &braidwork::braided::BraidedSpace, vals: &[Vec<i64>]) -> BracketTable {
    let f = space.field();
    let zero = BracketTable::zero(space, 2).unwrap();
    let values: Vec<SVec> = vals
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i as u32, f.from_int(c)))
                .collect()
        })
        .collect();
    zero.with_degree(2, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // A braided Lie bracket on a Hecke space with regular mark q ≠ 1 must vanish.
    #[test]
    fn hecke_rigidity(d in 2usize..=3, qi in prop::sample::select(vec![(2, 1), (3, 1), (-2, 1), (1, 2)]),
                      raw in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3)) {
        let f = field_make(1);
        let q = f.from_rational(Rational::new(qi.0, qi.1));
        let space = presets::standard_hecke(f, d, q, 4).unwrap();
        let k = BracketTable::zero(&space, 2).unwrap().basis(2).dim();
        let vals: Vec<Vec<i64>> = raw.iter().take(k).map(|r| r[..d].to_vec()).collect();
        prop_assume!(vals.iter().flatten().any(|&c| c != 0));
        let t = table_from(&space, &vals);
        let rejected = match validate_bracket(&t) {
            Err(Error::NotABracket { .. }) => true,
            Err(e) => panic!("unexpected error {e}"),
            Ok(()) => {
                let fq = enveloping_filtration(&t, 2, 1).unwrap();
                matches!(lie_check(&fq), LieVerdict::FailsCertified { .. })
            }
        };
        prop_assert!(rejected);
    }

    // gr′ never exceeds S(V,c) degreewise, whatever the bracket.
    #[test]
    fn theta_bound(raw in prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 3)) {
        let f = field_make(1);
        let space = presets::flip(f, 3, 5).unwrap();
        let t = table_from(&space, &raw);
        prop_assume!(validate_bracket(&t).is_ok());
        let fq = enveloping_filtration(&t, 3, 1).unwrap();
        let v = pbw_check(&fq).unwrap();
        for (g, s) in v.gr_dims.iter().zip(&v.s_dims) {
            prop_assert!(g <= s);
        }
    }
}

#[test]
fn zero_bracket_matches_tower() {
    let f = field_make(4);
    let spaces = vec![
        presets::d4_rack(f, 5).unwrap(),
        presets::twodim_sdeg2(f, 5).unwrap(),
        presets::scalar(f, 2, f.zeta_pow(1), 5).unwrap(),
    ];
    for s in spaces {
        let t = BracketTable::zero(&s, 4).unwrap();
        let fq = enveloping_filtration(&t, 4, 0).unwrap();
        let sigma: Vec<usize> = fq.s_dims().iter().scan(0, |a, x| { *a += x; Some(*a) }).collect();
        assert_eq!(fq.dims_u(), sigma);
    }
}

#[test]
fn warning_names_unconstrained_degrees() {
    let f = field_make(1);
    let fl = presets::flip(f, 2, 5).unwrap();
    let t = BracketTable::zero(&fl, 2).unwrap();
    let fq = enveloping_filtration(&t, 3, 1).unwrap();
    assert!(!fq.warnings().is_empty());
    // the flip is quadratic, so no E_n above degree 2 escapes the ideal
    assert!(fq.unconstrained_degrees().is_empty());
}
