//! q-integers, q-factorials, Gaussian binomials, regularity.

use super::field::CycloScalar;

/// (n)_q = 1 + q + ⋯ + q^{n−1}.
pub fn q_int(n: u32, q: &CycloScalar) -> CycloScalar {
    let f = q.field();
    let mut acc = f.zero();
    let mut p = f.one();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * q;
    }
    acc
}

/// (n)_q! = (1)_q (2)_q ⋯ (n)_q.
pub fn q_factorial(n: u32, q: &CycloScalar) -> CycloScalar {
    (1..=n).fold(q.field().one(), |acc, k| &acc * &q_int(k, q))
}

/// Gaussian binomial via the division-free recurrence
/// binom(n,i) = binom(n−1,i−1) + q^i binom(n−1,i).
pub fn q_binomial(n: u32, i: u32, q: &CycloScalar) -> CycloScalar {
    let f = q.field();
    if i > n {
        return f.zero();
    }
    let mut powers = vec![f.one()];
    for k in 1..=n as usize {
        let next = &powers[k - 1] * q;
        powers.push(next);
    }
    let mut row = vec![f.one()];
    for m in 1..=n as usize {
        let mut next = vec![f.zero(); m + 1];
        next[0] = f.one();
        next[m] = f.one();
        for j in 1..m {
            next[j] = &row[j - 1] + &(&powers[j] * &row[j]);
        }
        row = next;
    }
    row[i as usize].clone()
}

/// The factorial quotient (n)_q! / ((i)_q! (n−i)_q!) when the denominator is nonzero.
pub fn q_binomial_by_factorials(n: u32, i: u32, q: &CycloScalar) -> Option<CycloScalar> {
    if i > n {
        return None;
    }
    let den = &q_factorial(i, q) * &q_factorial(n - i, q);
    q_factorial(n, q).try_div(&den).ok()
}

/// (k)_q ≠ 0 for 2 ≤ k ≤ upto.
pub fn is_regular(q: &CycloScalar, upto: u32) -> bool {
    (2..=upto).all(|k| !q_int(k, q).is_zero())
}

/// (k)_q ≠ 0 for all k ≥ 2: in characteristic 0 this fails exactly for the
/// roots of unity other than 1.
pub fn is_regular_exact(q: &CycloScalar) -> bool {
    matches!(root_order(q), None | Some(1))
}

/// Least n ≥ 1 with qⁿ = 1. All roots of unity of ℚ(ζ_m) have order dividing
/// lcm(2, m), so the search stops there.
pub fn root_order(q: &CycloScalar) -> Option<u32> {
    if q.is_zero() {
        return None;
    }
    let m = q.field().order();
    let bound = if m % 2 == 1 { 2 * m } else { m };
    let mut p = q.clone();
    for n in 1..=bound {
        if p.is_one() {
            return Some(n);
        }
        p = &p * q;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{field_make, Rational};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let f = field_make(4);
        assert_eq!(q_int(3, &f.one()), f.from_int(3));
        assert!(q_int(2, &f.from_int(-1)).is_zero());
        let z = f.zeta_pow(1);
        // Hand evaluation of the recurrence: binom(4,2) at i = (1+q²)(1+q+q²) = 0 at q=i.
        assert!(q_binomial(4, 2, &z).is_zero());
        assert!(q_binomial_by_factorials(4, 2, &z).unwrap().is_zero());
        assert!(q_binomial_by_factorials(5, 1, &z).is_none());
        assert!(is_regular(&f.one(), 10));
        assert!(!is_regular(&z, 10));
        assert_eq!(root_order(&z), Some(4));
        assert_eq!(root_order(&f.from_int(-1)), Some(2));
        assert_eq!(root_order(&f.from_int(2)), None);
        let f3 = field_make(3);
        assert_eq!(root_order(&f3.zeta_pow(1).neg()), Some(6));
    }

    #[test]
    fn small_binomials() {
        let f = field_make(1);
        let q = f.from_int(2);
        // binom(4,2)_q = 1 + q + 2q^2 + q^3 + q^4 = 35 at q = 2.
        assert_eq!(q_binomial(4, 2, &q), f.from_int(35));
        assert_eq!(q_binomial(5, 0, &q), f.one());
        assert_eq!(q_binomial(5, 5, &q), f.one());
    }

    proptest! {
        #[test]
        fn q_int_identity(n in 1u32..12, k in 0i64..12, m in prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]), r in -5i64..6) {
            let f = field_make(m);
            let q = &f.zeta_pow(k) * &f.from_rational(Rational::from_int(r.max(1)));
            let lhs = &q_int(n, &q) * &(&q - &f.one());
            let rhs = &q.pow(n as i64).unwrap() - &f.one();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn recurrence_matches_quotient(n in 0u32..9, i in 0u32..9, k in 0i64..12, m in prop::sample::select(vec![1u32, 3, 4, 6, 12])) {
            let f = field_make(m);
            let q = f.zeta_pow(k);
            if i <= n {
                if let Some(v) = q_binomial_by_factorials(n, i, &q) {
                    prop_assert_eq!(v, q_binomial(n, i, &q));
                }
            }
        }

        #[test]
        fn root_order_consistent(k in 0i64..24, m in prop::sample::select(vec![1u32, 2, 3, 5, 8, 12])) {
            let f = field_make(m);
            let q = f.zeta_pow(k);
            let n = root_order(&q).unwrap();
            prop_assert!((&q_int(n, &q) * &(&q - &f.one())).is_zero());
            for j in 1..n {
                prop_assert!(!q_int(j, &q).is_zero());
            }
        }
    }
}
