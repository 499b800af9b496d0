use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use wh_core::group::quadratic_sign;
use wh_core::{Count, GroupElement, OrderedGroup, QuadWeight};

/// Sign of `p + q·√d` from a 128-bit fixed-point `⌊√d·2^128⌋`, or `None`
/// when the enclosing interval straddles 0 and `d` is not a square.
fn fixed_point_sign(p: &BigRational, q: &BigRational, d: u64) -> Option<Ordering> {
    // clear denominators (both positive) so the question is sign(P + Q√d)
    let big_p = p.numer() * q.denom();
    let big_q = q.numer() * p.denom();
    let root = BigInt::from(d).sqrt();
    if &root * &root == BigInt::from(d) {
        return Some((big_p + big_q * root).sign().cmp_zero());
    }
    let one = BigInt::from(1) << 128usize;
    let s = (BigInt::from(d) * &one * &one).sqrt();
    // s ≤ √d·2^128 < s + 1
    let base = big_p * &one;
    let (a, b) = (&base + &big_q * &s, &base + &big_q * (&s + 1));
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if lo.is_positive() {
        Some(Ordering::Greater)
    } else if hi.is_negative() {
        Some(Ordering::Less)
    } else if big_q.is_zero() && lo.is_zero() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn backends() -> Vec<OrderedGroup> {
    vec![
        OrderedGroup::integers(),
        OrderedGroup::lex(2).unwrap(),
        OrderedGroup::lex(3).unwrap(),
        OrderedGroup::sqrt2_plane(),
        OrderedGroup::embedding(
            3,
            vec![QuadWeight::from_ratios((-1, 1), (0, 1)), QuadWeight::from_ratios((1, 2), (1, 5))],
            false,
        )
        .unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn quadratic_sign_matches_fixed_point(
        a in -1_000_000i64..=1_000_000,
        b in 1i64..=10_000,
        c in -1_000_000i64..=1_000_000,
        e in 1i64..=10_000,
        d in 1u64..=60,
    ) {
        let (p, q) = (ratio(a, b), ratio(c, e));
        let expected = fixed_point_sign(&p, &q, d).expect("128 bits separate these inputs");
        prop_assert_eq!(quadratic_sign(&p, &q, d), expected);
    }

    #[test]
    fn quadratic_sign_near_ties(c in 1i64..=1_000_000, d in 2u64..=60, offset in -2i64..=2, flip: bool) {
        // p = −⌊√(d c²)⌋ − offset puts p + c√d within a few units of 0
        let root = (BigInt::from(d) * BigInt::from(c) * BigInt::from(c)).sqrt();
        let p = -(root + BigInt::from(offset));
        let (p, q) = if flip {
            (BigRational::from_integer(-p), BigRational::from_integer(BigInt::from(-c)))
        } else {
            (BigRational::from_integer(p), BigRational::from_integer(BigInt::from(c)))
        };
        if let Some(expected) = fixed_point_sign(&p, &q, d) {
            prop_assert_eq!(quadratic_sign(&p, &q, d), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn translation_invariance(which in 0usize..5, raw in proptest::collection::vec(-100i64..=100, 9)) {
        let g = &backends()[which];
        let r = g.rank();
        let (a, b, c) = (elem(&raw, 0, r), elem(&raw, 1, r), elem(&raw, 2, r));
        prop_assert_eq!(g.compare(&a, &b).unwrap(), g.compare(&(&a + &c), &(&b + &c)).unwrap());
    }

    #[test]
    fn trichotomy_and_antisymmetry(which in 0usize..5, raw in proptest::collection::vec(-100i64..=100, 6)) {
        let g = &backends()[which];
        let r = g.rank();
        let (a, b) = (elem(&raw, 0, r), elem(&raw, 1, r));
        let ab = g.compare(&a, &b).unwrap();
        prop_assert_eq!(ab, g.compare(&b, &a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        // exactly one of a, −a is positive unless a = 0
        let pa = g.is_positive(&a).unwrap();
        let na = g.is_positive(&-&a).unwrap();
        prop_assert_eq!(pa && na, a.is_zero());
        prop_assert!(pa || na);
    }

    #[test]
    fn rotation_index_is_additive(x in -50i64..=50, y in -50i64..=50, lead in -3i64..=3) {
        let z = OrderedGroup::integers();
        let (a, b) = (GroupElement::new([x]), GroupElement::new([y]));
        let sum = z.rotation_index(&(&a + &b)).unwrap().finite().unwrap();
        prop_assert_eq!(sum, z.rotation_index(&a).unwrap().finite().unwrap() + z.rotation_index(&b).unwrap().finite().unwrap());

        // lex: finite exactly on the last axis
        let lex = OrderedGroup::lex(2).unwrap();
        let (a, b) = (GroupElement::new([0, x]), GroupElement::new([0, y]));
        let ia = lex.rotation_index(&a).unwrap().finite().unwrap();
        let ib = lex.rotation_index(&b).unwrap().finite().unwrap();
        prop_assert_eq!(lex.rotation_index(&(&a + &b)).unwrap(), Count::Finite(ia + ib));
        if lead != 0 {
            prop_assert_eq!(lex.rotation_index(&GroupElement::new([lead, x])).unwrap(), Count::Infinite);
        }
    }
}

/// The `slot`-th element of rank `r` packed in `raw` with stride 3.
fn elem(raw: &[i64], slot: usize, r: usize) -> GroupElement {
    GroupElement::new(raw[3 * slot..3 * slot + r].to_vec())
}

#[test]
fn lex_rotation_index_by_enumeration() {
    let lex = OrderedGroup::lex(2).unwrap();
    let zero = lex.zero();
    for n in 0..=50i64 {
        let chi = GroupElement::new([0, n]);
        // brute force over a box that contains every element of [0, χ)
        let mut count = 0;
        for a in -3..=3 {
            for b in -60..=60 {
                let e = GroupElement::new([a, b]);
                if lex.compare(&zero, &e).unwrap() != Ordering::Greater
                    && lex.compare(&e, &chi).unwrap() == Ordering::Less
                {
                    count += 1;
                }
            }
        }
        assert_eq!(count, n);
        assert_eq!(lex.rotation_index(&chi).unwrap(), Count::Finite(n));
        assert_eq!(lex.enumerate_interval(&chi, 64).unwrap().len(), n as usize);
    }
}
