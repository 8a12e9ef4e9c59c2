use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use interlacing::engine::{enumerate_interlacers, SearchConfig};
use interlacing::exact::IntPolynomial;
use interlacing::numberfield::{cubic_family, real_cyclotomic_minpoly, Irreducibility, Order};

fn corpus() -> Vec<IntPolynomial> {
    let mut v = vec![
        IntPolynomial::from_i64(&[1, -1, -1]),
        IntPolynomial::from_i64(&[1, 0, -7]),
        IntPolynomial::from_i64(&[1, 0, -4, 0, 2]),
        IntPolynomial::from_i64(&[1, -2, -9, 4, 15, 3]),
    ];
    v.extend((0..4).map(cubic_family));
    v.extend([7, 9, 13].map(|n| real_cyclotomic_minpoly(n).unwrap()));
    v
}

#[test]
fn interlacers_are_trace_one_totally_positive_elements() {
    for f in corpus() {
        let order = Order::new(&f, Irreducibility::Verify).unwrap();
        let set = enumerate_interlacers(&f, &SearchConfig::default()).unwrap();
        let mut seen = BTreeSet::new();
        for m in &set.members {
            let e = order.element(&m.vector).unwrap();
            assert_eq!(e.trace, BigRational::one(), "{f}");
            assert!(e.totally_positive, "{f}");
            assert!(seen.insert(e.numerator.coeffs().to_vec()));
        }
        assert_eq!(seen.len(), set.count());
    }
}

#[test]
fn minimal_trace_matches_engine() {
    for f in corpus() {
        let order = Order::new(&f, Irreducibility::Verify).unwrap();
        let set = enumerate_interlacers(&f, &SearchConfig::default()).unwrap();
        if set.count() == 0 {
            continue;
        }
        let m = order
            .minimal_trace_set(2, &SearchConfig::default())
            .unwrap();
        assert_eq!(m.t_star, 1);
        assert_eq!(m.count as usize, set.count());
        assert!(!m.field_level);
    }
    let m = Order::new(&corpus()[0], Irreducibility::Verify)
        .unwrap()
        .with_monogenic(true)
        .minimal_trace_set(1, &SearchConfig::default())
        .unwrap();
    assert!(m.field_level);
    assert_eq!(m.elements[0].numerator.coeff(1), BigInt::one());
}
