use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use interlacing::engine::{
    certify_non_interlacing, count_trace_t, enumerate_interlacers, interlaces, SearchConfig,
};
use interlacing::exact::{discriminant, IntPolynomial};
use interlacing::polytope::{vertex_boxes, RealRoots};

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn fast() -> SearchConfig {
    SearchConfig {
        certificates: false,
        ..SearchConfig::default()
    }
}

/// Every integer point of the coordinate box, tested one by one.
fn naive_count(f: &IntPolynomial, t: i64) -> Option<u64> {
    let b = vertex_boxes(
        f,
        &BigInt::from(t),
        &BigRational::new(BigInt::one(), BigInt::from(1 << 20)),
    )
    .ok()?;
    if b.volume() > BigInt::from(1_000_000) {
        return None;
    }
    let ranges: Vec<(i64, i64)> = (0..b.bounds.len())
        .map(|j| match b.candidates(j) {
            Some((lo, hi)) => (lo.to_i64().unwrap(), hi.to_i64().unwrap()),
            None => (0, -1),
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Some(0);
    }
    let roots = RealRoots::new(f).ok()?;
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut count = 0;
    loop {
        let mut v = vec![t];
        v.extend(&cur);
        let g = p(&v);
        let d = roots.degree();
        if (0..d).all(|i| roots.lambda_sign(&g, i) == std::cmp::Ordering::Greater) {
            count += 1;
        }
        let mut k = cur.len();
        loop {
            if k == 0 {
                return Some(count);
            }
            k -= 1;
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                break;
            }
            cur[k] = ranges[k].0;
        }
    }
}

#[test]
fn quintic_count_matches_oracles() {
    let f = p(&[1, -2, -9, 4, 15, 3]);
    let set = enumerate_interlacers(&f, &SearchConfig::default()).unwrap();
    // frozen from a full-box scan, a float root-alternation scan and the
    // C(f) point count, which all agree
    assert_eq!(set.count(), 208);
    assert_eq!(naive_count(&f, 1), Some(208));
    let disc = discriminant(&f).unwrap();
    let bound = BigRational::new(BigInt::one(), BigInt::from(5i64.pow(5)));
    for m in &set.members {
        let g = m.poly();
        assert!(interlaces(&f, &g).unwrap());
        let cert = m.certificate.as_ref().unwrap();
        assert!(cert.all_positive());
        assert!(cert.product_identity() <= bound);
        assert_eq!(cert.product, cert.res_over_disc);
        assert!(disc > BigInt::from(5i64.pow(5)));
    }
    let vecs: Vec<_> = set.members.iter().map(|m| m.vector.clone()).collect();
    let mut sorted = vecs.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(vecs, sorted);
}

#[test]
fn sextic_is_non_interlacing() {
    let f = p(&[1, -1, -6, 6, 8, -8, 1]);
    let cert = certify_non_interlacing(&f, &SearchConfig::default()).unwrap();
    assert_eq!(cert.count, 0);
    assert_eq!(naive_count(&f, 1), Some(0));
}

#[test]
fn sqrt_d_closed_form() {
    for d in 2i64..=500 {
        let r = (d as f64).sqrt() as i64;
        if r * r == d || (r + 1) * (r + 1) == d {
            continue;
        }
        let set = enumerate_interlacers(&p(&[1, 0, -d]), &fast()).unwrap();
        assert_eq!(set.count() as i64, 2 * r + 1, "D = {d}");
    }
}

#[test]
fn golden_family_matches_brute_force() {
    for d in 1i64..=200 {
        let f = p(&[1, -1, -d]);
        let set = enumerate_interlacers(&f, &fast()).unwrap();
        assert_eq!(Some(set.count() as u64), naive_count(&f, 1), "D = {d}");
    }
}

#[test]
fn trace_two_for_sqrt_two() {
    let set = count_trace_t(&p(&[1, 0, -2]), &BigInt::from(2), &fast()).unwrap();
    assert_eq!(set.count(), 5);
    assert_eq!(naive_count(&p(&[1, 0, -2]), 2), Some(5));
}

fn totally_real_poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-6i64..=6, 1..=4).prop_filter_map("not totally real", |c| {
        let mut v = vec![1i64];
        v.extend(c);
        let f = p(&v);
        RealRoots::new(&f).ok().map(|_| f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn branch_and_prune_matches_naive_scan(f in totally_real_poly(), t in 1i64..=2) {
        let Some(naive) = naive_count(&f, t) else { return Ok(()); };
        let set = count_trace_t(&f, &BigInt::from(t), &fast()).unwrap();
        prop_assert_eq!(set.count() as u64, naive);
    }
}
