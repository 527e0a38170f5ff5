mod common;

use common::*;
use polar_core::format::{tensor_from_json, tensor_to_json};
use polar_core::spectral::polar_product_fft;
use polar_core::{Domain, PolarError, PolarTensor, C64};
use proptest::prelude::*;

fn row(v: &[f64]) -> PolarTensor {
    PolarTensor::from_rows(&[v]).unwrap()
}

fn rows<const N: usize>(v: &[[f64; N]]) -> PolarTensor {
    PolarTensor::from_rows(v).unwrap()
}

#[test]
fn addition_scalar_and_norm_examples() {
    let a = rows(&[[1.0, 2.0, 3.0, 4.0], [2.0, 0.0, 1.0, 3.0]]);
    let b = rows(&[[4.0, 3.0, 2.0, 1.0], [1.0, 1.0, 1.0, 1.0]]);
    assert_reals(&a.add(&b).unwrap(), &[5.0, 5.0, 5.0, 5.0, 3.0, 1.0, 2.0, 4.0], 0.0);
    assert_reals(&a.scale(c(3.0, 0.0)), &[3.0, 6.0, 9.0, 12.0, 6.0, 0.0, 3.0, 9.0], 0.0);
    assert_eq!(a.scale(c(1.0, 0.0)), a);
    assert_eq!(a.scale(c(0.0, 0.0)).max_abs(), 0.0);

    let zero = PolarTensor::zeros(vec![2, 4], vec![1], Domain::Spatial).unwrap();
    assert_eq!(a.add(&zero).unwrap(), a);

    let n = rows(&[[1.0, 2.0], [3.0, 4.0]]);
    assert_eq!(n.inner_product(&n).unwrap(), c(30.0, 0.0));
    assert!((n.norm() - 30f64.sqrt()).abs() < 1e-12);
    assert!((n.norm() - 5.477225575).abs() < 1e-9);
    assert_eq!(zero.norm(), 0.0);
}

#[test]
fn hadamard_examples() {
    let a = rows(&[[2.0, 1.0], [0.0, 3.0]]);
    let b = rows(&[[1.0, 2.0], [5.0, 2.0]]);
    assert_reals(&a.hadamard(&b).unwrap(), &[2.0, 2.0, 0.0, 6.0], 0.0);
    let ones = PolarTensor::filled(vec![2, 2], vec![1], c(1.0, 0.0), Domain::Spatial).unwrap();
    assert_eq!(a.hadamard(&ones).unwrap(), a);
}

#[test]
fn conformability_is_enforced() {
    let a = rows(&[[1.0, 2.0, 3.0]]);
    let b = rows(&[[1.0, 2.0, 3.0, 4.0]]);
    for r in [a.add(&b), a.hadamard(&b), a.polar_product_naive(&b)] {
        assert!(matches!(r, Err(PolarError::Conformability { axis: 1, .. })));
    }
    let three = PolarTensor::zeros(vec![1, 3, 2], vec![1, 2], Domain::Spatial).unwrap();
    let fiber = PolarTensor::zeros(vec![1, 3, 2], vec![1], Domain::Spatial).unwrap();
    assert!(three.add(&fiber).is_err());
    let spectral = PolarTensor::zeros(vec![1, 3], vec![1], Domain::Spectral).unwrap();
    assert!(matches!(a.polar_product_naive(&spectral), Err(PolarError::Domain { .. })));
    assert!(matches!(spectral.polar_transpose(), Err(PolarError::Domain { .. })));
}

#[test]
fn polar_product_examples() {
    let a = row(&[2.0, 1.0, 0.0, 1.0]);
    let b = row(&[1.0, 0.0, 1.0, 0.0]);
    assert_reals(&a.polar_product_naive(&b).unwrap(), &[2.0; 4], 1e-12);

    let a = rows(&[[2.0, 1.0, 0.0], [3.0, 2.0, 1.0]]);
    let b = rows(&[[1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]);
    let want = [3.0, 1.0, 2.0, 7.0, 7.0, 4.0];
    assert_reals(&a.polar_product_naive(&b).unwrap(), &want, 1e-12);
    assert_reals(&polar_product_fft(&a, &b).unwrap(), &want, 1e-12);
}

#[test]
fn identity_kernel_is_exact_on_integers() {
    let mut g = rng(11);
    for _ in 0..20 {
        let vals: Vec<f64> = random_real(&mut g, 24).iter().map(|v| (v * 10.0).round()).collect();
        let a = PolarTensor::from_real(vec![3, 8], vec![1], &vals).unwrap();
        let e = PolarTensor::identity_kernel(vec![3, 8], vec![1]).unwrap();
        assert_eq!(a.polar_product_naive(&e).unwrap(), a);
        assert_eq!(e.polar_product_naive(&a).unwrap(), a);
    }
    let a = real_tensor(&mut g, &[2, 4, 3], &[1, 2]);
    let e = PolarTensor::identity_kernel(vec![2, 4, 3], vec![1, 2]).unwrap();
    assert!(rel_diff(&a.polar_product_naive(&e).unwrap(), &a) < 1e-15);
}

#[test]
fn naive_product_matches_independent_loop() {
    let mut g = rng(12);
    for n in 1..12 {
        let a = tensor(&mut g, &[2, n], &[1]);
        let b = tensor(&mut g, &[2, n], &[1]);
        let got = a.polar_product_naive(&b).unwrap();
        for r in 0..2 {
            let want = cyclic_conv(a.radius(r), b.radius(r));
            assert!(max_diff(got.radius(r), &want) < 1e-12);
        }
    }
}

#[test]
fn torus_product_matches_nested_sum() {
    let mut g = rng(13);
    let (n1, n2) = (4, 3);
    let a = tensor(&mut g, &[1, n1, n2], &[1, 2]);
    let b = tensor(&mut g, &[1, n1, n2], &[1, 2]);
    let got = a.polar_product_naive(&b).unwrap();
    for t1 in 0..n1 {
        for t2 in 0..n2 {
            let mut want = c(0.0, 0.0);
            for k1 in 0..n1 {
                for k2 in 0..n2 {
                    want += a.get(&[0, k1, k2]).unwrap()
                        * b.get(&[0, (t1 + n1 - k1) % n1, (t2 + n2 - k2) % n2]).unwrap();
                }
            }
            assert!((got.get(&[0, t1, t2]).unwrap() - want).norm() < 1e-12);
        }
    }
}

#[test]
fn fiber_axes_are_carried_independently() {
    let mut g = rng(14);
    // axis 1 angular, axis 2 a channel fiber
    let a = tensor(&mut g, &[2, 5, 3], &[1]);
    let b = tensor(&mut g, &[2, 5, 3], &[1]);
    let got = a.polar_product_naive(&b).unwrap();
    for r in 0..2 {
        for ch in 0..3 {
            let line = |t: &PolarTensor| -> Vec<C64> { (0..5).map(|k| t.get(&[r, k, ch]).unwrap()).collect() };
            assert!(max_diff(&line(&got), &cyclic_conv(&line(&a), &line(&b))) < 1e-12);
        }
    }
    assert!(rel_diff(&polar_product_fft(&a, &b).unwrap(), &got) < 1e-12);
}

#[test]
fn transpose_and_adjoint_examples() {
    assert_reals(&row(&[5.0, 4.0, 3.0, 2.0]).polar_transpose().unwrap(), &[5.0, 2.0, 3.0, 4.0], 0.0);
    assert_reals(&row(&[2.0, 1.0, 0.0, 1.0]).polar_transpose().unwrap(), &[2.0, 1.0, 0.0, 1.0], 0.0);
    assert_reals(&row(&[5.0, 4.0, 3.0, 2.0]).polar_adjoint().unwrap(), &[5.0, 2.0, 3.0, 4.0], 0.0);

    let i = PolarTensor::from_angular(&[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert_eq!(i.polar_adjoint().unwrap().values()[0], c(0.0, -1.0));
}

#[test]
fn self_adjoint_and_symmetric_sum_examples() {
    assert!(row(&[7.0, 2.0, 9.0, 2.0]).is_self_adjoint(0.0).unwrap());
    let a = row(&[5.0, 4.0, 3.0, 2.0]);
    assert!(!a.is_self_adjoint(1e-9).unwrap());
    // oracle: distance to the adjoint computed by hand is |4 - 2| = 2
    assert_eq!(a.max_asymmetry().unwrap(), 2.0);

    let s = a.symmetric_sum().unwrap();
    assert_reals(&s, &[10.0, 6.0, 6.0, 6.0], 0.0);
    assert!(s.is_self_adjoint(0.0).unwrap());

    let even = row(&[7.0, 2.0, 9.0, 2.0]);
    assert_eq!(even.symmetric_sum().unwrap(), even.scale(c(2.0, 0.0)));
    let zero = PolarTensor::zeros(vec![1, 4], vec![1], Domain::Spatial).unwrap();
    assert_eq!(zero.symmetric_sum().unwrap(), zero);
}

#[test]
fn symmetric_sum_of_random_real_tensors_is_self_adjoint() {
    let mut g = rng(15);
    for n in 1..16 {
        let a = real_tensor(&mut g, &[3, n], &[1]);
        assert!(a.symmetric_sum().unwrap().is_self_adjoint(0.0).unwrap());
    }
}

#[test]
fn inner_product_edge_cases() {
    let mut g = rng(16);
    let a = tensor(&mut g, &[2, 6], &[1]);
    let zero = PolarTensor::zeros(vec![2, 6], vec![1], Domain::Spatial).unwrap();
    assert_eq!(a.inner_product(&zero).unwrap(), c(0.0, 0.0));
    // conjugate-linear in the first slot
    let l = c(0.3, -1.2);
    let b = tensor(&mut g, &[2, 6], &[1]);
    let lhs = a.scale(l).inner_product(&b).unwrap();
    assert!((lhs - l.conj() * a.inner_product(&b).unwrap()).norm() < 1e-12);
}

#[test]
fn json_roundtrip_preserves_full_precision() {
    let mut g = rng(17);
    for shape in [vec![1, 1], vec![3, 7], vec![2, 4, 5]] {
        let axes: Vec<usize> = (1..shape.len()).collect();
        let a = tensor(&mut g, &shape, &axes);
        assert_eq!(tensor_from_json(&tensor_to_json(&a)).unwrap(), a);
    }
}

fn dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..5, 1usize..13, any::<u64>())
}

fn triple(nr: usize, nt: usize, seed: u64) -> (PolarTensor, PolarTensor, PolarTensor) {
    let mut g = rng(seed);
    (tensor(&mut g, &[nr, nt], &[1]), tensor(&mut g, &[nr, nt], &[1]), tensor(&mut g, &[nr, nt], &[1]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_commutes((nr, nt, seed) in dims()) {
        let (a, b, _) = triple(nr, nt, seed);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
    }

    #[test]
    fn product_commutes((nr, nt, seed) in dims()) {
        let (a, b, _) = triple(nr, nt, seed);
        let ab = a.polar_product_naive(&b).unwrap();
        let ba = b.polar_product_naive(&a).unwrap();
        prop_assert!(rel_diff(&ab, &ba) < 1e-12);
    }

    #[test]
    fn product_associates_and_distributes((nr, nt, seed) in dims()) {
        let (a, b, c3) = triple(nr, nt, seed);
        let left = a.polar_product_naive(&b).unwrap().polar_product_naive(&c3).unwrap();
        let right = a.polar_product_naive(&b.polar_product_naive(&c3).unwrap()).unwrap();
        prop_assert!(rel_diff(&left, &right) < 1e-10);
        let dist = a.polar_product_naive(&b.add(&c3).unwrap()).unwrap();
        let split = a.polar_product_naive(&b).unwrap().add(&a.polar_product_naive(&c3).unwrap()).unwrap();
        prop_assert!(rel_diff(&dist, &split) < 1e-10);
    }

    #[test]
    fn transpose_identities((nr, nt, seed) in dims()) {
        let (a, b, _) = triple(nr, nt, seed);
        let at = a.polar_transpose().unwrap();
        let bt = b.polar_transpose().unwrap();
        prop_assert_eq!(at.polar_transpose().unwrap(), a.clone());
        prop_assert_eq!(a.polar_adjoint().unwrap().polar_adjoint().unwrap(), a.clone());
        prop_assert_eq!(a.add(&b).unwrap().polar_transpose().unwrap(), at.add(&bt).unwrap());
        let lhs = a.polar_product_naive(&b).unwrap().polar_transpose().unwrap();
        prop_assert!(rel_diff(&lhs, &bt.polar_product_naive(&at).unwrap()) < 1e-12);
        prop_assert!(rel_diff(&lhs, &at.polar_product_naive(&bt).unwrap()) < 1e-12);
    }

    #[test]
    fn adjoint_of_real_is_transpose((nr, nt, seed) in dims()) {
        let mut g = rng(seed);
        let a = real_tensor(&mut g, &[nr, nt], &[1]);
        prop_assert_eq!(a.polar_adjoint().unwrap(), a.polar_transpose().unwrap());
    }

    #[test]
    fn inner_product_laws((nr, nt, seed) in dims(), lre in -3.0f64..3.0, lim in -3.0f64..3.0) {
        let (a, b, _) = triple(nr, nt, seed);
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
        prop_assert!(ab.norm() <= a.norm() * b.norm() + 1e-12);
        let l = c(lre, lim);
        prop_assert!((a.scale(l).norm() - l.norm() * a.norm()).abs() < 1e-12 * (1.0 + a.norm() * l.norm()));
    }
}
