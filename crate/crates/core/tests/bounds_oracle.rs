//! The bound formulas re-evaluated in exact rational arithmetic.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpcholqr::bounds::{
    first_order_bounds, gamma_terms, preconditioned_bounds, sampling_lower_bound,
    unpreconditioned_bounds, EpsilonSet,
};
use rpcholqr::UNIT_ROUNDOFF as U;

type Q = BigRational;

fn q(x: f64) -> Q {
    BigRational::from_float(x).unwrap()
}

/// Square root by Newton steps from the `f64` estimate, rounded to 30 digits.
fn sqrt(x: &Q) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let scale = Q::from_integer(10u32.pow(9).into()).pow(4);
    let mut y = q(x.to_f64().unwrap().sqrt());
    for _ in 0..3 {
        y = (&y + x / &y) / Q::from_integer(2.into());
        y = (&y * &scale).round() / &scale;
    }
    y
}

struct Oracle {
    eps_f: Q,
    gamma_1: Q,
    gamma_2: Q,
    gamma_3: Q,
    ortho: Q,
    residual: Q,
    cond: Q,
}

fn oracle(e: &EpsilonSet, kappa: f64, eta: f64) -> Oracle {
    let one = Q::one();
    let two = Q::from_integer(2.into());
    let (ea, es, e1, e2, e3, e4) = (
        q(e.eps_a),
        q(e.eps_s),
        q(e.eps_1),
        q(e.eps_2),
        q(e.eps_3),
        q(e.eps_4),
    );
    let eps_f = (&ea + &es) * q(e.kappa_rs);
    let of2 = (&one + &eps_f) * (&one + &eps_f);
    let chol = &e1 + (&one + &e1) * &e2;
    let gamma_1 = &of2 * (&chol + &two * &e3 + &e3 * &e3);
    let gamma_2 = &two * &eps_f + &eps_f * &eps_f + &of2 * &chol;
    let gamma_3 = &e4 * (&one + &eps_f) * (&one + &e3);
    let k = q(kappa);
    let k2 = &k * &k;
    let denom = &one - &k2 * &gamma_2;
    let cond = sqrt(&((&one + &gamma_2) / &denom));
    let eta = q(eta);
    Oracle {
        ortho: &k2 * &gamma_1 / &denom,
        residual: &ea + (&es + (&one + &eps_f) * &e3) * &eta + &gamma_3 * &cond * &eta * &k,
        cond,
        eps_f,
        gamma_1,
        gamma_2,
        gamma_3,
    }
}

fn rel(x: f64, exact: &Q) -> f64 {
    if exact.is_zero() {
        return x.abs();
    }
    ((q(x) - exact) / exact).abs().to_f64().unwrap()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.random_range(lo.log10()..hi.log10()))
}

fn random_eps(rng: &mut ChaCha8Rng) -> f64 {
    // A tenth of the components are exactly zero.
    if rng.random::<f64>() < 0.1 {
        0.0
    } else {
        log_uniform(rng, 1e-20, 1e-8)
    }
}

#[test]
fn full_bounds_match_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 100 {
        let e = EpsilonSet::new(
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            log_uniform(&mut rng, 1.0, 1e4),
        )
        .unwrap();
        let kappa = log_uniform(&mut rng, 1.0, 1e6);
        let eta = rng.random_range(1.0..=kappa);
        let g = gamma_terms(&e);
        let b = preconditioned_bounds(&g, &e, kappa, eta).unwrap();
        if !b.assumption_ok {
            continue;
        }
        checked += 1;
        let o = oracle(&e, kappa, eta);
        let pairs = [
            (g.eps_f, &o.eps_f),
            (g.gamma_1, &o.gamma_1),
            (g.gamma_2, &o.gamma_2),
            (g.gamma_3, &o.gamma_3),
            (b.ortho.unwrap(), &o.ortho),
            (b.residual.unwrap(), &o.residual),
            (b.cond_r2_factor.unwrap(), &o.cond),
        ];
        for (i, (x, exact)) in pairs.into_iter().enumerate() {
            assert!(
                rel(x, exact) <= 1e-10,
                "quantity {i} at {e:?}, kappa {kappa}: {x}"
            );
        }
    }
}

#[test]
fn unit_roundoff_examples_match_oracle() {
    for (kappa_rs, kappa, eta) in [(100.0, 1.0, 1.0), (1.0, 10.0, 5.0), (1.0, 1e7, 1.0)] {
        let e = EpsilonSet::uniform(U, kappa_rs).unwrap();
        let b = preconditioned_bounds(&gamma_terms(&e), &e, kappa, eta).unwrap();
        let o = oracle(&e, kappa, eta);
        assert!(rel(b.ortho.unwrap(), &o.ortho) <= 1e-10);
        assert!(rel(b.residual.unwrap(), &o.residual) <= 1e-10);
    }
}

#[test]
fn unpreconditioned_bounds_are_a_special_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let e = EpsilonSet::new(
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            random_eps(&mut rng),
            log_uniform(&mut rng, 1.0, 1e4),
        )
        .unwrap();
        let kappa = log_uniform(&mut rng, 1.0, 1e9);
        let special = EpsilonSet {
            eps_s: 0.0,
            eps_4: 0.0,
            kappa_rs: 1.0,
            ..e
        };
        let want = preconditioned_bounds(&gamma_terms(&special), &special, kappa, 1.0).unwrap();
        assert_eq!(unpreconditioned_bounds(&e, kappa).unwrap(), want);
    }
}

#[test]
fn first_order_close_to_full_for_tiny_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let eps: Vec<f64> = (0..6)
            .map(|_| log_uniform(&mut rng, 1e-20, 1e-12))
            .collect();
        let e = EpsilonSet::new(eps[0], eps[1], eps[2], eps[3], eps[4], eps[5], 1.0).unwrap();
        let kappa = log_uniform(&mut rng, 1.0, 1e3);
        let eta = rng.random_range(1.0..=kappa);
        let full = preconditioned_bounds(&gamma_terms(&e), &e, kappa, eta).unwrap();
        let first = first_order_bounds(&e, kappa, eta).unwrap();
        let (f, o) = (full.ortho.unwrap(), first.ortho.unwrap());
        assert!(o <= f * 1.01 && o >= f * 0.99, "{o} vs {f}");
        let (f, o) = (full.residual.unwrap(), first.residual.unwrap());
        assert!(o <= f * 1.01 && o >= f * 0.99, "{o} vs {f}");
    }
}

fn eps_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), (-20.0f64..-8.0).prop_map(|x| 10f64.powf(x))]
}

proptest! {
    #[test]
    fn gammas_nondecreasing_in_each_perturbation(
        base in prop::array::uniform6(eps_strategy()),
        kappa_rs in 1.0f64..1e4,
        which in 0usize..6,
        bump in 1e-12f64..1e-8,
    ) {
        let make = |v: [f64; 6]| EpsilonSet::new(v[0], v[1], v[2], v[3], v[4], v[5], kappa_rs).unwrap();
        let mut up = base;
        up[which] += bump;
        let (g0, g1) = (gamma_terms(&make(base)), gamma_terms(&make(up)));
        prop_assert!(g1.gamma_1 >= g0.gamma_1);
        prop_assert!(g1.gamma_2 >= g0.gamma_2);
        prop_assert!(g1.gamma_3 >= g0.gamma_3);
    }

    #[test]
    fn valid_bounds_are_nonnegative(
        v in prop::array::uniform6(eps_strategy()),
        kappa in 1.0f64..1e6,
        t in 0.0f64..=1.0,
    ) {
        let e = EpsilonSet::new(v[0], v[1], v[2], v[3], v[4], v[5], 1.0).unwrap();
        let eta = 1.0 + t * (kappa - 1.0);
        let b = preconditioned_bounds(&gamma_terms(&e), &e, kappa, eta).unwrap();
        if b.assumption_ok {
            prop_assert!(b.ortho.unwrap() >= 0.0);
            prop_assert!(b.residual.unwrap() >= e.eps_a);
        }
    }

    #[test]
    fn sampling_bound_monotone(
        m in 100usize..10_000,
        n in 1usize..100,
        t in 0.0f64..=1.0,
        eps in 0.05f64..0.9,
        delta in 0.001f64..0.5,
    ) {
        let mu = n as f64 / m as f64 + t * (1.0 - n as f64 / m as f64);
        let c = |m, n, mu, eps, delta| sampling_lower_bound(m, n, mu, eps, delta).unwrap().c_min;
        let base = c(m, n, mu, eps, delta);
        prop_assert!(c(m, n, mu, eps * 1.05, delta) <= base);
        prop_assert!(c(m, n, mu, eps, delta * 1.5) <= base);
        prop_assert!(c(m, n, (mu * 1.1).min(1.0), eps, delta) >= base);
        prop_assert!(c(m + 50, n, mu, eps, delta) >= base);
        prop_assert!(c(m, (n + 1).min(m), mu.max((n + 1) as f64 / m as f64), eps, delta) >= base);
    }
}
