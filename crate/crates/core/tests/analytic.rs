use aoi_core::aoi_analytic::{
    clt_threshold, fr_age, fr_opt_age_bound, fr_optimize, iir_age, iir_age_multi, FrCurve, DEFAULT_ETA0,
};
use aoi_core::erasure_stats::{beta_k, chernoff_tail, ChannelSpec};
use aoi_core::Error;

fn spec(k: u64, delta: f64) -> ChannelSpec {
    ChannelSpec::new(k, delta).unwrap()
}

fn binom(n: u64, r: u64) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Long-run FR age from the renewal-reward theorem, summing over every
/// (decode position, next decode position, blocks until next success).
fn renewal_reward_age(k: u64, delta: f64, n: u64) -> f64 {
    let p = 1.0 - delta;
    let pmf: Vec<(u64, f64)> = (k..=n)
        .map(|x| {
            (
                x,
                binom(x - 1, k - 1) * p.powi(k as i32) * delta.powi((x - k) as i32),
            )
        })
        .collect();
    let success: f64 = pmf.iter().map(|&(_, q)| q).sum();
    let fail = 1.0 - success;
    let nf = n as f64;

    let (mut reward, mut length) = (0.0, 0.0);
    let mut m = 1u64;
    loop {
        let pm = success * ((m - 1) as f64 * (-success).ln_1p()).exp();
        for &(x, qx) in &pmf {
            for &(y, qy) in &pmf {
                let w = pm * (qx / success) * (qy / success);
                let l = m as f64 * nf + y as f64 - x as f64;
                reward += w * (x as f64 * l + 0.5 * l * l);
                length += w * l;
            }
        }
        // Remaining blocks: sum_{j>m} fail^(j-1) (j+1)^2 n^2 <= fail^m (m+2)^2 n^2 / (1-fail)^3.
        let tail = fail.powi(m as i32) * ((m + 2) as f64 * nf).powi(2) / success.powi(3);
        if tail <= 1e-13 || fail == 0.0 {
            break;
        }
        m += 1;
    }
    reward / length
}

#[test]
fn fr_age_matches_renewal_reward() {
    for k in 1..=12u64 {
        for delta in [0.25, 0.5] {
            for n in k..=k + 10 {
                let lib = fr_age(spec(k, delta), n).unwrap().age;
                let oracle = renewal_reward_age(k, delta, n);
                assert!(
                    (lib - oracle).abs() <= 1e-9 * oracle,
                    "k={k} delta={delta} n={n}: {lib} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn fr_single_symbol_example() {
    // One symbol per update, half erased: geometric gaps of mean 2.
    assert!((fr_age(spec(1, 0.5), 1).unwrap().age - 2.5).abs() < 1e-15);
    assert!((renewal_reward_age(1, 0.5, 1) - 2.5).abs() < 1e-12);
}

#[test]
fn bound_dominates_with_exact_gap() {
    for k in 1..=30u64 {
        for delta in [0.1, 0.3, 0.5, 0.7] {
            let s = spec(k, delta);
            for p in FrCurve::new(s, k + 200).take(201) {
                assert!(p.age <= p.upper_bound, "k={k} delta={delta} n={}", p.n);
                let gap = s.mean() - p.mu_tilde_n;
                assert!(((p.upper_bound - p.age) - gap).abs() <= 1e-10 * p.upper_bound.max(1.0));
            }
        }
    }
}

#[test]
fn discard_probability_below_chernoff() {
    for k in [1u64, 10, 30] {
        for delta in [0.1, 0.3, 0.5, 0.7] {
            let s = spec(k, delta);
            for p in FrCurve::new(s, k + 200)
                .take(201)
                .filter(|p| p.n as f64 > s.mean())
            {
                assert!(
                    p.epsilon_n <= chernoff_tail(s, p.n + 1),
                    "k={k} delta={delta} n={}",
                    p.n
                );
            }
        }
    }
}

#[test]
fn fr_curve_single_minimum_around_optimum() {
    for delta in [0.1, 0.2, 0.3, 0.4] {
        let s = spec(1000, delta);
        let opt = fr_optimize(s).unwrap();
        let ages: Vec<f64> = FrCurve::new(s, opt.scan_end)
            .take((opt.scan_end - 999) as usize)
            .map(|p| p.age)
            .collect();
        let at = (opt.n_star_exact - 1000) as usize;
        assert!(ages[..at].windows(2).all(|w| w[0] > w[1]), "delta={delta}");
        assert!(ages[at..].windows(2).all(|w| w[0] < w[1]), "delta={delta}");
    }
}

#[test]
fn optimizer_at_k_1000() {
    let expected_star = [(0.1, 1145u64), (0.2, 1301), (0.3, 1498), (0.4, 1758)];
    for (delta, star) in expected_star {
        let s = spec(1000, delta);
        let opt = fr_optimize(s).unwrap();
        assert_eq!(opt.n_star_exact, star);
        let clt = opt.clt.unwrap();
        assert!(opt.age_star_exact <= clt.age_at_n_hat);
        assert!(clt.age_at_n_hat <= clt.bound_at_n_hat);
        assert!(clt.bound_at_n_hat <= clt.fr_opt_bound.unwrap());
        assert!((clt.threshold.n_hat as f64 - star as f64).abs() <= 5.0 * s.std_dev());
    }
    let t = clt_threshold(spec(1000, 0.1)).unwrap();
    assert_eq!(t.n_hat, 1144);
    assert!((t.n_hat_real - 1143.9947).abs() < 1e-3);
}

#[test]
fn optimizer_noiseless_and_unavailable() {
    let opt = fr_optimize(spec(5, 0.0)).unwrap();
    assert_eq!(opt.n_star_exact, 5);
    assert_eq!(opt.age_star_exact, 7.5);
    assert!(opt.clt.is_none());
    // 2k / (pi delta) <= 1: no CLT threshold, exact scan still runs.
    let s = spec(1, 0.9);
    assert!(matches!(clt_threshold(s), Err(Error::CltUnavailable { .. })));
    let opt = fr_optimize(s).unwrap();
    assert!(opt.clt.is_none());
    let best = FrCurve::new(s, opt.scan_end)
        .take(opt.scan_end as usize)
        .map(|p| p.age)
        .fold(f64::INFINITY, f64::min);
    assert_eq!(best, opt.age_star_exact);
}

#[test]
fn normalized_ages_approach_three_halves() {
    let delta = 0.25;
    let mut prev: Option<(f64, f64)> = None;
    for k in [1_000u64, 10_000, 100_000] {
        let s = spec(k, delta);
        let iir = iir_age(s).age / s.mean() - 1.5;
        assert!((iir - delta / (2.0 * k as f64)).abs() < 1e-12);
        let opt = fr_optimize(s).unwrap();
        let clt = opt.clt.unwrap();
        let fr = clt.age_at_n_hat / s.mean() - 1.5;
        let beta = clt.beta_k;
        let w = clt.threshold.w_k;
        assert!(fr <= (beta + 0.5 * w * (1.0 + beta)) / (1.0 - beta), "k={k}");
        if let Some((pi, pf)) = prev {
            assert!(iir < pi && fr < pf);
        }
        prev = Some((iir, fr));
    }
}

#[test]
fn ages_degrade_with_erasures() {
    for k in [1u64, 20, 1000] {
        let mut prev_iir = 0.0;
        let mut prev_fr = 0.0;
        for i in 0..10 {
            let s = spec(k, i as f64 * 0.09);
            let iir = iir_age(s).age;
            let fr = fr_optimize(s).unwrap().age_star_exact;
            assert!(iir > prev_iir && fr > prev_fr, "k={k} i={i}");
            prev_iir = iir;
            prev_fr = fr;
        }
    }
}

#[test]
fn zero_wait_boundary() {
    for k in [1u64, 10, 1000] {
        let edge = k as f64 / (2 * k + 1) as f64;
        assert!(iir_age(spec(k, edge - 1e-9)).zero_wait_optimal);
        assert!(!iir_age(spec(k, edge + 1e-9)).zero_wait_optimal);
    }
}

#[test]
fn beta_and_bound_examples() {
    let b = beta_k(spec(1000, 0.1), 0.1).unwrap();
    assert!((b - 0.014006024475738302).abs() < 1e-15);
    let b = beta_k(spec(50, 0.4), 0.01).unwrap();
    assert!((b - 0.11398381101185606).abs() < 1e-15);
    assert!(matches!(beta_k(spec(10, 0.0), 0.1), Err(Error::ZeroErasure)));
    // Large delta, small k: beta >= 1 so the bound says nothing.
    assert!(matches!(
        fr_opt_age_bound(spec(1, 0.6), DEFAULT_ETA0),
        Err(Error::VacuousBound { .. })
    ));
}

#[test]
fn multi_monitor_grows_past_fr_optimum() {
    for delta in [0.1, 0.4] {
        let s = spec(1000, delta);
        let fr_bound = fr_optimize(s).unwrap().clt.unwrap().bound_at_n_hat;
        let single = iir_age_multi(s, 1, 1e-10).unwrap();
        assert!((single - iir_age(s).age).abs() <= 1e-8 * single);
        assert!(single < fr_bound);
        let mut prev = single;
        let mut crossed = None;
        let mut m = 2;
        while m <= 4096 {
            let age = iir_age_multi(s, m, 1e-10).unwrap();
            assert!(age > prev);
            if crossed.is_none() && age > fr_bound {
                crossed = Some(m);
            }
            prev = age;
            m *= 2;
        }
        let m = crossed.expect("multi-monitor IIR never passes the FR bound");
        assert!(m > 64 && m <= 1024, "delta={delta} m={m}");
    }
}
