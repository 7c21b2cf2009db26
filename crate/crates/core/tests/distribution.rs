use aoi_core::aoi_analytic::clt_threshold;
use aoi_core::aoi_sim::DelaySampler;
use aoi_core::erasure_stats::{
    chernoff_minimizer, chernoff_tail, conditional_mean, max_nb_moments, nb_cdf, nb_moments, nb_pmf, nb_sf,
    ChannelSpec, ConditionalMeans, NbTable,
};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use statrs::distribution::{Discrete, NegativeBinomial};

fn spec(k: u64, delta: f64) -> ChannelSpec {
    ChannelSpec::new(k, delta).unwrap()
}

/// `P[at least k of the first n symbols survive]`, by visiting every erasure pattern.
/// The failing patterns are summed since their total is small.
fn enumerate_cdf(k: u64, delta: f64, n: u32) -> f64 {
    let p = 1.0 - delta;
    let short = kahan(
        (0u64..1 << n)
            .filter(|bits| u64::from(bits.count_ones()) < k)
            .map(|bits| {
                let ok = bits.count_ones() as i32;
                p.powi(ok) * delta.powi(n as i32 - ok)
            }),
    );
    1.0 - short
}

fn kahan(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for t in terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    sum + carry
}

/// Same sum with patterns grouped by how many symbols survive; the group
/// sizes are exact integer binomial counts.
fn grouped_cdf(k: u64, delta: f64, n: u32) -> f64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    let p = 1.0 - delta;
    let short: f64 = (0..k as usize)
        .map(|ok| row[ok] as f64 * p.powi(ok as i32) * delta.powi(n as i32 - ok as i32))
        .sum();
    1.0 - short
}

fn oracle_pmf(k: u64, delta: f64, x: u64) -> f64 {
    if x < k {
        return 0.0;
    }
    NegativeBinomial::new(k as f64, 1.0 - delta).unwrap().pmf(x - k)
}

#[test]
fn cdf_matches_exhaustive_patterns() {
    for k in 1..=20u64 {
        for delta in [0.1, 0.3, 0.5] {
            let table = NbTable::new(spec(k, delta), k + 12);
            for n in k..=k + 12 {
                let n32 = n as u32;
                let reference = if n32 <= 20 {
                    enumerate_cdf(k, delta, n32)
                } else {
                    grouped_cdf(k, delta, n32)
                };
                let got = table.cdf(n);
                assert!(
                    (got - reference).abs() < 1e-12,
                    "k={k} delta={delta} n={n}: {got} vs {reference}"
                );
            }
        }
    }
}

#[test]
fn pmf_matches_external_oracle() {
    for (k, delta) in [(1, 0.5), (7, 0.25), (40, 0.6), (300, 0.1)] {
        let s = spec(k, delta);
        let t = NbTable::new(s, k + 200);
        for x in k..k + 200 {
            let o = oracle_pmf(k, delta, x);
            if o > 1e-280 {
                assert!((nb_pmf(s, x) / o - 1.0).abs() < 1e-11, "k={k} x={x}");
                assert!((t.pmf(x) / o - 1.0).abs() < 1e-11, "k={k} x={x}");
            }
        }
    }
}

#[test]
fn three_symbol_pmf_by_enumeration() {
    // Length-4 patterns whose third success lands on symbol 4.
    let (k, delta) = (3, 0.2);
    let mut total = 0.0;
    for bits in 0u32..16 {
        let ok = bits.count_ones();
        let last_received = bits & 0b1000 != 0;
        if ok == 3 && last_received {
            total += 0.8f64.powi(3) * 0.2f64.powi(1);
        }
    }
    assert!((nb_pmf(spec(k, delta), 4) - total).abs() < 1e-15);
    assert!((total - 0.3072).abs() < 1e-15);
}

#[test]
fn pmf_sums_to_one_from_below() {
    let s = spec(25, 0.4);
    let mut acc = 0.0;
    let mut prev_gap = 1.0;
    for x in 25..400 {
        acc += nb_pmf(s, x);
        let gap = 1.0 - acc;
        assert!(gap >= -1e-14 && gap <= prev_gap + 1e-16);
        prev_gap = gap;
    }
    assert!(prev_gap.abs() < 1e-13);
}

#[test]
fn chernoff_dominates_exact_tail() {
    for (k, delta) in [(1, 0.1), (5, 0.5), (30, 0.7), (100, 0.1), (1000, 0.3)] {
        let s = spec(k, delta);
        let start = s.mean().floor() as u64 + 1;
        let table = NbTable::new(s, start + 400);
        for n in start..start + 400 {
            // P[X > n-1] = P[X >= n]
            assert!(
                table.sf(n - 1) <= chernoff_tail(s, n),
                "k={k} delta={delta} n={n}"
            );
        }
    }
}

#[test]
fn chernoff_tilt_at_clt_threshold() {
    // At n^ = mu_k (1 + w_k) the tilt is ln[(1 + w_k/delta) / (1 + w_k)].
    for (k, delta) in [(1000, 0.1), (50, 0.4), (10_000, 0.25)] {
        let s = spec(k, delta);
        let t = clt_threshold(s).unwrap();
        let tilt = chernoff_minimizer(s, t.n_hat_real).unwrap();
        let closed = ((1.0 + t.w_k / delta) / (1.0 + t.w_k)).ln();
        assert!((tilt - closed).abs() < 1e-12);
    }
}

#[test]
fn conditional_mean_recurrence_vs_definition() {
    for k in [1u64, 2, 5, 13, 30] {
        for delta in [0.1, 0.3, 0.5, 0.7] {
            let s = spec(k, delta);
            let mut num = 0.0;
            let mut den = 0.0;
            for (n, mu) in (k..k + 150).zip(ConditionalMeans::new(s)) {
                let p = oracle_pmf(k, delta, n);
                num += n as f64 * p;
                den += p;
                let direct = num / den;
                assert!((mu / direct - 1.0).abs() < 1e-10, "k={k} delta={delta} n={n}");
            }
        }
    }
}

#[test]
fn conditional_mean_point_examples() {
    let s = spec(10, 0.3);
    assert_eq!(conditional_mean(s, 10).unwrap(), 10.0);
    assert!((conditional_mean(s, 11).unwrap() - 10.75).abs() < 1e-12);
    assert!((conditional_mean(s, 10_000).unwrap() - 10.0 / 0.7).abs() < 1e-9);
}

#[test]
fn moments_match_sampled_delays() {
    // 10^6 inverse-CDF draws of X_1000 at delta = 0.1.
    let s = spec(1000, 0.1);
    let summary = nb_moments(s);
    let sampler = DelaySampler::new(s, 1000);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 1_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..draws {
        let x = sampler.sample(&mut rng) as f64;
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / draws as f64;
    let var = sum_sq / draws as f64 - mean * mean;
    let se_mean = (summary.sigma2_k / draws as f64).sqrt();
    assert!((mean - summary.mu_k).abs() < 4.0 * se_mean, "{mean}");
    // Var of the sample variance ~ 2 sigma^4 / N for a near-Gaussian law.
    let se_var = (2.0 * summary.sigma2_k.powi(2) / draws as f64).sqrt();
    assert!((var - summary.sigma2_k).abs() < 4.0 * se_var, "{var}");
}

#[test]
fn max_moments_match_monte_carlo() {
    let s = spec(100, 0.2);
    let mm = max_nb_moments(s, 4, 1e-10).unwrap();
    let sampler = DelaySampler::new(s, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let reps = 1_000_000;
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..reps {
        let y = (0..4).map(|_| sampler.sample(&mut rng)).max().unwrap() as f64;
        s1 += y;
        s2 += y * y;
        s3 += y * y * y;
        s4 += y * y * y * y;
    }
    let n = reps as f64;
    let (m1, m2) = (s1 / n, s2 / n);
    let se1 = ((m2 - m1 * m1) / n).sqrt();
    let se2 = ((s4 / n - m2 * m2) / n).sqrt();
    let _ = s3;
    assert!((m1 - mm.ey).abs() < 3.0 * se1, "{m1} vs {}", mm.ey);
    assert!((m2 - mm.ey2).abs() < 3.0 * se2, "{m2} vs {}", mm.ey2);
}

#[test]
fn max_moments_single_monitor_within_tol() {
    for (k, delta) in [(1, 0.5), (20, 0.3), (500, 0.05), (100, 0.9)] {
        let s = spec(k, delta);
        let tol = 1e-11;
        let mm = max_nb_moments(s, 1, tol).unwrap();
        let nb = nb_moments(s);
        let ex2 = nb.sigma2_k + nb.mu_k * nb.mu_k;
        assert!((mm.ey - nb.mu_k).abs() <= 2.0 * tol * nb.mu_k, "k={k}");
        assert!((mm.ey2 - ex2).abs() <= 2.0 * tol * ex2, "k={k}");
    }
}

#[test]
fn point_cdf_and_sf_agree_with_table() {
    let s = spec(60, 0.45);
    let t = NbTable::new(s, 300);
    for n in [59u64, 60, 100, 109, 150, 299] {
        assert_eq!(nb_cdf(s, n), t.cdf(n));
        assert!((nb_sf(s, n) - t.sf(n)).abs() <= 1e-15 * t.sf(n).max(1e-300));
    }
}

proptest! {
    #[test]
    fn cdf_nondecreasing(k in 1u64..200, delta in 0.0f64..0.95, span in 1u64..300) {
        let t = NbTable::new(spec(k, delta), k + span);
        let mut prev = 0.0;
        for n in k.saturating_sub(2)..=k + span {
            let c = t.cdf(n);
            prop_assert!(c >= prev);
            prop_assert!(c <= 1.0);
            prev = c;
        }
    }

    #[test]
    fn conditional_mean_monotone_and_bounded(k in 1u64..120, delta in 0.0f64..0.95) {
        let s = spec(k, delta);
        let cap = s.mean();
        let mut prev = 0.0;
        for (n, mu) in (k..k + 400).zip(ConditionalMeans::new(s)) {
            prop_assert!(mu >= prev);
            prop_assert!(mu <= (n as f64).min(cap), "n={} mu={} cap={}", n, mu, cap);
            prev = mu;
        }
    }

    #[test]
    fn max_cdf_power_orders(k in 1u64..60, delta in 0.05f64..0.8, m in 1u32..10) {
        let t = NbTable::new(spec(k, delta), k + 100);
        let mut prev = 0.0;
        for y in k..k + 100 {
            let f = t.cdf(y);
            let fm = f.powi(m as i32);
            prop_assert!(fm >= prev);
            prop_assert!(f.powi(m as i32 + 1) <= fm);
            prev = fm;
        }
    }
}
