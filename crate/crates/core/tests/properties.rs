use levelstat::cli::format::fmt_num;
use levelstat::two_level::{char_temps, classify_region};
use levelstat::{solve_mu, ResponseSet, Statistics, TwoLevelParams};
use proptest::prelude::*;

fn statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Fermi), Just(Statistics::Bose)]
}

/// Feasible two-level parameters with a fraction `f` of the Fermi capacity
/// or up to 50 bosons.
fn two_level() -> impl Strategy<Value = (Statistics, TwoLevelParams)> {
    (statistics(), 1.0..40.0f64, 1.0..400.0f64, 0.01..0.99f64, 0.02..50.0f64).prop_map(|(kind, z1, z2, f, nb)| {
        let n = match kind {
            Statistics::Fermi => f * (z1 + z2),
            Statistics::Bose => nb,
        };
        (kind, TwoLevelParams::new(z1, z2, n, 1.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn particle_number_is_conserved((kind, p) in two_level(), tau in 0.01..30.0f64) {
        let system = p.system(kind).unwrap();
        let state = solve_mu(tau, &system).unwrap();
        let n = state.particle_number(&system);
        prop_assert!((n - p.n_total).abs() <= 1e-10 * p.n_total.max(1.0));
        prop_assert!(state.complementarity_residual(&system) <= 1e-10);
    }

    #[test]
    fn responses_are_stable((kind, p) in two_level(), tau in 0.01..30.0f64) {
        let system = p.system(kind).unwrap();
        let state = solve_mu(tau, &system).unwrap();
        let r = ResponseSet::compute(&state, &system);
        prop_assert!(r.cv >= 0.0);
        if let Some(cp) = r.cp {
            prop_assert!(cp >= r.cv * (1.0 - 1e-12));
        }
        if let Some(g) = r.gamma_t {
            prop_assert!(g > 0.0);
        }
    }

    #[test]
    fn entropy_rises_with_temperature((kind, p) in two_level(), tau in 0.01..10.0f64, ratio in 1.001..3.0f64) {
        let system = p.system(kind).unwrap();
        let lo = solve_mu(tau, &system).unwrap().entropy;
        let hi = solve_mu(tau * ratio, &system).unwrap().entropy;
        prop_assert!(hi >= lo - 1e-10 * lo.abs().max(1.0));
    }

    #[test]
    fn mu_rises_with_particle_number(kind in statistics(), z1 in 1.0..30.0f64, z2 in 1.0..100.0f64, f in 0.01..0.9f64, g in 1.01..1.1f64, tau in 0.05..5.0f64) {
        let n = match kind {
            Statistics::Fermi => f * (z1 + z2),
            Statistics::Bose => 40.0 * f,
        };
        let n2 = match kind {
            Statistics::Fermi => (n * g).min(0.999 * (z1 + z2)),
            Statistics::Bose => n * g,
        };
        let mu = |n: f64| {
            let system = TwoLevelParams::new(z1, z2, n, 1.0).system(kind).unwrap();
            solve_mu(tau, &system).unwrap().mu
        };
        prop_assert!(mu(n2) >= mu(n) - 1e-9);
    }

    #[test]
    fn region_matches_switching_points((kind, p) in two_level()) {
        let region = classify_region(&p, kind);
        let temps = char_temps(&p, kind);
        prop_assert_eq!(region.has_completion(), temps.completion().is_some(), "{}", region);
        prop_assert_eq!(region.is_frozen(), temps.onset().is_none(), "{}", region);
    }

    #[test]
    fn printed_numbers_round_trip(x in prop::num::f64::NORMAL) {
        let back: f64 = fmt_num(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs());
    }
}
