use fluxbec::constants::{FLUX_QUANTUM, HBAR};
use fluxbec::quadrature::{bisect, gauss_legendre, integrate_composite};
use fluxbec::squid::{
    analyze_double_well, circulating_current, find_extrema, gaussian_well_states, reduced_potential,
    reduced_potential_slope, tunneling_estimate, well_frequency, ExtremumKind, SquidParams,
    DEFAULT_SYMMETRY_TOLERANCE,
};

fn representative(beta: f64, phi_ex: f64) -> SquidParams {
    SquidParams::from_reduced(100e-12, 10e-15, beta, phi_ex).unwrap()
}

/// Independent extrema: sign changes of U′ on a 10⁴-point grid over
/// [φ_ex − 1, φ_ex + 1], refined by bisection.
fn extrema_oracle(phi_ex: f64, beta: f64) -> Vec<(f64, bool)> {
    let n = 10_000;
    let f = |x: f64| reduced_potential_slope(x, phi_ex, beta);
    let xs: Vec<f64> = (0..=n).map(|i| phi_ex - 1.0 + 2.0 * i as f64 / n as f64).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (f(w[0]), f(w[1]));
        if a == 0.0 || a.signum() != b.signum() {
            let root = bisect(f, w[0], w[1], 1e-14, 200).unwrap();
            out.push((root, a < 0.0));
        }
    }
    out
}

#[test]
fn extrema_match_grid_oracle() {
    let p = representative(2.1, 0.51);
    let found = find_extrema(&p).unwrap();
    let oracle = extrema_oracle(0.51, 2.1);
    assert_eq!(found.len(), oracle.len());
    for (e, (x, is_min)) in found.iter().zip(&oracle) {
        assert!((e.phi - x).abs() < 1e-10);
        assert_eq!(e.kind == ExtremumKind::Minimum, *is_min);
    }
}

#[test]
fn well_frequency_matches_finite_difference() {
    let p = representative(2.1, 0.51);
    let a = analyze_double_well(&p).unwrap();
    for phi in [a.phi_min_l, a.phi_min_r] {
        // U(Φ) in joules, differentiated twice in Φ.
        let h = 1e-4 * FLUX_QUANTUM;
        let flux = phi * FLUX_QUANTUM;
        let u2 = (p.potential(flux + h) - 2.0 * p.potential(flux) + p.potential(flux - h)) / (h * h);
        let want = (u2 / p.capacitance).sqrt();
        let got = well_frequency(&p, phi).unwrap();
        assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn overlap_and_delta_match_quadrature() {
    let p = representative(2.1, 0.51);
    let a = analyze_double_well(&p).unwrap();
    let (l, r) = gaussian_well_states(&a, &p);
    let lo = l.center - 20.0 * l.width();
    let hi = r.center + 20.0 * r.width();
    let rule = gauss_legendre(20);
    let s = integrate_composite(|x| l.amplitude(x) * r.amplitude(x), lo, hi, 2000, &rule);
    assert!((l.overlap(&r) - s).abs() <= 1e-10 * s.abs().max(1e-300), "{} vs {s}", l.overlap(&r));
    let norm = integrate_composite(|x| l.amplitude(x).powi(2), lo, hi, 2000, &rule);
    assert!((norm - 1.0).abs() < 1e-12);

    // H ψ with a finite-difference Laplacian, matrix elements by quadrature.
    let kinetic = HBAR * HBAR / (2.0 * p.capacitance);
    let step = 1e-3 * l.width().min(r.width());
    let h_elem = |bra: &dyn Fn(f64) -> f64, ket: &dyn Fn(f64) -> f64| {
        integrate_composite(
            |x| {
                let lap = (ket(x + step) - 2.0 * ket(x) + ket(x - step)) / (step * step);
                bra(x) * (-kinetic * lap + p.potential(x) * ket(x))
            },
            lo,
            hi,
            2000,
            &rule,
        ) / HBAR
    };
    let fl = |x: f64| l.amplitude(x);
    let fr = |x: f64| r.amplitude(x);
    let (hll, hrr, hlr) = (h_elem(&fl, &fl), h_elem(&fr, &fr), h_elem(&fl, &fr));
    let delta = 2.0 * (hlr - 0.5 * s * (hll + hrr)).abs() / (1.0 - s * s);
    let est = tunneling_estimate(&p, &a).unwrap();
    assert!(est.delta.is_finite() && est.delta > 0.0);
    assert!((est.delta - delta).abs() / delta < 1e-4, "{} vs {delta}", est.delta);
}

#[test]
fn delta_decreases_with_barrier() {
    let deltas: Vec<f64> = [2.1, 3.0, 4.0]
        .iter()
        .map(|&b| analyze_double_well(&representative(b, 0.5)).unwrap().delta_est)
        .collect();
    assert!(deltas[0] > deltas[1] && deltas[1] > deltas[2], "{deltas:?}");
}

#[test]
fn circulating_current_from_minima() {
    let p = representative(2.1, 0.51);
    let oracle = extrema_oracle(0.51, 2.1);
    let left = oracle.iter().find(|(_, m)| *m).unwrap().0;
    let a = analyze_double_well(&p).unwrap();
    let i = circulating_current(&p, &a, DEFAULT_SYMMETRY_TOLERANCE).unwrap();
    let want = (left - 0.51) * FLUX_QUANTUM / 100e-12;
    assert!((i - want).abs() <= 1e-9 * want.abs(), "{i} vs {want}");
}

#[test]
fn potential_minimum_below_barrier() {
    let p = representative(2.1, 0.51);
    let a = analyze_double_well(&p).unwrap();
    let u = |x| reduced_potential(x, 0.51, 2.1);
    assert!(u(a.phi_barrier) > u(a.phi_min_l) && u(a.phi_barrier) > u(a.phi_min_r));
    assert!(a.barrier_height > 0.0);
}
