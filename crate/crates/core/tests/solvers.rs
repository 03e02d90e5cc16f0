use polyvol::poly::{Convention, Degree, GeneralizedPolynomial, GramForm};
use polyvol::solvers::{scale_to_target_volume, solve_p1, solve_p2, solve_p3, Problem, SolveConfig};
use polyvol::volume::{closed_form_ball_volume, volume, EngineConfig};
use polyvol::{Error, SymMatrix};
use std::f64::consts::PI;

fn deg(d: u32) -> Degree {
    Degree::integer(d).unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
    }
}

fn assert_monotone(trace: &[(f64, f64)]) {
    for w in trace.windows(2) {
        assert!(w[1].0 <= w[0].0 * (1.0 + 1e-12), "objective rose: {trace:?}");
        assert!(w[1].1 <= w[0].1, "volume rose: {trace:?}");
    }
}

#[test]
fn sparse_quartic_from_five_starts() {
    let mut sols = Vec::new();
    for seed in 1..=5 {
        let r = solve_p1(2, deg(4), 1, None, &SolveConfig::default().with_seed(seed)).unwrap();
        assert_eq!(r.problem, Problem::P1);
        assert!(r.converged && r.certificate.passed());
        let g = r.solution.polynomial().dense();
        assert_close(&g, &[1.0, 0.0, 0.0, 0.0, 1.0], 1e-2);
        assert!((r.objective - 2.0).abs() < 1e-2);
        assert!((r.volume - closed_form_ball_volume(2, 4.0).unwrap()).abs() < 1e-4 * r.volume);
        assert_monotone(&r.iterations);
        sols.push(g);
    }
    for a in &sols {
        for b in &sols {
            assert_close(a, b, 2e-2);
        }
    }
}

#[test]
fn quadratic_l1_optimum_is_the_disk() {
    let r = solve_p1(2, deg(2), 1, None, &SolveConfig::default()).unwrap();
    assert_close(&r.solution.polynomial().dense(), &[1.0, 0.0, 1.0], 1e-2);
    assert!((r.objective - 2.0).abs() < 1e-6);
}

#[test]
fn generalized_l1_optimum() {
    let r = solve_p1(2, Degree::new(1, 2).unwrap(), 4, None, &SolveConfig::default()).unwrap();
    assert_eq!(r.problem, Problem::P1q);
    assert!(r.certificate.passed());
    assert_close(&r.solution.polynomial().dense(), &[1.0, 0.0, 1.0], 1e-2);
}

#[test]
fn three_dimensional_l1_optimum() {
    let r = solve_p1(3, deg(4), 1, None, &SolveConfig::default()).unwrap();
    let g = r.solution.polynomial();
    for (a, c) in g.index_set().iter().zip(g.dense()) {
        let want = if a.is_axis_power() { 1.0 } else { 0.0 };
        assert!((c - want).abs() < 1e-2, "{a}: {c}");
    }
}

#[test]
fn weighted_l2_optimum_is_the_euclidean_quartic() {
    let r = solve_p2(2, deg(4), 1, None, &SolveConfig::default()).unwrap();
    assert!(r.certificate.passed(), "{:?}", r.certificate.residuals);
    let g = r.solution.polynomial();
    assert_eq!(g.convention(), Convention::Multinomial);
    // the disk normalization of the worked example
    let at_pi = scale_to_target_volume(&g, PI, &EngineConfig::spherical()).unwrap();
    assert_close(&at_pi.dense(), &[1.0, 0.0, 1.0 / 3.0, 0.0, 1.0], 2e-2);
    assert_monotone(&r.iterations);
}

#[test]
fn weighted_l2_in_three_dimensions() {
    let r = solve_p2(3, deg(4), 1, None, &SolveConfig::default()).unwrap();
    let g = r.solution.polynomial();
    let unit = scale_to_target_volume(&g, 4.0 * PI / 3.0, &EngineConfig::spherical()).unwrap();
    for (a, c) in unit.index_set().iter().zip(unit.dense()) {
        let k = a.numerators();
        let want = if a.is_axis_power() {
            1.0
        } else if k.iter().all(|v| v % 2 == 0) {
            1.0 / 3.0
        } else {
            0.0
        };
        assert!((c - want).abs() < 2e-2, "{a}: {c}");
    }
}

#[test]
fn quadratic_l2_optimum_is_the_disk() {
    let r = solve_p2(2, deg(2), 1, None, &SolveConfig::default()).unwrap();
    assert_close(&r.solution.polynomial().dense(), &[1.0, 0.0, 1.0], 1e-2);
}

#[test]
fn generalized_l2_has_full_support() {
    let r = solve_p2(2, Degree::new(1, 2).unwrap(), 4, None, &SolveConfig::default()).unwrap();
    assert!(r.certificate.passed());
    assert!(r.solution.polynomial().dense().iter().all(|c| *c > 0.1));
}

#[test]
fn gram_trace_quadratic_is_the_identity() {
    let r = solve_p3(2, 2, None, &SolveConfig::default()).unwrap();
    let q = r.solution.gram().unwrap().matrix();
    let diff = q.add_scaled(-1.0, &SymMatrix::identity(2));
    let op = diff.eigen().unwrap().values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(op < 1e-2, "{q:?}");
}

#[test]
fn gram_trace_quartic_beats_the_diagonal() {
    let start = GramForm::diagonal_lp(2, 4).unwrap();
    let r = solve_p3(2, 4, Some(&start), &SolveConfig::default()).unwrap();
    assert!(r.certificate.passed());
    assert!(r.objective < 2.0 - 0.01);
    // the first accepted step already lowers the trace at volume ρ_4
    assert!(r.iterations[1].0 < r.iterations[0].0 - 1e-6);
    assert!((r.iterations[0].0 - 2.0).abs() < 1e-9);
    assert_monotone(&r.iterations);
    let from_default = solve_p3(2, 4, None, &SolveConfig::default()).unwrap();
    assert!((from_default.objective - r.objective).abs() < 1e-6);
}

#[test]
fn sampled_gradients_still_converge() {
    let cfg = SolveConfig::default().with_engine(EngineConfig::monte_carlo(1 << 16, 9));
    let r = solve_p1(2, deg(4), 1, None, &cfg).unwrap();
    assert!(r.certificate.passed());
    assert_close(&r.solution.polynomial().dense(), &[1.0, 0.0, 0.0, 0.0, 1.0], 2e-2);
    let g = r.solution.polynomial();
    let exact = volume(&g, &EngineConfig::spherical()).unwrap().value;
    let rho = closed_form_ball_volume(2, 4.0).unwrap();
    assert!((exact - rho).abs() / rho <= 1e-2);
    let again = solve_p1(2, deg(4), 1, None, &cfg).unwrap();
    assert_eq!(r.to_json(), again.to_json());
}

#[test]
fn unsupported_degrees_are_rejected() {
    let cfg = SolveConfig::default();
    assert!(matches!(solve_p1(2, deg(3), 1, None, &cfg), Err(Error::InvalidArgument(_))));
    assert!(matches!(
        solve_p1(2, Degree::new(1, 2).unwrap(), 2, None, &cfg),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(solve_p2(2, deg(3), 1, None, &cfg), Err(Error::InvalidArgument(_))));
    assert!(matches!(solve_p3(2, 3, None, &cfg), Err(Error::InvalidArgument(_))));
    let bad = GeneralizedPolynomial::from_dense(2, deg(4), 1, Convention::Monomial, &[1.0, 0.0, -3.0, 0.0, 1.0])
        .unwrap();
    assert!(matches!(solve_p1(2, deg(4), 1, Some(&bad), &cfg), Err(Error::Precondition(_))));
}

#[test]
fn unconverged_runs_are_flagged() {
    let r = solve_p1(2, deg(4), 1, None, &SolveConfig::default().with_max_iters(1)).unwrap();
    assert!(!r.converged);
    assert_eq!(r.iterations.len(), 2);
}

#[test]
fn result_document_shape() {
    let r = solve_p3(2, 2, None, &SolveConfig::default()).unwrap();
    let v = r.to_json_value();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(
        keys,
        ["certificate", "converged", "iterations", "objective", "problem", "solution", "volume"]
    );
    assert_eq!(v["problem"], "p3");
    assert!(v["solution"]["Q"].is_array());
    assert_eq!(v["certificate"]["kind"], "p3_psd");
    assert_eq!(v["iterations"][0].as_array().unwrap().len(), 2);
}
