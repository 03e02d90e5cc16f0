use polyvol::certificates::{certify_p1, certify_p2, certify_p3, refute_ld_for_p3, DualValue, Verdict};
use polyvol::poly::{Convention, Degree, GeneralizedPolynomial, GramForm};
use polyvol::solvers::scale_to_target_volume;
use polyvol::volume::{closed_form_ball_volume, moment_matrix, moment_table, EngineConfig};
use polyvol::SymMatrix;

fn quartic(c: [f64; 5], conv: Convention) -> GeneralizedPolynomial {
    GeneralizedPolynomial::from_dense(2, Degree::integer(4).unwrap(), 1, conv, &c).unwrap()
}

#[test]
fn cross_term_candidate_fails_with_a_named_residual() {
    let cfg = EngineConfig::spherical();
    let g = quartic([1.0, 0.0, 0.3, 0.0, 1.0], Convention::Multinomial)
        .to_convention(Convention::Monomial)
        .unwrap();
    let g = scale_to_target_volume(&g, closed_form_ball_volume(2, 4.0).unwrap(), &cfg).unwrap();
    let c = certify_p1(&g, &moment_table(&g, &cfg).unwrap(), 1e-6).unwrap();
    assert_eq!(c.verdict, Verdict::Fail);
    assert!(!c.failing().is_empty());
    for name in c.failing() {
        assert!(c.residual(name).unwrap() > 1e-3, "{name}");
    }
}

#[test]
fn sampled_moments_certify_the_lp_quartic() {
    let g = GeneralizedPolynomial::lp_ball(2, Degree::integer(4).unwrap(), 1).unwrap();
    let t = moment_table(&g, &EngineConfig::monte_carlo(1 << 17, 21)).unwrap();
    let c = certify_p1(&g, &t, 1e-2).unwrap();
    assert!(c.passed(), "{:?}", c.residuals);
    assert!(c.dual_scalar("theta").unwrap() > 0.0);
}

#[test]
fn passing_l2_candidates_have_positive_even_coefficients() {
    let cfg = EngineConfig::spherical();
    for c22 in [0.2, 1.0 / 3.0, 0.4] {
        let g = quartic([1.0, 0.0, c22, 0.0, 1.0], Convention::Multinomial);
        let c = certify_p2(&g, &moment_table(&g, &cfg).unwrap(), 1e-6).unwrap();
        if c.passed() {
            assert!(g.dense().iter().step_by(2).all(|v| *v > 0.0));
            assert!((c22 - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}

#[test]
fn l2_residual_tracks_coefficient_perturbations() {
    // volume, moments and ℓ₂ held fixed: only g₂₂ moves
    let cfg = EngineConfig::spherical();
    let g = quartic([1.0, 0.0, 1.0 / 3.0, 0.0, 1.0], Convention::Multinomial);
    let t = moment_table(&g, &cfg).unwrap();
    let base = certify_p2(&g, &t, 1e-6).unwrap();
    let l2 = base.dual_scalar("l2_star").unwrap();
    for delta in [1e-3, 1e-2, 5e-2] {
        let h = quartic([1.0, 0.0, 1.0 / 3.0 + delta, 0.0, 1.0], Convention::Multinomial);
        let c = certify_p2(&h, &t, 1e-6).unwrap();
        let dl2 = c.dual_scalar("l2_star").unwrap() - l2;
        let ratio = t.value(&g.index_set()[2]).unwrap() / t.volume().value;
        let drift = dl2 * 3.0 * ratio;
        let got = c.residual("residual(2,2)").unwrap() - base.residual("residual(2,2)").unwrap();
        assert!((got - (delta - drift)).abs() < 1e-8, "{got} vs {}", delta - drift);
    }
}

#[test]
fn certificates_depend_only_on_their_inputs() {
    let cfg = EngineConfig::monte_carlo(1 << 14, 5);
    let form = GramForm::diagonal_lp(2, 4).unwrap();
    let m = moment_matrix(&form.expand(), 2, 1, &cfg).unwrap();
    let a = certify_p3(&form, &m, 1e-2).unwrap();
    let b = certify_p3(&form, &m, 1e-2).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn gram_certificate_at_the_quadratic_identity() {
    let form = GramForm::new(2, 2, SymMatrix::identity(2)).unwrap();
    let m = moment_matrix(&form.expand(), 1, 1, &EngineConfig::closed_form()).unwrap();
    let c = certify_p3(&form, &m, 1e-6).unwrap();
    assert!(c.passed());
    assert!(c.dual_scalar("psi_frobenius_norm").unwrap() <= 1e-8);
}

#[test]
fn refutations() {
    let r = refute_ld_for_p3(2, 4, 1e-6, &EngineConfig::closed_form()).unwrap();
    assert!(r.refuted && r.min_eigenvalue <= -0.01);
    let DualValue::Vector(spec) = &r.certificate.duals["psi_spectrum"] else { panic!() };
    assert_eq!(spec.len(), 3);
    let r3 = refute_ld_for_p3(3, 4, 1e-2, &EngineConfig::grid(96, 3)).unwrap();
    assert!(r3.refuted && r3.min_eigenvalue < 0.0);
    assert!(!refute_ld_for_p3(3, 2, 1e-6, &EngineConfig::closed_form()).unwrap().refuted);
}
