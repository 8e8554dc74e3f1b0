mod common;

use faer::c64;
use realclose::exact::{integer, rational};
use realclose::spectral::{
    self, certify, counterpart_basis, eigen_residual, eigenfunction_map, exchange_invariance_check, hermitian_counterpart, linalg,
    matrix_of, metric_checks, picture_check, spectrum_check, BasisConfig, Combination,
};
use realclose::transform::omega_exponent;
use realclose::ModelSpec;

fn swanson(m: i64, w: i64, c: (i64, i64)) -> ModelSpec {
    ModelSpec::swanson(integer(m), integer(w), rational(c.0, c.1))
}

#[test]
fn swanson_spectrum_matches_closed_form() {
    let spec = swanson(1, 3, (4, 1));
    let mut cfg = BasisConfig::for_model(&spec, 64);
    cfg.compare_count = 10;
    let rep = spectrum_check(&spec, &cfg).unwrap();
    eprintln!("reality {:e} reference {:e} iso {:?}", rep.reality_residual, rep.reference_residual.unwrap(), rep.isospectral_residual);
    assert!(rep.reality_residual < 1e-8);
    assert!(rep.reference_residual.unwrap() < 1e-8);
    assert!(rep.isospectral_residual.unwrap() < 1e-6);
}

#[test]
fn swanson_truncation_error_shrinks() {
    let spec = swanson(1, 1, (1, 2));
    let mut errors = Vec::new();
    for n in [32, 64, 128] {
        let mut cfg = BasisConfig::for_model(&spec, n);
        cfg.compare_count = 8;
        let rep = spectrum_check(&spec, &cfg).unwrap();
        errors.push(rep.reference_residual.unwrap());
    }
    eprintln!("errors {errors:?}");
    for w in errors.windows(2) {
        assert!(w[1] <= w[0] * 1.1 + 1e-14, "{errors:?}");
    }
}

#[test]
fn swanson_metric_and_picture() {
    let spec = swanson(1, 1, (1, 2));
    let cfg = BasisConfig::for_model(&spec, 64);
    let metric = metric_checks(&spec, &cfg).unwrap();
    eprintln!("{metric:?}");
    assert!(metric.within_budget);
    assert!(metric.eta_min_eigenvalue > 0.0);
    assert!(metric.pseudo_residual < 1e-6);
    let picture = picture_check(&spec, &cfg).unwrap();
    eprintln!("{picture:?}");
    assert!(picture.picture_residual < 1e-8);
    assert!(picture.norm_drift < 1e-8);
}

#[test]
fn mapped_eigenvectors_solve_the_original_problem() {
    let spec = swanson(1, 1, (1, 2));
    let cfg = BasisConfig::for_model(&spec, 64);
    let s = omega_exponent(&spec).unwrap();
    let (herm, _, offset) = hermitian_counterpart(&spec).unwrap();
    let basis = counterpart_basis(&spec, &herm, &cfg);
    let (vals, vecs) = linalg::hermitian_eigen(&matrix_of(&herm, &basis).unwrap()).unwrap();
    let hm = matrix_of(&spec.build().unwrap(), &basis).unwrap();
    for (level, tol) in [(0usize, 1e-7), (3, 1e-6)] {
        let phi: Vec<c64> = (0..64).map(|i| vecs[(i, level)]).collect();
        let mapped = eigenfunction_map(&phi, &s, &basis).unwrap();
        let r = eigen_residual(&hm, &mapped, vals[level] + offset.unwrap());
        eprintln!("level {level}: residual {r:e}");
        assert!(r < tol);
    }
}

#[test]
fn general_x_matches_swanson_report() {
    let sw = swanson(1, 1, (1, 1));
    let gx = ModelSpec::general_x(integer(1), vec![integer(0), integer(0), rational(1, 2)], vec![integer(1)], 1);
    let cfg = BasisConfig::for_model(&sw, 32);
    let a = certify(&sw, &cfg).unwrap();
    let b = certify(&gx, &BasisConfig::for_model(&gx, 32)).unwrap();
    assert_eq!(a.spectrum.eigenvalues, b.spectrum.eigenvalues);
    assert_eq!(a.metric, b.metric);
    assert_eq!(a.picture, b.picture);
}

#[test]
fn pu_i_spectrum_and_exchange() {
    let spec = ModelSpec::pu_i(integer(1), integer(2), integer(1));
    let mut cfg = BasisConfig::for_model(&spec, 24);
    cfg.compare_count = 6;
    let rep = spectrum_check(&spec, &cfg).unwrap();
    eprintln!("pu_I lowest {:?}", &rep.eigenvalues[..6]);
    let reference = rep.reference.clone().unwrap();
    for (z, e) in rep.eigenvalues.iter().zip(&reference) {
        assert!((z.re - e).abs() < 1e-5 && z.im.abs() < 1e-5);
    }
    assert!((rep.eigenvalues[0].re - 1.5).abs() < 1e-5);
    assert_eq!(rep.combination, Some(Combination::Sum));
    let ex = exchange_invariance_check(&spec, &cfg).unwrap();
    eprintln!("{ex:?}");
    assert!(ex.distance < 1e-6);
    assert!(ex.sum_invariant && !ex.difference_invariant);
    assert_eq!((ex.difference_before, ex.difference_after), (0.5, -0.5));
}

#[test]
fn pu_ii_spectrum() {
    let spec = ModelSpec::pu_ii(integer(1), integer(2), integer(1), integer(2));
    let mut cfg = BasisConfig::for_model(&spec, 24);
    cfg.compare_count = 6;
    let rep = spectrum_check(&spec, &cfg).unwrap();
    eprintln!("pu_II ref residual {:e} reality {:e}", rep.reference_residual.unwrap(), rep.reality_residual);
    assert!(rep.reference_residual.unwrap() < 1e-5);
    let ex = exchange_invariance_check(&spec, &cfg).unwrap();
    assert!(ex.distance < 1e-6, "{ex:?}");
}

#[test]
fn cubic_potential_is_flagged() {
    let spec = ModelSpec::general_x(integer(1), vec![integer(0), integer(0), integer(0), integer(1)], vec![integer(1)], 1);
    let cfg = BasisConfig::for_model(&spec, 32);
    let rep = spectrum_check(&spec, &cfg).unwrap();
    eprintln!("cubic reality {:e} iso {:?}", rep.reality_residual, rep.isospectral_residual);
    assert!(rep.isospectral_residual.unwrap() > 1e-3 || rep.reality_residual > 1e-3);
}

#[test]
fn csv_round_trip_lines() {
    let mut buf = Vec::new();
    spectral::write_eigenvalues_csv(&mut buf, &[c64::new(1.0, -2.0), c64::new(3.0, 0.0)]).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
}
