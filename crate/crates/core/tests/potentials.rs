use std::f64::consts::PI;

use approx::assert_relative_eq;
use layerr::prelude::*;

fn sphere() -> SurfaceParam {
    SurfaceParam::sphere(1.0, ThetaMap::Cosine)
}

#[test]
fn uniform_shell_potential() {
    let ev = PotentialEvaluator::new(
        &sphere(),
        KernelSpec::HarmonicSingle,
        DensitySpec::Unit,
        30,
        60,
    )
    .unwrap();
    for (x, expected) in [
        ([0.0, 0.0, 2.0], 2.0 * PI),
        ([1.2, -1.6, 0.0], 4.0 * PI / 2.0),
        ([0.0, 0.3, 0.4], 4.0 * PI),
        ([3.0, 0.0, 0.0], 4.0 * PI / 3.0),
    ] {
        assert_relative_eq!(ev.potential(x).unwrap(), expected, max_relative = 1e-10);
    }
}

#[test]
fn gauss_identity_for_double_layer() {
    let ev = PotentialEvaluator::new(
        &sphere(),
        KernelSpec::HarmonicDouble,
        DensitySpec::Unit,
        30,
        60,
    )
    .unwrap();
    assert_relative_eq!(
        ev.potential([0.1, 0.2, -0.3]).unwrap(),
        4.0 * PI,
        max_relative = 1e-10
    );
    assert!(ev.potential([0.0, 2.5, 0.5]).unwrap().abs() < 1e-10);
    let spheroid = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
    let ev = PotentialEvaluator::new(
        &spheroid,
        KernelSpec::HarmonicDouble,
        DensitySpec::Unit,
        40,
        80,
    )
    .unwrap();
    assert_relative_eq!(
        ev.potential([0.1, 0.0, 1.0]).unwrap(),
        4.0 * PI,
        max_relative = 1e-8
    );
    assert!(ev.potential([0.0, 0.0, 4.5]).unwrap().abs() < 1e-8);
}

#[test]
fn modified_helmholtz_shell() {
    // ∫ e^{-ωR}/R dS = 4π a² sinh(ωa)/(ωa) e^{-ωr}/r outside the sphere
    let omega: f64 = 3.0;
    let ev = PotentialEvaluator::new(
        &sphere(),
        KernelSpec::ModHelmholtzSingle { omega },
        DensitySpec::Unit,
        30,
        60,
    )
    .unwrap();
    let r: f64 = 2.0;
    let expected = 4.0 * PI * omega.sinh() / omega * (-omega * r).exp() / r;
    assert_relative_eq!(
        ev.potential([0.0, r, 0.0]).unwrap(),
        expected,
        max_relative = 1e-10
    );
}

#[test]
fn potential_is_rotation_invariant_for_axisymmetric_data() {
    let s = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
    let ev =
        PotentialEvaluator::new(&s, KernelSpec::HarmonicSingle, DensitySpec::Unit, 40, 80).unwrap();
    let (rho, z) = (1.6, 0.8);
    // rotations by multiples of the azimuthal spacing map the grid to itself
    let base = ev.potential([rho, 0.0, z]).unwrap();
    for l in 1..5 {
        let a = 2.0 * PI * l as f64 / 80.0;
        let v = ev.potential([rho * a.cos(), rho * a.sin(), z]).unwrap();
        assert_relative_eq!(v, base, max_relative = 1e-13);
    }
}

#[test]
fn measured_error_shrinks_with_resolution() {
    let s = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
    let x = [1.15, 0.0, 0.4];
    let errs: Vec<f64> = [10usize, 20, 30]
        .iter()
        .map(|&n| {
            PotentialEvaluator::new(
                &s,
                KernelSpec::HarmonicSingle,
                DensitySpec::Oscillatory,
                n,
                2 * n,
            )
            .unwrap()
            .measured_error(x)
            .unwrap()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn quadrature_matches_free_functions() {
    let s = sphere();
    let grid = QuadratureGrid::new(12, 24).unwrap();
    let ev = PotentialEvaluator::with_grid(
        &s,
        KernelSpec::HarmonicSingle,
        DensitySpec::Oscillatory,
        grid.clone(),
    )
    .unwrap();
    let x = [0.4, 1.3, -0.2];
    let q = potential_quadrature(
        &s,
        KernelSpec::HarmonicSingle,
        DensitySpec::Oscillatory,
        &grid,
        x,
    )
    .unwrap();
    let r = reference_potential(
        &s,
        KernelSpec::HarmonicSingle,
        DensitySpec::Oscillatory,
        &grid,
        x,
    )
    .unwrap();
    let e = measured_error(
        &s,
        KernelSpec::HarmonicSingle,
        DensitySpec::Oscillatory,
        &grid,
        x,
    )
    .unwrap();
    assert_eq!(q, ev.potential(x).unwrap());
    assert_eq!(r, ev.reference(x).unwrap());
    assert_eq!(e, ev.measured_error(x).unwrap());
    assert!((e - (q - r).abs()).abs() <= 1e-15 * r.abs());
}

#[test]
fn evaluation_on_a_node_is_rejected() {
    let s = sphere();
    let ev =
        PotentialEvaluator::new(&s, KernelSpec::HarmonicSingle, DensitySpec::Unit, 8, 16).unwrap();
    let node = ev.discretization().points()[17];
    assert!(ev.potential(node).is_err());
}

#[test]
fn invalid_helmholtz_parameter_is_rejected() {
    let s = sphere();
    assert!(PotentialEvaluator::new(
        &s,
        KernelSpec::ModHelmholtzSingle { omega: -1.0 },
        DensitySpec::Unit,
        8,
        16
    )
    .is_err());
}

#[test]
fn oscillatory_density_continues_analytically() {
    let z = Complex64::new(0.7, 0.2);
    let w = Complex64::new(1.1, -0.3);
    let v = DensitySpec::Oscillatory.value(z, w);
    let expected = (w * 6.0 + z).sin() * z.sin() * z.sin() + 1.0;
    assert!((v - expected).norm() < 1e-15);
    assert_eq!(DensitySpec::Unit.value(z, w), Complex64::from(1.0));
}

#[test]
fn integrand_at_real_point_matches_kernel_numerator() {
    let s = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
    let x = [2.0, 0.0, 0.0];
    let (t, phi) = (0.3, 0.4);
    let f = integrand_f(
        &s,
        KernelSpec::HarmonicSingle,
        DensitySpec::Unit,
        Complex64::from(t),
        Complex64::from(phi),
        x,
    );
    assert!(f.im.abs() < 1e-15);
    assert_relative_eq!(f.re, s.area_element(t, phi), max_relative = 1e-13);
}
