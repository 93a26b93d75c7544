use fhcore::specfun::{log_barnes_g, log_gamma, ZETA_PRIME_M1};
use fhcore::{c64, Complex64};
use std::f64::consts::TAU;

// (z, log Γ(z), log G(z)) at 30 digits from an arbitrary-precision reference.
const CASES: &[((f64, f64), (f64, f64), (f64, f64))] = &[
    ((0.5, 0.3), (0.37702112561020538645868728436, -0.5258114466591651297204660706), (-0.288354067923635024190321312952, 0.500495140665070732475480016949)),
    ((2.7, -1.1), (0.173872830577316108508181412284, -0.917478075716236857318333936832), (-0.403799364256181296491006983146, 0.039455264842341482668700859863)),
    ((-3.3, 4.2), (-11.5519490784967528217476584768, -5.67496125492493278475445432077), (38.62377324450124052839542335, -0.633246475451185855633035968944)),
    ((7.5, 7.9), (3.73133105620172257307035172621, 16.6402537208448123605878400563), (-48.0126225309110066356093066437, 2.97543117695002878761012751623)),
    ((-7.6, -7.2), (-27.6681805484902519915588407068, 9.600899064648753865093425109), (153.243963656806164314597743831, -1.78020418925099482599877128451)),
    ((0.1, 0.0), (2.2527126517342059020062379569, 0.0), (-2.21818461160462086115843077943, 0.0)),
    ((1.3, 0.1), (-0.113836108085380212347667150025, -0.0167199199341869458599675158957), (0.0716349964748983950252211951567, 0.00650059014634217054629940877198)),
];

fn mod_2pi_i(d: Complex64) -> Complex64 {
    c64(d.re, d.im - TAU * (d.im / TAU).round())
}

#[test]
fn log_gamma_matches_reference() {
    for &(z, lg, _) in CASES {
        let got = log_gamma(c64(z.0, z.1)).unwrap();
        let want = c64(lg.0, lg.1);
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "z={z:?} got {got} want {want}");
    }
}

#[test]
fn log_barnes_g_matches_reference_mod_2pi_i() {
    for &(z, _, g) in CASES {
        let got = log_barnes_g(c64(z.0, z.1)).unwrap();
        let want = c64(g.0, g.1);
        let d = mod_2pi_i(got - want);
        assert!(d.norm() < 1e-11 * want.norm().max(1.0), "z={z:?} got {got} want {want}");
    }
}

#[test]
fn barnes_half_and_constant() {
    let g = log_barnes_g(c64(0.5, 0.0)).unwrap();
    assert!((g.re - -0.505433054489695382797684989808).abs() < 1e-12);
    assert!((ZETA_PRIME_M1 - -0.165421143700450929213919660243).abs() < 1e-15);
}

#[test]
fn functional_equations() {
    for &(a, b) in &[(0.3, 0.7), (-2.4, 1.1), (5.5, -3.0), (0.01, 0.0)] {
        let z = c64(a, b);
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        assert!(mod_2pi_i(lhs - rhs).norm() < 1e-12);
        let lhs = log_barnes_g(z + 1.0).unwrap();
        let rhs = log_barnes_g(z).unwrap() + log_gamma(z).unwrap();
        assert!(mod_2pi_i(lhs - rhs).norm() < 1e-11, "z={z}");
    }
}

#[test]
fn integer_values() {
    // G(n) = ∏_{k=1}^{n-2} k!
    for n in 2..15usize {
        let expect: f64 = (1..n - 1).map(|k| (1..=k).map(|i| (i as f64).ln()).sum::<f64>()).sum();
        let g = log_barnes_g(c64(n as f64, 0.0)).unwrap();
        assert!((g.re - expect).abs() < 1e-10 * expect.abs().max(1.0), "n={n}");
        assert!(g.im.abs() < 1e-12);
    }
}
