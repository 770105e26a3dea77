//! Special-function kernel against independent references: 40-digit reference
//! values for I/K (frozen), the integral representation of K_ν, and the
//! identities the kernel must satisfy.

use gha_core::specfun::*;

// (nu, x, I_nu(x), K_nu(x)), 40-digit arithmetic rounded to 18 significant digits.
const REFERENCE: &[(u32, f64, f64, f64)] = &[
    (0, 0.001, 1.00000025000001563, 7.02368880056238132),
    (0, 0.5, 1.06348337074132352, 9.24419071227665862e-1),
    (0, 1.9, 2.12774019405388773, 1.28845979276047494e-1),
    (0, 2.1, 2.44628312943618245, 1.00783740889966935e-1),
    (0, 7.5, 2.68161311515189365e+2, 2.49177616356114389e-4),
    (0, 29.9, 7.08478330489014526e+11, 2.36065802785080821e-14),
    (0, 30.1, 8.62432920031779212e+11, 1.92636336215905132e-14),
    (0, 64.0, 3.11545791818789756e+26, 2.50773360516903658e-29),
    (0, 300.0, 4.47584736793505212e+128, 3.72369485488914326e-132),
    (1, 0.001, 5.00000062500002615e-4, 9.99996238156085553e+2),
    (1, 0.5, 2.57894305390896316e-1, 1.65644112000330089),
    (1, 1.9, 1.44824437305488883, 1.59660153032667629e-1),
    (1, 2.1, 1.7454998088361063, 1.22746411533507896e-1),
    (1, 7.5, 2.49584365422688136e+2, 2.65297390125289526e-4),
    (1, 29.9, 6.96528308361092694e+11, 2.39981434777217528e-14),
    (1, 30.1, 8.47983630191541427e+11, 1.95810537848993753e-14),
    (1, 64.0, 3.09102180390818354e+26, 2.52724991150221274e-29),
    (1, 300.0, 4.46838138503695441e+128, 3.7298958583323727e-132),
    (2, 0.001, 1.25000010416666997e-7, 1.99999950000097163e+6),
    (2, 0.5, 3.19061491777382538e-2, 7.55018355124086944),
    (2, 1.9, 6.0327243294347836e-1, 2.96909298257802901e-1),
    (2, 2.1, 7.83902359116081276e-1, 2.17685085207593498e-1),
    (2, 7.5, 2.01605480735805862e+2, 3.19923587056191596e-4),
    (2, 29.9, 6.61887808190613675e+11, 2.52118072669844536e-14),
    (2, 30.1, 8.06088492776527293e+11, 2.0564700318261568e-14),
    (2, 64.0, 3.01886348681576682e+26, 2.58671016490348073e-29),
    (2, 300.0, 4.44605815870147242e+128, 3.74856082727802575e-132),
    (5, 0.001, 2.60416677517361332e-19, 3.8399997600000096e+17),
    (5, 0.5, 8.22317131310926396e-6, 1.20979794760963934e+4),
    (5, 1.9, 7.48302334597045584e-3, 1.24689912541560787e+1),
    (5, 2.1, 1.27511786632194801e-2, 7.21574601758268063),
    (5, 7.5, 4.82413603956636542e+1, 1.14916301483123878e-3),
    (5, 29.9, 4.63530650339241494e+11, 3.5586159888676302e-14),
    (5, 30.1, 5.65869993176105384e+11, 2.89617859650978508e-14),
    (5, 64.0, 2.55899673023939365e+26, 3.0437688404310921e-29),
    (5, 300.0, 4.2928905790140089e+128, 3.88185422564715386e-132),
    (10, 0.001, 2.69114451662974732e-40, 1.85794554839040042e+38),
    (10, 0.5, 2.64304192588127954e-13, 1.8893756931990026e+11),
    (10, 1.9, 1.79054034918803407e-7, 2.74293036617399307e+5),
    (10, 2.1, 4.95995999130853205e-7, 9.86363803765106403e+4),
    (10, 7.5, 5.12265339076761079e-1, 7.80353475263301499e-2),
    (10, 29.9, 1.3143796492818579e+11, 1.2066412571677938e-13),
    (10, 30.1, 1.61796894417987762e+11, 9.74368146427879888e-14),
    (10, 64.0, 1.41987848013199531e+26, 5.43641015032650255e-29),
    (10, 300.0, 3.78772592586686868e+128, 4.39774112452451199e-132),
];

#[test]
fn bessel_i_matches_reference_to_1e12() {
    for &(nu, x, i_ref, _) in REFERENCE {
        let v = bessel_i(nu, x).unwrap();
        assert!(((v - i_ref) / i_ref).abs() < 1e-12, "I_{nu}({x}) = {v}, ref {i_ref}");
    }
}

#[test]
fn bessel_k_matches_reference_to_1e10() {
    for &(nu, x, _, k_ref) in REFERENCE {
        let v = bessel_k(nu, x).unwrap();
        assert!(((v - k_ref) / k_ref).abs() < 1e-10, "K_{nu}({x}) = {v}, ref {k_ref}");
    }
}

/// K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt by the plain trapezoid rule, which
/// converges geometrically for this analytic, doubly-decaying integrand.
fn k_integral(nu: u32, x: f64) -> f64 {
    let h: f64 = 1.0 / 256.0;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    loop {
        let term = (-x * t.cosh() + nu as f64 * t).exp() * 0.5 * (1.0 + (-2.0 * nu as f64 * t).exp());
        sum += term;
        if term < 1e-300 || (term < 1e-20 * sum && t > 1.0) {
            break;
        }
        t += h;
    }
    sum * h
}

#[test]
fn bessel_k_matches_integral_representation() {
    for nu in 0..=4 {
        for &x in &[0.3, 1.0, 2.0, 3.5, 10.0, 40.0] {
            let oracle = k_integral(nu, x);
            let v = bessel_k(nu, x).unwrap();
            assert!(((v - oracle) / oracle).abs() < 1e-10, "K_{nu}({x}): {v} vs {oracle}");
        }
    }
    assert!((k_integral(2, 2.0) - 0.253_759_754_566_055_86).abs() < 1e-14);
    assert!((k_integral(0, 1.0) - 0.421_024_438_240_708_34).abs() < 1e-14);
}

#[test]
fn wronskian_identity() {
    for nu in 0..=2 {
        for &x in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            let lhs = bessel_i(nu, x).unwrap() * bessel_k(nu + 1, x).unwrap()
                + bessel_i(nu + 1, x).unwrap() * bessel_k(nu, x).unwrap();
            assert!(((lhs - 1.0 / x) * x).abs() < 1e-9, "nu={nu} x={x}");
        }
    }
}

#[test]
fn order_recurrences() {
    for nu in 1..=3 {
        for &x in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            let i = bessel_i(nu, x).unwrap();
            let lhs = bessel_i(nu - 1, x).unwrap() - bessel_i(nu + 1, x).unwrap();
            let rhs = 2.0 * nu as f64 / x * i;
            assert!(((lhs - rhs) / rhs).abs() < 1e-10, "I nu={nu} x={x}");

            let k = bessel_k(nu, x).unwrap();
            let lhs = bessel_k(nu + 1, x).unwrap() - bessel_k(nu - 1, x).unwrap();
            let rhs = 2.0 * nu as f64 / x * k;
            assert!(((lhs - rhs) / rhs).abs() < 1e-10, "K nu={nu} x={x}");
        }
    }
}

#[test]
fn log_gamma_matches_factorials_and_half_integers() {
    for n in 1..60u64 {
        let direct: f64 = (1..n).map(|k| (k as f64).ln()).sum();
        let v = log_gamma(n as f64).unwrap();
        assert!((v - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    for n in 0..30u64 {
        let reference = log_factorial(2 * n) + 0.5 * std::f64::consts::PI.ln()
            - n as f64 * 4f64.ln()
            - log_factorial(n);
        let v = log_gamma(n as f64 + 0.5).unwrap();
        assert!((v - reference).abs() <= 1e-12 * reference.abs().max(1.0), "n={n}");
    }
}
