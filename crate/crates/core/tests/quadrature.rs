// SPDX-License-Identifier: Apache-2.0

//! Closed forms checked against numeric quadrature.

mod common;

use common::{integrate, integrate_pieces};
use rcsforge::distributions::{
    eval_component_pdf, eval_remaining_cdf, porter_thomas_pdf, theoretical_xeb,
};
use rcsforge::SystemDims;

#[test]
fn xeb_closed_form_matches_quadrature() {
    for n in [1u64, 4, 12] {
        let dims = SystemDims::new(n).unwrap();
        let d = (1u64 << n) as f64;
        // Remaining-mass density (D-1) p^(D-2) written out directly.
        let integrand = |p: f64| (1.0 - p).powi(2) * (d - 1.0) * p.powf(d - 2.0);
        let integral = integrate_pieces(&integrand, 0.0, 1.0, 1024, 1e-20);
        let via_quadrature = d * d * integral - 1.0;
        assert!(
            (via_quadrature - theoretical_xeb(dims)).abs() < 1e-10,
            "D={d}: {via_quadrature} vs {}",
            theoretical_xeb(dims)
        );
    }
}

#[test]
fn porter_thomas_density_is_normalized() {
    let total = integrate(&|p| porter_thomas_pdf(p).unwrap(), 0.0, 60.0, 1e-14);
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn component_density_is_normalized_and_matches_cdf() {
    for n in [1u64, 2, 4, 8] {
        let dims = SystemDims::new(n).unwrap();
        let pdf = |q: f64| eval_component_pdf(q, dims).unwrap();
        let total = integrate(&pdf, 0.0, 1.0, 1e-14);
        assert!((total - 1.0).abs() < 1e-10, "n={n}: {total}");
        for q in [0.001, 0.01, 0.1, 0.5] {
            let partial = integrate(&pdf, 0.0, q, 1e-15);
            let cdf = 1.0 - eval_remaining_cdf(1.0 - q, dims).unwrap();
            assert!((partial - cdf).abs() < 1e-10, "n={n} q={q}");
        }
    }
}
