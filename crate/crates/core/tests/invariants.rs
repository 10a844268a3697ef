//! Property tests over randomly drawn inputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use hgfrft_core::graph::{Graph, ShiftKind};
use hgfrft_core::linalg::{self, principal_log, CMatrix};
use hgfrft_core::signals::energy_compactness;
use hgfrft_core::transform::{hgfrft, inverse_hgfrft, JointSignal, JointSpectrum, OperatorFactory};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

prop_compose! {
    fn complex_entries(len: usize)(v in prop::collection::vec(-1.0f64..1.0, 2 * len)) -> Vec<Complex64> {
        v.chunks(2).map(|p| c(p[0], p[1])).collect()
    }
}

proptest! {
    #[test]
    fn principal_log_branch_and_inverse(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(re != 0.0 || im != 0.0);
        let z = c(re, im);
        let l = principal_log(z).unwrap();
        prop_assert!(l.im > -PI && l.im <= PI);
        prop_assert!((l.exp() - z).norm() < 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn joint_transform_is_unitary_and_invertible(
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        entries in complex_entries(12),
    ) {
        let fh = OperatorFactory::dft(3).unwrap();
        let fg = OperatorFactory::gft(&Graph::path(4).unwrap(), ShiftKind::Laplacian).unwrap();
        let sig = JointSignal::new(CMatrix::from_fn(3, 4, |i, j| entries[i * 4 + j]));
        let spec = hgfrft(&sig, &fh.at_order(alpha).unwrap(), &fg.at_order(beta).unwrap()).unwrap();
        prop_assert!((spec.norm() - sig.norm()).abs() <= 1e-9);
        let back = inverse_hgfrft(
            &spec,
            &fh.at_order(-alpha).unwrap(),
            &fg.at_order(-beta).unwrap(),
        )
        .unwrap();
        prop_assert!(max_diff(back.matrix(), sig.matrix()) <= 1e-9);
    }

    #[test]
    fn kron_respects_the_flattening_contract(
        a_entries in complex_entries(9),
        b_entries in complex_entries(16),
        x_entries in complex_entries(12),
    ) {
        // vec(A X B^T) = (A kron B) vec(X) under the row-major flattening.
        let a = CMatrix::from_fn(3, 3, |i, j| a_entries[i * 3 + j]);
        let b = CMatrix::from_fn(4, 4, |i, j| b_entries[i * 4 + j]);
        let x = JointSignal::new(CMatrix::from_fn(3, 4, |i, j| x_entries[i * 4 + j]));
        let direct = JointSignal::new(&a * x.matrix() * b.transpose());
        let joint = linalg::kron(&a, &b).unwrap();
        let flat = joint * x.to_vec();
        let via_kron = JointSignal::from_flat(3, 4, &flat).unwrap();
        prop_assert!(max_diff(direct.matrix(), via_kron.matrix()) <= 1e-12);
    }

    #[test]
    fn compactness_curves_are_monotone_unit_bounded(
        entries in complex_entries(20),
        p1 in 0.0f64..100.0,
        p2 in 0.0f64..100.0,
    ) {
        let spec = JointSpectrum::from_parts(CMatrix::from_fn(4, 5, |i, j| entries[i * 5 + j]), 0.0, 0.0);
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let curve = energy_compactness(&spec, &[lo, hi]).unwrap();
        prop_assert!(curve[0].1 <= curve[1].1 + 1e-15);
        for (_, err) in curve {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&err));
        }
    }
}
