//! Fractional-domain filters: frequency regions, convolution, bandpass
//! projections, and shift-invariance checks.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, CMatrix};
use crate::transform::{hgfrft, inverse_hgfrft, FractionalOperator, JointSignal, JointSpectrum};

/// Default relative threshold for [`frequency_range`].
pub const FREQUENCY_RANGE_RTOL: f64 = 1e-10;

/// A finite set of joint spectral index pairs `(hilbert, graph)`, kept sorted
/// and deduplicated. Serializes as a JSON array of `[i, j]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyRegion {
    pairs: BTreeSet<(usize, usize)>,
}

impl FrequencyRegion {
    pub fn empty() -> Self {
        FrequencyRegion::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        FrequencyRegion {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Region from flat indices `i * n + j`.
    pub fn from_flat(indices: impl IntoIterator<Item = usize>, n: usize) -> Self {
        FrequencyRegion::from_pairs(indices.into_iter().map(|k| (k / n, k % n)))
    }

    /// Every pair of an `m x n` grid.
    pub fn full(m: usize, n: usize) -> Self {
        FrequencyRegion::from_pairs((0..m).flat_map(|i| (0..n).map(move |j| (i, j))))
    }

    /// Index pairs whose operator eigenvalues fall inside closed value bands.
    /// The Hilbert side compares the reciprocal eigenvalue `1 / b`.
    pub fn from_value_bands(
        hilbert_eigenvalues: &[f64],
        graph_eigenvalues: &[f64],
        hilbert_inverse_band: (f64, f64),
        graph_band: (f64, f64),
    ) -> Self {
        let mut pairs = BTreeSet::new();
        for (i, &b) in hilbert_eigenvalues.iter().enumerate() {
            let inv = 1.0 / b;
            if inv < hilbert_inverse_band.0 || inv > hilbert_inverse_band.1 {
                continue;
            }
            for (j, &a) in graph_eigenvalues.iter().enumerate() {
                if a >= graph_band.0 && a <= graph_band.1 {
                    pairs.insert((i, j));
                }
            }
        }
        FrequencyRegion { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.contains(&pair)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// Flat indices `i * n + j` in ascending order.
    pub fn flat_indices(&self, n: usize) -> Vec<usize> {
        self.pairs.iter().map(|&(i, j)| i * n + j).collect()
    }

    /// All indices must fit an `m x n` grid.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        for &(i, j) in &self.pairs {
            if i >= m || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i * n + j,
                    len: m * n,
                });
            }
        }
        Ok(())
    }
}

impl Serialize for FrequencyRegion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.pairs.len()))?;
        for &(i, j) in &self.pairs {
            seq.serialize_element(&[i, j])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FrequencyRegion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[usize; 2]> = Vec::deserialize(deserializer)?;
        Ok(FrequencyRegion::from_pairs(
            pairs.into_iter().map(|[i, j]| (i, j)),
        ))
    }
}

/// Indices of all coefficients above `tol` in modulus. The default threshold
/// is [`FREQUENCY_RANGE_RTOL`] times the largest modulus, keeping the result
/// scale-invariant.
pub fn frequency_range(spec: &JointSpectrum, tol: Option<f64>) -> FrequencyRegion {
    let max_mag = spec.coeff().iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let tol = tol.unwrap_or(FREQUENCY_RANGE_RTOL * max_mag);
    let mut pairs = BTreeSet::new();
    for i in 0..spec.m() {
        for j in 0..spec.n() {
            if spec.coeff()[(i, j)].norm() > tol {
                pairs.insert((i, j));
            }
        }
    }
    FrequencyRegion { pairs }
}

/// Fractional-domain convolution: elementwise spectral product followed by
/// the inverse transform.
pub fn convolve(
    g: &JointSignal,
    f: &JointSignal,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<JointSignal> {
    if g.m() != f.m() || g.n() != f.n() {
        return Err(Error::DimensionMismatch {
            context: "convolution",
            expected: format!("{}x{}", g.m(), g.n()),
            got: format!("{}x{}", f.m(), f.n()),
        });
    }
    let spec_g = hgfrft(g, op_h, op_g)?;
    let spec_f = hgfrft(f, op_h, op_g)?;
    let coeff = spec_g.coeff().zip_map(spec_f.coeff(), |a, b| a * b);
    let product = JointSpectrum::from_parts(coeff, op_h.order(), op_g.order());
    inverse_hgfrft(&product, &op_h.inverse()?, &op_g.inverse()?)
}

/// Bandpass projection: keep spectral coefficients inside the region, zero
/// the rest, and transform back.
pub fn bandpass(
    f: &JointSignal,
    region: &FrequencyRegion,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<JointSignal> {
    region.validate(f.m(), f.n())?;
    let mut spec = hgfrft(f, op_h, op_g)?;
    for i in 0..f.m() {
        for j in 0..f.n() {
            if !region.contains((i, j)) {
                spec.coeff_mut()[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    inverse_hgfrft(&spec, &op_h.inverse()?, &op_g.inverse()?)
}

/// A linear filter as an explicit `mn x mn` matrix on flattened signals.
#[derive(Debug, Clone)]
pub struct LinearFilter {
    mat: CMatrix,
}

impl LinearFilter {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "filter matrix has non-finite entries",
            ));
        }
        Ok(LinearFilter { mat })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

/// The bandpass projection as an explicit matrix:
/// `P = Synth . diag(indicator) . Analysis` on flattened signals.
pub fn bandpass_filter(
    region: &FrequencyRegion,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<LinearFilter> {
    let (m, n) = (op_h.dim(), op_g.dim());
    region.validate(m, n)?;
    let analysis = linalg::kron(op_h.mat(), op_g.mat())?;
    let synth = linalg::kron(
        op_h.synthesis_matrix()?.as_ref(),
        op_g.synthesis_matrix()?.as_ref(),
    )?;
    let mut selector = CMatrix::zeros(m * n, m * n);
    for k in region.flat_indices(n) {
        selector[(k, k)] = Complex64::new(1.0, 0.0);
    }
    LinearFilter::new(synth * selector * analysis)
}

/// Commutation check: residual `max |op L - L op|` against a tolerance.
pub fn commutes_with(l: &LinearFilter, op: &CMatrix, tol: f64) -> Result<(bool, f64)> {
    if op.nrows() != op.ncols() || op.nrows() != l.dim() {
        return Err(Error::DimensionMismatch {
            context: "commutation check",
            expected: format!("{0}x{0}", l.dim()),
            got: format!("{}x{}", op.nrows(), op.ncols()),
        });
    }
    let residual = max_abs(&(op * l.mat() - l.mat() * op));
    Ok((residual <= tol, residual))
}

/// Shift invariance: the filter commutes with both `B (x) I` and `I (x) A`.
pub fn is_shift_invariant(
    l: &LinearFilter,
    op_b: &CMatrix,
    op_a: &CMatrix,
    tol: f64,
) -> Result<bool> {
    let (m, n) = (op_b.nrows(), op_a.nrows());
    if op_b.ncols() != m || op_a.ncols() != n || l.dim() != m * n {
        return Err(Error::DimensionMismatch {
            context: "shift invariance",
            expected: format!("{}x{} filter", m * n, m * n),
            got: format!("{}x{}", l.dim(), l.dim()),
        });
    }
    let b_joint = linalg::kron(op_b, &CMatrix::identity(n, n))?;
    let a_joint = linalg::kron(&CMatrix::identity(m, m), op_a)?;
    let (b_ok, _) = commutes_with(l, &b_joint, tol)?;
    let (a_ok, _) = commutes_with(l, &a_joint, tol)?;
    Ok(b_ok && a_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, ShiftKind};
    use crate::transform::{basis_column, OperatorFactory};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup() -> (OperatorFactory, OperatorFactory) {
        let fh = OperatorFactory::dft(3).unwrap();
        let fg = OperatorFactory::gft(&Graph::path(4).unwrap(), ShiftKind::Laplacian).unwrap();
        (fh, fg)
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        max_abs(&(a - b))
    }

    #[test]
    fn frequency_range_examples() {
        let zero = JointSpectrum::from_parts(CMatrix::zeros(3, 4), 0.0, 0.0);
        assert!(frequency_range(&zero, None).is_empty());

        let mut coeff = CMatrix::zeros(3, 4);
        coeff[(1, 2)] = c(0.5, -0.5);
        let spec = JointSpectrum::from_parts(coeff, 0.3, 0.4);
        let region = frequency_range(&spec, None);
        assert_eq!(region.len(), 1);
        assert!(region.contains((1, 2)));
    }

    #[test]
    fn region_json_round_trip() {
        let region = FrequencyRegion::from_pairs([(0, 1), (2, 3), (0, 1)]);
        let json = serde_json::to_string(&region).unwrap();
        assert_eq!(json, "[[0,1],[2,3]]");
        let back: FrequencyRegion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, region);
    }

    #[test]
    fn value_band_helper_inverts_hilbert_side() {
        // Hilbert eigenvalues 1, 2, 4 -> reciprocals 1, 0.5, 0.25.
        let region = FrequencyRegion::from_value_bands(
            &[1.0, 2.0, 4.0],
            &[0.0, 1.0, 3.0],
            (0.4, 1.0),
            (0.0, 1.0),
        );
        let expect = FrequencyRegion::from_pairs([(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(region, expect);
    }

    #[test]
    fn convolution_identity_and_bilinearity() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = JointSignal::new(CMatrix::from_fn(3, 4, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        }));
        let h = JointSignal::new(CMatrix::from_fn(3, 4, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        }));

        // Identity element: the signal whose spectrum is all ones.
        let ones = JointSpectrum::from_parts(CMatrix::from_element(3, 4, c(1.0, 0.0)), 0.7, 0.5);
        let delta = inverse_hgfrft(&ones, &oh.inverse().unwrap(), &og.inverse().unwrap()).unwrap();
        let conv = convolve(&delta, &f, &oh, &og).unwrap();
        assert!(max_diff(conv.matrix(), f.matrix()) < 1e-9);

        // Bilinearity: g * (c f + h) = c (g * f) + (g * h).
        let g = h.clone();
        let scale = c(0.3, -1.1);
        let combo = JointSignal::new(f.matrix() * scale + h.matrix());
        let lhs = convolve(&g, &combo, &oh, &og).unwrap();
        let rhs = convolve(&g, &f, &oh, &og).unwrap().matrix() * scale
            + convolve(&g, &h, &oh, &og).unwrap().matrix();
        assert!(max_diff(lhs.matrix(), &rhs) < 1e-9);
    }

    #[test]
    fn convolution_squares_a_scaled_basis_column() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let scale = c(1.5, 0.0);
        let col = basis_column(&oh, &og, 5).unwrap();
        let scaled = JointSignal::new(col.matrix() * scale);
        let conv = convolve(&scaled, &scaled, &oh, &og).unwrap();
        let expect = col.matrix() * (scale * scale);
        assert!(max_diff(conv.matrix(), &expect) < 1e-9);
    }

    #[test]
    fn bandpass_limits() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = JointSignal::new(CMatrix::from_fn(3, 4, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        }));

        let full = bandpass(&f, &FrequencyRegion::full(3, 4), &oh, &og).unwrap();
        assert!(max_diff(full.matrix(), f.matrix()) < 1e-9);

        let none = bandpass(&f, &FrequencyRegion::empty(), &oh, &og).unwrap();
        assert!(none.norm() < 1e-12);

        let region = FrequencyRegion::from_pairs([(0, 0), (1, 2), (2, 3)]);
        let once = bandpass(&f, &region, &oh, &og).unwrap();
        let twice = bandpass(&once, &region, &oh, &og).unwrap();
        assert!(max_diff(once.matrix(), twice.matrix()) < 1e-10);

        let bad = FrequencyRegion::from_pairs([(3, 0)]);
        assert!(matches!(
            bandpass(&f, &bad, &oh, &og),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn bandpass_matrix_is_an_orthogonal_projection() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let region = FrequencyRegion::from_pairs([(0, 1), (1, 0), (2, 2)]);
        let p = bandpass_filter(&region, &oh, &og).unwrap();
        let pp = p.mat() * p.mat();
        assert!(max_diff(&pp, p.mat()) < 1e-10);
        assert!(max_diff(&p.mat().adjoint(), p.mat()) < 1e-9);
    }

    #[test]
    fn identity_commutes_with_anything() {
        let l = LinearFilter::new(CMatrix::identity(6, 6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let op = CMatrix::from_fn(6, 6, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let (ok, residual) = commutes_with(&l, &op, 1e-12).unwrap();
        assert!(ok);
        assert!(residual < 1e-12);
    }

    #[test]
    fn random_filter_does_not_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let l = LinearFilter::new(CMatrix::from_fn(6, 6, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        }))
        .unwrap();
        let mut op = CMatrix::zeros(6, 6);
        for i in 0..6 {
            op[(i, i)] = c(i as f64 + 1.0, 0.0);
        }
        let (ok, residual) = commutes_with(&l, &op, 1e-6).unwrap();
        assert!(!ok);
        assert!(residual > 1e-3);
    }

    #[test]
    fn bandpass_is_shift_invariant_for_matched_operators() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let region = FrequencyRegion::from_pairs([(0, 0), (0, 1), (2, 3)]);
        let p = bandpass_filter(&region, &oh, &og).unwrap();

        // Operators sharing the transform's eigenbases, with distinct
        // eigenvalues so eigenvectors are pinned.
        let b = operator_from_basis(&oh, &[1.0, 2.0, 3.0]);
        let a = operator_from_basis(&og, &[1.0, 2.0, 3.0, 4.0]);
        assert!(is_shift_invariant(&p, &b, &a, 1e-9).unwrap());

        // A permutation that mixes eigenspaces is not shift invariant.
        let mut perm = CMatrix::zeros(12, 12);
        for k in 0..12 {
            perm[(k, (k + 1) % 12)] = c(1.0, 0.0);
        }
        let l = LinearFilter::new(perm).unwrap();
        assert!(!is_shift_invariant(&l, &b, &a, 1e-9).unwrap());
    }

    fn operator_from_basis(op: &FractionalOperator, eigs: &[f64]) -> CMatrix {
        let synth = op.synthesis_matrix().unwrap();
        let mut d = CMatrix::zeros(eigs.len(), eigs.len());
        for (i, &e) in eigs.iter().enumerate() {
            d[(i, i)] = c(e, 0.0);
        }
        synth.as_ref() * d * op.mat()
    }

    #[test]
    fn weakly_shift_invariant_self_adjoint_filter() {
        // Self-adjoint filter commuting with B (x) A: by construction it is
        // diagonal in the joint eigenbasis, hence shift invariant.
        let (fh, fg) = setup();
        let oh = fh.at_order(0.3).unwrap();
        let og = fg.at_order(-0.8).unwrap();
        let joint_synth = linalg::kron(
            &oh.synthesis_matrix().unwrap(),
            &og.synthesis_matrix().unwrap(),
        )
        .unwrap();
        let joint_analysis = linalg::kron(oh.mat(), og.mat()).unwrap();
        let mut d = CMatrix::zeros(12, 12);
        for k in 0..12 {
            d[(k, k)] = c((k % 5) as f64, 0.0);
        }
        let l = LinearFilter::new(&joint_synth * d * &joint_analysis).unwrap();
        let b = operator_from_basis(&oh, &[1.0, 2.0, 3.0]);
        let a = operator_from_basis(&og, &[1.0, 2.0, 3.0, 4.0]);
        let joint = linalg::kron(&b, &a).unwrap();
        let (weak_ok, _) = commutes_with(&l, &joint, 1e-9).unwrap();
        assert!(weak_ok);
        assert!(is_shift_invariant(&l, &b, &a, 1e-9).unwrap());
    }

    #[test]
    fn finite_region_bandpass_equals_convolution() {
        let (fh, fg) = setup();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let region = FrequencyRegion::from_pairs([(0, 0), (1, 1), (2, 0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let f = JointSignal::new(CMatrix::from_fn(3, 4, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        }));

        let via_projection = bandpass(&f, &region, &oh, &og).unwrap();

        let mut indicator = CMatrix::zeros(3, 4);
        for (i, j) in region.iter() {
            indicator[(i, j)] = c(1.0, 0.0);
        }
        let g = inverse_hgfrft(
            &JointSpectrum::from_parts(indicator, 0.7, 0.5),
            &oh.inverse().unwrap(),
            &og.inverse().unwrap(),
        )
        .unwrap();
        let via_convolution = convolve(&g, &f, &oh, &og).unwrap();
        assert!(max_diff(via_projection.matrix(), via_convolution.matrix()) < 1e-9);
    }
}
