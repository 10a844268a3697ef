//! Experiment signal generators and analysis metrics: chirp fields,
//! bandlimited synthesis, seeded noise, spectral heat/wave solutions, and
//! energy compactness.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::transform::{basis_column, FractionalOperator, JointSignal, JointSpectrum};

/// Linear chirp family over a sampled window. Vertex `i` sweeps from start
/// frequency `f0 + df * i` across bandwidth `b0 + db * i`; the chirp rate is
/// bandwidth over duration.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChirpSpec {
    /// Base start frequency (Hz).
    pub f0: f64,
    /// Base bandwidth (Hz).
    pub b0: f64,
    /// Window length (seconds).
    pub duration: f64,
    /// Samples per vertex.
    pub samples: usize,
    /// Per-vertex start-frequency increment (Hz).
    pub df: f64,
    /// Per-vertex bandwidth increment (Hz).
    pub db: f64,
}

impl Default for ChirpSpec {
    fn default() -> Self {
        ChirpSpec {
            f0: 50.0,
            b0: 150.0,
            duration: 0.2,
            samples: 200,
            df: 5.0,
            db: 10.0,
        }
    }
}

impl ChirpSpec {
    pub fn validate(&self) -> Result<()> {
        if self.duration.is_nan() || self.duration <= 0.0 {
            return Err(Error::InvalidArgument("chirp duration must be positive"));
        }
        if self.samples < 2 {
            return Err(Error::InvalidArgument("chirp needs at least 2 samples"));
        }
        if self.f0 < 0.0 || self.b0 < 0.0 {
            return Err(Error::InvalidArgument(
                "chirp frequencies must be nonnegative",
            ));
        }
        Ok(())
    }

    /// Start frequency of vertex `i`.
    pub fn start_frequency(&self, i: usize) -> f64 {
        self.f0 + self.df * i as f64
    }

    /// Bandwidth of vertex `i`.
    pub fn bandwidth(&self, i: usize) -> f64 {
        self.b0 + self.db * i as f64
    }
}

/// Complex chirp field: `x[k, i] = exp(2 pi j (f_i t_k + mu_i t_k^2 / 2))`
/// with `t_k = k * duration / samples` and `mu_i = bandwidth_i / duration`.
pub fn chirp_field(spec: &ChirpSpec, n: usize) -> Result<JointSignal> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "chirp field needs at least one vertex",
        ));
    }
    let dt = spec.duration / spec.samples as f64;
    let x = CMatrix::from_fn(spec.samples, n, |k, i| {
        let t = k as f64 * dt;
        let mu = spec.bandwidth(i) / spec.duration;
        let phase = 2.0 * std::f64::consts::PI * (spec.start_frequency(i) * t + 0.5 * mu * t * t);
        Complex64::from_polar(1.0, phase)
    });
    Ok(JointSignal::new(x))
}

/// Sum of scaled joint basis vectors: `sum_k c_k basis_column(k)`. The
/// spectrum of the result at the matching orders carries exactly the given
/// coefficients.
pub fn synthesize_bandlimited(
    coeffs: &BTreeMap<usize, Complex64>,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<JointSignal> {
    let (m, n) = (op_h.dim(), op_g.dim());
    let mut x = CMatrix::zeros(m, n);
    for (&k, &c) in coeffs {
        let col = basis_column(op_h, op_g, k)?;
        x += col.matrix() * c;
    }
    Ok(JointSignal::new(x))
}

/// Add seeded circular complex Gaussian noise: real and imaginary parts each
/// `N(0, sigma^2 / 2)`, drawn row-major (real before imaginary).
pub fn add_gaussian_noise(sig: &JointSignal, sigma: f64, seed: u64) -> Result<JointSignal> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument("noise sigma must be nonnegative"));
    }
    if sigma == 0.0 {
        return Ok(sig.clone());
    }
    let noise = gaussian_noise_vector(sig.m() * sig.n(), sigma, seed)?;
    let n = sig.n();
    let x = CMatrix::from_fn(sig.m(), n, |i, j| sig.matrix()[(i, j)] + noise[i * n + j]);
    Ok(JointSignal::new(x))
}

/// Seeded vector of circular complex Gaussian samples with total variance
/// `sigma^2` per entry.
pub fn gaussian_noise_vector(len: usize, sigma: f64, seed: u64) -> Result<Vec<Complex64>> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument("noise sigma must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let component = Normal::new(0.0, sigma / 2.0f64.sqrt())
        .map_err(|_| Error::InvalidArgument("bad noise sigma"))?;
    Ok((0..len)
        .map(|_| {
            let re = component.sample(&mut rng);
            let im = component.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect())
}

/// Explicit diffusion iteration `f_t = (I - sL) f_{t-1}`, stacked into a
/// joint signal with one row per step (row 0 is the initial state).
pub fn heat_time_iteration(
    laplacian: &CMatrix,
    initial: &CVector,
    s: f64,
    steps: usize,
) -> Result<JointSignal> {
    let n = laplacian.nrows();
    if laplacian.ncols() != n || initial.len() != n {
        return Err(Error::DimensionMismatch {
            context: "heat iteration",
            expected: format!("{n}x{n} and {n}"),
            got: format!(
                "{}x{} and {}",
                laplacian.nrows(),
                laplacian.ncols(),
                initial.len()
            ),
        });
    }
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "heat iteration needs at least one step",
        ));
    }
    let propagator = CMatrix::identity(n, n) - laplacian * Complex64::new(s, 0.0);
    let mut x = CMatrix::zeros(steps, n);
    let mut state = initial.clone();
    for t in 0..steps {
        for j in 0..n {
            x[(t, j)] = state[j];
        }
        if t + 1 < steps {
            state = &propagator * state;
        }
    }
    Ok(JointSignal::new(x))
}

fn check_mode_dims(spec: &JointSpectrum, lambda: &[f64], omega: &[f64]) -> Result<()> {
    if lambda.len() != spec.n() || omega.len() != spec.m() {
        return Err(Error::DimensionMismatch {
            context: "spectral solution",
            expected: format!("{} graph and {} hilbert modes", spec.n(), spec.m()),
            got: format!("{} and {}", lambda.len(), omega.len()),
        });
    }
    Ok(())
}

/// Closed-form heat solution in the joint spectral domain: each entry is
/// scaled by `(a^T - 1) / (a - 1) / sqrt(m)` with
/// `a = (1 - s lambda) e^{-j omega}`, the partial geometric sum produced by
/// iterating `(I - sL)` for `T` steps. Near `a = 1` the factor degenerates to
/// `T / sqrt(m)`.
pub fn heat_spectral_solution(
    spec: &JointSpectrum,
    lambda: &[f64],
    omega: &[f64],
    s: f64,
    t_horizon: usize,
) -> Result<JointSpectrum> {
    check_mode_dims(spec, lambda, omega)?;
    let scale = 1.0 / (spec.m() as f64).sqrt();
    let mut coeff = spec.coeff().clone();
    for k in 0..spec.m() {
        let turn = Complex64::from_polar(1.0, -omega[k]);
        for l in 0..spec.n() {
            let a = turn * (1.0 - s * lambda[l]);
            let geometric = if (a - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
                Complex64::new(t_horizon as f64, 0.0)
            } else {
                (a.powu(t_horizon as u32) - 1.0) / (a - 1.0)
            };
            coeff[(k, l)] *= geometric * scale;
        }
    }
    Ok(JointSpectrum::from_parts(coeff, spec.alpha(), spec.beta()))
}

/// Closed-form wave solution in the joint spectral domain: each entry is
/// scaled by `sum_{t=0}^{T-1} cos(t arccos(1 - s lambda / 2)) e^{-j omega t}`.
/// Requires `s < 4 / lambda_max` for stability.
pub fn wave_spectral_solution(
    spec: &JointSpectrum,
    lambda: &[f64],
    omega: &[f64],
    s: f64,
    t_horizon: usize,
) -> Result<JointSpectrum> {
    check_mode_dims(spec, lambda, omega)?;
    let lambda_max = lambda.iter().fold(0.0f64, |m, &l| m.max(l));
    let limit = 4.0 / lambda_max;
    if s >= limit {
        return Err(Error::UnstableSpeed { s, limit });
    }
    let mut coeff = spec.coeff().clone();
    for l in 0..spec.n() {
        let x = (1.0 - s * lambda[l] / 2.0).clamp(-1.0, 1.0);
        let angle = x.acos();
        for k in 0..spec.m() {
            let mut factor = Complex64::new(0.0, 0.0);
            for t in 0..t_horizon {
                factor +=
                    Complex64::from_polar(1.0, -omega[k] * t as f64) * (t as f64 * angle).cos();
            }
            coeff[(k, l)] *= factor;
        }
    }
    Ok(JointSpectrum::from_parts(coeff, spec.alpha(), spec.beta()))
}

/// Heat stability flag for reporting: every `|1 - s lambda| <= 1`.
pub fn heat_is_stable(lambda: &[f64], s: f64) -> bool {
    lambda.iter().all(|&l| (1.0 - s * l).abs() <= 1.0 + 1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffusionKind {
    Heat,
    Wave,
}

/// A diffusion experiment: rate, horizon, and equation kind.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct DiffusionSpec {
    pub s: f64,
    pub t_horizon: usize,
    pub kind: DiffusionKind,
}

impl DiffusionSpec {
    /// Stability against a Laplacian spectrum. Heat instability is reported
    /// (`Ok(false)`); wave instability is a hard error.
    pub fn check_stability(&self, lambda: &[f64]) -> Result<bool> {
        match self.kind {
            DiffusionKind::Heat => Ok(heat_is_stable(lambda, self.s)),
            DiffusionKind::Wave => {
                let lambda_max = lambda.iter().fold(0.0f64, |m, &l| m.max(l));
                let limit = 4.0 / lambda_max;
                if self.s >= limit {
                    Err(Error::UnstableSpeed { s: self.s, limit })
                } else {
                    Ok(true)
                }
            }
        }
    }

    /// Apply the matching closed-form spectral solution.
    pub fn apply(
        &self,
        spec: &JointSpectrum,
        lambda: &[f64],
        omega: &[f64],
    ) -> Result<JointSpectrum> {
        match self.kind {
            DiffusionKind::Heat => {
                heat_spectral_solution(spec, lambda, omega, self.s, self.t_horizon)
            }
            DiffusionKind::Wave => {
                wave_spectral_solution(spec, lambda, omega, self.s, self.t_horizon)
            }
        }
    }
}

/// Normalized truncation error after discarding, for each percentile `p`,
/// the `floor(p * count / 100)` smallest-magnitude coefficients. The curve is
/// nondecreasing in `p` and lives in `[0, 1]`.
pub fn energy_compactness(spec: &JointSpectrum, percentiles: &[f64]) -> Result<Vec<(f64, f64)>> {
    if percentiles.iter().any(|&p| !(0.0..=100.0).contains(&p)) {
        return Err(Error::InvalidArgument("percentiles must lie in [0, 100]"));
    }
    let total_energy: f64 = spec.coeff().iter().map(|z| z.norm_sqr()).sum();
    let count = spec.m() * spec.n();
    let mut order: Vec<(f64, usize)> = spec
        .coeff()
        .iter()
        .enumerate()
        .map(|(k, z)| (z.norm(), k))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    // Prefix sums of discarded energy in ascending-magnitude order.
    let mut prefix = Vec::with_capacity(count + 1);
    prefix.push(0.0);
    for &(mag, _) in &order {
        prefix.push(prefix.last().unwrap() + mag * mag);
    }
    Ok(percentiles
        .iter()
        .map(|&p| {
            let discard = ((p / 100.0) * count as f64).floor() as usize;
            let err = if total_energy == 0.0 {
                0.0
            } else {
                (prefix[discard.min(count)] / total_energy).sqrt()
            };
            (p, err)
        })
        .collect())
}

/// Peak-to-energy concentration of a complex vector: `max |v_k| / |v|_2`.
pub fn peak_to_energy(v: &[Complex64]) -> f64 {
    let peak = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let energy = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if energy == 0.0 {
        0.0
    } else {
        peak / energy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtering::frequency_range;
    use crate::graph::{Graph, ShiftKind};
    use crate::linalg::max_abs;
    use crate::transform::{hgfrft, OperatorFactory};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chirp_parameters_progress_per_vertex() {
        let spec = ChirpSpec::default();
        assert_eq!(spec.start_frequency(16), 130.0);
        assert_eq!(spec.bandwidth(16), 310.0);
        assert_eq!(spec.start_frequency(48), 290.0);
        assert_eq!(spec.bandwidth(48), 630.0);
        let field = chirp_field(&spec, 49).unwrap();
        assert_eq!((field.m(), field.n()), (200, 49));
        for z in field.matrix().iter() {
            assert_relative_eq!(z.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn chirp_instantaneous_frequency_at_start() {
        let spec = ChirpSpec::default();
        let field = chirp_field(&spec, 20).unwrap();
        let dt = spec.duration / spec.samples as f64;
        let bin = 1.0 / spec.duration;
        for i in [0usize, 7, 19] {
            let p0 = field.matrix()[(0, i)];
            let p1 = field.matrix()[(1, i)];
            let slope = (p1 * p0.conj()).arg() / (2.0 * std::f64::consts::PI * dt);
            assert!(
                (slope - spec.start_frequency(i)).abs() <= 2.0 * bin,
                "vertex {i}: slope {slope}, expected {}",
                spec.start_frequency(i)
            );
        }
    }

    #[test]
    fn bandlimited_synthesis_round_trip() {
        let fh = OperatorFactory::gft(&Graph::path(4).unwrap(), ShiftKind::Laplacian).unwrap();
        let fg =
            OperatorFactory::gft(&Graph::cycle(4, false).unwrap(), ShiftKind::Laplacian).unwrap();
        let oh = fh.at_order(0.7).unwrap();
        let og = fg.at_order(0.5).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0usize, c(1.0, 0.0));
        coeffs.insert(1, c(0.5, 0.0));
        coeffs.insert(2, c(2.0, 0.0));
        let f = synthesize_bandlimited(&coeffs, &oh, &og).unwrap();
        let spec = hgfrft(&f, &oh, &og).unwrap();
        let region = frequency_range(&spec, Some(1e-9));
        assert_eq!(region.flat_indices(4), vec![0, 1, 2]);
        for (&k, &v) in &coeffs {
            let got = spec.coeff()[(k / 4, k % 4)];
            assert!((got - v).norm() < 1e-9);
        }

        let empty = synthesize_bandlimited(&BTreeMap::new(), &oh, &og).unwrap();
        assert_eq!(empty.norm(), 0.0);
        let mut bad = BTreeMap::new();
        bad.insert(16usize, c(1.0, 0.0));
        assert!(synthesize_bandlimited(&bad, &oh, &og).is_err());
    }

    #[test]
    fn noise_is_seeded_and_sized() {
        let sig = JointSignal::zeros(40, 25);
        let a = add_gaussian_noise(&sig, 0.5, 7).unwrap();
        let b = add_gaussian_noise(&sig, 0.5, 7).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let same = add_gaussian_noise(&sig, 0.0, 7).unwrap();
        assert_eq!(same.matrix(), sig.matrix());

        // Sample variance over 10^4 draws within 5% of sigma^2.
        let sigma = 0.5f64;
        let noise = gaussian_noise_vector(10_000, sigma, 13).unwrap();
        let var = noise.iter().map(|z| z.norm_sqr()).sum::<f64>() / noise.len() as f64;
        assert!(
            (var - sigma * sigma).abs() < 0.05 * sigma * sigma,
            "var {var}"
        );
    }

    #[test]
    fn heat_factor_scalar_cases() {
        // Single mode: lambda = 2, omega = pi, s = 0.1, T = 3. Then
        // a = (1 - s lambda) e^{-j pi} = -0.8 and the factor is the 3-term
        // geometric sum of -0.8 over sqrt(m).
        let spec = JointSpectrum::from_parts(CMatrix::from_element(1, 1, c(1.0, 0.0)), 0.0, 0.0);
        let out = heat_spectral_solution(&spec, &[2.0], &[std::f64::consts::PI], 0.1, 3).unwrap();
        let expect = ((-0.8f64).powi(3) - 1.0) / (-0.8 - 1.0);
        assert_relative_eq!(out.coeff()[(0, 0)].re, expect, epsilon = 1e-12);
        assert!(out.coeff()[(0, 0)].im.abs() < 1e-12);

        // s = 0, omega = 0 degenerates to a = 1: factor T / sqrt(m).
        let spec = JointSpectrum::from_parts(CMatrix::from_element(2, 1, c(1.0, 0.0)), 0.0, 0.0);
        let out = heat_spectral_solution(&spec, &[0.5], &[0.0, 0.0], 0.0, 5).unwrap();
        for k in 0..2 {
            assert_relative_eq!(out.coeff()[(k, 0)].re, 5.0 / 2.0f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn heat_closed_form_matches_time_iteration() {
        let g = Graph::random_geometric(5, 0.8, 2).unwrap().graph;
        let laplacian = g.shift_matrix(ShiftKind::Laplacian).unwrap();
        let fg = OperatorFactory::gft(&g, ShiftKind::Laplacian).unwrap();
        let t_horizon = 6usize;
        let fh = OperatorFactory::dft(t_horizon).unwrap();
        let s = 0.1;

        let initial = CVector::from_fn(5, |i, _| c((i as f64 + 1.0) / 5.0, 0.0));
        let time = heat_time_iteration(&laplacian, &initial, s, t_horizon).unwrap();
        let direct = hgfrft(
            &time,
            &fh.at_order(1.0).unwrap(),
            &fg.at_order(1.0).unwrap(),
        )
        .unwrap();

        // Graph spectrum of the initial state replicated across rows.
        let g_hat = fg.base() * &initial;
        let y = CMatrix::from_fn(t_horizon, 5, |_, l| g_hat[l]);
        let lambda: Vec<f64> = fg
            .shift_eigenvalues()
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        let omega = fh.frequencies().unwrap();
        let closed = heat_spectral_solution(
            &JointSpectrum::from_parts(y, 1.0, 1.0),
            &lambda,
            &omega,
            s,
            t_horizon,
        )
        .unwrap();
        assert!(max_abs(&(closed.coeff() - direct.coeff())) < 1e-8);
    }

    #[test]
    fn wave_factor_matches_chebyshev_recurrence() {
        let lambda = [0.0, 0.7, 2.3, 3.8];
        let omega = [0.0, 1.1, 2.2];
        let s = 0.9;
        let t_horizon = 7usize;
        let spec = JointSpectrum::from_parts(CMatrix::from_element(3, 4, c(1.0, 0.0)), 0.0, 0.0);
        let out = wave_spectral_solution(&spec, &lambda, &omega, s, t_horizon).unwrap();
        for (l, &lam) in lambda.iter().enumerate() {
            let x = 1.0 - s * lam / 2.0;
            for (k, &om) in omega.iter().enumerate() {
                // Chebyshev oracle: cos(t arccos x) = T_t(x) by recurrence.
                let mut t_prev = 1.0;
                let mut t_cur = x;
                let mut expect = Complex64::new(0.0, 0.0);
                for t in 0..t_horizon {
                    let cheb = if t == 0 {
                        1.0
                    } else if t == 1 {
                        x
                    } else {
                        let next = 2.0 * x * t_cur - t_prev;
                        t_prev = t_cur;
                        t_cur = next;
                        next
                    };
                    expect += Complex64::from_polar(1.0, -om * t as f64) * cheb;
                }
                assert!(
                    (out.coeff()[(k, l)] - expect).norm() < 1e-10,
                    "mode ({k}, {l})"
                );
            }
        }
    }

    #[test]
    fn wave_edge_cases() {
        let spec = JointSpectrum::from_parts(CMatrix::from_element(2, 2, c(1.0, 0.0)), 0.0, 0.0);
        // T = 1: factor 1 everywhere.
        let out = wave_spectral_solution(&spec, &[0.0, 1.0], &[0.3, 0.9], 1.0, 1).unwrap();
        assert!(max_abs(&(out.coeff() - spec.coeff())) < 1e-12);

        // lambda = 0 column: pure phase-ramp sum.
        let out = wave_spectral_solution(&spec, &[0.0, 1.0], &[0.3, 0.9], 1.0, 4).unwrap();
        for k in 0..2 {
            let om = [0.3, 0.9][k];
            let expect: Complex64 = (0..4)
                .map(|t| Complex64::from_polar(1.0, -om * t as f64))
                .sum();
            assert!((out.coeff()[(k, 0)] - expect).norm() < 1e-12);
        }

        // Unstable speed is rejected.
        assert!(matches!(
            wave_spectral_solution(&spec, &[0.0, 4.0], &[0.3, 0.9], 1.1, 4),
            Err(Error::UnstableSpeed { .. })
        ));
    }

    #[test]
    fn compactness_endpoints_and_monotonicity() {
        let mut coeff = CMatrix::zeros(3, 3);
        coeff[(0, 0)] = c(10.0, 0.0);
        for k in 1..9 {
            coeff[(k / 3, k % 3)] = c(0.1 * k as f64, 0.0);
        }
        let spec = JointSpectrum::from_parts(coeff, 0.0, 0.0);
        let grid: Vec<f64> = (0..=20).map(|k| 5.0 * k as f64).collect();
        let curve = energy_compactness(&spec, &grid).unwrap();
        assert_eq!(curve[0], (0.0, 0.0));
        assert_relative_eq!(curve.last().unwrap().1, 1.0, epsilon = 1e-12);
        for w in curve.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-15);
            assert!((0.0..=1.0 + 1e-12).contains(&w[1].1));
        }
        assert!(energy_compactness(&spec, &[101.0]).is_err());
    }

    #[test]
    fn compactness_dominant_coefficient() {
        // One coefficient holds ~99% of the energy; at p = 90 the error stays
        // within sqrt of the discarded share.
        let mut coeff = CMatrix::zeros(4, 5);
        coeff[(0, 0)] = c(1.0, 0.0);
        let rest = (0.01f64 / 19.0).sqrt();
        for k in 1..20 {
            coeff[(k / 5, k % 5)] = c(rest, 0.0);
        }
        let spec = JointSpectrum::from_parts(coeff, 0.0, 0.0);
        let curve = energy_compactness(&spec, &[90.0]).unwrap();
        assert!(curve[0].1 <= 0.1 + 1e-9, "error {}", curve[0].1);
    }

    #[test]
    fn peak_ratio_bounds() {
        assert_eq!(peak_to_energy(&[]), 0.0);
        let flat = vec![c(1.0, 0.0); 4];
        assert_relative_eq!(peak_to_energy(&flat), 0.5, epsilon = 1e-12);
        let impulse = [c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)];
        assert_relative_eq!(peak_to_energy(&impulse), 1.0, epsilon = 1e-12);
    }
}
