//! Dense complex linear algebra kernel.
//!
//! Eigendecomposition of normal matrices with a deterministic ordering and
//! phase convention, fractional matrix powers through the principal
//! logarithm, Kronecker products, and SVD-backed pseudo-inverse and singular
//! values.
//!
//! The iterative factorizations are implemented here with Jacobi methods: a
//! cyclic complex Jacobi eigensolver for Hermitian matrices and a one-sided
//! Jacobi SVD. Both are unconditionally convergent and keep the computed
//! bases unitary by construction, which matters because the transforms this
//! crate builds have heavily degenerate spectra (a DFT base has only four
//! distinct eigenvalues).
//!
//! All operations are pure functions on immutable inputs.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix; element `(i, j)` is row `i`, column `j`.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Relative tolerance on the commutator `A A^H - A^H A` for [`eig_normal`].
pub const NORMALITY_RTOL: f64 = 1e-8;
/// Absolute gap below which two eigenvalues belong to one degenerate cluster.
pub const EIG_CLUSTER_TOL: f64 = 1e-9;
/// Imaginary parts at or below this snap negative-real eigenvalues onto the
/// axis, so their principal argument is +pi on every platform.
pub const NEGATIVE_AXIS_SNAP: f64 = 1e-12;
/// Default relative singular-value cutoff for [`pinv`].
pub const PINV_RTOL: f64 = 1e-12;
/// Rounding grid for the eigenvector lexicographic tie-break.
const VECTOR_ROUND: f64 = 1e-12;
/// Sweep limit for the Jacobi iterations; convergence is quadratic and
/// normally takes well under ten sweeps.
const JACOBI_MAX_SWEEPS: usize = 64;

/// Jacobi rotation parameters zeroing the off-diagonal entry of the
/// Hermitian 2x2 block [[app, gamma], [conj(gamma), aqq]].
///
/// The rotation is J = [[c, s*w], [-s*conj(w), c]] with w = gamma / |gamma|.
fn jacobi_rotation(app: f64, aqq: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let gnorm = gamma.norm();
    let w = gamma / gnorm;
    let tau = (aqq - app) / (2.0 * gnorm);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, w)
}

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix. Returns
/// (eigenvalues, eigenvector columns) in the order the diagonal settles;
/// callers sort. The eigenvector matrix is a product of unitary rotations,
/// so it stays orthonormal to machine precision regardless of degeneracy.
fn hermitian_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.nrows();
    let mut m = (a + a.adjoint()).map(|z| z * 0.5);
    let mut v = CMatrix::identity(n, n);
    if n <= 1 {
        return Ok(((0..n).map(|i| m[(i, i)].re).collect(), v));
    }
    let frob = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let stop = 1e-14 * frob;
    let elem_skip = stop / n as f64;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            return Ok(((0..n).map(|i| m[(i, i)].re).collect(), v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gamma = m[(p, q)];
                if gamma.norm() <= elem_skip {
                    continue;
                }
                let (c, s, w) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, gamma);
                let sw = w * s;
                let swc = w.conj() * s;
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * c - mq * swc;
                    m[(k, q)] = mp * sw + mq * c;
                }
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = mp * c - mq * sw;
                    m[(q, k)] = mp * swc + mq * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c - vq * swc;
                    v[(k, q)] = vp * sw + vq * c;
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

/// Singular value decomposition factors: `a = u diag(sigma) v^H` with
/// `sigma` descending.
struct SvdFactors {
    u: CMatrix,
    sigma: Vec<f64>,
    v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD: rotate column pairs until they are
/// mutually orthogonal; the singular values are the final column norms.
/// Columns whose norm underflows produce zero left vectors, which the
/// pseudo-inverse cutoff discards anyway.
fn one_sided_jacobi(a: &CMatrix) -> Result<SvdFactors> {
    let (m, n) = (a.nrows(), a.ncols());
    if m < n {
        let f = one_sided_jacobi(&a.adjoint())?;
        return Ok(SvdFactors {
            u: f.v,
            sigma: f.sigma,
            v: f.u,
        });
    }
    let mut b = a.clone();
    let mut v = CMatrix::identity(n, n);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    let bp = b[(k, p)];
                    let bq = b[(k, q)];
                    app += bp.norm_sqr();
                    aqq += bq.norm_sqr();
                    apq += bp.conj() * bq;
                }
                if apq.norm() <= 1e-15 * (app * aqq).sqrt() || apq.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, w) = jacobi_rotation(app, aqq, apq);
                let sw = w * s;
                let swc = w.conj() * s;
                for k in 0..m {
                    let bp = b[(k, p)];
                    let bq = b[(k, q)];
                    b[(k, p)] = bp * c - bq * swc;
                    b[(k, q)] = bp * sw + bq * c;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c - vq * swc;
                    v[(k, q)] = vp * sw + vq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (b.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut u = CMatrix::zeros(m, n);
    let mut v_sorted = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &(norm, src)) in order.iter().enumerate() {
        sigma.push(norm);
        v_sorted.set_column(dst, &v.column(src));
        if norm > 0.0 {
            u.set_column(dst, &b.column(src).map(|z| z / norm));
        }
    }
    Ok(SvdFactors {
        u,
        sigma,
        v: v_sorted,
    })
}

/// Max-norm: largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues and orthonormal eigenvectors of a normal matrix.
///
/// Eigenvalues are sorted by (real part, imaginary part) ascending. Within a
/// degenerate cluster (gap below [`EIG_CLUSTER_TOL`]) the eigenvectors are
/// jointly re-orthonormalized, phase-normalized (the first component of
/// largest magnitude is made real nonnegative), and ordered by lexicographic
/// comparison of the entries rounded to a 1e-12 grid. The whole pipeline is
/// deterministic: identical inputs give bit-identical output.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    q: CMatrix,
    lambda: Vec<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Orthonormal eigenvector columns.
    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.lambda
    }

    /// `Q diag(lambda) Q^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&CVector::from_column_slice(&self.lambda));
        &self.q * d * self.q.adjoint()
    }
}

/// Eigendecomposition of a normal matrix (`A A^H = A^H A`).
///
/// Splits `A = H + iS` into its commuting Hermitian and skew-Hermitian parts,
/// diagonalizes `H`, then resolves `S` inside each (near-)degenerate
/// eigenspace of `H`. This covers every shift operator and unitary transform
/// used by the crate without a general complex eigensolver.
pub fn eig_normal(a: &CMatrix) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    if n == 0 || n != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let scale = max_abs(a);
    let commutator = a * a.adjoint() - a.adjoint() * a;
    let residual = max_abs(&commutator);
    if residual > NORMALITY_RTOL * scale * scale {
        return Err(Error::NotNormal { residual });
    }

    // A = H + iS with H, S Hermitian and commuting. Both constructions are
    // exactly Hermitian in floating point.
    let herm = (a + a.adjoint()).map(|z| z * 0.5);
    let skew = (a - a.adjoint()).map(|z| z * Complex64::new(0.0, -0.5));

    let (mu_raw, vecs) = hermitian_eig(&herm)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| mu_raw[i].total_cmp(&mu_raw[j]));
    let mu: Vec<f64> = order.iter().map(|&i| mu_raw[i]).collect();
    let mut q = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        q.set_column(dst, &vecs.column(src));
    }

    let h_tol = EIG_CLUSTER_TOL * scale.max(1.0);
    let mut lambda = vec![Complex64::new(0.0, 0.0); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && mu[end] - mu[end - 1] <= h_tol {
            end += 1;
        }
        let width = end - start;
        let mu_rep = mu[start..end].iter().sum::<f64>() / width as f64;
        if width == 1 {
            let u = q.column(start).into_owned();
            let nu = u.dotc(&(&skew * &u)).re;
            lambda[start] = Complex64::new(mu_rep, nu);
        } else {
            // Diagonalize the skew part restricted to this eigenspace.
            let block = q.columns(start, width).into_owned();
            let small = block.adjoint() * &skew * &block;
            let (nu, small_vecs) = hermitian_eig(&small)?;
            let mut sub: Vec<usize> = (0..width).collect();
            sub.sort_by(|&i, &j| nu[i].total_cmp(&nu[j]));
            let rotated = &block * &small_vecs;
            for (offset, &src) in sub.iter().enumerate() {
                q.set_column(start + offset, &rotated.column(src));
                lambda[start + offset] = Complex64::new(mu_rep, nu[src]);
            }
        }
        start = end;
    }

    for l in lambda.iter_mut() {
        if l.re < 0.0 && l.im.abs() <= NEGATIVE_AXIS_SNAP {
            l.im = 0.0;
        }
    }

    order_eigenpairs(&mut q, &mut lambda);

    let dec = SpectralDecomposition { q, lambda };
    let ortho = max_abs(&(dec.q.adjoint() * &dec.q - CMatrix::identity(n, n)));
    let recon = max_abs(&(dec.reconstruct() - a));
    if ortho > 1e-10 || recon > 1e-8 * (1.0 + scale) {
        return Err(Error::NoConvergence);
    }
    Ok(dec)
}

/// Deterministic ordering pass: global sort by (re, im), then per-cluster
/// re-orthonormalization, phase normalization, and vector tie-break.
fn order_eigenpairs(q: &mut CMatrix, lambda: &mut [Complex64]) {
    let n = lambda.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        lambda[i]
            .re
            .total_cmp(&lambda[j].re)
            .then(lambda[i].im.total_cmp(&lambda[j].im))
    });
    permute_columns(q, lambda, &idx);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (lambda[end] - lambda[end - 1]).norm() <= EIG_CLUSTER_TOL {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            gram_schmidt_block(q, start, width);
        }
        for col in start..end {
            normalize_phase(q, col);
        }
        if width > 1 {
            let mut members: Vec<usize> = (start..end).collect();
            members.sort_by(|&i, &j| lex_cmp_columns(q, i, j));
            let mut perm: Vec<usize> = (0..n).collect();
            perm[start..end].copy_from_slice(&members);
            permute_columns(q, lambda, &perm);
        }
        start = end;
    }
}

fn permute_columns(q: &mut CMatrix, lambda: &mut [Complex64], perm: &[usize]) {
    let old_q = q.clone();
    let old_l = lambda.to_vec();
    for (dst, &src) in perm.iter().enumerate() {
        if dst != src {
            q.set_column(dst, &old_q.column(src));
        }
        lambda[dst] = old_l[src];
    }
}

/// Modified Gram-Schmidt on columns `start..start+width`, in place.
fn gram_schmidt_block(q: &mut CMatrix, start: usize, width: usize) {
    for k in 0..width {
        let mut v = q.column(start + k).into_owned();
        for j in 0..k {
            let u = q.column(start + j).into_owned();
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let norm = v.norm();
        if norm > 0.0 {
            v.unscale_mut(norm);
        }
        q.set_column(start + k, &v);
    }
}

/// Rotate a column so its first component of largest magnitude is real
/// nonnegative.
fn normalize_phase(q: &mut CMatrix, col: usize) {
    let rows = q.nrows();
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for i in 0..rows {
        let m = q[(i, col)].norm();
        if m > best_mag {
            best = i;
            best_mag = m;
        }
    }
    if best_mag == 0.0 {
        return;
    }
    let rot = (q[(best, col)] / best_mag).conj();
    for i in 0..rows {
        q[(i, col)] *= rot;
    }
}

fn round_to_grid(x: f64) -> i64 {
    (x / VECTOR_ROUND).round() as i64
}

fn lex_cmp_columns(q: &CMatrix, a: usize, b: usize) -> Ordering {
    for i in 0..q.nrows() {
        let za = q[(i, a)];
        let zb = q[(i, b)];
        match round_to_grid(za.re).cmp(&round_to_grid(zb.re)) {
            Ordering::Equal => {}
            other => return other,
        }
        match round_to_grid(za.im).cmp(&round_to_grid(zb.im)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Principal logarithm: `log|z| + i arg(z)` with `arg` in `(-pi, pi]`.
pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroEigenvalue);
    }
    // atan2 returns -pi for a -0.0 imaginary part; the branch cut belongs to
    // +pi.
    let arg = if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.arg()
    };
    Ok(Complex64::new(z.norm().ln(), arg))
}

/// Fractional power `Q diag(exp(beta Log(lambda))) Q^H` of a decomposed
/// normal matrix. Every eigenvalue must be nonzero, and the powered
/// eigenvalues must stay representable.
pub fn frac_power(dec: &SpectralDecomposition, beta: f64) -> Result<CMatrix> {
    if !beta.is_finite() {
        return Err(Error::InvalidOrder(beta));
    }
    let n = dec.dim();
    let mut powered = CVector::zeros(n);
    for (i, &l) in dec.lambda.iter().enumerate() {
        let p = (principal_log(l)? * beta).exp();
        if !p.re.is_finite() || !p.im.is_finite() {
            return Err(Error::InvalidOrder(beta));
        }
        powered[i] = p;
    }
    let qd = &dec.q * CMatrix::from_diagonal(&powered);
    Ok(qd * dec.q.adjoint())
}

/// Kronecker product with block `(i, j) = a[i, j] * b`. Errors when either
/// product dimension exceeds the configured cap.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let cap = crate::max_joint_dim();
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= cap && c <= cap => Ok(a.kronecker(b)),
        _ => Err(Error::DimensionOverflow {
            rows: rows.unwrap_or(usize::MAX),
            cols: cols.unwrap_or(usize::MAX),
            cap,
        }),
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(one_sided_jacobi(a)?.sigma)
}

/// Moore-Penrose pseudo-inverse; singular values at or below
/// `rtol * sigma_max` are treated as zero.
pub fn pinv(a: &CMatrix, rtol: f64) -> Result<CMatrix> {
    if rtol.is_nan() || rtol <= 0.0 {
        return Err(Error::InvalidArgument("pinv rtol must be positive"));
    }
    let f = one_sided_jacobi(a)?;
    let sigma_max = f.sigma.first().copied().unwrap_or(0.0);
    let cut = rtol * sigma_max;
    let inv = CVector::from_iterator(
        f.sigma.len(),
        f.sigma.iter().map(|&s| {
            if s > cut {
                Complex64::new(1.0 / s, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    );
    Ok(&f.v * CMatrix::from_diagonal(&inv) * f.u.adjoint())
}

/// Smallest singular value.
pub fn sigma_min(a: &CMatrix) -> f64 {
    one_sided_jacobi(a)
        .map(|f| f.sigma.last().copied().unwrap_or(0.0))
        .unwrap_or(0.0)
}
