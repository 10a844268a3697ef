//! Fractional operators and the joint Hilbert-space/vertex transform.
//!
//! An [`OperatorFactory`] owns a unitary order-1 transform together with its
//! spectral decomposition and hands out [`FractionalOperator`]s at arbitrary
//! real orders, caching each order's matrix. The joint transform applies a
//! Hilbert-side operator to the rows and a graph-side operator to the columns
//! of a [`JointSignal`]; under the Hilbert-major flattening
//! `vec(x)[i * n + j] = x[i, j]` this equals the Kronecker-product operator
//! acting on `vec(x)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, ShiftKind};
use crate::linalg::{
    self, eig_normal, frac_power, max_abs, CMatrix, CVector, SpectralDecomposition,
};

/// Cache granularity for fractional orders.
const ORDER_CACHE_GRID: f64 = 1e-12;
/// Unitarity tolerance for order-1 bases.
const UNITARITY_TOL: f64 = 1e-9;

/// Where an order-1 transform came from; carries the companion spectrum used
/// for frequency bookkeeping.
#[derive(Debug, Clone)]
pub enum FactoryKind {
    /// Unitary DFT on an `m`-point uniform grid.
    Dft { m: usize },
    /// Graph Fourier transform: adjoint of the shift eigenvector matrix.
    GraphShift {
        shift: ShiftKind,
        eigenvalues: Vec<Complex64>,
    },
    /// Any caller-supplied unitary base.
    Custom,
}

struct FactoryCore {
    base: CMatrix,
    dec: SpectralDecomposition,
    kind: FactoryKind,
    cache: RwLock<HashMap<i64, Arc<CMatrix>>>,
}

/// Factory for fractional powers of one unitary transform.
///
/// Cloning is cheap and clones share the per-order cache; the cache is safe
/// under concurrent readers with single-writer insertion.
#[derive(Clone)]
pub struct OperatorFactory {
    core: Arc<FactoryCore>,
}

impl std::fmt::Debug for OperatorFactory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorFactory")
            .field("dim", &self.dim())
            .field("kind", &self.core.kind)
            .finish()
    }
}

impl OperatorFactory {
    /// Unitary DFT base: `base[k, l] = exp(-2 pi i k l / m) / sqrt(m)`.
    pub fn dft(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument("dft grid needs m >= 2"));
        }
        let scale = 1.0 / (m as f64).sqrt();
        let base = CMatrix::from_fn(m, m, |k, l| {
            Complex64::from_polar(scale, -2.0 * PI * ((k * l) % m) as f64 / m as f64)
        });
        Self::with_kind(base, FactoryKind::Dft { m })
    }

    /// Graph Fourier transform base: `Q_s^H` for the shift's eigenvector
    /// matrix `Q_s` under the deterministic eigendecomposition ordering.
    pub fn gft(g: &Graph, kind: ShiftKind) -> Result<Self> {
        let shift = g.shift_matrix(kind)?;
        let shift_dec = eig_normal(&shift)?;
        let base = shift_dec.q().adjoint();
        Self::with_kind(
            base,
            FactoryKind::GraphShift {
                shift: kind,
                eigenvalues: shift_dec.eigenvalues().to_vec(),
            },
        )
    }

    /// Wrap an arbitrary unitary matrix as the order-1 transform.
    pub fn from_unitary(base: CMatrix) -> Result<Self> {
        Self::with_kind(base, FactoryKind::Custom)
    }

    fn with_kind(base: CMatrix, kind: FactoryKind) -> Result<Self> {
        let n = base.nrows();
        if n == 0 || n != base.ncols() {
            return Err(Error::NotSquare {
                rows: base.nrows(),
                cols: base.ncols(),
            });
        }
        let residual = max_abs(&(&base * base.adjoint() - CMatrix::identity(n, n)));
        if residual > UNITARITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        let dec = eig_normal(&base)?;
        Ok(OperatorFactory {
            core: Arc::new(FactoryCore {
                base,
                dec,
                kind,
                cache: RwLock::new(HashMap::new()),
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.core.base.nrows()
    }

    /// The order-1 transform matrix.
    pub fn base(&self) -> &CMatrix {
        &self.core.base
    }

    pub fn kind(&self) -> &FactoryKind {
        &self.core.kind
    }

    /// Eigenvalues of the underlying shift operator, when built by [`gft`].
    ///
    /// [`gft`]: OperatorFactory::gft
    pub fn shift_eigenvalues(&self) -> Option<&[Complex64]> {
        match &self.core.kind {
            FactoryKind::GraphShift { eigenvalues, .. } => Some(eigenvalues),
            _ => None,
        }
    }

    /// Grid frequencies `2 pi k / m`, when built by [`dft`].
    ///
    /// [`dft`]: OperatorFactory::dft
    pub fn frequencies(&self) -> Option<Vec<f64>> {
        match &self.core.kind {
            FactoryKind::Dft { m } => {
                Some((0..*m).map(|k| 2.0 * PI * k as f64 / *m as f64).collect())
            }
            _ => None,
        }
    }

    /// Fractional operator at `order`; matrices are cached per order rounded
    /// to a 1e-12 grid.
    pub fn at_order(&self, order: f64) -> Result<FractionalOperator> {
        if !order.is_finite() {
            return Err(Error::InvalidOrder(order));
        }
        let key = (order / ORDER_CACHE_GRID).round() as i64;
        if let Some(mat) = self.core.cache.read().unwrap().get(&key) {
            return Ok(FractionalOperator {
                core: self.core.clone(),
                order,
                mat: mat.clone(),
            });
        }
        let computed = Arc::new(frac_power(&self.core.dec, order)?);
        let mat = {
            let mut cache = self.core.cache.write().unwrap();
            cache.entry(key).or_insert_with(|| computed).clone()
        };
        Ok(FractionalOperator {
            core: self.core.clone(),
            order,
            mat,
        })
    }
}

/// One fractional power `F^order` of a factory's base transform.
#[derive(Clone)]
pub struct FractionalOperator {
    core: Arc<FactoryCore>,
    order: f64,
    mat: Arc<CMatrix>,
}

impl std::fmt::Debug for FractionalOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FractionalOperator")
            .field("dim", &self.dim())
            .field("order", &self.order)
            .finish()
    }
}

impl FractionalOperator {
    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// The factory this operator came from.
    pub fn factory(&self) -> OperatorFactory {
        OperatorFactory {
            core: self.core.clone(),
        }
    }

    /// Operator at the negated order (the analysis/synthesis dual).
    pub fn inverse(&self) -> Result<FractionalOperator> {
        self.factory().at_order(-self.order)
    }

    /// Synthesis matrix `F^{-order}` whose columns are the order-`order`
    /// basis vectors.
    pub fn synthesis_matrix(&self) -> Result<Arc<CMatrix>> {
        Ok(self.inverse()?.mat)
    }
}

/// Two-variable signal `x[i, j]` over (Hilbert sample `i`, vertex `j`).
#[derive(Debug, Clone, PartialEq)]
pub struct JointSignal {
    m: usize,
    n: usize,
    x: CMatrix,
}

impl JointSignal {
    pub fn new(x: CMatrix) -> Self {
        let (m, n) = (x.nrows(), x.ncols());
        JointSignal { m, n, x }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        JointSignal::new(CMatrix::zeros(m, n))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.x
    }

    /// Hilbert-major flattening: `vec[i * n + j] = x[i, j]`.
    pub fn to_vec(&self) -> CVector {
        CVector::from_fn(self.m * self.n, |k, _| self.x[(k / self.n, k % self.n)])
    }

    pub fn from_flat(m: usize, n: usize, v: &CVector) -> Result<Self> {
        if v.len() != m * n {
            return Err(Error::DimensionMismatch {
                context: "joint signal from flat vector",
                expected: format!("{}", m * n),
                got: format!("{}", v.len()),
            });
        }
        Ok(JointSignal::new(CMatrix::from_fn(m, n, |i, j| {
            v[i * n + j]
        })))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Joint spectrum at fractional orders `(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectrum {
    m: usize,
    n: usize,
    alpha: f64,
    beta: f64,
    coeff: CMatrix,
}

impl JointSpectrum {
    pub fn from_parts(coeff: CMatrix, alpha: f64, beta: f64) -> Self {
        let (m, n) = (coeff.nrows(), coeff.ncols());
        JointSpectrum {
            m,
            n,
            alpha,
            beta,
            coeff,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coeff(&self) -> &CMatrix {
        &self.coeff
    }

    pub fn coeff_mut(&mut self) -> &mut CMatrix {
        &mut self.coeff
    }

    pub fn norm(&self) -> f64 {
        self.coeff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn check_dims(
    sig_m: usize,
    sig_n: usize,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<()> {
    if op_h.dim() != sig_m || op_g.dim() != sig_n {
        return Err(Error::DimensionMismatch {
            context: "joint transform",
            expected: format!("{}x{}", op_h.dim(), op_g.dim()),
            got: format!("{sig_m}x{sig_n}"),
        });
    }
    Ok(())
}

/// Joint fractional transform: `coeff = H^alpha x (G^beta)^T`.
pub fn hgfrft(
    sig: &JointSignal,
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
) -> Result<JointSpectrum> {
    check_dims(sig.m, sig.n, op_h, op_g)?;
    let coeff = op_h.mat() * &sig.x * op_g.mat().transpose();

    #[cfg(debug_assertions)]
    if sig.m * sig.n <= 256 {
        // Matrix form must agree with the Kronecker operator on vec(x).
        let joint = linalg::kron(op_h.mat(), op_g.mat()).expect("within cap");
        let flat = &joint * sig.to_vec();
        let alt = JointSignal::from_flat(sig.m, sig.n, &flat).expect("dims agree");
        let diff = max_abs(&(&coeff - &alt.x));
        debug_assert!(diff <= 1e-10, "kron cross-check failed: {diff:.3e}");
    }

    Ok(JointSpectrum {
        m: sig.m,
        n: sig.n,
        alpha: op_h.order(),
        beta: op_g.order(),
        coeff,
    })
}

/// Inverse joint transform; the supplied operators must sit at exactly the
/// negated orders of the spectrum.
pub fn inverse_hgfrft(
    spec: &JointSpectrum,
    op_h_neg: &FractionalOperator,
    op_g_neg: &FractionalOperator,
) -> Result<JointSignal> {
    if op_h_neg.order() != -spec.alpha {
        return Err(Error::OrderMismatch {
            expected: -spec.alpha,
            got: op_h_neg.order(),
        });
    }
    if op_g_neg.order() != -spec.beta {
        return Err(Error::OrderMismatch {
            expected: -spec.beta,
            got: op_g_neg.order(),
        });
    }
    check_dims(spec.m, spec.n, op_h_neg, op_g_neg)?;
    let x = op_h_neg.mat() * &spec.coeff * op_g_neg.mat().transpose();
    Ok(JointSignal::new(x))
}

/// Hilbert-side partial transform: rows through `H^alpha`.
pub fn partial_h(sig: &JointSignal, op_h: &FractionalOperator) -> Result<JointSignal> {
    if op_h.dim() != sig.m {
        return Err(Error::DimensionMismatch {
            context: "hilbert partial transform",
            expected: format!("{}", op_h.dim()),
            got: format!("{}", sig.m),
        });
    }
    Ok(JointSignal::new(op_h.mat() * &sig.x))
}

/// Graph-side partial transform: columns through `G^beta`.
pub fn partial_g(sig: &JointSignal, op_g: &FractionalOperator) -> Result<JointSignal> {
    if op_g.dim() != sig.n {
        return Err(Error::DimensionMismatch {
            context: "graph partial transform",
            expected: format!("{}", op_g.dim()),
            got: format!("{}", sig.n),
        });
    }
    Ok(JointSignal::new(&sig.x * op_g.mat().transpose()))
}

/// The `k`-th joint basis vector: column `k` of the Kronecker product of the
/// two synthesis matrices, reshaped under the Hilbert-major contract. With
/// `k = i * n + j` this is the outer product of Hilbert synthesis column `i`
/// and graph synthesis column `j`.
pub fn basis_column(
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
    k: usize,
) -> Result<JointSignal> {
    let (m, n) = (op_h.dim(), op_g.dim());
    if k >= m * n {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: m * n,
        });
    }
    let synth_h = op_h.synthesis_matrix()?;
    let synth_g = op_g.synthesis_matrix()?;
    let (i, j) = (k / n, k % n);
    Ok(JointSignal::new(CMatrix::from_fn(m, n, |a, b| {
        synth_h[(a, i)] * synth_g[(b, j)]
    })))
}
