//! Bandlimited sampling: selection operators, perfect reconstruction, greedy
//! sample placement, and the fractional-order grid search.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtering::FrequencyRegion;
use crate::linalg::{self, sigma_min, CMatrix, CVector, PINV_RTOL};
use crate::transform::{basis_column, FractionalOperator, JointSignal};

/// Rank tolerance on `sigma_min(D U_K)` below which reconstruction is
/// rejected.
pub const RANK_TOL: f64 = 1e-10;

/// A sampling plan: ordered sample indices `w` into the flattened signal, the
/// bandlimited support, the selection matrix `d`, and the reconstruction
/// matrix `r`.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    pub w: Vec<usize>,
    pub support: FrequencyRegion,
    pub d: CMatrix,
    pub r: CMatrix,
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// Serialized form of a plan: `{w, support, alpha, beta}`. The operators are
/// rebuilt from the experiment configuration on load.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlanFile {
    pub w: Vec<usize>,
    pub support: FrequencyRegion,
    pub alpha: f64,
    pub beta: f64,
}

impl SamplingPlan {
    pub fn to_file(&self) -> PlanFile {
        PlanFile {
            w: self.w.clone(),
            support: self.support.clone(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Rebuild the full plan (selection and reconstruction matrices) from a
    /// plan file and operators at the recorded orders.
    pub fn from_file(
        file: &PlanFile,
        op_h: &FractionalOperator,
        op_g: &FractionalOperator,
    ) -> Result<Self> {
        let u_k = bandlimited_basis(op_h, op_g, &file.support)?;
        let d = selection_matrix(&file.w, op_h.dim() * op_g.dim())?;
        let r = reconstruction_operator(&d, &u_k)?;
        Ok(SamplingPlan {
            w: file.w.clone(),
            support: file.support.clone(),
            d,
            r,
            m: op_h.dim(),
            n: op_g.dim(),
            alpha: file.alpha,
            beta: file.beta,
        })
    }
}

/// Synthesis basis restricted to a support region: an `mn x K` matrix whose
/// columns are the joint basis vectors at the support's flat indices, in
/// ascending flat order.
pub fn bandlimited_basis(
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
    support: &FrequencyRegion,
) -> Result<CMatrix> {
    if support.is_empty() {
        return Err(Error::InvalidArgument("support region is empty"));
    }
    let (m, n) = (op_h.dim(), op_g.dim());
    support.validate(m, n)?;
    let flats = support.flat_indices(n);
    let mut u = CMatrix::zeros(m * n, flats.len());
    for (col, &k) in flats.iter().enumerate() {
        let basis = basis_column(op_h, op_g, k)?;
        u.set_column(col, &basis.to_vec());
    }
    Ok(u)
}

/// Row-selection matrix: row `t` has a single 1 in column `w[t]`.
pub fn selection_matrix(w: &[usize], len: usize) -> Result<CMatrix> {
    let mut d = CMatrix::zeros(w.len(), len);
    for (t, &idx) in w.iter().enumerate() {
        if idx >= len {
            return Err(Error::IndexOutOfRange { index: idx, len });
        }
        d[(t, idx)] = Complex64::new(1.0, 0.0);
    }
    Ok(d)
}

/// Reconstruction operator `R = U_K (D U_K)^+`.
///
/// Requires `D U_K` to have full column rank: at least `K` rows and
/// `sigma_min > RANK_TOL`. `R D` is then a projection onto the bandlimited
/// span.
pub fn reconstruction_operator(d: &CMatrix, u_k: &CMatrix) -> Result<CMatrix> {
    let k = u_k.ncols();
    if d.ncols() != u_k.nrows() {
        return Err(Error::DimensionMismatch {
            context: "reconstruction operator",
            expected: format!("selection with {} columns", u_k.nrows()),
            got: format!("{}", d.ncols()),
        });
    }
    if d.nrows() < k {
        return Err(Error::RankDeficient { sigma_min: 0.0 });
    }
    let du = d * u_k;
    let smin = sigma_min(&du);
    if smin <= RANK_TOL {
        return Err(Error::RankDeficient { sigma_min: smin });
    }
    Ok(u_k * linalg::pinv(&du, PINV_RTOL)?)
}

/// Greedy sample placement: iteratively add the row index that maximizes the
/// smallest singular value of the selected row submatrix. Ties resolve to the
/// smallest index, so the result is deterministic.
pub fn greedy_sample(u_k: &CMatrix, num_samples: usize) -> Result<Vec<usize>> {
    let rows = u_k.nrows();
    if num_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample"));
    }
    if num_samples > rows {
        return Err(Error::IndexOutOfRange {
            index: num_samples,
            len: rows,
        });
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(num_samples);
    let mut in_set = vec![false; rows];
    for _ in 0..num_samples {
        let mut best: Option<(usize, f64)> = None;
        for (j, taken) in in_set.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut sub = CMatrix::zeros(chosen.len() + 1, u_k.ncols());
            for (t, &r) in chosen.iter().enumerate() {
                sub.set_row(t, &u_k.row(r));
            }
            sub.set_row(chosen.len(), &u_k.row(j));
            let s = sigma_min(&sub);
            let better = match best {
                None => true,
                Some((_, best_s)) => s > best_s,
            };
            if better {
                best = Some((j, s));
            }
        }
        let (j, _) = best.expect("at least one unselected row");
        chosen.push(j);
        in_set[j] = true;
    }
    Ok(chosen)
}

/// Build a complete plan: greedy placement on the support's synthesis basis,
/// then the reconstruction operator.
pub fn build_plan(
    op_h: &FractionalOperator,
    op_g: &FractionalOperator,
    support: &FrequencyRegion,
    num_samples: usize,
) -> Result<SamplingPlan> {
    let u_k = bandlimited_basis(op_h, op_g, support)?;
    if num_samples < u_k.ncols() {
        return Err(Error::RankDeficient { sigma_min: 0.0 });
    }
    let w = greedy_sample(&u_k, num_samples)?;
    let d = selection_matrix(&w, u_k.nrows())?;
    let r = reconstruction_operator(&d, &u_k)?;
    Ok(SamplingPlan {
        w,
        support: support.clone(),
        d,
        r,
        m: op_h.dim(),
        n: op_g.dim(),
        alpha: op_h.order(),
        beta: op_g.order(),
    })
}

/// Extract sample values `vec(sig)[w[t]]`.
pub fn sample(sig: &JointSignal, w: &[usize]) -> Result<Vec<Complex64>> {
    let flat = sig.to_vec();
    w.iter()
        .map(|&idx| {
            flat.get(idx).copied().ok_or(Error::IndexOutOfRange {
                index: idx,
                len: flat.len(),
            })
        })
        .collect()
}

/// Reconstruct a joint signal from sample values through the plan's `R`.
pub fn recover(samples: &[Complex64], plan: &SamplingPlan) -> Result<JointSignal> {
    if samples.len() != plan.w.len() {
        return Err(Error::DimensionMismatch {
            context: "recovery",
            expected: format!("{}", plan.w.len()),
            got: format!("{}", samples.len()),
        });
    }
    let rec = &plan.r * CVector::from_column_slice(samples);
    JointSignal::from_flat(plan.m, plan.n, &rec)
}

/// Euclidean recovery error `|vec(f_rec) - vec(f)|_2`.
pub fn recovery_error(f_rec: &JointSignal, f: &JointSignal) -> Result<f64> {
    if f_rec.m() != f.m() || f_rec.n() != f.n() {
        return Err(Error::DimensionMismatch {
            context: "recovery error",
            expected: format!("{}x{}", f.m(), f.n()),
            got: format!("{}x{}", f_rec.m(), f_rec.n()),
        });
    }
    Ok((f_rec.to_vec() - f.to_vec()).norm())
}

/// Coarse search window for [`grid_search`].
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub alpha_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            alpha_range: (-2.0, 2.0),
            beta_range: (-2.0, 2.0),
            step: 0.25,
        }
    }
}

/// Default refinement step for [`grid_search`].
pub const DEFAULT_FINE_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridStage {
    Coarse,
    Fine,
}

#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub alpha: f64,
    pub beta: f64,
    pub error: f64,
    pub stage: GridStage,
}

#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub alpha: f64,
    pub beta: f64,
    pub error: f64,
    pub evaluations: Vec<GridPoint>,
}

fn grid_values(range: (f64, f64), step: f64) -> Vec<f64> {
    let count = ((range.1 - range.0) / step).round() as i64;
    (0..=count.max(0))
        .map(|k| range.0 + k as f64 * step)
        .collect()
}

/// Per-point evaluation: bandlimit the clean signal's spectrum to its
/// `support_size` largest coefficients, greedy-sample, and score the plan by
/// the noise amplification `|R n|_2`. Rank-deficient points score infinity.
fn evaluate_grid_point(
    sig: &JointSignal,
    factory_h: &crate::transform::OperatorFactory,
    factory_g: &crate::transform::OperatorFactory,
    noise: &CVector,
    support_size: usize,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    let op_h = factory_h.at_order(alpha)?;
    let op_g = factory_g.at_order(beta)?;
    let spec = crate::transform::hgfrft(sig, &op_h, &op_g)?;
    let n = sig.n();
    let mut magnitudes: Vec<(usize, f64)> = (0..sig.m() * n)
        .map(|k| (k, spec.coeff()[(k / n, k % n)].norm()))
        .collect();
    magnitudes.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let support =
        FrequencyRegion::from_flat(magnitudes.iter().take(support_size).map(|&(k, _)| k), n);

    let u_k = bandlimited_basis(&op_h, &op_g, &support)?;
    let w = greedy_sample(&u_k, noise.len())?;
    let d = selection_matrix(&w, u_k.nrows())?;
    match reconstruction_operator(&d, &u_k) {
        Ok(r) => Ok((r * noise).norm()),
        Err(Error::RankDeficient { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Fractional-order grid search: evaluate a coarse grid, then refine one
/// window of width `step` at either side of the coarse optimum with
/// `fine_step`. Evaluations run in parallel but aggregate in grid order, so
/// the result (ties broken toward lexicographically smaller `(alpha, beta)`)
/// is deterministic.
pub fn grid_search(
    sig_clean: &JointSignal,
    factory_h: &crate::transform::OperatorFactory,
    factory_g: &crate::transform::OperatorFactory,
    noise: &[Complex64],
    support_size: usize,
    coarse: &GridSpec,
    fine_step: f64,
) -> Result<GridSearchResult> {
    if support_size == 0 || support_size > sig_clean.m() * sig_clean.n() {
        return Err(Error::InvalidArgument("support size out of range"));
    }
    if noise.len() < support_size {
        return Err(Error::RankDeficient { sigma_min: 0.0 });
    }
    if !(coarse.step > 0.0 && fine_step > 0.0) {
        return Err(Error::InvalidArgument("grid steps must be positive"));
    }
    let noise = CVector::from_column_slice(noise);

    let run_stage = |alphas: &[f64], betas: &[f64], stage: GridStage| -> Result<Vec<GridPoint>> {
        let points: Vec<(f64, f64)> = alphas
            .iter()
            .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
            .collect();
        points
            .par_iter()
            .map(|&(alpha, beta)| {
                evaluate_grid_point(
                    sig_clean,
                    factory_h,
                    factory_g,
                    &noise,
                    support_size,
                    alpha,
                    beta,
                )
                .map(|error| GridPoint {
                    alpha,
                    beta,
                    error,
                    stage,
                })
            })
            .collect()
    };

    let mut evaluations = run_stage(
        &grid_values(coarse.alpha_range, coarse.step),
        &grid_values(coarse.beta_range, coarse.step),
        GridStage::Coarse,
    )?;

    let best_of = |evals: &[GridPoint]| -> GridPoint {
        evals
            .iter()
            .copied()
            .min_by(|a, b| {
                a.error
                    .total_cmp(&b.error)
                    .then(a.alpha.total_cmp(&b.alpha))
                    .then(a.beta.total_cmp(&b.beta))
            })
            .expect("grid is nonempty")
    };
    let coarse_best = best_of(&evaluations);

    // One refinement pass in a +-step window around the coarse optimum,
    // clamped to the search ranges.
    let clamp =
        |window: (f64, f64), range: (f64, f64)| (window.0.max(range.0), window.1.min(range.1));
    let fine = run_stage(
        &grid_values(
            clamp(
                (
                    coarse_best.alpha - coarse.step,
                    coarse_best.alpha + coarse.step,
                ),
                coarse.alpha_range,
            ),
            fine_step,
        ),
        &grid_values(
            clamp(
                (
                    coarse_best.beta - coarse.step,
                    coarse_best.beta + coarse.step,
                ),
                coarse.beta_range,
            ),
            fine_step,
        ),
        GridStage::Fine,
    )?;
    evaluations.extend(fine);

    let best = best_of(&evaluations);
    Ok(GridSearchResult {
        alpha: best.alpha,
        beta: best.beta,
        error: best.error,
        evaluations,
    })
}
