//! Linear matrix equations `dX = X_- dM`, `X_0 = Id`, solved three ways on
//! the same discrete paths: the left-point recursion, the truncated
//! Itô–Taylor series, and the exponential of the truncated logarithm.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ito::{matrix_ito_taylor, matrix_log, MatrixExpansion};
use crate::numeric::eval::EvalPlan;
use crate::numeric::path::{simulate, DriverSpec, Grid, PathSeed, SamplePath};

/// How the entries of `M` are driven.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowDrivers {
    /// `M_t = A t + B W_t` with one standard Brownian motion `W`.
    Linear { a: Vec<Vec<f64>>, b: Vec<Vec<f64>> },
    /// `M^{i,j}` is an independent driver, listed row-major.
    PerEntry { drivers: Vec<DriverSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowProblem {
    pub dim: usize,
    pub drivers: FlowDrivers,
    pub horizon: f64,
    pub steps: usize,
}

fn check_square(m: &[Vec<f64>], dim: usize) -> Result<()> {
    if m.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.len() });
    }
    if let Some(r) = m.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
    }
    Ok(())
}

impl FlowProblem {
    pub fn linear(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, horizon: f64, steps: usize) -> Result<Self> {
        let p = FlowProblem { dim: a.len(), drivers: FlowDrivers::Linear { a, b }, horizon, steps };
        p.validate()?;
        Ok(p)
    }

    pub fn per_entry(dim: usize, drivers: Vec<DriverSpec>, horizon: f64, steps: usize) -> Result<Self> {
        let p = FlowProblem { dim, drivers: FlowDrivers::PerEntry { drivers }, horizon, steps };
        p.validate()?;
        Ok(p)
    }

    /// The non-commuting 2×2 example used by the comparison study:
    /// `A = [[0, 1], [-1, 0]]`, `B = [[1, 0], [0, -1]]`.
    pub fn rotation_shear(horizon: f64, steps: usize) -> Result<Self> {
        FlowProblem::linear(vec![vec![0.0, 1.0], vec![-1.0, 0.0]], vec![vec![1.0, 0.0], vec![0.0, -1.0]], horizon, steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("flow dimension must be at least 1".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) || self.steps == 0 {
            return Err(Error::InvalidParameter("flow problems need T > 0 and at least one step".into()));
        }
        match &self.drivers {
            FlowDrivers::Linear { a, b } => {
                check_square(a, self.dim)?;
                check_square(b, self.dim)?;
            }
            FlowDrivers::PerEntry { drivers } => {
                if drivers.len() != self.dim * self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim * self.dim, found: drivers.len() });
                }
                for d in drivers {
                    d.validate()?;
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::uniform(self.horizon, self.steps)
    }

    /// The base driver paths of sample `path`: one Brownian path for a
    /// linear problem, one path per entry otherwise.
    pub fn simulate_bundle(&self, grid: &Grid, master_seed: u64, path: u64) -> Result<Vec<SamplePath>> {
        match &self.drivers {
            FlowDrivers::Linear { .. } => {
                let w = simulate(&DriverSpec::Brownian { sigma: 1.0 }, grid, PathSeed::new(master_seed, path, 0))?;
                Ok(vec![w])
            }
            FlowDrivers::PerEntry { drivers } => drivers
                .iter()
                .enumerate()
                .map(|(k, d)| simulate(d, grid, PathSeed::new(master_seed, path, k as u64)))
                .collect(),
        }
    }

    /// Increments of `M^{i,j}`, indexed by pair letter minus one.
    pub fn entry_increments(&self, bundle: &[SamplePath]) -> Result<Vec<Vec<f64>>> {
        let grid = bundle.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?.grid();
        if bundle.iter().any(|p| !p.grid().same_as(grid)) {
            return Err(Error::GridMismatch);
        }
        let d = self.dim;
        match &self.drivers {
            FlowDrivers::Linear { a, b } => {
                if bundle.len() != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: bundle.len() });
                }
                let dw = bundle[0].increments();
                let dt: Vec<f64> = (0..grid.steps()).map(|m| grid.dt(m)).collect();
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        out.push(dt.iter().zip(&dw).map(|(t, w)| a[i][j] * t + b[i][j] * w).collect());
                    }
                }
                Ok(out)
            }
            FlowDrivers::PerEntry { .. } => {
                if bundle.len() != d * d {
                    return Err(Error::DimensionMismatch { expected: d * d, found: bundle.len() });
                }
                Ok(bundle.iter().map(SamplePath::increments).collect())
            }
        }
    }
}

/// `X_{m+1} = X_m (Id + ΔM_m)`.
pub fn flow_reference(p: &FlowProblem, bundle: &[SamplePath]) -> Result<DMatrix<f64>> {
    reference_from_increments(p.dim, &p.entry_increments(bundle)?)
}

// column-major increments: the step index walks the inner vectors
#[allow(clippy::needless_range_loop)]
fn reference_from_increments(d: usize, inc: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let steps = inc[0].len();
    let mut x = vec![0.0; d * d];
    for i in 0..d {
        x[i * d + i] = 1.0;
    }
    let mut dx = vec![0.0; d * d];
    for m in 0..steps {
        for i in 0..d {
            for j in 0..d {
                dx[i * d + j] = (0..d).map(|k| x[i * d + k] * inc[k * d + j][m]).sum();
            }
        }
        for (xv, dv) in x.iter_mut().zip(&dx) {
            *xv += dv;
        }
    }
    Ok(DMatrix::from_row_slice(d, d, &x))
}

/// `exp(a)` by scaling and squaring a Taylor series; the series is summed
/// until a term drops below `tol` relative to the partial sum.
pub fn expm(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=60 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.abs().max() <= tol * sum.abs().max() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub const EXPM_TOLERANCE: f64 = 1e-12;

/// Evaluates the graded parts of the truncated logarithm and Itô–Taylor
/// series on discrete paths with one shared prefix trie.
#[derive(Debug, Clone)]
pub struct FlowEvaluator {
    dim: usize,
    max_order: usize,
    plan: EvalPlan,
    slots: Vec<usize>,
}

/// Per-grade numeric values: `log[n-1]` and `taylor[n-1]` hold grade `n`.
#[derive(Debug, Clone)]
pub struct GradedFlow {
    pub log: Vec<DMatrix<f64>>,
    pub taylor: Vec<DMatrix<f64>>,
}

impl GradedFlow {
    /// `Id + Σ_{n≤order} taylor_n`.
    pub fn taylor(&self, order: usize) -> DMatrix<f64> {
        let d = self.log.first().map_or(0, |m| m.nrows());
        self.taylor.iter().take(order).fold(DMatrix::identity(d, d), |acc, m| acc + m)
    }

    /// `Σ_{n≤order} log_n`.
    pub fn log(&self, order: usize) -> DMatrix<f64> {
        let d = self.log.first().map_or(0, |m| m.nrows());
        self.log.iter().take(order).fold(DMatrix::zeros(d, d), |acc, m| acc + m)
    }

    /// `exp(Σ_{n≤order} log_n)`.
    pub fn exp_log(&self, order: usize) -> DMatrix<f64> {
        expm(&self.log(order), EXPM_TOLERANCE)
    }

    /// The exponential of the graded logarithm with every product of total
    /// grade above `order` dropped. Because discrete iterated sums multiply
    /// by the quasi-shuffle, this equals [`GradedFlow::taylor`] up to
    /// round-off.
    pub fn graded_exp(&self, order: usize) -> DMatrix<f64> {
        let d = self.log.first().map_or(0, |m| m.nrows());
        let order = order.min(self.log.len());
        let mut out = DMatrix::identity(d, d);
        // power[g]: the grade-g part of log^j
        let mut power: Vec<DMatrix<f64>> = vec![DMatrix::zeros(d, d); order + 1];
        power[0] = DMatrix::identity(d, d);
        let mut fact = 1.0;
        for j in 1..=order {
            let mut next = vec![DMatrix::zeros(d, d); order + 1];
            for (g, slot) in next.iter_mut().enumerate().skip(j) {
                for n in 1..=g {
                    *slot += &power[g - n] * &self.log[n - 1];
                }
            }
            power = next;
            fact *= j as f64;
            for p in &power {
                out += p / fact;
            }
        }
        out
    }
}

impl FlowEvaluator {
    pub fn new(dim: usize, max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidParameter("flow order must be at least 1".into()));
        }
        let log = matrix_log(dim, max_order)?;
        let taylor = matrix_ito_taylor(dim, max_order)?;
        let mut parts: Vec<MatrixExpansion> = Vec::new();
        for src in [&log, &taylor] {
            for n in 1..=max_order {
                parts.push(src.homogeneous(n));
            }
        }
        let exprs: Vec<_> = parts.iter().flat_map(|m| m.entries.iter().flatten()).collect();
        let plan = EvalPlan::new(&exprs);
        let slots = plan
            .letters()
            .iter()
            .map(|&id| id as usize - 1)
            .collect();
        Ok(FlowEvaluator { dim, max_order, plan, slots })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of distinct word prefixes summed per step.
    pub fn prefix_count(&self) -> usize {
        self.plan.prefix_count()
    }

    /// Graded values from the increments of `M^{i,j}` (indexed by pair letter
    /// minus one).
    pub fn evaluate(&self, entry_increments: &[Vec<f64>]) -> Result<GradedFlow> {
        let d = self.dim;
        if entry_increments.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: entry_increments.len() });
        }
        let incs: Vec<&[f64]> = self.slots.iter().map(|&s| entry_increments[s].as_slice()).collect();
        let vals = self.plan.run(&incs)?;
        let mats: Vec<DMatrix<f64>> = vals.chunks(d * d).map(|c| DMatrix::from_row_slice(d, d, c)).collect();
        let (log, taylor) = mats.split_at(self.max_order);
        Ok(GradedFlow { log: log.to_vec(), taylor: taylor.to_vec() })
    }
}

/// Terminal values of the entries of `me` given the increments of `M^{i,j}`.
pub fn evaluate_matrix(me: &MatrixExpansion, entry_increments: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let d = me.dim;
    if entry_increments.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: entry_increments.len() });
    }
    let exprs: Vec<_> = me.entries.iter().flatten().collect();
    let plan = EvalPlan::new(&exprs);
    let incs: Vec<&[f64]> = plan.letters().iter().map(|&id| entry_increments[id as usize - 1].as_slice()).collect();
    let vals = plan.run(&incs)?;
    Ok(DMatrix::from_row_slice(d, d, &vals))
}

/// `Id + Σ_{n≤order} ∫M^n` evaluated on the paths.
pub fn flow_from_taylor(p: &FlowProblem, order: usize, bundle: &[SamplePath]) -> Result<DMatrix<f64>> {
    evaluate_matrix(&matrix_ito_taylor(p.dim, order)?, &p.entry_increments(bundle)?)
}

/// `exp` of the logarithm truncated at `order`, evaluated on the paths.
pub fn flow_from_log(p: &FlowProblem, order: usize, bundle: &[SamplePath]) -> Result<DMatrix<f64>> {
    if order == 0 {
        return Ok(DMatrix::identity(p.dim, p.dim));
    }
    let g = FlowEvaluator::new(p.dim, order)?.evaluate(&p.entry_increments(bundle)?)?;
    Ok(g.exp_log(order))
}

/// Mean Frobenius errors at one truncation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderStats {
    pub order: usize,
    /// mean ‖exp(log_k) − X_ref‖
    pub log_error: f64,
    /// mean ‖taylor_k − X_ref‖
    pub taylor_error: f64,
    /// mean ‖exp(log_k) − taylor_k‖
    pub log_taylor_gap: f64,
    /// max over paths of ‖graded_exp_k − taylor_k‖ / (1 + ‖taylor_k‖)
    pub graded_identity_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowStudy {
    pub problem: FlowProblem,
    pub seed: u64,
    pub paths: usize,
    pub orders: Vec<OrderStats>,
}

/// Monte Carlo comparison of the truncations `1..=max_order` against the
/// reference recursion. Paths are independent streams of `seed`; per-path
/// results are reduced in path order, so the outcome does not depend on the
/// number of threads.
pub fn flow_study(p: &FlowProblem, max_order: usize, paths: usize, seed: u64) -> Result<FlowStudy> {
    p.validate()?;
    if paths == 0 {
        return Err(Error::InvalidParameter("at least one path is required".into()));
    }
    let grid = p.grid()?;
    let evaluator = FlowEvaluator::new(p.dim, max_order)?;
    let per_path: Vec<Vec<[f64; 4]>> = (0..paths as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<[f64; 4]>> {
            let bundle = p.simulate_bundle(&grid, seed, i)?;
            let inc = p.entry_increments(&bundle)?;
            let reference = reference_from_increments(p.dim, &inc)?;
            let g = evaluator.evaluate(&inc)?;
            Ok((1..=max_order)
                .map(|k| {
                    let lg = g.exp_log(k);
                    let tay = g.taylor(k);
                    let graded = (g.graded_exp(k) - &tay).norm() / (1.0 + tay.norm());
                    [(&lg - &reference).norm(), (&tay - &reference).norm(), (&lg - &tay).norm(), graded]
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut sums = vec![[0.0f64; 4]; max_order];
    for row in &per_path {
        for (s, v) in sums.iter_mut().zip(row) {
            for c in 0..3 {
                s[c] += v[c];
            }
            s[3] = s[3].max(v[3]);
        }
    }
    let n = paths as f64;
    let orders = sums
        .iter()
        .enumerate()
        .map(|(k, s)| OrderStats {
            order: k + 1,
            log_error: s[0] / n,
            taylor_error: s[1] / n,
            log_taylor_gap: s[2] / n,
            graded_identity_error: s[3],
        })
        .collect();
    Ok(FlowStudy { problem: p.clone(), seed, paths, orders })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn expm_matches_nalgebra() {
        let a = DMatrix::from_row_slice(3, 3, &[0.1, 2.0, -0.3, 0.0, -1.5, 0.7, 0.4, 0.2, 0.9]);
        assert!(close(&expm(&a, EXPM_TOLERANCE), &a.clone().exp(), 1e-12));
        let z = DMatrix::<f64>::zeros(2, 2);
        assert_eq!(expm(&z, EXPM_TOLERANCE), DMatrix::identity(2, 2));
        let big = &a * 20.0;
        let want = big.clone().exp();
        assert!((expm(&big, EXPM_TOLERANCE) - &want).norm() <= 1e-10 * want.norm());
    }

    #[test]
    fn deterministic_reference_tends_to_exponential() {
        let p = FlowProblem::linear(vec![vec![0.0, 1.0], vec![-2.0, 0.3]], vec![vec![0.0; 2]; 2], 1.0, 1 << 14).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 0, 0).unwrap();
        let x = flow_reference(&p, &bundle).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -2.0, 0.3]).exp();
        assert!((x - want).norm() < 1e-3);
    }

    #[test]
    fn scalar_reference_is_a_product() {
        let p = FlowProblem::linear(vec![vec![0.0]], vec![vec![1.0]], 1.0, 50).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 4, 0).unwrap();
        let prod: f64 = bundle[0].increments().iter().map(|d| 1.0 + d).product();
        let x = flow_reference(&p, &bundle).unwrap();
        assert!((x[(0, 0)] - prod).abs() < 1e-12);
    }

    #[test]
    fn full_order_taylor_equals_reference() {
        // left-point sums of more letters than steps vanish
        let p = FlowProblem::rotation_shear(0.5, 4).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 9, 0).unwrap();
        let t = flow_from_taylor(&p, 4, &bundle).unwrap();
        let r = flow_reference(&p, &bundle).unwrap();
        assert!(close(&t, &r, 1e-13));
    }

    #[test]
    fn scalar_drift_log_flow() {
        let a = 0.7;
        let p = FlowProblem::linear(vec![vec![a]], vec![vec![0.0]], 1.0, 1000).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 0, 0).unwrap();
        let x1 = flow_from_log(&p, 1, &bundle).unwrap();
        assert!((x1[(0, 0)] - a.exp()).abs() < 1e-12 * a.exp());
        // higher orders add the discrete bracket, of size a^2 T dt
        let x3 = flow_from_log(&p, 3, &bundle).unwrap();
        assert!((x3[(0, 0)] - a.exp()).abs() < 1e-3);
    }

    #[test]
    fn graded_exponential_reproduces_taylor() {
        let p = FlowProblem::rotation_shear(0.3, 200).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 6, 0).unwrap();
        let g = FlowEvaluator::new(2, 3).unwrap().evaluate(&p.entry_increments(&bundle).unwrap()).unwrap();
        for k in 1..=3 {
            assert!(close(&g.graded_exp(k), &g.taylor(k), 1e-13), "order {k}");
        }
    }

    #[test]
    fn zero_driver_gives_identity() {
        let p = FlowProblem::linear(vec![vec![0.0; 2]; 2], vec![vec![0.0; 2]; 2], 1.0, 16).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 0, 0).unwrap();
        assert_eq!(flow_reference(&p, &bundle).unwrap(), DMatrix::identity(2, 2));
        assert_eq!(flow_from_log(&p, 2, &bundle).unwrap(), DMatrix::identity(2, 2));
    }

    #[test]
    fn study_is_reproducible() {
        let p = FlowProblem::rotation_shear(0.1, 64).unwrap();
        let a = flow_study(&p, 2, 8, 5).unwrap();
        let b = flow_study(&p, 2, 8, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.orders.len(), 2);
    }

    #[test]
    fn per_entry_drivers() {
        let drivers = vec![DriverSpec::Brownian { sigma: 1.0 }, DriverSpec::Poisson { lambda: 1.0 }, DriverSpec::LinearDrift { a: 1.0 }, DriverSpec::Brownian { sigma: 0.5 }];
        let p = FlowProblem::per_entry(2, drivers, 0.2, 5).unwrap();
        let grid = p.grid().unwrap();
        let bundle = p.simulate_bundle(&grid, 2, 0).unwrap();
        assert_eq!(bundle.len(), 4);
        let t = flow_from_taylor(&p, 5, &bundle).unwrap();
        assert!(close(&t, &flow_reference(&p, &bundle).unwrap(), 1e-12));
    }

    #[test]
    fn invalid_problems() {
        assert!(FlowProblem::linear(vec![vec![0.0, 1.0]], vec![vec![0.0]], 1.0, 4).is_err());
        assert!(FlowProblem::rotation_shear(-1.0, 4).is_err());
        assert!(FlowProblem::per_entry(2, vec![], 1.0, 4).is_err());
    }
}
