//! Sample paths on a shared time grid and the drivers that generate them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing times `0 = t_0 < t_1 < ... < t_M`, shared by reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Arc<[f64]>);

impl Grid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidParameter("grid must start at time 0".into()));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("grid times must be finite and strictly increasing".into()));
        }
        Ok(Grid(times.into()))
    }

    /// `M` equal steps on `[0, horizon]`.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) || steps == 0 {
            return Err(Error::InvalidParameter(format!("uniform grid needs T > 0 and M >= 1, got T={horizon}, M={steps}")));
        }
        let times = (0..=steps)
            .map(|m| if m == steps { horizon } else { horizon * m as f64 / steps as f64 })
            .collect();
        Grid::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    /// Number of steps `M`.
    pub fn steps(&self) -> usize {
        self.0.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn dt(&self, m: usize) -> f64 {
        self.0[m + 1] - self.0[m]
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Values of a process at the grid points, starting from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: Grid,
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.times().len() {
            return Err(Error::DimensionMismatch { expected: grid.times().len(), found: values.len() });
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidParameter("paths start at zero".into()));
        }
        Ok(SamplePath { grid, values })
    }

    /// The path whose increments are `increments`.
    pub fn from_increments(grid: Grid, increments: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut acc = 0.0;
        values.push(acc);
        for d in increments {
            acc += d;
            values.push(acc);
        }
        SamplePath::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub(crate) fn check_grid(&self, other: &SamplePath) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// `[x, y]_t = Σ_{t_{m+1} ≤ t} Δx_m Δy_m`.
pub fn discrete_bracket(x: &SamplePath, y: &SamplePath) -> Result<SamplePath> {
    x.check_grid(y)?;
    let inc: Vec<f64> = x.increments().iter().zip(y.increments()).map(|(a, b)| a * b).collect();
    SamplePath::from_increments(x.grid.clone(), &inc)
}

/// `∫ x_- dy = Σ x_{t_m} Δy_m`.
pub fn left_point_integral(x: &SamplePath, y: &SamplePath) -> Result<SamplePath> {
    x.check_grid(y)?;
    let inc: Vec<f64> = y.increments().iter().zip(&x.values).map(|(dy, xm)| xm * dy).collect();
    SamplePath::from_increments(x.grid.clone(), &inc)
}

/// The kinds of driver the simulator knows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriverSpec {
    Brownian { sigma: f64 },
    Poisson { lambda: f64 },
    LinearDrift { a: f64 },
    /// Values on the simulation grid, given explicitly.
    Table { values: Vec<f64> },
}

impl DriverSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DriverSpec::Brownian { sigma } if !(*sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidParameter(format!("brownian sigma must be >= 0, got {sigma}")))
            }
            DriverSpec::Poisson { lambda } if !(*lambda > 0.0 && lambda.is_finite()) => {
                Err(Error::InvalidParameter(format!("poisson rate must be > 0, got {lambda}")))
            }
            DriverSpec::LinearDrift { a } if !a.is_finite() => {
                Err(Error::InvalidParameter(format!("drift must be finite, got {a}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, DriverSpec::Brownian { .. } | DriverSpec::Poisson { .. })
    }
}

impl fmt::Display for DriverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriverSpec::Brownian { sigma } => write!(f, "brownian:{sigma}"),
            DriverSpec::Poisson { lambda } => write!(f, "poisson:{lambda}"),
            DriverSpec::LinearDrift { a } => write!(f, "drift:{a}"),
            DriverSpec::Table { values } => write!(f, "table[{}]", values.len()),
        }
    }
}

impl FromStr for DriverSpec {
    type Err = Error;

    /// `brownian[:σ]`, `poisson:λ`, `drift[:a]`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |default: Option<f64>| -> Result<f64> {
            match (arg, default) {
                (Some(a), _) => a
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad number {a:?} in driver {s:?}"))),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::InvalidParameter(format!("driver {s:?} needs a parameter"))),
            }
        };
        let spec = match kind.trim() {
            "brownian" | "bm" => DriverSpec::Brownian { sigma: num(Some(1.0))? },
            "poisson" => DriverSpec::Poisson { lambda: num(None)? },
            "drift" | "linear" => DriverSpec::LinearDrift { a: num(Some(1.0))? },
            other => return Err(Error::InvalidParameter(format!("unknown driver kind {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Key of one random stream: the same key always yields the same numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathSeed {
    pub master: u64,
    pub path: u64,
    pub driver: u64,
}

impl PathSeed {
    pub fn new(master: u64, path: u64, driver: u64) -> Self {
        PathSeed { master, path, driver }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master.to_le_bytes());
        key[8..16].copy_from_slice(&self.path.to_le_bytes());
        key[16..24].copy_from_slice(&self.driver.to_le_bytes());
        key[24..].copy_from_slice(b"itopath\0");
        ChaCha8Rng::from_seed(key)
    }
}

/// Samples one path of `spec` on `grid`.
///
/// Poisson jump times are drawn exactly and credited to the cell
/// `(t_m, t_{m+1}]` containing them; a warning is logged when a cell receives
/// more than one jump.
pub fn simulate(spec: &DriverSpec, grid: &Grid, seed: PathSeed) -> Result<SamplePath> {
    spec.validate()?;
    let times = grid.times();
    let steps = grid.steps();
    match spec {
        DriverSpec::LinearDrift { a } => SamplePath::new(grid.clone(), times.iter().map(|t| a * t).collect()),
        DriverSpec::Table { values } => SamplePath::new(grid.clone(), values.clone()),
        DriverSpec::Brownian { sigma } => {
            let mut rng = seed.rng();
            let inc: Vec<f64> = (0..steps)
                .map(|m| {
                    let z: f64 = rng.sample(StandardNormal);
                    sigma * grid.dt(m).sqrt() * z
                })
                .collect();
            SamplePath::from_increments(grid.clone(), &inc)
        }
        DriverSpec::Poisson { lambda } => {
            let mut rng = seed.rng();
            let exp = Exp::new(*lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let horizon = grid.horizon();
            let mut inc = vec![0.0; steps];
            let mut t = 0.0;
            loop {
                t += rng.sample(exp);
                if t > horizon {
                    break;
                }
                // first m with t <= t_{m+1}
                let cell = times[1..].partition_point(|&s| s < t);
                inc[cell] += 1.0;
            }
            let crowded = inc.iter().filter(|&&d| d > 1.0).count();
            if crowded > 0 {
                log::warn!(
                    "{crowded} grid cell(s) received several Poisson jumps (rate {lambda}, {steps} steps); refine the grid to resolve jumps"
                );
            }
            SamplePath::from_increments(grid.clone(), &inc)
        }
    }
}

/// True when every increment is 0 or 1, i.e. the grid separates the jumps of
/// a counting path.
pub fn resolves_jumps(path: &SamplePath) -> bool {
    path.increments().iter().all(|&d| d == 0.0 || d == 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid() {
        let g = Grid::uniform(1.0, 4).unwrap();
        assert_eq!(g.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.steps(), 4);
        assert!(Grid::uniform(0.0, 4).is_err());
        assert!(Grid::uniform(1.0, 0).is_err());
        assert!(Grid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(Grid::new(vec![0.1, 0.5]).is_err());
    }

    #[test]
    fn linear_drift_values_are_times() {
        let g = Grid::uniform(1.0, 8).unwrap();
        let p = simulate(&DriverSpec::LinearDrift { a: 1.0 }, &g, PathSeed::new(0, 0, 0)).unwrap();
        assert_eq!(p.values(), g.times());
    }

    #[test]
    fn bracket_of_linear_paths() {
        let m = 64;
        let g = Grid::uniform(2.0, m).unwrap();
        let x = simulate(&DriverSpec::LinearDrift { a: 1.0 }, &g, PathSeed::new(0, 0, 0)).unwrap();
        let b = discrete_bracket(&x, &x).unwrap();
        assert!((b.terminal() - 4.0 / m as f64).abs() < 1e-12);
    }

    #[test]
    fn abel_identity() {
        let g = Grid::uniform(1.0, 500).unwrap();
        let x = simulate(&DriverSpec::Brownian { sigma: 1.0 }, &g, PathSeed::new(7, 0, 0)).unwrap();
        let y = simulate(&DriverSpec::Poisson { lambda: 3.0 }, &g, PathSeed::new(7, 0, 1)).unwrap();
        let xy = x.terminal() * y.terminal();
        let rhs = left_point_integral(&x, &y).unwrap().terminal()
            + left_point_integral(&y, &x).unwrap().terminal()
            + discrete_bracket(&x, &y).unwrap().terminal();
        assert!((xy - rhs).abs() < 1e-12 * (1.0 + xy.abs()));
    }

    #[test]
    fn poisson_self_bracket() {
        let g = Grid::uniform(1.0, 10_000).unwrap();
        let n = simulate(&DriverSpec::Poisson { lambda: 5.0 }, &g, PathSeed::new(3, 1, 0)).unwrap();
        assert!(resolves_jumps(&n));
        assert_eq!(discrete_bracket(&n, &n).unwrap().values(), n.values());
    }

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let g = Grid::uniform(1.0, 32).unwrap();
        let spec = DriverSpec::Brownian { sigma: 1.0 };
        let a = simulate(&spec, &g, PathSeed::new(1, 2, 3)).unwrap();
        let b = simulate(&spec, &g, PathSeed::new(1, 2, 3)).unwrap();
        let c = simulate(&spec, &g, PathSeed::new(1, 3, 3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn brownian_increment_variance() {
        let n = 100_000;
        let g = Grid::uniform(1.0, n).unwrap();
        let p = simulate(&DriverSpec::Brownian { sigma: 1.0 }, &g, PathSeed::new(11, 0, 0)).unwrap();
        let dt = 1.0 / n as f64;
        let var = p.increments().iter().map(|d| d * d).sum::<f64>() / n as f64;
        // the estimator has standard deviation sqrt(2/n) dt
        assert!((var - dt).abs() < 5.0 * (2.0 / n as f64).sqrt() * dt, "{var} vs {dt}");
    }

    #[test]
    fn poisson_mean() {
        let g = Grid::uniform(2.0, 200).unwrap();
        let spec = DriverSpec::Poisson { lambda: 1.5 };
        let paths = 2000;
        let mean = (0..paths)
            .map(|i| simulate(&spec, &g, PathSeed::new(5, i, 0)).unwrap().terminal())
            .sum::<f64>()
            / paths as f64;
        let sd = (3.0f64 / paths as f64).sqrt();
        assert!((mean - 3.0).abs() < 5.0 * sd, "{mean}");
    }

    #[test]
    fn driver_parsing() {
        assert_eq!("brownian".parse::<DriverSpec>().unwrap(), DriverSpec::Brownian { sigma: 1.0 });
        assert_eq!("poisson:2.5".parse::<DriverSpec>().unwrap(), DriverSpec::Poisson { lambda: 2.5 });
        assert_eq!("drift:-1".parse::<DriverSpec>().unwrap(), DriverSpec::LinearDrift { a: -1.0 });
        assert!("poisson".parse::<DriverSpec>().is_err());
        assert!("poisson:0".parse::<DriverSpec>().is_err());
        assert!("brownian:-1".parse::<DriverSpec>().is_err());
        assert!("levy:1".parse::<DriverSpec>().is_err());
    }

    #[test]
    fn grid_mismatch() {
        let a = Grid::uniform(1.0, 4).unwrap();
        let b = Grid::uniform(1.0, 5).unwrap();
        let x = simulate(&DriverSpec::LinearDrift { a: 1.0 }, &a, PathSeed::new(0, 0, 0)).unwrap();
        let y = simulate(&DriverSpec::LinearDrift { a: 1.0 }, &b, PathSeed::new(0, 0, 0)).unwrap();
        assert_eq!(discrete_bracket(&x, &y), Err(Error::GridMismatch));
    }
}
