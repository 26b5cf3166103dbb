//! Verification suites: exact algebraic identities, the logarithm theorem,
//! pathwise identities on simulated paths, and the flow comparison.
//!
//! Every check produces a [`VerificationReport`]. Exact checks report the
//! largest coefficient discrepancy (converted to `f64`) against a tolerance
//! of zero.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coeff::{descent_coefficient, to_f64, Coeff};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ito::{matrix_exp, matrix_ito_taylor, matrix_log};
use crate::numeric::{
    discrete_bracket, flow_study, resolves_jumps, simulate, Binding, DriverSpec, EvalPlan, FlowProblem, Grid,
    PathSeed, SamplePath,
};
use crate::qshuffle::{qsh, qsh_via_surjections};
use crate::surjection::{
    all_surjections, diamond_with, exp_element, identity_series, iota, log_identity_closed_form,
    log_identity_series, log_identity_subset_form, superset_coefficient_sum, Composition, DiamondStrategy,
    SurjElement, Surjection,
};
use crate::word::{bracket_words, BracketWord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub test: String,
    pub max_abs_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub grid_points: Option<usize>,
    pub paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl VerificationReport {
    fn new(test: &str, max_abs_err: f64, tolerance: f64) -> Self {
        VerificationReport {
            test: test.into(),
            max_abs_err,
            tolerance,
            pass: max_abs_err <= tolerance,
            seed: None,
            grid_points: None,
            paths: None,
            timestamp: None,
        }
    }

    fn exact(test: &str, max_abs_err: f64) -> Self {
        VerificationReport::new(test, max_abs_err, 0.0)
    }

    fn with_run(mut self, seed: u64, grid_points: usize, paths: usize) -> Self {
        self.seed = Some(seed);
        self.grid_points = Some(grid_points);
        self.paths = Some(paths);
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max err {:.3e} (tolerance {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.test,
            self.max_abs_err,
            self.tolerance
        )?;
        if let Some(seed) = self.seed {
            write!(f, " seed {seed}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Theorem,
    Pathwise,
    Flow,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "theorem" => Ok(Suite::Theorem),
            "pathwise" => Ok(Suite::Pathwise),
            "flow" => Ok(Suite::Flow),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite {other:?} (expected algebra, theorem, pathwise or flow)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Largest grade (or total weight) of the exact checks.
    pub grade: usize,
    pub seed: u64,
    pub steps: usize,
    pub paths: usize,
    pub order: usize,
    /// Suppresses timestamps so repeated runs are byte-identical.
    pub deterministic: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { grade: 4, seed: 42, steps: 4096, paths: 100, order: 3, deterministic: false }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = match suite {
        Suite::Algebra => algebra_suite(cfg.grade)?,
        Suite::Theorem => theorem_suite(cfg.grade)?,
        Suite::Pathwise => pathwise_suite(cfg.seed, cfg.steps, cfg.paths)?,
        Suite::Flow => flow_suite(cfg.seed, cfg.steps, cfg.paths, cfg.order)?,
    };
    if !cfg.deterministic {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        for r in &mut reports {
            r.timestamp = Some(now.to_string());
        }
    }
    Ok(reports)
}

fn expansion_gap(a: &Expansion, b: &Expansion) -> f64 {
    a.sub(b).iter().map(|(_, c)| to_f64(&c.abs())).fold(0.0, f64::max)
}

fn element_gap(a: &SurjElement, b: &SurjElement) -> f64 {
    a.sub(b).iter().map(|(_, c)| to_f64(&c.abs())).fold(0.0, f64::max)
}

/// Bracket words over `letters` with weight at most `max_weight`.
fn words_up_to(letters: u32, max_weight: usize) -> Vec<BracketWord> {
    (0..=max_weight).flat_map(|w| bracket_words(letters, w)).collect()
}

/// Recursive quasi-shuffle against the surjection sum, on every pair of
/// words over three letters with total weight at most `max_weight`.
pub fn check_qsh_definitions(max_weight: usize) -> Result<VerificationReport> {
    let words = words_up_to(3, max_weight);
    let mut worst = 0.0f64;
    for u in &words {
        for v in words.iter().filter(|v| u.weight() + v.weight() <= max_weight) {
            worst = worst.max(expansion_gap(&qsh(u, v)?, &qsh_via_surjections(u, v)?));
        }
    }
    Ok(VerificationReport::exact(&format!("qsh recursion = surjection sum (weight <= {max_weight})"), worst))
}

/// Commutativity and associativity of the quasi-shuffle.
pub fn check_qsh_axioms(max_weight: usize) -> Result<VerificationReport> {
    let words = words_up_to(2, max_weight.min(4));
    let mut worst = 0.0f64;
    for u in &words {
        for v in words.iter().filter(|v| u.weight() + v.weight() <= max_weight) {
            let uv = qsh(u, v)?;
            worst = worst.max(expansion_gap(&uv, &qsh(v, u)?));
            for w in words.iter().filter(|w| u.weight() + v.weight() + w.weight() <= max_weight) {
                let left = crate::qshuffle::qsh_expansions(&uv, &Expansion::from_word(w.clone()))?;
                let right = crate::qshuffle::qsh_expansions(&Expansion::from_word(u.clone()), &qsh(v, w)?)?;
                worst = worst.max(expansion_gap(&left, &right));
            }
        }
    }
    Ok(VerificationReport::exact(&format!("qsh commutative and associative (weight <= {max_weight})"), worst))
}

/// The merge computation of `◇` against the brute-force filter, and
/// associativity of `◇`.
pub fn check_diamond(max_grade: usize) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    let fs: Vec<Surjection> = (0..=max_grade).flat_map(all_surjections).collect();
    for f in &fs {
        for g in fs.iter().filter(|g| f.arity() + g.arity() <= max_grade) {
            let merge = diamond_with(f, g, DiamondStrategy::Merge)?;
            let brute = diamond_with(f, g, DiamondStrategy::BruteForce)?;
            worst = worst.max(element_gap(&merge, &brute));
        }
    }
    let small: Vec<Surjection> = (1..=max_grade.min(4)).flat_map(all_surjections).collect();
    for f in &small {
        for g in small.iter().filter(|g| f.arity() + g.arity() < max_grade) {
            let fg = diamond_with(f, g, DiamondStrategy::Merge)?;
            for h in small.iter().filter(|h| f.arity() + g.arity() + h.arity() <= max_grade) {
                let left = fg.diamond(&SurjElement::from_surjection(h.clone()))?;
                let right = SurjElement::from_surjection(f.clone()).diamond(&diamond_with(g, h, DiamondStrategy::Merge)?)?;
                worst = worst.max(element_gap(&left, &right));
            }
        }
    }
    Ok(VerificationReport::exact(&format!("diamond merge = brute force, associative (grade <= {max_grade})"), worst))
}

/// `ι(1_n̄) ◇ ι(1_m̄) = ι(1_{n̄ m̄})` for compositions of total size at most
/// `max_total`.
pub fn check_iota_morphism(max_total: usize) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    for total in 0..=max_total {
        for a_size in 0..=total {
            for a in Composition::all_of(a_size) {
                for b in Composition::all_of(total - a_size) {
                    let lhs = iota(&a)?.diamond(&iota(&b)?)?;
                    let rhs = iota(&a.concat(&b))?;
                    worst = worst.max(element_gap(&lhs, &rhs));
                }
            }
        }
    }
    Ok(VerificationReport::exact(&format!("iota is a morphism (total <= {max_total})"), worst))
}

fn unit_checks() -> Result<VerificationReport> {
    let e = BracketWord::empty();
    let mut worst = expansion_gap(&qsh(&e, &e)?, &Expansion::one());
    let u = Surjection::unit();
    worst = worst.max(element_gap(&diamond_with(&u, &u, DiamondStrategy::Merge)?, &SurjElement::one()));
    Ok(VerificationReport::exact("units", worst))
}

pub fn algebra_suite(grade: usize) -> Result<Vec<VerificationReport>> {
    let mut out = vec![unit_checks()?];
    if grade == 0 {
        return Ok(out);
    }
    out.push(check_qsh_definitions(grade)?);
    out.push(check_qsh_axioms(grade)?);
    out.push(check_diamond(grade.min(5))?);
    out.push(check_iota_morphism(grade)?);
    Ok(out)
}

/// The series, subset and closed forms of `log(I)` agree through `grade`.
pub fn check_log_forms(grade: usize) -> Result<VerificationReport> {
    let closed = log_identity_closed_form(grade)?;
    let worst = element_gap(&log_identity_series(grade)?, &closed)
        .max(element_gap(&log_identity_subset_form(grade)?, &closed));
    Ok(VerificationReport::exact(&format!("log series = subset form = closed form (grade <= {grade})"), worst))
}

pub fn check_exp_log(grade: usize) -> Result<VerificationReport> {
    let mut expected = identity_series(grade);
    expected.add_term(Surjection::unit(), Coeff::from_integer(1.into()));
    let worst = element_gap(&exp_element(&log_identity_closed_form(grade)?, grade)?, &expected);
    Ok(VerificationReport::exact(&format!("exp(log I) = I (grade <= {grade})"), worst))
}

pub fn check_matrix_exp_log(dim: usize, order: usize) -> Result<VerificationReport> {
    let lhs = matrix_exp(&matrix_log(dim, order)?, order)?;
    let rhs = matrix_ito_taylor(dim, order)?;
    let worst = lhs
        .entries
        .iter()
        .flatten()
        .zip(rhs.entries.iter().flatten())
        .map(|(a, b)| expansion_gap(a, b))
        .fold(0.0, f64::max);
    Ok(VerificationReport::exact(&format!("exp(matrix log) = Ito-Taylor (dim {dim}, order {order})"), worst))
}

/// `Σ_{I ⊆ J} (-1)^{|J|}/(|J|+1) = (-1)^{|I|} / (n C(n-1, |I|))` for every
/// `I ⊆ [n-1]`, `n <= max_n`.
pub fn check_superset_sums(max_n: usize) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    for n in 1..=max_n {
        for mask in 0u32..(1 << (n - 1)) {
            let set: Vec<usize> = (0..n - 1).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            let gap = superset_coefficient_sum(n, &set)? - descent_coefficient(n, set.len());
            worst = worst.max(to_f64(&gap.abs()));
        }
    }
    Ok(VerificationReport::exact(&format!("superset sums = closed-form coefficients (n <= {max_n})"), worst))
}

pub fn theorem_suite(grade: usize) -> Result<Vec<VerificationReport>> {
    let mut out = vec![unit_checks()?];
    if grade == 0 {
        return Ok(out);
    }
    out.push(check_log_forms(grade)?);
    out.push(check_exp_log(grade)?);
    out.push(check_superset_sums((grade + 2).min(10))?);
    out.push(check_matrix_exp_log(2, grade.min(3))?);
    Ok(out)
}

/// Brownian, Poisson and linear-drift paths bound to letters 1, 2, 3.
pub fn mixed_binding(grid: &Grid, seed: u64, path: u64) -> Result<Binding> {
    let specs = [
        DriverSpec::Brownian { sigma: 1.0 },
        DriverSpec::Poisson { lambda: 3.0 },
        DriverSpec::LinearDrift { a: 1.0 },
    ];
    specs
        .iter()
        .enumerate()
        .map(|(k, s)| Ok((k as u32 + 1, simulate(s, grid, PathSeed::new(seed, path, k as u64))?)))
        .collect()
}

/// Terminal values of many words at once, sharing prefixes.
pub fn evaluate_words(words: &[BracketWord], binding: &Binding) -> Result<HashMap<BracketWord, f64>> {
    let exprs: Vec<Expansion> = words.iter().map(|w| Expansion::from_word(w.clone())).collect();
    let refs: Vec<&Expansion> = exprs.iter().collect();
    let vals = EvalPlan::new(&refs).run_binding(binding)?;
    Ok(words.iter().cloned().zip(vals).collect())
}

fn value_of(e: &Expansion, vals: &HashMap<BracketWord, f64>) -> (f64, f64) {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (w, c) in e {
        let t = to_f64(c) * vals[w];
        sum += t;
        scale += t.abs();
    }
    (sum, scale)
}

/// Largest relative defect of `I_u I_v = I_{u ⨝ v}` over word pairs of
/// weight at most `max_weight` each, on one path bundle.
pub fn pathwise_qsh_defect(binding: &Binding, letters: u32, max_weight: usize) -> Result<f64> {
    let words = words_up_to(letters, 2 * max_weight);
    let vals = evaluate_words(&words, binding)?;
    let short: Vec<&BracketWord> = words.iter().filter(|w| w.weight() <= max_weight).collect();
    let mut worst = 0.0f64;
    for u in &short {
        for v in &short {
            let (lhs, scale) = value_of(&qsh(u, v)?, &vals);
            let rhs = vals[*u] * vals[*v];
            worst = worst.max((lhs - rhs).abs() / scale.max(rhs.abs()).max(1.0));
        }
    }
    Ok(worst)
}

/// `B · ∫CD = ∫BCD + ∫CBD + ∫CDB + ∫[B,C]D + ∫C[B,D]` with `B, C, D` the
/// letters 1, 2, 3: the symbolic product must be exactly these five words,
/// and the identity must hold on the path. Returns the relative defect.
pub fn five_term_defect(binding: &Binding) -> Result<f64> {
    let p = |s: &str| BracketWord::parse_literal(s);
    let rhs = Expansion::from_terms(
        ["1.2.3", "2.1.3", "2.3.1", "[1,2].3", "2.[1,3]"]
            .into_iter()
            .map(|s| Ok((p(s)?, Coeff::from_integer(1.into()))))
            .collect::<Result<Vec<_>>>()?,
    );
    let product = qsh(&p("1")?, &p("2.3")?)?;
    if product != rhs {
        return Ok(f64::INFINITY);
    }
    let words: Vec<BracketWord> = rhs.words().cloned().chain([p("1")?, p("2.3")?]).collect();
    let vals = evaluate_words(&words, binding)?;
    let (sum, scale) = value_of(&rhs, &vals);
    let prod = vals[&p("1")?] * vals[&p("2.3")?];
    Ok((sum - prod).abs() / scale.max(prod.abs()).max(1.0))
}

/// Returns `(max |[[N,N],N]_T − N_T|, resolving paths)` over Poisson paths.
pub fn poisson_triple_bracket(seed: u64, steps: usize, paths: usize, lambda: f64) -> Result<(f64, usize)> {
    let grid = Grid::uniform(1.0, steps)?;
    let triple = BracketWord::parse_literal("[1,1,1]")?;
    let mut worst = 0.0f64;
    let mut resolving = 0;
    for i in 0..paths as u64 {
        let n = simulate(&DriverSpec::Poisson { lambda }, &grid, PathSeed::new(seed, i, 0))?;
        if !resolves_jumps(&n) {
            continue;
        }
        resolving += 1;
        let mut b = Binding::new();
        b.insert(1, n.clone());
        let v = crate::numeric::evaluate_word(&triple, &b)?;
        worst = worst.max((v - n.terminal()).abs());
    }
    Ok((worst, resolving))
}

/// Mean `|[[W,W],W]_T|` on a coarse grid and on its 4× refinement, over
/// Brownian paths sampled on the fine grid. Returns `(coarse, fine)`.
pub fn brownian_triple_bracket(seed: u64, coarse_steps: usize, paths: usize) -> Result<(f64, f64)> {
    let fine = Grid::uniform(1.0, 4 * coarse_steps)?;
    let coarse = Grid::uniform(1.0, coarse_steps)?;
    let triple = BracketWord::parse_literal("[1,1,1]")?;
    let (mut sc, mut sf) = (0.0, 0.0);
    for i in 0..paths as u64 {
        let w = simulate(&DriverSpec::Brownian { sigma: 1.0 }, &fine, PathSeed::new(seed, i, 0))?;
        let sub: Vec<f64> = w.values().iter().step_by(4).copied().collect();
        let wc = SamplePath::new(coarse.clone(), sub)?;
        let eval = |p: SamplePath| -> Result<f64> {
            let mut b = Binding::new();
            b.insert(1, p);
            crate::numeric::evaluate_word(&triple, &b)
        };
        sc += eval(wc)?.abs();
        sf += eval(w)?.abs();
    }
    Ok((sc / paths as f64, sf / paths as f64))
}

fn bracket_laws(binding: &Binding) -> Result<f64> {
    let (x, y, z) = (&binding[&1], &binding[&2], &binding[&3]);
    let sym = discrete_bracket(x, y)?;
    let sym2 = discrete_bracket(y, x)?;
    let a = discrete_bracket(x, &discrete_bracket(y, z)?)?;
    let b = discrete_bracket(&discrete_bracket(x, y)?, z)?;
    let gap = |p: &SamplePath, q: &SamplePath| {
        p.values().iter().zip(q.values()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
    };
    Ok(gap(&sym, &sym2).max(gap(&a, &b)))
}

pub fn pathwise_suite(seed: u64, steps: usize, paths: usize) -> Result<Vec<VerificationReport>> {
    let grid = Grid::uniform(1.0, steps)?;
    let points = steps + 1;
    let binding = mixed_binding(&grid, seed, 0)?;
    let mut out = vec![
        VerificationReport::new("pathwise quasi-shuffle identity (weights <= 3)", pathwise_qsh_defect(&binding, 3, 3)?, 1e-9)
            .with_run(seed, points, 1),
        VerificationReport::new("five-term product B*Y", five_term_defect(&binding)?, 1e-9).with_run(seed, points, 1),
        VerificationReport::new("bracket symmetry and associativity", bracket_laws(&binding)?, 1e-12)
            .with_run(seed, points, 1),
    ];
    let runs = paths.max(1);
    let (worst, resolving) = poisson_triple_bracket(seed, steps, runs, 2.0)?;
    let mut jump = VerificationReport::new("[[N,N],N] = N on jump-resolving grids", worst, 0.0).with_run(seed, points, resolving);
    jump.pass &= resolving > 0;
    out.push(jump);
    let (coarse, fine) = brownian_triple_bracket(seed, (steps / 4).max(1), runs)?;
    // ratio shortfall below 2: zero when the bracket shrinks by at least 2×
    let shortfall = (2.0 - coarse / fine).max(0.0);
    out.push(
        VerificationReport::new("[[W,W],W] shrinks >= 2x under 4x refinement", shortfall, 0.0).with_run(seed, points, runs),
    );
    Ok(out)
}

pub fn flow_suite(seed: u64, steps: usize, paths: usize, order: usize) -> Result<Vec<VerificationReport>> {
    let problem = FlowProblem::rotation_shear(0.1, steps)?;
    let study = flow_study(&problem, order, paths, seed)?;
    let points = steps + 1;
    let mut out = Vec::new();
    // increase of the error from one order to the next; zero when decreasing
    let worst_increase = study
        .orders
        .windows(2)
        .map(|w| w[1].log_error - w[0].log_error)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut dec = VerificationReport::new("exp(log) strong error strictly decreasing in order", worst_increase.max(0.0), 0.0)
        .with_run(seed, points, paths);
    dec.pass = study.orders.windows(2).all(|w| w[1].log_error < w[0].log_error);
    out.push(dec);
    let graded = study.orders.iter().map(|o| o.graded_identity_error).fold(0.0, f64::max);
    out.push(
        VerificationReport::new("graded exp(log) = Ito-Taylor on paths", graded, 1e-10).with_run(seed, points, paths),
    );
    Ok(out)
}
