//! Experiment runners behind the CLI subcommands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use smolyak_core::bounds::{theorem_bound, ApproxParams, Form, SchemeAB, Side, Theorem};
use smolyak_core::cubature::{cubature_error_vs_sampling, derive_rule, CubatureRule, Method, RecoveryConfig};
use smolyak_core::grids::{enumerate_grid, grid_cardinality, origin_count};
use smolyak_core::norms::{expansion_values, TensorRule};
use smolyak_core::witness::{holder_spotcheck, lower_bound_demonstration, FoolingFunction, WitnessConfig, WitnessVariant};
use smolyak_core::{GridVariant, QIScheme, Rational, SparseExpansion};

use crate::corpus::CorpusFunction;
use crate::error::{CliError, CliResult};
use crate::io::{number, rational_string, read_scheme_json, Table};

/// Largest number of points of a tensor measurement lattice.
pub const TENSOR_BUDGET: usize = 1 << 22;
/// Points of a Monte Carlo measurement.
pub const MONTE_CARLO_POINTS: usize = 200_000;

/// `faber`, a built-in scheme name, or `file:PATH` with a JSON scheme.
pub fn parse_method(s: &str) -> CliResult<Method> {
    if s == "faber" {
        return Ok(Method::Faber);
    }
    if let Some(path) = s.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("cannot read scheme file '{path}': {e}")))?;
        return Ok(Method::QuasiInterpolation(read_scheme_json(&text)?));
    }
    QIScheme::builtin(s)
        .map(Method::QuasiInterpolation)
        .ok_or_else(|| CliError::Spec(format!("unknown scheme '{s}' (faber|linear|cubic|quintic|file:PATH)")))
}

/// `full`, `interior` or `nu` (support-bounded with budget `nu`).
pub fn parse_variant(s: &str, d: usize, nu: Option<usize>) -> CliResult<GridVariant> {
    let v = match s {
        "full" => GridVariant::Full,
        "interior" => GridVariant::Interior,
        "nu" => GridVariant::SupportBounded(nu.ok_or_else(|| CliError::Spec("variant 'nu' needs --nu".into()))?),
        other => return Err(CliError::Spec(format!("unknown variant '{other}' (full|interior|nu)"))),
    };
    v.validate(d)?;
    Ok(v)
}

pub fn parse_p(s: &str) -> Result<f64, String> {
    match s {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

/// Difference order of the smoothness class a method is analysed in.
pub fn method_order(method: &Method) -> u32 {
    match method {
        Method::Faber => 2,
        Method::QuasiInterpolation(s) => s.order(),
    }
}

pub fn method_name(method: &Method) -> String {
    match method {
        Method::Faber => "faber".into(),
        Method::QuasiInterpolation(s) => format!("qi(r={})", s.r()),
    }
}

/// Active budget of a variant in dimension `d`.
pub fn variant_nu(variant: GridVariant, d: usize) -> usize {
    match variant {
        GridVariant::Full | GridVariant::Interior => d,
        GridVariant::SupportBounded(nu) => nu,
    }
}

/// An error measurement and how it was taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub value: f64,
    pub points: usize,
    /// Lattice level per active axis, or `None` for Monte Carlo.
    pub lattice_level: Option<u32>,
}

/// `‖f − e‖_p` measured on a dyadic tensor lattice over the active
/// coordinates (level `m + 3`, capped by [`TENSOR_BUDGET`]) when at most
/// three are active, otherwise by Monte Carlo. Inactive coordinates are
/// fixed at seeded random values. For `p = ∞` this is a lower estimate of
/// the supremum.
pub fn measure_error(f: &CorpusFunction, e: &SparseExpansion, p: f64, m: u32, seed: u64) -> Measurement {
    let d = f.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut active = f.active.clone();
    if active.is_empty() {
        active.push(0);
    }
    let fixed: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
    if active.len() <= 3 {
        let cap = (TENSOR_BUDGET.trailing_zeros() as usize / active.len()) as u32;
        let level = (m + 3).min(cap);
        let n = 1usize << level;
        let mut points = Vec::with_capacity(d);
        let mut weights = Vec::with_capacity(d);
        for (j, &x) in fixed.iter().enumerate() {
            if active.contains(&j) {
                points.push((0..n).map(|i| i as f64 / n as f64).collect());
                weights.push(vec![1.0 / n as f64; n]);
            } else {
                points.push(vec![x]);
                weights.push(vec![1.0]);
            }
        }
        let rule = TensorRule { points, weights };
        let approx = expansion_values(e, &rule);
        let exact = rule.sample(|x| f.eval(x));
        let diff: Vec<f64> = exact.iter().zip(&approx).map(|(a, b)| a - b).collect();
        return Measurement { value: rule.lp(&diff, p), points: rule.len(), lattice_level: Some(level) };
    }
    let mut x = fixed;
    let mut acc = 0.0f64;
    for _ in 0..MONTE_CARLO_POINTS {
        for &j in &active {
            x[j] = rng.gen::<f64>();
        }
        let err = (f.eval(&x) - e.evaluate(&x)).abs();
        acc = if p.is_infinite() { acc.max(err) } else { acc + err.powf(p) };
    }
    let value = if p.is_infinite() { acc } else { (acc / MONTE_CARLO_POINTS as f64).powf(1.0 / p) };
    Measurement { value, points: MONTE_CARLO_POINTS, lattice_level: None }
}

/// Theorems whose upper and lower bounds apply to a recovery run.
pub fn recovery_theorems(method: &Method, variant: GridVariant) -> (Theorem, Option<Theorem>) {
    match (method, variant) {
        (Method::Faber, GridVariant::Interior) => (Theorem::FaberInterior, Some(Theorem::LowerInterior)),
        (Method::Faber, _) => (Theorem::FaberSupportBounded, Some(Theorem::LowerSupportBounded)),
        (Method::QuasiInterpolation(_), _) => (Theorem::QiRecovery, None),
    }
}

/// The `(a, b)` constants of a scheme at `(α, p)`; `b` is the certified
/// upper bound of the Lebesgue constant.
pub fn scheme_ab(method: &Method, alpha: f64, p: f64) -> CliResult<Option<SchemeAB>> {
    match method {
        Method::Faber => Ok(None),
        Method::QuasiInterpolation(s) => {
            let c = s.constants(alpha, p)?;
            Ok(Some(SchemeAB { a: c.a, b: c.b_upper, order: s.order() }))
        }
    }
}

/// Parameters of a convergence study.
#[derive(Clone, Debug)]
pub struct ConvergenceSpec {
    pub corpus: String,
    pub d: usize,
    pub nu: usize,
    pub alpha: f64,
    pub p: f64,
    pub variant: GridVariant,
    pub method: Method,
    pub m_min: u32,
    pub m_max: u32,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub m: u32,
    pub sample_count: usize,
    pub empirical_error: f64,
    pub upper_bound_refined: f64,
    /// `NaN` where the binomial form's hypothesis fails.
    pub upper_bound_binomial: f64,
    /// `NaN` where no lower bound applies.
    pub lower_bound: f64,
    pub ratio: f64,
}

impl ConvergenceRow {
    /// Does the row respect its refined upper bound?
    pub fn within_bound(&self, tolerance: f64) -> bool {
        self.empirical_error <= self.upper_bound_refined * (1.0 + tolerance)
    }
}

/// The corpus function a convergence spec refers to, certified in the
/// class the method is analysed in.
pub fn spec_function(spec: &ConvergenceSpec) -> CliResult<CorpusFunction> {
    CorpusFunction::build(&spec.corpus, spec.d, spec.nu, spec.alpha, method_order(&spec.method))
}

/// Recovery errors against the theorem bounds for `m = m_min..=m_max`.
pub fn convergence(spec: &ConvergenceSpec) -> CliResult<Vec<ConvergenceRow>> {
    if spec.m_min > spec.m_max {
        return Err(CliError::Spec(format!("empty range m = {}..={}", spec.m_min, spec.m_max)));
    }
    let f = spec_function(spec)?;
    let nu = variant_nu(spec.variant, spec.d);
    if f.active.len() > nu {
        return Err(CliError::Spec(format!(
            "'{}' has {} active variables, more than the budget {nu}",
            f.name,
            f.active.len()
        )));
    }
    if spec.variant == GridVariant::Interior && !f.zero_boundary() {
        return Err(CliError::Spec(format!("'{}' does not vanish on the boundary; the interior operator does not apply", f.name)));
    }
    let (upper, lower) = recovery_theorems(&spec.method, spec.variant);
    let ab = scheme_ab(&spec.method, spec.alpha, spec.p)?;
    let mut rows = Vec::new();
    for m in spec.m_min..=spec.m_max {
        let config = RecoveryConfig::new(spec.d, m, spec.variant, spec.method.clone())?;
        let rec = config.recover(|x: &[f64]| f.eval(x))?;
        let measured = measure_error(&f, &rec.expansion, spec.p, m, spec.seed.wrapping_add(m as u64));
        let params = ApproxParams::new(spec.alpha, spec.p, spec.d as u32, nu as u32, m);
        let bound = |t: Theorem, side: Side, form: Form| {
            theorem_bound(&params, t, side, form, ab).map(|r| r.value * f.seminorm_bound).unwrap_or(f64::NAN)
        };
        let refined = theorem_bound(&params, upper, Side::Upper, Form::Refined, ab)?.value * f.seminorm_bound;
        let row = ConvergenceRow {
            m,
            sample_count: rec.sample_points.len(),
            empirical_error: measured.value,
            upper_bound_refined: refined,
            upper_bound_binomial: bound(upper, Side::Upper, Form::Binomial),
            lower_bound: lower.map_or(f64::NAN, |t| bound(t, Side::Lower, Form::Refined)),
            ratio: measured.value / refined,
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> Table {
    let mut t = Table::new([
        "m",
        "sample_count",
        "empirical_error_p",
        "upper_bound_refined",
        "upper_bound_binomial",
        "lower_bound",
        "ratio",
    ]);
    for r in rows {
        t.push(vec![
            Value::from(r.m),
            Value::from(r.sample_count),
            number(r.empirical_error),
            number(r.upper_bound_refined),
            number(r.upper_bound_binomial),
            number(r.lower_bound),
            number(r.ratio),
        ]);
    }
    t
}

/// Least-squares slope of `log₂(error / m^{ν−1})` against `m` over the
/// upper half of the rows.
pub fn fitted_slope(rows: &[ConvergenceRow], nu: usize) -> f64 {
    let upper = &rows[rows.len() / 2..];
    let pts: Vec<(f64, f64)> = upper
        .iter()
        .map(|r| (r.m as f64, (r.empirical_error / (r.m as f64).powi(nu as i32 - 1)).log2()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Exact-count table of a grid: one row per generating pair.
pub fn grid_rows(d: usize, m: u32, variant: GridVariant) -> CliResult<Table> {
    let points = enumerate_grid(d, m, variant)?;
    Ok(crate::io::grid_table(&points, d))
}

/// Distinct points, generating pairs and the closed-form count of a grid.
pub fn grid_summary(d: usize, m: u32, variant: GridVariant) -> CliResult<(usize, u64, String)> {
    let points = enumerate_grid(d, m, variant)?;
    let card = grid_cardinality(d, m, variant)?;
    Ok((points.len(), origin_count(&points, variant), card.exact.to_string()))
}

/// Results of an `integrate` run.
#[derive(Clone, Debug)]
pub struct IntegrationReport {
    pub rule: CubatureRule,
    pub weight_sum: Rational,
    pub integral: f64,
    pub estimate: f64,
    pub cubature_error: f64,
    pub recovery_l1_error: f64,
}

impl IntegrationReport {
    /// `|I − I_m| ≤ ‖f − R f‖₁ + 1e−9` and, outside the interior variant,
    /// weights summing to 1.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.rule.provenance.variant != GridVariant::Interior && self.weight_sum != Rational::from_integer(1.into()) {
            out.push(format!("weights sum to {}", rational_string(&self.weight_sum)));
        }
        if self.cubature_error > self.recovery_l1_error + 1e-9 {
            out.push(format!(
                "cubature error {:e} exceeds the L1 recovery error {:e}",
                self.cubature_error, self.recovery_l1_error
            ));
        }
        out
    }

    pub fn summary(&self) -> Table {
        let mut t = Table::new(["quantity", "value"]);
        t.push(vec!["rule".into(), Value::String(self.rule.provenance.to_string())]);
        t.push(vec!["points".into(), Value::from(self.rule.len())]);
        t.push(vec!["weight_sum".into(), Value::String(rational_string(&self.weight_sum))]);
        t.push(vec!["integral".into(), number(self.integral)]);
        t.push(vec!["estimate".into(), number(self.estimate)]);
        t.push(vec!["cubature_error".into(), number(self.cubature_error)]);
        t.push(vec!["recovery_l1_error".into(), number(self.recovery_l1_error)]);
        t
    }
}

pub fn integrate(f: &CorpusFunction, config: &RecoveryConfig) -> CliResult<IntegrationReport> {
    let rule = derive_rule(config);
    // Gauss cells aligned with the finest knots of the recovered expansion,
    // capped at about 10^7 nodes.
    let cap = 1usize << (18 / f.active.len().max(1));
    let cells: Vec<usize> = (0..config.d)
        .map(|j| if f.active.contains(&j) { config.method.lattice_size(config.m).clamp(16, cap) } else { 1 })
        .collect();
    let quadrature = TensorRule::gauss(&cells, 6, false);
    let cmp = cubature_error_vs_sampling(&rule, config, |x: &[f64]| f.eval(x), f.integral(), &quadrature)?;
    Ok(IntegrationReport {
        weight_sum: rule.weight_sum(),
        integral: cmp.integral,
        estimate: cmp.estimate,
        cubature_error: cmp.cubature_error,
        recovery_l1_error: cmp.recovery_l1_error,
        rule,
    })
}

/// All bounds of the listed theorems for `m = m_min..=m_max`, one row per
/// (theorem, side, form, m) whose hypotheses hold.
pub fn bounds_table(
    alpha: f64,
    p: f64,
    d: usize,
    nu: usize,
    m_min: u32,
    m_max: u32,
    scheme: Option<SchemeAB>,
) -> (Table, Vec<String>) {
    let mut t = Table::new(["theorem", "side", "form", "alpha", "p", "d", "nu", "m", "value"]);
    let mut violations = Vec::new();
    for m in m_min..=m_max {
        let params = ApproxParams::new(alpha, p, d as u32, nu as u32, m);
        for theorem in Theorem::ALL {
            for side in [Side::Upper, Side::Lower] {
                for form in Form::ALL {
                    if let Ok(r) = theorem_bound(&params, theorem, side, form, scheme) {
                        t.push(vec![
                            Value::String(theorem.name().into()),
                            Value::String(side.name().into()),
                            Value::String(form.name().into()),
                            number(alpha),
                            number(p),
                            Value::from(d),
                            Value::from(nu),
                            Value::from(m),
                            number(r.value),
                        ]);
                    }
                }
            }
        }
        // Row-wise sandwich of the refined forms.
        for (lo, up) in [
            (Theorem::LowerInterior, Theorem::FaberInterior),
            (Theorem::LowerInterior, Theorem::CubatureInterior),
            (Theorem::LowerSupportBounded, Theorem::FaberSupportBounded),
        ] {
            let l = theorem_bound(&params, lo, Side::Lower, Form::Refined, scheme);
            let u = theorem_bound(&params, up, Side::Upper, Form::Refined, scheme);
            if let (Ok(l), Ok(u)) = (l, u) {
                if l.value > u.value {
                    violations.push(format!("m = {m}: {} {:e} > {} {:e}", lo.name(), l.value, up.name(), u.value));
                }
            }
        }
    }
    (t, violations)
}

/// Results of a `witness` run.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub grid_points: usize,
    pub vanishing: bool,
    pub l1_closed: f64,
    /// Quadrature and closed form of the truncated witness.
    pub l1_quadrature: Option<(f64, f64)>,
    pub holder_pass_rate: f64,
    pub holder_relative_failures: usize,
    pub holder_worst_ratio: f64,
    pub theorem_lower: f64,
    pub witness_l1_limit: f64,
    pub certifies: bool,
}

impl WitnessReport {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.vanishing {
            out.push("witness does not vanish on the grid".into());
        }
        if let Some((q, closed)) = self.l1_quadrature {
            if (q - closed).abs() > 1e-9 {
                out.push(format!("L1 quadrature {q:e} differs from the closed form {closed:e}"));
            }
        }
        if self.holder_pass_rate < 1.0 {
            out.push(format!("Hölder spot-check pass rate {}", self.holder_pass_rate));
        }
        out
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["quantity", "value"]);
        t.push(vec!["grid_points".into(), Value::from(self.grid_points)]);
        t.push(vec!["vanishes_on_grid".into(), Value::from(self.vanishing)]);
        t.push(vec!["l1_closed_form".into(), number(self.l1_closed)]);
        t.push(vec!["l1_truncated_quadrature".into(), self.l1_quadrature.map_or(Value::Null, |q| number(q.0))]);
        t.push(vec!["l1_truncated_closed_form".into(), self.l1_quadrature.map_or(Value::Null, |q| number(q.1))]);
        t.push(vec!["holder_pass_rate".into(), number(self.holder_pass_rate)]);
        t.push(vec!["holder_relative_failures".into(), Value::from(self.holder_relative_failures)]);
        t.push(vec!["holder_worst_ratio".into(), number(self.holder_worst_ratio)]);
        t.push(vec!["theorem_lower".into(), number(self.theorem_lower)]);
        t.push(vec!["witness_l1_limit".into(), number(self.witness_l1_limit)]);
        t.push(vec!["certifies_lower_bound".into(), Value::from(self.certifies)]);
        t
    }
}

/// Grid vanishing, `L₁` norms and a Hölder spot-check of a witness.
pub fn witness(config: WitnessConfig, p: f64, trials: usize, seed: u64) -> CliResult<WitnessReport> {
    let f = FoolingFunction::new(config)?;
    let grid_variant = match config.variant {
        WitnessVariant::Interior => GridVariant::Interior,
        WitnessVariant::SupportBounded(nu) => GridVariant::SupportBounded(nu),
    };
    let points = enumerate_grid(config.d, config.m, grid_variant)?;
    let vanishing = points.iter().all(|pt| f.vanishes_exactly(&pt.coords));
    // Quadrature is checked on the witness truncated at n = m + 4, whose
    // pieces are cubic on cells of width 2^{-(m+6)}; the closed form of the
    // same truncation is the reference.
    let quad_cells = 1usize << (config.m + 6);
    let l1_quadrature = if config.d <= 2 && quad_cells.pow(config.d as u32) <= 1 << 20 {
        let short = WitnessConfig::with_n(config.d, config.m, config.m + 4, config.alpha, config.variant)?;
        let g = FoolingFunction::new(short)?;
        let rule = TensorRule::gauss(&vec![quad_cells; config.d], 4, false);
        let values = rule.sample(|x| g.evaluate(x));
        Some((rule.lp(&values, 1.0), g.l1_norm()))
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = holder_spotcheck(|x| f.evaluate(x), config.d, config.alpha, trials, 20.0, || rng.gen::<f64>());
    let demo = lower_bound_demonstration(&config, p)?;
    Ok(WitnessReport {
        grid_points: points.len(),
        vanishing,
        l1_closed: f.l1_norm(),
        l1_quadrature,
        holder_pass_rate: report.pass_rate(),
        holder_relative_failures: report.relative_failures,
        holder_worst_ratio: report.worst_ratio,
        theorem_lower: demo.theorem_lower,
        witness_l1_limit: demo.witness_l1_limit,
        certifies: demo.certifies(),
    })
}
