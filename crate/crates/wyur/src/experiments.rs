//! Sweeps, randomized verification campaigns, and CSV emission.
//!
//! The four builtin panels sweep the ring-state family against the builtin
//! channels. Panels a and c vary the state angle against fixed channels;
//! panel b varies the channel rate q at a fixed angle; panel d compares the
//! sum-form bounds for the two fixed rotations. Custom sweeps reuse the
//! same machinery with a caller-chosen grid, channel pair, and bound list.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::bounds::{evaluate_all, BoundId, BoundKind};
use crate::quantum::{bit_flip, phase_damping, ring_state, rotation_unitaries, KrausChannel};
use crate::{Error, Result};

/// Default number of grid points in a sweep.
pub const DEFAULT_RESOLUTION: usize = 200;

/// Validity tolerance every emitted row is checked against.
const ROW_TOL: f64 = 1e-9;

/// The builtin sweep panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    A,
    B,
    C,
    D,
}

impl Panel {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "a" => Ok(Panel::A),
            "b" => Ok(Panel::B),
            "c" => Ok(Panel::C),
            "d" => Ok(Panel::D),
            other => Err(Error::Parse(format!(
                "unknown panel `{other}`; choose one of a, b, c, d"
            ))),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Panel::A => 'a',
            Panel::B => 'b',
            Panel::C => 'c',
            Panel::D => 'd',
        }
    }
}

/// What the grid parameter means.
#[derive(Debug, Clone)]
pub enum SweepParam {
    /// Grid values are ring-state angles in radians; channels are fixed.
    Theta,
    /// Grid values are channel rates in [0, 1); the angle is fixed.
    Q { theta: f64 },
}

/// A channel that is either fixed for the whole sweep or rebuilt from the
/// swept q value at every grid point.
#[derive(Debug, Clone)]
pub enum ChannelSpec {
    Fixed(KrausChannel),
    PhaseDampingOfQ,
    BitFlipOfQ,
}

impl ChannelSpec {
    fn resolve(&self, q: Option<f64>) -> Result<KrausChannel> {
        match self {
            ChannelSpec::Fixed(ch) => Ok(ch.clone()),
            ChannelSpec::PhaseDampingOfQ => phase_damping(q.ok_or(Error::ParamOutOfRange {
                name: "q",
                detail: "phase_damping(q) needs a q sweep".into(),
            })?),
            ChannelSpec::BitFlipOfQ => bit_flip(q.ok_or(Error::ParamOutOfRange {
                name: "q",
                detail: "bit_flip(q) needs a q sweep".into(),
            })?),
        }
    }

    fn is_fixed(&self) -> bool {
        matches!(self, ChannelSpec::Fixed(_))
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub label: String,
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub channel_a: ChannelSpec,
    pub channel_b: ChannelSpec,
    pub bounds: Vec<BoundId>,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    /// Checks grid shape, parameter ranges, and bound-list consistency.
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::ParamOutOfRange {
                name: "grid",
                detail: "sweep grid must be nonempty".into(),
            });
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::ParamOutOfRange {
                name: "grid",
                detail: "sweep grid must be finite".into(),
            });
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ParamOutOfRange {
                name: "grid",
                detail: "sweep grid must be strictly increasing".into(),
            });
        }
        if let SweepParam::Q { .. } = self.param {
            if self.grid.iter().any(|&q| !(0.0..1.0).contains(&q)) {
                return Err(Error::ParamOutOfRange {
                    name: "grid",
                    detail: "q values must lie in [0, 1)".into(),
                });
            }
        }
        if matches!(self.param, SweepParam::Theta)
            && !(self.channel_a.is_fixed() && self.channel_b.is_fixed())
        {
            return Err(Error::ParamOutOfRange {
                name: "channels",
                detail: "theta sweeps need fixed channels; q-parametric ones need --param q".into(),
            });
        }
        if self.bounds.is_empty() {
            return Err(Error::ParamOutOfRange {
                name: "bounds",
                detail: "at least one bound column is required".into(),
            });
        }
        let kind = self.bounds[0].kind();
        if self.bounds.iter().any(|id| id.kind() != kind) {
            return Err(Error::ParamOutOfRange {
                name: "bounds",
                detail: "a sweep mixes product-form and sum-form bounds; \
                         the uncertainty column would be ambiguous"
                    .into(),
            });
        }
        Ok(())
    }
}

/// One grid point of a sweep: the parameter, the bounded uncertainty, and
/// every requested bound in request order.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param_value: f64,
    pub uncertainty: f64,
    pub bounds: Vec<(BoundId, f64)>,
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

fn evaluate_grid_point(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let (theta, q) = match spec.param {
        SweepParam::Theta => (value, None),
        SweepParam::Q { theta } => (theta, Some(value)),
    };
    let state = ring_state(theta);
    let chan_a = spec.channel_a.resolve(q)?;
    let chan_b = spec.channel_b.resolve(q)?;
    let report = evaluate_all(&state, &chan_a, &chan_b)?;
    let uncertainty = match spec.bounds[0].kind() {
        BoundKind::Product => report.product_uncertainty,
        BoundKind::Sum => report.sum_uncertainty,
    };
    let bounds: Vec<(BoundId, f64)> = spec
        .bounds
        .iter()
        .map(|&id| (id, report.value(id).expect("report carries every id")))
        .collect();
    for (id, v) in &bounds {
        if *v > uncertainty + ROW_TOL {
            return Err(Error::ParamOutOfRange {
                name: "row",
                detail: format!("bound {id} exceeds the uncertainty at grid value {value}"),
            });
        }
    }
    Ok(SweepRow {
        param_value: value,
        uncertainty,
        bounds,
    })
}

/// Evaluates a sweep, in parallel across grid points; rows come back in
/// grid order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid
        .par_iter()
        .map(|&value| evaluate_grid_point(spec, value))
        .collect()
}

/// Builds the SweepSpec for a builtin panel at the given resolution.
pub fn panel_spec(panel: Panel, resolution: usize) -> Result<SweepSpec> {
    if resolution < 2 {
        return Err(Error::ParamOutOfRange {
            name: "resolution",
            detail: format!("need at least 2 grid points, got {resolution}"),
        });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let product_columns = vec![BoundId::Thm1Proof, BoundId::Thm2, BoundId::Zhou];
    let (u, v) = rotation_unitaries();
    let spec = match panel {
        Panel::A => SweepSpec {
            label: "panel a".into(),
            param: SweepParam::Theta,
            grid: linspace(0.0, two_pi, resolution),
            channel_a: ChannelSpec::Fixed(phase_damping(0.5)?),
            channel_b: ChannelSpec::Fixed(bit_flip(0.5)?),
            bounds: product_columns,
            output_path: None,
        },
        Panel::B => SweepSpec {
            label: "panel b".into(),
            param: SweepParam::Q {
                theta: std::f64::consts::FRAC_PI_4,
            },
            grid: linspace(0.0, 0.99, resolution),
            channel_a: ChannelSpec::PhaseDampingOfQ,
            channel_b: ChannelSpec::BitFlipOfQ,
            bounds: product_columns,
            output_path: None,
        },
        Panel::C => SweepSpec {
            label: "panel c".into(),
            param: SweepParam::Theta,
            grid: linspace(0.0, two_pi, resolution),
            channel_a: ChannelSpec::Fixed(u),
            channel_b: ChannelSpec::Fixed(v),
            bounds: product_columns,
            output_path: None,
        },
        Panel::D => SweepSpec {
            label: "panel d".into(),
            param: SweepParam::Theta,
            grid: linspace(0.0, two_pi, resolution),
            channel_a: ChannelSpec::Fixed(u),
            channel_b: ChannelSpec::Fixed(v),
            bounds: vec![
                BoundId::Thm3Desc,
                BoundId::Thm3Id,
                BoundId::FuPerTerm,
                BoundId::FuGlobal,
            ],
            output_path: None,
        },
    };
    Ok(spec)
}

/// Runs one of the builtin panels.
pub fn run_panel(panel: Panel, resolution: usize) -> Result<Vec<SweepRow>> {
    run_sweep(&panel_spec(panel, resolution)?)
}

/// Renders rows as CSV: header `param,uncertainty,<bounds...>`, 12
/// significant digits, LF line endings. Byte-deterministic for equal input.
pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let first = rows.first().ok_or(Error::ParamOutOfRange {
        name: "rows",
        detail: "cannot emit an empty sweep".into(),
    })?;
    let mut out = String::from("param,uncertainty");
    for (id, _) in &first.bounds {
        out.push(',');
        out.push_str(id.as_str());
    }
    out.push('\n');
    for row in rows {
        out.push_str(&crate::fmt12(row.param_value));
        out.push(',');
        out.push_str(&crate::fmt12(row.uncertainty));
        for (_, v) in &row.bounds {
            out.push(',');
            out.push_str(&crate::fmt12(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes [`csv_string`] to a file.
pub fn emit_csv(rows: &[SweepRow], path: &std::path::Path) -> Result<()> {
    let text = csv_string(rows)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Outcome tally for one invariant across a verification campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckTally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Smallest slack seen; negative values below the tolerance are failures.
    pub worst_slack: f64,
    /// Trial index and state seed of the first failure, for reproduction.
    pub first_failure: Option<(usize, u64)>,
}

impl CheckTally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            worst_slack: f64::INFINITY,
            first_failure: None,
        }
    }

    fn record(&mut self, slack: f64, tol: f64, trial: usize, seed: u64) {
        self.worst_slack = self.worst_slack.min(slack);
        if slack >= -tol {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some((trial, seed));
            }
        }
    }
}

/// Aggregated result of [`verify_random`].
#[derive(Debug, Clone)]
pub struct VerificationSummary {
    pub dim: usize,
    pub n_kraus: usize,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckTally>,
    /// Instances where thm2 improved on zhou by more than 1e-6.
    pub improved_count: usize,
}

impl VerificationSummary {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0
    }
}

impl std::fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "verify: dim={} n_kraus={} trials={} seed={}",
            self.dim, self.n_kraus, self.trials, self.seed
        )?;
        for check in &self.checks {
            write!(
                f,
                "  {:<42} pass={:<6} fail={:<6} worst slack={:+.3e}",
                check.name, check.passed, check.failed, check.worst_slack
            )?;
            match check.first_failure {
                Some((trial, seed)) => writeln!(f, "  first failure: trial {trial}, seed {seed}")?,
                None => writeln!(f)?,
            }
        }
        writeln!(
            f,
            "  thm2 improved on zhou by >1e-6 on {}/{} instances",
            self.improved_count, self.trials
        )?;
        writeln!(f, "  total violations: {}", self.total_violations())
    }
}

/// splitmix64-style finalizer used to derive independent per-trial seeds.
fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct TrialSlacks {
    state_seed: u64,
    product_validity: f64,
    sum_validity: f64,
    proof_over_zhou: f64,
    thm2_over_proof: f64,
    perterm_over_global: f64,
    saturation_gap: f64,
    min_bound: f64,
    improved: bool,
}

fn run_trial(dim: usize, n_kraus: usize, seed: u64, trial: usize) -> Result<TrialSlacks> {
    let t = trial as u64;
    let state_seed = derive_seed(seed, 3 * t);
    let state = crate::quantum::random_state(dim, state_seed)?;
    let chan_a = crate::quantum::random_channel(dim, n_kraus, derive_seed(seed, 3 * t + 1))?;
    let chan_b = crate::quantum::random_channel(dim, n_kraus, derive_seed(seed, 3 * t + 2))?;
    #[allow(unused_mut)]
    let mut report = evaluate_all(&state, &chan_a, &chan_b)?;
    #[cfg(feature = "fault-inject")]
    {
        for (id, v) in report.bounds.iter_mut() {
            if *id == BoundId::Zhou {
                *v += 1e-3;
            }
        }
    }

    let value = |id: BoundId| report.value(id).expect("full report");
    let product_validity = report
        .bounds
        .iter()
        .filter(|(id, _)| id.kind() == BoundKind::Product)
        .map(|(_, v)| report.product_uncertainty - v)
        .fold(f64::INFINITY, f64::min);
    let sum_validity = report
        .bounds
        .iter()
        .filter(|(id, _)| id.kind() == BoundKind::Sum)
        .map(|(_, v)| report.sum_uncertainty - v)
        .fold(f64::INFINITY, f64::min);
    let min_bound = report
        .bounds
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::INFINITY, f64::min);
    Ok(TrialSlacks {
        state_seed,
        product_validity,
        sum_validity,
        proof_over_zhou: value(BoundId::Thm1Proof) - value(BoundId::Zhou),
        thm2_over_proof: value(BoundId::Thm2) - value(BoundId::Thm1Proof),
        perterm_over_global: value(BoundId::FuPerTerm) - value(BoundId::FuGlobal),
        saturation_gap: -(value(BoundId::Thm3Id) - report.sum_uncertainty).abs(),
        min_bound,
        improved: value(BoundId::Thm2) - value(BoundId::Zhou) > 1e-6,
    })
}

/// Evaluates every invariant on seeded random instances and tallies the
/// outcomes. Violations are reported in the summary, not raised as errors.
pub fn verify_random(
    dim: usize,
    n_kraus: usize,
    trials: usize,
    seed: u64,
) -> Result<VerificationSummary> {
    if !(2..=6).contains(&dim) {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            detail: format!("verification supports dim in [2, 6], got {dim}"),
        });
    }
    if !(1..=4).contains(&n_kraus) {
        return Err(Error::ParamOutOfRange {
            name: "n_kraus",
            detail: format!("verification supports n_kraus in [1, 4], got {n_kraus}"),
        });
    }
    if trials == 0 {
        return Err(Error::ParamOutOfRange {
            name: "trials",
            detail: "at least one trial is required".into(),
        });
    }

    let results: Vec<TrialSlacks> = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(dim, n_kraus, seed, trial))
        .collect::<Result<Vec<_>>>()?;

    let mut checks = vec![
        CheckTally::new("product bounds below product uncertainty"),
        CheckTally::new("sum bounds below sum uncertainty"),
        CheckTally::new("thm1_proof dominates zhou"),
        CheckTally::new("thm2 dominates thm1_proof"),
        CheckTally::new("fu per-term dominates fu global"),
        CheckTally::new("thm3_id saturates the sum uncertainty"),
        CheckTally::new("bounds are nonnegative"),
    ];
    let mut improved_count = 0;
    for (trial, r) in results.iter().enumerate() {
        checks[0].record(r.product_validity, 1e-9, trial, r.state_seed);
        checks[1].record(r.sum_validity, 1e-9, trial, r.state_seed);
        checks[2].record(r.proof_over_zhou, 1e-12, trial, r.state_seed);
        checks[3].record(r.thm2_over_proof, 1e-12, trial, r.state_seed);
        checks[4].record(r.perterm_over_global, 1e-12, trial, r.state_seed);
        checks[5].record(r.saturation_gap, 1e-9, trial, r.state_seed);
        checks[6].record(r.min_bound, 1e-12, trial, r.state_seed);
        if r.improved {
            improved_count += 1;
        }
    }

    Ok(VerificationSummary {
        dim,
        n_kraus,
        trials,
        seed,
        checks,
        improved_count,
    })
}

/// Runs `f` under the thread cap requested by the WYUR_THREADS environment
/// variable; 0 or an unset variable means automatic sizing.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let limit = std::env::var("WYUR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    if let Some(n) = limit {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            return pool.install(f);
        }
    }
    f()
}
