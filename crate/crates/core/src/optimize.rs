//! Multi-restart descent on frames.
//!
//! Every restart runs Armijo gradient descent on the real and imaginary
//! parts of the frame `W`, with central finite-difference gradients, and
//! pulls `W` back onto its mode after each step. The constrained problem is
//! handled by a quadratic penalty with an increasing weight schedule.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{action, chain_sums, critical_mu, global_bound, ActionReport, BOUND_SLACK};
use crate::error::{Error, Result};
use crate::fermionic::{
    even_spread_frame, from_span, gram, orthonormalize_frame, random_negative_frame,
    random_operator_with, Mode, SpanRepresentation,
};
use crate::io::{FrameJson, ScanRow};
use crate::space::SpaceTimeStructure;
use crate::transforms::{spread_frame, spread_point};
use crate::{CMatrix, C64};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "IPVAR_THREADS";

/// Window (in iterations) of the stopping test.
const STALL_WINDOW: usize = 20;
/// Relative part of the stopping test.
const RELATIVE_STOP: f64 = 1e-10;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 50;
const MAX_STEP: f64 = 1e3;
/// Gradients below this norm are finite-difference noise.
const GRAD_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Objective {
    /// Minimize `S_μ[P]`.
    Auxiliary { mu: f64 },
    /// Minimize `Σ|A_xy²|` subject to `Σ|A_xy|² = κ`.
    Constrained { kappa: f64 },
}

/// Penalty weights `w0, w0·factor, ...` for `loops` outer iterations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenaltySchedule {
    pub initial_weight: f64,
    pub factor: f64,
    pub loops: usize,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self {
            initial_weight: 10.0,
            factor: 10.0,
            loops: 6,
        }
    }
}

impl PenaltySchedule {
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.loops).map(|k| self.initial_weight * self.factor.powi(k as i32))
    }
}

fn default_objective() -> Objective {
    Objective::Auxiliary { mu: 0.5 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeConfig {
    pub m: usize,
    pub n: usize,
    pub f: usize,
    pub mode: Mode,
    #[serde(default = "default_objective")]
    pub objective: Objective,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub step_init: f64,
    pub grad_eps: f64,
    pub tol_action: f64,
    pub penalty: PenaltySchedule,
    /// Adds one deterministic start with the particles evenly spread.
    pub spread_start: bool,
    pub record_history: bool,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            m: 2,
            n: 1,
            f: 1,
            mode: Mode::Projector,
            objective: default_objective(),
            restarts: 32,
            seed: 0,
            max_iters: 20_000,
            step_init: 0.1,
            grad_eps: 1e-5,
            tol_action: 1e-12,
            penalty: PenaltySchedule::default(),
            spread_start: true,
            record_history: false,
        }
    }
}

impl MinimizeConfig {
    pub fn structure(&self) -> Result<SpaceTimeStructure> {
        SpaceTimeStructure::new(self.m, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        self.structure()?;
        let bad = |msg: &str| Err(Error::InvalidInput(msg.into()));
        if self.f == 0 {
            return bad("f must be at least 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        for (name, v) in [
            ("step_init", self.step_init),
            ("grad_eps", self.grad_eps),
            ("tol_action", self.tol_action),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        if self.mode == Mode::Projector && self.f > self.n * self.m {
            return Err(Error::Infeasible(format!(
                "no fermionic projector of rank {} exists for n*m = {}",
                self.f,
                self.n * self.m
            )));
        }
        match self.objective {
            Objective::Auxiliary { mu } if !mu.is_finite() => bad("mu must be finite"),
            Objective::Constrained { kappa } if !(kappa > 0.0 && kappa.is_finite()) => {
                bad("kappa must be positive")
            }
            _ => {
                let p = self.penalty;
                if p.loops == 0 || !(p.initial_weight > 0.0) || !(p.factor >= 1.0) {
                    return bad("penalty schedule needs loops >= 1, weight > 0, factor >= 1");
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The stopping test or the line search ended the descent.
    Converged,
    MaxIterations,
    /// Constrained mode: the best run misses `κ` by more than `1e-5 κ`.
    ConstraintNotMet,
    /// No start produced a finite objective.
    NoFeasibleStart,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub index: usize,
    /// `random` or `spread` or `seeded`.
    pub start: String,
    pub iterations: usize,
    pub final_value: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub status: Status,
    pub best_restart: usize,
    pub best_frame: FrameJson,
    /// `S_μ[P]` at the best frame; in constrained mode `μ = μ̂`.
    pub best_action: f64,
    /// The minimized functional: `S_μ` or `Σ|A_xy²|`.
    pub objective_value: f64,
    pub constraint_value: f64,
    /// `|Σ|A_xy|² - κ|`, constrained mode only.
    pub constraint_residual: Option<f64>,
    /// Lagrange multiplier estimate `-2w(Σ|A_xy|² - κ)` at the final weight.
    pub mu_hat: Option<f64>,
    /// `min_x |Tr(E_x P)|`.
    pub min_local_trace: f64,
    pub report: ActionReport,
    pub restarts: Vec<RestartTrace>,
    pub warnings: Vec<String>,
    pub wall_time: f64,
}

impl MinimizeResult {
    pub fn best_span(&self) -> Result<SpanRepresentation> {
        self.best_frame.to_span()
    }

    pub fn best_operator(&self, st: &SpaceTimeStructure) -> Result<CMatrix> {
        Ok(from_span(st.space(), &self.best_span()?)?.into_matrix())
    }
}

#[derive(Clone, Copy, Debug)]
enum Functional {
    Action(f64),
    Penalty { kappa: f64, weight: f64 },
}

/// Frame-to-objective map for one mode and functional.
struct Problem<'a> {
    st: &'a SpaceTimeStructure,
    mode: Mode,
    f: usize,
    functional: Functional,
}

impl Problem<'_> {
    fn operator(&self, w: &CMatrix) -> Result<CMatrix> {
        let span = SpanRepresentation {
            w: w.clone(),
            mode: self.mode,
            f: self.f,
        };
        Ok(from_span(self.st.space(), &span)?.into_matrix())
    }

    fn value(&self, w: &CMatrix) -> f64 {
        let Ok(p) = self.operator(w) else {
            return f64::INFINITY;
        };
        let Ok(s) = chain_sums(self.st, &p) else {
            return f64::INFINITY;
        };
        let v = match self.functional {
            Functional::Action(mu) => s.action(mu),
            Functional::Penalty { kappa, weight } => {
                s.weight_sq + weight * (s.weight2 - kappa).powi(2)
            }
        };
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }

    /// Pulls a frame back onto its mode; `None` if that is impossible.
    fn retract(&self, w: CMatrix) -> Option<CMatrix> {
        match self.mode {
            Mode::Projector => orthonormalize_frame(self.st.space(), &w).ok(),
            Mode::ClassPf => {
                let t = gram(self.st.space(), &w).trace().re;
                (t > 0.0).then(|| w * C64::new((self.f as f64 / t).sqrt(), 0.0))
            }
            Mode::RankFUnnormalized => Some(w),
        }
    }

    fn gradient(&self, w: &CMatrix, eps: f64) -> CMatrix {
        let mut g = CMatrix::zeros(w.nrows(), w.ncols());
        let mut probe = w.clone();
        for j in 0..w.ncols() {
            for i in 0..w.nrows() {
                let z = w[(i, j)];
                let mut partial = [0.0; 2];
                for (k, dz) in [C64::new(eps, 0.0), C64::new(0.0, eps)]
                    .into_iter()
                    .enumerate()
                {
                    probe[(i, j)] = z + dz;
                    let up = self.value(&probe);
                    probe[(i, j)] = z - dz;
                    let down = self.value(&probe);
                    let d = (up - down) / (2.0 * eps);
                    partial[k] = if d.is_finite() { d } else { 0.0 };
                }
                probe[(i, j)] = z;
                g[(i, j)] = C64::new(partial[0], partial[1]);
            }
        }
        g
    }
}

struct Descent {
    w: CMatrix,
    value: f64,
    iterations: usize,
    status: Status,
    history: Option<Vec<f64>>,
}

fn descend(problem: &Problem, w0: CMatrix, cfg: &MinimizeConfig) -> Descent {
    let mut w = w0;
    let mut value = problem.value(&w);
    let mut history = cfg.record_history.then(|| vec![value]);
    let mut recent = std::collections::VecDeque::from([value]);
    let mut step = cfg.step_init;
    let mut status = Status::MaxIterations;
    let mut iterations = 0;
    if !value.is_finite() {
        return Descent {
            w,
            value,
            iterations,
            status: Status::NoFeasibleStart,
            history,
        };
    }
    while iterations < cfg.max_iters {
        let g = problem.gradient(&w, cfg.grad_eps);
        let g2 = g.norm_squared();
        if g2.sqrt() <= GRAD_FLOOR {
            status = Status::Converged;
            break;
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            if let Some(trial) = problem.retract(&w - &g * C64::new(t, 0.0)) {
                let v = problem.value(&trial);
                if v <= value - ARMIJO * t * g2 {
                    accepted = Some((trial, v));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((trial, v)) = accepted else {
            status = Status::Converged;
            break;
        };
        w = trial;
        value = v;
        iterations += 1;
        step = (2.0 * t).min(MAX_STEP);
        if let Some(h) = history.as_mut() {
            h.push(value);
        }
        recent.push_back(value);
        if recent.len() > STALL_WINDOW + 1 {
            recent.pop_front();
            let drop = recent[0] - value;
            if drop < cfg.tol_action.max(RELATIVE_STOP * value.abs()) {
                status = Status::Converged;
                break;
            }
        }
    }
    Descent {
        w,
        value,
        iterations,
        status,
        history,
    }
}

/// Exact minimizer of `a t + w (c t - κ)²` over `t = s⁴ ≥ 0`, applied to
/// the frame as `W -> s^{1/2} W`.
fn scaling_polish(st: &SpaceTimeStructure, w: CMatrix, kappa: f64, weight: f64) -> CMatrix {
    let Ok(p) = crate::fermionic::unnormalized_from_frame(st.space(), &w) else {
        return w;
    };
    let Ok(s) = chain_sums(st, p.matrix()) else {
        return w;
    };
    if !(s.weight2 > 0.0) {
        return w;
    }
    let t = (2.0 * weight * s.weight2 * kappa - s.weight_sq) / (2.0 * weight * s.weight2.powi(2));
    if !(t > 0.0) {
        return w;
    }
    w * C64::new(t.powf(0.125), 0.0)
}

struct Start {
    label: &'static str,
    w: Option<CMatrix>,
}

fn starts(st: &SpaceTimeStructure, cfg: &MinimizeConfig, extra: &[CMatrix]) -> Vec<Start> {
    let mut out: Vec<Start> = (0..cfg.restarts)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            // class P^f starts are drawn on negative definite spans when
            // possible; Gaussian frames there are often badly scaled
            let w = if cfg.mode == Mode::ClassPf && cfg.f <= st.n() * st.m() {
                random_negative_frame(st, cfg.f, &mut rng).ok()
            } else {
                random_operator_with(st, cfg.f, cfg.mode, &mut rng)
                    .ok()
                    .map(|op| op.span().w.clone())
            };
            Start { label: "random", w }
        })
        .collect();
    if cfg.spread_start {
        out.push(Start {
            label: "spread",
            w: even_spread_frame(st, cfg.f).ok(),
        });
    }
    out.extend(extra.iter().map(|w| Start {
        label: "seeded",
        w: Some(w.clone()),
    }));
    out
}

/// Rescales an unnormalized frame so that `Σ|A_xy|² = κ`.
fn scale_to_kappa(st: &SpaceTimeStructure, w: CMatrix, kappa: f64) -> CMatrix {
    let c = crate::fermionic::unnormalized_from_frame(st.space(), &w)
        .ok()
        .and_then(|p| chain_sums(st, p.matrix()).ok())
        .map_or(0.0, |s| s.weight2);
    if c > 0.0 {
        w * C64::new((kappa / c).powf(0.125), 0.0)
    } else {
        w
    }
}

struct RunOutcome {
    trace: RestartTrace,
    w: Option<CMatrix>,
    /// Merge key: infeasible runs sort last, then by value.
    key: (bool, f64),
    weight: f64,
}

fn run_start(
    st: &SpaceTimeStructure,
    cfg: &MinimizeConfig,
    index: usize,
    start: Start,
) -> RunOutcome {
    let failed = |label: &str| RunOutcome {
        trace: RestartTrace {
            index,
            start: label.to_string(),
            iterations: 0,
            final_value: f64::INFINITY,
            status: Status::NoFeasibleStart,
            history: None,
        },
        w: None,
        key: (true, f64::INFINITY),
        weight: 0.0,
    };
    let Some(w0) = start.w else {
        return failed(start.label);
    };
    let mk = |functional| Problem {
        st,
        mode: cfg.mode,
        f: cfg.f,
        functional,
    };
    match cfg.objective {
        Objective::Auxiliary { mu } => {
            let problem = mk(Functional::Action(mu));
            let Some(w0) = problem.retract(w0) else {
                return failed(start.label);
            };
            let d = descend(&problem, w0, cfg);
            RunOutcome {
                key: (!d.value.is_finite(), d.value),
                trace: RestartTrace {
                    index,
                    start: start.label.to_string(),
                    iterations: d.iterations,
                    final_value: d.value,
                    status: d.status,
                    history: d.history,
                },
                w: Some(d.w),
                weight: 0.0,
            }
        }
        Objective::Constrained { kappa } => {
            let base = mk(Functional::Action(0.0));
            let Some(mut w) = base.retract(w0) else {
                return failed(start.label);
            };
            if cfg.mode == Mode::RankFUnnormalized {
                w = scale_to_kappa(st, w, kappa);
            }
            let mut iterations = 0;
            let mut status = Status::NoFeasibleStart;
            let mut history = cfg.record_history.then(Vec::new);
            let mut weight = cfg.penalty.initial_weight;
            for wt in cfg.penalty.weights() {
                weight = wt;
                let problem = mk(Functional::Penalty { kappa, weight: wt });
                let d = descend(&problem, w, cfg);
                iterations += d.iterations;
                status = d.status;
                if let (Some(h), Some(dh)) = (history.as_mut(), d.history) {
                    h.extend(dh);
                }
                w = d.w;
                if cfg.mode == Mode::RankFUnnormalized {
                    w = scaling_polish(st, w, kappa, wt);
                }
            }
            let sums = base.operator(&w).ok().and_then(|p| chain_sums(st, &p).ok());
            let (value, residual) = sums.map_or((f64::INFINITY, f64::INFINITY), |s| {
                (s.weight_sq, (s.weight2 - kappa).abs())
            });
            RunOutcome {
                key: (!(residual < 1e-5 * kappa), value),
                trace: RestartTrace {
                    index,
                    start: start.label.to_string(),
                    iterations,
                    final_value: value,
                    status,
                    history,
                },
                w: Some(w),
                weight,
            }
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("{THREADS_ENV}={v:?} is not a thread count"))
        })?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
}

fn minimize_with_starts(cfg: &MinimizeConfig, extra: &[CMatrix]) -> Result<MinimizeResult> {
    let clock = Instant::now();
    cfg.validate()?;
    let st = cfg.structure()?;
    let mut warnings = Vec::new();
    if let Objective::Auxiliary { mu } = cfg.objective {
        if mu > critical_mu(cfg.n) {
            warnings.push(format!(
                "mu = {mu} exceeds 1/2n = {}; the action may be unbounded below",
                critical_mu(cfg.n)
            ));
        }
    }
    let starts = starts(&st, cfg, extra);
    let pool = thread_pool()?;
    let outcomes: Vec<RunOutcome> = pool.install(|| {
        starts
            .into_par_iter()
            .enumerate()
            .map(|(i, s)| run_start(&st, cfg, i, s))
            .collect()
    });
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.key < outcomes[best].key {
            best = i;
        }
    }
    let winner = &outcomes[best];
    let Some(w) = winner.w.clone().filter(|_| winner.key.1.is_finite()) else {
        return Err(Error::Infeasible(
            "no restart produced a feasible starting frame".into(),
        ));
    };
    let span = SpanRepresentation {
        w,
        mode: cfg.mode,
        f: cfg.f,
    };
    let op = from_span(st.space(), &span)?;
    let mut status = winner.trace.status;
    let (mu, residual, mu_hat) = match cfg.objective {
        Objective::Auxiliary { mu } => (mu, None, None),
        Objective::Constrained { kappa } => {
            let s = chain_sums(&st, op.matrix())?;
            let mu_hat = -2.0 * winner.weight * (s.weight2 - kappa);
            let residual = (s.weight2 - kappa).abs();
            if !(residual < 1e-5 * kappa) {
                status = Status::ConstraintNotMet;
            }
            (mu_hat, Some(residual), Some(mu_hat))
        }
    };
    let report = action(&st, op.matrix(), mu)?;
    let objective_value = match cfg.objective {
        Objective::Auxiliary { .. } => report.total,
        Objective::Constrained { .. } => report.weight_sq_sum,
    };
    let min_local_trace = report
        .local_traces
        .iter()
        .map(|t| t[0].hypot(t[1]))
        .fold(f64::INFINITY, f64::min);
    Ok(MinimizeResult {
        status,
        best_restart: best,
        best_frame: FrameJson::from_span(op.span(), Some(&st)),
        best_action: report.total,
        objective_value,
        constraint_value: report.constraint_value,
        constraint_residual: residual,
        mu_hat,
        min_local_trace,
        report,
        restarts: outcomes.into_iter().map(|o| o.trace).collect(),
        warnings,
        wall_time: clock.elapsed().as_secs_f64(),
    })
}

/// Minimizes `S_μ` over the configured mode.
pub fn minimize_auxiliary(cfg: &MinimizeConfig) -> Result<MinimizeResult> {
    if !matches!(cfg.objective, Objective::Auxiliary { .. }) {
        return Err(Error::InvalidInput(
            "expected an auxiliary objective".into(),
        ));
    }
    minimize_with_starts(cfg, &[])
}

/// Minimizes `Σ|A_xy²|` on `Σ|A_xy|² = κ` by the penalty schedule.
pub fn minimize_constrained(cfg: &MinimizeConfig) -> Result<MinimizeResult> {
    if !matches!(cfg.objective, Objective::Constrained { .. }) {
        return Err(Error::InvalidInput(
            "expected a constrained objective".into(),
        ));
    }
    minimize_with_starts(cfg, &[])
}

/// Runs whichever objective the config names.
pub fn minimize(cfg: &MinimizeConfig) -> Result<MinimizeResult> {
    minimize_with_starts(cfg, &[])
}

/// Like [`minimize`], with additional caller-supplied starting frames.
pub fn minimize_from(cfg: &MinimizeConfig, extra_starts: &[CMatrix]) -> Result<MinimizeResult> {
    minimize_with_starts(cfg, extra_starts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    /// Estimates of `I(f, m)` over class `P^f`.
    pub infimum: Vec<ScanRow>,
    /// Estimates of `J(f, m)` over fermionic projectors; only in projector
    /// mode, and only for `f <= n m`.
    pub projector: Vec<ScanRow>,
    /// Rows where `Î(f, m+1) > (1 - 3/(4m)) Î(f, m)` beyond tolerance.
    pub lemma_violations: Vec<String>,
    /// Rows below the global lower bound.
    pub bound_violations: Vec<String>,
}

/// Tolerance of the soft checks in [`scan_infimum`].
pub const SCAN_TOL: f64 = 1e-6;

fn scan_column(
    f: usize,
    n: usize,
    ms: &[usize],
    mu: f64,
    base: &MinimizeConfig,
    mode: Mode,
    violations: &mut (Vec<String>, Vec<String>),
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    let mut prev: Option<(SpaceTimeStructure, MinimizeResult)> = None;
    for &m in ms {
        let cfg = MinimizeConfig {
            m,
            n,
            f,
            mode,
            objective: Objective::Auxiliary { mu },
            ..base.clone()
        };
        if mode == Mode::Projector && f > n * m {
            prev = None;
            continue;
        }
        let mut extra = Vec::new();
        if let Some((pst, pres)) = &prev {
            let p = pres.best_operator(pst)?;
            if let Ok(sp) = spread_point(pst, &p, mu) {
                extra.push(spread_frame(pst, &pres.best_span()?.w, sp.chosen_point)?);
            }
        }
        let res = minimize_with_starts(&cfg, &extra)?;
        let row = ScanRow {
            m,
            n,
            f,
            mu,
            total: res.best_action,
            constraint_value: res.constraint_value,
        };
        if let Some((pst, pres)) = &prev {
            let pm = pst.m() as f64;
            let limit = (1.0 - 3.0 / (4.0 * pm)) * pres.best_action;
            if row.total > limit + SCAN_TOL {
                violations.0.push(format!(
                    "{mode} f={f} m={m}: {:.6e} > (1 - 3/(4*{})) * {:.6e}",
                    row.total,
                    pst.m(),
                    pres.best_action
                ));
            }
        }
        if mu == critical_mu(n) {
            let b = global_bound(f as f64, n, m);
            if row.total < b - BOUND_SLACK {
                violations.1.push(format!(
                    "{mode} f={f} m={m}: {:.6e} < bound {:.6e}",
                    row.total, b
                ));
            }
        }
        rows.push(row);
        prev = Some((cfg.structure()?, res));
    }
    Ok(rows)
}

/// Tabulates numerical upper estimates of the infima for `m` in `ms`.
///
/// Each `m + 1` run is additionally seeded with the spread of the `m`
/// minimizer. The lemma and bound checks are reported, never fatal.
pub fn scan_infimum(
    f: usize,
    n: usize,
    ms: &[usize],
    mu: f64,
    base: &MinimizeConfig,
) -> Result<ScanTable> {
    let mut violations = (Vec::new(), Vec::new());
    let infimum = scan_column(f, n, ms, mu, base, Mode::ClassPf, &mut violations)?;
    let projector = if base.mode == Mode::Projector {
        scan_column(f, n, ms, mu, base, Mode::Projector, &mut violations)?
    } else {
        Vec::new()
    };
    Ok(ScanTable {
        infimum,
        projector,
        lemma_violations: violations.0,
        bound_violations: violations.1,
    })
}
