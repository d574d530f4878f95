use std::fmt::Write;

use ncst_core::config::{ConfigFile, EffectiveConfig};
use ncst_core::geometry::{
    causal as causal_value, center_interval, classify, distance as distance_limit, distance_alpha,
    distance_omega, minimal_variance_width, synge_family_width, CausalClass, DistanceBreakdown,
    LocalizedPoint,
};
use ncst_core::SpacetimePoint;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Axis, Common, DistanceArgs, PairArgs, SweepArgs, Width};
use crate::output::{emit, pm};
use crate::{CliError, Status};

/// Defaults, then the config file, then flags.
pub fn resolve(common: &Common) -> Result<EffectiveConfig, CliError> {
    let mut cfg = EffectiveConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        cfg.overlay(&ConfigFile::from_json(&text)?)?;
    }
    if let Some(k) = common.kappa_sq {
        cfg.set_kappa_sq(k)?;
    }
    if let Some(l) = common.planck_length {
        cfg.set_planck_length(l)?;
    }
    if let Some(a) = common.state_alpha {
        cfg.state.alpha = a;
    }
    let q = &mut cfg.quadrature;
    q.seed = common.seed.unwrap_or(q.seed);
    q.rel_tol = common.rel_tol.unwrap_or(q.rel_tol);
    q.mc_samples = common.mc_samples.unwrap_or(q.mc_samples);
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_width(width: Width, cfg: &EffectiveConfig) -> f64 {
    let c = cfg.physical_constants();
    match width {
        Width::Value(a) => a,
        Width::Synge => synge_family_width(&c),
        Width::Minvar => minimal_variance_width(&c),
    }
}

fn localized(center: [f64; 4], width: f64) -> Result<LocalizedPoint, CliError> {
    Ok(LocalizedPoint::new(SpacetimePoint(center), width)?)
}

#[derive(Clone, Debug, Serialize)]
struct PairInput {
    p: [f64; 4],
    q: [f64; 4],
    width: f64,
}

impl PairInput {
    fn of(a: &PairArgs, cfg: &EffectiveConfig) -> Self {
        PairInput {
            p: a.p,
            q: a.q,
            width: resolve_width(a.width, cfg),
        }
    }

    fn points(&self) -> Result<(LocalizedPoint, LocalizedPoint), CliError> {
        Ok((
            localized(self.p, self.width)?,
            localized(self.q, self.width)?,
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceRow {
    /// `limit`, `finite-alpha` or `omega`.
    kind: &'static str,
    classical: f64,
    classical_error: f64,
    quantum: f64,
    quantum_error: f64,
    total: f64,
    total_error: f64,
    converged: bool,
}

impl DistanceRow {
    fn new(kind: &'static str, d: &DistanceBreakdown) -> Self {
        DistanceRow {
            kind,
            classical: d.classical,
            classical_error: 0.0,
            quantum: d.quantum,
            quantum_error: d.error,
            total: d.total,
            total_error: d.error,
            converged: d.converged,
        }
    }
}

fn status(converged: bool) -> Status {
    if converged {
        Status::Ok
    } else {
        Status::NotConverged
    }
}

pub fn distance(a: &DistanceArgs) -> Result<Status, CliError> {
    let cfg = resolve(&a.pair.common)?;
    let input = PairInput::of(&a.pair, &cfg);
    let (p, q) = input.points()?;
    let qc = &cfg.quadrature;
    let mut rows = vec![if a.finite_alpha {
        DistanceRow::new("finite-alpha", &distance_alpha(&p, &q, &cfg.params()?, qc))
    } else {
        DistanceRow::new(
            "limit",
            &distance_limit(&p, &q, &cfg.physical_constants(), qc),
        )
    }];
    if a.diagnostics {
        rows.push(DistanceRow::new(
            "omega",
            &distance_omega(&p, &q, &cfg.params()?, qc),
        ));
    }
    let converged = rows.iter().all(|r| r.converged);
    emit(
        a.pair.common.format,
        "distance",
        &cfg,
        &input,
        &rows,
        |rows| {
            let mut s = String::new();
            for r in rows {
                let _ = writeln!(s, "[{}]", r.kind);
                let _ = writeln!(s, "classical  {}", pm(r.classical, r.classical_error));
                let _ = writeln!(s, "quantum    {}", pm(r.quantum, r.quantum_error));
                let _ = writeln!(s, "total      {}", pm(r.total, r.total_error));
            }
            s
        },
    )?;
    Ok(status(converged))
}

#[derive(Clone, Debug, Serialize)]
pub struct CausalRow {
    value: f64,
    error: f64,
    classification: CausalClass,
    converged: bool,
}

fn causal_row(p: &LocalizedPoint, q: &LocalizedPoint, cfg: &EffectiveConfig) -> CausalRow {
    let c = causal_value(p, q, &cfg.quadrature);
    CausalRow {
        // normalizes -0
        value: c.value + 0.0,
        error: c.error,
        classification: classify(c.value, c.error),
        converged: c.converged,
    }
}

fn class_name(c: CausalClass) -> &'static str {
    match c {
        CausalClass::Future => "future",
        CausalClass::Past => "past",
        CausalClass::Spacelike => "spacelike",
        CausalClass::Fuzzy => "fuzzy",
    }
}

pub fn causal(a: &PairArgs) -> Result<Status, CliError> {
    let cfg = resolve(&a.common)?;
    let input = PairInput::of(a, &cfg);
    let (p, q) = input.points()?;
    let row = causal_row(&p, &q, &cfg);
    let converged = row.converged;
    emit(a.common.format, "causal", &cfg, &input, &[row], |rows| {
        let r = &rows[0];
        format!(
            "{}  C = {}\n",
            class_name(r.classification),
            pm(r.value, r.error)
        )
    })?;
    Ok(status(converged))
}

#[derive(Clone, Debug, Serialize)]
struct SweepInput {
    axis: &'static str,
    values: Vec<f64>,
    spacelike: bool,
    p: [f64; 4],
    q: [f64; 4],
    width: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    index: usize,
    parameter: f64,
    width: f64,
    /// Empty for the α → ∞ distance.
    state_alpha: Option<f64>,
    interval: f64,
    classical: f64,
    quantum: f64,
    quantum_error: f64,
    total: f64,
    total_error: f64,
    causal: f64,
    causal_error: f64,
    classification: CausalClass,
    converged: bool,
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Separation => "separation",
        Axis::Width => "width",
        Axis::StateAlpha => "state-alpha",
    }
}

pub fn sweep(a: &SweepArgs) -> Result<Status, CliError> {
    let cfg = resolve(&a.common)?;
    let values = a.range.values(a.log).map_err(CliError::Usage)?;
    if a.axis == Axis::Separation && values.iter().any(|&v| v < 0.0) {
        return Err(CliError::Usage(
            "separation values are |(p - q)²| and must be >= 0".into(),
        ));
    }
    let base = cfg.params()?;
    let base_width = resolve_width(a.width, &cfg);
    let rows: Vec<SweepRow> = values
        .par_iter()
        .enumerate()
        .map(|(index, &v)| {
            let (mut pc, mut width, mut state_alpha) = (a.p, base_width, None);
            match a.axis {
                Axis::Separation => {
                    let axis = usize::from(a.spacelike);
                    pc = a.q;
                    pc[axis] += v.sqrt();
                }
                Axis::Width => width = v,
                Axis::StateAlpha => state_alpha = Some(v),
            }
            let (p, q) = (localized(pc, width)?, localized(a.q, width)?);
            if let Some(alpha) = state_alpha {
                base.with_state_alpha(alpha).validate()?;
            }
            let d = match state_alpha {
                Some(alpha) => {
                    distance_alpha(&p, &q, &base.with_state_alpha(alpha), &cfg.quadrature)
                }
                None => distance_limit(&p, &q, &base.constants, &cfg.quadrature),
            };
            let c = causal_row(&p, &q, &cfg);
            Ok(SweepRow {
                index,
                parameter: v,
                width,
                state_alpha,
                interval: center_interval(&p, &q),
                classical: d.classical,
                quantum: d.quantum,
                quantum_error: d.error,
                total: d.total,
                total_error: d.error,
                causal: c.value,
                causal_error: c.error,
                classification: c.classification,
                converged: d.converged && c.converged,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let input = SweepInput {
        axis: axis_name(a.axis),
        values,
        spacelike: a.spacelike,
        p: a.p,
        q: a.q,
        width: base_width,
    };
    let converged = rows.iter().all(|r| r.converged);
    emit(a.common.format, "sweep", &cfg, &input, &rows, |rows| {
        let mut s = format!(
            "{:>5} {:>12} {:>34} {:>34} {:>10}\n",
            "#", input.axis, "total", "causal", "class"
        );
        for r in rows {
            let _ = writeln!(
                s,
                "{:>5} {:>12.5e} {:>34} {:>34} {:>10}",
                r.index,
                r.parameter,
                pm(r.total, r.total_error),
                pm(r.causal, r.causal_error),
                class_name(r.classification)
            );
        }
        s
    })?;
    Ok(status(converged))
}
