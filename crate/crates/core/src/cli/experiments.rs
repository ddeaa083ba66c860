use std::time::Instant;

use rand::seq::IndexedRandom;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind, GraphSpec, ScalingAxis, ScheduleSpec};
use super::report::{build_id, OutputDir, Report, SCHEMA_VERSION};
use super::svg::{Plot, Series, Style};
use super::CliError;
use crate::chain::exact::{fixed_schedule_marginals, marginals, stationarity_residual, stationary_distribution};
use crate::chain::{
    run_m0, schedule_equivalence_report, ChainParams, EventSource, OccupancyStudy, RngPolicy, RunOptions, Schedule,
    ScheduleKind,
};
use crate::estimators::{
    curve_from_samples, decoding_fidelity_bound, default_threshold_fraction, ent_bound_values, equilibrium_occupancy,
    fit_scaling, otoc_saturation, tau_ent_lower_bound, tau_from_curve, Observable, SaturationCurve, SaturationResult,
    ScalingFit, ScalingModel, ScalingPoint,
};
use crate::graphs::{Cut, Graph};
use crate::oracle::{
    apply_two_site_gate, entanglement_entropy, pauli_weight_at, random_circuit, renyi2, EntropyUnit, QuantumState,
    SizeCap,
};

/// Fraction of the light-cone distance below which a first hit counts as
/// superluminal.
pub const LIGHT_CONE_FRACTION: f64 = 0.05;
/// Slack for the per-gate entropy checks.
pub const ENTROPY_SLACK: f64 = 1e-8;
/// Differences below this are treated as round-off in the mapping check.
pub const MAPPING_ABS_TOL: f64 = 1e-9;

fn fraction_of(cfg: &ExperimentConfig) -> f64 {
    cfg.threshold_fraction
        .unwrap_or_else(|| default_threshold_fraction(cfg.local_dim))
}

fn graph_summary(g: &Graph) -> Value {
    json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "diameter": g.diameter(),
        "max_degree": g.max_degree(),
    })
}

fn curve_plot(title: &str, curve: &SaturationCurve, y_label: &str, result: Option<&SaturationResult>) -> String {
    let mut plot = Plot {
        title: title.into(),
        x_label: "time".into(),
        y_label: y_label.into(),
        series: vec![Series {
            name: format!("{} trajectories", curve.num_traj),
            xs: curve.sample_times.clone(),
            ys: curve.estimates.clone(),
            errs: Some(curve.std_errors.clone()),
            style: Style::Line,
        }],
        ..Plot::default()
    };
    if let Some(r) = result {
        plot.hlines.push((r.threshold, "threshold".into()));
        if let Some(eq) = r.equilibrium {
            plot.hlines.push((eq, "equilibrium".into()));
        }
        if !r.censored {
            plot.vlines.push((r.tau, "tau".into()));
        }
    }
    plot.render()
}

fn scaling_plot(title: &str, x_label: &str, fit: &ScalingFit) -> String {
    let xs: Vec<f64> = fit.points.iter().map(|p| p.n).collect();
    let (lo, hi) = (xs.first().copied().unwrap_or(0.0), xs.last().copied().unwrap_or(1.0));
    let grid: Vec<f64> = (0..=50).map(|i| lo + (hi - lo) * f64::from(i) / 50.0).collect();
    Plot {
        title: title.into(),
        x_label: x_label.into(),
        y_label: "tau".into(),
        series: vec![
            Series {
                name: "measured".into(),
                xs,
                ys: fit.points.iter().map(|p| p.tau).collect(),
                errs: Some(fit.points.iter().map(|p| p.tau_err).collect()),
                style: Style::Points,
            },
            Series {
                name: format!("{:?} fit, R² = {:.4}", fit.model, fit.r_squared),
                ys: grid.iter().map(|&n| fit.predict(n)).collect(),
                xs: grid,
                errs: None,
                style: Style::Line,
            },
        ],
        ..Plot::default()
    }
    .render()
}

/// Runs `cfg` to completion, writing data files and `report.json` into the
/// configured output directory.
///
/// Outputs are written even when the experiment ends in a reportable
/// failure (censored scaling points); the error is returned afterwards.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let (results, deferred) = match cfg.kind {
        ExperimentKind::Otoc => (otoc(cfg, &mut out)?, None),
        ExperimentKind::EntBound => (ent_bound(cfg, &mut out)?, None),
        ExperimentKind::OracleVerify => (oracle_verify(cfg, &mut out)?, None),
        ExperimentKind::ScalingSuite => scaling_suite(cfg, &mut out)?,
        ExperimentKind::ScheduleCompare => (schedule_compare(cfg, &mut out)?, None),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        build: build_id(),
        experiment: cfg.kind.name().into(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        config: Some(cfg.to_toml()),
        results,
        files: out.manifest(),
    };
    out.write_report(&report)?;
    match deferred {
        Some(err) => Err(err),
        None => Ok(report),
    }
}

fn otoc(cfg: &ExperimentConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let g = cfg.graph.build()?;
    let params = ChainParams::new(cfg.local_dim)?;
    let (x, y) = cfg.pair.resolve(&g)?;
    let distance = g.distance(x, y);
    let horizon = cfg.schedule.resolve_horizon(distance);
    let times = cfg.schedule.resolve_times(horizon);
    let schedule = Schedule::new(cfg.schedule.kind, horizon)?;
    let policy = RngPolicy::new(cfg.master_seed);
    let study = OccupancyStudy::run(&g, &params, x, y, &schedule, &times, cfg.num_traj, &policy)?;
    let (otoc_curve, result) = otoc_saturation(&study.curve, cfg.local_dim, g.num_vertices(), fraction_of(cfg))?;

    out.write_with("occupancy.csv", |w| study.curve.write_csv(w))?;
    out.write_with("otoc.csv", |w| otoc_curve.write_csv(w))?;
    out.write_with("first_hits.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["trajectory", "first_hit"])?;
        for (k, h) in study.first_hits.iter().enumerate() {
            csv.write_record([k.to_string(), h.map(|t| t.to_string()).unwrap_or_default()])?;
        }
        csv.flush()
    })?;
    if cfg.plots {
        let svg = curve_plot(&format!("OTOC between {x} and {y}"), &otoc_curve, "OTOC", Some(&result));
        out.write("otoc.svg", svg.as_bytes())?;
    }

    let (first_hit, censored) = study.first_hit_summary();
    let cone = LIGHT_CONE_FRACTION * distance as f64;
    let early = study.first_hits.iter().flatten().filter(|&&t| t < cone).count();
    let final_otoc = otoc_curve.estimates.last().copied().unwrap_or(0.0);
    let fidelity = decoding_fidelity_bound(final_otoc, cfg.local_dim).ok();
    Ok(json!({
        "graph": graph_summary(&g),
        "x": x,
        "y": y,
        "distance": distance,
        "horizon": horizon,
        "schedule": cfg.schedule.kind.name(),
        "num_traj": cfg.num_traj,
        "tau_otoc": result,
        "equilibrium_occupancy": equilibrium_occupancy(cfg.local_dim, g.num_vertices())?,
        "final_otoc": final_otoc,
        "decoding_fidelity_bound_at_horizon": fidelity,
        "first_hit": {
            "mean": first_hit.map(|f| f.0),
            "stderr": first_hit.map(|f| f.1),
            "censored": censored,
            "light_cone_time": cone,
            "fraction_before_light_cone": early as f64 / cfg.num_traj as f64,
        },
    }))
}

fn resolve_cut(cfg: &ExperimentConfig, spec: &GraphSpec, g: &Graph) -> Result<Cut, CliError> {
    match &cfg.cut {
        Some(c) => c.resolve(spec, g),
        None => spec
            .default_cut(g)
            .ok_or_else(|| CliError::config("cut", "required: this graph family has no default bipartition")),
    }
}

fn ent_bound(cfg: &ExperimentConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let g = cfg.graph.build()?;
    let params = ChainParams::new(cfg.local_dim)?;
    let cut = resolve_cut(cfg, &cfg.graph, &g)?;
    let (x, y) = cfg.pair.resolve(&g)?;
    let horizon = cfg.schedule.resolve_horizon(g.distance(x, y));
    let times = cfg.schedule.resolve_times(horizon);
    let schedule = Schedule::new(cfg.schedule.kind, horizon)?;
    let policy = RngPolicy::new(cfg.master_seed);
    let unit = EntropyUnit::Nats;
    let opts = RunOptions {
        record_events: true,
        ..RunOptions::default()
    };
    let rows = (0..cfg.num_traj)
        .into_par_iter()
        .map(|k| {
            let traj = run_m0(
                &g,
                &params,
                x,
                EventSource::Schedule(schedule),
                &opts,
                &mut policy.stream(k),
            )?;
            Ok(ent_bound_values(&traj, &cut, cfg.local_dim, &times, unit)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let curve = curve_from_samples(Observable::EntBound, &times, &rows)?;
    let fraction = fraction_of(cfg);
    let bound = tau_ent_lower_bound(&g, &cut, cfg.local_dim, fraction)?;
    let cap = cut.min_side() as f64 * unit.log(f64::from(cfg.local_dim));
    let ceiling = tau_from_curve(&curve, fraction * cap)?;

    out.write_with("ent_bound.csv", |w| curve.write_csv(w))?;
    if cfg.plots {
        let mut svg_result = ceiling;
        svg_result.equilibrium = Some(cap);
        out.write(
            "ent_bound.svg",
            curve_plot("Entropy ceiling across the cut", &curve, "nats", Some(&svg_result)).as_bytes(),
        )?;
    }
    Ok(json!({
        "graph": graph_summary(&g),
        "cut": {
            "size_a": cut.size_a(),
            "size_b": cut.size_b(),
            "crossing_edges": g.cut_size(&cut)?,
        },
        "horizon": horizon,
        "num_traj": cfg.num_traj,
        "threshold_fraction": fraction,
        "tau_ent_lower_bound": bound,
        "max_entropy_nats": cap,
        "ceiling_crossing": ceiling,
    }))
}

#[derive(Debug, Clone, Default, Serialize)]
struct EntropyTally {
    gates: u64,
    crossing_gates: u64,
    max_crossing_increase: f64,
    max_noncrossing_change: f64,
    max_crossing_increase_renyi2: f64,
    max_noncrossing_change_renyi2: f64,
    /// Entropy above `min(2·log d·crossings, min(|A|,|B|)·log d)`.
    max_excess_over_ceiling: f64,
    violations: u64,
}

impl EntropyTally {
    fn merge(mut self, o: EntropyTally) -> EntropyTally {
        self.gates += o.gates;
        self.crossing_gates += o.crossing_gates;
        self.max_crossing_increase = self.max_crossing_increase.max(o.max_crossing_increase);
        self.max_noncrossing_change = self.max_noncrossing_change.max(o.max_noncrossing_change);
        self.max_crossing_increase_renyi2 = self.max_crossing_increase_renyi2.max(o.max_crossing_increase_renyi2);
        self.max_noncrossing_change_renyi2 = self.max_noncrossing_change_renyi2.max(o.max_noncrossing_change_renyi2);
        self.max_excess_over_ceiling = self.max_excess_over_ceiling.max(o.max_excess_over_ceiling);
        self.violations += o.violations;
        self
    }
}

/// Cuts exercised by the entropy check: the configured or family cut plus
/// every prefix `{0..k}`.
pub fn entropy_test_cuts(g: &Graph, primary: Option<Cut>) -> Result<Vec<Cut>, CliError> {
    let mut cuts: Vec<Cut> = primary.into_iter().collect();
    for k in 1..g.num_vertices() {
        let c = Cut::new(g.num_vertices(), 0..k)?;
        if !cuts.contains(&c) && !cuts.contains(&c.complement()) {
            cuts.push(c);
        }
    }
    Ok(cuts)
}

/// Evolves `|0…0⟩` gate by gate and checks the entropy-increment bound and
/// the crossing-count ceiling on every cut.
fn entropy_circuit<R: rand::Rng + ?Sized>(
    g: &Graph,
    local_dim: u32,
    cuts: &[Cut],
    num_gates: usize,
    unit: EntropyUnit,
    cap: &SizeCap,
    rng: &mut R,
) -> Result<EntropyTally, CliError> {
    let edge_ids: Vec<usize> = (0..g.num_edges()).collect();
    let edges: Vec<usize> = (0..num_gates)
        .map(|_| *edge_ids.choose(rng).expect("graph has edges"))
        .collect();
    let gates = random_circuit(g, local_dim, &edges, rng);
    let mut state = QuantumState::product_zero(local_dim, g.num_vertices(), cap)?;
    let log_d = unit.log(f64::from(local_dim));
    let increment = 2.0 * log_d;
    let mut before: Vec<(f64, f64)> = vec![(0.0, 0.0); cuts.len()];
    let mut crossings = vec![0u64; cuts.len()];
    let mut tally = EntropyTally::default();
    for gate in &gates {
        let (u, v) = gate.sites;
        apply_two_site_gate(&mut state, &gate.unitary, u, v)?;
        tally.gates += 1;
        for (i, cut) in cuts.iter().enumerate() {
            let s = entanglement_entropy(&state, cut, unit)?;
            let r = renyi2(&state, cut, unit)?;
            let (ds, dr) = (s - before[i].0, r - before[i].1);
            if cut.contains(u) != cut.contains(v) {
                crossings[i] += 1;
                tally.crossing_gates += 1;
                tally.max_crossing_increase = tally.max_crossing_increase.max(ds);
                tally.max_crossing_increase_renyi2 = tally.max_crossing_increase_renyi2.max(dr);
                tally.violations +=
                    u64::from(ds > increment + ENTROPY_SLACK) + u64::from(dr > increment + ENTROPY_SLACK);
            } else {
                tally.max_noncrossing_change = tally.max_noncrossing_change.max(ds.abs());
                tally.max_noncrossing_change_renyi2 = tally.max_noncrossing_change_renyi2.max(dr.abs());
                tally.violations += u64::from(ds > ENTROPY_SLACK) + u64::from(dr > ENTROPY_SLACK);
            }
            let ceiling = (increment * crossings[i] as f64).min(cut.min_side() as f64 * log_d);
            let excess = s - ceiling;
            tally.max_excess_over_ceiling = tally.max_excess_over_ceiling.max(excess);
            tally.violations += u64::from(excess > ENTROPY_SLACK);
            before[i] = (s, r);
        }
    }
    Ok(tally)
}

fn oracle_verify(cfg: &ExperimentConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let spec = cfg.oracle.clone().unwrap_or_default();
    let g = cfg.graph.build()?;
    if g.num_edges() == 0 {
        return Err(CliError::config("graph", "oracle checks need at least one edge"));
    }
    let params = ChainParams::new(cfg.local_dim)?;
    let d = cfg.local_dim;
    let cap = SizeCap::default();
    let (x, y) = cfg.pair.resolve(&g)?;
    let policy = RngPolicy::new(cfg.master_seed);

    // Pauli weight of the evolved Z-type operator vs. the chain run over the
    // reversed gate order.
    let edge_ids: Vec<usize> = (0..g.num_edges()).collect();
    let mut sched_rng = policy.derive("schedule").stream(0);
    let edges: Vec<usize> = (0..spec.gates)
        .map(|_| *edge_ids.choose(&mut sched_rng).expect("graph has edges"))
        .collect();
    let circuit_policy = policy.derive("circuits");
    let rows = (0..spec.circuits)
        .into_par_iter()
        .map(|k| {
            let mut rng = circuit_policy.stream(k);
            let gates = random_circuit(&g, d, &edges, &mut rng);
            (0..=spec.gates)
                .map(|n| Ok(pauli_weight_at(&g, d, x, 1, &gates[..n], y, &cap)?.weight))
                .collect::<Result<Vec<f64>, CliError>>()
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let checkpoints: Vec<f64> = (0..=spec.gates).map(|n| n as f64).collect();
    let circuit_curve = curve_from_samples(Observable::PauliWeight, &checkpoints, &rows)?;
    let mut chain_values = Vec::with_capacity(spec.gates + 1);
    for n in 0..=spec.gates {
        let reversed: Vec<usize> = edges[..n].iter().rev().copied().collect();
        let m = fixed_schedule_marginals(&g, &params, x, &reversed)?;
        chain_values.push(m.last().expect("at least one row")[y]);
    }
    let mut max_z = 0.0f64;
    let mut max_diff = 0.0f64;
    for (i, &c) in chain_values.iter().enumerate() {
        let diff = (circuit_curve.estimates[i] - c).abs();
        let se = circuit_curve.std_errors[i];
        max_diff = max_diff.max(diff);
        // Round-off in the dense evolution leaves ~1e-30 weight where the
        // chain is exactly zero; such gaps are not sampling differences.
        max_z = max_z.max(if diff <= MAPPING_ABS_TOL {
            0.0
        } else if se > 0.0 {
            diff / se
        } else {
            f64::INFINITY
        });
    }
    out.write_with("mapping.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["gates", "circuit_weight", "circuit_stderr", "chain_occupancy"])?;
        for (i, c) in chain_values.iter().enumerate() {
            csv.write_record([
                i.to_string(),
                circuit_curve.estimates[i].to_string(),
                circuit_curve.std_errors[i].to_string(),
                c.to_string(),
            ])?;
        }
        csv.flush()
    })?;
    if cfg.plots {
        let plot = Plot {
            title: format!("Pauli weight at {y} from {x}"),
            x_label: "gates".into(),
            y_label: "weight".into(),
            series: vec![
                Series {
                    name: "Haar circuits".into(),
                    xs: checkpoints.clone(),
                    ys: circuit_curve.estimates.clone(),
                    errs: Some(circuit_curve.std_errors.iter().map(|s| 4.0 * s).collect()),
                    style: Style::Points,
                },
                Series {
                    name: "label chain (exact)".into(),
                    xs: checkpoints.clone(),
                    ys: chain_values.clone(),
                    errs: None,
                    style: Style::Line,
                },
            ],
            ..Plot::default()
        };
        out.write("mapping.svg", plot.render().as_bytes())?;
    }

    let primary = match &cfg.cut {
        Some(c) => Some(c.resolve(&cfg.graph, &g)?),
        None => cfg.graph.default_cut(&g),
    };
    let cuts = entropy_test_cuts(&g, primary)?;
    let num_gates = spec.entropy_gates.unwrap_or(4 * g.num_edges());
    let entropy_policy = policy.derive("entropy");
    let tally = (0..spec.entropy_circuits)
        .into_par_iter()
        .map(|k| {
            entropy_circuit(
                &g,
                d,
                &cuts,
                num_gates,
                spec.entropy_unit,
                &cap,
                &mut entropy_policy.stream(k),
            )
        })
        .collect::<Result<Vec<_>, CliError>>()?
        .into_iter()
        .fold(EntropyTally::default(), EntropyTally::merge);

    let residual = stationarity_residual(&g, &params)?;
    let stationary = stationary_distribution(g.num_vertices(), &params);
    let eq = equilibrium_occupancy(d, g.num_vertices())?;
    let marginal_gap = marginals(&stationary, g.num_vertices())
        .iter()
        .map(|m| (m - eq).abs())
        .fold(0.0, f64::max);

    Ok(json!({
        "graph": graph_summary(&g),
        "mapping": {
            "x": x,
            "y": y,
            "edge_sequence": edges,
            "circuits": spec.circuits,
            "max_abs_diff": max_diff,
            "max_z": max_z,
            "pass": max_z <= 4.0,
        },
        "entropy_increment": {
            "circuits": spec.entropy_circuits,
            "gates_per_circuit": num_gates,
            "cuts": cuts.len(),
            "tally": tally,
            "pass": tally.violations == 0,
        },
        "stationarity": {
            "residual": residual,
            "equilibrium_marginal_gap": marginal_gap,
            "pass": residual < 1e-12 && marginal_gap < 1e-12,
        },
    }))
}

/// One family member of a scaling suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuitePoint {
    pub parameter: usize,
    pub vertices: usize,
    pub distance: usize,
    pub n: f64,
    pub horizon: f64,
    pub tau_otoc: SaturationResult,
    pub ent_bound: Option<f64>,
    pub fraction_before_light_cone: f64,
}

impl SuitePoint {
    pub fn scaling_point(&self) -> ScalingPoint {
        ScalingPoint {
            n: self.n,
            tau: self.tau_otoc.tau,
            tau_err: self.tau_otoc.tau - self.tau_otoc.ci.0,
            censored: self.tau_otoc.censored,
        }
    }
}

pub struct PointRequest<'a> {
    pub graph: &'a GraphSpec,
    pub local_dim: u32,
    pub schedule: &'a ScheduleSpec,
    pub num_traj: u64,
    pub fraction: f64,
    pub axis: ScalingAxis,
    pub parameter: usize,
    pub cut: Option<Cut>,
}

/// Measures `tau_otoc` between the farthest pair of one graph.
pub fn run_point(req: PointRequest<'_>, policy: &RngPolicy) -> Result<(SuitePoint, SaturationCurve), CliError> {
    let g = req.graph.build()?;
    let params = ChainParams::new(req.local_dim)?;
    let (x, y) = g.farthest_pair();
    let distance = g.distance(x, y);
    let horizon = req.schedule.resolve_horizon(distance);
    let times = req.schedule.resolve_times(horizon);
    let schedule = Schedule::new(req.schedule.kind, horizon)?;
    let study = OccupancyStudy::run(&g, &params, x, y, &schedule, &times, req.num_traj, policy)?;
    let (curve, tau) = otoc_saturation(&study.curve, req.local_dim, g.num_vertices(), req.fraction)?;
    let cone = LIGHT_CONE_FRACTION * distance as f64;
    let early = study.first_hits.iter().flatten().filter(|&&t| t < cone).count();
    let ent_bound = match req.cut {
        Some(cut) => Some(tau_ent_lower_bound(&g, &cut, req.local_dim, req.fraction)?),
        None => None,
    };
    let n = match req.axis {
        ScalingAxis::Parameter => req.parameter as f64,
        ScalingAxis::Vertices => g.num_vertices() as f64,
    };
    Ok((
        SuitePoint {
            parameter: req.parameter,
            vertices: g.num_vertices(),
            distance,
            n,
            horizon,
            tau_otoc: tau,
            ent_bound,
            fraction_before_light_cone: early as f64 / req.num_traj as f64,
        },
        curve,
    ))
}

pub fn write_points_csv(out: &mut OutputDir, name: &str, points: &[SuitePoint]) -> Result<(), CliError> {
    out.write_with(name, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "parameter",
            "vertices",
            "distance",
            "n",
            "horizon",
            "tau",
            "ci_low",
            "ci_high",
            "censored",
            "ent_bound",
            "ratio",
            "fraction_before_light_cone",
        ])?;
        for p in points {
            let ratio = p.ent_bound.map(|b| b / p.tau_otoc.tau);
            csv.write_record([
                p.parameter.to_string(),
                p.vertices.to_string(),
                p.distance.to_string(),
                p.n.to_string(),
                p.horizon.to_string(),
                p.tau_otoc.tau.to_string(),
                p.tau_otoc.ci.0.to_string(),
                p.tau_otoc.ci.1.to_string(),
                p.tau_otoc.censored.to_string(),
                p.ent_bound.map(|b| b.to_string()).unwrap_or_default(),
                ratio.map(|r| r.to_string()).unwrap_or_default(),
                p.fraction_before_light_cone.to_string(),
            ])?;
        }
        csv.flush()
    })
}

fn scaling_suite(cfg: &ExperimentConfig, out: &mut OutputDir) -> Result<(Value, Option<CliError>), CliError> {
    let scaling = cfg
        .scaling
        .as_ref()
        .ok_or_else(|| CliError::config("scaling", "section required"))?;
    let policy = RngPolicy::new(cfg.master_seed);
    let fraction = fraction_of(cfg);
    let mut points = Vec::new();
    for &value in &scaling.values {
        let spec = scaling.graph_at(&cfg.graph, value)?;
        let g = spec.build()?;
        let cut = match &cfg.cut {
            Some(c) => Some(c.resolve(&spec, &g)?),
            None => spec.default_cut(&g),
        };
        let (point, curve) = run_point(
            PointRequest {
                graph: &spec,
                local_dim: cfg.local_dim,
                schedule: &cfg.schedule,
                num_traj: cfg.num_traj,
                fraction,
                axis: scaling.axis,
                parameter: value,
                cut,
            },
            &policy.derive(&format!("point-{value}")),
        )?;
        out.write_with(&format!("curves/otoc_{value}.csv"), |w| curve.write_csv(w))?;
        points.push(point);
    }
    write_points_csv(out, "points.csv", &points)?;

    let censored = points.iter().filter(|p| p.tau_otoc.censored).count();
    if censored > 0 {
        let results = json!({ "points": points, "fit": Value::Null, "censored": censored });
        return Ok((results, Some(CliError::Censored { count: censored })));
    }
    let scaled: Vec<ScalingPoint> = points.iter().map(SuitePoint::scaling_point).collect();
    let fit = fit_scaling(&scaled, scaling.model)?;
    out.write_with("scaling.csv", |w| fit.write_csv(w))?;
    if cfg.plots {
        let axis = match scaling.axis {
            ScalingAxis::Parameter => "family parameter",
            ScalingAxis::Vertices => "vertices",
        };
        out.write(
            "scaling.svg",
            scaling_plot("OTOC saturation time", axis, &fit).as_bytes(),
        )?;
    }
    let ent_fit = ent_bound_fit(&points, scaling.model);
    Ok((
        json!({
            "points": points,
            "fit": fit,
            "ent_bound_fit": ent_fit,
            "censored": 0,
        }),
        None,
    ))
}

/// Fit of the closed-form entanglement bounds on the same axis, when every
/// point has one.
pub fn ent_bound_fit(points: &[SuitePoint], model: ScalingModel) -> Option<ScalingFit> {
    let pts: Option<Vec<ScalingPoint>> = points
        .iter()
        .map(|p| p.ent_bound.map(|b| ScalingPoint::exact(p.n, b)))
        .collect();
    fit_scaling(&pts?, model).ok()
}

fn schedule_compare(cfg: &ExperimentConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let g = cfg.graph.build()?;
    let params = ChainParams::new(cfg.local_dim)?;
    let (x, y) = cfg.pair.resolve(&g)?;
    let horizon = cfg.schedule.resolve_horizon(g.distance(x, y));
    let times = cfg.schedule.resolve_times(horizon);
    let policy = RngPolicy::new(cfg.master_seed);
    let cmp = schedule_equivalence_report(&g, &params, x, y, &times, cfg.num_traj, &policy)?;
    out.write_with("poisson.csv", |w| cmp.poisson.write_csv(w))?;
    out.write_with("uniform.csv", |w| cmp.uniform.write_csv(w))?;
    out.write_with("gate_counts.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["expected", "time", "mean_count", "fraction_beyond_half"])?;
        for c in &cmp.gate_counts {
            csv.write_record([
                c.expected.to_string(),
                c.time.to_string(),
                c.mean_count.to_string(),
                c.fraction_beyond_half.to_string(),
            ])?;
        }
        csv.flush()
    })?;
    if cfg.plots {
        let series = |name: &str, c: &SaturationCurve| Series {
            name: name.into(),
            xs: c.sample_times.clone(),
            ys: c.estimates.clone(),
            errs: Some(c.std_errors.clone()),
            style: Style::Line,
        };
        let plot = Plot {
            title: format!("Occupancy of {y} under two schedules"),
            x_label: "time".into(),
            y_label: "P(N)".into(),
            series: vec![
                series(ScheduleKind::PoissonRateOne.name(), &cmp.poisson),
                series(ScheduleKind::UniformRandomEdge.name(), &cmp.uniform),
            ],
            ..Plot::default()
        };
        out.write("schedules.svg", plot.render().as_bytes())?;
    }
    Ok(json!({
        "graph": graph_summary(&g),
        "x": x,
        "y": y,
        "horizon": horizon,
        "num_traj": cfg.num_traj,
        "max_abs_diff": cmp.max_abs_diff,
        "max_pooled_z": cmp.max_pooled_z,
        "gate_counts": cmp.gate_counts,
    }))
}
