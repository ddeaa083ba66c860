//! Side-by-side OTOC and entanglement scalings across graph families.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::{GraphFamily, GraphSpec, ScalingAxis, ScheduleSpec};
use super::experiments::{ent_bound_fit, run_point, write_points_csv, PointRequest, SuitePoint};
use super::report::{build_id, OutputDir, Report, SCHEMA_VERSION};
use super::{CliError, Profile};
use crate::chain::{RngPolicy, ScheduleKind};
use crate::estimators::{default_threshold_fraction, fit_scaling, ScalingFit, ScalingModel, ScalingPoint};

struct RowSpec {
    key: &'static str,
    label: &'static str,
    otoc_expected: &'static str,
    ent_expected: &'static str,
    graph: GraphSpec,
    lattice_dim: usize,
    values: Vec<usize>,
    otoc_models: Vec<ScalingModel>,
    ent_model: ScalingModel,
    horizon_factor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub key: String,
    pub label: String,
    pub otoc_expected: String,
    pub ent_expected: String,
    pub reproduced: bool,
    pub points: Vec<SuitePoint>,
    pub otoc_fits: Vec<ScalingFit>,
    pub ent_fit: Option<ScalingFit>,
    pub censored: usize,
}

fn tree(z: Option<usize>) -> GraphSpec {
    GraphSpec {
        z,
        ..GraphSpec::family(if z.is_some() {
            GraphFamily::ZaryTree
        } else {
            GraphFamily::BinaryTree
        })
    }
}

fn rows(profile: Profile) -> Vec<RowSpec> {
    let extended = profile == Profile::Extended;
    let pick = |desk: Vec<usize>, ext: Vec<usize>| if extended { ext } else { desk };
    vec![
        RowSpec {
            key: "lattice_1d",
            label: "Euclidean lattice, D = 1",
            otoc_expected: "n^(1/D)",
            ent_expected: "n^(1/D)",
            graph: GraphSpec::family(GraphFamily::Lattice),
            lattice_dim: 1,
            values: pick(vec![8, 16, 32, 64], vec![8, 16, 32, 64, 128]),
            otoc_models: vec![ScalingModel::Power],
            ent_model: ScalingModel::Power,
            horizon_factor: 6.0,
        },
        RowSpec {
            key: "lattice_2d",
            label: "Euclidean lattice, D = 2",
            otoc_expected: "n^(1/D)",
            ent_expected: "n^(1/D)",
            graph: GraphSpec::family(GraphFamily::Lattice),
            lattice_dim: 2,
            values: pick(vec![4, 6, 8, 10, 12], vec![4, 6, 8, 10, 12, 16]),
            otoc_models: vec![ScalingModel::Power],
            ent_model: ScalingModel::Power,
            horizon_factor: 6.0,
        },
        RowSpec {
            key: "binary_tree",
            label: "Binary tree",
            otoc_expected: "log n",
            ent_expected: "n",
            graph: tree(None),
            lattice_dim: 0,
            values: pick((3..=8).collect(), (4..=10).collect()),
            otoc_models: vec![ScalingModel::Log, ScalingModel::Power],
            ent_model: ScalingModel::Linear,
            horizon_factor: 4.0,
        },
        RowSpec {
            key: "tree_z8",
            label: "Tree with degree z = 8",
            otoc_expected: "n^(1 - log d^2 / log z)",
            ent_expected: "n/z",
            graph: tree(Some(8)),
            lattice_dim: 0,
            values: vec![1, 2, 3, 4],
            otoc_models: vec![ScalingModel::Power, ScalingModel::Log],
            ent_model: ScalingModel::Linear,
            horizon_factor: 6.0,
        },
        RowSpec {
            key: "dumbbell",
            label: "Dumbbell graph",
            otoc_expected: "log n / n",
            ent_expected: "n",
            graph: GraphSpec::family(GraphFamily::Dumbbell),
            lattice_dim: 0,
            values: pick(vec![4, 8, 16, 32, 64], vec![4, 8, 16, 32, 64, 128]),
            otoc_models: vec![ScalingModel::Log, ScalingModel::Power],
            ent_model: ScalingModel::Linear,
            horizon_factor: 10.0,
        },
    ]
}

fn fit_text(fit: &ScalingFit) -> String {
    let (a, b) = fit.coefficients;
    let form = match fit.model {
        ScalingModel::Log => format!("{a:.3}·ln n {b:+.3}"),
        ScalingModel::Power => format!("{a:.3}·n^{b:.3}"),
        ScalingModel::Linear => format!("{a:.4}·n {b:+.3}"),
    };
    format!("{form} (R² {:.3})", fit.r_squared)
}

/// Runs every family at the profile's sizes with `d = 2` and writes
/// `table1.csv`, `table1.md`, per-row point files and plots.
pub fn reproduce_table1(profile: Profile, seed: u64, output_dir: &Path) -> Result<Report, CliError> {
    let started = Instant::now();
    let mut out = OutputDir::create(output_dir)?;
    let local_dim = 2;
    let fraction = default_threshold_fraction(local_dim);
    let num_traj = match profile {
        Profile::Desk => 2_000,
        Profile::Extended => 10_000,
    };
    let policy = RngPolicy::new(seed);
    let mut table = Vec::new();
    for row in rows(profile) {
        let schedule = ScheduleSpec {
            kind: ScheduleKind::PoissonRateOne,
            horizon_factor: Some(row.horizon_factor),
            ..ScheduleSpec::default()
        };
        let mut points = Vec::new();
        for &value in &row.values {
            let mut spec = row.graph.clone();
            match spec.family {
                GraphFamily::Lattice => spec.dims = Some(vec![value; row.lattice_dim]),
                GraphFamily::Dumbbell => spec.m = Some(value),
                _ => spec.depth = Some(value as u32),
            }
            let g = spec.build()?;
            let (point, curve) = run_point(
                PointRequest {
                    graph: &spec,
                    local_dim,
                    schedule: &schedule,
                    num_traj,
                    fraction,
                    axis: ScalingAxis::Vertices,
                    parameter: value,
                    cut: spec.default_cut(&g),
                },
                &policy.derive(&format!("{}-{value}", row.key)),
            )?;
            out.write_with(&format!("table1/{}_otoc_{value}.csv", row.key), |w| curve.write_csv(w))?;
            points.push(point);
        }
        write_points_csv(&mut out, &format!("table1/{}.csv", row.key), &points)?;
        let censored = points.iter().filter(|p| p.tau_otoc.censored).count();
        let scaled: Vec<ScalingPoint> = points.iter().map(SuitePoint::scaling_point).collect();
        let otoc_fits = if censored == 0 {
            row.otoc_models
                .iter()
                .map(|&m| fit_scaling(&scaled, m))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            Vec::new()
        };
        table.push(TableRow {
            key: row.key.into(),
            label: row.label.into(),
            otoc_expected: row.otoc_expected.into(),
            ent_expected: row.ent_expected.into(),
            reproduced: true,
            ent_fit: ent_bound_fit(&points, row.ent_model),
            points,
            otoc_fits,
            censored,
        });
    }
    table.insert(
        1,
        TableRow {
            key: "hyperbolic_3d".into(),
            label: "Hyperbolic space, D = 3".into(),
            otoc_expected: "log n".into(),
            ent_expected: "sqrt(n)".into(),
            reproduced: false,
            points: Vec::new(),
            otoc_fits: Vec::new(),
            ent_fit: None,
            censored: 0,
        },
    );

    out.write_with("table1.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "row",
            "otoc_expected",
            "otoc_measured",
            "ent_expected",
            "ent_bound_measured",
            "censored",
        ])?;
        for r in &table {
            let measured = if !r.reproduced {
                "not reproduced".to_string()
            } else if r.censored > 0 {
                "censored".to_string()
            } else {
                r.otoc_fits.iter().map(fit_text).collect::<Vec<_>>().join("; ")
            };
            let ent = match (&r.ent_fit, r.reproduced) {
                (Some(f), _) => fit_text(f),
                (None, false) => "not reproduced".into(),
                (None, true) => String::new(),
            };
            csv.write_record([
                r.label.clone(),
                r.otoc_expected.clone(),
                measured,
                r.ent_expected.clone(),
                ent,
                r.censored.to_string(),
            ])?;
        }
        csv.flush()
    })?;
    let mut md = String::from("| graph | OTOC (expected) | OTOC (measured) | entanglement (expected) | entanglement bound (measured) |\n|---|---|---|---|---|\n");
    for r in &table {
        let measured = if !r.reproduced {
            "not reproduced".into()
        } else {
            r.otoc_fits.iter().map(fit_text).collect::<Vec<_>>().join("<br>")
        };
        let ent = r
            .ent_fit
            .as_ref()
            .map(fit_text)
            .unwrap_or_else(|| "not reproduced".into());
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} |",
            r.label, r.otoc_expected, measured, r.ent_expected, ent
        );
    }
    out.write("table1.md", md.as_bytes())?;

    let censored: usize = table.iter().map(|r| r.censored).sum();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        build: build_id(),
        experiment: "table1".into(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        config: None,
        results: json!({
            "profile": profile,
            "seed": seed,
            "num_traj": num_traj,
            "local_dim": local_dim,
            "threshold_fraction": fraction,
            "rows": table,
        }),
        files: out.manifest(),
    };
    out.write_report(&report)?;
    if censored > 0 {
        return Err(CliError::Censored { count: censored });
    }
    Ok(report)
}
