//! CSV and JSON-lines writers.
//!
//! Both formats carry the per-frequency records followed by a metadata
//! block: the resolved configuration, constants, sign convention,
//! calibration factor and frequency integrals. Nothing time-dependent is
//! written, so identical configurations give byte-identical files.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

use qfric_core::quantities::CONSTANTS;
use qfric_core::spectrum::{Integrated, SpectrumRow};

use crate::config::{Format, RunConfig};
use crate::sweep::SweepReport;

/// Frozen CSV header.
pub const CSV_HEADER: [&str; 7] = [
    "omega_rad_s",
    "S_static",
    "S_moving",
    "S_friction",
    "err_static",
    "err_moving",
    "converged",
];

pub const TOTALS_HEADER: [&str; 5] = [
    "quantity",
    "value",
    "error",
    "richardson_error",
    "quadrature_error",
];

pub const CONVENTION: &str =
    "powers are the ideal-conductor expression times sign_calibration; positive = absorbed by the particle (environment hotter)";

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn metadata(cfg: &RunConfig, report: &SweepReport) -> Vec<(String, Value)> {
    let mut m: Vec<(String, Value)> = Vec::new();
    for (k, v) in &cfg.echo {
        m.push((format!("config.{k}"), Value::String(v.clone())));
    }
    m.push(("constants.hbar_J_s".into(), json!(CONSTANTS.hbar())));
    m.push(("constants.c_m_s".into(), json!(CONSTANTS.c())));
    m.push(("constants.k_B_J_K".into(), json!(CONSTANTS.k_b())));
    m.push(("constants.eps0_F_m".into(), json!(CONSTANTS.eps0())));
    m.push((
        "power_prefactor".into(),
        json!(cfg.spectrum.units.power_prefactor(&CONSTANTS)),
    ));
    m.push(("convention".into(), json!(CONVENTION)));
    m.push(("sign_calibration".into(), json!(report.calibration)));
    let omega_max = *cfg.spectrum.omega_grid.last().expect("grid is non-empty");
    m.push((
        "dipole_valid".into(),
        json!(cfg.spectrum.particle.dipole_valid_up_to(omega_max)),
    ));
    m.push(("rows".into(), json!(report.result.rows.len())));
    m.push((
        "rows_not_converged".into(),
        json!(report.rows_not_converged()),
    ));
    m.push(("rows_failed".into(), json!(report.result.failures())));
    if let Some(t) = &report.totals {
        for (name, i) in totals(report, t) {
            m.push((format!("total.{name}"), json!(i.value)));
            m.push((format!("total.{name}.error"), json!(i.error())));
        }
        m.push(("total.edge_warning".into(), json!(t.edge_warning)));
    }
    m
}

fn totals(
    report: &SweepReport,
    t: &qfric_core::spectrum::TotalPower,
) -> [(&'static str, Integrated); 3] {
    let c = report.calibration;
    let cal = |i: Integrated| Integrated {
        value: c * i.value,
        ..i
    };
    [
        ("S_static", cal(t.s_static)),
        ("S_moving", cal(t.s_moving)),
        ("S_friction", cal(t.s_friction)),
    ]
}

fn row_values(r: &SpectrumRow, c: f64) -> [f64; 6] {
    [
        r.omega,
        c * r.s_static,
        c * r.s_moving,
        c * r.s_friction,
        r.err_static,
        r.err_moving,
    ]
}

fn csv_error(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

fn write_metadata_comments<W: Write>(out: &mut W, meta: &[(String, Value)]) -> io::Result<()> {
    for (k, v) in meta {
        match v {
            Value::String(s) => writeln!(out, "# {k} = {s}")?,
            other => writeln!(out, "# {k} = {other}")?,
        }
    }
    Ok(())
}

/// Per-frequency records.
pub fn write_spectrum<W: Write>(
    mut out: W,
    cfg: &RunConfig,
    report: &SweepReport,
) -> io::Result<()> {
    let c = report.calibration;
    let meta = metadata(cfg, report);
    match cfg.format {
        Format::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(CSV_HEADER).map_err(csv_error)?;
                for r in &report.result.rows {
                    let mut rec: Vec<String> = row_values(r, c).iter().map(|x| num(*x)).collect();
                    rec.push(r.converged.to_string());
                    w.write_record(&rec).map_err(csv_error)?;
                }
                w.flush()?;
            }
            write_metadata_comments(&mut out, &meta)?;
        }
        Format::JsonLines => {
            for r in &report.result.rows {
                let v = row_values(r, c);
                let mut obj = Map::new();
                for (name, x) in CSV_HEADER.iter().zip(v) {
                    obj.insert(name.to_string(), json!(x));
                }
                obj.insert("converged".into(), json!(r.converged));
                if let Some(e) = &r.failure {
                    obj.insert("failure".into(), json!(e.to_string()));
                }
                writeln!(out, "{}", Value::Object(obj))?;
            }
            write_metadata_line(&mut out, &meta)?;
        }
    }
    out.flush()
}

fn write_metadata_line<W: Write>(out: &mut W, meta: &[(String, Value)]) -> io::Result<()> {
    let obj: Map<String, Value> = meta.iter().cloned().collect();
    writeln!(out, "{}", json!({ "metadata": obj }))
}

/// Frequency-integrated powers.
pub fn write_totals<W: Write>(mut out: W, cfg: &RunConfig, report: &SweepReport) -> io::Result<()> {
    let meta = metadata(cfg, report);
    let rows: Vec<(&str, Integrated)> = match &report.totals {
        Some(t) => totals(report, t).to_vec(),
        None => Vec::new(),
    };
    match cfg.format {
        Format::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(TOTALS_HEADER).map_err(csv_error)?;
                for (name, i) in &rows {
                    w.write_record([
                        name.to_string(),
                        num(i.value),
                        num(i.error()),
                        num(i.richardson),
                        num(i.quadrature),
                    ])
                    .map_err(csv_error)?;
                }
                w.flush()?;
            }
            write_metadata_comments(&mut out, &meta)?;
        }
        Format::JsonLines => {
            for (name, i) in &rows {
                let line = json!({
                    "quantity": name,
                    "value": i.value,
                    "error": i.error(),
                    "richardson_error": i.richardson,
                    "quadrature_error": i.quadrature,
                });
                writeln!(out, "{line}")?;
            }
            write_metadata_line(&mut out, &meta)?;
        }
    }
    out.flush()
}
