//! Deterministic CSV and JSON emission.
//!
//! CSV numbers carry 17 significant digits (`{:.16e}`), `.` as the decimal
//! separator and `\n` line endings, so identical configs produce
//! byte-identical files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crate::runner::{ResultBundle, SummaryRow};

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn write_lines(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    let mut text = String::with_capacity(4096);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Write all CSV files for one bundle into `dir`; returns the file names.
pub fn write_csv(bundle: &ResultBundle, dir: &Path) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let name = &bundle.config.name;
    let mut written = Vec::new();

    for traj in &bundle.trajectories {
        let file = format!("{name}_{}.csv", traj.series);
        write_lines(
            &dir.join(&file),
            "t,value",
            traj.times
                .iter()
                .zip(&traj.values)
                .map(|(t, v)| format!("{},{}", fmt_f64(*t), fmt_f64(*v))),
        )?;
        written.push(file);
    }

    if !bundle.extractions.is_empty() {
        let file = format!("{name}_extraction.csv");
        write_lines(
            &dir.join(&file),
            "series,kind,value,fit_quality,window_start,window_end,predicted,rel_err",
            bundle.extractions.iter().map(|e| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    e.series,
                    e.kind,
                    fmt_f64(e.value),
                    fmt_f64(e.fit_quality),
                    fmt_f64(e.window[0]),
                    fmt_f64(e.window[1]),
                    e.predicted.map(fmt_f64).unwrap_or_default(),
                    e.rel_err.map(fmt_f64).unwrap_or_default(),
                )
            }),
        )?;
        written.push(file);
    }

    if let Some(regime) = &bundle.regime {
        let file = format!("{name}_regime.csv");
        write_lines(
            &dir.join(&file),
            "kind,period,relax_rate",
            std::iter::once(format!(
                "{},{},{}",
                regime.kind,
                regime.period.map(fmt_f64).unwrap_or_default(),
                regime.relax_rate.map(fmt_f64).unwrap_or_default(),
            )),
        )?;
        written.push(file);
    }

    if !bundle.spectrum.is_empty() {
        let file = format!("{name}_spectrum.csv");
        let width = bundle
            .spectrum
            .iter()
            .map(|r| r.real_parts.len())
            .max()
            .unwrap_or(0);
        let mut header = String::from("gamma,gap");
        for k in 1..=width {
            header.push_str(&format!(",e{k}"));
        }
        header.push_str(",error");
        write_lines(
            &dir.join(&file),
            &header,
            bundle.spectrum.iter().map(|r| {
                let mut row = format!("{},{}", fmt_f64(r.gamma), fmt_f64(r.gap));
                for k in 0..width {
                    row.push(',');
                    if let Some(v) = r.real_parts.get(k) {
                        row.push_str(&fmt_f64(*v));
                    }
                }
                row.push(',');
                if let Some(err) = &r.error {
                    row.push_str(&err.replace(',', ";"));
                }
                row
            }),
        )?;
        written.push(file);
    }

    if !bundle.freezing.is_empty() {
        let file = format!("{name}_freezing.csv");
        write_lines(
            &dir.join(&file),
            "gamma,diagnostic",
            bundle
                .freezing
                .iter()
                .map(|f| format!("{},{}", fmt_f64(f.gamma), fmt_f64(f.diagnostic))),
        )?;
        written.push(file);
    }

    Ok(written)
}

/// Write the full-precision JSON bundle.
pub fn write_json(bundle: &ResultBundle, dir: &Path) -> Result<String> {
    fs::create_dir_all(dir)?;
    let file = format!("{}_bundle.json", bundle.config.name);
    let text = serde_json::to_string_pretty(bundle)?;
    fs::write(dir.join(&file), text + "\n")?;
    Ok(file)
}

/// Write a sweep summary: one row per parameter value.
pub fn write_summary(name: &str, rows: &[SummaryRow], dir: &Path) -> Result<String> {
    fs::create_dir_all(dir)?;
    let file = format!("{name}_summary.csv");
    write_lines(
        &dir.join(&file),
        "param,measured,predicted,rel_err",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{}",
                fmt_f64(r.param),
                fmt_f64(r.measured),
                fmt_f64(r.predicted),
                fmt_f64(r.rel_err),
            )
        }),
    )?;
    Ok(file)
}
