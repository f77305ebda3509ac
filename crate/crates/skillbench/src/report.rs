//! CSV writers. Numbers use a fixed number of decimals so reruns are
//! byte-identical; undefined values are written as `NaN` or `undefined`.

use std::io::Write;

use skillbench_core::sensitivity::SensitivitySurface;
use skillbench_core::{EmulatorSpec, TrainingCurve};

use crate::runner::{pair_label, TableCell};

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.6}")
    }
}

/// Display labels for a list of emulators. Repeated kinds get a numeric
/// suffix (`Elo`, `Elo-2`, …) so every label is unique.
pub fn emulator_labels(emulators: &[EmulatorSpec]) -> Vec<String> {
    let mut out = Vec::with_capacity(emulators.len());
    for (i, e) in emulators.iter().enumerate() {
        let before = emulators[..i].iter().filter(|o| o.name() == e.name()).count();
        out.push(if before == 0 { e.name().to_string() } else { format!("{}-{}", e.name(), before + 1) });
    }
    out
}

/// `emulator,af,budget,mean,stderr,runs`, one row per checkpoint of each
/// cell. Cells are emulator-major with one label per emulator. Undefined
/// cells keep their rows with `undefined` statistics.
pub fn write_table<W: Write>(w: W, cells: &[TableCell], labels: &[String], checkpoints: &[usize]) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["emulator", "af", "budget", "mean", "stderr", "runs"])?;
    let per = cells.len() / labels.len().max(1);
    for (i, cell) in cells.iter().enumerate() {
        let label = labels[i / per.max(1)].as_str();
        match &cell.report {
            Some(rep) => {
                for c in &rep.checkpoints {
                    csv.write_record([
                        label,
                        cell.af.name(),
                        &c.budget.to_string(),
                        &fmt_f64(c.mean),
                        &fmt_f64(c.stderr),
                        &c.runs.to_string(),
                    ])?;
                }
            }
            None => {
                for b in checkpoints {
                    csv.write_record([label, cell.af.name(), &b.to_string(), "undefined", "undefined", "0"])?;
                }
            }
        }
    }
    csv.flush()?;
    Ok(())
}

/// Per-run accuracies: `emulator,af,budget,run,accuracy`.
pub fn write_table_runs<W: Write>(w: W, cells: &[TableCell], labels: &[String]) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["emulator", "af", "budget", "run", "accuracy"])?;
    let per = cells.len() / labels.len().max(1);
    for (i, cell) in cells.iter().enumerate() {
        let label = labels[i / per.max(1)].as_str();
        if let Some(rep) = &cell.report {
            for c in &rep.checkpoints {
                for (r, a) in c.accuracies.iter().enumerate() {
                    csv.write_record([label, cell.af.name(), &c.budget.to_string(), &r.to_string(), &fmt_f64(*a)])?;
                }
            }
        }
    }
    csv.flush()?;
    Ok(())
}

pub fn write_curve<W: Write>(w: W, curve: &TrainingCurve) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["budget", "train_acc_mean", "train_acc_sigma", "eval_acc_mean", "eval_acc_sigma"])?;
    for p in &curve.points {
        csv.write_record([
            p.budget.to_string(),
            fmt_f64(p.train_acc_mean),
            fmt_f64(p.train_acc_sigma),
            fmt_f64(p.eval_acc_mean),
            fmt_f64(p.eval_acc_sigma),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

fn surface_header(s: &SensitivitySurface) -> Vec<String> {
    let (a, b) = (s.raw.spec.pair.0.name(), s.raw.spec.pair.1.name());
    vec![format!("log10_{a}"), format!("log10_{b}"), a.to_string(), b.to_string(), "accuracy".into(), "default".into()]
}

fn write_points<W: Write>(w: W, s: &SensitivitySurface, coords: &[[f64; 2]], values: &[f64]) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(surface_header(s))?;
    let (pa, pb) = s.raw.spec.pair;
    let base = match s.raw.emulator {
        EmulatorSpec::TrueSkill(p) | EmulatorSpec::TrueSkillPlayers(p) => p,
        _ => unreachable!("surfaces are only built for TrueSkill variants"),
    };
    for (c, v) in coords.iter().zip(values) {
        let is_default = c[0] == 0.0 && c[1] == 0.0;
        csv.write_record([
            fmt_f64(c[0]),
            fmt_f64(c[1]),
            fmt_f64(pa.get(&base) * 10f64.powf(c[0])),
            fmt_f64(pb.get(&base) * 10f64.powf(c[1])),
            fmt_f64(*v),
            (is_default as u8).to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Raw grid; the `default` column marks the base-parameter point.
pub fn write_surface_raw<W: Write>(w: W, s: &SensitivitySurface) -> csv::Result<()> {
    write_points(w, s, &s.raw.coords, &s.raw.accuracy)
}

pub fn write_surface_smoothed<W: Write>(w: W, s: &SensitivitySurface) -> csv::Result<()> {
    write_points(w, s, &s.display_coords, &s.smoothed)
}

/// One row per surface with its optimum, default value and ranges.
pub fn write_surface_summary<W: Write>(w: W, surfaces: &[(String, SensitivitySurface)]) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "variant",
        "pair",
        "optimum",
        "argmax_x",
        "argmax_y",
        "default_value",
        "gap",
        "range",
        "raw_range",
        "default_near_optimum",
    ])?;
    for (label, s) in surfaces {
        csv.write_record([
            label.clone(),
            pair_label(s.raw.spec.pair),
            fmt_f64(s.optimum),
            fmt_f64(s.argmax[0]),
            fmt_f64(s.argmax[1]),
            fmt_f64(s.default_value),
            fmt_f64(s.optimum - s.default_value),
            fmt_f64(s.range),
            fmt_f64(s.raw_range),
            s.default_near_optimum.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Smoothed max − min over all of a variant's surfaces.
pub fn union_range<'a>(surfaces: impl IntoIterator<Item = &'a SensitivitySurface>) -> f64 {
    let (lo, hi) = surfaces
        .into_iter()
        .flat_map(|s| s.smoothed.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}
