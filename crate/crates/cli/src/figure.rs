//! Data for the three figures: the additivity region, and the Pauli
//! tetrahedron mapped into the Rényi-2 and von Neumann entropy planes.

use std::path::{Path, PathBuf};

use chanent::additivity::region_scan;
use chanent::qubit::{
    boundary_curves, chord_witness, sample_tetrahedron_with, tetrahedron_edges, vertex_points,
    CurvePoint, EntropyKind, TetraSample,
};
use clap::ValueEnum;

use crate::config::{CliError, RunConfig};
use crate::entropy::base_name;
use crate::output::{fmt_f, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Figure {
    Fig1,
    #[value(name = "fig2_3")]
    Fig2And3,
    Fig4,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2And3 => "fig2_3",
            Figure::Fig4 => "fig4",
        }
    }
}

/// Dimensions overlaid in the region plot.
pub const REGION_DIMS: [usize; 3] = [2, 3, 4];
pub const DEFAULT_SAMPLES: usize = 2000;
/// Vertical slices used when looking for a dent below the chord `CD`.
pub const WITNESS_SLICES: usize = 8;
pub const WITNESS_MARGIN: f64 = 1e-6;

const TETRA_HEADER: [&str; 9] = [
    "edge_or_sample",
    "b0",
    "b1",
    "b2",
    "b3",
    "s_map",
    "s_min",
    "entropy_kind",
    "base",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub figure: Figure,
    pub table: Table,
    /// Reference lines, written next to the main table.
    pub lines: Option<Table>,
    /// Diagnostic lines for stderr.
    pub notes: Vec<String>,
}

pub fn run_figure(figure: Figure, cfg: &RunConfig) -> Result<FigureData, CliError> {
    cfg.validate()?;
    match figure {
        Figure::Fig1 => fig1(cfg),
        Figure::Fig2And3 => tetrahedron(cfg, EntropyKind::Renyi2),
        Figure::Fig4 => tetrahedron(cfg, EntropyKind::VonNeumann),
    }
}

fn fig1(cfg: &RunConfig) -> Result<FigureData, CliError> {
    let b = |x: f64| fmt_f(cfg.base.from_nats(x));
    let mut table = Table::new(&["s1", "s2", "n", "m", "in_region"]);
    let mut lines = Table::new(&["line", "n", "s1", "s2"]);
    for n in REGION_DIMS {
        let scan = region_scan::<f64>(n, n, cfg.grid)?;
        for p in &scan.points {
            table.push(vec![
                b(p.s1),
                b(p.s2),
                p.n.to_string(),
                p.m.to_string(),
                p.in_region.to_string(),
            ]);
        }
        for l in &scan.lines {
            lines.push(vec![
                l.line.label().into(),
                l.n.to_string(),
                b(l.s1),
                b(l.s2),
            ]);
        }
    }
    Ok(FigureData {
        figure: Figure::Fig1,
        table,
        lines: Some(lines),
        notes: Vec::new(),
    })
}

fn tetrahedron(cfg: &RunConfig, kind: EntropyKind) -> Result<FigureData, CliError> {
    let options = cfg.min_out_options(cfg.seed);
    let edges: Vec<CurvePoint<f64>> = match kind {
        EntropyKind::Renyi2 => boundary_curves(cfg.grid)?,
        EntropyKind::VonNeumann => tetrahedron_edges(cfg.grid, kind, &options)?,
    };
    let samples: Vec<TetraSample<f64>> =
        sample_tetrahedron_with(cfg.trials_or(DEFAULT_SAMPLES), cfg.seed, kind, &options)?;

    let b = |x: f64| fmt_f(cfg.base.from_nats(x));
    let base = base_name(cfg);
    let mut table = Table::new(&TETRA_HEADER);
    let mut row = |label: String, w: [f64; 4], s_map: f64, s_min: f64| {
        table.push(vec![
            label,
            fmt_f(w[0]),
            fmt_f(w[1]),
            fmt_f(w[2]),
            fmt_f(w[3]),
            b(s_map),
            b(s_min),
            kind.name().into(),
            base.into(),
        ]);
    };
    for e in &edges {
        row(e.edge.label().into(), e.b, e.s_map, e.s_min);
    }
    for s in &samples {
        row(s.index.to_string(), s.b, s.s_map, s.s_min);
    }

    let mut notes = Vec::new();
    if kind == EntropyKind::VonNeumann {
        let points: Vec<(f64, f64)> = edges
            .iter()
            .map(|e| (e.s_map, e.s_min))
            .chain(samples.iter().map(|s| (s.s_map, s.s_min)))
            .collect();
        let [_, _, c, d] = vertex_points::<f64>(kind);
        notes.push(
            match chord_witness(&points, c, d, WITNESS_SLICES, WITNESS_MARGIN) {
                Some(w) => format!(
                    "nonconvexity_witness,CD,{},{},{},{}",
                    b(w.slice_lo),
                    b(w.slice_hi),
                    w.points_in_slice,
                    b(w.min_gap)
                ),
                None => "nonconvexity_witness,none".into(),
            },
        );
    }
    Ok(FigureData {
        figure: if kind == EntropyKind::Renyi2 {
            Figure::Fig2And3
        } else {
            Figure::Fig4
        },
        table,
        lines: None,
        notes,
    })
}

/// `<stem>.lines.csv` next to `out`.
pub fn lines_path(out: &Path) -> PathBuf {
    sibling(out, "lines.csv")
}

/// `<stem>.gp` next to `out`.
pub fn script_path(out: &Path) -> PathBuf {
    sibling(out, "gp")
}

fn sibling(out: &Path, ext: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "figure".into());
    out.with_file_name(format!("{stem}.{ext}"))
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Gnuplot script reading the CSV files by their names relative to the script.
pub fn plot_script(data: &FigureData, out: &Path, cfg: &RunConfig) -> String {
    let csv = file_name(out);
    let unit = if base_name(cfg) == "2" {
        "bits"
    } else {
        "nats"
    };
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside right\n");
    match data.figure {
        Figure::Fig1 => {
            let lines = file_name(&lines_path(out));
            s.push_str(&format!("set xlabel 'S_2^{{map}}(Phi_1) [{unit}]'\nset ylabel 'S_2^{{map}}(Phi_2) [{unit}]'\n"));
            s.push_str("set size square\n");
            let mut parts = Vec::new();
            for n in REGION_DIMS {
                parts.push(format!(
                    "'{csv}' every ::1 using (column(3)=={n} && strcol(5) eq 'true' ? column(1) : 1/0):2 with points pt 7 ps 0.3 title 'R, n={n}'"
                ));
                parts.push(format!(
                    "'{lines}' every ::1 using (strcol(1) eq 'alpha' && column(2)=={n} ? column(3) : 1/0):4 with lines title 'alpha_{n}'"
                ));
            }
            parts.push(format!(
                "'{lines}' every ::1 using (strcol(1) eq 'diagonal' && column(2)==2 ? column(3) : 1/0):4 with lines dt 2 title 'diagonal'"
            ));
            s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
        }
        Figure::Fig2And3 | Figure::Fig4 => {
            let label = if data.figure == Figure::Fig4 {
                "S"
            } else {
                "S_2"
            };
            s.push_str(&format!(
                "set xlabel '{label}^{{map}} [{unit}]'\nset ylabel '{label}^{{min}} [{unit}]'\n"
            ));
            let edge_names: Vec<&str> = {
                let mut v: Vec<&str> = data
                    .table
                    .rows
                    .iter()
                    .map(|r| r[0].as_str())
                    .filter(|l| l.chars().all(|c| c.is_ascii_uppercase()))
                    .collect();
                v.dedup();
                v
            };
            let mut parts = vec![format!(
                "'{csv}' every ::1 using (strcol(1) =~ '^[0-9]' ? column(6) : 1/0):7 with points pt 7 ps 0.2 title 'Pauli channels'"
            )];
            for e in edge_names {
                parts.push(format!(
                    "'{csv}' every ::1 using (strcol(1) eq '{e}' ? column(6) : 1/0):7 with lines lw 2 title '{e}'"
                ));
            }
            s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
        }
    }
    s
}

/// Writes the main CSV to `out`, plus the reference lines and plot script
/// beside it.
pub fn write_figure(data: &FigureData, out: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    data.table.emit(Some(out))?;
    if let Some(lines) = &data.lines {
        lines.emit(Some(&lines_path(out)))?;
    }
    std::fs::write(script_path(out), plot_script(data, out, cfg))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths() {
        let out = Path::new("/tmp/x/fig1.csv");
        assert_eq!(lines_path(out), Path::new("/tmp/x/fig1.lines.csv"));
        assert_eq!(script_path(out), Path::new("/tmp/x/fig1.gp"));
    }

    #[test]
    fn fig2_3_has_the_corner_points() {
        let cfg = RunConfig {
            trials: Some(50),
            grid: 11,
            ..RunConfig::default()
        };
        let d = run_figure(Figure::Fig2And3, &cfg).unwrap();
        assert_eq!(d.table.rows.len(), 3 * 11 + 50);
        let ln2 = 2f64.ln();
        for (x, y) in [(0.0, 0.0), (ln2, 0.0), (2.0 * ln2, ln2)] {
            assert!(d.table.rows.iter().any(|r| {
                let sx: f64 = r[5].parse().unwrap();
                let sy: f64 = r[6].parse().unwrap();
                (sx - x).abs() < 1e-12 && (sy - y).abs() < 1e-12
            }));
        }
        let script = plot_script(&d, Path::new("out/fig2_3.csv"), &cfg);
        assert!(script.contains("'fig2_3.csv'"));
    }

    #[test]
    fn fig1_diagonal_is_outside_except_origin() {
        let cfg = RunConfig {
            grid: 21,
            ..RunConfig::default()
        };
        let d = run_figure(Figure::Fig1, &cfg).unwrap();
        assert_eq!(d.table.rows.len(), 3 * 21 * 21);
        for r in &d.table.rows {
            if r[0] == r[1] {
                let origin = r[0].parse::<f64>().unwrap() == 0.0;
                assert_eq!(r[4] == "true", origin, "{r:?}");
            }
        }
    }
}
