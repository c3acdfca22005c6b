//! Rendering of grid reports as text pictures, JSON and Markdown.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grassmann::{SamplingStrategy, Subspace};
use crate::osserman::{
    CellVerdicts, GridReport, Mark, MarkGrid, SubspaceOrigin, Verdict, VerdictKind, Witness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Md,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub signature: [usize; 2],
    pub tensor: String,
    pub config: ConfigJson,
    /// Jordan Osserman picture, rows from `s = q` down to `s = 0`.
    pub jordan_grid: Vec<String>,
    /// Osserman picture in the same layout.
    pub osserman_grid: Vec<String>,
    pub cells: Vec<CellJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<ExpectedJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub samples: usize,
    pub seed: u64,
    pub height: u32,
    pub max_tries: usize,
    pub coordinate_cap: usize,
    pub strategy: SamplingStrategy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub r: usize,
    pub s: usize,
    pub osserman: VerdictJson,
    pub jordan: VerdictJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub kind: VerdictKind,
    pub samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fingerprint: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub sigma1: SubspaceJson,
    pub sigma2: SubspaceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub label: String,
    pub origin: SubspaceOrigin,
    /// Basis vectors as rational strings.
    pub basis: Vec<Vec<String>>,
    pub fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedJson {
    pub a: usize,
    pub grid: Vec<String>,
    pub matches: bool,
    pub mismatches: Vec<[usize; 2]>,
}

fn subspace_json(sigma: &Subspace, origin: SubspaceOrigin, fingerprint: String) -> SubspaceJson {
    SubspaceJson {
        label: sigma.to_string(),
        origin,
        basis: sigma
            .basis()
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect())
            .collect(),
        fingerprint,
    }
}

fn witness_json(w: &Witness) -> WitnessJson {
    WitnessJson {
        sigma1: subspace_json(&w.sigma1, w.origin1, w.fingerprint1.to_string()),
        sigma2: subspace_json(&w.sigma2, w.origin2, w.fingerprint2.to_string()),
    }
}

fn verdict_json(v: &Verdict) -> VerdictJson {
    VerdictJson {
        kind: v.kind,
        samples_used: v.samples_used,
        fingerprint: v.fingerprint.as_ref().map(ToString::to_string),
        witness: v.witness.as_ref().map(witness_json),
    }
}

fn grid_rows(grid: &MarkGrid, ascii: bool) -> Vec<String> {
    grid.render(ascii).lines().map(str::to_string).collect()
}

/// The JSON document for a report, optionally compared with an expected
/// picture for `R_{Phi_a}`.
pub fn report_json(report: &GridReport, expected: Option<(usize, &MarkGrid)>) -> ReportJson {
    let c = &report.config;
    ReportJson {
        signature: [report.signature.p(), report.signature.q()],
        tensor: report.tensor.clone(),
        config: ConfigJson {
            samples: c.samples,
            seed: c.seed,
            height: c.height,
            max_tries: c.max_tries,
            coordinate_cap: c.coordinate_cap,
            strategy: c.strategy,
        },
        jordan_grid: grid_rows(&report.jordan_marks(), false),
        osserman_grid: grid_rows(&report.osserman_marks(), false),
        cells: report
            .cells
            .iter()
            .map(|(pair, CellVerdicts { osserman, jordan })| CellJson {
                r: pair.r,
                s: pair.s,
                osserman: verdict_json(osserman),
                jordan: verdict_json(jordan),
            })
            .collect(),
        expected: expected.map(|(a, grid)| {
            let mismatches: Vec<[usize; 2]> = report
                .jordan_marks()
                .differences(grid)
                .into_iter()
                .map(|(r, s, _, _)| [r, s])
                .collect();
            ExpectedJson {
                a,
                grid: grid_rows(grid, false),
                matches: mismatches.is_empty(),
                mismatches,
            }
        }),
    }
}

/// Picture with axis labels: `s` runs from `q` at the top down to `0`, `r`
/// increases to the right.
pub fn labeled_grid(grid: &MarkGrid, ascii: bool) -> String {
    let sig = grid.signature;
    let width = sig.p().max(sig.q()).to_string().len();
    let mut out = String::new();
    for s in (0..=sig.q()).rev() {
        let cells: Vec<String> = (0..=sig.p())
            .map(|r| format!("{:>width$}", grid.get(r, s).symbol(ascii)))
            .collect();
        let _ = writeln!(out, "  {s:>width$} | {}", cells.join(" "));
    }
    let _ = writeln!(
        out,
        "  {:>width$} +-{}",
        "",
        "-".repeat((sig.p() + 1) * (width + 1) - 1)
    );
    let labels: Vec<String> = (0..=sig.p()).map(|r| format!("{r:>width$}")).collect();
    let _ = writeln!(out, "  {:>width$}   {}  r", "", labels.join(" "));
    out
}

fn legend(ascii: bool) -> String {
    format!(
        "{} Jordan Osserman, {} not Jordan Osserman, {} inadmissible",
        Mark::Star.symbol(ascii),
        Mark::Circle.symbol(ascii),
        Mark::Inadmissible.symbol(ascii)
    )
}

fn verdict_text(v: &Verdict) -> String {
    match &v.fingerprint {
        Some(fp) => format!("{v}; fingerprint {fp}"),
        None => v.to_string(),
    }
}

/// Renders a report in the requested format.
pub fn render_grid(
    report: &GridReport,
    format: Format,
    ascii: bool,
    expected: Option<(usize, &MarkGrid)>,
) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(report, expected))
                .expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(report, ascii, expected),
        Format::Md => render_md(report, ascii, expected),
    }
}

fn render_text(report: &GridReport, ascii: bool, expected: Option<(usize, &MarkGrid)>) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "tensor: {}", report.tensor);
    let _ = writeln!(
        out,
        "scan: {} samples per type, seed {}, height {}, up to {} coordinate subspaces",
        c.samples, c.seed, c.height, c.coordinate_cap
    );
    let _ = writeln!(out, "\nJordan Osserman types ({}):", legend(ascii));
    out.push_str(&labeled_grid(&report.jordan_marks(), ascii));
    let _ = writeln!(out, "\nOsserman types:");
    out.push_str(&labeled_grid(&report.osserman_marks(), ascii));
    let _ = writeln!(out);
    for (pair, cell) in &report.cells {
        let _ = writeln!(out, "{pair} osserman: {}", verdict_text(&cell.osserman));
        let _ = writeln!(out, "{pair} jordan:   {}", verdict_text(&cell.jordan));
    }
    if let Some((a, grid)) = expected {
        let diffs = report.jordan_marks().differences(grid);
        let _ = writeln!(out, "\nexpected picture for a={a}:");
        out.push_str(&labeled_grid(grid, ascii));
        if diffs.is_empty() {
            let _ = writeln!(out, "matches the expected picture");
        } else {
            for (r, s, found, want) in diffs {
                let _ = writeln!(
                    out,
                    "MISMATCH at ({r},{s}): found {}, expected {}",
                    found.symbol(ascii),
                    want.symbol(ascii)
                );
            }
        }
    }
    out
}

fn md_table(grid: &MarkGrid, ascii: bool) -> String {
    let sig = grid.signature;
    let mut out = String::new();
    let header: Vec<String> = (0..=sig.p()).map(|r| format!("r={r}")).collect();
    let _ = writeln!(out, "| | {} |", header.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(sig.p() + 1));
    for s in (0..=sig.q()).rev() {
        let cells: Vec<String> = (0..=sig.p())
            .map(|r| grid.get(r, s).symbol(ascii).to_string())
            .collect();
        let _ = writeln!(out, "| s={s} | {} |", cells.join(" | "));
    }
    out
}

fn render_md(report: &GridReport, ascii: bool, expected: Option<(usize, &MarkGrid)>) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "# Grid report: {}\n", report.tensor);
    let _ = writeln!(
        out,
        "{} samples per type, seed {}, height {}, up to {} coordinate subspaces.\n",
        c.samples, c.seed, c.height, c.coordinate_cap
    );
    let _ = writeln!(out, "## Jordan Osserman ({})\n", legend(ascii));
    out.push_str(&md_table(&report.jordan_marks(), ascii));
    let _ = writeln!(out, "\n## Osserman\n");
    out.push_str(&md_table(&report.osserman_marks(), ascii));
    let _ = writeln!(out, "\n## Cells\n");
    let _ = writeln!(out, "| type | Osserman | Jordan Osserman |");
    let _ = writeln!(out, "|---|---|---|");
    for (pair, cell) in &report.cells {
        let _ = writeln!(
            out,
            "| {pair} | {} | {} |",
            verdict_text(&cell.osserman),
            verdict_text(&cell.jordan)
        );
    }
    if let Some((a, grid)) = expected {
        let diffs = report.jordan_marks().differences(grid);
        let _ = writeln!(out, "\n## Expected picture (a={a})\n");
        out.push_str(&md_table(grid, ascii));
        let _ = writeln!(
            out,
            "\n{}",
            if diffs.is_empty() {
                "The scan matches the expected picture.".to_string()
            } else {
                format!("{} cells differ from the expected picture.", diffs.len())
            }
        );
    }
    out
}
