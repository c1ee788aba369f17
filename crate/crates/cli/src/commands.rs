//! The three verbs behind the binary. Every command returns its stdout
//! text, optional stderr diagnostics, and the process exit code; argument
//! and file problems surface as `UsageError` (exit 2), failed validations
//! as exit 1 with the report still printed.

use std::fmt::Write as _;
use std::path::Path;

use conifold_core::{
    dubrovin_residue, euler_check, glue_check, monodromy_block, monodromy_pairing,
    restrict_prepotential, structural_coefficient, transform_prepotential, yukawa_principal,
    ExtremalModel, GwEntry, IntMatrix, NovikovLattice, ScalarMatrix, TransitionPresentation,
    TransportedEntry,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::schema::{
    canonicalize, emit, emit_rational, load, parse_rational, GwFile, PresentationFile,
    DEFAULT_ORDER,
};

#[derive(Debug)]
pub struct UsageError(pub String);

pub struct CommandOutput {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput { stdout, stderr: None, code: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    #[value(name = "x-to-y")]
    XToY,
    #[value(name = "y-to-x")]
    YToX,
}

#[derive(Clone, Copy, Default)]
pub struct ReportFlags {
    pub monodromy: bool,
    pub yukawa: bool,
    pub glue: bool,
    pub series_order: Option<u32>,
    pub json: bool,
}

fn load_and_build(
    path: &Path,
) -> Result<(PresentationFile, TransitionPresentation), UsageError> {
    let file = load(path).map_err(UsageError)?;
    canonicalize(&file).map_err(UsageError)
}

fn internal(e: impl std::fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub name: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationDoc {
    pub checks: Vec<CheckDoc>,
    pub pass: bool,
}

/// Runs every check; smoothability conditions report "warn" instead of
/// "fail" and do not flip the verdict, since they constrain the geometry,
/// not the presentation data itself.
fn validation_doc(p: &TransitionPresentation) -> Result<ValidationDoc, UsageError> {
    let report = p.validate().map_err(internal)?;
    let mut checks = Vec::new();
    let mut pass = true;
    for c in &report.checks {
        let advisory = matches!(c.name, "friedman" | "sty");
        let status = if c.passed {
            "pass"
        } else if advisory {
            "warn"
        } else {
            pass = false;
            "fail"
        };
        checks.push(CheckDoc {
            name: c.name.to_string(),
            status: status.to_string(),
            detail: c.detail.clone(),
        });
    }
    if p.hodge.is_some() {
        let euler = euler_check(p).map_err(internal)?;
        for (name, ok) in [
            ("hodge-mu", euler.mu_consistent),
            ("hodge-rho", euler.rho_consistent),
        ] {
            if !ok {
                pass = false;
            }
            checks.push(CheckDoc {
                name: name.to_string(),
                status: if ok { "pass" } else { "fail" }.to_string(),
                detail: None,
            });
        }
    }
    Ok(ValidationDoc { checks, pass })
}

fn render_validation(out: &mut String, v: &ValidationDoc) {
    for c in &v.checks {
        match &c.detail {
            Some(d) => {
                let _ = writeln!(out, "check {}: {} ({d})", c.name, c.status);
            }
            None => {
                let _ = writeln!(out, "check {}: {}", c.name, c.status);
            }
        }
    }
    let _ = writeln!(out, "result: {}", if v.pass { "pass" } else { "fail" });
}

pub fn cmd_validate(path: &Path) -> Result<CommandOutput, UsageError> {
    let (_, p) = load_and_build(path)?;
    let doc = validation_doc(&p)?;
    let mut out = String::new();
    let _ = writeln!(out, "presentation: k = {}, μ = {}, ρ = {}", p.k, p.mu(), p.rho());
    render_validation(&mut out, &doc);
    Ok(CommandOutput { stdout: out, stderr: None, code: i32::from(!doc.pass) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyDoc {
    /// Per node: the quantum-connection residue on the sphere frame.
    pub dubrovin_residues: Vec<Vec<Vec<String>>>,
    /// Per sphere-side branch: N_l on the dual frame.
    pub blocks: Vec<Vec<Vec<String>>>,
    /// Per curve-side branch: the Picard–Lefschetz pairing matrix.
    pub pairings: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesEntryDoc {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub series: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueDoc {
    pub dubrovin: String,
    pub gauss_manin: String,
    pub splitting_det: String,
    pub dubrovin_substitution: String,
    pub gauss_manin_substitution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonality_mismatch: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dubrovin_mismatch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_manin_mismatch: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub presentation: PresentationFile,
    pub validation: ValidationDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<MonodromyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yukawa: Option<Vec<SeriesEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural: Option<Vec<SeriesEntryDoc>>,
}

fn scalar_matrix_doc(m: &ScalarMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn int_matrix_doc(m: &IntMatrix) -> Result<Vec<Vec<i64>>, UsageError> {
    crate::schema::from_int_matrix(m).map_err(UsageError)
}

pub fn build_report(
    canonical: &PresentationFile,
    p: &TransitionPresentation,
    flags: ReportFlags,
) -> Result<ReportDoc, UsageError> {
    let validation = validation_doc(p)?;
    let mut doc = ReportDoc {
        presentation: canonical.clone(),
        validation,
        monodromy: None,
        yukawa: None,
        glue: None,
        structural: None,
    };
    if !doc.validation.pass {
        return Ok(doc);
    }
    let order = flags.series_order.or(canonical.order).unwrap_or(DEFAULT_ORDER);
    let model = ExtremalModel::new(p.clone(), order);
    if flags.monodromy {
        let mut residues = Vec::with_capacity(p.k);
        for i in 0..p.k {
            residues.push(scalar_matrix_doc(&dubrovin_residue(&model, i).map_err(internal)?));
        }
        let mut blocks = Vec::with_capacity(p.rho());
        for l in 0..p.rho() {
            blocks.push(scalar_matrix_doc(&monodromy_block(&model, l).map_err(internal)?));
        }
        let mut pairings = Vec::with_capacity(p.mu());
        for l in 0..p.mu() {
            pairings.push(int_matrix_doc(&monodromy_pairing(p, l).map_err(internal)?)?);
        }
        doc.monodromy = Some(MonodromyDoc { dubrovin_residues: residues, blocks, pairings });
    }
    if flags.yukawa {
        let mut entries = Vec::new();
        for a in 0..p.mu() {
            for b in a..p.mu() {
                for c in b..p.mu() {
                    let series = yukawa_principal(p, a, b, c).map_err(internal)?;
                    entries.push(SeriesEntryDoc {
                        l: a + 1,
                        m: b + 1,
                        n: c + 1,
                        series: series.to_string(),
                    });
                }
            }
        }
        doc.yukawa = Some(entries);
    }
    if flags.glue {
        let report = glue_check(p).map_err(internal)?;
        doc.glue = Some(GlueDoc {
            dubrovin: verdict(report.dubrovin_glued()),
            gauss_manin: verdict(report.gauss_manin_glued()),
            splitting_det: report.splitting_det.to_string(),
            dubrovin_substitution: report.dubrovin_substitution.clone(),
            gauss_manin_substitution: report.gauss_manin_substitution.clone(),
            orthogonality_mismatch: report.orthogonality_mismatch,
            dubrovin_mismatch: report.dubrovin_mismatch.clone(),
            gauss_manin_mismatch: report.gauss_manin_mismatch.clone(),
        });
    }
    if flags.series_order.is_some() {
        let mut entries = Vec::new();
        for a in 0..p.rho() {
            for b in a..p.rho() {
                for c in b..p.rho() {
                    let series = structural_coefficient(&model, a, b, c).map_err(internal)?;
                    entries.push(SeriesEntryDoc {
                        l: a + 1,
                        m: b + 1,
                        n: c + 1,
                        series: series.to_string(),
                    });
                }
            }
        }
        doc.structural = Some(entries);
    }
    Ok(doc)
}

fn verdict(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

fn render_matrix_block(out: &mut String, label: &str, rows: &[Vec<String>]) {
    let _ = writeln!(out, "  {label}:");
    for row in rows {
        let _ = writeln!(out, "    [{}]", row.join(", "));
    }
}

fn render_int_matrix_block(out: &mut String, label: &str, rows: &[Vec<i64>]) {
    let strings: Vec<Vec<String>> =
        rows.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
    render_matrix_block(out, label, &strings);
}

fn render_human(doc: &ReportDoc) -> String {
    let mut out = String::new();
    let file = &doc.presentation;
    let mu = file.a.as_ref().map_or(0, |m| m.first().map_or(0, Vec::len));
    let rho = file.b.as_ref().map_or(0, |m| m.first().map_or(0, Vec::len));
    let _ = writeln!(out, "presentation: k = {}, μ = {mu}, ρ = {rho}", file.k);
    if let Some(a) = &file.a {
        render_int_matrix_block(&mut out, "A", a);
    }
    if let Some(b) = &file.b {
        render_int_matrix_block(&mut out, "B", b);
    }
    if let Some(order) = file.order {
        let _ = writeln!(out, "  order: {order}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "validation:");
    render_validation(&mut out, &doc.validation);
    if let Some(m) = &doc.monodromy {
        let _ = writeln!(out);
        let _ = writeln!(out, "monodromy:");
        for (i, r) in m.dubrovin_residues.iter().enumerate() {
            render_matrix_block(&mut out, &format!("dubrovin residue, node {}", i + 1), r);
        }
        for (l, b) in m.blocks.iter().enumerate() {
            render_matrix_block(&mut out, &format!("block N_{} (sphere side)", l + 1), b);
        }
        for (l, q) in m.pairings.iter().enumerate() {
            render_int_matrix_block(
                &mut out,
                &format!("pairing matrix, branch {} (curve side)", l + 1),
                q,
            );
        }
    }
    if let Some(entries) = &doc.yukawa {
        let _ = writeln!(out);
        let _ = writeln!(out, "yukawa principal parts:");
        for e in entries {
            let _ = writeln!(out, "  u_{}{}{} = {}", e.l, e.m, e.n, e.series);
        }
    }
    if let Some(g) = &doc.glue {
        let _ = writeln!(out);
        let _ = writeln!(out, "glue:");
        let _ = writeln!(out, "  dubrovin side ({}): {}", g.dubrovin_substitution, g.dubrovin);
        if let Some((j, l)) = g.orthogonality_mismatch {
            let _ = writeln!(out, "    orthogonality fails at (AᵗB)[{j}][{l}]");
        }
        if let Some(d) = &g.dubrovin_mismatch {
            let _ = writeln!(out, "    residue mismatch: {d}");
        }
        let _ = writeln!(
            out,
            "  gauss-manin side ({}): {}",
            g.gauss_manin_substitution, g.gauss_manin
        );
        if let Some(d) = &g.gauss_manin_mismatch {
            let _ = writeln!(out, "    residue mismatch: {d}");
        }
        let _ = writeln!(out, "  splitting det [A|B] = {}", g.splitting_det);
    }
    if let Some(entries) = &doc.structural {
        let _ = writeln!(out);
        let _ = writeln!(out, "structural coefficients:");
        for e in entries {
            let _ = writeln!(out, "  c_{}{}{} = {}", e.l, e.m, e.n, e.series);
        }
    }
    out
}

pub fn cmd_report(path: &Path, flags: ReportFlags) -> Result<CommandOutput, UsageError> {
    let (canonical, p) = load_and_build(path)?;
    let doc = build_report(&canonical, &p, flags)?;
    let stdout = if flags.json {
        let mut s =
            serde_json::to_string_pretty(&doc).map_err(|e| UsageError(e.to_string()))?;
        s.push('\n');
        s
    } else {
        render_human(&doc)
    };
    Ok(CommandOutput { stdout, stderr: None, code: i32::from(!doc.validation.pass) })
}

fn bigints_to_i64(v: &[BigInt]) -> Result<Vec<i64>, UsageError> {
    v.iter()
        .map(|x| {
            i64::try_from(x).map_err(|_| UsageError("coefficient class outside file range".into()))
        })
        .collect()
}

pub fn cmd_transform(path: &Path, direction: Direction) -> Result<CommandOutput, UsageError> {
    let (canonical, p) = load_and_build(path)?;
    let Some(gw) = canonical.gw.clone() else {
        return Ok(CommandOutput {
            stdout: String::new(),
            stderr: Some("transform: gw data missing from the input file\n".into()),
            code: 1,
        });
    };
    let order = canonical.order.unwrap_or(DEFAULT_ORDER);
    match direction {
        Direction::XToY => {
            let entries = gw
                .iter()
                .map(|e| {
                    Ok(GwEntry {
                        class: e.class.iter().map(|&c| BigInt::from(c)).collect(),
                        n: parse_rational(&e.n).map_err(UsageError)?,
                    })
                })
                .collect::<Result<Vec<_>, UsageError>>()?;
            let model = ExtremalModel::new(p.clone(), order);
            let result =
                transform_prepotential(&model, &entries, None, order).map_err(internal)?;
            let gw_out = result
                .entries
                .iter()
                .map(|t| {
                    Ok(GwFile {
                        class: bigints_to_i64(&t.base)?,
                        ext: Some(bigints_to_i64(&t.ext)?),
                        n: emit_rational(&t.n),
                    })
                })
                .collect::<Result<Vec<_>, UsageError>>()?;
            let out_file = PresentationFile { gw: Some(gw_out), ..canonical };
            let cross: Vec<String> = result
                .cross_terms
                .iter()
                .map(|(s, u, w)| format!("s^{s}·u^{u} × {}", emit_rational(w)))
                .collect();
            Ok(CommandOutput {
                stdout: emit(&out_file),
                stderr: Some(format!(
                    "cross terms (classical, on cup products): {}\n",
                    cross.join(" + ")
                )),
                code: 0,
            })
        }
        Direction::YToX => {
            let lattice = NovikovLattice::from_presentation(&p);
            let entries = gw
                .iter()
                .map(|e| {
                    Ok(TransportedEntry {
                        base: e.class.iter().map(|&c| BigInt::from(c)).collect(),
                        ext: match &e.ext {
                            Some(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
                            None => vec![BigInt::from(0); lattice.rank()],
                        },
                        n: parse_rational(&e.n).map_err(UsageError)?,
                    })
                })
                .collect::<Result<Vec<_>, UsageError>>()?;
            let restricted = restrict_prepotential(&entries);
            let gw_out = restricted
                .iter()
                .map(|g| {
                    Ok(GwFile { class: bigints_to_i64(&g.class)?, ext: None, n: emit_rational(&g.n) })
                })
                .collect::<Result<Vec<_>, UsageError>>()?;
            let out_file = PresentationFile { gw: Some(gw_out), ..canonical };
            Ok(CommandOutput::ok(emit(&out_file)))
        }
    }
}
