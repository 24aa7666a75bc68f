//! The `realsph` command line. [`run`] does all the work and returns the
//! exit code with the rendered output, so the binary is a thin wrapper.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::criteria::{
    cartan_index_obstruction, conjugate_affine, conjugate_general, effective_diagram,
    guaranteed_real_points, real_point_orbit_filter, real_structure_exists, scan_with, OrbitFilter,
    ScanReport, ScanRow, Verdict,
};
use crate::error::{Error, Result};
use crate::fixtures::{self, FixtureData};
use crate::io;
use crate::real_form::{Catalog, SatakeDiagram};
use crate::root_system::{CartanType, RootVector};
use crate::spherical::SphericalSystem;
use crate::{fmt_nodes, NodeSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCAN_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "realsph",
    version,
    about = "Decide real structures on spherical varieties from Satake diagrams"
)]
pub struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    pub json: bool,

    /// Satake catalog to use instead of the shipped one
    #[arg(long, global = true, env = "REALSPH_CATALOG", value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the real forms of a simple type with S_0, ω and ε_σ
    Forms {
        /// Type and rank, e.g. D4 or E8
        #[arg(value_name = "TYPE")]
        ty: String,
    },
    /// Existence of a σ-equivariant real structure, or conjugacy of H and σ(H)
    Check(Target),
    /// Orbits that may carry real points, with the sufficient and obstructing tests
    Orbits(Target),
    /// Stability of the D_{2n} families (n ≤ N_MAX) under every real form
    Scan {
        #[arg(value_name = "N_MAX", value_parser = clap::value_parser!(u8).range(2..=4))]
        n_max: u8,
    },
    /// List the built-in fixtures, or print one as a data file
    Fixtures {
        #[arg(long, value_name = "NAME")]
        export: Option<String>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["file", "fixture"])))]
pub struct Target {
    /// JSON data file (spherical system, Luna–Vust datum or weight monoid)
    pub file: Option<PathBuf>,

    /// Real form: catalog name, alias, or signature such as so(3,5)
    #[arg(long)]
    pub form: String,

    /// Built-in fixture instead of a file
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A rendered command result.
struct Report {
    code: i32,
    json: Value,
    text: String,
}

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_inapplicable() {
        EXIT_INAPPLICABLE
    } else {
        EXIT_INPUT
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if cli.json { render_json(&r.json) } else { r.text },
            stderr: String::new(),
        },
        Err(e) => {
            let code = exit_code(&e);
            Outcome {
                code,
                stdout: if cli.json {
                    render_json(&json!({"error": e.to_string(), "exit_code": code}))
                } else {
                    String::new()
                },
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn load_catalog(path: &Option<PathBuf>) -> Result<(Option<Catalog>, String)> {
    match path {
        None => Ok((None, "shipped Satake catalog (Bourbaki labeling)".into())),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Schema(format!("cannot read {}: {e}", p.display())))?;
            Ok((Some(Catalog::from_json(&text)?), format!("Satake catalog {}", p.display())))
        }
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let (owned, catalog_note) = load_catalog(&cli.catalog)?;
    let catalog = owned.as_ref().unwrap_or_else(|| Catalog::shipped());
    match &cli.command {
        Command::Forms { ty } => cmd_forms(catalog, ty),
        Command::Check(t) => cmd_check(catalog, &catalog_note, t),
        Command::Orbits(t) => cmd_orbits(catalog, &catalog_note, t),
        Command::Scan { n_max } => cmd_scan(catalog, *n_max as usize),
        Command::Fixtures { export } => cmd_fixtures(export.as_deref()),
    }
}

fn nodes_json(s: &NodeSet) -> Value {
    json!(s.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn form_json(sd: &SatakeDiagram) -> Value {
    let omega: Vec<[usize; 2]> = (0..sd.omega().rank())
        .filter(|&i| sd.omega().image(i) > i)
        .map(|i| [i + 1, sd.omega().image(i) + 1])
        .collect();
    json!({
        "name": sd.name(),
        "aliases": sd.aliases(),
        "black_nodes": nodes_json(sd.black_nodes()),
        "omega": omega,
        "epsilon": sd.epsilon().perm().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "epsilon_text": sd.epsilon().to_string(),
    })
}

fn cmd_forms(catalog: &Catalog, ty: &str) -> Result<Report> {
    let ty: CartanType = ty.parse()?;
    let forms = catalog.forms(ty)?;
    let mut text = format!("{} real forms of {ty}\n", forms.len());
    for sd in forms {
        let aliases = if sd.aliases().is_empty() {
            String::new()
        } else {
            format!(" [{}]", sd.aliases().join(", "))
        };
        writeln!(
            text,
            "  {}{aliases}\n    S_0 = {}  ω = {}  ε_σ = {}",
            sd.name(),
            fmt_nodes(sd.black_nodes()),
            sd.omega(),
            sd.epsilon()
        )
        .unwrap();
    }
    Ok(Report {
        code: EXIT_OK,
        json: json!({
            "command": "forms",
            "type": ty.to_string(),
            "forms": forms.iter().map(form_json).collect::<Vec<_>>(),
        }),
        text,
    })
}

struct Input {
    label: String,
    data: FixtureData,
    provenance: Option<String>,
}

impl Input {
    fn cartan_type(&self) -> CartanType {
        match &self.data {
            FixtureData::System(s) => s.root_system.cartan_type(),
            FixtureData::LunaVust(d) => d.root_system.cartan_type(),
            FixtureData::Monoid(m) => m.root_system.cartan_type(),
        }
    }

    fn kind(&self) -> &'static str {
        match self.data {
            FixtureData::System(_) => io::KIND_SYSTEM,
            FixtureData::LunaVust(_) => io::KIND_LUNA_VUST,
            FixtureData::Monoid(_) => io::KIND_MONOID,
        }
    }

    fn system(&self) -> Result<&SphericalSystem> {
        match &self.data {
            FixtureData::System(s) => Ok(s),
            _ => Err(Error::Schema(format!(
                "`orbits` needs a spherical system, got a {} file",
                self.kind()
            ))),
        }
    }
}

fn load_input(t: &Target) -> Result<Input> {
    if let Some(name) = &t.fixture {
        let f = fixtures::fixture(name)?;
        return Ok(Input {
            label: format!("fixture {}", f.name),
            data: f.data,
            provenance: Some(f.provenance.to_string()),
        });
    }
    let path = t.file.as_ref().expect("clap requires file or fixture");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    let data = io::parse_data(&text).map_err(|e| match e {
        Error::Schema(m) => Error::Schema(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(Input {
        label: path.display().to_string(),
        data,
        provenance: None,
    })
}

fn provenance(catalog_note: &str, input: &Input) -> Vec<String> {
    let mut p = vec![format!("real forms: {catalog_note}")];
    if let Some(f) = &input.provenance {
        p.push(format!("data: {f}"));
    }
    p
}

fn query_json(cmd: &str, input: &Input, sd: &SatakeDiagram) -> Value {
    json!({
        "command": cmd,
        "input": input.label,
        "kind": input.kind(),
        "type": input.cartan_type().to_string(),
        "form": sd.name(),
    })
}

fn write_verdict(text: &mut String, title: &str, v: &Verdict) {
    writeln!(text, "{title}: {}", v.answer).unwrap();
    for r in &v.reasons {
        match &r.witness {
            Some(w) => writeln!(text, "  - {}\n    witness: {w}", r.rule).unwrap(),
            None => writeln!(text, "  - {}", r.rule).unwrap(),
        }
    }
    if let Some(n) = &v.uniqueness_note {
        writeln!(text, "  note: {n}").unwrap();
    }
}

/// ε as used for the data, with a note when a relabeling was applied.
fn epsilon_line(sys: Option<&SphericalSystem>, sd: &SatakeDiagram) -> Result<String> {
    Ok(match sys.filter(|s| s.relabel.is_some()) {
        Some(s) => format!(
            "ε_σ = {} (catalog labeling: {}; data relabeled by {})",
            effective_diagram(s, sd)?.epsilon(),
            sd.epsilon(),
            s.relabel.as_ref().expect("filtered")
        ),
        None => format!("ε_σ = {}", sd.epsilon()),
    })
}

fn cmd_check(catalog: &Catalog, catalog_note: &str, t: &Target) -> Result<Report> {
    let input = load_input(t)?;
    let sd = catalog.find(input.cartan_type(), &t.form)?;
    let (verdict, sys) = match &input.data {
        FixtureData::System(s) => (real_structure_exists(s, sd)?, Some(s)),
        FixtureData::LunaVust(d) => (conjugate_general(d, sd)?, None),
        FixtureData::Monoid(m) => (conjugate_affine(m, sd)?, None),
    };
    let prov = provenance(catalog_note, &input);
    let mut text = format!(
        "check {} ({}, {}) under {}\n{}\n",
        input.label,
        input.kind(),
        input.cartan_type(),
        sd.name(),
        epsilon_line(sys, sd)?
    );
    write_verdict(&mut text, "answer", &verdict);
    for p in &prov {
        writeln!(text, "{p}").unwrap();
    }
    Ok(Report {
        code: EXIT_OK,
        json: json!({
            "query": query_json("check", &input, sd),
            "real_form": form_json(sd),
            "verdict": verdict.to_json(),
            "provenance": prov,
        }),
        text,
    })
}

fn roots_text(rs: &[RootVector]) -> String {
    if rs.is_empty() {
        "∅".into()
    } else {
        rs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

fn index_set_text(s: &std::collections::BTreeSet<usize>) -> String {
    if s.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
    }
}

fn orbit_rows_json(f: &OrbitFilter) -> Value {
    json!(f
        .rows
        .iter()
        .map(|r| json!({
            "index_set": r.orbit.index_set.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "sigma": r.orbit.sigma_sub.iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
            "s_sub": nodes_json(&r.orbit.s_sub),
            "sigma_stable": r.sigma_stable,
            "contains_black": r.contains_black,
            "candidate": r.passes(),
        }))
        .collect::<Vec<_>>())
}

fn cmd_orbits(catalog: &Catalog, catalog_note: &str, t: &Target) -> Result<Report> {
    let input = load_input(t)?;
    let sys = input.system()?;
    let sd = catalog.find(input.cartan_type(), &t.form)?;
    let filter = real_point_orbit_filter(sys, sd)?;
    let guaranteed = guaranteed_real_points(sys, sd)?;
    let obstruction = match cartan_index_obstruction(sys, sd) {
        Ok(v) => Ok(v),
        Err(e @ (Error::Inapplicable(_) | Error::IndexDataUnavailable(_))) => Err(e.to_string()),
        Err(e) => return Err(e),
    };
    let prov = provenance(catalog_note, &input);

    let mut text = format!(
        "orbits of {} ({}) under {}\n{}\n",
        input.label,
        input.cartan_type(),
        sd.name(),
        epsilon_line(Some(sys), sd)?
    );
    writeln!(text, "{:<10} {:<6} {:<6} {:<10} {:<24} Σ_I", "I", "(1)", "(2)", "candidate", "S_I").unwrap();
    let mark = |b: bool| if b { "yes" } else { "no" };
    for r in &filter.rows {
        writeln!(
            text,
            "{:<10} {:<6} {:<6} {:<10} {:<24} {}",
            index_set_text(&r.orbit.index_set),
            mark(r.sigma_stable),
            mark(r.contains_black),
            mark(r.passes()),
            fmt_nodes(&r.orbit.s_sub),
            roots_text(&r.orbit.sigma_sub)
        )
        .unwrap();
    }
    writeln!(text, "(1) Σ_I = ε_σ(Σ_I)   (2) S_0 ⊆ S_I").unwrap();
    write_verdict(&mut text, "orbit filter", &filter.verdict);
    write_verdict(&mut text, "guaranteed real points", &guaranteed);
    match &obstruction {
        Ok(v) => write_verdict(&mut text, "real points allowed by the Cartan index", v),
        Err(m) => writeln!(text, "real points allowed by the Cartan index: not evaluated ({m})").unwrap(),
    }
    for p in &prov {
        writeln!(text, "{p}").unwrap();
    }

    Ok(Report {
        code: EXIT_OK,
        json: json!({
            "query": query_json("orbits", &input, sd),
            "real_form": form_json(sd),
            "orbits": orbit_rows_json(&filter),
            "orbit_filter": filter.verdict.to_json(),
            "guaranteed_real_points": guaranteed.to_json(),
            "cartan_index_obstruction": match &obstruction {
                Ok(v) => v.to_json(),
                Err(m) => json!({"not_evaluated": m}),
            },
            "provenance": prov,
        }),
        text,
    })
}

fn scan_line(text: &mut String, r: &ScanRow) {
    let status = if r.stable { "stable" } else { "UNSTABLE" };
    let flag = if r.matches() { "" } else { "  MISMATCH" };
    let relabeled = if r.relabeled { "  [labeling-reconciled]" } else { "" };
    writeln!(text, "  {:<18} {:<12} {status}{relabeled}{flag}", r.fixture, r.form).unwrap();
    for w in &r.witnesses {
        writeln!(text, "      witness: {w}").unwrap();
    }
}

fn cmd_scan(catalog: &Catalog, n_max: usize) -> Result<Report> {
    let report: ScanReport = scan_with(catalog, n_max)?;
    let mut text = format!("D_{{2n}} families, n ≤ {n_max}; instability expected exactly for so(p,q) with p, q odd\n");
    for r in &report.rows {
        scan_line(&mut text, r);
    }
    writeln!(text, "controls (expected stable under every form)").unwrap();
    for r in &report.controls {
        scan_line(&mut text, r);
    }
    let failures = report.failures().count();
    let ok = report.matches_expectation();
    writeln!(
        text,
        "{failures} unstable pairs; {}",
        if ok { "matches the expected set" } else { "DOES NOT match the expected set" }
    )
    .unwrap();
    let mut json = report.to_json();
    json["command"] = json!("scan");
    Ok(Report {
        code: if ok { EXIT_OK } else { EXIT_SCAN_MISMATCH },
        json,
        text,
    })
}

fn cmd_fixtures(export: Option<&str>) -> Result<Report> {
    if let Some(name) = export {
        let f = fixtures::fixture(name)?;
        let v = io::to_json(&f.data);
        return Ok(Report {
            code: EXIT_OK,
            text: render_json(&v),
            json: v,
        });
    }
    let all = fixtures::fixture_catalog();
    let mut text = String::new();
    for f in &all {
        writeln!(text, "{:<18} {:<4} {:<16} {}\n{:<41}{}", f.name, f.cartan_type(), f.kind(), f.summary, "", f.provenance)
            .unwrap();
    }
    Ok(Report {
        code: EXIT_OK,
        json: json!({
            "command": "fixtures",
            "fixtures": all
                .iter()
                .map(|f| json!({
                    "name": f.name,
                    "type": f.cartan_type().to_string(),
                    "kind": f.kind(),
                    "summary": f.summary,
                    "provenance": f.provenance,
                }))
                .collect::<Vec<_>>(),
        }),
        text,
    })
}
