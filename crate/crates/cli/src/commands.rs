//! Command implementations. Each returns a text report, the certificates it
//! produced and any files to write; the caller maps the outcome to an exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use reedy_core::holim::{
    cospan_crosscheck, cospan_holim_comparison, equalizer_crosscheck, equalizer_triples, holim_discrete_plus,
    tower_crosscheck,
};
use reedy_core::reedy::{validate_reedy, Diagram, DiagramMap, PartialFunctor};
use reedy_core::replace::{certify, replace, replace_map, verify_product_preservation, ReplacementResult};
use reedy_core::sset::document::SSetDocument;
use reedy_core::sset::{kan_check, point, SSetMap};
use reedy_core::{Certificate, CertificateSet};

use crate::error::{CliError, CliResult};
use crate::workspace::{add_map, add_set, parse, DiagramDocument, Workspace, WorkspaceDocument};

#[derive(Debug, Parser)]
#[command(name = "reedy", about = "Fibrant replacement of finite Reedy diagrams of simplicial sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Workspace document.
    #[arg(long = "diagram", value_name = "FILE")]
    pub file: PathBuf,
    /// Expected truncation; must agree with the workspace.
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Highest horn dimension to check (defaults to truncation + 1).
    #[arg(long = "check-dim")]
    pub check_dim: Option<usize>,
    /// Directory for report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Cospan,
    Equalizer,
    Tower,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and resolve a workspace; check each category's Reedy axioms.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Build R(X), κ, α and H for a diagram.
    Replace {
        #[command(flatten)]
        common: Common,
        /// Diagram to use when the workspace has several.
        #[arg(long)]
        name: Option<String>,
    },
    /// Kan checks on simplicial sets of the workspace.
    CheckFibrant {
        #[command(flatten)]
        common: Common,
        /// Only this simplicial set.
        #[arg(long)]
        set: Option<String>,
    },
    /// Closed forms on cospans, parallel pairs and towers, compared with R.
    Holim {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        shape: Shape,
        #[arg(long)]
        name: Option<String>,
        /// Tower stage (defaults to the top degree).
        #[arg(long)]
        stage: Option<usize>,
    },
    /// The full certificate suite for a diagram.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        name: Option<String>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate { common }
            | Command::Replace { common, .. }
            | Command::CheckFibrant { common, .. }
            | Command::Holim { common, .. }
            | Command::Certify { common, .. } => common,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub report: String,
    pub certificates: CertificateSet,
    /// File name (inside `--out`) and contents.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn line(&mut self, text: impl AsRef<str>) {
        self.report.push_str(text.as_ref());
        self.report.push('\n');
    }

    fn add(&mut self, certs: CertificateSet) {
        self.certificates.extend(certs);
    }

    fn add_one(&mut self, c: Certificate) {
        self.certificates.certificates.push(c);
    }

    /// Appends the certificate listing and summary to the report.
    fn finish(mut self) -> Self {
        let failed = self.certificates.failures().count();
        let listing = self.certificates.to_string();
        self.report.push_str(&listing);
        let _ = writeln!(self.report, "{} certificates, {} failed", self.certificates.len(), failed);
        let json = serde_json::to_string_pretty(&self.certificates).expect("certificates serialize") + "\n";
        self.files.push(("certificates.json".into(), json));
        self.files.push(("report.txt".into(), self.report.clone()));
        self
    }

    /// 0 when every certificate passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.certificates.all_pass() {
            0
        } else {
            1
        }
    }
}

fn load(common: &Common) -> CliResult<Workspace> {
    let text = fs::read_to_string(&common.file)
        .map_err(|source| CliError::Io { path: common.file.display().to_string(), source })?;
    let w = parse(&text)?;
    if let Some(m) = common.truncation {
        if m != w.truncation() {
            return Err(CliError::Usage(format!("--truncation {m} but the workspace uses {}", w.truncation())));
        }
    }
    Ok(w)
}

fn check_dim(common: &Common, w: &Workspace) -> Option<usize> {
    common.check_dim.or(w.document.check_dim)
}

/// Records Kan reports for the diagram's values; false if any value fails.
fn kan_gate(d: &mut Diagram, dim: Option<usize>, out: &mut Outcome) -> CliResult<bool> {
    d.certify_kan(dim)?;
    let mut ok = true;
    for r in d.kan_reports().iter().flatten() {
        out.add_one(Certificate::check(format!("{} is Kan", r.map), (!r.verdict).then(|| r.to_string())));
        ok &= r.verdict;
    }
    Ok(ok)
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    let common = cmd.common();
    let w = load(common)?;
    let dim = check_dim(common, &w);
    let mut out = Outcome::default();
    match cmd {
        Command::Validate { .. } => validate(&w, &mut out),
        Command::Replace { name, .. } => run_replace(&w, name.as_deref(), dim, &mut out)?,
        Command::CheckFibrant { set, .. } => check_fibrant(&w, set.as_deref(), dim, &mut out)?,
        Command::Holim { shape, name, stage, .. } => holim(&w, *shape, name.as_deref(), *stage, dim, &mut out)?,
        Command::Certify { name, .. } => run_certify(&w, name.as_deref(), dim, &mut out)?,
    }
    Ok(out.finish())
}

fn validate(w: &Workspace, out: &mut Outcome) {
    out.line(format!(
        "workspace: truncation {}, {} simplicial sets, {} maps, {} categories, {} diagrams",
        w.truncation(),
        w.sets.len(),
        w.maps.len(),
        w.categories.len(),
        w.diagrams.len()
    ));
    for (name, cat) in &w.categories {
        let violations = validate_reedy(cat);
        let witness = violations.first().map(|v| v.to_string());
        out.add_one(Certificate::check(format!("{name} is a Reedy category"), witness));
    }
    for name in w.diagrams.keys() {
        out.add_one(Certificate::pass(format!("diagram {name} is functorial")));
    }
}

fn check_fibrant(w: &Workspace, only: Option<&str>, dim: Option<usize>, out: &mut Outcome) -> CliResult<()> {
    let chosen: Vec<_> = match only {
        Some(n) => vec![w.sets.get_key_value(n).ok_or_else(|| CliError::Dangling(format!("no simplicial set named {n}")))?],
        None => w.sets.iter().collect(),
    };
    for (name, x) in chosen {
        let mut report = kan_check(x, dim)?;
        report.map = name.clone();
        out.line(report.to_string());
        let label = if report.partial { format!("{name} is Kan (partial)") } else { format!("{name} is Kan") };
        out.add_one(Certificate::check(label, (!report.verdict).then(|| report.to_string())));
    }
    Ok(())
}

fn sizes_line(label: &str, d: &Diagram) -> String {
    let cat = d.category();
    let parts: Vec<String> = (0..cat.object_count())
        .map(|c| format!("{} {:?}", cat.object_name(c), d.values()[c].level_sizes()))
        .collect();
    format!("{label}: {}", parts.join(", "))
}

/// The replacement as a workspace: values, structure maps, κ, α and H.
fn replacement_document(w: &Workspace, category: &str, r: &ReplacementResult) -> WorkspaceDocument {
    let cat = r.category();
    let mut doc = WorkspaceDocument::empty(w.truncation());
    doc.check_dim = w.document.check_dim;
    doc.categories.insert(category.to_string(), cat.spec().clone());
    let mut diagram = DiagramDocument { category: category.to_string(), values: Default::default(), maps: Default::default() };
    for c in 0..cat.object_count() {
        let o = cat.object_name(c);
        let (x, rc, cyl) = (format!("X.{o}"), format!("R.{o}"), format!("RxI.{o}"));
        add_set(&mut doc, &x, &r.input.values()[c]);
        add_set(&mut doc, &rc, &r.output.values()[c]);
        add_set(&mut doc, &cyl, &r.homotopy[c].cylinder.object);
        add_map(&mut doc, &format!("kappa.{o}"), &x, &rc, &r.kappa[c]);
        add_map(&mut doc, &format!("alpha.{o}"), &rc, &x, &r.alpha[c]);
        add_map(&mut doc, &format!("H.{o}"), &cyl, &rc, &r.homotopy[c].map);
        diagram.values.insert(o.to_string(), rc);
    }
    for g in 0..cat.generator_count() {
        let gen = cat.generator_name(g);
        let data = cat.morphism(cat.generator_morphism(g));
        let map = format!("R.{gen}");
        let (s, t) = (format!("R.{}", cat.object_name(data.source)), format!("R.{}", cat.object_name(data.target)));
        add_map(&mut doc, &map, &s, &t, r.output.generator_map(g));
        diagram.maps.insert(gen.to_string(), map);
    }
    doc.diagrams.insert("R".into(), diagram);
    doc
}

fn run_replace(w: &Workspace, name: Option<&str>, dim: Option<usize>, out: &mut Outcome) -> CliResult<()> {
    let (name, d) = w.diagram(name)?;
    let mut d = d.clone();
    if !kan_gate(&mut d, dim, out)? {
        out.line(format!("diagram {name}: some value is not Kan; no replacement built"));
        return Ok(());
    }
    let r = replace(&d)?;
    out.line(sizes_line(&format!("diagram {name}"), &r.input));
    out.line(sizes_line("replacement", &r.output));
    out.add(r.certificates.clone());
    let category = &w.document.diagrams[name].category;
    out.files.push(("replacement.json".into(), replacement_document(w, category, &r).to_text()));
    Ok(())
}

fn run_certify(w: &Workspace, name: Option<&str>, dim: Option<usize>, out: &mut Outcome) -> CliResult<()> {
    let (name, d) = w.diagram(name)?;
    let mut d = d.clone();
    if !kan_gate(&mut d, dim, out)? {
        out.line(format!("diagram {name}: some value is not Kan"));
        return Ok(());
    }
    let r = replace(&d)?;
    out.line(sizes_line(&format!("diagram {name}"), &r.input));
    out.line(sizes_line("replacement", &r.output));
    out.add(certify(&r, dim)?);
    let (rid, certs) = replace_map(&DiagramMap::identity(&d), &r, &r)?;
    out.add(certs);
    let identity = rid.components.iter().zip(r.output.values()).find(|(f, x)| **f != SSetMap::identity(x));
    out.add_one(Certificate::check("R(id) = id", identity.map(|(f, _)| format!("component on {:?}", f.source().level_sizes()))));
    // X × * ≅ X, so the comparison exercises every stage once more
    let cat = d.category_arc().clone();
    let pt = std::sync::Arc::new(point(w.truncation()));
    let id = SSetMap::identity(&pt);
    let mut terminal = Diagram::new(cat.clone(), vec![pt.clone(); cat.object_count()], vec![id; cat.generator_count()])?;
    terminal.certify_kan(dim)?;
    out.add(verify_product_preservation(&d, &terminal)?);
    Ok(())
}

fn holim(
    w: &Workspace,
    shape: Shape,
    name: Option<&str>,
    stage: Option<usize>,
    dim: Option<usize>,
    out: &mut Outcome,
) -> CliResult<()> {
    let (name, d) = w.diagram(name)?;
    let mut d = d.clone();
    if !kan_gate(&mut d, dim, out)? {
        out.line(format!("diagram {name}: some value is not Kan"));
        return Ok(());
    }
    match shape {
        Shape::Cospan => {
            let cc = cospan_crosscheck(&d)?;
            out.line(format!("matching: {:?}", cc.matching));
            out.add(cc.certificates);
            let (lim, _) = holim_discrete_plus(&d)?;
            out.line(format!("homotopy limit: {:?}", lim.object.level_sizes()));
            out.add_one(cospan_holim_comparison(&d)?);
            out.files.push(("holim.json".into(), sset_text(&lim.object)));
        }
        Shape::Equalizer => {
            let cc = equalizer_crosscheck(&d)?;
            out.line(format!("matching: {:?}", cc.matching));
            out.add(cc.certificates);
            let t = equalizer_triples(&d)?;
            out.line(format!("limit vertices {}, triples {}", t.limit_vertices, t.triples));
            out.add_one(t.certificate);
            let (lim, _) = holim_discrete_plus(&d)?;
            out.files.push(("holim.json".into(), sset_text(&lim.object)));
        }
        Shape::Tower => {
            let top = d.category().max_degree();
            let n = stage.unwrap_or(top);
            if n > top {
                return Err(CliError::Usage(format!("--stage {n} beyond the tower's top degree {top}")));
            }
            let tc = tower_crosscheck(&d, n, dim)?;
            let cf = tc.stages.last().expect("stage 0 exists");
            out.line(format!("stage {n}: {:?}", cf.cone.object.level_sizes()));
            out.add(tc.certificates);
            out.files.push((format!("stage-{n}.json"), sset_text(&cf.cone.object)));
        }
    }
    Ok(())
}

fn sset_text(x: &reedy_core::sset::SSet) -> String {
    serde_json::to_string_pretty(&SSetDocument::from_sset(x)).expect("documents serialize") + "\n"
}

/// Writes the outcome's files into `dir`.
pub fn write_files(dir: &Path, outcome: &Outcome) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    for (name, contents) in &outcome.files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(())
}

/// Parses arguments, runs, writes files and prints; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = run(&cli.command).and_then(|outcome| {
        if let Some(dir) = &cli.command.common().out {
            write_files(dir, &outcome)?;
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.report.as_bytes());
            outcome.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
