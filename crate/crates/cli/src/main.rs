//! `extremal`: crystals, closedness reports and loop weight modules from the
//! command line.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use extremal::closedness::{closed_report, default_margin, Verdict};
use extremal::crystal::{generate, CrystalGraph, Window};
use extremal::lattice::RootSystem;
use extremal::monomial::{fundamental_monomial, Monomial};
use extremal::qcoeff::set_disk_cache;
use extremal::tableaux::enumerate;
use extremal::torep::{build_section5, build_thin, check_module, compare_with_fr, section5_smax, LoopModule, Relation, RelationRanges};
use extremal::unity::{specialize_section5, specialize_thin, thin_period, unity_report, UnityReport};

use config::ConfigFile;

/// Directory for cached cyclotomic polynomials.
const CACHE_ENV: &str = "EXTREMAL_CYCLO_CACHE";

mod exit {
    pub const OK: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const ARGUMENT: u8 = 10;
    pub const VALIDATION: u8 = 11;
    pub const PARITY: u8 = 12;
    pub const WINDOW: u8 = 13;
    pub const EXPANSION: u8 = 14;
    pub const SPECIALIZATION: u8 = 15;
    pub const UNSUPPORTED: u8 = 16;
    pub const REFUSED: u8 = 17;
    pub const TEMPLATE: u8 = 18;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] extremal::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        use extremal::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io(_) => exit::IO,
            CliError::Core(e) => match e {
                E::Argument(_) => exit::ARGUMENT,
                E::Validation(_) => exit::VALIDATION,
                E::Parity(_) => exit::PARITY,
                E::EvenRank(_) => exit::USAGE,
                E::Window(_) => exit::WINDOW,
                E::Expansion(_) => exit::EXPANSION,
                E::Specialization(_) => exit::SPECIALIZATION,
                E::Unsupported(_) => exit::UNSUPPORTED,
                E::Refused(_) => exit::REFUSED,
                E::Template(_) => exit::TEMPLATE,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Parser, Debug)]
#[command(name = "extremal", version, about = "Monomial crystals and extremal loop weight modules of quantum toroidal sl(n+1)")]
struct Cli {
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monomial crystals.
    #[command(subcommand)]
    Crystal(CrystalCmd),
    /// Tableau descriptions of fundamental crystals.
    #[command(subcommand)]
    Tableaux(TableauxCmd),
    /// Closedness report of the crystal of varpi_l.
    Closed(Level),
    /// Loop weight modules over Q(q).
    #[command(subcommand)]
    Rep(RepCmd),
    /// Specializations at roots of unity.
    #[command(subcommand)]
    Unity(UnityCmd),
}

#[derive(Subcommand, Debug)]
enum CrystalCmd {
    /// The crystal of the fundamental monomial of varpi_l.
    Gen(Level),
    /// The crystal generated by an arbitrary anchor monomial.
    Export(ExportArgs),
}

#[derive(Subcommand, Debug)]
enum TableauxCmd {
    /// All m_{T;j} for j in [jmin, jmax].
    List(TabArgs),
}

#[derive(Subcommand, Debug)]
enum RepCmd {
    /// Action tables of the thin module.
    Build(Level),
    /// Relation suite and phi-series comparison on the thin module.
    Check(CheckArgs),
    /// q-character of the thin module in the window.
    Qchar(Level),
    /// The module of 2 varpi_1 for n = 3.
    #[command(subcommand)]
    S5(S5Cmd),
}

#[derive(Subcommand, Debug)]
enum S5Cmd {
    Build(S5Args),
    Check(S5CheckArgs),
}

#[derive(Subcommand, Debug)]
enum UnityCmd {
    /// Thin module at a primitive pL-th root of unity.
    Thin(UnityThinArgs),
    /// Module of 2 varpi_1 (n = 3) at a primitive 4L-th root of unity.
    S5(UnityS5Args),
}

#[derive(Args, Debug, Clone, Default)]
struct WindowArgs {
    /// Lower spectral bound; default -4(n+1).
    #[arg(long, allow_negative_numbers = true)]
    lmin: Option<i64>,
    /// Upper spectral bound; default 4(n+1).
    #[arg(long, allow_negative_numbers = true)]
    lmax: Option<i64>,
}

#[derive(Args, Debug, Clone, Default)]
struct Level {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args, Debug, Clone)]
struct ExportArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Anchor such as `Y_{1,4}Y_{1,0}`.
    #[arg(long)]
    anchor: String,
    /// delta-coefficient of the anchor weight.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    delta: i64,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args, Debug, Clone)]
struct TabArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    jmin: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    jmax: Option<i64>,
}

#[derive(Args, Debug, Clone, Default)]
struct RangeArgs {
    /// Bound on |r| in the relations.
    #[arg(long)]
    r_max: Option<i64>,
    /// Comma-separated degrees m of h_{i,m}.
    #[arg(long, allow_hyphen_values = true)]
    m_values: Option<String>,
    /// Distance of test vectors from the window edges.
    #[arg(long)]
    margin: Option<i64>,
    /// Order of the phi-series comparison.
    #[arg(long)]
    fr_order: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct CheckArgs {
    #[command(flatten)]
    level: Level,
    #[command(flatten)]
    ranges: RangeArgs,
}

#[derive(Args, Debug, Clone)]
struct S5Args {
    /// Largest component index s; default from the window width.
    #[arg(long)]
    smax: Option<usize>,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args, Debug, Clone)]
struct S5CheckArgs {
    #[command(flatten)]
    s5: S5Args,
    #[command(flatten)]
    ranges: RangeArgs,
}

#[derive(Args, Debug, Clone)]
struct UnityThinArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long = "L")]
    l: Option<u64>,
    #[command(flatten)]
    ranges: RangeArgs,
}

#[derive(Args, Debug, Clone)]
struct UnityS5Args {
    #[arg(long = "L")]
    l: Option<u64>,
    #[command(flatten)]
    ranges: RangeArgs,
}

/// What a command produced: the rendered output and whether its checks passed.
struct Output {
    text: String,
    passed: bool,
}

struct Ctx {
    cfg: ConfigFile,
    format: Format,
}

impl Ctx {
    fn rank(&self, n: Option<usize>) -> Result<RootSystem, CliError> {
        let n = self.cfg.pick(n, "n")?.ok_or_else(|| CliError::Usage("--n is required".into()))?;
        if n < 3 || n % 2 == 0 {
            return Err(CliError::Usage(format!("--n {n}: n must be odd and at least 3 (n = 2r+1 is assumed throughout)")));
        }
        Ok(RootSystem::new(n)?)
    }

    fn ell(&self, rs: &RootSystem, ell: Option<usize>) -> Result<usize, CliError> {
        let ell = self.cfg.pick(ell, "ell")?.ok_or_else(|| CliError::Usage("--ell is required".into()))?;
        rs.check_ell(ell)?;
        Ok(ell)
    }

    /// The window and whether it was defaulted.
    fn window(&self, rs: &RootSystem, w: &WindowArgs) -> Result<(Window, bool), CliError> {
        let lmin = self.cfg.pick(w.lmin, "lmin")?;
        let lmax = self.cfg.pick(w.lmax, "lmax")?;
        let d = Window::default_for(rs);
        let defaulted = lmin.is_none() && lmax.is_none();
        let window = Window::new(lmin.unwrap_or(d.lmin), lmax.unwrap_or(d.lmax)).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((window, defaulted))
    }

    fn ranges(&self, r: &RangeArgs) -> Result<RelationRanges, CliError> {
        let mut out = RelationRanges::default();
        if let Some(x) = self.cfg.pick(r.r_max, "r_max")? {
            out.r_max = x;
        }
        if let Some(s) = self.cfg.pick(r.m_values.clone(), "m_values")? {
            let parsed: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
            let m = parsed.map_err(|_| CliError::Usage(format!("--m-values {s:?}: expected comma-separated integers")))?;
            if m.is_empty() || m.contains(&0) {
                return Err(CliError::Usage("--m-values needs nonzero degrees".into()));
            }
            out.m_values = m;
        }
        Ok(out)
    }

    fn no_dot(&self) -> Result<(), CliError> {
        if self.format == Format::Dot {
            return Err(CliError::Usage("dot output is only available for crystals".into()));
        }
        Ok(())
    }
}

fn window_json(w: Window, defaulted: bool) -> Value {
    json!({"lmin": w.lmin, "lmax": w.lmax, "default": defaulted})
}

fn window_text(w: Window, defaulted: bool) -> String {
    format!("[{}, {}]{}", w.lmin, w.lmax, if defaulted { " (default)" } else { "" })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn crystal_output(ctx: &Ctx, g: &CrystalGraph, meta: Value, header: String) -> Output {
    let text = match ctx.format {
        Format::Json => {
            let mut v = meta;
            v["graph"] = serde_json::to_value(g.to_json()).expect("graph serializes");
            pretty(&v)
        }
        Format::Dot => format!("// {header}\n{}", g.to_dot()),
        Format::Text => {
            let mut s = format!("# {header}\n# {} nodes\n", g.len());
            for (k, m) in g.nodes().iter().enumerate() {
                let _ = writeln!(s, "{k}\t{}\t{}", m.full_string(), if g.is_interior(k) { "interior" } else { "boundary" });
            }
            for (a, i, b) in g.edges() {
                let _ = writeln!(s, "{a} -{i}-> {b}");
            }
            s
        }
    };
    Output { text, passed: true }
}

fn crystal_gen(ctx: &Ctx, a: &Level) -> Result<Output, CliError> {
    let rs = ctx.rank(a.n)?;
    let ell = ctx.ell(&rs, a.ell)?;
    let (window, defaulted) = ctx.window(&rs, &a.window)?;
    let g = generate(&rs, &[fundamental_monomial(&rs, ell)?], window)?;
    let meta = json!({"command": "crystal gen", "n": rs.n(), "ell": ell, "window": window_json(window, defaulted)});
    let header = format!("crystal of varpi_{ell}, n = {}, window {}", rs.n(), window_text(window, defaulted));
    Ok(crystal_output(ctx, &g, meta, header))
}

fn crystal_export(ctx: &Ctx, a: &ExportArgs) -> Result<Output, CliError> {
    let rs = ctx.rank(a.n)?;
    let (window, defaulted) = ctx.window(&rs, &a.window)?;
    let anchor = Monomial::parse(&rs, &a.anchor, a.delta.into())?;
    let g = generate(&rs, &[anchor.clone()], window)?;
    let meta = json!({"command": "crystal export", "n": rs.n(), "anchor": anchor, "window": window_json(window, defaulted)});
    let header = format!("crystal of {}, n = {}, window {}", anchor.full_string(), rs.n(), window_text(window, defaulted));
    Ok(crystal_output(ctx, &g, meta, header))
}

fn tableaux_list(ctx: &Ctx, a: &TabArgs) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let rs = ctx.rank(a.n)?;
    let ell = ctx.ell(&rs, a.ell)?;
    let jmin = ctx.cfg.pick(a.jmin, "jmin")?.unwrap_or(0);
    let jmax = ctx.cfg.pick(a.jmax, "jmax")?.unwrap_or(ell as i64 - 1);
    if jmin > jmax {
        return Err(CliError::Usage(format!("empty j range [{jmin}, {jmax}]")));
    }
    let list = enumerate(&rs, ell, jmin..=jmax)?;
    let text = match ctx.format {
        Format::Json => pretty(&json!({
            "command": "tableaux list", "n": rs.n(), "ell": ell, "j": [jmin, jmax],
            "tableaux": list.iter().map(|(idx, m)| json!({"tableau": idx.t.entries(), "j": idx.j, "monomial": m})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!("# n = {}, ell = {ell}, j in [{jmin}, {jmax}]: {} monomials\n", rs.n(), list.len());
            for (idx, m) in &list {
                let t: Vec<String> = idx.t.entries().iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "({}) j={}\t{}", t.join(","), idx.j, m.full_string());
            }
            s
        }
    };
    Ok(Output { text, passed: true })
}

fn closed(ctx: &Ctx, a: &Level) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let rs = ctx.rank(a.n)?;
    let ell = ctx.ell(&rs, a.ell)?;
    let (window, defaulted) = ctx.window(&rs, &a.window)?;
    let rep = closed_report(&rs, ell, window, default_margin(&rs))?;
    let passed = rep.verdict == Verdict::Closed;
    let text = match ctx.format {
        Format::Json => {
            let mut v = json!({"command": "closed", "window_default": defaulted});
            v["report"] = serde_json::to_value(&rep).expect("report serializes");
            pretty(&v)
        }
        _ => {
            let mut s = format!("n = {}, ell = {ell}, window {}, {} nodes: {}\n", rs.n(), window_text(window, defaulted), rep.nodes, rep.verdict);
            for d in &rep.directions {
                let _ = write!(s, "direction {}: {} ({} classes, {} at the boundary)", d.direction, d.verdict, d.classes, d.boundary_classes);
                if let Some(w) = &d.witness {
                    let _ = write!(s, "; witness {} misses {}", w.monomial, w.missing);
                }
                s.push('\n');
            }
            let _ = writeln!(s, "Kashiwara operators: {}", if rep.kashiwara.closed { "stable" } else { "not stable" });
            s
        }
    };
    Ok(Output { text, passed })
}

fn thin_module(ctx: &Ctx, a: &Level) -> Result<(LoopModule, Window, bool, usize), CliError> {
    let rs = ctx.rank(a.n)?;
    let ell = ctx.ell(&rs, a.ell)?;
    let (window, defaulted) = ctx.window(&rs, &a.window)?;
    Ok((build_thin(&rs, ell, window)?, window, defaulted, ell))
}

fn module_output(ctx: &Ctx, module: &LoopModule, meta: Value) -> Output {
    let text = match ctx.format {
        Format::Json => {
            let mut v = meta;
            v["module"] = serde_json::to_value(module.to_json()).expect("module serializes");
            pretty(&v)
        }
        _ => {
            let j = module.to_json();
            let usable = j.usable.iter().filter(|&&u| u).count();
            let mut s = format!("# {} basis vectors, {usable} interior, {} action entries\n", j.nodes.len(), j.actions.len());
            for a in &j.actions {
                let _ = writeln!(s, "x{}_{{{},r}} v{} = ({}) q^{{{}r}} v{}", a.sign, a.i, a.source, a.coeff, a.l, a.target);
            }
            s
        }
    };
    Output { text, passed: true }
}

fn rep_build(ctx: &Ctx, a: &Level) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let (module, window, defaulted, ell) = thin_module(ctx, a)?;
    let meta = json!({"command": "rep build", "n": module.root_system().n(), "ell": ell, "window": window_json(window, defaulted)});
    Ok(module_output(ctx, &module, meta))
}

fn relations_output(ctx: &Ctx, module: &LoopModule, ranges: &RelationRanges, margin: i64, fr_order: usize, meta: Value) -> Result<Output, CliError> {
    let rep = check_module(module, margin, ranges, &Relation::ALL)?;
    let fr = compare_with_fr(module, fr_order)?;
    let passed = rep.all_zero() && fr.mismatches.is_empty();
    let text = match ctx.format {
        Format::Json => {
            let mut v = meta;
            v["ranges"] = serde_json::to_value(ranges).expect("ranges serialize");
            v["relations"] = serde_json::to_value(&rep).expect("report serializes");
            v["phi_comparison"] = serde_json::to_value(&fr).expect("report serializes");
            v["passed"] = json!(passed);
            pretty(&v)
        }
        _ => {
            let mut s = format!("{} test vectors, |r| <= {}, m in {:?}\n", rep.vectors, ranges.r_max, ranges.m_values);
            for (r, c) in &rep.counts {
                let _ = writeln!(s, "{:<10} checked {:>8}  zero {:>8}  nonzero {}  inconclusive {}", r.id(), c.checked, c.zero, c.nonzero, c.inconclusive);
            }
            for r in rep.records.iter().take(20) {
                let _ = writeln!(s, "  {} at {} {:?}{}", r.relation.id(), r.vector, r.params, r.inconclusive_reason.as_deref().map(|x| format!(": {x}")).unwrap_or_default());
            }
            let _ = writeln!(s, "phi-series to order {}: {} comparisons, {} mismatches", fr.order, fr.compared, fr.mismatches.len());
            let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Output { text, passed })
}

fn rep_check(ctx: &Ctx, a: &CheckArgs) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let (module, window, defaulted, ell) = thin_module(ctx, &a.level)?;
    let ranges = ctx.ranges(&a.ranges)?;
    let margin = ctx.cfg.pick(a.ranges.margin, "margin")?.unwrap_or(0);
    let fr_order = ctx.cfg.pick(a.ranges.fr_order, "fr_order")?.unwrap_or(6);
    let meta = json!({"command": "rep check", "n": module.root_system().n(), "ell": ell, "window": window_json(window, defaulted), "margin": margin});
    relations_output(ctx, &module, &ranges, margin, fr_order, meta)
}

fn rep_qchar(ctx: &Ctx, a: &Level) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let (module, window, defaulted, ell) = thin_module(ctx, a)?;
    let chi = module.qcharacter(None);
    let text = match ctx.format {
        Format::Json => pretty(&json!({
            "command": "rep qchar", "n": module.root_system().n(), "ell": ell, "window": window_json(window, defaulted),
            "terms": chi.iter().map(|(m, c)| json!({"monomial": m, "multiplicity": c})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!("# q-character on {}: {} terms\n", window_text(window, defaulted), chi.len());
            for (m, c) in &chi {
                let _ = writeln!(s, "{c}\t{}", m.full_string());
            }
            s
        }
    };
    Ok(Output { text, passed: true })
}

fn s5_module(ctx: &Ctx, a: &S5Args) -> Result<(LoopModule, Window, bool, usize), CliError> {
    let rs = RootSystem::new(3)?;
    let (window, defaulted) = ctx.window(&rs, &a.window)?;
    let need = section5_smax(window).ok_or_else(|| CliError::Usage(format!("window {} meets no component", window_text(window, defaulted))))?;
    let smax = ctx.cfg.pick(a.smax, "smax")?.unwrap_or(need);
    Ok((build_section5(smax, window)?, window, defaulted, smax))
}

fn s5_build(ctx: &Ctx, a: &S5Args) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let (module, window, defaulted, smax) = s5_module(ctx, a)?;
    let meta = json!({"command": "rep s5 build", "n": 3, "smax": smax, "window": window_json(window, defaulted)});
    Ok(module_output(ctx, &module, meta))
}

fn s5_check(ctx: &Ctx, a: &S5CheckArgs) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let (module, window, defaulted, smax) = s5_module(ctx, &a.s5)?;
    let ranges = ctx.ranges(&a.ranges)?;
    let margin = ctx.cfg.pick(a.ranges.margin, "margin")?.unwrap_or(0);
    let fr_order = ctx.cfg.pick(a.ranges.fr_order, "fr_order")?.unwrap_or(6);
    let meta = json!({"command": "rep s5 check", "n": 3, "smax": smax, "window": window_json(window, defaulted), "margin": margin});
    relations_output(ctx, &module, &ranges, margin, fr_order, meta)
}

fn unity_output(ctx: &Ctx, rep: UnityReport, meta: Value) -> Output {
    let passed = rep.dimension == rep.expected_dimension && rep.relations.all_zero() && rep.generation.generates;
    let text = match ctx.format {
        Format::Json => {
            let mut v = meta;
            v["report"] = serde_json::to_value(&rep).expect("report serializes");
            v["passed"] = json!(passed);
            pretty(&v)
        }
        _ => {
            let mut s = format!("primitive {}-th root of unity\ndimension {} (expected {})\n", rep.order, rep.dimension, rep.expected_dimension);
            let _ = writeln!(s, "relations: {} checked, {} nonzero", rep.relations.checked(), rep.relations.nonzero());
            let _ = writeln!(
                s,
                "cyclic generation: {} ({}{})",
                rep.generation.generates,
                rep.generation.method,
                rep.generation.failing_vector.as_deref().map(|v| format!("; {v} generates a proper submodule")).unwrap_or_default()
            );
            s
        }
    };
    Output { text, passed }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn unity_thin(ctx: &Ctx, a: &UnityThinArgs) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let rs = ctx.rank(a.n)?;
    let ell = ctx.ell(&rs, a.ell)?;
    let l = ctx.cfg.pick(a.l, "L")?.ok_or_else(|| CliError::Usage("--L is required".into()))?;
    let ranges = ctx.ranges(&a.ranges)?;
    let m = specialize_thin(&rs, ell, l, &ranges)?;
    let meta = json!({"command": "unity thin", "n": rs.n(), "ell": ell, "L": l, "p": thin_period(&rs, ell)?});
    Ok(unity_output(ctx, unity_report(&m, l as usize * binom(rs.size(), ell), &ranges), meta))
}

fn unity_s5(ctx: &Ctx, a: &UnityS5Args) -> Result<Output, CliError> {
    ctx.no_dot()?;
    let l = ctx.cfg.pick(a.l, "L")?.ok_or_else(|| CliError::Usage("--L is required".into()))?;
    let ranges = ctx.ranges(&a.ranges)?;
    let m = specialize_section5(l, &ranges)?;
    let meta = json!({"command": "unity s5", "n": 3, "L": l});
    Ok(unity_output(ctx, unity_report(&m, 16 * (l * l) as usize, &ranges), meta))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let format = cfg.pick(cli.format, "format")?.unwrap_or(Format::Text);
    let ctx = Ctx { cfg, format };
    match &cli.command {
        Command::Crystal(CrystalCmd::Gen(a)) => crystal_gen(&ctx, a),
        Command::Crystal(CrystalCmd::Export(a)) => crystal_export(&ctx, a),
        Command::Tableaux(TableauxCmd::List(a)) => tableaux_list(&ctx, a),
        Command::Closed(a) => closed(&ctx, a),
        Command::Rep(RepCmd::Build(a)) => rep_build(&ctx, a),
        Command::Rep(RepCmd::Check(a)) => rep_check(&ctx, a),
        Command::Rep(RepCmd::Qchar(a)) => rep_qchar(&ctx, a),
        Command::Rep(RepCmd::S5(S5Cmd::Build(a))) => s5_build(&ctx, a),
        Command::Rep(RepCmd::S5(S5Cmd::Check(a))) => s5_check(&ctx, a),
        Command::Unity(UnityCmd::Thin(a)) => unity_thin(&ctx, a),
        Command::Unity(UnityCmd::S5(a)) => unity_s5(&ctx, a),
    }
    .and_then(|o| {
        let out = match &cli.out {
            Some(p) => Some(p.clone()),
            None => ctx.cfg.pick::<PathBuf>(None, "out")?,
        };
        if let Some(p) = out {
            std::fs::write(&p, &o.text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            return Ok(Output { text: String::new(), passed: o.passed });
        }
        Ok(o)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        set_disk_cache(Some(PathBuf::from(dir)));
    }
    match run(&cli) {
        Ok(o) => {
            let _ = std::io::stdout().write_all(o.text.as_bytes());
            ExitCode::from(if o.passed { exit::OK } else { exit::CHECK_FAILED })
        }
        Err(e) => {
            eprintln!("extremal: {e}");
            ExitCode::from(e.code())
        }
    }
}
