//! `matgraph`: field and matrix utilities, graph export, canonical forms,
//! classification, homomorphism search and theorem verification.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matgraph_core::canon::{hom_label, make_colouring, CanonicalForm, Variant};
use matgraph_core::classify::{classify, MapTable};
use matgraph_core::fields::{
    enumerate_field_homs, field_arith, frobenius, ArithOp, Field, FieldElement, FieldHom, FieldSpec,
};
use matgraph_core::geometry::{
    intersect, maximal_sets_containing_pair, maximal_sets_through, ExportFormat, MatrixGraph,
};
use matgraph_core::harness::{all_passed, render_reports, run_suite, Suite, SuiteConfig, DEFAULT_SEARCH_BUDGET};
use matgraph_core::matrices::{all_g_inverses, distance, minus_le, Mat, MatrixSpace};
use matgraph_core::search::{enumerate_homs, sample_homs, search_hom, SearchOutcome, SearchProblem, Termination};

use config::Config;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Domain(String),
}

impl CliError {
    fn io(path: &Path, e: io::Error) -> CliError {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn domain(e: impl std::fmt::Display) -> CliError {
        CliError::Domain(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io(_) => 74,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Domain(m) => m,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "matgraph", version, about = "Rank-metric matrix graphs over finite fields")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-field arithmetic and homomorphisms.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Operations on a single matrix.
    Mat(MatArgs),
    /// Export the adjacency graph as DOT or an edge list.
    Graph(GraphArgs),
    /// Maximal adjacent sets through a matrix or a pair.
    Cliques(CliquesArgs),
    /// Tabulate a canonical homomorphism.
    Construct(ConstructArgs),
    /// Classify a map table.
    Classify(ClassifyArgs),
    /// Search for graph homomorphisms.
    Search(SearchArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

/// `p=<p> k=<k> poly=<c0,...>` as one or several words, or a bare order such as `4`.
#[derive(Args, Debug, Clone)]
struct FieldArg {
    #[arg(long, num_args = 1..=3, required = true, value_name = "SPEC")]
    field: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum FieldCommand {
    /// Defining data of a field.
    Info(FieldArg),
    /// One arithmetic operation on element indices.
    Arith {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum)]
        op: OpName,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 0)]
        b: u64,
        /// Exponent for `pow`; negative values invert first.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        exp: i64,
    },
    /// `a^(p^i)`.
    Frobenius {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Every homomorphism between two fields.
    Homs {
        #[arg(long, num_args = 1..=3, required = true, value_name = "SPEC")]
        src: Vec<String>,
        #[arg(long, num_args = 1..=3, required = true, value_name = "SPEC")]
        dst: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OpName {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Pow,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatOp {
    Rank,
    Transpose,
    Inverse,
    NormalForm,
    GInverses,
    Encode,
    Decode,
    Distance,
    Adjacent,
    MinusLe,
}

#[derive(Args, Debug)]
struct MatArgs {
    #[arg(value_enum)]
    op: MatOp,
    #[command(flatten)]
    field: FieldArg,
    /// `m,n`.
    #[arg(long)]
    shape: String,
    /// Row-major element indices.
    #[arg(long)]
    entries: Option<String>,
    /// Second operand for `distance`, `adjacent` and `minus-le`.
    #[arg(long)]
    other: Option<String>,
    /// Encoding for `decode`.
    #[arg(long)]
    index: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GraphFormat {
    Dot,
    Edges,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long)]
    shape: String,
    #[arg(long, value_enum, default_value = "dot")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CliquesArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long)]
    shape: String,
    /// Defaults to the zero matrix.
    #[arg(long)]
    through: Option<String>,
    /// A matrix adjacent to `--through`; prints the two sets holding both and their line.
    #[arg(long)]
    with: Option<String>,
    /// List the points of each set.
    #[arg(long)]
    points: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormName {
    Standard,
    Transpose,
    Semrl,
    SemrlT,
    Shifted,
    ShiftedT,
    Colouring,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    form: FormName,
    #[arg(long, num_args = 1..=3, required = true, value_name = "SPEC")]
    src_field: Vec<String>,
    #[arg(long)]
    src_shape: String,
    /// Defaults to the source field.
    #[arg(long, num_args = 1..=3, value_name = "SPEC")]
    dst_field: Vec<String>,
    /// Defaults to the source shape.
    #[arg(long)]
    dst_shape: Option<String>,
    #[arg(long = "P")]
    p: Option<String>,
    #[arg(long = "Q")]
    q: Option<String>,
    /// `src>dst:i`, the i-th enumerated field homomorphism.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long)]
    a0: Option<String>,
    #[arg(long)]
    offset: Option<String>,
    /// Index of the target among the maximal sets through 0, for colourings.
    #[arg(long, default_value_t = 0)]
    clique: usize,
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    table: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SearchMode {
    First,
    Enumerate,
    Sample,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "first")]
    mode: SearchMode,
    #[arg(long, default_value_t = 10)]
    limit: usize,
    /// Overrides the seed in the problem file.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the budget in the problem file.
    #[arg(long)]
    budget: Option<u64>,
    /// Directory receiving one `.mt` file per result.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// A suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = Config::load(cli.config.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    pool.install(|| match cli.command {
        Command::Field(c) => field_cmd(&cfg, c),
        Command::Mat(a) => mat_cmd(&cfg, a),
        Command::Graph(a) => graph_cmd(&cfg, a),
        Command::Cliques(a) => cliques_cmd(&cfg, a),
        Command::Construct(a) => construct_cmd(&cfg, a),
        Command::Classify(a) => classify_cmd(a),
        Command::Search(a) => search_cmd(&cfg, a),
        Command::Verify(a) => verify_cmd(&cfg, a),
    })
}

fn emit(cfg: &Config, out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let p = cfg.out_path(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            fs::write(&p, text).map_err(|e| CliError::io(&p, e))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parse_field(cfg: &Config, words: &[String]) -> Result<Field> {
    let joined = words.join(" ");
    let spec = if let Ok(q) = joined.trim().parse::<u64>() {
        FieldSpec::standard_with(q, &cfg.fields)
    } else if joined.contains("poly=") {
        FieldSpec::from_str(&joined)
    } else {
        FieldSpec::from_str(&joined).and_then(|s| FieldSpec::standard_with(s.order() as u64, &cfg.fields))
    };
    spec.map(Field::new)
        .map_err(|e| CliError::Usage(format!("--field: {e}")))
}

fn parse_shape(s: &str) -> Result<(usize, usize)> {
    let dims: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad shape `{s}`, expected m,n")))?;
    match dims[..] {
        [m, n] if m > 0 && n > 0 => Ok((m, n)),
        _ => Err(CliError::Usage(format!("bad shape `{s}`, expected m,n"))),
    }
}

fn parse_mat(field: &Field, rows: usize, cols: usize, csv: &str, what: &str) -> Result<Mat> {
    Mat::from_csv(field, rows, cols, csv).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn field_cmd(cfg: &Config, c: FieldCommand) -> Result<u8> {
    let mut out = String::new();
    match c {
        FieldCommand::Info(f) => {
            let f = parse_field(cfg, &f.field)?;
            writeln!(out, "{}", f.spec()).unwrap();
            writeln!(out, "order {}", f.order()).unwrap();
            writeln!(out, "characteristic {}", f.characteristic()).unwrap();
            writeln!(out, "degree {}", f.degree()).unwrap();
            for e in f.elements() {
                let c: Vec<String> = f.coeffs(e).iter().map(u32::to_string).collect();
                writeln!(out, "element {e} coeffs {}", c.join(",")).unwrap();
            }
        }
        FieldCommand::Arith { field, op, a, b, exp } => {
            let f = parse_field(cfg, &field.field)?;
            let a = FieldElement::new(&f, a).map_err(|e| CliError::Usage(e.to_string()))?;
            let b = FieldElement::new(&f, b).map_err(|e| CliError::Usage(e.to_string()))?;
            let op = match op {
                OpName::Add => ArithOp::Add,
                OpName::Sub => ArithOp::Sub,
                OpName::Mul => ArithOp::Mul,
                OpName::Neg => ArithOp::Neg,
                OpName::Inv => ArithOp::Inv,
                OpName::Pow => ArithOp::Pow(exp),
            };
            let r = field_arith(&a, &b, op).map_err(CliError::domain)?;
            writeln!(out, "{}", r.value()).unwrap();
        }
        FieldCommand::Frobenius { field, a, power } => {
            let f = parse_field(cfg, &field.field)?;
            let a = FieldElement::new(&f, a).map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(out, "{}", frobenius(&a, power).map_err(CliError::domain)?.value()).unwrap();
        }
        FieldCommand::Homs { src, dst } => {
            let (s, d) = (parse_field(cfg, &src)?, parse_field(cfg, &dst)?);
            let homs = enumerate_field_homs(&s, &d);
            writeln!(out, "count {}", homs.len()).unwrap();
            for h in &homs {
                let t: Vec<String> = h.table().iter().map(|e| e.to_string()).collect();
                writeln!(out, "{} {}", hom_label(h), t.join(",")).unwrap();
            }
        }
    }
    emit(cfg, None, &out)?;
    Ok(0)
}

fn mat_cmd(cfg: &Config, a: MatArgs) -> Result<u8> {
    let f = parse_field(cfg, &a.field.field)?;
    let (m, n) = parse_shape(&a.shape)?;
    let space = MatrixSpace::new(&f, m, n);
    let operand = || -> Result<Mat> {
        let csv = a
            .entries
            .as_deref()
            .ok_or_else(|| CliError::Usage("--entries is required".into()))?;
        parse_mat(&f, m, n, csv, "--entries")
    };
    let other = || -> Result<Mat> {
        let csv = a
            .other
            .as_deref()
            .ok_or_else(|| CliError::Usage("--other is required".into()))?;
        parse_mat(&f, m, n, csv, "--other")
    };
    let out = match a.op {
        MatOp::Rank => format!("{}\n", operand()?.rank()),
        MatOp::Transpose => format!("{}\n", operand()?.transpose()),
        MatOp::Inverse => match operand()?.inverse() {
            Some(i) => format!("{i}\n"),
            None => return Err(CliError::Domain("matrix is not invertible".into())),
        },
        MatOp::NormalForm => {
            let nf = operand()?.normal_form();
            format!("rank {}\nP {}\nQ {}\n", nf.rank, nf.p, nf.q)
        }
        MatOp::GInverses => {
            let gs = all_g_inverses(&operand()?, cfg.state_cap).map_err(CliError::domain)?;
            let mut s = format!("count {}\n", gs.len());
            for g in gs {
                writeln!(s, "{g}").unwrap();
            }
            s
        }
        MatOp::Encode => format!("{}\n", space.encode(&operand()?)),
        MatOp::Decode => {
            let i = a.index.ok_or_else(|| CliError::Usage("--index is required".into()))?;
            if (i as u128) >= space.size() {
                return Err(CliError::Usage(format!("index {i} out of range")));
            }
            format!("{}\n", space.decode(i))
        }
        MatOp::Distance => format!("{}\n", distance(&operand()?, &other()?).map_err(CliError::domain)?),
        MatOp::Adjacent => format!("{}\n", distance(&operand()?, &other()?).map_err(CliError::domain)? == 1),
        MatOp::MinusLe => format!("{}\n", minus_le(&operand()?, &other()?).map_err(CliError::domain)?),
    };
    emit(cfg, None, &out)?;
    Ok(0)
}

fn graph_cmd(cfg: &Config, a: GraphArgs) -> Result<u8> {
    let f = parse_field(cfg, &a.field.field)?;
    let (m, n) = parse_shape(&a.shape)?;
    let g = MatrixGraph::new(&MatrixSpace::new(&f, m, n), cfg.state_cap).map_err(CliError::domain)?;
    let format = match a.format {
        GraphFormat::Dot => ExportFormat::Dot,
        GraphFormat::Edges => ExportFormat::EdgeList,
    };
    emit(cfg, a.out.as_deref(), &g.export(format))?;
    Ok(0)
}

fn cliques_cmd(cfg: &Config, a: CliquesArgs) -> Result<u8> {
    let f = parse_field(cfg, &a.field.field)?;
    let (m, n) = parse_shape(&a.shape)?;
    let x = match &a.through {
        Some(csv) => parse_mat(&f, m, n, csv, "--through")?,
        None => Mat::zeros(&f, m, n),
    };
    let mut out = String::new();
    let list = |out: &mut String, set: &matgraph_core::geometry::MaximalSet| {
        writeln!(out, "{} points={}", set.describe(), set.cardinality()).unwrap();
        if a.points {
            for p in set.points() {
                writeln!(out, "  {p}").unwrap();
            }
        }
    };
    match &a.with {
        None => {
            let sets = maximal_sets_through(&x);
            writeln!(out, "count {}", sets.len()).unwrap();
            for s in &sets {
                list(&mut out, s);
            }
        }
        Some(csv) => {
            let y = parse_mat(&f, m, n, csv, "--with")?;
            let (s, t) = maximal_sets_containing_pair(&x, &y).map_err(CliError::domain)?;
            list(&mut out, &s);
            list(&mut out, &t);
            let line = intersect(&s, &t).map_err(CliError::domain)?;
            let pts: Vec<String> = line.iter().map(Mat::to_string).collect();
            writeln!(out, "line {}", pts.join(" ")).unwrap();
        }
    }
    emit(cfg, None, &out)?;
    Ok(0)
}

fn parse_tau(label: Option<&str>, src: &Field, dst: &Field) -> Result<FieldHom> {
    let homs = enumerate_field_homs(src, dst);
    let i = match label {
        None => 0,
        Some(l) => {
            let bad = || CliError::Usage(format!("bad --tau `{l}`, expected src>dst:i"));
            let (orders, i) = l.split_once(':').ok_or_else(bad)?;
            let (s, d) = orders.split_once('>').ok_or_else(bad)?;
            let (s, d): (usize, usize) = (s.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?);
            if s != src.order() || d != dst.order() {
                return Err(CliError::Usage(format!("--tau `{l}` does not match the field orders")));
            }
            i.parse().map_err(|_| bad())?
        }
    };
    homs.get(i).cloned().ok_or_else(|| {
        CliError::Domain(format!(
            "{} field homomorphisms from GF({}) to GF({}), index {i} requested",
            homs.len(),
            src.order(),
            dst.order()
        ))
    })
}

fn construct_cmd(cfg: &Config, a: ConstructArgs) -> Result<u8> {
    let sf = parse_field(cfg, &a.src_field)?;
    let df = if a.dst_field.is_empty() {
        sf.clone()
    } else {
        parse_field(cfg, &a.dst_field)?
    };
    let (m, n) = parse_shape(&a.src_shape)?;
    let (dm, dn) = match &a.dst_shape {
        Some(s) => parse_shape(s)?,
        None => (m, n),
    };
    let src = MatrixSpace::new(&sf, m, n);
    let dst = MatrixSpace::new(&df, dm, dn);
    let table = if a.form == FormName::Colouring {
        let sets = maximal_sets_through(&dst.zero());
        let target = sets
            .get(a.clique)
            .ok_or_else(|| CliError::Usage(format!("--clique {} out of range ({} sets)", a.clique, sets.len())))?;
        let weights = match &a.weights {
            Some(w) => Some(
                w.split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| CliError::Usage(format!("bad --weights `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        make_colouring(&src, target, weights.as_deref()).map_err(CliError::domain)?
    } else {
        let variant = match a.form {
            FormName::Standard => Variant::AdditiveStandard,
            FormName::Transpose => Variant::AdditiveTranspose,
            FormName::Semrl => Variant::SemrlStandard,
            FormName::SemrlT => Variant::SemrlTranspose,
            FormName::Shifted => Variant::ShiftedSemrlStandard,
            FormName::ShiftedT => Variant::ShiftedSemrlTranspose,
            FormName::Colouring => unreachable!("handled above"),
        };
        let tau = parse_tau(a.tau.as_deref(), &sf, &df)?;
        let mat_or = |csv: &Option<String>, r: usize, c: usize, what: &str, dflt: Mat| -> Result<Mat> {
            match csv {
                Some(s) => parse_mat(&df, r, c, s, what),
                None => Ok(dflt),
            }
        };
        let embed = |r: usize, c: usize| Mat::diag_ones(&df, r, c, r.min(c));
        let form = if variant.is_additive() {
            let (pr, pc, qr) = if variant.is_transpose() { (dm, n, m) } else { (dm, m, n) };
            let p = mat_or(&a.p, pr, pc, "--P", embed(pr, pc))?;
            let q = mat_or(&a.q, qr, dn, "--Q", embed(qr, dn))?;
            if variant.is_transpose() {
                CanonicalForm::additive_transpose(&src, &dst, p, tau, q)
            } else {
                CanonicalForm::additive(&src, &dst, p, tau, q)
            }
        } else {
            let p = mat_or(&a.p, dm, dm, "--P", Mat::identity(&df, dm))?;
            let q = mat_or(&a.q, dn, dn, "--Q", Mat::identity(&df, dn))?;
            let l = mat_or(&a.l, m, m, "--L", Mat::zeros(&df, m, m))?;
            if variant.is_shifted() {
                let a0 = match &a.a0 {
                    Some(s) => parse_mat(&sf, m, n, s, "--a0")?,
                    None => src.zero(),
                };
                let offset = mat_or(&a.offset, dm, dn, "--offset", dst.zero())?;
                CanonicalForm::shifted_semrl(&src, &dst, p, q, tau, l, a0, offset, variant.is_transpose())
            } else {
                CanonicalForm::semrl(&src, &dst, p, q, tau, l, variant.is_transpose())
            }
        }
        .map_err(CliError::domain)?;
        form.tabulate(cfg.state_cap).map_err(CliError::domain)?
    };
    emit(cfg, a.out.as_deref(), &table.to_text())?;
    Ok(0)
}

fn classify_cmd(a: ClassifyArgs) -> Result<u8> {
    let table = MapTable::parse(&read(&a.table)?).map_err(CliError::domain)?;
    print!("{}", classify(&table).render());
    Ok(0)
}

fn search_cmd(cfg: &Config, a: SearchArgs) -> Result<u8> {
    let mut p = SearchProblem::parse(&read(&a.problem)?).map_err(CliError::domain)?;
    if let Some(s) = a.seed {
        p.seed = s;
    }
    if let Some(b) = a.budget {
        p.budget = b;
    }
    let (tables, code, status) = match a.mode {
        SearchMode::First => match search_hom(&p).map_err(CliError::domain)? {
            SearchOutcome::Found(t, s) => (
                vec![t],
                0,
                format!("found nodes={} backtracks={}", s.nodes, s.backtracks),
            ),
            SearchOutcome::Unsat(s) => (
                vec![],
                1,
                format!("unsat nodes={} backtracks={}", s.nodes, s.backtracks),
            ),
            SearchOutcome::BudgetExceeded(s) => (vec![], 2, format!("budget-exceeded nodes={}", s.nodes)),
        },
        SearchMode::Enumerate => {
            let e = enumerate_homs(&p, a.limit).map_err(CliError::domain)?;
            let code = match (e.tables.is_empty(), e.termination) {
                (false, _) => 0,
                (true, Termination::Budget) => 2,
                (true, _) => 1,
            };
            let term = match e.termination {
                Termination::Exhausted => "exhausted",
                Termination::Stopped => "limit",
                Termination::Budget => "budget",
            };
            let status = format!("enumerated count={} end={term} nodes={}", e.tables.len(), e.stats.nodes);
            (e.tables, code, status)
        }
        SearchMode::Sample => {
            let v = sample_homs(&p, a.limit, p.seed).map_err(CliError::domain)?;
            let code = if v.is_empty() { 2 } else { 0 };
            let status = format!("sampled count={} seed={}", v.len(), p.seed);
            (v, code, status)
        }
    };
    let mut out = format!("# {status}\n");
    for (i, t) in tables.iter().enumerate() {
        writeln!(out, "# table {i}").unwrap();
        out.push_str(&t.to_text());
    }
    match &a.out {
        Some(dir) => {
            for (i, t) in tables.iter().enumerate() {
                emit(cfg, Some(&dir.join(format!("hom-{i:04}.mt"))), &t.to_text())?;
            }
            println!("# {status}");
        }
        None => emit(cfg, None, &out)?,
    }
    Ok(code)
}

fn verify_cmd(cfg: &Config, a: VerifyArgs) -> Result<u8> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&a.suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            CliError::Usage(format!(
                "unknown suite `{}`; choose from {} or all",
                a.suite,
                names.join(", ")
            ))
        })?]
    };
    let sc = SuiteConfig {
        seed: a.seed.unwrap_or(cfg.seed),
        budget: a.budget,
    };
    let reports: Vec<_> = suites.iter().flat_map(|&s| run_suite(s, &sc)).collect();
    emit(cfg, a.out.as_deref(), &render_reports(&reports))?;
    Ok(if all_passed(&reports) { 0 } else { 1 })
}
