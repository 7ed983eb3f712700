//! Command-line front end for `decnum-core`.
//!
//! [`parse_args`] validates an argument vector into a [`CommandConfig`],
//! [`run`] turns it into an [`OutputRecord`], and [`render`] prints the record
//! as aligned text, markdown or JSON. [`main_entry`] glues the three together
//! and maps failures onto exit codes: 0 success, 1 refusal, 2 usage.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use decnum_core::intmat::FinAbGroup;
use decnum_core::modrep::{self, IrreducibleLabel, SmallGroup};
use decnum_core::omodule::{self, FgModule};
use decnum_core::perverse::{self, ConeData, ExtensionFlavor, ExtensionKind, Perversity};
use decnum_core::rootsys::{self, DynkinDiagram, Series};

mod paper;
mod render;

pub use paper::generate_paper_tables;
pub use render::render;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRIMES: [u64; 4] = [2, 3, 5, 7];
pub const DEGREE_WINDOW_VAR: &str = "DECNUM_DEGREE_WINDOW";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Clap(e) => e.exit_code(),
            CliError::Refused(_) => 1,
        }
    }
}

impl From<perverse::PerverseError> for CliError {
    fn from(e: perverse::PerverseError) -> Self {
        CliError::Refused(e.to_string())
    }
}

impl From<rootsys::RootSysError> for CliError {
    fn from(e: rootsys::RootSysError) -> Self {
        CliError::Refused(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "decnum", version, about = "Decomposition numbers of modular perverse sheaves on simple and minimal singularities")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Weight lattice data: P/Q, P^v/Q^v, roots, dual Coxeter number.
    Lattice(TypeArgs),
    /// Decomposition number of the rational double point of the (folded) type.
    Simple(PrimeArgs),
    /// Per-character decomposition numbers for the subregular singularity.
    Subregular(PrimeArgs),
    /// Decomposition number for the minimal orbit closure.
    Minimal(PrimeArgs),
    /// Stalks of the six perverse extensions at the singular point.
    Stalks(StalkArgs),
    /// Regenerate the decomposition tables over the fixed grid.
    Tables(TableArgs),
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct TypeArgs {
    /// Dynkin series, one of A..G.
    #[arg(long = "type")]
    series: String,
    #[arg(long)]
    rank: usize,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct PrimeArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Characteristic of the residue field; all of 2, 3, 5, 7 when omitted.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Debug)]
struct StalkArgs {
    #[command(flatten)]
    prime: PrimeArgs,
    /// p|pplus followed by shriek|ic|star, e.g. pplus-ic; all six when omitted.
    #[arg(long)]
    flavor: Option<String>,
    #[arg(long, value_enum, ignore_case = true)]
    coeff: Option<Coeff>,
    /// Which cone carries the stalks.
    #[arg(long, value_enum, default_value_t = Cone::Simple)]
    cone: Cone,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Render the three published tables before the raw grid.
    #[arg(long)]
    paper: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
pub enum Coeff {
    #[value(name = "K")]
    K,
    #[value(name = "O")]
    O,
    #[value(name = "F")]
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    /// Rational double point of the folded type, no symmetry.
    Simple,
    /// Rational double point with the folding symmetry.
    Subregular,
    /// Minimal nilpotent orbit closure.
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Lattice,
    Simple,
    Subregular,
    Minimal,
    Stalks,
    Tables,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Lattice => "lattice",
            CommandKind::Simple => "simple",
            CommandKind::Subregular => "subregular",
            CommandKind::Minimal => "minimal",
            CommandKind::Stalks => "stalks",
            CommandKind::Tables => "tables",
        }
    }
}

/// A validated request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandConfig {
    pub subcommand: CommandKind,
    pub diagram: Option<DynkinDiagram>,
    /// Primes to evaluate, in order.
    pub ells: Vec<u64>,
    /// Whether `ells` came from `--ell`.
    pub ell_given: bool,
    pub flavors: Vec<ExtensionFlavor>,
    pub coeffs: Vec<Coeff>,
    pub cone: Cone,
    pub paper: bool,
    pub format: Format,
}

fn parse_diagram(t: &TypeArgs) -> Result<DynkinDiagram> {
    let series: Series = t.series.parse().map_err(|e: rootsys::RootSysError| CliError::Usage(e.to_string()))?;
    DynkinDiagram::new(series, t.rank).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_ell(ell: Option<u64>) -> Result<(Vec<u64>, bool)> {
    match ell {
        Some(l) if modrep::is_prime(l) => Ok((vec![l], true)),
        Some(l) => Err(CliError::Usage(format!("--ell {l} is not prime"))),
        None => Ok((DEFAULT_PRIMES.to_vec(), false)),
    }
}

/// Parses `p|pplus` followed by `shriek|ic|star`, with an optional
/// separator; the symbolic spellings `p+`, `!`, `!*`, `*` are accepted too.
pub fn parse_flavor(s: &str) -> Result<ExtensionFlavor> {
    let t = s.trim().to_ascii_lowercase();
    let (perversity, rest) = if let Some(r) = t.strip_prefix("pplus") {
        (Perversity::PPlus, r)
    } else if let Some(r) = t.strip_prefix("p+") {
        (Perversity::PPlus, r)
    } else if let Some(r) = t.strip_prefix('p') {
        (Perversity::P, r)
    } else {
        return Err(CliError::Usage(format!("unknown flavor {s:?}")));
    };
    let rest = rest.trim_start_matches(['-', '_', ':', ' ']);
    let rest = rest.strip_prefix("j_").unwrap_or(rest);
    let kind = match rest {
        "shriek" | "!" => ExtensionKind::Shriek,
        "ic" | "!*" => ExtensionKind::Intermediate,
        "star" | "*" => ExtensionKind::Star,
        _ => return Err(CliError::Usage(format!("unknown flavor {s:?}"))),
    };
    Ok(ExtensionFlavor::new(perversity, kind))
}

/// Validates `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CommandConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let base = |subcommand, format| CommandConfig {
        subcommand,
        diagram: None,
        ells: Vec::new(),
        ell_given: false,
        flavors: Vec::new(),
        coeffs: Vec::new(),
        cone: Cone::Simple,
        paper: false,
        format,
    };
    let with_prime = |sub, p: &PrimeArgs| -> Result<CommandConfig> {
        let (ells, ell_given) = parse_ell(p.ell)?;
        Ok(CommandConfig {
            diagram: Some(parse_diagram(&p.ty)?),
            ells,
            ell_given,
            ..base(sub, p.ty.format.format)
        })
    };
    match cli.command {
        Cmd::Lattice(t) => Ok(CommandConfig {
            diagram: Some(parse_diagram(&t)?),
            ..base(CommandKind::Lattice, t.format.format)
        }),
        Cmd::Simple(p) => with_prime(CommandKind::Simple, &p),
        Cmd::Subregular(p) => with_prime(CommandKind::Subregular, &p),
        Cmd::Minimal(p) => with_prime(CommandKind::Minimal, &p),
        Cmd::Stalks(s) => {
            let mut cfg = with_prime(CommandKind::Stalks, &s.prime)?;
            cfg.flavors = match &s.flavor {
                Some(f) => vec![parse_flavor(f)?],
                None => ExtensionFlavor::CHAIN.to_vec(),
            };
            cfg.coeffs = match s.coeff {
                Some(c) => vec![c],
                None => vec![Coeff::K, Coeff::O, Coeff::F],
            };
            cfg.cone = s.cone;
            Ok(cfg)
        }
        Cmd::Tables(t) => Ok(CommandConfig {
            ells: DEFAULT_PRIMES.to_vec(),
            paper: t.paper,
            ..base(CommandKind::Tables, t.format.format)
        }),
    }
}

/// Echo of the validated inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ell: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flavor: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeff: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Cone>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub paper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema: u32,
    pub command: String,
    pub inputs: Inputs,
    pub results: Results,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Results {
    Lattice(LatticeReport),
    Decomposition(DecompositionList),
    Minimal(MinimalList),
    Stalks(StalkReport),
    Tables(TablesReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub divisors: Vec<u64>,
    pub free_rank: usize,
    pub text: String,
}

impl From<&FinAbGroup> for GroupRecord {
    fn from(g: &FinAbGroup) -> Self {
        GroupRecord { divisors: g.divisors().to_vec(), free_rank: g.free_rank(), text: pretty_group(g) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub diagram: String,
    pub cartan: Vec<Vec<i64>>,
    pub roots: usize,
    pub dual_coxeter: u64,
    pub weight_quotient: GroupRecord,
    pub coweight_quotient: GroupRecord,
    pub connection_index: u64,
    pub long_root_subsystem: String,
    pub folding_target: String,
    pub folding_symmetry: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub singularity: String,
    pub gamma_hat: String,
    pub symmetry: String,
    pub group: GroupRecord,
    pub ell: u64,
    pub d: usize,
    pub per_character: BTreeMap<IrreducibleLabel, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionList {
    pub entries: Vec<DecompositionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalEntry {
    pub singularity: String,
    pub orbit_dim: u32,
    pub gamma_prime: String,
    pub group: GroupRecord,
    pub ell: u64,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalList {
    pub entries: Vec<MinimalEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkDegree {
    pub degree: i32,
    pub module: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkEntry {
    pub flavor: String,
    pub coeff: Coeff,
    /// What is computed, e.g. `F (x)^L p j_!*(O[d])`.
    pub object: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    pub stalk: Vec<StalkDegree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkReport {
    pub cone: String,
    pub open_dim: u32,
    /// Degrees outside the known window are omitted.
    pub partial: bool,
    pub entries: Vec<StalkEntry>,
}

/// One rendered table: a header row and string cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub note: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub family: String,
    pub singularity: String,
    pub ell: u64,
    pub d: usize,
    pub per_character: BTreeMap<IrreducibleLabel, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub tables: Vec<Table>,
    pub grid: Vec<GridEntry>,
}

/// `Z/2 + (Z/2)^2` style with blackboard Z and superscript exponents.
pub fn pretty_group(g: &FinAbGroup) -> String {
    g.to_string()
        .replace('Z', "ℤ")
        .replace("^2", "²")
        .replace("^3", "³")
        .replace(" + ", " ⊕ ")
}

pub fn pretty_symmetry(g: SmallGroup) -> String {
    match g {
        SmallGroup::S3 => "S_3".into(),
        g => g.to_string().replace('Z', "ℤ"),
    }
}

/// Diagram name with an underscore before the rank, e.g. `D_4`.
pub fn subscripted(d: DynkinDiagram) -> String {
    format!("{}_{}", d.series().letter(), d.rank())
}

fn with_window<T>(c: std::result::Result<T, perverse::PerverseError>) -> Result<T> {
    c.map_err(CliError::from)
}

/// Plain decomposition number of the rational double point of type `hat(gamma)`.
pub fn simple_entry(gamma: DynkinDiagram, ell: u64) -> Result<DecompositionEntry> {
    let hat = rootsys::folding(gamma).gamma_hat;
    let c = with_window(perverse::link_cohomology_simple(hat, None))?;
    let d = with_window(perverse::decomposition_number(&c, ell))?;
    Ok(DecompositionEntry {
        singularity: hat.to_string(),
        gamma_hat: hat.to_string(),
        symmetry: pretty_symmetry(SmallGroup::Trivial),
        group: (&c.link.get(c.d()).torsion()).into(),
        ell,
        d,
        per_character: BTreeMap::from([(IrreducibleLabel::Trivial, d)]),
    })
}

/// Per-character decomposition numbers of the singularity of type `gamma`
/// with its folding symmetry.
pub fn subregular_entry(gamma: DynkinDiagram, ell: u64) -> Result<DecompositionEntry> {
    let f = rootsys::folding(gamma);
    let c = with_window(perverse::simple_singularity(gamma))?;
    let r = with_window(perverse::equivariant_decomposition(&c, f.symmetry, ell))?;
    Ok(DecompositionEntry {
        singularity: gamma.to_string(),
        gamma_hat: f.gamma_hat.to_string(),
        symmetry: pretty_symmetry(f.symmetry),
        group: (&c.link.get(c.d()).torsion()).into(),
        ell,
        d: r.plain,
        per_character: r.per_character,
    })
}

pub fn minimal_entry(ty: DynkinDiagram, ell: u64) -> Result<MinimalEntry> {
    let c = with_window(perverse::link_cohomology_minimal(ty))?;
    let d = with_window(perverse::decomposition_number(&c, ell))?;
    Ok(MinimalEntry {
        singularity: c.label.clone(),
        orbit_dim: c.open_dim,
        gamma_prime: rootsys::long_root_subsystem(ty).to_string(),
        group: (&c.link.get(c.d()).torsion()).into(),
        ell,
        d,
    })
}

fn lattice_report(d: DynkinDiagram) -> Result<LatticeReport> {
    let rs = rootsys::root_system(d);
    let p = rootsys::fundamental_group(d, false)?.group;
    let pv = rootsys::fundamental_group(d, true)?.group;
    let cartan = rootsys::cartan_matrix(d);
    let f = rootsys::folding(d);
    Ok(LatticeReport {
        diagram: d.to_string(),
        cartan: (0..cartan.rows()).map(|i| cartan.row(i).to_vec()).collect(),
        roots: rs.roots.len(),
        dual_coxeter: rs.dual_coxeter,
        connection_index: p.torsion_order(),
        weight_quotient: (&p).into(),
        coweight_quotient: (&pv).into(),
        long_root_subsystem: rootsys::long_root_subsystem(d).to_string(),
        folding_target: f.gamma_hat.to_string(),
        folding_symmetry: pretty_symmetry(f.symmetry),
    })
}

fn cone_for(cone: Cone, d: DynkinDiagram) -> Result<ConeData> {
    with_window(match cone {
        Cone::Simple => perverse::link_cohomology_simple(rootsys::folding(d).gamma_hat, None),
        Cone::Subregular => perverse::simple_singularity(d),
        Cone::Minimal => perverse::link_cohomology_minimal(d),
    })
}

fn degrees<M: FgModule>(g: &omodule::Graded<M>) -> Vec<StalkDegree> {
    g.iter().map(|(degree, m)| StalkDegree { degree, module: m.to_string() }).collect()
}

fn f_degrees(g: &omodule::FGraded, field: &str) -> Vec<StalkDegree> {
    g.iter()
        .map(|(degree, n)| StalkDegree {
            degree,
            module: if n == 1 { field.to_string() } else { format!("{field}^{n}") },
        })
        .collect()
}

fn stalk_report(cfg: &CommandConfig, d: DynkinDiagram) -> Result<StalkReport> {
    let c = cone_for(cfg.cone, d)?;
    let mut entries = Vec::new();
    for &flavor in &cfg.flavors {
        for &coeff in &cfg.coeffs {
            let name = flavor.to_string();
            match coeff {
                Coeff::K => {
                    // rational stalks do not depend on the prime
                    let s = with_window(perverse::extension_stalk(&c, flavor, cfg.ells[0]))?;
                    entries.push(StalkEntry {
                        flavor: name.clone(),
                        coeff,
                        object: format!("K (x) {name}(O[d])"),
                        ell: None,
                        stalk: f_degrees(&perverse::rationalize_stalk(&s), "K"),
                    });
                }
                Coeff::O if !cfg.ell_given => {
                    let s = with_window(perverse::extension_stalk_integral(&c, flavor))?;
                    entries.push(StalkEntry {
                        flavor: name.clone(),
                        coeff,
                        object: format!("{name}(Z[d])"),
                        ell: None,
                        stalk: degrees(&s),
                    });
                }
                Coeff::O => {
                    for &ell in &cfg.ells {
                        let s = with_window(perverse::extension_stalk(&c, flavor, ell))?;
                        entries.push(StalkEntry {
                            flavor: name.clone(),
                            coeff,
                            object: format!("{name}(O[d])"),
                            ell: Some(ell),
                            stalk: degrees(&s),
                        });
                    }
                }
                Coeff::F => {
                    for &ell in &cfg.ells {
                        let s = with_window(perverse::extension_stalk(&c, flavor, ell))?;
                        let reduced = with_window(perverse::reduce_stalk(&s, ell))?;
                        entries.push(StalkEntry {
                            flavor: name.clone(),
                            coeff,
                            object: format!("F (x)^L {name}(O[d])"),
                            ell: Some(ell),
                            stalk: f_degrees(&reduced, "F"),
                        });
                        if !flavor.is_plus() {
                            let f = with_window(perverse::f_extension_stalk(&c, flavor, ell))?;
                            entries.push(StalkEntry {
                                flavor: name.clone(),
                                coeff,
                                object: format!("{name}(F[d])"),
                                ell: Some(ell),
                                stalk: f_degrees(&f, "F"),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(StalkReport { cone: c.label.clone(), open_dim: c.open_dim, partial: c.is_partial(), entries })
}

fn inputs_of(cfg: &CommandConfig) -> Inputs {
    let stalks = cfg.subcommand == CommandKind::Stalks;
    Inputs {
        series: cfg.diagram.map(|d| d.series().letter().to_string()),
        rank: cfg.diagram.map(|d| d.rank()),
        ell: if cfg.subcommand == CommandKind::Lattice { Vec::new() } else { cfg.ells.clone() },
        flavor: cfg.flavors.iter().map(|f| f.to_string()).collect(),
        coeff: cfg.coeffs.clone(),
        cone: stalks.then_some(cfg.cone),
        paper: cfg.paper,
    }
}

/// Runs a validated request. Deterministic for a fixed config.
pub fn run(cfg: &CommandConfig) -> Result<OutputRecord> {
    let need_diagram = || cfg.diagram.ok_or_else(|| CliError::Usage("--type and --rank are required".into()));
    let results = match cfg.subcommand {
        CommandKind::Lattice => Results::Lattice(lattice_report(need_diagram()?)?),
        CommandKind::Simple | CommandKind::Subregular => {
            let d = need_diagram()?;
            let entry = if cfg.subcommand == CommandKind::Simple { simple_entry } else { subregular_entry };
            let entries = cfg.ells.iter().map(|&l| entry(d, l)).collect::<Result<_>>()?;
            Results::Decomposition(DecompositionList { entries })
        }
        CommandKind::Minimal => {
            let d = need_diagram()?;
            let entries = cfg.ells.iter().map(|&l| minimal_entry(d, l)).collect::<Result<_>>()?;
            Results::Minimal(MinimalList { entries })
        }
        CommandKind::Stalks => Results::Stalks(stalk_report(cfg, need_diagram()?)?),
        CommandKind::Tables => Results::Tables(generate_paper_tables(cfg.paper)?),
    };
    Ok(OutputRecord {
        schema: SCHEMA_VERSION,
        command: cfg.subcommand.name().to_string(),
        inputs: inputs_of(cfg),
        results,
    })
}

/// Applies the degree window override from the environment.
pub fn apply_degree_window(value: Option<&str>) -> Result<()> {
    if let Some(v) = value {
        let w: i32 = v
            .trim()
            .parse()
            .ok()
            .filter(|w| *w >= 0)
            .ok_or_else(|| CliError::Usage(format!("{DEGREE_WINDOW_VAR}={v:?} is not a nonnegative integer")))?;
        omodule::set_degree_window(w);
    }
    Ok(())
}

/// Captured result of a full invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse, run and render; never exits the process.
pub fn main_entry<I, T>(argv: I, window: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = apply_degree_window(window)
        .and_then(|_| parse_args(argv))
        .and_then(|cfg| run(&cfg).map(|rec| render(&rec, cfg.format)));
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(CliError::Clap(e)) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: e.exit_code(), stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
