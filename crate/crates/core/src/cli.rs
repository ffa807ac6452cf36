//! Command-line front end. Commands read documents in the text format of
//! [`crate::format`] and print flat `key: value` reports.
//!
//! Exit codes: 0 on success, 1 for unusable input, 2 when a computed
//! object fails its verification.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::chopped::{chopped_congruences, representation_1962, ChoppedError};
use crate::congruence::{
    congruence_lattice, is_congruence_preserving_extension, restrict, Congruence, CongruenceError,
    CpeViolation, Embedding,
};
use crate::extension::{
    boolean_triples, check_base_interval, cubic_extension, verify_booleantriples_cpe,
    ExtensionError, SimpleStrategy, MAX_PARTITION_SET,
};
use crate::format::{dot, parse, Document, DocumentKind, FormatError, Report};
use crate::laws::{
    check, is_distributive, is_sectionally_complemented, is_semimodular, order_dimension_le2, Law,
    LawError,
};
use crate::order::{
    downset_lattice, enumerate_lattices, join_irreducibles, poset_isomorphism, Lattice, OrderError,
    Poset, DEFAULT_SIZE_CAP,
};
use crate::planar::{
    quadratic_construction_with_cap, semimodular_construction_with_cap, PlanarError,
};

#[derive(Parser, Debug)]
#[command(
    name = "conrep",
    version,
    about = "Congruence lattices of finite lattices"
)]
pub struct Cli {
    /// Largest number of elements a command may build.
    #[arg(long, global = true, env = "CONREP_MAX_SIZE", default_value_t = DEFAULT_SIZE_CAP)]
    pub max_size: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check lattice laws, all of them unless `--law` is given.
    Laws {
        file: PathBuf,
        #[arg(long = "law", value_parser = parse_law)]
        laws: Vec<Law>,
    },
    /// Compute the congruence lattice of a lattice or chopped lattice.
    Con {
        file: PathBuf,
        /// List the join-irreducible congruences and their order.
        #[arg(long)]
        ji: bool,
    },
    /// Build a lattice and verify it. `sc`, `quad` and `semi` take a poset
    /// `P` or a distributive lattice `D`; `m3` and `cubic` take a lattice.
    Construct {
        kind: ConstructKind,
        file: PathBuf,
        /// Simple-extension strategy for `cubic`: `identity`, `partition`
        /// or `partition:M`.
        #[arg(long)]
        strategy: Option<String>,
        /// Write the constructed lattice here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check that a map is a congruence-preserving embedding.
    VerifyCpe {
        source: PathBuf,
        target: PathBuf,
        /// Image of each source element, separated by commas or spaces.
        #[arg(long)]
        map: String,
    },
    /// List lattices with `n` elements up to isomorphism.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        /// Keep only lattices satisfying this law (repeatable).
        #[arg(long = "filter", value_parser = parse_law)]
        filters: Vec<Law>,
        /// Print only the number of lattices.
        #[arg(long)]
        count: bool,
    },
    /// Print the Hasse diagram as Graphviz DOT.
    Dot { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    /// Sectionally complemented lattice from a chopped lattice.
    Sc,
    /// Planar lattice of quadratic size.
    Quad,
    /// Semimodular lattice.
    Semi,
    /// Boolean triples `M3[K]`.
    M3,
    /// Cubic extension.
    Cubic,
}

fn parse_law(name: &str) -> Result<Law, String> {
    Law::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Law::ALL.iter().map(|l| l.name()).collect();
        format!("unknown law `{name}`; expected one of {}", known.join(", "))
    })
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Congruence(CongruenceError),
    #[error(transparent)]
    Law(#[from] LawError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

impl From<CongruenceError> for CliError {
    fn from(e: CongruenceError) -> Self {
        match e {
            CongruenceError::InternalVerificationFailed { .. } => {
                CliError::Verification(e.to_string())
            }
            CongruenceError::Order(e) => e.into(),
            other => CliError::Congruence(other),
        }
    }
}

impl From<ChoppedError> for CliError {
    fn from(e: ChoppedError) -> Self {
        match e {
            ChoppedError::ContractViolated { .. } | ChoppedError::BijectionFailed { .. } => {
                CliError::Verification(e.to_string())
            }
            ChoppedError::Order(e) => e.into(),
            ChoppedError::Congruence(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<PlanarError> for CliError {
    fn from(e: PlanarError) -> Self {
        match e {
            PlanarError::ContractViolated { .. } => CliError::Verification(e.to_string()),
            PlanarError::Order(e) => e.into(),
            PlanarError::Congruence(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::ContractViolated { .. } => CliError::Verification(e.to_string()),
            ExtensionError::Order(e) => e.into(),
            ExtensionError::Congruence(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// What a successful command prints, and whether its checks passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub verified: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            verified: true,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.verified {
            0
        } else {
            2
        }
    }
}

/// Runs one command.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cap = cli.max_size;
    match &cli.command {
        Command::Laws { file, laws } => laws_cmd(&read_doc(file)?, laws),
        Command::Con { file, ji } => con_cmd(&read_doc(file)?, *ji, cap),
        Command::Construct {
            kind,
            file,
            strategy,
            output,
        } => {
            let (mut report, lattice) =
                construct_cmd(*kind, &read_doc(file)?, strategy.as_deref(), cap)?;
            if let Some(path) = output {
                let text = Document::from_lattice(&lattice).to_string();
                fs::write(path, text).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
                report.push("output", path.display());
            }
            let verified = report_verified(&report);
            Ok(Output {
                text: report.to_string(),
                verified,
            })
        }
        Command::VerifyCpe {
            source,
            target,
            map,
        } => verify_cpe_cmd(&read_doc(source)?, &read_doc(target)?, map),
        Command::Enumerate { n, filters, count } => enumerate_cmd(*n, filters, *count, cap),
        Command::Dot { file } => {
            let doc = read_doc(file)?;
            let poset = doc.to_poset()?;
            let labels: Vec<String> = (0..doc.size).map(|x| doc.label(x)).collect();
            Ok(Output::ok(dot(&poset, &labels)))
        }
    }
}

fn read_doc(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Verification keys whose `false` value means exit code 2.
const VERIFIED_KEYS: [&str; 8] = [
    "Con≅D",
    "sectionally_complemented",
    "dimension_le2",
    "semimodular",
    "base_interval≅K",
    "cpe",
    "con_boolean",
    "congruences_extend",
];

fn report_verified(report: &Report) -> bool {
    VERIFIED_KEYS
        .iter()
        .all(|k| report.get(k).is_none_or(|v| v == "true"))
}

fn laws_cmd(doc: &Document, laws: &[Law]) -> Result<Output, CliError> {
    let l = doc.to_lattice()?;
    let laws = if laws.is_empty() { &Law::ALL[..] } else { laws };
    let mut report = Report::new();
    report.push("elements", l.size());
    for &law in laws {
        match check(law, &l) {
            Ok(r) => match &r.witness {
                Some(w) => report.push(law.name(), format!("false ({w})")),
                None => report.push(law.name(), yes_no(r.holds)),
            },
            Err(e) => report.push(law.name(), format!("n/a ({e})")),
        }
    }
    Ok(Output::ok(report.to_string()))
}

fn shape(p: &Poset) -> &'static str {
    if p.is_antichain() {
        "antichain"
    } else if p.is_chain() {
        "chain"
    } else {
        "poset"
    }
}

fn push_ji_order(report: &mut Report, order: &Poset) {
    let covers: Vec<String> = order
        .covers()
        .iter()
        .map(|(a, b)| format!("{a}<{b}"))
        .collect();
    if covers.is_empty() {
        report.push("ji_covers", "none");
    } else {
        report.push("ji_covers", covers.join(" "));
    }
}

fn con_cmd(doc: &Document, list_ji: bool, cap: usize) -> Result<Output, CliError> {
    let mut report = Report::new();
    match doc.kind {
        DocumentKind::Lattice => {
            let l = doc.to_lattice()?;
            let con = congruence_lattice(&l)?;
            report.push("elements", l.size());
            match con.len() {
                Some(n) => report.push("congruences", n),
                None => report.push("congruences", "too many to list"),
            }
            report.push(
                "ji",
                format!("{} ({})", con.ji().len(), shape(con.ji_order())),
            );
            if list_ji {
                for (i, theta) in con.ji().iter().enumerate() {
                    report.push(format!("ji_{i}"), theta);
                }
                push_ji_order(&mut report, con.ji_order());
            }
        }
        DocumentKind::Chopped => {
            let m = doc.to_chopped()?;
            let con = chopped_congruences(&m, cap)?;
            report.push("elements", m.size());
            report.push("congruences", con.all.len());
            report.push("ji", format!("{} ({})", con.ji.len(), shape(&con.ji_order)));
            if list_ji {
                for (i, theta) in con.ji.iter().enumerate() {
                    report.push(format!("ji_{i}"), theta);
                }
                push_ji_order(&mut report, &con.ji_order);
            }
        }
        DocumentKind::Poset => {
            return Err(CliError::Input(
                "con expects a lattice or chopped document".into(),
            ))
        }
    }
    Ok(Output::ok(report.to_string()))
}

/// The poset `P` and distributive lattice `D = Down P` described by `doc`.
fn poset_and_d(doc: &Document, cap: usize) -> Result<(Poset, Lattice), CliError> {
    match doc.kind {
        DocumentKind::Poset => {
            let p = doc.to_poset()?;
            let d = downset_lattice(&p, cap)?.lattice;
            Ok((p, d))
        }
        DocumentKind::Lattice => {
            let d = doc.to_lattice()?;
            if !is_distributive(&d).holds {
                return Err(CliError::Input("input lattice is not distributive".into()));
            }
            Ok((join_irreducibles(&d), d))
        }
        DocumentKind::Chopped => Err(CliError::Input(
            "construct expects a poset or a distributive lattice".into(),
        )),
    }
}

fn parse_strategy(s: Option<&str>) -> Result<SimpleStrategy, CliError> {
    match s {
        None | Some("partition") => Ok(SimpleStrategy::default()),
        Some("identity") => Ok(SimpleStrategy::IdentityIfSimple),
        Some(other) => {
            let m = other
                .strip_prefix("partition:")
                .and_then(|m| m.parse::<usize>().ok())
                .ok_or_else(|| CliError::Input(format!("unknown strategy `{other}`")))?;
            if !(3..=MAX_PARTITION_SET).contains(&m) {
                return Err(CliError::Input(format!(
                    "partition size must be between 3 and {MAX_PARTITION_SET}"
                )));
            }
            Ok(SimpleStrategy::PartitionSearch { max_m: m })
        }
    }
}

fn con_matches(l: &Lattice, p: &Poset) -> Result<bool, CliError> {
    let con = congruence_lattice(l)?;
    Ok(poset_isomorphism(con.ji_order(), p).is_some())
}

fn construct_cmd(
    kind: ConstructKind,
    doc: &Document,
    strategy: Option<&str>,
    cap: usize,
) -> Result<(Report, Lattice), CliError> {
    if strategy.is_some() && kind != ConstructKind::Cubic {
        return Err(CliError::Input("--strategy applies to cubic only".into()));
    }
    let mut report = Report::new();
    report.push("construction", format!("{kind:?}").to_lowercase());
    let lattice = match kind {
        ConstructKind::Sc | ConstructKind::Quad | ConstructKind::Semi => {
            let (p, d) = poset_and_d(doc, cap)?;
            report.push("ji_d", p.size());
            let l = match kind {
                ConstructKind::Sc => representation_1962(&d, cap)?.lattice,
                ConstructKind::Quad => quadratic_construction_with_cap(&p, cap)?.lattice,
                _ => semimodular_construction_with_cap(&p, cap)?.lattice,
            };
            report.push("elements", l.size());
            match kind {
                ConstructKind::Sc => report.push(
                    "sectionally_complemented",
                    yes_no(is_sectionally_complemented(&l).holds),
                ),
                ConstructKind::Quad => {
                    report.push("dimension_le2", yes_no(order_dimension_le2(&l).holds))
                }
                _ => report.push("semimodular", yes_no(is_semimodular(&l).holds)),
            }
            report.push("Con≅D", yes_no(con_matches(&l, &p)?));
            l
        }
        ConstructKind::M3 => {
            let k = doc.to_lattice()?;
            let fg = boolean_triples(&k, cap)?;
            report.push("base", k.size());
            report.push("elements", fg.lattice.size());
            report.push("base_interval≅K", yes_no(check_base_interval(&fg)?));
            report.push("cpe", yes_no(verify_booleantriples_cpe(&fg)?.holds));
            fg.lattice
        }
        ConstructKind::Cubic => {
            let k = doc.to_lattice()?;
            let strategy = parse_strategy(strategy)?;
            let r = cubic_extension(&k, &strategy, cap)?;
            report.push("base", k.size());
            report.push("factors", r.factors.len());
            report.push("elements", r.product.size());
            let con = congruence_lattice(&r.product)?;
            let boolean = con.ji().len() == r.factors.len() && con.ji_order().is_antichain();
            report.push("con_boolean", yes_no(boolean));
            let e = r.embedding()?;
            let all = con.materialized().ok_or(LawError::TooManyCongruences)?;
            let reached: HashSet<Congruence> =
                all.congruences.iter().map(|t| restrict(t, &e)).collect();
            let base = congruence_lattice(&k)?;
            let base_all = base.materialized().ok_or(LawError::TooManyCongruences)?;
            let extend = base_all.congruences.iter().all(|t| reached.contains(t));
            report.push("congruences_extend", yes_no(extend));
            report.push(
                "unique_extensions",
                yes_no(is_congruence_preserving_extension(&e)?.holds),
            );
            report.push(
                "product_sectionally_complemented",
                yes_no(is_sectionally_complemented(&r.product).holds),
            );
            r.product
        }
    };
    Ok((report, lattice))
}

fn parse_map(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse()
                .map_err(|_| CliError::Input(format!("map entry `{w}` is not an index")))
        })
        .collect()
}

fn verify_cpe_cmd(source: &Document, target: &Document, map: &str) -> Result<Output, CliError> {
    let k = source.to_lattice()?;
    let l = target.to_lattice()?;
    let map = parse_map(map)?;
    let e = Embedding::new(&k, &l, map).map_err(|e| CliError::Input(e.to_string()))?;
    let cert = is_congruence_preserving_extension(&e)?;
    let mut report = Report::new();
    report.push("source_congruences", cert.source_congruences.len());
    report.push("target_congruences", cert.target_congruences.len());
    report.push("cpe", yes_no(cert.holds));
    match &cert.violation {
        Some(CpeViolation::NoExtension { source }) => report.push(
            "violation",
            format!("no extension of source congruence {source}"),
        ),
        Some(CpeViolation::TwoExtensions {
            source,
            first,
            second,
        }) => report.push(
            "violation",
            format!("source congruence {source} has extensions {first} and {second}"),
        ),
        None => {}
    }
    Ok(Output {
        text: report.to_string(),
        verified: cert.holds,
    })
}

fn enumerate_cmd(n: usize, filters: &[Law], count: bool, cap: usize) -> Result<Output, CliError> {
    let mut kept = Vec::new();
    for l in enumerate_lattices(n, cap)? {
        let mut keep = true;
        for &law in filters {
            // laws undefined for this lattice (e.g. simplicity of C1) do not hold
            if !check(law, &l).map(|r| r.holds).unwrap_or(false) {
                keep = false;
                break;
            }
        }
        if keep {
            kept.push(l);
        }
    }
    let mut text = String::new();
    if !count {
        for (i, l) in kept.iter().enumerate() {
            text.push_str(&format!("# lattice {i}\n{}\n", Document::from_lattice(l)));
        }
    }
    text.push_str(&format!("lattices: {}\n", kept.len()));
    Ok(Output::ok(text))
}
