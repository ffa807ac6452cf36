//! Line-oriented text format for posets, lattices and chopped lattices,
//! Graphviz output, and flat `key: value` reports.
//!
//! ```text
//! # comment
//! lattice
//! elements 5
//! names 0 a b c 1
//! cover 0 1
//! ```
//!
//! The first significant line names the kind (`poset`, `lattice` or
//! `chopped`), then `elements N`, an optional `names` line with `N` labels,
//! and one `cover i j` line per covering pair `i ≺ j`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::chopped::{ChoppedError, ChoppedLattice};
use crate::order::{Lattice, OrderError, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid {kind}: {source}")]
    Order {
        kind: DocumentKind,
        #[source]
        source: OrderError,
    },
    #[error("invalid chopped lattice: {0}")]
    Chopped(#[from] ChoppedError),
    #[error("expected a {expected} document, found {found}")]
    WrongKind {
        expected: DocumentKind,
        found: DocumentKind,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DocumentKind {
    Poset,
    Lattice,
    Chopped,
}

impl DocumentKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DocumentKind::Poset => "poset",
            DocumentKind::Lattice => "lattice",
            DocumentKind::Chopped => "chopped",
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for DocumentKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "poset" => Ok(DocumentKind::Poset),
            "lattice" => Ok(DocumentKind::Lattice),
            "chopped" => Ok(DocumentKind::Chopped),
            _ => Err(()),
        }
    }
}

/// A parsed input file. Structural checks (acyclicity, lattice axioms) are
/// deferred to the `to_*` conversions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub kind: DocumentKind,
    pub size: usize,
    pub names: Option<Vec<String>>,
    pub covers: Vec<(usize, usize)>,
}

impl Document {
    /// Document for a lattice, listing its covers in index order.
    pub fn from_lattice(lattice: &Lattice) -> Self {
        Self::from_poset_with(DocumentKind::Lattice, lattice.poset())
    }

    /// Document for a poset, listing its covers in index order.
    pub fn from_poset(poset: &Poset) -> Self {
        Self::from_poset_with(DocumentKind::Poset, poset)
    }

    /// Document for a chopped lattice, listing its covers in index order.
    pub fn from_chopped(chopped: &ChoppedLattice) -> Self {
        Self::from_poset_with(DocumentKind::Chopped, chopped.poset())
    }

    fn from_poset_with(kind: DocumentKind, poset: &Poset) -> Self {
        let mut covers = poset.covers().to_vec();
        covers.sort_unstable();
        Self {
            kind,
            size: poset.size(),
            names: None,
            covers,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    /// Label of element `x`: its name if present, else its index.
    pub fn label(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    /// The order generated by the covers, for any document kind.
    pub fn to_poset(&self) -> Result<Poset, FormatError> {
        Poset::from_covers(self.size, &self.covers).map_err(|source| FormatError::Order {
            kind: self.kind,
            source,
        })
    }

    /// The lattice of a `lattice` document.
    pub fn to_lattice(&self) -> Result<Lattice, FormatError> {
        self.expect(DocumentKind::Lattice)?;
        Lattice::from_covers(self.size, &self.covers).map_err(|source| FormatError::Order {
            kind: self.kind,
            source,
        })
    }

    /// The chopped lattice of a `chopped` document; its least element is
    /// the unique minimal element.
    pub fn to_chopped(&self) -> Result<ChoppedLattice, FormatError> {
        self.expect(DocumentKind::Chopped)?;
        let poset = self.to_poset()?;
        let minimal = poset.minimal_elements();
        let bottom = minimal.first().copied().ok_or(FormatError::Order {
            kind: self.kind,
            source: OrderError::Empty,
        })?;
        Ok(ChoppedLattice::from_poset(poset, bottom)?)
    }

    fn expect(&self, expected: DocumentKind) -> Result<(), FormatError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(FormatError::WrongKind {
                expected,
                found: self.kind,
            })
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.kind)?;
        writeln!(f, "elements {}", self.size)?;
        if let Some(names) = &self.names {
            writeln!(f, "names {}", names.join(" "))?;
        }
        for &(a, b) in &self.covers {
            writeln!(f, "cover {a} {b}")?;
        }
        Ok(())
    }
}

impl FromStr for Document {
    type Err = FormatError;

    fn from_str(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }
}

/// Parses a document. Line numbers in errors are 1-based.
pub fn parse(text: &str) -> Result<Document, FormatError> {
    let mut kind = None;
    let mut size = None;
    let mut names: Option<Vec<String>> = None;
    let mut covers = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();

        let Some(_) = kind else {
            let parsed = keyword.parse::<DocumentKind>().map_err(|_| {
                syntax(
                    line,
                    format!("expected poset, lattice or chopped, found `{keyword}`"),
                )
            })?;
            if !args.is_empty() {
                return Err(syntax(line, "unexpected text after the kind keyword"));
            }
            kind = Some(parsed);
            continue;
        };

        match keyword {
            "elements" => {
                if size.is_some() {
                    return Err(syntax(line, "duplicate `elements` line"));
                }
                let [n] = args[..] else {
                    return Err(syntax(line, "expected `elements N`"));
                };
                size = Some(parse_index(n, line)?);
            }
            "names" => {
                let n = size.ok_or_else(|| syntax(line, "`names` before `elements`"))?;
                if names.is_some() {
                    return Err(syntax(line, "duplicate `names` line"));
                }
                if args.len() != n {
                    return Err(syntax(
                        line,
                        format!("expected {n} names, found {}", args.len()),
                    ));
                }
                let mut distinct = HashSet::new();
                if let Some(dup) = args.iter().find(|a| !distinct.insert(**a)) {
                    return Err(syntax(line, format!("duplicate name `{dup}`")));
                }
                names = Some(args.iter().map(|s| s.to_string()).collect());
            }
            "cover" => {
                let n = size.ok_or_else(|| syntax(line, "`cover` before `elements`"))?;
                let [a, b] = args[..] else {
                    return Err(syntax(line, "expected `cover i j`"));
                };
                let (a, b) = (parse_index(a, line)?, parse_index(b, line)?);
                for x in [a, b] {
                    if x >= n {
                        return Err(syntax(
                            line,
                            format!("element {x} out of range for {n} elements"),
                        ));
                    }
                }
                if a == b {
                    return Err(syntax(line, format!("self-cover on element {a}")));
                }
                if !seen.insert((a, b)) {
                    return Err(syntax(line, format!("duplicate cover {a} {b}")));
                }
                covers.push((a, b));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let kind = kind.ok_or_else(|| syntax(last_line.max(1), "missing kind line"))?;
    let size = size.ok_or_else(|| syntax(last_line.max(1), "missing `elements` line"))?;
    Ok(Document {
        kind,
        size,
        names,
        covers,
    })
}

fn parse_index(word: &str, line: usize) -> Result<usize, FormatError> {
    word.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, found `{word}`"),
        )
    })
}

/// Graphviz digraph of the Hasse diagram, edges drawn upward and elements
/// of equal height on one rank.
pub fn dot(poset: &Poset, labels: &[String]) -> String {
    let heights = poset.heights();
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in 0..poset.size() {
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", escape(&labels[x]));
    }
    let mut covers = poset.covers().to_vec();
    covers.sort_unstable();
    for (a, b) in covers {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    for h in 0..poset.height() {
        let level: Vec<String> = (0..poset.size())
            .filter(|&x| heights[x] == h)
            .map(|x| format!("n{x};"))
            .collect();
        if !level.is_empty() {
            let _ = writeln!(out, "  {{ rank=same; {} }}", level.join(" "));
        }
    }
    out.push_str("}\n");
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// An ordered list of `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}
