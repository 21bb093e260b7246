//! Tabulated lower K-theory of finite groups over `Z`.
//!
//! Text format, one entry per line after the `wh3k-kdb 1` header:
//!
//! ```text
//! group | degree | kind | rank | torsion | source
//! I*    | 1      | Wh   | 2    |         | ...
//! *     | ..-2   | Wh   | 0    |         | ...
//! ```
//!
//! `group` is a finite-group term (`1`, `Z/n`, `CE(base,k)`, `I*`, quoted
//! name) or `*`. `degree` is an integer, `*`, or `..k` (every degree `≤ k`).
//! `kind` is `Wh` (`Wh_n`), `K~0` (`K̃_0`) or `Kneg` (`K_n`, `n < 0`).
//! `torsion` is a comma-separated list of orders. `#` starts a comment line.
//! When several entries match, the one with an exact group beats `*`, then
//! an exact degree beats a range, then the tighter range wins.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fgab::FGAb;
use crate::kexpr::AtomKind;
use crate::lex::Cursor;
use crate::manifold::{parse_finite_group, FiniteGroupSpec};

const HEADER: &str = "wh3k-kdb 1";
const BUNDLED: &str = include_str!("../data/kdb.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryKind {
    Wh,
    KReduced0,
    KNeg,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupPattern {
    Any,
    Exact(FiniteGroupSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreePattern {
    Exact(i32),
    AtMost(i32),
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KEntry {
    pub group: GroupPattern,
    pub degree: DegreePattern,
    pub kind: EntryKind,
    pub value: FGAb,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    entries: Vec<KEntry>,
}

impl DegreePattern {
    fn matches(self, n: i32) -> bool {
        match self {
            DegreePattern::Exact(d) => d == n,
            DegreePattern::AtMost(k) => n <= k,
            DegreePattern::Any => true,
        }
    }

    /// Lower is more specific.
    fn rank(self) -> (u8, i32) {
        match self {
            DegreePattern::Exact(_) => (0, 0),
            DegreePattern::AtMost(k) => (1, k),
            DegreePattern::Any => (2, 0),
        }
    }
}

impl GroupPattern {
    fn matches(&self, g: &FiniteGroupSpec) -> bool {
        match self {
            GroupPattern::Any => true,
            GroupPattern::Exact(h) => h == g,
        }
    }
}

impl EntryKind {
    fn tag(self) -> &'static str {
        match self {
            EntryKind::Wh => "Wh",
            EntryKind::KReduced0 => "K~0",
            EntryKind::KNeg => "Kneg",
        }
    }

    /// Entry kinds that can answer for an atom, in preference order.
    /// `Wh_0 = K̃_0` and `Wh_n = K_n` for `n ≤ −1`.
    fn for_atom(kind: AtomKind, degree: i32) -> &'static [EntryKind] {
        match (kind, degree) {
            (AtomKind::FiniteWh, 0) => &[EntryKind::Wh, EntryKind::KReduced0],
            (AtomKind::FiniteWh, d) if d < 0 => &[EntryKind::Wh, EntryKind::KNeg],
            (AtomKind::FiniteWh, _) => &[EntryKind::Wh],
            (AtomKind::FiniteKReduced0, _) => &[EntryKind::KReduced0],
            (AtomKind::FiniteKNeg, _) => &[EntryKind::KNeg],
            _ => &[],
        }
    }
}

impl KnowledgeBase {
    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled knowledge base is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Database {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, HEADER)) => {}
            Some((line, other)) => {
                return Err(Error::Database {
                    line,
                    message: format!("expected header `{HEADER}`, found `{other}`"),
                })
            }
            None => {
                return Err(Error::Database {
                    line: 0,
                    message: format!("empty file; expected header `{HEADER}`"),
                })
            }
        }
        let mut kb = KnowledgeBase::default();
        for (line, text) in lines {
            let entry = parse_entry(text).map_err(|message| Error::Database { line, message })?;
            if kb.entries.iter().any(|e| {
                e.group == entry.group && e.degree == entry.degree && e.kind == entry.kind
            }) {
                return Err(Error::Database {
                    line,
                    message: "duplicate (group, degree, kind) entry".into(),
                });
            }
            kb.entries.push(entry);
        }
        Ok(kb)
    }

    pub fn entries(&self) -> &[KEntry] {
        &self.entries
    }

    /// Most specific entry for `(group, degree, kind)`.
    pub fn lookup(&self, group: &FiniteGroupSpec, degree: i32, kind: EntryKind) -> Option<&KEntry> {
        self.entries
            .iter()
            .filter(|e| e.kind == kind && e.group.matches(group) && e.degree.matches(degree))
            .min_by_key(|e| (e.group == GroupPattern::Any, e.degree.rank()))
    }

    /// Value of a `Finite*` atom, if tabulated.
    pub fn lookup_atom(&self, kind: AtomKind, group: &FiniteGroupSpec, degree: i32) -> Option<&KEntry> {
        EntryKind::for_atom(kind, degree)
            .iter()
            .enumerate()
            .filter_map(|(pref, &k)| self.lookup(group, degree, k).map(|e| (pref, e)))
            .min_by_key(|(pref, e)| (e.group == GroupPattern::Any, e.degree.rank(), *pref))
            .map(|(_, e)| e)
    }
}

fn parse_entry(text: &str) -> std::result::Result<KEntry, String> {
    let fields: Vec<&str> = text.splitn(6, '|').map(str::trim).collect();
    let [group, degree, kind, rank, torsion, source] = fields[..] else {
        return Err(format!("expected 6 `|`-separated fields, found {}", fields.len()));
    };
    let group = if group == "*" {
        GroupPattern::Any
    } else {
        let mut cur = Cursor::new(group);
        let g = parse_finite_group(&mut cur).map_err(|e| e.to_string())?;
        g.validate().map_err(|e| e.to_string())?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(format!("trailing input in group `{group}`"));
        }
        GroupPattern::Exact(g)
    };
    let degree = if degree == "*" {
        DegreePattern::Any
    } else if let Some(k) = degree.strip_prefix("..") {
        DegreePattern::AtMost(k.parse().map_err(|_| format!("bad degree bound `{k}`"))?)
    } else {
        DegreePattern::Exact(degree.parse().map_err(|_| format!("bad degree `{degree}`"))?)
    };
    let kind = match kind {
        "Wh" => EntryKind::Wh,
        "K~0" => EntryKind::KReduced0,
        "Kneg" => EntryKind::KNeg,
        other => return Err(format!("unknown kind `{other}` (expected Wh, K~0 or Kneg)")),
    };
    let rank: u32 = rank.parse().map_err(|_| format!("bad rank `{rank}`"))?;
    let torsion = if torsion.is_empty() {
        Vec::new()
    } else {
        torsion
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad torsion order `{t}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    let value = FGAb::new(rank, torsion).map_err(|e| e.to_string())?;
    if source.is_empty() {
        return Err("missing source".into());
    }
    Ok(KEntry {
        group,
        degree,
        kind,
        value,
        source: source.to_string(),
    })
}

impl fmt::Display for KnowledgeBase {
    /// Canonical text form; parses back to an equal table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        for e in &self.entries {
            let group = match &e.group {
                GroupPattern::Any => "*".to_string(),
                GroupPattern::Exact(g) => g.to_string(),
            };
            let degree = match e.degree {
                DegreePattern::Exact(d) => d.to_string(),
                DegreePattern::AtMost(k) => format!("..{k}"),
                DegreePattern::Any => "*".to_string(),
            };
            let torsion: Vec<String> = e.value.torsion().iter().map(u64::to_string).collect();
            writeln!(
                f,
                "{group} | {degree} | {} | {} | {} | {}",
                e.kind.tag(),
                e.value.rank(),
                torsion.join(","),
                e.source
            )?;
        }
        Ok(())
    }
}
