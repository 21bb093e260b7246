//! Symbolic abelian-group expressions.
//!
//! An [`Expr`] is a direct sum of atoms (`K_n(R)`, `NK_n(R)`, twisted Nils,
//! lower K-groups of finite groups), concrete finitely generated abelian
//! groups, multiplicity blocks, long-exact-sequence nodes and opaque groups.
//! [`normalize`] produces the canonical form; [`collapse_les`] removes LES
//! nodes whose flanks vanish. Text output (`Display`) parses back with
//! [`Expr::parse`].

mod collapse;
mod normalize;
mod parse;
mod render;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::fgab::FGAb;
use crate::manifold::FiniteGroupSpec;

pub use collapse::collapse_les;
pub use normalize::normalize;
pub use render::Latex;

/// Base group `N` of a twisted Nil `NK_n(R[N];φ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum NilBase {
    Z,
    Z2,
    Symbolic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AtomKind {
    RingK,
    RingNK,
    TwistedNil,
    FiniteWh,
    FiniteKReduced0,
    FiniteKNeg,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    /// `K_n(R)`
    K { degree: i32 },
    /// `NK_n(R)`
    NK { degree: i32 },
    /// `NK_n(R[N];φ)`
    TwistedNil {
        degree: i32,
        base: NilBase,
        monodromy: String,
    },
    /// `Wh_n^R(F)` of a finite group.
    FiniteWh { degree: i32, group: FiniteGroupSpec },
    /// `K̃_0(R[F])`, carried at the degree it contributes to.
    FiniteKReduced0 { degree: i32, group: FiniteGroupSpec },
    /// `K_n(R[F])` for negative `n`.
    FiniteKNeg { degree: i32, group: FiniteGroupSpec },
}

impl Atom {
    pub fn kind(&self) -> AtomKind {
        match self {
            Atom::K { .. } => AtomKind::RingK,
            Atom::NK { .. } => AtomKind::RingNK,
            Atom::TwistedNil { .. } => AtomKind::TwistedNil,
            Atom::FiniteWh { .. } => AtomKind::FiniteWh,
            Atom::FiniteKReduced0 { .. } => AtomKind::FiniteKReduced0,
            Atom::FiniteKNeg { .. } => AtomKind::FiniteKNeg,
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Atom::K { degree }
            | Atom::NK { degree }
            | Atom::TwistedNil { degree, .. }
            | Atom::FiniteWh { degree, .. }
            | Atom::FiniteKReduced0 { degree, .. }
            | Atom::FiniteKNeg { degree, .. } => *degree,
        }
    }

    fn degree_mut(&mut self) -> &mut i32 {
        match self {
            Atom::K { degree }
            | Atom::NK { degree }
            | Atom::TwistedNil { degree, .. }
            | Atom::FiniteWh { degree, .. }
            | Atom::FiniteKReduced0 { degree, .. }
            | Atom::FiniteKNeg { degree, .. } => degree,
        }
    }

    /// Injective tag for everything but kind and degree.
    pub fn qualifier(&self) -> String {
        match self {
            Atom::K { .. } | Atom::NK { .. } => String::new(),
            Atom::TwistedNil {
                base, monodromy, ..
            } => format!("{};{}", render::nil_base(base), crate::lex::quote(monodromy)),
            Atom::FiniteWh { group, .. }
            | Atom::FiniteKReduced0 { group, .. }
            | Atom::FiniteKNeg { group, .. } => group.to_string(),
        }
    }

    /// Finite group of a `Finite*` atom.
    pub fn finite_group(&self) -> Option<&FiniteGroupSpec> {
        match self {
            Atom::FiniteWh { group, .. }
            | Atom::FiniteKReduced0 { group, .. }
            | Atom::FiniteKNeg { group, .. } => Some(group),
            _ => None,
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kind(), self.degree(), self.qualifier()).cmp(&(
            other.kind(),
            other.degree(),
            other.qualifier(),
        ))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Multiplicity {
    Finite(u64),
    CountablyInfinite,
    /// Cardinality of a named index set the theory leaves undetermined.
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "node", content = "value", rename_all = "snake_case")]
pub enum Expr {
    Zero,
    Atom(Atom),
    Group(FGAb),
    Scaled(Multiplicity, Box<Expr>),
    Sum(Vec<Expr>),
    Les(Box<LesNode>),
    /// A group that is named but not computed. No rewrite touches it.
    Opaque { label: String, degree: i32 },
}

/// A group `X_target` known only through a long exact sequence
///
/// `… → left_d → X_d → right_d → left_{d−1} → X_{d−1} → …`
///
/// materialized at degrees `target+1`, `target`, `target−1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LesNode {
    pub id: String,
    /// Display name of the unknown `X`.
    pub unknown: String,
    pub target: i32,
    /// Rows in descending degree order.
    pub rows: Vec<LesRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LesRow {
    pub degree: i32,
    pub left: Expr,
    pub right: Expr,
}

impl LesNode {
    /// Builds the three padded rows from per-degree term builders.
    pub fn around(
        id: impl Into<String>,
        unknown: impl Into<String>,
        target: i32,
        mut left: impl FnMut(i32) -> Expr,
        mut right: impl FnMut(i32) -> Expr,
    ) -> Self {
        LesNode {
            id: id.into(),
            unknown: unknown.into(),
            target,
            rows: [target + 1, target, target - 1]
                .into_iter()
                .map(|d| LesRow {
                    degree: d,
                    left: left(d),
                    right: right(d),
                })
                .collect(),
        }
    }

    pub fn row(&self, degree: i32) -> Option<&LesRow> {
        self.rows.iter().find(|r| r.degree == degree)
    }
}

impl Expr {
    pub fn atom(a: Atom) -> Expr {
        Expr::Atom(a)
    }

    pub fn k(degree: i32) -> Expr {
        Expr::Atom(Atom::K { degree })
    }

    pub fn nk(degree: i32) -> Expr {
        Expr::Atom(Atom::NK { degree })
    }

    pub fn twisted_nil(degree: i32, base: NilBase, monodromy: impl Into<String>) -> Expr {
        Expr::Atom(Atom::TwistedNil {
            degree,
            base,
            monodromy: monodromy.into(),
        })
    }

    pub fn group(g: FGAb) -> Expr {
        Expr::Group(g)
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        Expr::Sum(items.into_iter().collect())
    }

    pub fn scaled(m: Multiplicity, e: Expr) -> Expr {
        Expr::Scaled(m, Box::new(e))
    }

    pub fn times(k: u64, e: Expr) -> Expr {
        Expr::scaled(Multiplicity::Finite(k), e)
    }

    /// `⊕_{j=0}^∞ e`
    pub fn countable(e: Expr) -> Expr {
        Expr::scaled(Multiplicity::CountablyInfinite, e)
    }

    /// `⊕_{label} e` over an index set of unknown size.
    pub fn indexed(label: impl Into<String>, e: Expr) -> Expr {
        Expr::scaled(Multiplicity::Unknown(label.into()), e)
    }

    pub fn les(node: LesNode) -> Expr {
        Expr::Les(Box::new(node))
    }

    pub fn opaque(label: impl Into<String>, degree: i32) -> Expr {
        Expr::Opaque {
            label: label.into(),
            degree,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Zero => true,
            Expr::Group(g) => g.is_zero(),
            _ => false,
        }
    }

    /// Shifts every degree (atoms, opaque groups, LES rows) by `by`.
    pub fn shift(&self, by: i32) -> Expr {
        match self {
            Expr::Zero | Expr::Group(_) => self.clone(),
            Expr::Atom(a) => {
                let mut a = a.clone();
                *a.degree_mut() += by;
                Expr::Atom(a)
            }
            Expr::Scaled(m, e) => Expr::scaled(m.clone(), e.shift(by)),
            Expr::Sum(xs) => Expr::Sum(xs.iter().map(|x| x.shift(by)).collect()),
            Expr::Les(node) => Expr::les(LesNode {
                id: node.id.clone(),
                unknown: node.unknown.clone(),
                target: node.target + by,
                rows: node
                    .rows
                    .iter()
                    .map(|r| LesRow {
                        degree: r.degree + by,
                        left: r.left.shift(by),
                        right: r.right.shift(by),
                    })
                    .collect(),
            }),
            Expr::Opaque { label, degree } => Expr::opaque(label.clone(), degree + by),
        }
    }

    /// Replaces every atom for which `f` returns a value, including atoms
    /// inside LES rows. The result is not normalized.
    pub fn rewrite_atoms(&self, f: &mut dyn FnMut(&Atom) -> Option<Expr>) -> Expr {
        match self {
            Expr::Zero | Expr::Group(_) | Expr::Opaque { .. } => self.clone(),
            Expr::Atom(a) => f(a).unwrap_or_else(|| self.clone()),
            Expr::Scaled(m, e) => Expr::scaled(m.clone(), e.rewrite_atoms(f)),
            Expr::Sum(xs) => Expr::Sum(xs.iter().map(|x| x.rewrite_atoms(f)).collect()),
            Expr::Les(node) => Expr::les(LesNode {
                id: node.id.clone(),
                unknown: node.unknown.clone(),
                target: node.target,
                rows: node
                    .rows
                    .iter()
                    .map(|r| LesRow {
                        degree: r.degree,
                        left: r.left.rewrite_atoms(f),
                        right: r.right.rewrite_atoms(f),
                    })
                    .collect(),
            }),
        }
    }

    /// Calls `f` on every atom, including those inside LES rows.
    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Expr::Zero | Expr::Group(_) | Expr::Opaque { .. } => {}
            Expr::Atom(a) => f(a),
            Expr::Scaled(_, e) => e.visit_atoms(f),
            Expr::Sum(xs) => xs.iter().for_each(|x| x.visit_atoms(f)),
            Expr::Les(node) => {
                for r in &node.rows {
                    r.left.visit_atoms(f);
                    r.right.visit_atoms(f);
                }
            }
        }
    }

    /// Every subexpression in pre-order.
    pub fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Scaled(_, e) => e.visit(f),
            Expr::Sum(xs) => xs.iter().for_each(|x| x.visit(f)),
            Expr::Les(node) => {
                for r in &node.rows {
                    r.left.visit(f);
                    r.right.visit(f);
                }
            }
            _ => {}
        }
    }

    pub fn les_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if matches!(e, Expr::Les(_)) {
                n += 1;
            }
        });
        n
    }

    /// Labels of all `Unknown` multiplicities.
    pub fn unknown_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Scaled(Multiplicity::Unknown(l), _) = e {
                out.push(l.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    /// Parses the text form and normalizes it.
    pub fn parse(src: &str) -> crate::Result<Expr> {
        parse::parse_expr(src).map(|e| normalize(&e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expressions always serialize")
    }

    pub fn from_json(src: &str) -> crate::Result<Expr> {
        serde_json::from_str(src).map_err(|e| {
            crate::Error::semantic(crate::error::SemanticCode::InvalidJson, e.to_string())
        })
    }

    pub fn latex(&self) -> Latex<'_> {
        Latex(self)
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Expr {
        Expr::Atom(a)
    }
}

impl From<FGAb> for Expr {
    fn from(g: FGAb) -> Expr {
        Expr::Group(g)
    }
}
