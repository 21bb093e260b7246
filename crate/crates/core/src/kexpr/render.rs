use std::fmt::{self, Display, Formatter, Write};

use super::{Atom, Expr, LesNode, Multiplicity, NilBase};
use crate::fgab::FGAb;
use crate::lex::quote;
use crate::manifold::{render_tag, FiniteGroupSpec, PolyhedralBase};

pub(crate) fn nil_base(b: &NilBase) -> String {
    match b {
        NilBase::Z => "Z".into(),
        NilBase::Z2 => "Z^2".into(),
        NilBase::Symbolic(s) => quote(s),
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::K { degree } => write!(f, "K_{degree}(R)"),
            Atom::NK { degree } => write!(f, "NK_{degree}(R)"),
            Atom::TwistedNil {
                degree,
                base,
                monodromy,
            } => write!(
                f,
                "NK_{degree}(R[{}];{})",
                nil_base(base),
                render_tag(monodromy)
            ),
            Atom::FiniteWh { degree, group } => write!(f, "Wh_{degree}({group})"),
            Atom::FiniteKReduced0 { degree, group } => write!(f, "K~_{degree}(R[{group}])"),
            Atom::FiniteKNeg { degree, group } => write!(f, "K_{degree}(R[{group}])"),
        }
    }
}

impl Display for Multiplicity {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::CountablyInfinite => f.write_str("∞"),
            Multiplicity::Unknown(l) => write!(f, "|{l}|"),
        }
    }
}

/// Summands that print without parentheses after `k·`.
fn is_simple(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Zero | Expr::Atom(_) | Expr::Opaque { .. } | Expr::Les(_)
    )
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Group(g) => write!(f, "{g}"),
            Expr::Scaled(Multiplicity::Finite(k), e) if is_simple(e) => write!(f, "{k}·{e}"),
            Expr::Scaled(Multiplicity::Finite(k), e) => write!(f, "{k}·({e})"),
            Expr::Scaled(Multiplicity::CountablyInfinite, e) => write!(f, "⊕_{{j=0..∞}}({e})"),
            Expr::Scaled(Multiplicity::Unknown(l), e) => write!(f, "⊕_{{{}}}({e})", quote(l)),
            Expr::Sum(xs) if xs.is_empty() => f.write_str("0"),
            Expr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊕ ")?;
                    }
                    if matches!(x, Expr::Sum(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Expr::Les(node) => write!(f, "{node}"),
            Expr::Opaque { label, degree } => write!(f, "opaque({}, {degree})", quote(label)),
        }
    }
}

impl Display for LesNode {
    /// `les("id", "X", t, [d: left | right], ...)`
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "les({}, {}, {}",
            quote(&self.id),
            quote(&self.unknown),
            self.target
        )?;
        for r in &self.rows {
            write!(f, ", [{}: {} | {}]", r.degree, r.left, r.right)?;
        }
        f.write_str(")")
    }
}

impl LesNode {
    /// Multi-line exact-sequence display.
    pub fn display_sequence(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "exact sequence {} (unknown {}):", self.id, self.unknown);
        out.push_str("  ...\n");
        for r in &self.rows {
            let _ = writeln!(out, "  → {}", r.left);
            let marker = if r.degree == self.target { "   ◀" } else { "" };
            let _ = writeln!(out, "  → {}_{}{marker}", self.unknown, r.degree);
            let _ = writeln!(out, "  → {}", r.right);
        }
        out.push_str("  → ...\n");
        out
    }
}

/// LaTeX rendering of an expression.
pub struct Latex<'a>(pub &'a Expr);

impl Display for Latex<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&latex(self.0))
    }
}

fn latex(e: &Expr) -> String {
    match e {
        Expr::Zero => "0".into(),
        Expr::Atom(a) => latex_atom(a),
        Expr::Group(g) => latex_group(g),
        Expr::Scaled(Multiplicity::Finite(k), e) if is_simple(e) => format!("{k}\\,{}", latex(e)),
        Expr::Scaled(Multiplicity::Finite(k), e) => format!("{k}\\left({}\\right)", latex(e)),
        Expr::Scaled(Multiplicity::CountablyInfinite, e) => {
            format!("\\bigoplus_{{j=0}}^{{\\infty}}\\left({}\\right)", latex(e))
        }
        Expr::Scaled(Multiplicity::Unknown(l), e) => {
            format!("\\bigoplus_{{{}}}\\left({}\\right)", text(l), latex(e))
        }
        Expr::Sum(xs) if xs.is_empty() => "0".into(),
        Expr::Sum(xs) => xs
            .iter()
            .map(|x| match x {
                Expr::Sum(_) => format!("\\left({}\\right)", latex(x)),
                _ => latex(x),
            })
            .collect::<Vec<_>>()
            .join(" \\oplus "),
        Expr::Les(node) => {
            let mut s = String::from("\\left[\\cdots");
            for r in &node.rows {
                let _ = write!(
                    s,
                    " \\to {} \\to {}_{{{}}} \\to {}",
                    latex(&r.left),
                    text(&node.unknown),
                    r.degree,
                    latex(&r.right)
                );
            }
            s.push_str(" \\to \\cdots\\right]");
            s
        }
        Expr::Opaque { label, degree } => format!("{}_{{{degree}}}", text(label)),
    }
}

fn latex_atom(a: &Atom) -> String {
    match a {
        Atom::K { degree } => format!("K_{{{degree}}}(R)"),
        Atom::NK { degree } => format!("NK_{{{degree}}}(R)"),
        Atom::TwistedNil {
            degree,
            base,
            monodromy,
        } => {
            let base = match base {
                NilBase::Z => "\\mathbb{Z}".to_string(),
                NilBase::Z2 => "\\mathbb{Z}^{2}".to_string(),
                NilBase::Symbolic(s) => text(s),
            };
            format!("NK_{{{degree}}}(R[{base}];{})", text(monodromy))
        }
        Atom::FiniteWh { degree, group } => {
            format!("\\mathrm{{Wh}}_{{{degree}}}({})", latex_finite(group))
        }
        Atom::FiniteKReduced0 { degree, group } => {
            format!("\\widetilde{{K}}_{{{degree}}}(R[{}])", latex_finite(group))
        }
        Atom::FiniteKNeg { degree, group } => {
            format!("K_{{{degree}}}(R[{}])", latex_finite(group))
        }
    }
}

fn latex_finite(g: &FiniteGroupSpec) -> String {
    match g {
        FiniteGroupSpec::Trivial => "1".into(),
        FiniteGroupSpec::Cyclic(n) => format!("\\mathbb{{Z}}/{n}"),
        FiniteGroupSpec::CentralExtension { base, cyclic_order } => {
            let b = match base {
                PolyhedralBase::Dihedral => "D",
                PolyhedralBase::Tetrahedral => "T",
                PolyhedralBase::Octahedral => "O",
                PolyhedralBase::Icosahedral => "I",
            };
            format!("\\mathrm{{CE}}({b},{cyclic_order})")
        }
        FiniteGroupSpec::Named(tag) if tag == "I*" => "I^{*}".into(),
        FiniteGroupSpec::Named(tag) => text(tag),
    }
}

fn latex_group(g: &FGAb) -> String {
    if g.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    match g.rank() {
        0 => {}
        1 => parts.push("\\mathbb{Z}".to_string()),
        r => parts.push(format!("\\mathbb{{Z}}^{{{r}}}")),
    }
    let t = g.torsion();
    let mut i = 0;
    while i < t.len() {
        let d = t[i];
        let run = t[i..].iter().take_while(|&&x| x == d).count();
        parts.push(if run == 1 {
            format!("\\mathbb{{Z}}/{d}")
        } else {
            format!("(\\mathbb{{Z}}/{d})^{{{run}}}")
        });
        i += run;
    }
    parts.join(" \\oplus ")
}

fn text(s: &str) -> String {
    let mut out = String::from("\\text{");
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '_' | '#' | '%' | '&' | '$' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            c => out.push(c),
        }
    }
    out.push('}');
    out
}
