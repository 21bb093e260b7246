//! Canonical form.
//!
//! A normal expression is `Zero`, a single summand, or a flat `Sum` of at
//! least two summands in the order:
//!
//! 1. one merged `Group` (if nonzero),
//! 2. atoms and opaque groups, each either bare or `Scaled(Finite(k ≥ 2), _)`,
//! 3. one block `Scaled(M, inner)` per non-finite multiplicity `M`,
//! 4. LES nodes.
//!
//! Finite multiplicities distribute over sums. Blocks sharing an index set
//! merge (`⊕_J X ⊕ ⊕_J Y = ⊕_J (X ⊕ Y)`); blocks with different index sets
//! never do.

use std::collections::BTreeMap;

use super::{Expr, LesNode, LesRow, Multiplicity};
use crate::fgab::FGAb;

pub fn normalize(e: &Expr) -> Expr {
    let mut acc = Accumulator::default();
    acc.add(e, 1);
    acc.finish()
}

#[derive(Default)]
struct Accumulator {
    group: Option<FGAb>,
    /// Atoms, opaque groups and LES nodes with their multiplicities.
    plain: BTreeMap<Expr, u64>,
    /// Inner summands of each non-finite block, with multiplicities.
    blocks: BTreeMap<Multiplicity, Vec<(Expr, u64)>>,
}

impl Accumulator {
    fn add(&mut self, e: &Expr, k: u64) {
        if k == 0 {
            return;
        }
        match e {
            Expr::Zero => {}
            Expr::Group(g) => {
                if !g.is_zero() {
                    let scaled = g.times(k);
                    self.group = Some(match self.group.take() {
                        Some(h) => h.direct_sum(&scaled),
                        None => scaled,
                    });
                }
            }
            Expr::Atom(_) | Expr::Opaque { .. } => self.bump(e.clone(), k),
            Expr::Les(node) => self.bump(Expr::Les(Box::new(normalize_node(node))), k),
            Expr::Sum(xs) => xs.iter().for_each(|x| self.add(x, k)),
            Expr::Scaled(Multiplicity::Finite(m), inner) => {
                self.add(inner, k.checked_mul(*m).expect("multiplicity overflow"))
            }
            Expr::Scaled(m, inner) => {
                self.blocks
                    .entry(m.clone())
                    .or_default()
                    .push((inner.as_ref().clone(), k));
            }
        }
    }

    fn bump(&mut self, e: Expr, k: u64) {
        let slot = self.plain.entry(e).or_insert(0);
        *slot = slot.checked_add(k).expect("multiplicity overflow");
    }

    fn finish(self) -> Expr {
        let mut out = Vec::new();
        if let Some(g) = self.group {
            out.push(Expr::Group(g));
        }
        let mut les = Vec::new();
        for (base, k) in self.plain {
            let term = if k == 1 {
                base
            } else {
                Expr::times(k, base)
            };
            if matches!(term_base(&term), Expr::Les(_)) {
                les.push(term);
            } else {
                out.push(term);
            }
        }
        for (m, parts) in self.blocks {
            let mut inner = normalize(&Expr::Sum(
                parts.into_iter().map(|(e, k)| Expr::times(k, e)).collect(),
            ));
            if m == Multiplicity::CountablyInfinite {
                inner = absorb_countable(inner);
            }
            if inner != Expr::Zero {
                out.push(Expr::scaled(m, inner));
            }
        }
        out.extend(les);
        match out.len() {
            0 => Expr::Zero,
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }
}

fn term_base(e: &Expr) -> &Expr {
    match e {
        Expr::Scaled(Multiplicity::Finite(_), inner) => inner,
        other => other,
    }
}

/// `⊕_ℕ (A ⊕ ⊕_ℕ B) = ⊕_ℕ (A ⊕ B)`: strips a countable block nested
/// directly inside a countable block. `inner` is normal, so it holds at most
/// one such block and that block holds none.
fn absorb_countable(inner: Expr) -> Expr {
    match inner {
        Expr::Scaled(Multiplicity::CountablyInfinite, y) => *y,
        Expr::Sum(xs) if xs.iter().any(is_countable) => normalize(&Expr::Sum(
            xs.into_iter()
                .map(|x| match x {
                    Expr::Scaled(Multiplicity::CountablyInfinite, y) => *y,
                    other => other,
                })
                .collect(),
        )),
        other => other,
    }
}

fn is_countable(e: &Expr) -> bool {
    matches!(e, Expr::Scaled(Multiplicity::CountablyInfinite, _))
}

fn normalize_node(node: &LesNode) -> LesNode {
    let mut rows: Vec<LesRow> = node
        .rows
        .iter()
        .map(|r| LesRow {
            degree: r.degree,
            left: normalize(&r.left),
            right: normalize(&r.right),
        })
        .collect();
    rows.sort_by_key(|r| std::cmp::Reverse(r.degree));
    LesNode {
        id: node.id.clone(),
        unknown: node.unknown.clone(),
        target: node.target,
        rows,
    }
}
