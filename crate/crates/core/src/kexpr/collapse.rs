//! Exactness rewrites for LES nodes.
//!
//! With `… → right_{t+1} → left_t → X_t → right_t → left_{t−1} → …`:
//!
//! - `left_t = 0` and `left_{t−1} = 0` give `X_t ≅ right_t`;
//! - `right_{t+1} = 0` and `right_t = 0` give `X_t ≅ left_t`.
//!
//! Nothing else is collapsed; extension problems stay unresolved.

use super::{normalize, Expr, LesNode, LesRow};

/// Collapses LES nodes bottom-up and renormalizes.
pub fn collapse_les(e: &Expr) -> Expr {
    normalize(&collapse(&normalize(e)))
}

fn collapse(e: &Expr) -> Expr {
    match e {
        Expr::Zero | Expr::Atom(_) | Expr::Group(_) | Expr::Opaque { .. } => e.clone(),
        Expr::Scaled(m, inner) => Expr::scaled(m.clone(), collapse(inner)),
        Expr::Sum(xs) => Expr::Sum(xs.iter().map(collapse).collect()),
        Expr::Les(node) => {
            let node = LesNode {
                id: node.id.clone(),
                unknown: node.unknown.clone(),
                target: node.target,
                rows: node
                    .rows
                    .iter()
                    .map(|r| LesRow {
                        degree: r.degree,
                        left: normalize(&collapse(&r.left)),
                        right: normalize(&collapse(&r.right)),
                    })
                    .collect(),
            };
            resolve(&node).unwrap_or_else(|| Expr::les(node))
        }
    }
}

fn resolve(node: &LesNode) -> Option<Expr> {
    let t = node.target;
    let row = node.row(t)?;
    let vanishes = |d: i32, pick: fn(&LesRow) -> &Expr| node.row(d).is_some_and(|r| pick(r).is_zero());
    if vanishes(t, |r| &r.left) && vanishes(t - 1, |r| &r.left) {
        return Some(row.right.clone());
    }
    if vanishes(t + 1, |r| &r.right) && vanishes(t, |r| &r.right) {
        return Some(row.left.clone());
    }
    None
}
