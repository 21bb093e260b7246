//! Coefficient-ring assumptions.
//!
//! | kind       | `NK_n(R)` | `K_n(R)`, `n ≤ −1` | twisted Nil over `Z`, `Z^2` | finite-group atoms |
//! |------------|-----------|--------------------|------------------------------|--------------------|
//! | `Generic`  | kept      | kept               | kept                         | kept               |
//! | `Regular`  | 0         | 0                  | 0 if the flag is set         | kept               |
//! | `Integers` | 0         | 0                  | 0 if the flag is set         | database value     |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kdb::KnowledgeBase;
use crate::kexpr::{normalize, Atom, Expr, NilBase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    Generic,
    Regular,
    Integers,
}

#[derive(Debug, Clone)]
pub struct RingProfile {
    pub kind: RingKind,
    pub assume_twisted_nil_vanishes: bool,
    pub database: Option<Arc<KnowledgeBase>>,
}

impl RingProfile {
    pub fn generic() -> Self {
        RingProfile {
            kind: RingKind::Generic,
            assume_twisted_nil_vanishes: false,
            database: None,
        }
    }

    pub fn regular() -> Self {
        RingProfile {
            kind: RingKind::Regular,
            assume_twisted_nil_vanishes: true,
            database: None,
        }
    }

    /// `R = Z` with the bundled knowledge base.
    pub fn integers() -> Self {
        Self::integers_with(Arc::new(KnowledgeBase::bundled()))
    }

    pub fn integers_with(db: Arc<KnowledgeBase>) -> Self {
        RingProfile {
            kind: RingKind::Integers,
            assume_twisted_nil_vanishes: true,
            database: Some(db),
        }
    }

    pub fn of_kind(kind: RingKind) -> Self {
        match kind {
            RingKind::Generic => Self::generic(),
            RingKind::Regular => Self::regular(),
            RingKind::Integers => Self::integers(),
        }
    }

    fn regular_rules(&self) -> bool {
        self.kind >= RingKind::Regular
    }

    /// Replacement for `a` under this profile, if any.
    pub fn rewrite(&self, a: &Atom) -> Option<Expr> {
        if self.regular_rules() {
            match a {
                Atom::NK { .. } => return Some(Expr::Zero),
                Atom::K { degree } if *degree <= -1 => return Some(Expr::Zero),
                Atom::TwistedNil { base, .. }
                    if self.assume_twisted_nil_vanishes
                        && matches!(base, NilBase::Z | NilBase::Z2) =>
                {
                    return Some(Expr::Zero)
                }
                _ => {}
            }
        }
        if self.kind == RingKind::Integers {
            if let (Some(db), Some(group)) = (&self.database, a.finite_group()) {
                return db
                    .lookup_atom(a.kind(), group, a.degree())
                    .map(|e| Expr::Group(e.value.clone()));
            }
        }
        None
    }
}

impl PartialEq for RingProfile {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.assume_twisted_nil_vanishes == other.assume_twisted_nil_vanishes
            && match (&self.database, &other.database) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
                _ => false,
            }
    }
}

/// Rewrites the atoms `p` declares zero or tabulated, then normalizes.
pub fn apply_ring_profile(e: &Expr, p: &RingProfile) -> Expr {
    normalize(&e.rewrite_atoms(&mut |a| p.rewrite(a)))
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingKind::Generic => "generic",
            RingKind::Regular => "regular",
            RingKind::Integers => "integers",
        })
    }
}

impl FromStr for RingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generic" => Ok(RingKind::Generic),
            "regular" => Ok(RingKind::Regular),
            "integers" => Ok(RingKind::Integers),
            other => Err(format!("unknown ring `{other}` (expected generic, regular or integers)")),
        }
    }
}
