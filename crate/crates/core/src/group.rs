//! Algebraic profile of `Γ = π_1(M)` read off the prime decomposition.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SemanticCode};
use crate::manifold::{
    FiniteGroupSpec, FlatForm, LineGroup, ManifoldSpec, OrbifoldGeometry, PrimeSpec, SeifertSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VcKind {
    Z,
    Dinf,
}

/// Virtually solvable group forms handled in closed form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "monodromy")]
pub enum SolvableForm {
    Z,
    Z2,
    KleinBottle,
    /// `Z^2 ⋊_φ Z`
    Z2SemidirectZ(String),
    /// `K ∗_{Z^2} K`
    KleinAmalgam(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupProfile {
    pub torsion_free: bool,
    /// One entry per conjugacy class of maximal finite subgroups, in prime
    /// order; aspherical and `Z`-type primes contribute `Trivial`.
    pub max_finite_classes: Vec<FiniteGroupSpec>,
    /// Nontrivial finite fundamental groups of the primes.
    pub spherical_factor_groups: Vec<FiniteGroupSpec>,
    pub vc_kinds_present: BTreeSet<VcKind>,
    pub solvable_form: Option<SolvableForm>,
}

/// Finite fundamental group of a closed Seifert manifold over a spherical or
/// bad base. Only its name is known.
pub fn seifert_finite_group(s: &SeifertSpec) -> FiniteGroupSpec {
    FiniteGroupSpec::Named(format!("pi1 {s}"))
}

/// Whether a Seifert prime has finite fundamental group.
pub fn seifert_is_finite(s: &SeifertSpec) -> bool {
    s.closed && matches!(s.geometry(), OrbifoldGeometry::Spherical | OrbifoldGeometry::Bad)
}

/// Group form of a Seifert manifold whose base is flat.
pub fn seifert_flat_form(s: &SeifertSpec) -> Option<SolvableForm> {
    if s.geometry() != OrbifoldGeometry::Flat {
        return None;
    }
    if !s.closed {
        let b = &s.base;
        let annulus = b.orientable && b.genus == 0 && b.cone_orders.is_empty();
        return Some(if annulus {
            SolvableForm::Z2
        } else {
            SolvableForm::KleinBottle
        });
    }
    s.form.as_ref().map(|f| match f {
        FlatForm::Z2xZ(phi) => SolvableForm::Z2SemidirectZ(phi.clone()),
        FlatForm::KleinAmalgam(phi) => SolvableForm::KleinAmalgam(phi.clone()),
    })
}

/// Monodromy tag of a Sol torus bundle.
pub fn monodromy_tag(m: &[[i64; 2]; 2]) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

/// Tag of the gluing in the Sol double of the twisted Klein-bottle bundle.
pub const SOL_KLEIN_GLUING: &str = "sol-gluing";

fn prime_solvable_form(p: &PrimeSpec) -> Option<SolvableForm> {
    match p {
        PrimeSpec::S2xE {
            group: LineGroup::Z,
        } => Some(SolvableForm::Z),
        PrimeSpec::SolTorusBundle { monodromy } => {
            Some(SolvableForm::Z2SemidirectZ(monodromy_tag(monodromy)))
        }
        PrimeSpec::SolKleinDouble => Some(SolvableForm::KleinAmalgam(SOL_KLEIN_GLUING.into())),
        PrimeSpec::Seifert(s) => seifert_flat_form(s),
        _ => None,
    }
}

/// Finite groups of a prime and whether its fundamental group is infinite.
fn prime_finite_data(p: &PrimeSpec) -> (Vec<FiniteGroupSpec>, bool) {
    match p {
        PrimeSpec::Spherical { group } => (vec![group.clone()], false),
        PrimeSpec::S2xE {
            group: LineGroup::Dinf,
        } => (vec![FiniteGroupSpec::Cyclic(2); 2], true),
        PrimeSpec::Seifert(s) if seifert_is_finite(s) => (vec![seifert_finite_group(s)], false),
        _ => (vec![FiniteGroupSpec::Trivial], true),
    }
}

pub fn analyze(m: &ManifoldSpec) -> GroupProfile {
    let mut max_finite_classes = Vec::new();
    let mut spherical_factor_groups = Vec::new();
    let mut any_infinite = false;
    let mut involution = false;
    let mut dinf_prime = false;
    for p in &m.primes {
        let (groups, infinite) = prime_finite_data(p);
        any_infinite |= infinite;
        if matches!(p, PrimeSpec::S2xE { group: LineGroup::Dinf }) {
            dinf_prime = true;
        } else {
            for g in groups.iter().filter(|g| !g.is_trivial()) {
                spherical_factor_groups.push(g.clone());
                involution |= g.has_involution();
            }
        }
        max_finite_classes.extend(groups);
    }
    let nontrivial: Vec<&PrimeSpec> = m.nontrivial_primes().collect();
    let free_product = nontrivial.len() >= 2;

    let mut vc_kinds_present = BTreeSet::new();
    if any_infinite || free_product {
        vc_kinds_present.insert(VcKind::Z);
    }
    // An involution `a` in one free factor and any `b ≠ 1` in another give
    // `⟨a, bab⁻¹⟩ ≅ Z/2 ∗ Z/2`.
    if dinf_prime || (free_product && involution) {
        vc_kinds_present.insert(VcKind::Dinf);
    }

    let solvable_form = match nontrivial.as_slice() {
        [p] => prime_solvable_form(p),
        _ => None,
    };

    GroupProfile {
        torsion_free: max_finite_classes.iter().all(FiniteGroupSpec::is_trivial),
        max_finite_classes,
        spherical_factor_groups,
        vc_kinds_present,
        solvable_form,
    }
}

/// Subgroup classes of `D∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DinfSubgroup {
    Trivial,
    Z2,
    Z,
    Dinf,
}

/// Element `r^a s^e` of `D∞ = ⟨r, s | s², srs = r⁻¹⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DinfElement {
    pub translation: i64,
    pub reflection: bool,
}

impl DinfElement {
    pub const IDENTITY: DinfElement = DinfElement {
        translation: 0,
        reflection: false,
    };

    /// `(a, e)(b, f) = (a + (−1)^e b, e ⊕ f)`
    pub fn compose(self, other: DinfElement) -> DinfElement {
        let b = if self.reflection {
            -other.translation
        } else {
            other.translation
        };
        DinfElement {
            translation: self.translation + b,
            reflection: self.reflection ^ other.reflection,
        }
    }

    /// Normal form of a word over `r`, `R` (= `r⁻¹`) and `s`.
    pub fn from_word(word: &str) -> Result<DinfElement> {
        word.chars().try_fold(DinfElement::IDENTITY, |acc, c| {
            let g = match c {
                'r' => DinfElement {
                    translation: 1,
                    reflection: false,
                },
                'R' => DinfElement {
                    translation: -1,
                    reflection: false,
                },
                's' => DinfElement {
                    translation: 0,
                    reflection: true,
                },
                other => {
                    return Err(Error::semantic(
                        SemanticCode::InvalidGroup,
                        format!("`{other}` is not a D∞ generator (use r, R = r⁻¹, s)"),
                    ))
                }
            };
            Ok(acc.compose(g))
        })
    }
}

/// Longest word accepted by [`dinf_subgroup_oracle`].
pub const DINF_MAX_WORD: usize = 12;

/// Isomorphism type of the subgroup of `D∞` generated by `generators`.
///
/// Translations `r^a` generate `Z`; a single reflection class gives `Z/2`;
/// two distinct reflections, or a reflection together with a nontrivial
/// translation, give `D∞`.
pub fn dinf_subgroup_oracle(generators: &[&str], max_len: usize) -> Result<DinfSubgroup> {
    if max_len > DINF_MAX_WORD {
        return Err(Error::semantic(
            SemanticCode::InvalidGroup,
            format!("word length bound {max_len} exceeds {DINF_MAX_WORD}"),
        ));
    }
    let mut translations = false;
    let mut reflections: BTreeSet<i64> = BTreeSet::new();
    for w in generators {
        if w.chars().count() > max_len {
            return Err(Error::semantic(
                SemanticCode::InvalidGroup,
                format!("word `{w}` is longer than {max_len}"),
            ));
        }
        let g = DinfElement::from_word(w)?;
        if g.reflection {
            reflections.insert(g.translation);
        } else if g.translation != 0 {
            translations = true;
        }
    }
    Ok(match (translations, reflections.len()) {
        (false, 0) => DinfSubgroup::Trivial,
        (false, 1) => DinfSubgroup::Z2,
        (true, 0) => DinfSubgroup::Z,
        _ => DinfSubgroup::Dinf,
    })
}

impl fmt::Display for VcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VcKind::Z => "Z",
            VcKind::Dinf => "Dinf",
        })
    }
}

impl fmt::Display for DinfSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DinfSubgroup::Trivial => "Trivial",
            DinfSubgroup::Z2 => "Z2",
            DinfSubgroup::Z => "Z",
            DinfSubgroup::Dinf => "Dinf",
        })
    }
}
