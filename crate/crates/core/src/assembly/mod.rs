//! Evaluation of `Wh_n^R(Γ) ≅ finite_rel ⊕ vc_rel` over a degree window.
//!
//! Per degree the raw handler output goes through: annotation of index sets,
//! [`apply_ring_profile`], [`collapse_les`], [`normalize`].

pub mod handlers;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SemanticCode};
use crate::group::{analyze, GroupProfile, VcKind};
use crate::kexpr::{collapse_les, normalize, Atom, Expr, LesNode, LesRow, Multiplicity};
use crate::manifold::{FiniteGroupSpec, ManifoldSpec};
use crate::ring::{apply_ring_profile, RingKind, RingProfile};

pub use handlers::{
    bass_heller_swan, hyperbolic_relative, jsj_relative, k_of_z2_group_ring,
    relative_finite_term, relative_vc_prime_decomp, relative_vc_single_prime, seifert_relative,
    solvable_relative, wh_klein_formula, wh_z2_formula, Trace,
};

/// Closed interval `lo..=hi`, iterated from `hi` down to `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub lo: i32,
    pub hi: i32,
}

impl DegreeWindow {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(Error::semantic(
                SemanticCode::EmptyWindow,
                format!("degree window {lo}..{hi} is empty"),
            ));
        }
        Ok(DegreeWindow { lo, hi })
    }

    pub fn single(n: i32) -> Self {
        DegreeWindow { lo: n, hi: n }
    }

    pub fn degrees(self) -> impl Iterator<Item = i32> {
        (self.lo..=self.hi).rev()
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for DegreeWindow {
    type Err = Error;

    /// `a..b` or a single degree `a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::semantic(
                SemanticCode::EmptyWindow,
                format!("expected a degree window `a..b`, found `{s}`"),
            )
        };
        let int = |t: &str| t.trim().parse::<i32>().map_err(|_| bad());
        match s.split_once("..") {
            Some((a, b)) => DegreeWindow::new(int(a)?, int(b)?),
            None => Ok(DegreeWindow::single(int(s)?)),
        }
    }
}

/// User-supplied cardinalities for index sets of unspecified size.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations(BTreeMap<String, Multiplicity>);

impl Annotations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: impl Into<String>, m: Multiplicity) {
        self.0.insert(label.into(), m);
    }

    /// Parses `label=N` or `label=inf`; the label may itself contain `=`.
    pub fn add_assignment(&mut self, text: &str) -> Result<()> {
        let bad = |msg: &str| {
            Error::semantic(
                SemanticCode::InvalidAnnotation,
                format!("{msg} in annotation `{text}` (expected label=N or label=inf)"),
            )
        };
        let (label, value) = text.rsplit_once('=').ok_or_else(|| bad("missing `=`"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(bad("empty label"));
        }
        let m = match value.trim() {
            "inf" | "∞" => Multiplicity::CountablyInfinite,
            v => Multiplicity::Finite(v.parse().map_err(|_| bad("bad cardinality"))?),
        };
        self.set(label, m);
        Ok(())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Replaces every annotated `Unknown` multiplicity in `e`.
    pub fn apply(&self, e: &Expr) -> Expr {
        if self.0.is_empty() {
            return e.clone();
        }
        match e {
            Expr::Scaled(m, inner) => {
                let m = match m {
                    Multiplicity::Unknown(l) => self.0.get(l).cloned().unwrap_or_else(|| m.clone()),
                    other => other.clone(),
                };
                Expr::Scaled(m, Box::new(self.apply(inner)))
            }
            Expr::Sum(xs) => Expr::Sum(xs.iter().map(|x| self.apply(x)).collect()),
            Expr::Les(node) => Expr::Les(Box::new(LesNode {
                id: node.id.clone(),
                unknown: node.unknown.clone(),
                target: node.target,
                rows: node
                    .rows
                    .iter()
                    .map(|r| LesRow {
                        degree: r.degree,
                        left: self.apply(&r.left),
                        right: self.apply(&r.right),
                    })
                    .collect(),
            })),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub degree: i32,
    pub finite_rel: Expr,
    pub vc_rel: Expr,
    pub wh: Expr,
    pub provenance: Vec<String>,
    pub caveats: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhResult {
    pub input: String,
    pub ring: RingKind,
    pub window: DegreeWindow,
    pub group_profile: GroupProfile,
    /// Index-set labels produced by the handlers, before annotation.
    pub emitted_labels: BTreeSet<String>,
    pub degrees: Vec<DegreeResult>,
}

impl WhResult {
    pub fn degree(&self, n: i32) -> Option<&DegreeResult> {
        self.degrees.iter().find(|d| d.degree == n)
    }

    /// Annotation labels that match nothing the handlers emitted.
    pub fn unused_annotations<'a>(&self, ann: &'a Annotations) -> Vec<&'a str> {
        ann.labels()
            .filter(|l| !self.emitted_labels.contains(*l))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Assembler {
    pub ring: RingProfile,
    pub annotations: Annotations,
}

impl Assembler {
    pub fn new(ring: RingProfile) -> Self {
        Assembler {
            ring,
            annotations: Annotations::new(),
        }
    }

    pub fn with_annotations(mut self, annotations: Annotations) -> Self {
        self.annotations = annotations;
        self
    }

    fn finish(&self, raw: &Expr) -> Expr {
        let annotated = self.annotations.apply(raw);
        collapse_les(&apply_ring_profile(&annotated, &self.ring))
    }

    pub fn run(&self, m: &ManifoldSpec, window: DegreeWindow) -> Result<WhResult> {
        let profile = analyze(m);
        let mut emitted_labels = BTreeSet::new();
        let degrees = window
            .degrees()
            .map(|n| {
                let mut trace = Trace::default();
                let raw_finite = relative_finite_term(&profile, n, &mut trace);
                let raw_vc = relative_vc_prime_decomp(m, n, &mut trace)?;
                emitted_labels.extend(raw_vc.unknown_labels());
                let finite_rel = self.finish(&raw_finite);
                let vc_rel = self.finish(&raw_vc);
                let wh = normalize(&Expr::sum([finite_rel.clone(), vc_rel.clone()]));
                self.caveats(&profile, n, &finite_rel, &vc_rel, &mut trace);
                self.provenance(&mut trace);
                Ok(DegreeResult {
                    degree: n,
                    finite_rel,
                    vc_rel,
                    wh,
                    provenance: trace.provenance.into_iter().collect(),
                    caveats: trace.caveats.into_iter().collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WhResult {
            input: m.to_string(),
            ring: self.ring.kind,
            window,
            group_profile: profile,
            emitted_labels,
            degrees,
        })
    }

    fn provenance(&self, trace: &mut Trace) {
        trace
            .provenance
            .insert("Wh_n splits as the finite-relative term ⊕ the virtually-cyclic-relative term".into());
        match self.ring.kind {
            RingKind::Generic => {}
            RingKind::Regular => {
                trace
                    .provenance
                    .insert("regular ring: NK_n(R) = 0 and K_n(R) = 0 for n ≤ -1".into());
            }
            RingKind::Integers => {
                trace.provenance.insert(
                    "R = Z: regular-ring vanishing plus tabulated values for finite groups".into(),
                );
            }
        }
    }

    fn caveats(
        &self,
        profile: &GroupProfile,
        n: i32,
        finite_rel: &Expr,
        vc_rel: &Expr,
        trace: &mut Trace,
    ) {
        let tabulated = self.ring.kind == RingKind::Integers && self.ring.database.is_some();
        if tabulated && n == -2 && !profile.spherical_factor_groups.is_empty() {
            trace.caveats.insert(
                "degree -2: the value 0 is the general vanishing K_n(Z[F]) = 0 for finite F and n ≤ -2; the worked example tabulates only n < -2 explicitly".into(),
            );
        }
        if self.ring.kind != RingKind::Integers && profile.vc_kinds_present.contains(&VcKind::Dinf)
        {
            let z2 = FiniteGroupSpec::Cyclic(2);
            let count = |v: &[FiniteGroupSpec]| v.iter().filter(|g| **g == z2).count();
            let dinf_prime =
                count(&profile.max_finite_classes) > count(&profile.spherical_factor_groups);
            if dinf_prime {
                trace.caveats.insert(
                    "Z/2 subgroups of an infinite dihedral factor are given no finite-relative summand; the vanishing of their Whitehead groups is known over Z".into(),
                );
            }
        }
        if tabulated {
            finite_rel.visit_atoms(&mut |a: &Atom| {
                if let Some(g) = a.finite_group() {
                    trace
                        .caveats
                        .insert(format!("{a} for {g} is not in the database; kept symbolic"));
                }
            });
        }
        for label in vc_rel.unknown_labels() {
            if let Some(scope) = label.strip_prefix("hyperbolic/parabolic@") {
                trace.caveats.insert(format!(
                    "the number of parabolic classes of {scope} is not determined by its cusp count"
                ));
            }
            trace.caveats.insert(format!(
                "index set `{label}` has unspecified cardinality; annotate `{label}=N` or `{label}=inf`"
            ));
        }
    }
}

/// [`Assembler::run`] without annotations.
pub fn assemble_wh(m: &ManifoldSpec, ring: &RingProfile, window: DegreeWindow) -> Result<WhResult> {
    Assembler::new(ring.clone()).run(m, window)
}
