//! Closed oriented 3-manifolds given by their prime decomposition, with the
//! geometric or JSJ data of every prime.
//!
//! Specs are built by [`parse_manifold`] (text DSL) or [`ManifoldSpec::from_json`];
//! both run [`ManifoldSpec::validate`]. [`fmt::Display`] renders the canonical
//! DSL, so `parse_manifold(&m.to_string()) == m`.

mod dsl;
mod orbifold;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SemanticCode};

pub use dsl::parse_manifold;
pub(crate) use dsl::{parse_finite_group, tag as parse_tag};
pub use orbifold::{classify_orbifold_geometry, orbifold_euler_characteristic, OrbifoldGeometry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub primes: Vec<PrimeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeSpec {
    Spherical { group: FiniteGroupSpec },
    S2xE { group: LineGroup },
    Seifert(SeifertSpec),
    Hyperbolic(HyperbolicSpec),
    Jsj(JsjGraphSpec),
    SolTorusBundle { monodromy: [[i64; 2]; 2] },
    SolKleinDouble,
}

/// Fundamental group of a closed `S^2 × E` manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineGroup {
    Z,
    Dinf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertSpec {
    pub base: OrbifoldSignature,
    pub closed: bool,
    /// Group form of a closed Seifert manifold over a flat base. Required by
    /// the assembly engine for that case and rejected everywhere else.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FlatForm>,
}

/// The two group forms a closed Seifert manifold over a flat orbifold can
/// take. The payload is the monodromy tag `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlatForm {
    Z2xZ(String),
    KleinAmalgam(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub genus: u32,
    pub orientable: bool,
    pub cone_orders: Vec<u32>,
    pub boundary_components: u32,
    #[serde(default)]
    pub bad: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperbolicSpec {
    pub closed: bool,
    pub cusp_count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsjGraphSpec {
    pub vertices: Vec<PieceSpec>,
    /// Unordered pairs of 0-based vertex indices; self-loops allowed.
    pub edges: Vec<(usize, usize)>,
    /// User assertion that the decomposition is the minimal one.
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceSpec {
    Seifert(SeifertSpec),
    Hyperbolic(HyperbolicSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FiniteGroupSpec {
    Trivial,
    Cyclic(u32),
    CentralExtension {
        base: PolyhedralBase,
        cyclic_order: u32,
    },
    /// A group known by name; `Named("I*")` is the binary icosahedral group.
    Named(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyhedralBase {
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl FiniteGroupSpec {
    pub fn binary_icosahedral() -> Self {
        FiniteGroupSpec::Named("I*".into())
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, FiniteGroupSpec::Trivial)
    }

    /// Whether the group certainly contains an element of order 2. Unknown
    /// named groups answer `false`.
    pub fn has_involution(&self) -> bool {
        match self {
            FiniteGroupSpec::Trivial => false,
            FiniteGroupSpec::Cyclic(n) => n % 2 == 0,
            FiniteGroupSpec::CentralExtension { .. } => true,
            FiniteGroupSpec::Named(tag) => tag == "I*",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            FiniteGroupSpec::Cyclic(n) if *n < 2 => Err(Error::semantic(
                SemanticCode::GroupOrder,
                format!("cyclic group order {n} must be at least 2 (use `1` for the trivial group)"),
            )),
            FiniteGroupSpec::CentralExtension { cyclic_order, .. }
                if *cyclic_order < 2 || cyclic_order % 2 != 0 =>
            {
                Err(Error::semantic(
                    SemanticCode::GroupOrder,
                    format!("central extension needs an even cyclic order >= 2, got {cyclic_order}"),
                ))
            }
            FiniteGroupSpec::Named(tag) if tag.is_empty() => Err(Error::semantic(
                SemanticCode::GroupOrder,
                "named group tag is empty",
            )),
            _ => Ok(()),
        }
    }
}

impl OrbifoldSignature {
    /// Sphere with one cone point, or with two cone points of distinct orders.
    pub fn is_known_bad(&self) -> bool {
        self.genus == 0
            && self.orientable
            && self.boundary_components == 0
            && match self.cone_orders.as_slice() {
                [_] => true,
                [a, b] => a != b,
                _ => false,
            }
    }

    fn validate(&self) -> Result<()> {
        if let Some(a) = self.cone_orders.iter().find(|&&a| a < 2) {
            return Err(Error::semantic(
                SemanticCode::ConeOrder,
                format!("cone order {a} must be at least 2"),
            ));
        }
        if !self.orientable && self.genus == 0 {
            return Err(Error::semantic(
                SemanticCode::ConeOrder,
                "a non-orientable base needs at least one cross-cap (g >= 1)",
            ));
        }
        if self.bad && !self.is_known_bad() {
            return Err(Error::semantic(
                SemanticCode::BadFlagOnGoodOrbifold,
                format!("signature {self} is a good orbifold but is flagged bad"),
            ));
        }
        Ok(())
    }
}

impl SeifertSpec {
    pub fn geometry(&self) -> OrbifoldGeometry {
        classify_orbifold_geometry(&self.base)
    }

    fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.closed && self.base.boundary_components != 0 {
            return Err(Error::semantic(
                SemanticCode::SeifertBoundary,
                "a closed Seifert manifold has a closed base (bdry=0)",
            ));
        }
        if !self.closed && self.base.boundary_components == 0 {
            return Err(Error::semantic(
                SemanticCode::SeifertBoundary,
                "a Seifert manifold with boundary needs bdry >= 1 in its base",
            ));
        }
        if self.form.is_some() && !(self.closed && self.geometry() == OrbifoldGeometry::Flat) {
            return Err(Error::semantic(
                SemanticCode::MisplacedForm,
                "a group form annotation only applies to closed Seifert manifolds over a flat base",
            ));
        }
        Ok(())
    }
}

impl HyperbolicSpec {
    pub fn closed() -> Self {
        HyperbolicSpec {
            closed: true,
            cusp_count: 0,
        }
    }

    pub fn cusped(cusps: u32) -> Self {
        HyperbolicSpec {
            closed: false,
            cusp_count: cusps,
        }
    }

    fn validate(&self) -> Result<()> {
        match (self.closed, self.cusp_count) {
            (true, 0) | (false, 1..) => Ok(()),
            (true, _) => Err(Error::semantic(
                SemanticCode::CuspCount,
                "a closed hyperbolic manifold has no cusps",
            )),
            (false, 0) => Err(Error::semantic(
                SemanticCode::CuspCount,
                "cusps=0 is not allowed; write Hyperbolic(closed)",
            )),
        }
    }
}

impl PieceSpec {
    /// Number of boundary tori of the piece.
    pub fn boundary_tori(&self) -> u32 {
        match self {
            PieceSpec::Seifert(s) => s.base.boundary_components,
            PieceSpec::Hyperbolic(h) => h.cusp_count,
        }
    }

    /// Twisted I-bundle over the Klein bottle: Seifert over a Möbius band or
    /// over a disk with two cone points of order 2.
    fn is_twisted_klein_bundle(&self) -> bool {
        let PieceSpec::Seifert(s) = self else {
            return false;
        };
        let b = &s.base;
        b.boundary_components == 1
            && ((!b.orientable && b.genus == 1 && b.cone_orders.is_empty())
                || (b.orientable && b.genus == 0 && b.cone_orders == [2, 2]))
    }

    /// `T^2 × I`: Seifert over an annulus.
    fn is_thickened_torus(&self) -> bool {
        let PieceSpec::Seifert(s) = self else {
            return false;
        };
        let b = &s.base;
        b.orientable && b.genus == 0 && b.cone_orders.is_empty() && b.boundary_components == 2
    }
}

impl JsjGraphSpec {
    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() || self.edges.is_empty() {
            return Err(Error::semantic(
                SemanticCode::EmptyJsj,
                "a JSJ graph needs at least one vertex and one edge; use Seifert(...) or Hyperbolic(...) for trivial decompositions",
            ));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            match v {
                PieceSpec::Seifert(s) => {
                    if s.closed {
                        return Err(Error::semantic(
                            SemanticCode::ClosedJsjPiece,
                            format!("JSJ vertex {} is a closed Seifert manifold", i + 1),
                        ));
                    }
                    s.validate()?;
                }
                PieceSpec::Hyperbolic(h) => {
                    if h.closed {
                        return Err(Error::semantic(
                            SemanticCode::ClosedJsjPiece,
                            format!("JSJ vertex {} is a closed hyperbolic manifold", i + 1),
                        ));
                    }
                    h.validate()?;
                }
            }
        }
        let n = self.vertices.len();
        let mut degree = vec![0u32; n];
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(Error::semantic(
                    SemanticCode::EdgeOutOfRange,
                    format!("edge {}-{} references a missing vertex", a + 1, b + 1),
                ));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if degree[i] != v.boundary_tori() {
                return Err(Error::semantic(
                    SemanticCode::BoundaryMismatch,
                    format!(
                        "JSJ vertex {} has {} boundary tori but {} incident edge ends",
                        i + 1,
                        v.boundary_tori(),
                        degree[i]
                    ),
                ));
            }
        }
        if !self.is_connected() {
            return Err(Error::semantic(
                SemanticCode::DisconnectedJsj,
                "the JSJ graph is not connected",
            ));
        }
        if self.is_klein_double() {
            return Err(Error::semantic(
                SemanticCode::ExcludedSolForm,
                "the double of the twisted I-bundle over the Klein bottle is entered as SolKleinDouble",
            ));
        }
        if self.is_anosov_torus_bundle() {
            return Err(Error::semantic(
                SemanticCode::ExcludedSolForm,
                "a torus bundle cut along a fibre is entered as SolTorusBundle[[a,b],[c,d]]",
            ));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn is_klein_double(&self) -> bool {
        self.vertices.len() == 2
            && self.edges.len() == 1
            && self.vertices.iter().all(PieceSpec::is_twisted_klein_bundle)
    }

    fn is_anosov_torus_bundle(&self) -> bool {
        self.vertices.len() == 1
            && self.edges == [(0, 0)]
            && self.vertices[0].is_thickened_torus()
    }
}

impl PrimeSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PrimeSpec::Spherical { group } => group.validate(),
            PrimeSpec::S2xE { .. } | PrimeSpec::SolKleinDouble => Ok(()),
            PrimeSpec::Seifert(s) => s.validate(),
            PrimeSpec::Hyperbolic(h) => h.validate(),
            PrimeSpec::Jsj(g) => g.validate(),
            PrimeSpec::SolTorusBundle { monodromy } => check_anosov(monodromy),
        }
    }

    /// The S3 prime (trivial fundamental group).
    pub fn is_sphere(&self) -> bool {
        matches!(self, PrimeSpec::Spherical { group } if group.is_trivial())
    }
}

/// Accepts `A ∈ GL_2(Z)` with `|tr A| > 2`.
pub fn check_anosov(m: &[[i64; 2]; 2]) -> Result<()> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let trace = m[0][0] + m[1][1];
    if det.abs() != 1 || trace.abs() <= 2 {
        return Err(Error::semantic(
            SemanticCode::NotAnosov,
            format!(
                "monodromy [[{},{}],[{},{}]] has det {det} and trace {trace}; a Sol torus bundle needs det ±1 and |trace| > 2",
                m[0][0], m[0][1], m[1][0], m[1][1]
            ),
        ));
    }
    Ok(())
}

impl ManifoldSpec {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::semantic(
                SemanticCode::InvalidJson,
                "a manifold needs at least one prime",
            ));
        }
        self.primes.iter().try_for_each(PrimeSpec::validate)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let m: ManifoldSpec = serde_json::from_str(src)
            .map_err(|e| Error::semantic(SemanticCode::InvalidJson, e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifold specs always serialize")
    }

    /// Primes with nontrivial fundamental group (S3 summands dropped).
    pub fn nontrivial_primes(&self) -> impl Iterator<Item = &PrimeSpec> {
        self.primes.iter().filter(|p| !p.is_sphere())
    }

    /// A scope tag for each prime, stable under permutation of the primes:
    /// the prime's DSL, suffixed `#k` when the same DSL occurs more than once.
    pub fn prime_scopes(&self) -> Vec<String> {
        let rendered: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        let mut seen: Vec<&str> = Vec::new();
        rendered
            .iter()
            .map(|r| {
                let total = rendered.iter().filter(|x| *x == r).count();
                seen.push(r);
                if total == 1 {
                    r.clone()
                } else {
                    let k = seen.iter().filter(|x| **x == r).count();
                    format!("{r}#{k}")
                }
            })
            .collect()
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" # "))
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSpec::Spherical { group } if group.is_trivial() => f.write_str("S3"),
            PrimeSpec::Spherical { group } => write!(f, "Spherical({group})"),
            PrimeSpec::S2xE { group } => write!(f, "S2xE({group})"),
            PrimeSpec::Seifert(s) => write!(f, "{s}"),
            PrimeSpec::Hyperbolic(h) => write!(f, "{h}"),
            PrimeSpec::Jsj(g) => write!(f, "{g}"),
            PrimeSpec::SolTorusBundle { monodromy: m } => write!(
                f,
                "SolTorusBundle[[{},{}],[{},{}]]",
                m[0][0], m[0][1], m[1][0], m[1][1]
            ),
            PrimeSpec::SolKleinDouble => f.write_str("SolKleinDouble"),
        }
    }
}

impl fmt::Display for LineGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineGroup::Z => "Z",
            LineGroup::Dinf => "Dinf",
        })
    }
}

impl fmt::Display for SeifertSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = if self.closed { "closed" } else { "bdry" };
        write!(f, "Seifert({},{end}", self.base)?;
        if let Some(form) = &self.form {
            write!(f, ",form={form}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for FlatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatForm::Z2xZ(phi) => write!(f, "Z2xZ({})", render_tag(phi)),
            FlatForm::KleinAmalgam(phi) => write!(f, "KleinAmalgam({})", render_tag(phi)),
        }
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cones: Vec<String> = self.cone_orders.iter().map(u32::to_string).collect();
        write!(
            f,
            "base(g={},{},cones=[{}],bdry={}{})",
            self.genus,
            if self.orientable { "or" } else { "nor" },
            cones.join(","),
            self.boundary_components,
            if self.bad { ",bad" } else { "" }
        )
    }
}

impl fmt::Display for HyperbolicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.closed {
            f.write_str("Hyperbolic(closed)")
        } else {
            write!(f, "Hyperbolic(cusps={})", self.cusp_count)
        }
    }
}

impl fmt::Display for PieceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceSpec::Seifert(s) => write!(f, "{s}"),
            PieceSpec::Hyperbolic(h) => write!(f, "{h}"),
        }
    }
}

impl fmt::Display for JsjGraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        write!(f, "JSJ{{{};{}", vs.join(","), es.join(","))?;
        if !self.minimal {
            f.write_str(";nonminimal")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for FiniteGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGroupSpec::Trivial => f.write_str("1"),
            FiniteGroupSpec::Cyclic(n) => write!(f, "Z/{n}"),
            FiniteGroupSpec::CentralExtension { base, cyclic_order } => {
                write!(f, "CE({base},{cyclic_order})")
            }
            FiniteGroupSpec::Named(tag) if tag == "I*" => f.write_str("I*"),
            FiniteGroupSpec::Named(tag) => f.write_str(&crate::lex::quote(tag)),
        }
    }
}

impl fmt::Display for PolyhedralBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolyhedralBase::Dihedral => "dihedral",
            PolyhedralBase::Tetrahedral => "tetrahedral",
            PolyhedralBase::Octahedral => "octahedral",
            PolyhedralBase::Icosahedral => "icosahedral",
        })
    }
}

/// Monodromy tags render bare when the DSL reads them back unchanged: only
/// tag-safe characters, balanced brackets, commas only inside brackets.
pub(crate) fn render_tag(tag: &str) -> String {
    let mut depth = 0i32;
    let mut safe = !tag.is_empty();
    for c in tag.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => safe = false,
            c if c.is_ascii_alphanumeric() || "_-,*'".contains(c) => {}
            _ => safe = false,
        }
        if depth < 0 {
            safe = false;
        }
    }
    if safe && depth == 0 {
        tag.to_string()
    } else {
        crate::lex::quote(tag)
    }
}
