//! Raw (ring-independent) relative terms.
//!
//! Every builder returns the expression over a generic ring `R`; ring
//! profiles, annotations and LES collapse are applied afterwards by the
//! pipeline. All builders are degree-equivariant: the result at `n − 1` is
//! the result at `n` shifted by `−1`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{
    analyze, monodromy_tag, seifert_flat_form, SolvableForm, VcKind, SOL_KLEIN_GLUING,
};
use crate::kexpr::{normalize, Atom, Expr, LesNode, LesRow, NilBase};
use crate::manifold::{
    HyperbolicSpec, JsjGraphSpec, LineGroup, ManifoldSpec, OrbifoldGeometry, PieceSpec, PrimeSpec,
    SeifertSpec,
};
use crate::GroupProfile;

/// Provenance and caveats collected while building one degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub provenance: BTreeSet<String>,
    pub caveats: BTreeSet<String>,
}

impl Trace {
    fn step(&mut self, s: impl Into<String>) {
        self.provenance.insert(s.into());
    }

    fn caveat(&mut self, s: impl Into<String>) {
        self.caveats.insert(s.into());
    }
}

fn nk2(n: i32) -> Expr {
    Expr::times(2, Expr::nk(n))
}

/// Three padded rows around `n`; see [`LesNode`].
fn les(
    id: String,
    unknown: &str,
    n: i32,
    mut left: impl FnMut(i32) -> Result<Expr>,
    mut right: impl FnMut(i32) -> Result<Expr>,
) -> Result<Expr> {
    let rows = [n + 1, n, n - 1]
        .into_iter()
        .map(|d| {
            Ok(LesRow {
                degree: d,
                left: left(d)?,
                right: right(d)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Expr::les(LesNode {
        id,
        unknown: unknown.into(),
        target: n,
        rows,
    }))
}

/// `K_n(R[Z]) ≅ K_n(R) ⊕ K_{n−1}(R) ⊕ 2·NK_n(R)`.
pub fn bass_heller_swan(n: i32) -> Expr {
    Expr::sum([Expr::k(n), Expr::k(n - 1), nk2(n)])
}

/// `K_n(R[Z^2])` from two applications of [`bass_heller_swan`]: the
/// `K`-part of `K_n(R[Z]) ⊕ K_{n−1}(R[Z])`, plus the Nil part of the same
/// sum repeated over the countable family contributed by `2·NK_n(R[Z])`.
pub fn k_of_z2_group_ring(n: i32) -> Expr {
    let once = normalize(&Expr::sum([bass_heller_swan(n), bass_heller_swan(n - 1)]));
    let mut k_part = Vec::new();
    let mut nil_part = Vec::new();
    let summands = match once {
        Expr::Sum(xs) => xs,
        other => vec![other],
    };
    for s in summands {
        let mut is_k = true;
        s.visit_atoms(&mut |a| is_k &= matches!(a, Atom::K { .. }));
        if is_k {
            k_part.push(s);
        } else {
            nil_part.push(s);
        }
    }
    normalize(&Expr::sum(
        k_part
            .into_iter()
            .chain([Expr::countable(Expr::Sum(nil_part))]),
    ))
}

/// `Wh_n(Z^2) ≅ ⊕_{j≥0} (2·NK_n(R) ⊕ 2·NK_{n−1}(R))`.
pub fn wh_z2_formula(n: i32) -> Expr {
    Expr::countable(Expr::sum([nk2(n), nk2(n - 1)]))
}

/// `Wh_n(K) ≅ ⊕_{j≥0} (NK_n(R) ⊕ NK_{n−1}(R))` for the Klein bottle group.
pub fn wh_klein_formula(n: i32) -> Expr {
    Expr::countable(Expr::sum([Expr::nk(n), Expr::nk(n - 1)]))
}

pub fn solvable_relative(form: &SolvableForm, n: i32, trace: &mut Trace) -> Expr {
    match form {
        SolvableForm::Z => {
            trace.step("infinite cyclic group: Wh_n(Z) = 2·NK_n(R)");
            nk2(n)
        }
        SolvableForm::Z2 => {
            trace.step("free abelian group of rank 2: countable Nil formula");
            wh_z2_formula(n)
        }
        SolvableForm::KleinBottle => {
            trace.step("Klein bottle group: countable Nil formula");
            wh_klein_formula(n)
        }
        SolvableForm::Z2SemidirectZ(phi) => {
            trace.step(format!("semidirect product Z^2 ⋊ Z with monodromy {phi}"));
            Expr::sum([
                Expr::countable(Expr::sum([
                    nk2(n),
                    Expr::times(4, Expr::nk(n - 1)),
                    nk2(n - 2),
                ])),
                Expr::times(2, Expr::twisted_nil(n, NilBase::Z2, phi.clone())),
            ])
        }
        SolvableForm::KleinAmalgam(phi) => {
            trace.step(format!(
                "amalgam of two Klein bottle groups over Z^2 (gluing {phi}): Mayer-Vietoris sequence"
            ));
            let node = les(
                format!("klein-amalgam@{phi}"),
                "H(E_F, E)",
                n,
                |d| Ok(Expr::times(2, wh_klein_formula(d))),
                |d| Ok(wh_z2_formula(d - 1)),
            )
            .expect("infallible row builders");
            Expr::sum([node, Expr::twisted_nil(n, NilBase::Z2, phi.clone())])
        }
    }
}

/// Geodesic classes contribute `2·NK_n`, parabolic classes (cusped case only)
/// contribute `2·NK_n ⊕ 2·NK_{n−1}`.
pub fn hyperbolic_relative(h: &HyperbolicSpec, scope: &str, n: i32, trace: &mut Trace) -> Expr {
    trace.step("hyperbolic manifold: sum over maximal cyclic and parabolic classes");
    let geodesic = Expr::indexed(format!("hyperbolic/geodesic@{scope}"), nk2(n));
    if h.closed {
        return geodesic;
    }
    Expr::sum([
        geodesic,
        Expr::indexed(
            format!("hyperbolic/parabolic@{scope}"),
            Expr::sum([nk2(n), nk2(n - 1)]),
        ),
    ])
}

pub fn seifert_relative(s: &SeifertSpec, scope: &str, n: i32, trace: &mut Trace) -> Result<Expr> {
    match s.geometry() {
        OrbifoldGeometry::Spherical | OrbifoldGeometry::Bad if s.closed => {
            trace.step("Seifert manifold over a spherical or bad base: finite fundamental group");
            trace.caveat(format!(
                "{scope} is treated as spherically modeled (finite fundamental group); enter S2xE(Z) or S2xE(Dinf) for the S2 x E case"
            ));
            Ok(Expr::Zero)
        }
        OrbifoldGeometry::Spherical | OrbifoldGeometry::Bad => {
            trace.step("Seifert manifold with boundary over a spherical base: infinite cyclic group");
            Ok(nk2(n))
        }
        OrbifoldGeometry::Flat => match seifert_flat_form(s) {
            Some(form) => Ok(solvable_relative(&form, n, trace)),
            None => Err(Error::MissingAnnotation(format!(
                "closed Seifert manifold over a flat base needs `form=Z2xZ(φ)` or `form=KleinAmalgam(φ)`: {scope}"
            ))),
        },
        OrbifoldGeometry::HyperbolicBase => {
            trace.step("Seifert manifold over a hyperbolic base: exact sequence of the fiber family");
            trace.caveat(format!(
                "opaque term of {scope}: H_n(E_F'Γ, EΓ) is the abutment of a spectral sequence over the base orbifold with E^2 = H_p(B; {{Wh_q(Z)}}), Wh_q(Z) = 2·NK_q(R); it is not evaluated"
            ));
            trace.caveat(format!(
                "Klein-bottle-type preimages of {scope} have no closed description; annotate `seifert/A-K@{scope}` and `seifert/A-Z2@{scope}` to split the index set"
            ));
            les(
                format!("seifert-hyperbolic-base@{scope}"),
                "vc-rel",
                n,
                |d| Ok(Expr::opaque(format!("H(E_F', E) of {scope}"), d)),
                |d| {
                    Ok(Expr::sum([
                        Expr::indexed(format!("seifert/A-Z2@{scope}"), wh_z2_formula(d)),
                        Expr::indexed(
                            format!("seifert/A-K@{scope}"),
                            Expr::opaque(format!("Klein-type term of {scope}"), d),
                        ),
                    ]))
                },
            )
        }
    }
}

pub fn jsj_relative(g: &JsjGraphSpec, scope: &str, n: i32, trace: &mut Trace) -> Result<Expr> {
    trace.step("JSJ decomposition: exact sequence over the vertex family, edge sequence for its relative term");
    if !g.minimal {
        trace.caveat(format!(
            "{scope} is marked non-minimal; the exact sequences assume the minimal JSJ decomposition"
        ));
    }
    let edges = g.edges.len() as u64;
    let vertex_sum = |d: i32, trace: &mut Trace| -> Result<Expr> {
        g.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let vscope = format!("{scope}/v{}", i + 1);
                match v {
                    PieceSpec::Seifert(s) => seifert_relative(s, &vscope, d, trace),
                    PieceSpec::Hyperbolic(h) => Ok(hyperbolic_relative(h, &vscope, d, trace)),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Expr::Sum)
    };
    let inner = |d: i32, trace: &mut Trace| -> Result<Expr> {
        let lefts = [d + 1, d, d - 1]
            .into_iter()
            .map(|e| vertex_sum(e, trace))
            .collect::<Result<Vec<_>>>()?;
        les(
            format!("jsj-edges@{scope}"),
            "H(E_W, E_fin)",
            d,
            |e| Ok(lefts[(d + 1 - e) as usize].clone()),
            |e| Ok(Expr::times(edges, wh_z2_formula(e - 1))),
        )
    };
    let lefts = [n + 1, n, n - 1]
        .into_iter()
        .map(|d| inner(d, trace))
        .collect::<Result<Vec<_>>>()?;
    les(
        format!("jsj@{scope}"),
        "vc-rel",
        n,
        |d| Ok(lefts[(n + 1 - d) as usize].clone()),
        |d| Ok(Expr::indexed(format!("jsj/H1@{scope}"), nk2(d))),
    )
}

pub fn relative_vc_single_prime(
    p: &PrimeSpec,
    scope: &str,
    n: i32,
    trace: &mut Trace,
) -> Result<Expr> {
    match p {
        PrimeSpec::Spherical { .. } => {
            trace.step("finite fundamental group: no virtually cyclic relative term");
            Ok(Expr::Zero)
        }
        PrimeSpec::S2xE { group: LineGroup::Z } => Ok(solvable_relative(&SolvableForm::Z, n, trace)),
        PrimeSpec::S2xE {
            group: LineGroup::Dinf,
        } => {
            trace.step("infinite dihedral group: relative term NK_n(R)");
            Ok(Expr::nk(n))
        }
        PrimeSpec::Seifert(s) => seifert_relative(s, scope, n, trace),
        PrimeSpec::Hyperbolic(h) => Ok(hyperbolic_relative(h, scope, n, trace)),
        PrimeSpec::Jsj(g) => jsj_relative(g, scope, n, trace),
        PrimeSpec::SolTorusBundle { monodromy } => Ok(solvable_relative(
            &SolvableForm::Z2SemidirectZ(monodromy_tag(monodromy)),
            n,
            trace,
        )),
        PrimeSpec::SolKleinDouble => Ok(solvable_relative(
            &SolvableForm::KleinAmalgam(SOL_KLEIN_GLUING.into()),
            n,
            trace,
        )),
    }
}

/// `S3` summands are dropped first. With two or more remaining factors the
/// term sits in the free-product exact sequence between the factors' terms
/// and the Nil flank over the new virtually cyclic classes.
pub fn relative_vc_prime_decomp(m: &ManifoldSpec, n: i32, trace: &mut Trace) -> Result<Expr> {
    let scopes = m.prime_scopes();
    let factors: Vec<(&PrimeSpec, &str)> = m
        .primes
        .iter()
        .zip(scopes.iter())
        .filter(|(p, _)| !p.is_sphere())
        .map(|(p, s)| (p, s.as_str()))
        .collect();
    match factors.as_slice() {
        [] => {
            trace.step("trivial group: every relative term vanishes");
            Ok(Expr::Zero)
        }
        [(p, scope)] => relative_vc_single_prime(p, scope, n, trace),
        _ => {
            trace.step("free product of the prime factors: exact sequence with Nil flank");
            let dinf = analyze(m).vc_kinds_present.contains(&VcKind::Dinf);
            let lefts = [n + 1, n, n - 1]
                .into_iter()
                .map(|d| {
                    factors
                        .iter()
                        .map(|(p, scope)| relative_vc_single_prime(p, scope, d, trace))
                        .collect::<Result<Vec<_>>>()
                        .map(Expr::Sum)
                })
                .collect::<Result<Vec<_>>>()?;
            les(
                "free-product".into(),
                "vc-rel",
                n,
                |d| Ok(lefts[(n + 1 - d) as usize].clone()),
                |d| {
                    let h1 = Expr::indexed("prime/H1", nk2(d));
                    Ok(if dinf {
                        Expr::sum([h1, Expr::indexed("prime/H2", Expr::nk(d))])
                    } else {
                        h1
                    })
                },
            )
        }
    }
}

/// `⊕_j Wh_n(F_j)` over the nontrivial finite fundamental groups of the
/// prime factors.
pub fn relative_finite_term(profile: &GroupProfile, n: i32, trace: &mut Trace) -> Expr {
    if profile.spherical_factor_groups.is_empty() {
        return Expr::Zero;
    }
    trace.step("finite part: sum of Whitehead groups over the finite prime factors");
    Expr::Sum(
        profile
            .spherical_factor_groups
            .iter()
            .map(|g| {
                Expr::Atom(Atom::FiniteWh {
                    degree: n,
                    group: g.clone(),
                })
            })
            .collect(),
    )
}
