//! Text DSL for [`ManifoldSpec`].
//!
//! ```text
//! manifold := prime ('#' prime)*
//! prime    := 'S3' | 'Spherical(' fgroup ')' | 'S2xE(' ('Z'|'Dinf') ')'
//!           | 'Seifert(' orbsig ',' ('closed'|'bdry') [',form=' form] ')'
//!           | 'Hyperbolic(' ('closed' | 'cusps=' int) ')'
//!           | 'JSJ{' piece (',' piece)* ';' edge (',' edge)* [';nonminimal'] '}'
//!           | 'SolTorusBundle[[' int ',' int '],[' int ',' int ']]'
//!           | 'SolKleinDouble'
//! orbsig   := 'base(g=' int ',' ('or'|'nor') ',cones=[' int-list '],bdry=' int [',bad'] ')'
//! fgroup   := '1' | 'Z/' int | 'CE(' polyhedral ',' int ')' | 'I*' | quoted-tag
//! form     := 'Z2xZ(' tag ')' | 'KleinAmalgam(' tag ')'
//! piece    := 'Seifert(' orbsig ',bdry)' | 'Hyperbolic(cusps=' int ')'
//! edge     := int '-' int          (1-based vertex indices)
//! ```
//!
//! Whitespace between tokens is ignored. The non-orientable genus counts
//! cross-caps.

use super::{
    FiniteGroupSpec, FlatForm, HyperbolicSpec, JsjGraphSpec, LineGroup, ManifoldSpec,
    OrbifoldSignature, PieceSpec, PolyhedralBase, PrimeSpec, SeifertSpec,
};
use crate::error::{Error, Result, SemanticCode};
use crate::lex::Cursor;

/// Parses and validates a manifold description.
pub fn parse_manifold(source: &str) -> Result<ManifoldSpec> {
    let mut cur = Cursor::new(source);
    let mut primes = vec![prime(&mut cur)?];
    while cur.eat("#") {
        primes.push(prime(&mut cur)?);
    }
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("expected ` # ` or end of input"));
    }
    let m = ManifoldSpec { primes };
    m.validate()?;
    Ok(m)
}

fn prime(cur: &mut Cursor) -> Result<PrimeSpec> {
    cur.skip_ws();
    if cur.eat("Spherical(") {
        let group = finite_group(cur)?;
        cur.expect(")")?;
        Ok(PrimeSpec::Spherical { group })
    } else if cur.eat("S2xE(") {
        let group = if cur.eat("Dinf") {
            LineGroup::Dinf
        } else if cur.eat("Z") {
            LineGroup::Z
        } else {
            return Err(cur.error("expected `Z` or `Dinf`"));
        };
        cur.expect(")")?;
        Ok(PrimeSpec::S2xE { group })
    } else if cur.eat("S3") {
        Ok(PrimeSpec::Spherical {
            group: FiniteGroupSpec::Trivial,
        })
    } else if cur.eat("Seifert(") {
        Ok(PrimeSpec::Seifert(seifert_body(cur)?))
    } else if cur.eat("Hyperbolic(") {
        Ok(PrimeSpec::Hyperbolic(hyperbolic_body(cur)?))
    } else if cur.eat("JSJ{") {
        Ok(PrimeSpec::Jsj(jsj_body(cur)?))
    } else if cur.eat("SolTorusBundle") {
        cur.expect("[")?;
        cur.expect("[")?;
        let a = cur.int()?;
        cur.expect(",")?;
        let b = cur.int()?;
        cur.expect("]")?;
        cur.expect(",")?;
        cur.expect("[")?;
        let c = cur.int()?;
        cur.expect(",")?;
        let d = cur.int()?;
        cur.expect("]")?;
        cur.expect("]")?;
        Ok(PrimeSpec::SolTorusBundle {
            monodromy: [[a, b], [c, d]],
        })
    } else if cur.eat("SolKleinDouble") {
        Ok(PrimeSpec::SolKleinDouble)
    } else {
        Err(cur.error(
            "expected a prime: S3, Spherical(..), S2xE(..), Seifert(..), Hyperbolic(..), JSJ{..}, SolTorusBundle[[..]] or SolKleinDouble",
        ))
    }
}

pub(crate) fn parse_finite_group(cur: &mut Cursor) -> Result<FiniteGroupSpec> {
    finite_group(cur)
}

fn finite_group(cur: &mut Cursor) -> Result<FiniteGroupSpec> {
    cur.skip_ws();
    if cur.eat("I*") {
        Ok(FiniteGroupSpec::binary_icosahedral())
    } else if cur.eat("Z/") {
        Ok(FiniteGroupSpec::Cyclic(cur.uint()?))
    } else if cur.eat("CE(") {
        let base = if cur.eat("dihedral") {
            PolyhedralBase::Dihedral
        } else if cur.eat("tetrahedral") {
            PolyhedralBase::Tetrahedral
        } else if cur.eat("octahedral") {
            PolyhedralBase::Octahedral
        } else if cur.eat("icosahedral") {
            PolyhedralBase::Icosahedral
        } else {
            return Err(cur.error("expected dihedral, tetrahedral, octahedral or icosahedral"));
        };
        cur.expect(",")?;
        let cyclic_order = cur.uint()?;
        cur.expect(")")?;
        Ok(FiniteGroupSpec::CentralExtension { base, cyclic_order })
    } else if cur.starts_with("\"") {
        Ok(FiniteGroupSpec::Named(cur.quoted()?))
    } else if cur.eat("1") {
        Ok(FiniteGroupSpec::Trivial)
    } else {
        Err(cur.error("expected a finite group: 1, Z/n, CE(base,n), I* or a quoted name"))
    }
}

fn orbifold_signature(cur: &mut Cursor) -> Result<OrbifoldSignature> {
    cur.expect("base(")?;
    cur.expect("g=")?;
    let genus = cur.uint()?;
    cur.expect(",")?;
    let orientable = if cur.eat("nor") {
        false
    } else if cur.eat("or") {
        true
    } else {
        return Err(cur.error("expected `or` or `nor`"));
    };
    cur.expect(",")?;
    cur.expect("cones=[")?;
    let mut cone_orders = Vec::new();
    if !cur.eat("]") {
        loop {
            cone_orders.push(cur.uint()?);
            if cur.eat("]") {
                break;
            }
            cur.expect(",")?;
        }
    }
    cur.expect(",")?;
    cur.expect("bdry=")?;
    let boundary_components = cur.uint()?;
    let bad = if cur.eat(",") {
        cur.expect("bad")?;
        true
    } else {
        false
    };
    cur.expect(")")?;
    Ok(OrbifoldSignature {
        genus,
        orientable,
        cone_orders,
        boundary_components,
        bad,
    })
}

fn seifert_body(cur: &mut Cursor) -> Result<SeifertSpec> {
    let base = orbifold_signature(cur)?;
    cur.expect(",")?;
    let closed = if cur.eat("closed") {
        true
    } else if cur.eat("bdry") {
        false
    } else {
        return Err(cur.error("expected `closed` or `bdry`"));
    };
    let form = if cur.eat(",") {
        cur.expect("form=")?;
        Some(flat_form(cur)?)
    } else {
        None
    };
    cur.expect(")")?;
    Ok(SeifertSpec { base, closed, form })
}

fn flat_form(cur: &mut Cursor) -> Result<FlatForm> {
    let ctor: fn(String) -> FlatForm = if cur.eat("Z2xZ(") {
        FlatForm::Z2xZ
    } else if cur.eat("KleinAmalgam(") {
        FlatForm::KleinAmalgam
    } else {
        return Err(cur.error("expected Z2xZ(..) or KleinAmalgam(..)"));
    };
    let tag = tag(cur)?;
    cur.expect(")")?;
    Ok(ctor(tag))
}

pub(crate) fn tag(cur: &mut Cursor) -> Result<String> {
    cur.skip_ws();
    if cur.starts_with("\"") {
        cur.quoted()
    } else {
        Ok(cur.bare_token()?.to_string())
    }
}

fn hyperbolic_body(cur: &mut Cursor) -> Result<HyperbolicSpec> {
    let spec = if cur.eat("closed") {
        HyperbolicSpec::closed()
    } else if cur.eat("cusps=") {
        HyperbolicSpec::cusped(cur.uint()?)
    } else {
        return Err(cur.error("expected `closed` or `cusps=<n>`"));
    };
    cur.expect(")")?;
    Ok(spec)
}

fn jsj_body(cur: &mut Cursor) -> Result<JsjGraphSpec> {
    let mut vertices = vec![piece(cur)?];
    while cur.eat(",") {
        vertices.push(piece(cur)?);
    }
    cur.expect(";")?;
    let mut edges = vec![edge(cur)?];
    while cur.eat(",") {
        edges.push(edge(cur)?);
    }
    let minimal = if cur.eat(";") {
        if cur.eat("nonminimal") {
            false
        } else if cur.eat("minimal") {
            true
        } else {
            return Err(cur.error("expected `minimal` or `nonminimal`"));
        }
    } else {
        true
    };
    cur.expect("}")?;
    Ok(JsjGraphSpec {
        vertices,
        edges,
        minimal,
    })
}

fn piece(cur: &mut Cursor) -> Result<PieceSpec> {
    cur.skip_ws();
    if cur.eat("Seifert(") {
        Ok(PieceSpec::Seifert(seifert_body(cur)?))
    } else if cur.eat("Hyperbolic(") {
        Ok(PieceSpec::Hyperbolic(hyperbolic_body(cur)?))
    } else {
        Err(cur.error("expected a JSJ piece: Seifert(..,bdry) or Hyperbolic(cusps=n)"))
    }
}

fn edge(cur: &mut Cursor) -> Result<(usize, usize)> {
    let a = cur.uint()?;
    cur.expect("-")?;
    let b = cur.uint()?;
    if a == 0 || b == 0 {
        return Err(Error::semantic(
            SemanticCode::EdgeOutOfRange,
            "JSJ vertices are numbered from 1",
        ));
    }
    Ok((a as usize - 1, b as usize - 1))
}
