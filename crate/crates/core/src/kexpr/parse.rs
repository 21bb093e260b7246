//! Reader for the text form printed by `Display`.
//!
//! `+` and `*` are accepted for `⊕` and `·`, `inf` for `∞`.

use super::{Atom, Expr, LesNode, LesRow, Multiplicity, NilBase};
use crate::error::Result;
use crate::fgab::FGAb;
use crate::lex::Cursor;
use crate::manifold::parse_finite_group;

pub(crate) fn parse_expr(src: &str) -> Result<Expr> {
    let mut cur = Cursor::new(src);
    let e = sum(&mut cur)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

fn sum(cur: &mut Cursor) -> Result<Expr> {
    let mut items = vec![term(cur)?];
    while cur.eat("⊕") || cur.eat("+") {
        items.push(term(cur)?);
    }
    Ok(if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Expr::Sum(items)
    })
}

fn term(cur: &mut Cursor) -> Result<Expr> {
    cur.skip_ws();
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        let k = u64::from(cur.uint()?);
        if cur.eat("·") || cur.eat("*") {
            return Ok(Expr::times(k, factor(cur)?));
        }
        if k == 0 {
            return Ok(Expr::Zero);
        }
        return Err(cur.error("expected `·` after a multiplicity"));
    }
    factor(cur)
}

fn degree(cur: &mut Cursor) -> Result<i32> {
    let n = cur.int()?;
    i32::try_from(n).map_err(|_| cur.error("degree out of range"))
}

fn factor(cur: &mut Cursor) -> Result<Expr> {
    cur.skip_ws();
    if cur.eat("NK_") {
        let degree = degree(cur)?;
        cur.expect("(R")?;
        if cur.eat(")") {
            return Ok(Expr::nk(degree));
        }
        cur.expect("[")?;
        let base = if cur.eat("Z^2") {
            NilBase::Z2
        } else if cur.eat("Z") {
            NilBase::Z
        } else if cur.starts_with("\"") {
            NilBase::Symbolic(cur.quoted()?)
        } else {
            return Err(cur.error("expected a Nil base: Z, Z^2 or a quoted tag"));
        };
        cur.expect("]")?;
        cur.expect(";")?;
        let monodromy = crate::manifold::parse_tag(cur)?;
        cur.expect(")")?;
        Ok(Expr::Atom(Atom::TwistedNil {
            degree,
            base,
            monodromy,
        }))
    } else if cur.eat("K~_") {
        let degree = degree(cur)?;
        cur.expect("(R[")?;
        let group = parse_finite_group(cur)?;
        cur.expect("])")?;
        Ok(Expr::Atom(Atom::FiniteKReduced0 { degree, group }))
    } else if cur.eat("K_") {
        let degree = degree(cur)?;
        cur.expect("(R")?;
        if cur.eat(")") {
            return Ok(Expr::k(degree));
        }
        cur.expect("[")?;
        let group = parse_finite_group(cur)?;
        cur.expect("])")?;
        Ok(Expr::Atom(Atom::FiniteKNeg { degree, group }))
    } else if cur.eat("Wh_") {
        let degree = degree(cur)?;
        cur.expect("(")?;
        let group = parse_finite_group(cur)?;
        cur.expect(")")?;
        Ok(Expr::Atom(Atom::FiniteWh { degree, group }))
    } else if cur.eat("Z/") {
        let d = u64::from(cur.uint()?);
        Ok(Expr::Group(FGAb::new(0, [d])?))
    } else if cur.eat("Z") {
        let r = if cur.eat("^") { cur.uint()? } else { 1 };
        Ok(Expr::Group(FGAb::free(r)))
    } else if cur.eat("(") {
        let inner = sum(cur)?;
        cur.expect(")")?;
        if cur.eat("^") {
            let k = u64::from(cur.uint()?);
            return Ok(Expr::times(k, inner));
        }
        Ok(inner)
    } else if cur.eat("⊕_{") {
        let m = if cur.eat("j=0..∞") || cur.eat("j=0..inf") {
            Multiplicity::CountablyInfinite
        } else if cur.starts_with("\"") {
            Multiplicity::Unknown(cur.quoted()?)
        } else {
            return Err(cur.error("expected `j=0..∞` or a quoted index-set label"));
        };
        cur.expect("}")?;
        cur.expect("(")?;
        let inner = sum(cur)?;
        cur.expect(")")?;
        Ok(Expr::scaled(m, inner))
    } else if cur.eat("les(") {
        les(cur)
    } else if cur.eat("opaque(") {
        cur.skip_ws();
        let label = cur.quoted()?;
        cur.expect(",")?;
        let degree = degree(cur)?;
        cur.expect(")")?;
        Ok(Expr::opaque(label, degree))
    } else {
        Err(cur.error("expected an expression"))
    }
}

fn les(cur: &mut Cursor) -> Result<Expr> {
    cur.skip_ws();
    let id = cur.quoted()?;
    cur.expect(",")?;
    cur.skip_ws();
    let unknown = cur.quoted()?;
    cur.expect(",")?;
    let target = degree(cur)?;
    let mut rows = Vec::new();
    while cur.eat(",") {
        cur.expect("[")?;
        let d = degree(cur)?;
        cur.expect(":")?;
        let left = sum(cur)?;
        cur.expect("|")?;
        let right = sum(cur)?;
        cur.expect("]")?;
        rows.push(LesRow {
            degree: d,
            left,
            right,
        });
    }
    cur.expect(")")?;
    Ok(Expr::les(LesNode {
        id,
        unknown,
        target,
        rows,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kexpr::normalize;
    use crate::manifold::FiniteGroupSpec;

    fn round_trip(e: &Expr) {
        let n = normalize(e);
        let text = n.to_string();
        assert_eq!(Expr::parse(&text).unwrap(), n, "text: {text}");
    }

    #[test]
    fn atoms_round_trip() {
        for e in [
            Expr::nk(-3),
            Expr::k(2),
            Expr::twisted_nil(1, NilBase::Z2, "[[2,1],[1,1]]"),
            Expr::twisted_nil(1, NilBase::Symbolic("Z^2 x".into()), "a,b"),
            Expr::Atom(Atom::FiniteWh {
                degree: 1,
                group: FiniteGroupSpec::binary_icosahedral(),
            }),
            Expr::Atom(Atom::FiniteKReduced0 {
                degree: 0,
                group: FiniteGroupSpec::Cyclic(6),
            }),
            Expr::Atom(Atom::FiniteKNeg {
                degree: -1,
                group: FiniteGroupSpec::Named("Q8".into()),
            }),
        ] {
            round_trip(&e);
        }
    }

    #[test]
    fn compound_round_trip() {
        let e = Expr::sum([
            Expr::Group(FGAb::new(2, [2, 2, 4]).unwrap()),
            Expr::countable(Expr::sum([Expr::times(2, Expr::nk(1)), Expr::nk(0)])),
            Expr::indexed("jsj/H1@x", Expr::times(2, Expr::nk(1))),
            Expr::opaque("left term", 1),
            Expr::les(LesNode::around("fp", "X", 1, Expr::nk, |d| {
                Expr::indexed("h", Expr::nk(d - 1))
            })),
        ]);
        round_trip(&e);
    }

    #[test]
    fn ascii_aliases() {
        assert_eq!(
            Expr::parse("2*NK_1(R) + NK_1(R) + 0").unwrap(),
            Expr::times(3, Expr::nk(1))
        );
        assert_eq!(
            Expr::parse("⊕_{j=0..inf}(NK_0(R))").unwrap(),
            Expr::countable(Expr::nk(0))
        );
        assert_eq!(
            Expr::parse("(Z/2)^3 ⊕ Z^2").unwrap(),
            Expr::Group(FGAb::new(2, [2, 2, 2]).unwrap())
        );
    }

    #[test]
    fn errors_carry_location() {
        let err = Expr::parse("NK_1(R) ⊕ NQ").unwrap_err();
        assert!(matches!(err, crate::Error::Syntax { line: 1, column: 11, .. }), "{err}");
    }
}
