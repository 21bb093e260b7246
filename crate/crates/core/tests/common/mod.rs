#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use wh3k_core::kexpr::NilBase;
use wh3k_core::{parse_manifold, Atom, Expr, FiniteGroupSpec, LesNode, LesRow, ManifoldSpec, Multiplicity, FGAb};

/// Prime descriptions covering every handler branch.
pub const PRIMES: &[&str] = &[
    "S3",
    "Spherical(I*)",
    "Spherical(Z/2)",
    "Spherical(Z/5)",
    "Spherical(CE(tetrahedral,2))",
    "S2xE(Z)",
    "S2xE(Dinf)",
    "Hyperbolic(closed)",
    "Hyperbolic(cusps=2)",
    "Seifert(base(g=0,or,cones=[],bdry=2),bdry)",
    "Seifert(base(g=1,nor,cones=[],bdry=1),bdry)",
    "Seifert(base(g=0,or,cones=[2,3,5],bdry=0),closed)",
    "Seifert(base(g=0,or,cones=[3],bdry=1),bdry)",
    "Seifert(base(g=2,or,cones=[],bdry=0),closed)",
    "Seifert(base(g=1,or,cones=[],bdry=0),closed,form=Z2xZ(\"[[1,0],[0,1]]\"))",
    "Seifert(base(g=2,nor,cones=[],bdry=0),closed,form=KleinAmalgam(k))",
    "SolTorusBundle[[2,1],[1,1]]",
    "SolKleinDouble",
    "JSJ{Hyperbolic(cusps=1),Hyperbolic(cusps=1);1-2}",
    "JSJ{Seifert(base(g=0,or,cones=[2,3],bdry=1),bdry),Hyperbolic(cusps=1);1-2}",
];

pub fn manifold(dsl: &str) -> ManifoldSpec {
    parse_manifold(dsl).unwrap_or_else(|e| panic!("{dsl}: {e}"))
}

pub fn arb_manifold(max_primes: usize) -> impl Strategy<Value = ManifoldSpec> {
    prop::collection::vec(prop::sample::select(PRIMES), 1..=max_primes)
        .prop_map(|ps| manifold(&ps.join(" # ")))
}

pub fn arb_finite_group() -> impl Strategy<Value = FiniteGroupSpec> {
    prop_oneof![
        Just(FiniteGroupSpec::Trivial),
        (2u32..8).prop_map(FiniteGroupSpec::Cyclic),
        Just(FiniteGroupSpec::binary_icosahedral()),
        Just(FiniteGroupSpec::Named("Q8".into())),
    ]
}

pub fn arb_atom() -> impl Strategy<Value = Atom> {
    let deg = -3i32..3;
    prop_oneof![
        deg.clone().prop_map(|degree| Atom::K { degree }),
        deg.clone().prop_map(|degree| Atom::NK { degree }),
        (
            deg.clone(),
            prop_oneof![
                Just(NilBase::Z),
                Just(NilBase::Z2),
                Just(NilBase::Symbolic("N".into()))
            ],
            prop::sample::select(vec!["phi", "[[2,1],[1,1]]"]),
        )
            .prop_map(|(degree, base, m)| Atom::TwistedNil {
                degree,
                base,
                monodromy: m.into()
            }),
        (deg.clone(), arb_finite_group()).prop_map(|(degree, group)| Atom::FiniteWh { degree, group }),
        (deg.clone(), arb_finite_group())
            .prop_map(|(degree, group)| Atom::FiniteKReduced0 { degree, group }),
        (deg, arb_finite_group()).prop_map(|(degree, group)| Atom::FiniteKNeg { degree, group }),
    ]
}

pub fn arb_fgab() -> impl Strategy<Value = FGAb> {
    (0u32..3, prop::collection::vec(2u64..=32, 0..3))
        .prop_map(|(r, t)| FGAb::new(r, t).expect("orders ≥ 2"))
}

/// Trees with only finite multiplicities.
pub fn arb_finite_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::Zero),
        6 => arb_atom().prop_map(Expr::Atom),
        1 => arb_fgab().prop_map(Expr::Group),
    ];
    leaf.prop_recursive(6, 64, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Expr::Sum),
            (0u64..4, inner).prop_map(|(k, e)| Expr::Scaled(Multiplicity::Finite(k), Box::new(e))),
        ]
    })
}

fn les_of(rows: Vec<(Expr, Expr)>) -> Expr {
    let n = rows.len() as i32;
    Expr::les(LesNode {
        id: "t".into(),
        unknown: "X".into(),
        target: n / 2,
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(i, (left, right))| LesRow {
                degree: n - 1 - i as i32,
                left,
                right,
            })
            .collect(),
    })
}

/// Trees using every node kind.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::Zero),
        6 => arb_atom().prop_map(Expr::Atom),
        1 => arb_fgab().prop_map(Expr::Group),
        1 => (prop::sample::select(vec!["A", "B"]), -2i32..2)
            .prop_map(|(l, d)| Expr::opaque(l, d)),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        let mult = prop_oneof![
            (0u64..4).prop_map(Multiplicity::Finite),
            Just(Multiplicity::CountablyInfinite),
            prop::sample::select(vec!["a", "b"]).prop_map(|l| Multiplicity::Unknown(l.into())),
        ];
        prop_oneof![
            3 => prop::collection::vec(inner.clone(), 0..4).prop_map(Expr::Sum),
            3 => (mult, inner.clone()).prop_map(|(m, e)| Expr::Scaled(m, Box::new(e))),
            1 => prop::collection::vec((inner.clone(), inner), 1..4).prop_map(les_of),
        ]
    })
}

/// Independent oracle: expand every finite multiplicity into a multiset.
/// Returns `None` for trees containing other node kinds.
pub fn expand(e: &Expr) -> Option<(FGAb, BTreeMap<Atom, u64>)> {
    let mut group = FGAb::zero();
    let mut atoms = BTreeMap::new();
    fn go(e: &Expr, k: u64, g: &mut FGAb, atoms: &mut BTreeMap<Atom, u64>) -> Option<()> {
        match e {
            Expr::Zero => {}
            Expr::Atom(a) => *atoms.entry(a.clone()).or_insert(0) += k,
            Expr::Group(h) => {
                for _ in 0..k {
                    *g = g.direct_sum(h);
                }
            }
            Expr::Sum(xs) => {
                for x in xs {
                    go(x, k, g, atoms)?;
                }
            }
            Expr::Scaled(Multiplicity::Finite(m), x) => go(x, k * m, g, atoms)?,
            _ => return None,
        }
        Some(())
    }
    go(e, 1, &mut group, &mut atoms)?;
    atoms.retain(|_, k| *k > 0);
    Some((group, atoms))
}

/// Canonical expression for an expanded multiset: group first, then atoms
/// ordered by (kind, degree, qualifier), coefficient 1 left bare.
pub fn oracle_form(group: &FGAb, atoms: &BTreeMap<Atom, u64>) -> Expr {
    let mut sorted: Vec<(&Atom, u64)> = atoms.iter().map(|(a, k)| (a, *k)).collect();
    sorted.sort_by_key(|(a, _)| (a.kind(), a.degree(), a.qualifier()));
    let mut items = Vec::new();
    if !group.is_zero() {
        items.push(Expr::Group(group.clone()));
    }
    for (a, k) in sorted {
        items.push(if k == 1 {
            Expr::Atom(a.clone())
        } else {
            Expr::Scaled(Multiplicity::Finite(k), Box::new(Expr::Atom(a.clone())))
        });
    }
    match items.len() {
        0 => Expr::Zero,
        1 => items.pop().unwrap(),
        _ => Expr::Sum(items),
    }
}

pub fn expanded_size(atoms: &BTreeMap<Atom, u64>) -> u64 {
    atoms.values().sum()
}
