//! Finitely generated abelian groups `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` kept in
//! invariant-factor form (`d_1 | d_2 | ... | d_k`, every `d_i ≥ 2`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SemanticCode};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFGAb")]
pub struct FGAb {
    rank: u32,
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
struct RawFGAb {
    rank: u32,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl TryFrom<RawFGAb> for FGAb {
    type Error = Error;

    fn try_from(raw: RawFGAb) -> Result<Self> {
        FGAb::new(raw.rank, raw.torsion)
    }
}

impl FGAb {
    /// Builds `Z^rank ⊕ ⊕ Z/t` for the given torsion orders. Orders must be
    /// at least 2.
    pub fn new(rank: u32, torsion: impl IntoIterator<Item = u64>) -> Result<Self> {
        let torsion: Vec<u64> = torsion.into_iter().collect();
        if let Some(bad) = torsion.iter().find(|&&t| t < 2) {
            return Err(Error::semantic(
                SemanticCode::InvalidGroup,
                format!("torsion order {bad} is not at least 2"),
            ));
        }
        Ok(FGAb {
            rank,
            torsion: invariant_factors(&torsion),
        })
    }

    pub fn zero() -> Self {
        FGAb {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: u32) -> Self {
        FGAb {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Invariant factors in ascending divisibility order.
    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FGAb) -> FGAb {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        FGAb {
            rank: self.rank + other.rank,
            torsion: invariant_factors(&torsion),
        }
    }

    /// `k`-fold direct sum.
    pub fn times(&self, k: u64) -> FGAb {
        let k32 = u32::try_from(k).expect("multiplicity overflow");
        let mut torsion = Vec::with_capacity(self.torsion.len() * k as usize);
        for _ in 0..k {
            torsion.extend_from_slice(&self.torsion);
        }
        FGAb {
            rank: self.rank * k32,
            torsion: invariant_factors(&torsion),
        }
    }
}

/// Invariant factors of `⊕ Z/t_i`, via the primary decomposition: the `j`-th
/// largest invariant factor is the product over primes of the `j`-th largest
/// prime power.
fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &t in orders {
        for (p, pk) in prime_power_factors(t) {
            powers.entry(p).or_default().push(pk);
        }
    }
    let depth = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; depth];
    for list in powers.values_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, pk) in factors.iter_mut().zip(list.iter()) {
            *slot *= pk;
        }
    }
    factors.reverse();
    factors
}

fn prime_power_factors(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            out.push((p, pk));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl fmt::Display for FGAb {
    /// `Z^2 ⊕ (Z/2)^3`; the zero group prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}
