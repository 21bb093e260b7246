use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::OrbifoldSignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbifoldGeometry {
    Spherical,
    Flat,
    HyperbolicBase,
    Bad,
}

/// `χ(surface) − Σ (1 − 1/α)` where the underlying surface has Euler
/// characteristic `2 − 2g − b` (orientable) or `2 − g − b` (`g` cross-caps).
pub fn orbifold_euler_characteristic(sig: &OrbifoldSignature) -> Ratio<i64> {
    let g = i64::from(sig.genus);
    let b = i64::from(sig.boundary_components);
    let surface = if sig.orientable { 2 - 2 * g - b } else { 2 - g - b };
    sig.cone_orders
        .iter()
        .fold(Ratio::from_integer(surface), |acc, &a| {
            acc - (Ratio::from_integer(1) - Ratio::new(1, i64::from(a)))
        })
}

/// `Bad` iff the flag is set, otherwise the sign of the orbifold Euler
/// characteristic.
pub fn classify_orbifold_geometry(sig: &OrbifoldSignature) -> OrbifoldGeometry {
    if sig.bad {
        return OrbifoldGeometry::Bad;
    }
    let chi = orbifold_euler_characteristic(sig);
    match chi.numer().signum() {
        1 => OrbifoldGeometry::Spherical,
        0 => OrbifoldGeometry::Flat,
        _ => OrbifoldGeometry::HyperbolicBase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(genus: u32, orientable: bool, cones: &[u32], bdry: u32) -> OrbifoldSignature {
        OrbifoldSignature {
            genus,
            orientable,
            cone_orders: cones.to_vec(),
            boundary_components: bdry,
            bad: false,
        }
    }

    #[test]
    fn icosahedral_base() {
        let s = sig(0, true, &[2, 3, 5], 0);
        assert_eq!(orbifold_euler_characteristic(&s), Ratio::new(1, 30));
        assert_eq!(classify_orbifold_geometry(&s), OrbifoldGeometry::Spherical);
    }

    #[test]
    fn surfaces() {
        assert_eq!(classify_orbifold_geometry(&sig(1, true, &[], 0)), OrbifoldGeometry::Flat);
        let g2 = sig(2, true, &[], 0);
        assert_eq!(orbifold_euler_characteristic(&g2), Ratio::from_integer(-2));
        assert_eq!(classify_orbifold_geometry(&g2), OrbifoldGeometry::HyperbolicBase);
        assert_eq!(classify_orbifold_geometry(&sig(2, false, &[], 0)), OrbifoldGeometry::Flat);
        assert_eq!(classify_orbifold_geometry(&sig(1, false, &[], 1)), OrbifoldGeometry::Flat);
        assert_eq!(classify_orbifold_geometry(&sig(0, true, &[], 2)), OrbifoldGeometry::Flat);
        assert_eq!(classify_orbifold_geometry(&sig(0, true, &[2, 2], 1)), OrbifoldGeometry::Flat);
        assert_eq!(
            classify_orbifold_geometry(&sig(0, true, &[2, 3, 6], 0)),
            OrbifoldGeometry::Flat
        );
    }

    #[test]
    fn bad_flag_wins() {
        let mut s = sig(0, true, &[3], 0);
        assert_eq!(classify_orbifold_geometry(&s), OrbifoldGeometry::Spherical);
        s.bad = true;
        assert_eq!(classify_orbifold_geometry(&s), OrbifoldGeometry::Bad);
    }
}
