//! Parameter types for the wrapped Cauchy and extended wrapped Cauchy families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::CircAngle;
use crate::error::{EwcError, Result};

/// A complex number strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    re: f64,
    im: f64,
}

impl DiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let norm = (re * re + im * im).sqrt();
        if norm >= 1.0 || !norm.is_finite() {
            return Err(EwcError::NotInDisc(norm));
        }
        Ok(DiskPoint { re, im })
    }

    pub fn origin() -> Self {
        DiskPoint { re: 0.0, im: 0.0 }
    }

    pub fn re(self) -> f64 {
        self.re
    }

    pub fn im(self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        DiskPoint::new(z.re, z.im)
    }

    pub fn modulus(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

/// Wrapped Cauchy parameters: location `mu` and concentration `rho` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WcParams {
    pub mu: CircAngle,
    rho: f64,
}

impl WcParams {
    pub fn new(mu: impl Into<CircAngle>, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(WcParams { mu: mu.into(), rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The disc parameter `phi = rho * e^{i mu}`.
    pub fn phi(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.mu.radians())
    }
}

/// Extended wrapped Cauchy parameters `(mu1, mu2, rho1, rho2)`.
///
/// The density is invariant under exchanging `(mu1, rho1)` with `(mu2, rho2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwcParams {
    pub mu1: CircAngle,
    pub mu2: CircAngle,
    rho1: f64,
    rho2: f64,
}

impl EwcParams {
    pub fn new(
        mu1: impl Into<CircAngle>,
        mu2: impl Into<CircAngle>,
        rho1: f64,
        rho2: f64,
    ) -> Result<Self> {
        check_rho(rho1)?;
        check_rho(rho2)?;
        Ok(EwcParams {
            mu1: mu1.into(),
            mu2: mu2.into(),
            rho1,
            rho2,
        })
    }

    /// Build from the complex parametrization `(phi1, phi2)`.
    pub fn from_phis(phi1: DiskPoint, phi2: DiskPoint) -> Self {
        let p1 = phi1.to_complex();
        let p2 = phi2.to_complex();
        EwcParams {
            mu1: CircAngle::new(if phi1.modulus() == 0.0 { 0.0 } else { p1.arg() }),
            mu2: CircAngle::new(if phi2.modulus() == 0.0 { 0.0 } else { p2.arg() }),
            rho1: phi1.modulus(),
            rho2: phi2.modulus(),
        }
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    pub fn phi1(&self) -> Complex64 {
        Complex64::from_polar(self.rho1, self.mu1.radians())
    }

    pub fn phi2(&self) -> Complex64 {
        Complex64::from_polar(self.rho2, self.mu2.radians())
    }

    /// Swap the two parameter labels; the density is unchanged.
    pub fn swapped(&self) -> Self {
        EwcParams {
            mu1: self.mu2,
            mu2: self.mu1,
            rho1: self.rho2,
            rho2: self.rho1,
        }
    }

    /// Canonical labeling: `rho1 >= rho2`, ties broken by `mu1 <= mu2`.
    pub fn canonical(&self) -> Self {
        if self.rho1 > self.rho2 {
            *self
        } else if self.rho1 < self.rho2 {
            self.swapped()
        } else if self.mu1.radians() <= self.mu2.radians() {
            *self
        } else {
            self.swapped()
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) || !rho.is_finite() {
        return Err(EwcError::RhoOutOfRange(rho));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_invalid_rho() {
        assert!(WcParams::new(0.0, 1.0).is_err());
        assert!(WcParams::new(0.0, -0.1).is_err());
        assert!(EwcParams::new(0.0, 0.0, 0.5, f64::NAN).is_err());
        assert!(WcParams::new(0.0, 0.999).is_ok());
    }

    #[test]
    fn rejects_boundary_disk_point() {
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(0.8, 0.61).is_err());
        assert!(DiskPoint::new(0.8, 0.59).is_ok());
    }

    #[test]
    fn phi_round_trip_is_exact() {
        let p = EwcParams::new(0.7, -2.1, 0.3, 0.85).unwrap();
        let q = EwcParams::from_phis(
            DiskPoint::from_complex(p.phi1()).unwrap(),
            DiskPoint::from_complex(p.phi2()).unwrap(),
        );
        assert!((p.mu1.radians() - q.mu1.radians()).abs() < 1e-15);
        assert!((p.mu2.radians() - q.mu2.radians()).abs() < 1e-15);
        assert!((p.rho1() - q.rho1()).abs() < 1e-15);
        assert!((p.rho2() - q.rho2()).abs() < 1e-15);
    }

    #[test]
    fn canonical_orders_by_rho() {
        let p = EwcParams::new(1.0, 2.0, 0.2, 0.6).unwrap();
        let c = p.canonical();
        assert_eq!(c.rho1(), 0.6);
        assert_eq!(c.mu1.radians(), 2.0);
        // tie on rho falls back to mu order
        let t = EwcParams::new(2.0, -1.0, 0.5, 0.5).unwrap().canonical();
        assert_eq!(t.mu1.radians(), -1.0);
        let _ = PI;
    }
}
