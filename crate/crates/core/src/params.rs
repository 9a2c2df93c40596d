use crate::{Error, Result};

/// ħ, c, m and the fundamental length `a`.
///
/// `a = 0` is accepted and gives the undeformed (commuting) limit; the other
/// three must be strictly positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub c: f64,
    pub m: f64,
    pub a: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, c: f64, m: f64, a: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("c", c), ("m", m)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("must be finite and ≥ 0, got {a}"),
            });
        }
        Ok(Self { hbar, c, m, a })
    }

    /// Fundamental length set to the Compton wavelength ħ/(mc).
    pub fn with_compton_length(hbar: f64, c: f64, m: f64) -> Result<Self> {
        let mut p = Self::new(hbar, c, m, 0.0)?;
        p.a = p.compton_wavelength();
        Ok(p)
    }

    /// ħ = c = m = 1, so a = 1 as well.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            m: 1.0,
            a: 1.0,
        }
    }

    pub fn compton_wavelength(&self) -> f64 {
        self.hbar / (self.m * self.c)
    }

    pub fn compton_time(&self) -> f64 {
        self.hbar / (self.m * self.c * self.c)
    }

    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// Angular frequency 2mc²/ħ of rest-frame Zitterbewegung.
    pub fn zitterbewegung_frequency(&self) -> f64 {
        2.0 * self.rest_energy() / self.hbar
    }

    /// E(p) = √(c²p² + m²c⁴).
    pub fn energy(&self, p: f64) -> f64 {
        let cp = self.c * p;
        let mc2 = self.rest_energy();
        (cp * cp + mc2 * mc2).sqrt()
    }

    pub fn with_mass(self, m: f64) -> Self {
        Self { m, ..self }
    }

    pub fn with_length(self, a: f64) -> Self {
        Self { a, ..self }
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}
