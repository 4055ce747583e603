use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{Scalar, Series, VarId};

/// Where an equivariant class lives: the family of curves `X`, the space
/// `Y` of functions with a marked critical value, or the base `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    X,
    Y,
    B,
}

/// A polynomial in the equivariant generator `tau`; `coeffs[d]` is the
/// coefficient of `tau^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    space: Space,
    coeffs: Vec<Scalar>,
}

impl EquivariantClass {
    pub fn new(space: Space, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        EquivariantClass { space, coeffs }
    }

    pub fn zero(space: Space) -> Self {
        Self::new(space, Vec::new())
    }

    /// `c * tau^d`.
    pub fn monomial(space: Space, d: usize, c: Scalar) -> Self {
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[d] = c;
        Self::new(space, coeffs)
    }

    /// Reads a series in `tau` alone.
    pub fn from_series(space: Space, s: &Series) -> Result<Self> {
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (m, c) in s.terms() {
            if m.iter().any(|(v, _)| v != VarId::Tau) {
                return Err(Error::Contract(format!("specialized coefficient still contains {m}")));
            }
            let d = m.exponent(VarId::Tau);
            if d < 0 {
                return Err(Error::NegativeExponent(s.to_string()));
            }
            let d = d as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Scalar::zero());
            }
            coeffs[d] += c;
        }
        Ok(Self::new(space, coeffs))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of the top power of `tau`, zero for the zero class.
    pub fn leading_coefficient(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeff(&self, d: usize) -> Scalar {
        self.coeffs.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficients as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(Scalar::to_string).collect()
    }
}

impl fmt::Display for EquivariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let sign = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let body = match d {
                0 => abs.to_string(),
                1 => format!("{abs}*tau"),
                _ => format!("{abs}*tau^{d}"),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}
