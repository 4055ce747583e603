//! Exact sparse arithmetic in the graded Laurent ring of relative
//! characteristic classes `psi, nu, nu1, nu2`, the equivariant generator
//! `tau`, the auxiliary variables `z, h` and the bookkeeping variables `t_i`.

mod monomial;
mod ops;
mod render;
mod series;

pub use monomial::{Monomial, TMonomial, VarId};
pub use ops::ZRule;
pub use series::{CombineMode, Series, Truncation};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Scalar = num_rational::BigRational;

/// Integer as a [`Scalar`].
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// `n / d` as a [`Scalar`].
pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}
