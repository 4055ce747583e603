//! Specialization of the universal series to the versal unfoldings of `A_n`
//! (polynomials) and `I_{k,l}` (Laurent polynomials), Gysin pushforwards,
//! and the equivariant-degree pipeline for primitive strata.

mod class;
mod report;
mod sympoly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{int, Scalar, Series, TMonomial, Truncation, VarId};

pub use class::{EquivariantClass, Space};
pub use report::{
    closed_form_degree, hurwitz_number, p_value, prefactor, stratum_report, ClosedForm, ReportFlags, StratumReport,
};
pub use sympoly::{p_polynomial, p_polynomial_with_bound, p_table_entry, SymPoly};

/// One of the two families of versal unfoldings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    /// `x^(n+1) + a_2 x^(n-1) + ... + a_(n+1)`.
    Polynomial { n: u32 },
    /// Laurent polynomials with poles of orders `k` and `l`.
    Laurent { k: u32, l: u32 },
}

impl FamilySpec {
    pub fn polynomial(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("polynomial family needs n >= 1".into()));
        }
        Ok(FamilySpec::Polynomial { n })
    }

    pub fn laurent(k: u32, l: u32) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument("Laurent family needs k, l >= 1".into()));
        }
        Ok(FamilySpec::Laurent { k, l })
    }

    pub fn sheets(&self) -> u32 {
        match *self {
            FamilySpec::Polynomial { n } => n + 1,
            FamilySpec::Laurent { k, l } => k + l,
        }
    }

    /// Dimension of the base of the unfolding.
    pub fn params(&self) -> u32 {
        match *self {
            FamilySpec::Polynomial { n } => n,
            FamilySpec::Laurent { k, l } => k + l,
        }
    }

    /// Weight of the critical values.
    pub fn value_weight(&self) -> u32 {
        match *self {
            FamilySpec::Polynomial { n } => n + 1,
            FamilySpec::Laurent { k, l } => k * l,
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, FamilySpec::Laurent { .. })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Polynomial { n } => write!(f, "A_{n}"),
            FamilySpec::Laurent { k, l } => write!(f, "I_{{{k},{l}}}"),
        }
    }
}

/// Weights of the base coordinates and the resulting degree of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub base: Vec<(String, u32)>,
    pub fiber_weight: Option<u32>,
    pub value_weight: u32,
    pub sheets: u32,
    pub params: u32,
    pub deg_space: Scalar,
}

pub fn weights(f: FamilySpec) -> WeightTable {
    let base: Vec<(String, u32)> = match f {
        FamilySpec::Polynomial { n } => (2..=n + 1).map(|i| (format!("a{i}"), i)).collect(),
        FamilySpec::Laurent { k, l } => {
            let mut b = vec![("eps".to_string(), k + l)];
            b.extend((1..k).map(|i| (format!("a{i}"), i * l)));
            b.push(("c".to_string(), k * l));
            b.extend((1..l).map(|j| (format!("b{j}"), j * k)));
            b
        }
    };
    let prod: BigInt = base.iter().map(|(_, w)| BigInt::from(*w)).product();
    WeightTable {
        fiber_weight: match f {
            FamilySpec::Polynomial { .. } => Some(1),
            FamilySpec::Laurent { .. } => None,
        },
        value_weight: f.value_weight(),
        sheets: f.sheets(),
        params: f.params(),
        deg_space: Scalar::new(BigInt::one(), prod),
        base,
    }
}

/// A multisingularity `A_{m_1, ..., m_r}` given by its parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultisingularityType(Vec<u32>);

impl MultisingularityType {
    /// Sorts the parts into non-increasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("multisingularity parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(MultisingularityType(parts))
    }

    pub fn empty() -> Self {
        MultisingularityType(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `|m|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn aut(&self) -> u64 {
        crate::partitions::aut_order(&self.0)
    }

    /// Codimension of the stratum in the base.
    pub fn codim(&self) -> u32 {
        self.size().saturating_sub(1)
    }

    pub fn t_monomial(&self) -> TMonomial {
        TMonomial::from_parts(&self.0)
    }

    /// Parses `"2,1"`; the empty string is the empty type.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Self::empty());
        }
        let parts = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad multisingularity {s:?}: {e}")))?;
        Self::new(parts)
    }
}

impl TryFrom<Vec<u32>> for MultisingularityType {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MultisingularityType> for Vec<u32> {
    fn from(m: MultisingularityType) -> Vec<u32> {
        m.0
    }
}

impl fmt::Display for MultisingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn tau_multiple(c: i64) -> Series {
    Series::var(VarId::Tau, Truncation::NONE).scale(&int(c))
}

/// The substitution of the class variables for a family. The variables of
/// the other family are set to zero.
pub fn substitution(f: FamilySpec) -> BTreeMap<VarId, Series> {
    let zero = Series::zero(Truncation::NONE);
    match f {
        FamilySpec::Polynomial { n } => BTreeMap::from([
            (VarId::Psi, tau_multiple(n as i64 + 1)),
            (VarId::Nu, tau_multiple(1)),
            (VarId::Nu1, zero.clone()),
            (VarId::Nu2, zero),
        ]),
        FamilySpec::Laurent { k, l } => BTreeMap::from([
            (VarId::Psi, tau_multiple(k as i64 * l as i64)),
            (VarId::Nu1, tau_multiple(k as i64)),
            (VarId::Nu2, tau_multiple(l as i64)),
            (VarId::Nu, zero),
        ]),
    }
}

/// Substitutes the family's values for `psi, nu, nu1, nu2` and splits the
/// result by t-monomial.
pub fn specialize(s: &Series, f: FamilySpec, space: Space) -> Result<BTreeMap<TMonomial, EquivariantClass>> {
    let sub = s.clone().with_relations(false).substitute(&substitution(f))?;
    let mut out = BTreeMap::new();
    for (t, coeff) in sub.t_coefficients() {
        let class = EquivariantClass::from_series(space, &coeff)?;
        if !class.is_zero() {
            out.insert(t, class);
        }
    }
    Ok(out)
}

/// Direction of a Gysin pushforward to the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// From the total space `X` of the family of curves.
    P,
    /// From the space `Y` of pairs (function, critical value).
    Q,
}

/// Pushforward to the base: `tau^d -> m tau^(d-1)`, constants dropped.
pub fn gysin(c: &EquivariantClass, f: FamilySpec, along: Projection) -> Result<EquivariantClass> {
    let source = match along {
        Projection::P => Space::X,
        Projection::Q => Space::Y,
    };
    if c.space() != source {
        return Err(Error::Contract(format!("{along:?}_* needs a class on {source:?}, got {:?}", c.space())));
    }
    let m = match (f, along) {
        (FamilySpec::Laurent { k, l }, Projection::P) => Scalar::new((k + l).into(), (k * l).into()),
        (FamilySpec::Laurent { k, l }, Projection::Q) => Scalar::new(1.into(), (k * l).into()),
        (FamilySpec::Polynomial { .. }, Projection::P) => Scalar::one(),
        (FamilySpec::Polynomial { n }, Projection::Q) => Scalar::new(1.into(), (n + 1).into()),
    };
    let coeffs = c.coeffs().iter().skip(1).map(|x| x * &m).collect();
    Ok(EquivariantClass::new(Space::B, coeffs))
}

/// `exp(f_* R)` where `f_*` substitutes the family's values and multiplies
/// by the sheet count. Returns classes on `Y` per t-monomial.
pub fn exp_fstar_classes(f: FamilySpec, codim: u32) -> Result<BTreeMap<TMonomial, EquivariantClass>> {
    let (_, r) = crate::universal::assemble_r(codim)?;
    let pushed = r
        .with_relations(false)
        .substitute(&substitution(f))?
        .scale(&int(f.sheets() as i64));
    let e = pushed.exp_trunc()?;
    let mut out = BTreeMap::new();
    for (t, coeff) in e.t_coefficients() {
        let class = EquivariantClass::from_series(Space::Y, &coeff)?;
        if !class.is_zero() {
            out.insert(t, class);
        }
    }
    Ok(out)
}

/// The multisingularity generating function on `Y` for a family:
/// `N_A` for polynomials, `N'_I + N''_I` for Laurent polynomials.
pub fn multisingularity_series(f: FamilySpec, codim: u32) -> Result<Series> {
    if f.is_laurent() {
        let (a, b) = crate::universal::build_ni(codim)?;
        Ok(&a + &b)
    } else {
        crate::universal::build_na(codim)
    }
}

/// Direct specialization of the multisingularity generating function.
pub fn direct_y_classes(f: FamilySpec, codim: u32) -> Result<BTreeMap<TMonomial, EquivariantClass>> {
    specialize(&multisingularity_series(f, codim)?, f, Space::Y)
}

/// `[A_m(X)]` specialized, from the monosingularity series.
pub fn mono_x_class(f: FamilySpec, m: u32) -> Result<EquivariantClass> {
    let mono = crate::universal::mono_series(m)?;
    let coeff = mono.coeff_of_var(VarId::Z, m as i32);
    let table = specialize(&coeff, f, Space::X)?;
    Ok(table
        .get(&TMonomial::one())
        .cloned()
        .unwrap_or_else(|| EquivariantClass::zero(Space::X)))
}
