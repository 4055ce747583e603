use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::class::{EquivariantClass, Space};
use super::sympoly::p_table_entry;
use super::{gysin, multisingularity_series, specialize, weights, FamilySpec, MultisingularityType, Projection};
use crate::error::{Error, Result};
use crate::exactring::{Scalar, Series};
use crate::partitions::big_factorial;

/// Degrees and classes of one primitive stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub family: FamilySpec,
    pub mu: MultisingularityType,
    pub codim: u32,
    pub class_y: EquivariantClass,
    pub class_b: EquivariantClass,
    pub deg_space: Scalar,
    pub deg_stratum: Scalar,
    pub deg_image: Scalar,
    pub deg_ll: Scalar,
    pub hurwitz: Scalar,
    /// Closed-form degree: the table formula for Laurent families, the
    /// corrected product formula for polynomials.
    pub closed_form: Option<Scalar>,
    /// The product formula for polynomials exactly as it is usually printed.
    pub closed_form_printed: Option<Scalar>,
    pub p_value: Option<Scalar>,
    pub flags: ReportFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReportFlags {
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_form_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_match: Option<bool>,
}

type SeriesCache = Mutex<HashMap<(bool, u32), Arc<Series>>>;

fn cached_series(f: FamilySpec, codim: u32) -> Result<Arc<Series>> {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (f.is_laurent(), codim);
    if let Some(s) = cache.lock().expect("series cache poisoned").get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(multisingularity_series(f, codim)?);
    cache.lock().expect("series cache poisoned").insert(key, s.clone());
    Ok(s)
}

fn big(n: u64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

fn pow_scalar(base: u64, e: i64) -> Scalar {
    let p = num_traits::pow(big(base), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn check_range(f: FamilySpec, mu: &MultisingularityType) -> Result<()> {
    if mu.size() > f.params() {
        return Err(Error::InvalidArgument(format!(
            "|m| = {} exceeds the {} parameters of {f}",
            mu.size(),
            f.params()
        )));
    }
    Ok(())
}

/// `(k+l-|m|)! k^(k+2-|m|) l^(l+2-|m|) / (k! l!)`.
pub fn prefactor(k: u32, l: u32, size: u32) -> Result<Scalar> {
    if size > k + l {
        return Err(Error::InvalidArgument(format!("|m| = {size} exceeds k + l = {}", k + l)));
    }
    let num = Scalar::from_integer(big_factorial((k + l - size) as u64))
        * pow_scalar(k as u64, k as i64 + 2 - size as i64)
        * pow_scalar(l as u64, l as i64 + 2 - size as i64);
    Ok(num / Scalar::from_integer(big_factorial(k as u64) * big_factorial(l as u64)))
}

/// `deg_LL / prefactor` for a Laurent family.
pub fn p_value(k: u32, l: u32, mu: &MultisingularityType, deg_ll: &Scalar) -> Result<Scalar> {
    Ok(deg_ll / prefactor(k, l, mu.size())?)
}

/// Closed-form degrees for comparison with the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub value: Option<Scalar>,
    pub printed: Option<Scalar>,
}

pub fn closed_form_degree(f: FamilySpec, mu: &MultisingularityType) -> Result<ClosedForm> {
    check_range(f, mu)?;
    let size = mu.size() as i64;
    let r = mu.len() as i64;
    let aut = big(mu.aut());
    match f {
        FamilySpec::Polynomial { n } => {
            let n = n as i64;
            let fact_ratio = |top: i64, bottom: i64| -> Scalar {
                if bottom < 0 {
                    Scalar::zero()
                } else {
                    Scalar::from_integer(big_factorial(top as u64)) / Scalar::from_integer(big_factorial(bottom as u64))
                }
            };
            let corrected = pow_scalar(n as u64 + 1, n - size) * fact_ratio(n - size, n + 1 - size - r) / &aut;
            let printed = pow_scalar(n as u64 + 1, n - 1 - size) * fact_ratio(n - size, n - r - size) / &aut;
            Ok(ClosedForm {
                value: Some(corrected),
                printed: Some(printed),
            })
        }
        FamilySpec::Laurent { k, l } => {
            let value = if mu.is_empty() {
                Some(
                    Scalar::from_integer(big_factorial((k + l - 1) as u64))
                        * pow_scalar(k as u64, k as i64 + 1)
                        * pow_scalar(l as u64, l as i64 + 1)
                        / Scalar::from_integer(big_factorial(k as u64) * big_factorial(l as u64)),
                )
            } else {
                match p_table_entry(mu) {
                    Some(p) => Some(prefactor(k, l, mu.size())? * p.eval(k, l)),
                    None => None,
                }
            };
            Ok(ClosedForm { value, printed: None })
        }
    }
}

/// Runs the equivariant-degree pipeline for one primitive stratum.
pub fn stratum_report(f: FamilySpec, mu: &MultisingularityType) -> Result<StratumReport> {
    check_range(f, mu)?;
    let w = weights(f);
    let size = mu.size();
    let params = f.params();
    let weight = f.value_weight() as u64;
    let (class_y, class_b, deg_stratum, deg_image) = if mu.is_empty() {
        let one = vec![Scalar::one()];
        let deg_image = big_factorial(params as u64) * BigInt::from(weight).pow(params);
        (
            EquivariantClass::new(Space::Y, one.clone()),
            EquivariantClass::new(Space::B, one),
            w.deg_space.clone(),
            Scalar::one() / Scalar::from_integer(deg_image),
        )
    } else {
        let series = cached_series(f, size)?;
        let coeff = series.coeff_of(&mu.t_monomial());
        let class_y = specialize(&coeff, f, Space::Y)?
            .into_values()
            .next()
            .unwrap_or_else(|| EquivariantClass::zero(Space::Y));
        let class_b = gysin(&class_y, f, Projection::Q)?;
        let deg_stratum = class_b.leading_coefficient() * &w.deg_space;
        let free = params - size;
        let deg_image = big_factorial(free as u64) * BigInt::from(weight).pow(free + 1);
        (class_y, class_b, deg_stratum, Scalar::one() / Scalar::from_integer(deg_image))
    };
    let deg_ll = &deg_stratum / &deg_image;
    let hurwitz = normalize(f, &deg_ll);
    let closed = closed_form_degree(f, mu)?;
    let p = match f {
        FamilySpec::Laurent { k, l } => Some(p_value(k, l, mu, &deg_ll)?),
        FamilySpec::Polynomial { .. } => None,
    };
    let flags = ReportFlags {
        empty: class_b.is_zero(),
        closed_form_match: closed.value.as_ref().map(|v| *v == deg_ll),
        oracle_match: None,
    };
    Ok(StratumReport {
        family: f,
        mu: mu.clone(),
        codim: mu.codim(),
        class_y,
        class_b,
        deg_space: w.deg_space,
        deg_stratum,
        deg_image,
        deg_ll,
        hurwitz,
        closed_form: closed.value,
        closed_form_printed: closed.printed,
        p_value: p,
        flags,
    })
}

fn normalize(f: FamilySpec, deg_ll: &Scalar) -> Scalar {
    match f {
        FamilySpec::Laurent { k, l } => {
            let aut = if k == l { 2 } else { 1 };
            deg_ll / big((k * l * aut) as u64)
        }
        FamilySpec::Polynomial { n } => deg_ll / big(n as u64 + 1),
    }
}

/// The double Hurwitz number of a stratum: the restricted degree divided
/// by the number of representatives of each function in the unfolding.
pub fn hurwitz_number(f: FamilySpec, mu: &MultisingularityType) -> Result<Scalar> {
    Ok(stratum_report(f, mu)?.hurwitz)
}

fn parse_scalar(s: &str) -> std::result::Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

fn parse_class(space: Space, v: &[String]) -> std::result::Result<EquivariantClass, String> {
    let coeffs = v.iter().map(|s| parse_scalar(s)).collect::<std::result::Result<_, _>>()?;
    Ok(EquivariantClass::new(space, coeffs))
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    family: FamilySpec,
    mu: MultisingularityType,
    codim: u32,
    #[serde(rename = "class_Y")]
    class_y: Vec<String>,
    #[serde(rename = "class_B")]
    class_b: Vec<String>,
    deg_space: String,
    deg_stratum: String,
    deg_image: String,
    #[serde(rename = "deg_LL")]
    deg_ll: String,
    hurwitz: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    closed_form_printed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p_value: Option<String>,
    flags: ReportFlags,
}

impl Serialize for StratumReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            family: self.family,
            mu: self.mu.clone(),
            codim: self.codim,
            class_y: self.class_y.to_strings(),
            class_b: self.class_b.to_strings(),
            deg_space: self.deg_space.to_string(),
            deg_stratum: self.deg_stratum.to_string(),
            deg_image: self.deg_image.to_string(),
            deg_ll: self.deg_ll.to_string(),
            hurwitz: self.hurwitz.to_string(),
            closed_form: self.closed_form.as_ref().map(Scalar::to_string),
            closed_form_printed: self.closed_form_printed.as_ref().map(Scalar::to_string),
            p_value: self.p_value.as_ref().map(Scalar::to_string),
            flags: self.flags.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StratumReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ReportJson::deserialize(deserializer)?;
        let opt = |v: &Option<String>| v.as_deref().map(parse_scalar).transpose();
        Ok(StratumReport {
            family: j.family,
            mu: j.mu,
            codim: j.codim,
            class_y: parse_class(Space::Y, &j.class_y).map_err(D::Error::custom)?,
            class_b: parse_class(Space::B, &j.class_b).map_err(D::Error::custom)?,
            deg_space: parse_scalar(&j.deg_space).map_err(D::Error::custom)?,
            deg_stratum: parse_scalar(&j.deg_stratum).map_err(D::Error::custom)?,
            deg_image: parse_scalar(&j.deg_image).map_err(D::Error::custom)?,
            deg_ll: parse_scalar(&j.deg_ll).map_err(D::Error::custom)?,
            hurwitz: parse_scalar(&j.hurwitz).map_err(D::Error::custom)?,
            closed_form: opt(&j.closed_form).map_err(D::Error::custom)?,
            closed_form_printed: opt(&j.closed_form_printed).map_err(D::Error::custom)?,
            p_value: opt(&j.p_value).map_err(D::Error::custom)?,
            flags: j.flags,
        })
    }
}

impl StratumReport {
    /// True if the degree identity `deg_LL * deg_image = deg_stratum` holds.
    pub fn is_balanced(&self) -> bool {
        &self.deg_ll * &self.deg_image == self.deg_stratum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{frac, int};

    fn mu(s: &str) -> MultisingularityType {
        MultisingularityType::parse(s).unwrap()
    }

    #[test]
    fn laurent_caustic_21() {
        let r = stratum_report(FamilySpec::Laurent { k: 2, l: 1 }, &mu("2")).unwrap();
        assert_eq!(r.class_y, EquivariantClass::monomial(Space::Y, 2, int(6)));
        assert_eq!(r.class_b, EquivariantClass::monomial(Space::B, 1, int(3)));
        assert_eq!(r.deg_stratum, frac(1, 2));
        assert_eq!(r.deg_image, frac(1, 4));
        assert_eq!(r.deg_ll, int(2));
        assert_eq!(r.hurwitz, int(1));
        assert_eq!(r.flags.closed_form_match, Some(true));
        assert!(r.is_balanced());
    }

    #[test]
    fn laurent_maxwell_22() {
        let r = stratum_report(FamilySpec::Laurent { k: 2, l: 2 }, &mu("1,1")).unwrap();
        assert_eq!(r.class_y, EquivariantClass::monomial(Space::Y, 2, int(16)));
        assert_eq!(r.deg_ll, int(8));
        assert_eq!(r.hurwitz, int(1));
    }

    #[test]
    fn polynomial_caustic_3() {
        let r = stratum_report(FamilySpec::Polynomial { n: 3 }, &mu("2")).unwrap();
        assert_eq!(r.class_y, EquivariantClass::monomial(Space::Y, 2, int(24)));
        assert_eq!(r.class_b, EquivariantClass::monomial(Space::B, 1, int(6)));
        assert_eq!(r.deg_stratum, frac(1, 4));
        assert_eq!(r.deg_image, frac(1, 16));
        assert_eq!(r.deg_ll, int(4));
        assert_eq!(r.closed_form, Some(int(4)));
        assert_eq!(r.closed_form_printed, Some(int(1)));
    }

    #[test]
    fn generic_and_hurwitz() {
        let cases = [((1, 1), frac(1, 2)), ((2, 1), int(4)), ((3, 1), int(27))];
        for ((k, l), h) in cases {
            assert_eq!(hurwitz_number(FamilySpec::Laurent { k, l }, &mu("")).unwrap(), h);
        }
        let r = stratum_report(FamilySpec::Laurent { k: 2, l: 2 }, &mu("2")).unwrap();
        assert_eq!((r.deg_ll.clone(), r.hurwitz.clone()), (int(24), int(3)));
        for n in 1..=6u32 {
            let r = stratum_report(FamilySpec::Polynomial { n }, &mu("")).unwrap();
            assert_eq!(r.deg_ll, Scalar::from_integer(BigInt::from(n + 1).pow(n - 1)));
        }
    }

    #[test]
    fn empty_strata() {
        for (k, l, m) in [(1, 1, "2"), (1, 1, "1,1"), (1, 2, "1,1")] {
            let r = stratum_report(FamilySpec::Laurent { k, l }, &mu(m)).unwrap();
            assert!(r.flags.empty, "({k},{l}) {m}");
            assert!(r.deg_ll.is_zero());
        }
        let r = stratum_report(FamilySpec::Polynomial { n: 2 }, &mu("1,1")).unwrap();
        assert!(r.flags.empty);
    }

    #[test]
    fn out_of_range() {
        assert!(stratum_report(FamilySpec::Laurent { k: 1, l: 1 }, &mu("3")).is_err());
        assert!(closed_form_degree(FamilySpec::Polynomial { n: 2 }, &mu("2,1")).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = stratum_report(FamilySpec::Laurent { k: 2, l: 1 }, &mu("2")).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["family"]["kind"], "laurent");
        assert_eq!(v["deg_stratum"], "1/2");
        assert_eq!(v["class_B"], serde_json::json!(["0", "3"]));
        let back: StratumReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
