//! Canonical text and LaTeX rendering.
//!
//! Text form: terms in descending monomial order, joined by ` + ` / ` - `,
//! rationals as `p/q`, unit coefficients omitted, e.g.
//! `psi^2*nu^-1*t1 - 1/2*psi*t1^2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::monomial::{Monomial, TMonomial};
use super::series::Series;
use super::Scalar;

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

fn latex_monomial(m: &Monomial) -> String {
    let mut out = String::new();
    let mut open_command = false;
    for (v, e) in m.iter() {
        let name = v.latex();
        if open_command && name.starts_with(|c: char| c.is_ascii_alphabetic()) {
            out.push(' ');
        }
        open_command = e == 1 && name.starts_with('\\') && name.ends_with(|c: char| c.is_ascii_alphabetic());
        out.push_str(&name);
        if e != 1 {
            out.push_str(&format!("^{{{e}}}"));
        }
    }
    out
}

fn latex_sum(terms: &[(Monomial, Scalar)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = latex_monomial(m);
        let coeff = if abs.is_integer() {
            abs.numer().to_string()
        } else {
            format!(r"\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        if body.is_empty() {
            out.push_str(&coeff);
        } else if abs.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&coeff);
            out.push_str(&body);
        }
    }
    out
}

impl Series {
    /// LaTeX form over a common denominator: negative exponents and rational
    /// coefficients are cleared into a single `\frac{...}{...}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut den_mono = Monomial::one();
        let mut den_int = BigInt::one();
        for (m, c) in self.terms() {
            den_mono = den_mono.gcd(m);
            den_int = den_int.lcm(c.denom());
        }
        let den_mono = Monomial::from_pairs(den_mono.iter().map(|(v, e)| (v, -e)));
        let num: Vec<(Monomial, Scalar)> = self
            .terms()
            .rev()
            .map(|(m, c)| (m.mul(&den_mono), c * Scalar::from_integer(den_int.clone())))
            .collect();
        let num_str = latex_sum(&num);
        let den_str = {
            let mono = latex_monomial(&den_mono);
            match (den_int.is_one(), mono.is_empty()) {
                (true, true) => String::new(),
                (true, false) => mono,
                (false, true) => den_int.to_string(),
                (false, false) => format!("{den_int}{mono}"),
            }
        };
        if den_str.is_empty() {
            num_str
        } else {
            format!(r"\frac{{{num_str}}}{{{den_str}}}")
        }
    }

    /// Display `coef_1 t^{a} + coef_2 t^{b} + ...`, ordered by
    /// weighted t-degree.
    pub fn to_latex_by_t(&self) -> String {
        let mut rows: Vec<(TMonomial, Series)> = self.t_coefficients().into_iter().collect();
        rows.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then(b.0.cmp(&a.0)));
        if rows.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (t, c)) in rows.iter().enumerate() {
            let mut body = c.to_latex();
            if i > 0 {
                match body.strip_prefix('-') {
                    Some(rest) if c.len() == 1 => {
                        out.push_str("\n  - ");
                        body = rest.to_string();
                    }
                    _ => out.push_str("\n  + "),
                }
            }
            if t.is_one() {
                out.push_str(&body);
            } else if c.len() == 1 && !body.contains(r"\frac") {
                out.push_str(&format!("{body}\\,{}", t.latex()));
            } else {
                out.push_str(&format!(r"\left({body}\right){}", t.latex()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{Truncation, VarId};

    #[test]
    fn canonical_text() {
        let tr = Truncation::NONE;
        let s = Series::from_terms(
            [
                (Monomial::var(VarId::Psi, 2), Scalar::from_integer((-2).into())),
                (Monomial::from_pairs([(VarId::Nu, -1), (VarId::T(1), 1)]), Scalar::new(3.into(), 2.into())),
                (Monomial::one(), Scalar::one()),
            ],
            tr,
        );
        assert_eq!(s.to_string(), "-2*psi^2 + 1 + 3/2*nu^-1*t1");
        assert_eq!(Series::zero(tr).to_string(), "0");
    }

    #[test]
    fn latex_common_denominator() {
        let tr = Truncation::NONE;
        // psi^2/nu2 + psi^2/nu1 - 2 psi
        let s = Series::from_terms(
            [
                (Monomial::from_pairs([(VarId::Psi, 2), (VarId::Nu2, -1)]), Scalar::one()),
                (Monomial::from_pairs([(VarId::Psi, 2), (VarId::Nu1, -1)]), Scalar::one()),
                (Monomial::var(VarId::Psi, 1), Scalar::from_integer((-2).into())),
            ],
            tr,
        );
        assert_eq!(
            s.to_latex(),
            r"\frac{\psi^{2}\nu_1 + \psi^{2}\nu_2 - 2\psi\nu_1\nu_2}{\nu_1\nu_2}"
        );
    }
}
