//! Symmetric polynomials in `k, l`, written in `s = k + l` and `p = k l`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};

use super::{stratum_report, FamilySpec, MultisingularityType};
use crate::error::{Error, Result};
use crate::exactring::{frac, int, Scalar};

/// `sum c_(a,b) s^a p^b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    coeffs: BTreeMap<(u32, u32), Scalar>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, 0, 0)
    }

    /// `c s^a p^b`.
    pub fn term(c: Scalar, a: u32, b: u32) -> Self {
        let mut out = SymPoly::zero();
        if !c.is_zero() {
            out.coeffs.insert((a, b), c);
        }
        out
    }

    /// `k + l`.
    pub fn s() -> Self {
        Self::term(Scalar::one(), 1, 0)
    }

    /// `k l`.
    pub fn p() -> Self {
        Self::term(Scalar::one(), 0, 1)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.coeffs
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = SymPoly::zero();
        for (e, v) in &self.coeffs {
            out.add_term(*e, v * c);
        }
        out
    }

    fn add_term(&mut self, e: (u32, u32), c: Scalar) {
        let v = self.coeffs.entry(e).or_insert_with(Scalar::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn eval(&self, k: u32, l: u32) -> Scalar {
        let s = int((k + l) as i64);
        let p = int(k as i64 * l as i64);
        self.coeffs
            .iter()
            .map(|((a, b), c)| c * num_traits::pow(s.clone(), *a as usize) * num_traits::pow(p.clone(), *b as usize))
            .fold(Scalar::zero(), |acc, x| acc + x)
    }

    /// Text form in `k, l`, e.g. `(kl)^2 - 5*(kl) + 2*(k+l)`.
    pub fn to_kl_string(&self) -> String {
        self.render(|a, b| {
            let mut parts = Vec::new();
            match b {
                0 => {}
                1 => parts.push("(kl)".to_string()),
                _ => parts.push(format!("(kl)^{b}")),
            }
            match a {
                0 => {}
                1 => parts.push("(k+l)".to_string()),
                _ => parts.push(format!("(k+l)^{a}")),
            }
            parts.join("*")
        }, "*")
    }

    pub fn to_latex(&self) -> String {
        self.render(|a, b| {
            let mut out = String::new();
            match b {
                0 => {}
                1 => out.push_str(r"k\ell"),
                _ => out.push_str(&format!(r"(k\ell)^{{{b}}}")),
            }
            match a {
                0 => {}
                1 => out.push_str(r"(k+\ell)"),
                _ => out.push_str(&format!(r"(k+\ell)^{{{a}}}")),
            }
            out
        }, "")
    }

    fn render(&self, mono: impl Fn(u32, u32) -> String, sep: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(&(u32, u32), &Scalar)> = self.coeffs.iter().collect();
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 .0 + 2 * t.0 .1, t.0 .1)));
        let mut out = String::new();
        for (i, ((a, b), c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let abs = c.abs();
            let m = mono(*a, *b);
            if m.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&m);
            } else if sep.is_empty() && !abs.is_integer() {
                out.push_str(&format!(r"\frac{{{}}}{{{}}}{m}", abs.numer(), abs.denom()));
            } else {
                out.push_str(&format!("{abs}{sep}{m}"));
            }
        }
        out
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kl_string())
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self + &rhs.scale(&int(-1))
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &rhs.coeffs {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

/// Tabulated `P_mu` for `|m| <= 3`; `None` beyond.
pub fn p_table_entry(mu: &MultisingularityType) -> Option<SymPoly> {
    let s = SymPoly::s();
    let p = SymPoly::p();
    let c = |x: i64| SymPoly::constant(int(x));
    let entry = match mu.parts() {
        [1] => c(1),
        [2] => &p - &c(1),
        [1, 1] => (&(&(&p * &s) - &p.scale(&int(4))) + &c(2)).scale(&frac(1, 2)),
        [3] => &(&(&p * &p) - &p.scale(&int(5))) + &s.scale(&int(2)),
        [2, 1] => &(&p - &c(3)) * &(&(&(&p * &s) - &p.scale(&int(6))) + &s.scale(&int(2))),
        [1, 1, 1] => {
            let s2 = &s * &s;
            let quad = &(&s2 - &s.scale(&int(12))) + &c(40);
            let lin = &s.scale(&int(6)) - &c(80);
            let sum = &(&(&(&p * &p) * &quad) + &(&p * &lin)) + &s.scale(&int(24));
            sum.scale(&frac(1, 6))
        }
        _ => return None,
    };
    Some(entry)
}

/// Interpolates `P_mu` from pipeline degrees on a grid of Laurent families,
/// in the basis `s^a p^b` with `a + 2b <= 2|m|`. Every grid point must be
/// reproduced exactly.
pub fn p_polynomial(mu: &MultisingularityType) -> Result<SymPoly> {
    p_polynomial_with_bound(mu, 2 * mu.size())
}

/// As [`p_polynomial`] with an explicit bound on `a + 2b`.
pub fn p_polynomial_with_bound(mu: &MultisingularityType, bound: u32) -> Result<SymPoly> {
    let size = mu.size();
    if size == 0 {
        return Err(Error::InvalidArgument("P is defined for |m| >= 1".into()));
    }
    let basis: Vec<(u32, u32)> = (0..=bound / 2)
        .flat_map(|b| (0..=bound - 2 * b).map(move |a| (a, b)))
        .collect();
    let mut rows = Vec::new();
    for s in size.max(2)..=bound + 8 {
        for k in 1..=s / 2 {
            let l = s - k;
            let report = stratum_report(FamilySpec::Laurent { k, l }, mu)?;
            let value = report.p_value.expect("Laurent report carries p_value");
            let sv = int(s as i64);
            let pv = int(k as i64 * l as i64);
            let mut row: Vec<Scalar> = basis
                .iter()
                .map(|(a, b)| num_traits::pow(sv.clone(), *a as usize) * num_traits::pow(pv.clone(), *b as usize))
                .collect();
            row.push(value);
            rows.push(row);
        }
    }
    let sol = solve_exact(rows, basis.len())?;
    let mut out = SymPoly::zero();
    for (e, c) in basis.into_iter().zip(sol) {
        out.add_term(e, c);
    }
    Ok(out)
}

/// Solves an overdetermined augmented system exactly; fails unless it has
/// full column rank and is consistent.
fn solve_exact(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Result<Vec<Scalar>> {
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::Interpolation(format!("grid does not determine basis column {col}")));
        };
        rows.swap(pivot_row, found);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &factor * p;
            }
        }
        pivot_row += 1;
    }
    if rows[ncols..].iter().any(|r| !r[ncols].is_zero()) {
        return Err(Error::Interpolation("residual at extra grid points; degree bound too small".into()));
    }
    Ok(rows[..ncols].iter().map(|r| r[ncols].clone()).collect())
}
