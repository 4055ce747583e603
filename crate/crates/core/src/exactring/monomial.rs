use std::fmt;

use serde::{Deserialize, Serialize};

/// Variables of the ring of relative characteristic classes.
///
/// `Psi`, `Nu`, `Nu1`, `Nu2` may carry negative exponents; every other
/// variable is polynomial. `T(i)` is the bookkeeping variable of a local
/// singularity of type `A_i`, `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    Psi,
    Nu,
    Nu1,
    Nu2,
    Tau,
    Z,
    H,
    T(u32),
}

pub(crate) const BASE_VARS: [VarId; 7] = [
    VarId::Psi,
    VarId::Nu,
    VarId::Nu1,
    VarId::Nu2,
    VarId::Tau,
    VarId::Z,
    VarId::H,
];

impl VarId {
    pub fn is_laurent(self) -> bool {
        matches!(self, VarId::Psi | VarId::Nu | VarId::Nu1 | VarId::Nu2)
    }

    fn base_index(self) -> Option<usize> {
        match self {
            VarId::Psi => Some(0),
            VarId::Nu => Some(1),
            VarId::Nu1 => Some(2),
            VarId::Nu2 => Some(3),
            VarId::Tau => Some(4),
            VarId::Z => Some(5),
            VarId::H => Some(6),
            VarId::T(_) => None,
        }
    }

    pub fn name(self) -> String {
        match self {
            VarId::Psi => "psi".into(),
            VarId::Nu => "nu".into(),
            VarId::Nu1 => "nu1".into(),
            VarId::Nu2 => "nu2".into(),
            VarId::Tau => "tau".into(),
            VarId::Z => "z".into(),
            VarId::H => "h".into(),
            VarId::T(i) => format!("t{i}"),
        }
    }

    pub fn latex(self) -> String {
        match self {
            VarId::Psi => r"\psi".into(),
            VarId::Nu => r"\nu".into(),
            VarId::Nu1 => r"\nu_1".into(),
            VarId::Nu2 => r"\nu_2".into(),
            VarId::Tau => r"\tau".into(),
            VarId::Z => "z".into(),
            VarId::H => "h".into(),
            VarId::T(i) => format!("t_{{{i}}}"),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A Laurent monomial.
///
/// The derived ordering is lexicographic with `psi > nu > nu1 > nu2 > tau >
/// z > h > t1 > t2 > ...`; it is a monomial order and drives both the
/// canonical rendering and exact division.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    base: [i32; 7],
    // exponent of t_{i+1} at index i, no trailing zeros
    t: Vec<i32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VarId, exp: i32) -> Self {
        let mut m = Self::one();
        m.set(v, exp);
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut m = Self::one();
        for (v, e) in pairs {
            let cur = m.exponent(v);
            m.set(v, cur + e);
        }
        m
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        match v.base_index() {
            Some(i) => self.base[i],
            None => {
                let VarId::T(i) = v else { unreachable!() };
                if i == 0 {
                    return 0;
                }
                self.t.get(i as usize - 1).copied().unwrap_or(0)
            }
        }
    }

    pub fn set(&mut self, v: VarId, exp: i32) {
        match v.base_index() {
            Some(i) => self.base[i] = exp,
            None => {
                let VarId::T(i) = v else { unreachable!() };
                assert!(i >= 1, "t-index must be at least 1");
                let idx = i as usize - 1;
                if self.t.len() <= idx {
                    if exp == 0 {
                        return;
                    }
                    self.t.resize(idx + 1, 0);
                }
                self.t[idx] = exp;
                self.trim();
            }
        }
    }

    fn trim(&mut self) {
        while self.t.last() == Some(&0) {
            self.t.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.base.iter().all(|&e| e == 0) && self.t.is_empty()
    }

    /// Nonzero exponents in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        let base = BASE_VARS
            .iter()
            .zip(self.base.iter())
            .filter(|(_, &e)| e != 0)
            .map(|(&v, &e)| (v, e));
        let ts = self
            .t
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (VarId::T(i as u32 + 1), e));
        base.chain(ts)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut base = self.base;
        for (b, o) in base.iter_mut().zip(other.base.iter()) {
            *b += o;
        }
        let n = self.t.len().max(other.t.len());
        let mut t = Vec::with_capacity(n);
        for i in 0..n {
            t.push(self.t.get(i).copied().unwrap_or(0) + other.t.get(i).copied().unwrap_or(0));
        }
        let mut m = Monomial { base, t };
        m.trim();
        m
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            base: self.base.map(|e| -e),
            t: self.t.iter().map(|e| -e).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut m = Monomial {
            base: self.base.map(|e| e * k),
            t: self.t.iter().map(|e| e * k).collect(),
        };
        m.trim();
        m
    }

    /// True if `self = other * m` for a monomial `m` with nonnegative exponents.
    pub fn is_multiple_of(&self, other: &Monomial) -> bool {
        self.base.iter().zip(other.base.iter()).all(|(a, b)| a >= b)
            && (0..self.t.len().max(other.t.len())).all(|i| {
                self.t.get(i).copied().unwrap_or(0) >= other.t.get(i).copied().unwrap_or(0)
            })
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut base = self.base;
        for (b, o) in base.iter_mut().zip(other.base.iter()) {
            *b = (*b).min(*o);
        }
        let n = self.t.len().max(other.t.len());
        let t = (0..n)
            .map(|i| self.t.get(i).copied().unwrap_or(0).min(other.t.get(i).copied().unwrap_or(0)))
            .collect();
        let mut m = Monomial { base, t };
        m.trim();
        m
    }

    /// Weighted t-degree, `t_i` having weight `i`.
    pub fn t_weight(&self) -> i64 {
        self.t
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as i64 + 1) * e as i64)
            .sum()
    }

    /// Total degree in `psi, nu, nu1, nu2`, counting negative exponents.
    pub fn class_degree(&self) -> i64 {
        self.base[..4].iter().map(|&e| e as i64).sum()
    }

    pub fn t_part(&self) -> TMonomial {
        TMonomial(self.t.iter().map(|&e| e.max(0) as u32).collect())
    }

    pub fn without_t(&self) -> Monomial {
        Monomial {
            base: self.base,
            t: Vec::new(),
        }
    }

    pub fn with_t(&self, t: &TMonomial) -> Monomial {
        let mut m = self.without_t();
        m.t = t.0.iter().map(|&e| e as i32).collect();
        m
    }

    /// No negative exponent outside the Laurent directions.
    pub fn is_admissible(&self) -> bool {
        self.base[4..].iter().all(|&e| e >= 0) && self.t.iter().all(|&e| e >= 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.base.iter().all(|&e| e >= 0) && self.t.iter().all(|&e| e >= 0)
    }

    /// Divisible by `nu*nu1` or `nu*nu2`.
    pub fn in_relation_ideal(&self) -> bool {
        self.base[1] != 0 && (self.base[2] != 0 || self.base[3] != 0)
    }
}

/// A monomial in the `t_i` alone: the exponent of `t_{i+1}` sits at index `i`.
///
/// Doubles as the encoding of a multisingularity type `(m_1, ..., m_r)`,
/// read as `t_{m_1} ... t_{m_r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TMonomial(Vec<u32>);

impl TMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        TMonomial(exps)
    }

    /// `t_{m_1} t_{m_2} ...` for the listed parts.
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut exps = Vec::new();
        for &p in parts {
            assert!(p >= 1, "parts are positive");
            let idx = p as usize - 1;
            if exps.len() <= idx {
                exps.resize(idx + 1, 0);
            }
            exps[idx] += 1;
        }
        TMonomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<u32> {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(i as u32 + 1, e as usize));
        }
        parts
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &e)| (i as u32 + 1) * e).sum()
    }

    pub fn num_parts(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn latex(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut out = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push_str(&format!("t_{{{}}}", i + 1)),
                _ => out.push_str(&format!("t_{{{}}}^{{{}}}", i + 1, e)),
            }
        }
        out
    }
}

impl fmt::Display for TMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "t{}", i + 1)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_exponents_stay_trimmed() {
        let m = Monomial::var(VarId::T(3), 2);
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), Monomial::one());
        assert!(m.mul(&inv).is_one());
    }

    #[test]
    fn lex_order_puts_psi_first() {
        let psi = Monomial::var(VarId::Psi, 1);
        let nu2 = Monomial::var(VarId::Nu, 2);
        let nu1 = Monomial::var(VarId::Nu1, 1);
        let nu2b = Monomial::var(VarId::Nu2, 1);
        assert!(psi > nu2);
        assert!(nu1 > nu2b);
    }

    #[test]
    fn tmonomial_parts_round_trip() {
        let t = TMonomial::from_parts(&[1, 2, 1]);
        assert_eq!(t.parts(), vec![2, 1, 1]);
        assert_eq!(t.weight(), 4);
        assert_eq!(t.num_parts(), 3);
        assert_eq!(t.to_string(), "t1^2*t2");
        assert_eq!(TMonomial::one().to_string(), "1");
    }

    #[test]
    fn relation_ideal_detection() {
        let m = Monomial::from_pairs([(VarId::Nu, 1), (VarId::Nu2, 1)]);
        assert!(m.in_relation_ideal());
        assert!(!Monomial::from_pairs([(VarId::Nu1, 1), (VarId::Nu2, 1)]).in_relation_ideal());
    }
}
