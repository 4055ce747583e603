use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{Monomial, TMonomial, VarId};
use super::Scalar;
use crate::error::{Error, Result};

/// Truncation caps: weighted t-degree (`t_i` weighs `i`) and the degree in
/// each of the auxiliary variables `z` and `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub t: u32,
    pub aux: u32,
}

impl Truncation {
    pub const NONE: Truncation = Truncation {
        t: u32::MAX,
        aux: u32::MAX,
    };

    pub fn new(t: u32, aux: u32) -> Self {
        Truncation { t, aux }
    }

    pub fn min(self, other: Truncation) -> Truncation {
        Truncation {
            t: self.t.min(other.t),
            aux: self.aux.min(other.aux),
        }
    }

    pub fn keeps(&self, m: &Monomial) -> bool {
        m.t_weight() <= self.t as i64
            && m.exponent(VarId::Z) as i64 <= self.aux as i64
            && m.exponent(VarId::H) as i64 <= self.aux as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Mul,
}

/// A sparse truncated Laurent series with exact rational coefficients.
///
/// Canonical: no zero coefficients, nothing beyond the truncation, and when
/// `relations` is set nothing divisible by `nu*nu1` or `nu*nu2`. Equality is
/// equality of canonical term sets; the truncation caps and the relation
/// flag are not compared.
#[derive(Clone, Debug)]
pub struct Series {
    pub(crate) terms: BTreeMap<Monomial, Scalar>,
    pub(crate) trunc: Truncation,
    pub(crate) relations: bool,
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            terms: BTreeMap::new(),
            trunc,
            relations: false,
        }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::constant(Scalar::one(), trunc)
    }

    pub fn constant(c: Scalar, trunc: Truncation) -> Self {
        Self::term(c, Monomial::one(), trunc)
    }

    pub fn var(v: VarId, trunc: Truncation) -> Self {
        Self::term(Scalar::one(), Monomial::var(v, 1), trunc)
    }

    pub fn term(c: Scalar, m: Monomial, trunc: Truncation) -> Self {
        Self::from_terms([(m, c)], trunc)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(terms: I, trunc: Truncation) -> Self {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn with_relations(mut self, active: bool) -> Self {
        self.relations = active;
        if active {
            self.terms.retain(|m, _| !m.in_relation_ideal());
        }
        self
    }

    /// Lowers the caps to `trunc` (componentwise minimum with the current ones).
    pub fn truncate_to(mut self, trunc: Truncation) -> Self {
        self.trunc = self.trunc.min(trunc);
        let keep = self.trunc;
        self.terms.retain(|m, _| keep.keeps(m));
        self
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn relations_active(&self) -> bool {
        self.relations
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || !self.trunc.keeps(&m) || (self.relations && m.in_relation_ideal()) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn empty_like(&self, other: &Series) -> Series {
        Series {
            terms: BTreeMap::new(),
            trunc: self.trunc.min(other.trunc),
            relations: self.relations,
        }
    }

    /// Checked sum or product; the truncation of the result is the
    /// componentwise minimum of the operands'.
    pub fn combine(a: &Series, b: &Series, mode: CombineMode) -> Result<Series> {
        if a.relations != b.relations {
            return Err(Error::RelationMismatch);
        }
        Ok(match mode {
            CombineMode::Add => a.add_unchecked(b),
            CombineMode::Mul => a.mul_unchecked(b),
        })
    }

    fn add_unchecked(&self, other: &Series) -> Series {
        let mut out = self.empty_like(other);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn mul_unchecked(&self, other: &Series) -> Series {
        let mut out = self.empty_like(other);
        let trunc = out.trunc;
        let max_w = if trunc.t == u32::MAX { i64::MAX } else { trunc.t as i64 };
        // bucket the right factor by t-weight so that pairs beyond the cap are never formed
        let mut buckets: BTreeMap<i64, Vec<(&Monomial, &Scalar)>> = BTreeMap::new();
        for (m, c) in &other.terms {
            buckets.entry(m.t_weight()).or_default().push((m, c));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            let wa = ma.t_weight();
            for (_, bucket) in buckets.range(..=max_w.saturating_sub(wa)) {
                for (mb, cb) in bucket {
                    let m = ma.mul(mb);
                    if !trunc.keeps(&m) || (out.relations && m.in_relation_ideal()) {
                        continue;
                    }
                    let prod = ca * *cb;
                    match acc.get_mut(&m) {
                        Some(v) => *v += prod,
                        None => {
                            acc.insert(m, prod);
                        }
                    }
                }
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
        } else {
            for v in out.terms.values_mut() {
                *v *= c;
            }
        }
        out
    }

    /// Multiplies by the monomial `c * m`.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Series {
        let mut out = Series {
            terms: BTreeMap::new(),
            trunc: self.trunc,
            relations: self.relations,
        };
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.trunc).with_relations(self.relations);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn derivative(&self, v: VarId) -> Series {
        let mut out = Series::zero(self.trunc).with_relations(self.relations);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set(v, e - 1);
            out.add_term(dm, c * Scalar::from_integer(e.into()));
        }
        out
    }

    /// The coefficient of `v^exp`, as a series in the remaining variables.
    pub fn coeff_of_var(&self, v: VarId, exp: i32) -> Series {
        let mut out = Series::zero(self.trunc).with_relations(self.relations);
        for (m, c) in &self.terms {
            if m.exponent(v) == exp {
                let mut rest = m.clone();
                rest.set(v, 0);
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// The exact coefficient of the plain monomial `t` (no automorphism
    /// factor), as a series in the remaining variables.
    pub fn coeff_of(&self, t: &TMonomial) -> Series {
        let mut out = Series::zero(self.trunc).with_relations(self.relations);
        for (m, c) in &self.terms {
            if &m.t_part() == t {
                out.add_term(m.without_t(), c.clone());
            }
        }
        out
    }

    /// Groups the terms by their t-monomial.
    pub fn t_coefficients(&self) -> BTreeMap<TMonomial, Series> {
        let mut out: BTreeMap<TMonomial, Series> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.t_part())
                .or_insert_with(|| Series::zero(self.trunc).with_relations(self.relations))
                .add_term(m.without_t(), c.clone());
        }
        out
    }

    /// Keeps only the terms satisfying `pred`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, pred: F) -> Series {
        let mut out = self.clone();
        out.terms.retain(|m, _| pred(m));
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(Monomial::is_admissible)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    /// `Some(d)` if every term has degree `d` in `psi, nu, nu1, nu2`.
    pub fn class_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(Monomial::class_degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one())
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Series {}

impl Add for &Series {
    type Output = Series;
    /// Panics if the relation flags differ; use [`Series::combine`] for a checked sum.
    fn add(self, rhs: &Series) -> Series {
        Series::combine(self, rhs, CombineMode::Add).expect("relation flags must agree")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self + &(-rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    /// Panics if the relation flags differ; use [`Series::combine`] for a checked product.
    fn mul(self, rhs: &Series) -> Series {
        Series::combine(self, rhs, CombineMode::Mul).expect("relation flags must agree")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        &self + &rhs
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        &self - &rhs
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
