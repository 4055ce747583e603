//! exp/log, exact division, substitution and the z-to-t replacement.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::monomial::{Monomial, VarId};
use super::series::{Series, Truncation};
use super::Scalar;
use crate::error::{Error, Result};

/// Grade used by exp/log: weighted t-degree plus h-degree. Every nilpotent
/// argument is concentrated in positive grades.
fn grade(m: &Monomial) -> i64 {
    m.t_weight() + m.exponent(VarId::H) as i64
}

/// Splits `a` into graded pieces `1..=max_grade`.
fn graded_pieces(a: &Series) -> Result<(Vec<Series>, usize)> {
    let mut uses_t = false;
    let mut uses_h = false;
    for (m, _) in a.terms() {
        if grade(m) <= 0 {
            return Err(Error::NonNilpotent(m.to_string()));
        }
        uses_t |= m.t_weight() > 0;
        uses_h |= m.exponent(VarId::H) > 0;
    }
    let trunc = a.truncation();
    let mut max_grade: u64 = 0;
    if uses_t {
        if trunc.t == u32::MAX {
            return Err(Error::Unbounded);
        }
        max_grade += trunc.t as u64;
    }
    if uses_h {
        if trunc.aux == u32::MAX {
            return Err(Error::Unbounded);
        }
        max_grade += trunc.aux as u64;
    }
    let max_grade = max_grade as usize;
    let empty = Series::zero(trunc).with_relations(a.relations_active());
    let mut pieces = vec![empty; max_grade + 1];
    for (m, c) in a.terms() {
        let g = grade(m) as usize;
        if g <= max_grade {
            pieces[g].add_term(m.clone(), c.clone());
        }
    }
    Ok((pieces, max_grade))
}

fn int(n: usize) -> Scalar {
    Scalar::from_integer((n as i64).into())
}

impl Series {
    /// `exp(a)` truncated. The argument must be topologically nilpotent:
    /// every term needs positive t-degree or positive h-degree.
    ///
    /// Solved grade by grade from `D exp(a) = D(a) exp(a)` with `D` the
    /// Euler operator of the grading, which is exact in the truncated ring.
    pub fn exp_trunc(&self) -> Result<Series> {
        let (a, max_grade) = graded_pieces(self)?;
        let trunc = self.truncation();
        let rel = self.relations_active();
        let mut e: Vec<Series> = Vec::with_capacity(max_grade + 1);
        e.push(Series::one(trunc).with_relations(rel));
        for d in 1..=max_grade {
            let mut acc = Series::zero(trunc).with_relations(rel);
            for j in 1..=d {
                if a[j].is_zero() || e[d - j].is_zero() {
                    continue;
                }
                acc = &acc + &(&a[j] * &e[d - j]).scale(&int(j));
            }
            e.push(acc.scale(&(Scalar::one() / int(d))));
        }
        Ok(e.iter().fold(Series::zero(trunc).with_relations(rel), |s, p| &s + p))
    }

    /// `log(1 + a)` truncated, under the same nilpotence condition as
    /// [`Series::exp_trunc`]. Uses `(1 + a) D log(1 + a) = D a`.
    pub fn log1p_trunc(&self) -> Result<Series> {
        let (a, max_grade) = graded_pieces(self)?;
        let trunc = self.truncation();
        let rel = self.relations_active();
        // l[j] holds j * L_j
        let mut l: Vec<Series> = vec![Series::zero(trunc).with_relations(rel)];
        for d in 1..=max_grade {
            let mut acc = a[d].scale(&int(d));
            for j in 1..d {
                if a[d - j].is_zero() || l[j].is_zero() {
                    continue;
                }
                acc = &acc - &(&a[d - j] * &l[j]);
            }
            l.push(acc);
        }
        let mut out = Series::zero(trunc).with_relations(rel);
        for (d, piece) in l.iter().enumerate().skip(1) {
            out = &out + &piece.scale(&(Scalar::one() / int(d)));
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Monomial divisors shift exponents. Otherwise the monomial content is
    /// split off and the primitive part is divided with the lexicographic
    /// order (`psi > nu > nu1 > nu2 > ...`) after clearing negative
    /// exponents; any nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &Series) -> Result<Series> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let not_divisible = || Error::NotDivisible {
            divisor: divisor.to_string(),
        };
        let content = divisor
            .terms()
            .map(|(m, _)| m.clone())
            .reduce(|a, b| a.gcd(&b))
            .expect("nonzero divisor");
        let inv_content = content.inverse();
        let shifted = self.mul_term(&Scalar::one(), &inv_content);

        let quotient = if divisor.len() == 1 {
            let (_, c) = divisor.as_monomial().expect("single term");
            shifted.scale(&(Scalar::one() / c))
        } else {
            // primitive polynomial part of the divisor
            let prim: Vec<(Monomial, Scalar)> = divisor
                .terms()
                .map(|(m, c)| (m.mul(&inv_content), c.clone()))
                .collect();
            let (lead_m, lead_c) = prim.iter().max_by(|a, b| a.0.cmp(&b.0)).cloned().unwrap();
            // clear negative exponents of the dividend
            let mut clear = Monomial::one();
            for (m, _) in shifted.terms() {
                clear = clear.gcd(m);
            }
            let lift = clear.inverse();
            let mut rem: BTreeMap<Monomial, Scalar> =
                shifted.terms().map(|(m, c)| (m.mul(&lift), c.clone())).collect();
            let mut q = Series::zero(Truncation::NONE);
            while let Some((m, c)) = rem.pop_last() {
                if !m.is_multiple_of(&lead_m) {
                    return Err(not_divisible());
                }
                let qm = m.mul(&lead_m.inverse());
                let qc = &c / &lead_c;
                for (bm, bc) in prim.iter().filter(|(bm, _)| bm != &lead_m) {
                    let key = qm.mul(bm);
                    let cancelled = {
                        let entry = rem.entry(key.clone()).or_insert_with(Scalar::zero);
                        *entry -= &qc * bc;
                        entry.is_zero()
                    };
                    if cancelled {
                        rem.remove(&key);
                    }
                }
                q.add_term(qm, qc);
            }
            let unlift = clear;
            let mut out = Series::zero(self.truncation()).with_relations(self.relations_active());
            for (m, c) in q.terms() {
                out.add_term(m.mul(&unlift), c.clone());
            }
            out
        };
        if !quotient.is_admissible() {
            return Err(not_divisible());
        }
        Ok(quotient)
    }

    /// Simultaneous substitution `v -> assignment[v]`.
    ///
    /// A variable occurring with a negative exponent must be assigned a single
    /// nonzero term. The result keeps `self`'s truncation and relation flag.
    pub fn substitute(&self, assignment: &BTreeMap<VarId, Series>) -> Result<Series> {
        let trunc = self.truncation();
        let rel = self.relations_active();
        let values: BTreeMap<VarId, Series> = assignment
            .iter()
            .map(|(v, s)| (*v, s.clone().with_relations(false)))
            .collect();
        let mut powers: HashMap<(VarId, i32), Series> = HashMap::new();
        let mut out = Series::zero(trunc).with_relations(false);
        for (m, c) in self.terms() {
            let mut rest = m.clone();
            let mut factor = Series::constant(c.clone(), Truncation::NONE);
            for (v, e) in m.iter() {
                let Some(val) = values.get(&v) else { continue };
                rest.set(v, 0);
                let p = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = power(val, e, v)?;
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                factor = &factor * &p;
                if factor.is_zero() {
                    break;
                }
            }
            for (fm, fc) in factor.terms() {
                out.add_term(fm.mul(&rest), fc.clone());
            }
        }
        let out = out.truncate_to(trunc).with_relations(rel);
        if !out.is_admissible() {
            return Err(Error::NegativeExponent(out.to_string()));
        }
        Ok(out)
    }

    /// Replaces every `z^n` by `(n + 1) t_n`.
    pub fn replace_z_by_t(&self) -> Result<Series> {
        self.replace_z_by_t_with(ZRule::ShiftedWeight)
    }

    pub fn replace_z_by_t_with(&self, rule: ZRule) -> Result<Series> {
        let mut out = Series::zero(self.truncation()).with_relations(self.relations_active());
        for (m, c) in self.terms() {
            let n = m.exponent(VarId::Z);
            if n <= 0 {
                return Err(Error::MissingZ(m.to_string()));
            }
            let mut rest = m.clone();
            rest.set(VarId::Z, 0);
            let ti = VarId::T(n as u32);
            rest.set(ti, rest.exponent(ti) + 1);
            let mult = match rule {
                ZRule::ShiftedWeight => n + 1,
                ZRule::PlainWeight => n,
            };
            out.add_term(rest, c * Scalar::from_integer(mult.into()));
        }
        Ok(out)
    }
}

/// How a power `z^n` of the distinguished-point variable becomes `t_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZRule {
    /// `z^n -> (n + 1) t_n`, the local-algebra multiplicity `a + b = n + 1`.
    ShiftedWeight,
    /// `z^n -> n t_n`. Does not reproduce the `2 psi t_1` leading term of the
    /// distinguished-point series; kept for negative testing only.
    PlainWeight,
}

fn power(val: &Series, e: i32, v: VarId) -> Result<Series> {
    if e >= 0 {
        return Ok(val.pow(e as u32));
    }
    let (m, c) = val.as_monomial().ok_or(if val.is_zero() {
        Error::DivisionByZero
    } else {
        Error::NonMonomialInverse(v)
    })?;
    let k = -e;
    let inv_c = Scalar::one() / c;
    let mut coeff = Scalar::one();
    for _ in 0..k {
        coeff *= &inv_c;
    }
    Ok(Series::term(coeff, m.inverse().pow(k), val.truncation()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::TMonomial;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n.into(), d.into())
    }

    fn v(var: VarId, tr: Truncation) -> Series {
        Series::var(var, tr)
    }

    #[test]
    fn exp_of_zero_is_one() {
        let tr = Truncation::new(3, 3);
        assert_eq!(Series::zero(tr).exp_trunc().unwrap(), Series::one(tr));
    }

    #[test]
    fn exp_psi_t1_to_order_two() {
        let tr = Truncation::new(2, 0);
        let a = &v(VarId::Psi, tr) * &v(VarId::T(1), tr);
        let e = a.exp_trunc().unwrap();
        let expected = &(&Series::one(tr) + &a) + &a.pow(2).scale(&q(1, 2));
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_rejects_constant_terms() {
        let tr = Truncation::new(2, 2);
        let a = &Series::one(tr) + &v(VarId::T(1), tr);
        assert!(matches!(a.exp_trunc(), Err(Error::NonNilpotent(_))));
        assert!(matches!(v(VarId::Psi, tr).log1p_trunc(), Err(Error::NonNilpotent(_))));
    }

    #[test]
    fn exp_requires_a_finite_cap() {
        let a = v(VarId::T(1), Truncation::NONE);
        assert_eq!(a.exp_trunc(), Err(Error::Unbounded));
    }

    #[test]
    fn exp_h_expansion_matches_printed_h4_coefficient() {
        // exp(t1 h^2/nu + t2 h^3/nu + t3 h^4/nu), coefficient of h^4
        let tr = Truncation::new(4, 8);
        let inv_nu = Series::term(Scalar::one(), Monomial::var(VarId::Nu, -1), tr);
        let mut arg = Series::zero(tr);
        for i in 1..=3u32 {
            let m = Monomial::from_pairs([(VarId::T(i), 1), (VarId::H, i as i32 + 1)]);
            arg = &arg + &inv_nu.mul_term(&Scalar::one(), &m);
        }
        let h4 = arg.exp_trunc().unwrap().coeff_of_var(VarId::H, 4);
        let expected = Series::from_terms(
            [
                (Monomial::from_pairs([(VarId::T(1), 2), (VarId::Nu, -2)]), q(1, 2)),
                (Monomial::from_pairs([(VarId::T(3), 1), (VarId::Nu, -1)]), q(1, 1)),
            ],
            tr,
        );
        assert_eq!(h4, expected);
    }

    #[test]
    fn log1p_of_psi_t1() {
        let tr = Truncation::new(2, 0);
        let a = &v(VarId::Psi, tr) * &v(VarId::T(1), tr);
        let expected = &a - &a.pow(2).scale(&q(1, 2));
        assert_eq!(a.log1p_trunc().unwrap(), expected);
    }

    #[test]
    fn log1p_inverts_exp_on_a_monomial() {
        let tr = Truncation::new(3, 0);
        let a = Series::term(
            Scalar::one(),
            Monomial::from_pairs([(VarId::Nu1, 1), (VarId::Nu2, 1), (VarId::T(1), 1)]),
            tr,
        );
        let e = a.exp_trunc().unwrap();
        let back = (&e - &Series::one(tr)).log1p_trunc().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn div_by_monomial() {
        let tr = Truncation::NONE;
        let num = Series::term(Scalar::one(), Monomial::from_pairs([(VarId::Psi, 2), (VarId::T(1), 1)]), tr);
        let got = num.div_exact(&v(VarId::Psi, tr)).unwrap();
        assert_eq!(got, Series::term(Scalar::one(), Monomial::from_pairs([(VarId::Psi, 1), (VarId::T(1), 1)]), tr));
    }

    #[test]
    fn div_by_binomial() {
        let tr = Truncation::NONE;
        let n1 = v(VarId::Nu1, tr);
        let n2 = v(VarId::Nu2, tr);
        let num = &(&(&n1 * &n1) * &n2) + &(&(&n2 * &n2) * &n1);
        let got = num.div_exact(&(&n1 + &n2)).unwrap();
        assert_eq!(got, &n1 * &n2);
    }

    #[test]
    fn div_reports_remainder() {
        let tr = Truncation::NONE;
        let n1 = v(VarId::Nu1, tr);
        let n2 = v(VarId::Nu2, tr);
        let err = n1.div_exact(&(&n1 + &n2)).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { .. }));
        assert_eq!(n1.div_exact(&Series::zero(tr)), Err(Error::DivisionByZero));
        // t is polynomial, so t1 / t1^2 is not allowed
        let t1 = v(VarId::T(1), tr);
        assert!(t1.div_exact(&(&t1 * &t1)).is_err());
    }

    #[test]
    fn div_laurent_dividend_by_binomial_with_content() {
        // (psi^2 (nu1+nu2) - 2 psi nu1 nu2) t1 / (nu1 nu2)
        let tr = Truncation::new(1, 0);
        let psi = v(VarId::Psi, tr);
        let n1 = v(VarId::Nu1, tr);
        let n2 = v(VarId::Nu2, tr);
        let t1 = v(VarId::T(1), tr);
        let num = &(&(&(&psi * &psi) * &(&n1 + &n2)) - &(&(&psi * &n1) * &n2).scale(&q(2, 1))) * &t1;
        let got = num.div_exact(&(&n1 * &n2)).unwrap();
        assert_eq!(got.len(), 3);
        assert_eq!(got.coefficient(&Monomial::from_pairs([(VarId::Psi, 1), (VarId::T(1), 1)])), q(-2, 1));
        // and dividing by psi (nu1 + nu2) from a Laurent numerator
        let lhs = &(&psi * &(&n1 + &n2)) * &Series::term(Scalar::one(), Monomial::var(VarId::Nu1, -3), tr);
        let got = lhs.div_exact(&(&psi * &(&n1 + &n2))).unwrap();
        assert_eq!(got, Series::term(Scalar::one(), Monomial::var(VarId::Nu1, -3), tr));
    }

    #[test]
    fn substitute_caustic_class() {
        // psi^2 - nu1 nu2 at psi = 2 tau, nu1 = 2 tau, nu2 = tau
        let tr = Truncation::NONE;
        let s = &(&v(VarId::Psi, tr) * &v(VarId::Psi, tr)) - &(&v(VarId::Nu1, tr) * &v(VarId::Nu2, tr));
        let tau = v(VarId::Tau, tr);
        let a: BTreeMap<_, _> = [
            (VarId::Psi, tau.scale(&q(2, 1))),
            (VarId::Nu1, tau.scale(&q(2, 1))),
            (VarId::Nu2, tau.clone()),
        ]
        .into_iter()
        .collect();
        assert_eq!(s.substitute(&a).unwrap(), (&tau * &tau).scale(&q(2, 1)));
    }

    #[test]
    fn substitute_identity_and_zero() {
        let tr = Truncation::NONE;
        let psi = v(VarId::Psi, tr);
        let nu = v(VarId::Nu, tr);
        let s = &(&psi - &nu) * &(&psi - &nu.scale(&q(2, 1)));
        let ident: BTreeMap<_, _> = [(VarId::Psi, psi.clone()), (VarId::Nu, nu.clone())].into_iter().collect();
        assert_eq!(s.substitute(&ident).unwrap(), s);
        let zero: BTreeMap<_, _> = [(VarId::Nu, Series::zero(tr))].into_iter().collect();
        assert_eq!(s.substitute(&zero).unwrap(), &psi * &psi);
    }

    #[test]
    fn substitute_rejects_non_monomial_inverse() {
        let tr = Truncation::NONE;
        let s = Series::term(Scalar::one(), Monomial::var(VarId::Nu, -1), tr);
        let a: BTreeMap<_, _> = [(VarId::Nu, &v(VarId::Psi, tr) + &v(VarId::Tau, tr))].into_iter().collect();
        assert_eq!(s.substitute(&a), Err(Error::NonMonomialInverse(VarId::Nu)));
        let z: BTreeMap<_, _> = [(VarId::Nu, Series::zero(tr))].into_iter().collect();
        assert_eq!(s.substitute(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn z_replacement_rule() {
        let tr = Truncation::new(4, 4);
        let psi = v(VarId::Psi, tr);
        let z = v(VarId::Z, tr);
        assert_eq!(
            (&psi * &z).replace_z_by_t().unwrap(),
            (&psi * &v(VarId::T(1), tr)).scale(&q(2, 1))
        );
        let cube = &(&psi * &z) * &(&z * &z);
        assert_eq!(cube.replace_z_by_t().unwrap(), (&psi * &v(VarId::T(3), tr)).scale(&q(4, 1)));
        let two = &(&psi * &z)
            * &(&(&(&psi - &v(VarId::Nu1, tr)) * &z) + &(&(&psi - &v(VarId::Nu2, tr)) * &z));
        let got = two.replace_z_by_t().unwrap().coeff_of(&TMonomial::from_parts(&[2]));
        let expected = &(&psi * &psi).scale(&q(6, 1)) - &(&psi * &(&v(VarId::Nu1, tr) + &v(VarId::Nu2, tr))).scale(&q(3, 1));
        assert_eq!(got, expected.truncate_to(tr));
        assert!(matches!(psi.replace_z_by_t(), Err(Error::MissingZ(_))));
    }

    #[test]
    fn plain_weight_rule_differs() {
        let tr = Truncation::new(4, 4);
        let s = &v(VarId::Psi, tr) * &v(VarId::Z, tr);
        assert_eq!(
            s.replace_z_by_t_with(ZRule::PlainWeight).unwrap(),
            &v(VarId::Psi, tr) * &v(VarId::T(1), tr)
        );
    }
}
