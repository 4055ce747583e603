//! Universal generating functions for classes of (multi)singularities.
//!
//! All series are truncated at weighted t-degree `codim`; the auxiliary
//! variable `h` (and `z`) is carried up to degree `2 * codim`, enough since a
//! t-monomial of weight `d` with `r` parts sits at `h^(d + r)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactring::{frac, int, Monomial, Series, TMonomial, Truncation, VarId, ZRule};

fn trunc_for(codim: u32) -> Truncation {
    Truncation::new(codim, 2 * codim)
}

fn var(v: VarId, codim: u32) -> Series {
    Series::var(v, trunc_for(codim))
}

/// `(psi - start*nu)(psi - (start+1)*nu) ... ` with `count` factors.
fn falling(nu: VarId, start: i64, count: usize, tr: Truncation) -> Series {
    let psi = Series::var(VarId::Psi, tr);
    let nu = Series::var(nu, tr);
    let mut acc = Series::one(tr);
    for j in 0..count as i64 {
        acc = &acc * &(&psi - &nu.scale(&int(start + j)));
    }
    acc
}

/// `exp(sum_i t_i h^(i+1) / nu)` truncated; its `h^m` coefficients are the
/// rational functions `P_m`.
fn h_exponential(codim: u32, nu: VarId) -> Result<Series> {
    let tr = trunc_for(codim);
    let mut arg = Series::zero(tr);
    for i in 1..=codim {
        let m = Monomial::from_pairs([(VarId::T(i), 1), (VarId::H, i as i32 + 1), (nu, -1)]);
        arg = &arg + &Series::term(int(1), m, tr);
    }
    arg.exp_trunc()
}

fn na_in(codim: u32, nu: VarId) -> Result<Series> {
    let tr = trunc_for(codim);
    let e = h_exponential(codim, nu)?;
    let mut out = Series::one(tr);
    for m in 2..=2 * codim {
        let p = e.coeff_of_var(VarId::H, m as i32);
        if p.is_zero() {
            continue;
        }
        out = &out + &(&falling(nu, 0, m as usize, tr) * &p);
    }
    Ok(out)
}

fn ma_in(codim: u32, nu: VarId) -> Result<Series> {
    let tr = trunc_for(codim);
    let e = h_exponential(codim, nu)?;
    // 1/(1 - z h)
    let mut geom = Series::zero(tr);
    for j in 0..=2 * codim {
        let m = Monomial::from_pairs([(VarId::Z, j as i32), (VarId::H, j as i32)]);
        geom = &geom + &Series::term(int(1), m, tr);
    }
    let gen = &e * &geom;
    let mut out = Series::one(tr);
    for n in 1..=2 * codim {
        let q = gen.coeff_of_var(VarId::H, n as i32);
        if q.is_zero() {
            continue;
        }
        out = &out + &(&falling(nu, 1, n as usize, tr) * &q);
    }
    Ok(out)
}

/// Multisingularity series of the `A_n` unfolding, in `psi, nu, t`.
pub fn build_na(codim: u32) -> Result<Series> {
    na_in(codim, VarId::Nu)
}

/// Multisingularity series with a distinguished point, in `psi, nu, z, t`.
pub fn build_ma(codim: u32) -> Result<Series> {
    ma_in(codim, VarId::Nu)
}

/// The two summands of the `I_{k,l}` multisingularity series: no singular
/// point at the node, and a singular point at the node.
pub fn build_ni(codim: u32) -> Result<(Series, Series)> {
    build_ni_with(codim, ZRule::ShiftedWeight)
}

pub fn build_ni_with(codim: u32, rule: ZRule) -> Result<(Series, Series)> {
    let prime = &na_in(codim, VarId::Nu1)? * &na_in(codim, VarId::Nu2)?;
    if codim == 0 {
        return Ok((prime, Series::zero(trunc_for(0))));
    }
    // z^n becomes t_n, so only z-degree + t-weight <= codim - 1 can survive
    // in each factor next to the leading psi*z
    let keep = |m: &Monomial| m.exponent(VarId::Z) as i64 + m.t_weight() < codim as i64;
    let m1 = ma_in(codim, VarId::Nu1)?.filter(keep);
    let m2 = ma_in(codim, VarId::Nu2)?.filter(keep);
    let psi_z = &var(VarId::Psi, codim) * &var(VarId::Z, codim);
    let prod = &(&psi_z * &m1) * &m2;
    let dbl = prod.replace_z_by_t_with(rule)?;
    Ok((prime, dbl))
}

/// A-contribution: `R_A = nu/psi * log N_A`.
pub fn build_ra(codim: u32) -> Result<Series> {
    let na = build_na(codim)?;
    let log = (&na - &Series::one(trunc_for(codim))).log1p_trunc()?;
    let nu_log = &log * &var(VarId::Nu, codim);
    nu_log.div_exact(&var(VarId::Psi, codim))
}

/// 0-contribution: the `nu -> 0` limit of `R_A`.
pub fn build_r0(codim: u32) -> Result<Series> {
    r0_from_ra(&build_ra(codim)?)
}

fn r0_from_ra(ra: &Series) -> Result<Series> {
    let zero = Series::zero(ra.truncation());
    ra.substitute(&BTreeMap::from([(VarId::Nu, zero)]))
}

/// I-contribution: `R_I = nu1 nu2 / (psi (nu1 + nu2)) * log(N'_I + N''_I)`.
pub fn build_ri(codim: u32) -> Result<Series> {
    let (prime, dbl) = build_ni(codim)?;
    ri_from_ni(codim, &prime, &dbl)
}

fn ri_from_ni(codim: u32, prime: &Series, dbl: &Series) -> Result<Series> {
    let one = Series::one(trunc_for(codim));
    let log = (&(prime + dbl) - &one).log1p_trunc()?;
    let delta = &var(VarId::Nu1, codim) * &var(VarId::Nu2, codim);
    let scaled = &log * &delta;
    let sum = &var(VarId::Nu1, codim) + &var(VarId::Nu2, codim);
    scaled.div_exact(&var(VarId::Psi, codim))?.div_exact(&sum)
}

/// `(r0, ra, ri)` with `r = ra + ri - r0` in `Q[psi, nu, nu1, nu2] / (nu nu1, nu nu2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionTriple {
    pub r0: Series,
    pub ra: Series,
    pub ri: Series,
}

impl ContributionTriple {
    pub fn assemble(&self) -> Series {
        let ra = self.ra.clone().with_relations(true);
        let ri = self.ri.clone().with_relations(true);
        let r0 = self.r0.clone().with_relations(true);
        &(&ra + &ri) - &r0
    }

    /// `ra(psi, 0) = r0` and `ri(psi, 0, 0) = r0`.
    pub fn is_consistent(&self) -> Result<bool> {
        let zero = Series::zero(Truncation::NONE);
        let ra0 = self.ra.substitute(&BTreeMap::from([(VarId::Nu, zero.clone())]))?;
        let ri0 = self
            .ri
            .substitute(&BTreeMap::from([(VarId::Nu1, zero.clone()), (VarId::Nu2, zero)]))?;
        Ok(ra0 == self.r0 && ri0 == self.r0)
    }
}

/// The full residual series `R = R_A + R_I - R_0` and its contributions.
pub fn assemble_r(codim: u32) -> Result<(ContributionTriple, Series)> {
    let ra = build_ra(codim)?;
    let r0 = r0_from_ra(&ra)?;
    let ri = build_ri(codim)?;
    let triple = ContributionTriple { r0, ra, ri };
    let full = triple.assemble();
    Ok((triple, full))
}

/// Splits a class of the quotient ring into its 0-, A- and I-contributions.
pub fn split_contributions(r: &Series) -> Result<ContributionTriple> {
    let zero = Series::zero(r.truncation());
    let ra = r.substitute(&BTreeMap::from([(VarId::Nu1, zero.clone()), (VarId::Nu2, zero.clone())]))?;
    let ri = r.substitute(&BTreeMap::from([(VarId::Nu, zero.clone())]))?;
    let r0 = ra.substitute(&BTreeMap::from([(VarId::Nu, zero)]))?;
    let triple = ContributionTriple {
        r0: r0.with_relations(false),
        ra: ra.with_relations(false),
        ri: ri.with_relations(false),
    };
    if &triple.assemble() != r {
        return Err(Error::Contract(format!("{r} mixes nu with nu1/nu2")));
    }
    Ok(triple)
}

/// `L(psi, nu; z) = sum_n (psi - nu)...(psi - n nu) z^n`.
pub fn monosingularity_l(codim: u32, nu: VarId) -> Series {
    let tr = Truncation::new(0, codim);
    let mut out = Series::zero(tr);
    for n in 0..=codim {
        let z = Series::term(int(1), Monomial::var(VarId::Z, n as i32), tr);
        out = &out + &(&falling(nu, 1, n as usize, tr) * &z);
    }
    out
}

/// Generating function `sum_i [A_i(X)] z^i` of monosingularity classes, up
/// to `z^codim`. The derivative term is `d/dz`.
pub fn mono_series(codim: u32) -> Result<Series> {
    let wide = Truncation::new(0, codim + 1);
    let tr = Truncation::new(0, codim);
    let l = monosingularity_l(codim + 1, VarId::Nu);
    let l1 = monosingularity_l(codim + 1, VarId::Nu1);
    let l2 = monosingularity_l(codim + 1, VarId::Nu2);
    let nu1 = Series::var(VarId::Nu1, wide);
    let nu2 = Series::var(VarId::Nu2, wide);
    let z2 = Series::term(int(1), Monomial::var(VarId::Z, 2), wide);
    let bracket = &(&l1.div_exact(&nu1)? + &l2.div_exact(&nu2)?)
        + &(&(&z2 * &l1) * &l2).derivative(VarId::Z);
    // the top z-degree of the derivative is incomplete
    let bracket = bracket.truncate_to(tr);
    let i_part = (&bracket * &(&nu1 * &nu2)).div_exact(&(&nu1 + &nu2))?;
    let psi = Series::var(VarId::Psi, tr);
    let mut zero_part = Series::zero(tr);
    for n in 0..=codim {
        let z = Series::term(int(1), Monomial::var(VarId::Z, n as i32), tr);
        zero_part = &zero_part + &(&psi.pow(n) * &z);
    }
    let out = &(&l.truncate_to(tr) + &i_part.truncate_to(tr)) - &zero_part;
    Ok(out.truncate_to(tr))
}

/// Everything above at one codimension.
#[derive(Clone, Debug)]
pub struct UniversalTables {
    pub codim: u32,
    pub na: Series,
    pub ma: Series,
    pub ni_prime: Series,
    pub ni_dblprime: Series,
    pub ra: Series,
    pub r0: Series,
    pub ri: Series,
    pub r_full: Series,
    pub mono: Series,
}

impl UniversalTables {
    pub fn build(codim: u32) -> Result<Self> {
        let na = build_na(codim)?;
        let ma = build_ma(codim)?;
        let (ni_prime, ni_dblprime) = build_ni(codim)?;
        let log_a = (&na - &Series::one(trunc_for(codim))).log1p_trunc()?;
        let ra = (&log_a * &var(VarId::Nu, codim)).div_exact(&var(VarId::Psi, codim))?;
        let r0 = r0_from_ra(&ra)?;
        let ri = ri_from_ni(codim, &ni_prime, &ni_dblprime)?;
        let triple = ContributionTriple {
            r0: r0.clone(),
            ra: ra.clone(),
            ri: ri.clone(),
        };
        let r_full = triple.assemble();
        let mono = mono_series(codim)?;
        Ok(UniversalTables {
            codim,
            na,
            ma,
            ni_prime,
            ni_dblprime,
            ra,
            r0,
            ri,
            r_full,
            mono,
        })
    }

    /// `N'_I + N''_I`.
    pub fn ni_total(&self) -> Series {
        &self.ni_prime + &self.ni_dblprime
    }

    pub fn triple(&self) -> ContributionTriple {
        ContributionTriple {
            r0: self.r0.clone(),
            ra: self.ra.clone(),
            ri: self.ri.clone(),
        }
    }
}

/// The 0-contribution from the closed partition sum
/// `sum (-2)^{m_1} (-3)^{m_2} ... (2m_1 + 3m_2 + ... - 1)_{r-2} psi^{|m|} prod t_i^{m_i}/m_i!`
/// with `r` the number of parts, `(a)_b = a(a-1)...(a-b+1)` and `(a)_{-1} = 1/a`.
///
/// Kept as a comparison only; [`build_r0`] is authoritative.
pub fn r0_closed_form(codim: u32) -> Series {
    let tr = Truncation::new(codim, 2 * codim);
    let mut out = Series::zero(tr);
    for weight in 1..=codim {
        for parts in crate::partitions::partitions_of(weight) {
            let t = TMonomial::from_parts(&parts);
            let exps = t.exponents();
            let r = t.num_parts() as i64;
            let mut coeff = int(1);
            let mut a = -1i64;
            for (i, &mi) in exps.iter().enumerate() {
                let base = -(i as i64 + 2);
                for _ in 0..mi {
                    coeff *= int(base);
                }
                a += (i as i64 + 2) * mi as i64;
                coeff /= int(crate::partitions::factorial(mi as u64) as i64);
            }
            let b = r - 2;
            if b == -1 {
                coeff *= frac(1, a);
            } else {
                for j in 0..b {
                    coeff *= int(a - j);
                }
            }
            let m = Monomial::var(VarId::Psi, weight as i32).with_t(&t);
            out = &out + &Series::term(coeff, m, tr);
        }
    }
    out
}

/// True if each t-coefficient of weight `d` is homogeneous of class degree `d`.
pub fn is_graded(s: &Series) -> bool {
    s.t_coefficients()
        .iter()
        .all(|(t, c)| c.class_degree().is_none_or(|d| d == t.weight() as i64))
}

/// Exchange `nu1 <-> nu2`.
pub fn swap_nu12(s: &Series) -> Result<Series> {
    let tr = s.truncation();
    s.substitute(&BTreeMap::from([
        (VarId::Nu1, Series::var(VarId::Nu2, tr)),
        (VarId::Nu2, Series::var(VarId::Nu1, tr)),
    ]))
}
