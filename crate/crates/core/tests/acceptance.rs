//! Acceptance criteria. Prints one `PASS`/`FAIL` line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hurwitz_core::exactring::{frac, int, Monomial, Scalar, Series, TMonomial, Truncation, VarId};
use hurwitz_core::partitions::partitions_between;
use hurwitz_core::permoracle::oracle_for_stratum;
use hurwitz_core::unfolding::{
    direct_y_classes, exp_fstar_classes, gysin, mono_x_class, p_polynomial, stratum_report, EquivariantClass,
    FamilySpec, MultisingularityType, Projection, Space,
};
use hurwitz_core::universal::{mono_series, UniversalTables};
use hurwitz_core::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn fact(n: i64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn pow(b: i64, e: i64) -> Scalar {
    if e >= 0 {
        Scalar::from_integer(num_traits::pow(BigInt::from(b), e as usize))
    } else {
        Scalar::one() / Scalar::from_integer(num_traits::pow(BigInt::from(b), (-e) as usize))
    }
}

fn mu(parts: &[u32]) -> MultisingularityType {
    MultisingularityType::new(parts.to_vec()).unwrap()
}

fn laurent(k: u32, l: u32) -> FamilySpec {
    FamilySpec::laurent(k, l).unwrap()
}

fn polynomial(n: u32) -> FamilySpec {
    FamilySpec::polynomial(n).unwrap()
}

fn collect(bad: Vec<String>, ok: String) -> Outcome {
    if bad.is_empty() {
        Ok(ok)
    } else {
        Err(bad.join("; "))
    }
}

/// The tabulated polynomials, written out in k and l.
fn printed_p(parts: &[u32], k: i64, l: i64) -> Option<Scalar> {
    let (s, p) = (k + l, k * l);
    let v = match parts {
        [2] => int(p - 1),
        [1, 1] => frac(p * s - 4 * p + 2, 2),
        [3] => int(p * p - 5 * p + 2 * s),
        [2, 1] => int((p - 3) * (p * s - 6 * p + 2 * s)),
        [1, 1, 1] => frac(p * p * (s * s - 12 * s + 40) + p * (6 * s - 80) + 24 * s, 6),
        _ => return None,
    };
    Some(v)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let rows = partitions_between(2, 3);
    for parts in &rows {
        let m = mu(parts);
        let p = p_polynomial(&m).map_err(|e| format!("{m}: {e}"))?;
        // Both sides have degree <= 6 in each of k and l, so agreement on a
        // 7 x 7 grid is polynomial identity.
        for k in 0..=6u32 {
            for l in 0..=6u32 {
                let want = printed_p(parts, k as i64, l as i64).expect("tabulated row");
                if p.eval(k, l) != want {
                    bad.push(format!("{m} at ({k},{l}): {} vs {want}", p.eval(k, l)));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        bad.push(format!("runtime {elapsed:?} exceeds 30 s"));
    }
    collect(bad, format!("{} rows reproduced as polynomial identities in {elapsed:.2?}", rows.len()))
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for s in 2..=8u32 {
        for k in 1..s {
            let l = s - k;
            let (ki, li) = (k as i64, l as i64);
            let want = Scalar::from_integer(fact(ki + li - 1)) * pow(ki, ki + 1) * pow(li, li + 1)
                / Scalar::from_integer(fact(ki) * fact(li));
            let got = stratum_report(laurent(k, l), &MultisingularityType::empty())
                .map_err(|e| e.to_string())?
                .deg_ll;
            count += 1;
            if got != want {
                bad.push(format!("I_{{{k},{l}}}: {got} vs {want}"));
            }
        }
    }
    for n in 1..=8u32 {
        let want = pow(n as i64 + 1, n as i64 - 1);
        let got = stratum_report(polynomial(n), &MultisingularityType::empty())
            .map_err(|e| e.to_string())?
            .deg_ll;
        count += 1;
        if got != want {
            bad.push(format!("A_{n}: {got} vs {want}"));
        }
    }
    for (k, l, want) in [(1, 1, 1), (2, 1, 8), (2, 2, 96), (3, 1, 81)] {
        let got = stratum_report(laurent(k, l), &MultisingularityType::empty()).unwrap().deg_ll;
        if got != int(want) {
            bad.push(format!("spot I_{{{k},{l}}}: {got} vs {want}"));
        }
    }
    collect(bad, format!("{count} families and 4 spot values"))
}

fn oracle(f: FamilySpec, m: &MultisingularityType) -> Result<Scalar, String> {
    match oracle_for_stratum(f, m) {
        Ok((_, c)) => Ok(c),
        Err(Error::ImpossibleProfile(_)) => Ok(Scalar::zero()),
        Err(e) => Err(format!("{f} {m}: {e}")),
    }
}

fn criterion_3() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let (bad, count) = pool.install(|| -> Result<(Vec<String>, usize), String> {
        let mut bad = Vec::new();
        let mut count = 0;
        for s in 2..=6u32 {
            for k in 1..s {
                let f = laurent(k, s - k);
                for parts in partitions_between(0, s) {
                    let m = mu(&parts);
                    let got = stratum_report(f, &m).map_err(|e| e.to_string())?.hurwitz;
                    let want = oracle(f, &m)?;
                    count += 1;
                    if got != want {
                        bad.push(format!("{f} {m}: pipeline {got}, oracle {want}"));
                    }
                }
            }
        }
        Ok((bad, count))
    })?;
    let elapsed = start.elapsed();
    let mut bad = bad;
    for (k, l, parts, want) in [
        (2, 1, vec![2], int(1)),
        (2, 2, vec![1, 1], int(1)),
        (2, 2, vec![2], int(3)),
        (1, 1, vec![], frac(1, 2)),
    ] {
        let f = laurent(k, l);
        let m = mu(&parts);
        let got = stratum_report(f, &m).unwrap().hurwitz;
        let o = oracle(f, &m)?;
        if got != want || o != want {
            bad.push(format!("spot {f} {m}: pipeline {got}, oracle {o}, expected {want}"));
        }
    }
    if elapsed > Duration::from_secs(300) {
        bad.push(format!("runtime {elapsed:?} exceeds 5 min"));
    }
    collect(bad, format!("{count} strata agree with the oracle, single-threaded in {elapsed:.2?}"))
}

/// The tabulated polynomial-family formula; `None` where a factorial
/// argument is negative.
fn printed_polynomial_degree(n: i64, m: &MultisingularityType) -> Option<Scalar> {
    let size = m.size() as i64;
    let r = m.len() as i64;
    if n - r - size < 0 {
        return None;
    }
    let mut aut = BigInt::one();
    let mut counts = BTreeMap::new();
    for &p in m.parts() {
        *counts.entry(p).or_insert(0i64) += 1;
    }
    for c in counts.values() {
        aut *= fact(*c);
    }
    Some(pow(n + 1, n - 1 - size) * Scalar::from_integer(fact(n - size)) / Scalar::from_integer(aut * fact(n - r - size)))
}

fn criterion_4() -> (Outcome, Vec<String>) {
    let mut bad = Vec::new();
    let mut errata = Vec::new();
    let mut count = 0;
    for n in 1..=4u32 {
        let f = polynomial(n);
        for parts in partitions_between(0, n) {
            let m = mu(&parts);
            let report = match stratum_report(f, &m) {
                Ok(r) => r,
                Err(e) => return (Err(e.to_string()), errata),
            };
            let o = match oracle(f, &m) {
                Ok(o) => o,
                Err(e) => return (Err(e), errata),
            };
            count += 1;
            let want = &o * int(n as i64 + 1);
            if report.deg_ll != want {
                bad.push(format!("{f} {m}: deg_LL {}, (n+1) x oracle {want}", report.deg_ll));
            }
            if let Some(printed) = printed_polynomial_degree(n as i64, &m) {
                if printed != report.deg_ll {
                    errata.push(format!("{f} {m}: printed {printed}, oracle-backed {}", report.deg_ll));
                }
            }
        }
    }
    let caustic = printed_polynomial_degree(3, &mu(&[2]));
    let pipeline = stratum_report(polynomial(3), &mu(&[2])).map(|r| r.deg_ll).ok();
    if caustic != Some(int(1)) || pipeline != Some(int(4)) {
        bad.push(format!("A_3 caustic: printed {caustic:?}, pipeline {pipeline:?}"));
    }
    (collect(bad, format!("{count} strata, deg_LL = (n+1) x oracle")), errata)
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for s in 2..=7i64 {
        for k in 1..s {
            let l = s - k;
            let p = k * l;
            let f = laurent(k as u32, l as u32);
            let a2 = mono_x_class(f, 2).map_err(|e| e.to_string())?;
            if a2 != EquivariantClass::monomial(Space::X, 2, int(p * p - p)) {
                bad.push(format!("{f} A_2(X) = {a2}"));
            }
            let sigma2 = stratum_report(f, &mu(&[2])).map_err(|e| e.to_string())?.class_b;
            if sigma2 != EquivariantClass::monomial(Space::B, 1, int(s * (p - 1))) {
                bad.push(format!("{f} sigma_2 = {sigma2}"));
            }
            let sigma11 = stratum_report(f, &mu(&[1, 1])).map_err(|e| e.to_string())?.class_b;
            if sigma11 != EquivariantClass::monomial(Space::B, 1, frac(s * (p * s - 4 * p + 2), 2)) {
                bad.push(format!("{f} sigma_11 = {sigma11}"));
            }
            count += 1;
        }
    }
    let t = UniversalTables::build(2).map_err(|e| e.to_string())?;
    let var = |v| Series::var(v, Truncation::NONE);
    let (psi, n1, n2) = (var(VarId::Psi), var(VarId::Nu1), var(VarId::Nu2));
    let sum = &n1 + &n2;
    let prod = &n1 * &n2;
    let bracket = &(&(&psi.pow(3) * &sum) - &(&psi.pow(2) * &prod).scale(&int(4))) + &prod.pow(2).scale(&int(2));
    let closed = (&(&psi * &sum) * &bracket).mul_term(&frac(1, 2), &Monomial::from_pairs([(VarId::Nu1, -2), (VarId::Nu2, -2)]));
    let got = (&t.ni_prime + &t.ni_dblprime).coeff_of(&TMonomial::from_parts(&[1, 1]));
    if got != closed {
        bad.push(format!("A_11(Y): {got} vs {closed}"));
    }
    collect(bad, format!("A_2(X), sigma_2, sigma_11 on {count} Laurent families; A_11(Y) symbolic"))
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    for (k, l, parts) in [(1, 1, vec![2]), (1, 1, vec![1, 1]), (1, 2, vec![1, 1]), (2, 1, vec![1, 1])] {
        let f = laurent(k, l);
        let m = mu(&parts);
        let r = stratum_report(f, &m).map_err(|e| e.to_string())?;
        if !r.class_y.is_zero() || !r.class_b.is_zero() || !r.deg_stratum.is_zero() || !r.deg_ll.is_zero() || !r.flags.empty {
            bad.push(format!("{f} {m}: class_B {}, deg_LL {}", r.class_b, r.deg_ll));
        }
    }
    collect(bad, "I_{1,1} caustic and Maxwell, I_{1,2} Maxwell vanish".into())
}

fn is_poly(s: &Series) -> bool {
    s.terms().all(|(m, _)| m.iter().all(|(_, e)| e >= 0))
}

fn swap12(s: &Series) -> Series {
    let assignment = BTreeMap::from([
        (VarId::Nu1, Series::var(VarId::Nu2, Truncation::NONE)),
        (VarId::Nu2, Series::var(VarId::Nu1, Truncation::NONE)),
    ]);
    s.substitute(&assignment).unwrap()
}

fn graded(s: &Series) -> bool {
    s.terms().all(|(m, _)| {
        let deg: i64 = [VarId::Psi, VarId::Nu, VarId::Nu1, VarId::Nu2].iter().map(|&v| m.exponent(v) as i64).sum();
        deg == m.t_weight()
    })
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let t = UniversalTables::build(6).map_err(|e| e.to_string())?;
    for (name, s) in [("R_A", &t.ra), ("R_I", &t.ri), ("R", &t.r_full)] {
        if !is_poly(s) {
            bad.push(format!("{name} not polynomial"));
        }
    }
    for (name, s) in [("R_I", &t.ri), ("N'_I", &t.ni_prime), ("N''_I", &t.ni_dblprime)] {
        if swap12(s) != *s {
            bad.push(format!("{name} not symmetric in nu1, nu2"));
        }
    }
    for (name, s) in [("N_A", &t.na), ("N_I", &(&t.ni_prime + &t.ni_dblprime)), ("R", &t.r_full)] {
        if !graded(s) {
            bad.push(format!("{name} not homogeneous"));
        }
    }
    let mono = mono_series(6).map_err(|e| e.to_string())?;
    for m in 1..=6u32 {
        let via_mono = mono.coeff_of_var(VarId::Z, m as i32).with_relations(true);
        let via_multi = t.r_full.coeff_of(&TMonomial::from_parts(&[m]));
        if via_mono != via_multi {
            bad.push(format!("[A_{m}(X)]: {via_mono} vs {via_multi}"));
        }
    }
    let mut families = Vec::new();
    for n in 1..=5u32 {
        families.push(polynomial(n));
    }
    for s in 2..=6u32 {
        for k in 1..s {
            families.push(laurent(k, s - k));
        }
    }
    let mut routes = 0;
    for &f in &families {
        let codim = 4.min(f.params());
        let direct = direct_y_classes(f, codim).map_err(|e| e.to_string())?;
        if exp_fstar_classes(f, codim).map_err(|e| e.to_string())? != direct {
            bad.push(format!("{f}: exp f_* differs from direct specialization"));
        }
        for m in 1..=codim {
            let x = gysin(&mono_x_class(f, m).map_err(|e| e.to_string())?, f, Projection::P).unwrap();
            let y_class = direct
                .get(&TMonomial::from_parts(&[m]))
                .cloned()
                .unwrap_or_else(|| EquivariantClass::zero(Space::Y));
            let y = gysin(&y_class, f, Projection::Q).unwrap();
            routes += 1;
            if x != y {
                bad.push(format!("{f} m={m}: X-route {x}, Y-route {y}"));
            }
        }
    }
    collect(
        bad,
        format!(
            "polynomiality, symmetry, grading and mono/multi to codim 6; exp f_* on {} families and {routes} caustic routes to codim 4",
            families.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: u32, title: &str, o: Outcome| match o {
        Ok(detail) => println!("PASS criterion {n} ({title}): {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL criterion {n} ({title}): {detail}");
        }
    };
    report(1, "table reproduction", criterion_1());
    report(2, "generic degrees", criterion_2());
    report(3, "oracle sweep", criterion_3());
    let (c4, errata) = criterion_4();
    report(4, "polynomial family sweep", c4);
    report(5, "known class values", criterion_5());
    report(6, "empty strata", criterion_6());
    report(7, "structural property suites", criterion_7());
    println!("INFO printed polynomial degree formula differs on {} strata (erratum):", errata.len());
    for e in &errata {
        println!("INFO   {e}");
    }
    if failed == 0 {
        println!("acceptance: 7 of 7 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 7 criteria failed");
        ExitCode::FAILURE
    }
}
