use std::fmt::Write as _;

use hurwitz_core::exactring::{Series, VarId};
use hurwitz_core::partitions::partitions_between;
use hurwitz_core::unfolding::{p_polynomial, p_table_entry, MultisingularityType, StratumReport};
use hurwitz_core::universal::UniversalTables;
use serde_json::{Map, Value};

use crate::{Contribution, Format};

struct Named<'a> {
    key: &'static str,
    latex: &'static str,
    series: &'a Series,
    by_z: bool,
}

fn selection(t: &UniversalTables, c: Contribution) -> Vec<Named<'_>> {
    let n = |key, latex, series, by_z| Named {
        key,
        latex,
        series,
        by_z,
    };
    let na = n("N_A", r"{\cal N}_A", &t.na, false);
    let ma = n("M_A", r"{\cal M}_A", &t.ma, false);
    let nip = n("N'_I", r"{\cal N}'_I", &t.ni_prime, false);
    let nidp = n("N''_I", r"{\cal N}''_I", &t.ni_dblprime, false);
    let ra = n("R_A", r"{\cal R}_A", &t.ra, false);
    let r0 = n("R_0", r"{\cal R}_0", &t.r0, false);
    let ri = n("R_I", r"{\cal R}_I", &t.ri, false);
    match c {
        Contribution::All => vec![
            na,
            ma,
            nip,
            nidp,
            ra,
            r0,
            ri,
            n("R", r"{\cal R}", &t.r_full, false),
            n("mono", r"\sum_i [A_i(X)] z^i", &t.mono, true),
        ],
        Contribution::A => vec![na, ra],
        Contribution::I => vec![nip, nidp, ri],
        Contribution::Zero => vec![r0],
    }
}

fn z_rows(s: &Series) -> Vec<(i32, Series)> {
    let top = s.terms().map(|(m, _)| m.exponent(VarId::Z)).max().unwrap_or(0);
    (0..=top)
        .map(|i| (i, s.coeff_of_var(VarId::Z, i)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Coefficient rows keyed by t-monomial (weight, then reverse lex) or by
/// power of `z`.
fn rows(s: &Series, by_z: bool) -> Vec<(String, Series)> {
    if by_z {
        return z_rows(s)
            .into_iter()
            .map(|(i, c)| {
                let key = match i {
                    0 => "1".to_string(),
                    1 => "z".to_string(),
                    _ => format!("z^{i}"),
                };
                (key, c)
            })
            .collect();
    }
    let mut rows: Vec<_> = s.t_coefficients().into_iter().collect();
    rows.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then(b.0.cmp(&a.0)));
    rows.into_iter().map(|(t, c)| (t.to_string(), c)).collect()
}

fn z_latex(s: &Series) -> String {
    let parts: Vec<String> = z_rows(s)
        .into_iter()
        .map(|(i, v)| {
            let z = match i {
                0 => return v.to_latex(),
                1 => "z".to_string(),
                _ => format!("z^{{{i}}}"),
            };
            if v.len() == 1 {
                format!("{}{z}", v.to_latex())
            } else {
                format!(r"\left({}\right){z}", v.to_latex())
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("\n  + ").replace("+ -", "- ")
    }
}

pub fn universal(t: &UniversalTables, c: Contribution, format: Format) -> String {
    let sel = selection(t, c);
    match format {
        Format::Text => {
            let mut out = String::new();
            for s in &sel {
                let _ = writeln!(out, "{}:", s.key);
                let rs = rows(s.series, s.by_z);
                if rs.is_empty() {
                    let _ = writeln!(out, "  0");
                }
                for (k, v) in rs {
                    let _ = writeln!(out, "  {k}: {v}");
                }
            }
            out
        }
        Format::Json => {
            let obj = |s: &Named| -> Value {
                let map: Map<String, Value> = rows(s.series, s.by_z)
                    .into_iter()
                    .map(|(k, v)| (k, Value::String(v.to_string())))
                    .collect();
                Value::Object(map)
            };
            let value = if sel.len() == 1 {
                obj(&sel[0])
            } else {
                Value::Object(sel.iter().map(|s| (s.key.to_string(), obj(s))).collect())
            };
            format!("{}\n", serde_json::to_string_pretty(&value).expect("JSON values serialize"))
        }
        Format::Latex => {
            let mut out = String::new();
            for s in &sel {
                let body = if s.by_z {
                    z_latex(s.series)
                } else {
                    s.series.to_latex_by_t()
                };
                let _ = writeln!(out, "{} = {}", s.latex, body);
            }
            out
        }
    }
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "not run",
    }
}

pub fn stratum(r: &StratumReport, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(r)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "family: {}", r.family);
            let _ = writeln!(out, "mu: {}", r.mu);
            let _ = writeln!(out, "codim: {}", r.codim);
            let _ = writeln!(out, "class_Y: {}", r.class_y);
            let _ = writeln!(out, "class_B: {}", r.class_b);
            let _ = writeln!(out, "deg_space: {}", r.deg_space);
            let _ = writeln!(out, "deg_stratum: {}", r.deg_stratum);
            let _ = writeln!(out, "deg_image: {}", r.deg_image);
            let _ = writeln!(out, "deg_LL: {}", r.deg_ll);
            let _ = writeln!(out, "hurwitz: {}", r.hurwitz);
            if let Some(c) = &r.closed_form {
                let _ = writeln!(out, "closed_form: {c}");
            }
            if let Some(c) = &r.closed_form_printed {
                let _ = writeln!(out, "closed_form_printed: {c}");
            }
            if let Some(p) = &r.p_value {
                let _ = writeln!(out, "P: {p}");
            }
            let _ = writeln!(out, "empty: {}", if r.flags.empty { "yes" } else { "no" });
            let _ = writeln!(out, "closed_form_match: {}", flag(r.flags.closed_form_match));
            let _ = writeln!(out, "oracle_match: {}", flag(r.flags.oracle_match));
            Ok(out)
        }
        Format::Latex => {
            let mut out = String::new();
            let _ = writeln!(out, r"\begin{{align*}}");
            let _ = writeln!(out, r"\sigma_{{{}}} &\subset B_{{{}}}\\", mu_latex(&r.mu), r.family);
            let _ = writeln!(out, r"[\sigma] &= {}\\", class_latex(&r.class_b.to_strings()));
            let _ = writeln!(out, r"{{\rm deg}}~\sigma &= {}\\", scalar_latex(&r.deg_stratum.to_string()));
            let _ = writeln!(out, r"{{\rm deg}}~\Lambda(\sigma) &= {}\\", scalar_latex(&r.deg_image.to_string()));
            let _ = writeln!(out, r"{{\rm deg}}~\Lambda|_\sigma &= {}\\", scalar_latex(&r.deg_ll.to_string()));
            let _ = writeln!(out, r"h &= {}", scalar_latex(&r.hurwitz.to_string()));
            let _ = writeln!(out, r"\end{{align*}}");
            Ok(out)
        }
    }
}

fn mu_latex(mu: &MultisingularityType) -> String {
    let parts: Vec<String> = mu.parts().iter().map(u32::to_string).collect();
    if parts.is_empty() {
        r"\emptyset".into()
    } else {
        parts.join(",")
    }
}

fn scalar_latex(s: &str) -> String {
    match s.split_once('/') {
        Some((n, d)) if n.starts_with('-') => format!(r"-\frac{{{}}}{{{d}}}", &n[1..]),
        Some((n, d)) => format!(r"\frac{{{n}}}{{{d}}}"),
        None => s.to_string(),
    }
}

fn class_latex(coeffs: &[String]) -> String {
    let mut terms = Vec::new();
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let tau = match d {
            0 => String::new(),
            1 => r"\tau".into(),
            _ => format!(r"\tau^{{{d}}}"),
        };
        terms.push(format!("{}{tau}", scalar_latex(c)));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Rows `(m) -> P_m` for `2 <= |m| <= max`; stops at the first failure.
pub fn table(max: u32, format: Format) -> (String, Option<String>) {
    let mut rows = Vec::new();
    let mut err = None;
    for parts in partitions_between(2, max.max(1)) {
        let mu = MultisingularityType::new(parts).expect("partition parts are positive");
        match p_polynomial(&mu) {
            Ok(p) => {
                let printed = p_table_entry(&mu).map(|e| e == p);
                rows.push((mu, p, printed));
            }
            Err(e) => {
                err = Some(format!("{mu}: {e}"));
                break;
            }
        }
    }
    let text = match format {
        Format::Text => {
            let mut out = String::new();
            for (mu, p, printed) in &rows {
                let note = match printed {
                    Some(true) => "  [matches table]",
                    Some(false) => "  [DIFFERS from table]",
                    None => "",
                };
                let _ = writeln!(out, "{mu}: {p}{note}");
            }
            out
        }
        Format::Json => {
            let map: Map<String, Value> = rows
                .iter()
                .map(|(mu, p, _)| (mu.to_string(), Value::String(p.to_string())))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize"))
        }
        Format::Latex => {
            let mut out = String::new();
            let _ = writeln!(out, r"\begin{{array}}{{|c|c|}}");
            let _ = writeln!(out, r"\hline (m_1,\dots,m_r)&P_{{m_1,\dots,m_r}}\\\hline");
            for (mu, p, _) in &rows {
                let _ = writeln!(out, r" {mu}&{}\\", p.to_latex());
            }
            let _ = writeln!(out, r"\hline");
            let _ = writeln!(out, r"\end{{array}}");
            out
        }
    };
    (text, err)
}
