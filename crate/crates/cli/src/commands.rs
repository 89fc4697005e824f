use maasslab::acceptance::{run_all, Mode};
use maasslab::congruence::{family_congruence, padic_limit_check, xi_serre_check, CongruenceReport, LimitFamily};
use maasslab::hecke::{eigen_check, expected_eigenvalue, intertwine_check, xi_check, HeckeOp};
use maasslab::numeric::{laplacian_residual, modularity_residual, Evaluator};
use maasslab::padic::{gen_kummer_check, kummer_check};
use maasslab::qexp::{
    cohen_eisenstein, eisenstein, eisenstein_p, maass_g, maass_g_p, maass_h, maass_h_p, stabilization_check,
};
use maasslab::{Complex64, DirichletChar, Family, HarmonicQExp, PadicQExp, SymScalar};
use serde_json::{json, Value};

use crate::output::{csv_field, verdict, Outcome};
use crate::{CliError, FormArgs, RunConfig};

pub enum Form {
    Exact(HarmonicQExp),
    Padic(PadicQExp),
}

fn need<T>(v: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for family {}", family.name())))
}

pub fn build(args: &FormArgs, cfg: &RunConfig) -> Result<Form, CliError> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(maasslab::Error::from)?;
        return Ok(if v.get("padic").is_some_and(|p| !p.is_null()) {
            Form::Padic(PadicQExp::from_json(&v)?)
        } else {
            Form::Exact(HarmonicQExp::from_json(&v)?)
        });
    }
    let family = args
        .family
        .ok_or_else(|| CliError::Usage("either --family or --input is required".into()))?;
    let n = args.n.unwrap_or(cfg.trunc);
    if n == 0 {
        return Err(CliError::Usage("truncation must be positive".into()));
    }
    Ok(match family {
        Family::G => Form::Exact(maass_g(need(args.k, "k", family)?, n)?),
        Family::H => Form::Exact(maass_h(need(args.r, "r", family)?, n)?),
        Family::Eis => Form::Exact(eisenstein(need(args.k2, "k2", family)?, n)?),
        Family::EisP => Form::Exact(eisenstein_p(
            need(args.k2, "k2", family)?,
            need(args.p, "p", family)?,
            n,
        )?),
        Family::Cohen => Form::Exact(cohen_eisenstein(need(args.r, "r", family)?, n)?),
        Family::Gp => Form::Padic(maass_g_p(
            need(args.k, "k", family)?,
            need(args.p, "p", family)?,
            n,
            cfg.prec,
        )?),
        Family::Hp => Form::Padic(maass_h_p(
            need(args.r, "r", family)?,
            need(args.p, "p", family)?,
            n,
            cfg.prec,
        )?),
    })
}

fn build_exact(args: &FormArgs, cfg: &RunConfig) -> Result<HarmonicQExp, CliError> {
    match build(args, cfg)? {
        Form::Exact(f) => Ok(f),
        Form::Padic(f) => Err(CliError::Usage(format!(
            "{} is p-adic; this check needs an exact expansion",
            f.family.name()
        ))),
    }
}

fn describe(f: &HarmonicQExp) -> String {
    maasslab::hecke::form_id(f)
}

pub fn expand(args: &FormArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    Ok(match build(args, cfg)? {
        Form::Exact(f) => {
            let mut csv = String::from("part,n,coeff\n");
            csv.push_str(&format!("minus_zero,0,{}\n", csv_field(&f.minus_zero().to_string())));
            for (n, c) in f.plus_terms() {
                csv.push_str(&format!("plus,{n},{}\n", csv_field(&c.to_string())));
            }
            for (n, c) in f.minus_terms() {
                csv.push_str(&format!("minus,{n},{}\n", csv_field(&c.to_string())));
            }
            Outcome::new(true, f.to_text(), f.to_json()).with_csv(csv)
        }
        Form::Padic(f) => {
            let mut csv = String::from("part,n,coeff\n");
            csv.push_str(&format!("minus_zero,0,{}\n", csv_field(&f.minus_zero.to_string())));
            for (n, c) in &f.plus {
                csv.push_str(&format!("plus,{n},{}\n", csv_field(&c.to_string())));
            }
            for (n, c) in &f.minus {
                csv.push_str(&format!("minus,{n},{}\n", csv_field(&c.to_string())));
            }
            Outcome::new(true, f.to_text(), f.to_json()).with_csv(csv)
        }
    })
}

pub fn eval(args: &FormArgs, zs: &[Complex64], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let ev = Evaluator::new(&f);
    let points = zs
        .iter()
        .map(|z| ev.eval(*z, f.truncation))
        .collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    let mut csv = String::from("x,y,truncation,re,im,tail_estimate,warnings\n");
    for e in &points {
        text.push_str(&format!(
            "{}({}, {}) = {:.15e} {:+.15e}i  (tail {:.1e})\n",
            describe(&f),
            e.z.re,
            e.z.im,
            e.value.re,
            e.value.im,
            e.tail_estimate
        ));
        for w in &e.warnings {
            text.push_str(&format!("  warning: {w}\n"));
        }
        csv.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{}\n",
            e.z.re,
            e.z.im,
            e.truncation,
            e.value.re,
            e.value.im,
            e.tail_estimate,
            csv_field(&e.warnings.join("; "))
        ));
    }
    Ok(Outcome::new(true, text, json!({ "form": describe(&f), "points": points })).with_csv(csv))
}

pub fn selftest(quick: bool) -> Outcome {
    let mode = if quick { Mode::Quick } else { Mode::Full };
    let results = run_all(mode);
    let pass = results.iter().all(|r| r.pass);
    let mut text: String = results.iter().map(|r| r.line() + "\n").collect();
    let failed = results.iter().filter(|r| !r.pass).count();
    text.push_str(&format!(
        "{} of {} criteria passed\n",
        results.len() - failed,
        results.len()
    ));
    let mut csv = String::from("id,name,pass,seconds,budget_seconds,detail\n");
    for r in &results {
        csv.push_str(&format!(
            "{},{},{},{:.3},{},{}\n",
            r.id,
            csv_field(r.name),
            r.pass,
            r.seconds,
            r.budget_seconds,
            csv_field(&r.detail)
        ));
    }
    Outcome::new(pass, text, json!({ "mode": mode, "pass": pass, "criteria": results })).with_csv(csv)
}

/// The family parameter (`k` of `G`, `r` of `H`) recovered from the weight.
fn default_eigenvalue(f: &HarmonicQExp, p: u64) -> Result<SymScalar, CliError> {
    let w = f.weight;
    match f.family {
        Family::G => Ok(expected_eigenvalue(p, -w.floor() / 2)),
        Family::H => Ok(expected_eigenvalue(p, (1 - w.twice()) / 2)),
        Family::Eis => Ok(SymScalar::from_rat(
            maasslab::arith::rat(1, 1) + maasslab::arith::pow_int(p as i64, w.floor() - 1),
        )),
        other => Err(CliError::Usage(format!(
            "no default eigenvalue for family {}; pass --lambda",
            other.name()
        ))),
    }
}

pub fn hecke(args: &FormArgs, range: Option<u64>, lambda: Option<&str>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let p = args.p.ok_or_else(|| CliError::Usage("--p is required".into()))?;
    let op = HeckeOp::for_weight(f.weight, p);
    let lambda = match lambda {
        Some(s) => s.parse::<SymScalar>()?,
        None => default_eigenvalue(&f, p)?,
    };
    let step = if f.weight.is_integer() { p } else { p * p };
    let r = eigen_check(&f, op, &lambda, range.unwrap_or(f.truncation / step))?;
    let mut text = format!(
        "{} {} on {}, p = {}, eigenvalue {}, checked |n| <= {}",
        verdict(r.pass),
        r.operator,
        r.form,
        r.p,
        r.eigenvalue,
        r.checked_range
    );
    if let Some(n) = r.first_failure {
        text.push_str(&format!("; first failure at n = {n}"));
    }
    for note in &r.notes {
        text.push_str(&format!("\n  note: {note}"));
    }
    Ok(Outcome::new(r.pass, text, json!(r)))
}

pub fn xi(args: &FormArgs, range: Option<u64>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let r = xi_check(&f, range.unwrap_or(f.truncation))?;
    let mut text = format!(
        "{} xi({}) = {} * {} through n <= {}",
        verdict(r.pass),
        r.form,
        r.constant.as_deref().unwrap_or("?"),
        r.target,
        r.checked_range
    );
    if let Some(n) = r.first_failure {
        text.push_str(&format!("; first failure at n = {n}"));
    }
    text.push_str(&format!(
        "\n  constant term ratio {} ({})",
        r.constant_ratio.as_deref().unwrap_or("none"),
        if r.constant_matches { "matches" } else { "differs" }
    ));
    Ok(Outcome::new(r.pass, text, json!(r)))
}

pub fn intertwine(args: &FormArgs, range: Option<u64>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let p = args.p.ok_or_else(|| CliError::Usage("--p is required".into()))?;
    let step = if f.weight.is_integer() { p } else { p * p };
    let range = range.unwrap_or(f.truncation / step);
    let pass = intertwine_check(&f, p, range)?;
    let text = format!(
        "{} xi intertwines {} on {}, p = {p}, |n| <= {range}",
        verdict(pass),
        HeckeOp::for_weight(f.weight, p).name(),
        describe(&f)
    );
    Ok(Outcome::new(
        pass,
        text,
        json!({ "form": describe(&f), "p": p, "checked_range": range, "pass": pass }),
    ))
}

pub fn zagier(n: i64, s: i64, m_max: usize, table: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = maasslab::zagier::verify_zagier(n, s, m_max, cfg.exact_tol(), table)?;
    let text = format!(
        "{} E_{n}({s}) through m <= {m_max}{}: max coefficient deviation {:.2e}, series deviation {:.2e}",
        verdict(r.pass),
        if r.vanishing_branch { " (vanishing branch)" } else { "" },
        r.max_coeff_deviation,
        r.series_deviation
    );
    let mut csv = String::from("m,gauss_sum_coeff,closed_form_coeff\n");
    for (m, a, b) in r.per_m.iter().flatten() {
        csv.push_str(&format!("{m},{a:e},{b:e}\n"));
    }
    Ok(Outcome::new(r.pass, text, json!(r)).with_csv(csv))
}

fn floor_text(c: &CongruenceReport) -> String {
    let f = |fl: &maasslab::congruence::Floor| match fl.min {
        Some(v) if fl.saturated => format!(">= {v}"),
        Some(v) => v.to_string(),
        None => "none".into(),
    };
    format!(
        "{} vs {}: plus {}, minus {}, constants {}",
        c.forms[0],
        c.forms[1],
        f(&c.floor_plus),
        f(&c.floor_minus),
        f(&c.floor_constants)
    )
}

pub fn congruence(p: u64, k1: i64, k2: i64, a: u32, range: u64) -> Result<Outcome, CliError> {
    let r = family_congruence(p, k1, k2, a, range)?;
    let mut text = format!(
        "{} congruence mod {p}^{a} through n <= {range}\n  {}\n  {}",
        verdict(r.pass),
        floor_text(&r.eisenstein),
        floor_text(&r.maass)
    );
    for note in r.eisenstein.notes.iter().chain(&r.maass.notes) {
        text.push_str(&format!("\n  note: {note}"));
    }
    let mut csv = String::from("pair,part,floor,saturated\n");
    for (name, c) in [("eisenstein", &r.eisenstein), ("maass", &r.maass)] {
        for (part, fl) in [
            ("plus", c.floor_plus),
            ("minus", c.floor_minus),
            ("constants", c.floor_constants),
        ] {
            csv.push_str(&format!(
                "{name},{part},{},{}\n",
                fl.min.map_or(String::new(), |v| v.to_string()),
                fl.saturated
            ));
        }
    }
    Ok(Outcome::new(r.pass, text, json!(r)).with_csv(csv))
}

pub fn limit(
    family: LimitFamily,
    k0: i64,
    p: u64,
    depth: u32,
    range: u64,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let prec = cfg.prec.max(depth + 12);
    let r = padic_limit_check(family, k0, p, depth, range, prec)?;
    let bad: Vec<_> = r
        .rows
        .iter()
        .filter(|row| !row.increasing && !row.exceptional)
        .collect();
    let mut text = format!(
        "{} {} along k_i = {:?}, n <= {range}, precision {prec}: {} of {} slots strictly increasing",
        verdict(r.pass),
        r.target,
        r.sequence,
        r.rows.len() - bad.len(),
        r.rows.len()
    );
    for row in bad.iter().take(10) {
        text.push_str(&format!("\n  {} {:?}", row.slot, row.valuations));
    }
    if !r.exceptional.is_empty() {
        text.push_str(&format!("\n  exceptional indices (reported only): {:?}", r.exceptional));
    }
    let mut csv = String::from("slot");
    for k in &r.sequence {
        csv.push_str(&format!(",v_k{k}"));
    }
    csv.push_str(",increasing,exceptional\n");
    for row in &r.rows {
        csv.push_str(&row.slot);
        for (v, s) in row.valuations.iter().zip(&row.saturated) {
            csv.push_str(&format!(
                ",{}{}",
                v.map_or(String::new(), |v| v.to_string()),
                if *s { "+" } else { "" }
            ));
        }
        csv.push_str(&format!(",{},{}\n", row.increasing, row.exceptional));
    }
    Ok(Outcome::new(r.pass, text, json!(r)).with_csv(csv))
}

pub fn serre(p: u64, depth: u32, range: u64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let prec = cfg.prec.max(depth + 12);
    let r = xi_serre_check(p, depth, range, prec)?;
    let mut text = format!(
        "{} xi(G^({p})(z, 0)) against G_2^({p}) through n <= {range}",
        verdict(r.pass)
    );
    if let Some(n) = r.first_mismatch {
        text.push_str(&format!("; first mismatch at n = {n}"));
    }
    text.push_str(&format!("\n  approximant floors {:?}", r.approximant_floors));
    Ok(Outcome::new(r.pass, text, json!(r)))
}

pub fn kummer(p: u64, n: i64, m: i64, a: u32, d: Option<i64>) -> Result<Outcome, CliError> {
    let (pass, what) = match d {
        None => (kummer_check(p, n, m, a)?, "zeta".to_string()),
        Some(d) => (
            gen_kummer_check(p, &DirichletChar::kronecker(d)?, n, m, a)?,
            format!("L(chi_{d})"),
        ),
    };
    let text = format!(
        "{} Kummer congruence for {what}: p = {p}, n = {n}, m = {m}, a = {a}",
        verdict(pass)
    );
    Ok(Outcome::new(
        pass,
        text,
        json!({ "p": p, "n": n, "m": m, "a": a, "d": d, "pass": pass }),
    ))
}

pub fn stabilization(k: i64, p: u64, range: u64) -> Result<Outcome, CliError> {
    let pass = stabilization_check(k, p, range)?;
    let text = format!(
        "{} G^({p})(z, {}) = G(z) - G({p}z) through n <= {range}",
        verdict(pass),
        -2 * k
    );
    Ok(Outcome::new(
        pass,
        text,
        json!({ "k": k, "p": p, "checked_range": range, "pass": pass }),
    ))
}

pub fn laplacian(args: &FormArgs, zs: &[Complex64], h: f64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let tol = cfg.numeric_tol();
    numeric_report(&f, zs, tol, "Laplacian residual", |z| {
        laplacian_residual(&f, z, h, f.truncation)
    })
}

pub fn modularity(args: &FormArgs, m: [i64; 4], zs: &[Complex64], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = build_exact(args, cfg)?;
    let tol = cfg.numeric_tol();
    numeric_report(&f, zs, tol, &format!("residual under {m:?}"), |z| {
        modularity_residual(&f, m, z, f.truncation)
    })
}

fn numeric_report(
    f: &HarmonicQExp,
    zs: &[Complex64],
    tol: f64,
    what: &str,
    eval: impl Fn(Complex64) -> maasslab::Result<f64>,
) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for z in zs {
        rows.push((*z, eval(*z)?));
    }
    let pass = rows.iter().all(|(_, r)| *r < tol);
    let mut text = format!("{} {what} for {}, tolerance {tol:e}", verdict(pass), describe(f));
    let mut csv = String::from("x,y,residual\n");
    for (z, r) in &rows {
        text.push_str(&format!("\n  z = {} + {}i: {r:.3e}", z.re, z.im));
        csv.push_str(&format!("{},{},{r:e}\n", z.re, z.im));
    }
    let points: Vec<Value> = rows
        .iter()
        .map(|(z, r)| json!({ "z": [z.re, z.im], "residual": r }))
        .collect();
    Ok(Outcome::new(
        pass,
        text,
        json!({ "form": describe(f), "tolerance": tol, "points": points, "pass": pass }),
    )
    .with_csv(csv))
}
