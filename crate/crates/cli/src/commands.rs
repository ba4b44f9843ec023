use std::cmp::Ordering;

use anyhow::{bail, Context, Result};
use bcff_core::beta::Beta;
use bcff_core::bcmap::bc_check;
use bcff_core::carlitz::{
    carlitz_exp_truncated, carlitz_phi, frobenius_action_check, phi_mod_p_check, torsion_points,
};
use bcff_core::chebotarev::{count_by_class, density_check};
use bcff_core::divisors::{Divisor, Prime};
use bcff_core::ffpoly::{count_irreducibles_u64, is_irreducible, prime_table};
use bcff_core::mass::{rat_to_string, FormalMass};
use bcff_core::measures::{CylinderFn, KmsSystem, PrimeCharacter};
use bcff_core::ratioset::{build_pairing, detect_type, divergence_diagnostic, flow_report};
use bcff_core::ratioset::{sample_cocycle_lattice, TailSpace, DEFAULT_KMAX};
use bcff_core::zeta::{zeta_closed_form, zeta_partial_eval};
use bcff_core::Error;
use serde_json::{json, Value};

use crate::config::{beta, RunConfig};
use crate::report::{emit, Report, Table, INEXACT_BANNER};
use crate::{Cli, Command, ExtArgs};

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::from_cli(cli)?;
    let report = match &cli.command {
        Command::Primes { d, count_only } => primes(&cfg, *d, *count_only)?,
        Command::Zeta {
            dmax,
            beta,
            exclude,
        } => zeta(&cfg, *dmax, beta.as_deref(), exclude)?,
        Command::Kms {
            ext,
            beta,
            dmax,
            state,
            cylinder,
            divisor,
            exclude,
            chi,
        } => kms(&cfg, ext, beta, *dmax, state, cylinder, divisor, exclude, chi)?,
        Command::RatioSet {
            ext,
            beta,
            dmax,
            exclude,
            theta,
            samples,
        } => ratio_set(&cfg, ext, beta, *dmax, exclude, *theta, *samples)?,
        Command::Carlitz {
            phi,
            torsion,
            exp,
            bound,
        } => carlitz(&cfg, phi.as_deref(), torsion.as_deref(), *exp, *bound)?,
        Command::BcCheck { m, dmax } => bccheck(&cfg, m, *dmax)?,
        Command::Chebotarev { ext, dmax, c } => chebotarev(&cfg, ext, *dmax, *c)?,
        Command::Flow { beta, n } => flow(&cfg, beta, *n)?,
    };
    if report.inexact {
        eprintln!("{INEXACT_BANNER}");
    }
    emit(&report.render(cfg.csv)?, cfg.out.as_deref())
}

fn ext_echo(a: &ExtArgs) -> Value {
    json!({ "n": a.n, "m": a.m })
}

fn primes(cfg: &RunConfig, d: u32, count_only: bool) -> Result<Report> {
    let table = prime_table(&cfg.field, d, cfg.cache())?;
    let expected = count_irreducibles_u64(cfg.field.q() as u64, d);
    let mut body = json!({
        "d": d,
        "count": table.len(),
        "necklace_count": expected,
    });
    let mut t = Table::new(vec!["d", "index", "polynomial"]);
    if !count_only {
        if cfg.csv {
            for (i, p) in table.iter().enumerate() {
                t.push(vec![d.to_string(), i.to_string(), p.to_string()]);
            }
        } else {
            body["primes"] = table.iter().map(|p| Value::String(p.to_string())).collect();
        }
    }
    let echo = cfg.echo(json!({ "d": d, "count_only": count_only }));
    let r = Report::new("primes", echo, body);
    Ok(if count_only { r } else { r.with_table(t) })
}

fn zeta(cfg: &RunConfig, dmax: u32, beta_s: Option<&str>, exclude: &str) -> Result<Report> {
    let excluded = cfg.excluded(exclude)?;
    let b = beta_s.map(beta).transpose()?;
    let mut body = json!({ "dmax": dmax });
    let mut t = Table::new(vec!["degree", "coefficient", "partial_value"]);
    let z = match &b {
        Some(b) => {
            let (z, ev) = zeta_partial_eval(&cfg.field, &excluded, dmax, b, cfg.cache())?;
            body["evaluation"] = ev.to_json();
            if excluded.is_empty() && b.cmp_f64(1.0) == Ordering::Greater {
                body["closed_form"] = zeta_closed_form(cfg.field.q(), b)?.to_json();
            }
            z
        }
        None => bcff_core::zeta::zeta_partial(&cfg.field, &excluded, dmax, cfg.cache())?,
    };
    let x = b.as_ref().map(|b| b.x_f64(cfg.field.q()));
    let mut partial = 0.0;
    for d in 0..=dmax as usize {
        let c = z.coeff(d);
        let value = match x {
            Some(x) => {
                partial += bcff_core::mass::FormalMass::monomial(c.clone(), d).eval_f64(x);
                partial.to_string()
            }
            None => String::new(),
        };
        t.push(vec![d.to_string(), rat_to_string(&c), value]);
    }
    body["coefficients"] = z.to_json();
    let echo = cfg.echo(json!({
        "dmax": dmax,
        "beta": beta_s,
        "exclude": excluded.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    }));
    let inexact = b.as_ref().is_some_and(|b| !b.is_exact());
    Ok(Report::new("zeta", echo, body).with_table(t).inexact(inexact))
}

#[allow(clippy::too_many_arguments)]
fn kms(
    cfg: &RunConfig,
    ext_args: &ExtArgs,
    beta_s: &str,
    dmax: u32,
    state: &str,
    cylinder: &str,
    divisor: &str,
    exclude: &str,
    chi: &str,
) -> Result<Report> {
    let b = beta(beta_s)?;
    if b.is_negative() {
        return Err(Error::NegativeBeta.into());
    }
    let ext = cfg.ext(ext_args)?;
    let sys = KmsSystem::new(&ext, cfg.excluded(exclude)?)?;
    let f = CylinderFn::from_json(&ext, cylinder)?;
    let d = Divisor::parse(&cfg.field, divisor)?;
    let w = ext.parse_class(state)?;
    let mut mass = FormalMass::zero();
    for (c, z) in &f.terms {
        mass = &mass + &sys.cylinder_mass(z)?.scale(c);
    }
    let (regime, mut body) = if b.is_zero() {
        let chi = PrimeCharacter::parse(&cfg.field, chi, dmax)?;
        let v = sys.kms0_eval(&chi, &f, &d)?;
        let body = json!({
            "value": { "re": v.re, "im": v.im },
            "in_kernel": v.in_kernel,
            "phase": rat_to_string(&v.phase),
            "integral": rat_to_string(&v.integral),
            "tail_bound": 0.0,
            "exact": true,
        });
        ("kms0", body)
    } else if b == Beta::Infinity {
        ("ground", sys.ground_eval(&w, &f, &d)?.to_json())
    } else if b.cmp_f64(1.0) == Ordering::Greater {
        ("gibbs", sys.gibbs_eval(&b, &w, &f, &d, dmax)?.to_json())
    } else {
        ("unique", sys.kms_eval(&b, &f, &d)?.to_json())
    };
    body["regime"] = json!(regime);
    body["formal_mass"] = mass.to_json();
    let echo = cfg.echo(json!({
        "ext": ext.to_json(),
        "beta": beta_s,
        "dmax": dmax,
        "state": w.to_string(),
        "cylinder": f.to_json(),
        "divisor": d.to_string(),
        "exclude": sys.s_finite().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    }));
    Ok(Report::new("kms", echo, body).inexact(!b.is_exact()))
}

fn ratio_set(
    cfg: &RunConfig,
    ext_args: &ExtArgs,
    beta_s: &str,
    dmax: u32,
    exclude: &str,
    theta: f64,
    samples: usize,
) -> Result<Report> {
    let b = beta(beta_s)?;
    if b.is_negative() {
        return Err(Error::NegativeBeta.into());
    }
    let ext = cfg.ext(ext_args)?;
    let excluded = cfg.excluded(exclude)?;
    let q = cfg.field.q();
    let in_range = !b.is_zero() && b.cmp_f64(1.0) != Ordering::Greater;
    let mut body = json!({});
    let diagnostic = if in_range {
        let v = detect_type(&ext, &excluded, &b, dmax, cfg.cache())?;
        body["verdict"] = serde_json::to_value(&v)?;
        v.diagnostic
    } else {
        // no unique KMS state to classify; the series is still reported
        body["verdict"] = Value::Null;
        let scheme = build_pairing(&ext, &excluded, dmax, cfg.cache())?;
        Some(divergence_diagnostic(&scheme, q, &b, theta))
    };
    if in_range && theta != bcff_core::ratioset::DEFAULT_THETA {
        let scheme = build_pairing(&ext, &excluded, dmax, cfg.cache())?;
        body["diagnostic_at_theta"] =
            serde_json::to_value(divergence_diagnostic(&scheme, q, &b, theta))?;
    }
    if samples > 0 {
        let space = TailSpace::new(&ext, &excluded, dmax, DEFAULT_KMAX, true, cfg.cache())?;
        body["sampled_lattice_gcd"] =
            json!(sample_cocycle_lattice(&ext, &space, samples, cfg.seed)?);
    }
    let mut t = Table::new(vec!["k", "block_count", "increment", "partial_sum"]);
    if let Some(d) = &diagnostic {
        if !in_range {
            body["diagnostic"] = serde_json::to_value(d)?;
        }
        for r in &d.rows {
            t.push(vec![
                r.k.to_string(),
                r.block_count.to_string(),
                r.increment.to_string(),
                r.partial_sum.to_string(),
            ]);
        }
    }
    let mut echo = ext_echo(ext_args);
    echo["beta"] = json!(beta_s);
    echo["dmax"] = json!(dmax);
    echo["theta"] = json!(theta);
    echo["samples"] = json!(samples);
    echo["exclude"] = json!(excluded.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    Ok(Report::new("ratio-set", cfg.echo(echo), body)
        .with_table(t)
        .inexact(!b.is_exact()))
}

fn carlitz(
    cfg: &RunConfig,
    phi: Option<&str>,
    torsion: Option<&str>,
    exp: Option<u32>,
    bound: u32,
) -> Result<Report> {
    let field = &cfg.field;
    if let Some(a) = phi {
        let a = cfg.poly(a)?;
        let c = carlitz_phi(&a)?;
        let mut body = json!({
            "a": a.to_string(),
            "phi": c.phi.to_string(),
            "invariants": c.satisfies_invariants(),
        });
        if a.is_monic() && !a.is_constant() && is_irreducible(&a)? {
            body["reduces_to_frobenius_power"] = json!(phi_mod_p_check(&Prime::finite(a)?)?);
        }
        let mut t = Table::new(vec!["i", "coefficient"]);
        for (i, co) in c.phi.coeffs().iter().enumerate() {
            t.push(vec![i.to_string(), co.to_string()]);
        }
        let echo = cfg.echo(json!({ "phi": phi }));
        return Ok(Report::new("carlitz", echo, body).with_table(t));
    }
    if let Some(spec) = torsion {
        let (m, p) = spec
            .split_once(',')
            .with_context(|| format!("expected \"m,p\", got {spec:?}"))?;
        let m = cfg.poly(m)?;
        let p = Prime::parse(field, p)?;
        let ts = torsion_points(&m, &p, bound)?;
        let points: Vec<String> = ts.points.iter().map(|z| z.to_string()).collect();
        let body = json!({
            "m": m.to_string(),
            "p": p.to_string(),
            "extension_degree": ts.field.degree(),
            "residue_extension_degree": ts.s,
            "field_modulus": ts.field.modulus().to_string(),
            "theta": ts.theta.to_string(),
            "count": points.len(),
            "generator": ts.generator.to_string(),
            "module_iso": ts.module_iso_check()?,
            "frobenius_action": frobenius_action_check(&ts)?,
            "points": points,
        });
        let mut t = Table::new(vec!["index", "point"]);
        for (i, z) in points.iter().enumerate() {
            t.push(vec![i.to_string(), z.clone()]);
        }
        let echo = cfg.echo(json!({ "torsion": spec, "bound": bound }));
        return Ok(Report::new("carlitz", echo, body).with_table(t));
    }
    let Some(n) = exp else {
        bail!("one of --phi, --torsion, --exp is required");
    };
    let e = carlitz_exp_truncated(field, n)?;
    let terms = e.terms();
    let mut t = Table::new(vec!["i", "exponent", "coefficient", "d_i"]);
    for x in &terms {
        t.push(vec![
            x.i.to_string(),
            x.exponent.to_string(),
            x.coefficient.clone(),
            x.d_i.clone(),
        ]);
    }
    let body = json!({
        "terms": terms,
        "functional_equation": e.functional_equation,
    });
    Ok(Report::new("carlitz", cfg.echo(json!({ "exp": n })), body).with_table(t))
}

fn bccheck(cfg: &RunConfig, m: &str, dmax: u32) -> Result<Report> {
    let r = bc_check(&cfg.poly(m)?, dmax)?;
    let echo = cfg.echo(json!({ "m": m, "dmax": dmax }));
    Ok(Report::new("bc-check", echo, serde_json::to_value(&r)?))
}

fn chebotarev(cfg: &RunConfig, ext_args: &ExtArgs, dmax: u32, c: f64) -> Result<Report> {
    let ext = cfg.ext(ext_args)?;
    let table = count_by_class(&ext, dmax, cfg.cache())?;
    let n = ext.n_finite()?;
    let mut t = Table::new(vec!["d", "class", "count", "prediction", "normalized_error"]);
    for r in &table.rows {
        t.push(vec![
            r.d.to_string(),
            r.class.clone(),
            r.count.to_string(),
            r.prediction.to_string(),
            r.normalized_error.to_string(),
        ]);
    }
    let body = json!({
        "density_check": density_check(&table, c)?,
        "max_normalized_error": table.max_normalized_error(n),
        "row_sums_match": table.row_sums_match(),
        "constant_extension_consistent": table.constant_extension_consistent(),
        "unramified_totals": table.totals,
        "rows": table.rows,
    });
    let mut echo = ext_echo(ext_args);
    echo["dmax"] = json!(dmax);
    echo["c"] = json!(c);
    Ok(Report::new("chebotarev", cfg.echo(echo), body).with_table(t))
}

fn flow(cfg: &RunConfig, beta_s: &str, n: Option<u32>) -> Result<Report> {
    let b = beta(beta_s)?;
    let r = flow_report(&b, cfg.field.q(), n)?;
    let echo = cfg.echo(json!({ "beta": beta_s, "n": n }));
    Ok(Report::new("flow", echo, serde_json::to_value(&r)?).inexact(!b.is_exact()))
}
