use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use xiflow_core::dynamics::{
    check_tol, detect_closed_orbit_period, integrate, integrate_newton_path, max_relative_energy_drift,
    phase_portrait_grid, portrait_to_csv, Component, FlowParams, FlowRegistry, FlowState, IntegratorOptions,
    Trajectory,
};
use xiflow_core::formulas::{flow_map_differential, newton_time_reparam, spectrum_for_period, DeltaPForm, SpectrumTable};
use xiflow_core::specfun::{digamma, gamma, xi, xi_derivative, zeta};
use xiflow_core::verify::{SuiteRegistry, VerifyContext};
use xiflow_core::zeros::{
    catalogue_to_string, load_catalogue, locate_zeros, smooth_zero_count, ZeroCatalogue, MAX_TAU,
};
use xiflow_core::{Complex, TruncationConfig};

use crate::literal::format_complex;
use crate::output::{summary, Format, Sink};
use crate::{
    CatalogueArgs, CliError, EvalArgs, FlowArgs, Function, OutputArgs, PeriodsArgs, PortraitArgs, SpectrumArgs,
    VerifyArgs, ZerosArgs,
};

type CmdResult = Result<(), CliError>;

fn sink(o: &OutputArgs) -> Sink {
    Sink { out: o.out.clone(), meta: o.meta.clone() }
}

/// The parsed arguments with defaults resolved.
fn config_json<T: serde::Serialize>(args: &T, format: Format) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    v["output"]["format"] = json!(format);
    v
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Catalogue from `--catalogue`/`XIFLOW_CATALOGUE`, or located afresh high
/// enough to hold `needed` zeros.
fn obtain_catalogue(args: &CatalogueArgs, needed: usize) -> Result<ZeroCatalogue, CliError> {
    let cat = match &args.catalogue {
        Some(path) => load_catalogue(path)?,
        None => {
            let mut tau = 20.0;
            while tau < MAX_TAU && smooth_zero_count(tau) < needed as f64 + 2.0 {
                tau += 10.0;
            }
            locate_zeros(tau.min(MAX_TAU), 1e-12)?
        }
    };
    if cat.len() < needed {
        return Err(CliError::Usage(format!(
            "catalogue holds {} zeros, {needed} needed",
            cat.len()
        )));
    }
    Ok(cat)
}

pub fn eval(a: &EvalArgs) -> CmdResult {
    let cfg = TruncationConfig { nmax: a.nmax, ..Default::default() };
    cfg.validate()?;
    let s = a.s;
    let value = match a.function {
        Function::Zeta => zeta(s)?,
        Function::Gamma => gamma(s)?,
        Function::Digamma => digamma(s, &cfg)?,
        Function::Xi => xi(s),
        Function::Xi1 => xi_derivative(s, 1),
        Function::Xi2 => xi_derivative(s, 2),
    };
    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => format_complex(value) + "\n",
        Format::Json => {
            json!({ "fn": a.function, "s": [s.re, s.im], "re": value.re, "im": value.im }).to_string() + "\n"
        }
    };
    let out = sink(&a.output);
    out.write(&body)?;
    let identities: &[&str] = match a.function {
        Function::Zeta => &["Euler-Maclaurin zeta", "completed-zeta reflection below the critical line"],
        Function::Gamma => &["Lanczos Gamma with reflection"],
        Function::Digamma => &["digamma series with Euler-Maclaurin tail"],
        Function::Xi => &["xi(s) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s)", "functional equation xi(s) = xi(1-s)"],
        Function::Xi1 | Function::Xi2 => &["Cauchy-integral derivatives of xi"],
    };
    out.write_meta("eval", config_json(a, format), identities)?;
    Ok(())
}

pub fn zeros(a: &ZerosArgs) -> CmdResult {
    let cat = locate_zeros(a.tau_max, a.tol)?;
    let format = a.output.format.unwrap_or(Format::Json);
    let body = match format {
        Format::Json => catalogue_to_string(&cat),
        Format::Csv => {
            let mut s = String::from("index,re,im,xi_prime_re,xi_prime_im,period\n");
            for r in cat.records() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.index,
                    num(r.rho.re),
                    num(r.rho.im),
                    num(r.xi_prime.re),
                    num(r.xi_prime.im),
                    num(r.period)
                );
            }
            s
        }
    };
    let out = sink(&a.output);
    out.write(&body)?;
    let smooth = smooth_zero_count(a.tau_max);
    summary(format!(
        "zeros: {} found with 0 < Im rho <= {}; Riemann-von Mangoldt estimate {:.3} (difference {:+.3})",
        cat.len(),
        a.tau_max,
        smooth,
        cat.len() as f64 - smooth
    ));
    out.write_meta(
        "zeros",
        config_json(a, format),
        &["xi real on the critical line", "Riemann-von Mangoldt zero count"],
    )?;
    Ok(())
}

fn trajectory_json(run: &Trajectory) -> String {
    let layout: Vec<&str> = run.layout.iter().map(|c| c.csv_prefix()).collect();
    let states: Vec<Value> = run
        .states
        .iter()
        .map(|s| {
            let mut obj = serde_json::Map::new();
            obj.insert("t".into(), json!(s.t));
            for (c, v) in run.layout.iter().zip(s.pack(run.layout).unwrap_or_default()) {
                obj.insert(c.csv_prefix().into(), json!([v.re, v.im]));
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "flow": run.flow,
        "layout": layout,
        "accepted_steps": run.accepted_steps,
        "rejected_steps": run.rejected_steps,
        "max_local_error": run.max_local_error,
        "states": states,
    })
    .to_string()
        + "\n"
}

pub fn flow(a: &FlowArgs) -> CmdResult {
    check_tol(a.tol)?;
    let registry = FlowRegistry::builtin();
    let kind = a.kind.as_str();
    let run = if kind == "newton" {
        if a.t_end.is_some() {
            return Err(CliError::Usage("newton runs take --T or --path, not --t".into()));
        }
        let waypoints = match a.big_t {
            Some(t) => vec![t],
            None if !a.path.is_empty() => a.path.clone(),
            None => return Err(CliError::Usage("newton runs need --T or --path".into())),
        };
        integrate_newton_path(a.q0, &waypoints, a.tol)?
    } else {
        if a.big_t.is_some() || !a.path.is_empty() {
            return Err(CliError::Usage(format!("{kind} runs take --t, not --T/--path")));
        }
        let t_end = a.t_end.ok_or_else(|| CliError::Usage(format!("{kind} runs need --t")))?;
        let flow = registry.build(kind, &FlowParams::default())?;
        let layout = flow.layout();
        if layout.contains(&Component::P) && a.p0 == Complex::new(0.0, 0.0) {
            return Err(CliError::Core(xiflow_core::Error::Domain("p0 must be nonzero".into())));
        }
        let mut init = FlowState::new(0.0, a.q0);
        for c in layout {
            init = match c {
                Component::Q => init,
                Component::P => init.with_p(a.p0),
                Component::Dq | Component::Dp => init.with_variation(a.dq0, a.dp0),
                Component::Time => init.with_time(Complex::new(0.0, 0.0)),
            };
        }
        integrate(flow.as_ref(), &init, t_end, IntegratorOptions::with_tol(a.tol))?
    };
    if a.check_m && kind != "variational" {
        return Err(CliError::Usage("--check-M requires --kind variational".into()));
    }

    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => run.to_csv(),
        Format::Json => trajectory_json(&run),
    };
    let out = sink(&a.output);
    out.write(&body)?;

    let last = run.last();
    summary(format!(
        "{kind}: {} states, {} accepted / {} rejected steps, final q = {}",
        run.states.len(),
        run.accepted_steps,
        run.rejected_steps,
        format_complex(last.q)
    ));
    let mut identities: Vec<&str> = Vec::new();
    if let Some(drift) = max_relative_energy_drift(&run) {
        summary(format!("max |H-H0|/|H0| = {drift:.3e}"));
        identities.push("H = xi(q) p conserved");
    }
    match kind {
        "variational" => {
            let (p0, dq0) = (a.p0, a.dq0);
            let mut pdq = 0.0f64;
            let mut dev = 0.0f64;
            for s in &run.states {
                let (p, dq, dp) = (s.p.unwrap_or_default(), s.dq.unwrap_or_default(), s.dp.unwrap_or_default());
                if p0 * dq0 != Complex::new(0.0, 0.0) {
                    pdq = pdq.max((p * dq - p0 * dq0).norm() / (p0 * dq0).norm());
                }
                if a.check_m {
                    let m = flow_map_differential(a.q0, p0, s.q, DeltaPForm::Compact)?;
                    let (cq, cp) = m.apply(a.dq0, a.dp0);
                    dev = dev.max((cq - dq).norm().hypot((cp - dp).norm()) / dq.norm().hypot(dp.norm()));
                }
            }
            summary(format!("max |p dq - p0 dq0|/|p0 dq0| = {pdq:.3e}"));
            identities.push("p(t) dq(t) = p0 dq0");
            if a.check_m {
                summary(format!("max closed-form M deviation = {dev:.3e}"));
                identities.push("flow-map differential M");
            }
        }
        "newton" => {
            let x0 = xi(a.q0);
            let (mut gap, mut modulus) = (0.0f64, 0.0f64);
            for s in &run.states {
                let v = xi(s.q);
                let expected = x0 * (-s.time.unwrap_or_default()).exp();
                gap = gap.max((v - expected).norm() / expected.norm());
                modulus = modulus.max((v.norm() / x0.norm() - 1.0).abs());
            }
            summary(format!("max |xi(s(T)) - xi(s0) e^-T|/|xi(s0) e^-T| = {gap:.3e}"));
            summary(format!("max ||xi(s)|/|xi(s0)| - 1| = {modulus:.3e}"));
            identities.extend(["xi(s(T)) = xi(s0) exp(-T)", "|xi| preserved on imaginary-time rays"]);
        }
        "reparam" => {
            // branch of ln xi(q0) - ln xi(q) that follows the integrated time continuously
            let mut winding = 0i64;
            let mut gap = 0.0f64;
            for s in &run.states {
                let t_num = s.time.unwrap_or_default();
                let principal = newton_time_reparam(a.q0, s.q, 0)?;
                winding = ((t_num - principal).im / (2.0 * PI)).round() as i64;
                let closed = newton_time_reparam(a.q0, s.q, winding)?;
                gap = gap.max((t_num - closed).norm());
            }
            summary(format!("Newton-time branch at the end: winding {winding}; max |T(t) - T_closed| = {gap:.3e}"));
            identities.push("T = ln xi(q0) - ln xi(q) + 2 pi i k");
        }
        "xi" => identities.push("holomorphic flow q' = xi(q)"),
        _ => {}
    }
    let mut config = config_json(a, format);
    config["integrator"] = json!({ "method": "Dormand-Prince 5(4)", "rtol": a.tol, "atol": a.tol });
    out.write_meta("flow", config, &identities)?;
    Ok(())
}

pub fn periods(a: &PeriodsArgs) -> CmdResult {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let cat = obtain_catalogue(&a.catalogue, a.n)?;
    let rows: Vec<Result<(usize, f64, f64, f64), xiflow_core::Error>> = cat.records()[..a.n]
        .par_iter()
        .map(|z| {
            let numeric = detect_closed_orbit_period(z.rho + Complex::new(a.radius, 0.0), z, a.tol)?;
            Ok((z.index, z.rho.im, z.period, numeric))
        })
        .collect();
    let mut table = Vec::with_capacity(rows.len());
    for r in rows {
        table.push(r?);
    }
    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => {
            let mut s = String::from("n,rho_im,period,frequency,numeric_period,relative_gap\n");
            for &(n, im, period, numeric) in &table {
                let gap = (numeric / period - 1.0).abs();
                let _ = writeln!(s, "{n},{},{},{},{},{}", num(im), num(period), num(1.0 / period), num(numeric), num(gap));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|&(n, im, period, numeric)| {
                    json!({ "n": n, "rho_im": im, "period": period, "frequency": 1.0 / period,
                            "numeric_period": numeric, "relative_gap": (numeric / period - 1.0).abs() })
                })
                .collect();
            Value::Array(rows).to_string() + "\n"
        }
    };
    let out = sink(&a.output);
    out.write(&body)?;
    let worst = table.iter().map(|&(_, _, p, t)| (t / p - 1.0).abs()).fold(0.0, f64::max);
    summary(format!("periods: {} zeros, max relative gap {worst:.3e}", table.len()));
    out.write_meta(
        "periods",
        config_json(a, format),
        &["closed-orbit period 2 pi / |xi'(rho)|", "first return to a Poincare section"],
    )?;
    Ok(())
}

pub fn spectrum(a: &SpectrumArgs) -> CmdResult {
    if a.n == 0 || a.k < 1 {
        return Err(CliError::Usage("--n and --k must be at least 1".into()));
    }
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(CliError::Usage(format!("--h must be positive, got {}", a.h)));
    }
    let cat = obtain_catalogue(&a.catalogue, a.n)?;
    let z = cat.get(a.n).ok_or_else(|| CliError::Usage(format!("no zero #{}", a.n)))?;
    let t_star = if a.numeric {
        detect_closed_orbit_period(z.rho + Complex::new(0.01, 0.0), z, 1e-12)?
    } else {
        z.period
    };
    let table: SpectrumTable = spectrum_for_period(z.index, z.rho.im, t_star, 1..=a.k, a.h)?;
    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => format!("{}\n{}", SpectrumTable::CSV_HEADER, table.csv_rows()),
        Format::Json => serde_json::to_string(&table).unwrap_or_default() + "\n",
    };
    let out = sink(&a.output);
    out.write(&body)?;
    summary(format!("spectrum: zero #{}, t* = {}", z.index, num(t_star)));
    out.write_meta("spectrum", config_json(a, format), &["E(k) = k h / t*"])?;
    Ok(())
}

pub fn portrait(a: &PortraitArgs, jobs: usize) -> CmdResult {
    let [re0, re1, im0, im1] = a.window;
    let (nx, ny) = a.resolution;
    let nodes = phase_portrait_grid((re0, re1), (im0, im1), nx, ny)?;
    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => portrait_to_csv(&nodes),
        Format::Json => {
            let rows: Vec<Value> = nodes
                .iter()
                .map(|n| {
                    json!({ "i": n.i, "j": n.j, "s": [n.s.re, n.s.im], "xi": [n.value.re, n.value.im],
                            "arg": n.arg, "modulus": n.modulus })
                })
                .collect();
            Value::Array(rows).to_string() + "\n"
        }
    };
    let out = sink(&a.output);
    out.write(&body)?;
    summary(format!("portrait: {nx}x{ny} nodes"));
    let mut config = config_json(a, format);
    config["jobs"] = json!(if jobs == 0 { rayon::current_num_threads() } else { jobs });
    out.write_meta("portrait", config, &["phase portrait of xi"])?;
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let registry = SuiteRegistry::builtin();
    let suites = registry.select(&a.suite)?;
    let ctx = match &a.catalogue.catalogue {
        Some(path) => VerifyContext::with_catalogue(load_catalogue(path)?),
        None => VerifyContext::new(),
    };
    let mut reports = Vec::new();
    for suite in &suites {
        reports.push(suite.run(&ctx)?);
    }
    let format = a.output.format.unwrap_or(Format::Csv);
    let body = match format {
        Format::Csv => {
            let mut s = String::from("suite,check,measured,relation,threshold,passed\n");
            for r in &reports {
                for c in &r.checks {
                    let relation = match c.relation {
                        xiflow_core::verify::Relation::AtMost => "<=",
                        xiflow_core::verify::Relation::AtLeast => ">=",
                    };
                    let _ = writeln!(
                        s,
                        "{},\"{}\",{:e},{relation},{:e},{}",
                        r.suite,
                        c.name.replace('"', "'"),
                        c.measured,
                        c.threshold,
                        c.passed
                    );
                }
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&reports).unwrap_or_default() + "\n",
    };
    let out = sink(&a.output);
    out.write(&body)?;
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let passed: usize = reports.iter().map(|r| r.checks.iter().filter(|c| c.passed).count()).sum();
    for r in &reports {
        summary(format!("{:<22} {}", r.suite, if r.passed() { "PASS" } else { "FAIL" }));
    }
    summary(format!("verify: {passed} of {total} checks passed"));
    let identities: Vec<&str> = suites.iter().flat_map(|s| s.identities().iter().copied()).collect();
    out.write_meta("verify", config_json(a, format), &identities)?;
    if passed == total {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} check(s) failed", total - passed)))
    }
}
