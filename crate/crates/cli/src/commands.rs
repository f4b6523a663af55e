use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use primeframe::frames::{analyze_with, FrameVerdict};
use primeframe::{
    characterize_subgroups, construct_enpf, dft, find_generator, frame_criterion, frame_operator, y_matrix,
    CharacterizationResult, CharacterizationStatus, ComplexMatrix, Domain, EnpfResult, Error, PrimeContext, Signal,
    Subgroup, WaveletSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::load_window;
use crate::{Common, Format, Outcome, WindowArgs, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_VERIFY};

const VERIFY_SAMPLES: usize = 100;
const VERIFY_IDENTITY_TOL: f64 = 1e-9;
const VERIFY_ENERGY_RTOL: f64 = 1e-8;
const SPECTRAL_VERIFY_MAX_P: u64 = 31;

fn input_err(e: impl ToString) -> Outcome {
    Outcome::fail(EXIT_INPUT, e.to_string())
}

fn lib_err(e: Error) -> Outcome {
    match e {
        Error::Inadmissible(c) => Outcome::fail(EXIT_NEGATIVE, format!("window is not admissible: {c}")),
        other => input_err(other),
    }
}

fn render_json(mut value: Value) -> String {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), json!(1));
    }
    let mut s = serde_json::to_string_pretty(&value).expect("json values always serialize");
    s.push('\n');
    s
}

fn complex_json(v: Complex64) -> Value {
    json!([v.re, v.im])
}

fn signal_json(s: &Signal) -> Value {
    Value::Array(s.values().iter().map(|&v| complex_json(v)).collect())
}

fn factorization_text(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = f.iter().map(|&(q, e)| if e == 1 { q.to_string() } else { format!("{q}^{e}") }).collect();
    parts.join("*")
}

fn set_text(items: impl IntoIterator<Item = impl ToString>) -> String {
    let parts: Vec<String> = items.into_iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Time-domain window, its context, and the subgroup when `need_order`.
struct Setup {
    ctx: Arc<PrimeContext>,
    window: Signal,
    subgroup: Option<Subgroup>,
}

fn setup(common: &Common, args: &WindowArgs, need_order: bool) -> Result<Setup, Outcome> {
    let window = load_window(args.window.as_deref(), args.y_hat.as_deref(), common.p).map_err(input_err)?;
    let ctx = window.context().clone();
    if window.support_count(common.tol) == 0 || dft(&window).support_count(common.tol) == 0 {
        return Err(input_err(Error::ZeroWindow));
    }
    let subgroup = match (args.order, need_order) {
        (Some(order), _) => Some(Subgroup::of_order(&ctx, order).map_err(input_err)?),
        (None, true) => return Err(input_err("--order is required")),
        (None, false) => None,
    };
    Ok(Setup { ctx, window, subgroup })
}

pub fn generator(prime: Option<u64>, common: &Common) -> Outcome {
    let p = match (prime, common.p) {
        (Some(a), Some(b)) if a != b => return input_err(format!("P={a} disagrees with --p {b}")),
        (Some(p), _) | (None, Some(p)) => p,
        (None, None) => return input_err("a prime is required: generator <P> or --p <P>"),
    };
    let ctx = match find_generator(p) {
        Ok(ctx) => ctx,
        Err(e) => return input_err(e),
    };
    let divisors = ctx.divisors();
    let stdout = match common.format {
        Format::Json => render_json(json!({
            "command": "generator",
            "p": p,
            "epsilon": ctx.epsilon(),
            "factorization": ctx.factorization(),
            "divisors": divisors,
        })),
        Format::Text => {
            let divs: Vec<String> = divisors.iter().map(u64::to_string).collect();
            format!(
                "p={p}\nepsilon={}\nfactorization={}\ndivisors={}\n",
                ctx.epsilon(),
                factorization_text(ctx.factorization()),
                divs.join(" ")
            )
        }
    };
    Outcome::ok(stdout, EXIT_OK)
}

fn verdict_text(out: &mut String, v: &FrameVerdict) {
    if v.is_frame {
        out.push_str("verdict=frame\n");
        for w in &v.witnesses {
            writeln!(out, "witness t={} m={} l={}", w.coset, w.element, w.frequency).unwrap();
        }
    } else {
        out.push_str("verdict=not a frame\n");
        if let Some(c) = v.failure {
            writeln!(out, "reason={c}").unwrap();
        }
    }
}

pub fn frame_check(common: &Common, args: &WindowArgs, spectral: bool) -> Outcome {
    let Setup { ctx, window, subgroup } = match setup(common, args, true) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let sg = subgroup.expect("order required");
    let (order, index) = (sg.order(), sg.index());
    let sys = match WaveletSystem::new(window, sg) {
        Ok(s) => s,
        Err(e) => return lib_err(e),
    };
    let verdict = match frame_criterion(&sys, common.tol) {
        Ok(v) => v,
        Err(e) => return lib_err(e),
    };
    let report = if spectral {
        match analyze_with(&sys, common.frame_tol) {
            Ok(r) => Some(r),
            Err(e) => return lib_err(e),
        }
    } else {
        None
    };
    let agrees = report.as_ref().is_none_or(|r| r.is_frame == verdict.is_frame);
    let ym = y_matrix(&sys);

    let stdout = match common.format {
        Format::Json => {
            let entries: Vec<Value> = (0..ym.rows())
                .map(|t| Value::Array((0..ym.cols()).map(|r| complex_json(ym.entry(t, r))).collect()))
                .collect();
            render_json(json!({
                "command": "frame-check",
                "p": ctx.p(),
                "epsilon": ctx.epsilon(),
                "order": order,
                "index": index,
                "is_frame": verdict.is_frame,
                "failure": verdict.failure.map(|c| c.to_string()),
                "witnesses": verdict.witnesses,
                "y_matrix": { "entries": entries, "support": ym.support_pattern(common.tol) },
                "spectral": report,
                "spectral_agrees": report.as_ref().map(|_| agrees),
                "tolerance_used": common.tol,
            }))
        }
        Format::Text => {
            let mut out = format!("p={} epsilon={} order={order} index={index}\n", ctx.p(), ctx.epsilon());
            verdict_text(&mut out, &verdict);
            out.push_str("[y_matrix]\n");
            out.push_str(&ym.render(common.tol));
            if let Some(r) = &report {
                out.push_str("[spectral]\n");
                out.push_str(&r.to_text());
                writeln!(out, "spectral_agrees={agrees}").unwrap();
            }
            out
        }
    };
    let code = match (agrees, verdict.is_frame) {
        (false, _) => EXIT_VERIFY,
        (true, true) => EXIT_OK,
        (true, false) => EXIT_NEGATIVE,
    };
    Outcome::ok(stdout, code)
}

struct EnpfCheck {
    max_identity_dev: f64,
    worst_energy_rel: f64,
    is_parseval: bool,
    is_equal_norm: bool,
}

impl EnpfCheck {
    fn passed(&self) -> bool {
        self.max_identity_dev <= VERIFY_IDENTITY_TOL
            && self.worst_energy_rel <= VERIFY_ENERGY_RTOL
            && self.is_parseval
            && self.is_equal_norm
    }
}

fn verify_enpf(res: &EnpfResult, sg: &Subgroup, common: &Common) -> Result<EnpfCheck, Error> {
    let ctx = sg.context();
    let sys = WaveletSystem::new(res.y_sigma.clone(), sg.clone())?;
    let max_identity_dev = frame_operator(&sys).max_abs_diff(&ComplexMatrix::identity(ctx.len()));
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut worst_energy_rel = 0.0f64;
    for _ in 0..VERIFY_SAMPLES {
        let x =
            Signal::from_fn(ctx, Domain::Time, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let energy = sys.all_coefficients(&x)?.energy();
        worst_energy_rel = worst_energy_rel.max((energy - x.norm2_sq()).abs() / x.norm2_sq());
    }
    let report = analyze_with(&sys, common.frame_tol)?;
    Ok(EnpfCheck {
        max_identity_dev,
        worst_energy_rel,
        is_parseval: report.is_parseval,
        is_equal_norm: report.is_equal_norm,
    })
}

pub fn enpf(common: &Common, args: &WindowArgs, verify: bool) -> Outcome {
    let Setup { ctx, window, subgroup } = match setup(common, args, true) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let sg = subgroup.expect("order required");
    let res = match construct_enpf(&window, &sg, common.tol) {
        Ok(r) => r,
        Err(e) => return lib_err(e),
    };
    let check = if verify {
        match verify_enpf(&res, &sg, common) {
            Ok(c) => Some(c),
            Err(e) => return lib_err(e),
        }
    } else {
        None
    };
    let stdout = match common.format {
        Format::Json => render_json(json!({
            "command": "enpf",
            "p": ctx.p(),
            "epsilon": ctx.epsilon(),
            "order": sg.order(),
            "sigma": res.sigma.forward,
            "scaling": res.scaling,
            "y_hat_prime": signal_json(&res.y_hat_prime),
            "y_hat_double_prime": signal_json(&res.y_hat_double_prime),
            "y_hat_sigma": signal_json(&res.y_hat_sigma),
            "y_sigma": signal_json(&res.y_sigma),
            "verify": check.as_ref().map(|c| json!({
                "seed": common.seed,
                "samples": VERIFY_SAMPLES,
                "max_identity_deviation": c.max_identity_dev,
                "worst_energy_relative_error": c.worst_energy_rel,
                "is_parseval": c.is_parseval,
                "is_equal_norm": c.is_equal_norm,
                "passed": c.passed(),
            })),
        })),
        Format::Text => {
            let mut out = format!("p={} epsilon={} order={}\n", ctx.p(), ctx.epsilon(), sg.order());
            let sigma: Vec<String> = res.sigma.forward.iter().map(u64::to_string).collect();
            writeln!(out, "sigma={}", sigma.join(" ")).unwrap();
            out.push_str(&res.to_text());
            if let Some(c) = &check {
                out.push_str("[verify]\n");
                writeln!(out, "seed={}\nsamples={VERIFY_SAMPLES}", common.seed).unwrap();
                writeln!(out, "max_identity_deviation={:e}", c.max_identity_dev).unwrap();
                writeln!(out, "worst_energy_relative_error={:e}", c.worst_energy_rel).unwrap();
                writeln!(out, "is_parseval={}\nis_equal_norm={}", c.is_parseval, c.is_equal_norm).unwrap();
                writeln!(out, "passed={}", c.passed()).unwrap();
            }
            out
        }
    };
    let code = if check.as_ref().is_none_or(EnpfCheck::passed) { EXIT_OK } else { EXIT_VERIFY };
    Outcome::ok(stdout, code)
}

#[derive(Default)]
struct CharacterizeCheck {
    checked: usize,
    criterion_disagreements: Vec<u64>,
    spectral_checked: usize,
    spectral_disagreements: Vec<u64>,
}

fn verify_characterization(
    res: &CharacterizationResult,
    ctx: &Arc<PrimeContext>,
    window: &Signal,
    common: &Common,
) -> Result<CharacterizeCheck, Error> {
    let mut check = CharacterizeCheck::default();
    for order in ctx.divisors() {
        let sys = WaveletSystem::new(window.clone(), Subgroup::of_order(ctx, order)?)?;
        let listed = res.is_frame_order(order);
        check.checked += 1;
        if frame_criterion(&sys, common.tol)?.is_frame != listed {
            check.criterion_disagreements.push(order);
        }
        if ctx.p() <= SPECTRAL_VERIFY_MAX_P {
            check.spectral_checked += 1;
            if analyze_with(&sys, common.frame_tol)?.is_frame != listed {
                check.spectral_disagreements.push(order);
            }
        }
    }
    Ok(check)
}

fn tuple_text(exponents: &[u32]) -> String {
    let parts: Vec<String> = exponents.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn characterize(common: &Common, args: &WindowArgs, verify: bool) -> Outcome {
    let Setup { ctx, window, .. } = match setup(common, args, false) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let res = match characterize_subgroups(&ctx, &window, common.tol) {
        Ok(r) => r,
        Err(e) => return lib_err(e),
    };
    let check = if verify {
        match verify_characterization(&res, &ctx, &window, common) {
            Ok(c) => Some(c),
            Err(e) => return lib_err(e),
        }
    } else {
        None
    };
    let negative = match &res.status {
        CharacterizationStatus::NeverFrame { reason } => Some(format!("no frame-forming subgroup: {reason}")),
        CharacterizationStatus::Characterized if res.frame_subgroup_orders.is_empty() => {
            Some("no frame-forming subgroup: every subgroup leaves a coset without spectral support".to_string())
        }
        CharacterizationStatus::Characterized => None,
    };
    let disagrees =
        check.as_ref().is_some_and(|c| !c.criterion_disagreements.is_empty() || !c.spectral_disagreements.is_empty());

    let stdout = match common.format {
        Format::Json => {
            let mut value = serde_json::to_value(&res).expect("result serializes");
            if let Value::Object(map) = &mut value {
                map.insert("command".into(), json!("characterize"));
                map.insert("message".into(), json!(negative));
                map.insert(
                    "verify".into(),
                    json!(check.as_ref().map(|c| json!({
                        "checked": c.checked,
                        "criterion_disagreements": c.criterion_disagreements,
                        "spectral_checked": c.spectral_checked,
                        "spectral_disagreements": c.spectral_disagreements,
                    }))),
                );
            }
            render_json(value)
        }
        Format::Text => {
            let mut out = format!("p={} epsilon={}\n", res.p, res.epsilon);
            writeln!(out, "factorization={}", factorization_text(&res.factorization)).unwrap();
            writeln!(out, "support={}", res.support).unwrap();
            for t in &res.tests {
                let status = match (t.pruned, t.all_rows_nonzero) {
                    (true, _) => "pruned",
                    (false, true) => "pass",
                    (false, false) => "fail",
                };
                writeln!(
                    out,
                    "test index={} order={} exponents={} rows={}/{} {status}",
                    t.index,
                    t.order,
                    tuple_text(&t.exponents),
                    t.nonzero_rows,
                    t.index
                )
                .unwrap();
            }
            let lambda: Vec<String> = res.lambda_set.iter().map(|e| tuple_text(e)).collect();
            writeln!(out, "lambda={{{}}}", lambda.join(",")).unwrap();
            writeln!(out, "frame_orders={}", set_text(&res.frame_subgroup_orders)).unwrap();
            for (order, ws) in &res.witnesses {
                let parts: Vec<String> =
                    ws.iter().map(|w| format!("t={} m={} l={}", w.coset, w.element, w.frequency)).collect();
                writeln!(out, "witnesses order={order}: {}", parts.join("; ")).unwrap();
            }
            if !res.bound_disagreements.is_empty() {
                writeln!(out, "bound_disagreements={}", set_text(&res.bound_disagreements)).unwrap();
            }
            if let Some(c) = &check {
                writeln!(out, "verify criterion: {}/{} agree", c.checked - c.criterion_disagreements.len(), c.checked)
                    .unwrap();
                if c.spectral_checked == 0 {
                    writeln!(out, "verify spectral: skipped (p > {SPECTRAL_VERIFY_MAX_P})").unwrap();
                } else {
                    writeln!(
                        out,
                        "verify spectral: {}/{} agree",
                        c.spectral_checked - c.spectral_disagreements.len(),
                        c.spectral_checked
                    )
                    .unwrap();
                }
            }
            if let Some(msg) = &negative {
                writeln!(out, "{msg}").unwrap();
            }
            out
        }
    };
    let code = match (disagrees, negative.is_some()) {
        (true, _) => EXIT_VERIFY,
        (false, true) => EXIT_NEGATIVE,
        (false, false) => EXIT_OK,
    };
    Outcome::ok(stdout, code)
}
