use serde_json::{json, Value};

use super::config::{grid_points, RunConfig};
use super::render::{render_ppm, RenderSpec};
use super::Failure;
use crate::address::{lex_compare_ext, parse_address, parse_symbol, ExternalAddress};
use crate::brush::{brush_to_json_with, build_brush, check_brush_axioms, periodic_family, CombCheckReport, Refinement};
use crate::error::Error;
use crate::fmt::g12;
use crate::model::{ComplexPoint, LogModel};
use crate::rays::{
    endpoint_estimate, expansion_verify, head_start_verify, speed_order_verify, trace_hair, AccumulationStep,
    HeadStartParams, MIN_APPLICABLE,
};

/// Witness lists in reports are cut to this length.
const MAX_WITNESSES: usize = 20;

pub type Outcome = std::result::Result<Vec<u8>, Failure>;

fn address(cfg: &RunConfig) -> Result<ExternalAddress, Failure> {
    parse_address(&cfg.address).map_err(Failure::from)
}

fn point(z: ComplexPoint) -> Value {
    json!([z.re, z.im])
}

pub fn trace(cfg: &RunConfig) -> Outcome {
    let model = cfg.model()?;
    let s = address(cfg)?;
    let hair = trace_hair(&model, &s, &grid_points(cfg.t))?;
    for (t, e) in &hair.skipped {
        eprintln!("skipped t = {}: {e}", g12(*t));
    }
    let mut out = String::from("t,re,im\n");
    for p in &hair.points {
        out.push_str(&format!("{},{},{}\n", g12(p.t), g12(p.z.re), g12(p.z.im)));
    }
    Ok(out.into_bytes())
}

fn check(name: &str, passed: bool, details: Value) -> Value {
    json!({"name": name, "passed": passed, "details": details})
}

fn report(cfg: &RunConfig, suite: &str, checks: Vec<Value>) -> (bool, Vec<u8>) {
    let passed = checks.iter().all(|c| c["passed"] == true);
    let v = json!({"suite": suite, "passed": passed, "config": cfg.to_json(), "checks": checks});
    let mut text = serde_json::to_string_pretty(&v).expect("report serialises");
    text.push('\n');
    (passed, text.into_bytes())
}

fn axioms_json(r: &CombCheckReport) -> Vec<Value> {
    r.checks
        .iter()
        .map(|c| {
            let witnesses: Vec<Value> = c
                .witnesses
                .iter()
                .take(MAX_WITNESSES)
                .map(|w| json!({"hair": w.hair.to_string(), "detail": w.detail}))
                .collect();
            check(
                c.name,
                c.status == crate::brush::CheckStatus::Pass,
                json!({"status": c.status.to_string(), "worst": c.worst, "witnesses": witnesses}),
            )
        })
        .collect()
}

fn family(cfg: &RunConfig, model: &LogModel) -> Result<(Vec<ExternalAddress>, String), Failure> {
    if cfg.symbols.is_empty() || cfg.max_period == 0 {
        return Err(Failure::usage("the address family is empty"));
    }
    let symbols = cfg.symbols.iter().map(|s| parse_symbol(s)).collect::<crate::Result<Vec<_>>>()?;
    if let Some(bad) = symbols.iter().find(|s| !model.owns(s)) {
        return Err(Failure::usage(format!("symbol {bad} does not belong to the {} model", cfg.model)));
    }
    let addresses = periodic_family(&symbols, cfg.max_period)?;
    let desc = format!("periodic, symbols {{{}}}, period <= {}", cfg.symbols.join(","), cfg.max_period);
    Ok((addresses, desc))
}

fn headstart(cfg: &RunConfig, model: &LogModel) -> Result<Vec<Value>, Failure> {
    let params = HeadStartParams { m: cfg.m, k: cfg.k };
    let r = match head_start_verify(model, &params, cfg.samples, cfg.seed) {
        Err(Error::BadPhi(x)) => {
            return Err(Failure::usage(format!("phi(x) = {}x + {} does not exceed x at x = {x}", cfg.m, cfg.k)))
        }
        other => other?,
    };
    let witnesses: Vec<Value> = r
        .violations
        .iter()
        .take(MAX_WITNESSES)
        .map(|v| json!({"z": point(v.z), "w": point(v.w), "re_Fz": v.re_fz, "re_Fw": v.re_fw}))
        .collect();
    Ok(vec![
        check(
            "no_violations",
            r.violations.is_empty(),
            json!({"violations": r.violations.len(), "witnesses": witnesses}),
        ),
        check(
            "applicable_pairs",
            r.applicable >= MIN_APPLICABLE,
            json!({"requested": r.requested, "attempts": r.attempts, "applicable": r.applicable, "not_applicable": r.not_applicable, "minimum": MIN_APPLICABLE}),
        ),
    ])
}

fn expansion(cfg: &RunConfig, model: &LogModel) -> Result<Vec<Value>, Failure> {
    let r = expansion_verify(model, cfg.samples, cfg.seed)?;
    let witnesses: Vec<Value> = r
        .violations
        .iter()
        .take(MAX_WITNESSES)
        .map(|(z, d, b)| json!({"z": point(*z), "abs_derivative": d, "bound": b}))
        .collect();
    Ok(vec![check(
        "no_violations",
        r.passed(),
        json!({"samples": r.samples, "violations": r.violations.len(), "witnesses": witnesses}),
    )])
}

fn speedorder(cfg: &RunConfig, model: &LogModel) -> Result<Vec<Value>, Failure> {
    let params = HeadStartParams { m: cfg.m, k: cfg.k };
    let r = speed_order_verify(model, &params, &address(cfg)?, cfg.samples, cfg.seed)?;
    let of = |kind: &str| -> Vec<Value> {
        r.violations.iter().filter(|v| v.kind == kind).take(MAX_WITNESSES).map(|v| json!({"t": v.t})).collect()
    };
    let (anti, trans, sep) = (of("antisymmetry"), of("transitivity"), of("separation"));
    Ok(vec![
        check(
            "antisymmetry",
            anti.is_empty(),
            json!({"triples": r.triples, "decided": r.decided, "undecided": r.undecided, "witnesses": anti}),
        ),
        check("transitivity", trans.is_empty(), json!({"witnesses": trans})),
        check("separation", sep.is_empty() && r.grid_pairs > 0, json!({"grid_pairs": r.grid_pairs, "witnesses": sep})),
    ])
}

fn accumulation(cfg: &RunConfig, model: &LogModel) -> Result<Vec<Value>, Failure> {
    let s = address(cfg)?;
    let z0 = endpoint_estimate(model, &s)?.z;
    let steps =
        (1..=cfg.depth).map(|n| AccumulationStep::compute(model, z0, &s, n)).collect::<crate::Result<Vec<_>>>()?;
    if steps.is_empty() {
        return Err(Failure::usage("accumulation needs --depth >= 1"));
    }
    let mut straddle = Vec::new();
    let mut itinerary = Vec::new();
    let mut decreasing = Vec::new();
    let mut contraction = Vec::new();
    for st in &steps {
        let below = lex_compare_ext(&st.address_minus, &s)? == std::cmp::Ordering::Less;
        let above = lex_compare_ext(&s, &st.address_plus)? == std::cmp::Ordering::Less;
        if !(below && above) {
            straddle.push(json!({"n": st.n}));
        }
        if !st.itinerary_ok {
            itinerary.push(json!({"n": st.n}));
        }
    }
    for pair in steps.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if !(b.dist_minus < a.dist_minus && b.dist_plus < a.dist_plus) {
            decreasing.push(json!({"n": b.n}));
        }
        if b.n >= 2 && !(b.dist_minus / a.dist_minus <= 0.9 && b.dist_plus / a.dist_plus <= 0.9) {
            contraction.push(
                json!({"n": b.n, "ratio_minus": b.dist_minus / a.dist_minus, "ratio_plus": b.dist_plus / a.dist_plus}),
            );
        }
    }
    let levels: Vec<Value> = steps
        .iter()
        .map(|st| {
            json!({"n": st.n, "minus": point(st.minus), "plus": point(st.plus), "address_minus": st.address_minus.to_string(),
                   "address_plus": st.address_plus.to_string(), "dist_minus": st.dist_minus, "dist_plus": st.dist_plus})
        })
        .collect();
    Ok(vec![
        check("straddle", straddle.is_empty(), json!({"z0": point(z0), "levels": levels, "witnesses": straddle})),
        check("itinerary", itinerary.is_empty(), json!({"witnesses": itinerary})),
        check("strictly_decreasing", decreasing.is_empty(), json!({"witnesses": decreasing})),
        check("contraction", contraction.is_empty(), json!({"max_ratio": 0.9, "witnesses": contraction})),
    ])
}

fn brush_axioms(cfg: &RunConfig, model: &LogModel) -> Result<Vec<Value>, Failure> {
    let (addresses, desc) = family(cfg, model)?;
    let b = build_brush(model, &addresses, &grid_points(cfg.t), &desc)?;
    let r = check_brush_axioms(model, &b, &Refinement::new(cfg.depth)?, cfg.tol)?;
    Ok(axioms_json(&r))
}

/// Returns the report and whether every check passed.
pub fn verify(cfg: &RunConfig) -> Result<(bool, Vec<u8>), Failure> {
    let suite = cfg.suite.clone().ok_or_else(|| Failure::usage("verify needs --suite"))?;
    let model = cfg.model_unchecked()?;
    if !cfg.allow_non_disjoint && !model.validate_disjoint_type() {
        let details = json!({
            "model": cfg.model, "lambda": cfg.lambda, "Rf": cfg.rf,
            "tract_min_re": model.tract_min_re(), "h_threshold": model.h_threshold(),
            "witness": "the closure of the tracts is not contained in H"
        });
        return Ok(report(cfg, &suite, vec![check("disjoint_type", false, details)]));
    }
    let checks = match suite.as_str() {
        "headstart" => headstart(cfg, &model)?,
        "expansion" => expansion(cfg, &model)?,
        "speedorder" => speedorder(cfg, &model)?,
        "accumulation" => accumulation(cfg, &model)?,
        _ => brush_axioms(cfg, &model)?,
    };
    Ok(report(cfg, &suite, checks))
}

/// Returns the brush file and whether the axiom report passed.
pub fn brush(cfg: &RunConfig) -> Result<(bool, Vec<u8>), Failure> {
    let model = cfg.model()?;
    let (addresses, desc) = family(cfg, &model)?;
    let b = build_brush(&model, &addresses, &grid_points(cfg.t), &desc)?;
    let r = check_brush_axioms(&model, &b, &Refinement::new(cfg.depth)?, cfg.tol)?;
    let extra =
        json!({"config": cfg.to_json(), "axioms": {"status": r.status().to_string(), "checks": axioms_json(&r)}});
    Ok((r.passed(), brush_to_json_with(&b, Some(&extra)).into_bytes()))
}

pub fn render(cfg: &RunConfig) -> Outcome {
    let model = cfg.model()?;
    let spec = RenderSpec {
        viewport: cfg.viewport,
        width: cfg.size[0],
        height: cfg.size[1],
        r: cfg.r,
        depth: cfg.depth,
        log_plane: cfg.plane == "log",
    };
    Ok(render_ppm(&model, &spec)?)
}
