//! Pipeline stages and the JSON report.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde_json::{json, Value};

use liesep_core::degeneracy::{classify_reachability, degeneracy_locus, fold_map_for, is_generic, DiagonalMetric};
use liesep_core::examples_builtin::potential_in_frame;
use liesep_core::gauge::{closure_check, schrodinger_potential, solve_gauge_exponent, GaugeSolution};
use liesep_core::geometry::is_flat;
use liesep_core::operators::{build_lie_algebraic, decompose, extract_metric, MetricTensor, SecondOrderOp, VectorField};
use liesep_core::separability::{
    emit_separated_equations, partial_separation_test, stackel_form_test, CoordinateSystem, Potential,
    SeparabilityReport, StackelConditions,
};
use liesep_core::symcore::{LogLinearExpr, Polynomial, RationalFunction, Q};
use liesep_core::Error;

use crate::definition::{Loaded, LoadedChart};
use crate::error::error_code;

pub const REPORT_SCHEMA: &str = "liesep/report/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Stage {
    Metric,
    Determinant,
    Flatness,
    Genericity,
    Reachability,
    Closure,
    Gauge,
    Potential,
    Separability,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Metric,
        Stage::Determinant,
        Stage::Flatness,
        Stage::Genericity,
        Stage::Reachability,
        Stage::Closure,
        Stage::Gauge,
        Stage::Potential,
        Stage::Separability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Metric => "metric",
            Stage::Determinant => "determinant",
            Stage::Flatness => "flatness",
            Stage::Genericity => "genericity",
            Stage::Reachability => "reachability",
            Stage::Closure => "closure",
            Stage::Gauge => "gauge",
            Stage::Potential => "potential",
            Stage::Separability => "separability",
        }
    }

    fn dependency(self) -> Option<Stage> {
        match self {
            Stage::Metric => None,
            Stage::Determinant | Stage::Flatness | Stage::Genericity | Stage::Reachability | Stage::Closure => Some(Stage::Metric),
            Stage::Gauge => Some(Stage::Closure),
            Stage::Potential => Some(Stage::Gauge),
            Stage::Separability => Some(Stage::Potential),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StageResult {
    Ok(Value),
    Skipped(String),
    /// Computation failed; the payload holds whatever was computed.
    Error { code: &'static str, message: String, payload: Option<Value> },
    Blocked(Stage),
}

impl StageResult {
    fn from_err(e: &Error) -> Self {
        StageResult::Error { code: error_code(e), message: e.to_string(), payload: None }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, StageResult::Error { .. } | StageResult::Blocked(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            StageResult::Ok(p) => json!({"status": "ok", "payload": p}),
            StageResult::Skipped(reason) => json!({"status": "skipped", "reason": reason}),
            StageResult::Error { code, message, payload } => {
                let mut v = json!({"status": "error", "error": {"code": code, "message": message}});
                if let Some(p) = payload {
                    v["payload"] = p.clone();
                }
                v
            }
            StageResult::Blocked(dep) => json!({
                "status": "blocked",
                "error": {"code": "dependency_failed", "message": format!("stage `{}` did not complete", dep.name())},
            }),
        }
    }
}

#[derive(Default)]
struct State {
    operator: Option<SecondOrderOp>,
    metric: Option<MetricTensor>,
    decomposition: Option<(VectorField, RationalFunction)>,
    closed: bool,
    gauge: Option<GaugeSolution>,
    potential: Option<RationalFunction>,
}

pub struct Report {
    pub name: String,
    pub variables: Vec<String>,
    pub digits: u32,
    pub results: BTreeMap<Stage, StageResult>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.results.values().any(StageResult::is_failure)
    }

    pub fn to_json(&self) -> Value {
        let stages: serde_json::Map<String, Value> =
            self.results.iter().map(|(s, r)| (s.name().to_string(), r.to_json())).collect();
        json!({
            "schema": REPORT_SCHEMA,
            "name": self.name,
            "variables": self.variables,
            "digits": self.digits,
            "stages": stages,
        })
    }
}

fn strings(v: &VectorField) -> Vec<String> {
    v.components.iter().map(|c| c.to_string()).collect()
}

pub fn loglinear_json(s: &LogLinearExpr) -> Value {
    let logs: Vec<Value> =
        s.log_terms().iter().map(|(c, p)| json!({"coefficient": c.to_string(), "argument": p.to_string()})).collect();
    json!({"expression": s.to_string(), "rational": s.rational_part().to_string(), "logs": logs})
}

fn diagonal_entries(g: &MetricTensor) -> Option<[Polynomial; 3]> {
    let polys = g.polynomial_entries()?;
    if g.dim() != 3 {
        return None;
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j && !polys[i][j].is_zero() {
                return None;
            }
        }
    }
    Some([polys[0][0].clone(), polys[1][1].clone(), polys[2][2].clone()])
}

fn separability_entry(rep: &SeparabilityReport, test: &str) -> Value {
    let witness = rep.witness.as_ref().map(|w| {
        json!({"coords": w.coords, "cartesian": w.cartesian, "condition": w.condition, "value": w.value})
    });
    let conditions: Vec<Value> = rep.conditions.iter().map(|c| json!({"name": c.name, "max_abs": c.max_abs})).collect();
    let components: Vec<Value> = rep.components.iter().map(|(n, d)| json!({"name": n, "definition": d})).collect();
    json!({
        "system": rep.system.name(),
        "test": test,
        "verdict": rep.verdict.as_str(),
        "method": rep.method.as_str(),
        "components": components,
        "witness": witness,
        "conditions": conditions,
    })
}

/// Runs `requested` and their dependencies in pipeline order. Only the
/// requested stages appear in the report.
pub fn run(def: &Loaded, requested: &[Stage], systems: Option<&[CoordinateSystem]>) -> Report {
    let mut needed: Vec<Stage> = Vec::new();
    for &s in requested {
        let mut cur = Some(s);
        while let Some(c) = cur {
            if !needed.contains(&c) {
                needed.push(c);
            }
            cur = c.dependency();
        }
    }
    needed.sort();
    let mut st = State::default();
    let mut all: BTreeMap<Stage, StageResult> = BTreeMap::new();
    for stage in needed {
        if let Some(dep) = stage.dependency() {
            if all.get(&dep).map_or(true, StageResult::is_failure) {
                all.insert(stage, StageResult::Blocked(dep));
                continue;
            }
        }
        let r = run_stage(stage, def, &mut st, systems);
        all.insert(stage, r);
    }
    let results = all.into_iter().filter(|(s, _)| requested.contains(s)).collect();
    Report { name: def.name.clone(), variables: def.vars.iter().cloned().collect(), digits: def.sample.digits, results }
}

fn run_stage(stage: Stage, def: &Loaded, st: &mut State, systems: Option<&[CoordinateSystem]>) -> StageResult {
    match stage {
        Stage::Metric => match build_lie_algebraic(&def.spec, &def.realization) {
            Ok(h) => {
                let g = extract_metric(&h);
                let payload = json!({"matrix": g.to_strings(), "operator": h.to_string()});
                st.operator = Some(h);
                st.metric = Some(g);
                StageResult::Ok(payload)
            }
            Err(e) => StageResult::from_err(&e),
        },
        Stage::Determinant => {
            let g = st.metric.as_ref().expect("metric stage ran");
            StageResult::Ok(json!({"polynomial": degeneracy_locus(g).to_string()}))
        }
        Stage::Flatness => match is_flat(st.metric.as_ref().expect("metric stage ran")) {
            Ok(f) => StageResult::Ok(json!({
                "flat": f.flat,
                "components_checked": f.components_checked,
                "witness": f.witness.map(|w| json!({"index": [w.index.0, w.index.1, w.index.2, w.index.3], "value": w.value})),
            })),
            Err(e) => StageResult::from_err(&e),
        },
        Stage::Genericity | Stage::Reachability => {
            let g = st.metric.as_ref().expect("metric stage ran");
            let Some([p, q, r]) = diagonal_entries(g) else {
                return StageResult::Skipped("metric is not a diagonal polynomial matrix".into());
            };
            let dm = match DiagonalMetric::with_basepoint(p, q, r, def.basepoint.clone()) {
                Ok(dm) => dm,
                Err(e) => return StageResult::from_err(&e),
            };
            let basepoint: BTreeMap<String, String> = def.basepoint.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
            if stage == Stage::Genericity {
                return match is_generic(&dm) {
                    Ok((generic, w)) => StageResult::Ok(json!({
                        "generic": generic,
                        "witness": w.map(|p| p.to_string()),
                        "basepoint": basepoint,
                    })),
                    Err(e) => StageResult::from_err(&e),
                };
            }
            match classify_reachability(&dm) {
                Ok(v) => {
                    let fold = fold_map_for(&v).ok().map(|f| json!({"kind": f.kind.as_str(), "components": f.describe(&def.vars)}));
                    StageResult::Ok(json!({
                        "kind": v.kind.as_str(),
                        "orders": v.orders,
                        "relabeling": v.relabeling.map(|i| i + 1),
                        "fold_map": fold,
                        "basepoint": basepoint,
                    }))
                }
                Err(Error::NotDegenerate(d)) => StageResult::Skipped(format!("basepoint is not degenerate: det g = {}", d)),
                Err(e) => StageResult::from_err(&e),
            }
        }
        Stage::Closure => {
            let (h, g) = (st.operator.as_ref().expect("metric stage ran"), st.metric.as_ref().expect("metric stage ran"));
            let (v, u0) = match decompose(h, g) {
                Ok(d) => d,
                Err(e) => return StageResult::from_err(&e),
            };
            match closure_check(g, &v) {
                Ok((closed, w)) => {
                    let payload = json!({
                        "closed": closed,
                        "witness": w.map(|(i, j)| [i, j]),
                        "first_order": strings(&v),
                        "zeroth_order": u0.to_string(),
                    });
                    st.decomposition = Some((v, u0));
                    st.closed = closed;
                    StageResult::Ok(payload)
                }
                Err(e) => StageResult::from_err(&e),
            }
        }
        Stage::Gauge => {
            let g = st.metric.as_ref().expect("metric stage ran");
            let (v, _) = st.decomposition.as_ref().expect("closure stage ran");
            if !st.closed {
                return StageResult::Error {
                    code: "not_closed",
                    message: "the one-form g_ij V^j is not closed, so V is not a gradient".into(),
                    payload: None,
                };
            }
            let m2 = -Q::from_integer(2.into());
            match solve_gauge_exponent(g, &v.scale(&m2), &def.log_candidates, def.poly_degree_cap) {
                Ok(sol) => {
                    let payload = json!({
                        "sigma": loglinear_json(&sol.sigma),
                        "verified": sol.verified,
                        "residual": strings(&sol.residual),
                        "log_candidates": def.log_candidates.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "poly_degree_cap": def.poly_degree_cap,
                    });
                    if sol.verified {
                        st.gauge = Some(sol);
                        StageResult::Ok(payload)
                    } else {
                        StageResult::Error {
                            code: "gauge_unsolved",
                            message: "no exponent in the candidate span has gradient -2V".into(),
                            payload: Some(payload),
                        }
                    }
                }
                Err(e) => StageResult::from_err(&e),
            }
        }
        Stage::Potential => {
            let g = st.metric.as_ref().expect("metric stage ran");
            let (_, u0) = st.decomposition.as_ref().expect("closure stage ran");
            let sigma = &st.gauge.as_ref().expect("gauge stage ran").sigma;
            let m2 = -Q::from_integer(2.into());
            match schrodinger_potential(g, sigma, &u0.scale(&m2)) {
                Ok(s) => {
                    let payload = json!({
                        "potential": s.potential.to_string(),
                        "residual_first_order": strings(&s.residual),
                        "convention": s.convention,
                    });
                    st.potential = Some(s.potential);
                    StageResult::Ok(payload)
                }
                Err(e) => StageResult::from_err(&e),
            }
        }
        Stage::Separability => {
            let u = st.potential.as_ref().expect("potential stage ran");
            let pot = match &def.chart {
                LoadedChart::Identity => Potential::Symbolic(u.clone()),
                LoadedChart::Substitution(c) => Potential::Symbolic(u.compose(c)),
                LoadedChart::A3Torus => Potential::Numeric(potential_in_frame(u, def.sample.digits)),
            };
            let systems = systems.unwrap_or(&def.systems);
            let opts = &def.sample;
            let mut entries = Vec::new();
            let mut failure: Option<(&'static str, String)> = None;
            for sys in systems {
                let confocal = matches!(sys, CoordinateSystem::Ellipsoidal { .. } | CoordinateSystem::Paraboloidal { .. });
                let res = if confocal {
                    stackel_form_test(&pot, sys, StackelConditions::Full, opts).map(|r| separability_entry(&r, "stackel"))
                } else {
                    partial_separation_test(&pot, sys, opts).map(|r| {
                        let mut e = separability_entry(&r, "partial");
                        if r.separates() {
                            if let Ok(eq) = emit_separated_equations(&pot, sys, opts) {
                                e["equations"] = json!({
                                    "one_variable": eq.one_variable,
                                    "residual": eq.residual,
                                    "constants": eq.constants,
                                });
                            }
                        }
                        e
                    })
                };
                match res {
                    Ok(e) => entries.push(e),
                    Err(e) => {
                        entries.push(json!({"system": sys.name(), "error": {"code": error_code(&e), "message": e.to_string()}}));
                        failure.get_or_insert((error_code(&e), format!("{}: {}", sys.name(), e)));
                    }
                }
            }
            let payload = json!({
                "chart": def.chart.describe(),
                "digits": opts.digits,
                "samples": opts.samples,
                "seed": opts.seed,
                "tolerance": opts.tolerance,
                "step": opts.step,
                "systems": entries,
            });
            match failure {
                None => StageResult::Ok(payload),
                Some((code, message)) => StageResult::Error { code, message, payload: Some(payload) },
            }
        }
    }
}
