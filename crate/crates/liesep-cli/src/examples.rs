//! Built-in example definitions and their golden expectations.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use liesep_core::examples_builtin::{build_a13, build_sl4, A13Example};
use liesep_core::operators::{CoefficientSpec, Realization};
use liesep_core::symcore::{qr, LogLinearExpr, Polynomial, RationalFunction, Q};

use crate::definition::{Chart, GeneratorDef, OperatorDefinition, Options, Tolerances, DEFINITION_SCHEMA};
use crate::error::CliError;
use crate::report::loglinear_json;

pub const EXPECTED_SCHEMA: &str = "liesep/expected/v1";

/// Which `L` vector the a1+a1+a1 definition carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum A13Variant {
    /// The printed `L = (0, 2α, 4β-4, 4α, 4β+4γ-6, 4α)`.
    Printed,
    /// The `L` consistent with the printed exponent and potential.
    Consistent,
}

pub struct ExampleFiles {
    pub definition: OperatorDefinition,
    pub expected: Value,
}

fn label(i: usize, r: &Realization, k: usize) -> String {
    let g = &r.generators[k];
    let vs = r.vars();
    let mut parts = Vec::new();
    for (j, c) in g.vector.components.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let coef = if s == "1" {
            String::new()
        } else if s.contains(' ') {
            format!("({})", s)
        } else {
            s
        };
        parts.push(format!("{}∂_{}", coef, vs[j]));
    }
    if !g.multiplier.is_zero() {
        parts.push(format!("({})", g.multiplier));
    }
    format!("T_{} = {}", i, parts.join(" + "))
}

fn generators(r: &Realization) -> Vec<GeneratorDef> {
    r.generators
        .iter()
        .enumerate()
        .map(|(k, g)| GeneratorDef {
            label: Some(label(k + 1, r, k)),
            components: g.vector.components.iter().map(|c| c.to_string()).collect(),
            multiplier: g.multiplier.to_string(),
        })
        .collect()
}

fn q_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn definition(name: &str, r: &Realization, spec: &CoefficientSpec, options: Options) -> OperatorDefinition {
    OperatorDefinition {
        schema: DEFINITION_SCHEMA.into(),
        name: name.into(),
        variables: r.vars().iter().cloned().collect(),
        generators: generators(r),
        c: spec.c.iter().map(|row| q_strings(row)).collect(),
        l: q_strings(&spec.l),
        options,
    }
}

fn golden(name: &str, symbolic: Value, verdicts: BTreeMap<String, &str>, note: &str) -> Value {
    json!({
        "schema": EXPECTED_SCHEMA,
        "name": name,
        "note": note,
        "symbolic": symbolic,
        "separability": verdicts,
    })
}

fn symbolic_block(metric: Vec<Vec<String>>, det: &Polynomial, sigma: &LogLinearExpr, potential: String) -> Value {
    json!({
        "metric": {"matrix": metric},
        "determinant": {"polynomial": det.to_string()},
        "flatness": {"flat": true},
        "closure": {"closed": true},
        "gauge": {"sigma": loglinear_json(sigma), "verified": true},
        "potential": {"potential": potential},
    })
}

/// The a1+a1+a1 example at `(α, β, γ)`. With the printed `L` the exponent
/// and potential come out at `(2α, 2β-5/2, 2γ-3/2)`.
pub fn a13(variant: A13Variant, alpha: Q, beta: Q, gamma: Q) -> ExampleFiles {
    let ex = build_a13(alpha.clone(), beta.clone(), gamma.clone());
    let (spec, at): (&CoefficientSpec, A13Example) = match variant {
        A13Variant::Consistent => (&ex.spec_consistent, ex.clone()),
        A13Variant::Printed => {
            let two = Q::from_integer(2.into());
            (&ex.spec_printed, build_a13(&alpha * &two, &beta * &two - qr(5, 2), &gamma * &two - qr(3, 2)))
        }
    };
    let options = Options {
        log_candidates: ex.log_candidates().iter().map(|p| p.to_string()).collect(),
        poly_degree_cap: 1,
        systems: vec!["cartesian".into(), "cylindrical".into(), "spherical".into()],
        chart: Some(Chart::Substitution { components: vec!["x".into(), "x^2 + y^2".into(), "x^2 + y^2 + z^2".into()] }),
        ..Options::default()
    };
    let name = match variant {
        A13Variant::Consistent => "a1+a1+a1",
        A13Variant::Printed => "a1+a1+a1 (printed L)",
    };
    let def = definition(name, &ex.realization, spec, options);
    let verdicts = ["cartesian", "cylindrical", "spherical"].iter().map(|s| (s.to_string(), "separates")).collect();
    let note = format!(
        "exponent and potential at (alpha, beta, gamma) = ({}, {}, {}); chart u = x, v = x^2+y^2, w = x^2+y^2+z^2",
        at.alpha, at.beta, at.gamma
    );
    let symbolic = symbolic_block(ex.metric.to_strings(), &ex.determinant, &at.sigma, at.potential.to_string());
    ExampleFiles { definition: def, expected: golden(name, symbolic, verdicts, &note) }
}

/// The sl4 operator `-Δ + ∇ log σ` written over `T1..T12`.
pub fn sl4() -> ExampleFiles {
    let ex = build_sl4();
    let corrected = ex.laplacian_corrected.to_spec(12).expect("12 generators");
    let c: Vec<Vec<Q>> = corrected.c.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let l: Vec<Q> = corrected.l.iter().zip(&ex.grad_log_sigma_printed).map(|(a, b)| b - a).collect();
    let spec = CoefficientSpec::new(c, l).expect("symmetric C");
    let sigma = ex.sigma();
    let systems: Vec<String> =
        ["cartesian", "cylindrical", "spherical", "ellipsoidal:2:1", "paraboloidal:2:1"].iter().map(|s| s.to_string()).collect();
    let options = Options {
        log_candidates: vec![sigma.to_string()],
        poly_degree_cap: 0,
        systems: systems.clone(),
        chart: Some(Chart::A3Torus),
        tolerances: Tolerances::default(),
        ..Options::default()
    };
    let def = definition("sl4", &ex.realization, &spec, options);
    let two = Q::from_integer(2.into());
    let metric = ex.metric.scale(&two);
    let det = sigma.scale(&Q::from_integer((-8).into()));
    let exponent = LogLinearExpr::log(Q::from_integer((-1).into()), sigma).expect("non-constant σ");
    let vs = ex.metric.vars().clone();
    let shifted = &ex.potential_printed() - &RationalFunction::from_int(&vs, 100);
    let potential = shifted.scale(&two);
    let verdicts = systems.iter().map(|s| (s.clone(), "fails")).collect();
    let symbolic = symbolic_block(metric.to_strings(), &det, &exponent, potential.to_string());
    let note = "metric 2G for the operator -Δ_G + ∇_G log σ; exponent -log σ; potential 2(U_printed - 100)";
    ExampleFiles { definition: def, expected: golden("sl4", symbolic, verdicts, note) }
}

pub fn by_name(name: &str, variant: A13Variant, params: [Q; 3]) -> Result<ExampleFiles, CliError> {
    let [a, b, g] = params;
    match name {
        "a13" => Ok(a13(variant, a, b, g)),
        "sl4" => Ok(sl4()),
        other => Err(CliError::new("unknown_example", format!("unknown example `{}`; expected a13 or sl4", other))),
    }
}
