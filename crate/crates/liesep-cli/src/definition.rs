//! Operator definition wire format and its conversion to core objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use liesep_core::operators::{field_from_strs, CoefficientSpec, Realization};
use liesep_core::separability::{CoordinateSystem, SampleOptions};
use liesep_core::symcore::{parse_polynomial, parse_q, parse_rational, vars, Point, Polynomial, RationalFunction, Vars, Q};

use crate::error::CliError;

pub const DEFINITION_SCHEMA: &str = "liesep/operator-definition/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDefinition {
    pub schema: String,
    pub name: String,
    pub variables: Vec<String>,
    pub generators: Vec<GeneratorDef>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub components: Vec<String>,
    #[serde(default = "zero_string")]
    pub multiplier: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Variable name to rational literal; the origin when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub log_candidates: Vec<String>,
    #[serde(default = "default_cap")]
    pub poly_degree_cap: u32,
    #[serde(default = "default_systems")]
    pub systems: Vec<String>,
    /// How the potential is read as a function of Cartesian `(x, y, z)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<Chart>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            basepoint: None,
            log_candidates: vec![],
            poly_degree_cap: default_cap(),
            systems: default_systems(),
            chart: None,
            tolerances: Tolerances::default(),
            samples: default_samples(),
            seed: default_seed(),
        }
    }
}

fn default_cap() -> u32 {
    1
}

fn default_systems() -> Vec<String> {
    vec!["cartesian".into(), "cylindrical".into(), "spherical".into()]
}

fn default_samples() -> usize {
    30
}

fn default_seed() -> u64 {
    7
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tolerance")]
    pub separability: f64,
    /// Finite-difference step.
    #[serde(default = "default_step")]
    pub step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { separability: default_tolerance(), step: default_step() }
    }
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_step() -> f64 {
    1e-4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Chart {
    /// Each definition variable as a rational function of `x, y, z`.
    #[serde(rename = "substitution")]
    Substitution { components: Vec<String> },
    /// sl4 torus coordinates sampled in the orthonormal root frame.
    #[serde(rename = "a3-torus")]
    A3Torus,
}

/// Chart after parsing.
#[derive(Clone, Debug)]
pub enum LoadedChart {
    Identity,
    Substitution(Vec<RationalFunction>),
    A3Torus,
}

impl LoadedChart {
    pub fn describe(&self) -> String {
        match self {
            LoadedChart::Identity => "identity".into(),
            LoadedChart::Substitution(c) => {
                format!("substitution({})", c.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
            }
            LoadedChart::A3Torus => "a3-torus".into(),
        }
    }
}

/// A validated definition.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub vars: Vars,
    pub realization: Realization,
    pub spec: CoefficientSpec,
    pub basepoint: Point,
    pub log_candidates: Vec<Polynomial>,
    pub poly_degree_cap: u32,
    pub systems: Vec<CoordinateSystem>,
    pub chart: LoadedChart,
    pub sample: SampleOptions,
}

pub fn parse_definition(text: &str) -> Result<OperatorDefinition, CliError> {
    serde_json::from_str(text).map_err(CliError::from_json)
}

fn is_identifier(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_systems(items: &[String]) -> Result<Vec<CoordinateSystem>, CliError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| CoordinateSystem::parse(s).map_err(|e| CliError::invalid(format!("options.systems[{}]", i), e.to_string())))
        .collect()
}

/// Validates and converts; `digits` is the sampling precision.
pub fn load(def: &OperatorDefinition, digits: u32) -> Result<Loaded, CliError> {
    if def.schema != DEFINITION_SCHEMA {
        return Err(CliError::invalid("schema", format!("expected `{}`, got `{}`", DEFINITION_SCHEMA, def.schema)));
    }
    if def.variables.len() != 3 {
        return Err(CliError::invalid("variables", format!("exactly three variables required, got {}", def.variables.len())));
    }
    for (i, v) in def.variables.iter().enumerate() {
        if !is_identifier(v) {
            return Err(CliError::invalid(format!("variables[{}]", i), format!("`{}` is not an identifier", v)));
        }
        if def.variables[..i].contains(v) {
            return Err(CliError::invalid(format!("variables[{}]", i), format!("duplicate variable `{}`", v)));
        }
    }
    let names: Vec<&str> = def.variables.iter().map(String::as_str).collect();
    let vs = vars(&names);
    let m = def.generators.len();
    if m == 0 {
        return Err(CliError::invalid("generators", "at least one generator required"));
    }
    let mut gens = Vec::with_capacity(m);
    for (i, g) in def.generators.iter().enumerate() {
        if g.components.len() != 3 {
            return Err(CliError::invalid(
                format!("generators[{}].components", i),
                format!("three components required, got {}", g.components.len()),
            ));
        }
        let comps: Vec<&str> = g.components.iter().map(String::as_str).collect();
        for (k, c) in comps.iter().enumerate() {
            parse_polynomial(c, &vs).map_err(|e| CliError::invalid(format!("generators[{}].components[{}]", i, k), e.to_string()))?;
        }
        parse_polynomial(&g.multiplier, &vs).map_err(|e| CliError::invalid(format!("generators[{}].multiplier", i), e.to_string()))?;
        gens.push(field_from_strs(&vs, &comps, &g.multiplier).map_err(|e| CliError::invalid(format!("generators[{}]", i), e.to_string()))?);
    }
    let realization = Realization::new(def.name.clone(), gens).map_err(|e| CliError::invalid("generators", e.to_string()))?;
    if def.c.len() != m || def.l.len() != m {
        return Err(CliError::invalid("C", format!("C must be {m}x{m} and L must have {m} entries for {m} generators")));
    }
    let mut c = Vec::with_capacity(m);
    for (i, row) in def.c.iter().enumerate() {
        if row.len() != m {
            return Err(CliError::invalid(format!("C[{}]", i), format!("row has {} entries, expected {}", row.len(), m)));
        }
        let r: Result<Vec<Q>, CliError> = row
            .iter()
            .enumerate()
            .map(|(j, s)| parse_q(s).map_err(|e| CliError::invalid(format!("C[{}][{}]", i, j), e.to_string())))
            .collect();
        c.push(r?);
    }
    let l: Vec<Q> = def
        .l
        .iter()
        .enumerate()
        .map(|(i, s)| parse_q(s).map_err(|e| CliError::invalid(format!("L[{}]", i), e.to_string())))
        .collect::<Result<_, _>>()?;
    let spec = CoefficientSpec::symmetrized(c, l).map_err(|e| CliError::invalid("C", e.to_string()))?;

    let opts = &def.options;
    let mut basepoint = Point::origin(&vs);
    if let Some(bp) = &opts.basepoint {
        for (k, v) in bp {
            if !def.variables.contains(k) {
                return Err(CliError::invalid(format!("options.basepoint.{}", k), "not a definition variable"));
            }
            let x = parse_q(v).map_err(|e| CliError::invalid(format!("options.basepoint.{}", k), e.to_string()))?;
            basepoint.set(k, x);
        }
    }
    let log_candidates = opts
        .log_candidates
        .iter()
        .enumerate()
        .map(|(i, s)| parse_polynomial(s, &vs).map_err(|e| CliError::invalid(format!("options.log_candidates[{}]", i), e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let systems = parse_systems(&opts.systems)?;
    let chart = match &opts.chart {
        None => LoadedChart::Identity,
        Some(Chart::A3Torus) => LoadedChart::A3Torus,
        Some(Chart::Substitution { components }) => {
            if components.len() != 3 {
                return Err(CliError::invalid("options.chart.components", "three components required"));
            }
            let xyz = vars(&["x", "y", "z"]);
            let parsed = components
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_rational(s, &xyz).map_err(|e| CliError::invalid(format!("options.chart.components[{}]", i), e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            LoadedChart::Substitution(parsed)
        }
    };
    let tol = &opts.tolerances;
    if !(tol.separability > 0.0 && tol.separability.is_finite()) {
        return Err(CliError::invalid("options.tolerances.separability", "must be positive"));
    }
    if !(tol.step > 0.0 && tol.step < 0.1) {
        return Err(CliError::invalid("options.tolerances.step", "must lie in (0, 0.1)"));
    }
    if opts.samples == 0 {
        return Err(CliError::invalid("options.samples", "must be positive"));
    }
    let sample = SampleOptions {
        samples: opts.samples,
        digits,
        step: tol.step,
        tolerance: tol.separability,
        seed: opts.seed,
        bounds: None,
    };
    Ok(Loaded {
        name: def.name.clone(),
        vars: vs,
        realization,
        spec,
        basepoint,
        log_candidates,
        poly_degree_cap: opts.poly_degree_cap,
        systems,
        chart,
        sample,
    })
}
