//! Problem files: `{"command": ..., "payload": {...}, "options": {...}}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use pivext::cohomology::{Cochain, CochainJson};
use pivext::gmodule::{inv_center_module, CharacterJson};
use pivext::group::{center, commutator_subgroup, generated_subgroup, make_standard, GroupError, GroupInput};
use pivext::picard::carrier_group;
use pivext::pivotal::ExtensionProblem;
use pivext::ty::{bichar_from_basis_matrix, standard_bichar, validate_ty, TYData, TauSign};
use pivext::{Character, FiniteGroup, GModule, Guards, StandardSpec, Subgroup, TorsionUnits, QZ};
use serde_json::{Map, Value};

use crate::error::{lib, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ExtendCharacter,
    Cohomology,
    Ty,
    Picard,
    Les,
    ModulePivotal,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::ExtendCharacter,
        Command::Cohomology,
        Command::Ty,
        Command::Picard,
        Command::Les,
        Command::ModulePivotal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ExtendCharacter => "extend-character",
            Command::Cohomology => "cohomology",
            Command::Ty => "ty",
            Command::Picard => "picard",
            Command::Les => "les",
            Command::ModulePivotal => "module-pivotal",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub format: Format,
    /// `N` for coboundary witnesses valued in `μ_N`.
    pub level: Option<u64>,
    pub guards: Guards,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Json,
            level: None,
            guards: Guards::current().clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Coefficients {
    Kx,
    /// `ℤ/N` with trivial action.
    Mu(u64),
    /// `Ĉ` over `D/C` by conjugation.
    ConjCharacter(Subgroup),
    /// `C × Ĉ` over `D/C` by conjugation.
    InvCenter(Subgroup),
}

#[derive(Debug, Clone)]
pub enum Payload {
    ExtendCharacter {
        problem: ExtensionProblem,
    },
    Cohomology {
        group: Arc<FiniteGroup>,
        degree: usize,
        coefficients: Coefficients,
    },
    Ty {
        data: TYData,
        phi: Character,
    },
    Picard {
        group: Arc<FiniteGroup>,
        phi: Character,
    },
    Les {
        group: Arc<FiniteGroup>,
        subgroup: Subgroup,
        module: Arc<GModule>,
        alpha: Option<Cochain<TorsionUnits>>,
    },
    ModulePivotal {
        phi: Character,
        subgroup: Subgroup,
    },
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub command: Command,
    pub payload: Payload,
    pub options: Options,
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::schema("$", format!("a JSON object ({e})")))?;
    parse_problem(&v)
}

pub fn parse_problem(v: &Value) -> Result<ProblemFile, CliError> {
    let top = v.as_object().ok_or_else(|| CliError::schema("$", "an object"))?;
    for key in top.keys() {
        if !["command", "payload", "options"].contains(&key.as_str()) {
            return Err(CliError::schema(format!("$.{key}"), "no such field (command, payload, options)"));
        }
    }
    let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
    let command: Command = top
        .get("command")
        .and_then(Value::as_str)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::schema("$.command", format!("one of {}", names.join(", "))))?;
    let options = match top.get("options") {
        None | Some(Value::Null) => Options::default(),
        Some(o) => parse_options(o)?,
    };
    let payload = top
        .get("payload")
        .and_then(Value::as_object)
        .ok_or_else(|| CliError::schema("$.payload", "an object"))?;
    let payload = match command {
        Command::ExtendCharacter => parse_extend(payload)?,
        Command::Cohomology => parse_cohomology(payload)?,
        Command::Ty => parse_ty(payload)?,
        Command::Picard => parse_picard(payload)?,
        Command::Les => parse_les(payload)?,
        Command::ModulePivotal => parse_module_pivotal(payload)?,
    };
    Ok(ProblemFile {
        command,
        payload,
        options,
    })
}

fn parse_options(v: &Value) -> Result<Options, CliError> {
    let o = v.as_object().ok_or_else(|| CliError::schema("$.options", "an object"))?;
    let mut out = Options::default();
    for (key, val) in o {
        let path = format!("$.options.{key}");
        match key.as_str() {
            "format" => {
                out.format = val
                    .as_str()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| CliError::schema(&path, "\"json\" or \"text\""))?
            }
            "level" => {
                out.level = match val {
                    Value::Null => None,
                    _ => Some(
                        val.as_u64()
                            .filter(|&n| n > 0)
                            .ok_or_else(|| CliError::schema(&path, "a positive integer"))?,
                    ),
                }
            }
            "guards" => {
                let g = val.as_object().ok_or_else(|| CliError::schema(&path, "an object of guard sizes"))?;
                for (name, size) in g {
                    let p = format!("{path}.{name}");
                    let size = size
                        .as_u64()
                        .ok_or_else(|| CliError::schema(&p, "a nonnegative integer"))? as usize;
                    let slot = match name.as_str() {
                        "kx_low_degree_order" => &mut out.guards.kx_low_degree_order,
                        "kx_degree3_order" => &mut out.guards.kx_degree3_order,
                        "dense_cells" => &mut out.guards.dense_cells,
                        "hyperbolic_base" => &mut out.guards.hyperbolic_base,
                        "orthogonal_carrier" => &mut out.guards.orthogonal_carrier,
                        "orthogonal_carrier_elementary2" => &mut out.guards.orthogonal_carrier_elementary2,
                        "crossed_homs" => &mut out.guards.crossed_homs,
                        _ => return Err(CliError::schema(p, "a known guard name")),
                    };
                    *slot = size;
                }
            }
            _ => return Err(CliError::schema(path, "no such option (format, level, guards)")),
        }
    }
    Ok(out)
}

fn field<'a>(o: &'a Map<String, Value>, name: &str) -> Result<&'a Value, CliError> {
    o.get(name)
        .filter(|v| !v.is_null())
        .ok_or_else(|| CliError::schema(format!("$.payload.{name}"), "a value (missing)"))
}

fn only_fields(o: &Map<String, Value>, allowed: &[&str]) -> Result<(), CliError> {
    for key in o.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::schema(
                format!("$.payload.{key}"),
                format!("no such field ({})", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

/// A spec string such as `"dihedral:8"` or `"cyclic:2 x cyclic:4"`, or a
/// `{"standard": ...}` / `{"table": ...}` object.
pub fn parse_group(v: &Value, path: &str) -> Result<Arc<FiniteGroup>, CliError> {
    let built = match v {
        Value::String(s) => {
            let spec: StandardSpec = s.parse().map_err(|e| match e {
                GroupError::UnknownGroup(name) => CliError::UnknownGroup {
                    path: path.to_string(),
                    name,
                },
                other => CliError::invalid(path, other),
            })?;
            make_standard(&spec)
        }
        Value::Object(_) => {
            let input: GroupInput = serde_json::from_value(v.clone()).map_err(|_| {
                CliError::schema(path, "a group spec string, {\"standard\": {kind, params}} or {\"table\": [[...]]}")
            })?;
            if let GroupInput::Standard { standard } = &input {
                StandardSpec::from_json(standard).map_err(|e| match e {
                    GroupError::UnknownGroup(name) => CliError::UnknownGroup {
                        path: path.to_string(),
                        name,
                    },
                    other => CliError::invalid(path, other),
                })?;
            }
            input.build()
        }
        _ => return Err(CliError::schema(path, "a group spec string or object")),
    };
    built.map(Arc::new).map_err(lib(path))
}

pub fn parse_fraction(v: &Value, path: &str) -> Result<QZ, CliError> {
    let expected = "a fraction \"a/b\" with b > 0";
    match v {
        Value::String(s) => s.parse().map_err(|_| CliError::schema(path, expected)),
        Value::Number(n) if n.is_i64() => Ok(QZ::ZERO),
        _ => Err(CliError::schema(path, expected)),
    }
}

/// An array of fractions or one comma-separated string.
pub fn parse_fractions(v: &Value, path: &str) -> Result<Vec<QZ>, CliError> {
    match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| parse_fraction(x, &format!("{path}[{i}]")))
            .collect(),
        Value::String(s) if s.trim().is_empty() => Ok(Vec::new()),
        Value::String(s) => s
            .split(',')
            .enumerate()
            .map(|(i, x)| parse_fraction(&Value::String(x.to_string()), &format!("{path}[{i}]")))
            .collect(),
        _ => Err(CliError::schema(path, "an array of fractions or a comma-separated string")),
    }
}

/// `"center"`, `"commutator"`, `"whole"`, `"trivial"`, comma-separated generator
/// labels, or an array of labels.
pub fn parse_subgroup(g: &Arc<FiniteGroup>, v: &Value, path: &str) -> Result<Subgroup, CliError> {
    let labels: Vec<String> = match v {
        Value::String(s) => match s.trim() {
            "center" => return Ok(center(g)),
            "commutator" => return Ok(commutator_subgroup(g)),
            "whole" => return Ok(generated_subgroup(g, g.generators())),
            "trivial" | "" => return Ok(generated_subgroup(g, &[])),
            list => list.split(',').map(|x| x.trim().to_string()).collect(),
        },
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| CliError::schema(format!("{path}[{i}]"), "an element label"))
            })
            .collect::<Result<_, _>>()?,
        _ => return Err(CliError::schema(path, "a subgroup name, generator labels, or an array of labels")),
    };
    let gens = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            g.element_by_label(l)
                .ok_or_else(|| CliError::invalid(format!("{path}[{i}]"), format!("unknown element {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(generated_subgroup(g, &gens))
}

/// Values on the listed generators, or `{"on_generators": ...}` / `{"on_elements": ...}`.
fn parse_character(
    domain: &Arc<FiniteGroup>,
    gens: &[usize],
    v: &Value,
    path: &str,
) -> Result<Character, CliError> {
    if v.is_object() {
        let json: CharacterJson = serde_json::from_value(v.clone())
            .map_err(|_| CliError::schema(path, "{\"on_generators\": [...]} or {\"on_elements\": [...]}"))?;
        return json.build(Arc::clone(domain), gens).map_err(lib(path));
    }
    let values = parse_fractions(v, path)?;
    if values.len() != gens.len() {
        let labels: Vec<&str> = gens.iter().map(|&x| domain.label(x)).collect();
        return Err(CliError::schema(
            path,
            format!("{} values, one per generator ({})", gens.len(), labels.join(", ")),
        ));
    }
    let pairs: Vec<(usize, QZ)> = gens.iter().copied().zip(values).collect();
    Character::from_generators(Arc::clone(domain), &pairs).map_err(lib(path))
}

/// A character of the abelian group `a`, on its generators; absent means trivial.
fn parse_phi(a: &Arc<FiniteGroup>, o: &Map<String, Value>) -> Result<Character, CliError> {
    match o.get("phi") {
        None | Some(Value::Null) => Ok(Character::trivial(Arc::clone(a))),
        Some(v) => parse_character(a, a.generators(), v, "$.payload.phi"),
    }
}

fn parse_extend(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["group", "subgroup", "character"])?;
    let d = parse_group(field(o, "group")?, "$.payload.group")?;
    let c = parse_subgroup(&d, field(o, "subgroup")?, "$.payload.subgroup")?;
    c.require_normal().map_err(lib("$.payload.subgroup"))?;
    c.require_abelian().map_err(lib("$.payload.subgroup"))?;
    let (cg, embedding) = c.to_group();
    let cg = Arc::new(cg);
    let local: Vec<usize> = c
        .generators()
        .iter()
        .map(|x| embedding.iter().position(|m| m == x).expect("generator is a member"))
        .collect();
    let chi = parse_character(&cg, &local, field(o, "character")?, "$.payload.character")?;
    let problem = ExtensionProblem::new(d, c, chi).map_err(lib("$.payload"))?;
    Ok(Payload::ExtendCharacter { problem })
}

fn parse_cohomology(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["group", "degree", "coefficients", "subgroup"])?;
    let group = parse_group(field(o, "group")?, "$.payload.group")?;
    let degree = field(o, "degree")?
        .as_u64()
        .filter(|n| (1..=3).contains(n))
        .ok_or_else(|| CliError::schema("$.payload.degree", "1, 2 or 3"))? as usize;
    let path = "$.payload.coefficients";
    let expected = "\"kx\", \"mu:N\", \"conj-character\" or \"inv-center\"";
    let name = match o.get("coefficients") {
        None | Some(Value::Null) => "kx".to_string(),
        Some(Value::String(s)) => s.trim().to_string(),
        Some(_) => return Err(CliError::schema(path, expected)),
    };
    let subgroup = || -> Result<Subgroup, CliError> {
        let c = parse_subgroup(&group, field(o, "subgroup")?, "$.payload.subgroup")?;
        c.require_normal().map_err(lib("$.payload.subgroup"))?;
        c.require_abelian().map_err(lib("$.payload.subgroup"))?;
        Ok(c)
    };
    let coefficients = match name.as_str() {
        "kx" => Coefficients::Kx,
        "conj-character" => Coefficients::ConjCharacter(subgroup()?),
        "inv-center" => Coefficients::InvCenter(subgroup()?),
        other => match other.strip_prefix("mu:").and_then(|n| n.parse::<u64>().ok()) {
            Some(n) if n > 0 => Coefficients::Mu(n),
            _ => return Err(CliError::schema(path, expected)),
        },
    };
    Ok(Payload::Cohomology {
        group,
        degree,
        coefficients,
    })
}

fn parse_ty(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["order", "group", "bichar", "tau", "phi"])?;
    let a = match (o.get("order"), o.get("group")) {
        (Some(n), None) => {
            let n = n
                .as_u64()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::schema("$.payload.order", "a positive integer"))?;
            make_standard(&StandardSpec::Cyclic(n)).map(Arc::new).map_err(lib("$.payload.order"))?
        }
        (None, Some(g)) => parse_group(g, "$.payload.group")?,
        _ => return Err(CliError::schema("$.payload", "exactly one of order, group")),
    };
    a.require_abelian().map_err(lib("$.payload.group"))?;
    let table = match o.get("bichar") {
        None | Some(Value::Null) => standard_bichar(&a).map_err(lib("$.payload.bichar"))?,
        Some(Value::String(s)) if s == "standard" => standard_bichar(&a).map_err(lib("$.payload.bichar"))?,
        Some(Value::Array(rows)) => {
            let m = rows
                .iter()
                .enumerate()
                .map(|(i, r)| parse_fractions(r, &format!("$.payload.bichar[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            bichar_from_basis_matrix(&a, &m).map_err(lib("$.payload.bichar"))?
        }
        Some(_) => {
            return Err(CliError::schema(
                "$.payload.bichar",
                "\"standard\" or a square matrix of fractions on the invariant-factor basis",
            ))
        }
    };
    let tau = match o.get("tau") {
        None | Some(Value::Null) => TauSign::Plus,
        Some(Value::String(s)) => s.parse().map_err(|_| CliError::schema("$.payload.tau", "\"+\" or \"-\""))?,
        Some(Value::Number(n)) if n.as_i64() == Some(1) => TauSign::Plus,
        Some(Value::Number(n)) if n.as_i64() == Some(-1) => TauSign::Minus,
        Some(_) => return Err(CliError::schema("$.payload.tau", "\"+\" or \"-\"")),
    };
    let phi = parse_phi(&a, o)?;
    let data = validate_ty(a, table, tau).map_err(lib("$.payload.bichar"))?;
    Ok(Payload::Ty { data, phi })
}

fn parse_picard(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["group", "phi"])?;
    let group = parse_group(field(o, "group")?, "$.payload.group")?;
    group.require_abelian().map_err(lib("$.payload.group"))?;
    let phi = parse_phi(&group, o)?;
    Ok(Payload::Picard { group, phi })
}

fn parse_les(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["group", "subgroup", "alpha"])?;
    let group = parse_group(field(o, "group")?, "$.payload.group")?;
    let subgroup = parse_subgroup(&group, field(o, "subgroup")?, "$.payload.subgroup")?;
    let module = Arc::new(inv_center_module(&group, &subgroup).map_err(lib("$.payload.subgroup"))?);
    let alpha = match o.get("alpha") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let json: CochainJson = serde_json::from_value(v.clone())
                .map_err(|_| CliError::schema("$.payload.alpha", "{\"degree\": 3, \"values\": {\"(x,y,z)\": \"a/b\"}}"))?;
            let mg = carrier_group(&module).map_err(lib("$.payload.alpha"))?;
            Some(Cochain::from_json(&json, mg, Arc::new(TorsionUnits)).map_err(lib("$.payload.alpha"))?)
        }
    };
    Ok(Payload::Les {
        group,
        subgroup,
        module,
        alpha,
    })
}

fn parse_module_pivotal(o: &Map<String, Value>) -> Result<Payload, CliError> {
    only_fields(o, &["group", "phi", "subgroup"])?;
    let group = parse_group(field(o, "group")?, "$.payload.group")?;
    group.require_abelian().map_err(lib("$.payload.group"))?;
    let phi = parse_phi(&group, o)?;
    let subgroup = parse_subgroup(&group, field(o, "subgroup")?, "$.payload.subgroup")?;
    Ok(Payload::ModulePivotal { phi, subgroup })
}
