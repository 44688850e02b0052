//! JSON documents for generators and array specs.
//!
//! A generator document is one of
//!
//! ```json
//! {"kind": "morphism", "alphabet": ["0", "1"],
//!  "rules": {"0": ["0", "1"], "1": ["1", "0"]},
//!  "coding": {"0": 0, "1": 1}, "seed": "0"}
//!
//! {"kind": "dfao", "base": 2, "order": "lsb_first",
//!  "states": ["even", "odd"], "start": "even",
//!  "transitions": {"even": ["even", "odd"], "odd": ["odd", "even"]},
//!  "outputs": {"even": 0, "odd": 1}}
//!
//! {"kind": "file", "path": "thue_morse.json"}
//! ```
//!
//! Rules may also be strings whose characters are single-letter names. An
//! array spec lists `bases`, `generators`, an optional `value_sets`, the
//! `f_table` as `[[v_1, ..., v_r], f(v)]` pairs and the bound `m`. Relative
//! file paths resolve against the directory of the referring document.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::automata::{DigitOrder, Dfao};
use crate::error::{Error, Result};
use crate::series::{ArraySpec, FTable, Generator};
use crate::words::{Alphabet, Symbol, UniformMorphism};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RuleDoc {
    Letters(Vec<String>),
    Chars(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    alphabet: Vec<String>,
    rules: BTreeMap<String, RuleDoc>,
    coding: BTreeMap<String, i64>,
    seed: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaoDoc {
    #[serde(default)]
    base: Option<u32>,
    #[serde(default)]
    bases: Option<Vec<u32>>,
    order: DigitOrder,
    states: Vec<String>,
    start: String,
    transitions: BTreeMap<String, Vec<String>>,
    outputs: BTreeMap<String, i64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GeneratorDoc {
    Morphism(MorphismDoc),
    Dfao(DfaoDoc),
    File { path: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrayDoc {
    bases: Vec<u64>,
    generators: Vec<GeneratorDoc>,
    #[serde(default)]
    value_sets: Option<Vec<Vec<i64>>>,
    f_table: Vec<(Vec<i64>, i64)>,
    m: i64,
}

fn from_json<'de, T: Deserialize<'de>>(text: &'de str, prefix: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = match (prefix.is_empty(), path.as_str()) {
            (true, _) => path,
            (false, ".") => prefix.to_string(),
            (false, p) => format!("{prefix}.{p}"),
        };
        Error::schema(path, e.into_inner().to_string())
    })
}

/// Re-labels construction errors as schema errors at `path`.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Schema { .. } | Error::DependentBases { .. } | Error::Io(_) => e,
        other => Error::schema(path, other.to_string()),
    })
}

fn build_morphism(doc: MorphismDoc, path: &str) -> Result<UniformMorphism> {
    let alphabet = at(&format!("{path}.alphabet"), Alphabet::new(doc.alphabet.clone()))?;
    let letter = |name: &str, field: &str| {
        alphabet
            .symbol(name)
            .ok_or_else(|| Error::schema(format!("{path}.{field}"), format!("unknown letter `{name}`")))
    };
    let mut rules = Vec::with_capacity(alphabet.len());
    let mut coding = Vec::with_capacity(alphabet.len());
    for name in alphabet.names() {
        let rule = doc
            .rules
            .get(name)
            .ok_or_else(|| Error::schema(format!("{path}.rules"), format!("no rule for `{name}`")))?;
        let field = format!("rules.{name}");
        let image = match rule {
            RuleDoc::Letters(v) => v.iter().map(|l| letter(l, &field)).collect::<Result<Vec<_>>>()?,
            RuleDoc::Chars(s) => s
                .chars()
                .map(|c| letter(&c.to_string(), &field))
                .collect::<Result<Vec<_>>>()?,
        };
        rules.push(image);
        coding.push(*doc.coding.get(name).ok_or_else(|| {
            Error::schema(format!("{path}.coding"), format!("no output for `{name}`"))
        })?);
    }
    for key in doc.rules.keys().chain(doc.coding.keys()) {
        letter(key, "rules")?;
    }
    let seed: Symbol = letter(&doc.seed, "seed")?;
    at(path, UniformMorphism::new(alphabet, rules, coding, seed))
}

fn build_dfao(doc: DfaoDoc, path: &str) -> Result<Dfao> {
    let bases = match (doc.base, doc.bases) {
        (Some(k), None) => vec![k],
        (None, Some(b)) => b,
        _ => {
            return Err(Error::schema(
                path,
                "exactly one of `base` and `bases` is required",
            ))
        }
    };
    let index: BTreeMap<&str, usize> = doc
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    if index.len() != doc.states.len() {
        return Err(Error::schema(format!("{path}.states"), "duplicate state name"));
    }
    let state = |name: &str, field: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::schema(format!("{path}.{field}"), format!("unknown state `{name}`")))
    };
    let start = state(&doc.start, "start")?;
    let mut transitions = Vec::with_capacity(doc.states.len());
    let mut outputs = Vec::with_capacity(doc.states.len());
    for name in &doc.states {
        let field = format!("transitions.{name}");
        let row = doc
            .transitions
            .get(name)
            .ok_or_else(|| Error::schema(format!("{path}.transitions"), format!("no row for `{name}`")))?;
        transitions.push(
            row.iter()
                .map(|t| state(t, &field))
                .collect::<Result<Vec<_>>>()?,
        );
        outputs.push(*doc.outputs.get(name).ok_or_else(|| {
            Error::schema(format!("{path}.outputs"), format!("no output for `{name}`"))
        })?);
    }
    for key in doc.transitions.keys() {
        state(key, "transitions")?;
    }
    for key in doc.outputs.keys() {
        state(key, "outputs")?;
    }
    at(path, Dfao::new(bases, doc.order, start, transitions, outputs))
}

fn build_generator(doc: GeneratorDoc, base_dir: &Path, path: &str, depth: usize) -> Result<Generator> {
    match doc {
        GeneratorDoc::Morphism(m) => Ok(Generator::from_morphism(build_morphism(m, path)?)),
        GeneratorDoc::Dfao(d) => at(path, Generator::from_dfao(build_dfao(d, path)?)),
        GeneratorDoc::File { path: file } => {
            if depth > 8 {
                return Err(Error::schema(path, "generator files nest too deeply"));
            }
            let full = base_dir.join(&file);
            let text = std::fs::read_to_string(&full).map_err(|e| {
                Error::schema(format!("{path}.path"), format!("{}: {e}", full.display()))
            })?;
            let inner_path = format!("{path}<{}>", file.display());
            let doc: GeneratorDoc = from_json(&text, &inner_path)?;
            let dir = full.parent().unwrap_or(base_dir).to_path_buf();
            build_generator(doc, &dir, &inner_path, depth + 1)
        }
    }
}

/// Parses a generator document; `base_dir` resolves `file` references.
pub fn parse_generator(text: &str, base_dir: &Path) -> Result<Generator> {
    let doc: GeneratorDoc = from_json(text, "")?;
    build_generator(doc, base_dir, "$", 0)
}

pub fn load_generator(path: &Path) -> Result<Generator> {
    let text = std::fs::read_to_string(path)?;
    parse_generator(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses and validates an array spec, including the independence of the
/// bases.
pub fn parse_spec(text: &str, base_dir: &Path) -> Result<ArraySpec> {
    let doc: ArrayDoc = from_json(text, "")?;
    let generators = doc
        .generators
        .into_iter()
        .enumerate()
        .map(|(i, g)| build_generator(g, base_dir, &format!("generators[{i}]"), 0))
        .collect::<Result<Vec<_>>>()?;
    let value_sets = match doc.value_sets {
        Some(v) => v,
        None => generators
            .iter()
            .map(|g| g.morphism().coding().to_vec())
            .collect(),
    };
    if value_sets.len() != generators.len() {
        return Err(Error::schema(
            "value_sets",
            format!("{} value sets for {} generators", value_sets.len(), generators.len()),
        ));
    }
    let f = FTable::new(value_sets, &doc.f_table)?;
    ArraySpec::new(doc.bases, generators, f, doc.m)
}

pub fn load_spec(path: &Path) -> Result<ArraySpec> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Exact rational from `"3/2"`, `"0.001"`, `"1e-40"` or `"2.5E3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InputDomain(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("{int}{frac}0")).map_err(|_| bad())? / 10;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut x = if scale >= 0 {
        BigRational::from_integer(digits * pow)
    } else {
        BigRational::new(digits, pow)
    };
    if neg {
        x = -x;
    }
    Ok(x)
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn show_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
