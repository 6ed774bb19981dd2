//! JSON algebra spec files.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "basis": ["x", "y", "z"],
//!   "brackets": [{"i": 0, "j": 1, "out": ["0", "1", "0"]}],
//!   "omega": [{"i": 0, "j": 1, "val": "1"}],
//!   "params": {"alpha": "2"}
//! }
//! ```
//!
//! Indices are 0-based with `i < j`; omitted pairs are zero, and each entry
//! also sets its mirror `(j, i)` to the negative. An entry with `i >= j` is
//! stored literally without a mirror, so files can express data that is not
//! skew and have `validate` report it. Entries are
//! scalar strings. When `params` is present, an entry may also be an affine
//! expression in the parameters such as `alpha`, `1+alpha` or `-1/2*alpha+3`.
//! An optional `"provenance"` string records where the constants came from.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<RawBracket>,
    #[serde(default)]
    omega: Vec<RawOmega>,
    #[serde(default)]
    params: Option<BTreeMap<String, String>>,
    #[serde(default)]
    #[allow(dead_code)]
    provenance: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBracket {
    i: usize,
    j: usize,
    out: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOmega {
    i: usize,
    j: usize,
    val: String,
}

/// A parsed spec file: the algebra and the parameter values it was built with.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub spec: AlgebraSpec,
    pub params: BTreeMap<String, Scalar>,
}

/// Parses spec JSON, substituting `overrides` for declared parameters.
pub fn parse_spec(text: &str, overrides: &BTreeMap<String, Scalar>) -> Result<LoadedSpec> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::SpecSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = raw.dim;
    if raw.basis.len() != n {
        return Err(Error::SpecContent(format!(
            "\"basis\" has {} names but \"dim\" is {n}",
            raw.basis.len()
        )));
    }

    let mut params = BTreeMap::new();
    for (name, value) in raw.params.iter().flatten() {
        if !is_ident(name) || name == "i" {
            return Err(Error::Param(format!("invalid parameter name {name:?}")));
        }
        let v = parse_scalar(value)
            .map_err(|e| Error::Param(format!("default for {name}: {e}")))?;
        params.insert(name.clone(), v);
    }
    for (name, value) in overrides {
        match params.get_mut(name) {
            Some(slot) => *slot = value.clone(),
            None => {
                return Err(Error::Param(format!(
                    "spec declares no parameter named {name:?}"
                )))
            }
        }
    }

    let mut spec = AlgebraSpec::zero(raw.basis.clone());
    let check_pair = |i: usize, j: usize, what: &str, idx: usize| -> Result<()> {
        if i >= n || j >= n {
            return Err(Error::SpecContent(format!(
                "{what}[{idx}]: indices must be below {n}, got i={i}, j={j}"
            )));
        }
        Ok(())
    };
    // canonical entries first so literal ones override their mirrors
    let mut brackets: Vec<(usize, &RawBracket)> = raw.brackets.iter().enumerate().collect();
    brackets.sort_by_key(|(_, b)| b.i >= b.j);
    let mut omegas: Vec<(usize, &RawOmega)> = raw.omega.iter().enumerate().collect();
    omegas.sort_by_key(|(_, w)| w.i >= w.j);
    let mut seen = std::collections::HashSet::new();
    for (idx, b) in brackets {
        check_pair(b.i, b.j, "brackets", idx)?;
        if !seen.insert(("b", b.i, b.j)) {
            return Err(Error::SpecContent(format!("brackets[{idx}]: duplicate pair")));
        }
        if b.out.len() != n {
            return Err(Error::SpecContent(format!(
                "brackets[{idx}]: \"out\" has {} entries, expected {n}",
                b.out.len()
            )));
        }
        let out = b
            .out
            .iter()
            .map(|s| eval_entry(s, &params))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::SpecContent(format!("brackets[{idx}]: {e}")))?;
        if b.i < b.j {
            spec.set_bracket(b.i, b.j, out);
        } else {
            for (k, v) in out.into_iter().enumerate() {
                spec.set_structure_constant(b.i, b.j, k, v);
            }
        }
    }
    for (idx, w) in omegas {
        check_pair(w.i, w.j, "omega", idx)?;
        if !seen.insert(("w", w.i, w.j)) {
            return Err(Error::SpecContent(format!("omega[{idx}]: duplicate pair")));
        }
        let val = eval_entry(&w.val, &params)
            .map_err(|e| Error::SpecContent(format!("omega[{idx}]: {e}")))?;
        if w.i < w.j {
            spec.set_omega(w.i, w.j, val);
        } else {
            spec.set_omega_entry(w.i, w.j, val);
        }
    }
    Ok(LoadedSpec { spec, params })
}

pub fn load_spec(path: &Path, overrides: &BTreeMap<String, Scalar>) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spec(&text, overrides)
}

/// Serializes with fixed key order; only pairs `i < j` with nonzero values
/// are written.
pub fn to_json_value(spec: &AlgebraSpec) -> Value {
    let n = spec.dim();
    let mut brackets = Vec::new();
    let mut omega = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let out = spec.bracket_basis(i, j);
            if out.iter().any(|c| !c.is_zero()) {
                brackets.push(json!({
                    "i": i,
                    "j": j,
                    "out": out.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            }
            let w = spec.omega(i, j);
            if !w.is_zero() {
                omega.push(json!({"i": i, "j": j, "val": w.to_string()}));
            }
        }
    }
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(n));
    obj.insert("basis".into(), json!(spec.basis_names()));
    obj.insert("brackets".into(), Value::Array(brackets));
    obj.insert("omega".into(), Value::Array(omega));
    Value::Object(obj)
}

pub fn to_json(spec: &AlgebraSpec) -> String {
    serde_json::to_string_pretty(&to_json_value(spec)).expect("json serialization")
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Scalar string, or (when parameters are declared) an affine expression.
fn eval_entry(s: &str, params: &BTreeMap<String, Scalar>) -> Result<Scalar> {
    match parse_scalar(s) {
        Ok(v) => Ok(v),
        Err(e) if params.is_empty() => Err(e.into()),
        Err(e) => eval_affine(s, params).map_err(|msg| {
            Error::SpecContent(format!("{e}; as parameter expression: {msg}"))
        }),
    }
}

/// `expr := sign? term (sign term)*`, `term := real ("*" atom)? | atom`,
/// `atom := "i" | parameter`.
fn eval_affine(s: &str, params: &BTreeMap<String, Scalar>) -> std::result::Result<Scalar, String> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut total = Scalar::zero();
    let mut first = true;
    while pos < bytes.len() || first {
        let negative = match bytes.get(pos) {
            Some(b'+') => {
                pos += 1;
                false
            }
            Some(b'-') => {
                pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(format!("expected '+' or '-' at position {pos}")),
        };
        first = false;
        let coeff = if bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            let start = pos;
            while bytes.get(pos).is_some_and(|b| b.is_ascii_digit() || *b == b'/') {
                pos += 1;
            }
            let r = parse_scalar(&s[start..pos]).map_err(|e| e.to_string())?;
            if bytes.get(pos) == Some(&b'*') {
                pos += 1;
                Some(r)
            } else {
                total += if negative { -r } else { r };
                continue;
            }
        } else {
            None
        };
        let start = pos;
        while bytes
            .get(pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            pos += 1;
        }
        let name = &s[start..pos];
        let atom = if name == "i" {
            Scalar::i()
        } else if let Some(v) = params.get(name) {
            v.clone()
        } else if name.is_empty() {
            return Err(format!("expected number or parameter at position {start}"));
        } else {
            return Err(format!("unknown parameter {name:?}"));
        };
        let term = &coeff.unwrap_or_else(Scalar::one) * &atom;
        total += if negative { -term } else { term };
    }
    Ok(total)
}

/// Parses `name=value` parameter assignments.
pub fn parse_param_assignment(s: &str) -> Result<(String, Scalar)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Param(format!("expected name=value, got {s:?}")))?;
    if !is_ident(name) {
        return Err(Error::Param(format!("invalid parameter name {name:?}")));
    }
    Ok((name.to_string(), parse_scalar(value)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const L1_JSON: &str = r#"{
  "dim": 3,
  "basis": ["x", "y", "z"],
  "brackets": [
    {"i": 0, "j": 1, "out": ["0", "1", "0"]},
    {"i": 1, "j": 2, "out": ["0", "0", "1"]}
  ],
  "omega": [{"i": 0, "j": 1, "val": "1"}]
}"#;

    fn none() -> BTreeMap<String, Scalar> {
        BTreeMap::new()
    }

    #[test]
    fn parses_l1() {
        let loaded = parse_spec(L1_JSON, &none()).unwrap();
        assert_eq!(loaded.spec, catalog::l1());
    }

    #[test]
    fn roundtrip_through_json() {
        for spec in [catalog::l1(), catalog::l2(), catalog::sl2()] {
            let text = to_json(&spec);
            assert_eq!(parse_spec(&text, &none()).unwrap().spec, spec);
        }
    }

    #[test]
    fn stable_key_order() {
        let text = to_json(&catalog::l2());
        let keys: Vec<usize> = ["\"dim\"", "\"basis\"", "\"brackets\"", "\"omega\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_spec("{\n  \"dim\": 3,\n  \"basis\": [\"x\" \"y\"]\n}", &none()).unwrap_err();
        match err {
            Error::SpecSyntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn content_errors() {
        let bad_pair = r#"{"dim": 2, "basis": ["a","b"], "brackets": [{"i": 0, "j": 2, "out": ["0","0"]}]}"#;
        assert!(matches!(parse_spec(bad_pair, &none()), Err(Error::SpecContent(_))));
        let bad_len = r#"{"dim": 2, "basis": ["a","b"], "brackets": [{"i": 0, "j": 1, "out": ["0"]}]}"#;
        assert!(matches!(parse_spec(bad_len, &none()), Err(Error::SpecContent(_))));
        let bad_scalar = r#"{"dim": 2, "basis": ["a","b"], "omega": [{"i": 0, "j": 1, "val": "1/0"}]}"#;
        assert!(parse_spec(bad_scalar, &none()).is_err());
        let unknown_key = r#"{"dim": 1, "basis": ["a"], "extra": 1}"#;
        assert!(matches!(parse_spec(unknown_key, &none()), Err(Error::SpecSyntax { .. })));
    }

    #[test]
    fn literal_entries_override_mirrors() {
        let text = r#"{"dim": 2, "basis": ["a","b"], "omega": [{"i": 1, "j": 0, "val": "1"}, {"i": 0, "j": 1, "val": "1"}]}"#;
        let spec = parse_spec(text, &none()).unwrap().spec;
        assert_eq!(spec.omega(0, 1), &Scalar::one());
        assert_eq!(spec.omega(1, 0), &Scalar::one());
        assert!(!spec.validate().is_valid());
    }

    #[test]
    fn parameters_and_overrides() {
        let text = r#"{
          "dim": 3, "basis": ["x","y","z"],
          "brackets": [{"i": 0, "j": 2, "out": ["0","0","alpha"]}],
          "omega": [{"i": 1, "j": 2, "val": "1+alpha"}],
          "params": {"alpha": "2"}
        }"#;
        let loaded = parse_spec(text, &none()).unwrap();
        assert_eq!(loaded.spec.c(0, 2, 2), &Scalar::from_int(2));
        assert_eq!(loaded.spec.omega(1, 2), &Scalar::from_int(3));

        let mut ov = BTreeMap::new();
        ov.insert("alpha".to_string(), Scalar::ratio(1, 2));
        let loaded = parse_spec(text, &ov).unwrap();
        assert_eq!(loaded.spec.omega(1, 2), &Scalar::ratio(3, 2));
        assert_eq!(loaded.params["alpha"], Scalar::ratio(1, 2));

        let mut bad = BTreeMap::new();
        bad.insert("beta".to_string(), Scalar::one());
        assert!(matches!(parse_spec(text, &bad), Err(Error::Param(_))));
    }

    #[test]
    fn affine_expressions() {
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), Scalar::from_int(3));
        p.insert("b".to_string(), Scalar::ratio(1, 2));
        let e = |s: &str| eval_affine(s, &p).unwrap();
        assert_eq!(e("a"), Scalar::from_int(3));
        assert_eq!(e("-a+1"), Scalar::from_int(-2));
        assert_eq!(e("2*a-4*b"), Scalar::from_int(4));
        assert_eq!(e("1/3*a+i"), Scalar::one() + Scalar::i());
        assert!(eval_affine("a+c", &p).is_err());
        assert!(eval_affine("a b", &p).is_err());
        assert!(eval_affine("a+", &p).is_err());
    }

    #[test]
    fn param_assignment() {
        assert_eq!(
            parse_param_assignment("alpha=-1/2").unwrap(),
            ("alpha".to_string(), Scalar::ratio(-1, 2))
        );
        assert!(parse_param_assignment("alpha").is_err());
        assert!(parse_param_assignment("1x=2").is_err());
    }
}
