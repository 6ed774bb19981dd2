//! Command front end shared by the binary and the tests.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 parse or
//! usage error, 3 missing fixture or unknown input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraSpec, ValidationReport};
use crate::catalog::{Catalog, BUILTIN};
use crate::checks::structural_suite;
use crate::embedding::{build_doubled, embedding_suite};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::spaces::{generic_matrix, BlockRole, DerSpace, SpaceKind};
use crate::spec_file::{load_spec, parse_param_assignment, to_json_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Space,
    Dims,
    Table,
    Embed,
    Verify,
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "validate" => Command::Validate,
            "space" => Command::Space,
            "dims" => Command::Dims,
            "table" => Command::Table,
            "embed" => Command::Embed,
            "verify" => Command::Verify,
            other => return Err(Error::Param(format!("unknown command {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Catalog name or spec file path. For `table`, which table (`1`, `2`
    /// or `all`); for `verify`, `all` runs every available algebra.
    pub input: String,
    pub kind: Option<SpaceKind>,
    pub format: Format,
    pub params: BTreeMap<String, Scalar>,
    pub catalog: Catalog,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<String>) -> Self {
        RunConfig {
            command,
            input: input.into(),
            kind: None,
            format: Format::Text,
            params: BTreeMap::new(),
            catalog: Catalog::default(),
        }
    }

    pub fn kind(mut self, kind: SpaceKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn json(mut self) -> Self {
        self.format = Format::Json;
        self
    }

    pub fn param(mut self, name: &str, value: Scalar) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn fixtures(mut self, dir: impl Into<PathBuf>) -> Self {
        self.catalog = Catalog::new(dir);
        self
    }

    /// Builds a config from raw command-line pieces. `space` accepts
    /// either `space <kind> <input>` or `space <input> --kind <kind>`.
    pub fn from_parts(
        command: &str,
        positional: &[String],
        kind: Option<&str>,
        json: bool,
        params: &[String],
        fixtures: Option<&Path>,
    ) -> Result<Self> {
        let command: Command = command.parse()?;
        let mut kind = kind.map(SpaceKind::from_str).transpose()?;
        let input = match (command, positional) {
            (Command::Space, [k, input]) => {
                if kind.is_some() {
                    return Err(Error::Param("kind given twice".into()));
                }
                kind = Some(k.parse()?);
                input.clone()
            }
            (Command::Table, []) => "all".to_string(),
            (_, [input]) => input.clone(),
            _ => return Err(Error::Param(format!("expected one input, got {}", positional.len()))),
        };
        if command == Command::Space && kind.is_none() {
            return Err(Error::Param("space needs a kind (der, gder_c, ...)".into()));
        }
        if command != Command::Space && kind.is_some() {
            return Err(Error::Param("--kind only applies to space".into()));
        }
        let mut cfg = RunConfig::new(command, input);
        cfg.kind = kind;
        if json {
            cfg.format = Format::Json;
        }
        for p in params {
            let (name, value) = parse_param_assignment(p)?;
            cfg.params.insert(name, value);
        }
        if let Some(dir) = fixtures {
            cfg.catalog = Catalog::new(dir);
        }
        Ok(cfg)
    }
}

/// Exit status and rendered streams of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) => 1,
        Error::MissingFixture { .. } | Error::UnknownAlgebra(_) | Error::Io { .. } => 3,
        _ => 2,
    }
}

pub fn run(cfg: &RunConfig) -> RunOutput {
    match dispatch(cfg) {
        Ok((code, stdout)) => RunOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => {
            let stdout = match (&e, cfg.format) {
                (Error::Invalid(rep), Format::Json) => render_json(&validation_json(&cfg.input, rep)),
                (Error::Invalid(rep), Format::Text) => rep.to_string(),
                _ => String::new(),
            };
            RunOutput {
                code: exit_code(&e),
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

/// A loaded input: display label and spec.
struct Input {
    label: String,
    spec: AlgebraSpec,
}

fn load_input(cfg: &RunConfig, name: &str) -> Result<Input> {
    if let Some(loaded) = cfg.catalog.lookup(name, &cfg.params) {
        let loaded = loaded?;
        return Ok(Input {
            label: label(name, &loaded.params),
            spec: loaded.spec,
        });
    }
    let path = Path::new(name);
    if path.is_file() {
        let loaded = load_spec(path, &cfg.params)?;
        return Ok(Input {
            label: label(name, &loaded.params),
            spec: loaded.spec,
        });
    }
    Err(Error::UnknownAlgebra(name.to_string()))
}

fn label(name: &str, params: &BTreeMap<String, Scalar>) -> String {
    if params.is_empty() {
        name.to_string()
    } else {
        let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        format!("{name} ({})", ps.join(", "))
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn dispatch(cfg: &RunConfig) -> Result<(i32, String)> {
    match cfg.command {
        Command::Validate => validate(cfg),
        Command::Space => space(cfg),
        Command::Dims => dims(cfg),
        Command::Table => table(cfg),
        Command::Embed => embed(cfg),
        Command::Verify => verify(cfg),
    }
}

fn validation_json(label: &str, rep: &ValidationReport) -> Value {
    let b = &rep.basis;
    json!({
        "algebra": label,
        "valid": rep.is_valid(),
        "antisymmetry": rep.antisymmetry.iter().map(|&(i, j, k)| json!([b[i], b[j], b[k]])).collect::<Vec<_>>(),
        "skew": rep.skew.iter().map(|&(i, j)| json!([b[i], b[j]])).collect::<Vec<_>>(),
        "jacobi": rep.jacobi.iter().map(|v| json!({
            "triple": v.triple.iter().map(|&t| b[t].clone()).collect::<Vec<_>>(),
            "lhs": v.lhs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "rhs": v.rhs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn validate(cfg: &RunConfig) -> Result<(i32, String)> {
    let input = load_input(cfg, &cfg.input)?;
    let rep = input.spec.validate();
    let code = if rep.is_valid() { 0 } else { 1 };
    let out = match cfg.format {
        Format::Json => render_json(&validation_json(&input.label, &rep)),
        Format::Text => format!("{}: {rep}", input.label),
    };
    Ok((code, out))
}

fn algebra(cfg: &RunConfig, name: &str) -> Result<(String, Algebra)> {
    let input = load_input(cfg, name)?;
    Ok((input.label, Algebra::new(input.spec)?))
}

fn render_matrix(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "{indent}{}", cells.join("  ").trim_end());
    }
    out
}

fn scalar_rows(m: &crate::linalg::Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(ToString::to_string).collect())
        .collect()
}

fn space(cfg: &RunConfig) -> Result<(i32, String)> {
    let kind = cfg.kind.expect("checked in config");
    let (label, alg) = algebra(cfg, &cfg.input)?;
    let s = DerSpace::compute(&alg, kind);
    let out = match cfg.format {
        Format::Json => {
            let mut v = s.to_json();
            v.as_object_mut()
                .expect("object")
                .insert("algebra".into(), Value::String(label));
            render_json(&v)
        }
        Format::Text => {
            let mut o = String::new();
            let _ = writeln!(o, "{kind} of {label}");
            let _ = writeln!(o, "dim {}", s.dim());
            let _ = writeln!(o, "free {}", s.generic.free_names().join(", "));
            for c in s.generic.constraints() {
                let _ = writeln!(o, "{c}");
            }
            let _ = writeln!(o, "generic");
            o.push_str(&render_matrix(&s.generic_matrix(), "  "));
            o
        }
    };
    Ok((0, out))
}

fn dims(cfg: &RunConfig) -> Result<(i32, String)> {
    let (label, alg) = algebra(cfg, &cfg.input)?;
    let dims: Vec<(SpaceKind, usize)> = SpaceKind::ALL
        .iter()
        .map(|&k| (k, DerSpace::compute(&alg, k).dim()))
        .collect();
    let out = match cfg.format {
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                dims.iter().map(|(k, d)| (k.name().to_string(), json!(d))).collect();
            render_json(&json!({"algebra": label, "dims": map}))
        }
        Format::Text => {
            let mut o = format!("{label}\n");
            for (k, d) in dims {
                let _ = writeln!(o, "  {:<8} {d}", k.name());
            }
            o
        }
    };
    Ok((0, out))
}

/// Algebras rendered by `table`: the two built-in non-Lie algebras, then
/// whichever fixtures are present.
fn table_inputs(cfg: &RunConfig) -> Vec<String> {
    let mut names = vec!["L1".to_string(), "L2".to_string()];
    names.extend(cfg.catalog.present_fixtures().iter().map(|s| s.to_string()));
    names
}

/// Generic `f` of `gder` and `gder_c`.
pub fn table1_rows(alg: &Algebra) -> (DerSpace, DerSpace) {
    (
        DerSpace::compute(alg, SpaceKind::Gder),
        DerSpace::compute(alg, SpaceKind::GderC),
    )
}

/// Generic `f` and `f'` of `qder`, from the full pair space.
pub fn table2_rows(alg: &Algebra) -> (DerSpace, Vec<Vec<String>>, Vec<Vec<String>>) {
    let q = DerSpace::compute(alg, SpaceKind::Qder);
    let desc = q.pair_generic();
    let f = generic_matrix(&desc, BlockRole::F, &q.layout);
    let fp = generic_matrix(&desc, BlockRole::FPrime, &q.layout);
    (q, f, fp)
}

fn table(cfg: &RunConfig) -> Result<(i32, String)> {
    let (one, two) = match cfg.input.as_str() {
        "1" => (true, false),
        "2" => (false, true),
        "all" => (true, true),
        other => return Err(Error::Param(format!("table expects 1, 2 or all, got {other:?}"))),
    };
    // fixtures take their declared defaults unless overridden; the built-ins
    // declare no parameters, so overrides apply to fixtures only
    let mut algebras = Vec::new();
    for name in table_inputs(cfg) {
        let mut c = cfg.clone();
        if BUILTIN.contains(&name.as_str()) {
            c.params.clear();
        }
        algebras.push(algebra(&c, &name)?);
    }
    let mut text = String::new();
    let mut rows1 = Vec::new();
    let mut rows2 = Vec::new();
    if one {
        let _ = writeln!(text, "gder(L) and gder_c(L) in dimension 3");
        for (label, alg) in &algebras {
            let (g, gc) = table1_rows(alg);
            let _ = writeln!(text, "\n{label}");
            let _ = writeln!(text, "  gder (dim {})", g.dim());
            text.push_str(&render_matrix(&g.generic_matrix(), "    "));
            let _ = writeln!(text, "  gder_c (dim {})", gc.dim());
            text.push_str(&render_matrix(&gc.generic_matrix(), "    "));
            rows1.push(json!({
                "algebra": label,
                "gder": {"dim": g.dim(), "generic": g.generic_matrix()},
                "gder_c": {"dim": gc.dim(), "generic": gc.generic_matrix()},
            }));
        }
    }
    if two {
        if one {
            text.push('\n');
        }
        let _ = writeln!(text, "qder(L) in dimension 3");
        for (label, alg) in &algebras {
            let (q, f, fp) = table2_rows(alg);
            let _ = writeln!(text, "\n{label}");
            let _ = writeln!(text, "  f (dim {})", q.dim());
            text.push_str(&render_matrix(&f, "    "));
            let _ = writeln!(text, "  f'");
            text.push_str(&render_matrix(&fp, "    "));
            rows2.push(json!({"algebra": label, "dim": q.dim(), "f": f, "f_prime": fp}));
        }
    }
    let out = match cfg.format {
        Format::Text => text,
        Format::Json => {
            let mut v = serde_json::Map::new();
            if one {
                v.insert("table1".into(), Value::Array(rows1));
            }
            if two {
                v.insert("table2".into(), Value::Array(rows2));
            }
            render_json(&Value::Object(v))
        }
    };
    Ok((0, out))
}

fn embed(cfg: &RunConfig) -> Result<(i32, String)> {
    let (label, alg) = algebra(cfg, &cfg.input)?;
    let d = build_doubled(&alg);
    let qc = DerSpace::compute(&alg, SpaceKind::QderC);
    let images = qc
        .f_basis()
        .iter()
        .map(|f| d.delta_u_of(f))
        .collect::<Result<Vec<_>>>()?;
    let validation = d.validate();
    let out = match cfg.format {
        Format::Json => render_json(&json!({
            "algebra": label,
            "doubled": to_json_value(d.doubled().spec()),
            "complement": d.complement().basis().iter()
                .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "doubled_valid": validation.is_valid(),
            "images": images,
        })),
        Format::Text => {
            let mut o = String::new();
            let sp = d.doubled().spec();
            let names = sp.basis_names();
            let _ = writeln!(o, "doubled algebra of {label}, dim {}", sp.dim());
            for i in 0..sp.dim() {
                for j in i + 1..sp.dim() {
                    let b = sp.bracket_basis(i, j);
                    if b.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                        let _ = writeln!(o, "  [{}, {}] = {}", names[i], names[j], render_vector(b, names));
                    }
                }
            }
            for i in 0..sp.dim() {
                for j in i + 1..sp.dim() {
                    let w = sp.omega(i, j);
                    if !num_traits::Zero::is_zero(w) {
                        let _ = writeln!(o, "  ω({}, {}) = {w}", names[i], names[j]);
                    }
                }
            }
            let _ = writeln!(
                o,
                "  identity check: {}",
                if validation.is_valid() {
                    "passes".to_string()
                } else {
                    format!("fails on {} triple(s)", validation.jacobi.len())
                }
            );
            let base_names = alg.basis_names();
            let u: Vec<String> = d
                .complement()
                .basis()
                .iter()
                .map(|v| render_vector(v, base_names))
                .collect();
            let _ = writeln!(o, "complement U = span{{{}}}", u.join(", "));
            let _ = writeln!(o, "δ_U images of a qder_c basis ({})", images.len());
            for (k, m) in images.iter().enumerate() {
                let _ = writeln!(o, "  image {k}");
                o.push_str(&render_matrix(&scalar_rows(m), "    "));
            }
            o
        }
    };
    Ok((0, out))
}

fn render_vector(v: &[Scalar], names: &[String]) -> String {
    crate::linalg::LinExpr::from_terms(v.iter().cloned().enumerate()).render(names)
}

/// All reports for one algebra.
pub fn verify_algebra(alg: &Algebra) -> Vec<Report> {
    let mut out = structural_suite(alg);
    out.extend(embedding_suite(alg));
    out
}

fn verify(cfg: &RunConfig) -> Result<(i32, String)> {
    let names: Vec<String> = if cfg.input == "all" {
        let mut v: Vec<String> = BUILTIN.iter().map(|s| s.to_string()).collect();
        v.extend(cfg.catalog.present_fixtures().iter().map(|s| s.to_string()));
        v
    } else {
        vec![cfg.input.clone()]
    };
    let mut algebras = Vec::new();
    for name in &names {
        let mut c = cfg.clone();
        if cfg.input == "all" && BUILTIN.contains(&name.as_str()) {
            c.params.clear();
        }
        algebras.push(algebra(&c, name)?);
    }
    // independent suites, one thread each
    let results: Vec<(String, Vec<Report>)> = std::thread::scope(|s| {
        let handles: Vec<_> = algebras
            .iter()
            .map(|(label, alg)| s.spawn(move || (label.clone(), verify_algebra(alg))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let passed = results.iter().all(|(_, rs)| rs.iter().all(|r| r.passed));
    let out = match cfg.format {
        Format::Json => render_json(&json!({
            "passed": passed,
            "algebras": results.iter().map(|(l, rs)| json!({"algebra": l, "reports": rs})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut o = String::new();
            for (label, reports) in &results {
                let _ = writeln!(o, "== {label}");
                for r in reports {
                    o.push_str(&r.to_string());
                }
            }
            let _ = writeln!(o, "{}", if passed { "all checks passed" } else { "some checks FAILED" });
            o
        }
    };
    Ok((if passed { 0 } else { 1 }, out))
}
