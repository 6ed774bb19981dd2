//! Named algebras: built-in constants and fixture files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spec_file::{load_spec, LoadedSpec};

fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::from_int(x)).collect()
}

/// `[x,y] = y`, `[y,z] = z`, `ω(x,y) = 1`.
pub fn l1() -> AlgebraSpec {
    let mut a = AlgebraSpec::zero(["x", "y", "z"]);
    a.set_bracket(0, 1, ints(&[0, 1, 0]));
    a.set_bracket(1, 2, ints(&[0, 0, 1]));
    a.set_omega(0, 1, Scalar::from_int(1));
    a
}

/// `[x,z] = y`, `[y,z] = z`, `ω(x,z) = 1`.
pub fn l2() -> AlgebraSpec {
    let mut a = AlgebraSpec::zero(["x", "y", "z"]);
    a.set_bracket(0, 2, ints(&[0, 1, 0]));
    a.set_bracket(1, 2, ints(&[0, 0, 1]));
    a.set_omega(0, 2, Scalar::from_int(1));
    a
}

/// `sl(2)` in the basis `h, e, f`.
pub fn sl2() -> AlgebraSpec {
    let mut a = AlgebraSpec::zero(["h", "e", "f"]);
    a.set_bracket(0, 1, ints(&[0, 2, 0]));
    a.set_bracket(0, 2, ints(&[0, 0, -2]));
    a.set_bracket(1, 2, ints(&[1, 0, 0]));
    a
}

/// Three-dimensional Heisenberg algebra, `[p,q] = c`.
pub fn heisenberg() -> AlgebraSpec {
    let mut a = AlgebraSpec::zero(["p", "q", "c"]);
    a.set_bracket(0, 1, ints(&[0, 0, 1]));
    a
}

/// Built-in algebras that need no fixture file.
pub const BUILTIN: [&str; 4] = ["L1", "L2", "sl2", "heisenberg"];

/// Names that resolve to fixture files, with the file each one expects.
pub const FIXTURES: [(&str, &str); 3] = [
    ("B", "B.json"),
    ("A_alpha", "A_alpha.json"),
    ("C_alpha", "C_alpha.json"),
];

pub fn builtin(name: &str) -> Option<AlgebraSpec> {
    match name {
        "L1" => Some(l1()),
        "L2" => Some(l2()),
        "sl2" => Some(sl2()),
        "heisenberg" => Some(heisenberg()),
        _ => None,
    }
}

/// Resolves algebra names against the built-ins and a fixture directory.
#[derive(Clone, Debug)]
pub struct Catalog {
    fixture_dir: PathBuf,
}

impl Default for Catalog {
    /// Fixture directory from `OMEGADER_FIXTURES`, else the repository's
    /// `fixtures/`, else `./fixtures`.
    fn default() -> Self {
        if let Some(dir) = std::env::var_os("OMEGADER_FIXTURES") {
            return Catalog::new(dir);
        }
        let repo = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        if repo.is_dir() {
            return Catalog::new(repo);
        }
        Catalog::new("fixtures")
    }
}

impl Catalog {
    pub fn new(fixture_dir: impl Into<PathBuf>) -> Self {
        Catalog {
            fixture_dir: fixture_dir.into(),
        }
    }

    pub fn fixture_dir(&self) -> &Path {
        &self.fixture_dir
    }

    /// `Some(result)` when `name` is a catalog name, `None` otherwise.
    pub fn lookup(
        &self,
        name: &str,
        params: &BTreeMap<String, Scalar>,
    ) -> Option<Result<LoadedSpec>> {
        if let Some(spec) = builtin(name) {
            if let Some(key) = params.keys().next() {
                return Some(Err(Error::Param(format!(
                    "{name} declares no parameter named {key:?}"
                ))));
            }
            return Some(Ok(LoadedSpec {
                spec,
                params: BTreeMap::new(),
            }));
        }
        let file = FIXTURES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f.to_string());
        match file {
            Some(file) => {
                let path = self.fixture_dir.join(file);
                if !path.is_file() {
                    return Some(Err(Error::MissingFixture {
                        name: name.to_string(),
                        path,
                    }));
                }
                Some(load_spec(&path, params))
            }
            None => {
                let path = self.fixture_dir.join(format!("{name}.json"));
                path.is_file().then(|| load_spec(&path, params))
            }
        }
    }

    pub fn resolve(&self, name: &str, params: &BTreeMap<String, Scalar>) -> Result<LoadedSpec> {
        self.lookup(name, params)
            .unwrap_or_else(|| Err(Error::UnknownAlgebra(name.to_string())))
    }

    /// Fixture names whose files exist.
    pub fn present_fixtures(&self) -> Vec<&'static str> {
        FIXTURES
            .iter()
            .filter(|(_, f)| self.fixture_dir.join(f).is_file())
            .map(|(n, _)| *n)
            .collect()
    }
}

/// Resolves `name` with the default catalog.
pub fn catalog(name: &str, params: &BTreeMap<String, Scalar>) -> Result<AlgebraSpec> {
    Catalog::default().resolve(name, params).map(|l| l.spec)
}
