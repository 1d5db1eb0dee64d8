//! Built-in fixtures and file loading for bundle models and other tabular
//! inputs. File lookup honours the CHARCLASS_FIXTURES directory variable.

use crate::error::{Error, Result};
use crate::poly::RingPresentation;
use crate::thom::{parse_model, BundleModel, ModelElement};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

pub const SPHERE_S3_FIXTURE: &str = include_str!("../fixtures/sphere-s3.model");
pub const CP1_FIXTURE: &str = include_str!("../fixtures/cp1-bundle.model");

/// Trivial bundle with fibre a closed oriented 3-manifold over a point:
/// H^*(point) coefficients on the basis {1, w} with w the fibre orientation
/// class.
pub fn trivial_m3_model() -> BundleModel {
    let base = RingPresentation::polynomial(Vec::new(), 0);
    let mut model = BundleModel {
        name: "trivial-m3".to_string(),
        base,
        fibre_dim: 3,
        basis: vec![("1".to_string(), 0), ("w".to_string(), 3)],
        products: HashMap::new(),
        vertical_p: Vec::new(),
        vertical_chi: None,
        tangent_p: Vec::new(),
        fundamental: Some(Vec::new()),
        top: 1,
    };
    model.products.insert((1, 1), ModelElement::zero(&model));
    model
}

/// Resolve a model by built-in name, explicit path, or name relative to the
/// CHARCLASS_FIXTURES directory.
pub fn load_model(spec: &str) -> Result<BundleModel> {
    match spec {
        "sphere-s3" => return parse_model(SPHERE_S3_FIXTURE),
        "cp1-bundle" => return parse_model(CP1_FIXTURE),
        "trivial-m3" => return Ok(trivial_m3_model()),
        _ => {}
    }
    let text = read_fixture(spec)?;
    parse_model(&text)
}

/// Read a fixture file: a path that exists wins; otherwise the name is tried
/// inside CHARCLASS_FIXTURES (with and without the given extension).
pub fn read_fixture(spec: &str) -> Result<String> {
    let direct = Path::new(spec);
    if direct.is_file() {
        return std::fs::read_to_string(direct).map_err(Error::Io);
    }
    if let Ok(dir) = std::env::var("CHARCLASS_FIXTURES") {
        let joined: PathBuf = Path::new(&dir).join(spec);
        if joined.is_file() {
            return std::fs::read_to_string(joined).map_err(Error::Io);
        }
    }
    Err(Error::FixtureNotFound(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_models_parse() {
        for name in ["sphere-s3", "cp1-bundle", "trivial-m3"] {
            let m = load_model(name).unwrap();
            assert_eq!(m.name, name);
        }
    }

    #[test]
    fn missing_fixture_reported() {
        assert!(matches!(
            load_model("no-such-model"),
            Err(Error::FixtureNotFound(_))
        ));
    }
}
