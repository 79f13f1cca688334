//! The versioned model file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_model, Model};
use crate::tree::{validate_tree, Edge};

pub const MODEL_FORMAT: &str = "tempex-model-v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelFile {
    #[serde(default)]
    format: Option<String>,
    n: usize,
    trees: Vec<TreeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreeEntry {
    mass: f64,
    edges: Vec<Edge>,
}

/// Parses a model file. A missing `format` field is accepted; a different one is not.
pub fn parse_model(text: &str) -> Result<Model> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if let Some(f) = &file.format {
        if f != MODEL_FORMAT {
            return Err(Error::Format(format!("unsupported format {f:?}, expected {MODEL_FORMAT:?}")));
        }
    }
    let trees = file.trees.iter().map(|t| validate_tree(file.n, &t.edges)).collect::<Result<Vec<_>>>()?;
    let masses: Vec<f64> = file.trees.iter().map(|t| t.mass).collect();
    build_model(file.n, trees, &masses)
}

/// Serializes a model with its fixed-point weights as masses, so parsing the
/// output reproduces the model exactly.
pub fn model_to_json(model: &Model) -> String {
    let file = ModelFile {
        format: Some(MODEL_FORMAT.to_string()),
        n: model.n(),
        trees: model
            .trees()
            .iter()
            .zip(model.weights())
            .map(|(t, &w)| TreeEntry { mass: w as f64, edges: t.edges().to_vec() })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("model file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ladder_model, star_catalog};

    #[test]
    fn round_trip() {
        for model in [star_catalog(7, 3).unwrap(), ladder_model(10).unwrap()] {
            assert_eq!(parse_model(&model_to_json(&model)).unwrap(), model);
        }
    }

    #[test]
    fn rejects_cycles_and_versions() {
        let cycle = r#"{"n": 3, "trees": [{"mass": 1, "edges": [[1,2],[2,3],[3,1]]}]}"#;
        assert!(matches!(parse_model(cycle), Err(Error::NotSpanning { .. })));
        let cycle4 = r#"{"n": 4, "trees": [{"mass": 1, "edges": [[1,2],[2,3],[3,1]]}]}"#;
        assert!(matches!(parse_model(cycle4), Err(Error::NotSpanning { .. })));
        let other = r#"{"format": "v0", "n": 2, "trees": [{"mass": 1, "edges": [[1,2]]}]}"#;
        assert!(matches!(parse_model(other), Err(Error::Format(_))));
        assert!(parse_model(r#"{"n": 2, "trees": [{"mass": 1, "edges": [[1,2]]}]}"#).is_ok());
    }
}
