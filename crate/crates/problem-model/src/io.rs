use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::types::{MatrixCompletionInstance, Payload, RankProblem, Regularizer, SensorInstance};
use crate::ModelError;

/// On-disk schema. Observations are (row, col, value) triples serialized as
/// JSON triples; `sensor` carries the distance-payload extras. Floats go
/// through shortest-round-trip formatting, so write∘read is bit-exact.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    m: usize,
    k: usize,
    lambda: f64,
    gamma: f64,
    observations: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ground_truth: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sensor: Option<SensorMeta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorMeta {
    dim_k: usize,
    radio_range: f64,
    lambda_slack: f64,
    #[serde(default = "default_trace_weight")]
    trace_weight: f64,
}

fn default_trace_weight() -> f64 {
    1.0
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn rows_to_matrix(rows: &[Vec<f64>], file: &str) -> Result<DMatrix<f64>, ModelError> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(ModelError::Parse {
            file: file.into(),
            detail: "ground_truth: ragged rows".into(),
        });
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ModelError::Parse {
            file: file.into(),
            detail: "ground_truth: non-finite entry".into(),
        });
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

/// Serializes a problem to the instance document text.
pub fn write_instance_string(problem: &RankProblem) -> Result<String, ModelError> {
    let gamma = problem.gamma().ok_or_else(|| {
        ModelError::InvalidParameter("instance files carry the Frobenius weight only".into())
    })?;
    let doc = match &problem.payload {
        Payload::Completion(c) => Doc {
            kind: "completion".into(),
            n: c.n,
            m: c.m,
            k: problem.k,
            lambda: problem.lambda,
            gamma,
            observations: c.observed().collect(),
            ground_truth: c.ground_truth.as_ref().map(matrix_to_rows),
            sensor: None,
        },
        Payload::Sensor(s) => Doc {
            kind: "sensor".into(),
            n: s.n,
            m: s.n,
            k: problem.k,
            lambda: problem.lambda,
            gamma,
            observations: s.dist_sq.clone(),
            ground_truth: s.ground_truth.as_ref().map(matrix_to_rows),
            sensor: Some(SensorMeta {
                dim_k: s.dim_k,
                radio_range: s.radio_range,
                lambda_slack: s.lambda_slack,
                trace_weight: s.trace_weight,
            }),
        },
    };
    serde_json::to_string_pretty(&doc).map_err(|e| ModelError::Parse {
        file: "<memory>".into(),
        detail: e.to_string(),
    })
}

pub fn write_instance(problem: &RankProblem, path: &Path) -> Result<(), ModelError> {
    let text = write_instance_string(problem)?;
    std::fs::write(path, text)
        .map_err(|source| ModelError::Io { path: path.display().to_string(), source })
}

/// Parses an instance document; `file` labels errors.
pub fn read_instance_str(text: &str, file: &str) -> Result<RankProblem, ModelError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| ModelError::Parse {
        file: file.into(),
        detail: format!("{e} (line {}, column {})", e.line(), e.column()),
    })?;
    let semantic = |detail: String| ModelError::Parse { file: file.into(), detail };
    for &(_, _, v) in &doc.observations {
        if !v.is_finite() {
            return Err(semantic("observations: non-finite value".into()));
        }
    }
    if !(doc.gamma.is_finite() && doc.gamma > 0.0) {
        return Err(semantic(format!("gamma: must be finite and positive, got {}", doc.gamma)));
    }
    if !(doc.lambda.is_finite() && doc.lambda >= 0.0) {
        return Err(semantic(format!("lambda: must be >= 0, got {}", doc.lambda)));
    }
    let ground_truth = match &doc.ground_truth {
        Some(rows) => Some(rows_to_matrix(rows, file)?),
        None => None,
    };
    let payload = match doc.kind.as_str() {
        "completion" => {
            if doc.sensor.is_some() {
                return Err(semantic("sensor section present on a completion instance".into()));
            }
            let (omega, values) =
                doc.observations.iter().map(|&(i, j, v)| ((i, j), v)).unzip();
            Payload::Completion(
                MatrixCompletionInstance::new(doc.n, doc.m, omega, values, ground_truth)
                    .map_err(|e| semantic(e.to_string()))?,
            )
        }
        "sensor" => {
            if doc.m != doc.n {
                return Err(semantic(format!(
                    "sensor instances are square, got n = {} and m = {}",
                    doc.n, doc.m
                )));
            }
            let meta = doc
                .sensor
                .as_ref()
                .ok_or_else(|| semantic("sensor: section missing".into()))?;
            Payload::Sensor(
                SensorInstance::new(
                    doc.n,
                    meta.dim_k,
                    meta.radio_range,
                    doc.observations.clone(),
                    meta.lambda_slack,
                    meta.trace_weight,
                    ground_truth,
                )
                .map_err(|e| semantic(e.to_string()))?,
            )
        }
        other => return Err(semantic(format!("type: unknown instance type '{other}'"))),
    };
    RankProblem::new(doc.k, doc.lambda, Regularizer::Frobenius { gamma: doc.gamma }, payload)
        .map_err(|e| semantic(e.to_string()))
}

pub fn read_instance(path: &Path) -> Result<RankProblem, ModelError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ModelError::Io { path: path.display().to_string(), source })?;
    read_instance_str(&text, &path.display().to_string())
}
