//! JSON schema for states, observables and circuits.
//!
//! Complex numbers are serialized as `[re, im]` pairs; matrices as row-major
//! nested arrays of such pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::Graph;
use crate::numerics::{c, CMat};

use super::{CircuitArchitecture, DensityMatrix, Gate, GateOp, Layer, Observable, RegisterShape};

pub type ComplexPair = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexPair>>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::validation("matrix JSON must be rectangular and non-empty"));
    }
    let mut m = CMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub shape: RegisterShape,
    pub matrix: MatrixJson,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(s: &DensityMatrix) -> Self {
        DensityMatrixJson {
            shape: s.shape,
            matrix: matrix_to_json(&s.mat),
        }
    }
}

impl DensityMatrixJson {
    pub fn build(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.shape, matrix_from_json(&self.matrix)?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct ObservableJson {
    pub shape: RegisterShape,
    pub matrix: MatrixJson,
}

impl From<&Observable> for ObservableJson {
    fn from(o: &Observable) -> Self {
        ObservableJson {
            shape: o.shape,
            matrix: matrix_to_json(&o.mat),
        }
    }
}

impl ObservableJson {
    pub fn build(&self) -> Result<Observable> {
        Observable::new(self.shape, matrix_from_json(&self.matrix)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerJson {
    Gates {
        gates: Vec<GateJson>,
    },
    GraphUnitary {
        graph: Graph,
        unitary: MatrixJson,
        diagonal: bool,
    },
}

#[derive(Serialize, Deserialize)]
pub struct GateJson {
    pub support: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixJson>>,
}

#[derive(Serialize, Deserialize)]
pub struct CircuitJson {
    pub shape: RegisterShape,
    pub layers: Vec<LayerJson>,
}

impl From<&CircuitArchitecture> for CircuitJson {
    fn from(circ: &CircuitArchitecture) -> Self {
        let layers = circ
            .layers
            .iter()
            .map(|layer| match layer {
                Layer::Gates(gates) => LayerJson::Gates {
                    gates: gates
                        .iter()
                        .map(|g| match &g.op {
                            GateOp::Unitary(u) => GateJson {
                                support: g.support.clone(),
                                unitary: Some(matrix_to_json(u)),
                                kraus: None,
                            },
                            GateOp::Kraus(ks) => GateJson {
                                support: g.support.clone(),
                                unitary: None,
                                kraus: Some(ks.iter().map(matrix_to_json).collect()),
                            },
                        })
                        .collect(),
                },
                Layer::GraphUnitary {
                    graph,
                    unitary,
                    diagonal,
                } => LayerJson::GraphUnitary {
                    graph: graph.clone(),
                    unitary: matrix_to_json(unitary),
                    diagonal: *diagonal,
                },
            })
            .collect();
        CircuitJson {
            shape: circ.shape,
            layers,
        }
    }
}

impl CircuitJson {
    pub fn build(&self) -> Result<CircuitArchitecture> {
        let mut layers = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            layers.push(match layer {
                LayerJson::Gates { gates } => {
                    let mut built = Vec::with_capacity(gates.len());
                    for g in gates {
                        let op = match (&g.unitary, &g.kraus) {
                            (Some(u), None) => GateOp::Unitary(matrix_from_json(u)?),
                            (None, Some(ks)) => GateOp::Kraus(
                                ks.iter().map(matrix_from_json).collect::<Result<_>>()?,
                            ),
                            _ => {
                                return Err(Error::validation(
                                    "gate needs exactly one of `unitary` or `kraus`",
                                ))
                            }
                        };
                        built.push(Gate {
                            support: g.support.clone(),
                            op,
                        });
                    }
                    Layer::Gates(built)
                }
                LayerJson::GraphUnitary {
                    graph,
                    unitary,
                    diagonal,
                } => Layer::GraphUnitary {
                    graph: graph.clone(),
                    unitary: matrix_from_json(unitary)?,
                    diagonal: *diagonal,
                },
            });
        }
        CircuitArchitecture::new(self.shape, layers)
    }
}
