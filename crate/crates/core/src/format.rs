//! Versioned on-disk documents for constraint systems and solver results.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lhv::{
    ConstraintId, ConstraintOrigin, ConstraintSet, FunctionTag, HiddenContext, LhvError,
    ParityConstraint, Provenance, SignVariable, VarId,
};
use crate::quantum::AngleSettings;
use crate::sign::Sign;
use crate::solver::{SolveResult, SolveStatus};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("{kind} ids must be 0..n in order; found {found} at position {position}")]
    Numbering {
        kind: &'static str,
        position: usize,
        found: usize,
    },
    #[error("provenance angles must have 4 entries, found {0}")]
    ProvenanceAngles(usize),
    #[error(transparent)]
    Lhv(#[from] LhvError),
    #[error("status {status:?} is inconsistent with the model/certificate fields")]
    Shape { status: SolveStatus },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub id: VarId,
    pub tag: FunctionTag,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub angles: Vec<f64>,
    pub zeta: f64,
    pub equation: ConstraintOrigin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub id: ConstraintId,
    pub vars: Vec<VarId>,
    pub required_sign: Sign,
    pub provenance: ProvenanceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSetDoc {
    pub format_version: u32,
    pub context: HiddenContext,
    pub variables: Vec<VariableDoc>,
    pub constraints: Vec<ConstraintDoc>,
}

impl From<&ConstraintSet> for ConstraintSetDoc {
    fn from(cs: &ConstraintSet) -> Self {
        ConstraintSetDoc {
            format_version: FORMAT_VERSION,
            context: cs.context().clone(),
            variables: cs
                .variables()
                .iter()
                .enumerate()
                .map(|(i, v)| VariableDoc {
                    id: VarId(i),
                    tag: v.tag(),
                    angles: v.angles(),
                })
                .collect(),
            constraints: cs
                .constraints()
                .iter()
                .enumerate()
                .map(|(i, c)| ConstraintDoc {
                    id: ConstraintId(i),
                    vars: c.vars.clone(),
                    required_sign: c.required_sign,
                    provenance: ProvenanceDoc {
                        angles: c.provenance.angles.to_array().to_vec(),
                        zeta: c.provenance.zeta,
                        equation: c.provenance.origin,
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<ConstraintSetDoc> for ConstraintSet {
    type Error = FormatError;

    fn try_from(doc: ConstraintSetDoc) -> Result<Self, Self::Error> {
        if doc.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(doc.format_version));
        }
        let mut variables = Vec::with_capacity(doc.variables.len());
        for (position, v) in doc.variables.iter().enumerate() {
            if v.id.0 != position {
                return Err(FormatError::Numbering {
                    kind: "variable",
                    position,
                    found: v.id.0,
                });
            }
            variables.push(SignVariable::new(v.tag, &v.angles)?);
        }
        let mut constraints = Vec::with_capacity(doc.constraints.len());
        for (position, c) in doc.constraints.into_iter().enumerate() {
            if c.id.0 != position {
                return Err(FormatError::Numbering {
                    kind: "constraint",
                    position,
                    found: c.id.0,
                });
            }
            let angles: [f64; 4] = c
                .provenance
                .angles
                .as_slice()
                .try_into()
                .map_err(|_| FormatError::ProvenanceAngles(c.provenance.angles.len()))?;
            constraints.push(ParityConstraint {
                vars: c.vars,
                required_sign: c.required_sign,
                provenance: Provenance {
                    angles: AngleSettings::from_array(angles),
                    zeta: c.provenance.zeta,
                    origin: c.provenance.equation,
                },
            });
        }
        Ok(ConstraintSet::from_parts(
            doc.context,
            variables,
            constraints,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub id: VarId,
    pub value: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResultDoc {
    pub format_version: u32,
    pub status: SolveStatus,
    pub model: Option<Vec<Assignment>>,
    pub certificate: Option<Vec<ConstraintId>>,
}

impl From<&SolveResult> for SolveResultDoc {
    fn from(r: &SolveResult) -> Self {
        SolveResultDoc {
            format_version: FORMAT_VERSION,
            status: r.status,
            model: r.model.as_ref().map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(i, &value)| Assignment {
                        id: VarId(i),
                        value,
                    })
                    .collect()
            }),
            certificate: r.certificate.clone(),
        }
    }
}

impl TryFrom<SolveResultDoc> for SolveResult {
    type Error = FormatError;

    fn try_from(doc: SolveResultDoc) -> Result<Self, Self::Error> {
        if doc.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(doc.format_version));
        }
        let model = match doc.model {
            None => None,
            Some(entries) => {
                let mut model = Vec::with_capacity(entries.len());
                for (position, a) in entries.into_iter().enumerate() {
                    if a.id.0 != position {
                        return Err(FormatError::Numbering {
                            kind: "model",
                            position,
                            found: a.id.0,
                        });
                    }
                    model.push(a.value);
                }
                Some(model)
            }
        };
        let consistent = match doc.status {
            SolveStatus::Sat => model.is_some() && doc.certificate.is_none(),
            SolveStatus::Unsat => model.is_none() && doc.certificate.is_some(),
        };
        if !consistent {
            return Err(FormatError::Shape { status: doc.status });
        }
        Ok(SolveResult {
            status: doc.status,
            model,
            certificate: doc.certificate,
        })
    }
}
