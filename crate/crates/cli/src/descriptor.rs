//! JSON system descriptors.
//!
//! Scalars are `[re_num, re_den, im_num, im_den]` integer quadruples.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use stardyn::{Element, Endo, GaussRat, MultiMatrixAlgebra, PartialMap, StarField, TargetBlock};

use crate::CliError;

pub type Quad = [i64; 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Descriptor {
    PartialMap {
        points: Vec<String>,
        domain: Vec<String>,
        map: BTreeMap<String, String>,
    },
    Multimatrix {
        blocks: Vec<usize>,
        endo: EndoDescriptor,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoDescriptor {
    pub targets: Vec<TargetDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDescriptor {
    pub multiplicity: Vec<usize>,
    #[serde(default)]
    pub padding: usize,
    /// Row-major; the identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Vec<Quad>>>,
}

/// A validated system.
#[derive(Clone, Debug, PartialEq)]
pub enum System {
    Map(PartialMap),
    Multi(Endo),
}

impl System {
    pub fn endo(&self) -> Endo {
        match self {
            System::Map(m) => m.induced_endomorphism::<GaussRat>().1,
            System::Multi(e) => e.clone(),
        }
    }

    pub fn partial_map(&self) -> Result<&PartialMap, CliError> {
        match self {
            System::Map(m) => Ok(m),
            System::Multi(_) => Err(CliError::Input("this command needs a partial-map (commutative) descriptor".into())),
        }
    }
}

pub fn scalar_from_quad(q: &Quad) -> Result<GaussRat, CliError> {
    if q[1] == 0 || q[3] == 0 {
        return Err(CliError::Input(format!("zero denominator in {q:?}")));
    }
    Ok(GaussRat::from_parts((q[0], q[1]), (q[2], q[3])))
}

pub fn scalar_to_quad(z: &GaussRat) -> Result<Quad, CliError> {
    let part = |r: &BigRational| -> Result<(i64, i64), CliError> {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Ok((n, d)),
            _ => Err(CliError::Input(format!("scalar {r} does not fit 64-bit integers"))),
        }
    };
    let (a, b) = part(&z.re)?;
    let (c, d) = part(&z.im)?;
    Ok([a, b, c, d])
}

/// Blocks as row-major quadruple matrices.
pub fn element_json(e: &Element) -> Result<Vec<Vec<Vec<Quad>>>, CliError> {
    e.blocks()
        .iter()
        .map(|m| (0..m.rows()).map(|r| m.row(r).iter().map(scalar_to_quad).collect()).collect())
        .collect()
}

pub fn load(text: &str) -> Result<System, CliError> {
    let d: Descriptor = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed descriptor: {e}")))?;
    d.validate()
}

impl Descriptor {
    pub fn validate(&self) -> Result<System, CliError> {
        match self {
            Descriptor::PartialMap { points, domain, map } => {
                let index: BTreeMap<&str, usize> = points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
                let lookup = |name: &str| {
                    index.get(name).copied().ok_or_else(|| CliError::Input(format!("unknown point '{name}'")))
                };
                let mut images = vec![None; points.len()];
                for x in domain {
                    let y = map.get(x).ok_or_else(|| CliError::Input(format!("domain point '{x}' has no image")))?;
                    images[lookup(x)?] = Some(lookup(y)?);
                }
                if let Some(extra) = map.keys().find(|k| !domain.contains(k)) {
                    return Err(CliError::Input(format!("'{extra}' is mapped but not in the domain")));
                }
                Ok(System::Map(PartialMap::with_names(points.clone(), images)?))
            }
            Descriptor::Multimatrix { blocks, endo } => {
                let alg = MultiMatrixAlgebra::new(blocks.clone())?;
                let targets = endo
                    .targets
                    .iter()
                    .enumerate()
                    .map(|(j, t)| {
                        let n = *blocks.get(j).ok_or_else(|| CliError::Input("more targets than blocks".into()))?;
                        let unitary = match &t.unitary {
                            None => stardyn::linalg::Matrix::identity(n),
                            Some(rows) => {
                                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                                    return Err(CliError::Input(format!("target {j}: unitary must be {n}×{n}")));
                                }
                                let rows = rows
                                    .iter()
                                    .map(|r| r.iter().map(scalar_from_quad).collect::<Result<Vec<_>, _>>())
                                    .collect::<Result<Vec<_>, _>>()?;
                                stardyn::linalg::Matrix::from_rows(rows)
                            }
                        };
                        Ok(TargetBlock { multiplicity: t.multiplicity.clone(), padding: t.padding, unitary })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(System::Multi(Endo::new(alg.clone(), alg, targets)?))
            }
        }
    }
}

impl System {
    /// Canonical descriptor: reduced fractions, explicit unitaries only when not the identity.
    pub fn to_descriptor(&self) -> Result<Descriptor, CliError> {
        match self {
            System::Map(m) => {
                let points = m.names().to_vec();
                let domain: Vec<String> = m.domain().into_iter().map(|x| m.name(x).to_string()).collect();
                let map = m
                    .domain()
                    .into_iter()
                    .map(|x| (m.name(x).to_string(), m.name(m.image(x).expect("in domain")).to_string()))
                    .collect();
                Ok(Descriptor::PartialMap { points, domain, map })
            }
            System::Multi(e) => {
                let targets = e
                    .target_blocks()
                    .iter()
                    .map(|t| {
                        let unitary = if t.unitary.is_identity() {
                            None
                        } else {
                            let u = &t.unitary;
                            Some(
                                (0..u.rows())
                                    .map(|r| u.row(r).iter().map(scalar_to_quad).collect::<Result<Vec<_>, _>>())
                                    .collect::<Result<Vec<_>, _>>()?,
                            )
                        };
                        Ok(TargetDescriptor { multiplicity: t.multiplicity.clone(), padding: t.padding, unitary })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Descriptor::Multimatrix {
                    blocks: e.source().block_dims().to_vec(),
                    endo: EndoDescriptor { targets },
                })
            }
        }
    }
}

