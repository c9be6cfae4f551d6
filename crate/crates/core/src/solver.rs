//! Satisfiability of ±1 parity systems.
//!
//! Two independent deciders: [`enumerate_solve`] tries every assignment and is
//! the trusted oracle for small systems; [`gf2_solve`] maps `v = (−1)^bit` so
//! that each constraint becomes a linear equation over GF(2) and runs
//! Gauss–Jordan elimination with row pedigrees. [`verify_certificate`] checks
//! either kind of answer without looking at solver internals.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lhv::{ConstraintId, ConstraintSet, VarId};
use crate::sign::Sign;

/// Largest variable count [`enumerate_solve`] accepts.
pub const ENUMERATION_LIMIT: usize = 24;

/// Subset sizes tried exhaustively when searching for a small certificate.
const CERTIFICATE_SEARCH_MAX: usize = 4;
const CERTIFICATE_SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("{found} variables exceeds the enumeration limit of {limit}")]
    TooManyVariables { found: usize, limit: usize },
    #[error("model assigns {found} variables but the system has {expected}")]
    ModelSize { expected: usize, found: usize },
    #[error("constraint {constraint} references unknown variable {var}")]
    UnknownVariable {
        constraint: ConstraintId,
        var: VarId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Enumerate,
    Gf2,
}

/// A model indexed by variable id, or a certificate: constraint ids whose
/// product cancels every variable while the required signs multiply to −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub model: Option<Vec<Sign>>,
    pub certificate: Option<Vec<ConstraintId>>,
}

impl SolveResult {
    pub fn sat(model: Vec<Sign>) -> Self {
        SolveResult {
            status: SolveStatus::Sat,
            model: Some(model),
            certificate: None,
        }
    }

    pub fn unsat(certificate: Vec<ConstraintId>) -> Self {
        SolveResult {
            status: SolveStatus::Unsat,
            model: None,
            certificate: Some(certificate),
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == SolveStatus::Sat
    }
}

pub fn solve(cs: &ConstraintSet, method: SolveMethod) -> Result<SolveResult, SolverError> {
    match method {
        SolveMethod::Enumerate => enumerate_solve(cs),
        SolveMethod::Gf2 => Ok(gf2_solve(cs)),
    }
}

/// Variable mask (repeated variables cancel) and sign bit of each constraint.
fn packed_rows(cs: &ConstraintSet) -> Vec<(u32, bool)> {
    cs.constraints()
        .iter()
        .map(|c| {
            let mask = c.vars.iter().fold(0u32, |m, v| m ^ (1u32 << v.0));
            (mask, c.required_sign.bit())
        })
        .collect()
}

fn first_model(rows: &[(u32, bool)], n: usize) -> Option<u32> {
    let total: u64 = 1 << n;
    (0..total).map(|x| x as u32).find(|&x| {
        rows.iter()
            .all(|&(mask, sign)| ((x & mask).count_ones() & 1 == 1) == sign)
    })
}

/// Exhaustive search over all `2ⁿ` assignments. The satisfying assignment
/// with the lowest index (bit `i` set ⇔ variable `i` is −1) is returned.
pub fn enumerate_solve(cs: &ConstraintSet) -> Result<SolveResult, SolverError> {
    let n = cs.num_variables();
    if n > ENUMERATION_LIMIT {
        return Err(SolverError::TooManyVariables {
            found: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let rows = packed_rows(cs);
    if let Some(x) = first_model(&rows, n) {
        let model = (0..n).map(|i| Sign::from_bit((x >> i) & 1 == 1)).collect();
        return Ok(SolveResult::sat(model));
    }
    Ok(SolveResult::unsat(enumerated_certificate(&rows, n)))
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k as u64).fold(1u64, |acc, i| acc.saturating_mul(n as u64 - i) / (i + 1))
}

/// Smallest contradictory subset of size ≤ 4 if one exists; otherwise a
/// minimal unsatisfiable subset by deletion, with satisfiability decided by
/// enumeration. A minimal unsatisfiable parity system always sums to 0 = 1.
fn enumerated_certificate(rows: &[(u32, bool)], n: usize) -> Vec<ConstraintId> {
    for k in 1..=CERTIFICATE_SEARCH_MAX.min(rows.len()) {
        if binomial(rows.len(), k) > CERTIFICATE_SEARCH_BUDGET {
            break;
        }
        let hit = (0..rows.len()).combinations(k).find(|subset| {
            let (mask, sign) = subset
                .iter()
                .fold((0u32, false), |(m, s), &i| (m ^ rows[i].0, s ^ rows[i].1));
            mask == 0 && sign
        });
        if let Some(subset) = hit {
            return subset.into_iter().map(ConstraintId).collect();
        }
    }

    let mut kept: Vec<usize> = (0..rows.len()).collect();
    let mut i = 0;
    while i < kept.len() {
        let trial: Vec<(u32, bool)> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &r)| rows[r])
            .collect();
        if first_model(&trial, n).is_none() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept.into_iter().map(ConstraintId).collect()
}

/// Gauss–Jordan elimination over GF(2), pivoting on columns in variable-id
/// order and taking the first available row in constraint order. Each row
/// carries the set of original constraints it was summed from.
pub fn gf2_solve(cs: &ConstraintSet) -> SolveResult {
    let n = cs.num_variables();
    let m = cs.num_constraints();

    let mut rows: Vec<Row> = cs
        .constraints()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut coeffs = FixedBitSet::with_capacity(n);
            for v in &c.vars {
                coeffs.toggle(v.0);
            }
            let mut pedigree = FixedBitSet::with_capacity(m);
            pedigree.insert(i);
            Row {
                coeffs,
                rhs: c.required_sign.bit(),
                pedigree,
            }
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| rows[r].coeffs.contains(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot, tail) = tail.split_first_mut().expect("rank < m");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row.coeffs.contains(col) {
                row.add(pivot);
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }

    if let Some(bad) = rows[rank..].iter().find(|r| r.rhs) {
        return SolveResult::unsat(bad.pedigree.ones().map(ConstraintId).collect());
    }

    // Free variables take bit 0 (+1); each pivot variable then equals its row's rhs.
    let mut model = vec![Sign::Plus; n];
    for (r, col) in pivots {
        model[col] = Sign::from_bit(rows[r].rhs);
    }
    SolveResult::sat(model)
}

struct Row {
    coeffs: FixedBitSet,
    rhs: bool,
    pedigree: FixedBitSet,
}

impl Row {
    fn add(&mut self, other: &Row) {
        self.coeffs.symmetric_difference_with(&other.coeffs);
        self.rhs ^= other.rhs;
        self.pedigree.symmetric_difference_with(&other.pedigree);
    }
}

/// Re-checks a result against the constraint system from scratch.
///
/// A model must assign exactly the system's variables and satisfy every
/// constraint. A certificate must name distinct, existing constraints in which
/// every variable occurs an even number of times in total while the required
/// signs multiply to −1.
pub fn verify_certificate(cs: &ConstraintSet, result: &SolveResult) -> Result<bool, SolverError> {
    let n = cs.num_variables();
    for (i, c) in cs.constraints().iter().enumerate() {
        if let Some(&var) = c.vars.iter().find(|v| v.0 >= n) {
            return Err(SolverError::UnknownVariable {
                constraint: ConstraintId(i),
                var,
            });
        }
    }

    match result.status {
        SolveStatus::Sat => {
            let Some(model) = &result.model else {
                return Ok(false);
            };
            if model.len() != n {
                return Err(SolverError::ModelSize {
                    expected: n,
                    found: model.len(),
                });
            }
            Ok(result.certificate.is_none()
                && cs.constraints().iter().all(|c| c.is_satisfied_by(model)))
        }
        SolveStatus::Unsat => {
            let Some(cert) = &result.certificate else {
                return Ok(false);
            };
            if cert.is_empty() || result.model.is_some() {
                return Ok(false);
            }
            let mut seen = HashSet::with_capacity(cert.len());
            let mut parity = vec![false; n];
            let mut sign = Sign::Plus;
            for id in cert {
                if !seen.insert(*id) {
                    return Ok(false);
                }
                let Some(c) = cs.constraint(*id) else {
                    return Ok(false);
                };
                for v in &c.vars {
                    parity[v.0] ^= true;
                }
                sign *= c.required_sign;
            }
            Ok(sign == Sign::Minus && parity.iter().all(|odd| !odd))
        }
    }
}
