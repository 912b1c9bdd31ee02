//! Checks whether one observer's descriptions can be converted into
//! another's by a single map applied across all outcome branches.
//!
//! Two independent checks run on a [`DescriptionTable`]:
//!
//! * [`check_function_existence`] looks for two rows whose left descriptions
//!   coincide while their right descriptions differ. Such a pair rules out
//!   every map, linear or not.
//! * [`fit_best_linear_map`] embeds the descriptions as vectors and solves
//!   `min_T Σ ‖T·left - right‖²` over unconstrained linear maps `T`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::classical::{
    collapse, kicked_energy, kicks_before, support_on_slice, BouncerParams, LiouvilleSupport,
    MeasurementRecord, ENERGY_TOLERANCE,
};
use crate::quantum::{description_on_slice, ObserverSlice, OutcomeBranch, TwoSpinState};
use crate::spacetime::{causal_relation, CausalClass, FourVector};
use crate::{Error, Particle, Result, Sign};

/// Tolerance for comparing supports point by point.
pub const SUPPORT_TOLERANCE: f64 = 1e-9;

/// Relative threshold below which a Gram-Schmidt direction is treated as dependent.
const RANK_TOLERANCE: f64 = 1e-10;

/// A per-observer description that can be compared and embedded linearly.
pub trait Description: Clone {
    /// Equality as physical descriptions (rays for states, sets for supports).
    fn same_description(&self, other: &Self) -> bool;

    /// Embeds every description in a common complex vector space, preserving order.
    fn embed(all: &[&Self]) -> Vec<Vec<Complex64>>;
}

impl Description for TwoSpinState {
    fn same_description(&self, other: &Self) -> bool {
        self.same_ray(other)
    }

    fn embed(all: &[&Self]) -> Vec<Vec<Complex64>> {
        all.iter().map(|s| s.amplitudes().to_vec()).collect()
    }
}

impl Description for LiouvilleSupport {
    fn same_description(&self, other: &Self) -> bool {
        self.same_as(other, SUPPORT_TOLERANCE)
    }

    /// Probability vectors over the union of all support points.
    fn embed(all: &[&Self]) -> Vec<Vec<Complex64>> {
        let mut union: Vec<(f64, f64)> = Vec::new();
        for support in all {
            for pt in support.points() {
                let known = union.iter().any(|&(e1, e2)| {
                    (e1 - pt.e1).abs() <= ENERGY_TOLERANCE && (e2 - pt.e2).abs() <= ENERGY_TOLERANCE
                });
                if !known {
                    union.push((pt.e1, pt.e2));
                }
            }
        }
        all.iter()
            .map(|support| {
                union
                    .iter()
                    .map(|&(e1, e2)| {
                        let w: f64 = support
                            .points()
                            .iter()
                            .filter(|pt| {
                                (e1 - pt.e1).abs() <= ENERGY_TOLERANCE
                                    && (e2 - pt.e2).abs() <= ENERGY_TOLERANCE
                            })
                            .map(|pt| pt.weight)
                            .sum();
                        Complex64::new(w, 0.0)
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow<D> {
    /// Outcome signs of the first and second intervention.
    pub branch: (Sign, Sign),
    pub left: D,
    pub right: D,
}

/// Paired descriptions, one row per outcome branch.
#[derive(Clone, Debug, PartialEq)]
pub struct DescriptionTable<D> {
    rows: Vec<TableRow<D>>,
}

impl<D: Description> DescriptionTable<D> {
    pub fn new(rows: Vec<TableRow<D>>) -> Self {
        DescriptionTable { rows }
    }

    pub fn rows(&self) -> &[TableRow<D>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether every sign pair appears exactly once.
    pub fn is_exhaustive(&self) -> bool {
        self.rows.len() == 4
            && Sign::BOTH.iter().all(|&a| {
                Sign::BOTH
                    .iter()
                    .all(|&b| self.rows.iter().filter(|r| r.branch == (a, b)).count() == 1)
            })
    }
}

fn branches() -> impl Iterator<Item = (Sign, Sign)> {
    Sign::BOTH
        .into_iter()
        .flat_map(|a| Sign::BOTH.into_iter().map(move |b| (a, b)))
}

/// Alice's and Bob's descriptions of the spin pair for all four `σ_y` outcome pairs.
///
/// Alice's slice must lie after event A and before event B; Bob's the reverse.
pub fn build_quantum_table(
    measurement_events: &[FourVector; 2],
    alice: &ObserverSlice,
    bob: &ObserverSlice,
) -> Result<DescriptionTable<TwoSpinState>> {
    if causal_relation(measurement_events[0], measurement_events[1]) != CausalClass::Spacelike {
        return Err(Error::InvalidScenario(
            "measurement events must be spacelike separated",
        ));
    }
    let before = |s: &ObserverSlice| -> Result<[bool; 2]> {
        let plane = s.slice()?;
        Ok(measurement_events.map(|e| plane.is_before(e)))
    };
    if before(alice)? != [true, false] {
        return Err(Error::InvalidScenario(
            "alice's slice must follow event A and precede event B",
        ));
    }
    if before(bob)? != [false, true] {
        return Err(Error::InvalidScenario(
            "bob's slice must follow event B and precede event A",
        ));
    }
    let rows = branches()
        .map(|(a, b)| {
            Ok(TableRow {
                branch: (a, b),
                left: description_on_slice(
                    alice,
                    &OutcomeBranch::new(Some(a), None),
                    measurement_events,
                )?,
                right: description_on_slice(
                    bob,
                    &OutcomeBranch::new(None, Some(b)),
                    measurement_events,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescriptionTable::new(rows))
}

/// Alice's and Bob's Liouville supports after measuring the particle they
/// have seen kicked, for all four sign pairs.
pub fn build_classical_table(
    params: &BouncerParams,
    alice: &ObserverSlice,
    bob: &ObserverSlice,
) -> Result<DescriptionTable<LiouvilleSupport>> {
    params.validate()?;
    let (alice_plane, bob_plane) = (alice.slice()?, bob.slice()?);
    if kicks_before(params, &alice_plane) != [true, false] {
        return Err(Error::InvalidScenario(
            "alice's slice must follow kick 1 and precede kick 2",
        ));
    }
    if kicks_before(params, &bob_plane) != [false, true] {
        return Err(Error::InvalidScenario(
            "bob's slice must follow kick 2 and precede kick 1",
        ));
    }
    let alice_support = support_on_slice(params, &alice_plane, &MeasurementRecord::NONE)?;
    let bob_support = support_on_slice(params, &bob_plane, &MeasurementRecord::NONE)?;
    let rows = branches()
        .map(|(s1, s2)| {
            Ok(TableRow {
                branch: (s1, s2),
                left: collapse(&alice_support, Particle::First, kicked_energy(params, s1)?)?,
                right: collapse(&bob_support, Particle::Second, kicked_energy(params, s2)?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescriptionTable::new(rows))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionCheck {
    pub function_exists: bool,
    /// First pair of rows (in row order) with equal left and unequal right.
    pub witness: Option<(usize, usize)>,
}

/// Decides whether `left -> right` is a function over the table's rows.
pub fn check_function_existence<D: Description>(table: &DescriptionTable<D>) -> FunctionCheck {
    let rows = table.rows();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].left.same_description(&rows[j].left)
                && !rows[i].right.same_description(&rows[j].right)
            {
                return FunctionCheck {
                    function_exists: false,
                    witness: Some((i, j)),
                };
            }
        }
    }
    FunctionCheck {
        function_exists: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    /// Optimal `Σ ‖T·left - right‖²`.
    pub residual: f64,
    /// `‖T·left - right‖` per row at the optimum.
    pub per_row_errors: Vec<f64>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum())
}

/// Orthonormal basis of the span of `vectors` (modified Gram-Schmidt, two passes).
fn orthonormal_basis(vectors: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for mut v in vectors {
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
        let n = norm(&v);
        if n > RANK_TOLERANCE * scale {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// Least-squares fit of one linear map taking every left description to its right one.
///
/// The optimum is `T = R·L⁺`, whose error matrix is `R·(I - L⁺L)`; `L⁺L`
/// projects onto the span of the conjugated rows of `L`.
pub fn fit_best_linear_map<D: Description>(table: &DescriptionTable<D>) -> Result<LinearFit> {
    if table.is_empty() {
        return Err(Error::InvalidArgument("cannot fit a map to an empty table"));
    }
    let n = table.len();
    let all: Vec<&D> = table
        .rows()
        .iter()
        .flat_map(|r| [&r.left, &r.right])
        .collect();
    let embedded = D::embed(&all);
    let lefts: Vec<&Vec<Complex64>> = embedded.iter().step_by(2).collect();
    let rights: Vec<&Vec<Complex64>> = embedded.iter().skip(1).step_by(2).collect();
    let left_dim = lefts[0].len();
    let right_dim = rights[0].len();

    let row_space: Vec<Vec<Complex64>> = (0..left_dim)
        .map(|j| lefts.iter().map(|l| l[j].conj()).collect())
        .collect();
    let basis = orthonormal_basis(row_space);

    let mut errors: Vec<Vec<Complex64>> = rights.iter().map(|r| (*r).clone()).collect();
    for q in &basis {
        let rq: Vec<Complex64> = (0..right_dim)
            .map(|i| (0..n).map(|r| rights[r][i] * q[r]).sum())
            .collect();
        for (r, err) in errors.iter_mut().enumerate() {
            let c = q[r].conj();
            err.iter_mut().zip(&rq).for_each(|(e, x)| *e -= x * c);
        }
    }
    let per_row_errors: Vec<f64> = errors.iter().map(|e| norm(e)).collect();
    let residual = per_row_errors.iter().map(|e| e * e).sum();
    Ok(LinearFit {
        residual,
        per_row_errors,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckVerdict {
    pub function_exists: bool,
    pub witness: Option<(usize, usize)>,
    pub best_linear_residual: f64,
    pub per_row_errors: Vec<f64>,
}

/// Runs both checks.
pub fn check<D: Description>(table: &DescriptionTable<D>) -> Result<CheckVerdict> {
    let existence = check_function_existence(table);
    let fit = fit_best_linear_map(table)?;
    Ok(CheckVerdict {
        function_exists: existence.function_exists,
        witness: existence.witness,
        best_linear_residual: fit.residual,
        per_row_errors: fit.per_row_errors,
    })
}
