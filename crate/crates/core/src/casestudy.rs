//! A worked example in three variables: the automorphism
//! `(x, y(1 - xz) + Q^2/4 + z^4, z - xQ/2)` with `Q = x^2 y - z^2 - x z^3`,
//! whose invariants are the polynomials in `x` alone.
//!
//! Since `x` is fixed, the map restricts to an automorphism `Psi` of the
//! plane over `Q(x)`. [`run_poloni_moser`] checks that `Psi` has the origin
//! as unique fixpoint with unipotent, nonidentity differential, and computes
//! the polynomial invariants of the three-variable map up to a degree bound.

use crate::budget::Budget;
use crate::classify::invariant_basis;
use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::ideal::{fixpoint_ideal, ideals_equal, radical_member, unique_fixpoint, Ideal};
use crate::linalg::SquareMatrix;
use crate::poly::{MonomialOrder, MultiPoly, PolyRing};
use crate::scalar::Field;
use std::collections::BTreeMap;

pub const DEFAULT_DEGREE_BOUND: u32 = 6;

const Q: &str = "(x^2*y - z^2 - x*z^3)";

pub const SCOPE_NOTE: &str = "invariants are checked degree by degree up to the bound; \
     the equality of invariant fields is not decided by this computation";

fn coords() -> [String; 2] {
    [format!("y*(1 - x*z) + {Q}^2/4 + z^4"), format!("z - x*{Q}/2")]
}

/// The three-variable map over `Q`.
pub fn poloni_moser_map() -> PolyMap {
    let ring = PolyRing::new(Field::Rationals, &["x", "y", "z"], MonomialOrder::Lex).expect("valid ring");
    let [c1, c2] = coords();
    PolyMap::parse(&ring, &["x".to_string(), c1, c2]).expect("valid map")
}

/// The induced plane map on `(y, z)` over `Q(x)`.
pub fn poloni_moser_psi() -> PolyMap {
    let field = Field::rational_functions("x").expect("valid field");
    let ring = PolyRing::new(field, &["y", "z"], MonomialOrder::Lex).expect("valid ring");
    PolyMap::parse(&ring, &coords()).expect("valid map")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    Success,
    Failure,
    /// A budget ran out; the fields computed so far are kept.
    Incomplete,
}

#[derive(Clone, Debug)]
pub struct PoloniMoserReport {
    pub degree_bound: u32,
    pub fixpoint_ideal: Ideal,
    pub expected_ideal: Ideal,
    pub ideal_equality: bool,
    pub y_in_radical: bool,
    pub z_in_radical: bool,
    pub unique_fixpoint: bool,
    /// `d Psi` at the origin with entry `(i, j) = d Psi_i / d x_j`.
    pub jacobian: SquareMatrix,
    /// The same differential with entry `(i, j) = d Psi_j / d x_i`.
    pub jacobian_transposed: SquareMatrix,
    pub unipotent: bool,
    pub nonidentity_differential: bool,
    /// Jacobian determinant of the three-variable map.
    pub jacobian_determinant: MultiPoly,
    pub invariant_bases: BTreeMap<u32, Vec<MultiPoly>>,
    pub conclusion: Conclusion,
    pub budget_exhausted: Option<String>,
    pub note: &'static str,
}

/// Elements of `basis` all lie in `span{1, x, ..., x^d}`.
fn only_powers_of_x(basis: &[MultiPoly], d: u32) -> bool {
    basis.iter().all(|f| (1..f.ring().nvars()).all(|i| !f.involves(i)) && f.total_degree().unwrap_or(0) <= d)
}

pub fn run_poloni_moser(degree_bound: u32, budget: &Budget) -> Result<PoloniMoserReport> {
    if degree_bound == 0 {
        return Err(Error::InvalidInput("degree_bound must be at least 1".into()));
    }
    let phi = poloni_moser_map();
    let psi = poloni_moser_psi();
    let ring = psi.ring().clone();
    let field = ring.field().clone();
    let origin = [field.zero(), field.zero()];
    let jacobian = psi.jacobian_at(&origin)?;
    let mut report = PoloniMoserReport {
        degree_bound,
        fixpoint_ideal: fixpoint_ideal(&psi),
        expected_ideal: Ideal::parse(&ring, &[format!("x*{Q}"), format!("4*z^4 - 4*x*y*z + {Q}^2")])?,
        ideal_equality: false,
        y_in_radical: false,
        z_in_radical: false,
        unique_fixpoint: false,
        jacobian_transposed: jacobian.transpose(),
        unipotent: jacobian.is_unipotent(),
        nonidentity_differential: !jacobian.is_identity(),
        jacobian,
        jacobian_determinant: phi.jacobian_determinant(),
        invariant_bases: BTreeMap::new(),
        conclusion: Conclusion::Incomplete,
        budget_exhausted: None,
        note: SCOPE_NOTE,
    };
    match stages(&phi, &psi, budget, &mut report) {
        Err(Error::BudgetExceeded(msg)) => {
            report.budget_exhausted = Some(msg);
            return Ok(report);
        }
        other => other?,
    }
    let bases_ok = report.invariant_bases.iter().all(|(d, b)| only_powers_of_x(b, *d));
    let all = report.ideal_equality
        && report.y_in_radical
        && report.z_in_radical
        && report.unique_fixpoint
        && report.unipotent
        && report.nonidentity_differential
        && report.jacobian_determinant.is_constant()
        && bases_ok;
    report.conclusion = if all { Conclusion::Success } else { Conclusion::Failure };
    Ok(report)
}

fn stages(phi: &PolyMap, psi: &PolyMap, budget: &Budget, report: &mut PoloniMoserReport) -> Result<()> {
    let ring = psi.ring();
    let origin = [ring.field().zero(), ring.field().zero()];
    report.ideal_equality = ideals_equal(&report.fixpoint_ideal, &report.expected_ideal, budget)?;
    report.y_in_radical = radical_member(&MultiPoly::var(ring, 0), &report.fixpoint_ideal, budget)?;
    report.z_in_radical = radical_member(&MultiPoly::var(ring, 1), &report.fixpoint_ideal, budget)?;
    report.unique_fixpoint = unique_fixpoint(psi, &origin, budget)?;
    for d in 1..=report.degree_bound {
        let basis = invariant_basis(phi, d, budget)?;
        report.invariant_bases.insert(d, basis);
    }
    Ok(())
}
