//! Which subgroups of `U_p` turn a given window into a frame.
//!
//! A subgroup of index `d` can only pass the Y-matrix test when its `d` rows
//! each hold one of the `‖ŷ‖₀ - 1` nonzero samples on `U_p`, so `d ≤ ‖ŷ‖₀ - 1`
//! prunes the search. Every divisor is still tested against its matrix; a
//! pruned divisor whose matrix passes would be reported as a disagreement.
//! Passing indices `d` then generate the frame orders `(p - 1)/d'` for all
//! divisors `d'` of `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{frame_conditions, Witness, YMatrix};
use crate::error::{Condition, Result};
use crate::spectral::{dft, Signal};
use crate::zmod::{PrimeContext, Subgroup};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CharacterizationStatus {
    Characterized,
    /// `ŷ(0) = 0`: no subgroup yields a frame.
    NeverFrame {
        reason: String,
    },
}

/// Y-matrix test for the subgroup `⟨ε^d⟩` of index `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorTest {
    /// `d = ∏ q_i^{r_i}`, the subgroup index and row count of its Y-matrix.
    pub index: u64,
    pub exponents: Vec<u32>,
    /// `(p - 1)/d`.
    pub order: u64,
    /// `d > ‖ŷ‖₀ - 1`.
    pub pruned: bool,
    pub nonzero_rows: usize,
    /// Every one of the `d` rows is nonzero.
    pub all_rows_nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationResult {
    pub p: u64,
    pub epsilon: u64,
    pub factorization: Vec<(u64, u32)>,
    pub support: usize,
    pub status: CharacterizationStatus,
    pub tests: Vec<DivisorTest>,
    /// Exponent tuples `(r_1, …, r_k)` whose index passes both the bound and the matrix test.
    pub lambda_set: Vec<Vec<u32>>,
    pub frame_subgroup_orders: Vec<u64>,
    pub witnesses: BTreeMap<u64, Vec<Witness>>,
    /// Indices where the pruning bound rejected a matrix that passes.
    pub bound_disagreements: Vec<u64>,
    pub tolerance_used: f64,
}

impl CharacterizationResult {
    pub fn is_frame_order(&self, order: u64) -> bool {
        self.frame_subgroup_orders.binary_search(&order).is_ok()
    }
}

/// Characterizes every subgroup of `U_p` for the time-domain window `y`.
pub fn characterize_subgroups(ctx: &Arc<PrimeContext>, y: &Signal, tau: f64) -> Result<CharacterizationResult> {
    let y_hat = dft(y);
    let support = y_hat.support_count(tau);
    let mut result = CharacterizationResult {
        p: ctx.p(),
        epsilon: ctx.epsilon(),
        factorization: ctx.factorization().to_vec(),
        support,
        status: CharacterizationStatus::Characterized,
        tests: Vec::new(),
        lambda_set: Vec::new(),
        frame_subgroup_orders: Vec::new(),
        witnesses: BTreeMap::new(),
        bound_disagreements: Vec::new(),
        tolerance_used: tau,
    };
    if support == 0 || !y_hat.is_nonzero_at(0, tau) {
        result.status = CharacterizationStatus::NeverFrame { reason: Condition::DcZero.to_string() };
        return Ok(result);
    }

    let bound = (support - 1) as u64;
    let n = ctx.group_order();
    let mut passing = Vec::new();
    for d in ctx.divisors() {
        let sg = Subgroup::of_order(ctx, n / d)?;
        let ym = YMatrix::from_spectrum(&y_hat, &sg);
        let nonzero_rows = ym.nonzero_rows(tau);
        let test = DivisorTest {
            index: d,
            exponents: ctx.exponents_of(d)?,
            order: n / d,
            pruned: d > bound,
            nonzero_rows,
            all_rows_nonzero: nonzero_rows as u64 == d,
        };
        match (test.pruned, test.all_rows_nonzero) {
            (false, true) => {
                result.lambda_set.push(test.exponents.clone());
                passing.push(d);
            }
            (true, true) => result.bound_disagreements.push(d),
            _ => {}
        }
        result.tests.push(test);
    }

    let mut orders = BTreeSet::new();
    for &d in &passing {
        for e in ctx.divisors().into_iter().filter(|e| d % e == 0) {
            orders.insert(n / e);
        }
    }
    result.frame_subgroup_orders = orders.into_iter().collect();

    for &order in &result.frame_subgroup_orders {
        let verdict = frame_conditions(&y_hat, &Subgroup::of_order(ctx, order)?, tau)?;
        result.witnesses.insert(order, verdict.witnesses);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{idft, Domain, DEFAULT_TAU};
    use crate::zmod::find_generator;
    use num_complex::Complex64;

    fn window_from_support(ctx: &Arc<PrimeContext>, support: &[u64]) -> Signal {
        let yh = Signal::from_fn(ctx, Domain::Frequency, |l| {
            if support.contains(&(l as u64)) {
                Complex64::new(1.0 + 0.1 * l as f64, -0.3)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        idft(&yh)
    }

    #[test]
    fn p13_example() {
        let ctx = find_generator(13).unwrap();
        let y = window_from_support(&ctx, &[0, 2, 3, 8, 11, 12]);
        let r = characterize_subgroups(&ctx, &y, DEFAULT_TAU).unwrap();
        assert_eq!(r.support, 6);
        let candidates: Vec<Vec<u32>> = r.tests.iter().filter(|t| !t.pruned).map(|t| t.exponents.clone()).collect();
        assert_eq!(candidates, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]]);
        assert!(r.lambda_set.contains(&vec![2, 0]));
        assert!(!r.lambda_set.contains(&vec![0, 1]));
        assert_eq!(r.frame_subgroup_orders, vec![3, 6, 12]);
        assert!(!r.is_frame_order(4));
        assert!(r.bound_disagreements.is_empty());
        assert_eq!(r.witnesses[&3].len(), 4);
    }

    #[test]
    fn full_support_admits_every_order() {
        let ctx = find_generator(7).unwrap();
        let y = window_from_support(&ctx, &[0, 1, 2, 3, 4, 5, 6]);
        let r = characterize_subgroups(&ctx, &y, DEFAULT_TAU).unwrap();
        assert_eq!(r.frame_subgroup_orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn missing_dc_is_a_structured_result() {
        let ctx = find_generator(7).unwrap();
        let y = window_from_support(&ctx, &[1, 2, 3]);
        let r = characterize_subgroups(&ctx, &y, DEFAULT_TAU).unwrap();
        assert!(matches!(r.status, CharacterizationStatus::NeverFrame { .. }));
        assert!(r.frame_subgroup_orders.is_empty());
        assert!(r.lambda_set.is_empty());
    }

    #[test]
    fn dc_only_window_has_no_frame_orders() {
        let ctx = find_generator(5).unwrap();
        let y = window_from_support(&ctx, &[0]);
        let r = characterize_subgroups(&ctx, &y, DEFAULT_TAU).unwrap();
        assert_eq!(r.status, CharacterizationStatus::Characterized);
        assert!(r.frame_subgroup_orders.is_empty());
    }
}
