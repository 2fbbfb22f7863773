//! Census of components with fixed `χ` and `q` over a catalog of groups.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{count_components, EquivalenceConfig};
use crate::error::Result;
use crate::group::Group;
use crate::ramification::{curve_genus, SignatureType};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub group: String,
    pub order: u64,
    pub type1: SignatureType,
    pub type2: SignatureType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub systems: Option<[u64; 2]>,
    /// `"ok"`, or why the row was skipped.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusTable {
    pub chi: i64,
    pub q: u64,
    pub rows: Vec<CensusRow>,
    pub total_h: u64,
    pub skipped: u64,
}

/// Hyperbolic types `(g′ | m₁ ≤ ⋯ ≤ m_r)` with periods among `orders` and
/// area at most `cap`.
fn types_up_to(gprime: usize, orders: &[u32], cap: Rational) -> Vec<SignatureType> {
    fn rec(gprime: usize, orders: &[u32], from: usize, area: Rational, cap: Rational, cur: &mut Vec<u32>, out: &mut Vec<SignatureType>) {
        if area > Rational::zero() {
            out.push(SignatureType { gprime, periods: cur.clone() });
        }
        for (k, &m) in orders.iter().enumerate().skip(from) {
            let next = area + Rational::one() - Rational::new(1, m as i128);
            if next > cap {
                // periods are sorted, so larger ones only add more area
                break;
            }
            cur.push(m);
            rec(gprime, orders, k, next, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let base = Rational::from_integer(2 * gprime as i128 - 2);
    rec(gprime, orders, 0, base, cap, &mut Vec::new(), &mut out);
    out
}

fn admissible(order: u64, t: &SignatureType) -> bool {
    let g = curve_genus(order, t);
    g.is_integer() && g >= Rational::from_integer(2)
}

/// Unordered pairs of types `τ₁ ≤ τ₂` with `g′₁ + g′₂ = q`, integral covering
/// genera `≥ 2` and `χ = (g₁ − 1)(g₂ − 1)/|G|`.
pub fn admissible_type_pairs(group: &Group, chi: i64, q: u64) -> Vec<(SignatureType, SignatureType)> {
    let n = group.order() as u64;
    let mut orders: Vec<u32> = group.elements().map(|x| group.element_order(x)).filter(|&m| m >= 2).collect();
    orders.sort_unstable();
    orders.dedup();
    // A₁A₂ = 4χ/|G| and every hyperbolic area is at least 1/42
    let target = Rational::new(4 * chi as i128, n as i128);
    if target <= Rational::zero() {
        return Vec::new();
    }
    let cap = target * 42;
    let mut out = Vec::new();
    for g1 in 0..=q as usize {
        let g2 = q as usize - g1;
        let left = types_up_to(g1, &orders, cap);
        let right = types_up_to(g2, &orders, cap);
        for t1 in &left {
            for t2 in &right {
                if t1 <= t2 && t1.area() * t2.area() == target && admissible(n, t1) && admissible(n, t2) {
                    out.push((t1.clone(), t2.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

/// Runs the component count on every admissible datum of every catalog
/// group. Groups or data exceeding a budget become warning rows.
pub fn scan_invariants(catalog: &[Arc<Group>], chi: i64, q: u64, config: &EquivalenceConfig) -> Result<CensusTable> {
    let mut rows = Vec::new();
    for g in catalog {
        for (t1, t2) in admissible_type_pairs(g, chi, q) {
            let mut row = CensusRow {
                group: g.spec().to_string(),
                order: g.order() as u64,
                type1: t1.clone(),
                type2: t2.clone(),
                h: None,
                systems: None,
                status: "ok".into(),
            };
            match count_components(g, &t1, &t2, config) {
                Ok(r) => {
                    row.h = Some(r.h);
                    row.systems = Some(r.systems);
                }
                Err(e @ (crate::Error::Budget { .. } | crate::Error::AutBound { .. } | crate::Error::TooLarge { .. })) => {
                    row.status = format!("skipped: {e}");
                }
                Err(e) => return Err(e),
            }
            rows.push(row);
        }
    }
    let total_h = rows.iter().filter_map(|r| r.h).sum();
    let skipped = rows.iter().filter(|r| r.h.is_none()).count() as u64;
    Ok(CensusTable { chi, q, rows, total_h, skipped })
}
