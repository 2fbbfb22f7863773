//! Explicit multiplication tables loaded from JSON documents.

use serde::Deserialize;

use crate::error::{Error, Result};

/// Tables up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 128;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Deserialize)]
struct CayleyDoc {
    order: usize,
    #[serde(default)]
    labels: Vec<String>,
    table: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub(crate) struct CayleyTable {
    pub labels: Vec<String>,
    /// Row-major, `table[x * n + y] = x·y`.
    pub table: Vec<u32>,
    pub identity: u32,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: CayleyDoc = serde_json::from_str(text).map_err(|e| Error::CayleyFormat(e.to_string()))?;
        Self::from_rows(doc.order, doc.labels, doc.table)
    }

    /// Validates shape, closure, identity, inverses and associativity in that
    /// order and reports the first failure.
    pub fn from_rows(order: usize, labels: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = order;
        let fail = |axiom: &'static str, detail: String| Err(Error::CayleyAxiom { axiom, detail });
        if n == 0 {
            return fail("shape", "order must be positive".into());
        }
        if rows.len() != n {
            return fail("shape", format!("{} rows for order {n}", rows.len()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return fail("shape", format!("row {i} has {} entries for order {n}", r.len()));
        }
        let labels = if labels.is_empty() {
            (0..n).map(|i| format!("g{i}")).collect()
        } else if labels.len() != n {
            return fail("shape", format!("{} labels for order {n}", labels.len()));
        } else {
            labels
        };
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return fail("shape", "labels are not distinct".into());
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        if let Some(k) = table.iter().position(|&v| v as usize >= n) {
            return fail("closure", format!("entry ({}, {}) = {} is out of range", k / n, k % n, table[k]));
        }
        let m = |x: usize, y: usize| table[x * n + y] as usize;
        let Some(e) = (0..n).find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x)) else {
            return fail("identity", "no two-sided identity".into());
        };
        for x in 0..n {
            if !(0..n).any(|y| m(x, y) == e && m(y, x) == e) {
                return fail("inverses", format!("element {} has no two-sided inverse", labels[x]));
            }
        }
        let check = |x: usize, y: usize, z: usize| m(m(x, y), z) == m(x, m(y, z));
        let bad = |x: usize, y: usize, z: usize| {
            fail(
                "associativity",
                format!("({0}{1}){2} != {0}({1}{2})", labels[x], labels[y], labels[z]),
            )
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !check(x, y, z) {
                            return bad(x, y, z);
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !check(x, y, z) {
                    return bad(x, y, z);
                }
            }
        }
        Ok(CayleyTable { labels, table, identity: e as u32 })
    }
}
