//! `Z/n₁ × ⋯ × Z/n_t` with `n₁ | ⋯ | n_t`, elements as residue vectors in
//! mixed radix (first coordinate most significant).

use crate::arith::factorize;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct AbelianBackend {
    pub moduli: Vec<u64>,
}

/// Reduces a list of cyclic factors to invariant factors `n₁ | ⋯ | n_t`,
/// dropping trivial factors.
pub fn normalize_moduli(raw: &[i64]) -> Result<Vec<u64>> {
    for &n in raw {
        if n < 1 {
            return Err(Error::Modulus(n));
        }
    }
    let mut per_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &n in raw {
        for (p, e) in factorize(n as u64) {
            per_prime.entry(p).or_default().push(e);
        }
    }
    let t = per_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![1u64; t];
    for (p, mut exps) in per_prime {
        exps.sort_unstable();
        // largest exponents go to the last invariant factors
        for (k, e) in exps.iter().rev().enumerate() {
            chain[t - 1 - k] *= p.pow(*e);
        }
    }
    Ok(chain)
}

impl AbelianBackend {
    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&n| n as u128).product()
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        let mut v = vec![0; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let n = self.moduli[i] as usize;
            v[i] = (index % n) as u64;
            index /= n;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> Option<usize> {
        if v.len() != self.moduli.len() {
            return None;
        }
        let mut index = 0usize;
        for (x, &n) in v.iter().zip(&self.moduli) {
            if *x >= n {
                return None;
            }
            index = index * n as usize + *x as usize;
        }
        Some(index)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.moduli).map(|((a, b), n)| (a + b) % n).collect();
        self.encode(&s).expect("sum is reduced")
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.decode(x);
        let s: Vec<u64> = a.iter().zip(&self.moduli).map(|(a, n)| (n - a) % n).collect();
        self.encode(&s).expect("negation is reduced")
    }

    pub fn basis(&self) -> Vec<usize> {
        (0..self.moduli.len())
            .map(|i| {
                let mut v = vec![0; self.moduli.len()];
                v[i] = 1;
                self.encode(&v).unwrap()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Invariant factors by repeated (gcd, lcm) replacement on the diagonal,
    /// independent of the prime-power bookkeeping above.
    fn smith_diagonal(raw: &[u64]) -> Vec<u64> {
        let mut d = raw.to_vec();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                let g = num_integer::gcd(d[i], d[j]);
                let l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
            }
        }
        d.into_iter().filter(|&x| x != 1).collect()
    }

    #[test]
    fn normalization_matches_smith_form() {
        assert_eq!(normalize_moduli(&[10, 5]).unwrap(), vec![5, 10]);
        assert_eq!(smith_diagonal(&[10, 5]), vec![5, 10]);
        for raw in [vec![4, 6], vec![2, 3, 4], vec![12, 18, 8], vec![1], vec![7, 49, 14], vec![6, 10, 15]] {
            let r: Vec<i64> = raw.iter().map(|&x| x as i64).collect();
            assert_eq!(normalize_moduli(&r).unwrap(), smith_diagonal(&raw), "{raw:?}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(normalize_moduli(&[3, 0]), Err(Error::Modulus(0))));
    }
}
