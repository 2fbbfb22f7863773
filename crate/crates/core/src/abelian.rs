//! Closed forms for abelian groups: the existence criterion for unmixed
//! structures, the quadruple count `N_n` for `(Z/n)²`, and the `Θ(n)` class
//! formula. Everything here is exact.

use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{factorize, gcd, valuation};
use crate::error::{Error, Result};
use crate::orbits::UnionFind;
use crate::Rational;

/// Invariant factors `n₁ | ⋯ | n_t` with `nᵢ := 1` for `i ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianProfile {
    pub moduli: Vec<u64>,
}

impl AbelianProfile {
    /// Takes any list of cyclic factors and normalises it.
    pub fn new(factors: &[u64]) -> Result<Self> {
        let raw: Vec<i64> = factors.iter().map(|&n| n as i64).collect();
        Ok(AbelianProfile { moduli: crate::group::normalize_moduli(&raw)? })
    }

    pub fn t(&self) -> usize {
        self.moduli.len()
    }

    /// `nᵢ`, 1-based, `1` for `i ≤ 0`.
    pub fn n(&self, i: i64) -> u64 {
        if i <= 0 {
            1
        } else {
            self.moduli[i as usize - 1]
        }
    }

    /// `lᵢ(p)`: the exponent of `p` in `nᵢ`, `0` for `i ≤ 0`.
    pub fn l(&self, i: i64, p: u64) -> u32 {
        valuation(self.n(i), p)
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub clause: &'static str,
    /// Whether the clause's hypothesis applies (always true for unconditional
    /// clauses).
    pub applies: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub moduli: Vec<u64>,
    pub r1: usize,
    pub r2: usize,
    pub admits: bool,
    pub clauses: Vec<Clause>,
}

/// Existence of an unmixed ramification structure of size `(r₁, r₂)` on an
/// abelian group, by the five valuation clauses.
pub fn admits_unmixed_abelian(profile: &AbelianProfile, r1: usize, r2: usize) -> Result<ExistenceVerdict> {
    for r in [r1, r2] {
        if r < 3 {
            return Err(Error::TooSmall { what: "r", min: 3, got: r as u64 });
        }
    }
    let t = profile.t() as i64;
    let both = |k: usize| r1 >= k && r2 >= k;
    let mut clauses = Vec::new();
    if t == 0 {
        // branch entries of the trivial group cannot have order >= 2
        clauses.push(Clause { clause: "G is nontrivial", applies: true, holds: false });
    }
    clauses.push(Clause { clause: "r1, r2 >= t + 1", applies: true, holds: both(t as usize + 1) });
    clauses.push(Clause { clause: "n_t = n_(t-1)", applies: true, holds: profile.n(t) == profile.n(t - 1) });
    let c3 = profile.l(t - 1, 3) > profile.l(t - 2, 3);
    clauses.push(Clause { clause: "l_(t-1)(3) > l_(t-2)(3) => r1, r2 >= 4", applies: c3, holds: !c3 || both(4) });
    clauses.push(Clause { clause: "l_(t-1)(2) = l_(t-2)(2)", applies: true, holds: profile.l(t - 1, 2) == profile.l(t - 2, 2) });
    let c5 = profile.l(t - 2, 2) > profile.l(t - 3, 2);
    let ok5 = both(5) && !(r1 % 2 == 1 && r2 % 2 == 1);
    clauses.push(Clause {
        clause: "l_(t-2)(2) > l_(t-3)(2) => r1, r2 >= 5 and not both odd",
        applies: c5,
        holds: !c5 || ok5,
    });
    let admits = clauses.iter().all(|c| c.holds);
    Ok(ExistenceVerdict { moduli: profile.moduli.clone(), r1, r2, admits, clauses })
}

fn unit(n: u64, x: i64) -> bool {
    gcd(x.rem_euclid(n as i64) as u64, n) == 1
}

/// `a, b, c, d` and `a−b, a+c, c−d, b+d, a+c−b−d, ad−bc` all units mod `n`.
/// Meant for `n ≥ 5` coprime to 6.
pub fn beauville_quadruple_check(n: u64, a: i64, b: i64, c: i64, d: i64) -> bool {
    [a, b, c, d, a - b, a + c, c - d, b + d, a + c - b - d, a * d - b * c].into_iter().all(|x| unit(n, x))
}

fn require_coprime_to_six(n: u64) -> Result<()> {
    if gcd(n, 6) != 1 {
        return Err(Error::NotCoprimeToSix(n));
    }
    if n < 5 {
        return Err(Error::TooSmall { what: "n", min: 5, got: n });
    }
    Ok(())
}

/// Exhaustive count of valid quadruples in `(Z/n)⁴`.
pub fn count_quadruples(n: u64) -> Result<u64> {
    require_coprime_to_six(n)?;
    let n_i = n as i64;
    let mut count = 0;
    for a in 0..n_i {
        for b in 0..n_i {
            for c in 0..n_i {
                for d in 0..n_i {
                    if beauville_quadruple_check(n, a, b, c, d) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `N_n = ∏ p^{4k−4}(p−1)(p−2)(p−3)(p−4)`.
pub fn n_count(n: u64) -> Result<u64> {
    require_coprime_to_six(n)?;
    Ok(factorize(n)
        .into_iter()
        .map(|(p, k)| p.pow(4 * k - 4) * (p - 1) * (p - 2) * (p - 3) * (p - 4))
        .product())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theta {
    pub n: u64,
    #[serde(serialize_with = "crate::ramification::ser_rational")]
    pub theta: Rational,
    pub integral: bool,
    #[serde(serialize_with = "crate::ramification::ser_rational")]
    pub theta1: Rational,
    #[serde(serialize_with = "crate::ramification::ser_rational")]
    pub theta2: Rational,
    #[serde(serialize_with = "crate::ramification::ser_rational")]
    pub theta3: Rational,
    #[serde(serialize_with = "crate::ramification::ser_rational")]
    pub theta4: Rational,
}

/// `Θ(n) = (Θ₁(n) + 4∏Θ₂ + 6∏Θ₃ + 12∏Θ₄)/72`, evaluated exactly as written.
/// `theta2..theta4` hold the products over the prime powers of `n`.
pub fn theta_gjt(n: u64) -> Result<Theta> {
    require_coprime_to_six(n)?;
    let fac = factorize(n);
    let r = |x: i128, y: i128| Rational::new(x, y);
    let one = Rational::from_integer(1);
    let mut t1 = Rational::from_integer((n as i128).pow(4));
    let (mut t2, mut t3, mut t4) = (one, one, one);
    for &(p, e) in &fac {
        let p = p as i128;
        let q2 = Rational::from_integer(p.pow(2 * e));
        t1 *= (one - r(1, p)) * (one - r(2, p)) * (one - r(3, p)) * (one - r(4, p));
        t2 *= if p % 4 == 1 { q2 * (one - r(1, p)) * (one - r(2, p)) } else { q2 * (one - r(1, p)) * (one - r(4, p)) };
        t3 *= q2 * (one - r(3, p)) * (one - r(5, p));
        t4 *= Rational::from_integer(if p % 3 == 1 { 2 } else { 0 });
    }
    let theta = (t1 + t2 * 4 + t3 * 6 + t4 * 12) / 72;
    Ok(Theta { n, theta, integral: theta.is_integer(), theta1: t1, theta2: t2, theta3: t3, theta4: t4 })
}

/// `N_n/72 ≤ h ≤ N_n/6`.
pub fn bounds_check(n: u64, h: u64) -> Result<bool> {
    let nn = n_count(n)? as i128;
    let h = Rational::from_integer(h as i128);
    Ok(Rational::new(nn, 72) <= h && h <= Rational::new(nn, 6))
}

/// `χ = (n−3)²/4` of the surface with group `(Z/n)²` and types `(0|n,n,n)`.
pub fn beauville_chi(n: u64) -> Rational {
    let m = n as i128 - 3;
    Rational::new(m * m, 4)
}

/// The six matrices re-basing a permuted standard basis `(x₁, x₂, −x₁−x₂)`,
/// as printed. Row-major `[[m00, m01], [m10, m11]]` acting on column vectors.
pub const SIX_MATRICES: [[[i64; 2]; 2]; 6] = [
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[-1, 0], [-1, 1]],
    [[1, -1], [0, -1]],
    [[-1, 1], [-1, 0]],
    [[0, -1], [1, -1]],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrupleClasses {
    pub n: u64,
    pub quadruples: u64,
    /// Classes under permuting either triple.
    pub classes_without_swap: u64,
    pub min_orbit: u64,
    pub max_orbit: u64,
    /// Classes once the two triples may also be exchanged.
    pub classes: u64,
}

/// Classes of quadruples `(a, b, c, d)` (second triple `(a,b), (c,d),
/// −(a+c, b+d)` against the standard first triple) under the two `S₃`
/// actions and the exchange of triples. An independent route to `h` for
/// `(Z/n)²`, `(0|n,n,n)`.
pub fn quadruple_classes(n: u64) -> Result<QuadrupleClasses> {
    require_coprime_to_six(n)?;
    let m = n as i64;
    let md = |x: i64| x.rem_euclid(m);
    let idx = |q: [i64; 4]| ((md(q[0]) * m + md(q[1])) * m + md(q[2])) * m + md(q[3]);
    let total = (m * m * m * m) as usize;
    let mut valid = vec![false; total];
    let mut quads = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if beauville_quadruple_check(n, a, b, c, d) {
                        valid[idx([a, b, c, d]) as usize] = true;
                        quads.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let inv = |x: i64| -> i64 {
        let x = md(x);
        (1..m).find(|&y| (x * y).rem_euclid(m) == 1).expect("unit")
    };
    let apply = |mat: &[[i64; 2]; 2], v: (i64, i64)| (md(mat[0][0] * v.0 + mat[0][1] * v.1), md(mat[1][0] * v.0 + mat[1][1] * v.1));
    let y_perms = |q: [i64; 4]| -> Vec<[i64; 4]> {
        let y = [(q[0], q[1]), (q[2], q[3]), (md(-q[0] - q[2]), md(-q[1] - q[3]))];
        [[0, 1], [1, 0], [1, 2], [2, 1], [0, 2], [2, 0]]
            .iter()
            .map(|&[i, j]| [y[i].0, y[i].1, y[j].0, y[j].1])
            .collect()
    };
    let x_moves = |q: [i64; 4]| -> Vec<[i64; 4]> {
        SIX_MATRICES
            .iter()
            .map(|mat| {
                let (a, b) = apply(mat, (q[0], q[1]));
                let (c, d) = apply(mat, (q[2], q[3]));
                [a, b, c, d]
            })
            .collect()
    };
    // exchange: coordinates of x₁, x₂ in the basis y₁ = (a, b), y₂ = (c, d)
    let exchange = |q: [i64; 4]| -> [i64; 4] {
        let [a, b, c, d] = q;
        let di = inv(a * d - b * c);
        // inverse of the matrix with columns (a,b), (c,d)
        let m_inv = [[md(d * di), md(-c * di)], [md(-b * di), md(a * di)]];
        let (p, q1) = apply(&m_inv, (1, 0));
        let (r, s) = apply(&m_inv, (0, 1));
        [p, q1, r, s]
    };
    let pos: std::collections::HashMap<i64, u32> = quads.iter().enumerate().map(|(i, &q)| (idx(q), i as u32)).collect();
    let find = |q: [i64; 4]| -> Result<u32> {
        pos.get(&idx(q)).copied().ok_or_else(|| Error::Invariant(format!("{q:?} left the valid quadruples")))
    };
    let mut uf = UnionFind::new(quads.len());
    for (i, &q) in quads.iter().enumerate() {
        for p in y_perms(q).into_iter().chain(x_moves(q)) {
            uf.union(i as u32, find(p)?);
        }
    }
    let roots = uf.labels();
    let mut sizes = std::collections::BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_insert(0u64) += 1;
    }
    let classes_without_swap = sizes.len() as u64;
    let min_orbit = sizes.values().copied().min().unwrap_or(0);
    let max_orbit = sizes.values().copied().max().unwrap_or(0);
    for (i, &q) in quads.iter().enumerate() {
        uf.union(i as u32, find(exchange(q))?);
    }
    let classes = uf.labels().into_iter().collect::<HashSet<_>>().len() as u64;
    Ok(QuadrupleClasses { n, quadruples: quads.len() as u64, classes_without_swap, min_orbit, max_orbit, classes })
}

/// Invariant-factor chains of every abelian group of order `≤ max_order`.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<Vec<u64>> {
    fn chains(order: u64, min_first: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, max_order: u64) {
        // extend n₁ | n₂ | ⋯ with each new factor a multiple of the last
        let last = cur.last().copied().unwrap_or(1);
        out.push(cur.clone());
        let mut next = if cur.is_empty() { min_first } else { last };
        while order * next <= max_order {
            if next % last == 0 && next > 1 {
                cur.push(next);
                chains(order * next, min_first, out, cur, max_order);
                cur.pop();
            }
            next += if cur.is_empty() { 1 } else { last };
        }
    }
    let mut out = Vec::new();
    chains(1, 2, &mut out, &mut Vec::new(), max_order);
    out.sort_by_key(|c| (c.iter().product::<u64>(), c.clone()));
    out
}

/// Existence by exhaustive search: some pair of generating systems of sizes
/// `(r₁, r₂)` with `g′ = 0`, hyperbolic types and disjoint Σ-sets.
///
/// In an abelian group a system is a multiset of `r` nonzero elements summing
/// to zero, and Σ is the union of the cyclic subgroups `⟨cᵢ⟩`; two Σ-sets meet
/// outside the identity exactly when they share a subgroup of prime order.
/// So each system is reduced to a mask of prime-order subgroups.
pub struct AbelianOracle {
    pub moduli: Vec<u64>,
    order: usize,
    digits: Vec<Vec<u64>>,
    elem_order: Vec<u64>,
    masks: Vec<u128>,
    primes: Vec<u64>,
}

impl AbelianOracle {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        let order: u64 = moduli.iter().product();
        let n = order as usize;
        let decode = |mut i: usize| -> Vec<u64> {
            let mut v = vec![0; moduli.len()];
            for k in (0..moduli.len()).rev() {
                v[k] = (i % moduli[k] as usize) as u64;
                i /= moduli[k] as usize;
            }
            v
        };
        let digits: Vec<Vec<u64>> = (0..n).map(decode).collect();
        let elem_order: Vec<u64> = digits
            .iter()
            .map(|v| v.iter().zip(moduli).map(|(&x, &m)| m / num_integer::gcd(x, m)).fold(1, num_integer::lcm))
            .collect();
        let encode = |v: &[u64]| v.iter().zip(moduli).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize);
        // prime-order subgroups, each named by its least nonzero element
        let mut sub_id = vec![u32::MAX; n];
        let mut count = 0u32;
        for x in 1..n {
            let p = elem_order[x];
            if factorize(p).len() != 1 || factorize(p)[0].1 != 1 || sub_id[x] != u32::MAX {
                continue;
            }
            for k in 1..p {
                let y: Vec<u64> = digits[x].iter().zip(moduli).map(|(&d, &m)| d * k % m).collect();
                sub_id[encode(&y)] = count;
            }
            count += 1;
        }
        if count > 128 {
            return Err(Error::TooLarge { order: order as u128, what: "prime-order subgroup masks" });
        }
        let masks = (0..n)
            .map(|x| {
                let mut m = 0u128;
                let o = elem_order[x];
                for (p, _) in factorize(o) {
                    // ⟨x⟩ contains exactly one subgroup of order p: ⟨(o/p)·x⟩
                    let y: Vec<u64> = digits[x].iter().zip(moduli).map(|(&d, &md)| d * (o / p) % md).collect();
                    m |= 1u128 << sub_id[encode(&y)];
                }
                m
            })
            .collect();
        let primes = factorize(order).into_iter().map(|(p, _)| p).collect();
        Ok(AbelianOracle { moduli: moduli.to_vec(), order: n, digits, elem_order, masks, primes })
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let mut acc = 0usize;
        for (k, &m) in self.moduli.iter().enumerate() {
            acc = acc * m as usize + ((self.digits[x][k] + self.digits[y][k]) % m) as usize;
        }
        acc
    }

    fn neg(&self, x: usize) -> usize {
        let mut acc = 0usize;
        for (k, &m) in self.moduli.iter().enumerate() {
            acc = acc * m as usize + ((m - self.digits[x][k]) % m) as usize;
        }
        acc
    }

    /// Generation: the images in every `G/pG` span it. `G/pG ≅ F_p^k` with
    /// `k` the number of invariant factors divisible by `p`.
    fn generates(&self, xs: &[usize]) -> bool {
        for &p in &self.primes {
            let cols: Vec<usize> = (0..self.moduli.len()).filter(|&k| self.moduli[k] % p == 0).collect();
            let mut rows: Vec<Vec<u64>> = xs.iter().map(|&x| cols.iter().map(|&k| self.digits[x][k] % p).collect()).collect();
            let mut rank = 0;
            for c in 0..cols.len() {
                let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
                    continue;
                };
                rows.swap(rank, piv);
                let inv = (1..p).find(|&y| rows[rank][c] * y % p == 1).unwrap();
                for v in rows[rank].iter_mut() {
                    *v = *v * inv % p;
                }
                for i in 0..rows.len() {
                    if i != rank && rows[i][c] != 0 {
                        let f = rows[i][c];
                        for cc in 0..cols.len() {
                            rows[i][cc] = (rows[i][cc] + p * p - f * rows[rank][cc] % p) % p;
                        }
                    }
                }
                rank += 1;
            }
            if rank < cols.len() {
                return false;
            }
        }
        true
    }

    /// Distinct Σ-masks of generating hyperbolic systems with `r` branch
    /// points and an integral covering genus.
    pub fn masks(&self, r: usize) -> HashSet<u128> {
        let mut out = HashSet::new();
        if self.order == 1 || r < 1 {
            return out;
        }
        let mut cur = Vec::with_capacity(r);
        self.dfs(r, 1, 0, &mut cur, &mut out);
        out
    }

    fn dfs(&self, r: usize, from: usize, sum: usize, cur: &mut Vec<usize>, out: &mut HashSet<u128>) {
        if cur.len() == r - 1 {
            let last = self.neg(sum);
            if last == 0 || last < *cur.last().unwrap_or(&1) {
                return;
            }
            cur.push(last);
            // |G|·area is an integer since every period divides |G|; the
            // genus is 1 + |G|·area/2
            let n = self.order as i64;
            let scaled: i64 = cur.iter().map(|&x| n - n / self.elem_order[x] as i64).sum::<i64>() - 2 * n;
            if scaled > 0 && scaled % 2 == 0 && self.generates(cur) {
                out.insert(cur.iter().fold(0u128, |m, &x| m | self.masks[x]));
            }
            cur.pop();
            return;
        }
        for x in from..self.order {
            cur.push(x);
            self.dfs(r, x, self.add(sum, x), cur, out);
            cur.pop();
        }
    }
}

/// Brute-force existence verdict for all `(r₁, r₂)` in `sizes × sizes`.
pub fn brute_force_existence(moduli: &[u64], sizes: &[usize]) -> Result<Vec<(usize, usize, bool)>> {
    let oracle = AbelianOracle::new(moduli)?;
    let masks: Vec<Vec<u128>> = sizes.iter().map(|&r| oracle.masks(r).into_iter().collect()).collect();
    let mut out = Vec::new();
    for (i, &r1) in sizes.iter().enumerate() {
        for (j, &r2) in sizes.iter().enumerate() {
            let found = masks[i].iter().any(|&a| masks[j].iter().any(|&b| a & b == 0));
            out.push((r1, r2, found));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(m: &[u64]) -> AbelianProfile {
        AbelianProfile::new(m).unwrap()
    }

    #[test]
    fn profile_conventions() {
        let p = prof(&[12, 2]);
        assert_eq!(p.moduli, vec![2, 12]);
        assert_eq!((p.n(0), p.n(-1), p.n(2)), (1, 1, 12));
        assert_eq!((p.l(2, 2), p.l(1, 2), p.l(0, 2)), (2, 1, 0));
    }

    #[test]
    fn existence_examples() {
        assert!(admits_unmixed_abelian(&prof(&[5, 5]), 3, 3).unwrap().admits);
        for n in [2, 7, 12, 30] {
            for (r1, r2) in [(3, 3), (4, 5), (6, 6)] {
                assert!(!admits_unmixed_abelian(&prof(&[n]), r1, r2).unwrap().admits);
            }
        }
        assert!(!admits_unmixed_abelian(&prof(&[3, 3]), 3, 3).unwrap().admits);
        assert!(admits_unmixed_abelian(&prof(&[3, 3]), 4, 4).unwrap().admits);
        assert!(matches!(admits_unmixed_abelian(&prof(&[5, 5]), 2, 3), Err(Error::TooSmall { .. })));
        let v = admits_unmixed_abelian(&prof(&[3, 3]), 3, 3).unwrap();
        let failing: Vec<_> = v.clauses.iter().filter(|c| !c.holds).map(|c| c.clause).collect();
        assert_eq!(failing, vec!["l_(t-1)(3) > l_(t-2)(3) => r1, r2 >= 4"]);
    }

    #[test]
    fn quadruples() {
        assert!(beauville_quadruple_check(5, 1, 2, 3, 4));
        for c in 0..5 {
            for d in 0..5 {
                assert!(!beauville_quadruple_check(5, 1, 1, c, d));
            }
        }
        assert_eq!(count_quadruples(5).unwrap(), 24);
        assert_eq!(n_count(5).unwrap(), 24);
        assert_eq!(n_count(7).unwrap(), 360);
        assert_eq!(n_count(25).unwrap(), 15000);
        assert!(matches!(n_count(9), Err(Error::NotCoprimeToSix(9))));
    }

    #[test]
    fn theta_values() {
        let t = theta_gjt(5).unwrap();
        assert_eq!(t.theta, Rational::from_integer(1));
        assert_eq!((t.theta1, t.theta2, t.theta3, t.theta4), (24.into(), 12.into(), 0.into(), 0.into()));
        assert_eq!(theta_gjt(7).unwrap().theta, Rational::from_integer(7));
        assert_eq!(theta_gjt(35).unwrap().theta, Rational::from_integer(132));
        let t11 = theta_gjt(11).unwrap();
        assert_eq!(t11.theta, Rational::new(5608, 72));
        assert!(!t11.integral);
        assert_eq!(theta_gjt(13).unwrap().theta, Rational::new(12912, 72));
    }

    #[test]
    fn sandwich() {
        assert!(bounds_check(5, 1).unwrap());
        assert!(bounds_check(7, 7).unwrap());
        assert!(!bounds_check(7, 100).unwrap());
        assert_eq!(beauville_chi(5), Rational::from_integer(1));
    }

    #[test]
    fn six_matrices_rebase_permuted_bases() {
        // inverse of the matrix whose columns are a permuted pair from (e₁, e₂, −e₁−e₂)
        let basis = [(1i64, 0i64), (0, 1), (-1, -1)];
        let mut derived = Vec::new();
        for &(i, j) in &[(0, 1), (1, 0), (2, 1), (0, 2), (1, 2), (2, 0)] {
            let (u, v) = (basis[i], basis[j]);
            let det = u.0 * v.1 - v.0 * u.1;
            derived.push([[v.1 * det, -v.0 * det], [-u.1 * det, u.0 * det]]);
        }
        let mut printed = SIX_MATRICES.to_vec();
        derived.sort();
        printed.sort();
        assert_eq!(derived, printed);
    }

    #[test]
    fn quadruple_classes_small() {
        let q = quadruple_classes(5).unwrap();
        assert_eq!(q.quadruples, 24);
        assert_eq!(q.classes, 1);
        let q = quadruple_classes(7).unwrap();
        assert_eq!(q.classes, 7);
        assert!(q.min_orbit >= 6 && q.max_orbit <= 36);
    }

    #[test]
    fn group_listing() {
        let gs = abelian_groups_up_to(16);
        assert_eq!(gs.iter().filter(|c| c.iter().product::<u64>() == 16).count(), 5);
        assert_eq!(gs.iter().filter(|c| c.iter().product::<u64>() == 12).count(), 2);
        assert_eq!(gs[0], Vec::<u64>::new());
        let all = abelian_groups_up_to(100);
        assert_eq!(all.iter().filter(|c| c.iter().product::<u64>() == 64).count(), 11);
    }

    #[test]
    fn oracle_small_cases() {
        let r = brute_force_existence(&[5, 5], &[3]).unwrap();
        assert_eq!(r, vec![(3, 3, true)]);
        let r = brute_force_existence(&[3, 3], &[3, 4]).unwrap();
        assert_eq!(r, vec![(3, 3, false), (3, 4, false), (4, 3, false), (4, 4, true)]);
        let r = brute_force_existence(&[7], &[3, 4]).unwrap();
        assert!(r.iter().all(|x| !x.2));
    }
}
