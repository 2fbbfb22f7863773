//! Signature types, systems of generators, Σ-sets and surface invariants.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::Rational;

/// Default cap on the number of systems materialised per side.
pub const DEFAULT_SYSTEM_BUDGET: u64 = 10_000_000;

/// `(g′ | m₁,…,m_r)`. Periods are kept in the order given.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureType {
    pub gprime: usize,
    pub periods: Vec<u32>,
}

impl SignatureType {
    pub fn new(gprime: usize, periods: Vec<u32>) -> Result<Self> {
        if let Some(&m) = periods.iter().find(|&&m| m < 2) {
            return Err(Error::TooSmall { what: "period", min: 2, got: m as u64 });
        }
        Ok(SignatureType { gprime, periods })
    }

    pub fn r(&self) -> usize {
        self.periods.len()
    }

    /// Number of entries of a system of this type.
    pub fn width(&self) -> usize {
        2 * self.gprime + self.r()
    }

    /// `2g′ − 2 + Σ(1 − 1/mᵢ)`.
    pub fn area(&self) -> Rational {
        let mut a = Rational::from_integer(2 * self.gprime as i128 - 2);
        for &m in &self.periods {
            a += Rational::one() - Rational::new(1, m as i128);
        }
        a
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.area() > Rational::zero()
    }

    /// Same `g′`, periods sorted.
    pub fn unordered(&self) -> SignatureType {
        let mut periods = self.periods.clone();
        periods.sort_unstable();
        SignatureType { gprime: self.gprime, periods }
    }

    pub fn same_unordered(&self, other: &SignatureType) -> bool {
        self.unordered() == other.unordered()
    }

    /// Every distinct rearrangement of the periods, in lexicographic order.
    pub fn orderings(&self) -> Vec<SignatureType> {
        let mut p = self.unordered().periods;
        let mut out = vec![SignatureType { gprime: self.gprime, periods: p.clone() }];
        while next_permutation(&mut p) {
            out.push(SignatureType { gprime: self.gprime, periods: p.clone() });
        }
        out
    }

    pub fn is_triangle(&self) -> bool {
        self.gprime == 0 && self.r() == 3
    }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl fmt::Display for SignatureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.periods.iter().map(u32::to_string).collect();
        write!(f, "{}|{}", self.gprime, ps.join(","))
    }
}

impl Serialize for SignatureType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SignatureType {
    type Err = Error;

    /// `"g'|m1,m2,..."`; the period list may be empty.
    fn from_str(text: &str) -> Result<Self> {
        let err = |pos: usize, msg: &str| Error::TypeSpec { text: text.to_string(), pos, msg: msg.to_string() };
        let Some(bar) = text.find('|') else {
            return Err(err(0, "expected `g'|m1,m2,...`"));
        };
        let gprime = text[..bar].trim().parse().map_err(|_| err(0, "expected a non-negative genus"))?;
        let rest = &text[bar + 1..];
        let mut periods = Vec::new();
        if !rest.trim().is_empty() {
            let mut pos = bar + 1;
            for part in rest.split(',') {
                let m: u32 = part.trim().parse().map_err(|_| err(pos, "expected an integer period"))?;
                if m < 2 {
                    return Err(err(pos, "periods must be at least 2"));
                }
                periods.push(m);
                pos += part.len() + 1;
            }
        }
        Ok(SignatureType { gprime, periods })
    }
}

/// Genus `g` of the covering curve: `2g − 2 = |G|·(2g′ − 2 + Σ(1 − 1/mᵢ))`.
/// Returned exactly; integrality is for the caller to judge.
pub fn curve_genus(group_order: u64, tau: &SignatureType) -> Rational {
    Rational::one() + Rational::from_integer(group_order as i128) * tau.area() / Rational::from_integer(2)
}

/// `(a₁, b₁, …, a_{g′}, b_{g′}; c₁, …, c_r)` with
/// `c₁⋯c_r · ∏[a_k, b_k] = 1`.
#[derive(Clone)]
pub struct GeneratorSystem {
    pub group: Arc<Group>,
    pub gprime: usize,
    /// `a₁, b₁, …, a_{g′}, b_{g′}, c₁, …, c_r`.
    pub entries: Vec<GroupElement>,
}

impl PartialEq for GeneratorSystem {
    fn eq(&self, other: &Self) -> bool {
        self.gprime == other.gprime && self.entries == other.entries && *self.group == *other.group
    }
}

impl Eq for GeneratorSystem {}

impl fmt::Debug for GeneratorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl GeneratorSystem {
    pub fn new(group: Arc<Group>, gprime: usize, entries: Vec<GroupElement>) -> Self {
        assert!(entries.len() >= 2 * gprime);
        GeneratorSystem { group, gprime, entries }
    }

    /// From element labels in entry order.
    pub fn from_labels(group: Arc<Group>, gprime: usize, labels: &[&str]) -> Option<Self> {
        let entries = labels.iter().map(|l| group.parse_element(l)).collect::<Option<Vec<_>>>()?;
        (entries.len() >= 2 * gprime).then(|| GeneratorSystem { group, gprime, entries })
    }

    pub fn r(&self) -> usize {
        self.entries.len() - 2 * self.gprime
    }

    /// `a_k` for `1 ≤ k ≤ g′`.
    pub fn a(&self, k: usize) -> GroupElement {
        self.entries[2 * (k - 1)]
    }

    pub fn b(&self, k: usize) -> GroupElement {
        self.entries[2 * (k - 1) + 1]
    }

    /// `c_i` for `1 ≤ i ≤ r`.
    pub fn c(&self, i: usize) -> GroupElement {
        self.entries[2 * self.gprime + i - 1]
    }

    pub fn hyperbolic_pairs(&self) -> Vec<(GroupElement, GroupElement)> {
        (1..=self.gprime).map(|k| (self.a(k), self.b(k))).collect()
    }

    pub fn branch(&self) -> &[GroupElement] {
        &self.entries[2 * self.gprime..]
    }

    /// `c₁⋯c_r · ∏[a_k, b_k]`.
    pub fn long_relation(&self) -> GroupElement {
        let g = &self.group;
        let c = g.product(self.branch().iter().copied());
        let p = g.product(self.hyperbolic_pairs().into_iter().map(|(a, b)| g.commutator(a, b)));
        g.mul(c, p)
    }

    pub fn relation_holds(&self) -> bool {
        self.long_relation() == self.group.identity()
    }

    pub fn generates(&self) -> bool {
        self.group.generates(&self.entries)
    }

    pub fn branch_orders(&self) -> Vec<u32> {
        self.branch().iter().map(|&c| self.group.element_order(c)).collect()
    }

    /// The type this system realises, periods in position order.
    pub fn signature(&self) -> SignatureType {
        SignatureType { gprime: self.gprime, periods: self.branch_orders() }
    }

    /// Checks relation, branch orders `≥ 2` and generation; names the first
    /// failing clause.
    pub fn check(&self) -> std::result::Result<(), &'static str> {
        if !self.relation_holds() {
            return Err("long relation");
        }
        if self.branch_orders().iter().any(|&m| m < 2) {
            return Err("branch order");
        }
        if !self.generates() {
            return Err("generation");
        }
        Ok(())
    }

    pub fn apply_map(&self, map: impl Fn(GroupElement) -> GroupElement) -> GeneratorSystem {
        GeneratorSystem {
            group: self.group.clone(),
            gprime: self.gprime,
            entries: self.entries.iter().map(|&x| map(x)).collect(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|&x| self.group.label(x)).collect()
    }

    pub fn display(&self) -> String {
        let l = self.labels();
        let (h, c) = l.split_at(2 * self.gprime);
        format!("[{}; {}]", h.join(", "), c.join(", "))
    }
}

/// Systems of one width packed row-major, rows sorted lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemTable {
    pub gprime: usize,
    pub width: usize,
    pub data: Vec<u32>,
}

impl SystemTable {
    pub fn len(&self) -> usize {
        if self.width == 0 {
            self.data.len()
        } else {
            self.data.len() / self.width
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    /// Binary search for a row.
    pub fn find(&self, row: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(row) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn system(&self, group: &Arc<Group>, i: usize) -> GeneratorSystem {
        GeneratorSystem {
            group: group.clone(),
            gprime: self.gprime,
            entries: self.row(i).iter().map(|&x| GroupElement(x)).collect(),
        }
    }

    /// Every system of the unordered type of `tau`: the union over all
    /// distinct orderings of its periods.
    pub fn unordered(group: &Group, tau: &SignatureType, budget: u64) -> Result<SystemTable> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut total = 0u64;
        for t in tau.orderings() {
            let d = enumerate_packed(group, &t, budget.saturating_sub(total))?;
            total += (d.len() / t.width().max(1)) as u64;
            rows.push(d);
        }
        let width = tau.width();
        let mut data: Vec<u32> = rows.concat();
        if width > 0 && tau.orderings().len() > 1 {
            let mut idx: Vec<usize> = (0..data.len() / width).collect();
            idx.sort_unstable_by(|&i, &j| data[i * width..(i + 1) * width].cmp(&data[j * width..(j + 1) * width]));
            data = idx.iter().flat_map(|&i| data[i * width..(i + 1) * width].to_vec()).collect();
        }
        Ok(SystemTable { gprime: tau.gprime, width, data })
    }

    /// Systems of exactly this ordered type.
    pub fn ordered(group: &Group, tau: &SignatureType, budget: u64) -> Result<SystemTable> {
        Ok(SystemTable { gprime: tau.gprime, width: tau.width(), data: enumerate_packed(group, tau, budget)? })
    }
}

/// Enumerates every system of the ordered type `tau` in lexicographic order of
/// the entry indices. `a`, `b` and `c₁ … c_{r−1}` are free (the `cᵢ` among
/// elements of order `mᵢ`), `c_r` is solved from the long relation and then
/// filtered on its order and on generation.
///
/// A zero-width type (`g′ = 0`, `r = 0`) has no systems; the trivial group
/// with `(g′ | )`, `g′ ≥ 1`, has exactly one.
pub fn enumerate_packed(group: &Group, tau: &SignatureType, budget: u64) -> Result<Vec<u32>> {
    let width = tau.width();
    if width == 0 {
        return Ok(Vec::new());
    }
    let g = group;
    let free = 2 * tau.gprime;
    let mut choices: Vec<Vec<GroupElement>> = Vec::with_capacity(width);
    for _ in 0..free {
        choices.push(g.elements().collect());
    }
    for &m in &tau.periods {
        choices.push(g.elements().filter(|&x| g.element_order(x) == m).collect());
    }
    let last_period = tau.periods.last().copied();
    let produced = AtomicU64::new(0);
    let over = std::sync::atomic::AtomicBool::new(false);

    let shard = |first: GroupElement| -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![first];
        dfs(g, tau, &choices, free, last_period, &mut stack, &mut out, &produced, &over, budget);
        out
    };

    // only the final free or branch position is solved; shards split on the first chosen entry
    let solved = if tau.r() > 0 { 1 } else { 0 };
    let chosen = width - solved;
    let rows: Vec<u32> = if chosen == 0 {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        dfs(g, tau, &choices, free, last_period, &mut stack, &mut out, &produced, &over, budget);
        out
    } else {
        let parts: Vec<Vec<u32>> = choices[0].par_iter().map(|&x| shard(x)).collect();
        parts.concat()
    };
    if over.load(Ordering::Relaxed) {
        return Err(Error::Budget { what: "systems per side", limit: budget, reached: produced.load(Ordering::Relaxed) });
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &Group,
    tau: &SignatureType,
    choices: &[Vec<GroupElement>],
    free: usize,
    last_period: Option<u32>,
    stack: &mut Vec<GroupElement>,
    out: &mut Vec<u32>,
    produced: &AtomicU64,
    over: &std::sync::atomic::AtomicBool,
    budget: u64,
) {
    if over.load(Ordering::Relaxed) {
        return;
    }
    let width = free + tau.r();
    let solved = if tau.r() > 0 { 1 } else { 0 };
    if stack.len() == width - solved {
        let p = g.product((0..tau.gprime).map(|k| g.commutator(stack[2 * k], stack[2 * k + 1])));
        let c = g.product(stack[free..].iter().copied());
        if let Some(m) = last_period {
            // c₁⋯c_r · P = 1  ⇒  c_r = C⁻¹ P⁻¹ with C = c₁⋯c_{r−1}
            let cr = g.mul(g.inv(c), g.inv(p));
            if g.element_order(cr) != m {
                return;
            }
            stack.push(cr);
        } else if p != g.identity() {
            return;
        }
        if g.generates(stack) {
            out.extend(stack.iter().map(|x| x.0));
            if produced.fetch_add(1, Ordering::Relaxed) + 1 > budget {
                over.store(true, Ordering::Relaxed);
            }
        }
        if last_period.is_some() {
            stack.pop();
        }
        return;
    }
    for &x in &choices[stack.len()] {
        stack.push(x);
        dfs(g, tau, choices, free, last_period, stack, out, produced, over, budget);
        stack.pop();
    }
}

/// Every system of the ordered type `tau`, in lexicographic order.
pub fn enumerate_systems(group: &Arc<Group>, tau: &SignatureType) -> Result<Vec<GeneratorSystem>> {
    let t = SystemTable::ordered(group, tau, DEFAULT_SYSTEM_BUDGET)?;
    Ok((0..t.len()).map(|i| t.system(group, i)).collect())
}

/// Σ(V) as a set of conjugacy-class ids: classes met by some power of some
/// branch entry. Always contains the identity class.
pub fn sigma_classes(group: &Group, branch: &[GroupElement]) -> BitSet {
    let mut s = BitSet::new(group.class_count());
    s.insert(group.class_of(group.identity()) as usize);
    for &c in branch {
        s.union_with(group.power_classes(c));
    }
    s
}

/// `Σ(V)`: all conjugates of all powers of the branch entries, plus the
/// identity, in encoding order.
pub fn sigma_set(v: &GeneratorSystem) -> Vec<GroupElement> {
    let g = &v.group;
    let cls = sigma_classes(g, v.branch());
    g.elements().filter(|&x| cls.contains(g.class_of(x) as usize)).collect()
}

/// `Σ(V₁) ∩ Σ(V₂) = {1}`.
pub fn is_disjoint(v1: &GeneratorSystem, v2: &GeneratorSystem) -> Result<bool> {
    if *v1.group != *v2.group {
        return Err(Error::GroupMismatch);
    }
    let g = &v1.group;
    let (s1, s2) = (sigma_classes(g, v1.branch()), sigma_classes(g, v2.branch()));
    Ok(s1.intersection_count(&s2) == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationPair {
    pub first: GeneratorSystem,
    pub second: GeneratorSystem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub pass: bool,
    /// First failing clause, e.g. `"first: generation"` or `"disjointness"`.
    pub failed: Option<String>,
    #[serde(serialize_with = "ser_rational_pair")]
    pub genera: (Rational, Rational),
}

/// Checks both systems, disjointness and the two covering genera.
pub fn validate_pair(pair: &RamificationPair) -> PairReport {
    let n = pair.first.group.order() as u64;
    let genera = (curve_genus(n, &pair.first.signature()), curve_genus(n, &pair.second.signature()));
    let failed = (|| {
        if *pair.first.group != *pair.second.group {
            return Some("group mismatch".to_string());
        }
        for (side, v) in [("first", &pair.first), ("second", &pair.second)] {
            if let Err(c) = v.check() {
                return Some(format!("{side}: {c}"));
            }
        }
        if !is_disjoint(&pair.first, &pair.second).unwrap_or(false) {
            return Some("disjointness".to_string());
        }
        for (side, g) in [("first", genera.0), ("second", genera.1)] {
            if !g.is_integer() || g < Rational::from_integer(2) {
                return Some(format!("{side}: genus"));
            }
        }
        None
    })();
    PairReport { pass: failed.is_none(), failed, genera }
}

pub fn is_beauville(pair: &RamificationPair) -> bool {
    pair.first.gprime == 0 && pair.first.r() == 3 && pair.second.gprime == 0 && pair.second.r() == 3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub g1: i64,
    pub g2: i64,
    #[serde(serialize_with = "ser_rational")]
    pub chi: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ksq: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub e: Rational,
    pub q: u64,
    #[serde(serialize_with = "ser_rational")]
    pub pg: Rational,
    #[serde(serialize_with = "ser_rational_opt", skip_serializing_if = "Option::is_none")]
    pub mu1: Option<Rational>,
    #[serde(serialize_with = "ser_rational_opt", skip_serializing_if = "Option::is_none")]
    pub mu2: Option<Rational>,
}

/// Invariants of `(C₁ × C₂)/G` from the two types.
pub fn surface_invariants(group_order: u64, tau1: &SignatureType, tau2: &SignatureType) -> Result<SurfaceInvariants> {
    let genus = |side: &'static str, t: &SignatureType| -> Result<i64> {
        let g = curve_genus(group_order, t);
        if !g.is_integer() || g < Rational::from_integer(2) {
            return Err(Error::Genus { side, genus: g.to_string() });
        }
        Ok(g.to_integer() as i64)
    };
    let (g1, g2) = (genus("first", tau1)?, genus("second", tau2)?);
    let chi = Rational::new((g1 as i128 - 1) * (g2 as i128 - 1), group_order as i128);
    let q = (tau1.gprime + tau2.gprime) as u64;
    let mu = |t: &SignatureType| {
        (t.r() == 3).then(|| t.periods.iter().map(|&m| Rational::new(1, m as i128)).sum::<Rational>())
    };
    Ok(SurfaceInvariants {
        g1,
        g2,
        chi,
        ksq: chi * 8,
        e: chi * 4,
        q,
        pg: chi - 1 + Rational::from_integer(q as i128),
        mu1: mu(tau1),
        mu2: mu(tau2),
    })
}

/// Integers as JSON numbers, anything else as `"p/q"`.
pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_i64(r.to_integer() as i64)
    } else {
        s.collect_str(r)
    }
}

fn ser_rational_opt<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}

fn ser_rational_pair<S: Serializer>(r: &(Rational, Rational), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    struct R<'a>(&'a Rational);
    impl Serialize for R<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            ser_rational(self.0, s)
        }
    }
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&R(&r.0))?;
    t.serialize_element(&R(&r.1))?;
    t.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn grp(s: &str) -> Arc<Group> {
        Arc::new(parse_group_spec(s).unwrap())
    }

    fn ty(s: &str) -> SignatureType {
        s.parse().unwrap()
    }

    #[test]
    fn type_grammar() {
        assert_eq!(ty("0|5,5,5"), SignatureType { gprime: 0, periods: vec![5, 5, 5] });
        assert_eq!(ty("2|"), SignatureType { gprime: 2, periods: vec![] });
        assert_eq!(ty(" 1 | 2, 2 ").to_string(), "1|2,2");
        match "0|5,1".parse::<SignatureType>() {
            Err(Error::TypeSpec { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!("05,5".parse::<SignatureType>().is_err());
        assert_eq!(ty("0|3,2,2").orderings().len(), 3);
        assert_eq!(ty("0|2,3,4").orderings().len(), 6);
    }

    #[test]
    fn genera() {
        assert_eq!(curve_genus(25, &ty("0|5,5,5")), Rational::from_integer(6));
        assert_eq!(curve_genus(2, &ty("2|")), Rational::from_integer(3));
        assert_eq!(curve_genus(2, &ty("1|2,2")), Rational::from_integer(2));
        assert_eq!(curve_genus(3, &ty("0|2,2,2")), Rational::new(1, 4));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_systems(&grp("Zn:5,5"), &ty("0|5,5,5")).unwrap().len(), 480);
        assert_eq!(enumerate_systems(&grp("Zn:2"), &ty("1|2,2")).unwrap().len(), 4);
        assert_eq!(enumerate_systems(&grp("Sym:3"), &ty("0|2,2,3")).unwrap().len(), 6);
        assert_eq!(enumerate_systems(&grp("Zn:1"), &ty("2|")).unwrap().len(), 1);
        assert_eq!(SystemTable::unordered(&grp("Sym:3"), &ty("0|2,2,3"), 100).unwrap().len(), 18);
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let g = grp("Sym:4");
        let t = SystemTable::ordered(&g, &ty("0|2,3,4"), 1 << 20).unwrap();
        assert!(!t.is_empty());
        for i in 0..t.len() {
            if i > 0 {
                assert!(t.row(i - 1) < t.row(i));
            }
            let v = t.system(&g, i);
            assert_eq!(v.check(), Ok(()));
            assert_eq!(v.branch_orders(), vec![2, 3, 4]);
            assert_eq!(t.find(t.row(i)), Some(i));
        }
    }

    #[test]
    fn budget_is_reported() {
        let r = SystemTable::ordered(&grp("Zn:5,5"), &ty("0|5,5,5"), 10);
        assert!(matches!(r, Err(Error::Budget { limit: 10, .. })));
    }

    #[test]
    fn sigma_sets() {
        let z = grp("Zn:5,5");
        let v = GeneratorSystem::from_labels(z.clone(), 0, &["(1,0)", "(0,1)", "(4,4)"]).unwrap();
        assert_eq!(sigma_set(&v).len(), 13);
        let s3 = grp("Sym:3");
        let w = GeneratorSystem::from_labels(s3.clone(), 0, &["(0 1)", "(0 2)", "(0 2 1)"]).unwrap();
        assert!(w.relation_holds());
        assert_eq!(sigma_set(&w).len(), 6);
        let unram = GeneratorSystem::from_labels(grp("Zn:2"), 2, &["(1)", "(0)", "(0)", "(0)"]).unwrap();
        assert_eq!(sigma_set(&unram), vec![GroupElement(0)]);
    }

    #[test]
    fn disjointness() {
        let z = grp("Zn:5,5");
        let v1 = GeneratorSystem::from_labels(z.clone(), 0, &["(1,0)", "(0,1)", "(4,4)"]).unwrap();
        let v2 = GeneratorSystem::from_labels(z.clone(), 0, &["(1,2)", "(3,4)", "(1,4)"]).unwrap();
        assert!(v2.relation_holds());
        assert!(is_disjoint(&v1, &v2).unwrap());
        assert!(is_disjoint(&v2, &v1).unwrap());
        assert!(!is_disjoint(&v1, &v1).unwrap());
        let other = GeneratorSystem::from_labels(grp("Zn:5"), 0, &["(1)", "(4)"]).unwrap();
        assert!(matches!(is_disjoint(&v1, &other), Err(Error::GroupMismatch)));
    }

    #[test]
    fn pair_validation() {
        let z = grp("Zn:5,5");
        let v1 = GeneratorSystem::from_labels(z.clone(), 0, &["(1,0)", "(0,1)", "(4,4)"]).unwrap();
        let v2 = GeneratorSystem::from_labels(z.clone(), 0, &["(1,2)", "(3,4)", "(1,4)"]).unwrap();
        let p = RamificationPair { first: v1.clone(), second: v2.clone() };
        let rep = validate_pair(&p);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.genera, (Rational::from_integer(6), Rational::from_integer(6)));
        assert!(is_beauville(&p));
        let bad = RamificationPair { first: v1.clone(), second: v1 };
        assert_eq!(validate_pair(&bad).failed.as_deref(), Some("disjointness"));

        let z2 = grp("Zn:2");
        let a = GeneratorSystem::from_labels(z2.clone(), 1, &["(1)", "(0)", "(1)", "(1)"]).unwrap();
        let b = GeneratorSystem::from_labels(z2, 2, &["(1)", "(0)", "(0)", "(0)"]).unwrap();
        let p = RamificationPair { first: a, second: b };
        let rep = validate_pair(&p);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.genera, (Rational::from_integer(2), Rational::from_integer(3)));
        assert!(!is_beauville(&p));
    }

    #[test]
    fn invariants() {
        let s = surface_invariants(25, &ty("0|5,5,5"), &ty("0|5,5,5")).unwrap();
        assert_eq!(s.chi, Rational::one());
        assert_eq!((s.ksq, s.e, s.q), (Rational::from_integer(8), Rational::from_integer(4), 0));
        assert_eq!(s.mu1, Some(Rational::new(3, 5)));
        assert_eq!(Rational::from_integer(25) * (Rational::one() - s.mu1.unwrap()) * (Rational::one() - s.mu2.unwrap()), s.chi * 4);
        let s = surface_invariants(2, &ty("1|2,2"), &ty("2|")).unwrap();
        assert_eq!((s.chi, s.q, s.pg), (Rational::one(), 3, Rational::from_integer(3)));
        let s = surface_invariants(1, &ty("2|"), &ty("2|")).unwrap();
        assert_eq!((s.chi, s.q, s.pg), (Rational::one(), 4, Rational::from_integer(4)));
        assert!(matches!(surface_invariants(3, &ty("0|2,2,2"), &ty("2|")), Err(Error::Genus { side: "first", .. })));
        let json = serde_json::to_string(&surface_invariants(25, &ty("0|5,5,5"), &ty("0|5,5,5")).unwrap()).unwrap();
        assert!(json.contains("\"chi\":1") && json.contains("\"mu1\":\"3/5\""), "{json}");
    }
}
