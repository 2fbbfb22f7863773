//! The mapping class group action on systems of generators.
//!
//! Indices are 1-based as in the move names. Writing `P_j = ∏_{k≤j}[a_k, b_k]`
//! and `N_d = c_{d+1}⋯c_r`, the long relation `c₁⋯c_r · P_{g′} = 1` is
//! preserved by every rule below, and each rule has a closed-form inverse.
//!
//! | move        | rule |
//! |-------------|------|
//! | `delta:j`   | `a_j ↦ a_j b_j⁻¹` |
//! | `delta~:j`  | `b_j ↦ b_j a_j` |
//! | `sigma:h`   | `(c_h, c_{h+1}) ↦ (c_{h+1}, c_{h+1}⁻¹ c_h c_{h+1})` |
//! | `tau:k`     | `a_k ↦ a_k η⁻¹`, `b_k ↦ η b_k η⁻¹`, `a_{k+1} ↦ η a_{k+1}` with `η = b_k⁻¹ a_{k+1} b_{k+1} a_{k+1}⁻¹` |
//! | `xi1:j,d`   | `a_j ↦ χ a_j`, `c_d ↦ ε c_d ε⁻¹` |
//! | `xi2:j,d`   | `b_j ↦ a_j⁻¹ χ a_j b_j`, `c_d ↦ ε′ c_d ε′⁻¹` |
//!
//! where `δ = N_d · P_{j−1}`, `χ = δ⁻¹ c_d δ`, `ε = c_d · δ (a_j b_j a_j⁻¹) δ⁻¹`
//! and `ε′ = c_d · δ [a_j, b_j] a_j⁻¹ δ⁻¹`. For `d = r` these are the
//! familiar point-push words with `N_r = 1`.
//!
//! [`MoveTable::Literal`] keeps the historical transcription of the table
//! (`a_{k+1} ↦ η a_k` for `tau`, and `P_j` in place of `δ` inside `ε`, `ε′`).
//! It does not preserve the long relation and exists so the property suite
//! can show that.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{self, Convention, Group, GroupElement, GroupSpec};
use crate::ramification::GeneratorSystem;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Braid,
    Delta,
    DeltaTilde,
    Tau,
    Xi1,
    Xi2,
}

/// A move with its 1-based index (and `d` for the ξ-twists).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveId {
    pub kind: MoveKind,
    pub index: usize,
    /// Puncture index for `Xi1`/`Xi2`, zero otherwise.
    pub d: usize,
    pub inverse: bool,
}

impl MoveId {
    pub fn braid(h: usize) -> Self {
        MoveId { kind: MoveKind::Braid, index: h, d: 0, inverse: false }
    }
    pub fn delta(j: usize) -> Self {
        MoveId { kind: MoveKind::Delta, index: j, d: 0, inverse: false }
    }
    pub fn delta_tilde(j: usize) -> Self {
        MoveId { kind: MoveKind::DeltaTilde, index: j, d: 0, inverse: false }
    }
    pub fn tau(k: usize) -> Self {
        MoveId { kind: MoveKind::Tau, index: k, d: 0, inverse: false }
    }
    pub fn xi1(j: usize, d: usize) -> Self {
        MoveId { kind: MoveKind::Xi1, index: j, d, inverse: false }
    }
    pub fn xi2(j: usize, d: usize) -> Self {
        MoveId { kind: MoveKind::Xi2, index: j, d, inverse: false }
    }

    pub fn inverted(self) -> Self {
        MoveId { inverse: !self.inverse, ..self }
    }

    pub fn is_valid_for(&self, gprime: usize, r: usize) -> bool {
        let (i, d) = (self.index, self.d);
        match self.kind {
            MoveKind::Braid => (1..r).contains(&i),
            MoveKind::Delta | MoveKind::DeltaTilde => (1..=gprime).contains(&i),
            MoveKind::Tau => (1..gprime).contains(&i),
            MoveKind::Xi1 | MoveKind::Xi2 => (1..=gprime).contains(&i) && (1..=r).contains(&d),
        }
    }
}

impl fmt::Display for MoveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Braid => write!(f, "sigma:{}", self.index)?,
            MoveKind::Delta => write!(f, "delta:{}", self.index)?,
            MoveKind::DeltaTilde => write!(f, "delta~:{}", self.index)?,
            MoveKind::Tau => write!(f, "tau:{}", self.index)?,
            MoveKind::Xi1 => write!(f, "xi1:{},{}", self.index, self.d)?,
            MoveKind::Xi2 => write!(f, "xi2:{},{}", self.index, self.d)?,
        }
        if self.inverse {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl Serialize for MoveId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for MoveId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::MoveSyntax(text.to_string());
        let t = text.trim();
        let (t, inverse) = match t.strip_suffix('\'') {
            Some(s) => (s, true),
            None => (t, false),
        };
        let (name, args) = t.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let (kind, want) = match name {
            "sigma" => (MoveKind::Braid, 1),
            "delta" => (MoveKind::Delta, 1),
            "delta~" => (MoveKind::DeltaTilde, 1),
            "tau" => (MoveKind::Tau, 1),
            "xi1" => (MoveKind::Xi1, 2),
            "xi2" => (MoveKind::Xi2, 2),
            _ => return Err(bad()),
        };
        if nums.len() != want || nums.contains(&0) {
            return Err(bad());
        }
        Ok(MoveId { kind, index: nums[0], d: nums.get(1).copied().unwrap_or(0), inverse })
    }
}

/// Forward generators for `(g′, r)`, in a fixed order.
pub fn forward_moves(gprime: usize, r: usize) -> Result<Vec<MoveId>> {
    if gprime == 0 && r == 0 {
        return Err(Error::Degenerate);
    }
    let mut out = Vec::new();
    if gprime == 0 {
        out.extend((1..r).map(MoveId::braid));
        return Ok(out);
    }
    out.extend((1..=gprime).map(MoveId::delta));
    out.extend((1..=gprime).map(MoveId::delta_tilde));
    if gprime == 1 && r <= 1 {
        return Ok(out);
    }
    out.extend((1..gprime).map(MoveId::tau));
    out.extend((1..r).map(MoveId::braid));
    for j in 1..=gprime {
        for d in 1..=r {
            out.push(MoveId::xi1(j, d));
        }
    }
    for j in 1..=gprime {
        for d in 1..=r {
            out.push(MoveId::xi2(j, d));
        }
    }
    Ok(out)
}

/// Every forward move followed by every inverse move.
pub fn available_moves(gprime: usize, r: usize) -> Result<Vec<MoveId>> {
    let fwd = forward_moves(gprime, r)?;
    let inv: Vec<MoveId> = fwd.iter().map(|m| m.inverted()).collect();
    Ok(fwd.into_iter().chain(inv).collect())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum MoveTable {
    #[default]
    Corrected,
    Literal,
}

/// Auxiliary words of one move application.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveWords {
    pub eta: Option<GroupElement>,
    pub chi: Option<GroupElement>,
    pub epsilon: Option<GroupElement>,
    pub epsilon_prime: Option<GroupElement>,
}

struct Ctx<'a> {
    g: &'a Group,
    gprime: usize,
}

impl Ctx<'_> {
    fn a(&self, e: &[GroupElement], k: usize) -> GroupElement {
        e[2 * (k - 1)]
    }
    fn b(&self, e: &[GroupElement], k: usize) -> GroupElement {
        e[2 * (k - 1) + 1]
    }
    fn ci(&self, d: usize) -> usize {
        2 * self.gprime + d - 1
    }
    /// `P_j`.
    fn p(&self, e: &[GroupElement], j: usize) -> GroupElement {
        self.g.product((1..=j).map(|k| self.g.commutator(self.a(e, k), self.b(e, k))))
    }
    /// `N_d · P_{j−1}`.
    fn delta(&self, e: &[GroupElement], j: usize, d: usize) -> GroupElement {
        let r = e.len() - 2 * self.gprime;
        let n = self.g.product((d + 1..=r).map(|i| e[self.ci(i)]));
        self.g.mul(n, self.p(e, j - 1))
    }
    /// `x y x⁻¹`.
    fn by(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        let g = self.g;
        g.mul(g.mul(x, y), g.inv(x))
    }
}

/// Applies `m` in place to the entries of a system. The index must already be
/// valid for `(gprime, r)`.
pub fn apply_entries(g: &Group, gprime: usize, e: &mut [GroupElement], m: MoveId, table: MoveTable) -> Result<MoveWords> {
    let cx = Ctx { g, gprime };
    let mut words = MoveWords::default();
    let inv = |x| g.inv(x);
    let mul = |x, y| g.mul(x, y);
    match (m.kind, m.inverse) {
        (MoveKind::Delta, false) => {
            let j = 2 * (m.index - 1);
            e[j] = mul(e[j], inv(e[j + 1]));
        }
        (MoveKind::Delta, true) => {
            let j = 2 * (m.index - 1);
            e[j] = mul(e[j], e[j + 1]);
        }
        (MoveKind::DeltaTilde, false) => {
            let j = 2 * (m.index - 1);
            e[j + 1] = mul(e[j + 1], e[j]);
        }
        (MoveKind::DeltaTilde, true) => {
            let j = 2 * (m.index - 1);
            e[j + 1] = mul(e[j + 1], inv(e[j]));
        }
        (MoveKind::Braid, false) => {
            let h = cx.ci(m.index);
            let (x, y) = (e[h], e[h + 1]);
            e[h] = y;
            e[h + 1] = g.conjugate(x, y);
        }
        (MoveKind::Braid, true) => {
            let h = cx.ci(m.index);
            let (u, v) = (e[h], e[h + 1]);
            e[h] = cx.by(u, v);
            e[h + 1] = u;
        }
        (MoveKind::Tau, dir) => {
            if dir && table == MoveTable::Literal {
                return Err(Error::MoveSyntax(format!("{m}: the literal table has no inverse rules")));
            }
            let k = m.index;
            let (ak, bk, ak1, bk1) = (cx.a(e, k), cx.b(e, k), cx.a(e, k + 1), cx.b(e, k + 1));
            let eta = mul(mul(inv(bk), ak1), mul(bk1, inv(ak1)));
            words.eta = Some(eta);
            if !dir {
                e[2 * (k - 1)] = mul(ak, inv(eta));
                e[2 * (k - 1) + 1] = cx.by(eta, bk);
                e[2 * k] = match table {
                    MoveTable::Corrected => mul(eta, ak1),
                    MoveTable::Literal => mul(eta, ak),
                };
            } else {
                // η is the same word in the image, so use it directly
                e[2 * (k - 1)] = mul(ak, eta);
                e[2 * (k - 1) + 1] = g.conjugate(bk, eta);
                e[2 * k] = mul(inv(eta), ak1);
            }
        }
        (MoveKind::Xi1, dir) => {
            if dir && table == MoveTable::Literal {
                return Err(Error::MoveSyntax(format!("{m}: the literal table has no inverse rules")));
            }
            let (j, d) = (m.index, m.d);
            let (ai, ci) = (2 * (j - 1), cx.ci(d));
            let (a, b, c) = (e[ai], e[ai + 1], e[ci]);
            let lit = table == MoveTable::Literal;
            let delta = if lit { cx.p(e, j - 1) } else { cx.delta(e, j, d) };
            if !dir {
                let chi = g.conjugate(c, delta);
                let outer = if lit { cx.p(e, j) } else { delta };
                let eps = mul(c, cx.by(outer, cx.by(a, b)));
                e[ai] = mul(chi, a);
                e[ci] = cx.by(eps, c);
                words.chi = Some(chi);
                words.epsilon = Some(eps);
            } else {
                let chi_new = g.conjugate(c, delta);
                let u_new = cx.by(a, b);
                let chi = g.conjugate(chi_new, u_new);
                e[ai] = mul(inv(chi), a);
                e[ci] = cx.by(delta, chi);
                words.chi = Some(chi);
            }
        }
        (MoveKind::Xi2, dir) => {
            if dir && table == MoveTable::Literal {
                return Err(Error::MoveSyntax(format!("{m}: the literal table has no inverse rules")));
            }
            let (j, d) = (m.index, m.d);
            let (ai, ci) = (2 * (j - 1), cx.ci(d));
            let (a, b, c) = (e[ai], e[ai + 1], e[ci]);
            let lit = table == MoveTable::Literal;
            let delta = if lit { cx.p(e, j - 1) } else { cx.delta(e, j, d) };
            if !dir {
                let chi = g.conjugate(c, delta);
                let k = g.commutator(a, b);
                let eps_p = if lit {
                    let pj = cx.p(e, j);
                    mul(c, cx.by(pj, inv(a)))
                } else {
                    mul(c, mul(mul(delta, k), mul(inv(a), inv(delta))))
                };
                e[ai + 1] = mul(mul(inv(a), mul(chi, a)), b);
                e[ci] = cx.by(eps_p, c);
                words.chi = Some(chi);
                words.epsilon_prime = Some(eps_p);
            } else {
                let k_new = g.commutator(a, b);
                let chi_new = g.conjugate(c, delta);
                let chi = cx.by(mul(a, inv(k_new)), chi_new);
                e[ai + 1] = mul(mul(inv(a), mul(inv(chi), a)), b);
                e[ci] = cx.by(delta, chi);
                words.chi = Some(chi);
            }
        }
    }
    Ok(words)
}

fn check_index(v: &GeneratorSystem, m: MoveId) -> Result<()> {
    if !m.is_valid_for(v.gprime, v.r()) {
        return Err(Error::MoveIndex { mv: m.to_string(), gprime: v.gprime, r: v.r() });
    }
    Ok(())
}

pub fn apply_move(v: &GeneratorSystem, m: MoveId) -> Result<GeneratorSystem> {
    apply_move_with(v, m, MoveTable::Corrected)
}

pub fn apply_move_with(v: &GeneratorSystem, m: MoveId, table: MoveTable) -> Result<GeneratorSystem> {
    check_index(v, m)?;
    let mut out = v.clone();
    apply_entries(&v.group, v.gprime, &mut out.entries, m, table)?;
    Ok(out)
}

/// The auxiliary words a move evaluates on `v`.
pub fn move_words(v: &GeneratorSystem, m: MoveId) -> Result<MoveWords> {
    check_index(v, m)?;
    let mut scratch = v.entries.clone();
    apply_entries(&v.group, v.gprime, &mut scratch, m, MoveTable::Corrected)
}

/// Left-to-right composition.
pub fn apply_word(v: &GeneratorSystem, ms: &[MoveId]) -> Result<GeneratorSystem> {
    let mut out = v.clone();
    for &m in ms {
        check_index(&out, m)?;
        apply_entries(&v.group, v.gprime, &mut out.entries, m, MoveTable::Corrected)?;
    }
    Ok(out)
}

/// Applies every move (both directions) to sampled tuples satisfying the long
/// relation in `Sym(4)` with `(g′, r) = (2, 3)` and reports whether the
/// relation survives. Generation is irrelevant here.
pub fn relation_self_check(convention: Convention, samples: usize) -> std::result::Result<(), String> {
    use rand::{Rng, SeedableRng};
    let g = Arc::new(Group::with_convention(GroupSpec::Sym(4), convention).map_err(|e| e.to_string())?);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0ffee);
    let moves = available_moves(2, 3).expect("valid shape");
    for _ in 0..samples {
        let mut e: Vec<GroupElement> = (0..6).map(|_| GroupElement(rng.random_range(0..24))).collect();
        let p = g.mul(g.commutator(e[0], e[1]), g.commutator(e[2], e[3]));
        let c = g.mul(e[4], e[5]);
        e.push(g.mul(g.inv(c), g.inv(p)));
        let v = GeneratorSystem::new(g.clone(), 2, e);
        debug_assert!(v.relation_holds());
        for &m in &moves {
            let w = apply_move(&v, m).map_err(|e| e.to_string())?;
            if !w.relation_holds() {
                return Err(format!("{m} breaks the long relation on {v:?}"));
            }
        }
    }
    Ok(())
}

static CONVENTION_CHECK: OnceLock<std::result::Result<Convention, String>> = OnceLock::new();

/// Runs the relation self-check once per process under the current default
/// convention, flipping the global flag if it fails.
pub fn ensure_convention() -> Result<Convention> {
    CONVENTION_CHECK
        .get_or_init(|| {
            let first = group::default_convention();
            let other = match first {
                Convention::LeftFirst => Convention::RightFirst,
                Convention::RightFirst => Convention::LeftFirst,
            };
            match relation_self_check(first, 64) {
                Ok(()) => Ok(first),
                Err(e1) => match relation_self_check(other, 64) {
                    Ok(()) => {
                        group::set_default_convention(other);
                        Ok(other)
                    }
                    Err(e2) => Err(format!("{e1}; {e2}")),
                },
            }
        })
        .clone()
        .map_err(Error::ConventionSelfCheck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn grp(s: &str) -> Arc<Group> {
        Arc::new(parse_group_spec(s).unwrap())
    }

    #[test]
    fn move_counts() {
        assert_eq!(forward_moves(0, 3).unwrap().len(), 2);
        assert_eq!(forward_moves(1, 1).unwrap().len(), 2);
        assert_eq!(forward_moves(2, 3).unwrap().len(), 19);
        assert_eq!(forward_moves(1, 2).unwrap().iter().filter(|m| m.kind == MoveKind::Tau).count(), 0);
        assert_eq!(available_moves(0, 3).unwrap().len(), 4);
        assert!(matches!(forward_moves(0, 0), Err(Error::Degenerate)));
    }

    #[test]
    fn names_roundtrip() {
        for m in available_moves(2, 3).unwrap() {
            assert_eq!(m.to_string().parse::<MoveId>().unwrap(), m);
        }
        assert_eq!("xi1:1,3".parse::<MoveId>().unwrap(), MoveId::xi1(1, 3));
        assert_eq!("delta~:1'".parse::<MoveId>().unwrap(), MoveId::delta_tilde(1).inverted());
        assert!("xi1:1".parse::<MoveId>().is_err());
        assert!("sigma:0".parse::<MoveId>().is_err());
        assert!("twist:1".parse::<MoveId>().is_err());
    }

    #[test]
    fn braid_on_sym3() {
        let g = grp("Sym:3");
        let v = GeneratorSystem::from_labels(g.clone(), 0, &["(0 1)", "(0 2)", "(0 2 1)"]).unwrap();
        let w = apply_move(&v, MoveId::braid(1)).unwrap();
        assert_eq!(w.labels(), vec!["(0 2)", "(1 2)", "(0 2 1)"]);
    }

    #[test]
    fn abelian_specialisations() {
        let z = grp("Zn:5,5");
        let v = GeneratorSystem::from_labels(z.clone(), 0, &["(1,0)", "(0,1)", "(4,4)"]).unwrap();
        let w = apply_move(&v, MoveId::braid(1)).unwrap();
        assert_eq!(w.labels(), vec!["(0,1)", "(1,0)", "(4,4)"]);
        let z2 = grp("Zn:2");
        let v = GeneratorSystem::from_labels(z2, 1, &["(1)", "(0)", "(1)", "(1)"]).unwrap();
        let w = apply_move(&v, MoveId::delta_tilde(1)).unwrap();
        assert_eq!(w.labels(), vec!["(1)", "(1)", "(1)", "(1)"]);
    }

    #[test]
    fn index_errors() {
        let z = grp("Zn:5,5");
        let v = GeneratorSystem::from_labels(z, 0, &["(1,0)", "(0,1)", "(4,4)"]).unwrap();
        assert!(matches!(apply_move(&v, MoveId::braid(3)), Err(Error::MoveIndex { .. })));
        assert!(matches!(apply_move(&v, MoveId::delta(1)), Err(Error::MoveIndex { .. })));
        assert_eq!(apply_word(&v, &[]).unwrap(), v);
    }

    #[test]
    fn corrected_table_preserves_relation_both_conventions() {
        relation_self_check(Convention::LeftFirst, 200).unwrap();
        relation_self_check(Convention::RightFirst, 200).unwrap();
        assert_eq!(ensure_convention().unwrap(), Convention::LeftFirst);
    }

    #[test]
    fn moves_invert() {
        use rand::{Rng, SeedableRng};
        let g = grp("Sym:4");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (gp, r) in [(1, 1), (1, 2), (2, 2), (3, 3), (0, 4)] {
            for _ in 0..50 {
                let free = 2 * gp + r - 1;
                let mut e: Vec<GroupElement> = (0..free).map(|_| GroupElement(rng.random_range(0..24))).collect();
                let p = g.product((0..gp).map(|k| g.commutator(e[2 * k], e[2 * k + 1])));
                let c = g.product(e[2 * gp..].iter().copied());
                e.push(g.mul(g.inv(c), g.inv(p)));
                let v = GeneratorSystem::new(g.clone(), gp, e);
                for m in available_moves(gp, r).unwrap() {
                    let w = apply_move(&v, m).unwrap();
                    assert!(w.relation_holds(), "{m}");
                    assert_eq!(apply_move(&w, m.inverted()).unwrap(), v, "{m}");
                }
            }
        }
    }

    #[test]
    fn literal_table_breaks_the_relation() {
        use rand::{Rng, SeedableRng};
        let g = grp("Sym:4");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut broken = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let mut e: Vec<GroupElement> = (0..6).map(|_| GroupElement(rng.random_range(0..24))).collect();
            let p = g.mul(g.commutator(e[0], e[1]), g.commutator(e[2], e[3]));
            let c = g.mul(e[4], e[5]);
            e.push(g.mul(g.inv(c), g.inv(p)));
            let v = GeneratorSystem::new(g.clone(), 2, e);
            for m in forward_moves(2, 3).unwrap() {
                if !apply_move_with(&v, m, MoveTable::Literal).unwrap().relation_holds() {
                    broken.insert(m.kind);
                }
            }
        }
        assert!(broken.contains(&MoveKind::Tau));
        assert!(broken.contains(&MoveKind::Xi1));
        assert!(broken.contains(&MoveKind::Xi2));
        assert!(!broken.contains(&MoveKind::Braid) && !broken.contains(&MoveKind::Delta));
    }
}
