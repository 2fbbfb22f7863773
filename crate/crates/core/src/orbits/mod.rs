//! Side orbits and the component count `h(G; τ₁, τ₂)`.
//!
//! Two pairs of systems lie in the same component when they are related by
//! moves and inner automorphisms on each side separately, by one automorphism
//! applied to both sides at once, and (for equal unordered types) by exchanging
//! the sides.
//!
//! The count runs in two stages. Each side is first partitioned into orbits;
//! Σ is constant on an orbit, so disjointness is decided once per pair of
//! orbit labels, and the diagonal automorphisms and the swap then act on the
//! disjoint label pairs. [`count_components_one_stage`] works on raw pairs
//! instead and serves as an oracle.

mod census;
mod union_find;

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use census::{scan_invariants, CensusRow, CensusTable};
pub use union_find::UnionFind;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{AutOptions, Automorphism, Group, GroupElement};
use crate::moves::{self, apply_entries, MoveId, MoveTable};
use crate::ramification::{sigma_classes, SignatureType, SystemTable, DEFAULT_SYSTEM_BUDGET};

/// Above this many automorphisms only the marked generators are applied.
pub const AUT_LIST_LIMIT: usize = 10_000;
/// Raw pair budget for the one-stage oracle.
pub const ONE_STAGE_PAIR_LIMIT: u64 = 1 << 26;

const CHUNK: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EquivalenceConfig {
    /// Conjugation per side. Always applied when `g′ > 0`.
    pub include_inn_per_side: bool,
    /// `None`: exchange the sides exactly when the unordered types agree.
    pub include_swap: Option<bool>,
    pub system_budget: u64,
    /// Use the full automorphism list up to this size, generators above.
    pub aut_list_limit: usize,
    pub max_group_order_for_aut: usize,
    pub representatives: bool,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            include_inn_per_side: true,
            include_swap: None,
            system_budget: DEFAULT_SYSTEM_BUDGET,
            aut_list_limit: AUT_LIST_LIMIT,
            max_group_order_for_aut: AutOptions::default().max_group_order,
            representatives: false,
        }
    }
}

impl EquivalenceConfig {
    fn inn_for(&self, tau: &SignatureType) -> bool {
        self.include_inn_per_side || tau.gprime > 0
    }

    pub fn swap_for(&self, tau1: &SignatureType, tau2: &SignatureType) -> bool {
        let same = tau1.same_unordered(tau2);
        same && self.include_swap.unwrap_or(true)
    }

    fn aut_options(&self) -> AutOptions {
        AutOptions { max_group_order: self.max_group_order_for_aut, ..AutOptions::default() }
    }
}

/// Every system of an unordered type, partitioned into orbits.
#[derive(Clone, Debug)]
pub struct SideOrbits {
    pub tau: SignatureType,
    pub table: SystemTable,
    /// Orbit ordinal of each system.
    pub orbit_of: Vec<u32>,
    /// Least system index of each orbit, increasing.
    pub leaders: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl SideOrbits {
    pub fn orbit_count(&self) -> usize {
        self.leaders.len()
    }

    pub fn system_count(&self) -> usize {
        self.table.len()
    }
}

#[derive(Clone, Copy, Debug)]
enum SideGen {
    Move(MoveId),
    Conj(GroupElement),
}

fn side_generators(g: &Group, tau: &SignatureType, inn: bool) -> Vec<SideGen> {
    let mut gens: Vec<SideGen> = match moves::forward_moves(tau.gprime, tau.r()) {
        Ok(ms) => ms.into_iter().map(SideGen::Move).collect(),
        Err(_) => Vec::new(),
    };
    if inn && !g.is_abelian_backend() {
        gens.extend(g.generators().iter().map(|&x| SideGen::Conj(x)));
    }
    gens
}

fn apply_gen(g: &Group, gprime: usize, row: &[u32], gen: SideGen) -> Vec<u32> {
    match gen {
        SideGen::Move(m) => {
            let mut e: Vec<GroupElement> = row.iter().map(|&x| GroupElement(x)).collect();
            apply_entries(g, gprime, &mut e, m, MoveTable::Corrected).expect("corrected moves are total");
            e.into_iter().map(|x| x.0).collect()
        }
        SideGen::Conj(c) => row.iter().map(|&x| g.conjugate(GroupElement(x), c).0).collect(),
    }
}

/// Index of every system's image under each generator, computed in parallel
/// chunks and handed to `sink` in order.
fn for_each_image(
    g: &Group,
    table: &SystemTable,
    gens: &[SideGen],
    mut sink: impl FnMut(usize, &[u32]) -> Result<()>,
) -> Result<()> {
    let n = table.len();
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let images: Vec<Vec<u32>> = (start..end)
            .into_par_iter()
            .map(|i| {
                gens.iter()
                    .map(|&gen| {
                        let img = apply_gen(g, table.gprime, table.row(i), gen);
                        table.find(&img).map(|j| j as u32).unwrap_or(u32::MAX)
                    })
                    .collect()
            })
            .collect();
        for (off, imgs) in images.iter().enumerate() {
            if imgs.contains(&u32::MAX) {
                return Err(Error::Invariant("a move or conjugation left the set of systems".into()));
            }
            sink(start + off, imgs)?;
        }
        start = end;
    }
    Ok(())
}

/// Partition of all systems of the unordered type of `tau` under the moves
/// (and conjugation, when configured). Orbits are labelled by their least
/// member in encoding order.
pub fn side_orbits(g: &Arc<Group>, tau: &SignatureType, config: &EquivalenceConfig) -> Result<SideOrbits> {
    side_orbits_with(g, tau, config.inn_for(tau), config.system_budget)
}

fn side_orbits_with(g: &Arc<Group>, tau: &SignatureType, inn: bool, budget: u64) -> Result<SideOrbits> {
    moves::ensure_convention()?;
    let table = SystemTable::unordered(g, tau, budget)?;
    let gens = side_generators(g, tau, inn);
    let mut uf = UnionFind::new(table.len());
    for_each_image(g, &table, &gens, |i, imgs| {
        for &j in imgs {
            uf.union(i as u32, j);
        }
        Ok(())
    })?;
    let roots = uf.labels();
    let mut ordinal = vec![u32::MAX; table.len()];
    let mut leaders = Vec::new();
    let mut sizes = Vec::new();
    let mut orbit_of = Vec::with_capacity(table.len());
    for (i, &r) in roots.iter().enumerate() {
        if r as usize == i {
            ordinal[i] = leaders.len() as u32;
            leaders.push(i as u32);
            sizes.push(0u64);
        }
        let o = ordinal[r as usize];
        orbit_of.push(o);
        sizes[o as usize] += 1;
    }
    Ok(SideOrbits { tau: tau.unordered(), table, orbit_of, leaders, sizes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub group: String,
    pub type1: SignatureType,
    pub type2: SignatureType,
    pub h: u64,
    /// Component sizes in pairs of systems, ordered by each component's least
    /// pair.
    pub orbit_sizes: Vec<u64>,
    pub total_pairs: u64,
    pub systems: [u64; 2],
    pub side_orbits: [u64; 2],
    pub aut_order: u64,
    pub aut_action: &'static str,
    pub swap: bool,
    pub method: &'static str,
    /// `|G|^{r₁+r₂−2}` when both quotients are rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<[Vec<String>; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Automorphisms acting diagonally: the whole list when small enough,
/// otherwise the marked generators.
fn diagonal_automorphisms(g: &Group, config: &EquivalenceConfig) -> Result<(Vec<Automorphism>, u64, &'static str)> {
    let aut = g.automorphism_group_with(config.aut_options())?;
    let order = aut.order() as u64;
    if aut.order() <= config.aut_list_limit {
        Ok((aut.elements, order, "full list"))
    } else {
        Ok((aut.generators, order, "generators"))
    }
}

/// Orbit ordinal of `φ(leader)` for every orbit of a side.
fn induced_orbit_map(side: &SideOrbits, table_map: &[GroupElement]) -> Result<Vec<u32>> {
    side.leaders
        .par_iter()
        .map(|&l| {
            let img: Vec<u32> = side.table.row(l as usize).iter().map(|&x| table_map[x as usize].0).collect();
            side.table
                .find(&img)
                .map(|j| side.orbit_of[j])
                .ok_or_else(|| Error::Invariant("an automorphism left the set of systems".into()))
        })
        .collect()
}

fn orbit_sigmas(g: &Group, side: &SideOrbits) -> Result<Vec<BitSet>> {
    let per_system: Vec<BitSet> = (0..side.table.len())
        .into_par_iter()
        .map(|i| {
            let row = side.table.row(i);
            let branch: Vec<GroupElement> = row[2 * side.table.gprime..].iter().map(|&x| GroupElement(x)).collect();
            sigma_classes(g, &branch)
        })
        .collect();
    let sig: Vec<BitSet> = side.leaders.iter().map(|&l| per_system[l as usize].clone()).collect();
    for (i, s) in per_system.iter().enumerate() {
        if *s != sig[side.orbit_of[i] as usize] {
            return Err(Error::Invariant(format!("Σ is not constant on side orbit {}", side.orbit_of[i])));
        }
    }
    Ok(sig)
}

fn h_bound(g: &Group, tau1: &SignatureType, tau2: &SignatureType, h: u64) -> Result<Option<String>> {
    if tau1.gprime != 0 || tau2.gprime != 0 || tau1.r() + tau2.r() < 2 {
        return Ok(None);
    }
    let e = (tau1.r() + tau2.r() - 2) as u32;
    let bound = (g.order() as u128).checked_pow(e);
    if let Some(b) = bound {
        if (h as u128) > b {
            return Err(Error::Invariant(format!("h = {h} exceeds |G|^(r1+r2-2) = {b}")));
        }
    }
    Ok(Some(match bound {
        Some(b) => b.to_string(),
        None => format!("{}^{e}", g.order()),
    }))
}

/// `h(G; τ₁, τ₂)` by the two-stage algorithm.
pub fn count_components(
    g: &Arc<Group>,
    tau1: &SignatureType,
    tau2: &SignatureType,
    config: &EquivalenceConfig,
) -> Result<OrbitReport> {
    let start = Instant::now();
    let side1 = Arc::new(side_orbits(g, tau1, config)?);
    let shared = tau1.same_unordered(tau2) && config.inn_for(tau1) == config.inn_for(tau2);
    let side2 = if shared { side1.clone() } else { Arc::new(side_orbits(g, tau2, config)?) };
    let swap = config.swap_for(tau1, tau2);

    let sig1 = orbit_sigmas(g, &side1)?;
    let sig2 = if shared { sig1.clone() } else { orbit_sigmas(g, &side2)? };

    // disjoint label pairs, row-major with offsets
    let rows: Vec<Vec<u32>> = sig1
        .par_iter()
        .map(|s1| (0..sig2.len() as u32).filter(|&o2| s1.intersection_count(&sig2[o2 as usize]) == 1).collect())
        .collect();
    let mut offset = Vec::with_capacity(rows.len() + 1);
    offset.push(0usize);
    for r in &rows {
        offset.push(offset.last().unwrap() + r.len());
    }
    let cols: Vec<u32> = rows.concat();
    let npairs = cols.len();
    let pair_id = |o1: u32, o2: u32| -> Option<usize> {
        let (lo, hi) = (offset[o1 as usize], offset[o1 as usize + 1]);
        cols[lo..hi].binary_search(&o2).ok().map(|k| lo + k)
    };
    let row_of: Vec<u32> = (0..rows.len()).flat_map(|o1| std::iter::repeat_n(o1 as u32, rows[o1].len())).collect();

    let mut uf = UnionFind::new(npairs);
    let (auts, aut_order, aut_action) = if npairs > 0 { diagonal_automorphisms(g, config)? } else { (Vec::new(), 0, "none") };
    for a in &auts {
        if a.is_identity(g) {
            continue;
        }
        let t = a.table(g);
        let m1 = induced_orbit_map(&side1, &t)?;
        let m2 = if shared { m1.clone() } else { induced_orbit_map(&side2, &t)? };
        let targets: Vec<u32> = (0..npairs)
            .into_par_iter()
            .map(|p| {
                let (o1, o2) = (row_of[p], cols[p]);
                pair_id(m1[o1 as usize], m2[o2 as usize]).map(|q| q as u32).unwrap_or(u32::MAX)
            })
            .collect();
        for (p, &q) in targets.iter().enumerate() {
            if q == u32::MAX {
                return Err(Error::Invariant("an automorphism broke disjointness".into()));
            }
            uf.union(p as u32, q);
        }
    }
    if swap {
        for p in 0..npairs {
            let q = pair_id(cols[p], row_of[p]).ok_or_else(|| Error::Invariant("swap broke disjointness".into()))?;
            uf.union(p as u32, q as u32);
        }
    }

    let roots = uf.labels();
    let mut comp_index = vec![u32::MAX; npairs];
    let mut orbit_sizes: Vec<u64> = Vec::new();
    let mut reps = Vec::new();
    let mut total_pairs = 0u64;
    for p in 0..npairs {
        let r = roots[p] as usize;
        if r == p {
            comp_index[p] = orbit_sizes.len() as u32;
            orbit_sizes.push(0);
            reps.push(p);
        }
        let w = side1.sizes[row_of[p] as usize] * side2.sizes[cols[p] as usize];
        orbit_sizes[comp_index[r] as usize] += w;
        total_pairs += w;
    }
    let h = orbit_sizes.len() as u64;
    let representatives = config.representatives.then(|| {
        reps.iter()
            .map(|&p| {
                let v1 = side1.table.system(g, side1.leaders[row_of[p] as usize] as usize);
                let v2 = side2.table.system(g, side2.leaders[cols[p] as usize] as usize);
                [v1.labels(), v2.labels()]
            })
            .collect()
    });
    Ok(OrbitReport {
        group: g.spec().to_string(),
        type1: tau1.unordered(),
        type2: tau2.unordered(),
        h,
        orbit_sizes,
        total_pairs,
        systems: [side1.system_count() as u64, side2.system_count() as u64],
        side_orbits: [side1.orbit_count() as u64, side2.orbit_count() as u64],
        aut_order,
        aut_action,
        swap,
        method: "two-stage",
        h_bound: h_bound(g, tau1, tau2, h)?,
        representatives,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Oracle: union-find directly on raw disjoint pairs of systems, with every
/// generator (moves and conjugation per side, automorphism generators on both
/// sides, swap) applied to every pair.
pub fn count_components_one_stage(
    g: &Arc<Group>,
    tau1: &SignatureType,
    tau2: &SignatureType,
    config: &EquivalenceConfig,
) -> Result<OrbitReport> {
    let start = Instant::now();
    moves::ensure_convention()?;
    let t1 = SystemTable::unordered(g, tau1, config.system_budget)?;
    let t2 = SystemTable::unordered(g, tau2, config.system_budget)?;
    let (n1, n2) = (t1.len(), t2.len());
    let raw = n1 as u64 * n2 as u64;
    if raw > ONE_STAGE_PAIR_LIMIT {
        return Err(Error::Budget { what: "raw pairs for the one-stage oracle", limit: ONE_STAGE_PAIR_LIMIT, reached: raw });
    }
    let swap = config.swap_for(tau1, tau2);
    let perms = |t: &SystemTable, tau: &SignatureType| -> Result<Vec<Vec<u32>>> {
        let gens = side_generators(g, tau, config.inn_for(tau));
        let mut out = vec![Vec::with_capacity(t.len()); gens.len()];
        for_each_image(g, t, &gens, |_, imgs| {
            for (k, &j) in imgs.iter().enumerate() {
                out[k].push(j);
            }
            Ok(())
        })?;
        Ok(out)
    };
    let (p1, p2) = (perms(&t1, tau1)?, perms(&t2, tau2)?);
    let sig = |t: &SystemTable| -> Vec<BitSet> {
        (0..t.len())
            .map(|i| {
                let b: Vec<GroupElement> = t.row(i)[2 * t.gprime..].iter().map(|&x| GroupElement(x)).collect();
                sigma_classes(g, &b)
            })
            .collect()
    };
    let (s1, s2) = (sig(&t1), sig(&t2));
    let disjoint = |i: usize, j: usize| s1[i].intersection_count(&s2[j]) == 1;

    let aut = if raw > 0 { Some(g.automorphism_group_with(config.aut_options())?) } else { None };
    let aut_maps: Vec<(Vec<u32>, Vec<u32>)> = aut
        .as_ref()
        .map(|a| a.generators.clone())
        .unwrap_or_default()
        .iter()
        .map(|a| {
            let t = a.table(g);
            let map = |tab: &SystemTable| -> Vec<u32> {
                (0..tab.len())
                    .map(|i| {
                        let img: Vec<u32> = tab.row(i).iter().map(|&x| t[x as usize].0).collect();
                        tab.find(&img).map(|j| j as u32).unwrap_or(u32::MAX)
                    })
                    .collect()
            };
            (map(&t1), map(&t2))
        })
        .collect();

    let idx = |i: u32, j: u32| i as u64 * n2 as u64 + j as u64;
    let mut uf = UnionFind::new(raw as usize);
    for i in 0..n1 as u32 {
        for j in 0..n2 as u32 {
            if !disjoint(i as usize, j as usize) {
                continue;
            }
            let here = idx(i, j) as u32;
            for p in &p1 {
                uf.union(here, idx(p[i as usize], j) as u32);
            }
            for p in &p2 {
                uf.union(here, idx(i, p[j as usize]) as u32);
            }
            for (m1, m2) in &aut_maps {
                let (a, b) = (m1[i as usize], m2[j as usize]);
                if a == u32::MAX || b == u32::MAX {
                    return Err(Error::Invariant("an automorphism left the set of systems".into()));
                }
                uf.union(here, idx(a, b) as u32);
            }
            if swap {
                // equal unordered types share one table
                uf.union(here, idx(j, i) as u32);
            }
        }
    }
    let roots = uf.labels();
    let mut comp = std::collections::BTreeMap::new();
    let mut total_pairs = 0u64;
    for i in 0..n1 {
        for j in 0..n2 {
            if disjoint(i, j) {
                *comp.entry(roots[idx(i as u32, j as u32) as usize]).or_insert(0u64) += 1;
                total_pairs += 1;
            }
        }
    }
    let orbit_sizes: Vec<u64> = comp.into_values().collect();
    let h = orbit_sizes.len() as u64;
    Ok(OrbitReport {
        group: g.spec().to_string(),
        type1: tau1.unordered(),
        type2: tau2.unordered(),
        h,
        orbit_sizes,
        total_pairs,
        systems: [n1 as u64, n2 as u64],
        side_orbits: [0, 0],
        aut_order: aut.as_ref().map(|a| a.order() as u64).unwrap_or(0),
        aut_action: "generators",
        swap,
        method: "one-stage",
        h_bound: h_bound(g, tau1, tau2, h)?,
        representatives: None,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnLemmaReport {
    pub group: String,
    pub tau: SignatureType,
    pub pass: bool,
    pub systems: u64,
    pub braid_orbits: u64,
    pub inner_automorphisms: u64,
    pub checked: u64,
    pub exhaustive: bool,
    pub counterexamples: Vec<String>,
}

/// Checks that every inner automorphism maps each system into its own braid
/// orbit. Exhaustive up to `budget` checks, sampled beyond.
pub fn verify_inn_lemma(g: &Arc<Group>, tau: &SignatureType, budget: u64) -> Result<InnLemmaReport> {
    if tau.gprime != 0 {
        return Err(Error::TooSmall { what: "only g' = 0 is covered; g'", min: 0, got: tau.gprime as u64 });
    }
    let side = side_orbits_with(g, tau, false, DEFAULT_SYSTEM_BUDGET)?;
    let inner = g.inner_automorphisms();
    let n = side.system_count() as u64;
    let total = n * inner.len() as u64;
    let exhaustive = total <= budget;
    let stride = if exhaustive { 1 } else { total.div_ceil(budget.max(1)) };
    let mut counterexamples = Vec::new();
    let mut checked = 0u64;
    for (k, a) in inner.iter().enumerate() {
        let c = a.conjugator.expect("inner automorphisms carry a conjugator");
        for i in 0..side.system_count() {
            if (k as u64 * n + i as u64) % stride != 0 {
                continue;
            }
            checked += 1;
            let img: Vec<u32> = side.table.row(i).iter().map(|&x| g.conjugate(GroupElement(x), c).0).collect();
            let ok = side.table.find(&img).is_some_and(|j| side.orbit_of[j] == side.orbit_of[i]);
            if !ok && counterexamples.len() < 10 {
                counterexamples.push(format!("{} by {}", side.table.system(g, i).display(), g.label(c)));
            }
        }
    }
    Ok(InnLemmaReport {
        group: g.spec().to_string(),
        tau: tau.unordered(),
        pass: counterexamples.is_empty(),
        systems: n,
        braid_orbits: side.orbit_count() as u64,
        inner_automorphisms: inner.len() as u64,
        checked,
        exhaustive,
        counterexamples,
    })
}
