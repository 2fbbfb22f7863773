use std::collections::{HashMap, HashSet};
use std::hash::BuildHasherDefault;
use std::collections::hash_map::DefaultHasher;

use super::perm::{self, lex_unrank};
use super::{Group, GroupElement};
use crate::error::{Error, Result};

type Fixed = BuildHasherDefault<DefaultHasher>;

#[derive(Clone, Copy, Debug)]
pub struct AutOptions {
    /// Generic backtracking is refused above this group order.
    pub max_group_order: usize,
    /// Refuse to list more automorphisms than this.
    pub max_listed: usize,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions { max_group_order: 2000, max_listed: 1 << 21 }
    }
}

/// An automorphism, stored as the images of [`Group::generators`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub images: Vec<GroupElement>,
    /// For inner automorphisms, an element `g` with `φ(x) = g⁻¹xg`.
    pub conjugator: Option<GroupElement>,
}

impl Automorphism {
    pub fn identity(g: &Group) -> Self {
        Automorphism { images: g.generators().to_vec(), conjugator: Some(g.identity()) }
    }

    pub fn inner(g: &Group, by: GroupElement) -> Self {
        Automorphism {
            images: g.generators().iter().map(|&x| g.conjugate(x, by)).collect(),
            conjugator: Some(by),
        }
    }

    pub fn is_inner(&self) -> bool {
        self.conjugator.is_some()
    }

    pub fn is_identity(&self, g: &Group) -> bool {
        self.images == g.generators()
    }

    pub fn apply(&self, g: &Group, x: GroupElement) -> GroupElement {
        if let Some(c) = self.conjugator {
            return g.conjugate(x, c);
        }
        g.product(g.generator_word(x).into_iter().map(|s| self.images[s as usize]))
    }

    /// The full map as a lookup table indexed by element.
    pub fn table(&self, g: &Group) -> Vec<GroupElement> {
        match self.conjugator {
            Some(c) => g.elements().map(|x| g.conjugate(x, c)).collect(),
            None => g.extend_on_generators(&self.images),
        }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, g: &Group, other: &Automorphism) -> Automorphism {
        Automorphism {
            images: other.images.iter().map(|&y| self.apply(g, y)).collect(),
            conjugator: match (self.conjugator, other.conjugator) {
                (Some(k), Some(h)) => Some(g.mul(h, k)),
                _ => None,
            },
        }
    }

    /// Checks `φ(xy) = φ(x)φ(y)` and bijectivity: exhaustively when
    /// `|G| ≤ bound`, otherwise on a deterministic sample of pairs.
    pub fn check(&self, g: &Group, bound: usize) -> bool {
        let t = self.table(g);
        let mut hit = vec![false; g.order()];
        for &y in &t {
            if std::mem::replace(&mut hit[y.index()], true) {
                return false;
            }
        }
        let n = g.order();
        let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if n <= bound {
            Box::new((0..n).flat_map(move |x| (0..n).map(move |y| (x, y))))
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            Box::new((0..bound * 16).map(move |_| (rng.random_range(0..n), rng.random_range(0..n))))
        };
        for (x, y) in pairs {
            let (x, y) = (GroupElement(x as u32), GroupElement(y as u32));
            if t[g.mul(x, y).index()] != g.mul(t[x.index()], t[y.index()]) {
                return false;
            }
        }
        true
    }
}

/// `Aut(G)` as a complete list plus a marked generating subset.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub elements: Vec<Automorphism>,
    pub generators: Vec<Automorphism>,
    /// Which rule produced the list.
    pub rule: &'static str,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// One automorphism per coset of `Z(G)`, tagged with the least conjugating
/// element of the coset.
pub fn inner_automorphisms(g: &Group) -> Vec<Automorphism> {
    let mut seen: HashSet<Vec<GroupElement>, Fixed> = HashSet::default();
    let mut out = Vec::new();
    for x in g.elements() {
        let a = Automorphism::inner(g, x);
        if seen.insert(a.images.clone()) {
            out.push(a);
        }
    }
    out
}

impl Group {
    pub fn inner_automorphisms(&self) -> Vec<Automorphism> {
        inner_automorphisms(self)
    }

    pub fn automorphism_group(&self) -> Result<AutomorphismGroup> {
        self.automorphism_group_with(AutOptions::default())
    }

    pub fn automorphism_group_with(&self, opts: AutOptions) -> Result<AutomorphismGroup> {
        let (rule, mut elements) = if self.order() == 1 {
            ("trivial", vec![Automorphism::identity(self)])
        } else if let Some((n, alt)) = self.perm_family() {
            match (n, alt) {
                (n, false) if n != 2 && n != 6 => ("inner (symmetric group)", self.listed_inner(opts)?),
                (n, true) if n != 6 => ("conjugation by the symmetric group", self.sym_conjugations(opts)?),
                _ => ("backtracking", self.backtrack(opts)?),
            }
        } else if self.is_abelian_backend() {
            ("abelian basis images", self.abelian_automorphisms(opts)?)
        } else {
            ("backtracking", self.backtrack(opts)?)
        };
        // identity first, then the encoding order of the images
        elements.sort_by(|a, b| (!a.is_identity(self), &a.images).cmp(&(!b.is_identity(self), &b.images)));
        self.tag_inner(&mut elements);
        let generators = self.marked_generators(&elements);
        Ok(AutomorphismGroup { elements, generators, rule })
    }

    fn listed_inner(&self, opts: AutOptions) -> Result<Vec<Automorphism>> {
        if self.order() > opts.max_listed {
            return Err(Error::Budget { what: "automorphism list", limit: opts.max_listed as u64, reached: self.order() as u64 });
        }
        Ok(inner_automorphisms(self))
    }

    fn sym_conjugations(&self, opts: AutOptions) -> Result<Vec<Automorphism>> {
        let p = self.perm_backend().expect("permutation backend");
        let n = p.degree;
        let total = perm::factorial(n) as usize;
        if total > opts.max_listed {
            return Err(Error::Budget { what: "automorphism list", limit: opts.max_listed as u64, reached: total as u64 });
        }
        let gens: Vec<Vec<u8>> = self.generators().iter().map(|&x| self.images(x).unwrap()).collect();
        let mut seen: HashSet<Vec<GroupElement>, Fixed> = HashSet::default();
        let mut out = Vec::new();
        for r in 0..total {
            let s = lex_unrank(n, r);
            let mut s_inv = vec![0u8; n];
            for (i, &j) in s.iter().enumerate() {
                s_inv[j as usize] = i as u8;
            }
            let images: Vec<GroupElement> = gens
                .iter()
                .map(|x| {
                    let c = perm::compose(&perm::compose(&s_inv, x, self.convention()), &s, self.convention());
                    self.from_images(&c).expect("conjugate of an even permutation is even")
                })
                .collect();
            if seen.insert(images.clone()) {
                let conjugator = if perm::is_even(&s) { self.from_images(&s) } else { None };
                out.push(Automorphism { images, conjugator });
            }
        }
        Ok(out)
    }

    fn abelian_automorphisms(&self, opts: AutOptions) -> Result<Vec<Automorphism>> {
        let gens = self.generators();
        let cands: Vec<Vec<GroupElement>> = gens
            .iter()
            .map(|&x| self.elements().filter(|&y| self.element_order(y) == self.element_order(x)).collect())
            .collect();
        let leaves: u128 = cands.iter().map(|c| c.len() as u128).product();
        let leaf_cap = (opts.max_listed as u128) * 64;
        if leaves > leaf_cap {
            return Err(Error::Budget { what: "abelian automorphism search", limit: leaf_cap as u64, reached: leaves.min(u64::MAX as u128) as u64 });
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        'outer: loop {
            let images: Vec<GroupElement> = pick.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
            if self.generates(&images) {
                out.push(Automorphism { images, conjugator: None });
                if out.len() > opts.max_listed {
                    return Err(Error::Budget { what: "automorphism list", limit: opts.max_listed as u64, reached: out.len() as u64 });
                }
            }
            for k in (0..pick.len()).rev() {
                pick[k] += 1;
                if pick[k] < cands[k].len() {
                    continue 'outer;
                }
                pick[k] = 0;
            }
            break;
        }
        Ok(out)
    }

    /// Images of the fixed generators are chosen one at a time among elements
    /// of the same order and class size; a partial choice survives only if it
    /// extends to an injective homomorphism on the subgroup generated so far.
    fn backtrack(&self, opts: AutOptions) -> Result<Vec<Automorphism>> {
        if self.order() > opts.max_group_order {
            return Err(Error::AutBound { order: self.order(), bound: opts.max_group_order });
        }
        let gens = self.generators().to_vec();
        let classes = self.classes();
        let cands: Vec<Vec<GroupElement>> = gens
            .iter()
            .map(|&x| {
                let size = classes.sizes[self.class_of(x) as usize];
                self.elements()
                    .filter(|&y| {
                        self.element_order(y) == self.element_order(x) && classes.sizes[self.class_of(y) as usize] == size
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(gens.len());
        let mut scratch = Scratch { map: vec![u32::MAX; self.order()], hit: vec![0; self.order()], stamp: 0 };
        self.backtrack_level(&gens, &cands, &mut chosen, &mut scratch, &mut out, opts)?;
        Ok(out)
    }

    fn backtrack_level(
        &self,
        gens: &[GroupElement],
        cands: &[Vec<GroupElement>],
        chosen: &mut Vec<GroupElement>,
        scratch: &mut Scratch,
        out: &mut Vec<Automorphism>,
        opts: AutOptions,
    ) -> Result<()> {
        let j = chosen.len();
        if j == gens.len() {
            out.push(Automorphism { images: chosen.clone(), conjugator: None });
            if out.len() > opts.max_listed {
                return Err(Error::Budget { what: "automorphism list", limit: opts.max_listed as u64, reached: out.len() as u64 });
            }
            return Ok(());
        }
        for &y in &cands[j] {
            chosen.push(y);
            if self.extends(&gens[..=j], chosen, scratch) {
                self.backtrack_level(gens, cands, chosen, scratch, out, opts)?;
            }
            chosen.pop();
        }
        Ok(())
    }

    /// Does `gens[i] ↦ images[i]` extend to an injective homomorphism on
    /// `⟨gens⟩`? Every edge of the Cayley graph of the subgroup is checked.
    fn extends(&self, gens: &[GroupElement], images: &[GroupElement], s: &mut Scratch) -> bool {
        s.stamp += 1;
        let mut visited = vec![self.identity()];
        s.map[self.identity().index()] = self.identity().0;
        s.hit[self.identity().index()] = s.stamp;
        let mut head = 0;
        let mut ok = true;
        'bfs: while head < visited.len() {
            let x = visited[head];
            head += 1;
            let fx = GroupElement(s.map[x.index()]);
            for (g, &im) in gens.iter().zip(images) {
                let z = self.mul(x, *g);
                let fz = self.mul(fx, im);
                let known = s.map[z.index()];
                if known == u32::MAX {
                    if s.hit[fz.index()] == s.stamp {
                        ok = false;
                        break 'bfs;
                    }
                    s.hit[fz.index()] = s.stamp;
                    s.map[z.index()] = fz.0;
                    visited.push(z);
                } else if known != fz.0 {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        for x in visited {
            s.map[x.index()] = u32::MAX;
        }
        ok
    }

    fn tag_inner(&self, elements: &mut [Automorphism]) {
        if elements.iter().all(|a| a.conjugator.is_some()) {
            return;
        }
        let inner: HashMap<Vec<GroupElement>, GroupElement, Fixed> =
            inner_automorphisms(self).into_iter().map(|a| (a.images, a.conjugator.unwrap())).collect();
        for a in elements {
            if a.conjugator.is_none() {
                a.conjugator = inner.get(&a.images).copied();
            }
        }
    }

    /// Greedy: walk the list and keep each automorphism not yet generated.
    fn marked_generators(&self, elements: &[Automorphism]) -> Vec<Automorphism> {
        let mut gens: Vec<Automorphism> = Vec::new();
        let mut tables: Vec<Vec<GroupElement>> = Vec::new();
        let mut span: HashSet<Vec<GroupElement>, Fixed> = HashSet::default();
        span.insert(self.generators().to_vec());
        for a in elements {
            if span.len() == elements.len() {
                break;
            }
            if span.contains(&a.images) {
                continue;
            }
            gens.push(a.clone());
            tables.push(a.table(self));
            let mut stack: Vec<Vec<GroupElement>> = span.iter().cloned().collect();
            stack.sort();
            while let Some(cur) = stack.pop() {
                for t in &tables {
                    let next: Vec<GroupElement> = cur.iter().map(|y| t[y.index()]).collect();
                    if span.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        gens
    }
}

struct Scratch {
    map: Vec<u32>,
    hit: Vec<u32>,
    stamp: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn q8() -> Group {
        Group::from_cayley_json("q8", include_str!("../../tests/data/q8.json")).unwrap()
    }

    #[test]
    fn orders_of_automorphism_groups() {
        let cases = [("Zn:5,5", 480), ("Sym:3", 6), ("Zn:8", 4), ("Sym:4", 24), ("Alt:4", 24), ("Alt:5", 120), ("Zn:2,4", 8), ("Zn:1", 1)];
        for (spec, n) in cases {
            let g = parse_group_spec(spec).unwrap();
            assert_eq!(g.automorphism_group().unwrap().order(), n, "{spec}");
        }
        assert_eq!(q8().automorphism_group().unwrap().order(), 24);
    }

    #[test]
    fn exceptional_degree_six() {
        let s6 = parse_group_spec("Sym:6").unwrap();
        let aut = s6.automorphism_group().unwrap();
        assert_eq!(aut.order(), 1440);
        assert_eq!(aut.elements.iter().filter(|a| a.is_inner()).count(), 720);
    }

    #[test]
    fn family_rules_agree_with_backtracking() {
        for spec in ["Sym:4", "Alt:4", "Alt:5", "Sym:5"] {
            let g = parse_group_spec(spec).unwrap();
            let mut fam: Vec<_> = g.automorphism_group().unwrap().elements.into_iter().map(|a| a.images).collect();
            let mut bt: Vec<_> = g.backtrack(AutOptions::default()).unwrap().into_iter().map(|a| a.images).collect();
            fam.sort();
            bt.sort();
            assert_eq!(fam, bt, "{spec}");
        }
    }

    #[test]
    fn inner_counts() {
        assert_eq!(parse_group_spec("Zn:3,3").unwrap().inner_automorphisms().len(), 1);
        assert_eq!(parse_group_spec("Sym:3").unwrap().inner_automorphisms().len(), 6);
        assert_eq!(q8().inner_automorphisms().len(), 4);
    }

    #[test]
    fn listed_automorphisms_are_closed_and_valid() {
        for g in [parse_group_spec("Sym:4").unwrap(), parse_group_spec("Zn:2,4").unwrap(), q8()] {
            let aut = g.automorphism_group().unwrap();
            let set: HashSet<_> = aut.elements.iter().map(|a| a.images.clone()).collect();
            for a in &aut.elements {
                assert!(a.check(&g, 2000));
                for x in g.elements() {
                    assert_eq!(g.element_order(a.apply(&g, x)), g.element_order(x));
                }
                for b in &aut.elements {
                    assert!(set.contains(&a.compose(&g, b).images));
                }
            }
            for i in g.inner_automorphisms() {
                assert!(set.contains(&i.images));
            }
            assert!(aut.generators.len() <= aut.order());
        }
    }

    #[test]
    fn inner_compose_matches_conjugation() {
        let g = parse_group_spec("Sym:4").unwrap();
        let (h, k) = (g.parse_element("(0 1 2)").unwrap(), g.parse_element("(1 3)").unwrap());
        let (ah, ak) = (Automorphism::inner(&g, h), Automorphism::inner(&g, k));
        let c = ak.compose(&g, &ah);
        let direct = Automorphism::inner(&g, g.mul(h, k));
        assert_eq!(c.images, direct.images);
        assert_eq!(c.conjugator, Some(g.mul(h, k)));
        let x = g.parse_element("(0 3)").unwrap();
        assert_eq!(c.apply(&g, x), g.conjugate(g.conjugate(x, h), k));
    }

    #[test]
    fn bound_is_enforced() {
        let g = parse_group_spec("Sym:6").unwrap();
        let r = g.automorphism_group_with(AutOptions { max_group_order: 100, ..Default::default() });
        assert!(matches!(r, Err(Error::AutBound { .. })));
    }
}
