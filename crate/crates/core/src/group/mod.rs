//! Finite groups with dense element indices.
//!
//! Every element is a [`GroupElement`], an index into the canonical encoding
//! order of its backend: mixed-radix residues for abelian groups, the lex rank
//! of the image array for `Sym(n)` (halved for `Alt(n)`), the row index for
//! Cayley tables. Equal indices are equal elements, so the index doubles as
//! the hash key.

mod abelian;
mod automorphism;
mod cayley;
mod perm;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use abelian::normalize_moduli;
pub use automorphism::{AutOptions, Automorphism, AutomorphismGroup};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use abelian::AbelianBackend;
use cayley::CayleyTable;
use perm::PermBackend;

/// Largest group order the engine will realise.
pub const MAX_ORDER: u128 = 1 << 22;
/// A full multiplication table is kept up to this order.
pub const TABLE_LIMIT: usize = 2048;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub u32);

impl GroupElement {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Composition order for permutations. `LeftFirst` reads `x·y` as "apply `x`,
/// then `y`".
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    LeftFirst,
    RightFirst,
}

static DEFAULT_CONVENTION: AtomicU8 = AtomicU8::new(0);

pub fn default_convention() -> Convention {
    match DEFAULT_CONVENTION.load(Ordering::Relaxed) {
        0 => Convention::LeftFirst,
        _ => Convention::RightFirst,
    }
}

/// Affects groups built afterwards.
pub fn set_default_convention(c: Convention) {
    DEFAULT_CONVENTION.store(matches!(c, Convention::RightFirst) as u8, Ordering::Relaxed);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// Invariant factors `n₁ | ⋯ | n_t`, all `> 1`.
    Abelian(Vec<u64>),
    Sym(usize),
    Alt(usize),
    Cayley(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(m) if m.is_empty() => write!(f, "Zn:1"),
            GroupSpec::Abelian(m) => {
                let parts: Vec<String> = m.iter().map(u64::to_string).collect();
                write!(f, "Zn:{}", parts.join(","))
            }
            GroupSpec::Sym(n) => write!(f, "Sym:{n}"),
            GroupSpec::Alt(n) => write!(f, "Alt:{n}"),
            GroupSpec::Cayley(p) => write!(f, "cayley:{}", p.display()),
        }
    }
}

impl GroupSpec {
    /// Parses the group-spec grammar without building the group.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |pos: usize, msg: &str| Error::GroupSpec { spec: text.to_string(), pos, msg: msg.to_string() };
        let lead = text.len() - text.trim_start().len();
        let t = text.trim();
        let Some(colon) = t.find(':') else {
            return Err(err(lead, "expected `Zn:`, `Sym:`, `Alt:` or `cayley:`"));
        };
        let (kind, rest) = (&t[..colon], &t[colon + 1..]);
        let body = lead + colon + 1;
        let degree = |rest: &str| -> Result<usize> {
            let n: usize = rest.trim().parse().map_err(|_| err(body, "expected a degree"))?;
            if n < 1 {
                return Err(err(body, "degree must be at least 1"));
            }
            Ok(n)
        };
        match kind {
            "Zn" => {
                let mut raw = Vec::new();
                let mut pos = body;
                for part in rest.split(',') {
                    let v: i64 = part.trim().parse().map_err(|_| err(pos, "expected an integer modulus"))?;
                    raw.push(v);
                    pos += part.len() + 1;
                }
                Ok(GroupSpec::Abelian(normalize_moduli(&raw)?))
            }
            "Sym" => Ok(GroupSpec::Sym(degree(rest)?)),
            "Alt" => Ok(GroupSpec::Alt(degree(rest)?)),
            "cayley" if !rest.trim().is_empty() => Ok(GroupSpec::Cayley(PathBuf::from(rest.trim()))),
            "cayley" => Err(err(body, "expected a path")),
            _ => Err(err(lead, "unknown group family")),
        }
    }
}

/// Parses a group spec such as `Zn:5,5`, `Sym:4`, `Alt:5` or `cayley:q8.json`
/// and builds the group.
pub fn parse_group_spec(text: &str) -> Result<Group> {
    Group::from_spec(GroupSpec::parse(text)?)
}

#[derive(Clone, Debug)]
enum Backend {
    Abelian(AbelianBackend),
    Perm(PermBackend),
    Cayley(CayleyTable),
}

/// Conjugacy classes, numbered by their least member.
#[derive(Debug)]
pub struct Classes {
    pub class_of: Vec<u32>,
    pub sizes: Vec<u32>,
    pub representatives: Vec<GroupElement>,
}

pub struct Group {
    spec: GroupSpec,
    backend: Backend,
    convention: Convention,
    order: usize,
    identity: u32,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    generators: Vec<GroupElement>,
    classes: OnceLock<Classes>,
    power_classes: OnceLock<Vec<BitSet>>,
    schreier: OnceLock<Schreier>,
}

/// Spanning tree of the right Cayley graph: `x = parent[x] · gens[via[x]]`.
struct Schreier {
    order: Vec<u32>,
    parent: Vec<u32>,
    via: Vec<u8>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.spec, self.order)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.spec == other.spec
                && self.convention == other.convention
                && self.order == other.order
                && match (&self.backend, &other.backend) {
                    (Backend::Cayley(a), Backend::Cayley(b)) => a.table == b.table,
                    _ => true,
                })
    }
}

impl Group {
    pub fn from_spec(spec: GroupSpec) -> Result<Group> {
        Self::with_convention(spec, default_convention())
    }

    pub fn with_convention(spec: GroupSpec, convention: Convention) -> Result<Group> {
        let backend = match &spec {
            GroupSpec::Abelian(m) => Backend::Abelian(AbelianBackend { moduli: m.clone() }),
            GroupSpec::Sym(n) => Backend::Perm(PermBackend { degree: *n, alternating: false }),
            GroupSpec::Alt(n) => Backend::Perm(PermBackend { degree: *n, alternating: true }),
            GroupSpec::Cayley(path) => Backend::Cayley(read_cayley(path)?),
        };
        Self::build(spec, backend, convention)
    }

    /// Builds a Cayley group from an inline JSON document; `name` is used as the
    /// spec path.
    pub fn from_cayley_json(name: &str, json: &str) -> Result<Group> {
        let table = CayleyTable::parse(json)?;
        Self::build(GroupSpec::Cayley(PathBuf::from(name)), Backend::Cayley(table), default_convention())
    }

    /// Builds a Cayley group from rows of a multiplication table.
    pub fn from_table(name: &str, labels: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Group> {
        let table = CayleyTable::from_rows(rows.len(), labels, rows)?;
        Self::build(GroupSpec::Cayley(PathBuf::from(name)), Backend::Cayley(table), default_convention())
    }

    fn build(spec: GroupSpec, backend: Backend, convention: Convention) -> Result<Group> {
        let order128 = match &backend {
            Backend::Abelian(a) => a.order(),
            Backend::Perm(p) => p.order(),
            Backend::Cayley(c) => c.order() as u128,
        };
        if order128 > MAX_ORDER {
            return Err(Error::TooLarge { order: order128, what: "realisation" });
        }
        let n = order128 as usize;
        let identity = match &backend {
            Backend::Cayley(c) => c.identity,
            _ => 0,
        };
        let mut g = Group {
            spec,
            backend,
            convention,
            order: n,
            identity,
            table: None,
            inverse: Vec::new(),
            orders: Vec::new(),
            generators: Vec::new(),
            classes: OnceLock::new(),
            power_classes: OnceLock::new(),
            schreier: OnceLock::new(),
        };
        g.table = match &g.backend {
            Backend::Cayley(c) => Some(c.table.clone()),
            _ if n <= TABLE_LIMIT => {
                let rows: Vec<u32> = (0..n * n).map(|k| g.mul_slow(k / n, k % n) as u32).collect();
                Some(rows)
            }
            _ => None,
        };
        g.inverse = (0..n).map(|x| g.inv_slow(x) as u32).collect();
        g.orders = (0..n).map(|x| g.order_slow(x)).collect();
        g.generators = g.pick_generators();
        debug_assert!(g.generates(&g.generators));
        Ok(g)
    }

    fn mul_slow(&self, x: usize, y: usize) -> usize {
        if let Some(t) = &self.table {
            return t[x * self.order + y] as usize;
        }
        match &self.backend {
            Backend::Abelian(a) => a.add(x, y),
            Backend::Perm(p) => {
                let img = perm::compose(&p.decode(x), &p.decode(y), self.convention);
                p.encode(&img).expect("product of group elements")
            }
            Backend::Cayley(c) => c.table[x * self.order + y] as usize,
        }
    }

    fn inv_slow(&self, x: usize) -> usize {
        match &self.backend {
            Backend::Abelian(a) => a.neg(x),
            Backend::Perm(p) => {
                let img = p.decode(x);
                let mut inv = vec![0u8; img.len()];
                for (i, &j) in img.iter().enumerate() {
                    inv[j as usize] = i as u8;
                }
                p.encode(&inv).expect("inverse of group element")
            }
            Backend::Cayley(c) => {
                let n = self.order;
                (0..n).find(|&y| c.table[x * n + y] == c.identity).expect("validated table has inverses")
            }
        }
    }

    fn order_slow(&self, x: usize) -> u32 {
        match &self.backend {
            Backend::Abelian(a) => {
                let v = a.decode(x);
                v.iter()
                    .zip(&a.moduli)
                    .map(|(&r, &m)| m / num_integer::gcd(r, m))
                    .fold(1u64, num_integer::lcm) as u32
            }
            Backend::Perm(p) => {
                let img = p.decode(x);
                let mut seen = vec![false; img.len()];
                let mut l = 1u32;
                for s in 0..img.len() {
                    let mut len = 0;
                    let mut i = s;
                    while !seen[i] {
                        seen[i] = true;
                        i = img[i] as usize;
                        len += 1;
                    }
                    if len > 0 {
                        l = num_integer::lcm(l, len);
                    }
                }
                l
            }
            Backend::Cayley(_) => {
                let mut k = 1;
                let mut y = x;
                while y != self.identity as usize {
                    y = self.mul_slow(y, x);
                    k += 1;
                }
                k
            }
        }
    }

    fn pick_generators(&self) -> Vec<GroupElement> {
        match &self.backend {
            Backend::Abelian(a) => a.basis().into_iter().map(|i| GroupElement(i as u32)).collect(),
            Backend::Perm(p) => p
                .generator_images()
                .iter()
                .map(|img| GroupElement(p.encode(img).expect("generator is in the group") as u32))
                .collect(),
            Backend::Cayley(_) => {
                // greedy by decreasing order
                let mut cand: Vec<usize> = (0..self.order).collect();
                cand.sort_by_key(|&x| (std::cmp::Reverse(self.orders[x]), x));
                let mut gens = Vec::new();
                let mut span = self.closure(&gens);
                for x in cand {
                    if span.count() == self.order {
                        break;
                    }
                    if !span.contains(x) {
                        gens.push(GroupElement(x as u32));
                        span = self.closure(&gens);
                    }
                }
                gens
            }
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(self.identity)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as u32).map(GroupElement)
    }

    pub fn is_abelian_backend(&self) -> bool {
        matches!(self.backend, Backend::Abelian(_))
    }

    /// Invariant factors for the abelian backend.
    pub fn moduli(&self) -> Option<&[u64]> {
        match &self.backend {
            Backend::Abelian(a) => Some(&a.moduli),
            _ => None,
        }
    }

    /// `(degree, alternating)` for the permutation backends.
    pub fn perm_family(&self) -> Option<(usize, bool)> {
        match &self.backend {
            Backend::Perm(p) => Some((p.degree, p.alternating)),
            _ => None,
        }
    }

    /// The fixed generating tuple automorphisms are described on.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        match &self.table {
            Some(t) => GroupElement(t[x.index() * self.order + y.index()]),
            None => GroupElement(self.mul_slow(x.index(), y.index()) as u32),
        }
    }

    /// Product of a sequence, left to right.
    pub fn product<I: IntoIterator<Item = GroupElement>>(&self, xs: I) -> GroupElement {
        xs.into_iter().fold(self.identity(), |acc, x| self.mul(acc, x))
    }

    #[inline]
    pub fn inv(&self, x: GroupElement) -> GroupElement {
        GroupElement(self.inverse[x.index()])
    }

    pub fn pow(&self, x: GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(x) } else { x };
        let k = k.unsigned_abs() % self.element_order(x) as u64;
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, base))
    }

    /// Smallest `k ≥ 1` with `x^k = 1`.
    #[inline]
    pub fn element_order(&self, x: GroupElement) -> u32 {
        self.orders[x.index()]
    }

    /// `g⁻¹ x g`.
    #[inline]
    pub fn conjugate(&self, x: GroupElement, g: GroupElement) -> GroupElement {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Elements of the subgroup generated by `xs`.
    pub fn closure(&self, xs: &[GroupElement]) -> BitSet {
        let mut seen = BitSet::new(self.order);
        seen.insert(self.identity as usize);
        let mut stack = vec![self.identity()];
        while let Some(y) = stack.pop() {
            for &x in xs {
                let z = self.mul(y, x);
                if seen.insert(z.index()) {
                    stack.push(z);
                }
            }
        }
        seen
    }

    pub fn generates(&self, xs: &[GroupElement]) -> bool {
        self.closure(xs).count() == self.order
    }

    pub fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![u32::MAX; n];
            let mut sizes = Vec::new();
            let mut representatives = Vec::new();
            for x in 0..n {
                if class_of[x] != u32::MAX {
                    continue;
                }
                let id = sizes.len() as u32;
                class_of[x] = id;
                let mut stack = vec![GroupElement(x as u32)];
                let mut size = 1;
                while let Some(y) = stack.pop() {
                    for &g in &self.generators {
                        let z = self.conjugate(y, g);
                        if class_of[z.index()] == u32::MAX {
                            class_of[z.index()] = id;
                            size += 1;
                            stack.push(z);
                        }
                    }
                }
                sizes.push(size);
                representatives.push(GroupElement(x as u32));
            }
            Classes { class_of, sizes, representatives }
        })
    }

    pub fn class_of(&self, x: GroupElement) -> u32 {
        self.classes().class_of[x.index()]
    }

    pub fn class_count(&self) -> usize {
        self.classes().sizes.len()
    }

    /// Class ids met by the powers of `x`.
    pub fn power_classes(&self, x: GroupElement) -> &BitSet {
        let all = self.power_classes.get_or_init(|| {
            let k = self.class_count();
            (0..self.order as u32)
                .map(|x| {
                    let x = GroupElement(x);
                    let mut s = BitSet::new(k);
                    let mut y = self.identity();
                    for _ in 0..self.element_order(x) {
                        s.insert(self.class_of(y) as usize);
                        y = self.mul(y, x);
                    }
                    s
                })
                .collect()
        });
        &all[x.index()]
    }

    fn schreier(&self) -> &Schreier {
        self.schreier.get_or_init(|| {
            let n = self.order;
            let mut parent = vec![u32::MAX; n];
            let mut via = vec![0u8; n];
            let mut order = Vec::with_capacity(n);
            parent[self.identity as usize] = self.identity;
            order.push(self.identity);
            let mut head = 0;
            while head < order.len() {
                let y = GroupElement(order[head]);
                head += 1;
                for (s, &g) in self.generators.iter().enumerate() {
                    let z = self.mul(y, g);
                    if parent[z.index()] == u32::MAX {
                        parent[z.index()] = y.0;
                        via[z.index()] = s as u8;
                        order.push(z.0);
                    }
                }
            }
            Schreier { order, parent, via }
        })
    }

    /// Extends `x ↦ images[i]` on the fixed generators to a map on all of `G`
    /// along the Schreier tree. No homomorphism check.
    pub fn extend_on_generators(&self, images: &[GroupElement]) -> Vec<GroupElement> {
        let s = self.schreier();
        let mut map = vec![self.identity(); self.order];
        for &x in &s.order[1..] {
            let x = x as usize;
            map[x] = self.mul(map[s.parent[x] as usize], images[s.via[x] as usize]);
        }
        map
    }

    /// Writes `x` as a word in the fixed generators (indices into
    /// [`generators`](Self::generators)).
    pub fn generator_word(&self, x: GroupElement) -> Vec<u8> {
        let s = self.schreier();
        let mut word = Vec::new();
        let mut y = x.index();
        while y != self.identity as usize {
            word.push(s.via[y]);
            y = s.parent[y] as usize;
        }
        word.reverse();
        word
    }

    /// Human-readable label: residue vector, cycle notation or table label.
    pub fn label(&self, x: GroupElement) -> String {
        match &self.backend {
            Backend::Abelian(a) => {
                let v: Vec<String> = a.decode(x.index()).iter().map(u64::to_string).collect();
                format!("({})", v.join(","))
            }
            Backend::Perm(p) => perm::cycle_notation(&p.decode(x.index())),
            Backend::Cayley(c) => c.labels[x.index()].clone(),
        }
    }

    /// Inverse of [`label`](Self::label). Permutations also accept an image
    /// array `[1,0,2]`; residues also accept `1,2` without parentheses.
    pub fn parse_element(&self, text: &str) -> Option<GroupElement> {
        let t = text.trim();
        let idx = match &self.backend {
            Backend::Abelian(a) => {
                let inner = t.trim_start_matches('(').trim_end_matches(')');
                let v: Vec<u64> = if inner.trim().is_empty() {
                    vec![]
                } else {
                    inner.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?
                };
                a.encode(&v)?
            }
            Backend::Perm(p) => {
                if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                    let img: Vec<u8> = inner.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
                    p.encode(&img)?
                } else {
                    self.parse_cycles(p, t)?
                }
            }
            Backend::Cayley(c) => c.labels.iter().position(|l| l == t)?,
        };
        Some(GroupElement(idx as u32))
    }

    fn parse_cycles(&self, p: &PermBackend, t: &str) -> Option<usize> {
        let mut img: Vec<u8> = (0..p.degree as u8).collect();
        let mut rest = t;
        // cycles are applied left to right, each one a disjoint-cycle product
        while !rest.is_empty() {
            let body = rest.strip_prefix('(')?;
            let close = body.find(')')?;
            let pts: Vec<u8> = body[..close]
                .split(|c: char| c == ' ' || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().ok())
                .collect::<Option<_>>()?;
            if pts.iter().any(|&q| q as usize >= p.degree) {
                return None;
            }
            let cyc = p.cycle(&pts);
            img = perm::compose(&img, &cyc, Convention::LeftFirst);
            rest = body[close + 1..].trim_start();
        }
        p.encode(&img)
    }

    /// Builds an element from residues (abelian backend).
    pub fn from_residues(&self, v: &[u64]) -> Option<GroupElement> {
        match &self.backend {
            Backend::Abelian(a) => a.encode(v).map(|i| GroupElement(i as u32)),
            _ => None,
        }
    }

    /// Builds an element from an image array (permutation backends).
    pub fn from_images(&self, img: &[u8]) -> Option<GroupElement> {
        match &self.backend {
            Backend::Perm(p) => p.encode(img).map(|i| GroupElement(i as u32)),
            _ => None,
        }
    }

    /// Image array of a permutation element.
    pub fn images(&self, x: GroupElement) -> Option<Vec<u8>> {
        match &self.backend {
            Backend::Perm(p) => Some(p.decode(x.index())),
            _ => None,
        }
    }

    /// The permutation backend's image of each generator of `Sym(n)`, used by
    /// the family rule for `Alt(n)`.
    pub(crate) fn perm_backend(&self) -> Option<&PermBackend> {
        match &self.backend {
            Backend::Perm(p) => Some(p),
            _ => None,
        }
    }
}

fn read_cayley(path: &Path) -> Result<CayleyTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    CayleyTable::parse(&text)
}
