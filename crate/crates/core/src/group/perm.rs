//! Permutations of `{0, …, n-1}` ranked in lexicographic order of their image arrays.

use super::Convention;

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub(crate) fn lex_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut rank = 0usize;
    let mut f = 1usize;
    // Lehmer code, accumulated from the right.
    for i in (0..n).rev() {
        let smaller = p[i + 1..].iter().filter(|&&q| q < p[i]).count();
        rank += smaller * f;
        f *= n - i;
    }
    rank
}

pub(crate) fn lex_unrank(n: usize, mut rank: usize) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(n);
    let mut f = (1..n).product::<usize>().max(1);
    for i in 0..n {
        let k = rank / f;
        rank %= f;
        out.push(pool.remove(k));
        if i + 1 < n {
            f /= n - 1 - i;
        }
    }
    out
}

pub(crate) fn is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

pub(crate) fn compose(x: &[u8], y: &[u8], convention: Convention) -> Vec<u8> {
    match convention {
        Convention::LeftFirst => x.iter().map(|&i| y[i as usize]).collect(),
        Convention::RightFirst => y.iter().map(|&i| x[i as usize]).collect(),
    }
}

/// `Sym(n)` or `Alt(n)`; the alternating group keeps the even permutations in
/// the same relative order, so its index is the symmetric rank halved.
#[derive(Clone, Debug)]
pub(crate) struct PermBackend {
    pub degree: usize,
    pub alternating: bool,
}

impl PermBackend {
    pub fn order(&self) -> u128 {
        let f = factorial(self.degree);
        if self.alternating && self.degree >= 2 {
            f / 2
        } else {
            f
        }
    }

    pub fn decode(&self, index: usize) -> Vec<u8> {
        if !self.alternating || self.degree < 2 {
            return lex_unrank(self.degree, index);
        }
        let p = lex_unrank(self.degree, 2 * index);
        if is_even(&p) {
            p
        } else {
            lex_unrank(self.degree, 2 * index + 1)
        }
    }

    pub fn encode(&self, p: &[u8]) -> Option<usize> {
        if p.len() != self.degree {
            return None;
        }
        let mut seen = vec![false; p.len()];
        for &i in p {
            if i as usize >= p.len() || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        if self.alternating && self.degree >= 2 {
            is_even(p).then(|| lex_rank(p) / 2)
        } else {
            Some(lex_rank(p))
        }
    }

    pub fn cycle(&self, points: &[u8]) -> Vec<u8> {
        let mut p: Vec<u8> = (0..self.degree as u8).collect();
        for w in 0..points.len() {
            p[points[w] as usize] = points[(w + 1) % points.len()];
        }
        p
    }

    pub fn generator_images(&self) -> Vec<Vec<u8>> {
        let n = self.degree;
        let all: Vec<u8> = (0..n as u8).collect();
        if !self.alternating {
            match n {
                0 | 1 => vec![],
                2 => vec![self.cycle(&[0, 1])],
                _ => vec![self.cycle(&[0, 1]), self.cycle(&all)],
            }
        } else {
            match n {
                0..=2 => vec![],
                3 => vec![self.cycle(&[0, 1, 2])],
                _ if n % 2 == 1 => vec![self.cycle(&[0, 1, 2]), self.cycle(&all)],
                _ => vec![self.cycle(&[0, 1, 2]), self.cycle(&all[1..])],
            }
        }
    }
}

pub(crate) fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        let mut i = s;
        out.push('(');
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&i.to_string());
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_unrank_roundtrip() {
        for n in 1..=5 {
            for r in 0..factorial(n) as usize {
                let p = lex_unrank(n, r);
                assert_eq!(lex_rank(&p), r);
            }
        }
        assert_eq!(lex_unrank(3, 0), vec![0, 1, 2]);
        assert_eq!(lex_unrank(3, 5), vec![2, 1, 0]);
    }

    #[test]
    fn alternating_indices_are_dense() {
        let b = PermBackend { degree: 5, alternating: true };
        for i in 0..60 {
            let p = b.decode(i);
            assert!(is_even(&p));
            assert_eq!(b.encode(&p), Some(i));
        }
    }

    #[test]
    fn cycles_print() {
        let b = PermBackend { degree: 4, alternating: false };
        assert_eq!(cycle_notation(&b.cycle(&[0, 2, 1])), "(0 2 1)");
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(0 1)(2 3)");
    }
}
