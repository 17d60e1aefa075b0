use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Permutation of {0, .., n-1}. Serialized with 1-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&i| i == 0) {
            return Err(Error::InvalidInput("permutation images are 1-based".into()));
        }
        Permutation::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// The n-cycle i -> i+1 (mod n).
    pub fn shift(n: usize) -> Self {
        Permutation((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// Apply `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| next.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut j = self.0[s];
            while j != s {
                seen[j] = true;
                cyc.push(j);
                j = self.0[j];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_transposition(&self) -> bool {
        self.0.iter().enumerate().filter(|(i, j)| i != *j).count() == 2
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        if cycles.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "{}", cycles.join(""))
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// Product of loops traversed in order: the first loop acts first.
pub fn path_product(perms: &[&Permutation], n: usize) -> Permutation {
    perms.iter().fold(Permutation::identity(n), |acc, p| acc.then(p))
}

pub const MAX_GROUP_DEGREE: usize = 12;

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    // transversal[u] maps the base point to u
    transversal: Vec<Option<Permutation>>,
}

fn build_level(base: usize, gens: Vec<Permutation>, n: usize) -> Level {
    let mut transversal: Vec<Option<Permutation>> = vec![None; n];
    transversal[base] = Some(Permutation::identity(n));
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        let tu = transversal[u].clone().expect("visited");
        for g in &gens {
            let v = g.apply(u);
            if transversal[v].is_none() {
                transversal[v] = Some(tu.then(g));
                queue.push_back(v);
            }
        }
    }
    Level { base, gens, transversal }
}

fn sift(levels: &[Level], start: usize, g: &Permutation) -> (Permutation, usize) {
    let mut h = g.clone();
    for (i, lvl) in levels.iter().enumerate().skip(start) {
        let u = h.apply(lvl.base);
        match &lvl.transversal[u] {
            None => return (h, i),
            Some(t) => h = h.then(&t.inverse()),
        }
    }
    (h, levels.len())
}

fn build_chain(base: &[usize], strong: &[Permutation], n: usize) -> Vec<Level> {
    let mut levels = Vec::new();
    for (i, &b) in base.iter().enumerate() {
        let gens: Vec<Permutation> =
            strong.iter().filter(|s| base[..i].iter().all(|&p| s.apply(p) == p)).cloned().collect();
        levels.push(build_level(b, gens, n));
    }
    levels
}

/// Order of the group generated by `gens`, by a deterministic Schreier–Sims chain.
pub fn group_order(gens: &[Permutation], n: usize) -> Result<u128> {
    if n > MAX_GROUP_DEGREE {
        return Err(Error::Resource(format!(
            "group order for degree {n} exceeds the cap of {MAX_GROUP_DEGREE}"
        )));
    }
    let mut strong: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut base: Vec<usize> = Vec::new();
    for g in &strong {
        if base.iter().all(|&b| g.apply(b) == b) {
            let moved = (0..n).find(|&i| g.apply(i) != i).expect("non-identity");
            base.push(moved);
        }
    }
    'outer: loop {
        let levels = build_chain(&base, &strong, n);
        for (i, lvl) in levels.iter().enumerate() {
            for u in 0..n {
                let Some(tu) = &lvl.transversal[u] else { continue };
                for s in &lvl.gens {
                    let v = s.apply(u);
                    let tv = lvl.transversal[v].as_ref().expect("orbit closed");
                    let schreier = tu.then(s).then(&tv.inverse());
                    let (h, _) = sift(&levels, i + 1, &schreier);
                    if !h.is_identity() {
                        if base.iter().all(|&b| h.apply(b) == b) {
                            let moved = (0..n).find(|&k| h.apply(k) != k).expect("non-identity");
                            base.push(moved);
                        }
                        strong.push(h);
                        continue 'outer;
                    }
                }
            }
        }
        return Ok(levels
            .iter()
            .map(|l| l.transversal.iter().filter(|t| t.is_some()).count() as u128)
            .product());
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn is_full_symmetric(gens: &[Permutation], n: usize) -> Result<bool> {
    Ok(group_order(gens, n)? == factorial(n))
}

pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for g in gens {
            let v = g.apply(u);
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Explicit closure of the generated group, refusing to grow beyond `cap` elements.
pub fn closure(gens: &[Permutation], n: usize, cap: usize) -> Result<BTreeSet<Permutation>> {
    let mut seen = BTreeSet::from([Permutation::identity(n)]);
    let mut queue = VecDeque::from([Permutation::identity(n)]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(Error::Resource(format!("group closure exceeds {cap} elements")));
                }
                queue.push_back(h);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn orders() {
        let shift = Permutation::shift(6);
        let flip = p(&[1, 6, 5, 4, 3, 2]);
        assert_eq!(group_order(&[shift.clone(), flip], 6).unwrap(), 12);
        let t = p(&[2, 1, 3, 4, 5]);
        assert_eq!(group_order(&[Permutation::shift(5), t], 5).unwrap(), 120);
        assert_eq!(group_order(&[shift], 6).unwrap(), 6);
        assert_eq!(group_order(&[], 4).unwrap(), 1);
    }

    #[test]
    fn closure_matches_chain() {
        let a = p(&[2, 3, 1, 4, 5, 6]);
        let b = p(&[1, 2, 4, 5, 3, 6]);
        let c = p(&[6, 2, 3, 4, 5, 1]);
        let gens = [a, b, c];
        let order = group_order(&gens, 6).unwrap();
        assert_eq!(closure(&gens, 6, 1_000_000).unwrap().len() as u128, order);
    }

    #[test]
    fn degree_cap() {
        assert!(matches!(group_order(&[Permutation::shift(13)], 13), Err(Error::Resource(_))));
    }
}
