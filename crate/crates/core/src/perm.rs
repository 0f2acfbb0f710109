//! Small permutation groups with materialized elements.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GROUP_CAP: usize = 100_000;

/// Largest degree accepted by [`PermGroup::contains_alternating`].
pub const MAX_ALT_DEGREE: usize = 8;

/// A permutation of `{0, ..., n-1}` stored as its image array.
/// Text forms (cycles and one-line arrays) are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::NotAPermutation(format!("degree {n} is too large")));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm(images.iter().map(|&x| x as u8).collect()))
    }

    /// Parses 1-based one-line notation such as `[2, 1, 3]`.
    pub fn from_one_line(images: &[usize]) -> Result<Perm> {
        if images.contains(&0) {
            return Err(Error::NotAPermutation("one-line images are 1-based".into()));
        }
        Perm::from_images(&images.iter().map(|&x| x - 1).collect::<Vec<_>>())
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
        let mut img: Vec<usize> = (0..degree).collect();
        let bad = |m: &str| Error::Parse(format!("{m} in cycle notation {s:?}"));
        let mut rest = s.trim();
        let mut used = HashSet::new();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            if !rest.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let body = &rest[1..body_end];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad("bad point")))
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(bad("point out of range"));
                }
                if !used.insert(p) {
                    return Err(bad("point repeated"));
                }
            }
            for (i, &p) in pts.iter().enumerate() {
                img[p - 1] = pts[(i + 1) % pts.len()] - 1;
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Perm::from_images(&img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn to_cycle_string(&self) -> String {
        let cs: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                format!(
                    "({})",
                    c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
                )
            })
            .collect();
        if cs.is_empty() {
            "()".into()
        } else {
            cs.concat()
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

/// The subgroup generated by `gens`, as a sorted list of elements.
pub fn close_generators(degree: usize, gens: &[Perm], cap: usize) -> Result<PermGroup> {
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::NotAPermutation(format!(
            "generator {g:?} has degree {} not {degree}",
            g.degree()
        )));
    }
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge(format!("more than {cap} elements")));
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
    })
}

impl PermGroup {
    pub fn symmetric(n: usize) -> Result<PermGroup> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::parse_cycles("(1 2)", n)?);
            let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(Perm::from_images(&cyc)?);
        }
        close_generators(n, &gens, DEFAULT_GROUP_CAP)
    }

    pub fn alternating(n: usize) -> Result<PermGroup> {
        let gens: Vec<Perm> = (2..n)
            .map(|k| Perm::parse_cycles(&format!("(1 2 {})", k + 1), n))
            .collect::<Result<_>>()?;
        close_generators(n, &gens, DEFAULT_GROUP_CAP)
    }

    pub fn cyclic(n: usize) -> Result<PermGroup> {
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        close_generators(n, &[Perm::from_images(&cyc)?], DEFAULT_GROUP_CAP)
    }

    /// Symmetries of an `n`-gon, of order `2n`.
    pub fn dihedral(n: usize) -> Result<PermGroup> {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        close_generators(
            n,
            &[Perm::from_images(&rot)?, Perm::from_images(&refl)?],
            DEFAULT_GROUP_CAP,
        )
    }

    pub fn trivial(n: usize) -> PermGroup {
        PermGroup {
            degree: n,
            generators: vec![],
            elements: vec![Perm::identity(n)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    fn need_two_points(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::Precondition("degree must be at least 2".into()));
        }
        Ok(())
    }

    /// Orbit of the ordered pair `(0, 1)` is every ordered pair of distinct points.
    pub fn is_two_transitive(&self) -> Result<bool> {
        self.need_two_points()?;
        let orbit: HashSet<(usize, usize)> = self.elements.iter().map(|g| (g.apply(0), g.apply(1))).collect();
        Ok(orbit.len() == self.degree * (self.degree - 1))
    }

    /// Number of orbits on `X × X`.
    pub fn orbit_count_on_pairs(&self) -> Result<usize> {
        self.need_two_points()?;
        let n = self.degree;
        let mut seen = vec![false; n * n];
        let mut count = 0;
        for start in 0..n * n {
            if seen[start] {
                continue;
            }
            count += 1;
            let (a, b) = (start / n, start % n);
            for g in &self.elements {
                seen[g.apply(a) * n + g.apply(b)] = true;
            }
        }
        Ok(count)
    }

    pub fn conjugacy_class_count(&self) -> usize {
        let index: HashMap<&Perm, usize> = self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut seen = vec![false; self.elements.len()];
        let mut count = 0;
        for i in 0..self.elements.len() {
            if seen[i] {
                continue;
            }
            count += 1;
            let x = &self.elements[i];
            for g in &self.elements {
                seen[index[&g.compose(x).compose(&g.inverse())]] = true;
            }
        }
        count
    }

    /// For a 2-transitive group: some irreducible representation has no
    /// vector fixed by a point stabilizer, i.e. there are more than two classes.
    pub fn standard_rep_exists_2trans(&self) -> Result<bool> {
        if !self.is_two_transitive()? {
            return Err(Error::Precondition("group is not 2-transitive".into()));
        }
        Ok(self.conjugacy_class_count() > 2)
    }

    /// Every even permutation of the domain is in the group.
    pub fn contains_alternating(&self) -> Result<bool> {
        if self.degree > MAX_ALT_DEGREE {
            return Err(Error::GroupTooLarge(format!(
                "degree {} exceeds {MAX_ALT_DEGREE}",
                self.degree
            )));
        }
        // the 3-cycles (1 2 k) generate the alternating group
        for k in 2..self.degree {
            if !self.contains(&Perm::parse_cycles(&format!("(1 2 {})", k + 1), self.degree)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn cycles_round_trip() {
        let p = Perm::parse_cycles("(1 2 3)(4 5)", 6).unwrap();
        assert_eq!(p.one_line(), vec![2, 3, 1, 5, 4, 6]);
        assert_eq!(p.to_cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm::parse_cycles("()", 3).unwrap(), Perm::identity(3));
        assert!(Perm::parse_cycles("(1 1)", 3).is_err());
        assert!(Perm::parse_cycles("(1 4)", 3).is_err());
        assert!(Perm::from_one_line(&[1, 1]).is_err());
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Perm>(&j).unwrap(), p);
    }

    #[test]
    fn composition_order() {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(2 3)", 3).unwrap();
        // apply b then a: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        assert_eq!(a.compose(&b).one_line(), vec![2, 3, 1]);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn closures() {
        let g = close_generators(3, &[Perm::identity(3)], 10).unwrap();
        assert_eq!(g.order(), 1);
        let g = close_generators(
            3,
            &[
                Perm::parse_cycles("(1 2)", 3).unwrap(),
                Perm::parse_cycles("(1 2 3)", 3).unwrap(),
            ],
            100,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        for n in 1..=6 {
            assert_eq!(PermGroup::symmetric(n).unwrap().order(), factorial(n));
        }
        assert_eq!(PermGroup::alternating(5).unwrap().order(), 60);
        assert_eq!(PermGroup::dihedral(4).unwrap().order(), 8);
        assert!(close_generators(6, PermGroup::symmetric(6).unwrap().generators(), 100).is_err());
        assert!(close_generators(3, &[Perm::identity(4)], 10).is_err());
    }

    #[test]
    fn transitivity_and_pairs() {
        let c4 = PermGroup::cyclic(4).unwrap();
        assert!(!c4.is_two_transitive().unwrap());
        assert_eq!(c4.orbit_count_on_pairs().unwrap(), 4);
        assert_eq!(PermGroup::trivial(2).orbit_count_on_pairs().unwrap(), 4);
        assert!(PermGroup::alternating(4).unwrap().is_two_transitive().unwrap());
        assert!(PermGroup::trivial(1).is_two_transitive().is_err());
    }

    #[test]
    fn classes_and_standard_rep() {
        assert_eq!(PermGroup::symmetric(3).unwrap().conjugacy_class_count(), 3);
        assert_eq!(PermGroup::alternating(5).unwrap().conjugacy_class_count(), 5);
        let c2 = PermGroup::symmetric(2).unwrap();
        assert!(!c2.standard_rep_exists_2trans().unwrap());
        assert!(PermGroup::cyclic(4).unwrap().standard_rep_exists_2trans().is_err());
    }

    #[test]
    fn alternating_containment() {
        assert!(PermGroup::symmetric(4).unwrap().contains_alternating().unwrap());
        assert!(PermGroup::alternating(5).unwrap().contains_alternating().unwrap());
        assert!(!PermGroup::dihedral(4).unwrap().contains_alternating().unwrap());
        assert!(PermGroup::trivial(9).contains_alternating().is_err());
    }
}
