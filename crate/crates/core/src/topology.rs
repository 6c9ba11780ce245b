//! Finite topological spaces.
//!
//! A finite space is Alexandrov: every point `x` has a smallest open set
//! containing it, its minimal neighborhood `U(x)`. A set is open iff it
//! contains `U(x)` for each of its points, and `x ∈ cl(A)` iff `U(x)` meets
//! `A`. The convergence code leans on this: a function converges to `x` in
//! any ideal sense iff it does so on `U(x)` alone, because every other
//! neighborhood of `x` is a superset of it and bad sets only shrink.

use std::fmt;

use crate::error::{Error, Result};

/// Largest space the library builds.
pub const MAX_POINTS: usize = 6;
/// Largest size for exhaustive topology enumeration.
pub const MAX_ENUMERATED_POINTS: usize = 4;

pub type Point = usize;

/// A set of points of a space with at most [`MAX_POINTS`] points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PointSet(u8);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u8) -> PointSet {
        PointSet(bits)
    }

    pub fn full(k: usize) -> PointSet {
        debug_assert!(k <= MAX_POINTS);
        PointSet(((1u16 << k) - 1) as u8)
    }

    pub fn singleton(p: Point) -> PointSet {
        PointSet(1 << p)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, p: Point) -> bool {
        p < 8 && self.0 >> p & 1 == 1
    }

    pub fn insert(&mut self, p: Point) {
        self.0 |= 1 << p;
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersects(self, other: PointSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Point> + Clone {
        (0..8).filter(move |&p| self.contains(p))
    }

    /// All subsets of `{0..k-1}` in increasing bitmask order.
    pub fn all_subsets(k: usize) -> impl Iterator<Item = PointSet> + Clone {
        (0u16..1 << k).map(|b| PointSet(b as u8))
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        let mut s = PointSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A validated finite topological space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<PointSet>,
    min_nbhd: Vec<PointSet>,
}

const LETTERS: [&str; MAX_POINTS] = ["a", "b", "c", "d", "e", "f"];

fn letters(k: usize) -> Vec<String> {
    LETTERS[..k].iter().map(|s| s.to_string()).collect()
}

impl FiniteSpace {
    /// Validates the open family: ∅ and the whole space present, closed under
    /// pairwise unions and intersections. Duplicate opens are merged.
    pub fn new(names: Vec<String>, opens: Vec<PointSet>) -> Result<FiniteSpace> {
        let k = names.len();
        if k > MAX_POINTS {
            return Err(Error::TooManyPoints { max: MAX_POINTS });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicatePoint(n.clone()));
            }
        }
        let whole = PointSet::full(k);
        let mut opens = opens;
        if let Some(bad) = opens.iter().find(|o| !o.is_subset(whole)) {
            let p = bad.difference(whole).iter().next().unwrap();
            return Err(Error::PointOutOfRange(p));
        }
        opens.sort();
        opens.dedup();
        if !opens.contains(&PointSet::EMPTY) {
            return Err(Error::MissingEmpty);
        }
        if !opens.contains(&whole) {
            return Err(Error::MissingWhole);
        }
        let show = |s: PointSet| format_set(&names, s);
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if opens.binary_search(&a.union(b)).is_err() {
                    return Err(Error::NotUnionClosed(show(a), show(b)));
                }
                if opens.binary_search(&a.intersection(b)).is_err() {
                    return Err(Error::NotIntersectionClosed(show(a), show(b)));
                }
            }
        }
        let min_nbhd = (0..k)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(whole, |acc, &o| acc.intersection(o))
            })
            .collect();
        Ok(FiniteSpace {
            names,
            opens,
            min_nbhd,
        })
    }

    /// Builds a space from point names and opens spelled with those names.
    pub fn from_named(points: &[&str], opens: &[&[&str]]) -> Result<FiniteSpace> {
        let names: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let mut sets = Vec::with_capacity(opens.len());
        for o in opens {
            let mut s = PointSet::EMPTY;
            for name in *o {
                let p = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::UnknownPoint(name.to_string()))?;
                s.insert(p);
            }
            sets.push(s);
        }
        FiniteSpace::new(names, sets)
    }

    /// Opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::chain(2).unwrap()
    }

    pub fn discrete(k: usize) -> Result<FiniteSpace> {
        check_size(k)?;
        FiniteSpace::new(letters(k), PointSet::all_subsets(k).collect())
    }

    pub fn indiscrete(k: usize) -> Result<FiniteSpace> {
        check_size(k)?;
        FiniteSpace::new(letters(k), vec![PointSet::EMPTY, PointSet::full(k)])
    }

    /// Opens `∅, {a}, {a,b}, ..`: the initial segments.
    pub fn chain(k: usize) -> Result<FiniteSpace> {
        check_size(k)?;
        FiniteSpace::new(letters(k), (0..=k).map(PointSet::full).collect())
    }

    /// Parses `sierpinski`, `discrete:k`, `indiscrete:k` or `chain:k`.
    pub fn builtin(name: &str) -> Result<FiniteSpace> {
        if name == "sierpinski" {
            return Ok(FiniteSpace::sierpinski());
        }
        let (kind, k) = name
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("unknown space {name:?}")))?;
        let k: usize = k
            .parse()
            .map_err(|_| Error::Config(format!("bad point count in {name:?}")))?;
        match kind {
            "discrete" => FiniteSpace::discrete(k),
            "indiscrete" => FiniteSpace::indiscrete(k),
            "chain" => FiniteSpace::chain(k),
            _ => Err(Error::Config(format!("unknown space {name:?}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: Point) -> &str {
        &self.names[p]
    }

    pub fn point(&self, name: &str) -> Result<Point> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.len()
    }

    pub fn whole(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// The open sets in increasing bitmask order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn min_nbhd(&self, x: Point) -> PointSet {
        self.min_nbhd[x]
    }

    pub fn is_open_set(&self, a: PointSet) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    pub fn is_closed_set(&self, a: PointSet) -> bool {
        self.is_open_set(self.whole().difference(a))
    }

    pub fn closure(&self, a: PointSet) -> PointSet {
        self.points()
            .filter(|&x| self.min_nbhd[x].intersects(a))
            .collect()
    }

    pub fn interior(&self, a: PointSet) -> PointSet {
        self.points()
            .filter(|&x| self.min_nbhd[x].is_subset(a))
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.points()
            .all(|x| self.min_nbhd[x] == PointSet::singleton(x))
    }

    /// For distinct points each has an open set missing the other.
    pub fn is_t1(&self) -> bool {
        self.points().all(|x| {
            self.points()
                .all(|y| x == y || !self.min_nbhd[x].contains(y))
        })
    }

    /// Distinct points have disjoint neighborhoods.
    pub fn is_hausdorff(&self) -> bool {
        self.points().all(|x| {
            self.points()
                .all(|y| x == y || !self.min_nbhd[x].intersects(self.min_nbhd[y]))
        })
    }

    /// Quotient by a partition of the points, with its projection.
    /// Block `i` becomes point `i`, named by joining its members with `+`.
    pub fn quotient(&self, blocks: &[PointSet]) -> Result<(FiniteSpace, PointMap)> {
        let mut seen = PointSet::EMPTY;
        for &b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if seen.intersects(b) {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen = seen.union(b);
        }
        if seen != self.whole() {
            return Err(Error::InvalidPartition(
                "blocks do not cover the space".into(),
            ));
        }
        let m = blocks.len();
        let names = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|p| self.names[p].as_str())
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        let preimage = |a: PointSet| {
            a.iter()
                .fold(PointSet::EMPTY, |acc, i| acc.union(blocks[i]))
        };
        let opens = PointSet::all_subsets(m)
            .filter(|&a| self.is_open_set(preimage(a)))
            .collect();
        let target = FiniteSpace::new(names, opens)?;
        let image = self
            .points()
            .map(|p| blocks.iter().position(|b| b.contains(p)).unwrap())
            .collect();
        let map = PointMap::new(self.clone(), target.clone(), image)?;
        Ok((target, map))
    }

    /// Disjoint sum. Point names are kept when they are unique across the
    /// summands, otherwise each is prefixed with its summand index.
    pub fn disjoint_sum(spaces: &[&FiniteSpace]) -> Result<FiniteSpace> {
        let total: usize = spaces.iter().map(|s| s.len()).sum();
        if total > MAX_POINTS {
            return Err(Error::TooManyPoints { max: MAX_POINTS });
        }
        let mut names: Vec<String> = spaces
            .iter()
            .flat_map(|s| s.names.iter().cloned())
            .collect();
        let unique = names
            .iter()
            .enumerate()
            .all(|(i, n)| !names[..i].contains(n));
        if !unique {
            names = spaces
                .iter()
                .enumerate()
                .flat_map(|(i, s)| s.names.iter().map(move |n| format!("{i}.{n}")))
                .collect();
        }
        let mut opens = vec![PointSet::EMPTY];
        let mut offset = 0;
        for s in spaces {
            let mut next = Vec::with_capacity(opens.len() * s.opens.len());
            for &o in &opens {
                for &u in &s.opens {
                    next.push(o.union(PointSet(u.0 << offset)));
                }
            }
            opens = next;
            offset += s.len();
        }
        FiniteSpace::new(names, opens)
    }

    /// Relative topology on `a`, points kept in their original order.
    pub fn subspace(&self, a: PointSet) -> Result<FiniteSpace> {
        if !a.is_subset(self.whole()) {
            return Err(Error::PointOutOfRange(
                a.difference(self.whole()).iter().next().unwrap(),
            ));
        }
        let members: Vec<Point> = a.iter().collect();
        let restrict = |o: PointSet| -> PointSet {
            members
                .iter()
                .enumerate()
                .filter(|(_, &p)| o.contains(p))
                .map(|(i, _)| i)
                .collect()
        };
        let names = members.iter().map(|&p| self.names[p].clone()).collect();
        FiniteSpace::new(names, self.opens.iter().map(|&o| restrict(o)).collect())
    }

    /// Inclusion of the subspace on `a` into this space.
    pub fn inclusion(&self, a: PointSet) -> Result<PointMap> {
        let sub = self.subspace(a)?;
        PointMap::new(sub, self.clone(), a.iter().collect())
    }

    pub fn format_set(&self, a: PointSet) -> String {
        format_set(&self.names, a)
    }

    /// Test hook: overwrite a cached minimal neighborhood with garbage, for
    /// checking that the verification batteries notice a broken space.
    #[doc(hidden)]
    pub fn with_corrupted_min_nbhd(mut self, x: Point, nbhd: PointSet) -> FiniteSpace {
        self.min_nbhd[x] = nbhd;
        self
    }
}

fn check_size(k: usize) -> Result<()> {
    if k > MAX_POINTS {
        Err(Error::TooManyPoints { max: MAX_POINTS })
    } else {
        Ok(())
    }
}

fn format_set(names: &[String], a: PointSet) -> String {
    let inner: Vec<&str> = a.iter().map(|p| names[p].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|&o| self.format_set(o)).collect();
        write!(
            f,
            "FiniteSpace[{}; {}]",
            self.names.join(","),
            opens.join(" ")
        )
    }
}

/// A map between two finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    source: FiniteSpace,
    target: FiniteSpace,
    image: Vec<Point>,
}

impl PointMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, image: Vec<Point>) -> Result<PointMap> {
        if image.len() != source.len() || image.iter().any(|&p| p >= target.len()) {
            return Err(Error::InvalidMap);
        }
        Ok(PointMap {
            source,
            target,
            image,
        })
    }

    pub fn identity(space: &FiniteSpace) -> PointMap {
        PointMap::new(space.clone(), space.clone(), space.points().collect()).unwrap()
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn apply(&self, p: Point) -> Point {
        self.image[p]
    }

    pub fn image(&self) -> &[Point] {
        &self.image
    }

    pub fn preimage(&self, a: PointSet) -> PointSet {
        self.source
            .points()
            .filter(|&p| a.contains(self.image[p]))
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.target
            .opens()
            .iter()
            .all(|&v| self.source.is_open_set(self.preimage(v)))
    }

    /// Continuous bijection with continuous inverse.
    pub fn is_homeomorphism(&self) -> bool {
        let k = self.source.len();
        if k != self.target.len() {
            return false;
        }
        let onto: PointSet = self.image.iter().copied().collect();
        if onto != self.target.whole() {
            return false;
        }
        self.is_continuous()
            && self.source.opens().iter().all(|&u| {
                self.target
                    .is_open_set(u.iter().map(|p| self.image[p]).collect())
            })
    }
}

/// Every map from `source` to `target`, in lexicographic order of images.
pub fn all_maps(source: &FiniteSpace, target: &FiniteSpace) -> Vec<PointMap> {
    let k = source.len();
    let m = target.len();
    if m == 0 {
        return if k == 0 {
            vec![PointMap::new(source.clone(), target.clone(), Vec::new()).unwrap()]
        } else {
            Vec::new()
        };
    }
    let total = m.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let image = (0..k)
                .map(|_| {
                    let p = code % m;
                    code /= m;
                    p
                })
                .collect();
            PointMap::new(source.clone(), target.clone(), image).unwrap()
        })
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<Point>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// Whether some relabeling of points carries one open family onto the other.
pub fn homeomorphic(a: &FiniteSpace, b: &FiniteSpace) -> bool {
    if a.len() != b.len() || a.opens.len() != b.opens.len() {
        return false;
    }
    permutations(a.len()).into_iter().any(|perm| {
        a.opens
            .iter()
            .all(|&u| b.is_open_set(u.iter().map(|p| perm[p]).collect()))
    })
}

/// All labeled topologies on `k` points (named `a`, `b`, ..), each once.
///
/// Topologies on a finite set correspond to preorders: `x ≤ y` iff
/// `y ∈ U(x)`. We run through every reflexive relation, keep the transitive
/// ones, and take their up-sets as opens.
pub fn enumerate_topologies(k: usize) -> Result<Vec<FiniteSpace>> {
    if k > MAX_ENUMERATED_POINTS {
        return Err(Error::TooLarge {
            what: "topology enumeration size",
            got: k,
            max: MAX_ENUMERATED_POINTS,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|x| (0..k).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        // up[x] = {y : x ≤ y}
        let mut up = vec![PointSet::EMPTY; k];
        for (x, u) in up.iter_mut().enumerate() {
            u.insert(x);
        }
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                up[x].insert(y);
            }
        }
        let transitive = (0..k).all(|x| up[x].iter().all(|y| up[y].is_subset(up[x])));
        if !transitive {
            continue;
        }
        let opens = PointSet::all_subsets(k)
            .filter(|a| a.iter().all(|x| up[x].is_subset(*a)))
            .collect();
        out.push(FiniteSpace::new(letters(k), opens)?);
    }
    Ok(out)
}

/// One representative per homeomorphism class, first-seen in labeled order.
pub fn topologies_up_to_homeomorphism(k: usize) -> Result<Vec<FiniteSpace>> {
    let mut reps: Vec<FiniteSpace> = Vec::new();
    for s in enumerate_topologies(k)? {
        if !reps.iter().any(|r| homeomorphic(r, &s)) {
            reps.push(s);
        }
    }
    Ok(reps)
}
