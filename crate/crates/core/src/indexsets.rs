//! Index sets: subsets of a finite domain `{0..n-1}` or eventually periodic
//! subsets of ω.
//!
//! An eventually periodic set is stored as a head window `[0, q)` listed
//! explicitly plus a tail rule: an index `s >= q` is a member iff `s mod p`
//! is one of the tail residues. Residues are absolute (`s mod p`, not
//! `(s - q) mod p`), so aligning two sets to a common modulus is a plain
//! lcm blow-up. Every value is kept canonical: `p` is the minimal period of
//! the tail and `q` the shortest head compatible with it, which makes
//! structural equality coincide with set equality.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest finite index domain the library accepts.
pub const MAX_FINITE_DOMAIN: usize = 24;

/// Index type for ω.
pub type Index = u64;

/// The set the ideals live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexDomain {
    /// `{0, .., n-1}` with `1 <= n <= 24`.
    Finite(usize),
    /// ω, seen through eventually periodic sets only.
    PeriodicOmega,
}

impl IndexDomain {
    pub fn finite(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_FINITE_DOMAIN {
            return Err(Error::DomainSize {
                got: n,
                max: MAX_FINITE_DOMAIN,
            });
        }
        Ok(IndexDomain::Finite(n))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, IndexDomain::Finite(_))
    }

    /// Number of indices, `None` for ω.
    pub fn size(self) -> Option<usize> {
        match self {
            IndexDomain::Finite(n) => Some(n),
            IndexDomain::PeriodicOmega => None,
        }
    }

    pub(crate) fn check_same(self, other: IndexDomain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch(self, other))
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexDomain::Finite(n) => write!(f, "finite:{n}"),
            IndexDomain::PeriodicOmega => f.write_str("omega"),
        }
    }
}

impl FromStr for IndexDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "omega" || s == "ω" {
            return Ok(IndexDomain::PeriodicOmega);
        }
        let n = s
            .strip_prefix("finite:")
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| {
                Error::Config(format!("bad domain {s:?}, expected omega or finite:N"))
            })?;
        IndexDomain::finite(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Finite { n: u8, bits: u32 },
    // q = head.len(), p = tail.len() >= 1
    Periodic { head: Vec<bool>, tail: Vec<bool> },
}

/// A subset of an [`IndexDomain`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpSet {
    repr: Repr,
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn finite_mask(n: u8) -> u32 {
    if n as u32 >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl EpSet {
    pub fn empty(domain: IndexDomain) -> EpSet {
        match domain {
            IndexDomain::Finite(n) => EpSet::from_bits(n, 0),
            IndexDomain::PeriodicOmega => EpSet::canonical(Vec::new(), vec![false]),
        }
    }

    pub fn full(domain: IndexDomain) -> EpSet {
        match domain {
            IndexDomain::Finite(n) => EpSet::from_bits(n, finite_mask(n as u8)),
            IndexDomain::PeriodicOmega => EpSet::canonical(Vec::new(), vec![true]),
        }
    }

    /// Subset of `Finite(n)` given as a bitmask; bits at or above `n` are dropped.
    pub fn from_bits(n: usize, bits: u32) -> EpSet {
        assert!(
            (1..=MAX_FINITE_DOMAIN).contains(&n),
            "finite domain size {n} out of range"
        );
        let n = n as u8;
        EpSet {
            repr: Repr::Finite {
                n,
                bits: bits & finite_mask(n),
            },
        }
    }

    /// Finite set of explicit indices. On ω this is a member of Fin.
    pub fn from_indices(domain: IndexDomain, indices: &[Index]) -> Result<EpSet> {
        match domain {
            IndexDomain::Finite(n) => {
                let mut bits = 0u32;
                for &s in indices {
                    if s >= n as u64 {
                        return Err(Error::IndexOutOfRange { index: s, domain });
                    }
                    bits |= 1 << s;
                }
                Ok(EpSet::from_bits(n, bits))
            }
            IndexDomain::PeriodicOmega => {
                let q = indices.iter().map(|&s| s + 1).max().unwrap_or(0);
                let head: Vec<Index> = indices.to_vec();
                EpSet::periodic(&head, q, 1, &[])
            }
        }
    }

    /// Eventually periodic set on ω: `head` lists the members below `q`, and
    /// `s >= q` is a member iff `s mod p` is in `tail`.
    pub fn periodic(head: &[Index], q: Index, p: Index, tail: &[Index]) -> Result<EpSet> {
        if p == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut h = vec![false; q as usize];
        for &s in head {
            if s >= q {
                return Err(Error::HeadOutOfRange { index: s, len: q });
            }
            h[s as usize] = true;
        }
        let mut t = vec![false; p as usize];
        for &r in tail {
            if r >= p {
                return Err(Error::ResidueOutOfRange {
                    residue: r,
                    modulus: p,
                });
            }
            t[r as usize] = true;
        }
        Ok(EpSet::canonical(h, t))
    }

    /// Union of residue classes `{r mod p : r in residues}` on ω.
    pub fn residues(p: Index, residues: &[Index]) -> Result<EpSet> {
        EpSet::periodic(&[], 0, p, residues)
    }

    /// Builds a set on ω from a membership predicate that is periodic with
    /// period `p` from `q` on.
    pub(crate) fn from_predicate(q: Index, p: Index, member: impl Fn(Index) -> bool) -> EpSet {
        let head = (0..q).map(&member).collect();
        let tail = (0..p)
            .map(|r| {
                // smallest s >= q with s ≡ r (mod p)
                let s = q + (r + p - q % p) % p;
                member(s)
            })
            .collect();
        EpSet::canonical(head, tail)
    }

    fn canonical(mut head: Vec<bool>, mut tail: Vec<bool>) -> EpSet {
        debug_assert!(!tail.is_empty());
        let p = tail.len();
        // Minimal period divides every period of a purely periodic tail.
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| tail[i] == tail[i % d]))
            .unwrap_or(p);
        tail.truncate(d);
        while let Some(&last) = head.last() {
            if last == tail[(head.len() - 1) % d] {
                head.pop();
            } else {
                break;
            }
        }
        EpSet {
            repr: Repr::Periodic { head, tail },
        }
    }

    pub fn domain(&self) -> IndexDomain {
        match self.repr {
            Repr::Finite { n, .. } => IndexDomain::Finite(n as usize),
            Repr::Periodic { .. } => IndexDomain::PeriodicOmega,
        }
    }

    /// Membership test; fails for an index outside a finite domain.
    pub fn member(&self, s: Index) -> Result<bool> {
        if let Repr::Finite { n, .. } = self.repr {
            if s >= n as u64 {
                return Err(Error::IndexOutOfRange {
                    index: s,
                    domain: self.domain(),
                });
            }
        }
        Ok(self.get(s))
    }

    /// Membership without the range check (out-of-range indices are non-members).
    #[inline]
    pub(crate) fn get(&self, s: Index) -> bool {
        match &self.repr {
            Repr::Finite { n, bits } => s < *n as u64 && bits >> s & 1 == 1,
            Repr::Periodic { head, tail } => {
                if (s as usize) < head.len() {
                    head[s as usize]
                } else {
                    tail[(s % tail.len() as u64) as usize]
                }
            }
        }
    }

    /// Bitmask view of a finite-domain set.
    pub fn bits(&self) -> Option<u32> {
        match self.repr {
            Repr::Finite { bits, .. } => Some(bits),
            Repr::Periodic { .. } => None,
        }
    }

    /// Head length `q` (0 on a finite domain).
    pub fn head_len(&self) -> Index {
        match &self.repr {
            Repr::Finite { .. } => 0,
            Repr::Periodic { head, .. } => head.len() as Index,
        }
    }

    /// Tail modulus `p` (1 on a finite domain).
    pub fn modulus(&self) -> Index {
        match &self.repr {
            Repr::Finite { .. } => 1,
            Repr::Periodic { tail, .. } => tail.len() as Index,
        }
    }

    /// Members inside the head window, or all members on a finite domain.
    pub fn head_members(&self) -> Vec<Index> {
        match &self.repr {
            Repr::Finite { n, bits } => (0..*n as u64).filter(|s| bits >> s & 1 == 1).collect(),
            Repr::Periodic { head, .. } => (0..head.len() as u64)
                .filter(|&s| head[s as usize])
                .collect(),
        }
    }

    /// Tail residues modulo [`EpSet::modulus`]; empty on a finite domain.
    pub fn tail_residues(&self) -> Vec<Index> {
        match &self.repr {
            Repr::Finite { .. } => Vec::new(),
            Repr::Periodic { tail, .. } => (0..tail.len() as u64)
                .filter(|&r| tail[r as usize])
                .collect(),
        }
    }

    fn combine(&self, other: &EpSet, op: impl Fn(bool, bool) -> bool) -> Result<EpSet> {
        self.domain().check_same(other.domain())?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Finite { n, bits: a }, Repr::Finite { bits: b, .. }) => {
                let mut bits = 0;
                for s in 0..*n {
                    if op(a >> s & 1 == 1, b >> s & 1 == 1) {
                        bits |= 1 << s;
                    }
                }
                EpSet::from_bits(*n as usize, bits)
            }
            (Repr::Periodic { head: ha, tail: ta }, Repr::Periodic { head: hb, tail: tb }) => {
                let q = ha.len().max(hb.len());
                let p = lcm(ta.len() as u64, tb.len() as u64) as usize;
                let head = (0..q as u64)
                    .map(|s| op(self.get(s), other.get(s)))
                    .collect();
                let tail = (0..p)
                    .map(|r| op(ta[r % ta.len()], tb[r % tb.len()]))
                    .collect();
                EpSet::canonical(head, tail)
            }
            _ => unreachable!("domains checked"),
        })
    }

    pub fn union(&self, other: &EpSet) -> Result<EpSet> {
        match (&self.repr, &other.repr) {
            (Repr::Finite { n, bits: a }, Repr::Finite { n: m, bits: b }) if n == m => {
                Ok(EpSet::from_bits(*n as usize, a | b))
            }
            _ => self.combine(other, |a, b| a || b),
        }
    }

    pub fn intersect(&self, other: &EpSet) -> Result<EpSet> {
        match (&self.repr, &other.repr) {
            (Repr::Finite { n, bits: a }, Repr::Finite { n: m, bits: b }) if n == m => {
                Ok(EpSet::from_bits(*n as usize, a & b))
            }
            _ => self.combine(other, |a, b| a && b),
        }
    }

    pub fn setminus(&self, other: &EpSet) -> Result<EpSet> {
        match (&self.repr, &other.repr) {
            (Repr::Finite { n, bits: a }, Repr::Finite { n: m, bits: b }) if n == m => {
                Ok(EpSet::from_bits(*n as usize, a & !b))
            }
            _ => self.combine(other, |a, b| a && !b),
        }
    }

    pub fn complement(&self) -> EpSet {
        match &self.repr {
            Repr::Finite { n, bits } => EpSet::from_bits(*n as usize, !bits),
            Repr::Periodic { head, tail } => EpSet::canonical(
                head.iter().map(|b| !b).collect(),
                tail.iter().map(|b| !b).collect(),
            ),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Finite { bits, .. } => *bits == 0,
            Repr::Periodic { head, tail } => head.is_empty() && tail.len() == 1 && !tail[0],
        }
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn is_subset(&self, other: &EpSet) -> Result<bool> {
        Ok(self.setminus(other)?.is_empty())
    }

    /// Whether the set is finite. Always true on a finite domain.
    pub fn is_finite_set(&self) -> bool {
        match &self.repr {
            Repr::Finite { .. } => true,
            Repr::Periodic { tail, .. } => tail.iter().all(|b| !b),
        }
    }

    /// Natural density, exactly `|tail| / p`.
    pub fn tail_density(&self) -> Result<Ratio<u64>> {
        match &self.repr {
            Repr::Finite { .. } => Err(Error::NeedsOmega { op: "tail density" }),
            Repr::Periodic { tail, .. } => {
                let hits = tail.iter().filter(|&&b| b).count() as u64;
                Ok(Ratio::new(hits, tail.len() as u64))
            }
        }
    }

    /// Number of members of a finite set; `None` for an infinite one.
    pub fn cardinality(&self) -> Option<usize> {
        match &self.repr {
            Repr::Finite { bits, .. } => Some(bits.count_ones() as usize),
            Repr::Periodic { head, tail } => {
                if tail.iter().any(|&b| b) {
                    None
                } else {
                    Some(head.iter().filter(|&&b| b).count())
                }
            }
        }
    }
}

/// All `2^n` subsets of a finite domain in increasing bitmask order.
pub fn enumerate_subsets(domain: IndexDomain) -> Result<impl Iterator<Item = EpSet> + Clone> {
    match domain {
        IndexDomain::Finite(n) => {
            let n = IndexDomain::finite(n)?.size().unwrap();
            Ok((0u32..1u32 << n).map(move |bits| EpSet::from_bits(n, bits)))
        }
        IndexDomain::PeriodicOmega => Err(Error::NeedsFinite {
            op: "subset enumeration",
        }),
    }
}

fn list(f: &mut fmt::Formatter<'_>, xs: &[Index]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for EpSet {
    /// `[0,2]` for finite sets, `{head:[..], p:4, tail:[0]}` otherwise. The head
    /// length is spelled out as `q:` only when it cannot be read off the head.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite { .. } => list(f, &self.head_members()),
            Repr::Periodic { .. } => {
                let head = self.head_members();
                let tail = self.tail_residues();
                if tail.is_empty() {
                    return list(f, &head);
                }
                f.write_str("{head:")?;
                list(f, &head)?;
                let implied = head.last().map_or(0, |s| s + 1);
                if self.head_len() != implied {
                    write!(f, ", q:{}", self.head_len())?;
                }
                write!(f, ", p:{}, tail:", self.modulus())?;
                list(f, &tail)?;
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpSet({} on {})", self, self.domain())
    }
}

// Operator forms panic on a domain mismatch; use the named methods to get an error.
impl BitOr for &EpSet {
    type Output = EpSet;
    fn bitor(self, rhs: &EpSet) -> EpSet {
        self.union(rhs).expect("EpSet union across domains")
    }
}

impl BitAnd for &EpSet {
    type Output = EpSet;
    fn bitand(self, rhs: &EpSet) -> EpSet {
        self.intersect(rhs)
            .expect("EpSet intersection across domains")
    }
}

impl Sub for &EpSet {
    type Output = EpSet;
    fn sub(self, rhs: &EpSet) -> EpSet {
        self.setminus(rhs).expect("EpSet difference across domains")
    }
}

impl Not for &EpSet {
    type Output = EpSet;
    fn not(self) -> EpSet {
        self.complement()
    }
}
