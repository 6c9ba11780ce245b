//! Ideals given by finitely many generators.
//!
//! On ω an ideal here is the family `{A : A \ (G_1 ∪ .. ∪ G_k) is finite}`,
//! i.e. the ideal generated by the generators together with Fin. On a finite
//! domain it is the down-set of the union of the generators; there every
//! ideal has this form, so nothing is lost.

use std::fmt;

use crate::error::{Error, Result};
use crate::indexsets::{enumerate_subsets, EpSet, Index, IndexDomain};

/// Largest finite domain for exhaustive ideal enumeration.
pub const MAX_ENUMERATED_IDEAL_DOMAIN: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    domain: IndexDomain,
    generators: Vec<EpSet>,
    grand_union: EpSet,
}

impl Ideal {
    /// The ideal of finite subsets of ω.
    pub fn fin() -> Ideal {
        Ideal {
            domain: IndexDomain::PeriodicOmega,
            generators: Vec::new(),
            grand_union: EpSet::empty(IndexDomain::PeriodicOmega),
        }
    }

    /// The density-zero ideal, seen through eventually periodic sets.
    ///
    /// An eventually periodic set has density zero exactly when its tail is
    /// empty, so on this model the ideal coincides with [`Ideal::fin`].
    pub fn density_zero() -> Ideal {
        Ideal::fin()
    }

    pub fn generated(domain: IndexDomain, generators: Vec<EpSet>) -> Result<Ideal> {
        let mut grand_union = EpSet::empty(domain);
        for g in &generators {
            grand_union = grand_union.union(g)?;
        }
        Ok(Ideal {
            domain,
            generators,
            grand_union,
        })
    }

    /// Ideal generated by a single set (plus Fin on ω).
    pub fn principal(set: EpSet) -> Ideal {
        Ideal::generated(set.domain(), vec![set]).expect("single generator")
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn generators(&self) -> &[EpSet] {
        &self.generators
    }

    /// Whether Fin is part of the ideal; true exactly on ω.
    pub fn includes_fin(&self) -> bool {
        self.domain == IndexDomain::PeriodicOmega
    }

    /// Union of all generators (∅ when there are none).
    pub fn grand_union(&self) -> &EpSet {
        &self.grand_union
    }

    pub fn contains(&self, set: &EpSet) -> Result<bool> {
        Ok(negligible(&set.setminus(&self.grand_union)?))
    }

    pub fn is_proper(&self) -> bool {
        !negligible(&self.grand_union.complement())
    }

    /// Membership in the dual filter: `M ∈ I*` iff the complement of `M` is in `I`.
    pub fn in_dual_filter(&self, set: &EpSet) -> Result<bool> {
        if !self.is_proper() {
            return Err(Error::ImproperIdeal);
        }
        self.contains(&set.complement())
    }

    /// `A ∈ I⁺`, i.e. `A ∉ I`.
    pub fn is_positive(&self, set: &EpSet) -> Result<bool> {
        Ok(!self.contains(set)?)
    }

    /// Smallest ideal containing both; may be improper.
    pub fn join(&self, other: &Ideal) -> Result<Ideal> {
        self.domain.check_same(other.domain)?;
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Ideal {
            domain: self.domain,
            generators,
            grand_union: self.grand_union.union(&other.grand_union)?,
        })
    }

    /// Ideal generated by this one and one more set; properness is left to the caller.
    pub fn extend_by_member(&self, member: &EpSet) -> Result<Ideal> {
        self.join(&Ideal::principal(member.clone()))
    }

    /// `self ⊆ other` as families of sets.
    pub fn is_subideal_of(&self, other: &Ideal) -> Result<bool> {
        other.contains(&self.grand_union)
    }

    /// Same family of sets, regardless of how the generators are written.
    pub fn same_family(&self, other: &Ideal) -> Result<bool> {
        Ok(self.is_subideal_of(other)? && other.is_subideal_of(self)?)
    }

    /// The largest dual-filter set: the complement of the grand union. Every
    /// other member of `I*` is contained in it up to a finite set.
    pub fn canonical_witness(&self) -> Result<EpSet> {
        if !self.is_proper() {
            return Err(Error::ImproperIdeal);
        }
        Ok(self.grand_union.complement())
    }
}

/// Members of every ideal: the empty set on a finite domain, finite sets on ω.
pub(crate) fn negligible(set: &EpSet) -> bool {
    match set.domain() {
        IndexDomain::Finite(_) => set.is_empty(),
        IndexDomain::PeriodicOmega => set.is_finite_set(),
    }
}

/// `I ∪ K` generates a proper ideal, i.e. no `A ∈ I`, `B ∈ K` cover the index set.
pub fn ideality_condition(i: &Ideal, k: &Ideal) -> Result<bool> {
    Ok(i.join(k)?.is_proper())
}

/// Two ideals on the same domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPair {
    pub i: Ideal,
    pub k: Ideal,
}

impl IdealPair {
    pub fn new(i: Ideal, k: Ideal) -> Result<IdealPair> {
        i.domain().check_same(k.domain())?;
        Ok(IdealPair { i, k })
    }

    pub fn domain(&self) -> IndexDomain {
        self.i.domain()
    }

    pub fn join(&self) -> Ideal {
        self.i.join(&self.k).expect("pair domains agree")
    }

    pub fn satisfies_ideality(&self) -> bool {
        self.join().is_proper()
    }
}

/// A fixed family of ideals on ω generated by residue classes, every
/// modulus at most `max_modulus`, listed with short names. It includes
/// Fin, nested pairs such as `{0 mod 4} ⊆ {0 mod 2}`, and complementary
/// pairs whose join is improper.
pub fn residue_library(max_modulus: Index) -> Vec<(String, Ideal)> {
    let classes: [(Index, &[Index]); 7] = [
        (2, &[0]),
        (2, &[1]),
        (3, &[0]),
        (3, &[1, 2]),
        (4, &[0]),
        (4, &[2]),
        (6, &[0]),
    ];
    let mut out = vec![("Fin".to_string(), Ideal::fin())];
    for (p, rs) in classes {
        if p <= max_modulus {
            let set = EpSet::residues(p, rs).expect("valid residues");
            let rs: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
            out.push((
                format!("{{{} mod {p}}}", rs.join(",")),
                Ideal::principal(set),
            ));
        }
    }
    out
}

/// Every proper ideal on `{0..n-1}`: the down-sets `↓B` for `B ⊊ S`, in
/// increasing order of `B`'s bitmask.
pub fn enumerate_ideals_finite(domain: IndexDomain) -> Result<impl Iterator<Item = Ideal> + Clone> {
    let n = match domain {
        IndexDomain::Finite(n) => n,
        IndexDomain::PeriodicOmega => {
            return Err(Error::NeedsFinite {
                op: "ideal enumeration",
            })
        }
    };
    if n > MAX_ENUMERATED_IDEAL_DOMAIN {
        return Err(Error::TooLarge {
            what: "ideal enumeration domain",
            got: n,
            max: MAX_ENUMERATED_IDEAL_DOMAIN,
        });
    }
    let domain = IndexDomain::finite(n)?;
    Ok(enumerate_subsets(domain)?
        .filter(|b| !b.is_full())
        .map(Ideal::principal))
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.domain {
            IndexDomain::Finite(_) => write!(f, "↓{}", self.grand_union),
            IndexDomain::PeriodicOmega if self.generators.is_empty() => f.write_str("Fin"),
            IndexDomain::PeriodicOmega => {
                f.write_str("gen(")?;
                for (i, g) in self.generators.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self} on {})", self.domain)
    }
}
