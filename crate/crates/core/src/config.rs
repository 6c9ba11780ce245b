//! JSON instance descriptions.
//!
//! A [`LabConfig`] names a space, some ideals, a function, a mode and a
//! point. Every violation in a report is written in this format, so it can
//! be fed back to the CLI as is.
//!
//! ```json
//! {
//!   "domain": "finite:4",
//!   "space": "sierpinski",
//!   "ideals": {"I": "principal:[0,1]", "K": "principal:[2]"},
//!   "function": ["b", "a", "b", "a"],
//!   "mode": "I^K",
//!   "point": "a"
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::convergence::{FunctionSeq, IdealEnv, Mode};
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::indexsets::{EpSet, Index, IndexDomain};
use crate::points::Semantics;
use crate::topology::{FiniteSpace, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    /// `"finite:n"` or `"omega"`; inferred from the function when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, IdealSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// A point set, for openness queries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantics: Option<Semantics>,
    /// Which battery check produced this instance, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    /// Anything else a battery recorded about the instance; not resolved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    /// `"sierpinski"`, `"discrete:k"`, `"indiscrete:k"`, `"chain:k"`.
    Builtin(String),
    Explicit {
        points: Vec<String>,
        opens: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    /// `"Fin"`, `"I0"` or `"principal:[0,1]"`.
    Named(String),
    Generated {
        gen: Vec<SetSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    List(Vec<Index>),
    Periodic(PeriodicSetSpec),
}

/// `{head:[...], p:4, tail:[0]}`, with `q` only when the head ends in non-members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicSetSpec {
    #[serde(default)]
    pub head: Vec<Index>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Index>,
    pub p: Index,
    pub tail: Vec<Index>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    /// Values on a finite domain.
    Values(Vec<String>),
    Periodic(PeriodicFunctionSpec),
}

/// `head` first, then `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicFunctionSpec {
    #[serde(default)]
    pub head: Vec<String>,
    pub period: Vec<String>,
}

/// A resolved config: validated library objects.
#[derive(Debug, Clone)]
pub struct Instance {
    pub domain: IndexDomain,
    pub space: FiniteSpace,
    pub ideals: IdealEnv,
    pub function: Option<FunctionSeq>,
    pub mode: Option<Mode>,
    pub point: Option<Point>,
    pub set: Option<PointSet>,
    pub semantics: Option<Semantics>,
}

fn missing(what: &str) -> Error {
    Error::Config(format!("missing \"{what}\""))
}

impl Instance {
    pub fn function(&self) -> Result<&FunctionSeq> {
        self.function.as_ref().ok_or_else(|| missing("function"))
    }

    pub fn mode(&self) -> Result<&Mode> {
        self.mode.as_ref().ok_or_else(|| missing("mode"))
    }

    pub fn point(&self) -> Result<Point> {
        self.point.ok_or_else(|| missing("point"))
    }

    pub fn set(&self) -> Result<PointSet> {
        self.set.ok_or_else(|| missing("set"))
    }

    pub fn ideal(&self, name: &str) -> Result<&Ideal> {
        self.ideals.get(name)
    }
}

impl LabConfig {
    pub fn from_json(text: &str) -> Result<LabConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// A config describing `space` over `domain`, to be filled in with the `with_*` methods.
    pub fn describe(space: &FiniteSpace, domain: IndexDomain) -> LabConfig {
        LabConfig {
            domain: Some(domain.to_string()),
            space: SpaceSpec::from_space(space),
            ideals: BTreeMap::new(),
            function: None,
            mode: None,
            point: None,
            set: None,
            semantics: None,
            check: None,
            context: None,
        }
    }

    pub fn with_ideal(mut self, name: &str, ideal: &Ideal) -> LabConfig {
        self.ideals
            .insert(name.to_string(), IdealSpec::from_ideal(ideal));
        self
    }

    pub fn with_function(mut self, f: &FunctionSeq, space: &FiniteSpace) -> LabConfig {
        self.function = Some(FunctionSpec::from_function(f, space));
        self
    }

    pub fn with_mode(mut self, mode: &str) -> LabConfig {
        self.mode = Some(mode.to_string());
        self
    }

    pub fn with_point(mut self, x: Point, space: &FiniteSpace) -> LabConfig {
        self.point = Some(space.name(x).to_string());
        self
    }

    pub fn with_set(mut self, a: PointSet, space: &FiniteSpace) -> LabConfig {
        self.set = Some(a.iter().map(|p| space.name(p).to_string()).collect());
        self
    }

    pub fn with_semantics(mut self, sem: Semantics) -> LabConfig {
        self.semantics = Some(sem);
        self
    }

    pub fn with_check(mut self, id: &str) -> LabConfig {
        self.check = Some(id.to_string());
        self
    }

    pub fn with_context(mut self, context: serde_json::Value) -> LabConfig {
        self.context = Some(context);
        self
    }

    pub fn resolve(&self) -> Result<Instance> {
        let space = self.space.resolve()?;
        let domain = match (&self.domain, &self.function) {
            (Some(d), _) => d.parse()?,
            (None, Some(FunctionSpec::Values(v))) => IndexDomain::finite(v.len())?,
            (None, _) => IndexDomain::PeriodicOmega,
        };
        let mut ideals = IdealEnv::new(domain);
        for (name, spec) in &self.ideals {
            if !is_ideal_name(name) {
                return Err(Error::Config(format!(
                    "ideal name {name:?} must be an uppercase letter followed by digits"
                )));
            }
            ideals.insert(name, spec.resolve(domain)?)?;
        }
        let function = self
            .function
            .as_ref()
            .map(|f| f.resolve(domain, &space))
            .transpose()?;
        let mode = self
            .mode
            .as_deref()
            .map(|m| ideals.parse_mode(m))
            .transpose()?;
        let point = self.point.as_deref().map(|p| space.point(p)).transpose()?;
        let set = self
            .set
            .as_ref()
            .map(|names| {
                names
                    .iter()
                    .map(|n| space.point(n))
                    .collect::<Result<PointSet>>()
            })
            .transpose()?;
        Ok(Instance {
            domain,
            space,
            ideals,
            function,
            mode,
            point,
            set,
            semantics: self.semantics,
        })
    }
}

fn is_ideal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_digit())
        || name == "Fin"
}

impl SpaceSpec {
    pub fn from_space(space: &FiniteSpace) -> SpaceSpec {
        SpaceSpec::Explicit {
            points: space.names().to_vec(),
            opens: space
                .opens()
                .iter()
                .map(|u| u.iter().map(|p| space.name(p).to_string()).collect())
                .collect(),
        }
    }

    pub fn resolve(&self) -> Result<FiniteSpace> {
        match self {
            SpaceSpec::Builtin(name) => FiniteSpace::builtin(name),
            SpaceSpec::Explicit { points, opens } => {
                let names: Vec<&str> = points.iter().map(String::as_str).collect();
                let opens: Vec<Vec<&str>> = opens
                    .iter()
                    .map(|u| u.iter().map(String::as_str).collect())
                    .collect();
                let opens: Vec<&[&str]> = opens.iter().map(Vec::as_slice).collect();
                FiniteSpace::from_named(&names, &opens)
            }
        }
    }
}

impl IdealSpec {
    pub fn from_ideal(ideal: &Ideal) -> IdealSpec {
        match ideal.domain() {
            IndexDomain::Finite(_) => {
                let members = ideal.grand_union().head_members();
                IdealSpec::Named(format!("principal:{}", index_list(&members)))
            }
            IndexDomain::PeriodicOmega if ideal.generators().is_empty() => {
                IdealSpec::Named("Fin".into())
            }
            IndexDomain::PeriodicOmega => IdealSpec::Generated {
                gen: ideal.generators().iter().map(SetSpec::from_set).collect(),
            },
        }
    }

    pub fn resolve(&self, domain: IndexDomain) -> Result<Ideal> {
        match self {
            IdealSpec::Named(name) if name == "Fin" || name == "I0" => match domain {
                IndexDomain::PeriodicOmega => Ok(Ideal::fin()),
                IndexDomain::Finite(_) => Err(Error::Config(format!(
                    "{name} is improper on a finite domain"
                ))),
            },
            IdealSpec::Named(name) => {
                let list = name
                    .strip_prefix("principal:")
                    .ok_or_else(|| Error::Config(format!("unknown ideal {name:?}")))?;
                let members: Vec<Index> = serde_json::from_str(list)
                    .map_err(|e| Error::Config(format!("bad member list in {name:?}: {e}")))?;
                Ok(Ideal::principal(EpSet::from_indices(domain, &members)?))
            }
            IdealSpec::Generated { gen } => {
                let sets = gen
                    .iter()
                    .map(|s| s.resolve(domain))
                    .collect::<Result<Vec<_>>>()?;
                Ideal::generated(domain, sets)
            }
        }
    }
}

fn index_list(xs: &[Index]) -> String {
    serde_json::to_string(xs).expect("integers serialize")
}

impl SetSpec {
    pub fn from_set(set: &EpSet) -> SetSpec {
        if set.domain().is_finite() || set.is_finite_set() {
            return SetSpec::List(set.head_members());
        }
        let head = set.head_members();
        let q = set.head_len();
        let implied = head.last().map_or(0, |&s| s + 1);
        SetSpec::Periodic(PeriodicSetSpec {
            head,
            q: (q != implied).then_some(q),
            p: set.modulus(),
            tail: set.tail_residues(),
        })
    }

    pub fn resolve(&self, domain: IndexDomain) -> Result<EpSet> {
        match self {
            SetSpec::List(members) => EpSet::from_indices(domain, members),
            SetSpec::Periodic(spec) => {
                if domain.is_finite() {
                    return Err(Error::NeedsOmega { op: "periodic set" });
                }
                let q = spec
                    .q
                    .unwrap_or_else(|| spec.head.iter().max().map_or(0, |&s| s + 1));
                EpSet::periodic(&spec.head, q, spec.p, &spec.tail)
            }
        }
    }
}

impl FunctionSpec {
    pub fn from_function(f: &FunctionSeq, space: &FiniteSpace) -> FunctionSpec {
        let names = |v: &[Point]| v.iter().map(|&p| space.name(p).to_string()).collect();
        match f.domain() {
            IndexDomain::Finite(_) => FunctionSpec::Values(names(f.head())),
            IndexDomain::PeriodicOmega => FunctionSpec::Periodic(PeriodicFunctionSpec {
                head: names(f.head()),
                period: names(f.cycle()),
            }),
        }
    }

    pub fn resolve(&self, domain: IndexDomain, space: &FiniteSpace) -> Result<FunctionSeq> {
        let points = |v: &[String]| v.iter().map(|n| space.point(n)).collect::<Result<Vec<_>>>();
        let f = match self {
            FunctionSpec::Values(v) => FunctionSeq::finite(points(v)?)?,
            FunctionSpec::Periodic(spec) => {
                FunctionSeq::periodic(points(&spec.head)?, points(&spec.period)?)?
            }
        };
        if f.domain() != domain {
            return Err(Error::DomainMismatch(f.domain(), domain));
        }
        Ok(f)
    }
}
