//! Machine-readable results of the verification batteries.
//!
//! Reports are deterministic: instances are visited in a fixed order,
//! parallel chunks are merged in that order, and no timing goes into the
//! report itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Schema tag written into every report.
pub const SCHEMA: &str = "ik-lab/1";

/// Violations kept verbatim per check.
pub const MAX_SAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub statement: String,
    /// Gating checks decide the exit status; the others are informational.
    pub gating: bool,
    pub instances: u64,
    pub violations: u64,
    /// Replayable configs of the first few violations.
    pub samples: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub bounds: BTreeMap<String, Value>,
    pub instances: u64,
    pub degenerate_instances: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn gating_violations(&self) -> u64 {
        self.checks
            .iter()
            .filter(|c| c.gating)
            .map(|c| c.violations)
            .sum()
    }

    pub fn passed(&self) -> bool {
        self.gating_violations() == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Concatenates several suite reports into one.
    pub fn combine(suite: &str, reports: Vec<Report>) -> Report {
        let mut out = Report {
            schema: SCHEMA.to_string(),
            suite: suite.to_string(),
            bounds: BTreeMap::new(),
            instances: 0,
            degenerate_instances: 0,
            checks: Vec::new(),
        };
        for r in reports {
            for (k, v) in r.bounds {
                out.bounds.insert(format!("{}.{k}", r.suite), v);
            }
            out.instances += r.instances;
            out.degenerate_instances += r.degenerate_instances;
            out.checks.extend(r.checks.into_iter().map(|mut c| {
                c.id = format!("{}/{}", r.suite, c.id);
                c
            }));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Static description of one check in a battery.
#[derive(Debug, Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub statement: &'static str,
    pub gating: bool,
}

/// Running counts for a battery, indexed like its `CheckSpec` table.
#[derive(Debug, Clone)]
pub(crate) struct Tally {
    counts: Vec<(u64, u64, Vec<Value>)>,
    pub instances: u64,
    pub degenerate: u64,
}

impl Tally {
    pub fn new(n: usize) -> Tally {
        Tally {
            counts: vec![(0, 0, Vec::new()); n],
            instances: 0,
            degenerate: 0,
        }
    }

    /// Records one instance of check `idx`; `sample` is only built on a violation.
    #[inline]
    pub fn record(&mut self, idx: usize, ok: bool, sample: impl FnOnce() -> Value) {
        let c = &mut self.counts[idx];
        c.0 += 1;
        if !ok {
            c.1 += 1;
            if c.2.len() < MAX_SAMPLES {
                c.2.push(sample());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            a.0 += b.0;
            a.1 += b.1;
            for s in b.2 {
                if a.2.len() < MAX_SAMPLES {
                    a.2.push(s);
                }
            }
        }
        self.instances += other.instances;
        self.degenerate += other.degenerate;
    }

    pub fn merge_all(n: usize, parts: impl IntoIterator<Item = Tally>) -> Tally {
        let mut t = Tally::new(n);
        for p in parts {
            t.merge(p);
        }
        t
    }

    pub fn into_report(
        self,
        suite: &str,
        specs: &[CheckSpec],
        bounds: BTreeMap<String, Value>,
    ) -> Report {
        let checks = specs
            .iter()
            .zip(self.counts)
            .map(|(s, (instances, violations, samples))| Check {
                id: s.id.to_string(),
                statement: s.statement.to_string(),
                gating: s.gating,
                instances,
                violations,
                samples,
            })
            .collect();
        Report {
            schema: SCHEMA.to_string(),
            suite: suite.to_string(),
            bounds,
            instances: self.instances,
            degenerate_instances: self.degenerate,
            checks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPECS: [CheckSpec; 2] = [
        CheckSpec {
            id: "a",
            statement: "first",
            gating: true,
        },
        CheckSpec {
            id: "b",
            statement: "second",
            gating: false,
        },
    ];

    #[test]
    fn tally_counts_and_caps_samples() {
        let mut t = Tally::new(2);
        for i in 0..10 {
            t.record(0, i % 2 == 0, || Value::from(i));
            t.record(1, false, || Value::from(i));
        }
        let r = t.into_report("s", &SPECS, BTreeMap::new());
        assert_eq!(r.checks[0].instances, 10);
        assert_eq!(r.checks[0].violations, 5);
        assert_eq!(
            r.checks[0].samples,
            (0..5).map(|i| Value::from(2 * i + 1)).collect::<Vec<_>>()
        );
        assert_eq!(r.gating_violations(), 5);
        assert!(!r.passed());
    }

    #[test]
    fn merging_keeps_order() {
        let mut a = Tally::new(2);
        a.record(1, false, || Value::from("a"));
        let mut b = Tally::new(2);
        b.record(1, false, || Value::from("b"));
        let t = Tally::merge_all(2, [a, b]);
        let r = t.into_report("s", &SPECS, BTreeMap::new());
        assert_eq!(
            r.checks[1].samples,
            vec![Value::from("a"), Value::from("b")]
        );
        assert!(r.passed());
        let all = Report::combine("all", vec![r.clone(), r]);
        assert_eq!(all.checks.len(), 4);
        assert_eq!(all.checks[0].id, "s/a");
    }
}
