//! Acceptance criteria, run in-process through `ik_lab_cli::run`.
//!
//! One test drives every criterion in order so the timings are not skewed
//! by parallel test threads; each prints a PASS or FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use serde_json::Value;

use ik_lab::convergence::{decide, oracle, FunctionSeq, Mode};
use ik_lab::ideals::Ideal;
use ik_lab::indexsets::EpSet;
use ik_lab::points::{cluster_points, Semantics};
use ik_lab::seqspace::mode_open_sets;
use ik_lab::topology::{enumerate_topologies, FiniteSpace, PointSet};
use ik_lab_cli::{run, EXIT_EXHAUSTED, EXIT_OK};

type Outcome = Result<String, String>;

struct Cli {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Cli {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("ik-lab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Cli {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(args: &[&str]) -> Result<Value, String> {
    let r = cli(args);
    ensure(r.code == EXIT_OK, || {
        format!("`{}` exited {}: {}", args.join(" "), r.code, r.err.trim())
    })?;
    serde_json::from_str(&r.out).map_err(|e| format!("report is not JSON: {e}"))
}

fn checks(r: &Value) -> &[Value] {
    r["checks"].as_array().map_or(&[], Vec::as_slice)
}

fn check<'a>(r: &'a Value, id: &str) -> Result<&'a Value, String> {
    checks(r)
        .iter()
        .find(|c| c["id"] == id)
        .ok_or_else(|| format!("report has no check {id}"))
}

fn count(c: &Value, field: &str) -> u64 {
    c[field].as_u64().unwrap_or(0)
}

/// Every gating check ran on at least one instance and never failed.
fn gating_clean(r: &Value) -> Result<u64, String> {
    let mut gating = 0;
    for c in checks(r).iter().filter(|c| c["gating"] == true) {
        ensure(count(c, "instances") > 0, || {
            format!("{} ran on no instances", c["id"])
        })?;
        ensure(count(c, "violations") == 0, || {
            format!(
                "{}: {} violations, e.g. {}",
                c["id"],
                count(c, "violations"),
                c["samples"][0]
            )
        })?;
        gating += 1;
    }
    ensure(gating > 0, || "no gating checks".into())?;
    Ok(gating)
}

// Bitmask models, independent of the library: a space is its family of
// opens over points 0..k, an ideal on Finite(n) is the down-set of a mask.

fn axiom_filter(k: usize) -> BTreeSet<Vec<u8>> {
    let full = (1u16 << k) - 1;
    let middle: Vec<u16> = (1..full).collect();
    let mut out = BTreeSet::new();
    for choice in 0u32..(1 << middle.len()) {
        let mut opens = vec![0, full];
        opens.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(j, _)| choice >> j & 1 == 1)
                .map(|(_, &o)| o),
        );
        let has = |o: u16| opens.contains(&o);
        if opens
            .iter()
            .all(|&a| opens.iter().all(|&b| has(a | b) && has(a & b)))
        {
            let mut fam: Vec<u8> = opens.iter().map(|&o| o as u8).collect();
            fam.sort_unstable();
            out.insert(fam);
        }
    }
    out
}

fn min_nbhd(opens: &[u8], k: usize, x: usize) -> u8 {
    opens
        .iter()
        .filter(|&&o| o >> x & 1 == 1)
        .fold(((1u16 << k) - 1) as u8, |acc, &o| acc & o)
}

fn hits(f: &[usize], u: u8) -> u32 {
    f.iter()
        .enumerate()
        .filter(|(_, &v)| u >> v & 1 == 1)
        .fold(0, |acc, (s, _)| acc | 1 << s)
}

fn functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let v = c % k;
                    c /= k;
                    v
                })
                .collect()
        })
        .collect()
}

fn library_space(opens: &[u8], k: usize) -> FiniteSpace {
    let names = (0..k)
        .map(|p| ((b'a' + p as u8) as char).to_string())
        .collect();
    FiniteSpace::new(
        names,
        opens.iter().map(|&o| PointSet::from_bits(o)).collect(),
    )
    .unwrap()
}

fn library_ideal(n: usize, g: u32) -> Ideal {
    Ideal::principal(EpSet::from_bits(n, g))
}

fn points_of(set: PointSet) -> u8 {
    set.bits()
}

/// Padded cluster set by the definition: some `M` with `Mᶜ ∈ I` makes
/// `(A_x ∩ M) ∪ Mᶜ` escape `K`.
fn padded_by_definition(opens: &[u8], k: usize, n: usize, f: &[usize], gi: u32, gk: u32) -> u8 {
    let full = (1u32 << n) - 1;
    let mut out = 0;
    for x in 0..k {
        let a = hits(f, min_nbhd(opens, k, x));
        let cluster = (0..=full)
            .filter(|&off| off & !gi == 0)
            .any(|off| ((a & !off) | off) & !gk != 0);
        if cluster {
            out |= 1 << x;
        }
    }
    out
}

fn closed_form(opens: &[u8], k: usize, f: &[usize], gi: u32, gk: u32) -> u8 {
    if gi & !gk != 0 {
        return ((1u16 << k) - 1) as u8;
    }
    (0..k)
        .filter(|&x| hits(f, min_nbhd(opens, k, x)) & !gk != 0)
        .fold(0, |acc, x| acc | 1 << x)
}

fn enumeration() -> Outcome {
    let mut counts = Vec::new();
    for (k, want) in [(2, 4), (3, 29), (4, 355)] {
        let r = cli(&["enumerate", "--spaces", &k.to_string()]);
        ensure(r.code == EXIT_OK, || {
            format!("enumerate {k} exited {}", r.code)
        })?;
        let got: usize = r
            .out
            .lines()
            .find_map(|l| l.strip_prefix("labeled topologies: "))
            .and_then(|v| v.parse().ok())
            .ok_or("no labeled count printed")?;
        let oracle = axiom_filter(k);
        ensure(got == want && oracle.len() == want, || {
            format!(
                "k={k}: command {got}, axiom filter {}, expected {want}",
                oracle.len()
            )
        })?;
        let library: BTreeSet<Vec<u8>> = enumerate_topologies(k)
            .unwrap()
            .iter()
            .map(|s| {
                let mut fam: Vec<u8> = s.opens().iter().map(|&o| points_of(o)).collect();
                fam.sort_unstable();
                fam
            })
            .collect();
        ensure(library == oracle, || {
            format!("k={k}: enumerated families differ from the axiom filter")
        })?;
        counts.push(got.to_string());
    }
    Ok(format!(
        "{} labeled topologies, same families as the axiom filter",
        counts.join("/")
    ))
}

fn oracle_agreement() -> Outcome {
    let r = report(&["verify", "oracle"])?;
    let c = check(&r, "evaluators-agree")?;
    ensure(count(c, "violations") == 0, || {
        format!(
            "{} disagreements, e.g. {}",
            count(c, "violations"),
            c["samples"][0]
        )
    })?;
    ensure(count(c, "instances") >= 2_400_000, || {
        format!("only {} comparisons", count(c, "instances"))
    })?;
    Ok(format!(
        "{} comparisons, 0 disagreements",
        count(c, "instances")
    ))
}

fn mode_relations() -> Result<(String, Value), String> {
    let r = report(&["verify", "s2"])?;
    let b = &r["bounds"];
    ensure(b["m"] == 6 && b["k"] == 3 && b["p"] == 6, || {
        format!("unexpected bounds {b}")
    })?;
    let gating = gating_clean(&r)?;
    for id in ["ik-star-implies-i", "ik-star-implies-k"] {
        let c = check(&r, id)?;
        ensure(c["gating"] == false && count(c, "violations") > 0, || {
            format!("{id} is not refuted")
        })?;
    }
    Ok((
        format!(
            "{} instances, {gating} gating checks clean, literal star forms refuted",
            r["instances"]
        ),
        r,
    ))
}

fn sequential() -> Result<(String, Value), String> {
    let r = report(&["verify", "s3"])?;
    gating_clean(&r)?;
    for c in checks(&r) {
        ensure(count(c, "violations") == 0, || {
            format!("{} has violations", c["id"])
        })?;
    }
    Ok((
        format!(
            "{} instances, {} checks clean",
            r["instances"],
            checks(&r).len()
        ),
        r,
    ))
}

fn cluster_trace() -> Outcome {
    let r = report(&["verify", "s4", "--semantics", "trace"])?;
    gating_clean(&r)?;
    ensure(
        checks(&r)
            .iter()
            .all(|c| !c["id"].as_str().unwrap_or("").starts_with("padded/")),
        || "padded checks present in a trace-only report".into(),
    )?;
    let targets: u64 = (1..=4)
        .flat_map(axiom_filter)
        .map(|opens| {
            let k = (*opens.last().unwrap() as u32).count_ones();
            let full = ((1u16 << k) - 1) as u8;
            opens.iter().filter(|&&o| o != full).count() as u64
        })
        .sum();
    for id in ["realize-round-trip-fin", "realize-some-residue-pair"] {
        let c = check(&r, id)?;
        ensure(count(c, "instances") == targets, || {
            format!(
                "{id} covered {} of {targets} closed targets",
                count(c, "instances")
            )
        })?;
    }
    let closed = check(&r, "trace/cluster-set-closed")?;
    Ok(format!(
        "{} cluster sets closed, {targets} closed targets realized with Fin and with a residue pair",
        count(closed, "instances")
    ))
}

fn padded() -> Outcome {
    // Sierpiński with {a} open, f = (b, a), I = ↓{0}, K = ↓{1}
    let inst = [
        "--space",
        "sierpinski",
        "--domain",
        "finite:2",
        "--I",
        "principal:[0]",
        "--K",
        "principal:[1]",
        "--function",
        "b,a",
    ];
    let padded = cli(&[&["cluster", "--semantics", "padded"][..], &inst].concat());
    ensure(padded.out.contains("cluster set: {a,b}"), || {
        format!("padded cluster set:\n{}", padded.out)
    })?;
    let opens = [0b00, 0b01, 0b11];
    let k_clusters = (0..2)
        .filter(|&x| hits(&[1, 0], min_nbhd(&opens, 2, x)) & !0b10 != 0)
        .fold(0u8, |a, x| a | 1 << x);
    ensure(k_clusters == 0b10, || {
        format!("C_f(K) is {k_clusters:#b}, expected {{b}}")
    })?;
    let trace = cli(&[&["cluster", "--semantics", "trace"][..], &inst].concat());
    ensure(trace.out.contains("cluster set: {b}"), || {
        format!("trace cluster set:\n{}", trace.out)
    })?;

    let found = cli(&["search", "cluster-set-differs", "--limit", "0"]);
    ensure(found.code == EXIT_OK, || {
        format!("search exited {}", found.code)
    })?;
    let want: Value = serde_json::json!({
        "domain": "finite:2",
        "space": {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]},
        "ideals": {"I": "principal:[0]", "K": "principal:[1]"},
        "function": ["b", "a"],
    });
    let matches = found.out.lines().filter(|l| {
        let v: Value = serde_json::from_str(l).unwrap_or(Value::Null);
        ["domain", "space", "ideals", "function"]
            .iter()
            .all(|f| v[f] == want[f])
    });
    ensure(matches.count() == 1, || {
        "search did not report the Sierpiński instance".into()
    })?;

    let r = report(&["verify", "s4", "--semantics", "padded"])?;
    ensure(r["bounds"]["n"] == 5, || {
        format!("finite domain bound is {}", r["bounds"]["n"])
    })?;
    let c = check(&r, "padded/closed-form-matches-search")?;
    ensure(
        count(c, "instances") > 0 && count(c, "violations") == 0,
        || {
            format!(
                "closed form: {} violations over {}",
                count(c, "violations"),
                count(c, "instances")
            )
        },
    )?;
    let observation = check(&r, "padded/clusters-inside-k-clusters")?;
    ensure(count(observation, "violations") > 0, || {
        "padded reading never leaves C_f(K)".into()
    })?;

    let mut compared = 0u64;
    for (n, max_points) in [(1, 3), (2, 3), (3, 3), (4, 3), (5, 2)] {
        let full = (1u32 << n) - 1;
        for k in 1..=max_points {
            for opens in axiom_filter(k) {
                let space = library_space(&opens, k);
                for f in functions(n, k) {
                    let seq = FunctionSeq::finite(f.clone()).unwrap();
                    for gi in 0..full {
                        let i = library_ideal(n, gi);
                        for gk in 0..full {
                            let by_def = padded_by_definition(&opens, k, n, &f, gi, gk);
                            let form = closed_form(&opens, k, &f, gi, gk);
                            let lib = cluster_points(
                                &seq,
                                &i,
                                &library_ideal(n, gk),
                                &space,
                                Semantics::Padded,
                            )
                            .unwrap();
                            ensure(by_def == form && form == points_of(lib), || {
                                format!("n={n} opens={opens:?} f={f:?} I=↓{gi:#b} K=↓{gk:#b}: definition {by_def:#b}, closed form {form:#b}, library {:#b}", points_of(lib))
                            })?;
                            compared += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "padded X ⊄ C_f(K) = {{b}}, found by search; closed form = definition = library on {compared} instances, battery {} instances",
        count(c, "instances")
    ))
}

fn degeneracy(s2: Option<&Value>, s3: Option<&Value>) -> Outcome {
    let s2 = s2.ok_or("mode-relation report unavailable")?;
    let s3 = s3.ok_or("sequential report unavailable")?;
    let conv = check(s2, "degenerate-converges")?;
    let opens = check(s3, "improper-join-trivial-opens")?;
    for c in [conv, opens] {
        ensure(
            count(c, "instances") > 0 && count(c, "violations") == 0,
            || {
                format!(
                    "{}: {} violations over {}",
                    c["id"],
                    count(c, "violations"),
                    count(c, "instances")
                )
            },
        )?;
    }
    let n = 4;
    let full = (1u32 << n) - 1;
    let mut pairs = 0;
    let mut verdicts = 0u64;
    for gi in 0..=full {
        for gk in 0..=full {
            if gi | gk != full {
                continue;
            }
            pairs += 1;
            let mode = Mode::ik(library_ideal(n, gi), library_ideal(n, gk)).unwrap();
            for k in 1..=3 {
                for opens in axiom_filter(k) {
                    let space = library_space(&opens, k);
                    for f in functions(n, k) {
                        let seq = FunctionSeq::finite(f.clone()).unwrap();
                        for x in 0..k {
                            // M = ω∖G_I lies in I*; padding off M leaves a bad set inside M ⊆ G_K
                            let u = min_nbhd(&opens, k, x);
                            let bad = !hits(&f, u) & !gi & full;
                            let by_def = bad & !gk == 0;
                            let fast = decide(&seq, x, &mode, &space).unwrap();
                            let slow = oracle(&seq, x, &mode, &space).unwrap();
                            ensure(
                                by_def && fast.converges && slow.converges && fast.degenerate,
                                || {
                                    format!("I=↓{gi:#b} K=↓{gk:#b} opens={opens:?} f={f:?} x={x}: does not converge")
                                },
                            )?;
                            verdicts += 1;
                        }
                    }
                    let fam = mode_open_sets(&space, &mode).unwrap();
                    ensure(fam == [PointSet::from_bits(0), space.whole()], || {
                        format!("I=↓{gi:#b} K=↓{gk:#b} opens={opens:?}: mode-open sets {fam:?}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "battery: {} + {} instances clean; Finite(4): {pairs} improper pairs, {verdicts} verdicts converge, only ∅ and X mode-open",
        count(conv, "instances"),
        count(opens, "instances")
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ik-lab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("all-{run}.json"));
        let r = cli(&["verify", "all", "--report", path.to_str().unwrap()]);
        ensure(r.code == EXIT_OK, || {
            format!("verify all exited {}: {}", r.code, r.err.trim())
        })?;
        let file = std::fs::read(&path).map_err(|e| e.to_string())?;
        runs.push((r.out, file));
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(runs[0] == runs[1], || "reports differ between runs".into())?;
    ensure(runs[0].0.as_bytes() == runs[0].1.as_slice(), || {
        "--report file differs from stdout".into()
    })?;
    Ok(format!("two runs, {} identical bytes", runs[0].1.len()))
}

struct Harness {
    failed: Vec<usize>,
}

impl Harness {
    fn run<T>(
        &mut self,
        n: usize,
        name: &str,
        limit: Option<Duration>,
        body: impl FnOnce() -> Result<(String, T), String>,
    ) -> Option<T> {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let (ok, detail, value) = match result {
            Ok((detail, v)) => match limit {
                Some(l) if elapsed > l => (
                    false,
                    format!("{detail}; took longer than {}s", l.as_secs()),
                    Some(v),
                ),
                _ => (true, detail, Some(v)),
            },
            Err(e) => (false, e, None),
        };
        // written to the process stdout directly so the line survives output capture
        let line = format!(
            "{} {n} {name} ({:.1}s): {detail}\n",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if !ok {
            self.failed.push(n);
        }
        value
    }
}

fn plain(o: Outcome) -> Result<(String, ()), String> {
    o.map(|d| (d, ()))
}

#[test]
fn acceptance_criteria() {
    let secs = |s| Some(Duration::from_secs(s));
    let mut h = Harness { failed: Vec::new() };
    h.run(1, "topology enumeration", secs(5), || plain(enumeration()));
    h.run(2, "fast path agrees with the oracle", secs(60), || {
        plain(oracle_agreement())
    });
    let s2 = h.run(3, "mode-relation battery", secs(60), mode_relations);
    let s3 = h.run(4, "sequential-space battery", secs(60), sequential);
    h.run(5, "cluster-point battery, trace reading", secs(60), || {
        plain(cluster_trace())
    });
    h.run(6, "padded reading", None, || plain(padded()));
    h.run(7, "degeneracy boundary", None, || {
        plain(degeneracy(s2.as_ref(), s3.as_ref()))
    });
    h.run(8, "determinism", None, || plain(determinism()));
    assert!(h.failed.is_empty(), "failed criteria: {:?}", h.failed);
}

#[test]
fn search_exhausts_when_nothing_matches() {
    let r = cli(&["search", "ideality-fails", "--bounds", "n=1"]);
    assert_eq!(r.code, EXIT_EXHAUSTED, "{}", r.out);
    assert!(r.err.contains("0 found"));
}
