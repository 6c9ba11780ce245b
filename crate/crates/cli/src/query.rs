use std::io::Write;

use anyhow::{Context, Result};

use ik_lab::config::Instance;
use ik_lab::convergence::{bad_set, limit_set_with, Evaluator, FastPath, Mode, Oracle};
use ik_lab::ideals::Ideal;
use ik_lab::points::{cluster_details, limit_points, Semantics};
use ik_lab::seqspace::{mode_open, mode_open_sets};
use ik_lab::topology::{enumerate_topologies, topologies_up_to_homeomorphism};

use crate::input::load;
use crate::{InstanceArgs, EXIT_NEGATIVE, EXIT_OK};

fn evaluator(oracle: bool) -> Box<dyn Evaluator> {
    if oracle {
        Box::new(Oracle::default())
    } else {
        Box::new(FastPath)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pair(inst: &Instance) -> Result<(&Ideal, &Ideal)> {
    Ok((inst.ideal("I")?, inst.ideal("K")?))
}

/// The configured mode, or `I^K` when the config names both ideals.
fn mode_or_ik(inst: &Instance) -> Result<Mode> {
    match &inst.mode {
        Some(m) => Ok(m.clone()),
        None => {
            let (i, k) = pair(inst).context("no mode given and no I and K to default to I^K")?;
            Ok(Mode::ik(i.clone(), k.clone())?)
        }
    }
}

pub(crate) fn check(args: &InstanceArgs, oracle: bool, out: &mut dyn Write) -> Result<i32> {
    let inst = load(args)?;
    let (f, x, mode) = (inst.function()?, inst.point()?, inst.mode()?);
    let space = &inst.space;
    let v = evaluator(oracle).decide(f, x, mode, space)?;
    writeln!(out, "function: {}", f.display_in(space))?;
    writeln!(out, "point: {}", space.name(x))?;
    writeln!(out, "converges: {}", yes(v.converges))?;
    if v.degenerate {
        writeln!(out, "degenerate: yes (the effective ideal is improper)")?;
    }
    for (j, m) in v.witnesses.iter().enumerate() {
        writeln!(out, "witness M{}: {m}", j + 1)?;
    }
    if let Some(u) = v.failing_neighborhood {
        writeln!(out, "failing neighborhood: {}", space.format_set(u))?;
        writeln!(out, "bad set: {}", bad_set(f, u))?;
    }
    Ok(if v.converges { EXIT_OK } else { EXIT_NEGATIVE })
}

pub(crate) fn limits(
    args: &InstanceArgs,
    sem: Option<Semantics>,
    oracle: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let inst = load(args)?;
    let f = inst.function()?;
    let space = &inst.space;
    writeln!(out, "function: {}", f.display_in(space))?;
    if let Some(mode) = &inst.mode {
        let l = limit_set_with(evaluator(oracle).as_ref(), f, mode, space)?;
        writeln!(out, "limits: {}", space.format_set(l))?;
    }
    if let Ok((i, k)) = pair(&inst) {
        if !f.domain().is_finite() {
            let sems = match sem.or(inst.semantics) {
                Some(s) => vec![s],
                None => Semantics::BOTH.to_vec(),
            };
            for s in sems {
                let l = limit_points(f, i, k, space, s)?;
                writeln!(
                    out,
                    "I^K-limit points ({}): {}",
                    s.name(),
                    space.format_set(l)
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub(crate) fn cluster(
    args: &InstanceArgs,
    sem: Option<Semantics>,
    out: &mut dyn Write,
) -> Result<i32> {
    let inst = load(args)?;
    let f = inst.function()?;
    let (i, k) = pair(&inst)?;
    let space = &inst.space;
    let sem = sem.or(inst.semantics).unwrap_or_default();
    let rows = cluster_details(f, i, k, space, sem)?;
    writeln!(out, "function: {}", f.display_in(space))?;
    writeln!(out, "semantics: {}", sem.name())?;
    writeln!(
        out,
        "{:<8} {:<24} {:<5} {:<5} {:<24} cluster",
        "point", "A_x", "in I", "in K", "tested"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:<8} {:<24} {:<5} {:<5} {:<24} {}",
            space.name(r.point),
            r.hits.to_string(),
            yes(r.hits_in_i),
            yes(r.hits_in_k),
            r.tested.to_string(),
            yes(r.cluster)
        )?;
    }
    let set = rows.iter().filter(|r| r.cluster).map(|r| r.point).collect();
    writeln!(out, "cluster set: {}", space.format_set(set))?;
    Ok(EXIT_OK)
}

pub(crate) fn open(args: &InstanceArgs, closed: bool, out: &mut dyn Write) -> Result<i32> {
    let inst = load(args)?;
    let mode = mode_or_ik(&inst)?;
    let space = &inst.space;
    let a = inst.set()?;
    let tested = if closed {
        space.whole().difference(a)
    } else {
        a
    };
    let v = mode_open(space, tested, &mode)?;
    writeln!(out, "set: {}", space.format_set(a))?;
    if closed {
        writeln!(out, "closed: {}", yes(space.is_closed_set(a)))?;
        writeln!(out, "mode-closed: {}", yes(v.is_mode_open))?;
    } else {
        writeln!(out, "open: {}", yes(space.is_open_set(a)))?;
        writeln!(out, "mode-open: {}", yes(v.is_mode_open))?;
    }
    if let Some((f, x)) = &v.counterexample {
        writeln!(
            out,
            "counterexample: {} stays in {} and converges to {}",
            f.display_in(space),
            space.format_set(space.whole().difference(tested)),
            space.name(*x)
        )?;
    }
    Ok(if v.is_mode_open {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

pub(crate) fn sequential(args: &InstanceArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load(args)?;
    let mode = mode_or_ik(&inst)?;
    let space = &inst.space;
    let fam = mode_open_sets(space, &mode)?;
    let names: Vec<String> = fam.iter().map(|&o| space.format_set(o)).collect();
    writeln!(out, "mode-open sets: {}", names.join(" "))?;
    let not_open: Vec<String> = fam
        .iter()
        .filter(|&&o| !space.is_open_set(o))
        .map(|&o| space.format_set(o))
        .collect();
    writeln!(out, "sequential: {}", yes(not_open.is_empty()))?;
    if !not_open.is_empty() {
        writeln!(out, "mode-open but not open: {}", not_open.join(" "))?;
    }
    Ok(if not_open.is_empty() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

pub(crate) fn enumerate(k: usize, list: bool, out: &mut dyn Write) -> Result<i32> {
    let labeled = enumerate_topologies(k)?;
    let classes = topologies_up_to_homeomorphism(k)?;
    writeln!(out, "points: {k}")?;
    writeln!(out, "labeled topologies: {}", labeled.len())?;
    writeln!(out, "up to homeomorphism: {}", classes.len())?;
    if list {
        for s in &classes {
            let opens: Vec<String> = s.opens().iter().map(|&o| s.format_set(o)).collect();
            writeln!(out, "{}", opens.join(" "))?;
        }
    }
    Ok(EXIT_OK)
}
