use anyhow::{bail, Context, Result};

use ik_lab::config::{FunctionSpec, IdealSpec, Instance, LabConfig, SpaceSpec};

use crate::InstanceArgs;

fn json_or<T: serde::de::DeserializeOwned>(text: &str, plain: impl FnOnce(&str) -> T) -> Result<T> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('[') {
        serde_json::from_str(t).with_context(|| format!("cannot parse {t:?}"))
    } else {
        Ok(plain(t))
    }
}

/// Point names from `[a,b]`, `{a,b}` or `a,b`.
pub(crate) fn parse_names(text: &str) -> Vec<String> {
    text.trim()
        .trim_start_matches(['[', '{'])
        .trim_end_matches([']', '}'])
        .split(',')
        .map(|s| s.trim().trim_matches('"').to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// The config named by `--config`, with every other flag applied on top.
pub(crate) fn load_config(args: &InstanceArgs) -> Result<LabConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            LabConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => match &args.space {
            Some(_) => LabConfig::from_json(r#"{"space": "discrete:1"}"#)?,
            None => bail!("give --config or --space"),
        },
    };
    if let Some(s) = &args.space {
        cfg.space = json_or(s, |t| SpaceSpec::Builtin(t.to_string()))?;
    }
    if let Some(d) = &args.domain {
        cfg.domain = Some(d.clone());
    }
    for (name, spec) in [("I", &args.i), ("K", &args.k)] {
        if let Some(s) = spec {
            cfg.ideals.insert(
                name.to_string(),
                json_or(s, |t| IdealSpec::Named(t.to_string()))?,
            );
        }
    }
    if let Some(f) = &args.function {
        cfg.function = Some(json_or(f, |t| FunctionSpec::Values(parse_names(t)))?);
    }
    if let Some(m) = &args.mode {
        cfg.mode = Some(m.clone());
    }
    if let Some(p) = &args.point {
        cfg.point = Some(p.clone());
    }
    if let Some(s) = &args.set {
        cfg.set = Some(parse_names(s));
    }
    Ok(cfg)
}

pub(crate) fn load(args: &InstanceArgs) -> Result<Instance> {
    Ok(load_config(args)?.resolve()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(parse_names("[a]"), ["a"]);
        assert_eq!(parse_names("{a, b}"), ["a", "b"]);
        assert_eq!(parse_names("[\"a\",\"c\"]"), ["a", "c"]);
        assert!(parse_names("[]").is_empty());
    }

    #[test]
    fn flags_override_and_fill_in() {
        let args = InstanceArgs {
            space: Some("sierpinski".into()),
            i: Some("Fin".into()),
            k: Some(r#"{"gen": [{"p": 2, "tail": [0]}]}"#.into()),
            function: Some(r#"{"period": ["a", "b"]}"#.into()),
            mode: Some("I^K".into()),
            point: Some("a".into()),
            ..InstanceArgs::default()
        };
        let inst = load(&args).unwrap();
        assert_eq!(inst.space.len(), 2);
        assert_eq!(inst.function().unwrap().cycle().len(), 2);
        assert!(inst.ideal("K").unwrap().generators().len() == 1);
        assert!(load(&InstanceArgs::default()).is_err());
    }
}
