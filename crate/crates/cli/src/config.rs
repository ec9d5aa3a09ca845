//! Flag defaults from a JSON file.
//!
//! The file is one object keyed by long flag names, e.g.
//! `{"k": 3, "gamma": [0.5], "n-max": 48}`. Flags given on the command
//! line win.

use std::collections::BTreeSet;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Cli, Command};

pub fn load(path: &Path) -> Result<Map<String, Value>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err("config must be a JSON object".into()),
        Err(e) => Err(format!("bad config {}: {e}", path.display())),
    }
}

pub fn apply(cli: &mut Cli, matches: &ArgMatches, config: &Map<String, Value>) -> Result<(), String> {
    let root = Cli::command();
    let (name, sub_matches) = matches.subcommand().ok_or("missing subcommand")?;
    let sub = root.find_subcommand(name).ok_or("unknown subcommand")?;
    let mut used = BTreeSet::new();
    patch(&mut cli.global, &root, matches, config, &mut used)?;
    match &mut cli.command {
        Command::Norm(a) => patch(a, sub, sub_matches, config, &mut used)?,
        Command::Maximal(a) => patch(a, sub, sub_matches, config, &mut used)?,
        Command::Region(a) => patch(a, sub, sub_matches, config, &mut used)?,
        Command::Experiment(a) => patch(a, sub, sub_matches, config, &mut used)?,
    }
    let unknown: Vec<&str> = config
        .keys()
        .map(String::as_str)
        .filter(|k| !used.contains(*k))
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(format!("config keys not accepted by `{name}`: {}", unknown.join(", ")))
    }
}

fn patch<T: Serialize + DeserializeOwned>(
    target: &mut T,
    cmd: &clap::Command,
    matches: &ArgMatches,
    config: &Map<String, Value>,
    used: &mut BTreeSet<String>,
) -> Result<(), String> {
    let mut value = serde_json::to_value(&*target).map_err(|e| e.to_string())?;
    let obj = value.as_object_mut().ok_or("flags must serialise to an object")?;
    for arg in cmd.get_arguments() {
        let (Some(long), id) = (arg.get_long(), arg.get_id().as_str()) else {
            continue;
        };
        let Some(v) = config.get(long) else { continue };
        if !obj.contains_key(id) {
            continue;
        }
        used.insert(long.to_string());
        if matches.value_source(id) == Some(ValueSource::CommandLine) {
            continue;
        }
        obj.insert(id.to_string(), v.clone());
    }
    *target = serde_json::from_value(value).map_err(|e| format!("bad config value: {e}"))?;
    Ok(())
}
