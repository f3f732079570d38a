//! `key=value` defaults for command-line options.
//!
//! Keys are long option names without the leading dashes. Values are turned
//! into ordinary arguments placed right after the subcommand name, so any
//! option given on the command line overrides them.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use crate::error::{AppError, AppResult};
use crate::formats::read_text;

pub fn parse_config(text: &str, origin: &str) -> AppResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| AppError::parse(origin, i + 1, format!("expected key=value, got `{line}`")))?;
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(AppError::parse(origin, i + 1, "empty key"));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Finds `--config <path>` or `--config=<path>` in raw arguments.
pub fn find_config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Inserts config-file arguments after the subcommand token. Keys that the
/// subcommand does not accept are returned as warnings.
pub fn inject(cmd: &Command, args: Vec<OsString>, path: &Path) -> AppResult<(Vec<OsString>, Vec<String>)> {
    let pairs = parse_config(&read_text(path)?, &path.display().to_string())?;
    let Some((pos, sub)) = args.iter().enumerate().skip(1).find_map(|(i, a)| {
        let s = a.to_str()?;
        cmd.get_subcommands().find(|c| c.get_name() == s || c.get_all_aliases().any(|al| al == s)).map(|c| (i, c))
    }) else {
        return Ok((args, Vec::new()));
    };
    let mut extra = Vec::new();
    let mut warnings = Vec::new();
    for (key, value) in pairs {
        let known = sub.get_arguments().chain(cmd.get_arguments()).find(|a| a.get_long() == Some(key.as_str()));
        match known {
            None => warnings.push(format!("config key `{key}` is not an option of `{}`; ignored", sub.get_name())),
            Some(_) if key == "config" => {
                warnings.push("config files cannot include other config files; ignored".into())
            }
            Some(arg) if !arg.get_action().takes_values() => match value.as_str() {
                "true" | "1" | "yes" | "" => extra.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                other => {
                    return Err(AppError::usage(format!("config key `{key}` is a flag; `{other}` is not a boolean")))
                }
            },
            Some(_) => extra.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, extra);
    Ok((out, warnings))
}
