//! Flat `key = value` run files whose keys are long flag names.

use std::ffi::OsString;
use std::io::BufRead;

use clap::Command;

use crate::io::DataError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse<R: BufRead>(reader: R) -> Result<Vec<Entry>, DataError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| DataError::new(i + 1, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| DataError::new(i + 1, "expected `key = value`"))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(DataError::new(i + 1, "empty key"));
        }
        out.push(Entry { key, value: v.trim().to_string(), line: i + 1 });
    }
    Ok(out)
}

fn given(args: &[OsString], flag: &str) -> bool {
    let eq = format!("{flag}=");
    args.iter().filter_map(|a| a.to_str()).any(|a| a == flag || a.starts_with(&eq))
}

/// Appends file entries as flags to `args` unless the flag is already given.
///
/// `cmd` is the subcommand the flags belong to; keys it does not know are an
/// error naming the line. Switches take `true` or `false`.
pub fn merge(args: &mut Vec<OsString>, cmd: &Command, entries: &[Entry]) -> Result<(), DataError> {
    for e in entries {
        let flag = format!("--{}", e.key);
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()))
            .ok_or_else(|| DataError::new(e.line, format!("unknown key {:?} for `{}`", e.key, cmd.get_name())))?;
        if given(args, &flag) {
            continue;
        }
        if arg.get_action().takes_values() {
            args.push(flag.into());
            args.push(e.value.clone().into());
        } else {
            match e.value.as_str() {
                "true" => args.push(flag.into()),
                "false" => {}
                v => return Err(DataError::new(e.line, format!("{} expects true or false, got {v:?}", e.key))),
            }
        }
    }
    Ok(())
}

/// Appends `--flag value` when the flag is absent and the subcommand has it.
pub fn default_flag(args: &mut Vec<OsString>, cmd: &Command, long: &str, value: &str) {
    let flag = format!("--{long}");
    if cmd.get_arguments().any(|a| a.get_long() == Some(long)) && !given(args, &flag) {
        args.push(flag.into());
        args.push(value.into());
    }
}
