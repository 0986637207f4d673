//! `wnet` command-line front end.

mod commands;
mod params;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Arg, ArgAction, ArgMatches, Command};
use wnet::analysis::ExportFormat;

use commands::{CommandSpec, COMMANDS, COMMON};
use params::{InvalidInput, ParamSpec, Resolved};

const EXIT_INVALID: u8 = 1;
const EXIT_INVARIANT: u8 = 2;

fn param_arg(spec: &ParamSpec) -> Arg {
    let help = if spec.default.is_empty() {
        spec.help.to_string()
    } else {
        format!("{} [default: {}]", spec.help, spec.default)
    };
    Arg::new(spec.name)
        .long(spec.name)
        .value_name("VALUE")
        .help(help)
        .allow_hyphen_values(true)
}

fn cli() -> Command {
    let subcommands = COMMANDS.iter().map(|c| {
        Command::new(c.name)
            .about(c.about)
            .args(c.params.iter().chain(COMMON).map(param_arg))
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .value_parser(clap::value_parser!(PathBuf))
                    .help("TOML file of parameters; flags take precedence"),
            )
            .arg(
                Arg::new("dry-run")
                    .long("dry-run")
                    .action(ArgAction::SetTrue)
                    .help("print the resolved parameters and their hash, then exit"),
            )
    });
    Command::new("wnet")
        .about("Distribution of W-class states over noisy quantum networks")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .subcommands(subcommands)
}

fn resolve(spec: &CommandSpec, m: &ArgMatches) -> anyhow::Result<Resolved> {
    let all = || spec.params.iter().chain(COMMON);
    let flags: BTreeMap<&'static str, String> = all()
        .filter_map(|p| m.get_one::<String>(p.name).map(|v| (p.name, v.clone())))
        .collect();
    let config = match m.get_one::<PathBuf>("config") {
        Some(path) => params::load_config(path)?,
        None => BTreeMap::new(),
    };
    Resolved::resolve(spec.name, all(), &flags, &config)
}

fn output_path(r: &Resolved, ext: &str) -> Option<PathBuf> {
    match r.word("out") {
        Some(path) if !path.is_empty() => Some(PathBuf::from(path)),
        _ => std::env::var_os("WNET_OUT_DIR")
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{}.{ext}", r.command))),
    }
}

fn run(spec: &CommandSpec, m: &ArgMatches) -> anyhow::Result<u8> {
    let r = resolve(spec, m)?;
    if m.get_flag("dry-run") {
        print!("{}", r.canonical());
        println!("hash = {}", r.hash());
        return Ok(0);
    }
    let outcome = (spec.run)(&r)?;
    let word = r.word("format").unwrap_or("csv");
    let format: ExportFormat = word.parse()?;
    let mut table = outcome.table;
    table
        .meta
        .insert("command".into(), serde_json::json!(r.command));
    table
        .meta
        .insert("params_hash".into(), serde_json::json!(r.hash()));
    let bytes = table.to_bytes(format)?;
    let summary = format!("{}: {} [params {}]", r.command, outcome.summary, r.hash());
    match output_path(&r, word) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
            eprintln!("{summary}");
        }
    }
    Ok(match outcome.violation {
        Some(msg) => {
            eprintln!("error: {msg}");
            EXIT_INVARIANT
        }
        None => 0,
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<wnet::Error>() {
        Some(e) if e.is_invariant_violation() => EXIT_INVARIANT,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let spec = COMMANDS
        .iter()
        .find(|c| c.name == name)
        .expect("subcommands come from COMMANDS");
    match run(spec, sub) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            if err.downcast_ref::<InvalidInput>().is_some() {
                eprintln!("error: {err}");
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
