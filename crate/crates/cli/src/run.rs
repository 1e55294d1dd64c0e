use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fdrepair::gadgets::{
    gen_delta_k, gen_delta_prime_k, gen_random_instance, gen_vertex_cover_gadget, GadgetError,
    Graph, RandomParams,
};
use fdrepair::mpd::{brute_mpd, mpd_solve, ProbabilisticTable};
use fdrepair::report::{self, fixed};
use fdrepair::srepair::{approx_s_repair, brute_s_repair, opt_s_repair, RepairError};
use fdrepair::urepair::{brute_u_repair, repair_u};
use fdrepair::{
    infer_schema, parse_fds, parse_schema, satisfies, FdError, FdSet, Table, TableError,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Command, Family, Gadget, GenArgs, Mode, RepairArgs};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Fds { path: PathBuf, source: FdError },
    #[error("{path}: {source}")]
    Table { path: PathBuf, source: TableError },
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Repair(RepairError::IntractableFdSet(_)) => 3,
            CliError::Repair(
                RepairError::CapExceeded { .. } | RepairError::AttributeCapExceeded { .. },
            ) => 4,
            _ => 2,
        }
    }
}

struct Input {
    role: &'static str,
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(role: &'static str, path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Input {
            role,
            path: path.to_path_buf(),
            text,
        })
    }

    fn json(&self) -> Value {
        json!({
            "role": self.role,
            "path": self.path.display().to_string(),
            "sha256": format!("{:x}", Sha256::digest(self.text.as_bytes())),
        })
    }

    fn table(&self) -> Result<Table, CliError> {
        Table::from_csv(&self.text).map_err(|source| CliError::Table {
            path: self.path.clone(),
            source,
        })
    }

    fn fds_over<S: AsRef<str>>(&self, schema: &[S]) -> Result<FdSet, CliError> {
        parse_fds(&self.text, schema).map_err(|source| CliError::Fds {
            path: self.path.clone(),
            source,
        })
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the run report to `dest`, or stdout.
fn emit(
    command: &str,
    inputs: &[&Input],
    result: Value,
    started: Instant,
    dest: Option<&Path>,
) -> Result<(), CliError> {
    let envelope = json!({
        "spec_version": REPORT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs": inputs.iter().map(|i| i.json()).collect::<Vec<_>>(),
        "result": result,
        "wall_time_ms": fixed(started.elapsed().as_secs_f64() * 1000.0),
    });
    let text = serde_json::to_string_pretty(&envelope).expect("serializable") + "\n";
    match dest {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn dispatch(command: Command) -> Result<u8, CliError> {
    let started = Instant::now();
    match command {
        Command::Classify {
            fds,
            schema,
            report,
        } => {
            let fds = Input::read("fds", &fds)?;
            let mut inputs = vec![];
            let names = match schema {
                Some(path) => {
                    let s = Input::read("schema", &path)?;
                    let names =
                        parse_schema(&s.text).map_err(|source| CliError::Fds { path, source })?;
                    inputs.push(s);
                    names
                }
                None => infer_schema(&fds.text).map_err(|source| CliError::Fds {
                    path: fds.path.clone(),
                    source,
                })?,
            };
            let d = fds.fds_over(&names)?;
            inputs.insert(0, fds);
            let refs: Vec<&Input> = inputs.iter().collect();
            emit(
                "classify",
                &refs,
                report::classify_json(&d),
                started,
                report.as_deref(),
            )?;
            Ok(0)
        }
        Command::Repair(args) => repair(args, started),
        Command::Verify { table, fds, report } => {
            let table = Input::read("table", &table)?;
            let fds = Input::read("fds", &fds)?;
            let t = table.table()?;
            let d = fds.fds_over(t.schema())?;
            let violations = satisfies(&t, &d).map_err(RepairError::from)?;
            emit(
                "verify",
                &[&table, &fds],
                report::verify_json(&d, &violations),
                started,
                report.as_deref(),
            )?;
            Ok(u8::from(!violations.is_empty()))
        }
        Command::Mpd {
            table,
            fds,
            brute,
            out,
            report,
        } => {
            let table = Input::read("table", &table)?;
            let fds = Input::read("fds", &fds)?;
            let pt = ProbabilisticTable::from_csv(&table.text)?;
            let d = fds.fds_over(pt.table().schema())?;
            let r = if brute {
                brute_mpd(&d, &pt)?
            } else {
                mpd_solve(&d, &pt)?
            };
            if let Some(path) = out {
                write(
                    &path,
                    &pt.table()
                        .subset(&r.retained_ids)
                        .map_err(RepairError::from)?
                        .to_csv(),
                )?;
            }
            emit(
                "mpd",
                &[&table, &fds],
                report::mpd_json(&r),
                started,
                report.as_deref(),
            )?;
            Ok(0)
        }
        Command::Gen(args) => generate(args, started),
    }
}

fn repair(args: RepairArgs, started: Instant) -> Result<u8, CliError> {
    let table = Input::read("table", &args.table)?;
    let fds = Input::read("fds", &args.fds)?;
    let t = table.table()?;
    let d = fds.fds_over(t.schema())?;
    let (mut result, repaired, changes) = match args.mode {
        Mode::SubsetExact | Mode::SubsetApprox | Mode::SubsetBrute => {
            let r = match args.mode {
                Mode::SubsetExact => opt_s_repair(&d, &t)?,
                Mode::SubsetApprox => approx_s_repair(&d, &t)?,
                _ => brute_s_repair(&d, &t)?,
            };
            let kept = t
                .subset(&r.repair.retained_ids)
                .map_err(RepairError::from)?;
            (report::subset_json(&d, &t, &r), kept, None)
        }
        Mode::Update => {
            let r = repair_u(&d, &t)?;
            let applied = t.apply(&r.repair).map_err(RepairError::from)?;
            (
                report::update_json(&r),
                applied,
                Some(r.repair.change_log_csv(&t)),
            )
        }
        Mode::UpdateBrute => {
            let u = brute_u_repair(&d, &t)?;
            let applied = t.apply(&u).map_err(RepairError::from)?;
            (
                report::brute_update_json(&d, &u),
                applied,
                Some(u.change_log_csv(&t)),
            )
        }
    };
    if let Some(path) = &args.out {
        write(path, &repaired.to_csv())?;
    }
    if let (Some(path), Some(log)) = (&args.changes, &changes) {
        write(path, log)?;
    }
    result["mode"] = json!(mode_name(args.mode));
    emit(
        "repair",
        &[&table, &fds],
        result,
        started,
        args.report.as_deref(),
    )?;
    Ok(0)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::SubsetExact => "subset-exact",
        Mode::SubsetApprox => "subset-approx",
        Mode::SubsetBrute => "subset-brute",
        Mode::Update => "update",
        Mode::UpdateBrute => "update-brute",
    }
}

fn generate(args: GenArgs, started: Instant) -> Result<u8, CliError> {
    let mut inputs = Vec::new();
    let (table, d, result) = if let Some(Gadget::VertexCover) = args.gadget {
        let g = Graph::parse(args.edges.as_deref().unwrap_or_default())?;
        let (t, d) = gen_vertex_cover_gadget(&g);
        let result = json!({
            "gadget": "vertex-cover",
            "vertices": g.vertices().len(),
            "edges": g.edges().len(),
            "tuples": t.len(),
        });
        (Some(t), d, result)
    } else if let Some(family) = args.family {
        let k = args.k.unwrap_or_default();
        let (name, d) = match family {
            Family::Delta => ("delta", gen_delta_k(k)?),
            Family::DeltaPrime => ("delta-prime", gen_delta_prime_k(k)?),
        };
        let result = json!({ "family": name, "k": k, "fd_count": d.len() });
        (None, d, result)
    } else {
        let catalog = match &args.catalog {
            Some(path) => {
                let input = Input::read("catalog", path)?;
                let sets = split_catalog(&input.text);
                inputs.push(input);
                sets
            }
            None => Vec::new(),
        };
        let params = RandomParams {
            tuples: args.tuples,
            attrs: args.attrs,
            domain: args.domain,
            weights: args.weights.clone(),
            catalog,
        };
        let (t, d) = gen_random_instance(args.seed, &params)?;
        let result = json!({ "random": true, "seed": args.seed, "tuples": t.len(), "attributes": t.schema().len() });
        (Some(t), d, result)
    };

    let mut stdout = String::new();
    if let Some(t) = &table {
        match &args.out_table {
            Some(path) => write(path, &t.to_csv())?,
            None => stdout.push_str(&t.to_csv()),
        }
    }
    match &args.out_fds {
        Some(path) => write(path, &d.to_text())?,
        None => {
            if !stdout.is_empty() {
                stdout.push('\n');
            }
            stdout.push_str(&d.to_text());
        }
    }
    print!("{stdout}");
    if let Some(path) = &args.report {
        let refs: Vec<&Input> = inputs.iter().collect();
        emit("gen", &refs, result, started, Some(path))?;
    }
    Ok(0)
}

/// FD sets separated by blank lines.
fn split_catalog(text: &str) -> Vec<String> {
    text.split("\n\n")
        .map(str::trim)
        .filter(|block| !block.is_empty())
        .map(str::to_string)
        .collect()
}
