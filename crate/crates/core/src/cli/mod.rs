//! Command-line front end: `run`, `sweep`, `mesh-info` and `presets`.
//!
//! Exit codes: 0 when the flow converged, 2 when it stopped at the
//! iteration limit, 1 on any error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{apply_override, effective_config, load_config, parse_value};

use crate::flow::{cfl_check, FlowConfig, FlowResult, GradientFlow};
use crate::mesh::{generate_cylinder, generate_unit_cube, generate_unit_square, SimplicialMesh};
use crate::model::preset::preset_description;
use crate::model::{Experiment, ExperimentConfig, PRESET_NAMES};
use crate::postio::{read_gmsh, write_runlog_csv, write_vtk, NamedField};
use crate::{Error, Result};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MAX_ITER: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ericksen",
    version,
    about = "Gradient flow solver for the Ericksen liquid crystal model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment
    Run(RunArgs),
    /// Run an experiment for a list of parameter values
    Sweep(SweepArgs),
    /// Print statistics of a mesh file or generator spec (square:N, cube:N, cylinder:NR,NT,NZ)
    MeshInfo { source: String },
    /// List the experiment presets
    Presets,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Named experiment
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a configuration key, e.g. --set flow.tau_n=0.05
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a VTK snapshot every N outer steps (0: final state only)
    #[arg(long)]
    pub vtk_every: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Swept key, e.g. flow.tau_n, mesh.n or flow.alpha
    #[arg(long)]
    pub param: String,
    /// Comma-separated values of the swept key
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Vec<String>,
    /// Key varied together with the swept key, e.g. --with flow.tau_s=0.1,0.025
    #[arg(long = "with", value_name = "KEY=V1,V2,...")]
    pub with: Vec<String>,
}

/// Parses arguments and runs the selected command; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CONVERGED };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::MeshInfo { source } => cmd_mesh_info(&source),
        Command::Presets => {
            print!("{}", presets_listing());
            Ok(EXIT_CONVERGED)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Summary of a finished run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub config: ExperimentConfig,
    pub result: FlowResult,
    pub out_dir: PathBuf,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.result.converged {
            EXIT_CONVERGED
        } else {
            EXIT_MAX_ITER
        }
    }

    pub fn line(&self) -> String {
        let r = &self.result;
        format!(
            "N = {}, E = {:.6}, min s = {:.6e}, err_n = {:.6e}, {}",
            r.iterations(),
            r.final_energy(),
            r.state.s.min(),
            r.admissibility.unit_length_error,
            if r.converged {
                "converged"
            } else {
                "stopped at iteration limit"
            }
        )
    }
}

fn resolve(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut config = load_config(args.preset.as_deref(), args.config.as_deref(), &args.set)?;
    if let Some(out) = &args.out {
        config.output.dir = Some(out.clone());
    }
    if let Some(every) = args.vtk_every {
        config.output.vtk_every = every;
    }
    Ok(config)
}

/// Runs a resolved configuration, writing the run log and VTK files.
pub fn execute(config: &ExperimentConfig, verbose: bool) -> Result<RunSummary> {
    let experiment = Experiment::build(config)?;
    let flow_config = FlowConfig::from_section(&config.flow, experiment.kappa)?;
    let out_dir = config
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("ericksen-out"));
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let mesh = &experiment.mesh;
    if verbose {
        let cfl = cfl_check(&flow_config, mesh);
        println!(
            "mesh: {} vertices, {} cells, h_min = {:.4e}, h_max = {:.4e}; CFL value {:.4e} ({})",
            mesh.num_vertices(),
            mesh.num_cells(),
            mesh.h_min(),
            mesh.h_max(),
            cfl.value,
            cfl.metric
        );
    }
    let flow = GradientFlow::new(mesh, flow_config, experiment.double_well, &experiment.dirichlet)?;
    let every = config.output.vtk_every;
    let result = flow.run_with(&experiment.initial, |rec, state| {
        if verbose {
            println!(
                "step {:>5}: E = {:.8}, inner = {:>4}, min s = {:.4e}, err_n = {:.4e}",
                rec.i, rec.energy, rec.inner_iters, rec.s_min, rec.err_n
            );
        }
        if every > 0 && rec.i % every == 0 {
            write_state(&out_dir.join(format!("step_{:05}.vtk", rec.i)), mesh, state)?;
        }
        Ok(())
    })?;
    let mut records = result.records.clone();
    if !config.output.wall_time {
        records.iter_mut().for_each(|r| r.wall_s = 0.0);
    }
    if !records.is_empty() {
        write_runlog_csv(out_dir.join("runlog.csv"), &records)?;
    }
    write_state(&out_dir.join("final.vtk"), mesh, &result.state)?;
    Ok(RunSummary {
        config: config.clone(),
        result,
        out_dir,
    })
}

fn write_state(path: &Path, mesh: &SimplicialMesh, state: &crate::model::EricksenState) -> Result<()> {
    write_vtk(
        path,
        mesh,
        &[NamedField::Scalar("s", &state.s), NamedField::Vector("n", &state.n)],
    )
}

pub fn cmd_run(args: &RunArgs) -> Result<i32> {
    let config = resolve(args)?;
    println!("# effective configuration\n{}", effective_config(&config));
    let summary = execute(&config, true)?;
    println!("{}", summary.line());
    println!("output written to {}", summary.out_dir.display());
    Ok(summary.exit_code())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    if args.values.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one value (--values v1,v2,...)".into(),
        ));
    }
    let mut coupled = Vec::new();
    for item in &args.with {
        let (key, list) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--with '{item}' is not of the form KEY=V1,V2,...")))?;
        let values: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
        if values.len() != args.values.len() {
            return Err(Error::Config(format!(
                "--with {key} has {} values but --values has {}",
                values.len(),
                args.values.len()
            )));
        }
        coupled.push((key.to_string(), values));
    }
    let base = resolve(&args.run)?;
    let root = base
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("ericksen-sweep"));
    fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
    let mut csv = String::from("value,N,E,s_min,err_n,status\n");
    let mut code = EXIT_CONVERGED;
    for (k, value) in args.values.iter().enumerate() {
        let mut overrides = args.run.set.clone();
        overrides.push(format!("{}={}", args.param, value));
        for (key, values) in &coupled {
            overrides.push(format!("{key}={}", values[k]));
        }
        let row = load_config(args.run.preset.as_deref(), args.run.config.as_deref(), &overrides).and_then(|mut c| {
            c.output = base.output.clone();
            c.output.dir = Some(root.join(format!("row_{k:02}")));
            execute(&c, false)
        });
        match row {
            Ok(summary) => {
                let r = &summary.result;
                let status = if r.converged { "converged" } else { "max_iter" };
                let _ = writeln!(
                    csv,
                    "{value},{},{:.12e},{:.12e},{:.12e},{status}",
                    r.iterations(),
                    r.final_energy(),
                    r.state.s.min(),
                    r.admissibility.unit_length_error
                );
                println!("{} = {value}: {}", args.param, summary.line());
                if !r.converged && code == EXIT_CONVERGED {
                    code = EXIT_MAX_ITER;
                }
            }
            Err(e) => {
                let _ = writeln!(csv, "{value},,,,,error: {}", e.to_string().replace(',', ";"));
                eprintln!("{} = {value}: error: {e}", args.param);
                code = EXIT_ERROR;
            }
        }
    }
    let path = root.join("sweep.csv");
    fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    println!("sweep table written to {}", path.display());
    Ok(code)
}

/// Loads a mesh from a file or a generator spec such as `square:32`.
pub fn mesh_from_source(source: &str) -> Result<SimplicialMesh> {
    let parse = |s: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad mesh parameter '{v}' in '{source}'")))
            })
            .collect()
    };
    match source.split_once(':') {
        Some(("square", p)) => match parse(p)?.as_slice() {
            [n] => generate_unit_square(*n),
            _ => Err(Error::Config("expected square:N".into())),
        },
        Some(("cube", p)) => match parse(p)?.as_slice() {
            [n] => generate_unit_cube(*n),
            _ => Err(Error::Config("expected cube:N".into())),
        },
        Some(("cylinder", p)) => match parse(p)?.as_slice() {
            [a, b, c] => generate_cylinder(*a, *b, *c),
            _ => Err(Error::Config("expected cylinder:N_R,N_THETA,N_Z".into())),
        },
        _ => read_gmsh(source),
    }
}

pub fn mesh_info(mesh: &SimplicialMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", mesh.dim());
    let _ = writeln!(out, "vertices: {}", mesh.num_vertices());
    let _ = writeln!(out, "cells: {}", mesh.num_cells());
    let _ = writeln!(out, "h_min: {:.6e}", mesh.h_min());
    let _ = writeln!(out, "h_max: {:.6e}", mesh.h_max());
    let _ = writeln!(out, "volume: {:.12}", mesh.total_volume());
    let _ = writeln!(out, "shape regularity (max h/inradius): {:.6}", mesh.shape_regularity());
    let _ = writeln!(out, "boundary facets: {}", mesh.num_boundary_facets());
    for (tag, count) in mesh.tag_census() {
        let _ = writeln!(out, "  tag {tag}: {count} facets");
    }
    out
}

pub fn cmd_mesh_info(source: &str) -> Result<i32> {
    let mesh = mesh_from_source(source)?;
    print!("{}", mesh_info(&mesh));
    Ok(EXIT_CONVERGED)
}

pub fn presets_listing() -> String {
    let mut out = String::new();
    for name in PRESET_NAMES {
        let _ = writeln!(out, "{name:<17} {}", preset_description(name).unwrap_or(""));
    }
    out
}
