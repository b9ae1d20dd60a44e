//! `conigen` command line: batch generation with verification, and manifest checking.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use conigen::certify::Tolerances;
use conigen::io::manifest::{self, Manifest, Payload};
use conigen::io::{cbf, mps, sdpa};
use conigen::lo::{gen_lo_both, gen_lo_interior, gen_lo_optimal, LinearInstance, LoPartition};
use conigen::sdo::{
    gen_sdo_block_both, gen_sdo_block_optimal, gen_sdo_eig_both, gen_sdo_eig_optimal, gen_sdo_interior, gen_sdo_maxcomp,
    gen_sdo_maxcomp_both, gen_sdo_maxcomp_empty_b,
};
use conigen::soco::{gen_soco_both, gen_soco_interior, gen_soco_maxcomp, gen_soco_maxcomp_both, gen_soco_optimal, ConeLabel, SocoInstance};
use conigen::{Error, GenControls};

pub const OUT_DIR_ENV: &str = "CONIGEN_OUT_DIR";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "conigen", version, about = "Generate conic test instances with certified solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate, verify and write instances.
    Gen(Box<GenArgs>),
    /// Re-check a manifest and the files it references.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Lo,
    Sdo,
    Soco,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Interior,
    Optimal,
    Both,
    Maxcomp,
    MaxcompBoth,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Interior => "interior",
            Mode::Optimal => "optimal",
            Mode::Both => "both",
            Mode::Maxcomp => "maxcomp",
            Mode::MaxcompBoth => "maxcomp-both",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Mps,
    Sdpa,
    Cbf,
    Manifest,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Mps => "mps",
            Format::Sdpa => "sdpa",
            Format::Cbf => "cbf",
            Format::Manifest => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    Block,
    Eig,
}

#[derive(Debug, Args)]
struct GenArgs {
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    cone_dims: Option<Vec<usize>>,
    #[arg(long = "nB")]
    n_b: Option<usize>,
    #[arg(long = "nN")]
    n_n: Option<usize>,
    /// LO: zero-based indices of B (default: the first m). SOCO: one label per cone (B,N,R,T1,T2,T3).
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Fraction of nonzero entries in the constraint data.
    #[arg(long)]
    sparsity: Option<f64>,
    #[arg(long)]
    cond: Option<f64>,
    #[arg(long)]
    norm_b: Option<f64>,
    #[arg(long)]
    norm_c: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    batch: u32,
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    /// SDO optimal/both: block-diagonal or eigenbasis construction.
    #[arg(long, value_enum)]
    structure: Option<Structure>,
    /// LO optimal: allow x* and s* to vanish together.
    #[arg(long)]
    nonstrict: bool,
    /// LO both: reuse the optimal pair inside the interior point.
    #[arg(long)]
    simplified: bool,
    /// SDO interior: diagonal solution matrices.
    #[arg(long)]
    diagonal: bool,
    /// TOML file with the generator controls; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    manifest: PathBuf,
    /// Print every check, not only the failed ones.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Parse `argv` (program name first) and run. Returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen(&args, out),
        Command::Verify(args) => verify(&args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "conigen: {e}");
            e.code()
        }
    }
}

fn controls(args: &GenArgs) -> Result<GenControls, CliError> {
    let mut c = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            toml::from_str::<GenControls>(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
        }
        None => GenControls::default(),
    };
    if let Some(s) = args.seed {
        c.seed = s;
    }
    for (slot, flag) in [
        (&mut c.mu, args.mu),
        (&mut c.density, args.sparsity),
        (&mut c.cond, args.cond),
        (&mut c.norm_b, args.norm_b),
        (&mut c.norm_c, args.norm_c),
    ] {
        if flag.is_some() {
            *slot = flag;
        }
    }
    c.validate()?;
    Ok(c)
}

fn lo_partition(args: &GenArgs, n: usize) -> Result<LoPartition, CliError> {
    match (&args.partition, args.n_b) {
        (Some(_), Some(_)) => usage("give either --partition or --nB for lo, not both"),
        (None, Some(k)) if k <= n => Ok(LoPartition::leading(n, k)),
        (None, Some(k)) => usage(format!("--nB {k} exceeds n = {n}")),
        (Some(p), None) => {
            let mut basic = Vec::new();
            for tok in p.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                basic.push(
                    tok.parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("--partition: `{tok}` is not an index")))?,
                );
            }
            let mut mask = vec![false; n];
            for &i in &basic {
                if i >= n || mask[i] {
                    return usage(format!("--partition: index {i} out of range or repeated"));
                }
                mask[i] = true;
            }
            basic.sort_unstable();
            let nonbasic = (0..n).filter(|i| !mask[*i]).collect();
            Ok(LoPartition { basic, nonbasic })
        }
        (None, None) => Ok(LoPartition::leading(n, args.m.min(n))),
    }
}

fn soco_labels(args: &GenArgs, cones: usize) -> Result<Vec<ConeLabel>, CliError> {
    let Some(p) = &args.partition else {
        return usage("soco optimal/both/maxcomp needs --partition with one label per cone");
    };
    let labels = p
        .split(',')
        .map(|t| t.trim().parse::<ConeLabel>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--partition: {e}")))?;
    if labels.len() != cones {
        return usage(format!("--partition has {} labels for {cones} cones", labels.len()));
    }
    Ok(labels)
}

fn require_n(args: &GenArgs) -> Result<usize, CliError> {
    args.n.ok_or_else(|| CliError::Usage("--n is required".into()))
}

fn reject_flag(set: bool, flag: &str, scope: &str) -> Result<(), CliError> {
    if set {
        return usage(format!("{flag} only applies to {scope}"));
    }
    Ok(())
}

fn check_flags(args: &GenArgs) -> Result<(), CliError> {
    use FamilyArg::*;
    let (f, m) = (args.family, args.mode);
    reject_flag(args.nonstrict && (f, m) != (Lo, Mode::Optimal), "--nonstrict", "lo optimal")?;
    reject_flag(args.simplified && (f, m) != (Lo, Mode::Both), "--simplified", "lo both")?;
    reject_flag(args.diagonal && (f, m) != (Sdo, Mode::Interior), "--diagonal", "sdo interior")?;
    reject_flag(
        args.structure.is_some() && !(f == Sdo && matches!(m, Mode::Optimal | Mode::Both)),
        "--structure",
        "sdo optimal and both",
    )?;
    reject_flag(args.cone_dims.is_some() && f != Soco, "--cone-dims", "soco")?;
    reject_flag(args.n_n.is_some() && f != Sdo, "--nN", "sdo")?;
    reject_flag(args.n_b.is_some() && f == Soco, "--nB", "lo and sdo")?;
    reject_flag(args.partition.is_some() && f == Sdo, "--partition", "lo and soco")?;
    if f == Lo && matches!(m, Mode::Maxcomp | Mode::MaxcompBoth) {
        return usage(format!("mode {} requires sdo or soco", m.name()));
    }
    Ok(())
}

fn generate(args: &GenArgs, c: &GenControls) -> Result<Payload, CliError> {
    let m = args.m;
    Ok(match args.family {
        FamilyArg::Lo => {
            let n = require_n(args)?;
            let (instance, certificate) = match args.mode {
                Mode::Interior => gen_lo_interior(m, n, c, None, None)?,
                Mode::Optimal => gen_lo_optimal(m, n, &lo_partition(args, n)?, c, !args.nonstrict)?,
                Mode::Both => gen_lo_both(m, n, &lo_partition(args, n)?, c, args.simplified)?,
                Mode::Maxcomp | Mode::MaxcompBoth => unreachable!("rejected in check_flags"),
            };
            Payload::Lo { instance, certificate }
        }
        FamilyArg::Sdo => {
            let n = require_n(args)?;
            let blocks = || -> Result<(usize, usize), CliError> {
                match (args.n_b, args.n_n) {
                    (Some(b), Some(nn)) => Ok((b, nn)),
                    _ => usage("sdo optimal/both/maxcomp needs --nB and --nN"),
                }
            };
            let eig = args.structure != Some(Structure::Block);
            let (instance, certificate) = match args.mode {
                Mode::Interior => gen_sdo_interior(m, n, c, args.diagonal)?,
                Mode::Optimal => {
                    let (b, nn) = blocks()?;
                    if eig {
                        gen_sdo_eig_optimal(m, n, b, nn, c)?
                    } else {
                        gen_sdo_block_optimal(m, n, b, nn, c)?
                    }
                }
                Mode::Both => {
                    let (b, nn) = blocks()?;
                    if eig {
                        gen_sdo_eig_both(m, n, b, nn, c)?
                    } else {
                        gen_sdo_block_both(m, n, b, nn, c)?
                    }
                }
                Mode::Maxcomp => match blocks()? {
                    (0, nn) => gen_sdo_maxcomp_empty_b(m, n, nn, c)?,
                    (b, nn) => gen_sdo_maxcomp(m, n, b, nn, c)?,
                },
                Mode::MaxcompBoth => {
                    let (b, nn) = blocks()?;
                    gen_sdo_maxcomp_both(m, n, b, nn, c)?
                }
            };
            Payload::Sdo { instance, certificate }
        }
        FamilyArg::Soco => {
            let Some(dims) = &args.cone_dims else {
                return usage("soco needs --cone-dims");
            };
            if let Some(n) = args.n {
                if n != dims.iter().sum::<usize>() {
                    return usage(format!("--n {n} disagrees with the cone dimensions"));
                }
            }
            let (instance, certificate) = match args.mode {
                Mode::Interior => gen_soco_interior(m, dims, c)?,
                Mode::Optimal => gen_soco_optimal(m, dims, &soco_labels(args, dims.len())?, c)?,
                Mode::Both => gen_soco_both(m, dims, &soco_labels(args, dims.len())?, c)?,
                Mode::Maxcomp => gen_soco_maxcomp(m, dims, &soco_labels(args, dims.len())?, c)?,
                Mode::MaxcompBoth => gen_soco_maxcomp_both(m, dims, &soco_labels(args, dims.len())?, c)?,
            };
            Payload::Soco { instance, certificate }
        }
    })
}

fn native_format(f: FamilyArg) -> Format {
    match f {
        FamilyArg::Lo => Format::Mps,
        FamilyArg::Sdo => Format::Sdpa,
        FamilyArg::Soco => Format::Cbf,
    }
}

/// Solver files to write; the manifest is always written.
fn solver_formats(args: &GenArgs) -> Result<Vec<Format>, CliError> {
    let mut fmts: Vec<Format> = Vec::new();
    for f in &args.format {
        if *f != Format::Manifest && !fmts.contains(f) {
            fmts.push(*f);
        }
    }
    if args.format.is_empty() {
        fmts.push(native_format(args.family));
    }
    for f in &fmts {
        let ok = matches!(
            (args.family, f),
            (FamilyArg::Lo, Format::Mps | Format::Cbf) | (FamilyArg::Sdo, Format::Sdpa) | (FamilyArg::Soco, Format::Cbf)
        );
        if !ok {
            return usage(format!("format {} is not available for {:?}", f.ext(), args.family).to_lowercase());
        }
    }
    Ok(fmts)
}

/// An LO instance as a product of one-dimensional cones.
pub fn lo_as_soco(inst: &LinearInstance) -> SocoInstance {
    SocoInstance {
        cone_dims: vec![1; inst.cols()],
        a: inst.a.clone(),
        b: inst.b.clone(),
        c: inst.c.clone(),
    }
}

fn write_solver_file(payload: &Payload, fmt: Format, path: &Path) -> conigen::Result<()> {
    match (payload, fmt) {
        (Payload::Lo { instance, .. }, Format::Mps) => mps::write(instance, path),
        (Payload::Lo { instance, .. }, Format::Cbf) => cbf::write(&lo_as_soco(instance), path),
        (Payload::Sdo { instance, .. }, Format::Sdpa) => sdpa::write(instance, path),
        (Payload::Soco { instance, .. }, Format::Cbf) => cbf::write(instance, path),
        _ => Err(Error::Internal(format!("no writer for {}", fmt.ext()))),
    }
}

fn instance_dir(out: &Path, batch: u32, index: u32) -> PathBuf {
    if batch == 1 {
        out.to_path_buf()
    } else {
        out.join(format!("{index:04}"))
    }
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_flags(args)?;
    let base = controls(args)?;
    let formats = solver_formats(args)?;
    let tol = Tolerances::default();

    // everything is verified before the first byte is written
    let mut ready = Vec::with_capacity(args.batch as usize);
    for index in 0..args.batch {
        let c = GenControls {
            stream: index,
            ..base.clone()
        };
        let payload = generate(args, &c)?;
        let report = payload.verify(&tol)?;
        if !report.passed {
            let failed: Vec<String> = report.failed().map(|k| k.to_string()).collect();
            return Err(CliError::Failed(format!(
                "instance {index} (seed {}, stream {index}) failed verification:\n  {}",
                c.seed,
                failed.join("\n  ")
            )));
        }
        ready.push(Manifest::new(args.mode.name(), c, payload, report));
    }

    for (index, mut man) in (0..args.batch).zip(ready) {
        let dir = instance_dir(&args.out, args.batch, index);
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Failed(format!("cannot create {}: {e}", dir.display())))?;
        for f in &formats {
            let path = dir.join(format!("instance.{}", f.ext()));
            write_solver_file(&man.payload, *f, &path)?;
            man.files.push(manifest::file_ref(&dir, &path, f.ext())?);
        }
        let mpath = dir.join(MANIFEST_FILE);
        manifest::write(&man, &mpath)?;
        let d = &man.dimensions;
        let _ = writeln!(
            out,
            "{}: {} {} m={} n={} seed={} stream={} passed ({} checks)",
            mpath.display(),
            man.payload.family(),
            man.mode,
            d.m,
            d.n,
            man.controls.seed,
            man.controls.stream,
            man.report.checks.len()
        );
    }
    Ok(())
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let man = manifest::read(&args.manifest)?;
    let base = args.manifest.parent().unwrap_or(Path::new("."));
    let mut problems = Vec::new();
    for f in &man.files {
        let path = base.join(&f.path);
        let agrees = match (&man.payload, f.format.as_str()) {
            (Payload::Lo { instance, .. }, "mps") => mps::read(&path)? == *instance,
            (Payload::Lo { instance, .. }, "cbf") => cbf::read(&path)? == lo_as_soco(instance),
            (Payload::Sdo { instance, .. }, "sdpa") => sdpa::read(&path)? == *instance,
            (Payload::Soco { instance, .. }, "cbf") => cbf::read(&path)? == *instance,
            (_, other) => {
                problems.push(format!("{}: unsupported format `{other}` for this family", f.path));
                continue;
            }
        };
        if !agrees {
            problems.push(format!("{}: file data differs from the manifest instance", f.path));
        }
    }
    let report = man.payload.verify(&Tolerances::default())?;
    if args.verbose {
        let _ = write!(out, "{report}");
    }
    for c in report.failed() {
        problems.push(c.to_string());
    }
    if problems.is_empty() {
        let _ = writeln!(
            out,
            "{}: {} {} passed ({} checks, {} files)",
            args.manifest.display(),
            man.payload.family(),
            man.mode,
            report.checks.len(),
            man.files.len()
        );
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} failed:\n  {}",
            args.manifest.display(),
            problems.join("\n  ")
        )))
    }
}
