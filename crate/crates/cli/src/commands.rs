//! Subcommand implementations. Each returns the process exit code.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ccc2d::construct::SpecDocument;
use ccc2d::correlation::{correlation_table, default_tolerance, reduce_to_1d, SequenceFamily};
use ccc2d::mimo::{
    azimuth_grid, ber_simulation, elevation_grid, power_pattern, random_precoders, zc_precoders,
    BerReport, DirectionPolicy, PrecoderSet, Scheme, SimConfig, SteeringConfig,
};
use ccc2d::{example_spec, verify_ccc, ConstructionSpec};
use clap::{Args, ValueEnum};

use crate::family_file::FamilyFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;

/// Note written into every ZC-baseline CSV.
pub const ZC_SURROGATE_NOTE: &str = "surrogate baseline: outer products of cyclically shifted \
Zadoff-Chu sequences of lengths L1 and L2; not an exact reproduction of any published ZC precoder";

/// A failure that maps onto an exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn io(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            msg: msg.into(),
        }
    }

    fn semantic(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_SEMANTIC,
            msg: msg.into(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("cannot write to stdout: {e}"))),
    }
}

/// Reads and validates a TOML construction spec.
pub fn load_spec(path: &Path) -> CliResult<ConstructionSpec> {
    let text = read_text(path)?;
    let doc: SpecDocument =
        toml::from_str(&text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    ConstructionSpec::try_from(doc)
        .map_err(|e| CliError::semantic(format!("{}: invalid spec: {e}", path.display())))
}

pub fn load_family(path: &Path) -> CliResult<FamilyFile> {
    let text = read_text(path)?;
    FamilyFile::parse(&text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Construction spec (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Output family file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

pub fn construct(args: &ConstructArgs) -> CliResult<i32> {
    let spec = load_spec(&args.spec)?;
    let file = FamilyFile::from_spec(&spec);
    write_output(args.out.as_deref(), &file.to_text())?;
    Ok(EXIT_OK)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Family file to check.
    pub family: PathBuf,
    /// Largest accepted deviation; defaults to 1e-9·N·L1·L2.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also write every inspected correlation sum as CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

pub fn verify(args: &VerifyArgs) -> CliResult<i32> {
    let file = load_family(&args.family)?;
    let (m, n, l1, l2) = file.family.parameters();
    let tolerance = args
        .tolerance
        .unwrap_or_else(|| default_tolerance(n, l1, l2));
    let report = verify_ccc(&file.family, tolerance);
    let text = format!(
        "family: M={m} N={n} L1={l1} L2={l2} q={}\n{report}",
        file.family.q()
    );
    write_output(args.report.as_deref(), &text)?;
    if let Some(path) = &args.table {
        let mut csv = String::from("p,p_prime,u1,u2,re,im\n");
        for row in correlation_table(&file.family) {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                row.p, row.p_prime, row.u1, row.u2, row.value.re, row.value.im
            );
        }
        write_output(Some(path), &csv)?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Debug, Args, Clone)]
pub struct GeometryArgs {
    /// Carrier wavelength.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Column spacing (defaults to lambda/2).
    #[arg(long)]
    pub dx: Option<f64>,
    /// Row spacing (defaults to lambda/2).
    #[arg(long)]
    pub dy: Option<f64>,
}

impl GeometryArgs {
    fn config(&self, rows: usize, cols: usize) -> CliResult<SteeringConfig> {
        let cfg = SteeringConfig {
            rows,
            cols,
            wavelength: self.lambda,
            dx: self.dx.unwrap_or(self.lambda / 2.0),
            dy: self.dy.unwrap_or(self.lambda / 2.0),
        };
        cfg.validate()
            .map_err(|e| CliError::semantic(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RadiateArgs {
    /// Family file whose set is used as precoders.
    pub family: PathBuf,
    /// Set index p.
    #[arg(long, default_value_t = 0)]
    pub set: usize,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Elevation samples over [0, 90] degrees.
    #[arg(long, default_value_t = 50)]
    pub phi_steps: usize,
    /// Azimuth samples over [0, 360) degrees.
    #[arg(long, default_value_t = 50)]
    pub theta_steps: usize,
    /// Divide each precoder by sqrt(L1·L2·N).
    #[arg(long)]
    pub normalize: bool,
    /// Output CSV; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

pub fn radiate(args: &RadiateArgs) -> CliResult<i32> {
    let file = load_family(&args.family)?;
    let family = &file.family;
    if args.set >= family.set_count() {
        return Err(CliError::semantic(format!(
            "set {} does not exist (family has {})",
            args.set,
            family.set_count()
        )));
    }
    let (l1, l2) = family.array_shape();
    let cfg = args.geometry.config(l1, l2)?;
    let mut w = PrecoderSet::from_arrays(family.set(args.set), format!("set-{}", args.set))
        .map_err(|e| CliError::semantic(e.to_string()))?;
    if args.normalize {
        w = w.normalized();
    }
    let pattern = power_pattern(
        &w,
        &cfg,
        &elevation_grid(args.phi_steps),
        &azimuth_grid(args.theta_steps),
    )
    .map_err(|e| CliError::semantic(e.to_string()))?;
    let mut csv = String::from("phi_deg,theta_deg,power\n");
    for (phi, theta, power) in pattern.samples() {
        let _ = writeln!(csv, "{},{},{}", phi.to_degrees(), theta.to_degrees(), power);
    }
    write_output(args.out.as_deref(), &csv)?;
    eprintln!(
        "power: min={} max={} relative spread={:e}",
        pattern.min(),
        pattern.max(),
        pattern.relative_spread()
    );
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Ccc,
    Zc,
    Random,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Ccc => Scheme::Ccc,
            SchemeArg::Zc => Scheme::Zc,
            SchemeArg::Random => Scheme::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Family file for the ccc scheme; the built-in (4,4,8,16) example when omitted.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Set index used as precoders for the ccc scheme.
    #[arg(long, default_value_t = 0)]
    pub set: usize,
    /// URA rows for zc/random schemes without a family.
    #[arg(long, default_value_t = 8)]
    pub rows: usize,
    /// URA columns for zc/random schemes without a family.
    #[arg(long, default_value_t = 16)]
    pub cols: usize,
    /// Eb/N0 points in dB, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,2,4,6,8")]
    pub snr: Vec<f64>,
    /// Bits per SNR point.
    #[arg(long, default_value_t = 1_000_000)]
    pub bits: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Fixed user elevation in degrees; needs --theta. Random per frame otherwise.
    #[arg(long, requires = "theta")]
    pub phi: Option<f64>,
    /// Fixed user azimuth in degrees; needs --phi.
    #[arg(long, requires = "phi")]
    pub theta: Option<f64>,
    /// Zadoff-Chu roots for the row and column sequences, as `row,col`.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 1])]
    pub zc_roots: Vec<usize>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Output CSV; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Precoders for a scheme, normalized to unit transmit energy per slot.
pub fn scheme_precoders(args: &BerArgs) -> CliResult<PrecoderSet> {
    let semantic = |e: ccc2d::mimo::MimoError| CliError::semantic(e.to_string());
    let family = match &args.family {
        Some(path) => Some(load_family(path)?.family),
        None => None,
    };
    let (rows, cols) = family
        .as_ref()
        .map_or((args.rows, args.cols), |f| f.array_shape());
    let w = match args.scheme {
        SchemeArg::Ccc => {
            let family = family.unwrap_or_else(|| example_spec().build_ccc());
            if args.set >= family.set_count() {
                return Err(CliError::semantic(format!(
                    "set {} does not exist",
                    args.set
                )));
            }
            PrecoderSet::from_arrays(family.set(args.set), "ccc").map_err(semantic)?
        }
        SchemeArg::Zc => {
            let [r1, r2] = args.zc_roots[..] else {
                return Err(CliError::semantic("--zc-roots takes exactly two roots"));
            };
            zc_precoders(rows, cols, 4, (r1, r2)).map_err(semantic)?
        }
        // Offset keeps the matrix draw independent of the noise streams.
        SchemeArg::Random => {
            random_precoders(rows, cols, 4, args.seed ^ 0x5eed_5a5a).map_err(semantic)?
        }
    };
    Ok(w.normalized())
}

pub fn ber(args: &BerArgs) -> CliResult<i32> {
    let w = scheme_precoders(args)?;
    let (rows, cols) = w.shape();
    let cfg = args.geometry.config(rows, cols)?;
    let direction = match (args.phi, args.theta) {
        (Some(phi), Some(theta)) => DirectionPolicy::Fixed {
            phi: phi.to_radians().clamp(0.0, PI / 2.0),
            theta: theta.to_radians(),
        },
        _ => DirectionPolicy::UniformPerFrame,
    };
    let sim = SimConfig {
        snr_db: args.snr.clone(),
        bits_per_point: args.bits,
        seed: args.seed,
        direction,
        scheme: args.scheme.into(),
    };
    let report = ber_simulation(&sim, &cfg, &w).map_err(|e| CliError::semantic(e.to_string()))?;
    write_output(args.out.as_deref(), &ber_csv(&report, &sim))?;
    Ok(EXIT_OK)
}

/// CSV with a commented header describing the run.
pub fn ber_csv(report: &BerReport, sim: &SimConfig) -> String {
    let mut csv = String::new();
    let _ = writeln!(csv, "# scheme: {} ({})", report.scheme, report.label);
    if report.scheme == Scheme::Zc {
        let _ = writeln!(csv, "# note: {ZC_SURROGATE_NOTE}");
    }
    let _ = writeln!(csv, "# snr: Eb/N0 in dB, Eb = transmitted energy per bit");
    match sim.direction {
        DirectionPolicy::Fixed { phi, theta } => {
            let _ = writeln!(
                csv,
                "# direction: fixed phi={} theta={} deg",
                phi.to_degrees(),
                theta.to_degrees()
            );
        }
        DirectionPolicy::UniformPerFrame => {
            let _ = writeln!(csv, "# direction: uniform per frame");
        }
    }
    let _ = writeln!(csv, "# seed: {}", report.seed);
    let _ = writeln!(csv, "# workers: {}", report.workers);
    csv.push_str("snr_db,ber,bit_count,frame_count\n");
    for p in &report.points {
        let _ = writeln!(csv, "{},{},{},{}", p.snr_db, p.ber(), p.bits, p.frames);
    }
    csv
}

#[derive(Debug, Args)]
pub struct Export1dArgs {
    /// Family file with single-row arrays.
    pub family: PathBuf,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output sequence file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Text form of a 1D family: one `p t: v v v ...` line per sequence.
pub fn sequences_text(seqs: &SequenceFamily) -> String {
    let sets = seqs.sets();
    let mut out = String::from("ccc2d-sequences 1\n");
    let _ = writeln!(out, "q {}", seqs.q());
    let _ = writeln!(out, "sets {}", sets.len());
    let _ = writeln!(out, "sequences {}", sets[0].len());
    let _ = writeln!(out, "length {}", sets[0][0].len());
    for (p, set) in sets.iter().enumerate() {
        for (t, s) in set.iter().enumerate() {
            let body: Vec<String> = s.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{p} {t}: {}", body.join(" "));
        }
    }
    out
}

pub fn export_1d(args: &Export1dArgs) -> CliResult<i32> {
    let file = load_family(&args.family)?;
    let seqs = reduce_to_1d(&file.family).map_err(|e| CliError::semantic(e.to_string()))?;
    let (_, n, l1, l2) = file.family.parameters();
    let tolerance = args
        .tolerance
        .unwrap_or_else(|| default_tolerance(n, l1, l2));
    let report = seqs.verify(tolerance);
    write_output(args.out.as_deref(), &sequences_text(&seqs))?;
    eprint!("{report}");
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}
