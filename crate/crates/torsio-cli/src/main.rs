//! `torsio`: torsion forms, representations, Alexander invariants and
//! mutation checks for bundled or user-supplied knots.
//!
//! Exit codes: 0 on success or PASS, 1 on a numerical failure, 2 on
//! malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use torsio_core::alexander::{abelian_torsion, alexander_polynomial, determinant, twisted_alexander};
use torsio_core::fgroup::{classify_mutation, load_knot, Knot, MutationMove, MutationSign};
use torsio_core::mutlab::report::{report_mutation, verify_main_theorem, MutationReport, VerifyOptions};
use torsio_core::mutlab::{MutError, MutationPair};
use torsio_core::repspace::{is_regular, solve_representations, theta_tangent, Representation};
use torsio_core::torsionform::{KnotExterior, PeripheralCertificate};

#[derive(Parser)]
#[command(name = "torsio", version, about = "Adjoint SU(2) torsion of knot exteriors and its behaviour under mutation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prints the torsion form at the θ-tangent of a solved representation.
    Torsion {
        /// Bundled knot name or path to a knot JSON file.
        knot: String,
        #[arg(long)]
        theta: f64,
        /// Which regular representation at this angle to use.
        #[arg(long, default_value_t = 0)]
        tangent_index: usize,
        /// Largest accepted relator residual.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Peripheral certificate for a knot file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Solves for irreducible representations and prints them as JSON.
    Reps {
        knot: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Abelian torsion and Alexander polynomial, or the twisted invariant at a representation.
    Alexander {
        knot: String,
        /// Representation JSON as written by `reps`.
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Classifies the rotations of the Conway sphere or prints a mutant presentation.
    #[command(group(ArgGroup::new("action").required(true).args(["classify", "build"])))]
    Mutate {
        /// `knot` or `knot:partner`.
        pair: String,
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        build: bool,
        /// Rotation to build: identity, ab_cd, ad_bc or ac_bd.
        #[arg(long = "move")]
        mv: Option<String>,
    },
    /// Compares torsion forms of a knot and its positive mutant along sampled representations.
    Verify {
        /// `knot:partner` for a positive mutation, or `knot` with `--move` for a report-only run.
        pair: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 0.9)]
        theta_min: f64,
        #[arg(long, default_value_t = 2.1)]
        theta_max: f64,
        #[arg(long = "move")]
        mv: Option<String>,
        /// Report path; a CSV sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates a peripheral certificate against a knot.
    Certificate {
        knot: String,
        /// Certificate JSON; the bundled one when omitted.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> ExitCode {
        match self {
            Failure::Input(_) => ExitCode::from(2),
            Failure::Numeric(_) => ExitCode::from(1),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn numeric<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Numeric(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn knot(arg: &str) -> Result<Knot, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
        Knot::from_json(stem, &read(path)?).map_err(input)
    } else {
        load_knot(arg).map_err(input)
    }
}

fn exterior(k: &Knot, certificate: Option<&Path>) -> Result<KnotExterior, Failure> {
    match certificate {
        Some(path) => {
            let cert = PeripheralCertificate::from_json(&read(path)?).map_err(input)?;
            KnotExterior::new(k.presentation.clone(), k.peripheral.meridian.clone(), k.peripheral.longitude.clone(), cert)
                .map_err(input)
        }
        None => KnotExterior::for_knot(k).map_err(input),
    }
}

fn parse_move(s: &str) -> Result<MutationMove, Failure> {
    s.parse().map_err(|_| Failure::Input(format!("unknown move `{s}`")))
}

fn split_pair(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    }
}

fn sign_name(s: MutationSign) -> &'static str {
    match s {
        MutationSign::Positive => "positive",
        MutationSign::Negative => "negative",
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn mut_failure(e: MutError) -> Failure {
    match e {
        MutError::Knot(_) | MutError::PartnerMismatch { .. } | MutError::NotPositive(_) => input(e),
        _ => numeric(e),
    }
}

fn torsion(name: &str, theta: f64, index: usize, tol: f64, starts: usize, seed: u64, cert: Option<&Path>) -> Outcome {
    let k = knot(name)?;
    let ext = exterior(&k, cert)?;
    let reps = solve_representations(&k.stem, &ext.presentation, &ext.meridian, theta, starts, seed).map_err(numeric)?;
    let usable: Vec<&Representation> = reps
        .iter()
        .filter(|r| r.residual <= tol && is_regular(&ext.presentation, r).unwrap_or(false))
        .collect();
    let rep = usable
        .get(index)
        .ok_or_else(|| Failure::Numeric(format!("{} regular representations at θ = {theta}, index {index} requested", usable.len())))?;
    let v = theta_tangent(&ext.presentation, &ext.meridian, rep).map_err(numeric)?;
    let value = ext.torsion_form(rep, &v).map_err(numeric)?;
    println!("{value:.17e}");
    Ok(true)
}

fn reps(name: &str, theta: f64, starts: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let k = knot(name)?;
    let reps = solve_representations(&k.stem, &k.presentation, &k.peripheral.meridian, theta, starts, seed).map_err(numeric)?;
    let text = serde_json::to_string_pretty(&reps).map_err(numeric)? + "\n";
    write_out(out, &text)?;
    Ok(true)
}

fn alexander(name: &str, rep: Option<&Path>) -> Outcome {
    let k = knot(name)?;
    let (p, mu) = (&k.presentation, &k.peripheral.meridian);
    match rep {
        None => {
            let delta = alexander_polynomial(p, mu).map_err(numeric)?;
            println!("torsion: {}", abelian_torsion(p, mu).map_err(numeric)?);
            println!("alexander: {delta}");
            println!("determinant: {}", determinant(&delta));
        }
        Some(path) => {
            let r = Representation::from_json(&read(path)?).map_err(input)?;
            let f = twisted_alexander(p, mu, &r.images).map_err(numeric)?;
            println!("{}", serde_json::to_string_pretty(&f).map_err(numeric)?);
        }
    }
    Ok(true)
}

fn mutate(pair: &str, classify: bool, mv: Option<&str>) -> Outcome {
    let (name, partner) = split_pair(pair);
    let k = knot(name)?;
    let dec = k.decomposition().map_err(input)?;
    if classify {
        let moves = match mv {
            Some(m) => vec![parse_move(m)?],
            None => MutationMove::ROTATIONS.to_vec(),
        };
        for m in moves {
            println!("{}: {}", m.name(), sign_name(classify_mutation(dec, m).map_err(input)?));
        }
        return Ok(true);
    }
    let m = match mv {
        Some(m) => parse_move(m)?,
        None => MutationMove::ROTATIONS
            .into_iter()
            .find(|&m| classify_mutation(dec, m).is_ok_and(|s| s == MutationSign::Positive))
            .ok_or_else(|| Failure::Input(format!("`{name}` has no positive rotation")))?,
    };
    let mutant = dec.amalgam(m);
    if let Some(q) = partner {
        let qk = knot(q)?;
        let same = qk.decomposition().map_err(input)?.amalgam(MutationMove::Identity).relators == mutant.relators;
        eprintln!("{}: {}", q, if same { "matches" } else { "differs" });
        if !same {
            return Err(Failure::Input(format!("`{q}` is not the {} mutant of `{name}`", m.name())));
        }
    }
    println!("{}", serde_json::to_string_pretty(&mutant).map_err(numeric)?);
    Ok(true)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn summary(r: &MutationReport) {
    for s in &r.samples {
        println!(
            "θ = {:.4}  ratio_twisted = {:+.12}  ratio_total = {:+.12}  deviation = {:.3e}",
            s.theta,
            s.ratio_twisted,
            s.ratio_total,
            s.relative_deviation()
        );
    }
    for s in &r.negative_samples {
        println!(
            "θ = {:.4}  intertwiner = {:.3e}  mutant = {:.3e}  regular = {}/{}",
            s.theta, s.intertwiner_residual, s.mutant_residual, s.regular, s.mutant_regular
        );
    }
    let sp = &r.sign_part;
    println!(
        "sign part: τ(0) {} · [μ] {} · τ(1) {}, piece-1 arc sign {}",
        sp.det_tau0, sp.det_mu, sp.det_tau1, sp.piece1_arc_sign
    );
    println!("skipped candidates: {}", r.skipped.len());
    match r.pass {
        Some(true) => println!("PASS"),
        Some(false) => println!("FAIL"),
        None => println!("REPORT ONLY"),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(pair: &str, samples: usize, seed: u64, starts: usize, range: (f64, f64), mv: Option<&str>, out: Option<&Path>) -> Outcome {
    let opts = VerifyOptions { samples, seed, starts, theta_range: range };
    let (name, partner) = split_pair(pair);
    let report = match (partner, mv) {
        (Some(q), None) => verify_main_theorem(&MutationPair::load(name, q).map_err(mut_failure)?, &opts),
        (None, Some(m)) => {
            let p = MutationPair::with_move(name, parse_move(m)?).map_err(mut_failure)?;
            if p.sign == MutationSign::Positive && p.mv != MutationMove::Identity {
                return Err(Failure::Input("positive moves need a `knot:partner` pair".into()));
            }
            report_mutation(&p, &opts)
        }
        _ => return Err(Failure::Input("give either `knot:partner` or `knot --move <m>`".into())),
    }
    .map_err(mut_failure)?;
    if let Some(path) = out {
        write_out(Some(path), &(report.to_json() + "\n"))?;
        let csv = sidecar(path);
        let file = std::fs::File::create(&csv).map_err(|e| Failure::Input(format!("{}: {e}", csv.display())))?;
        report.write_csv(file).map_err(input)?;
    }
    summary(&report);
    Ok(report.pass != Some(false))
}

fn certificate(name: &str, file: Option<&Path>) -> Outcome {
    let k = knot(name)?;
    match exterior(&k, file) {
        Ok(ext) => {
            println!("valid: {} entries, τ₀ = {}", ext.certificate.entries.len(), ext.tau0);
            Ok(true)
        }
        Err(Failure::Input(msg)) => {
            println!("invalid: {msg}");
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Torsion { knot, theta, tangent_index, tol, starts, seed, certificate } => {
            torsion(&knot, theta, tangent_index, tol, starts, seed, certificate.as_deref())
        }
        Command::Reps { knot, theta, starts, seed, out } => reps(&knot, theta, starts, seed, out.as_deref()),
        Command::Alexander { knot, rep } => alexander(&knot, rep.as_deref()),
        Command::Mutate { pair, classify, build: _, mv } => mutate(&pair, classify, mv.as_deref()),
        Command::Verify { pair, samples, seed, starts, theta_min, theta_max, mv, out } => {
            verify(&pair, samples, seed, starts, (theta_min, theta_max), mv.as_deref(), out.as_deref())
        }
        Command::Certificate { knot, file } => certificate(&knot, file.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (Failure::Input(msg) | Failure::Numeric(msg)) = &e;
            eprintln!("torsio: {msg}");
            e.code()
        }
    }
}
