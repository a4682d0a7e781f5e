//! Subcommand implementations. Each returns the process exit code on
//! completion or a [`Failure`] carrying one.

use std::path::Path;

use elastonet::characterize::CharacterizationReport;
use elastonet::linalg::rel_error;
use elastonet::response::{extract_canonical_detailed, ResponseEvaluator};
use elastonet::sampling::sample_lambdas;
use elastonet::serde_util::{complex_rows, ComplexPair};
use elastonet::synth::{PlacementOptions, RoundTripReport};
use elastonet::{
    atlas, check_canonical, random_network, synthesize as synthesize_canonical, Canonical, CheckOptions, Complex64,
    Error, ExtractOptions, Generalized, Matrices, Network, RandomNetworkSpec, Rayleigh, SynthesisOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::exit::{self, Failure};
use crate::io;
use crate::{
    Axis, CharacterizeArgs, CheckArgs, ExtractArgs, ExtractTolArgs, GenerateArgs, LociArgs, RespondArgs,
    RoundtripArgs, Scale, SweepArgs, SynthArgs, SynthesizeArgs,
};

pub const SEED_ENV: &str = "ELASTONET_SEED";

pub fn resolve_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        _ => Ok(flag),
    }
}

fn check_options(a: &CheckArgs) -> Result<CheckOptions<f64>, Failure> {
    if a.omega_min > a.omega_max {
        return Err(Failure::usage("--omega-min exceeds --omega-max"));
    }
    Ok(CheckOptions {
        tol: a.tol,
        omega_min: a.omega_min,
        omega_max: a.omega_max,
        omega_points: a.omega_points as usize,
    })
}

fn extract_options(a: &ExtractTolArgs, seed: u64) -> ExtractOptions<f64> {
    ExtractOptions {
        tol_pinv: a.tol_pinv,
        tol_floppy: a.tol_floppy,
        tol_cluster: a.tol_cluster,
        verify_samples: a.extract_samples,
        verify_tol: a.extract_tol,
        seed,
    }
}

fn synthesis_options(a: &SynthArgs, check: CheckOptions<f64>) -> SynthesisOptions<f64> {
    SynthesisOptions {
        placement: PlacementOptions {
            min_clearance: a.min_clearance,
            max_attempts: a.max_attempts,
            ..PlacementOptions::new(a.epsilon)
        },
        check,
        rank_tol: a.rank_tol,
        verify_samples: a.samples,
        verify_tol: a.round_trip_tol,
    }
}

fn forbidden_points(a: &SynthArgs) -> Result<Vec<Vec<f64>>, Failure> {
    a.forbidden.as_deref().map_or(Ok(Vec::new()), io::read)
}

fn assemble(path: &Path) -> Result<(Network, Matrices), Failure> {
    let net: Network = io::read(path)?;
    let sys = net.assemble()?;
    Ok((net, sys))
}

fn sweep_points(s: &SweepArgs) -> Result<Vec<Complex64>, Failure> {
    match s.axis {
        Axis::ComplexList => {
            let path = s
                .lambdas
                .as_deref()
                .ok_or_else(|| Failure::usage("--axis complex-list requires --lambdas"))?;
            let pairs: Vec<(f64, f64)> = io::read(path)?;
            if pairs.is_empty() {
                return Err(Failure::usage(format!("{}: empty λ list", path.display())));
            }
            Ok(pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
        }
        Axis::Imaginary => {
            if s.lambdas.is_some() {
                return Err(Failure::usage("--lambdas needs --axis complex-list"));
            }
            if !s.start.is_finite() || !s.stop.is_finite() {
                return Err(Failure::usage("sweep bounds must be finite"));
            }
            let n = s.count as usize;
            let t = |k: usize| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            let omegas: Vec<f64> = match s.scale {
                Scale::Linear => (0..n).map(|k| s.start + t(k) * (s.stop - s.start)).collect(),
                Scale::Log => {
                    if s.start <= 0.0 || s.stop <= 0.0 {
                        return Err(Failure::usage("--scale log needs positive --start and --stop"));
                    }
                    let (a, b) = (s.start.ln(), s.stop.ln());
                    (0..n).map(|k| (a + t(k) * (b - a)).exp()).collect()
                }
            };
            Ok(omegas.into_iter().map(|w| Complex64::new(0.0, w)).collect())
        }
    }
}

#[derive(Serialize)]
struct ResponseEntry {
    lambda: ComplexPair<f64>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    w: Option<Vec<Vec<ComplexPair<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at_resonance: Option<bool>,
}

pub fn respond(a: &RespondArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let (_, sys) = assemble(&a.network)?;
    let points = sweep_points(&a.sweep)?;
    let eval = ResponseEvaluator::with_tolerance(&sys, a.resonance_tol);
    let entries: Vec<ResponseEntry> = points
        .par_iter()
        .map(|&l| {
            let lambda = ComplexPair(l.re, l.im);
            match eval.evaluate(l) {
                Ok(s) => Ok(ResponseEntry { lambda, w: Some(complex_rows(s.w.matrix())), at_resonance: None }),
                Err(Error::AtResonance { .. }) => Ok(ResponseEntry { lambda, w: None, at_resonance: Some(true) }),
                Err(e) => Err(Failure::from(e)),
            }
        })
        .collect::<Result<_, _>>()?;
    io::write_json(&entries, out)?;
    if entries.iter().all(|e| e.at_resonance.is_some()) {
        return Err(Failure::new(exit::ALL_RESONANT, "every sweep point is a resonance"));
    }
    Ok(exit::OK)
}

/// A network file has `nodes`; a canonical file has `modes`.
fn is_canonical(v: &Value) -> bool {
    v.get("modes").is_some() && v.get("nodes").is_none()
}

fn report_exit(report: &CharacterizationReport) -> u8 {
    if report.pass {
        exit::OK
    } else {
        exit::FAILED
    }
}

pub fn characterize(a: &CharacterizeArgs, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let value = io::read_value(&a.input)?;
    let cr: Canonical = if is_canonical(&value) {
        io::decode(value, &a.input)?
    } else {
        let net: Network = io::decode(value, &a.input)?;
        let sys = net.assemble()?;
        extract_canonical_detailed(&sys, &extract_options(&a.extract, seed))?.canonical
    };
    let report = check_canonical(&cr, &check_options(&a.check)?)?;
    io::write_json(&report, out)?;
    if !report.pass {
        eprintln!("failed conditions: {}", report.failed().join(", "));
    }
    Ok(report_exit(&report))
}

pub fn extract(a: &ExtractArgs, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let (_, sys) = assemble(&a.network)?;
    let ex = extract_canonical_detailed(&sys, &extract_options(&a.extract, seed))?;
    io::write_json(&ex.canonical, out)?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct SynthesisOutput<'a> {
    network: &'a Generalized,
    verification: RoundTripReport,
}

pub fn synthesize(a: &SynthesizeArgs, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let cr: Canonical = io::read(&a.canonical)?;
    let forbidden = forbidden_points(&a.synth)?;
    let opts = synthesis_options(&a.synth, check_options(&a.check)?);
    let syn = synthesize_canonical(&cr, &opts, &forbidden, seed)?;
    io::write_json(&SynthesisOutput { network: &syn.network, verification: syn.verification }, out)?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct LocusRow {
    re: f64,
    im: f64,
    sigma: f64,
    piece_label: &'static str,
}

pub fn loci(a: &LociArgs, out: Option<&Path>) -> Result<u8, Failure> {
    let r = Rayleigh::new(a.alpha, a.beta)?;
    let rows: Vec<LocusRow> = atlas::sample_locus(&r, a.points as usize)
        .into_iter()
        .map(|p| LocusRow { re: p.lambda.re, im: p.lambda.im, sigma: p.sigma, piece_label: p.piece })
        .collect();
    io::write_csv(&rows, out)?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct RoundtripVerification {
    n_lambda_samples: usize,
    /// Synthesized versus original network response.
    max_rel_error: f64,
    extraction_max_rel_error: f64,
    synthesis_max_rel_error: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct RoundtripOutput<'a> {
    seed: u64,
    pass: bool,
    canonical: &'a Canonical,
    report: &'a CharacterizationReport,
    network: Option<&'a Generalized>,
    verification: Option<RoundtripVerification>,
}

/// Worst relative mismatch between two assembled systems at shared λ.
fn compare_systems(a: &Matrices, b: &Matrices, lambdas: &[Complex64]) -> Result<f64, Failure> {
    let (ea, eb) = (ResponseEvaluator::new(a), ResponseEvaluator::new(b));
    let errors = lambdas
        .par_iter()
        .map(|&l| Ok(rel_error(ea.evaluate(l)?.w.matrix(), eb.evaluate(l)?.w.matrix())))
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(errors.into_iter().fold(0.0, f64::max))
}

pub fn roundtrip(a: &RoundtripArgs, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let (_, sys) = assemble(&a.network)?;
    let ex = extract_canonical_detailed(&sys, &extract_options(&a.extract, seed))?;
    let check = check_options(&a.check)?;
    let report = check_canonical(&ex.canonical, &check)?;
    if !report.pass {
        io::write_json(
            &RoundtripOutput {
                seed,
                pass: false,
                canonical: &ex.canonical,
                report: &report,
                network: None,
                verification: None,
            },
            out,
        )?;
        return Ok(exit::FAILED);
    }
    let forbidden = forbidden_points(&a.synth)?;
    let syn = synthesize_canonical(&ex.canonical, &synthesis_options(&a.synth, check), &forbidden, seed)?;
    let built = syn.network.assemble(ex.canonical.rayleigh)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7261_7464);
    let lambdas = sample_lambdas(&mut rng, a.synth.samples, &ex.canonical.singular_points());
    let err = compare_systems(&sys, &built, &lambdas)?;
    let pass = err <= a.synth.round_trip_tol;
    io::write_json(
        &RoundtripOutput {
            seed,
            pass,
            canonical: &ex.canonical,
            report: &report,
            network: Some(&syn.network),
            verification: Some(RoundtripVerification {
                n_lambda_samples: lambdas.len(),
                max_rel_error: err,
                extraction_max_rel_error: ex.max_rel_error,
                synthesis_max_rel_error: syn.verification.max_rel_error,
                tolerance: a.synth.round_trip_tol,
            }),
        },
        out,
    )?;
    Ok(if pass { exit::OK } else { exit::FAILED })
}

pub fn generate(a: &GenerateArgs, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let mut spec = RandomNetworkSpec::new(a.dim as usize, a.terminals, a.interior, a.mass_fraction);
    if let (Some(alpha), Some(beta)) = (a.alpha, a.beta) {
        spec.rayleigh = Some(Rayleigh::new(alpha, beta)?);
    }
    let net: Network = random_network(seed, &spec)?;
    io::write_json(&net, out)?;
    Ok(exit::OK)
}
