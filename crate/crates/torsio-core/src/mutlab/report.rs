//! Sampling driver for the mutation comparison and its JSON/CSV reports.

use serde::{Deserialize, Serialize};

use super::{
    compare_at, double_mutation_deviation, sign_part, MutError, MutationPair, SampleReport, SignPart,
    DOUBLE_MUTATION_TOL, MV_TOL, RATIO_TOL,
};
use crate::fgroup::MutationSign;
use crate::repspace::{
    continue_along, intertwiner, mutant_rep, regularity, solve_representations, sphere_restriction, Representation,
};

/// How representations are sampled along the meridian angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Random starts per solver call.
    pub starts: usize,
    /// Closed range of meridian angles, split evenly.
    pub theta_range: (f64, f64),
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 5, seed: 7, starts: 200, theta_range: (0.9, 2.1) }
    }
}

impl VerifyOptions {
    pub fn thetas(&self) -> Vec<f64> {
        let (lo, hi) = self.theta_range;
        match self.samples {
            0 => Vec::new(),
            1 => vec![0.5 * (lo + hi)],
            n => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ratio: f64,
    pub mayer_vietoris: f64,
    pub double_mutation: f64,
}

/// A candidate representation that was passed over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub theta: f64,
    pub reason: String,
}

/// Mutation data at a representation when no comparison of forms applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeSample {
    pub theta: f64,
    pub intertwiner_residual: f64,
    pub mutant_residual: f64,
    pub regular: bool,
    pub mutant_regular: bool,
    pub double_mutation_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationReport {
    pub knot: String,
    pub partner: String,
    pub mutation: String,
    pub sign: String,
    pub seed: u64,
    pub samples_requested: usize,
    pub tolerances: Tolerances,
    pub sign_part: SignPart,
    pub samples: Vec<SampleReport>,
    pub negative_samples: Vec<NegativeSample>,
    pub skipped: Vec<Skipped>,
    /// Whether every `Tor(𝓗)/Tor(𝓗_τ)` lies within the ratio tolerance of 1.
    pub twisted_ratio_pass: Option<bool>,
    /// Whether every form deviation lies within the ratio tolerance;
    /// `None` for report-only runs.
    pub pass: Option<bool>,
}

impl MutationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per sample: `theta, ratio_twisted, sign0, sign_mu, sign1, ratio_total`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "ratio_twisted", "sign0", "sign_mu", "sign1", "ratio_total"])?;
        let sp = &self.sign_part;
        for s in &self.samples {
            w.write_record([
                format!("{:.17e}", s.theta),
                format!("{:.17e}", s.ratio_twisted),
                sp.det_tau0.to_string(),
                sp.det_mu.to_string(),
                sp.det_tau1.to_string(),
                format!("{:.17e}", s.ratio_total),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn tolerances() -> Tolerances {
    Tolerances { ratio: RATIO_TOL, mayer_vietoris: MV_TOL, double_mutation: DOUBLE_MUTATION_TOL }
}

/// Candidates at `theta`: the continued previous sample first, then fresh solutions.
fn candidates(
    pair: &MutationPair,
    previous: Option<&Representation>,
    theta: f64,
    opts: &VerifyOptions,
    index: usize,
    skipped: &mut Vec<Skipped>,
) -> Vec<Representation> {
    let ext = &pair.exterior;
    let mut out = Vec::new();
    if let Some(prev) = previous {
        match continue_along(&ext.presentation, &ext.meridian, prev, theta) {
            Ok(r) => out.push(r),
            Err(e) => skipped.push(Skipped { theta, reason: format!("continuation: {e}") }),
        }
    }
    match solve_representations(&pair.knot, &ext.presentation, &ext.meridian, theta, opts.starts, opts.seed + index as u64) {
        Ok(reps) => out.extend(reps),
        Err(e) => skipped.push(Skipped { theta, reason: format!("solver: {e}") }),
    }
    out
}

/// Compares `τ^K(v)` with `τ^{K^τ}(τ♯v)` at one regular F-irreducible
/// representation per sampled angle.
pub fn verify_main_theorem(pair: &MutationPair, opts: &VerifyOptions) -> Result<MutationReport, MutError> {
    if pair.sign != MutationSign::Positive || pair.mutant_exterior.is_none() {
        return Err(MutError::NotPositive(pair.mv));
    }
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    let mut previous: Option<Representation> = None;
    for (k, theta) in opts.thetas().into_iter().enumerate() {
        for rep in candidates(pair, previous.as_ref(), theta, opts, k, &mut skipped) {
            match compare_at(pair, &rep) {
                Ok(s) if s.regular && s.mutant_regular => {
                    samples.push(s);
                    previous = Some(rep);
                    break;
                }
                Ok(_) => skipped.push(Skipped { theta, reason: "not regular".into() }),
                Err(e) => skipped.push(Skipped { theta, reason: e.to_string() }),
            }
        }
    }
    if samples.len() < opts.samples {
        return Err(MutError::InsufficientSamples { requested: opts.samples, found: samples.len() });
    }
    let pass = samples.iter().all(|s| s.relative_deviation() < RATIO_TOL);
    let twisted = samples.iter().all(|s| (s.ratio_twisted - 1.0).abs() < RATIO_TOL);
    Ok(MutationReport {
        knot: pair.knot.clone(),
        partner: pair.partner.clone(),
        mutation: pair.mv.name().to_string(),
        sign: "positive".into(),
        seed: opts.seed,
        samples_requested: opts.samples,
        tolerances: tolerances(),
        sign_part: sign_part(&pair.decomposition, pair.mv)?,
        samples,
        negative_samples: Vec::new(),
        skipped,
        twisted_ratio_pass: Some(twisted),
        pass: Some(pass),
    })
}

/// Mutation data along the sampled angles without a verdict, for any move.
pub fn report_mutation(pair: &MutationPair, opts: &VerifyOptions) -> Result<MutationReport, MutError> {
    let dec = &pair.decomposition;
    let mut negative_samples = Vec::new();
    let mut skipped = Vec::new();
    let mut previous: Option<Representation> = None;
    for (k, theta) in opts.thetas().into_iter().enumerate() {
        for rep in candidates(pair, previous.as_ref(), theta, opts, k, &mut skipped) {
            let sample = (|| -> Result<NegativeSample, MutError> {
                let x = intertwiner(&sphere_restriction(&rep, dec), pair.mv)?;
                let tau = mutant_rep(&rep, dec, pair.mv, &x, "mutant")?;
                Ok(NegativeSample {
                    theta,
                    intertwiner_residual: x.residual,
                    mutant_residual: tau.residual,
                    regular: regularity(&pair.exterior.presentation, &rep)?.is_regular(),
                    mutant_regular: regularity(&dec.amalgam(pair.mv), &tau)?.is_regular(),
                    double_mutation_deviation: double_mutation_deviation(&rep, dec, pair.mv)?,
                })
            })();
            match sample {
                Ok(s) => {
                    negative_samples.push(s);
                    previous = Some(rep);
                    break;
                }
                Err(e) => skipped.push(Skipped { theta, reason: e.to_string() }),
            }
        }
    }
    Ok(MutationReport {
        knot: pair.knot.clone(),
        partner: pair.partner.clone(),
        mutation: pair.mv.name().to_string(),
        sign: match pair.sign {
            MutationSign::Positive => "positive",
            MutationSign::Negative => "negative",
        }
        .into(),
        seed: opts.seed,
        samples_requested: opts.samples,
        tolerances: tolerances(),
        sign_part: sign_part(dec, pair.mv)?,
        samples: Vec::new(),
        negative_samples,
        skipped,
        twisted_ratio_pass: None,
        pass: None,
    })
}
