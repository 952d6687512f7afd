//! Seeded Monte-Carlo campaigns of the full attack.
//!
//! Each trial draws a fresh key and plaintext from its own seed, which is
//! derived from `(master_seed, trial_index)` alone. Trials can therefore run
//! in any order on any number of threads and still aggregate to the same
//! summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::cipher::{Block, MasterKey, Variant};
use crate::dfa::{full_attack, AttackConfig, AttackOutcome};
use crate::oracle::FaultOracle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub variant: Variant,
    pub seed: u64,
    pub faults_last_key: usize,
    pub faults_total: usize,
    pub faults_per_key: Vec<usize>,
    pub success: bool,
    /// Failure reason, for the audit log.
    pub failure: Option<String>,
}

/// Seed of trial `index` in a campaign seeded with `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Random key, plaintext and oracle seed for one trial.
pub fn trial_setup(variant: Variant, seed: u64) -> (MasterKey, Block, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = variant.mask();
    let key = MasterKey::from_round_keys([(); 4].map(|_| rng.random::<u32>() & m));
    let plaintext = Block::new(rng.random::<u32>() & m, rng.random::<u32>() & m);
    (key, plaintext, rng.next_u64())
}

/// One attack against a fresh random key; success means the exact key came back.
pub fn run_trial(variant: Variant, trial_index: u64, seed: u64) -> (TrialRecord, AttackOutcome) {
    let (key, plaintext, oracle_seed) = trial_setup(variant, seed);
    let mut oracle = FaultOracle::new(variant, &key, plaintext, oracle_seed);
    let outcome = full_attack(&mut oracle, AttackConfig::default());
    let success = outcome.success() && outcome.master_key == Some(key);
    let failure = match (&outcome.failure, success) {
        (Some(f), _) => Some(f.to_string()),
        (None, false) => Some("recovered key differs from the hidden key".to_string()),
        (None, true) => None,
    };
    let record = TrialRecord {
        trial_index,
        variant,
        seed,
        faults_last_key: outcome.faults_last_key(),
        faults_total: outcome.total_faults,
        faults_per_key: outcome.faults_per_key.clone(),
        success,
        failure,
    };
    (record, outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramKind {
    LastKey,
    MasterKey,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub variant: Variant,
    pub trials: usize,
    pub seed: u64,
    /// Means over successful trials.
    pub mean_last_key: f64,
    pub mean_total: f64,
    pub max_last_key: usize,
    pub max_total: usize,
    pub histogram_last_key: BTreeMap<usize, usize>,
    pub histogram_total: BTreeMap<usize, usize>,
    pub failure_count: usize,
    pub records: Vec<TrialRecord>,
}

impl CampaignSummary {
    pub fn from_records(variant: Variant, seed: u64, records: Vec<TrialRecord>) -> Self {
        let mut histogram_last_key = BTreeMap::new();
        let mut histogram_total = BTreeMap::new();
        let (mut sum_last, mut sum_total, mut ok) = (0usize, 0usize, 0usize);
        let (mut max_last_key, mut max_total) = (0, 0);
        for r in records.iter().filter(|r| r.success) {
            *histogram_last_key.entry(r.faults_last_key).or_insert(0) += 1;
            *histogram_total.entry(r.faults_total).or_insert(0) += 1;
            sum_last += r.faults_last_key;
            sum_total += r.faults_total;
            max_last_key = max_last_key.max(r.faults_last_key);
            max_total = max_total.max(r.faults_total);
            ok += 1;
        }
        let mean = |s: usize| if ok == 0 { 0.0 } else { s as f64 / ok as f64 };
        CampaignSummary {
            variant,
            trials: records.len(),
            seed,
            mean_last_key: mean(sum_last),
            mean_total: mean(sum_total),
            max_last_key,
            max_total,
            histogram_last_key,
            histogram_total,
            failure_count: records.len() - ok,
            records,
        }
    }

    pub fn histogram(&self, kind: HistogramKind) -> &BTreeMap<usize, usize> {
        match kind {
            HistogramKind::LastKey => &self.histogram_last_key,
            HistogramKind::MasterKey => &self.histogram_total,
        }
    }

    /// Most frequent fault count; ties go to the smaller count.
    pub fn mode(&self, kind: HistogramKind) -> Option<usize> {
        let h = self.histogram(kind);
        let best = h.values().copied().max()?;
        h.iter().find(|(_, &c)| c == best).map(|(&f, _)| f)
    }

    pub fn success_count(&self) -> usize {
        self.trials - self.failure_count
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| !r.success)
    }
}

pub fn run_campaign(variant: Variant, trials: usize, master_seed: u64) -> CampaignSummary {
    let records: Vec<TrialRecord> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(variant, i, trial_seed(master_seed, i)).0)
        .collect();
    CampaignSummary::from_records(variant, master_seed, records)
}

/// `faults,count` rows in ascending order, LF-separated, no trailing newline.
pub fn emit_histogram_csv(summary: &CampaignSummary, kind: HistogramKind) -> Vec<u8> {
    let mut out = String::from("faults,count");
    for (faults, count) in summary.histogram(kind) {
        let _ = write!(out, "\n{faults},{count}");
    }
    out.into_bytes()
}

fn fixed4<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(format!("{x:.4}"))
        .map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

/// Serialized form of a campaign summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub variant: Variant,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "fixed4")]
    pub mean_last_key: f64,
    #[serde(serialize_with = "fixed4")]
    pub mean_total: f64,
    pub max_last_key: usize,
    pub max_total: usize,
    pub mode_last_key: Option<usize>,
    pub mode_total: Option<usize>,
    pub failure_count: usize,
}

impl From<&CampaignSummary> for SummaryReport {
    fn from(s: &CampaignSummary) -> Self {
        SummaryReport {
            variant: s.variant,
            trials: s.trials,
            seed: s.seed,
            mean_last_key: s.mean_last_key,
            mean_total: s.mean_total,
            max_last_key: s.max_last_key,
            max_total: s.max_total,
            mode_last_key: s.mode(HistogramKind::LastKey),
            mode_total: s.mode(HistogramKind::MasterKey),
            failure_count: s.failure_count,
        }
    }
}

pub fn emit_summary_json(summary: &CampaignSummary) -> Vec<u8> {
    let mut out =
        serde_json::to_vec_pretty(&SummaryReport::from(summary)).expect("summary serializes");
    out.push(b'\n');
    out
}

/// Side-by-side table of several campaigns.
pub fn format_comparison(summaries: &[CampaignSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14} {:>11} {:>8} {:>14} {:>14} {:>10} {:>9}",
        "variant",
        "fault round",
        "trials",
        "faults (K^T-1)",
        "faults (key)",
        "max (key)",
        "failures"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<14} {:>11} {:>8} {:>14.2} {:>14.2} {:>10} {:>9}",
            s.variant.to_string(),
            s.variant.fault_round(),
            s.trials,
            s.mean_last_key,
            s.mean_total,
            s.max_total,
            s.failure_count
        );
    }
    out
}
