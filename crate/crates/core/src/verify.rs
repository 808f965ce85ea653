//! Checkers for the spectral lower bound on the fractional matching number.
//!
//! For a connected graph on `n` vertices with minimum degree `d` and
//! spectral radius `λ₁`:
//!
//! * bound: `α*_f >= n·d² / (λ₁² + d²)`;
//! * lemma (contrapositive at the tight `k = n - 2α*_f`):
//!   `λ₁ >= d·√(1 + 2k/(n - k))`;
//! * equality in the bound holds iff `k* = n(λ₁² - d²)/(λ₁² + d²)` is an
//!   integer and the graph lies in ℋ(d, k*).
//!
//! Equality at `k* = 0` is reached by every connected regular graph, bipartite
//! or not, so those cases are reported separately instead of asserted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::families::{membership_for, membership_report, MembershipReport};
use crate::graph::{random_connected_min_degree, serialize_edge_list, Graph, GraphError, VertexSet};
use crate::matching::{
    berge_tutte_crosscheck, fractional_matching_number, max_deficiency_bruteforce, HalfInt,
    HalfIntegralMatching, MatchingError, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::spectral::{quotient_lambda1, quotient_matrix, spectral_radius, SpectralError, SpectralEstimate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("witness side {0} is empty")]
    EmptyWitnessSide(&'static str),
    #[error("invalid campaign parameters: {0}")]
    InvalidCampaign(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Numeric tolerances for the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Requested certified residual for spectral radii.
    pub spectral: f64,
    /// Slack below which the bound counts as attained, and the allowance
    /// for bound and threshold comparisons.
    pub equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            spectral: crate::spectral::DEFAULT_TOL,
            equality: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub d: usize,
    pub lambda1: SpectralEstimate,
    pub alpha_f: HalfInt,
    pub bound: f64,
    pub slack: f64,
    pub k_star: f64,
    #[serde(rename = "equality")]
    pub equality_flag: bool,
    pub membership: Option<MembershipReport>,
    pub regular_case: bool,
    /// Allowed deficit: equality tolerance plus the spectral residual
    /// pushed through the bound formula.
    pub bound_tolerance: f64,
    pub bound_holds: bool,
    pub certificate: HalfIntegralMatching,
}

impl VerificationReport {
    fn assemble(
        g: &Graph,
        lambda1: SpectralEstimate,
        alpha_f: HalfInt,
        certificate: HalfIntegralMatching,
        tol: &Tolerances,
    ) -> Self {
        let n = g.n();
        let d = g.min_degree();
        let mut report = VerificationReport {
            n,
            d,
            lambda1,
            alpha_f,
            bound: 0.0,
            slack: 0.0,
            k_star: 0.0,
            equality_flag: false,
            membership: Some(membership_report(g)),
            regular_case: false,
            bound_tolerance: 0.0,
            bound_holds: false,
            certificate,
        };
        report.reevaluate(tol);
        report
    }

    /// Recomputes every derived field from `n`, `d`, `lambda1` and `alpha_f`.
    pub fn reevaluate(&mut self, tol: &Tolerances) {
        let (n, d) = (self.n as f64, self.d as f64);
        let lambda = self.lambda1.value;
        let (l2, d2) = (lambda * lambda, d * d);
        self.bound = n * d2 / (l2 + d2);
        self.k_star = n * (l2 - d2) / (l2 + d2);
        self.slack = self.alpha_f.to_f64() - self.bound;
        let sensitivity = 2.0 * n * lambda * d2 / ((l2 + d2) * (l2 + d2));
        self.bound_tolerance = tol.equality + sensitivity * self.lambda1.residual;
        self.bound_holds = self.slack >= -self.bound_tolerance;
        self.equality_flag = self.slack <= tol.equality;
        self.regular_case = (lambda - d).abs() <= tol.equality + self.lambda1.residual;
    }
}

fn require_connected_with_edges(g: &Graph) -> Result<(), VerifyError> {
    if !g.is_connected() {
        return Err(VerifyError::Disconnected);
    }
    if g.edge_count() == 0 {
        return Err(VerifyError::NoEdges);
    }
    Ok(())
}

pub fn check_theorem_bound(g: &Graph, tol: &Tolerances) -> Result<VerificationReport, VerifyError> {
    require_connected_with_edges(g)?;
    let lambda1 = spectral_radius(g, tol.spectral)?;
    let (alpha_f, certificate) = fractional_matching_number(g);
    Ok(VerificationReport::assemble(g, lambda1, alpha_f, certificate, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub k: usize,
    pub threshold: f64,
    pub lambda1: f64,
    /// `λ₁ - threshold`; zero on sharp instances.
    pub margin: f64,
    pub holds: bool,
}

impl LemmaCheck {
    /// Evaluates the contrapositive from a finished bound report.
    pub fn from_report(report: &VerificationReport, tol: &Tolerances) -> Self {
        let n = report.n;
        let k = n - report.alpha_f.half_units() as usize;
        let d = report.d as f64;
        let threshold = d * (1.0 + 2.0 * k as f64 / (n - k) as f64).sqrt();
        let lambda1 = report.lambda1.value;
        let margin = lambda1 - threshold;
        LemmaCheck {
            k,
            threshold,
            lambda1,
            margin,
            holds: margin >= -(tol.equality + report.lambda1.residual),
        }
    }
}

/// With `k = n - 2α*_f`, checks `λ₁ >= d·√(1 + 2k/(n - k))`.
pub fn check_lemma_contrapositive(g: &Graph, tol: &Tolerances) -> Result<LemmaCheck, VerifyError> {
    let report = check_theorem_bound(g, tol)?;
    Ok(LemmaCheck::from_report(&report, tol))
}

/// The inequality chain behind the lemma, evaluated on one vertex set `S`.
///
/// `T` is the set of vertices isolated in `G - S` and `H` the bipartite
/// graph of `S`-`T` edges, `a = |E(H)|`:
///
/// `λ₁(G) >= λ₁(H) >= a/√(st) >= d·√(t/s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessChain {
    pub s: usize,
    pub t: usize,
    pub a: usize,
    pub d: usize,
    pub lambda_g: SpectralEstimate,
    pub lambda_h: SpectralEstimate,
    pub quotient_value: f64,
    pub degree_value: f64,
    /// Left side minus right side of each link, in chain order.
    pub gaps: [f64; 3],
    /// Each link within its allowance.
    pub links: [bool; 3],
    /// `a >= d·t`, exact.
    pub edge_count_bound: bool,
}

impl WitnessChain {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|&l| l) && self.edge_count_bound
    }

    pub fn is_tight(&self, eps: f64) -> bool {
        self.gaps.iter().all(|g| g.abs() <= eps)
    }
}

pub fn witness_chain_check(g: &Graph, s: &VertexSet, tol: &Tolerances) -> Result<WitnessChain, VerifyError> {
    s.check_within(g.n())?;
    if s.is_empty() {
        return Err(VerifyError::EmptyWitnessSide("S"));
    }
    let t_members: Vec<usize> = (0..g.n())
        .filter(|&v| !s.contains(v) && g.neighbors(v).iter().all(|&w| s.contains(w)))
        .collect();
    if t_members.is_empty() {
        return Err(VerifyError::EmptyWitnessSide("T"));
    }

    // H on S ∪ T, S first
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in s.iter().chain(&t_members).enumerate() {
        local[v] = i;
    }
    let (s_len, t_len) = (s.len(), t_members.len());
    let h_edges: Vec<(usize, usize)> = t_members
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().map(move |&w| (w, v)))
        .map(|(w, v)| (local[w], local[v]))
        .collect();
    let a = h_edges.len();
    let h = Graph::from_edges(s_len + t_len, h_edges)?;

    let lambda_g = spectral_radius(g, tol.spectral)?;
    let lambda_h = spectral_radius(&h, tol.spectral)?;
    let cells = [
        VertexSet::new((0..s_len).collect())?,
        VertexSet::new((s_len..s_len + t_len).collect())?,
    ];
    let quotient_value = quotient_lambda1(&quotient_matrix(&h, &cells)?);
    let d = g.min_degree();
    let degree_value = d as f64 * (t_len as f64 / s_len as f64).sqrt();

    let gaps = [
        lambda_g.value - lambda_h.value,
        lambda_h.value - quotient_value,
        quotient_value - degree_value,
    ];
    let allowances = [
        tol.spectral + lambda_g.residual + lambda_h.residual,
        tol.spectral + lambda_h.residual,
        tol.spectral,
    ];
    let links = [0, 1, 2].map(|i| gaps[i] >= -allowances[i]);
    Ok(WitnessChain {
        s: s_len,
        t: t_len,
        a,
        d,
        lambda_g,
        lambda_h,
        quotient_value,
        degree_value,
        gaps,
        links,
        edge_count_bound: a >= d * t_len,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum EqualityOutcome {
    /// Bound attained with integral `k* >= 1` and the graph in ℋ(d, k*).
    EqualityMember { k: usize },
    /// Bound strict and the graph outside every ℋ(d, k), `k >= 1`.
    StrictNonMember,
    /// Bound attained at `k* = 0` (regular graph). Non-members land here
    /// too: they are reported, not failed.
    RegularCase { is_member: bool },
    Violation { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCheck {
    #[serde(flatten)]
    pub outcome: EqualityOutcome,
    pub report: VerificationReport,
}

impl EqualityCheck {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, EqualityOutcome::Violation { .. })
    }

    pub fn is_anomaly(&self) -> bool {
        matches!(self.outcome, EqualityOutcome::RegularCase { is_member: false })
    }

    pub fn from_report(g: &Graph, report: VerificationReport, tol: &Tolerances) -> Self {
        let outcome = equality_outcome(g, &report, tol);
        EqualityCheck { outcome, report }
    }
}

fn equality_outcome(g: &Graph, report: &VerificationReport, tol: &Tolerances) -> EqualityOutcome {
    let violation = |reason: String| EqualityOutcome::Violation { reason };
    let membership = report
        .membership
        .clone()
        .unwrap_or_else(|| membership_report(g));
    if report.equality_flag {
        let rounded = report.k_star.round();
        if (report.k_star - rounded).abs() > tol.equality || rounded < 0.0 {
            return violation(format!("equality with non-integral k* = {}", report.k_star));
        }
        let k = rounded as usize;
        if k == 0 {
            return EqualityOutcome::RegularCase {
                is_member: membership.is_member,
            };
        }
        let given = membership_for(g, report.d, k);
        if given.is_member {
            EqualityOutcome::EqualityMember { k }
        } else {
            violation(format!(
                "equality at k = {k} but not in H({}, {k}): {:?}",
                report.d, given.failure_reason
            ))
        }
    } else if membership.is_member {
        violation(format!(
            "member of H({:?}, {:?}) with slack {}",
            membership.d_found, membership.k_found, report.slack
        ))
    } else {
        EqualityOutcome::StrictNonMember
    }
}

pub fn check_equality_characterization(g: &Graph, tol: &Tolerances) -> Result<EqualityCheck, VerifyError> {
    let report = check_theorem_bound(g, tol)?;
    Ok(EqualityCheck::from_report(g, report, tol))
}

/// Hex SHA-256 of the canonical edge list.
pub fn graph_digest(g: &Graph) -> String {
    hex::encode(Sha256::digest(serialize_edge_list(g).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub n_max: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub brute_force_cap: usize,
}

impl CampaignConfig {
    pub fn new(n_max: usize, d_min: usize, d_max: usize, trials: usize, seed: u64) -> Self {
        CampaignConfig {
            n_max,
            d_min,
            d_max,
            trials,
            seed,
            tolerances: Tolerances::default(),
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::InvalidCampaign(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.d_min == 0 || self.d_min > self.d_max {
            return bad(format!("need 1 <= d_min <= d_max, got {}..={}", self.d_min, self.d_max));
        }
        if self.n_max < self.d_max + 1 {
            return bad(format!("n_max = {} is below d_max + 1", self.n_max));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityHit {
    pub digest: String,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationDetail {
    pub trial: usize,
    pub digest: String,
    pub edge_list: String,
    pub failed: Vec<String>,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub trials: usize,
    pub violations: usize,
    pub worst_slack: f64,
    pub worst_digest: String,
    /// Smallest `λ₁ - threshold` of the lemma check over all trials.
    pub worst_lemma_margin: f64,
    pub equality_hits: Vec<EqualityHit>,
    pub anomalies: usize,
    pub crosschecks: usize,
    pub seed: u64,
    pub violation_details: Vec<ViolationDetail>,
}

struct TrialResult {
    digest: String,
    graph: Graph,
    report: VerificationReport,
    lemma_margin: f64,
    failed: Vec<String>,
    anomaly: bool,
    crosschecked: bool,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn run_trial(config: &CampaignConfig, trial: usize) -> Result<TrialResult, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(config.seed ^ splitmix64(trial as u64)));
    let d = rng.gen_range(config.d_min..=config.d_max);
    let n = rng.gen_range(d + 1..=config.n_max);
    let graph = random_connected_min_degree(n, d, rng.gen())?;
    let tol = &config.tolerances;

    let report = check_theorem_bound(&graph, tol)?;
    let lemma = LemmaCheck::from_report(&report, tol);
    let equality = EqualityCheck::from_report(&graph, report, tol);
    let mut failed = Vec::new();
    if !equality.report.bound_holds {
        failed.push(format!("bound: slack {}", equality.report.slack));
    }
    if !lemma.holds {
        failed.push(format!("lemma: margin {} at k = {}", lemma.margin, lemma.k));
    }
    if let EqualityOutcome::Violation { reason } = &equality.outcome {
        failed.push(format!("equality: {reason}"));
    }
    if !equality.report.certificate.is_valid_for(&graph)
        || equality.report.certificate.total() != equality.report.alpha_f
    {
        failed.push("certificate invalid".into());
    }
    let crosschecked = graph.n() <= config.brute_force_cap;
    if crosschecked && !berge_tutte_crosscheck(&graph, config.brute_force_cap)? {
        failed.push("berge-tutte crosscheck disagrees".into());
    }
    Ok(TrialResult {
        digest: graph_digest(&graph),
        anomaly: equality.is_anomaly(),
        lemma_margin: lemma.margin,
        report: equality.report,
        graph,
        failed,
        crosschecked,
    })
}

/// Random self-test of the bound, the lemma, the equality characterisation
/// and (for small graphs) the fractional Berge–Tutte identity.
///
/// Trials run in parallel; each draws from its own stream derived from
/// `(seed, trial)`, so the summary depends only on the configuration.
pub fn fuzz_campaign(config: &CampaignConfig) -> Result<CampaignSummary, VerifyError> {
    config.validate()?;
    let results: Vec<TrialResult> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect::<Result<_, _>>()?;

    let mut summary = CampaignSummary {
        trials: config.trials,
        violations: 0,
        worst_slack: f64::INFINITY,
        worst_digest: String::new(),
        worst_lemma_margin: f64::INFINITY,
        equality_hits: Vec::new(),
        anomalies: 0,
        crosschecks: 0,
        seed: config.seed,
        violation_details: Vec::new(),
    };
    for (trial, result) in results.into_iter().enumerate() {
        let slack = result.report.slack;
        if slack < summary.worst_slack || (slack == summary.worst_slack && result.digest < summary.worst_digest) {
            summary.worst_slack = slack;
            summary.worst_digest = result.digest.clone();
        }
        summary.worst_lemma_margin = summary.worst_lemma_margin.min(result.lemma_margin);
        summary.anomalies += usize::from(result.anomaly);
        summary.crosschecks += usize::from(result.crosschecked);
        if !result.failed.is_empty() {
            summary.violations += 1;
            summary.violation_details.push(ViolationDetail {
                trial,
                digest: result.digest.clone(),
                edge_list: serialize_edge_list(&result.graph),
                failed: result.failed,
                report: result.report.clone(),
            });
        }
        if result.report.equality_flag {
            summary.equality_hits.push(EqualityHit {
                digest: result.digest,
                report: result.report,
            });
        }
    }
    Ok(summary)
}

/// Brute-force deficiency witness of `g` fed into the chain check; `None`
/// when the witness has empty `S` or `T`.
pub fn witness_chain_for_bruteforce(
    g: &Graph,
    tol: &Tolerances,
    size_cap: usize,
) -> Result<Option<WitnessChain>, VerifyError> {
    let witness = max_deficiency_bruteforce(g, size_cap)?;
    match witness_chain_check(g, &witness.s, tol) {
        Ok(chain) => Ok(Some(chain)),
        Err(VerifyError::EmptyWitnessSide(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
