//! Stage events of the dyadic degree chain and their Monte Carlo
//! estimation.
//!
//! A stage `i` is built around an effective degree `d = 10·4^i` (plus an
//! optional parity shift of one) and the radii `0.1d`, `0.2d`, `0.4d`:
//!
//! * `F` — at most `floor(0.3d)` points, the center included, lie within
//!   `0.1d` of the center;
//! * `A` — some vertex of the next stage's degree lies at distance in
//!   `[0.1d, 0.2d)`; the nearest such vertex is the hop target;
//! * `B` — at most `floor(0.3d)` points lie at distance strictly between
//!   `0.1d` and `0.2d`;
//! * `C` — given a hop target `y`, at most `floor(0.6d)` points lie at
//!   distance at least `0.2d` from the center and at most `0.4d` from `y`;
//! * `D` — `A`, `B`, and `C` together.
//!
//! Whenever `F` and `D` hold at the center, `F` of the next stage holds at
//! the hop target deterministically, and the (center, target) pair is
//! strongly connected — so a run of successful stages builds a path of
//! forced edges between vertices of rapidly growing degree. The Monte Carlo
//! driver estimates the failure probabilities against exact Poisson forms
//! where available and Chernoff bounds otherwise, and verifies the inclusion
//! on every successful trial.
//!
//! Everything here works at unit intensity with the center planted at the
//! origin of a window sized via [`required_event_window`] /
//! [`required_chain_window`], so that every region an event inspects lies
//! inside the window and counts are exactly Poisson.

use std::fmt;
use std::io::Write;

use rand_chacha::ChaCha8Rng;

use crate::degree::{dyadic_mu, sample_degrees_rng, DegreeDistribution};
use crate::graph::is_strongly_connected_pair;
use crate::matching::run_to_completion;
use crate::point_process::{sample_poisson_rng, PointConfiguration, Window};
use crate::poisson;
use crate::rng::rng_from_seed;
use crate::text::format_real_result;
use crate::{Error, Result};

/// Trial attempts after which a conditioning event that never occurred is
/// declared unattainable.
const CONDITIONING_ATTEMPT_CEILING: u64 = 1_000_000;
/// Minimum tolerated acceptance rate of the conditioning event.
const CONDITIONING_RATE_FLOOR: f64 = 1e-6;

/// Radii and count caps of one chain stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainParams {
    i: u32,
    parity_shift: u32,
    degree: u32,
    next_degree: u32,
}

impl ChainParams {
    /// Stage `i >= 1` with a parity shift of 0 or 1. Stages above 13 would
    /// overflow the next stage's degree and are rejected.
    pub fn new(i: u32, parity_shift: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::invalid("stage index must be at least 1"));
        }
        if i > 13 {
            return Err(Error::invalid("stage index must be at most 13"));
        }
        if parity_shift > 1 {
            return Err(Error::invalid("parity shift must be 0 or 1"));
        }
        let base = |k: u32| 10u64 * 4u64.pow(k);
        Ok(ChainParams {
            i,
            parity_shift,
            degree: (base(i) + parity_shift as u64) as u32,
            next_degree: (base(i + 1) + parity_shift as u64) as u32,
        })
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn parity_shift(&self) -> u32 {
        self.parity_shift
    }

    /// Effective degree `d` of this stage (`10·4^i` plus the parity shift).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree the hop target must have (`10·4^{i+1}` plus the parity shift).
    pub fn next_degree(&self) -> u32 {
        self.next_degree
    }

    pub fn r_inner(&self) -> f64 {
        0.1 * self.degree as f64
    }

    pub fn r_mid(&self) -> f64 {
        0.2 * self.degree as f64
    }

    pub fn r_outer(&self) -> f64 {
        0.4 * self.degree as f64
    }

    /// `floor(0.3·d)`, the cap shared by the `F` and `B` counts.
    pub fn cap_near(&self) -> u64 {
        3 * self.degree as u64 / 10
    }

    /// `floor(0.6·d)`, the cap of the `C` count.
    pub fn cap_far(&self) -> u64 {
        6 * self.degree as u64 / 10
    }
}

/// `F` at the point with index `x`: the closed ball of radius `0.1d` holds
/// at most `floor(0.3d)` points, `x` itself included.
pub fn check_f(config: &PointConfiguration<f64>, x: usize, params: &ChainParams) -> bool {
    config.count_in_ball(config.positions()[x], params.r_inner()) <= params.cap_near() as usize
}

/// The nearest vertex of the next stage's degree at distance at least
/// `0.1d` from `x` (ties: smaller position first), if any.
pub fn find_next(
    config: &PointConfiguration<f64>,
    x: usize,
    params: &ChainParams,
) -> Option<usize> {
    let degrees = config.degrees().expect("degrees assigned");
    config
        .indices_by_distance(x)
        .find(|&j| config.distance(x, j) >= params.r_inner() && degrees[j] == params.next_degree())
}

/// `A` at `x`: [`find_next`] exists and lies at distance less than `0.2d`.
pub fn check_a(config: &PointConfiguration<f64>, x: usize, params: &ChainParams) -> bool {
    find_next(config, x, params).is_some_and(|j| config.distance(x, j) < params.r_mid())
}

/// `B` at `x`: at most `floor(0.3d)` points at distance strictly between
/// `0.1d` and `0.2d`.
pub fn check_b(config: &PointConfiguration<f64>, x: usize, params: &ChainParams) -> bool {
    config.count_in_annulus(config.positions()[x], params.r_inner(), params.r_mid())
        <= params.cap_near() as usize
}

/// `C` at `x` with hop-target coordinate `y`: at most `floor(0.6d)` points
/// at distance at least `0.2d` from `x` and at most `0.4d` from `y`. The
/// region has length exactly `0.4d` for every admissible `y`, whose distance
/// from `x` must lie strictly between `0.1d` and `0.2d` (anything else is an
/// error).
pub fn check_c(
    config: &PointConfiguration<f64>,
    x: usize,
    y: f64,
    params: &ChainParams,
) -> Result<bool> {
    let pos_x = config.positions()[x];
    let t = config.window().distance(pos_x, y);
    if !(t > params.r_inner() && t < params.r_mid()) {
        return Err(Error::invalid(format!(
            "hop target at distance {t} is outside the open interval ({}, {})",
            params.r_inner(),
            params.r_mid()
        )));
    }
    // the open 0.2d-ball around x is contained in the closed 0.4d-ball
    // around y, so the region count is a difference of ball counts
    let count = config.count_in_ball(y, params.r_outer())
        - config.count_in_open_ball(pos_x, params.r_mid());
    Ok(count <= params.cap_far() as usize)
}

/// Length of the `C` region `{z : |z−x| ≥ 0.2d, |z−y| ≤ 0.4d}` computed by
/// interval arithmetic (for checking that it always equals `0.4d`).
pub fn c_region_measure(params: &ChainParams, x: f64, y: f64) -> f64 {
    let (ball_lo, ball_hi) = (y - params.r_outer(), y + params.r_outer());
    let (cut_lo, cut_hi) = (x - params.r_mid(), x + params.r_mid());
    let overlap = (ball_hi.min(cut_hi) - ball_lo.max(cut_lo)).max(0.0);
    (ball_hi - ball_lo) - overlap
}

/// `D` at `x`: `A`, `B`, and `C` at the hop target. Returns the hop target
/// on success. The `C` precondition can only fail on inputs with a vertex at
/// exactly distance `0.1d` (probability zero under the model); such crafted
/// inputs surface as errors.
pub fn check_d(
    config: &PointConfiguration<f64>,
    x: usize,
    params: &ChainParams,
) -> Result<(bool, Option<usize>)> {
    let Some(y) = find_next(config, x, params) else {
        return Ok((false, None));
    };
    if config.distance(x, y) >= params.r_mid() {
        return Ok((false, None)); // A fails
    }
    if !check_b(config, x, params) {
        return Ok((false, None));
    }
    let c = check_c(config, x, config.positions()[y], params)?;
    Ok((c, c.then_some(y)))
}

/// Closed forms and bounds for the stage-`i` failure probabilities (the
/// unshifted forms; the Chernoff bounds drop polynomial factors and are
/// usable one-sided only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBounds {
    /// Exact `P(A fails) = exp(−2^i)`.
    pub a_fail_exact: f64,
    /// Chernoff bound `exp(−3(ln(3/2) − 1/3)·4^i)` on `P(B fails)`.
    pub b_fail_bound: f64,
    /// Chernoff bound `exp(−6(ln(3/2) − 1/3)·4^i)` on `P(C fails)`.
    pub c_fail_bound: f64,
    /// Engineering lower hint `1 − exp(−2^i) − 0.1` for `P(D | F)`.
    pub d_lower_hint: f64,
    /// [`chain_lower`] evaluated at `i`.
    pub chain_lower: f64,
}

/// Analytic references for stage `i >= 1`.
pub fn analytic_bounds(i: u32) -> Result<AnalyticBounds> {
    if i == 0 {
        return Err(Error::invalid("stage index must be at least 1"));
    }
    let pow2 = 2f64.powi(i as i32);
    let pow4 = 4f64.powi(i as i32);
    let rate = 1.5f64.ln() - 1.0 / 3.0;
    Ok(AnalyticBounds {
        a_fail_exact: (-pow2).exp(),
        b_fail_bound: (-3.0 * rate * pow4).exp(),
        c_fail_bound: (-6.0 * rate * pow4).exp(),
        d_lower_hint: 1.0 - (-pow2).exp() - 0.1,
        chain_lower: chain_lower(i),
    })
}

/// Lower bound `1 − 2·Σ_{i ≥ i0} exp(−2^i)` for the probability that a chain
/// started at stage `i0` succeeds forever; terms below `1e-300` are dropped.
pub fn chain_lower(i0: u32) -> f64 {
    let mut sum = 0.0;
    let mut i = i0;
    loop {
        let term = (-2f64.powi(i as i32)).exp();
        if term < 1e-300 {
            break;
        }
        sum += term;
        i += 1;
    }
    1.0 - 2.0 * sum
}

/// Window length that keeps every region inspected by one stage's events
/// strictly inside the window (the farthest reach is `0.6d`, padded to
/// `0.65d` per side).
pub fn required_event_window(params: &ChainParams) -> f64 {
    1.3 * params.degree as f64
}

/// Window length sufficient for a whole chain: hops wander by at most
/// `0.2d_i` per stage and the final stage inspects up to `0.4d_max` beyond
/// the last hop.
pub fn required_chain_window(i0: u32, i_max: u32, parity_shift: u32) -> Result<f64> {
    if i0 == 0 || i_max < i0 {
        return Err(Error::invalid("chain stages must satisfy 1 <= i0 <= i_max"));
    }
    let mut reach = 0.0;
    for i in i0..=i_max {
        reach += ChainParams::new(i, parity_shift)?.r_mid();
    }
    reach += ChainParams::new(i_max, parity_shift)?.r_outer();
    Ok(2.0 * reach)
}

/// The degree law used by event estimation at stage `i`: dyadic atoms up to
/// two stages above `i`, so the mass at the next stage's degree is exactly
/// `2^{-(i+1)}` (the topmost atom absorbs the truncation residual and would
/// distort it otherwise).
pub fn default_event_law(params: &ChainParams) -> Result<DegreeDistribution> {
    dyadic_mu(1, params.i + 2, params.parity_shift, false)
}

/// Events the Monte Carlo driver can estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// `P(F)` at a planted center (no conditioning).
    F,
    /// `P(A fails)`.
    AFailure,
    /// `P(B fails)`.
    BFailure,
    /// `P(C fails)` with the hop target fixed at `x + 0.15d`.
    CFailure,
    /// `P(D)` conditioned on `F` by rejection.
    DGivenF,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::F => "F",
            EventKind::AFailure => "A_failure",
            EventKind::BFailure => "B_failure",
            EventKind::CFailure => "C_failure",
            EventKind::DGivenF => "D_given_F",
        })
    }
}

/// How the `analytic` column of an [`EventReport`] is to be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    UpperBound,
    LowerBound,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Exact => "exact",
            BoundKind::UpperBound => "upper_bound",
            BoundKind::LowerBound => "lower_bound",
        })
    }
}

/// What to estimate: an event at a stage, under a degree law for the
/// non-center points.
#[derive(Debug, Clone)]
pub struct EventSpec {
    pub kind: EventKind,
    pub law: DegreeDistribution,
}

impl EventSpec {
    /// The event under the default law of the stage.
    pub fn with_default_law(kind: EventKind, params: &ChainParams) -> Result<Self> {
        Ok(EventSpec { kind, law: default_event_law(params)? })
    }
}

/// Outcome of a Monte Carlo estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct EventReport {
    pub event: EventKind,
    pub i: u32,
    pub trials: u64,
    pub successes: u64,
    /// `successes / trials`.
    pub estimate: f64,
    /// `sqrt(estimate·(1−estimate)/trials)`.
    pub std_error: f64,
    /// Reference value; its meaning depends on `bound_kind`.
    pub analytic: f64,
    pub bound_kind: BoundKind,
}

impl EventReport {
    pub const CSV_HEADER: &'static str =
        "event,i,trials,successes,estimate,stderr,analytic,bound_kind";

    /// Writes one CSV row matching [`Self::CSV_HEADER`].
    pub fn write_csv_row<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            self.event,
            self.i,
            self.trials,
            self.successes,
            format_real_result(self.estimate),
            format_real_result(self.std_error),
            format_real_result(self.analytic),
            self.bound_kind,
        )?;
        Ok(())
    }
}

/// Samples one trial configuration: unit-intensity points in a window of
/// [`required_event_window`] length, a center planted at the origin with the
/// stage degree, all other degrees i.i.d. from `law`. Returns the
/// configuration and the center's index.
pub fn sample_stage_config(
    params: &ChainParams,
    law: &DegreeDistribution,
    rng: &mut ChaCha8Rng,
) -> Result<(PointConfiguration<f64>, usize)> {
    let window = Window::open(required_event_window(params))?;
    let config = sample_poisson_rng(window, 1.0, rng)?.palm_insert(0.0)?;
    let config = sample_degrees_rng(law, &config, rng, Some(params.degree))?;
    let center = config.palm_index().expect("palm point planted");
    Ok((config, center))
}

/// Like [`sample_stage_config`], conditioned on `F` at the center by
/// rejection.
pub fn sample_f_conditioned(
    params: &ChainParams,
    law: &DegreeDistribution,
    rng: &mut ChaCha8Rng,
) -> Result<(PointConfiguration<f64>, usize)> {
    let (mut attempted, mut accepted) = (0, 0);
    sample_conditioned_on_f(params, law, rng, &mut attempted, &mut accepted)
}

/// Samples a trial configuration conditioned on `F` at the center, by
/// rejection. `attempted`/`accepted` accumulate across calls so that a
/// conditioning event with acceptance rate below `1e-6` aborts with a
/// diagnostic instead of spinning forever.
fn sample_conditioned_on_f(
    params: &ChainParams,
    law: &DegreeDistribution,
    rng: &mut ChaCha8Rng,
    attempted: &mut u64,
    accepted: &mut u64,
) -> Result<(PointConfiguration<f64>, usize)> {
    loop {
        *attempted += 1;
        let (config, center) = sample_stage_config(params, law, rng)?;
        if check_f(&config, center, params) {
            *accepted += 1;
            return Ok((config, center));
        }
        if *attempted >= CONDITIONING_ATTEMPT_CEILING
            && (*accepted as f64) < CONDITIONING_RATE_FLOOR * *attempted as f64
        {
            return Err(Error::Conditioning {
                accepted: *accepted,
                attempted: *attempted,
                floor: CONDITIONING_RATE_FLOOR,
            });
        }
    }
}

/// Estimates `P(event)` over independent trials (one RNG stream per trial,
/// so results do not depend on scheduling). For `D given F`, every
/// successful trial additionally verifies the deterministic inclusion: `F`
/// of the next stage holds at the hop target and the (center, target) pair
/// is strongly connected; a violation is an internal-defect error.
pub fn mc_estimate(
    spec: &EventSpec,
    params: &ChainParams,
    trials: u64,
    seed: u64,
) -> Result<EventReport> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let mut successes = 0u64;
    let mut attempted = 0u64;
    let mut accepted = 0u64;
    for trial in 0..trials {
        let mut rng = crate::rng::trial_rng(seed, trial);
        let success = match spec.kind {
            EventKind::F => {
                let (config, center) = sample_stage_config(params, &spec.law, &mut rng)?;
                check_f(&config, center, params)
            }
            EventKind::AFailure => {
                let (config, center) = sample_stage_config(params, &spec.law, &mut rng)?;
                !check_a(&config, center, params)
            }
            EventKind::BFailure => {
                let (config, center) = sample_stage_config(params, &spec.law, &mut rng)?;
                !check_b(&config, center, params)
            }
            EventKind::CFailure => {
                let (config, center) = sample_stage_config(params, &spec.law, &mut rng)?;
                let y = config.positions()[center] + 0.15 * params.degree as f64;
                !check_c(&config, center, y, params)?
            }
            EventKind::DGivenF => {
                let (config, center) = sample_conditioned_on_f(
                    params,
                    &spec.law,
                    &mut rng,
                    &mut attempted,
                    &mut accepted,
                )?;
                let (d, next) = check_d(&config, center, params)?;
                if d {
                    verify_inclusion(&config, center, next.expect("hop target"), params)?;
                }
                d
            }
        };
        successes += success as u64;
    }
    let estimate = successes as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    let bounds = analytic_bounds(params.i)?;
    let (analytic, bound_kind) = match spec.kind {
        EventKind::F => (
            // the center occupies one of the floor(0.3d) slots
            poisson::cdf(2.0 * params.r_inner(), params.cap_near() - 1),
            BoundKind::Exact,
        ),
        EventKind::AFailure => (
            // no point of the [0.1d, 0.2d) annuli on both sides carries the
            // next degree: a thinned Poisson void probability
            (-2.0 * (params.r_mid() - params.r_inner()) * spec.law.pmf(params.next_degree()))
                .exp(),
            BoundKind::Exact,
        ),
        EventKind::BFailure => (bounds.b_fail_bound, BoundKind::UpperBound),
        EventKind::CFailure => (bounds.c_fail_bound, BoundKind::UpperBound),
        EventKind::DGivenF => (bounds.d_lower_hint, BoundKind::LowerBound),
    };
    Ok(EventReport {
        event: spec.kind,
        i: params.i,
        trials,
        successes,
        estimate,
        std_error,
        analytic,
        bound_kind,
    })
}

/// The deterministic consequence of `D ∩ F` at `x` with hop target `y`:
/// next-stage `F` at `y`, and strong connection of the pair.
fn verify_inclusion(
    config: &PointConfiguration<f64>,
    x: usize,
    y: usize,
    params: &ChainParams,
) -> Result<()> {
    let next_params = ChainParams::new(params.i + 1, params.parity_shift)?;
    if !check_f(config, y, &next_params) {
        return Err(Error::invariant(format!(
            "stage {} D and F hold but next-stage F fails at the hop target",
            params.i
        )));
    }
    if !is_strongly_connected_pair(config, x, y)? {
        return Err(Error::invariant(format!(
            "stage {} D and F hold but the hop pair is not strongly connected",
            params.i
        )));
    }
    Ok(())
}

/// Per-stage outcomes of one chain trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageOutcome {
    pub i: u32,
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

/// Outcome of one chain trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutcome {
    /// Largest stage whose `D` event succeeded; `i0 − 1` when the first
    /// stage already failed.
    pub depth_reached: u32,
    /// Whether every stage from `i0` through `i_max` succeeded.
    pub full_success: bool,
    /// One entry per evaluated stage (evaluation stops at the first
    /// failure).
    pub stages: Vec<StageOutcome>,
    /// Indices of the chain vertices found, starting with the center.
    pub chain: Vec<usize>,
}

/// Runs one chain trial: plants a center of the stage-`i0` degree satisfying
/// `F` (by rejection), then hops through stages `i0..=i_max`, stopping at
/// the first `D` failure. Every successful stage verifies the inclusion
/// (next-stage `F` and strong connection). On full success the matching
/// engine runs on the whole configuration and every consecutive chain pair
/// must be an edge of the finished matching.
///
/// `window_length` must be at least [`required_chain_window`]; points are
/// sampled at unit intensity, non-center degrees i.i.d. from the dyadic law
/// with atoms up to stage `i_max + 2`.
pub fn run_chain_trial(
    i0: u32,
    i_max: u32,
    parity_shift: u32,
    window_length: f64,
    seed: u64,
) -> Result<ChainOutcome> {
    run_chain_trial_rng(i0, i_max, parity_shift, window_length, &mut rng_from_seed(seed))
}

/// [`run_chain_trial`] driven by an external RNG (one stream per trial).
pub fn run_chain_trial_rng(
    i0: u32,
    i_max: u32,
    parity_shift: u32,
    window_length: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ChainOutcome> {
    let required = required_chain_window(i0, i_max, parity_shift)?;
    if window_length < required {
        return Err(Error::invalid(format!(
            "window length {window_length} is below the required {required}"
        )));
    }
    let law = dyadic_mu(1, i_max + 2, parity_shift, false)?;
    let first_params = ChainParams::new(i0, parity_shift)?;
    let window = Window::open(window_length)?;

    // rejection-sample the conditioning event F at the center
    let mut attempts = 0u64;
    let (config, center) = loop {
        attempts += 1;
        let config = sample_poisson_rng(window, 1.0, rng)?.palm_insert(0.0)?;
        let config = sample_degrees_rng(&law, &config, rng, Some(first_params.degree()))?;
        let center = config.palm_index().expect("palm point planted");
        if check_f(&config, center, &first_params) {
            break (config, center);
        }
        if attempts >= CONDITIONING_ATTEMPT_CEILING {
            return Err(Error::Conditioning {
                accepted: 0,
                attempted: attempts,
                floor: CONDITIONING_RATE_FLOOR,
            });
        }
    };

    let mut stages = Vec::with_capacity((i_max - i0 + 1) as usize);
    let mut chain = vec![center];
    let mut depth_reached = i0 - 1;
    let mut x = center;
    for i in i0..=i_max {
        let params = ChainParams::new(i, parity_shift)?;
        debug_assert!(check_f(&config, x, &params), "stage precondition F");
        let a = check_a(&config, x, &params);
        let b = check_b(&config, x, &params);
        // evaluate C separately so failed stages still report it
        let (c, next) = if a {
            let target = find_next(&config, x, &params).expect("A holds");
            (check_c(&config, x, config.positions()[target], &params)?, Some(target))
        } else {
            (false, None)
        };
        let d = a && b && c;
        stages.push(StageOutcome { i, a, b, c, d });
        if !d {
            break;
        }
        let next = next.expect("hop target under A");
        verify_inclusion(&config, x, next, &params)?;
        chain.push(next);
        depth_reached = i;
        x = next;
    }

    let full_success = depth_reached == i_max;
    if full_success {
        let matching = run_to_completion(config, None)?;
        if matching.truncated() {
            return Err(Error::invariant("chain verification run was truncated"));
        }
        for pair in chain.windows(2) {
            if !matching.contains_edge(pair[0], pair[1]) {
                return Err(Error::invariant(format!(
                    "chain pair ({}, {}) is not an edge of the finished matching",
                    pair[0], pair[1]
                )));
            }
        }
    }

    Ok(ChainOutcome { depth_reached, full_success, stages, chain })
}
