//! Parameter sweeps, transition classification, hysteresis and phase maps.
//!
//! The system is super-radiant when the global maximizer x* of Ω is non-zero.
//! A transition is first-order when x* jumps across a sweep step while two
//! maxima coexist nearby, and second-order when x* leaves zero continuously.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{climb_from, find_local_maxima_with, LandscapePoint, MaximaReport, ScanSettings};
use crate::model::{ModelParams, Parameter};

/// Numerical settings for sweeps and classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseSettings {
    pub scan: ScanSettings,
    /// x* above this counts as super-radiant.
    pub superradiance_threshold: f64,
    /// A step is a jump when |Δx*| exceeds this multiple of the neighbouring drift.
    pub jump_factor: f64,
    /// Relative bracket width at which critical-point bisection stops.
    pub bisection_rel_tol: f64,
    pub max_bisections: usize,
}

impl Default for PhaseSettings {
    fn default() -> Self {
        PhaseSettings {
            scan: ScanSettings::default(),
            superradiance_threshold: 1e-6,
            jump_factor: 20.0,
            bisection_rel_tol: 1e-4,
            max_bisections: 40,
        }
    }
}

impl PhaseSettings {
    pub fn is_super_radiant(&self, x_star: f64) -> bool {
        x_star > self.superradiance_threshold
    }

    fn jump_threshold(&self, drift: f64) -> f64 {
        self.jump_factor * drift.max(self.superradiance_threshold)
    }
}

/// An evenly spaced set of values for one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(parameter: Parameter, start: f64, stop: f64, steps: usize) -> Self {
        Axis {
            parameter,
            start,
            stop,
            steps,
        }
    }

    /// `start` and `stop` may come in either order; one step needs start = stop.
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::invalid("sweep", "start and stop must be finite"));
        }
        if self.steps == 0 {
            return Err(Error::invalid("sweep", "steps must be >= 1"));
        }
        if self.steps == 1 && self.start != self.stop {
            return Err(Error::invalid("sweep", "a single step requires start == stop"));
        }
        if self.steps > 1 && self.start == self.stop {
            return Err(Error::invalid("sweep", "start and stop must differ"));
        }
        Ok(())
    }

    /// The i-th value; the reversed axis yields the same values bit for bit.
    pub fn value(&self, i: usize) -> f64 {
        linspace_value(self.start, self.stop, i, self.steps)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    pub fn reversed(&self) -> Axis {
        Axis {
            start: self.stop,
            stop: self.start,
            ..*self
        }
    }
}

/// Point `i` of `steps` evenly spaced values from `start` to `stop`.
/// Computed from whichever end is nearer so that swapping the ends
/// reproduces the same values bit for bit.
pub fn linspace_value(start: f64, stop: f64, i: usize, steps: usize) -> f64 {
    if steps <= 1 {
        return start;
    }
    let last = steps - 1;
    let span = stop - start;
    if 2 * i < last {
        start + span * (i as f64 / last as f64)
    } else if 2 * i > last {
        stop - span * ((last - i) as f64 / last as f64)
    } else {
        0.5 * (start + stop)
    }
}

/// A one-parameter sweep with the other three parameters held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: Axis,
    /// The swept field of `fixed` is ignored.
    pub fixed: ModelParams,
}

impl SweepSpec {
    pub fn new(parameter: Parameter, start: f64, stop: f64, steps: usize, fixed: ModelParams) -> Self {
        SweepSpec {
            axis: Axis::new(parameter, start, stop, steps),
            fixed,
        }
    }

    pub fn params_at_value(&self, value: f64) -> ModelParams {
        self.fixed.with(self.axis.parameter, value)
    }

    pub fn params(&self, i: usize) -> ModelParams {
        self.params_at_value(self.axis.value(i))
    }

    pub fn validate(&self) -> Result<()> {
        self.axis.validate()?;
        self.params(0).validate()?;
        self.params(self.axis.steps - 1).validate()
    }

    pub fn reversed(&self) -> SweepSpec {
        SweepSpec {
            axis: self.axis.reversed(),
            fixed: self.fixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub value: f64,
    pub x_star: f64,
    pub omega_star: f64,
    pub theta: f64,
    pub tie: bool,
    /// Number of local maxima; `None` on branch-followed steps that skipped the full scan.
    pub n_maxima: Option<usize>,
}

impl SweepRecord {
    fn from_report(value: f64, params: &ModelParams, report: &MaximaReport) -> Self {
        let top = report.global();
        SweepRecord {
            value,
            x_star: top.x,
            omega_star: top.omega,
            theta: theta(top.x, params.beta),
            tie: report.tie,
            n_maxima: Some(report.count()),
        }
    }

    fn coexisting(&self) -> bool {
        self.n_maxima.is_some_and(|n| n >= 2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub records: Vec<SweepRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionOrder {
    First,
    Second,
}

impl TransitionOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionOrder::First => "first",
            TransitionOrder::Second => "second",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    /// Midpoint of the refined bracket.
    pub critical_value: f64,
    /// Refined bracket, ordered as in the sweep.
    pub bracket: (f64, f64),
    pub order: TransitionOrder,
    /// |Δx*| across the refined bracket; zero for continuous transitions.
    pub jump: f64,
    /// Width of the parameter interval around the transition with two or more maxima.
    pub coexistence_width: f64,
}

/// `Θ = ⟨a†a⟩/N = x*² + 1/(2β)`. The second term is the thermal contribution
/// of the integrated-out imaginary part of the coherent amplitude.
pub fn order_parameter(params: &ModelParams) -> Result<f64> {
    order_parameter_with(params, &ScanSettings::default())
}

pub fn order_parameter_with(params: &ModelParams, settings: &ScanSettings) -> Result<f64> {
    let top = find_local_maxima_with(params, settings)?.global();
    Ok(theta(top.x, params.beta))
}

fn theta(x_star: f64, beta: f64) -> f64 {
    x_star * x_star + 0.5 / beta
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    sweep_with(spec, &PhaseSettings::default())
}

/// Global maximizer and Θ at every step. Steps are independent and may run
/// in parallel; results are ordered as in the spec.
pub fn sweep_with(spec: &SweepSpec, settings: &PhaseSettings) -> Result<SweepResult> {
    spec.validate()?;
    let records = (0..spec.axis.steps)
        .into_par_iter()
        .map(|i| {
            let value = spec.axis.value(i);
            let params = spec.params_at_value(value);
            find_local_maxima_with(&params, &settings.scan)
                .map(|report| SweepRecord::from_report(value, &params, &report))
                .map_err(|e| step_error(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { spec: *spec, records })
}

fn step_error(index: usize, source: Error) -> Error {
    Error::SweepStep {
        index,
        source: Box::new(source),
    }
}

pub fn classify_transition(result: &SweepResult) -> Result<Vec<TransitionRecord>> {
    classify_transition_with(result, &PhaseSettings::default())
}

/// Locate and classify every transition in a completed sweep.
///
/// Regime changes (zero ↔ non-zero x*) and jumps between two super-radiant
/// branches are bracketed on the sweep grid, then the bracket is bisected on
/// the swept parameter. The jump test is applied both on the sweep grid and
/// on the refined bracket, with the drift there measured one bracket width
/// outside each end. Bisection re-evaluates the landscape, hence the `Result`.
pub fn classify_transition_with(result: &SweepResult, settings: &PhaseSettings) -> Result<Vec<TransitionRecord>> {
    Ok(locate_transitions(result, settings)?
        .into_iter()
        .map(|(_, t)| t)
        .collect())
}

/// Transitions paired with the index of the sweep step just before each one.
fn locate_transitions(result: &SweepResult, settings: &PhaseSettings) -> Result<Vec<(usize, TransitionRecord)>> {
    let recs = &result.records;
    let n = recs.len();
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let delta = |i: usize| (recs[i + 1].x_star - recs[i].x_star).abs();

    for i in 0..n - 1 {
        let (a, b) = (&recs[i], &recs[i + 1]);
        let super_a = settings.is_super_radiant(a.x_star);
        let super_b = settings.is_super_radiant(b.x_star);

        let mut drift: f64 = 0.0;
        if i > 0 {
            drift = drift.max(delta(i - 1));
        }
        if i + 2 < n {
            drift = drift.max(delta(i + 1));
        }
        let grid_coexist = (i.saturating_sub(1)..(i + 3).min(n)).any(|j| recs[j].coexisting());
        let grid_jump = delta(i) > settings.jump_threshold(drift);

        let regime_change = super_a != super_b;
        if !regime_change && !(super_a && super_b && grid_jump && grid_coexist) {
            continue;
        }

        let stays_left = |x: f64| {
            if regime_change {
                settings.is_super_radiant(x) == super_a
            } else {
                (x - a.x_star).abs() < (x - b.x_star).abs()
            }
        };
        let bracket = bisect(
            &result.spec,
            settings,
            (a.value, a.x_star, a.n_maxima),
            (b.value, b.x_star, b.n_maxima),
            |top: &MaximaReport| stays_left(top.global().x),
        )?;
        let jump = (bracket.x_hi - bracket.x_lo).abs();
        let refined_jump = jump > settings.jump_threshold(bracket_drift(&result.spec, settings, &bracket)?);
        let coexist = grid_coexist || bracket.count_lo.max(bracket.count_hi).is_some_and(|c| c >= 2);

        let (order, jump, coexistence_width) = if (grid_jump || refined_jump) && coexist {
            let width = coexistence_width(result, settings, i, &bracket)?;
            (TransitionOrder::First, jump, width)
        } else {
            (TransitionOrder::Second, 0.0, 0.0)
        };
        out.push((
            i,
            TransitionRecord {
                critical_value: 0.5 * (bracket.lo + bracket.hi),
                bracket: (bracket.lo, bracket.hi),
                order,
                jump,
                coexistence_width,
            },
        ));
    }
    Ok(out)
}

struct Bracket {
    lo: f64,
    hi: f64,
    x_lo: f64,
    x_hi: f64,
    count_lo: Option<usize>,
    count_hi: Option<usize>,
}

/// Bisect `[left, right]` on the swept parameter. Each end carries
/// (value, x*, maxima count); `is_left` classifies a landscape as belonging
/// to the left end.
fn bisect<F>(
    spec: &SweepSpec,
    settings: &PhaseSettings,
    left: (f64, f64, Option<usize>),
    right: (f64, f64, Option<usize>),
    is_left: F,
) -> Result<Bracket>
where
    F: Fn(&MaximaReport) -> bool,
{
    let mut br = Bracket {
        lo: left.0,
        hi: right.0,
        x_lo: left.1,
        x_hi: right.1,
        count_lo: left.2,
        count_hi: right.2,
    };
    for _ in 0..settings.max_bisections {
        let scale = br.lo.abs().max(br.hi.abs()).max(f64::MIN_POSITIVE);
        if (br.hi - br.lo).abs() <= settings.bisection_rel_tol * scale {
            break;
        }
        let mid = 0.5 * (br.lo + br.hi);
        let report = find_local_maxima_with(&spec.params_at_value(mid), &settings.scan)?;
        if is_left(&report) {
            br.lo = mid;
            br.x_lo = report.global().x;
            br.count_lo = Some(report.count());
        } else {
            br.hi = mid;
            br.x_hi = report.global().x;
            br.count_hi = Some(report.count());
        }
    }
    Ok(br)
}

/// Largest |Δx*| over one bracket width just outside either end of the bracket.
fn bracket_drift(spec: &SweepSpec, settings: &PhaseSettings, br: &Bracket) -> Result<f64> {
    let width = br.hi - br.lo;
    let mut drift: f64 = 0.0;
    for (outside, x_end) in [(br.lo - width, br.x_lo), (br.hi + width, br.x_hi)] {
        let params = spec.params_at_value(outside);
        if params.validate().is_err() {
            continue;
        }
        let x = find_local_maxima_with(&params, &settings.scan)?.global().x;
        drift = drift.max((x - x_end).abs());
    }
    Ok(drift)
}

/// Width of the parameter interval with ≥ 2 maxima around a first-order
/// bracket between steps `i` and `i + 1`. Each end is located on the sweep
/// grid and then bisected onto the spinodal.
fn coexistence_width(result: &SweepResult, settings: &PhaseSettings, i: usize, br: &Bracket) -> Result<f64> {
    let recs = &result.records;
    let n = recs.len();
    let coexisting = |report: &MaximaReport| report.count() >= 2;
    let inside = if br.count_lo.is_some_and(|c| c >= 2) {
        (br.lo, br.x_lo, br.count_lo)
    } else if br.count_hi.is_some_and(|c| c >= 2) {
        (br.hi, br.x_hi, br.count_hi)
    } else if let Some(j) = [i, i + 1].into_iter().find(|&j| recs[j].coexisting()) {
        (recs[j].value, recs[j].x_star, recs[j].n_maxima)
    } else {
        return Ok(0.0);
    };

    let mut l = i;
    while l > 0 && recs[l].coexisting() {
        l -= 1;
    }
    let left_end = if recs[l].coexisting() {
        recs[l].value
    } else {
        let inner = if l == i { inside } else { as_end(&recs[l + 1]) };
        bisect(&result.spec, settings, as_end(&recs[l]), inner, |m: &MaximaReport| {
            !coexisting(m)
        })?
        .hi
    };

    let mut r = i + 1;
    while r + 1 < n && recs[r].coexisting() {
        r += 1;
    }
    let right_end = if recs[r].coexisting() {
        recs[r].value
    } else {
        let inner = if r == i + 1 { inside } else { as_end(&recs[r - 1]) };
        bisect(&result.spec, settings, inner, as_end(&recs[r]), coexisting)?.lo
    };
    Ok((right_end - left_end).abs())
}

fn as_end(rec: &SweepRecord) -> (f64, f64, Option<usize>) {
    (rec.value, rec.x_star, rec.n_maxima)
}

/// Forward and backward branch-followed sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisBranches {
    /// Swept from `start` to `stop`.
    pub forward: SweepResult,
    /// Swept from `stop` back to `start`, records in sweep order.
    pub backward: SweepResult,
}

impl HysteresisBranches {
    /// Backward records reordered to line up with the forward ones.
    pub fn backward_aligned(&self) -> Vec<SweepRecord> {
        self.backward.records.iter().rev().copied().collect()
    }

    /// Parameter windows (in forward order) where the branches disagree by more than `tol` in x*.
    pub fn disagreement_windows(&self, tol: f64) -> Vec<(f64, f64)> {
        let back = self.backward_aligned();
        let mut windows = Vec::new();
        let mut open: Option<(f64, f64)> = None;
        for (f, b) in self.forward.records.iter().zip(&back) {
            if (f.x_star - b.x_star).abs() > tol {
                open = Some(match open {
                    Some((s, _)) => (s, f.value),
                    None => (f.value, f.value),
                });
            } else if let Some(w) = open.take() {
                windows.push(w);
            }
        }
        windows.extend(open);
        windows
    }
}

pub fn hysteresis_branches(spec: &SweepSpec) -> Result<HysteresisBranches> {
    hysteresis_branches_with(spec, &PhaseSettings::default())
}

/// Sweep once in each direction, following the local maximum the system sits
/// in rather than the global one.
///
/// Each step climbs Ω from the previous branch value. If the climb ends far
/// from where it started, the branch's maximum has disappeared and the step
/// falls back to the global scan.
pub fn hysteresis_branches_with(spec: &SweepSpec, settings: &PhaseSettings) -> Result<HysteresisBranches> {
    spec.validate()?;
    Ok(HysteresisBranches {
        forward: follow_branch(spec, settings)?,
        backward: follow_branch(&spec.reversed(), settings)?,
    })
}

fn follow_branch(spec: &SweepSpec, settings: &PhaseSettings) -> Result<SweepResult> {
    let mut records: Vec<SweepRecord> = Vec::with_capacity(spec.axis.steps);
    for i in 0..spec.axis.steps {
        let value = spec.axis.value(i);
        let params = spec.params_at_value(value);
        let record = match records.last() {
            None => global_record(value, &params, settings).map_err(|e| step_error(i, e))?,
            Some(prev) => {
                let climbed = climb_from(&params, prev.x_star, &settings.scan).map_err(|e| step_error(i, e))?;
                if branch_lost(&params, prev, &records, &climbed, settings) {
                    global_record(value, &params, settings).map_err(|e| step_error(i, e))?
                } else {
                    SweepRecord {
                        value,
                        x_star: climbed.x,
                        omega_star: climbed.omega,
                        theta: theta(climbed.x, params.beta),
                        tie: false,
                        n_maxima: None,
                    }
                }
            }
        };
        records.push(record);
    }
    Ok(SweepResult { spec: *spec, records })
}

fn global_record(value: f64, params: &ModelParams, settings: &PhaseSettings) -> Result<SweepRecord> {
    let report = find_local_maxima_with(params, &settings.scan)?;
    Ok(SweepRecord::from_report(value, params, &report))
}

/// The climb left the basin it started in: it moved much further than the
/// branch has been drifting per step, and further than a few grid spacings.
fn branch_lost(
    params: &ModelParams,
    prev: &SweepRecord,
    history: &[SweepRecord],
    climbed: &LandscapePoint,
    settings: &PhaseSettings,
) -> bool {
    let spacing = crate::landscape::scan_bound(params) / (settings.scan.grid_points - 1) as f64;
    let drift = match history {
        [.., before, last] => (last.x_star - before.x_star).abs(),
        _ => 0.0,
    };
    let allowed = (settings.jump_factor * drift).max(10.0 * spacing);
    (climbed.x - prev.x_star).abs() > allowed
}

/// Radiance class of a phase-map cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    SubRadiant,
    SuperRadiant,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::SubRadiant => "sub",
            Phase::SuperRadiant => "super",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub a_value: f64,
    pub b_value: f64,
    pub x_star: f64,
    pub omega_star: f64,
    pub n_maxima: usize,
    pub phase: Phase,
    /// Set on the two cells bracketing a transition along axis b.
    pub boundary: Option<TransitionOrder>,
}

impl PhaseCell {
    fn as_record(&self, beta: f64) -> SweepRecord {
        SweepRecord {
            value: self.b_value,
            x_star: self.x_star,
            omega_star: self.omega_star,
            theta: theta(self.x_star, beta),
            tie: false,
            n_maxima: Some(self.n_maxima),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    pub a: Axis,
    pub b: Axis,
    pub fixed: ModelParams,
    /// Row-major over (a, b): cell (i, j) is at `i * b.steps + j`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseMap {
    pub fn cell(&self, i: usize, j: usize) -> &PhaseCell {
        &self.cells[i * self.b.steps + j]
    }

    /// Cells of row `i`, i.e. the 1-D cut along axis b at a = a.value(i).
    pub fn row(&self, i: usize) -> &[PhaseCell] {
        let nb = self.b.steps;
        &self.cells[i * nb..(i + 1) * nb]
    }
}

pub fn phase_map(a: &Axis, b: &Axis, fixed: &ModelParams) -> Result<PhaseMap> {
    phase_map_with(a, b, fixed, &PhaseSettings::default())
}

/// Classify every cell of a two-parameter grid, then treat each row as a sweep
/// along axis b and mark the cells bracketing each transition with its order.
pub fn phase_map_with(a: &Axis, b: &Axis, fixed: &ModelParams, settings: &PhaseSettings) -> Result<PhaseMap> {
    a.validate()?;
    b.validate()?;
    if a.parameter == b.parameter {
        return Err(Error::invalid("sweep", "phase map axes must be different parameters"));
    }
    let nb = b.steps;
    let params_at = |i: usize, j: usize| fixed.with(a.parameter, a.value(i)).with(b.parameter, b.value(j));
    for (i, j) in [(0, 0), (a.steps - 1, nb - 1), (0, nb - 1), (a.steps - 1, 0)] {
        params_at(i, j).validate()?;
    }

    let mut cells = (0..a.steps * nb)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / nb, idx % nb);
            let params = params_at(i, j);
            let report = find_local_maxima_with(&params, &settings.scan).map_err(|e| step_error(idx, e))?;
            let top = report.global();
            Ok(PhaseCell {
                a_value: a.value(i),
                b_value: b.value(j),
                x_star: top.x,
                omega_star: top.omega,
                n_maxima: report.count(),
                phase: if settings.is_super_radiant(top.x) {
                    Phase::SuperRadiant
                } else {
                    Phase::SubRadiant
                },
                boundary: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let annotations = (0..a.steps)
        .into_par_iter()
        .map(|i| {
            let row = &cells[i * nb..(i + 1) * nb];
            let cut = SweepResult {
                spec: SweepSpec {
                    axis: *b,
                    fixed: fixed.with(a.parameter, a.value(i)),
                },
                records: row
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.as_record(params_at(i, j).beta))
                    .collect(),
            };
            locate_transitions(&cut, settings)
                .map(|found| {
                    found
                        .into_iter()
                        .map(|(j, t)| (i * nb + j, t.order))
                        .collect::<Vec<_>>()
                })
                .map_err(|e| step_error(i * nb, e))
        })
        .collect::<Result<Vec<_>>>()?;
    for (idx, order) in annotations.into_iter().flatten() {
        for cell in [idx, idx + 1] {
            cells[cell].boundary = match cells[cell].boundary {
                Some(TransitionOrder::First) => Some(TransitionOrder::First),
                _ => Some(order),
            };
        }
    }

    Ok(PhaseMap {
        a: *a,
        b: *b,
        fixed: *fixed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(lambda: f64, j: f64, epsilon: f64, beta: f64) -> ModelParams {
        ModelParams::new(lambda, j, epsilon, beta).unwrap()
    }

    #[test]
    fn axis_values_hit_both_ends_exactly() {
        let axis = Axis::new(Parameter::Lambda, 0.1, 2.3, 7);
        let v = axis.values();
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 2.3);
        assert_eq!(v[3], 0.5 * (0.1 + 2.3));
    }

    #[test]
    fn reversed_axis_is_bitwise_mirror() {
        for steps in [2usize, 5, 6, 101] {
            let axis = Axis::new(Parameter::Beta, 0.37, 91.3, steps);
            let fwd = axis.values();
            let mut back = axis.reversed().values();
            back.reverse();
            assert_eq!(fwd, back, "steps={steps}");
        }
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(Parameter::Lambda, 0.0, 0.0, 1).validate().is_ok());
        assert!(Axis::new(Parameter::Lambda, 0.0, 1.0, 1).validate().is_err());
        assert!(Axis::new(Parameter::Lambda, 0.0, 1.0, 0).validate().is_err());
        assert!(Axis::new(Parameter::Lambda, 1.0, 1.0, 3).validate().is_err());
        assert!(Axis::new(Parameter::Lambda, 0.0, f64::NAN, 3).validate().is_err());
    }

    #[test]
    fn sweep_rejects_invalid_params_along_axis() {
        let spec = SweepSpec::new(Parameter::Beta, 0.0, 1.0, 3, fixed(1.0, 1.0, 1.0, 1.0));
        let err = sweep(&spec).unwrap_err();
        assert!(matches!(err, Error::Invalid { field: "beta", .. }));
    }

    #[test]
    fn order_parameter_sub_radiant_is_thermal_floor() {
        let theta = order_parameter(&fixed(0.0, 1.0, 1.1, 100.0)).unwrap();
        assert_eq!(theta, 0.005);
    }

    #[test]
    fn single_point_sweep() {
        let spec = SweepSpec::new(Parameter::Lambda, 0.0, 0.0, 1, fixed(0.0, 0.8, 1.1, 100.0));
        let result = sweep(&spec).unwrap();
        assert_eq!(result.records.len(), 1);
        assert!(classify_transition(&result).unwrap().is_empty());
    }

    #[test]
    fn never_super_radiant_without_coupling() {
        let spec = SweepSpec::new(Parameter::Beta, 0.5, 50.0, 12, fixed(0.0, 1.0, 1.1, 1.0));
        let result = sweep(&spec).unwrap();
        assert!(result.records.iter().all(|r| r.x_star == 0.0));
        assert!(classify_transition(&result).unwrap().is_empty());
    }

    #[test]
    fn disagreement_windows_group_consecutive_steps() {
        let spec = SweepSpec::new(Parameter::Lambda, 0.0, 0.4, 5, fixed(0.0, 1.0, 1.0, 1.0));
        let rec = |value: f64, x: f64| SweepRecord {
            value,
            x_star: x,
            omega_star: 0.0,
            theta: 0.0,
            tie: false,
            n_maxima: None,
        };
        let forward = SweepResult {
            spec,
            records: vec![
                rec(0.0, 0.0),
                rec(0.1, 0.0),
                rec(0.2, 0.0),
                rec(0.3, 0.5),
                rec(0.4, 0.6),
            ],
        };
        let backward = SweepResult {
            spec: spec.reversed(),
            records: vec![
                rec(0.4, 0.6),
                rec(0.3, 0.5),
                rec(0.2, 0.45),
                rec(0.1, 0.4),
                rec(0.0, 0.0),
            ],
        };
        let h = HysteresisBranches { forward, backward };
        assert_eq!(h.disagreement_windows(1e-6), vec![(0.1, 0.2)]);
    }

    #[test]
    fn phase_map_requires_distinct_axes() {
        let a = Axis::new(Parameter::Epsilon, 0.1, 1.0, 2);
        let err = phase_map(&a, &a, &fixed(1.0, 1.0, 1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Invalid { field: "sweep", .. }));
    }

    #[test]
    fn degenerate_phase_map_single_cell() {
        let a = Axis::new(Parameter::SpinCoupling, 0.5, 0.5, 1);
        let b = Axis::new(Parameter::Epsilon, 1.0, 1.0, 1);
        let map = phase_map(&a, &b, &fixed(1.3, 0.0, 0.0, 100.0)).unwrap();
        assert_eq!(map.cells.len(), 1);
        assert_eq!(map.cell(0, 0).phase, Phase::SuperRadiant);
        assert_eq!(map.cell(0, 0).boundary, None);
    }
}
