//! Feature extraction on sampled measure trajectories: freezing intervals,
//! sudden-change (kink) points, and birth/death/revival events, plus the
//! analytic crossing time of the frozen-discord branch boundary.
//!
//! The thresholds are detector definitions, not model quantities: freezing
//! uses a flatness tolerance relative to the trace maximum, births use an
//! absolute zero threshold.

use serde::Serialize;

use crate::dephasing::ReservoirSpec;
use crate::error::{Error, Result};

/// Default absolute threshold separating "zero" from "born".
pub const DEFAULT_EPS_ZERO: f64 = 1e-4;
/// Default flatness tolerance as a fraction of the trace maximum.
pub const DEFAULT_EPS_FLAT_FRACTION: f64 = 1e-6;
/// Default half-width (in samples) of the kink detector's local window.
pub const DEFAULT_KINK_WINDOW: usize = 5;
/// Minimum number of samples for a reported freezing interval.
const MIN_FREEZE_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Lqu,
    TraceDiscord,
    Concurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    FreezeStart,
    FreezeEnd,
    SuddenChange,
    Birth,
    Death,
    Revival,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub time: f64,
    pub measure: Measure,
    pub value: f64,
}

/// Sampled trajectory of the three measures on a strictly increasing time
/// grid, with detected features.
#[derive(Debug, Clone, Serialize)]
pub struct TimeTrace {
    pub times: Vec<f64>,
    pub lqu: Vec<f64>,
    pub d_t: Vec<f64>,
    pub conc: Vec<f64>,
    pub features: Vec<Event>,
}

impl TimeTrace {
    pub fn new(times: Vec<f64>, lqu: Vec<f64>, d_t: Vec<f64>, conc: Vec<f64>) -> Result<Self> {
        if lqu.len() != times.len() || d_t.len() != times.len() || conc.len() != times.len() {
            return Err(Error::Precondition(
                "trace arrays must have equal length".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition(
                "trace times must be strictly increasing".into(),
            ));
        }
        Ok(TimeTrace {
            times,
            lqu,
            d_t,
            conc,
            features: Vec::new(),
        })
    }

    pub fn series(&self, m: Measure) -> &[f64] {
        match m {
            Measure::Lqu => &self.lqu,
            Measure::TraceDiscord => &self.d_t,
            Measure::Concurrence => &self.conc,
        }
    }

    /// Run all detectors on all three measures and store the time-sorted
    /// event list. Birth/death/revival only applies to traces that start
    /// below `eps_zero`.
    pub fn detect_features(&mut self, eps_zero: f64, eps_flat_fraction: f64, window: usize) {
        let mut events = Vec::new();
        for m in [Measure::Lqu, Measure::TraceDiscord, Measure::Concurrence] {
            let values = self.series(m).to_vec();
            let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if self.times.len() >= 10 && scale > 0.0 {
                events.extend(detect_freezing(
                    &self.times,
                    &values,
                    m,
                    eps_flat_fraction * scale,
                ));
            }
            if self.times.len() >= 2 * window + 1 {
                events.extend(detect_sudden_change(&self.times, &values, m, window));
            }
            if values.first().is_some_and(|v| *v < eps_zero) {
                events.extend(
                    detect_birth_death_revival(&self.times, &values, m, eps_zero)
                        .expect("precondition checked"),
                );
            }
        }
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        self.features = events;
    }
}

/// Maximal intervals (at least `MIN_FREEZE_SAMPLES` long) on which every
/// sample sits within `eps_flat` of the interval mean and above `eps_flat`
/// itself, reported as freeze_start/freeze_end pairs.
pub fn detect_freezing(times: &[f64], values: &[f64], measure: Measure, eps_flat: f64) -> Vec<Event> {
    let n = values.len();
    let mut events = Vec::new();
    let mut start = 0usize;
    while start < n {
        if values[start] <= eps_flat {
            start += 1;
            continue;
        }
        // Grow the window while the flatness condition holds for all members.
        let mut sum = values[start];
        let mut lo = values[start];
        let mut hi = values[start];
        let mut end = start;
        while end + 1 < n {
            let candidate = values[end + 1];
            if candidate <= eps_flat {
                break;
            }
            let new_sum = sum + candidate;
            let new_lo = lo.min(candidate);
            let new_hi = hi.max(candidate);
            let mean = new_sum / (end + 2 - start) as f64;
            if (new_hi - mean) >= eps_flat || (mean - new_lo) >= eps_flat {
                break;
            }
            sum = new_sum;
            lo = new_lo;
            hi = new_hi;
            end += 1;
        }
        if end + 1 - start >= MIN_FREEZE_SAMPLES {
            let mean = sum / (end + 1 - start) as f64;
            events.push(Event {
                kind: EventKind::FreezeStart,
                time: times[start],
                measure,
                value: mean,
            });
            events.push(Event {
                kind: EventKind::FreezeEnd,
                time: times[end],
                measure,
                value: mean,
            });
        }
        start = end + 1;
    }
    events
}

/// Kink detector: discrete slope changes exceeding ten local median absolute
/// deviations (above the local median), one event per locally maximal score.
pub fn detect_sudden_change(
    times: &[f64],
    values: &[f64],
    measure: Measure,
    window: usize,
) -> Vec<Event> {
    let n = values.len();
    if n < 2 * window + 1 || n < 3 {
        return Vec::new();
    }
    let slopes: Vec<f64> = (0..n - 1)
        .map(|i| (values[i + 1] - values[i]) / (times[i + 1] - times[i]))
        .collect();
    // Kink score at sample i: |s_i - s_{i-1}| for i in 1..n-1.
    let score: Vec<f64> = (1..n - 1).map(|i| (slopes[i] - slopes[i - 1]).abs()).collect();
    let global_max = score.iter().fold(0.0f64, |a, b| a.max(*b));
    if global_max == 0.0 {
        return Vec::new();
    }
    let floor = 1e-12 * global_max;

    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };

    let mut events = Vec::new();
    for i in 0..score.len() {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(score.len() - 1);
        let neighbors: Vec<f64> = (lo..=hi).filter(|j| *j != i).map(|j| score[j]).collect();
        if neighbors.is_empty() {
            continue;
        }
        let med = median(neighbors.clone());
        let mad = median(neighbors.iter().map(|v| (v - med).abs()).collect());
        let threshold = med + 10.0 * mad.max(floor);
        if score[i] <= threshold {
            continue;
        }
        // Leftmost of ties wins within the window.
        let is_local_max = (lo..i).all(|j| score[j] < score[i])
            && (i + 1..=hi).all(|j| score[j] <= score[i]);
        if is_local_max {
            events.push(Event {
                kind: EventKind::SuddenChange,
                time: times[i + 1],
                measure,
                value: values[i + 1],
            });
        }
    }
    events
}

/// Birth = first up-crossing of `eps_zero`, death = subsequent down-crossing,
/// revival = any later up-crossing. The trace must start below `eps_zero`.
pub fn detect_birth_death_revival(
    times: &[f64],
    values: &[f64],
    measure: Measure,
    eps_zero: f64,
) -> Result<Vec<Event>> {
    let first = values
        .first()
        .ok_or_else(|| Error::Precondition("empty trace".into()))?;
    if *first >= eps_zero {
        return Err(Error::Precondition(format!(
            "birth detection expects an initially vanishing trace (value {first} >= {eps_zero})"
        )));
    }
    let mut events = Vec::new();
    let mut above = false;
    let mut born = false;
    for (i, v) in values.iter().enumerate() {
        if !above && *v >= eps_zero {
            above = true;
            events.push(Event {
                kind: if born { EventKind::Revival } else { EventKind::Birth },
                time: times[i],
                measure,
                value: *v,
            });
            born = true;
        } else if above && *v < eps_zero {
            above = false;
            events.push(Event {
                kind: EventKind::Death,
                time: times[i],
                measure,
                value: *v,
            });
        }
    }
    Ok(events)
}

/// Time at which γ(t) = ln(|c1|/|c3|), the boundary where the frozen discord
/// branch hands over to the decaying one. None when there is no crossing: a
/// saturating γ (super-Ohmic at T = 0) may stay below the target forever.
pub fn crossing_time(c1: f64, c3: f64, reservoir: &ReservoirSpec) -> Option<f64> {
    if c3 == 0.0 || c1.abs() <= c3.abs() {
        return None;
    }
    let target = (c1.abs() / c3.abs()).ln();

    let mut hi = 1.0;
    let mut lo = 0.0;
    const MAX_DOUBLINGS: u32 = 50;
    let mut found = false;
    for _ in 0..MAX_DOUBLINGS {
        if reservoir.gamma_closed(hi).value >= target {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !found {
        return None;
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = reservoir.gamma_closed(mid).value;
        if (g - target).abs() < 1e-13 || (hi - lo) < 1e-13 * hi.max(1.0) {
            return Some(mid);
        }
        if g < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
