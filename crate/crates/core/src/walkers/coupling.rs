use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use super::{check_vertex, step, SignedWalkPath, WalkError};
use crate::rng::{stream_rng, Domain};
use crate::signed_graph::{SignedGraph, VertexId};

/// Two walks from the same site sharing one jump chain, with holding times
/// coupled so that eventually `path(t) == shifted_path(t + shift)`.
#[derive(Clone, Debug, Serialize)]
pub struct CouplingResult {
    /// `X` on `[0, horizon]`.
    pub path: SignedWalkPath,
    /// `X'` on `[0, horizon + shift]`.
    pub shifted_path: SignedWalkPath,
    pub shift: f64,
    /// `t0` on the clock of `path`; `None` if the clocks were not matched by
    /// the horizon.
    pub coupling_time: Option<f64>,
    /// Jump index from which the two clocks agree up to the shift.
    pub coupled_jump: Option<usize>,
    pub visited_prefix_equal: bool,
}

impl CouplingResult {
    /// Property (a) checked on the recorded jumps: every jump of `path` at or
    /// after the coupling index reappears in `shifted_path` exactly `shift`
    /// later, at the same site and with the same running sign, and the
    /// shifted path has no other jumps in between.
    pub fn shift_property_holds(&self) -> bool {
        let Some(n) = self.coupled_jump else {
            return true;
        };
        let x = &self.path;
        let y = &self.shifted_path;
        for k in n..x.jump_count() {
            let shifted = x.jump_times[k] + self.shift;
            if k >= y.jump_count()
                || y.jump_times[k] != shifted
                || y.positions[k] != x.positions[k]
                || y.cumulative_sign[k] != x.cumulative_sign[k]
            {
                return false;
            }
        }
        y.jump_count() == x.jump_count()
    }
}

/// Maximal coupling of `Exp(1)` with `Exp(1) + d` (`d >= 0`): returns
/// `(base, shifted, success)` where both marginals are `Exp(1)` and
/// `shifted = base + d` with probability `exp(-d)`. On failure the residual
/// laws (`Exp(1)` for `base`, `Exp(1)` truncated to `[0, d)` for `shifted`) are
/// drawn antithetically, which makes the next gap spread wider and return to
/// zero sooner than an independent draw.
fn couple_exponentials<R: Rng + ?Sized>(d: f64, rng: &mut R) -> (f64, f64, bool) {
    debug_assert!(d >= 0.0);
    let accept: f64 = rng.random();
    if accept < (-d).exp() {
        let base: f64 = Exp1.sample(rng);
        (base, base + d, true)
    } else {
        let u: f64 = rng.random();
        let base = -(-u).ln_1p();
        let other = -((1.0 - u) * (-d).exp_m1()).ln_1p();
        (base, other.min(d), false)
    }
}

/// Time-shift coupling of two walks started at `x`.
///
/// Both walks follow the same jump chain. The holding times `e_i` (for `X`)
/// and `e'_i` (for `X'`) are drawn pairwise; while the clocks are not yet
/// aligned, each pair is a maximal coupling that closes the current gap
/// `sum e' - sum e - shift` exactly with probability `exp(-|gap|)`. After
/// success the holding times are shared. Each walk on its own is an exact
/// continuous-time walk.
pub fn timeshift_couple(
    graph: &SignedGraph,
    x: VertexId,
    shift: f64,
    horizon: f64,
    seed: u64,
) -> Result<CouplingResult, WalkError> {
    if shift < 0.0 {
        return Err(WalkError::NegativeShift(shift));
    }
    if !(horizon > 0.0) {
        return Err(WalkError::NonPositiveHorizon(horizon));
    }
    check_vertex(graph, x)?;
    let mut rng = stream_rng(seed, Domain::Coupling, 0);
    let mut path = SignedWalkPath::new(x, horizon);
    let mut shifted = SignedWalkPath::new(x, horizon + shift);

    let mut clock = 0.0f64;
    let mut shifted_clock = 0.0f64;
    let mut coupled_jump = if shift == 0.0 { Some(0) } else { None };
    let mut at = x;
    let mut jump = 0usize;
    loop {
        if coupled_jump.is_some() {
            let e: f64 = Exp1.sample(&mut rng);
            clock += e;
            shifted_clock = clock + shift;
        } else {
            let gap = shifted_clock - clock - shift;
            // want e' - e = -gap
            let (e, e_shifted, ok) = if gap <= 0.0 {
                let (e, e_shifted, ok) = couple_exponentials(-gap, &mut rng);
                (e, e_shifted, ok)
            } else {
                let (e_shifted, e, ok) = couple_exponentials(gap, &mut rng);
                (e, e_shifted, ok)
            };
            clock += e;
            if ok {
                shifted_clock = clock + shift;
                coupled_jump = Some(jump + 1);
            } else {
                shifted_clock += e_shifted;
            }
        }
        jump += 1;
        if clock > horizon && shifted_clock > horizon + shift {
            break;
        }
        let (to, s) = step(graph, at, &mut rng);
        at = to;
        if clock <= horizon {
            path.push_jump(clock, to, s);
        }
        if shifted_clock <= horizon + shift {
            shifted.push_jump(shifted_clock, to, s);
        }
    }

    let coupling_time = coupled_jump.and_then(|n| {
        let t0 = if n == 0 { 0.0 } else { path.jump_times.get(n - 1).copied()? };
        Some(t0)
    });
    let coupled_jump = coupling_time.and(coupled_jump);
    let visited_prefix_equal = match (coupled_jump, coupling_time) {
        (Some(_), Some(t0)) => path.vertices_until(t0) == shifted.vertices_until(t0 + shift),
        _ => false,
    };
    Ok(CouplingResult {
        path,
        shifted_path: shifted,
        shift,
        coupling_time,
        coupled_jump,
        visited_prefix_equal,
    })
}
