use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use super::SignedWalkPath;
use crate::Sign;

/// Disjoint time intervals `[s_i, t_i]` over which a walk closes an odd loop:
/// `X(s_i) = X(t_i)` and the segment sign is `-1`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LoopRecord {
    pub intervals: Vec<(f64, f64)>,
}

impl LoopRecord {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_i,t_i\n");
        for (s, t) in &self.intervals {
            writeln!(out, "{s},{t}").unwrap();
        }
        out
    }
}

/// Greedy left-to-right extraction of odd loops.
///
/// Since the end of the previous loop, the scan remembers for every vertex the
/// latest arrival time at each running parity. Arriving at a vertex already
/// seen with the opposite parity closes an odd loop; it is emitted and the
/// scan restarts with the next jump, so loops never share an endpoint. The
/// count is a lower bound over all disjoint decompositions.
pub fn count_unsatisfied_loops(path: &SignedWalkPath) -> LoopRecord {
    let mut record = LoopRecord::default();
    // vertex -> [latest arrival with sign +, latest arrival with sign -]
    let mut seen: HashMap<u32, [Option<f64>; 2]> = HashMap::new();
    let slot = |s: Sign| usize::from(s.is_minus());
    seen.insert(path.start.0, {
        let mut e = [None, None];
        e[slot(Sign::Plus)] = Some(0.0);
        e
    });
    for ((&t, &v), &s) in path.jump_times.iter().zip(&path.positions).zip(&path.cumulative_sign) {
        let entry = seen.entry(v.0).or_insert([None, None]);
        if let Some(start) = entry[slot(-s)] {
            record.intervals.push((start, t));
            seen.clear();
            continue;
        }
        entry[slot(s)] = Some(t);
    }
    record
}
