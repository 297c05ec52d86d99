use std::fmt::Write;

use serde::Serialize;

use super::{EventStream, HarrisError, SpinConfig};
use crate::signed_graph::{Path, SignedGraph, VertexId};
use crate::walkers::SignedWalkPath;
use crate::Sign;

/// Two groups of tags that came together at dual time `time`. Each group is
/// named by one of its tags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coalescence {
    pub time: f64,
    pub moving: usize,
    pub resident: usize,
}

/// Tagged dual walkers read off one event stream backward from time `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualEnsemble {
    pub t: f64,
    pub sites: Vec<VertexId>,
    /// One trajectory per tag, in dual time `u` in `[0, t]`.
    pub paths: Vec<SignedWalkPath>,
    /// Merges in order of increasing dual time.
    pub coalescences: Vec<Coalescence>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl DualEnsemble {
    pub fn tag_count(&self) -> usize {
        self.paths.len()
    }

    /// First dual time at which tags `j` and `k` share a site.
    pub fn meeting_time(&self, j: usize, k: usize) -> Option<f64> {
        if j == k {
            return Some(0.0);
        }
        let mut uf = UnionFind::new(self.tag_count());
        for c in &self.coalescences {
            uf.union(c.moving, c.resident);
            if uf.find(j) == uf.find(k) {
                return Some(c.time);
            }
        }
        None
    }

    /// Groups of tags that have coalesced by dual time `t`, each sorted, in
    /// order of their smallest tag.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.tag_count());
        for c in &self.coalescences {
            uf.union(c.moving, c.resident);
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); self.tag_count()];
        for tag in 0..self.tag_count() {
            let r = uf.find(tag);
            by_root[r].push(tag);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// Dual time of the last merge, if any.
    pub fn last_meeting(&self) -> Option<f64> {
        self.coalescences.last().map(|c| c.time)
    }

    /// Trajectories as CSV `tag,u,vertex,sign`, one row at `u = 0` and one per
    /// jump.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tag,u,vertex,sign\n");
        for (tag, p) in self.paths.iter().enumerate() {
            let _ = writeln!(out, "{tag},0,{},1", p.start.0);
            for i in 0..p.jump_count() {
                let _ = writeln!(out, "{tag},{},{},{}", p.jump_times[i], p.positions[i].0, p.cumulative_sign[i].to_i8());
            }
        }
        out
    }
}

/// `eta_t(x_k) = eta_0(X^{t,k}(t)) * i^{t,k}(t)` for every tag.
pub fn reconstruct_spins(eta0: &SpinConfig, ensemble: &DualEnsemble) -> Vec<Sign> {
    ensemble.paths.iter().map(|p| eta0.get(p.end_position()) * p.end_sign()).collect()
}

fn check_sites(graph: &SignedGraph, sites: &[VertexId]) -> Result<(), HarrisError> {
    if sites.is_empty() {
        return Err(HarrisError::EmptySites);
    }
    match sites.iter().find(|x| x.index() >= graph.vertex_count()) {
        Some(x) => Err(HarrisError::UnknownVertex(x.index())),
        None => Ok(()),
    }
}

/// The dual signed walk `X^{x,t}`: starting at `x`, it reads the events of
/// `(0, t]` from latest to earliest, and at an event of `N^{y,z}` while at `y`
/// it moves to `z`, picking up `s(y, z)`. A forward event at time `tau` sits at
/// dual time `t - tau`.
pub fn dual_walk(graph: &SignedGraph, events: &EventStream, x: VertexId, t: f64) -> Result<SignedWalkPath, HarrisError> {
    let mut ensemble = dual_ensemble(graph, events, &[x], t)?;
    Ok(ensemble.paths.pop().expect("one tag"))
}

/// Runs the dual walkers of all `sites` jointly. Tags at the same site move
/// together; when a walker steps onto an occupied site the two groups merge
/// and never separate again.
pub fn dual_ensemble(
    graph: &SignedGraph,
    events: &EventStream,
    sites: &[VertexId],
    t: f64,
) -> Result<DualEnsemble, HarrisError> {
    events.check(graph, t)?;
    check_sites(graph, sites)?;
    const EMPTY: usize = usize::MAX;
    // occupant[v]: group id living at v; a group id is the index of its first tag.
    let mut occupant = vec![EMPTY; graph.vertex_count()];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sites.len()];
    let mut paths: Vec<_> = sites.iter().map(|&x| SignedWalkPath::new(x, t)).collect();
    let mut coalescences = Vec::new();
    for (tag, &x) in sites.iter().enumerate() {
        match occupant[x.index()] {
            EMPTY => {
                occupant[x.index()] = tag;
                members[tag].push(tag);
            }
            g => {
                members[g].push(tag);
                coalescences.push(Coalescence { time: 0.0, moving: tag, resident: g });
            }
        }
    }
    for e in events.until(t).iter().rev() {
        let (from, to, s) = graph.pair(e.pair as usize);
        let group = occupant[from.index()];
        if group == EMPTY {
            continue;
        }
        let u = t - e.time;
        for &tag in &members[group] {
            paths[tag].push_jump(u, to, s);
        }
        occupant[from.index()] = EMPTY;
        match occupant[to.index()] {
            EMPTY => occupant[to.index()] = group,
            resident => {
                let moving = std::mem::take(&mut members[group]);
                members[resident].extend(moving);
                coalescences.push(Coalescence { time: u, moving: group, resident });
            }
        }
    }
    Ok(DualEnsemble { t, sites: sites.to_vec(), paths, coalescences })
}

/// If the duals from `x` and `y` meet by dual time `t`, returns the meeting
/// time `s0` and the path that follows `X^{x,t}` up to `s0` and then `X^{y,t}`
/// back to `y`.
pub fn meeting_path(
    graph: &SignedGraph,
    events: &EventStream,
    x: VertexId,
    y: VertexId,
    t: f64,
) -> Result<Option<(f64, Path)>, HarrisError> {
    let ensemble = dual_ensemble(graph, events, &[x, y], t)?;
    Ok(ensemble.meeting_time(0, 1).map(|s0| {
        let forward = ensemble.paths[0].vertices_until(s0);
        let back = ensemble.paths[1].vertices_until(s0).reversed();
        (s0, forward.concat(&back))
    }))
}

/// Sign of the meeting path, which equals `eta_t(x) * eta_t(y)` for every
/// initial configuration; `None` if the duals have not met by `t`.
pub fn meeting_sign(
    graph: &SignedGraph,
    events: &EventStream,
    x: VertexId,
    y: VertexId,
    t: f64,
) -> Result<Option<Sign>, HarrisError> {
    let ensemble = dual_ensemble(graph, events, &[x, y], t)?;
    Ok(ensemble
        .meeting_time(0, 1)
        .map(|s0| ensemble.paths[0].sign_at(s0) * ensemble.paths[1].sign_at(s0)))
}
