use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{estimate_parity, DiagnosticsError, ParityEstimate, ParityOptions, ParityTable, ShellSystem};
use crate::signed_graph::{SignedGraph, VertexId};
use crate::walkers::SignedWalkPath;
use crate::Sign;

/// Odd-path probability at or below which two shell points get the same sign
/// in [`assign_site_signs`].
pub const SAME_SIGN_ODD_LIMIT: f64 = 0.01;

/// `sgn(x, v, r)` in `{-1, 0, +1}` with the estimate it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignClass {
    pub value: i8,
    /// Too few walks from `x` ended at `v`; `value` is then 0.
    pub starved: bool,
    pub estimate: Option<ParityEstimate>,
}

impl SignClass {
    fn from_estimate(estimate: Option<&ParityEstimate>, threshold: f64) -> Self {
        match estimate {
            Some(e) if !e.starved => {
                let value = if e.p_even > threshold {
                    1
                } else if e.p_odd > threshold {
                    -1
                } else {
                    0
                };
                SignClass { value, starved: false, estimate: Some(e.clone()) }
            }
            other => SignClass { value: 0, starved: true, estimate: other.cloned() },
        }
    }
}

/// Parity tables computed at most once per `(start, shell)` within a call.
struct Tables<'a> {
    graph: &'a SignedGraph,
    shells: &'a ShellSystem,
    opts: &'a ParityOptions,
    cache: HashMap<(VertexId, usize), ParityTable>,
}

impl<'a> Tables<'a> {
    fn new(graph: &'a SignedGraph, shells: &'a ShellSystem, opts: &'a ParityOptions) -> Self {
        Tables { graph, shells, opts, cache: HashMap::new() }
    }

    fn table(&mut self, x: VertexId, shell: usize) -> Result<&ParityTable, DiagnosticsError> {
        if !self.cache.contains_key(&(x, shell)) {
            let t = estimate_parity(self.graph, x, self.shells.mask(shell)?, self.opts)?;
            self.cache.insert((x, shell), t);
        }
        Ok(&self.cache[&(x, shell)])
    }

    /// `sgn(x, v, r)` for `x` in `C_r` and `v` in `C_{r+1}`.
    fn sign(&mut self, r: usize, x: VertexId, v: VertexId) -> Result<SignClass, DiagnosticsError> {
        self.shells.require(r, x)?;
        self.shells.require(r + 1, v)?;
        let threshold = self.opts.threshold;
        Ok(SignClass::from_estimate(self.table(x, r + 1)?.get(v), threshold))
    }

    /// `+1` if the walk from `from` to shell `shell`, conditioned to enter at
    /// `y`, is odd with probability at most 1/100; `None` when starved.
    fn relation(&mut self, from: VertexId, shell: usize, y: VertexId) -> Result<Option<Sign>, DiagnosticsError> {
        Ok(self
            .table(from, shell)?
            .get(y)
            .filter(|e| !e.starved)
            .map(|e| Sign::from_bool(e.p_odd <= SAME_SIGN_ODD_LIMIT)))
    }
}

/// Classifies `v` in `C_{r+1}` relative to `x` in `C_r`: `+1` if the
/// conditioned path is even with probability above the threshold (3/4 by
/// default), `-1` if odd above it, `0` otherwise or when starved.
pub fn classify_sign(
    graph: &SignedGraph,
    shells: &ShellSystem,
    r: usize,
    x: VertexId,
    v: VertexId,
    opts: &ParityOptions,
) -> Result<SignClass, DiagnosticsError> {
    Tables::new(graph, shells, opts).sign(r, x, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompatibilityKind {
    /// `x, y` in `C_r`, `v, w` in `C_{r+1}`.
    One,
    /// `x` in `C_{r-1}`, `y, z` in `C_r`, `w` in `C_{r+1}`.
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compatibility {
    Compatible,
    Incompatible,
    Undecided,
}

/// Verdict and the four sign factors whose product decides it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibilityCheck {
    pub verdict: Compatibility,
    pub factors: [SignClass; 4],
}

/// Checks 1- or 2-compatibility of `quad` at level `r`.
///
/// Kind one multiplies `sgn(x,v,r) sgn(x,w,r) sgn(y,v,r) sgn(y,w,r)` for
/// `quad = [x, y, v, w]`; kind two multiplies
/// `sgn(x,y,r-1) sgn(x,z,r-1) sgn(y,w,r) sgn(z,w,r)` for `quad = [x, y, z, w]`.
pub fn check_compatibility(
    graph: &SignedGraph,
    shells: &ShellSystem,
    kind: CompatibilityKind,
    r: usize,
    quad: [VertexId; 4],
    opts: &ParityOptions,
) -> Result<CompatibilityCheck, DiagnosticsError> {
    let mut tables = Tables::new(graph, shells, opts);
    let factors = match kind {
        CompatibilityKind::One => {
            let [x, y, v, w] = quad;
            [tables.sign(r, x, v)?, tables.sign(r, x, w)?, tables.sign(r, y, v)?, tables.sign(r, y, w)?]
        }
        CompatibilityKind::Two => {
            let [x, y, z, w] = quad;
            if r < 2 {
                return Err(DiagnosticsError::ShellOutOfRange { index: r - 1, count: shells.count() });
            }
            [tables.sign(r - 1, x, y)?, tables.sign(r - 1, x, z)?, tables.sign(r, y, w)?, tables.sign(r, z, w)?]
        }
    };
    let product: i8 = factors.iter().map(|f| f.value).product();
    let verdict = match product {
        0 => Compatibility::Undecided,
        1 => Compatibility::Compatible,
        _ => Compatibility::Incompatible,
    };
    Ok(CompatibilityCheck { verdict, factors })
}

/// Signs designated to shell vertices from a reference path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteSigns {
    /// `X(T_{C_r})` for `r = 1, ..., count`.
    pub reference_points: Vec<VertexId>,
    /// Per vertex; `None` off the shells or where the estimate was starved.
    pub signs: Vec<Option<Sign>>,
    pub unassigned: Vec<VertexId>,
}

impl SiteSigns {
    pub fn sign(&self, v: VertexId) -> Option<Sign> {
        self.signs[v.index()]
    }
}

/// Designates a sign for every shell vertex.
///
/// `X(T_{C_1})` is positive, and every `y` in `C_1` gets the sign of
/// `X(T_{C_1})` times its relation to it as seen from the path start.
/// For `r >= 2`, `y` in `C_r` has the sign of `X(T_{C_{r-1}})` if the walk from
/// `X(T_{C_{r-1}})` to `C_r` conditioned to enter at `y` is odd with
/// probability at most 1/100, and the opposite sign otherwise. Vertices whose
/// relation could not be estimated stay unassigned.
pub fn assign_site_signs(
    graph: &SignedGraph,
    shells: &ShellSystem,
    reference: &SignedWalkPath,
    opts: &ParityOptions,
) -> Result<SiteSigns, DiagnosticsError> {
    let mut reference_points = Vec::with_capacity(shells.count());
    let mut visits = std::iter::once(reference.start).chain(reference.positions.iter().copied());
    for r in 1..=shells.count() {
        let hit = visits.by_ref().find(|&v| shells.contains(r, v));
        reference_points.push(hit.ok_or(DiagnosticsError::ReferenceMissesShell(r))?);
    }

    let mut tables = Tables::new(graph, shells, opts);
    let mut signs: Vec<Option<Sign>> = vec![None; graph.vertex_count()];
    let mut anchor_sign = Some(Sign::Plus);
    let mut previous = reference.start;
    for r in 1..=shells.count() {
        let point = reference_points[r - 1];
        let anchor = if r == 1 {
            // the start's relation to X(T_{C_1}) fixes which class is positive
            if previous == point {
                Some(Sign::Plus)
            } else {
                tables.relation(previous, 1, point)?
            }
        } else {
            anchor_sign
        };
        for &y in shells.shell(r)? {
            let rel = if previous == y { Some(Sign::Plus) } else { tables.relation(previous, r, y)? };
            signs[y.index()] = match (anchor, rel) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            };
        }
        if r == 1 {
            signs[point.index()] = Some(Sign::Plus);
        }
        anchor_sign = signs[point.index()];
        previous = point;
    }
    let unassigned = (1..=shells.count())
        .flat_map(|r| shells.shell(r).unwrap().iter().copied())
        .filter(|v| signs[v.index()].is_none())
        .collect();
    Ok(SiteSigns { reference_points, signs, unassigned })
}
