//! The stable multi-matching scheme.
//!
//! Every vertex starts with `degree` free stubs. In each round, all mutually
//! closest compatible pairs are joined simultaneously: `x` and `y` are
//! compatible when both still have a free stub and the edge `{x, y}` does not
//! exist yet, and a pair is mutually closest when each is the other's nearest
//! compatible vertex. Rounds repeat until no compatible pair remains; the
//! globally closest compatible pair is always mutually closest, so every
//! round makes progress.
//!
//! Nearest-compatible ties are broken by smaller position, then smaller id;
//! within a round edges are applied in ascending (distance, left position)
//! order with compatibility re-validated. Ties can only arise on crafted
//! input, but both the engine and the reference implementations in
//! [`reference`](self) resolve them identically so results stay comparable.
//!
//! [`MatchState`] maintains, for every vertex, its current nearest compatible
//! candidate. Compatibility only ever decays: stubs are never returned and
//! edges are never removed. Hence a vertex's nearest-compatible distance is
//! nondecreasing over time, and the outward scan over the position-sorted
//! order can keep per-side pointers that never move backwards. A proposal is
//! recomputed only when its holder matches or its target runs out of stubs,
//! which makes the whole run roughly linear in the number of edges produced.

mod reference;

pub use reference::{greedy_reference, naive_round_oracle};

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};
use std::io::Write;

use crate::point_process::{Boundary, PointConfiguration};
use crate::text::format_real;
use crate::{Error, Result, Scalar};

const NONE: u32 = u32::MAX;

/// An edge of the matching. `a < b` are indices into the configuration's
/// position order; ids are available via the configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<S: Scalar> {
    pub a: u32,
    pub b: u32,
    /// 1-based round in which the edge was created; 0 means "no round
    /// semantics" (edges produced by the greedy reference).
    pub round: u32,
    pub distance: S,
}

/// Outcome of running the scheme on a configuration.
#[derive(Debug, Clone)]
pub struct Matching<S: Scalar> {
    config: PointConfiguration<S>,
    edges: Vec<Edge<S>>,
    leftover: Vec<u32>,
    rounds_run: u32,
    truncated: bool,
}

impl<S: Scalar> Matching<S> {
    pub fn config(&self) -> &PointConfiguration<S> {
        &self.config
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    /// Remaining stubs per vertex, in position order.
    pub fn leftover(&self) -> &[u32] {
        &self.leftover
    }

    pub fn leftover_total(&self) -> u64 {
        self.leftover.iter().map(|&k| k as u64).sum()
    }

    pub fn rounds_run(&self) -> u32 {
        self.rounds_run
    }

    /// True when the run stopped at `max_rounds` with compatible pairs left.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Edge set keyed by ids, for comparisons across implementations.
    pub fn edge_id_set(&self) -> std::collections::BTreeSet<(u64, u64)> {
        let ids = self.config.ids();
        self.edges
            .iter()
            .map(|e| {
                let (x, y) = (ids[e.a as usize], ids[e.b as usize]);
                (x.min(y), x.max(y))
            })
            .collect()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let key = pair_key(a.min(b) as u32, a.max(b) as u32);
        self.edges
            .iter()
            .any(|e| pair_key(e.a, e.b) == key)
    }

    /// Exhaustively verifies stability: unless the run was truncated, no
    /// compatible pair may remain.
    pub fn verify_stable(&self) -> Result<()> {
        if self.truncated {
            return Ok(());
        }
        let adjacency: HashSet<u64, PairHash> = self
            .edges
            .iter()
            .map(|e| pair_key(e.a, e.b))
            .collect();
        let n = self.config.len();
        for a in 0..n {
            if self.leftover[a] == 0 {
                continue;
            }
            for b in (a + 1)..n {
                if self.leftover[b] > 0 && !adjacency.contains(&pair_key(a as u32, b as u32)) {
                    return Err(Error::invariant(format!(
                        "compatible pair left unmatched: indices {a}, {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Writes `id_a,id_b,round,distance` CSV, edges in creation order.
    pub fn write_edges_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "id_a,id_b,round,distance")?;
        let ids = self.config.ids();
        for e in &self.edges {
            writeln!(
                out,
                "{},{},{},{}",
                ids[e.a as usize],
                ids[e.b as usize],
                e.round,
                format_real(e.distance)
            )?;
        }
        Ok(())
    }

    /// Writes `id,leftover_stubs` CSV in position order.
    pub fn write_leftover_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "id,leftover_stubs")?;
        for (k, &left) in self.leftover.iter().enumerate() {
            writeln!(out, "{},{}", self.config.ids()[k], left)?;
        }
        Ok(())
    }
}

/// Default round cap: observed round counts on Poisson inputs stay well
/// below the maximum degree plus a small constant; exceeding the cap flags
/// the result as truncated rather than failing.
pub fn default_max_rounds<S: Scalar>(config: &PointConfiguration<S>) -> u32 {
    4 + config.max_degree().unwrap_or(0)
}

/// Runs the scheme to termination (or to `max_rounds`, flagging truncation).
pub fn run_to_completion<S: Scalar>(
    config: PointConfiguration<S>,
    max_rounds: Option<u32>,
) -> Result<Matching<S>> {
    let cap = max_rounds.unwrap_or_else(|| default_max_rounds(&config));
    let mut state = MatchState::new(config)?;
    let mut truncated = false;
    while state.has_compatible_pairs() {
        if state.rounds_run() >= cap {
            truncated = true;
            break;
        }
        state.run_round();
    }
    Ok(state.into_matching(truncated))
}

/// In-progress state of the scheme. See the module docs for the invariants
/// the incremental bookkeeping maintains.
pub struct MatchState<S: Scalar> {
    config: PointConfiguration<S>,
    free: Vec<u32>,
    adjacency: HashSet<u64, PairHash>,
    edges: Vec<Edge<S>>,
    round: u32,
    /// Current proposal (nearest compatible vertex) per vertex; NONE if none.
    prop: Vec<u32>,
    /// Monotone scan cursors. Open boundary: next candidate index per side
    /// (left/right). Torus: number of steps already ruled out per side.
    cursor_left: Vec<i64>,
    cursor_right: Vec<i64>,
    /// Inverse of `prop`: who currently proposes to me, with slot positions
    /// so removal is O(1).
    proposers: Vec<Vec<u32>>,
    prop_slot: Vec<u32>,
    /// Mutual pairs awaiting the next round.
    mutual: Vec<(u32, u32)>,
}

impl<S: Scalar> MatchState<S> {
    pub fn new(config: PointConfiguration<S>) -> Result<Self> {
        let degrees = config
            .degrees()
            .ok_or_else(|| Error::invalid("matching requires degrees"))?
            .to_vec();
        let n = config.len();
        let torus = config.window().boundary() == Boundary::Torus;
        let mut state = MatchState {
            config,
            free: degrees,
            adjacency: HashSet::with_hasher(PairHash::default()),
            edges: Vec::new(),
            round: 0,
            prop: vec![NONE; n],
            cursor_left: if torus { vec![1; n] } else { (0..n).map(|k| k as i64 - 1).collect() },
            cursor_right: if torus { vec![1; n] } else { (0..n).map(|k| k as i64 + 1).collect() },
            proposers: vec![Vec::new(); n],
            prop_slot: vec![0; n],
            mutual: Vec::new(),
        };
        for x in 0..n as u32 {
            state.recompute(x);
        }
        Ok(state)
    }

    pub fn config(&self) -> &PointConfiguration<S> {
        &self.config
    }

    pub fn rounds_run(&self) -> u32 {
        self.round
    }

    pub fn free_stubs(&self, x: usize) -> u32 {
        self.free[x]
    }

    /// True iff `x` and `y` may still be joined: both have a free stub and
    /// the edge does not exist yet.
    pub fn compatible(&self, x: usize, y: usize) -> Result<bool> {
        if x == y {
            return Err(Error::invalid("compatibility is defined for distinct vertices"));
        }
        if x >= self.free.len() || y >= self.free.len() {
            return Err(Error::invalid("vertex index out of range"));
        }
        Ok(self.free[x] > 0
            && self.free[y] > 0
            && !self.adjacency.contains(&pair_key(x.min(y) as u32, x.max(y) as u32)))
    }

    /// Nearest compatible vertex of `x` (ties: smaller position, then id).
    pub fn nearest_compatible(&self, x: usize) -> Option<usize> {
        match self.prop[x] {
            NONE => None,
            y => Some(y as usize),
        }
    }

    /// All pairs that are each other's nearest compatible vertex, in the
    /// order the next round would apply them. Every vertex occurs in at most
    /// one pair.
    pub fn mutually_closest_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = self.mutual.clone();
        self.sort_batch(&mut pairs);
        pairs.into_iter().map(|(a, b)| (a as usize, b as usize)).collect()
    }

    /// True while some compatible pair remains (equivalently: the next round
    /// would create at least one edge).
    pub fn has_compatible_pairs(&self) -> bool {
        !self.mutual.is_empty()
    }

    /// Executes one round: joins every mutually closest compatible pair.
    /// Returns the edges created in this round.
    pub fn run_round(&mut self) -> Vec<Edge<S>> {
        let mut batch = std::mem::take(&mut self.mutual);
        if batch.is_empty() {
            return Vec::new();
        }
        self.round += 1;
        self.sort_batch(&mut batch);
        let mut created = Vec::with_capacity(batch.len());
        for (a, b) in batch {
            // Pairs in a batch are vertex-disjoint, so this re-validation is
            // defensive only.
            if self.free[a as usize] == 0
                || self.free[b as usize] == 0
                || self.adjacency.contains(&pair_key(a, b))
            {
                continue;
            }
            self.free[a as usize] -= 1;
            self.free[b as usize] -= 1;
            self.adjacency.insert(pair_key(a, b));
            let edge = Edge {
                a,
                b,
                round: self.round,
                distance: self.config.distance(a as usize, b as usize),
            };
            self.edges.push(edge);
            created.push(edge);
            self.refresh(a);
            self.refresh(b);
        }
        created
    }

    pub fn into_matching(self, truncated: bool) -> Matching<S> {
        Matching {
            config: self.config,
            edges: self.edges,
            leftover: self.free,
            rounds_run: self.round,
            truncated,
        }
    }

    fn sort_batch(&self, batch: &mut [(u32, u32)]) {
        batch.sort_by(|&(a1, b1), &(a2, b2)| {
            let d1 = self.config.distance(a1 as usize, b1 as usize);
            let d2 = self.config.distance(a2 as usize, b2 as usize);
            d1.partial_cmp(&d2)
                .expect("finite distances")
                .then_with(|| {
                    let p1 = self.config.positions()[a1 as usize];
                    let p2 = self.config.positions()[a2 as usize];
                    p1.partial_cmp(&p2).expect("finite positions")
                })
        });
    }

    /// Re-establishes the proposal invariants for `x` after its stub count
    /// changed or its target became invalid.
    fn refresh(&mut self, x: u32) {
        if self.free[x as usize] == 0 {
            self.set_prop(x, NONE);
            let watchers = std::mem::take(&mut self.proposers[x as usize]);
            for &z in &watchers {
                // bypass list surgery: the list they sat in is gone
                self.prop[z as usize] = NONE;
            }
            for &z in &watchers {
                // a watcher that died in the same edge application is
                // handled by its own refresh
                if self.free[z as usize] > 0 {
                    self.recompute(z);
                }
            }
        } else {
            self.recompute(x);
        }
    }

    /// Recomputes the nearest compatible candidate of a live vertex by
    /// advancing its scan cursors past permanently invalid candidates.
    fn recompute(&mut self, x: u32) {
        debug_assert!(self.free[x as usize] > 0);
        let left = self.advance_left(x);
        let right = self.advance_right(x);
        let best = match (left, right) {
            (None, None) => NONE,
            (Some((c, _)), None) | (None, Some((c, _))) => c,
            (Some((cl, dl)), Some((cr, dr))) => {
                if dl < dr {
                    cl
                } else if dr < dl {
                    cr
                } else {
                    // equal distances: smaller position, then smaller id
                    let (pl, pr) = (
                        self.config.positions()[cl as usize],
                        self.config.positions()[cr as usize],
                    );
                    if pl < pr || (pl == pr && self.config.ids()[cl as usize] < self.config.ids()[cr as usize])
                    {
                        cl
                    } else {
                        cr
                    }
                }
            }
        };
        self.set_prop(x, best);
    }

    fn candidate_valid(&self, x: u32, c: u32) -> bool {
        self.free[c as usize] > 0 && !self.adjacency.contains(&pair_key(x.min(c), x.max(c)))
    }

    /// Nearest valid candidate on the left (smaller positions), advancing the
    /// monotone cursor. Returns the candidate and its distance.
    fn advance_left(&mut self, x: u32) -> Option<(u32, S)> {
        match self.config.window().boundary() {
            Boundary::Open => {
                let mut j = self.cursor_left[x as usize];
                while j >= 0 && !self.candidate_valid(x, j as u32) {
                    j -= 1;
                }
                self.cursor_left[x as usize] = j;
                (j >= 0).then(|| (j as u32, self.config.distance(x as usize, j as usize)))
            }
            Boundary::Torus => self.advance_torus(x, true),
        }
    }

    fn advance_right(&mut self, x: u32) -> Option<(u32, S)> {
        match self.config.window().boundary() {
            Boundary::Open => {
                let n = self.config.len() as i64;
                let mut j = self.cursor_right[x as usize];
                while j < n && !self.candidate_valid(x, j as u32) {
                    j += 1;
                }
                self.cursor_right[x as usize] = j;
                (j < n).then(|| (j as u32, self.config.distance(x as usize, j as usize)))
            }
            Boundary::Torus => self.advance_torus(x, false),
        }
    }

    /// Torus scan: walk outward by sorted order, wrapping around. A side is
    /// abandoned once its one-directional arc exceeds L/2, because any such
    /// point is closer via the other side.
    fn advance_torus(&mut self, x: u32, leftward: bool) -> Option<(u32, S)> {
        let n = self.config.len() as i64;
        let len = self.config.window().length();
        let half = self.config.window().half();
        let mut step = if leftward {
            self.cursor_left[x as usize]
        } else {
            self.cursor_right[x as usize]
        };
        let found = loop {
            if step >= n {
                step = n;
                break None;
            }
            let idx = if leftward {
                ((x as i64 - step).rem_euclid(n)) as u32
            } else {
                ((x as i64 + step).rem_euclid(n)) as u32
            };
            let positions = self.config.positions();
            let raw = if leftward {
                positions[x as usize] - positions[idx as usize]
            } else {
                positions[idx as usize] - positions[x as usize]
            };
            let arc = if raw < S::zero() { raw + len } else { raw };
            if arc > half {
                step = n;
                break None;
            }
            if self.candidate_valid(x, idx) {
                break Some((idx, arc));
            }
            step += 1;
        };
        if leftward {
            self.cursor_left[x as usize] = step;
        } else {
            self.cursor_right[x as usize] = step;
        }
        found
    }

    /// Points `x`'s proposal at `target`, maintaining the inverse lists and
    /// recording a new mutual pair when reciprocity appears.
    fn set_prop(&mut self, x: u32, target: u32) {
        let old = self.prop[x as usize];
        if old == target {
            return;
        }
        if old != NONE {
            let slot = self.prop_slot[x as usize] as usize;
            let list = &mut self.proposers[old as usize];
            list.swap_remove(slot);
            if slot < list.len() {
                let moved = list[slot];
                self.prop_slot[moved as usize] = slot as u32;
            }
        }
        self.prop[x as usize] = target;
        if target != NONE {
            self.prop_slot[x as usize] = self.proposers[target as usize].len() as u32;
            self.proposers[target as usize].push(x);
            if self.prop[target as usize] == x {
                self.mutual.push((x.min(target), x.max(target)));
            }
        }
    }
}

#[derive(Default, Clone)]
struct PairHasher(u64);

impl Hasher for PairHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, _: &[u8]) {
        unreachable!("pair keys hash as u64");
    }

    fn write_u64(&mut self, key: u64) {
        // splitmix64 finalizer
        let mut z = key.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        self.0 = z ^ (z >> 31);
    }
}

type PairHash = BuildHasherDefault<PairHasher>;

fn pair_key(a: u32, b: u32) -> u64 {
    debug_assert!(a < b);
    ((a as u64) << 32) | b as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_process::Window;

    fn config(positions: &[f64], degrees: &[u32]) -> PointConfiguration<f64> {
        PointConfiguration::from_positions(Window::open(20.0).unwrap(), positions.to_vec())
            .unwrap()
            .with_degrees(degrees.to_vec())
            .unwrap()
    }

    fn id_edges(m: &Matching<f64>) -> Vec<(u64, u64, u32)> {
        let ids = m.config().ids();
        m.edges()
            .iter()
            .map(|e| (ids[e.a as usize], ids[e.b as usize], e.round))
            .collect()
    }

    #[test]
    fn three_points_degree_one() {
        let m = run_to_completion(config(&[0.0, 1.0, 3.0], &[1, 1, 1]), None).unwrap();
        assert_eq!(id_edges(&m), vec![(0, 1, 1)]);
        assert_eq!(m.leftover(), &[0, 0, 1]);
        assert_eq!(m.rounds_run(), 1);
        assert!(!m.truncated());
        m.verify_stable().unwrap();
    }

    #[test]
    fn three_points_degree_two_form_triangle() {
        let m = run_to_completion(config(&[0.0, 1.0, 3.0], &[2, 2, 2]), None).unwrap();
        assert_eq!(id_edges(&m), vec![(0, 1, 1), (1, 2, 2), (0, 2, 3)]);
        assert_eq!(m.leftover(), &[0, 0, 0]);
        assert_eq!(m.rounds_run(), 3);
        m.verify_stable().unwrap();
    }

    #[test]
    fn nearest_compatible_skips_exhausted() {
        let mut state = MatchState::new(config(&[0.0, 1.0, 3.0], &[1, 1, 1])).unwrap();
        assert_eq!(state.nearest_compatible(2), Some(1));
        assert_eq!(state.mutually_closest_pairs(), vec![(0, 1)]);
        state.run_round();
        // both remaining neighbors of the point at 3 are exhausted
        assert_eq!(state.nearest_compatible(2), None);
        assert!(!state.has_compatible_pairs());
    }

    #[test]
    fn compatibility_rules() {
        let mut state = MatchState::new(config(&[0.0, 1.0, 3.0], &[1, 1, 1])).unwrap();
        assert!(state.compatible(0, 1).unwrap());
        assert!(state.compatible(0, 0).is_err());
        assert!(state.compatible(0, 9).is_err());
        state.run_round();
        assert!(!state.compatible(0, 1).unwrap()); // adjacent and exhausted
        assert!(!state.compatible(1, 2).unwrap()); // 1 exhausted
    }

    #[test]
    fn truncation_flags_partial_result() {
        let m = run_to_completion(config(&[0.0, 1.0, 3.0], &[2, 2, 2]), Some(1)).unwrap();
        assert!(m.truncated());
        assert_eq!(m.edges().len(), 1);
        assert_eq!(m.rounds_run(), 1);
        m.verify_stable().unwrap(); // vacuous under truncation
    }

    #[test]
    fn equidistant_tie_prefers_smaller_position() {
        let m = run_to_completion(config(&[0.0, 1.0, 2.0], &[1, 1, 1]), None).unwrap();
        assert_eq!(id_edges(&m), vec![(0, 1, 1)]);
        assert_eq!(m.leftover(), &[0, 0, 1]);
    }

    #[test]
    fn torus_matches_across_the_seam() {
        let w = Window::new(10.0, Boundary::Torus, 0.0).unwrap();
        let c = PointConfiguration::from_positions(w, vec![-4.0, 0.0, 4.0])
            .unwrap()
            .with_degrees(vec![1, 1, 1])
            .unwrap();
        let m = run_to_completion(c, None).unwrap();
        assert_eq!(id_edges(&m), vec![(0, 2, 1)]);
        assert_eq!(m.leftover(), &[0, 1, 0]);
        assert_eq!(m.edges()[0].distance, 2.0);
    }

    #[test]
    fn empty_and_singleton_configurations() {
        let m = run_to_completion(config(&[], &[]), None).unwrap();
        assert_eq!(m.rounds_run(), 0);
        assert!(m.edges().is_empty());
        let m = run_to_completion(config(&[1.0], &[3]), None).unwrap();
        assert!(m.edges().is_empty());
        assert_eq!(m.leftover(), &[3]);
    }

    #[test]
    fn degrees_are_required() {
        let c = PointConfiguration::from_positions(Window::open(10.0).unwrap(), vec![0.0, 1.0])
            .unwrap();
        assert!(MatchState::new(c).is_err());
    }

    #[test]
    fn csv_dumps() {
        let m = run_to_completion(config(&[0.0, 1.0, 3.0], &[1, 1, 1]), None).unwrap();
        let mut edges = Vec::new();
        m.write_edges_csv(&mut edges).unwrap();
        let edges = String::from_utf8(edges).unwrap();
        assert_eq!(
            edges,
            "id_a,id_b,round,distance\n0,1,1,1.0000000000000000e0\n"
        );
        let mut leftover = Vec::new();
        m.write_leftover_csv(&mut leftover).unwrap();
        let leftover = String::from_utf8(leftover).unwrap();
        assert_eq!(leftover, "id,leftover_stubs\n0,0\n1,0\n2,1\n");
    }
}
