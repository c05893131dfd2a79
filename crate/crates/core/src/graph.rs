//! Graph structure of a finished matching: connected components, the strong
//! connection criterion, and degree-dominance checks.

use std::collections::BTreeSet;
use std::io::Write;

use crate::degree::{dominates, DegreeDistribution};
use crate::matching::Matching;
use crate::point_process::{Boundary, PointConfiguration};
use crate::rng::rng_from_seed;
use crate::{Error, Result, Scalar};
use rand::Rng;

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Summary statistics of the component structure of a matching.
///
/// Interior statistics exclude vertices within `margin` of the window ends:
/// `largest_fraction` is the share of interior vertices lying in the overall
/// largest component (zero when there are no interior vertices). `spans` is
/// true when some single component has a vertex within `margin` of the left
/// window end and another within `margin` of the right end; with a zero
/// margin this requires vertices exactly at the ends. `max_extent` is the
/// largest position spread covered by a single component: max minus min
/// position with an open boundary, circle length minus the widest circular
/// gap on the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub n_points: usize,
    pub n_edges: usize,
    pub leftover_total: u64,
    pub n_components: usize,
    pub largest_size: usize,
    pub largest_fraction: f64,
    pub spans: bool,
    pub max_extent: f64,
}

impl ComponentReport {
    pub const CSV_HEADER: &'static str =
        "seed,n,n_edges,leftover_total,n_components,largest_size,largest_fraction,spans";

    /// Writes one CSV row matching [`Self::CSV_HEADER`].
    pub fn write_csv_row<W: Write>(&self, out: &mut W, seed: u64) -> Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            seed,
            self.n_points,
            self.n_edges,
            self.leftover_total,
            self.n_components,
            self.largest_size,
            crate::text::format_real_result(self.largest_fraction),
            self.spans as u8,
        )?;
        Ok(())
    }
}

/// Computes the component structure of a finished matching.
///
/// An empty configuration reports zero components; isolated vertices count
/// as components of size one.
pub fn components<S: Scalar>(matching: &Matching<S>) -> ComponentReport {
    let config = matching.config();
    let window = config.window();
    let n = config.len();
    let mut uf = UnionFind::new(n);
    for e in matching.edges() {
        uf.union(e.a, e.b);
    }
    let roots: Vec<u32> = (0..n as u32).map(|x| uf.find(x)).collect();
    let distinct: BTreeSet<u32> = roots.iter().copied().collect();
    let n_components = distinct.len();

    let largest_root = distinct.iter().copied().max_by_key(|&r| uf.size[r as usize]);
    let largest_size = largest_root.map_or(0, |r| uf.size[r as usize] as usize);

    let mut interior_total = 0usize;
    let mut interior_in_largest = 0usize;
    for (&p, &root) in config.positions().iter().zip(&roots) {
        if window.in_interior(p) {
            interior_total += 1;
            if Some(root) == largest_root {
                interior_in_largest += 1;
            }
        }
    }
    let largest_fraction = if interior_total == 0 {
        0.0
    } else {
        interior_in_largest as f64 / interior_total as f64
    };

    // spanning: one component reaches into the margin strip at both ends
    let left_end = -window.half().to_real();
    let right_end = window.half().to_real();
    let margin = window.margin().to_real();
    let mut touches_left: BTreeSet<u32> = BTreeSet::new();
    let mut spans = false;
    for (&p, &root) in config.positions().iter().zip(&roots) {
        if p.to_real() <= left_end + margin {
            touches_left.insert(root);
        }
    }
    for (&p, &root) in config.positions().iter().zip(&roots) {
        if p.to_real() >= right_end - margin && touches_left.contains(&root) {
            spans = true;
            break;
        }
    }

    let max_extent = max_component_extent(config, &roots);

    ComponentReport {
        n_points: n,
        n_edges: matching.edges().len(),
        leftover_total: matching.leftover_total(),
        n_components,
        largest_size,
        largest_fraction,
        spans,
        max_extent,
    }
}

/// Largest length covered by one component (see [`ComponentReport`]).
fn max_component_extent<S: Scalar>(config: &PointConfiguration<S>, roots: &[u32]) -> f64 {
    let positions = config.positions();
    if positions.is_empty() {
        return 0.0;
    }
    match config.window().boundary() {
        Boundary::Open => {
            // positions are sorted, so per-root min/max from one pass
            let n = config.len();
            let mut first = vec![usize::MAX; n];
            let mut last = vec![0usize; n];
            for (k, &r) in roots.iter().enumerate() {
                let r = r as usize;
                if first[r] == usize::MAX {
                    first[r] = k;
                }
                last[r] = k;
            }
            let mut best = 0.0f64;
            for r in 0..n {
                if first[r] != usize::MAX {
                    best = best.max((positions[last[r]] - positions[first[r]]).to_real());
                }
            }
            best
        }
        Boundary::Torus => {
            // extent of a component = L minus its widest circular gap
            let length = config.window().length().to_real();
            let mut by_root: std::collections::HashMap<u32, Vec<f64>> =
                std::collections::HashMap::new();
            for (k, &r) in roots.iter().enumerate() {
                by_root.entry(r).or_default().push(positions[k].to_real());
            }
            let mut best = 0.0f64;
            for pts in by_root.values() {
                if pts.len() == 1 {
                    continue;
                }
                let mut widest = 0.0f64;
                for w in pts.windows(2) {
                    widest = widest.max(w[1] - w[0]);
                }
                widest = widest.max(pts[0] + length - pts[pts.len() - 1]);
                best = best.max(length - widest);
            }
            best
        }
    }
}

/// The strong connection criterion for the pair `(i, j)`: with `d` their
/// distance, the closed ball of radius `d` around each endpoint (including
/// the center itself) must hold no more points than that endpoint's degree.
/// Any strongly connected pair is necessarily an edge of the finished
/// matching: while the pair is unmatched it stays compatible, each endpoint
/// only ever matches within its ball, and the ball holds too few other
/// points to exhaust its stubs.
pub fn is_strongly_connected_pair<S: Scalar>(
    config: &PointConfiguration<S>,
    i: usize,
    j: usize,
) -> Result<bool> {
    if i == j {
        return Err(Error::invalid("strong connection is defined for distinct vertices"));
    }
    let n = config.len();
    if i >= n || j >= n {
        return Err(Error::invalid("vertex index out of range"));
    }
    let degrees = config
        .degrees()
        .ok_or_else(|| Error::invalid("strong connection requires degrees"))?;
    let d = config.distance(i, j);
    let positions = config.positions();
    Ok(config.count_in_ball(positions[i], d) <= degrees[i] as usize
        && config.count_in_ball(positions[j], d) <= degrees[j] as usize)
}

/// Enumerates the strongly connected pairs with both endpoints in the window
/// interior and distance at most `max_radius` (no distance cap when `None`),
/// as index pairs `(i, j)` with `i < j`.
///
/// For each vertex the outward scan stops once the ball around it exceeds
/// its own degree — the ball count is monotone in the radius — so the cost
/// is about the sum of the degrees, not quadratic.
pub fn strong_pairs<S: Scalar>(
    config: &PointConfiguration<S>,
    max_radius: Option<S>,
) -> Result<Vec<(usize, usize)>> {
    let degrees = config
        .degrees()
        .ok_or_else(|| Error::invalid("strong connection requires degrees"))?;
    let n = config.len();
    let positions = config.positions();
    let window = config.window();
    let mut found = BTreeSet::new();
    for i in 0..n {
        if !window.in_interior(positions[i]) {
            continue;
        }
        for j in config.indices_by_distance(i) {
            let d = config.distance(i, j);
            if max_radius.is_some_and(|r| d > r) {
                break;
            }
            if config.count_in_ball(positions[i], d) > degrees[i] as usize {
                break;
            }
            if window.in_interior(positions[j])
                && config.count_in_ball(positions[j], d) <= degrees[j] as usize
            {
                found.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Checks that raising degrees pointwise preserves every strongly connected
/// pair: with `degrees_high[k] >= degrees_low[k]` for all `k` (anything else
/// is an error), returns whether each pair that is strong under the low
/// degrees stays strong under the high ones. The criterion is monotone in
/// the degrees, so `Ok(true)` is the only correct outcome; the boolean exists
/// to surface defects rather than assume the monotonicity.
pub fn dominance_preservation_check<S: Scalar>(
    config: &PointConfiguration<S>,
    degrees_low: &[u32],
    degrees_high: &[u32],
) -> Result<bool> {
    if degrees_low.len() != config.len() || degrees_high.len() != config.len() {
        return Err(Error::invalid("degree vectors must match the configuration length"));
    }
    if degrees_high.iter().zip(degrees_low).any(|(&h, &l)| h < l) {
        return Err(Error::invalid(
            "dominance preservation requires pointwise degrees_high >= degrees_low",
        ));
    }
    let low = config.with_degrees(degrees_low.to_vec())?;
    let high = config.with_degrees(degrees_high.to_vec())?;
    let high_pairs: BTreeSet<(usize, usize)> = strong_pairs(&high, None)?.into_iter().collect();
    Ok(strong_pairs(&low, None)?.iter().all(|p| high_pairs.contains(p)))
}

/// Draws a pointwise-dominating pair of degree vectors by feeding one shared
/// uniform per point through the quantile transforms of two laws, the first
/// of which must stochastically dominate the second (see
/// [`dominates`]). Returns `(high, low)`; dominance of the laws makes the
/// coupled vectors dominate pointwise.
pub fn couple_dominating_degrees(
    high: &DegreeDistribution,
    low: &DegreeDistribution,
    n: usize,
    seed: u64,
) -> Result<(Vec<u32>, Vec<u32>)> {
    if !dominates(high, low) {
        return Err(Error::invalid(
            "degree coupling requires the first law to dominate the second",
        ));
    }
    let mut rng = rng_from_seed(seed);
    let uniforms: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    Ok((
        uniforms.iter().map(|&u| high.quantile(u)).collect(),
        uniforms.iter().map(|&u| low.quantile(u)).collect(),
    ))
}
