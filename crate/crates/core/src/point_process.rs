//! Windows and point configurations on the line.
//!
//! A window is an interval `[-L/2, L/2]` with either open ends or periodic
//! (torus) identification. A configuration is a strictly increasing list of
//! positions with stable integer ids, optional degrees, and an optional palm
//! point (a distinguished point added after sampling).

use std::io::{BufRead, Write};

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand_distr::Poisson;

use crate::text::{format_real, parse_int, parse_real};
use crate::{rng_from_seed, Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Torus,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Open => write!(f, "open"),
            Boundary::Torus => write!(f, "torus"),
        }
    }
}

/// Observation window `[-length/2, length/2]`.
///
/// `margin` is the statistics exclusion zone near each end, used only by
/// interior/spanning statistics in open mode; a torus has no boundary, so
/// there it must be zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<S: Scalar> {
    length: S,
    boundary: Boundary,
    margin: S,
}

impl<S: Scalar> Window<S> {
    pub fn new(length: S, boundary: Boundary, margin: S) -> Result<Self> {
        if !(length > S::zero()) || !length.is_finite() {
            return Err(Error::invalid("window length must be positive"));
        }
        if !(margin >= S::zero()) || !(margin + margin < length) {
            return Err(Error::invalid("window margin must satisfy 0 <= margin < length/2"));
        }
        if boundary == Boundary::Torus && margin > S::zero() {
            return Err(Error::invalid("torus windows take margin 0"));
        }
        Ok(Window { length, boundary, margin })
    }

    /// Open window without an exclusion margin.
    pub fn open(length: S) -> Result<Self> {
        Window::new(length, Boundary::Open, S::zero())
    }

    pub fn length(&self) -> S {
        self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn margin(&self) -> S {
        self.margin
    }

    pub fn half(&self) -> S {
        self.length / S::from_real(2.0)
    }

    pub fn contains(&self, x: S) -> bool {
        x.abs() <= self.half()
    }

    /// True when `x` is at least `margin` away from both window ends (on the
    /// torus the margin is zero, so this equals `contains`).
    pub fn in_interior(&self, x: S) -> bool {
        x.abs() <= self.half() - self.margin
    }

    /// Distance between two coordinates under this window's boundary.
    pub fn distance(&self, a: S, b: S) -> S {
        let d = (a - b).abs();
        match self.boundary {
            Boundary::Open => d,
            Boundary::Torus => d.min(self.length - d),
        }
    }
}

/// Distance between coordinates `a` and `b` in `window`.
pub fn pair_distance<S: Scalar>(window: &Window<S>, a: S, b: S) -> S {
    window.distance(a, b)
}

/// A finite point configuration, sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration<S: Scalar> {
    window: Window<S>,
    positions: Vec<S>,
    ids: Vec<u64>,
    degrees: Option<Vec<u32>>,
    palm_index: Option<usize>,
}

impl<S: Scalar> PointConfiguration<S> {
    /// Builds a configuration from raw positions; ids are assigned `0..n` in
    /// position order. Positions may arrive unsorted but must be distinct
    /// and inside the window.
    pub fn from_positions(window: Window<S>, mut positions: Vec<S>) -> Result<Self> {
        positions.sort_by(|a, b| a.partial_cmp(b).expect("positions must be comparable"));
        let ids = (0..positions.len() as u64).collect();
        Self::from_sorted_parts(window, positions, ids, None, None)
    }

    fn from_sorted_parts(
        window: Window<S>,
        positions: Vec<S>,
        ids: Vec<u64>,
        degrees: Option<Vec<u32>>,
        palm_index: Option<usize>,
    ) -> Result<Self> {
        let n = positions.len();
        if ids.len() != n {
            return Err(Error::invalid("ids must be parallel to positions"));
        }
        for (k, &x) in positions.iter().enumerate() {
            if !x.is_finite() || !window.contains(x) {
                return Err(Error::invalid(format!(
                    "position {} out of window [{}, {}]",
                    x,
                    -window.half(),
                    window.half()
                )));
            }
            if k + 1 < n && !(positions[k + 1] > x) {
                return Err(Error::invalid(format!(
                    "positions must be strictly increasing; duplicate or misordered at {x}"
                )));
            }
        }
        {
            let mut sorted_ids: Vec<u64> = ids.clone();
            sorted_ids.sort_unstable();
            if sorted_ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid("ids must be unique"));
            }
        }
        if window.boundary == Boundary::Torus && n >= 2 {
            // -L/2 and L/2 are the same torus point.
            if positions[0] == -window.half() && positions[n - 1] == window.half() {
                return Err(Error::invalid(
                    "positions -L/2 and L/2 coincide on the torus",
                ));
            }
        }
        if let Some(d) = &degrees {
            if d.len() != n {
                return Err(Error::invalid("degrees must be parallel to positions"));
            }
            if d.iter().any(|&k| k == 0) {
                return Err(Error::invalid("degrees must be at least 1"));
            }
        }
        if let Some(p) = palm_index {
            if p >= n {
                return Err(Error::invalid("palm index out of range"));
            }
        }
        Ok(PointConfiguration { window, positions, ids, degrees, palm_index })
    }

    /// Returns a copy with the given per-point degrees (position order).
    pub fn with_degrees(&self, degrees: Vec<u32>) -> Result<Self> {
        Self::from_sorted_parts(
            self.window,
            self.positions.clone(),
            self.ids.clone(),
            Some(degrees),
            self.palm_index,
        )
    }

    pub fn window(&self) -> &Window<S> {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[S] {
        &self.positions
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn degrees(&self) -> Option<&[u32]> {
        self.degrees.as_deref()
    }

    pub fn palm_index(&self) -> Option<usize> {
        self.palm_index
    }

    pub fn degree_of(&self, index: usize) -> Option<u32> {
        self.degrees.as_ref().map(|d| d[index])
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.as_ref().map(|d| d.iter().copied().max().unwrap_or(0))
    }

    /// Distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> S {
        self.window.distance(self.positions[i], self.positions[j])
    }

    /// Number of points at distance `<= radius` from the coordinate `center`
    /// (center-inclusive: a point lying exactly at `center` counts).
    pub fn count_in_ball(&self, center: S, radius: S) -> usize {
        assert!(radius >= S::zero(), "radius must be nonnegative");
        match self.window.boundary {
            Boundary::Open => self.range_count(center - radius, center + radius),
            Boundary::Torus => {
                if radius + radius >= self.window.length {
                    return self.len();
                }
                self.torus_count_closed(center - radius, center + radius)
            }
        }
    }

    /// Number of points at distance `< radius` from `center`
    /// (center-inclusive, like [`Self::count_in_ball`]).
    pub fn count_in_open_ball(&self, center: S, radius: S) -> usize {
        assert!(radius >= S::zero(), "radius must be nonnegative");
        match self.window.boundary {
            Boundary::Open => self.range_count_exclusive(center - radius, center + radius),
            Boundary::Torus => {
                let len = self.window.length;
                if radius + radius > len {
                    self.len()
                } else if radius + radius == len {
                    // only the antipode of `center` is outside the open ball
                    let antipode = center + self.window.half();
                    self.len() - self.torus_count_closed(antipode, antipode)
                } else {
                    self.torus_count_open(center - radius, center + radius)
                }
            }
        }
    }

    /// Number of points with distance in the open interval `(r_in, r_out)`
    /// from `center`. The center point itself never counts.
    pub fn count_in_annulus(&self, center: S, r_in: S, r_out: S) -> usize {
        assert!(
            S::zero() <= r_in && r_in < r_out,
            "annulus radii must satisfy 0 <= r_in < r_out"
        );
        self.count_in_open_ball(center, r_out)
            .saturating_sub(self.count_in_ball(center, r_in))
    }

    /// Count in closed `[lo, hi]`, raw coordinates.
    fn range_count(&self, lo: S, hi: S) -> usize {
        let a = self.positions.partition_point(|&p| p < lo);
        let b = self.positions.partition_point(|&p| p <= hi);
        b.saturating_sub(a)
    }

    /// Count in open `(lo, hi)`, raw coordinates.
    fn range_count_exclusive(&self, lo: S, hi: S) -> usize {
        let a = self.positions.partition_point(|&p| p <= lo);
        let b = self.positions.partition_point(|&p| p < hi);
        b.saturating_sub(a)
    }

    /// Count in the circular closed interval `[lo, hi]`, `hi - lo < L`.
    ///
    /// Stored coordinates lie in `[-L/2, L/2]`; checking the interval and its
    /// two shifted copies covers wrap-around without double counting.
    fn torus_count_closed(&self, lo: S, hi: S) -> usize {
        let len = self.window.length;
        self.range_count(lo, hi)
            + self.range_count(lo - len, hi - len)
            + self.range_count(lo + len, hi + len)
    }

    /// Count in the circular open interval `(lo, hi)`, `hi - lo < L`.
    fn torus_count_open(&self, lo: S, hi: S) -> usize {
        let len = self.window.length;
        self.range_count_exclusive(lo, hi)
            + self.range_count_exclusive(lo - len, hi - len)
            + self.range_count_exclusive(lo + len, hi + len)
    }

    /// All other indices in nondecreasing distance from the point at index
    /// `i`; among equidistant candidates the one with the smaller position
    /// comes first.
    pub fn indices_by_distance(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.len();
        let torus = self.window.boundary == Boundary::Torus;
        let mut left_step = 1usize;
        let mut right_step = 1usize;
        std::iter::from_fn(move || {
            let left = if torus {
                (left_step < n).then(|| (i + n - left_step) % n)
            } else {
                i.checked_sub(left_step)
            };
            let right = if torus {
                (right_step < n).then(|| (i + right_step) % n)
            } else {
                let j = i + right_step;
                (j < n).then_some(j)
            };
            let pick_left = match (left, right) {
                (None, None) => return None,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some(l), Some(r)) => {
                    let (dl, dr) = (self.distance(i, l), self.distance(i, r));
                    dl < dr || (dl == dr && self.positions[l] < self.positions[r])
                }
            };
            if pick_left {
                left_step += 1;
                left
            } else {
                right_step += 1;
                right
            }
        })
        .take(n.saturating_sub(1))
    }

    /// Adds a distinguished point at `position` and marks it as the palm
    /// point. Ids of existing points are preserved; the new point gets a
    /// fresh id. Only one palm point is allowed, and degrees must not have
    /// been assigned yet (assign them afterwards, with an override for the
    /// palm point if desired).
    pub fn palm_insert(&self, position: S) -> Result<Self> {
        if self.palm_index.is_some() {
            return Err(Error::invalid("configuration already has a palm point"));
        }
        if self.degrees.is_some() {
            return Err(Error::invalid("palm_insert expects degrees to be unassigned"));
        }
        if !self.window.contains(position) {
            return Err(Error::invalid("palm position out of window"));
        }
        let at = self.positions.partition_point(|&p| p < position);
        if self.positions.get(at) == Some(&position) {
            return Err(Error::invalid("palm position coincides with an existing point"));
        }
        let mut positions = self.positions.clone();
        let mut ids = self.ids.clone();
        let fresh = self.ids.iter().copied().max().map_or(0, |m| m + 1);
        positions.insert(at, position);
        ids.insert(at, fresh);
        Self::from_sorted_parts(self.window, positions, ids, None, Some(at))
    }

    /// Splits into (points whose degree satisfies `keep`, complement).
    /// Both halves stay sorted and keep their ids; the palm point, if any,
    /// is tracked into whichever half receives it.
    pub fn split_by_degree(&self, keep: impl Fn(u32) -> bool) -> Result<(Self, Self)> {
        let degrees = self
            .degrees
            .as_ref()
            .ok_or_else(|| Error::invalid("split_by_degree requires degrees"))?;
        let mut yes = (Vec::new(), Vec::new(), Vec::new(), None);
        let mut no = (Vec::new(), Vec::new(), Vec::new(), None);
        for k in 0..self.len() {
            let side = if keep(degrees[k]) { &mut yes } else { &mut no };
            if self.palm_index == Some(k) {
                side.3 = Some(side.0.len());
            }
            side.0.push(self.positions[k]);
            side.1.push(self.ids[k]);
            side.2.push(degrees[k]);
        }
        let build = |(p, i, d, palm): (Vec<S>, Vec<u64>, Vec<u32>, Option<usize>)| {
            Self::from_sorted_parts(self.window, p, i, Some(d), palm)
        };
        Ok((build(yes)?, build(no)?))
    }

    /// Writes `id,position,degree` CSV. Degrees may be unassigned, in which
    /// case the field is left empty.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "id,position,degree")?;
        for k in 0..self.len() {
            let degree = match &self.degrees {
                Some(d) => d[k].to_string(),
                None => String::new(),
            };
            writeln!(out, "{},{},{}", self.ids[k], format_real(self.positions[k]), degree)?;
        }
        Ok(())
    }

    /// Reads a configuration written by [`write_csv`](Self::write_csv).
    /// The window is not part of the format and must be supplied; palm
    /// marking is not preserved.
    pub fn read_csv<R: BufRead>(window: Window<S>, input: R) -> Result<Self> {
        let mut rows: Vec<(u64, S, Option<u32>)> = Vec::new();
        let mut lines = input.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim() == "id,position,degree" => {}
            Some((_, Ok(h))) => {
                return Err(Error::parse(1, format!("expected header id,position,degree, got {h:?}")))
            }
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(Error::parse(1, "empty input")),
        }
        for (k, line) in lines {
            let line = line?;
            let lineno = k + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let (id, pos, deg) = (fields.next(), fields.next(), fields.next());
            if deg.is_none() || fields.next().is_some() {
                return Err(Error::parse(lineno, "expected exactly 3 fields"));
            }
            let id = parse_int::<u64>(lineno, "id", id.unwrap())?;
            let pos = parse_real::<S>(lineno, "position", pos.unwrap())?;
            let deg = deg.unwrap().trim();
            let deg = if deg.is_empty() {
                None
            } else {
                let d: u32 = parse_int(lineno, "degree", deg)?;
                if d == 0 {
                    return Err(Error::parse(lineno, "degree must be at least 1"));
                }
                Some(d)
            };
            rows.push((id, pos, deg));
        }
        rows.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite positions"));
        let with_degree = rows.iter().filter(|r| r.2.is_some()).count();
        if with_degree != 0 && with_degree != rows.len() {
            return Err(Error::invalid("degrees must be assigned to all points or none"));
        }
        let degrees = if with_degree == 0 {
            None
        } else {
            Some(rows.iter().map(|r| r.2.unwrap()).collect())
        };
        Self::from_sorted_parts(
            window,
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.0).collect(),
            degrees,
            None,
        )
    }
}

/// Samples a Poisson process of the given intensity on the window.
/// Degrees are left unassigned. Deterministic in `seed`.
pub fn sample_poisson<S: Scalar>(
    window: Window<S>,
    intensity: f64,
    seed: u64,
) -> Result<PointConfiguration<S>> {
    sample_poisson_rng(window, intensity, &mut rng_from_seed(seed))
}

/// As [`sample_poisson`], drawing from a caller-managed generator.
pub fn sample_poisson_rng<S: Scalar, R: Rng>(
    window: Window<S>,
    intensity: f64,
    rng: &mut R,
) -> Result<PointConfiguration<S>> {
    if !(intensity > 0.0) || !intensity.is_finite() {
        return Err(Error::invalid("intensity must be positive"));
    }
    let mean = intensity * window.length().to_real();
    let count_dist =
        Poisson::new(mean).map_err(|e| Error::invalid(format!("poisson rate: {e}")))?;
    let half = window.half();
    let uniform = Uniform::new_inclusive(-half, half);
    // Count, then positions as uniform order statistics. Exact coincidences
    // have probability zero; redraw the whole sample if one occurs.
    loop {
        let n = count_dist.sample(rng) as usize;
        let mut positions: Vec<S> = (0..n).map(|_| uniform.sample(rng)).collect();
        positions.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));
        if positions.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let ids = (0..n as u64).collect();
        return PointConfiguration::from_sorted_parts(window, positions, ids, None, None);
    }
}
