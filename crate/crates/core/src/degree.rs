//! Degree distributions and degree assignment.
//!
//! The central family is dyadic: atoms `10 * 4^i` carrying mass `2^-i`.
//! Truncating at `i_max` leaves a residual of `2^-i_max`, which is folded
//! into the top atom so the top mass doubles. Two variants of the family:
//! an odd-degree parity shift (`+1` on every atom), and a `mass_at_one`
//! form that replaces the atoms below `i_min` with a single atom at degree 1
//! carrying the complementary mass `1 - 2^(1-i_min)`.

use rand::Rng;

use crate::point_process::PointConfiguration;
use crate::{rng_from_seed, Error, Result, Scalar};

/// Tolerance for "masses sum to one". Dyadic masses are exact in binary
/// floating point; this only absorbs decimal dust in hand-written laws.
pub const MASS_SUM_TOLERANCE: f64 = 1e-12;

/// A probability law on degrees (positive integers) with finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    support: Vec<u32>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DegreeDistribution {
    fn from_parts(support: Vec<u32>, masses: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("degree distribution needs at least one atom"));
        }
        if support[0] == 0 {
            return Err(Error::invalid("degrees must be at least 1"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("support must be strictly increasing"));
        }
        if masses.len() != support.len() || masses.iter().any(|&m| !(m > 0.0)) {
            return Err(Error::invalid("each atom needs a positive mass"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "masses must sum to 1 (got {total:.17})"
            )));
        }
        let mut cumulative = Vec::with_capacity(masses.len());
        let mut acc = 0.0;
        for &m in &masses {
            acc += m;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(DegreeDistribution { support, masses, cumulative })
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn max_degree(&self) -> u32 {
        *self.support.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.masses)
            .map(|(&d, &m)| d as f64 * m)
            .sum()
    }

    /// `P(D = k)`; zero off the support.
    pub fn pmf(&self, k: u32) -> f64 {
        match self.support.binary_search(&k) {
            Ok(at) => self.masses[at],
            Err(_) => 0.0,
        }
    }

    /// `P(D <= k)`.
    pub fn cdf(&self, k: u32) -> f64 {
        let below = self.support.partition_point(|&d| d <= k);
        if below == 0 {
            0.0
        } else {
            self.cumulative[below - 1]
        }
    }

    /// Smallest degree `d` with `cdf(d) >= u`; the inverse-cdf map used for
    /// sampling and for monotone coupling of two laws.
    pub fn quantile(&self, u: f64) -> u32 {
        let at = self.cumulative.partition_point(|&c| c < u);
        self.support[at.min(self.support.len() - 1)]
    }
}

/// Builds a law from `(degree, mass)` atoms, in any order.
pub fn build_categorical(atoms: &[(u32, f64)]) -> Result<DegreeDistribution> {
    let mut atoms: Vec<(u32, f64)> = atoms.to_vec();
    atoms.sort_by_key(|&(d, _)| d);
    if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::invalid("duplicate degree in categorical law"));
    }
    let support = atoms.iter().map(|&(d, _)| d).collect();
    let masses = atoms.iter().map(|&(_, m)| m).collect();
    DegreeDistribution::from_parts(support, masses)
}

/// The dyadic law with atoms `10 * 4^i + parity_shift` for
/// `i_min <= i <= i_max` and masses `2^-i`; the truncation residual
/// `2^-i_max` is folded into the top atom.
///
/// With `mass_at_one`, an atom at degree exactly 1 (no parity shift) takes
/// the complementary mass `1 - 2^(1-i_min)`; this requires `i_min >= 2`,
/// otherwise that mass would vanish.
pub fn dyadic_mu(
    i_min: u32,
    i_max: u32,
    parity_shift: u32,
    mass_at_one: bool,
) -> Result<DegreeDistribution> {
    if i_min < 1 || i_min > i_max {
        return Err(Error::invalid("need 1 <= i_min <= i_max"));
    }
    if i_max > 14 {
        return Err(Error::invalid("i_max above 14 overflows 32-bit degrees"));
    }
    if parity_shift > 1 {
        return Err(Error::invalid("parity_shift must be 0 or 1"));
    }
    if mass_at_one && i_min < 2 {
        return Err(Error::invalid("mass_at_one requires i_min >= 2"));
    }
    let mut support = Vec::new();
    let mut masses = Vec::new();
    if mass_at_one {
        support.push(1);
        masses.push(1.0 - (2.0f64).powi(1 - i_min as i32));
    }
    for i in i_min..=i_max {
        support.push(10 * 4u32.pow(i) + parity_shift);
        let mut m = (2.0f64).powi(-(i as i32));
        if i == i_max {
            m += (2.0f64).powi(-(i_max as i32));
        }
        masses.push(m);
    }
    DegreeDistribution::from_parts(support, masses)
}

/// Assigns i.i.d. degrees from `dist` to every point of `config`, in
/// position order, deterministically in `seed`. If the configuration has a
/// palm point, `palm_override` replaces its sampled degree; the degrees of
/// all other points do not depend on the override.
pub fn sample_degrees<S: Scalar>(
    dist: &DegreeDistribution,
    config: &PointConfiguration<S>,
    seed: u64,
    palm_override: Option<u32>,
) -> Result<PointConfiguration<S>> {
    sample_degrees_rng(dist, config, &mut rng_from_seed(seed), palm_override)
}

/// As [`sample_degrees`], drawing from a caller-managed generator.
pub fn sample_degrees_rng<S: Scalar, R: Rng>(
    dist: &DegreeDistribution,
    config: &PointConfiguration<S>,
    rng: &mut R,
    palm_override: Option<u32>,
) -> Result<PointConfiguration<S>> {
    let mut degrees: Vec<u32> = (0..config.len())
        .map(|_| dist.quantile(rng.gen::<f64>()))
        .collect();
    if let Some(forced) = palm_override {
        let palm = config
            .palm_index()
            .ok_or_else(|| Error::invalid("degree override given but no palm point"))?;
        if forced == 0 {
            return Err(Error::invalid("palm degree must be at least 1"));
        }
        degrees[palm] = forced;
    }
    config.with_degrees(degrees)
}

/// First-order stochastic dominance: true iff `high` places at least as
/// much mass above every level, i.e. `cdf_high(k) <= cdf_low(k)` for all k.
/// Reflexive; equality of laws counts as dominance both ways.
pub fn dominates(high: &DegreeDistribution, low: &DegreeDistribution) -> bool {
    // cdfs only change at support points, so checking those suffices.
    high.support()
        .iter()
        .chain(low.support())
        .all(|&k| high.cdf(k) <= low.cdf(k))
}
