//! Reference implementations kept deliberately naive and structurally
//! independent of the incremental engine, for cross-checking. Both use the
//! same tie-breaking rules (smaller position, then smaller id; edges applied
//! in ascending (distance, left position) order), so on any input all three
//! implementations must produce identical edge sets and leftovers — and the
//! round oracle additionally identical round labels.

use super::{Edge, Matching};
use crate::point_process::PointConfiguration;
use crate::{Error, Result, Scalar};

/// Repeatedly joins the globally closest compatible pair. Because joining a
/// pair never makes any other pair compatible again, a single pass over all
/// pairs in ascending order is equivalent. Produces the same edge set and
/// leftovers as the round-based scheme, but no round structure (`round` is 0
/// on every edge). Quadratic in memory; intended for tests on small inputs.
pub fn greedy_reference<S: Scalar>(config: PointConfiguration<S>) -> Result<Matching<S>> {
    let degrees = config
        .degrees()
        .ok_or_else(|| Error::invalid("matching requires degrees"))?;
    let n = config.len();
    let mut pairs = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            pairs.push((config.distance(a, b), a as u32, b as u32));
        }
    }
    pairs.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .expect("finite distances")
            .then_with(|| {
                let px = config.positions()[x.1 as usize];
                let py = config.positions()[y.1 as usize];
                px.partial_cmp(&py).expect("finite positions")
            })
    });
    let mut free = degrees.to_vec();
    let mut edges = Vec::new();
    for (distance, a, b) in pairs {
        if free[a as usize] > 0 && free[b as usize] > 0 {
            free[a as usize] -= 1;
            free[b as usize] -= 1;
            edges.push(Edge { a, b, round: 0, distance });
        }
    }
    Ok(Matching { config, edges, leftover: free, rounds_run: 0, truncated: false })
}

/// Literal round-by-round execution: each round recomputes every vertex's
/// nearest compatible vertex from scratch (quadratic per round), collects
/// the mutually closest pairs, and applies them in ascending (distance, left
/// position) order with compatibility re-validated. Matches the engine edge
/// for edge, including round labels.
pub fn naive_round_oracle<S: Scalar>(
    config: PointConfiguration<S>,
    max_rounds: Option<u32>,
) -> Result<Matching<S>> {
    let degrees = config
        .degrees()
        .ok_or_else(|| Error::invalid("matching requires degrees"))?;
    let cap = max_rounds.unwrap_or_else(|| super::default_max_rounds(&config));
    let n = config.len();
    let mut free = degrees.to_vec();
    let mut adjacent = vec![false; n * n];
    let mut edges: Vec<Edge<S>> = Vec::new();
    let mut round = 0;
    let mut truncated = false;

    let compatible = |free: &[u32], adjacent: &[bool], a: usize, b: usize| {
        a != b && free[a] > 0 && free[b] > 0 && !adjacent[a * n + b]
    };
    let nearest = |free: &[u32], adjacent: &[bool], x: usize| -> Option<usize> {
        let mut best: Option<usize> = None;
        for c in 0..n {
            if !compatible(free, adjacent, x, c) {
                continue;
            }
            best = Some(match best {
                None => c,
                Some(cur) => {
                    let (dc, dcur) = (config.distance(x, c), config.distance(x, cur));
                    if dc < dcur {
                        c
                    } else if dcur < dc {
                        cur
                    } else {
                        let (pc, pcur) = (config.positions()[c], config.positions()[cur]);
                        if pc < pcur
                            || (pc == pcur && config.ids()[c] < config.ids()[cur])
                        {
                            c
                        } else {
                            cur
                        }
                    }
                }
            });
        }
        best
    };

    loop {
        let proposal: Vec<Option<usize>> =
            (0..n).map(|x| nearest(&free, &adjacent, x)).collect();
        let mut batch: Vec<(usize, usize)> = (0..n)
            .filter_map(|x| match proposal[x] {
                Some(y) if y > x && proposal[y] == Some(x) => Some((x, y)),
                _ => None,
            })
            .collect();
        if batch.is_empty() {
            break;
        }
        if round >= cap {
            truncated = true;
            break;
        }
        round += 1;
        batch.sort_by(|&(a1, b1), &(a2, b2)| {
            config
                .distance(a1, b1)
                .partial_cmp(&config.distance(a2, b2))
                .expect("finite distances")
                .then_with(|| {
                    config.positions()[a1]
                        .partial_cmp(&config.positions()[a2])
                        .expect("finite positions")
                })
        });
        for (a, b) in batch {
            if !compatible(&free, &adjacent, a, b) {
                continue;
            }
            free[a] -= 1;
            free[b] -= 1;
            adjacent[a * n + b] = true;
            adjacent[b * n + a] = true;
            edges.push(Edge {
                a: a as u32,
                b: b as u32,
                round,
                distance: config.distance(a, b),
            });
        }
    }

    Ok(Matching { config, edges, leftover: free, rounds_run: round, truncated })
}
