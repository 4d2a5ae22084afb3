//! Sliced Wasserstein distance between diagrams.
//!
//! On one slice, with each diagram augmented by the diagonal projections of
//! the other, the 1D transport cost equals `∫|G1 - G2|` where
//! `G_i = F(D_i) - F(πD_i)` is the difference of counting distribution
//! functions of a diagram's projected points and of its projected diagonal
//! points. `G_i` depends on one diagram only, so it is built once per item.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math;

/// Slice directions `θ_m = -π/2 + mπ/M`, as `(cos θ, sin θ)`.
pub fn slice_directions(slices: usize) -> Vec<(f64, f64)> {
    (0..slices)
        .map(|m| {
            let theta = -math::FRAC_PI_2 + m as f64 * math::PI / slices as f64;
            (math::cos(theta), math::sin(theta))
        })
        .collect()
}

/// Per-slice step function `G` as sorted breakpoints with the jump at
/// each; equal breakpoints are merged and zero jumps removed.
#[derive(Debug, Clone)]
struct Steps {
    at: Vec<f64>,
    jump: Vec<f64>,
}

fn steps(pairs: &[[f64; 2]], dir: (f64, f64)) -> Steps {
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(2 * pairs.len());
    for &[b, d] in pairs {
        raw.push((b * dir.0 + d * dir.1, 1.0));
        let mid = 0.5 * (b + d);
        raw.push((mid * dir.0 + mid * dir.1, -1.0));
    }
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut at: Vec<f64> = Vec::with_capacity(raw.len());
    let mut jump: Vec<f64> = Vec::with_capacity(raw.len());
    for (x, j) in raw {
        match at.last() {
            Some(&last) if last == x => *jump.last_mut().expect("parallel") += j,
            _ => {
                at.push(x);
                jump.push(j);
            }
        }
    }
    let mut k = 0;
    for i in 0..at.len() {
        if jump[i] != 0.0 {
            at[k] = at[i];
            jump[k] = jump[i];
            k += 1;
        }
    }
    at.truncate(k);
    jump.truncate(k);
    Steps { at, jump }
}

/// `∫ |G1 - G2|` by merging the two breakpoint lists.
fn merged_l1(a: &Steps, b: &Steps) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut level = 0.0f64;
    let mut total = 0.0;
    let mut prev = 0.0;
    while i < a.at.len() || j < b.at.len() {
        let x = match (a.at.get(i), b.at.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        if level != 0.0 {
            total += level.abs() * (x - prev);
        }
        while i < a.at.len() && a.at[i] == x {
            level += a.jump[i];
            i += 1;
        }
        while j < b.at.len() && b.at[j] == x {
            level -= b.jump[j];
            j += 1;
        }
        prev = x;
    }
    total
}

/// Sliced Wasserstein distance: mean over the slices of the 1D transport
/// cost between the augmented projected diagrams.
pub fn sliced_wasserstein(a: &[[f64; 2]], b: &[[f64; 2]], slices: usize) -> f64 {
    let dirs = slice_directions(slices);
    let total: f64 = dirs.iter().map(|&dir| merged_l1(&steps(a, dir), &steps(b, dir))).sum();
    total / slices as f64
}

/// All pairwise sliced Wasserstein distances.
///
/// When the breakpoints of all items on a slice come from a small common
/// set (typical for integer-valued filtrations) every `G_i` is stored as
/// its values on the common grid, scaled by the cell widths, and a pair
/// costs one L1 distance; otherwise pairs are merged.
pub fn sliced_wasserstein_matrix(items: &[Vec<[f64; 2]>], slices: usize) -> Matrix {
    let n = items.len();
    let dirs = slice_directions(slices);
    let per_item: Vec<Vec<Steps>> = items.iter().map(|p| dirs.iter().map(|&d| steps(p, d)).collect()).collect();

    let mut grids: Vec<Vec<f64>> = Vec::with_capacity(slices);
    let mut grid_len = 0usize;
    let mut merge_len = 0usize;
    for s in 0..slices {
        let mut all: Vec<f64> = per_item.iter().flat_map(|st| st[s].at.iter().copied()).collect();
        merge_len += all.len();
        all.sort_by(f64::total_cmp);
        all.dedup();
        grid_len += all.len().saturating_sub(1);
        grids.push(all);
    }
    let mean_merge = merge_len as f64 / n.max(1) as f64;
    let dense = (grid_len as f64) <= 2.0 * mean_merge && grid_len.saturating_mul(n) <= 50_000_000;

    let mut out = Matrix::zeros(n, n);
    if dense {
        let embedded: Vec<Vec<f64>> = per_item
            .iter()
            .map(|st| {
                let mut v = Vec::with_capacity(grid_len);
                for (s, grid) in grids.iter().enumerate() {
                    let steps = &st[s];
                    let mut level = 0.0;
                    let mut k = 0;
                    for w in grid.windows(2) {
                        while k < steps.at.len() && steps.at[k] <= w[0] {
                            level += steps.jump[k];
                            k += 1;
                        }
                        v.push(level * (w[1] - w[0]));
                    }
                }
                v
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                let d: f64 = embedded[i].iter().zip(&embedded[j]).map(|(x, y)| (x - y).abs()).sum();
                let d = d / slices as f64;
                out[(i, j)] = d;
                out[(j, i)] = d;
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                let total: f64 = (0..slices).map(|s| merged_l1(&per_item[i][s], &per_item[j][s])).sum();
                let d = total / slices as f64;
                out[(i, j)] = d;
                out[(j, i)] = d;
            }
        }
    }
    out
}
