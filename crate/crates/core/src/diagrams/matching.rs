use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{param, Result};
use crate::math;
use crate::persistence::PersistenceDiagram;

fn linf(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

fn to_diagonal(a: [f64; 2]) -> f64 {
    (a[1] - a[0]).abs() / 2.0
}

/// Cost between the `i`-th row and `j`-th column of the augmented problem.
/// Rows are the points of the first diagram followed by one diagonal slot
/// per point of the second; columns the other way round.
struct Augmented {
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
}

impl Augmented {
    fn new(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Self {
        Augmented { a: d1.pairs(), b: d2.pairs() }
    }

    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    fn cost(&self, i: usize, j: usize) -> f64 {
        let (n, m) = (self.a.len(), self.b.len());
        match (i < n, j < m) {
            (true, true) => linf(self.a[i], self.b[j]),
            (true, false) => to_diagonal(self.a[i]),
            (false, true) => to_diagonal(self.b[j]),
            (false, false) => 0.0,
        }
    }
}

/// Whether a perfect matching exists using only pairs with cost `<= eps`
/// (Hopcroft-Karp).
fn perfect_matching_within(aug: &Augmented, eps: f64) -> bool {
    let size = aug.size();
    let adj: Vec<Vec<usize>> = (0..size).map(|i| (0..size).filter(|&j| aug.cost(i, j) <= eps).collect()).collect();
    const FREE: usize = usize::MAX;
    let mut match_row = vec![FREE; size];
    let mut match_col = vec![FREE; size];
    let mut layer = vec![0usize; size];
    let mut matched = 0;
    loop {
        // BFS layering from free rows
        let mut queue = VecDeque::new();
        for i in 0..size {
            if match_row[i] == FREE {
                layer[i] = 0;
                queue.push_back(i);
            } else {
                layer[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let r = match_col[j];
                if r == FREE {
                    found = true;
                } else if layer[r] == usize::MAX {
                    layer[r] = layer[i] + 1;
                    queue.push_back(r);
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; size];
        for i in 0..size {
            if match_row[i] == FREE && augment(i, &adj, &mut match_row, &mut match_col, &mut layer, &mut next) {
                matched += 1;
            }
        }
    }
    matched == size
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    match_row: &mut [usize],
    match_col: &mut [usize],
    layer: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[i] < adj[i].len() {
        let j = adj[i][next[i]];
        next[i] += 1;
        let r = match_col[j];
        let ok = r == usize::MAX
            || (layer[r] == layer[i] + 1 && augment(r, adj, match_row, match_col, layer, next));
        if ok {
            match_row[i] = j;
            match_col[j] = i;
            return true;
        }
    }
    layer[i] = usize::MAX;
    false
}

/// Bottleneck distance with the L-infinity ground metric. Kinds are
/// ignored; the diagrams are compared as plain point multisets.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let aug = Augmented::new(d1, d2);
    let size = aug.size();
    let mut candidates = vec![0.0];
    for i in 0..size {
        for j in 0..size {
            candidates.push(aug.cost(i, j));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(&aug, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials). Returns the total cost.
fn assignment_cost(size: usize, cost: impl Fn(usize, usize) -> f64) -> f64 {
    if size == 0 {
        return 0.0;
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0; size + 1];
    let mut v = vec![0.0; size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=size {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=size).map(|j| cost(p[j] - 1, j - 1)).sum()
}

/// p-th diagram distance with the L-infinity ground metric:
/// `(min over partial matchings of sum cost^p)^(1/p)`. Kinds are ignored.
pub fn wasserstein_p(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(param(alloc::format!("wasserstein order must be a finite p >= 1, got {p}")));
    }
    let aug = Augmented::new(d1, d2);
    let total = assignment_cost(aug.size(), |i, j| math::pow(aug.cost(i, j), p));
    Ok(math::pow(total.max(0.0), 1.0 / p))
}
