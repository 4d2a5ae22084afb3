//! C-SVM on a precomputed kernel matrix: SMO with second-order working-set
//! selection, plus a one-vs-one multiclass ensemble.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{param, Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmSettings {
    /// Stopping tolerance on the maximal KKT violation.
    pub tol: f64,
    /// Kernel evaluations allowed before giving up. Evaluations are counted
    /// as with an unbounded kernel cache: the first use of a Gram column
    /// costs one evaluation per item, later uses are free.
    pub max_kernel_evals: u64,
    /// Solver steps allowed; the effective cap is at least `100 n`.
    pub max_iterations: u64,
}

impl Default for SvmSettings {
    fn default() -> Self {
        SvmSettings { tol: 1e-3, max_kernel_evals: 10_000_000, max_iterations: 10_000_000 }
    }
}

/// Binary model. `decision(x) = sum_k alpha_k * y_k * K(support_k, x) + bias`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    /// Positions of the support vectors in the training set.
    pub support: Vec<usize>,
    /// Dual coefficients, each in `[0, C]`.
    pub alpha: Vec<f64>,
    /// Labels (+1 / -1) of the support vectors.
    pub y: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub descriptor: String,
    /// Maximal KKT violation at exit.
    pub kkt_gap: f64,
    pub iterations: u64,
}

impl SvmModel {
    /// Decision value from the kernel values between a point and every
    /// training item (indexed by training position).
    pub fn decision(&self, k_row: &[f64]) -> f64 {
        let mut s = self.bias;
        for ((&i, &a), &y) in self.support.iter().zip(&self.alpha).zip(&self.y) {
            s += a * y * k_row[i];
        }
        s
    }

    /// Value of the dual objective `sum alpha - 1/2 sum alpha_i alpha_j y_i y_j K_ij`.
    pub fn dual_objective(&self, gram: &Matrix) -> f64 {
        let mut quad = 0.0;
        for (a, (&i, (&ai, &yi))) in self.support.iter().zip(self.alpha.iter().zip(&self.y)).enumerate() {
            for (&j, (&aj, &yj)) in self.support[a..].iter().zip(self.alpha[a..].iter().zip(&self.y[a..])) {
                let term = ai * aj * yi * yj * gram[(i, j)];
                quad += if i == j { term } else { 2.0 * term };
            }
        }
        self.alpha.iter().sum::<f64>() - 0.5 * quad
    }
}

fn check_gram(gram: &Matrix, n: usize) -> Result<()> {
    if !gram.is_square() || gram.rows() != n {
        return Err(param(alloc::format!("gram is {}x{} for {} labels", gram.rows(), gram.cols(), n)));
    }
    if gram.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(param("gram has non-finite entries"));
    }
    Ok(())
}

/// Trains a binary C-SVM. `y` holds +1 / -1.
pub fn svm_train_binary(gram: &Matrix, y: &[f64], c: f64, settings: &SvmSettings) -> Result<SvmModel> {
    let n = y.len();
    check_gram(gram, n)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(param(alloc::format!("C must be positive, got {c}")));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::Labels("binary labels must be +1 or -1".into()));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::Labels("both classes must be present".into()));
    }

    const TAU: f64 = 1e-12;
    let q = |i: usize, j: usize| y[i] * y[j] * gram[(i, j)];
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut evals: u64 = 0;
    let mut cached = vec![false; n];
    let mut fetch = |t: usize, evals: &mut u64| {
        if !cached[t] {
            cached[t] = true;
            *evals += n as u64;
        }
    };
    let max_iterations = settings.max_iterations.max(100 * n as u64);
    let mut iterations: u64 = 0;
    let up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    let gap = loop {
        // i maximizes -y G over I_up
        let mut m = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > m {
                    m = v;
                    i = t;
                }
            }
        }
        let mut big_m = f64::INFINITY;
        let mut j = usize::MAX;
        let mut best = f64::INFINITY;
        if i != usize::MAX {
            fetch(i, &mut evals);
            let kii = gram[(i, i)];
            for t in 0..n {
                if !low(alpha[t], y[t]) {
                    continue;
                }
                let v = -y[t] * grad[t];
                big_m = big_m.min(v);
                let b = m - v;
                if b > 0.0 {
                    let mut a = kii + gram[(t, t)] - 2.0 * gram[(i, t)];
                    if a <= 0.0 {
                        a = TAU;
                    }
                    let score = -b * b / a;
                    if score < best {
                        best = score;
                        j = t;
                    }
                }
            }
        }
        let gap = m - big_m;
        if i == usize::MAX || j == usize::MAX || gap < settings.tol {
            break gap.max(0.0);
        }
        fetch(j, &mut evals);
        if evals > settings.max_kernel_evals || iterations >= max_iterations {
            return Err(Error::NotConverged { evaluations: evals, gap });
        }
        iterations += 1;

        let (yi, yj) = (y[i], y[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let mut a = gram[(i, i)] + gram[(j, j)] - 2.0 * gram[(i, j)];
        if a <= 0.0 {
            a = TAU;
        }
        if yi != yj {
            let delta = (-grad[i] - grad[j]) / a;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / a;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
    };

    // bias from free vectors, else the midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 { sum_free / free as f64 } else { 0.5 * (ub + lb) };

    let support: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(SvmModel {
        alpha: support.iter().map(|&t| alpha[t]).collect(),
        y: support.iter().map(|&t| y[t]).collect(),
        support,
        bias: -rho,
        c,
        descriptor: String::new(),
        kkt_gap: gap,
        iterations,
    })
}

/// One binary machine of the one-vs-one ensemble; positive decision votes
/// for `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMachine {
    pub a: usize,
    pub b: usize,
    pub model: SvmModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassSvm {
    pub n_classes: usize,
    /// Classes present in the training labels.
    pub present: Vec<usize>,
    pub machines: Vec<PairMachine>,
}

/// One-vs-one C-SVM on a precomputed Gram. Labels are class indices below
/// `n_classes`; classes absent from the training labels are never
/// predicted.
pub fn svm_train(
    gram: &Matrix,
    labels: &[usize],
    n_classes: usize,
    c: f64,
    descriptor: &str,
    settings: &SvmSettings,
) -> Result<MulticlassSvm> {
    check_gram(gram, labels.len())?;
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(Error::Labels(alloc::format!("label {bad} out of range for {n_classes} classes")));
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let present: Vec<usize> = (0..n_classes).filter(|&k| !members[k].is_empty()).collect();
    if present.is_empty() {
        return Err(Error::Labels("no training items".into()));
    }
    let mut machines = Vec::new();
    for (x, &a) in present.iter().enumerate() {
        for &b in &present[x + 1..] {
            let idx: Vec<usize> = members[a].iter().chain(&members[b]).copied().collect();
            let y: Vec<f64> = idx.iter().map(|&i| if labels[i] == a { 1.0 } else { -1.0 }).collect();
            let sub = gram.select(&idx, &idx);
            let mut model = svm_train_binary(&sub, &y, c, settings)?;
            for s in &mut model.support {
                *s = idx[*s];
            }
            model.descriptor = descriptor.into();
            machines.push(PairMachine { a, b, model });
        }
    }
    Ok(MulticlassSvm { n_classes, present, machines })
}

impl MulticlassSvm {
    /// Majority vote over the pairwise machines; ties go to the class with
    /// the largest summed decision value in its favour, then the lowest index.
    pub fn predict(&self, k_row: &[f64]) -> usize {
        if self.machines.is_empty() {
            return self.present[0];
        }
        let mut votes = vec![0usize; self.n_classes];
        let mut aggregate = vec![0.0; self.n_classes];
        for m in &self.machines {
            let d = m.model.decision(k_row);
            if d > 0.0 {
                votes[m.a] += 1;
            } else {
                votes[m.b] += 1;
            }
            aggregate[m.a] += d;
            aggregate[m.b] -= d;
        }
        let mut best = self.present[0];
        for &k in &self.present[1..] {
            if votes[k] > votes[best] || (votes[k] == votes[best] && aggregate[k] > aggregate[best]) {
                best = k;
            }
        }
        best
    }
}
