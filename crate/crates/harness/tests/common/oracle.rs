//! Independent full-batch oracle for the robust logistic objective
//!
//! F(x) = mean_i ℓᵢ(x) + κ·mean_i max(0, ℓᵢ(x) − mean_j ℓⱼ(x)),
//! ℓᵢ(x) = log(1 + exp(−bᵢ·(aᵢᵀw + β))).
//!
//! The minimizer is computed by damped Newton on the Huber-smoothed objective
//! F_μ (max(0,t) ≈ t²/2μ on [0, μ]) with continuation in μ. Since
//! F_μ ≤ F ≤ F_μ + κμ/2 and F_μ is convex, the returned point is within
//! κμ/2 + ‖∇F_μ‖·R of the optimum, R bounding the distance to a minimizer.

#![allow(dead_code, clippy::needless_range_loop)]

use sts_core::Dataset;

pub struct RobustLogistic {
    rows: Vec<Vec<f64>>,
    labels: Vec<f64>,
    kappa: f64,
}

pub struct OracleSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Bound on `F(x) − min F`, taking R = ‖x‖ + 10.
    pub gap_bound: f64,
}

fn log1pexp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sig(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl RobustLogistic {
    pub fn new(ds: &Dataset, kappa: f64) -> Self {
        let rows = ds
            .samples()
            .iter()
            .map(|s| {
                let mut r = s.features.clone();
                r.push(1.0);
                r
            })
            .collect();
        let labels = ds.samples().iter().map(|s| s.label).collect();
        Self {
            rows,
            labels,
            kappa,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn losses(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.labels)
            .map(|(r, b)| {
                let m: f64 = r.iter().zip(x).map(|(p, q)| p * q).sum();
                log1pexp(-b * m)
            })
            .collect()
    }

    pub fn mean_loss(&self, x: &[f64]) -> f64 {
        let l = self.losses(x);
        l.iter().sum::<f64>() / l.len() as f64
    }

    /// Exact (unsmoothed) robust objective.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let l = self.losses(x);
        let n = l.len() as f64;
        let h = l.iter().sum::<f64>() / n;
        h + self.kappa * l.iter().map(|v| (v - h).max(0.0)).sum::<f64>() / n
    }

    /// Smoothed value, gradient and Hessian.
    fn smoothed(&self, x: &[f64], mu: f64) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let d = self.dim();
        let n = self.rows.len() as f64;
        let mut l = Vec::with_capacity(self.rows.len());
        let mut g = Vec::with_capacity(self.rows.len());
        let mut curv = Vec::with_capacity(self.rows.len());
        for (r, &b) in self.rows.iter().zip(&self.labels) {
            let m: f64 = r.iter().zip(x).map(|(p, q)| p * q).sum();
            l.push(log1pexp(-b * m));
            let s = sig(-b * m);
            g.push(r.iter().map(|v| -b * s * v).collect::<Vec<f64>>());
            curv.push(s * (1.0 - s));
        }
        let h = l.iter().sum::<f64>() / n;
        let mut gh = vec![0.0; d];
        let mut hh = vec![vec![0.0; d]; d];
        for (i, r) in self.rows.iter().enumerate() {
            for p in 0..d {
                gh[p] += g[i][p] / n;
                for q in 0..d {
                    hh[p][q] += curv[i] * r[p] * r[q] / n;
                }
            }
        }
        let k = self.kappa;
        let mut val = h;
        let mut grad = gh.clone();
        let mut hess = hh.clone();
        let mut mean_h1 = 0.0;
        for i in 0..l.len() {
            let t = l[i] - h;
            let (hv, h1, h2) = if t <= 0.0 {
                (0.0, 0.0, 0.0)
            } else if t < mu {
                (t * t / (2.0 * mu), t / mu, 1.0 / mu)
            } else {
                (t - mu / 2.0, 1.0, 0.0)
            };
            val += k * hv / n;
            mean_h1 += h1 / n;
            if h1 == 0.0 && h2 == 0.0 {
                continue;
            }
            let r = &self.rows[i];
            let diff: Vec<f64> = (0..d).map(|p| g[i][p] - gh[p]).collect();
            for p in 0..d {
                grad[p] += k * h1 * diff[p] / n;
                for q in 0..d {
                    hess[p][q] += k * (h2 * diff[p] * diff[q] + h1 * curv[i] * r[p] * r[q]) / n;
                }
            }
        }
        for p in 0..d {
            for q in 0..d {
                hess[p][q] -= k * mean_h1 * hh[p][q];
            }
        }
        (val, grad, hess)
    }

    fn smoothed_value(&self, x: &[f64], mu: f64) -> f64 {
        let l = self.losses(x);
        let n = l.len() as f64;
        let h = l.iter().sum::<f64>() / n;
        let pen: f64 = l
            .iter()
            .map(|v| {
                let t = v - h;
                if t <= 0.0 {
                    0.0
                } else if t < mu {
                    t * t / (2.0 * mu)
                } else {
                    t - mu / 2.0
                }
            })
            .sum();
        h + self.kappa * pen / n
    }

    /// Minimizes F to the requested tolerance (bound certified by smoothing).
    pub fn minimize(&self, tol: f64) -> OracleSolution {
        let d = self.dim();
        let mut x = vec![0.0; d];
        let mut mu = 0.1;
        let mut last_grad = f64::INFINITY;
        loop {
            for _ in 0..200 {
                let (f, g, mut hess) = self.smoothed(&x, mu);
                let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                last_grad = gn;
                if gn < 1e-11 {
                    break;
                }
                for p in 0..d {
                    hess[p][p] += 1e-12;
                }
                let step = solve(hess, g.iter().map(|v| -v).collect());
                let slope: f64 = step.iter().zip(&g).map(|(s, gi)| s * gi).sum();
                let mut t = 1.0;
                loop {
                    let cand: Vec<f64> = x.iter().zip(&step).map(|(xi, s)| xi + t * s).collect();
                    if self.smoothed_value(&cand, mu) <= f + 1e-4 * t * slope || t < 1e-12 {
                        x = cand;
                        break;
                    }
                    t *= 0.5;
                }
            }
            if self.kappa * mu / 2.0 < tol * 1e-2 || mu < 1e-12 {
                break;
            }
            mu *= 0.1;
        }
        let radius = x.iter().map(|v| v * v).sum::<f64>().sqrt() + 10.0;
        OracleSolution {
            value: self.objective(&x),
            gap_bound: self.kappa * mu / 2.0 + last_grad * radius,
            x,
        }
    }

    /// Exact composite subgradient at `(x, u)` of the sampled estimator's
    /// expectation: E[(1+κ·1{ℓ≥u})∇ℓ] − κ·P(ℓ ≥ u)·E[∇ℓ].
    pub fn expected_direction(&self, x: &[f64], u: f64) -> Vec<f64> {
        let d = self.dim();
        let n = self.rows.len() as f64;
        let mut gx = vec![0.0; d];
        let mut mean_g = vec![0.0; d];
        let mut p_above = 0.0;
        for (r, &b) in self.rows.iter().zip(&self.labels) {
            let m: f64 = r.iter().zip(x).map(|(p, q)| p * q).sum();
            let l = log1pexp(-b * m);
            let s = sig(-b * m);
            let above = l >= u;
            if above {
                p_above += 1.0 / n;
            }
            let w = if above { 1.0 + self.kappa } else { 1.0 };
            for p in 0..d {
                let gp = -b * s * r[p];
                gx[p] += w * gp / n;
                mean_g[p] += gp / n;
            }
        }
        (0..d)
            .map(|p| gx[p] - self.kappa * p_above * mean_g[p])
            .collect()
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}
