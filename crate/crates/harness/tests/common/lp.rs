//! Dense two-phase simplex with Bland's rule:
//! maximize cᵀv subject to Av = b, v ≥ 0.

#![allow(dead_code)]

const EPS: f64 = 1e-12;

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn value(&self, obj: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.rows)
            .map(|(&j, row)| obj[j] * row[self.rhs])
            .sum()
    }

    /// Maximizes `obj` over columns for which `allowed` holds. Returns `None`
    /// when unbounded.
    fn optimize(&mut self, obj: &[f64], allowed: impl Fn(usize) -> bool) -> Option<f64> {
        loop {
            let entering = (0..self.rhs).filter(|&j| allowed(j)).find(|&j| {
                let reduced = obj[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| obj[b] * row[j])
                        .sum::<f64>();
                reduced > 1e-11
            });
            let Some(c) = entering else {
                return Some(self.value(obj));
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > EPS {
                    let ratio = row[self.rhs] / row[c];
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - 1e-15
                                || (ratio <= br + 1e-15 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let (r, _) = best?;
            self.pivot(r, c);
        }
    }
}

/// Optimal value, or `None` if infeasible or unbounded.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    let (m, n) = (a.len(), c.len());
    let rhs = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, &bi)) in a.iter().zip(b).enumerate() {
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; rhs + 1];
        for j in 0..n {
            row[j] = sign * ai[j];
        }
        row[n + i] = 1.0;
        row[rhs] = sign * bi;
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        rhs,
    };

    let mut phase1 = vec![0.0; rhs];
    for v in &mut phase1[n..] {
        *v = -1.0;
    }
    let infeasibility = -t.optimize(&phase1, |_| true)?;
    if infeasibility > 1e-9 {
        return None;
    }
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| t.rows[r][j].abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }

    let mut obj = vec![0.0; rhs];
    obj[..n].copy_from_slice(c);
    t.optimize(&obj, |j| j < n)
}
