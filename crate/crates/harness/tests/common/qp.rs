//! Brute-force Euclidean projections by enumeration of active sets.

#![allow(dead_code)]

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Box: each coordinate is at its lower bound, its upper bound, or free;
/// all 3ⁿ patterns are tried and the closest feasible candidate wins.
pub fn project_box(p: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut y = vec![0.0; n];
        let mut ok = true;
        for i in 0..n {
            y[i] = match c % 3 {
                0 => lo[i],
                1 => hi[i],
                _ => p[i],
            };
            c /= 3;
            ok &= y[i] >= lo[i] && y[i] <= hi[i];
        }
        if ok {
            let d = dist2(&y, p);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, y));
            }
        }
    }
    best.unwrap().1
}

/// `{y ≥ 0, Σy = s}`: for each support set S the stationary point is
/// `yᵢ = pᵢ − θ` on S with `θ = (Σ_S p − s)/|S|`; the closest candidate that
/// is nonnegative wins.
pub fn project_simplex(p: &[f64], s: f64) -> Vec<f64> {
    let n = p.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1..(1usize << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let theta = (support.iter().map(|&i| p[i]).sum::<f64>() - s) / support.len() as f64;
        let mut y = vec![0.0; n];
        let mut ok = true;
        for &i in &support {
            y[i] = p[i] - theta;
            ok &= y[i] >= 0.0;
        }
        if ok {
            let d = dist2(&y, p);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, y));
            }
        }
    }
    best.unwrap().1
}

/// Ball: the KKT point is `y = (p + λc)/(1 + λ)` with `λ ≥ 0` chosen by
/// bisection so that `‖y − c‖ = r` whenever p lies outside.
pub fn project_ball(p: &[f64], center: &[f64], r: f64) -> Vec<f64> {
    let at = |lam: f64| -> Vec<f64> {
        p.iter()
            .zip(center)
            .map(|(pi, ci)| (pi + lam * ci) / (1.0 + lam))
            .collect()
    };
    if dist2(p, center) <= r * r {
        return p.to_vec();
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while dist2(&at(hi), center).sqrt() > r {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dist2(&at(mid), center).sqrt() > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}
