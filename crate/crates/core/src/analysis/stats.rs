use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

fn check_finite(v: &[f64], what: &'static str) -> Result<(), AnalysisError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(AnalysisError::NonFinite(what))
    }
}

/// Shannon entropy (nats) of the distribution `|v_i| / Σ|v_j|`.
pub fn entropy(v: &[f64]) -> Result<f64, AnalysisError> {
    if v.is_empty() {
        return Err(AnalysisError::Empty("vector"));
    }
    check_finite(v, "vector")?;
    let total: f64 = v.iter().map(|x| x.abs()).sum();
    if total == 0.0 {
        return Err(AnalysisError::Degenerate);
    }
    let h = v
        .iter()
        .map(|x| x.abs() / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum::<f64>();
    Ok(h.max(0.0))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Population variance.
pub fn variance(v: &[f64]) -> Result<f64, AnalysisError> {
    if v.is_empty() {
        return Err(AnalysisError::Empty("vector"));
    }
    check_finite(v, "vector")?;
    let m = mean(v);
    Ok(v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(AnalysisError::TooShort(x.len()));
    }
    check_finite(x, "series")?;
    check_finite(y, "series")
}

fn pearson_unchecked(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    check_pair(x, y)?;
    pearson_unchecked(x, y)
}

/// 1-based ranks; tied values share their mean rank.
pub fn fractional_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    check_pair(x, y)?;
    pearson_unchecked(&fractional_ranks(x), &fractional_ranks(y)).map_err(|e| match e {
        AnalysisError::ZeroVariance => AnalysisError::AllTied,
        e => e,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic two-sided p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::Empty("sample"));
    }
    check_finite(a, "sample")?;
    check_finite(b, "sample")?;
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        d: d.clamp(0.0, 1.0),
        p: kolmogorov_survival(lambda),
    })
}

/// `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} exp(−2k²λ²)`. Below λ = 1.18 the
/// alternating series converges slowly, so the equivalent theta-function
/// form `1 − √(2π)/λ Σ_{k≥1} exp(−(2k−1)²π²/(8λ²))` is used instead.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let y = -PI * PI / (8.0 * lambda * lambda);
        let sum: f64 = (1..=8)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (m * m * y).exp()
            })
            .sum();
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-17 {
                break;
            }
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}
