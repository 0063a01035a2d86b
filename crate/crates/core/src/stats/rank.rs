use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::{Error, Result};

/// 1-based ranks; tied values share the mean of their positions.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // Positions i+1 ..= j share rank (i+1+j)/2.
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            out[k] = r;
        }
        i = j;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    /// Absent when either series is constant.
    pub rho: Option<f64>,
    /// Two-sided, from the t approximation with n − 2 degrees of freedom.
    pub p_value: Option<f64>,
    pub n: usize,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParams(format!(
            "series lengths differ: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::Insufficient(format!(
            "spearman needs at least 3 pairs, got {n}"
        )));
    }
    let rho = pearson(&ranks(xs), &ranks(ys));
    let p_value = rho.map(|r| {
        if r.abs() >= 1.0 {
            return 0.0;
        }
        let df = (n - 2) as f64;
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
        (2.0 * dist.sf(t.abs())).min(1.0)
    });
    Ok(Correlation { rho, p_value, n })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Mann–Whitney U of the first sample.
    pub u: f64,
    pub z: f64,
    /// Two-sided normal approximation with tie and continuity corrections.
    pub p_value: f64,
}

/// Two-sided Mann–Whitney rank-sum test.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Insufficient(
            "rank-sum test needs two non-empty samples".into(),
        ));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let r = ranks(&pooled);
    let r1: f64 = r[..a.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;

    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = i + sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    let n = n1 + n2;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return Ok(RankSumTest {
            u,
            z: 0.0,
            p_value: 1.0,
        });
    }
    let diff = (u - mean).abs() - 0.5;
    let z = diff.max(0.0) / var.sqrt() * (u - mean).signum();
    let p_value = (2.0 * Normal::standard().sf(z.abs())).min(1.0);
    Ok(RankSumTest { u, z, p_value })
}
