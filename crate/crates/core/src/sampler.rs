//! Monte-Carlo simulation of joint measurements.
//!
//! Draws outcome tuples from a joint distribution by inverse-CDF lookup and
//! compares empirical frequencies against the analytic values with a Pearson
//! chi-square statistic (small cells pooled) and total-variation distance.
//! Shots can be split across derived per-worker streams; merging counts is
//! associative, so worker layout never changes the aggregate law.

use crate::error::{Error, Result};
use crate::povm::JointDistribution;
use crate::tol;
use rand::Rng;
use serde::Serialize;

/// Tally of sampled outcome tuples in lexicographic order.
#[derive(Clone, Debug, Serialize)]
pub struct OutcomeCounts {
    pub counts: Vec<u64>,
    pub total: u64,
    pub seed: u64,
}

impl OutcomeCounts {
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Merges another tally into this one (associative, commutative).
    pub fn absorb(&mut self, other: &OutcomeCounts) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }
}

/// Negative entries are tolerated only up to a total mass of
/// [`tol::SAMPLE_CLIP`]; they are clipped to zero and the rest renormalized.
fn clipped_cdf(p: &JointDistribution) -> Result<Vec<f64>> {
    let clip: f64 = p.p.iter().filter(|&&x| x < 0.0).map(|&x| -x).sum();
    if clip > tol::SAMPLE_CLIP {
        return Err(Error::InvalidDistribution(format!(
            "negative mass {clip:.3e} exceeds the clip budget; \
             the state lies outside the sampling region"
        )));
    }
    let clipped: Vec<f64> = p.p.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidDistribution("zero total mass".into()));
    }
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = clipped
        .iter()
        .map(|&x| {
            acc += x / total;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    Ok(cdf)
}

fn draw_into(counts: &mut [u64], cdf: &[f64], shots: u64, rng: &mut impl Rng) {
    for _ in 0..shots {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c <= u);
        counts[idx.min(cdf.len() - 1)] += 1;
    }
}

/// Multinomial draw via inverse CDF on the lexicographic outcome order;
/// identical seeds give identical counts.
pub fn sample(p: &JointDistribution, shots: u64, seed: u64) -> Result<OutcomeCounts> {
    let cdf = clipped_cdf(p)?;
    let mut counts = vec![0u64; p.p.len()];
    let mut rng = crate::rng::seeded(seed);
    draw_into(&mut counts, &cdf, shots, &mut rng);
    Ok(OutcomeCounts {
        counts,
        total: shots,
        seed,
    })
}

/// Splits the shots over `workers` derived streams and merges the tallies.
pub fn sample_workers(
    p: &JointDistribution,
    shots: u64,
    seed: u64,
    workers: u64,
) -> Result<OutcomeCounts> {
    let workers = workers.max(1);
    let cdf = clipped_cdf(p)?;
    let mut counts = vec![0u64; p.p.len()];
    for w in 0..workers {
        let share = shots / workers + u64::from(w < shots % workers);
        let mut rng = crate::rng::worker(seed, w);
        draw_into(&mut counts, &cdf, share, &mut rng);
    }
    Ok(OutcomeCounts {
        counts,
        total: shots,
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GofReport {
    pub chi2: f64,
    /// Cells entering the statistic after pooling, minus one.
    pub dof: usize,
    pub quantile_999: f64,
    pub below_quantile: bool,
    pub tv: f64,
    pub pooled_cells: usize,
}

/// Pearson chi-square over outcomes with expected count >= 5 (the rest share
/// one pooled cell) plus total-variation distance against the analytic law.
pub fn goodness_of_fit(c: &OutcomeCounts, p: &JointDistribution) -> Result<GofReport> {
    if c.counts.len() != p.p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} counted outcomes vs {} analytic entries",
            c.counts.len(),
            p.p.len()
        )));
    }
    let n = c.total as f64;
    let tv = 0.5
        * c.counts
            .iter()
            .zip(&p.p)
            .map(|(&obs, &prob)| (obs as f64 / n - prob).abs())
            .sum::<f64>();

    let mut chi2 = 0.0;
    let mut cells = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    let mut pooled_cells = 0usize;
    for (&obs, &prob) in c.counts.iter().zip(&p.p) {
        let expected = prob.max(0.0) * n;
        if expected >= 5.0 {
            chi2 += (obs as f64 - expected).powi(2) / expected;
            cells += 1;
        } else {
            pooled_obs += obs as f64;
            pooled_exp += expected;
            pooled_cells += 1;
        }
    }
    if pooled_cells > 0 && pooled_exp > 0.0 {
        chi2 += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    let quantile_999 = chi2_quantile_999(dof);
    Ok(GofReport {
        chi2,
        dof,
        quantile_999,
        below_quantile: chi2 <= quantile_999,
        tv,
        pooled_cells,
    })
}

/// 0.999 quantiles of the chi-square distribution for 1..=100 degrees of
/// freedom.
const CHI2_999: [f64; 100] = [
    1.082756617066e+01, 1.381551055796e+01, 1.626623619624e+01, 1.846682695290e+01,
    2.051500565243e+01, 2.245774448483e+01, 2.432188634786e+01, 2.612448155838e+01,
    2.787716487126e+01, 2.958829844507e+01, 3.126413362024e+01, 3.290949040736e+01,
    3.452817897487e+01, 3.612327368040e+01, 3.769729821835e+01, 3.925235479077e+01,
    4.079021670690e+01, 4.231239633168e+01, 4.382019596452e+01, 4.531474661813e+01,
    4.679703804156e+01, 4.826794229084e+01, 4.972823246643e+01, 5.117859777738e+01,
    5.261965577617e+01, 5.405196238858e+01, 5.547602020575e+01, 5.689228539335e+01,
    5.830117348979e+01, 5.970306430443e+01, 6.109830608106e+01, 6.248721905709e+01,
    6.387009852234e+01, 6.524721746094e+01, 6.661882884370e+01, 6.798516762602e+01,
    6.934645249624e+01, 7.070288741151e+01, 7.205466295199e+01, 7.340195751899e+01,
    7.474493839842e+01, 7.608376270770e+01, 7.741857824131e+01, 7.874952422804e+01,
    8.007673201082e+01, 8.140032565871e+01, 8.272042251912e+01, 8.403713371722e+01,
    8.535056460859e+01, 8.666081519040e+01, 8.796798047563e+01, 8.927215083430e+01,
    9.057341230530e+01, 9.187184688166e+01, 9.316753277223e+01, 9.446054464188e+01,
    9.575095383249e+01, 9.703882856651e+01, 9.832423413474e+01, 9.960723306985e+01,
    1.008878853069e+02, 1.021662483318e+02, 1.034423773199e+02, 1.047163252630e+02,
    1.059881430896e+02, 1.072578797749e+02, 1.085255824444e+02, 1.097912964707e+02,
    1.110550655627e+02, 1.123169318505e+02, 1.135769359639e+02, 1.148351171062e+02,
    1.160915131232e+02, 1.173461605683e+02, 1.185990947638e+02, 1.198503498575e+02,
    1.210999588773e+02, 1.223479537817e+02, 1.235943655076e+02, 1.248392240158e+02,
    1.260825583332e+02, 1.273243965933e+02, 1.285647660743e+02, 1.298036932349e+02,
    1.310412037483e+02, 1.322773225349e+02, 1.335120737925e+02, 1.347454810251e+02,
    1.359775670712e+02, 1.372083541292e+02, 1.384378637823e+02, 1.396661170227e+02,
    1.408931342732e+02, 1.421189354094e+02, 1.433435397792e+02, 1.445669662231e+02,
    1.457892330918e+02, 1.470103582644e+02, 1.482303591651e+02, 1.494492527790e+02,
];

/// 0.999 normal quantile, for the Wilson-Hilferty tail formula.
const Z_999: f64 = 3.090232306167813;

/// Tabulated for dof 1..=100, Wilson-Hilferty cube approximation beyond
/// (relative error below 3e-4 there).
pub fn chi2_quantile_999(dof: usize) -> f64 {
    if dof == 0 {
        return 0.0;
    }
    if dof <= 100 {
        return CHI2_999[dof - 1];
    }
    let k = dof as f64;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + Z_999 * h.sqrt()).powi(3)
}
