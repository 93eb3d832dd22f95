use rayon::prelude::*;

use crate::bounds::{proposition_lower_bound, Verdict};
use crate::concurrence::{gme_threshold, ThresholdValue};
use crate::error::{Error, Result};
use crate::states::NoisyFamily;

pub const DEFAULT_GRID: usize = 200;
pub const DEFAULT_REFINE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSample {
    pub x: f64,
    pub lc_n: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingDirection {
    /// Certified at the left end of the bracket, not at the right.
    Lost,
    /// Not certified at the left end, certified at the right.
    Gained,
}

/// A sign change of `lc_n(x) − threshold` between two grid points, refined by bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub bracket: (f64, f64),
    pub x: f64,
    pub direction: CrossingDirection,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub family_id: String,
    pub threshold: ThresholdValue,
    pub samples: Vec<ScanSample>,
    pub crossings: Vec<Crossing>,
    /// Smallest refined crossing, if any.
    pub detection_threshold: Option<f64>,
}

/// Bisects a boolean predicate that differs at `lo` and `hi` down to a bracket of width `tol`.
///
/// Returns the midpoint of the final bracket.
pub fn bisect(
    mut pred: impl FnMut(f64) -> Result<bool>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let at_lo = pred(lo)?;
    if at_lo == pred(hi)? {
        return Err(Error::Contract(format!(
            "bisection bracket [{lo}, {hi}] has no sign change"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Samples `lc_n(x) − threshold` on a uniform grid over [0, 1], refines every
/// sign change by bisection to `refine`, and reports the smallest crossing.
pub fn scan_family(family: &NoisyFamily, grid: usize, refine: f64) -> Result<ScanResult> {
    if grid < 2 {
        return Err(Error::Contract(format!(
            "scan grid needs >= 2 points, got {grid}"
        )));
    }
    if !(refine.is_finite() && refine > 0.0) {
        return Err(Error::Contract(format!(
            "refine tolerance {refine} must be positive"
        )));
    }
    let shape = family.base().shape();
    let d = shape.homogeneous_dim().ok_or_else(|| {
        Error::Unsupported(format!(
            "scans need equal local dimensions for the threshold, got {shape}"
        ))
    })?;
    let threshold = gme_threshold(shape.parties(), d)?;

    let lc_at = |x: f64| -> Result<f64> { Ok(proposition_lower_bound(&family.member(x)?)?.lc_n) };

    let xs: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
    let samples: Vec<ScanSample> = xs
        .par_iter()
        .map(|&x| {
            let lc_n = lc_at(x)?;
            Ok(ScanSample {
                x,
                lc_n,
                margin: lc_n - threshold.value,
                verdict: Verdict::classify(lc_n, threshold.value),
            })
        })
        .collect::<Result<_>>()?;

    let brackets: Vec<(f64, f64, bool)> = samples
        .windows(2)
        .filter(|w| w[0].verdict.is_gme() != w[1].verdict.is_gme())
        .map(|w| (w[0].x, w[1].x, w[0].verdict.is_gme()))
        .collect();
    let crossings: Vec<Crossing> = brackets
        .par_iter()
        .map(|&(lo, hi, left_certified)| {
            let x = bisect(|x| Ok(lc_at(x)? > threshold.value), lo, hi, refine)?;
            Ok(Crossing {
                bracket: (lo, hi),
                x,
                direction: if left_certified {
                    CrossingDirection::Lost
                } else {
                    CrossingDirection::Gained
                },
            })
        })
        .collect::<Result<_>>()?;
    let detection_threshold = crossings.first().map(|c| c.x);

    Ok(ScanResult {
        family_id: family.label().to_string(),
        threshold,
        samples,
        crossings,
        detection_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, white_noise_family, DensityMatrix};
    use crate::tensor::shape::SystemShape;

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|x| Ok(x * x < 2.0), 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
        assert!(bisect(|x| Ok(x > 5.0), 0.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn gghz_detection_threshold() {
        let fam = white_noise_family(ghz(3, 3).unwrap().to_density());
        let r = scan_family(&fam, 50, 1e-7).unwrap();
        // Analytic: (√2/2)(2 − 20x/9) = √(4/3).
        let analytic = (2.0 - (8.0f64 / 3.0).sqrt()) * 9.0 / 20.0;
        let x = r.detection_threshold.unwrap();
        assert!((x - analytic).abs() < 1e-6, "{x} vs {analytic}");
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.crossings[0].direction, CrossingDirection::Lost);
        assert!(r.samples.windows(2).all(|w| w[0].x < w[1].x));
    }

    #[test]
    fn maximally_mixed_family_never_detects() {
        let shape = SystemShape::uniform(3, 2).unwrap();
        let fam = white_noise_family(DensityMatrix::maximally_mixed(shape));
        let r = scan_family(&fam, 10, 1e-6).unwrap();
        assert!(r.detection_threshold.is_none());
        assert!(r.crossings.is_empty());
        assert!(r.samples.iter().all(|s| s.margin < 0.0));
    }

    #[test]
    fn scan_argument_errors() {
        let fam = white_noise_family(ghz(3, 2).unwrap().to_density());
        assert!(scan_family(&fam, 1, 1e-6).is_err());
        assert!(scan_family(&fam, 10, 0.0).is_err());
        let bell = white_noise_family(ghz(2, 2).unwrap().to_density());
        assert!(scan_family(&bell, 10, 1e-6).is_err());
    }
}
