//! Two closed-form comparator bounds for the noisy three-qubit GHZ family
//! `ρ(x) = (x/8) I + (1 − x) |GHZ⟩⟨GHZ|`, and the table comparing them with the
//! cut-aggregation pipeline.

use rayon::prelude::*;

use crate::bounds::proposition_lower_bound;
use crate::bounds::scan::bisect;
use crate::error::{Error, Result};
use crate::states::{ghz, white_noise_family, NoisyFamily};

/// `max(0, √(3/2) (1 − 3x)/(1 + 3x))`.
pub fn zhao_ghz_closed_form(x: f64) -> f64 {
    (1.5f64.sqrt() * (1.0 - 3.0 * x) / (1.0 + 3.0 * x)).max(0.0)
}

/// `max(0, −1/2 + (3 − 3x)/4 + (2 − 2x + x²)/(4√2))`.
pub fn gao_ghz_closed_form(x: f64) -> f64 {
    (-0.5 + (3.0 - 3.0 * x) / 4.0 + (2.0 - 2.0 * x + x * x) / (4.0 * 2f64.sqrt())).max(0.0)
}

/// First x in [lo, hi] where the ordering of `a` and `b` flips, ignoring points
/// where both curves vanish. Grid-scanned with `grid` points, then bisected to `tol`.
pub fn crossover(
    a: impl Fn(f64) -> Result<f64>,
    b: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Result<Option<f64>> {
    if grid < 2 || lo.is_nan() || hi.is_nan() || hi <= lo {
        return Err(Error::Contract(format!(
            "crossover search needs grid >= 2 and lo < hi, got {grid} on [{lo}, {hi}]"
        )));
    }
    let state = |x: f64| -> Result<Option<bool>> {
        let (va, vb) = (a(x)?, b(x)?);
        Ok((va.max(vb) > 0.0 && va != vb).then_some(va > vb))
    };
    let mut prev: Option<(f64, bool)> = None;
    for i in 0..grid {
        let x = lo + (hi - lo) * i as f64 / (grid - 1) as f64;
        let Some(above) = state(x)? else { continue };
        if let Some((px, pa)) = prev {
            if pa != above {
                let root = bisect(|t| Ok(a(t)? > b(t)?), px, x, tol)?;
                return Ok(Some(root));
            }
        }
        prev = Some((x, above));
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub x: f64,
    pub zhao: f64,
    pub gao: f64,
    pub pipeline: f64,
}

/// Comparator curves over a uniform grid on [0, 1] plus their crossings.
#[derive(Clone, Debug)]
pub struct BoundsCurve {
    pub rows: Vec<CurveRow>,
    /// Where the two printed closed forms swap order.
    pub zhao_gao_crossover: Option<f64>,
    /// Where the cut-aggregation pipeline and the gao form swap order.
    pub pipeline_gao_crossover: Option<f64>,
}

fn ghz_family() -> Result<NoisyFamily> {
    Ok(white_noise_family(ghz(3, 2)?.to_density()).with_label("ghz-white-noise"))
}

pub fn compare_bounds_curve(grid: usize) -> Result<BoundsCurve> {
    if grid < 2 {
        return Err(Error::Contract(format!(
            "curve grid needs >= 2 points, got {grid}"
        )));
    }
    let family = ghz_family()?;
    let pipeline =
        |x: f64| -> Result<f64> { Ok(proposition_lower_bound(&family.member(x)?)?.lc_n) };
    let rows: Vec<CurveRow> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / (grid - 1) as f64;
            Ok(CurveRow {
                x,
                zhao: zhao_ghz_closed_form(x),
                gao: gao_ghz_closed_form(x),
                pipeline: pipeline(x)?,
            })
        })
        .collect::<Result<_>>()?;
    let zhao_gao_crossover = crossover(
        |x| Ok(zhao_ghz_closed_form(x)),
        |x| Ok(gao_ghz_closed_form(x)),
        0.0,
        1.0,
        grid,
        1e-10,
    )?;
    let pipeline_gao_crossover = crossover(
        pipeline,
        |x| Ok(gao_ghz_closed_form(x)),
        0.0,
        1.0,
        grid,
        1e-8,
    )?;
    Ok(BoundsCurve {
        rows,
        zhao_gao_crossover,
        pipeline_gao_crossover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zhao_values() {
        assert!((zhao_ghz_closed_form(0.0) - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(zhao_ghz_closed_form(1.0 / 3.0), 0.0);
        assert_eq!(zhao_ghz_closed_form(0.9), 0.0);
        let root = bisect(|x| Ok(zhao_ghz_closed_form(x) > 1.0), 0.0, 0.2, 1e-13).unwrap();
        // Closed form: x = (√1.5 − 1) / (3(√1.5 + 1)).
        let exact = (1.5f64.sqrt() - 1.0) / (3.0 * (1.5f64.sqrt() + 1.0));
        assert!((root - exact).abs() < 1e-12);
        assert!((root - 0.033674).abs() < 1e-5);
    }

    #[test]
    fn gao_values() {
        assert!((gao_ghz_closed_form(0.0) - 0.6035534).abs() < 1e-7);
        assert_eq!(gao_ghz_closed_form(1.0), 0.0);
        let raw_at_one = -0.5 + 1.0 / (4.0 * 2f64.sqrt());
        assert!(raw_at_one < 0.0);
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let v = gao_ghz_closed_form(i as f64 / 1000.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn closed_form_crossover() {
        let x = crossover(
            |x| Ok(zhao_ghz_closed_form(x)),
            |x| Ok(gao_ghz_closed_form(x)),
            0.0,
            1.0,
            200,
            1e-12,
        )
        .unwrap()
        .unwrap();
        assert!((zhao_ghz_closed_form(x) - gao_ghz_closed_form(x)).abs() < 1e-10);
        assert!((x - 0.1596).abs() < 5e-4, "{x}");
    }

    #[test]
    fn curve_table() {
        let curve = compare_bounds_curve(21).unwrap();
        assert_eq!(curve.rows.len(), 21);
        let first = curve.rows[0];
        assert!(first.zhao > first.gao);
        assert!((first.pipeline - 1.5f64.sqrt()).abs() < 1e-12);
        assert!((first.pipeline - first.zhao).abs() < 1e-12);
        assert!(curve.zhao_gao_crossover.is_some());
        // The pipeline never falls below the gao form while either is nonzero.
        assert!(curve.pipeline_gao_crossover.is_none());
        assert!(curve.rows.iter().all(|r| r.pipeline + 1e-12 >= r.gao));
    }
}
