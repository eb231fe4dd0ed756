use serde::Serialize;

use super::trace::Trace;
use crate::model::MM_PER_UNIT;

/// `a·x + b·y + c = 0` with `a² + b² = 1`, sign fixed so that `a > 0`, or
/// `a = 0` and `b > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LineFit {
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        (self.a * p[0] + self.b * p[1] + self.c).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StraightnessStats {
    pub line: LineFit,
    pub samples: usize,
    /// Units.
    pub max_deviation: f64,
    /// Units.
    pub rms_deviation: f64,
    /// Extent of the points along the line, units.
    pub span: f64,
}

impl StraightnessStats {
    pub fn max_deviation_mm(&self) -> f64 {
        self.max_deviation * MM_PER_UNIT
    }

    pub fn rms_deviation_mm(&self) -> f64 {
        self.rms_deviation * MM_PER_UNIT
    }

    pub fn span_mm(&self) -> f64 {
        self.span * MM_PER_UNIT
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("window holds {0} samples, need at least 2")]
    TooFewSamples(usize),
    #[error("all windowed points coincide")]
    DegenerateWindow,
}

/// Total-least-squares line through the pen positions with `θ` in the window.
pub fn straightness_stats(
    trace: &Trace,
    window: (f64, f64),
) -> Result<StraightnessStats, StatsError> {
    let pts: Vec<[f64; 2]> = trace
        .window(window.0, window.1)
        .iter()
        .map(|s| s.point)
        .collect();
    fit_points(&pts)
}

pub fn fit_points(pts: &[[f64; 2]]) -> Result<StraightnessStats, StatsError> {
    if pts.len() < 2 {
        return Err(StatsError::TooFewSamples(pts.len()));
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (dx, dy) = (p[0] - cx, p[1] - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let scale = pts
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0, f64::max);
    if sxx + syy <= (1e-14 * scale).powi(2) * n {
        return Err(StatsError::DegenerateWindow);
    }
    // principal direction of the scatter matrix
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (ux, uy) = (angle.cos(), angle.sin());
    let (mut a, mut b) = (-uy, ux);
    if a < 0.0 || (a == 0.0 && b < 0.0) {
        a = -a;
        b = -b;
    }
    let line = LineFit {
        a,
        b,
        c: -(a * cx + b * cy),
    };
    let mut max: f64 = 0.0;
    let mut sq = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        let d = line.distance(*p);
        max = max.max(d);
        sq += d * d;
        let along = (p[0] - cx) * ux + (p[1] - cy) * uy;
        lo = lo.min(along);
        hi = hi.max(along);
    }
    Ok(StraightnessStats {
        line,
        samples: pts.len(),
        max_deviation: max,
        rms_deviation: (sq / n).sqrt(),
        span: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_points_fit_exactly() {
        let s = fit_points(&[[0.0, 1.0], [2.0, 3.0]]).unwrap();
        assert!(s.max_deviation < 1e-12);
        assert_relative_eq!(s.span, 8f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s.line.a, -s.line.b, epsilon = 1e-12);
    }

    #[test]
    fn vertical_line_normalized() {
        let s = fit_points(&[[-1.5, 0.0], [-1.5, 1.0], [-1.5, 4.0]]).unwrap();
        assert_relative_eq!(s.line.a, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.line.c, 1.5, epsilon = 1e-12);
        assert!(s.max_deviation < 1e-15);
    }

    #[test]
    fn deviation_of_a_bump() {
        let s = fit_points(&[[0.0, 0.0], [1.0, 0.3], [2.0, 0.0]]).unwrap();
        // TLS line is y = 0.1, farthest point 0.2 away
        assert_relative_eq!(s.max_deviation, 0.2, epsilon = 1e-12);
        assert_relative_eq!(s.max_deviation_mm(), 1.6, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_and_short_windows() {
        assert_eq!(fit_points(&[[1.0, 1.0]]), Err(StatsError::TooFewSamples(1)));
        assert_eq!(
            fit_points(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]),
            Err(StatsError::DegenerateWindow)
        );
    }
}
