//! Numerical tolerances shared across modules.

/// Knots closer than this (absolute) are merged into one.
pub const KNOT_MERGE: f64 = 1e-12;

/// Slope-change coefficients with magnitude at most this are dropped when a
/// [`CpwlFunction`](crate::CpwlFunction) is built.
pub const COEFF_DROP: f64 = 1e-12;

/// Equality tolerance for value-level comparisons.
pub const EQ: f64 = 1e-9;

/// Slack allowed on the chord-slope constraints after the hybrid solver.
pub const FEAS: f64 = 1e-7;

/// Relative threshold under which a slope change between two chords counts as
/// zero (three collinear points). The scale is `1 + max(|s_left|, |s_right|)`.
pub const COLLINEAR_REL: f64 = 1e-10;

/// Chord slopes computed from rounded values carry an absolute error of about
/// `eps (|z_0| + |z_1| + |s| (|x_0| + |x_1|)) / (x_1 - x_0)`; this many such
/// units are allowed on top of [`COLLINEAR_REL`].
pub const SLOPE_NOISE_ULPS: f64 = 16.0;

/// Returns true if the slope change `right - left` is treated as zero.
/// `noise` is an absolute error bound on the two slopes, added to the
/// relative threshold.
#[inline]
pub fn is_collinear(left: f64, right: f64, noise: f64) -> bool {
    let scale = 1.0 + left.abs().max(right.abs());
    (right - left).abs() <= COLLINEAR_REL * scale + noise
}

/// Rounding error bound of the chord slope `s` through `(x0, z0)`, `(x1, z1)`.
#[inline]
pub fn slope_noise(x0: f64, x1: f64, z0: f64, z1: f64, s: f64) -> f64 {
    let num = z0.abs() + z1.abs() + s.abs() * (x0.abs() + x1.abs());
    SLOPE_NOISE_ULPS * f64::EPSILON * num / (x1 - x0)
}
