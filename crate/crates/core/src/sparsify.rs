//! Interpolation of a fixed sample vector `z`: closed-form optimal Lipschitz
//! constant and second-order total variation, the envelope of all optimal
//! Lipschitz interpolants, and the sparsest CPWL interpolant.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::cpwl::{chord_slopes, CpwlFunction, DataSet};
use crate::error::{Error, Result};
use crate::tol;

/// Points `(x_m, z_m)` to be interpolated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationInstance(DataSet);

impl InterpolationInstance {
    pub fn new(xs: Vec<f64>, zs: Vec<f64>) -> Result<Self> {
        DataSet::new(xs, zs).map(Self)
    }

    pub fn zs(&self) -> &[f64] {
        self.0.ys()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.0.xs().iter().copied().zip(self.0.ys().iter().copied())
    }
}

impl From<DataSet> for InterpolationInstance {
    fn from(d: DataSet) -> Self {
        Self(d)
    }
}

impl Deref for InterpolationInstance {
    type Target = DataSet;

    fn deref(&self) -> &DataSet {
        &self.0
    }
}

/// Admissible ordinates `[lo, hi]` at abscissa `x` over all optimal Lipschitz
/// interpolants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeBand {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

impl EnvelopeBand {
    pub fn contains(&self, y: f64, slack: f64) -> bool {
        self.lo - slack <= y && y <= self.hi + slack
    }
}

/// Largest absolute chord slope; zero for a single point.
pub fn lmin(inst: &InterpolationInstance) -> f64 {
    chord_slopes(inst.xs(), inst.zs())
        .into_iter()
        .fold(0.0_f64, |m, s| m.max(s.abs()))
}

/// Sum of absolute changes between consecutive chord slopes; zero for `M <= 2`.
pub fn tvmin(inst: &InterpolationInstance) -> f64 {
    chord_slopes(inst.xs(), inst.zs())
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum()
}

/// Intersection of the slope-`L_min` cones anchored at the data points that
/// bracket `x` (a single cone outside `[x_1, x_M]`).
pub fn envelope_band(inst: &InterpolationInstance, x: f64) -> Result<EnvelopeBand> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let (xs, zs) = (inst.xs(), inst.zs());
    let l = lmin(inst);
    let n = xs.len();
    let band = |lo: f64, hi: f64| Ok(EnvelopeBand { x, lo, hi });
    if x <= xs[0] {
        let r = l * (xs[0] - x);
        return band(zs[0] - r, zs[0] + r);
    }
    if x >= xs[n - 1] {
        let r = l * (x - xs[n - 1]);
        return band(zs[n - 1] - r, zs[n - 1] + r);
    }
    // first index with xs[m] >= x; 1 <= m <= n-1
    let m = xs.partition_point(|&t| t < x);
    if xs[m] == x {
        return band(zs[m], zs[m]);
    }
    let (dl, dr) = (x - xs[m - 1], xs[m] - x);
    let lo = (zs[m - 1] - l * dl).max(zs[m] - l * dr);
    let hi = (zs[m - 1] + l * dl).min(zs[m] + l * dr);
    // the cones always intersect since |z_m - z_{m-1}| <= l (x_m - x_{m-1});
    // rounding can invert a pinched band by an ulp
    if lo > hi {
        let mid = 0.5 * (lo + hi);
        return band(mid, mid);
    }
    band(lo, hi)
}

/// Sign of each interior slope change `a_m = s_m - s_{m-1}`, `m = 1..M-2`,
/// with near-collinear triples mapped to zero. Slope differences within the
/// rounding error of the two chord slopes count as collinear.
fn interior_signs(xs: &[f64], zs: &[f64], slopes: &[f64]) -> Vec<i8> {
    let noise: Vec<f64> = (0..slopes.len())
        .map(|j| tol::slope_noise(xs[j], xs[j + 1], zs[j], zs[j + 1], slopes[j]))
        .collect();
    slopes
        .windows(2)
        .zip(noise.windows(2))
        .map(|(w, e)| {
            if tol::is_collinear(w[0], w[1], e[0] + e[1]) {
                0
            } else if w[1] > w[0] {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// A line through data points `from` and `to` (`from < to`).
#[derive(Debug, Clone, Copy)]
struct Line {
    from: usize,
    to: usize,
}

/// A CPWL interpolant of the instance with the fewest possible knots.
///
/// The interior slope changes of the canonical interpolant are split into
/// maximal runs of one strict sign. Zeros (collinear triples) separate runs
/// without costing a knot, and two runs of opposite sign share the chord
/// between them. Inside a run over points `P_s..P_e` the lines through
/// `(P_s P_{s+1}), (P_{s+2} P_{s+3}), ...` are used, closed by the line
/// through the last two points; by strict convexity consecutive lines meet
/// between the paired points, giving `ceil(r / 2)` knots for `r` slope
/// changes.
pub fn sparsest_interpolant(inst: &InterpolationInstance) -> Result<CpwlFunction> {
    let (xs, zs) = (inst.xs(), inst.zs());
    let n = xs.len();
    if n == 1 {
        return Ok(CpwlFunction::affine(zs[0], 0.0));
    }
    let slopes = chord_slopes(xs, zs);
    let signs = interior_signs(xs, zs, &slopes);

    let mut lines: Vec<Line> = Vec::new();
    let push_chord = |lines: &mut Vec<Line>, j: usize| match lines.last_mut() {
        // chord j already covered by the previous line (shared chord)
        Some(prev) if j < prev.to => {}
        // only collinear points in between: stretch the previous line
        Some(prev) if j >= prev.to => prev.to = j + 1,
        Some(_) => unreachable!("chords are visited left to right"),
        None => lines.push(Line { from: 0, to: j + 1 }),
    };
    let mut i = 0;
    while i < signs.len() {
        if signs[i] == 0 {
            i += 1;
            continue;
        }
        let mut k = i;
        while k + 1 < signs.len() && signs[k + 1] == signs[i] {
            k += 1;
        }
        // run of slope changes at points i+1..=k+1, i.e. chords i..=k+1
        let (first, last) = (i, k + 1);
        push_chord(&mut lines, first);
        let mut j = first + 2;
        while j < last {
            lines.push(Line { from: j, to: j + 1 });
            j += 2;
        }
        if lines.last().map(|l| l.from) != Some(last) {
            lines.push(Line {
                from: last,
                to: last + 1,
            });
        }
        i = k + 1;
    }
    match lines.last_mut() {
        None => lines.push(Line { from: 0, to: n - 1 }),
        Some(l) => l.to = n - 1,
    }

    let slope = |l: &Line| (zs[l.to] - zs[l.from]) / (xs[l.to] - xs[l.from]);
    let first = lines[0];
    let c1 = slope(&first);
    let c0 = zs[first.from] - c1 * xs[first.from];
    let mut knots = Vec::with_capacity(lines.len() - 1);
    let mut coeffs = Vec::with_capacity(lines.len() - 1);
    for pair in lines.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (sa, sb) = (slope(&a), slope(&b));
        let t = if a.to == b.from {
            xs[a.to]
        } else {
            // line a through P_{a.to}, line b through P_{b.from}
            (zs[b.from] - zs[a.to] + sa * xs[a.to] - sb * xs[b.from]) / (sa - sb)
        };
        knots.push(t);
        coeffs.push(sb - sa);
    }
    CpwlFunction::new(c0, c1, knots, coeffs)
}

/// Largest instance accepted by [`brute_force_min_knots`].
pub const ORACLE_MAX_POINTS: usize = 8;

/// Relation of a slope to a chord slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    On,
    Above,
}

const SIDES: [Side; 3] = [Side::Below, Side::On, Side::Above];

/// Minimal knots inside the open gap `(x_j, x_{j+1})` for a function leaving
/// `P_j` with a slope on side `out` of the chord and arriving at `P_{j+1}` with
/// a slope on side `arrive`.
fn gap_cost(out: Side, arrive: Side) -> usize {
    use Side::*;
    match (out, arrive) {
        (On, On) => 0,
        // chord slope strictly between the two: one crossing knot
        (Below, Above) | (Above, Below) => 1,
        _ => 2,
    }
}

/// Whether one slope can lie on side `left` of chord `j - 1` and on side
/// `right` of chord `j`, given the sign of `s_j - s_{j-1}`.
fn compatible(left: Side, right: Side, sign: i8) -> bool {
    use Side::*;
    match sign {
        0 => left == right,
        1 => matches!(
            (left, right),
            (Below, Below) | (On, Below) | (Above, Below) | (Above, On) | (Above, Above)
        ),
        _ => matches!(
            (left, right),
            (Above, Above) | (On, Above) | (Below, Above) | (Below, On) | (Below, Below)
        ),
    }
}

/// Smallest number of knots of any CPWL interpolant, by exhaustive search.
///
/// Any interpolant is described, up to knot count, by the side of each chord
/// on which its one-sided slopes at the data points fall: an open gap costs 0,
/// 1 or 2 knots depending on the two sides (more knots never help), and a data
/// point costs one knot when its left and right slopes must differ. The search
/// enumerates every side assignment (dynamic programming over the gaps) and
/// returns the first budget `k <= max_knots` that admits an interpolant.
pub fn brute_force_min_knots(inst: &InterpolationInstance, max_knots: usize) -> Result<usize> {
    let n = inst.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::InstanceTooLarge {
            points: n,
            limit: ORACLE_MAX_POINTS,
        });
    }
    let best = min_knots_by_sides(inst);
    (0..=max_knots)
        .find(|&k| best <= k)
        .ok_or(Error::KnotBudgetExceeded { max_knots })
}

fn min_knots_by_sides(inst: &InterpolationInstance) -> usize {
    let n = inst.len();
    if n <= 2 {
        return 0;
    }
    let signs = interior_signs(inst.xs(), inst.zs(), &chord_slopes(inst.xs(), inst.zs()));
    const INF: usize = usize::MAX / 4;
    // cost[s]: fewest knots so far with the slope leaving P_j on side s of chord j
    let mut cost = [0usize; 3];
    for j in 0..n - 1 {
        // arriving at P_{j+1} on side `arrive` of chord j
        let mut arrive_cost = [INF; 3];
        for (o, &c) in SIDES.iter().zip(&cost) {
            for (a, slot) in SIDES.iter().zip(arrive_cost.iter_mut()) {
                *slot = (*slot).min(c + gap_cost(*o, *a));
            }
        }
        if j + 1 == n - 1 {
            // slope after the last point is free
            return arrive_cost.into_iter().min().unwrap_or(0);
        }
        let sign = signs[j];
        let mut next = [INF; 3];
        for (r, slot) in SIDES.iter().zip(next.iter_mut()) {
            for (l, &c) in SIDES.iter().zip(&arrive_cost) {
                let knot = usize::from(!compatible(*l, *r, sign));
                *slot = (*slot).min(c + knot);
            }
        }
        cost = next;
    }
    unreachable!("loop returns at the last gap")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(xs: &[f64], zs: &[f64]) -> InterpolationInstance {
        InterpolationInstance::new(xs.to_vec(), zs.to_vec()).unwrap()
    }

    fn step() -> InterpolationInstance {
        inst(&[0.0, 1.0, 2.0, 3.0], &[0.0, 0.0, 2.0, 2.0])
    }

    #[test]
    fn lmin_examples() {
        assert_eq!(lmin(&inst(&[0.0, 1.0], &[0.0, 1.0])), 1.0);
        assert_eq!(lmin(&step()), 2.0);
        assert_eq!(lmin(&inst(&[0.0, 1.0, 5.0], &[3.0, 3.0, 3.0])), 0.0);
        assert_eq!(lmin(&inst(&[0.0], &[3.0])), 0.0);
    }

    #[test]
    fn tvmin_examples() {
        assert_eq!(tvmin(&inst(&[0.0, 1.0, 3.0], &[1.0, 2.0, 4.0])), 0.0);
        assert_eq!(tvmin(&step()), 4.0);
        assert_eq!(tvmin(&inst(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0])), 2.0);
        assert_eq!(tvmin(&inst(&[0.0, 1.0], &[0.0, 7.0])), 0.0);
    }

    #[test]
    fn envelope_examples() {
        let b = envelope_band(&step(), 1.5).unwrap();
        assert_eq!((b.lo, b.hi), (1.0, 1.0));
        let b = envelope_band(&step(), 2.0).unwrap();
        assert_eq!((b.lo, b.hi), (2.0, 2.0));
        let b = envelope_band(&step(), -1.0).unwrap();
        assert_eq!((b.lo, b.hi), (-2.0, 2.0));
        let b = envelope_band(&step(), 0.5).unwrap();
        assert_eq!((b.lo, b.hi), (-1.0, 1.0));
        assert!(envelope_band(&step(), f64::NAN).is_err());
    }

    #[test]
    fn sparsest_examples() {
        let f = sparsest_interpolant(&inst(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(f.num_knots(), 0);

        let f = sparsest_interpolant(&inst(&[0.0, 1.0, 2.0, 3.0], &[0.0, 0.0, 1.0, 3.0])).unwrap();
        assert_eq!(f.knots(), &[1.5]);
        assert_eq!((f.c0(), f.c1(), f.coeffs()), (0.0, 0.0, &[2.0][..]));

        let f = sparsest_interpolant(&inst(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(f.knots(), &[1.0]);

        let f = sparsest_interpolant(&inst(&[0.0, 1.0], &[1.0, -1.0])).unwrap();
        assert_eq!((f.num_knots(), f.c1()), (0, -2.0));
    }

    #[test]
    fn sparsest_stitches_runs() {
        // slope changes (+, 0, 0, -, -): collinear stretch then a concave run
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let zs = [0.0, 0.0, 1.0, 2.0, 3.0, 3.5, 3.6];
        let i = inst(&xs, &zs);
        let f = sparsest_interpolant(&i).unwrap();
        for (x, z) in i.points() {
            assert!((f.eval(x) - z).abs() < 1e-12, "{x}");
        }
        assert_eq!(f.num_knots(), brute_force_min_knots(&i, 5).unwrap());
        assert_eq!(f.num_knots(), 2);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            brute_force_min_knots(&inst(&[0.0, 1.0, 2.0], &[1.0, 2.0, 3.0]), 1).unwrap(),
            0
        );
        assert_eq!(
            brute_force_min_knots(&inst(&[0.0, 1.0, 2.0, 3.0], &[0.0, 0.0, 1.0, 3.0]), 2).unwrap(),
            1
        );
        let convex: Vec<f64> = (0..5).map(|i| (i * i) as f64).collect();
        assert_eq!(
            brute_force_min_knots(&inst(&[0.0, 1.0, 2.0, 3.0, 4.0], &convex), 3).unwrap(),
            2
        );
        // alternating slope changes need one knot each
        let zig = inst(&[0.0, 1.0, 2.0, 3.0, 4.0], &[0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(brute_force_min_knots(&zig, 3).unwrap(), 3);
        assert_eq!(
            brute_force_min_knots(&zig, 2),
            Err(Error::KnotBudgetExceeded { max_knots: 2 })
        );
        let big = inst(
            &[0.0; 9]
                .iter()
                .enumerate()
                .map(|(i, _)| i as f64)
                .collect::<Vec<_>>(),
            &[0.0; 9],
        );
        assert!(matches!(
            brute_force_min_knots(&big, 7),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn single_point_instance() {
        let f = sparsest_interpolant(&inst(&[2.0], &[5.0])).unwrap();
        assert_eq!((f.eval(-3.0), f.num_knots()), (5.0, 0));
        let b = envelope_band(&inst(&[2.0], &[5.0]), 10.0).unwrap();
        assert_eq!((b.lo, b.hi), (5.0, 5.0));
        assert_eq!(tvmin(&inst(&[2.0], &[5.0])), 0.0);
    }
}
