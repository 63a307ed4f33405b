//! Proximal operators and projections used by the ADMM splittings.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

fn check_scale(tau: f64, what: &'static str) -> Result<()> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidParameter(what));
    }
    Ok(())
}

/// Soft threshold `theta` such that the Euclidean projection of `v` onto the
/// l1 ball of the given radius is `sign(v) max(|v| - theta, 0)`, or `None`
/// when `v` already lies in the ball.
///
/// Sort-based exact algorithm, `O(n log n)`.
fn l1_ball_threshold(v: &[f64], radius: f64) -> Option<f64> {
    let norm: f64 = v.iter().map(|x| x.abs()).sum();
    if norm <= radius {
        return None;
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    // radius 0: everything is thresholded away
    let mut theta = mags[0];
    for (j, &m) in mags.iter().enumerate() {
        cumsum += m;
        let t = (cumsum - radius) / (j + 1) as f64;
        if m > t {
            theta = t;
        } else {
            break;
        }
    }
    Some(theta.max(0.0))
}

/// Euclidean projection onto `{u : ||u||_1 <= radius}`.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Result<Vec<f64>> {
    check_scale(radius, "l1 ball radius must be nonnegative")?;
    Ok(match l1_ball_threshold(v, radius) {
        None => v.to_vec(),
        Some(theta) => v
            .iter()
            .map(|&x| x.signum() * (x.abs() - theta).max(0.0))
            .collect(),
    })
}

/// `argmin_u 1/2 ||u - v||^2 + tau ||u||_inf`.
///
/// Moreau decomposition: `u = v - tau P(v / tau)` with `P` the projection onto
/// the unit l1 ball. Since `tau P(v / tau)` soft-thresholds `v` at some
/// `theta`, the difference is `v` clipped to `[-theta, theta]`; computing it as
/// a clip makes the saturated entries exactly equal in magnitude.
pub fn prox_linf_norm(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_scale(tau, "prox scale must be nonnegative")?;
    Ok(match l1_ball_threshold(v, tau) {
        None => vec![0.0; v.len()],
        Some(theta) => v.iter().map(|&x| x.signum() * x.abs().min(theta)).collect(),
    })
}

/// Soft thresholding, the prox of `tau ||.||_1`.
pub fn prox_l1_norm(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_scale(tau, "prox scale must be nonnegative")?;
    Ok(v.iter().map(|&x| soft_threshold(x, tau)).collect())
}

#[inline]
pub(crate) fn soft_threshold(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Componentwise clamp to `[-radius, radius]`.
pub fn project_linf_ball(v: &[f64], radius: f64) -> Result<Vec<f64>> {
    check_scale(radius, "l-inf ball radius must be nonnegative")?;
    Ok(v.iter().map(|&x| x.clamp(-radius, radius)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14)
    }

    #[test]
    fn linf_prox_examples() {
        assert_eq!(prox_linf_norm(&[0.3, -0.2], 1.0).unwrap(), vec![0.0, 0.0]);
        assert!(close(
            &prox_linf_norm(&[3.0, 0.0], 1.0).unwrap(),
            &[2.0, 0.0]
        ));
        assert!(close(
            &prox_linf_norm(&[2.0, 2.0], 2.0).unwrap(),
            &[1.0, 1.0]
        ));
        assert!(prox_linf_norm(&[1.0], -1.0).is_err());
        assert_eq!(prox_linf_norm(&[9.0, -2.0], 0.0).unwrap(), vec![9.0, -2.0]);
        assert_eq!(project_l1_ball(&[9.0, -2.0], 0.0).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn l1_prox_examples() {
        assert_eq!(prox_l1_norm(&[2.0, -0.5], 1.0).unwrap(), vec![1.0, 0.0]);
        assert_eq!(prox_l1_norm(&[0.0, 0.0], 1.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(prox_l1_norm(&[-3.0], 1.0).unwrap(), vec![-2.0]);
    }

    #[test]
    fn linf_ball_examples() {
        assert_eq!(
            project_linf_ball(&[0.5, 2.0, -3.0], 1.0).unwrap(),
            vec![0.5, 1.0, -1.0]
        );
        assert_eq!(
            project_linf_ball(&[0.1, -0.2], 1.0).unwrap(),
            vec![0.1, -0.2]
        );
        assert_eq!(
            project_linf_ball(&[1e9, -7.0], 1e300).unwrap(),
            vec![1e9, -7.0]
        );
    }

    #[test]
    fn l1_projection_lands_on_sphere() {
        let p = project_l1_ball(&[3.0, -1.0, 0.5], 2.0).unwrap();
        let n: f64 = p.iter().map(|x| x.abs()).sum();
        assert!((n - 2.0).abs() < 1e-14);
        assert!(close(&p, &[2.0, 0.0, 0.0]));
        assert_eq!(project_l1_ball(&[0.5, 0.5], 2.0).unwrap(), vec![0.5, 0.5]);
    }
}
