//! Two-layer ReLU networks with a skip connection,
//! `f(x) = c0 + c1 x + sum_k v_k ReLU(w_k x - b_k)`, and their conversion to
//! and from canonical CPWL form.

use alloc::vec::Vec;

use crate::cpwl::CpwlFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReluNetParams {
    /// Outer weights.
    pub v: Vec<f64>,
    /// Inner weights.
    pub w: Vec<f64>,
    /// Inner biases.
    pub b: Vec<f64>,
    /// Output bias.
    pub c0: f64,
    /// Skip-connection weight.
    pub c1: f64,
}

impl ReluNetParams {
    pub fn new(v: Vec<f64>, w: Vec<f64>, b: Vec<f64>, c0: f64, c1: f64) -> Result<Self> {
        for len in [w.len(), b.len()] {
            if len != v.len() {
                return Err(Error::LengthMismatch {
                    expected: v.len(),
                    found: len,
                });
            }
        }
        if !c0.is_finite()
            || !c1.is_finite()
            || v.iter().chain(&w).chain(&b).any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { v, w, b, c0, c1 })
    }

    /// Number of neurons `K`.
    pub fn width(&self) -> usize {
        self.v.len()
    }

    /// Direct evaluation of the network.
    pub fn eval(&self, x: f64) -> f64 {
        self.v
            .iter()
            .zip(&self.w)
            .zip(&self.b)
            .fold(self.c0 + self.c1 * x, |acc, ((&v, &w), &b)| {
                acc + v * (w * x - b).max(0.0)
            })
    }

    /// Weight decay `R = sum_k (v_k^2 + w_k^2) / 2`.
    pub fn weight_decay(&self) -> f64 {
        self.v
            .iter()
            .zip(&self.w)
            .map(|(v, w)| 0.5 * (v * v + w * w))
            .sum()
    }

    /// Folds neurons with zero inner weight (constant `v ReLU(-b)`) into `c0`.
    pub fn normalized(&self) -> Self {
        let mut out = Self {
            v: Vec::new(),
            w: Vec::new(),
            b: Vec::new(),
            c0: self.c0,
            c1: self.c1,
        };
        for ((&v, &w), &b) in self.v.iter().zip(&self.w).zip(&self.b) {
            if w == 0.0 {
                out.c0 += v * (-b).max(0.0);
            } else {
                out.v.push(v);
                out.w.push(w);
                out.b.push(b);
            }
        }
        out
    }
}

/// Balanced network realizing `f`: `v_k = sign(a_k) sqrt|a_k|` (that is,
/// `a_k / sqrt|a_k|`), `w_k = sqrt|a_k|`, `b_k = sqrt|a_k| tau_k`, so
/// `|v_k| = |w_k|` holds bit for bit. Its weight decay equals `tv2(f)`.
pub fn cpwl_to_relu_network(f: &CpwlFunction) -> ReluNetParams {
    let k = f.num_knots();
    let mut v = Vec::with_capacity(k);
    let mut w = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for (&tau, &a) in f.knots().iter().zip(f.coeffs()) {
        let root = libm::sqrt(a.abs());
        v.push(if a < 0.0 { -root } else { root });
        w.push(root);
        b.push(root * tau);
    }
    ReluNetParams {
        v,
        w,
        b,
        c0: f.c0(),
        c1: f.c1(),
    }
}

/// Canonical form of the function realized by `p`.
///
/// Uses `ReLU(w x - b) = |w| ReLU(sign(w) x - b / |w|)`. A neuron with `w < 0`
/// is active to the left of its knot `b / w`; it is rewritten with
/// `ReLU(-u) = ReLU(u) - u`, moving an affine part into `(c0, c1)`.
pub fn relu_network_to_cpwl(p: &ReluNetParams) -> Result<CpwlFunction> {
    let mut c0 = p.c0;
    let mut c1 = p.c1;
    let mut knots = Vec::with_capacity(p.width());
    let mut coeffs = Vec::with_capacity(p.width());
    for (k, ((&v, &w), &b)) in p.v.iter().zip(&p.w).zip(&p.b).enumerate() {
        if w == 0.0 {
            return Err(Error::ZeroInnerWeight { neuron: k });
        }
        let tau = b / w;
        let a = v * w.abs();
        if w < 0.0 {
            // a ReLU(tau - x) = a ReLU(x - tau) - a (x - tau)
            c1 -= a;
            c0 += a * tau;
        }
        knots.push(tau);
        coeffs.push(a);
    }
    CpwlFunction::new(c0, c1, knots, coeffs)
}
