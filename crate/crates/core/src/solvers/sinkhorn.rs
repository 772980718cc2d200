//! Entropic baseline: Sinkhorn scaling of the Gibbs kernel `K = exp(−c/γ)`.

use ndarray::{Array1, Array2, ArrayView1, Zip};

use crate::error::{Error, Result};
use crate::model::{CostMatrix, TransportPlan};

pub fn gibbs_kernel(c: &CostMatrix, gamma: f64) -> Array2<f64> {
    c.as_array().mapv(|x| (-x / gamma).exp())
}

/// `u' = μ / (K v)`, then `v' = ν / (Kᵀ u')`. The previous `u` is not read.
///
/// Fails with [`Error::SinkhornUnderflow`] (iteration 0; the driver fills in
/// the real count) when a denominator vanishes or a scaling overflows.
pub fn sinkhorn_step(
    _u: ArrayView1<f64>,
    v: ArrayView1<f64>,
    kernel: &Array2<f64>,
    mu: ArrayView1<f64>,
    nu: ArrayView1<f64>,
) -> Result<(Array1<f64>, Array1<f64>)> {
    let u_next = scale(&mu, &kernel.dot(&v))?;
    let v_next = scale(&nu, &kernel.t().dot(&u_next))?;
    Ok((u_next, v_next))
}

fn scale(target: &ArrayView1<f64>, denom: &Array1<f64>) -> Result<Array1<f64>> {
    let mut out = Array1::zeros(denom.len());
    let mut ok = true;
    Zip::from(&mut out)
        .and(target)
        .and(denom)
        .for_each(|o, &t, &d| {
            if d > 0.0 {
                *o = t / d;
                ok &= o.is_finite();
            } else {
                ok = false;
            }
        });
    if ok {
        Ok(out)
    } else {
        Err(Error::SinkhornUnderflow { iteration: 0 })
    }
}

/// `diag(u) K diag(v)`.
pub fn sinkhorn_plan(
    u: ArrayView1<f64>,
    v: ArrayView1<f64>,
    kernel: &Array2<f64>,
) -> TransportPlan {
    let mut pi = kernel.clone();
    Zip::indexed(&mut pi).for_each(|(i, j), p| *p *= u[i] * v[j]);
    TransportPlan::from_nonneg(pi)
}
