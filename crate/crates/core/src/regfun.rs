//! Young's-function regularizers and Luxemburg norms of piecewise-constant
//! grid functions.
//!
//! The dual of the regularized transport problem integrates the convex
//! conjugate of `Φ̃`, which is `Φ` on `[0, ∞)` and `+∞` on the negatives.
//! [`YoungFunction::conjugate_nonneg`] evaluates that conjugate in closed form.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::model::Grid1D;

/// A regularizer `Φ` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YoungFunction {
    /// `Φ(t) = t² / 2`
    Quadratic,
    /// `Φ(t) = t log t`, with `Φ(0) = 0`
    Entropy,
    /// `Φ(t) = t^p / p` for `p > 1`
    PPower(f64),
}

impl YoungFunction {
    pub fn ppower(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::invalid("p", format!("need p > 1, got {p}")));
        }
        Ok(YoungFunction::PPower(p))
    }

    /// Hölder conjugate exponent `q` with `1/p + 1/q = 1`.
    fn dual_exponent(p: f64) -> f64 {
        p / (p - 1.0)
    }

    /// `Φ(t)` for `t >= 0`.
    pub fn value(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0 || t.is_nan());
        match *self {
            YoungFunction::Quadratic => 0.5 * t * t,
            YoungFunction::Entropy => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            YoungFunction::PPower(p) => t.powf(p) / p,
        }
    }

    /// `Φ'(t)` for `t >= 0` (`-∞` at zero for the entropy).
    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Quadratic => t,
            YoungFunction::Entropy => t.ln() + 1.0,
            YoungFunction::PPower(p) => t.powf(p - 1.0),
        }
    }

    /// `Φ̃*(s) = sup_{t >= 0} (s t - Φ(t))`.
    pub fn conjugate_nonneg(&self, s: f64) -> f64 {
        match *self {
            YoungFunction::Quadratic => {
                let sp = s.max(0.0);
                0.5 * sp * sp
            }
            YoungFunction::Entropy => (s - 1.0).exp(),
            YoungFunction::PPower(p) => {
                let q = Self::dual_exponent(p);
                s.max(0.0).powf(q) / q
            }
        }
    }

    /// The maximizer `t*` of `s t - Φ(t)` over `t >= 0`.
    pub fn conjugate_argmax(&self, s: f64) -> f64 {
        match *self {
            YoungFunction::Quadratic => s.max(0.0),
            YoungFunction::Entropy => (s - 1.0).exp(),
            YoungFunction::PPower(p) => s.max(0.0).powf(1.0 / (p - 1.0)),
        }
    }
}

/// Free-function form of [`YoungFunction::conjugate_nonneg`].
pub fn eval_conjugate_nonneg(phi: YoungFunction, s: f64) -> f64 {
    phi.conjugate_nonneg(s)
}

/// Piecewise-constant data on cells, integrated against a uniform cell volume.
pub trait CellFunction {
    fn cell_values(&self) -> &[f64];
    fn cell_volume(&self) -> f64;
}

/// Piecewise-constant function on a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                what: "grid function values",
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            values: values.to_vec(),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| k * v).collect(),
        }
    }
}

impl CellFunction for GridFunction {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }

    fn cell_volume(&self) -> f64 {
        self.grid.h()
    }
}

/// Piecewise-constant function on a product grid `Ω₁ × Ω₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductGridFunction {
    rows: Grid1D,
    cols: Grid1D,
    values: Array2<f64>,
}

impl ProductGridFunction {
    pub fn new(rows: Grid1D, cols: Grid1D, values: Array2<f64>) -> Result<Self> {
        if values.nrows() != rows.len() {
            return Err(Error::DimensionMismatch {
                what: "product grid rows",
                expected: rows.len(),
                got: values.nrows(),
            });
        }
        if values.ncols() != cols.len() {
            return Err(Error::DimensionMismatch {
                what: "product grid columns",
                expected: cols.len(),
                got: values.ncols(),
            });
        }
        let values = values.as_standard_layout().into_owned();
        Ok(Self { rows, cols, values })
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Exact integral over the second coordinate: a function on `Ω₁`.
    pub fn first_marginal(&self) -> GridFunction {
        let m = self.values.sum_axis(Axis(1)) * self.cols.h();
        GridFunction::new(self.rows.clone(), m).expect("shape is consistent")
    }

    /// Exact integral over the first coordinate: a function on `Ω₂`.
    pub fn second_marginal(&self) -> GridFunction {
        let m = self.values.sum_axis(Axis(0)) * self.rows.h();
        GridFunction::new(self.cols.clone(), m).expect("shape is consistent")
    }
}

impl CellFunction for ProductGridFunction {
    fn cell_values(&self) -> &[f64] {
        self.values.as_slice().expect("standard layout")
    }

    fn cell_volume(&self) -> f64 {
        self.rows.h() * self.cols.h()
    }
}

/// Relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_RTOL: f64 = 1e-10;
const LUXEMBURG_LOWER: f64 = 1e-300;

/// `inf { λ > 0 : Σ Φ(|f| / λ) · vol <= 1 }` by bisection; `0` for `f ≡ 0`.
///
/// The modular is treated as monotone in `λ`. That holds for the quadratic
/// and power functions; for the entropy it holds whenever the cells where
/// `Φ` is negative do not dominate the integral.
pub fn luxemburg_norm<F: CellFunction + ?Sized>(f: &F, phi: YoungFunction) -> Result<f64> {
    let values = f.cell_values();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "grid function",
        });
    }
    if values.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let vol = f.cell_volume();
    let feasible = |lambda: f64| -> bool {
        let integral: f64 = values.iter().map(|v| phi.value(v.abs() / lambda)).sum();
        integral * vol <= 1.0
    };

    let mut lo = LUXEMBURG_LOWER;
    if feasible(lo) {
        return Ok(lo);
    }
    let mut hi = 1.0;
    while !feasible(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > LUXEMBURG_RTOL * hi {
        // geometric steps while the bracket spans orders of magnitude
        let mid = if hi > 4.0 * lo {
            lo.sqrt() * hi.sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Slack allowed in the marginal contraction inequality.
pub const CONTRACTION_SLACK: f64 = 1e-9;

/// Checks `lux(marginal_i) <= max(1, |Ω_{3-i}|) · lux(π)` for both marginals.
pub fn marginal_contraction_check(pi: &ProductGridFunction, phi: YoungFunction) -> Result<bool> {
    let plan_norm = luxemburg_norm(pi, phi)?;
    let first = luxemburg_norm(&pi.first_marginal(), phi)?;
    let second = luxemburg_norm(&pi.second_marginal(), phi)?;
    let ok_first = first <= pi.cols.extent().max(1.0) * plan_norm + CONTRACTION_SLACK;
    let ok_second = second <= pi.rows.extent().max(1.0) * plan_norm + CONTRACTION_SLACK;
    Ok(ok_first && ok_second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Brute-force `sup_{t >= 0} (s t - Φ(t))` on a log grid with local refinement.
    fn numeric_conjugate(phi: YoungFunction, s: f64) -> f64 {
        let objective = |t: f64| s * t - phi.value(t);
        let mut best_t = 0.0;
        let mut best = objective(0.0);
        let steps = 4000;
        for k in 0..=steps {
            let t = 10f64.powf(-12.0 + 16.0 * k as f64 / steps as f64);
            let v = objective(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        if best_t == 0.0 {
            return best;
        }
        // golden-section on the bracketing grid cell
        let ratio = 10f64.powf(16.0 / steps as f64);
        let (mut a, mut b) = (best_t / ratio, best_t * ratio);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if objective(x1) > objective(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        best.max(objective(0.5 * (a + b)))
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(eval_conjugate_nonneg(YoungFunction::Quadratic, -3.0), 0.0);
        assert_eq!(eval_conjugate_nonneg(YoungFunction::Quadratic, 2.0), 2.0);
        assert_eq!(eval_conjugate_nonneg(YoungFunction::Entropy, 1.0), 1.0);
        assert_eq!(eval_conjugate_nonneg(YoungFunction::PPower(3.0), -1.0), 0.0);
    }

    #[test]
    fn conjugate_matches_numeric_maximization() {
        let phis = [
            YoungFunction::Quadratic,
            YoungFunction::Entropy,
            YoungFunction::PPower(1.5),
            YoungFunction::PPower(3.0),
        ];
        for phi in phis {
            for &s in &[-2.0, -0.3, 0.0, 0.4, 1.0, 2.5, 4.0] {
                let closed = phi.conjugate_nonneg(s);
                let numeric = numeric_conjugate(phi, s);
                assert!(
                    (closed - numeric).abs() <= 1e-9 * (1.0 + closed.abs()),
                    "{phi:?} at s={s}: {closed} vs {numeric}"
                );
            }
        }
    }

    #[test]
    fn entropy_argmax_solves_first_order_condition() {
        for &s in &[-1.0, 0.0, 0.5, 3.0] {
            let t = YoungFunction::Entropy.conjugate_argmax(s);
            assert_relative_eq!(t.ln() + 1.0, s, epsilon = 1e-12);
        }
    }

    #[test]
    fn young_functions_vanish_at_zero() {
        for phi in [
            YoungFunction::Quadratic,
            YoungFunction::Entropy,
            YoungFunction::PPower(2.5),
        ] {
            assert_eq!(phi.value(0.0), 0.0);
        }
        assert!(YoungFunction::ppower(1.0).is_err());
        assert!(YoungFunction::ppower(f64::NAN).is_err());
    }

    fn unit_constant(n: usize) -> GridFunction {
        GridFunction::new(Grid1D::new(n, 0.0, 1.0).unwrap(), Array1::ones(n)).unwrap()
    }

    #[test]
    fn luxemburg_closed_forms() {
        let zero = GridFunction::new(Grid1D::new(5, 0.0, 1.0).unwrap(), Array1::zeros(5)).unwrap();
        assert_eq!(
            luxemburg_norm(&zero, YoungFunction::Quadratic).unwrap(),
            0.0
        );

        let one = unit_constant(10);
        let lux = luxemburg_norm(&one, YoungFunction::Quadratic).unwrap();
        assert!((lux - 0.5f64.sqrt()).abs() < 1e-8);

        for p in [1.5, 2.0, 3.0, 7.0] {
            let lux = luxemburg_norm(&one, YoungFunction::PPower(p)).unwrap();
            assert!((lux - p.powf(-1.0 / p)).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn luxemburg_rejects_non_finite() {
        let f = GridFunction::new(
            Grid1D::new(2, 0.0, 1.0).unwrap(),
            ndarray::array![1.0, f64::NAN],
        )
        .unwrap();
        assert!(luxemburg_norm(&f, YoungFunction::Quadratic).is_err());
    }

    #[test]
    fn luxemburg_handles_tiny_and_huge_scales() {
        let one = unit_constant(4);
        let base = luxemburg_norm(&one, YoungFunction::Quadratic).unwrap();
        for k in [1e-200, 1e-20, 1e20, 1e200] {
            let lux = luxemburg_norm(&one.scaled(k), YoungFunction::Quadratic).unwrap();
            assert_relative_eq!(lux, k * base, max_relative = 1e-8);
        }
    }

    #[test]
    fn contraction_examples() {
        let g = Grid1D::new(8, 0.0, 1.0).unwrap();
        let ones = ProductGridFunction::new(g.clone(), g.clone(), Array2::ones((8, 8))).unwrap();
        assert!(marginal_contraction_check(&ones, YoungFunction::Quadratic).unwrap());
        let lhs = luxemburg_norm(&ones.first_marginal(), YoungFunction::Quadratic).unwrap();
        let rhs = luxemburg_norm(&ones, YoungFunction::Quadratic).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);

        let zeros = ProductGridFunction::new(g.clone(), g, Array2::zeros((8, 8))).unwrap();
        assert!(marginal_contraction_check(&zeros, YoungFunction::Entropy).unwrap());
    }

    #[test]
    fn contraction_on_non_unit_domains() {
        let short = Grid1D::new(5, 0.0, 0.5).unwrap();
        let long = Grid1D::new(7, -1.0, 2.0).unwrap();
        let pi = Array2::from_shape_fn((5, 7), |(i, j)| 1.0 + ((i * 7 + j) % 4) as f64);
        let f = ProductGridFunction::new(short, long, pi).unwrap();
        for phi in [YoungFunction::Quadratic, YoungFunction::PPower(3.0)] {
            assert!(marginal_contraction_check(&f, phi).unwrap());
        }
    }
}
