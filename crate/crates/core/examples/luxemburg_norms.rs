//! Luxemburg norms of grid functions and the marginal contraction inequality.

use ndarray::{Array1, Array2};
use qrot::model::Grid1D;
use qrot::regfun::{
    luxemburg_norm, marginal_contraction_check, GridFunction, ProductGridFunction, YoungFunction,
};

fn main() -> qrot::Result<()> {
    let grid = Grid1D::new(64, 0.0, 1.0)?;
    let one = GridFunction::new(grid.clone(), Array1::ones(64))?;
    let phis = [
        ("t^2/2", YoungFunction::Quadratic),
        ("t log t", YoungFunction::Entropy),
        ("t^3/3", YoungFunction::ppower(3.0)?),
    ];
    println!("norm of f = 1 on [0, 1]");
    for (name, phi) in phis {
        println!("  {name:<8} {:.10}", luxemburg_norm(&one, phi)?);
    }
    println!(
        "  closed forms: 1/sqrt(2) = {:.10}, 3^(-1/3) = {:.10}",
        0.5f64.sqrt(),
        3f64.powf(-1.0 / 3.0)
    );

    // a plan-like density on [0, 2] x [0, 1]
    let rows = Grid1D::new(40, 0.0, 2.0)?;
    let cols = Grid1D::new(30, 0.0, 1.0)?;
    let values = Array2::from_shape_fn((40, 30), |(i, j)| {
        let (x, y) = (rows.points()[i], cols.points()[j]);
        (-(x - 1.0).powi(2) * 4.0 - (y - 0.4).powi(2) * 10.0).exp()
    });
    let pi = ProductGridFunction::new(rows, cols, values)?;
    for (name, phi) in phis {
        println!(
            "contraction ({name}): lux(pi) = {:.6}, first marginal = {:.6}, holds = {}",
            luxemburg_norm(&pi, phi)?,
            luxemburg_norm(&pi.first_marginal(), phi)?,
            marginal_contraction_check(&pi, phi)?
        );
    }
    Ok(())
}
