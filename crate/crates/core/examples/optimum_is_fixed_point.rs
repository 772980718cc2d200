//! The optimal potentials are a fixed point of every update rule: one step
//! from the exact solution leaves it in place.

use ndarray::array;
use qrot::oracle::exact_solve;
use qrot::solvers::{
    cyclic_projection_step, fixed_point_step, gradient_step, nesterov_step, CyclicProjectionState,
    NesterovState,
};
use qrot::TransportProblem;

fn main() -> qrot::Result<()> {
    let problem = TransportProblem::from_arrays(
        array![0.7, 0.3],
        array![0.5, 0.5],
        array![[0.0, 1.0], [1.0, 0.0]],
    )?;
    let gamma = 1.0;
    let (plan, star) = exact_solve(&problem, gamma)?;
    println!("exact plan {:?}", plan.as_array().as_slice().unwrap());
    println!("alpha* = {}, beta* = {}", star.alpha, star.beta);

    let tau = 1.0 / 4.0;
    let cyclic = cyclic_projection_step(&CyclicProjectionState::new(star.clone()), &problem, gamma);
    let moved = [
        ("cyclic projection", cyclic.potentials.max_abs_diff(&star)),
        (
            "dual gradient",
            gradient_step(&star, &problem, gamma, tau).max_abs_diff(&star),
        ),
        (
            "fixed point",
            fixed_point_step(&star, &problem, gamma).max_abs_diff(&star),
        ),
        (
            "nesterov",
            nesterov_step(&NesterovState::new(star.clone()), &problem, gamma, tau)
                .current
                .max_abs_diff(&star),
        ),
    ];
    for (name, d) in moved {
        println!("{name:<18} moves the potentials by {d:.2e}");
    }
    Ok(())
}
