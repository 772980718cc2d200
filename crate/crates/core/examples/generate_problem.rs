//! Builds a custom problem file (absolute cost, skewed target) and prints it.

use qrot::io::{GridSpec, ProblemFile};
use qrot::problems::{CostKind, MixtureComponent, MixtureSpec};

fn main() -> qrot::Result<()> {
    let mut file = ProblemFile::benchmark(80, CostKind::AbsoluteDistance, 50.0);
    file.grid2 = GridSpec {
        n: 60,
        a: 0.0,
        b: 1.0,
    };
    file.marginal2 = MixtureSpec::new(vec![
        MixtureComponent {
            weight: 0.8,
            mean: 0.2,
            std: 0.07,
        },
        MixtureComponent {
            weight: 0.2,
            mean: 0.9,
            std: 0.03,
        },
    ])?;
    let problem = file.to_problem()?;
    println!("# {}x{} problem", problem.dims().0, problem.dims().1);
    print!("{}", file.to_toml());
    Ok(())
}
