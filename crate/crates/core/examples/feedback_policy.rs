//! The Riccati solve returns affine feedback laws, not just one trajectory.
//! Here they steer a disturbed system: the closed loop re-plans for free,
//! while replaying the nominal controls drifts away.

use clqr::generate::uniform_chain;
use clqr::lqr::solve_sequential;
use clqr::problem::objective_value;
use clqr::Vector;

fn main() -> clqr::Result<()> {
    let p = uniform_chain(11, 40, 3, 2);
    let sol = solve_sequential(&p)?;

    let kick = |i: usize| if i == 10 { Vector::from_element(3, 0.5) } else { Vector::zeros(3) };
    let mut closed = (vec![p.initial_state.clone()], Vec::new());
    let mut open = (vec![p.initial_state.clone()], Vec::new());
    for (i, stage) in p.stages.iter().enumerate() {
        let dyn_ = &stage.dynamics;
        let feedback = sol.policies[i].apply(&closed.0[i]);
        for (traj, u) in [(&mut closed, feedback), (&mut open, sol.u[i].clone())] {
            let next = &dyn_.state * &traj.0[i] + &dyn_.control * &u + &dyn_.offset + kick(i);
            traj.0.push(next);
            traj.1.push(u);
        }
    }
    println!("nominal optimum       {:.6}", sol.objective);
    println!("disturbed, feedback   {:.6}", objective_value(&p, &closed.0, &closed.1)?);
    println!("disturbed, open loop  {:.6}", objective_value(&p, &open.0, &open.1)?);
    Ok(())
}
