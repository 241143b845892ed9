//! Better-response dynamics on the merging scenario.
//!
//! Walks from a deliberately bad joint choice to an equilibrium, printing
//! the potential after each accepted deviation. The potential strictly
//! decreases at every step, which is exactly why the walk terminates.
//!
//! ```bash
//! cargo run --example merging_dynamics
//! ```

use gridlock::{build_scenario, is_nash, rosenthal_potential, Profile, ScenarioSpec};

fn main() {
    let mut spec = ScenarioSpec::merging(2).unwrap();
    spec.horizon_override = Some(5); // a compact instance keeps the trace readable
    let game = build_scenario(&spec).unwrap();
    println!(
        "merging: strategy sets {:?}, {} joint profiles",
        game.strategy_counts(),
        game.profile_count()
    );

    let mut profile = Profile::new(vec![0, 0]); // both cars crawl in place
    let mut potential = rosenthal_potential(&game, &profile).unwrap();
    println!(
        "start {profile}: potential {:.6}",
        gridlock::rational::to_f64(&potential)
    );

    let mut steps = 0;
    loop {
        let check = is_nash(&game, &profile).unwrap();
        let Some(witness) = check.witness else {
            break;
        };
        profile = profile.with_choice(witness.player, witness.to);
        let next = rosenthal_potential(&game, &profile).unwrap();
        assert!(next < potential, "potential must strictly decrease");
        println!(
            "step {steps}: player {} switches {} -> {} (cost {:.4} -> {:.4}), potential {:.6}",
            witness.player,
            witness.from,
            witness.to,
            gridlock::rational::to_f64(&witness.old_cost),
            gridlock::rational::to_f64(&witness.new_cost),
            gridlock::rational::to_f64(&next),
        );
        potential = next;
        steps += 1;
    }

    println!("reached equilibrium {profile} after {steps} improving deviations");
    let better = gridlock::better_response(&game, &Profile::new(vec![0, 0])).unwrap();
    assert_eq!(
        better, profile,
        "the library walk follows the same deterministic order"
    );
}
