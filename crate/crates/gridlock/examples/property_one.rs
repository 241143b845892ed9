//! Proximity monotonicity under unilateral translate deviations.
//!
//! Two cars share a straight road. Sliding one of them cell by cell
//! toward the other weakly raises every player's congestion cost; the
//! check also demonstrates the not-applicable outcomes for deviations
//! that move away or leave the lattice.
//!
//! ```bash
//! cargo run --example property_one
//! ```

use gridlock::rational::ratio;
use gridlock::{
    check_property1, congestion_cost, load_map, occupancy, Cell, GameInstance, GridSpec,
    LevelCosts, PersonalCostSpec, Point, Profile, Property1Outcome, Trajectory,
};

fn main() {
    let grid = GridSpec::new(1.0, 16, 1, 1, vec![1.2, 3.4]).unwrap();
    let levels = LevelCosts::monomials(&[ratio(1, 1), ratio(1, 4)], 2).unwrap();
    let mut game = GameInstance::new(grid.clone(), levels.clone()).unwrap();
    let left = Trajectory::from_cells(&[Cell::new(2, 0)], &grid).unwrap();
    let right = Trajectory::from_cells(&[Cell::new(11, 0)], &grid).unwrap();
    game.add_player(
        vec![left.clone()],
        Cell::new(2, 0),
        PersonalCostSpec::zero(),
    )
    .unwrap();
    game.add_player(
        vec![right.clone()],
        Cell::new(11, 0),
        PersonalCostSpec::zero(),
    )
    .unwrap();
    let profile = Profile::new(vec![0, 0]);
    let right_footprint = occupancy(&right, &grid).unwrap();

    println!("player 0 at x=2, player 1 at x=11; sliding player 0 rightward:");
    for shift in 0..=6 {
        let deviation = left.translated(shift, 0, grid.cell_size());
        let outcome = check_property1(&game, &profile, 0, &deviation).unwrap();
        let moved = occupancy(&deviation, &grid).unwrap();
        let loads = load_map(&[&moved, &right_footprint]).unwrap();
        let cost_mover = congestion_cost(&moved, &loads, &levels).unwrap();
        let cost_other = congestion_cost(&right_footprint, &loads, &levels).unwrap();
        println!(
            "  shift +{shift}: outcome {:?}, cg costs ({}, {})",
            outcome,
            gridlock::rational::to_f64(&cost_mover),
            gridlock::rational::to_f64(&cost_other),
        );
        assert_eq!(outcome, Property1Outcome::Holds);
    }

    println!("\ndeviations that fail the preconditions:");
    let away = left.translated(-1, 0, grid.cell_size());
    println!(
        "  moving away:  {:?}",
        check_property1(&game, &profile, 0, &away).unwrap()
    );
    let off_lattice = Trajectory::new(vec![Point::new(2.4, 0.0)]).unwrap();
    println!(
        "  off-lattice:  {:?}",
        check_property1(&game, &profile, 0, &off_lattice).unwrap()
    );
}
