//! The two-resource pedagogical game, built directly against the API.
//!
//! Each player either moves to a shared middle cell (cost = its load,
//! via J(x) = (x + x^2) / 4 plus the start-cell term) or stays put at a
//! constant total cost of 2 (goal-miss penalty included). The game has
//! exactly three pure equilibria and price of anarchy 4/3.
//!
//! ```bash
//! cargo run --example ab_game
//! ```

use gridlock::rational::ratio;
use gridlock::{
    enumerate_nash, price_of_anarchy, Cell, GameInstance, GridSpec, LevelCosts, LoadPolynomial,
    PersonalCostSpec, Trajectory,
};

fn main() {
    let grid = GridSpec::new(1.0, 3, 1, 2, vec![0.4]).unwrap();
    let levels = LevelCosts::new(vec![LoadPolynomial::new(vec![
        ratio(0, 1),
        ratio(1, 4),
        ratio(1, 4),
    ])
    .unwrap()])
    .unwrap();
    let mut game = GameInstance::new(grid.clone(), levels).unwrap();
    let personal = PersonalCostSpec::new(ratio(0, 1), ratio(0, 1), ratio(1, 1)).unwrap();

    let middle = Cell::new(1, 0);
    for start_x in [0, 2] {
        let start = Cell::new(start_x, 0);
        let strategies = vec![
            Trajectory::from_cells(&[start, start], &grid).unwrap(), // stay (private)
            Trajectory::from_cells(&[start, middle], &grid).unwrap(), // move (shared)
        ];
        game.add_player(strategies, middle, personal.clone())
            .unwrap();
    }

    println!("payoff matrix (strategy 0 = stay private, 1 = move to the shared cell):");
    for profile in game.profiles() {
        let p0 = game.player_total(&profile, 0).unwrap();
        let p1 = game.player_total(&profile, 1).unwrap();
        println!(
            "  {profile}: costs ({}, {}), social {}",
            gridlock::rational::to_string(&p0),
            gridlock::rational::to_string(&p1),
            gridlock::rational::to_string(&game.social_cost(&profile).unwrap()),
        );
    }

    let nash = enumerate_nash(&game, 100).unwrap();
    println!("\npure Nash equilibria ({}):", nash.len());
    for ne in &nash {
        println!("  {ne}");
    }

    let report = price_of_anarchy(&game, 100).unwrap();
    println!(
        "\nworst NE cost: {}",
        gridlock::rational::to_string(&report.worst_ne_cost)
    );
    println!(
        "best cost:     {}",
        gridlock::rational::to_string(&report.best_cost)
    );
    println!(
        "PoA:           {} (base bound for degree 1 costs would be 5/2)",
        gridlock::rational::to_string(report.poa.as_ref().unwrap())
    );
}
