//! Cost vs. crowding around an ego car.
//!
//! Four neighbors sit 3 m from the ego car; scenarios with 0..=4 of them
//! present show how the ego's congestion cost grows with crowding. The
//! load polynomial degree controls the sensitivity: with degree 1 the
//! offset-removed cost is exactly linear in the weighted co-occupancy,
//! higher degrees bend upward.
//!
//! ```bash
//! cargo run --example multi_car_curve
//! ```

use gridlock::{multi_car_curve, multi_car_grid, multi_car_offsets, multi_car_weights};

fn main() {
    let grid = multi_car_grid().unwrap();
    let tables = multi_car_curve(
        &grid,
        &multi_car_weights(),
        &multi_car_offsets(),
        &[1, 2, 3],
    )
    .unwrap();

    println!("ego congestion cost with constant offsets removed");
    print!("{:>10}", "neighbors");
    for table in &tables {
        print!(" {:>12}", table.label);
    }
    println!();
    for n in 0..tables[0].points.len() {
        print!("{:>10}", n);
        for table in &tables {
            let removed = &table.points[n].raw - &table.points[0].raw;
            print!(" {:>12.4}", gridlock::rational::to_f64(&removed));
        }
        println!();
    }

    println!();
    println!("normalized (0 at no neighbors, 1 with all four present)");
    for table in &tables {
        let row: Vec<String> = table
            .points
            .iter()
            .map(|p| format!("{:.4}", gridlock::rational::to_f64(&p.normalized)))
            .collect();
        println!("  {}: {}", table.label, row.join("  "));
    }
}
