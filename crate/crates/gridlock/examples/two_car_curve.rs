//! Cost vs. distance for a pair of cars.
//!
//! Two cars sit on a 0.5 m grid with proximity radii 1.5 / 3.5 / 6 m.
//! Their congestion cost falls as the separation grows, and the relative
//! weights of the proximity levels control how steeply. Weighting the
//! inner levels more (the second and third configurations) makes the
//! normalized cost decay faster.
//!
//! ```bash
//! cargo run --example two_car_curve
//! ```

use gridlock::{two_car_curve, two_car_grid, two_car_weight_configs, LevelCosts};

fn main() {
    let grid = two_car_grid(15.0).unwrap();
    let configs = two_car_weight_configs();
    let curves: Vec<_> = configs
        .iter()
        .map(|(_, weights)| {
            let levels = LevelCosts::monomials(weights, 2).unwrap();
            two_car_curve(&grid, &levels, 15.0, 0.75).unwrap()
        })
        .collect();

    print!("{:>8}", "delta_m");
    for (label, _) in &configs {
        print!(" {:>14}", label);
    }
    println!();
    for i in 0..curves[0].points.len() {
        print!("{:>8.2}", curves[0].points[i].abscissa);
        for curve in &curves {
            print!(
                " {:>14.6}",
                gridlock::rational::to_f64(&curve.points[i].normalized)
            );
        }
        println!();
    }

    println!();
    println!("normalization: (cost - isolated baseline) / (cost at contact - baseline)");
    println!("the curve hits zero once the largest balls stop sharing cells (12 m)");
}
