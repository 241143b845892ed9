//! Analytic proximity costs next to the congestion-game curve.
//!
//! The congestion formulation approximates classic distance-based
//! proximity costs. This prints the single-pair, single-step values of
//! three threshold-power costs and an inverse-distance cost over a range
//! of separations, normalized to [0, 1] alongside one congestion curve.
//!
//! ```bash
//! cargo run --example analytic_overlays
//! ```

use gridlock::{
    analytic_proximity_cost, two_car_curve, two_car_grid, two_car_weight_configs,
    AnalyticProximitySpec, LevelCosts, Point, Trajectory,
};

fn pair_cost(delta: f64, spec: &AnalyticProximitySpec) -> f64 {
    let a = Trajectory::new(vec![Point::new(0.0, 0.0)]).unwrap();
    let b = Trajectory::new(vec![Point::new(delta.max(1e-9), 0.0)]).unwrap();
    analytic_proximity_cost(&[a, b], 0, spec).unwrap()
}

fn main() {
    let forms = [
        (
            "thr a=2",
            AnalyticProximitySpec::ThresholdPower {
                safety_distance: 12.5,
                exponent: 2.0,
            },
        ),
        (
            "thr a=3",
            AnalyticProximitySpec::ThresholdPower {
                safety_distance: 12.5,
                exponent: 3.0,
            },
        ),
        (
            "thr a=4",
            AnalyticProximitySpec::ThresholdPower {
                safety_distance: 12.5,
                exponent: 4.0,
            },
        ),
        (
            "1/delta",
            AnalyticProximitySpec::InversePower { exponent: 1.0 },
        ),
    ];
    let deltas: Vec<f64> = (1..=20).map(|i| 0.75 * i as f64).collect();

    // normalize each form by its value at the smallest plotted distance
    let scales: Vec<f64> = forms
        .iter()
        .map(|(_, spec)| pair_cost(deltas[0], spec))
        .collect();

    let grid = two_car_grid(15.0).unwrap();
    let (_, weights) = &two_car_weight_configs()[1];
    let levels = LevelCosts::monomials(weights, 2).unwrap();
    let congestion = two_car_curve(&grid, &levels, 15.0, 0.75).unwrap();

    print!("{:>8} {:>10}", "delta_m", "cg-curve");
    for (label, _) in &forms {
        print!(" {:>10}", label);
    }
    println!();
    for (i, &delta) in deltas.iter().enumerate() {
        // the congestion curve sampled on the same abscissa
        let cg = congestion
            .points
            .iter()
            .find(|p| (p.abscissa - delta).abs() < 1e-9)
            .map(|p| gridlock::rational::to_f64(&p.normalized))
            .unwrap_or(f64::NAN);
        print!("{delta:>8.2} {cg:>10.5}");
        let _ = i;
        for ((_, spec), scale) in forms.iter().zip(&scales) {
            print!(" {:>10.5}", pair_cost(delta, spec) / scale);
        }
        println!();
    }

    println!();
    println!("threshold forms vanish beyond the 12.5 m safety distance;");
    println!("the congestion curve vanishes at twice its largest radius (12 m)");
}
