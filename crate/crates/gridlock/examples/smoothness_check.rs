//! Numeric verification of the smoothness machinery behind the bounds.
//!
//! For a few (degree, alpha*) pairs this prints the optimal constants,
//! verifies the load-grid constraint system exactly, and tabulates the
//! inner objective g whose integer argmax ties at k and k+1.
//!
//! ```bash
//! cargo run --example smoothness_check
//! ```

use gridlock::{g_profile, poa_bound_refined, smoothness_constants, verify_smoothness};

fn main() {
    for (d, alpha) in [(1u32, 0.0f64), (2, 0.0), (2, 1.0), (3, 0.5), (4, 2.0)] {
        let constants = smoothness_constants(d, alpha).unwrap();
        let bound = poa_bound_refined(d, alpha).unwrap();
        println!("d={d}, alpha*={alpha}");
        println!(
            "  k = {}, lambda~ = {} ({:.6}), mu~ = {} ({:.6})",
            constants.k,
            gridlock::rational::to_string(&constants.lambda_tilde),
            constants.lambda_f64(),
            gridlock::rational::to_string(&constants.mu_tilde),
            constants.mu_f64(),
        );
        println!(
            "  bound (lambda~ + a)/(1 - mu~ + a) = {:.9}",
            constants.bound_value(alpha)
        );
        println!("  bound via the closed formula     = {:.9}", bound.bound);

        match verify_smoothness(d, &constants.lambda_tilde, &constants.mu_tilde, 50, 50).unwrap() {
            None => println!("  constraint grid [0,50]x[1,50], degrees <= {d}: satisfied"),
            Some(violation) => println!("  UNEXPECTED violation: {violation}"),
        }

        let profile = g_profile(d, alpha, constants.mu_f64(), constants.k + 4).unwrap();
        let values: Vec<String> = profile
            .rows
            .iter()
            .map(|(x, g)| format!("g({x})={g:.5}"))
            .collect();
        println!("  {}", values.join(", "));
        println!("  argmax at {:?} (ties at k and k+1)\n", profile.argmax);
    }

    // what breaks when the constants are wrong
    let constants = smoothness_constants(2, 0.0).unwrap();
    let weaker = &constants.mu_tilde - gridlock::rational::ratio(1, 1000);
    if let Some(violation) = verify_smoothness(2, &constants.lambda_tilde, &weaker, 50, 50).unwrap()
    {
        println!("shrinking mu~ by 1/1000 breaks the grid: {violation}");
    }
}
