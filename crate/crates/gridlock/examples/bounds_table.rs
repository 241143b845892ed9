//! Price-of-anarchy bound calculator tour.
//!
//! Prints the base bounds for small polynomial degrees and shows how the
//! personal-cost ratio alpha* tightens them toward 1.
//!
//! ```bash
//! cargo run --example bounds_table
//! ```

use gridlock::{poa_bound_base, poa_bound_refined};

fn main() {
    println!("base bounds (alpha* = 0)");
    println!("{:>3} {:>12} {:>3} {:>12}", "d", "root", "k", "bound");
    for d in 1..=6 {
        let result = poa_bound_refined(d, 0.0).unwrap();
        println!(
            "{:>3} {:>12.8} {:>3} {:>12.6}",
            d, result.root, result.k, result.bound
        );
    }

    println!();
    println!("refined bounds as alpha* grows");
    print!("{:>8}", "alpha*");
    for d in 1..=4 {
        print!(" {:>10}", format!("d={d}"));
    }
    println!();
    for alpha in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0] {
        print!("{alpha:>8.2}");
        for d in 1..=4 {
            print!(" {:>10.5}", poa_bound_refined(d, alpha).unwrap().bound);
        }
        println!();
    }

    println!();
    println!("sanity: refined bound at alpha*=0 equals the base bound");
    for d in 1..=4 {
        let base = poa_bound_base(d).unwrap();
        let refined = poa_bound_refined(d, 0.0).unwrap().bound;
        println!("  d={d}: base {base:.9}, refined {refined:.9}");
    }
}
