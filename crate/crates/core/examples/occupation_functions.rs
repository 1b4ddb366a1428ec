//! θ(n) and θ'(n) against the mean occupation n per orbital of a level of
//! degeneracy z, compared with the integral representation.

use levelstat::specfun::quadrature::theta_integral_oracle;
use levelstat::stat_core::{entropy_level, theta, theta_deriv};
use levelstat::Statistics;

fn main() -> levelstat::Result<()> {
    let z = 4.0;
    for kind in [Statistics::Bose, Statistics::Fermi] {
        println!("{kind}, z = {z}");
        println!("{:>6} {:>16} {:>16} {:>16} {:>12}", "n", "theta", "oracle", "theta'", "S_j");
        let top = if kind == Statistics::Fermi { 1.0 } else { 2.0 };
        for i in 1..8 {
            let n = top * i as f64 / 8.0;
            println!(
                "{n:>6} {:>16.12} {:>16.12} {:>16.10} {:>12.8}",
                theta(kind, z, n)?,
                theta_integral_oracle(kind, z, n, 0)?,
                theta_deriv(kind, z, n)?,
                entropy_level(kind, z, n)?,
            );
        }
        println!();
    }
    Ok(())
}
