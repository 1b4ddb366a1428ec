//! ln Γ, digamma and trigamma at a few points, next to known values.

use levelstat::specfun::{digamma, harmonic, ln_gamma, trigamma, EULER_GAMMA};

fn main() -> levelstat::Result<()> {
    println!("{:>8} {:>20} {:>20} {:>20}", "x", "ln_gamma", "digamma", "trigamma");
    for x in [0.25, 0.5, 1.0, 2.0, 7.5, 40.0, 1e6] {
        println!("{x:>8} {:>20.15} {:>20.15} {:>20.15}", ln_gamma(x)?, digamma(x)?, trigamma(x)?);
    }
    println!();
    println!("psi(1)   = {:.16}  (-gamma = {:.16})", digamma(1.0)?, -EULER_GAMMA);
    println!("psi1(1)  = {:.16}  (pi^2/6 = {:.16})", trigamma(1.0)?, std::f64::consts::PI.powi(2) / 6.0);
    println!("H(10)    = {:.16}", harmonic(10.0)?);
    Ok(())
}
