//! Heat capacities and thermal coefficients along a temperature grid for
//! a small Fermi system.

use levelstat::{solve_mu, ResponseSet, Statistics, TwoLevelParams};

fn main() -> levelstat::Result<()> {
    let params = TwoLevelParams::new(16.0, 128.0, 14.0, 1.0);
    let system = params.system(Statistics::Fermi)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}", "T", "C_V", "C_p", "alpha_p", "gamma_T", "beta_V");
    for t in [0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 3.0] {
        let state = solve_mu(t, &system)?;
        let r = ResponseSet::compute(&state, &system);
        let f = |x: Option<f64>| x.map(|v| format!("{v:12.6}")).unwrap_or_else(|| format!("{:>12}", "-"));
        println!("{t:>6} {:12.6} {} {} {} {}", r.cv, f(r.cp), f(r.alpha_p), f(r.gamma_t), f(r.beta_v));
    }
    Ok(())
}
