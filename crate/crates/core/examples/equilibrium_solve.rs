//! Chemical potential and populations of a three-level Bose system as the
//! temperature rises, showing levels leaving their pinned state.

use levelstat::{ground_state, high_temperature_limit, solve_mu, Level, Statistics, SystemSpec};

fn main() -> levelstat::Result<()> {
    let levels = vec![Level::new(1.0, 2.0), Level::new(2.0, 6.0), Level::new(4.0, 12.0)];
    let system = SystemSpec::new(Statistics::Bose, levels, 5.0, 1.0, 2.0 / 3.0)?;

    let g = ground_state(&system)?;
    println!("T = 0: populations {:?}, S = {:.6}", g.populations(), g.entropy);

    println!("{:>6} {:>12} {:>30} {:>10}", "T", "mu", "n_j", "S");
    for t in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 10.0] {
        let s = solve_mu(t, &system)?;
        let pops: Vec<String> = s.occupancies.iter().map(|o| format!("{:.4}{}", o.n, tag(o.pinned.label()))).collect();
        println!("{t:>6} {:>12.6} {:>30} {:>10.6}", s.mu, pops.join(" "), s.entropy);
    }

    let hot: Vec<f64> = high_temperature_limit(&system)?.iter().map(|o| o.n).collect();
    println!("T -> inf: {hot:?}");
    Ok(())
}

fn tag(label: &str) -> &'static str {
    match label {
        "empty" => "(e)",
        "full" => "(f)",
        "reservoir" => "(r)",
        _ => "",
    }
}
