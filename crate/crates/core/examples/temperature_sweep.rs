//! Temperature sweep written as CSV, the same table `levelstat sweep` prints.

use levelstat::cli::report::{sweep_csv, sweep_points, SweepConfig, SystemConfig};
use levelstat::{Statistics, TwoLevelParams};

fn main() -> levelstat::Result<()> {
    let sweep = SweepConfig {
        system: SystemConfig::new(Statistics::Bose, TwoLevelParams::new(8.0, 256.0, 8.0, 1.0)),
        tau_min: 0.05,
        tau_max: 5.0,
        points: 12,
        log: true,
        raw: false,
    };
    let points = sweep_points(&sweep)?;
    print!("{}", sweep_csv(&sweep, &points));
    Ok(())
}
