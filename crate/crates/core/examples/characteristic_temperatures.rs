//! Onset and completion temperatures, limiting entropies and the
//! heat-capacity jumps of two-level systems.

use levelstat::two_level::{capacity_jumps, char_temps, classify_region, limiting_entropy, zero_t_entropy};
use levelstat::{Statistics, TwoLevelParams};

fn main() -> levelstat::Result<()> {
    let cases = [
        (Statistics::Bose, TwoLevelParams::new(8.0, 96.0, 16.0, 1.0)),
        (Statistics::Fermi, TwoLevelParams::new(16.0, 128.0, 34.0, 1.0)),
        (Statistics::Fermi, TwoLevelParams::new(16.0, 1.0, 14.0, 1.0)),
    ];
    for (kind, p) in cases {
        println!("{kind} z1={} z2={} N={}: {}", p.z1, p.z2, p.n_total, classify_region(&p, kind));
        for (name, t) in char_temps(&p, kind).present() {
            println!("  {name} = {t:.6}");
        }
        let (s, how) = limiting_entropy(&p, kind)?;
        println!("  S(0) = {:.6}, S_limit = {s:.6} ({})", zero_t_entropy(&p, kind)?, how.label());
        for j in capacity_jumps(&p, kind)? {
            let dcp = j.delta_cp().map(|d| format!("{d:.6}")).unwrap_or_else(|| "-".into());
            println!("  jump at {}: dC_V = {:.6}, dC_p = {dcp}", j.name, j.delta_cv());
        }
    }
    Ok(())
}
