//! Stored presets with their reference values and what the library gives.

use levelstat::cli::presets::presets;
use levelstat::cli::verify::preset_checks;

fn main() {
    for preset in presets() {
        println!("{} ({}, {})", preset.id, preset.statistics, preset.source);
        for check in preset_checks(&preset) {
            println!("  {} {} {}", if check.passed { "ok  " } else { "FAIL" }, check.name, check.detail);
        }
    }
}
