//! Coarse text map of the Fermi regions in the (φ, η) plane for N = 16.

use std::collections::BTreeMap;

use levelstat::two_level::{classify_grid, PlaneGrid};
use levelstat::Statistics;

fn main() -> levelstat::Result<()> {
    let grid = PlaneGrid {
        phi_min: 0.05,
        phi_max: 2.0,
        phi_points: 40,
        eta_min: 0.01,
        eta_max: 100.0,
        eta_points: 20,
        eta_log: true,
    };
    let cells = classify_grid(Statistics::Fermi, 16.0, &grid)?;
    let mut symbols = BTreeMap::new();
    for c in &cells {
        if let Some(r) = c.region {
            let next = char::from(b'a' + symbols.len() as u8);
            symbols.entry(r.label()).or_insert(next);
        }
    }
    for eta in grid.etas().iter().rev() {
        let row: String = cells
            .iter()
            .filter(|c| c.eta == *eta)
            .map(|c| c.region.map_or('.', |r| symbols[r.label()]))
            .collect();
        println!("{eta:>9.3} {row}");
    }
    for (label, s) in symbols {
        println!("{s} = {label}");
    }
    Ok(())
}
