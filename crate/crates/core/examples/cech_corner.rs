//! Čech groups of the canonical covering next to sheaf cohomology: the
//! degree-two gap on the wedge of disks.

use finsheaf::cech::covering_comparison_report;
use finsheaf::wedge::{build_wedge, canonical_covering, wedge_sheaf};

fn main() -> finsheaf::Result<()> {
    let disks = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let w = build_wedge(disks)?;
    let report = covering_comparison_report(&canonical_covering(&w), &wedge_sheaf(&w))?;
    println!("{}", report.to_table());
    Ok(())
}
