//! Certificate for the colimit of the tail-product system, with machine
//! evidence from the finite stages.

use finsheaf::symcolim::{certify_theorem, SymbolicDirectSystem};
use finsheaf::wedge::{build_wedge, stage_system};

fn main() -> finsheaf::Result<()> {
    let sys = stage_system(&build_wedge(4)?)?;
    match certify_theorem(&sys, &SymbolicDirectSystem::tail_products()) {
        Ok(cert) => print!("{}", cert.transcript()),
        Err(refusal) => println!("refused: {}", refusal.reason),
    }
    Ok(())
}
