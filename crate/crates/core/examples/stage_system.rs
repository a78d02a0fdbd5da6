//! The tower of stage coverings and its transition matrices.

use finsheaf::wedge::{build_wedge, stage_system};

fn main() -> finsheaf::Result<()> {
    let w = build_wedge(3)?;
    let sys = stage_system(&w)?;
    for s in &sys.stages {
        println!("stage {}: {}", s.m, s.group);
    }
    for t in sys.transitions.iter().filter(|t| t.to == t.from + 1) {
        println!(
            "t_{}→{} (projection: {}, kernel rank {}):\n{}",
            t.from, t.to, t.is_projection, t.kernel_rank, t.matrix
        );
    }
    println!("verified: {}", sys.verified());
    Ok(())
}
