//! The long exact sequence of 0 → j_!Z → Z → i_*Z → 0 on the one-disk wedge.

use finsheaf::abgroup::PresentedAbGroup;
use finsheaf::cohom::les_of_short_exact;
use finsheaf::finspace::Subset;
use finsheaf::sheaf::open_closed_sequence;
use finsheaf::wedge::build_wedge;

fn main() -> finsheaf::Result<()> {
    let w = build_wedge(1)?;
    let ses = open_closed_sequence(w.poset(), w.open_u(), &PresentedAbGroup::integers())?;
    let les = les_of_short_exact(&ses, &Subset::full(w.poset().len()))?;
    for node in &les.nodes {
        println!("{:<12} {}", node.label(), node.group);
    }
    let exact = les.exactness()?;
    println!("exact at every interior node: {}", exact.iter().all(|&e| e));
    Ok(())
}
