//! A circle as a four-point finite space: open sets, minimal neighbourhoods
//! and the cohomology of its constant sheaf.

use finsheaf::abgroup::PresentedAbGroup;
use finsheaf::cohom::cohomology;
use finsheaf::finspace::FinitePoset;
use finsheaf::sheaf::constant_sheaf;

fn main() -> finsheaf::Result<()> {
    // Two points below two points: the pseudo-circle.
    let p = FinitePoset::new(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])?;
    for x in 0..p.len() {
        println!("U_{} = {:?}", p.label(x), p.subset_labels(p.min_open(x)?.subset()));
    }
    println!("{} open sets", p.all_open_sets().len());
    let z = constant_sheaf(&p, &PresentedAbGroup::integers());
    for q in 0..3 {
        println!("H^{q}(S, Z) = {}", cohomology(&z, q)?);
    }
    Ok(())
}
