//! Smith normal form of a small integer matrix and the group it presents.

use finsheaf::abgroup::{cokernel, smith_normal_form, IntMatrix};

fn main() -> finsheaf::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&m);
    println!("M =\n{m}");
    println!("D =\n{}", s.d);
    println!("U =\n{}", s.u);
    println!("V =\n{}", s.v);
    println!("U·M·V = D and U, V unimodular: {}", s.verify(&m)?);
    println!("Z^3 / (columns of M) ≅ {}", cokernel(&m));
    Ok(())
}
