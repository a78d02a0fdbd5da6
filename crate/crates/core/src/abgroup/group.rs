use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::{kernel_basis, lattice_basis, smith_normal_form, Snf};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated abelian group:
/// `ℤ^rank ⊕ ℤ/t_1 ⊕ … ⊕ ℤ/t_k` with `1 < t_1 | t_2 | … | t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub rank: usize,
    #[serde(with = "decimal_list")]
    pub invariant_factors: Vec<BigInt>,
}

impl CanonicalForm {
    pub fn trivial() -> Self {
        CanonicalForm {
            rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        CanonicalForm {
            rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|t| format!("Z/{t}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

mod decimal_list {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
            })
            .collect()
    }
}

/// A finitely generated abelian group `ℤ^generators / ⟨relations⟩`, the
/// relations being the columns of the relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAbGroup {
    generators: usize,
    relations: IntMatrix,
    canonical: CanonicalForm,
}

impl PresentedAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        let canonical = canonical_of(&relations);
        Ok(PresentedAbGroup {
            generators,
            relations,
            canonical,
        })
    }

    pub fn free(rank: usize) -> Self {
        PresentedAbGroup {
            generators: rank,
            relations: IntMatrix::zeros(rank, 0),
            canonical: CanonicalForm::free(rank),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    /// `ℤ/t_1 ⊕ … ⊕ ℤ/t_k ⊕ ℤ^r` presented on exactly `k + r` generators.
    pub fn from_canonical(form: &CanonicalForm) -> Self {
        let t = form.invariant_factors.len();
        let n = t + form.rank;
        let relations = IntMatrix::diagonal(n, t, &form.invariant_factors);
        PresentedAbGroup {
            generators: n,
            relations,
            canonical: form.clone(),
        }
    }

    /// Direct sum of `copies` copies of `self`.
    pub fn power(&self, copies: usize) -> Self {
        let blocks: Vec<&IntMatrix> = std::iter::repeat_n(&self.relations, copies).collect();
        let relations = IntMatrix::block_diag(&blocks);
        PresentedAbGroup::new(self.generators * copies, relations).expect("block sizes agree")
    }

    pub fn direct_sum(parts: &[&PresentedAbGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|g| &g.relations).collect();
        let relations = IntMatrix::block_diag(&blocks);
        let generators = parts.iter().map(|g| g.generators).sum();
        PresentedAbGroup::new(generators, relations).expect("block sizes agree")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn canonical(&self) -> &CanonicalForm {
        &self.canonical
    }

    pub fn rank(&self) -> usize {
        self.canonical.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical.is_trivial()
    }

    pub fn is_isomorphic(&self, other: &PresentedAbGroup) -> bool {
        self.canonical == other.canonical
    }

    /// Whether `v` (in generator coordinates) is zero in the group.
    pub fn is_zero_element(&self, v: &[BigInt]) -> Result<bool> {
        if v.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        if self.relations.cols() == 0 {
            return Ok(false);
        }
        Ok(smith_normal_form(&self.relations).solve(v)?.is_some())
    }

    /// Whether every column of `m` lies in the relation lattice.
    pub fn columns_vanish(&self, m: &IntMatrix) -> Result<bool> {
        if m.rows() != self.generators {
            return Err(Error::Dimension(format!(
                "{} rows against {} generators",
                m.rows(),
                self.generators
            )));
        }
        if m.is_zero() {
            return Ok(true);
        }
        if self.relations.cols() == 0 {
            return Ok(false);
        }
        let snf = smith_normal_form(&self.relations);
        for j in 0..m.cols() {
            if snf.solve(&m.col(j))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PresentedAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

fn canonical_of(relations: &IntMatrix) -> CanonicalForm {
    let snf = smith_normal_form(relations);
    let invariant_factors = snf.diagonal().into_iter().filter(|d| !d.is_one()).collect();
    CanonicalForm {
        rank: relations.rows() - snf.rank,
        invariant_factors,
    }
}

/// Cokernel of `M`: generators are the rows of `M`, relations its columns.
pub fn cokernel(m: &IntMatrix) -> PresentedAbGroup {
    PresentedAbGroup::new(m.rows(), m.clone()).expect("rows match by construction")
}

/// A homomorphism given by its matrix on generators
/// (`target.generators × source.generators`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: PresentedAbGroup,
    pub target: PresentedAbGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that the matrix sends source relations into the target's
    /// relation lattice.
    pub fn new(source: PresentedAbGroup, target: PresentedAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.generators, source.generators) {
            return Err(Error::Dimension(format!(
                "hom matrix {:?} between groups on {} and {} generators",
                matrix.shape(),
                source.generators,
                target.generators
            )));
        }
        let images = matrix.try_mul(&source.relations)?;
        if !target.columns_vanish(&images)? {
            return Err(Error::contract("matrix does not respect source relations"));
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &PresentedAbGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.generators),
        }
    }

    pub fn zero(source: &PresentedAbGroup, target: &PresentedAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generators, source.generators),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target.generators != other.source.generators {
            return Err(Error::Dimension("composition of non-composable homs".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.try_mul(&self.matrix)?,
        })
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matrix.mul_vec(v)
    }

    /// Equality as homomorphisms: the matrices agree modulo target relations.
    pub fn same_map(&self, other: &GroupHom) -> Result<bool> {
        let diff = self.matrix.sub(&other.matrix)?;
        self.target.columns_vanish(&diff)
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        self.target.columns_vanish(&self.matrix)
    }

    /// Lattice `{x ∈ ℤ^source : f(x) ∈ target relations}` as basis columns.
    pub fn kernel_lattice(&self) -> Result<IntMatrix> {
        preimage_lattice(&self.matrix, self.target.relations())
    }

    /// Kernel as an abstract group, together with the lattice basis whose
    /// columns generate it inside the source.
    pub fn kernel(&self) -> Result<(PresentedAbGroup, IntMatrix)> {
        let k = self.kernel_lattice()?;
        let rel = coordinates_in(&k, self.source.relations())?;
        Ok((PresentedAbGroup::new(k.cols(), rel)?, k))
    }

    /// `target / f(source)`.
    pub fn cokernel(&self) -> Result<PresentedAbGroup> {
        let rel = self.target.relations.hcat(&self.matrix)?;
        PresentedAbGroup::new(self.target.generators, rel)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_trivial())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

/// `{x : M x ∈ span(S)}`, returned as a basis matrix (columns).
pub fn preimage_lattice(m: &IntMatrix, s: &IntMatrix) -> Result<IntMatrix> {
    let n = m.cols();
    if s.cols() == 0 {
        return Ok(kernel_basis(m));
    }
    let k = kernel_basis(&m.hcat(s)?);
    Ok(lattice_basis(&k.row_range(0, n)))
}

/// Coordinates of the columns of `vectors` with respect to the basis
/// columns of `basis`. Every column must lie in the lattice.
pub fn coordinates_in(basis: &IntMatrix, vectors: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(basis);
    coordinates_with(&snf, basis.cols(), vectors)
}

pub(crate) fn coordinates_with(snf: &Snf, basis_len: usize, vectors: &IntMatrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(basis_len, vectors.cols());
    for j in 0..vectors.cols() {
        let c = snf
            .solve(&vectors.col(j))?
            .ok_or_else(|| Error::contract("vector outside the expected lattice"))?;
        for (i, v) in c.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Exactness of `A --f--> B --g--> C` at `B`: `g ∘ f = 0` and `ker g ⊆ im f`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> Result<bool> {
    if f.target.generators != g.source.generators {
        return Err(Error::Dimension("exactness check on non-composable homs".into()));
    }
    if !f.then(g)?.is_zero_map()? {
        return Ok(false);
    }
    let ker = g.kernel_lattice()?;
    if ker.cols() == 0 {
        return Ok(true);
    }
    let span = f.matrix.hcat(f.target.relations())?;
    let snf = smith_normal_form(&span);
    for j in 0..ker.cols() {
        if snf.solve(&ker.col(j))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_cases() {
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2]])).to_string(), "Z/2");
        assert!(cokernel(&IntMatrix::identity(2)).is_trivial());
        assert_eq!(cokernel(&IntMatrix::zeros(1, 0)).to_string(), "Z");
        let g = cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]));
        assert_eq!(g.to_string(), "Z/6 + Z");
    }

    #[test]
    fn canonical_round_trip() {
        let form = CanonicalForm {
            rank: 2,
            invariant_factors: vec![BigInt::from(2), BigInt::from(4)],
        };
        let g = PresentedAbGroup::from_canonical(&form);
        assert_eq!(g.canonical(), &form);
        let json = serde_json::to_string(&form).unwrap();
        assert_eq!(json, r#"{"rank":2,"invariant_factors":["2","4"]}"#);
    }

    #[test]
    fn hom_must_respect_relations() {
        let z2 = cokernel(&IntMatrix::from_rows(&[vec![2]]));
        let z = PresentedAbGroup::integers();
        // ℤ/2 → ℤ sending the generator to 1 is not well defined.
        assert!(GroupHom::new(z2.clone(), z.clone(), IntMatrix::from_rows(&[vec![1]])).is_err());
        // ℤ → ℤ/2 reduction is.
        let red = GroupHom::new(z.clone(), z2, IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(red.is_surjective().unwrap());
        assert!(!red.is_injective().unwrap());
        assert_eq!(red.kernel().unwrap().0.to_string(), "Z");
    }

    #[test]
    fn exactness_of_multiplication_sequence() {
        let z = PresentedAbGroup::integers();
        let z2 = cokernel(&IntMatrix::from_rows(&[vec![2]]));
        let times2 = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let reduce = GroupHom::new(z.clone(), z2, IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(is_exact_at(&times2, &reduce).unwrap());
        let id = GroupHom::identity(&z);
        assert!(!is_exact_at(&id, &id).unwrap());
    }
}
