use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{coordinates_with, preimage_lattice, CanonicalForm, GroupHom, PresentedAbGroup};
use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, Snf};
use crate::error::{Error, Result};

/// A cochain complex of presented groups `C^0 → C^1 → … → C^top`.
///
/// `diffs[k]` is the matrix of `C^k → C^{k+1}` on generators. Groups past
/// `top` are zero.
#[derive(Debug, Clone)]
pub struct Complex {
    groups: Vec<PresentedAbGroup>,
    diffs: Vec<IntMatrix>,
}

impl Complex {
    /// Validates shapes, well-definedness of each differential, and `d∘d = 0`
    /// modulo relations.
    pub fn new(groups: Vec<PresentedAbGroup>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if groups.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::Dimension("differentials without groups".into()));
            }
            return Ok(Complex { groups, diffs });
        }
        if diffs.len() + 1 != groups.len() {
            return Err(Error::Dimension(format!(
                "{} differentials for {} groups",
                diffs.len(),
                groups.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (groups[k + 1].generators(), groups[k].generators()) {
                return Err(Error::Dimension(format!("differential {k} has shape {:?}", d.shape())));
            }
            let rel_image = d.try_mul(groups[k].relations())?;
            if !groups[k + 1].columns_vanish(&rel_image)? {
                return Err(Error::contract(format!("differential {k} ignores relations")));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            let dd = diffs[k + 1].try_mul(&diffs[k])?;
            if !groups[k + 2].columns_vanish(&dd)? {
                return Err(Error::contract(format!("d∘d ≠ 0 at degree {k}")));
            }
        }
        Ok(Complex { groups, diffs })
    }

    /// Free complex from its differentials; `dims[k]` is the rank of `C^k`.
    pub fn free(dims: &[usize], diffs: Vec<IntMatrix>) -> Result<Self> {
        Self::new(dims.iter().map(|&n| PresentedAbGroup::free(n)).collect(), diffs)
    }

    pub fn zero() -> Self {
        Complex {
            groups: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// Number of stored degrees.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, k: usize) -> PresentedAbGroup {
        self.groups.get(k).cloned().unwrap_or_else(PresentedAbGroup::trivial)
    }

    pub fn generators(&self, k: usize) -> usize {
        self.groups.get(k).map_or(0, PresentedAbGroup::generators)
    }

    /// `C^k → C^{k+1}`, zero outside the stored range. `k = -1` is written
    /// as `None`.
    pub fn diff(&self, k: Option<usize>) -> IntMatrix {
        match k {
            None => IntMatrix::zeros(self.generators(0), 0),
            Some(k) => self
                .diffs
                .get(k)
                .cloned()
                .unwrap_or_else(|| IntMatrix::zeros(self.generators(k + 1), self.generators(k))),
        }
    }

    pub fn groups(&self) -> &[PresentedAbGroup] {
        &self.groups
    }

    pub fn diffs(&self) -> &[IntMatrix] {
        &self.diffs
    }

    /// Cohomology at degree `q`.
    pub fn homology(&self, q: usize) -> Result<Homology> {
        let prev = if q == 0 {
            self.diff(None)
        } else {
            self.diff(Some(q - 1))
        };
        let next = self.diff(Some(q));
        Homology::compute(&self.group(q), &prev, &next, &self.group(q + 1))
    }
}

/// `ker(d_next) / im(d_prev)` with a lifting interface between cycles and
/// class coordinates.
///
/// Class coordinates follow the canonical presentation of [`group`]:
/// torsion summands first (ascending invariant factors, entries reduced
/// into `0..t`), then free summands.
///
/// [`group`]: Homology::group
#[derive(Debug, Clone)]
pub struct Homology {
    group: PresentedAbGroup,
    ambient: usize,
    cycles: IntMatrix,
    cycles_snf: Snf,
    p: IntMatrix,
    p_inv: IntMatrix,
    units: usize,
    nonzero: usize,
    factors: Vec<BigInt>,
}

impl Homology {
    /// Homology at the middle of `prev: A → C`, `next: C → B` where `C` is
    /// the presented group `middle` and `B` is `after`.
    pub fn compute(
        middle: &PresentedAbGroup,
        prev: &IntMatrix,
        next: &IntMatrix,
        after: &PresentedAbGroup,
    ) -> Result<Self> {
        let n = middle.generators();
        if prev.rows() != n || next.cols() != n || next.rows() != after.generators() {
            return Err(Error::Dimension(format!(
                "homology with prev {:?}, next {:?}, middle on {n} generators",
                prev.shape(),
                next.shape()
            )));
        }
        let composite = next.try_mul(prev)?;
        if !after.columns_vanish(&composite)? {
            return Err(Error::contract("composite of consecutive differentials is nonzero"));
        }
        let cycles = preimage_lattice(next, after.relations())?;
        let cycles_snf = smith_normal_form(&cycles);
        let boundaries = prev.hcat(middle.relations())?;
        let coords = coordinates_with(&cycles_snf, cycles.cols(), &boundaries)?;
        let snf = smith_normal_form(&coords);
        let diag = snf.diagonal();
        let units = diag.iter().take_while(|d| d.is_one()).count();
        let factors: Vec<BigInt> = diag[units..].to_vec();
        let k = cycles.cols();
        let form = CanonicalForm {
            rank: k - snf.rank,
            invariant_factors: factors.clone(),
        };
        Ok(Homology {
            group: PresentedAbGroup::from_canonical(&form),
            ambient: n,
            cycles,
            cycles_snf,
            p: snf.u,
            p_inv: snf.u_inv,
            units,
            nonzero: snf.rank,
            factors,
        })
    }

    pub fn group(&self) -> &PresentedAbGroup {
        &self.group
    }

    pub fn canonical(&self) -> &CanonicalForm {
        self.group.canonical()
    }

    /// Length of cochain vectors this homology lives in.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_cycle(&self, z: &[BigInt]) -> Result<bool> {
        Ok(self.cycles_snf.solve(z)?.is_some())
    }

    /// Class of a cycle, in canonical coordinates.
    pub fn class_of(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .cycles_snf
            .solve(z)?
            .ok_or_else(|| Error::contract("class requested for a non-cycle"))?;
        let y = self.p.mul_vec(&c)?;
        let mut out = Vec::with_capacity(self.group.generators());
        for (i, t) in self.factors.iter().enumerate() {
            out.push(y[self.units + i].mod_floor(t));
        }
        out.extend(y[self.nonzero..].iter().cloned());
        Ok(out)
    }

    /// A cycle representing the class with the given canonical coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Result<Vec<BigInt>> {
        if class.len() != self.group.generators() {
            return Err(Error::Dimension(format!(
                "class vector of length {} for a group on {} generators",
                class.len(),
                self.group.generators()
            )));
        }
        let k = self.cycles.cols();
        let mut y = vec![BigInt::zero(); k];
        let t = self.factors.len();
        for i in 0..t {
            y[self.units + i] = class[i].clone();
        }
        for (i, v) in class[t..].iter().enumerate() {
            y[self.nonzero + i] = v.clone();
        }
        let c = self.p_inv.mul_vec(&y)?;
        self.cycles.mul_vec(&c)
    }

    /// Representative of the `i`-th canonical generator.
    pub fn generator_representative(&self, i: usize) -> Result<Vec<BigInt>> {
        let mut e = vec![BigInt::zero(); self.group.generators()];
        e[i] = BigInt::one();
        self.representative(&e)
    }

    /// Whether a cycle is a boundary.
    pub fn is_boundary(&self, z: &[BigInt]) -> Result<bool> {
        Ok(self.class_of(z)?.iter().all(Zero::is_zero))
    }
}

/// Homology of a free three-term piece `C_prev --d1--> C --d2--> C_next`.
pub fn homology_at(d1: &IntMatrix, d2: &IntMatrix) -> Result<Homology> {
    let middle = PresentedAbGroup::free(d1.rows());
    let after = PresentedAbGroup::free(d2.rows());
    Homology::compute(&middle, d1, d2, &after)
}

/// Checks `d_tgt ∘ f_k = f_{k+1} ∘ d_src` for `k` in `degrees`, modulo the
/// target relations.
pub fn check_chain_map(src: &Complex, tgt: &Complex, maps: &[IntMatrix], degrees: &[usize]) -> Result<()> {
    let map_at = |k: usize| {
        maps.get(k)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(tgt.generators(k), src.generators(k)))
    };
    for &k in degrees {
        let f_k = map_at(k);
        let f_next = map_at(k + 1);
        if f_k.shape() != (tgt.generators(k), src.generators(k)) {
            return Err(Error::Dimension(format!(
                "chain map component {k} has shape {:?}",
                f_k.shape()
            )));
        }
        let lhs = tgt.diff(Some(k)).try_mul(&f_k)?;
        let rhs = f_next.try_mul(&src.diff(Some(k)))?;
        if !tgt.group(k + 1).columns_vanish(&lhs.sub(&rhs)?)? {
            return Err(Error::contract(format!(
                "chain map square at degree {k} does not commute"
            )));
        }
    }
    Ok(())
}

/// The map `H^q(src) → H^q(tgt)` induced by a chain map given degreewise.
///
/// The squares on both sides of degree `q` are checked first.
pub fn induced_on_homology(src: &Complex, tgt: &Complex, maps: &[IntMatrix], q: usize) -> Result<GroupHom> {
    let mut degrees = vec![q];
    if q > 0 {
        degrees.push(q - 1);
    }
    check_chain_map(src, tgt, maps, &degrees)?;
    let hs = src.homology(q)?;
    let ht = tgt.homology(q)?;
    let f = maps
        .get(q)
        .cloned()
        .unwrap_or_else(|| IntMatrix::zeros(tgt.generators(q), src.generators(q)));
    induced_map(&f, &hs, &ht)
}

/// Matrix of `[z] ↦ [f z]` in canonical coordinates. Assumes `f` is a
/// component of a chain map.
pub fn induced_map(f: &IntMatrix, src: &Homology, tgt: &Homology) -> Result<GroupHom> {
    let n = src.group().generators();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let z = src.generator_representative(i)?;
        cols.push(tgt.class_of(&f.mul_vec(&z)?)?);
    }
    let m = IntMatrix::from_columns(tgt.group().generators(), &cols);
    GroupHom::new(src.group().clone(), tgt.group().clone(), m)
}

/// Snake-lemma connecting map `H^q(C) → H^{q+1}(A)` for a degreewise short
/// exact sequence `0 → A --f--> B --g--> C → 0`.
pub fn connecting_map(
    b: &Complex,
    c: &Complex,
    f_next: &IntMatrix,
    g_q: &IntMatrix,
    q: usize,
    hc: &Homology,
    ha_next: &Homology,
) -> Result<GroupHom> {
    let lift_rel = g_q.hcat(c.group(q).relations())?;
    let lift_snf = smith_normal_form(&lift_rel);
    let pull = f_next.hcat(b.group(q + 1).relations())?;
    let pull_snf = smith_normal_form(&pull);
    let n = hc.group().generators();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let c = hc.generator_representative(i)?;
        let lifted = lift_snf
            .solve(&c)?
            .ok_or_else(|| Error::contract("cochain does not lift along a surjection"))?;
        let bq = &lifted[..g_q.cols()];
        let db = b.diff(Some(q)).mul_vec(bq)?;
        let pre = pull_snf
            .solve(&db)?
            .ok_or_else(|| Error::contract("coboundary of a lift is not in the image of the injection"))?;
        cols.push(ha_next.class_of(&pre[..f_next.cols()])?);
    }
    let m = IntMatrix::from_columns(ha_next.group().generators(), &cols);
    GroupHom::new(hc.group().clone(), ha_next.group().clone(), m)
}
