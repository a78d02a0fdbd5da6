//! Finite models `X_N` of a wedge of `N` closed disks.
//!
//! Each disk `n` has a vertex `v_n`, two edges `a_n`, `b_n` from the common
//! base point `x` to `v_n`, and a 2-cell `f_n` bounded by `a_n ∪ b_n`. The
//! face poset is `x, v_n < a_n, b_n < f_n`. The sheaf `F` is the extension by
//! zero of `ℤ` from the open union of 2-cells; for the canonical covering
//! its Čech cohomology vanishes in degree two while `H^2(X_N, F) ≅ ℤ^N`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::abgroup::{coordinates_in, CanonicalForm, GroupHom, IntMatrix, PresentedAbGroup};
use crate::cech::{cech_cohomology, cech_cohomology_hq, subnerve_map, CechComplex, CechEngine, Covering};
use crate::cohom::{cohomology_on, les_of_short_exact, skeleton_quotient_check, CochainComplex, IdentityStatus, Term};
use crate::error::{Error, Result};
use crate::finspace::{face_poset, ClosedSet, FinitePoset, OpenSet, RegularCwData, Subset};
use crate::sheaf::{constant_sheaf, extension_by_zero, open_closed_sequence, PosetSheaf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeSpace {
    disks: usize,
    poset: FinitePoset,
    skeleton: ClosedSet,
    open_u: OpenSet,
}

impl WedgeSpace {
    pub fn disks(&self) -> usize {
        self.disks
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    /// The 1-skeleton `{x, v_n, a_n, b_n}`.
    pub fn skeleton(&self) -> &ClosedSet {
        &self.skeleton
    }

    /// The open 2-cells `{f_n}`.
    pub fn open_u(&self) -> &OpenSet {
        &self.open_u
    }

    pub fn x(&self) -> usize {
        0
    }

    fn cell(&self, n: usize, k: usize) -> usize {
        assert!((1..=self.disks).contains(&n), "disk index {n} out of range");
        1 + 4 * (n - 1) + k
    }

    pub fn v(&self, n: usize) -> usize {
        self.cell(n, 0)
    }

    pub fn a(&self, n: usize) -> usize {
        self.cell(n, 1)
    }

    pub fn b(&self, n: usize) -> usize {
        self.cell(n, 2)
    }

    pub fn f(&self, n: usize) -> usize {
        self.cell(n, 3)
    }

    fn set(&self, items: impl IntoIterator<Item = usize>) -> Subset {
        Subset::from_indices(self.poset.len(), items)
    }

    /// `{v_n, a_n, b_n, f_n}`: the closed disk minus the base point.
    pub fn disk_member(&self, n: usize) -> Subset {
        self.set([self.v(n), self.a(n), self.b(n), self.f(n)])
    }

    /// `{a_n, b_n, f_n}`.
    pub fn punctured_disk(&self, n: usize) -> Subset {
        self.set([self.a(n), self.b(n), self.f(n)])
    }

    /// Everything except `v_n` for `n ≥ from`.
    pub fn base_member(&self, from: usize) -> Subset {
        let mut s = Subset::full(self.poset.len());
        for n in from..=self.disks {
            s.remove(self.v(n));
        }
        s
    }

    pub fn to_json(&self) -> WedgeJson {
        WedgeJson {
            disks: self.disks,
            poset: self.poset.clone(),
            skeleton: self.poset.subset_labels(&self.skeleton),
            open_u: self.poset.subset_labels(&self.open_u),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WedgeJson {
    pub disks: usize,
    pub poset: FinitePoset,
    pub skeleton: Vec<String>,
    pub open_u: Vec<String>,
}

/// Cell structure of `X_N`, cells listed as `x, v1, a1, b1, f1, v2, …`.
pub fn wedge_cells(disks: usize) -> RegularCwData {
    let mut cw = RegularCwData::default();
    cw.push("x", 0, &[]);
    for n in 1..=disks {
        let (v, a, b) = (format!("v{n}"), format!("a{n}"), format!("b{n}"));
        cw.push(v.clone(), 0, &[]);
        cw.push(a.clone(), 1, &["x", &v]);
        cw.push(b.clone(), 1, &["x", &v]);
        cw.push(format!("f{n}"), 2, &[&a, &b]);
    }
    cw
}

pub fn build_wedge(disks: usize) -> Result<WedgeSpace> {
    if disks < 1 {
        return Err(Error::input("the wedge needs at least one disk"));
    }
    let poset = face_poset(&wedge_cells(disks))?;
    let u = Subset::from_indices(poset.len(), (1..=disks).map(|n| 4 * n));
    let skeleton = poset.closed_set(u.complement())?;
    let open_u = poset.open_set(u)?;
    Ok(WedgeSpace {
        disks,
        poset,
        skeleton,
        open_u,
    })
}

/// `F = j_! ℤ_U` for `U` the union of open 2-cells.
pub fn wedge_sheaf(w: &WedgeSpace) -> PosetSheaf {
    extension_by_zero(w.poset(), w.open_u(), &PresentedAbGroup::integers()).expect("open_u is open")
}

/// `U_0 = X ∖ {v_1, …, v_N}` and `U_n = {v_n, a_n, b_n, f_n}`, in that
/// order.
pub fn canonical_covering(w: &WedgeSpace) -> Covering {
    stage_covering(w, 1).expect("stage one exists")
}

/// One of the five conditions a covering of the wedge is asked to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Condition {
    /// Members and their skeleton parts are connected and acyclic.
    Contractible,
    /// Each 0-cell lies in exactly one member.
    UniqueVertex,
    /// The member containing `v_n` lies in `{v_n, a_n, b_n, f_n}`.
    InsideClosedCell,
    /// `x` lies in the first member and `v_n` in the `n`-th.
    IndexOrder,
    /// A disk covered by the members holding `x` and `v_n` meets no other
    /// member.
    NoThirdMember,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Contractible,
        Condition::UniqueVertex,
        Condition::InsideClosedCell,
        Condition::IndexOrder,
        Condition::NoThirdMember,
    ];

    pub fn numeral(self) -> &'static str {
        match self {
            Condition::Contractible => "i",
            Condition::UniqueVertex => "ii",
            Condition::InsideClosedCell => "iii",
            Condition::IndexOrder => "iv",
            Condition::NoThirdMember => "v",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numeral())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: Condition,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiveConditionVerdict {
    pub results: Vec<ConditionResult>,
}

impl FiveConditionVerdict {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> Vec<Condition> {
        self.results.iter().filter(|r| !r.passed).map(|r| r.condition).collect()
    }

    pub fn result(&self, c: Condition) -> &ConditionResult {
        self.results
            .iter()
            .find(|r| r.condition == c)
            .expect("all five are evaluated")
    }
}

/// Connected with the cohomology of a point, for the constant sheaf on the
/// subspace `s`.
fn acyclic_connected(p: &FinitePoset, s: &Subset) -> Result<bool> {
    let z = constant_sheaf(p, &PresentedAbGroup::integers());
    let cx = CochainComplex::build(&z, s)?;
    if cx.homology(0)?.canonical() != &CanonicalForm::free(1) {
        return Ok(false);
    }
    for q in 1..=cx.top_degree().unwrap_or(0) {
        if !cx.homology(q)?.canonical().is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the five conditions on `c`, reporting every violation found.
pub fn validate_five_conditions(w: &WedgeSpace, c: &Covering) -> Result<FiveConditionVerdict> {
    if c.base() != w.poset() {
        return Err(Error::input("covering is not a covering of this wedge"));
    }
    let p = w.poset();
    let name = |i: usize| c.names()[i].clone();
    let holders = |pt: usize| -> Vec<usize> { (0..c.len()).filter(|&i| c.member(i).contains(pt)).collect() };
    let mut results = Vec::with_capacity(5);

    let mut diag = Vec::new();
    for (i, m) in c.members().iter().enumerate() {
        if !acyclic_connected(p, m)? {
            diag.push(format!("member {} is not connected and acyclic", name(i)));
        }
        let sk = m.intersection(w.skeleton());
        if !sk.is_empty() && !acyclic_connected(p, &sk)? {
            diag.push(format!(
                "skeleton part of member {} is not connected and acyclic",
                name(i)
            ));
        }
    }
    results.push(ConditionResult {
        condition: Condition::Contractible,
        passed: diag.is_empty(),
        diagnostics: diag,
    });

    let vertices: Vec<usize> = std::iter::once(w.x()).chain((1..=w.disks()).map(|n| w.v(n))).collect();
    let mut diag = Vec::new();
    for &pt in &vertices {
        let h = holders(pt);
        if h.len() != 1 {
            let names: Vec<String> = h.iter().map(|&i| name(i)).collect();
            diag.push(format!(
                "{} lies in {} members [{}]",
                p.label(pt),
                h.len(),
                names.join(", ")
            ));
        }
    }
    results.push(ConditionResult {
        condition: Condition::UniqueVertex,
        passed: diag.is_empty(),
        diagnostics: diag,
    });

    let mut diag = Vec::new();
    for n in 1..=w.disks() {
        let cell = w.disk_member(n);
        for i in holders(w.v(n)) {
            if !c.member(i).is_subset_of(&cell) {
                let extra = p.subset_labels(&c.member(i).intersection(&cell.complement()));
                diag.push(format!("member {} holds v{n} and also {}", name(i), extra.join(", ")));
            }
        }
    }
    results.push(ConditionResult {
        condition: Condition::InsideClosedCell,
        passed: diag.is_empty(),
        diagnostics: diag,
    });

    let mut diag = Vec::new();
    for i in holders(w.x()) {
        if i != 0 {
            diag.push(format!("x lies in member {} at position {i}, not 0", name(i)));
        }
    }
    for n in 1..=w.disks() {
        for i in holders(w.v(n)) {
            if i != n {
                diag.push(format!("v{n} lies in member {} at position {i}, not {n}", name(i)));
            }
        }
    }
    results.push(ConditionResult {
        condition: Condition::IndexOrder,
        passed: diag.is_empty(),
        diagnostics: diag,
    });

    // Roles rather than positions: U_0 holds x and U_n holds v_n.
    let mut diag = Vec::new();
    for n in 1..=w.disks() {
        let cell = w.disk_member(n);
        for z in holders(w.x()) {
            for k in holders(w.v(n)) {
                if !cell.is_subset_of(&c.member(z).union(c.member(k))) {
                    continue;
                }
                for i in (0..c.len()).filter(|&i| i != z && i != k) {
                    if c.member(i).meets(&cell) {
                        diag.push(format!(
                            "disk {n} is covered by {} and {} but meets member {}",
                            name(z),
                            name(k),
                            name(i)
                        ));
                    }
                }
            }
        }
    }
    results.push(ConditionResult {
        condition: Condition::NoThirdMember,
        passed: diag.is_empty(),
        diagnostics: diag,
    });
    Ok(FiveConditionVerdict { results })
}

/// Stage `m` covering: the first member absorbs the disks `n < m`, the
/// disks `n ≥ m` keep their own member. Stage 1 is the canonical covering
/// and stage `N + 1` is the one-member covering.
pub fn stage_covering(w: &WedgeSpace, m: usize) -> Result<Covering> {
    if !(1..=w.disks() + 1).contains(&m) {
        return Err(Error::input(format!("stage {m} outside 1..={}", w.disks() + 1)));
    }
    let mut members = vec![("U0".to_string(), w.base_member(m))];
    for n in m..=w.disks() {
        members.push((format!("U{n}"), w.disk_member(n)));
    }
    Covering::new(w.poset(), members)
}

/// `Ȟ^1(stage covering, ℋ^1(F))`.
pub fn stage_group(w: &WedgeSpace, m: usize) -> Result<PresentedAbGroup> {
    cech_cohomology_hq(&stage_covering(w, m)?, &wedge_sheaf(w), 1, 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub m: usize,
    pub group: CanonicalForm,
    /// Class coordinates of the cocycles `e_n` (`n ≥ m`) supported on the
    /// pair `(U_0, U_n)`, one column per `n`.
    pub basis: IntMatrix,
    #[serde(skip)]
    pub covering: Covering,
}

#[derive(Debug, Clone, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// Matrix in the `e_n` bases.
    pub matrix: IntMatrix,
    pub surjective: bool,
    pub kernel_rank: usize,
    pub kernel_free: bool,
    /// Equal to the projection forgetting `e_m, …, e_{m′-1}`.
    pub is_projection: bool,
    /// The refinement map of `S_m ≺ S_{m′}` in the `e_n` bases.
    pub refinement: IntMatrix,
    /// Transition after refinement is the identity of stage `m′`.
    pub retracts_refinement: bool,
}

/// Groups `Ȟ^1(S_m, ℋ^1 F) ≅ ℤ^{N-m+1}` for `m = 1..=N+1` with transitions
/// `t_{m→m′}` for `m ≤ m′`.
#[derive(Debug, Clone, Serialize)]
pub struct StageSystem {
    pub disks: usize,
    pub stages: Vec<Stage>,
    pub transitions: Vec<Transition>,
    /// `t_{m→m″} = t_{m′→m″} ∘ t_{m→m′}` for every triple.
    pub composes: bool,
}

impl StageSystem {
    pub fn stage(&self, m: usize) -> &Stage {
        &self.stages[m - 1]
    }

    pub fn transition(&self, from: usize, to: usize) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.from == from && t.to == to)
    }

    /// Every transition is a surjective coordinate projection with free
    /// kernel of rank `m′ - m`, and the system composes.
    pub fn verified(&self) -> bool {
        self.composes
            && self
                .stages
                .iter()
                .all(|s| s.group == CanonicalForm::free(self.disks + 1 - s.m))
            && self.transitions.iter().all(|t| {
                t.surjective
                    && t.kernel_free
                    && t.kernel_rank == t.to - t.from
                    && t.is_projection
                    && t.retracts_refinement
            })
    }
}

/// `[0 | I]` of shape `(N+1-to) × (N+1-from)`.
pub fn projection_matrix(disks: usize, from: usize, to: usize) -> IntMatrix {
    let (rows, cols) = (disks + 1 - to, disks + 1 - from);
    let mut m = IntMatrix::zeros(rows, cols);
    m.add_block(0, to - from, &IntMatrix::identity(rows), 1);
    m
}

fn stage_basis(cx: &CechComplex, from: usize, disks: usize) -> Result<IntMatrix> {
    let h = cx.complex().homology(1)?;
    let mut cols = Vec::new();
    for k in 1..=disks + 1 - from {
        cols.push(h.class_of(&cx.unit_cochain(&[0, k], 0)?)?);
    }
    Ok(IntMatrix::from_columns(h.group().generators(), &cols))
}

pub fn stage_system(w: &WedgeSpace) -> Result<StageSystem> {
    let f = wedge_sheaf(w);
    let n = w.disks();
    let mut engine = CechEngine::new(&f, 1);
    let mut complexes = Vec::with_capacity(n + 1);
    let mut stages = Vec::with_capacity(n + 1);
    for m in 1..=n + 1 {
        let covering = stage_covering(w, m)?;
        let cx = engine.complex(&covering, Some(2))?;
        let basis = stage_basis(&cx, m, n)?;
        let group = cx.complex().homology(1)?.canonical().clone();
        if basis.rows() != basis.cols() || (basis.rows() > 0 && basis.determinant()?.magnitude() != &1u32.into()) {
            return Err(Error::contract(format!(
                "pair cocycles do not form a basis at stage {m}"
            )));
        }
        stages.push(Stage {
            m,
            group,
            basis,
            covering,
        });
        complexes.push(cx);
    }
    let mut transitions = Vec::new();
    for from in 1..=n + 1 {
        for to in from..=n + 1 {
            let src = &complexes[from - 1];
            let tgt = &complexes[to - 1];
            // Member 0 ↦ 0, member U_k of stage `to` ↦ U_k of stage `from`.
            let member_map: Vec<usize> = std::iter::once(0).chain((to..=n).map(|k| k - from + 1)).collect();
            let hom = subnerve_map(src, tgt, &member_map, 1)?;
            let (bs, bt) = (&stages[from - 1].basis, &stages[to - 1].basis);
            let matrix = in_bases(&hom, bs, bt)?;
            let assignment: Vec<usize> = std::iter::once(0)
                .chain((from..=n).map(|k| if k >= to { k - to + 1 } else { 0 }))
                .collect();
            let iota = engine.refinement_map(src, tgt, &assignment, 1)?;
            let refinement = in_bases(&iota, bt, bs)?;
            let retracts = iota.then(&hom)?.same_map(&GroupHom::identity(&hom.target))?;
            let (ker, _) = hom.kernel()?;
            transitions.push(Transition {
                from,
                to,
                is_projection: matrix == projection_matrix(n, from, to),
                surjective: hom.is_surjective()?,
                kernel_rank: ker.rank(),
                kernel_free: ker.canonical().is_free(),
                matrix,
                refinement,
                retracts_refinement: retracts,
            });
        }
    }
    let mut by_pair = BTreeMap::new();
    for t in &transitions {
        by_pair.insert((t.from, t.to), t.matrix.clone());
    }
    let mut composes = true;
    for a in 1..=n + 1 {
        for b in a..=n + 1 {
            for c in b..=n + 1 {
                let two = by_pair[&(b, c)].try_mul(&by_pair[&(a, b)])?;
                composes &= two == by_pair[&(a, c)];
            }
        }
    }
    Ok(StageSystem {
        disks: n,
        stages,
        transitions,
        composes,
    })
}

/// Matrix of `hom` between free groups in the given class-coordinate bases.
fn in_bases(hom: &GroupHom, source_basis: &IntMatrix, target_basis: &IntMatrix) -> Result<IntMatrix> {
    if target_basis.cols() == 0 {
        return Ok(IntMatrix::zeros(0, source_basis.cols()));
    }
    let images = hom.matrix.try_mul(source_basis)?;
    coordinates_in(target_basis, &images)
}

/// One named check of the invariant suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// The invariant suite for one `X_N`.
pub fn verify_wedge(w: &WedgeSpace) -> Result<Vec<Check>> {
    let n = w.disks();
    let p = w.poset();
    let f = wedge_sheaf(w);
    let c = canonical_covering(w);
    let all = Subset::full(p.len());
    let zn = CanonicalForm::free(n);
    let mut out = Vec::new();
    let tag = |s: &str| format!("N={n} {s}");

    let z = constant_sheaf(p, &PresentedAbGroup::integers());
    let k: Vec<CanonicalForm> = (0..3)
        .map(|q| Ok(cohomology_on(&z, &all, q)?.canonical().clone()))
        .collect::<Result<_>>()?;
    out.push(Check::new(
        tag("constant sheaf acyclic"),
        k[0] == CanonicalForm::free(1) && k[1].is_trivial() && k[2].is_trivial(),
        format!("{} {} {}", k[0], k[1], k[2]),
    ));

    let corner = cech_cohomology_hq(&c, &f, 1, 1)?.canonical().clone();
    out.push(Check::new(
        tag("Čech corner Ȟ¹(ℋ¹F) = Z^N"),
        corner == zn,
        corner.to_string(),
    ));
    let cech2 = cech_cohomology(&c, &f, 2)?.canonical().clone();
    out.push(Check::new(tag("Ȟ²(F) = 0"), cech2.is_trivial(), cech2.to_string()));
    let h: Vec<CanonicalForm> = (0..3)
        .map(|q| Ok(cohomology_on(&f, &all, q)?.canonical().clone()))
        .collect::<Result<_>>()?;
    out.push(Check::new(tag("H²(F) = Z^N"), h[2] == zn, h[2].to_string()));
    out.push(Check::new(
        tag("H⁰(F) = H¹(F) = 0"),
        h[0].is_trivial() && h[1].is_trivial(),
        format!("{} {}", h[0], h[1]),
    ));

    let ses = open_closed_sequence(p, w.open_u(), &PresentedAbGroup::integers())?;
    let les = les_of_short_exact(&ses, &all)?;
    let skel1 = cohomology_on(&z, w.skeleton(), 1)?.canonical().clone();
    let delta_iso = les
        .map_from(Term::Quotient, 1)
        .map_or(Ok(false), GroupHom::is_isomorphism)?;
    out.push(Check::new(
        tag("H²(F) ≅ H¹(X¹) through the long exact sequence"),
        skel1 == zn && les.group(Term::Quotient, 1) == zn && delta_iso && les.group(Term::Sub, 2) == h[2],
        format!("H¹(X¹) = {skel1}, connecting map iso = {delta_iso}"),
    ));

    let mut opens = vec![("U0".to_string(), w.base_member(1))];
    for d in 1..=n {
        opens.push((format!("U{d}"), w.disk_member(d)));
        opens.push((format!("U0∩U{d}"), w.punctured_disk(d)));
    }
    for (label, v) in opens {
        let r = skeleton_quotient_check(p, &v, w.skeleton())?;
        out.push(Check::new(
            tag(&format!("skeleton quotient identity on {label}")),
            r.status == IdentityStatus::Checked && r.isomorphic == Some(true),
            format!(
                "{:?} lhs={:?} rhs={:?}",
                r.status,
                r.lhs.map(|g| g.to_string()),
                r.rhs.map(|g| g.to_string())
            ),
        ));
    }

    let verdict = validate_five_conditions(w, &c)?;
    out.push(Check::new(
        tag("canonical covering meets the five conditions"),
        verdict.passed(),
        format!("{:?}", verdict.failed()),
    ));

    let sys = stage_system(w)?;
    out.push(Check::new(
        tag("stage transitions are surjective projections"),
        sys.verified(),
        format!("{} transitions", sys.transitions.len()),
    ));
    Ok(out)
}

/// [`verify_wedge`] for every `N` in `1..=max_disks`.
pub fn verify_all(max_disks: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=max_disks {
        out.extend(verify_wedge(&build_wedge(n)?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::nerve;

    #[test]
    fn one_disk() {
        let w = build_wedge(1).unwrap();
        assert_eq!(w.poset().len(), 5);
        assert_eq!(w.poset().covers().len(), 6);
        assert_eq!(w.poset().labels(), ["x", "v1", "a1", "b1", "f1"]);
        assert_eq!(w.poset().subset_labels(w.skeleton()), ["x", "v1", "a1", "b1"]);
        assert!(build_wedge(0).is_err());
    }

    #[test]
    fn two_disks() {
        let w = build_wedge(2).unwrap();
        assert_eq!(w.poset().len(), 9);
        assert!(!w.disk_member(1).meets(&w.disk_member(2)));
        assert!(w.poset().leq(w.x(), w.f(2)));
        assert!(!w.poset().leq(w.v(1), w.f(2)));
    }

    #[test]
    fn sheaf_stalks() {
        let w = build_wedge(3).unwrap();
        let f = wedge_sheaf(&w);
        for n in 1..=3 {
            assert_eq!(f.stalk(w.f(n)).rank(), 1);
            assert!(f.restriction(w.a(n), w.f(n)).unwrap().is_zero());
        }
        assert!(f.stalk(w.x()).is_trivial());
    }

    #[test]
    fn canonical_covering_shape() {
        let w = build_wedge(3).unwrap();
        let c = canonical_covering(&w);
        assert_eq!(c.names(), ["U0", "U1", "U2", "U3"]);
        assert_eq!(c.intersection(&[0, 1]), w.punctured_disk(1));
        assert!(c.intersection(&[1, 2]).is_empty());
        assert_eq!(nerve(&c).edges(), &[vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(validate_five_conditions(&w, &c).unwrap().passed());
    }

    fn mutate(w: &WedgeSpace, f: impl FnOnce(&mut Vec<(String, Subset)>)) -> Covering {
        let c = canonical_covering(w);
        let mut m: Vec<(String, Subset)> = c
            .names()
            .iter()
            .cloned()
            .zip(c.members().iter().map(|o| o.subset().clone()))
            .collect();
        f(&mut m);
        Covering::new(w.poset(), m).unwrap()
    }

    #[test]
    fn mutations_name_their_condition() {
        let w = build_wedge(2).unwrap();
        let extra = mutate(&w, |m| m.push(("E".into(), w.punctured_disk(1))));
        assert!(validate_five_conditions(&w, &extra)
            .unwrap()
            .failed()
            .contains(&Condition::Contractible));
        let dup = mutate(&w, |m| m[0].1.insert(w.v(1)));
        assert!(validate_five_conditions(&w, &dup)
            .unwrap()
            .failed()
            .contains(&Condition::UniqueVertex));
        let wide = mutate(&w, |m| m[1].1.insert(w.f(2)));
        assert!(validate_five_conditions(&w, &wide)
            .unwrap()
            .failed()
            .contains(&Condition::InsideClosedCell));
        let swapped = mutate(&w, |m| m.swap(0, 1));
        assert_eq!(
            validate_five_conditions(&w, &swapped).unwrap().failed(),
            [Condition::IndexOrder]
        );
        let third = mutate(&w, |m| m.push(("E".into(), Subset::from_indices(9, [w.f(1)]))));
        assert_eq!(
            validate_five_conditions(&w, &third).unwrap().failed(),
            [Condition::NoThirdMember]
        );
        let whole = crate::cech::single_member_covering(w.poset());
        assert!(validate_five_conditions(&w, &whole)
            .unwrap()
            .failed()
            .contains(&Condition::InsideClosedCell));
    }

    #[test]
    fn stage_groups() {
        let w = build_wedge(5).unwrap();
        assert_eq!(stage_group(&w, 1).unwrap().canonical(), &CanonicalForm::free(5));
        assert_eq!(stage_group(&w, 3).unwrap().canonical(), &CanonicalForm::free(3));
        assert!(stage_group(&w, 6).unwrap().is_trivial());
        assert!(stage_covering(&w, 0).is_err());
        assert!(stage_covering(&w, 7).is_err());
    }

    #[test]
    fn stage_system_is_a_projection_tower() {
        let w = build_wedge(3).unwrap();
        let sys = stage_system(&w).unwrap();
        assert!(sys.verified());
        let t = sys.transition(1, 2).unwrap();
        assert_eq!(t.matrix, IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1]]));
        assert_eq!(
            t.refinement,
            IntMatrix::from_rows(&[vec![0, 0], vec![1, 0], vec![0, 1]])
        );
        let one = stage_system(&build_wedge(1).unwrap()).unwrap();
        assert!(one.verified());
        assert_eq!(one.transition(1, 2).unwrap().kernel_rank, 1);
    }

    #[test]
    fn invariant_suite_small() {
        let checks = verify_all(2).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
