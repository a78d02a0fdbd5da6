//! Coverings, nerves and Čech cohomology with coefficients in the
//! cohomology presheaves `ℋ^q(F) : V ↦ H^q(V, F)`.
//!
//! The Čech complex is the alternating one on strictly increasing index
//! tuples `α_0 < … < α_p` with nonempty intersection, with coboundary
//! `(dφ)_{α_0…α_{p+1}} = Σ_i (-1)^i φ_{α_0…α̂_i…α_{p+1}}|_{U_{α_0…α_{p+1}}}`.
//! Sheaf coefficients are the case `q = 0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abgroup::{check_chain_map, induced_map, CanonicalForm, Complex, GroupHom, IntMatrix, PresentedAbGroup};
use crate::cohom::{cohomology_on, CohomologyCache};
use crate::error::{Error, Result};
use crate::finspace::{FinitePoset, OpenSet, Subset};
use crate::sheaf::PosetSheaf;

/// An indexed open covering; the index order is the order of `names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    base: FinitePoset,
    names: Vec<String>,
    members: Vec<OpenSet>,
}

impl Covering {
    /// Members in index order. Each must be open, names must be distinct
    /// and the union must be the whole base.
    pub fn new(base: &FinitePoset, members: Vec<(String, Subset)>) -> Result<Self> {
        if members.is_empty() && !base.is_empty() {
            return Err(Error::input("empty covering of a nonempty space"));
        }
        let mut names = Vec::with_capacity(members.len());
        let mut sets = Vec::with_capacity(members.len());
        let mut union = Subset::empty(base.len());
        for (name, s) in members {
            if names.contains(&name) {
                return Err(Error::input(format!("duplicate member name {name}")));
            }
            let open = base
                .open_set(s)
                .map_err(|_| Error::input(format!("member {name} is not open")))?;
            union = union.union(&open);
            names.push(name);
            sets.push(open);
        }
        if union.len() != base.len() {
            let missing = base.subset_labels(&union.complement());
            return Err(Error::input(format!("members do not cover {}", missing.join(", "))));
        }
        Ok(Covering {
            base: base.clone(),
            names,
            members: sets,
        })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn members(&self) -> &[OpenSet] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &OpenSet {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::input(format!("unknown member {name}")))
    }

    /// `U_{α_0} ∩ … ∩ U_{α_p}`.
    pub fn intersection(&self, tuple: &[usize]) -> Subset {
        let mut s = Subset::full(self.base.len());
        for &a in tuple {
            s = s.intersection(&self.members[a]);
        }
        s
    }

    /// Same members under the index order given by `order` (a permutation
    /// of member positions).
    pub fn reordered(&self, order: &[usize]) -> Result<Covering> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::input("not a permutation of the members"));
            }
        }
        if order.len() != self.len() {
            return Err(Error::input("not a permutation of the members"));
        }
        Covering::new(
            &self.base,
            order
                .iter()
                .map(|&i| (self.names[i].clone(), self.members[i].subset().clone()))
                .collect(),
        )
    }

    /// Each member of `self` contained in the corresponding member of
    /// `coarse` named by `assignment`.
    pub fn check_refinement(&self, coarse: &Covering, assignment: &[usize]) -> Result<()> {
        if assignment.len() != self.len() {
            return Err(Error::input("assignment length differs from the member count"));
        }
        for (i, &a) in assignment.iter().enumerate() {
            if a >= coarse.len() || !self.members[i].is_subset_of(&coarse.members[a]) {
                return Err(Error::input(format!(
                    "member {} is not inside its assigned member",
                    self.names[i]
                )));
            }
        }
        Ok(())
    }

    /// Some assignment witnessing that `self` refines `coarse`, choosing the
    /// first containing member.
    pub fn find_refinement(&self, coarse: &Covering) -> Option<Vec<usize>> {
        self.members
            .iter()
            .map(|m| coarse.members.iter().position(|c| m.is_subset_of(c)))
            .collect()
    }

    pub fn to_json(&self) -> CoveringJson {
        CoveringJson {
            members: self
                .names
                .iter()
                .zip(&self.members)
                .map(|(n, m)| (n.clone(), self.base.subset_labels(m)))
                .collect(),
            order: self.names.clone(),
        }
    }
}

/// `{"members": {"U0": [labels…], …}, "order": ["U0", …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringJson {
    pub members: BTreeMap<String, Vec<String>>,
    pub order: Vec<String>,
}

impl CoveringJson {
    pub fn to_covering(&self, base: &FinitePoset) -> Result<Covering> {
        if self.order.len() != self.members.len() {
            return Err(Error::input("order does not list every member exactly once"));
        }
        let mut members = Vec::with_capacity(self.order.len());
        for name in &self.order {
            let labels = self
                .members
                .get(name)
                .ok_or_else(|| Error::input(format!("order names unknown member {name}")))?;
            members.push((name.clone(), base.subset_from_labels(labels)?));
        }
        Covering::new(base, members)
    }
}

/// The covering by the minimal open neighbourhoods `U_p`, one per point,
/// in element order. Every covering is refined by it.
pub fn min_open_covering(base: &FinitePoset) -> Result<Covering> {
    let members = (0..base.len())
        .map(|p| Ok((format!("U_{}", base.label(p)), base.min_open(p)?.subset().clone())))
        .collect::<Result<Vec<_>>>()?;
    Covering::new(base, members)
}

pub fn single_member_covering(base: &FinitePoset) -> Covering {
    Covering::new(base, vec![("X".to_string(), Subset::full(base.len()))]).expect("whole space covers")
}

/// A random covering: a few random up-sets, then the up-closure of each
/// still uncovered point together with a random partner.
pub fn random_covering<R: Rng>(rng: &mut R, base: &FinitePoset, max_members: usize) -> Covering {
    let n = base.len();
    let mut members: Vec<Subset> = Vec::new();
    let draws = rng.gen_range(1..=max_members.max(1));
    for _ in 0..draws {
        let mut seed = Subset::empty(n);
        for p in 0..n {
            if rng.gen_bool(0.25) {
                seed.insert(p);
            }
        }
        let open = base.up_closure(&seed).subset().clone();
        if !open.is_empty() && !members.contains(&open) {
            members.push(open);
        }
    }
    let mut covered = members.iter().fold(Subset::empty(n), |acc, m| acc.union(m));
    let mut uncovered: Vec<usize> = covered.complement().members();
    uncovered.shuffle(rng);
    for p in uncovered {
        if covered.contains(p) {
            continue;
        }
        let mut seed = Subset::from_indices(n, [p]);
        if n > 1 && rng.gen_bool(0.5) {
            seed.insert(rng.gen_range(0..n));
        }
        let open = base.up_closure(&seed).subset().clone();
        covered = covered.union(&open);
        if !members.contains(&open) {
            members.push(open);
        }
    }
    members.shuffle(rng);
    let named = members
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("U{i}"), m))
        .collect();
    Covering::new(base, named).expect("constructed to cover")
}

/// Index tuples with nonempty intersection, by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl Nerve {
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, Vec::len)
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        self.simplices.get(1).map_or(&[], Vec::as_slice)
    }
}

/// The nerve up to dimension `top` (all of it when `None`).
pub fn nerve_up_to(c: &Covering, top: Option<usize>) -> Nerve {
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, Subset)> = (0..c.len())
        .rev()
        .filter(|&i| !c.member(i).is_empty())
        .map(|i| (vec![i], c.member(i).subset().clone()))
        .collect();
    while let Some((tuple, inter)) = stack.pop() {
        let dim = tuple.len() - 1;
        if simplices.len() <= dim {
            simplices.resize(dim + 1, Vec::new());
        }
        simplices[dim].push(tuple.clone());
        if top.is_some_and(|t| dim >= t) {
            continue;
        }
        let last = *tuple.last().expect("non-empty");
        for j in (last + 1..c.len()).rev() {
            let next = inter.intersection(c.member(j));
            if !next.is_empty() {
                let mut t = tuple.clone();
                t.push(j);
                stack.push((t, next));
            }
        }
    }
    for level in &mut simplices {
        level.sort();
    }
    Nerve { simplices }
}

pub fn nerve(c: &Covering) -> Nerve {
    nerve_up_to(c, None)
}

/// Čech complex of a covering with coefficients `ℋ^q(F)`.
#[derive(Debug, Clone)]
pub struct CechComplex {
    covering: Covering,
    q: usize,
    nerve: Nerve,
    index: Vec<HashMap<Vec<usize>, usize>>,
    offsets: Vec<Vec<usize>>,
    intersections: Vec<Vec<Subset>>,
    coefficients: Vec<Vec<PresentedAbGroup>>,
    complex: Complex,
}

impl CechComplex {
    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn coefficient_degree(&self) -> usize {
        self.q
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn simplex_index(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    /// First generator of the summand of `simplex` inside `C^p`.
    pub fn offset(&self, simplex: &[usize]) -> Option<usize> {
        let i = self.simplex_index(simplex)?;
        Some(self.offsets[simplex.len() - 1][i])
    }

    pub fn coefficient(&self, simplex: &[usize]) -> Option<&PresentedAbGroup> {
        let i = self.simplex_index(simplex)?;
        Some(&self.coefficients[simplex.len() - 1][i])
    }

    pub fn intersection(&self, simplex: &[usize]) -> Option<&Subset> {
        let i = self.simplex_index(simplex)?;
        Some(&self.intersections[simplex.len() - 1][i])
    }

    pub fn cohomology(&self, p: usize) -> Result<PresentedAbGroup> {
        Ok(self.complex.homology(p)?.group().clone())
    }

    /// Cochain in `C^p` that is the `g`-th generator of the coefficient at
    /// `simplex` and zero elsewhere.
    pub fn unit_cochain(&self, simplex: &[usize], g: usize) -> Result<Vec<num_bigint::BigInt>> {
        let p = simplex
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::input("empty simplex"))?;
        let off = self
            .offset(simplex)
            .ok_or_else(|| Error::input("simplex not in the nerve"))?;
        let mut v = vec![num_bigint::BigInt::from(0); self.complex.generators(p)];
        v[off + g] = 1.into();
        Ok(v)
    }
}

/// Builds Čech complexes and the maps between them over one sheaf and one
/// coefficient degree, sharing cohomology computations of intersections.
pub struct CechEngine<'a> {
    cache: CohomologyCache<'a>,
}

impl<'a> CechEngine<'a> {
    pub fn new(sheaf: &'a PosetSheaf, q: usize) -> Self {
        CechEngine {
            cache: CohomologyCache::new(sheaf, q),
        }
    }

    /// Čech complex truncated above degree `top` (untruncated for `None`).
    pub fn complex(&mut self, c: &Covering, top: Option<usize>) -> Result<CechComplex> {
        if c.base() != self.cache.sheaf().base() {
            return Err(Error::input("covering and sheaf live on different spaces"));
        }
        let nerve = nerve_up_to(c, top);
        let mut index = Vec::new();
        let mut offsets = Vec::new();
        let mut intersections = Vec::new();
        let mut coefficients = Vec::new();
        let mut groups = Vec::new();
        for level in &nerve.simplices {
            let mut off = Vec::with_capacity(level.len());
            let mut inters = Vec::with_capacity(level.len());
            let mut coeffs = Vec::with_capacity(level.len());
            let mut total = 0;
            for s in level {
                let inter = c.intersection(s);
                let g = self.cache.group(&inter)?;
                off.push(total);
                total += g.generators();
                inters.push(inter);
                coeffs.push(g);
            }
            groups.push(PresentedAbGroup::direct_sum(&coeffs.iter().collect::<Vec<_>>()));
            index.push(
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect::<HashMap<_, _>>(),
            );
            offsets.push(off);
            intersections.push(inters);
            coefficients.push(coeffs);
        }
        let mut diffs = Vec::new();
        for p in 0..nerve.simplices.len().saturating_sub(1) {
            let mut d = IntMatrix::zeros(groups[p + 1].generators(), groups[p].generators());
            for (r, tau) in nerve.simplices[p + 1].iter().enumerate() {
                for i in 0..tau.len() {
                    let mut face = tau.clone();
                    face.remove(i);
                    let f = index[p][&face];
                    let res = self.cache.restriction(&intersections[p][f], &intersections[p + 1][r])?;
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    d.add_block(offsets[p + 1][r], offsets[p][f], &res.matrix, sign);
                }
            }
            diffs.push(d);
        }
        let complex = Complex::new(groups, diffs)?;
        Ok(CechComplex {
            covering: c.clone(),
            q: self.cache.degree(),
            nerve,
            index,
            offsets,
            intersections,
            coefficients,
            complex,
        })
    }

    /// Chain map `C(coarse) → C(fine)` of a refinement with witness
    /// `assignment` (fine member ↦ containing coarse member), in degrees
    /// `0..=top`.
    pub fn refinement_chain_maps(
        &mut self,
        fine: &CechComplex,
        coarse: &CechComplex,
        assignment: &[usize],
        top: usize,
    ) -> Result<Vec<IntMatrix>> {
        fine.covering.check_refinement(&coarse.covering, assignment)?;
        let mut maps = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let mut m = IntMatrix::zeros(fine.complex.generators(p), coarse.complex.generators(p));
            for tau in fine.nerve.simplices.get(p).into_iter().flatten() {
                let Some((sigma, sign)) = sorted_with_sign(tau.iter().map(|&b| assignment[b]).collect()) else {
                    continue;
                };
                let ci = coarse
                    .simplex_index(&sigma)
                    .ok_or_else(|| Error::contract("image of a nerve simplex is not in the coarse nerve"))?;
                let fi = fine.index[p][tau];
                let res = self
                    .cache
                    .restriction(&coarse.intersections[p][ci], &fine.intersections[p][fi])?;
                m.add_block(fine.offsets[p][fi], coarse.offsets[p][ci], &res.matrix, sign);
            }
            maps.push(m);
        }
        Ok(maps)
    }

    /// `Ȟ^p(coarse) → Ȟ^p(fine)` induced by a refinement.
    pub fn refinement_map(
        &mut self,
        fine: &CechComplex,
        coarse: &CechComplex,
        assignment: &[usize],
        p: usize,
    ) -> Result<GroupHom> {
        let maps = self.refinement_chain_maps(fine, coarse, assignment, p + 1)?;
        induce(coarse, fine, &maps, p)
    }
}

fn induce(src: &CechComplex, tgt: &CechComplex, maps: &[IntMatrix], p: usize) -> Result<GroupHom> {
    let mut degrees = vec![p];
    if p > 0 {
        degrees.push(p - 1);
    }
    check_chain_map(src.complex(), tgt.complex(), maps, &degrees)?;
    induced_map(&maps[p], &src.complex().homology(p)?, &tgt.complex().homology(p)?)
}

/// Sorts distinct indices, returning the sign of the sorting permutation;
/// `None` on a repeated index.
fn sorted_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Restriction of Čech cochains along an inclusion of nerves: the target
/// member `j` corresponds to the source member `member_map[j]`. A target
/// simplex receives the source coefficient unchanged when both simplices
/// have the same intersection, and zero otherwise.
///
/// Returns the chain maps `C(source) → C(target)` in degrees `0..=top`;
/// callers verify the chain-map property.
pub fn subnerve_restriction(
    source: &CechComplex,
    target: &CechComplex,
    member_map: &[usize],
    top: usize,
) -> Result<Vec<IntMatrix>> {
    if member_map.len() != target.covering.len() || member_map.iter().any(|&i| i >= source.covering.len()) {
        return Err(Error::input("member map does not match the coverings"));
    }
    let mut maps = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let mut m = IntMatrix::zeros(target.complex.generators(p), source.complex.generators(p));
        for tau in target.nerve.simplices.get(p).into_iter().flatten() {
            let Some((sigma, sign)) = sorted_with_sign(tau.iter().map(|&b| member_map[b]).collect()) else {
                continue;
            };
            let Some(si) = source.simplex_index(&sigma) else {
                continue;
            };
            let ti = target.index[p][tau];
            if source.intersections[p][si] != target.intersections[p][ti] {
                continue;
            }
            let n = target.coefficients[p][ti].generators();
            m.add_block(
                target.offsets[p][ti],
                source.offsets[p][si],
                &IntMatrix::identity(n),
                sign,
            );
        }
        maps.push(m);
    }
    Ok(maps)
}

/// The map on `Ȟ^p` induced by [`subnerve_restriction`], after checking
/// the chain-map squares around degree `p`.
pub fn subnerve_map(source: &CechComplex, target: &CechComplex, member_map: &[usize], p: usize) -> Result<GroupHom> {
    let maps = subnerve_restriction(source, target, member_map, p + 1)?;
    induce(source, target, &maps, p)
}

pub fn cech_complex_hq(c: &Covering, f: &PosetSheaf, q: usize) -> Result<CechComplex> {
    CechEngine::new(f, q).complex(c, None)
}

/// Čech complex with coefficients in the sheaf itself, `V ↦ H^0(V, F)`.
pub fn cech_complex_sheaf(c: &Covering, f: &PosetSheaf) -> Result<CechComplex> {
    cech_complex_hq(c, f, 0)
}

/// `Ȟ^p(c, ℋ^q(F))`.
pub fn cech_cohomology_hq(c: &Covering, f: &PosetSheaf, q: usize, p: usize) -> Result<PresentedAbGroup> {
    CechEngine::new(f, q).complex(c, Some(p + 1))?.cohomology(p)
}

/// `Ȟ^p(c, F)`.
pub fn cech_cohomology(c: &Covering, f: &PosetSheaf, p: usize) -> Result<PresentedAbGroup> {
    cech_cohomology_hq(c, f, 0, p)
}

/// `Ȟ^p(coarse, ℋ^q F) → Ȟ^p(fine, ℋ^q F)` for a refinement witnessed by
/// `assignment`.
pub fn refinement_map(
    fine: &Covering,
    coarse: &Covering,
    assignment: &[usize],
    f: &PosetSheaf,
    q: usize,
    p: usize,
) -> Result<GroupHom> {
    fine.check_refinement(coarse, assignment)?;
    let mut engine = CechEngine::new(f, q);
    let cf = engine.complex(fine, Some(p + 1))?;
    let cc = engine.complex(coarse, Some(p + 1))?;
    engine.refinement_map(&cf, &cc, assignment, p)
}

/// Low-degree comparison of Čech and sheaf cohomology for one covering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    /// `Ȟ^p(c, F)` for `p = 0, 1, 2`.
    pub cech: Vec<CanonicalForm>,
    /// `Ȟ^1(c, ℋ^1 F)`.
    pub cech_h1_coefficients: CanonicalForm,
    /// `H^p(X, F)` for `p = 0, 1, 2`.
    pub derived: Vec<CanonicalForm>,
    /// `Ȟ^0 ≅ H^0`.
    pub h0_agrees: bool,
    /// `rank Ȟ² + rank Ȟ¹(ℋ¹) = rank H²`.
    pub rank_consistent: bool,
    /// Torsion orders compatible with `0 → Ȟ² → H² → Ȟ¹(ℋ¹) → 0`.
    pub torsion_consistent: bool,
    /// `Ȟ² ≇ H²`.
    pub gap: bool,
}

impl ComparisonReport {
    /// Text table keyed by `(p, q)`.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<22} {:>10}", "group", "value");
        for (p, g) in self.cech.iter().enumerate() {
            let _ = writeln!(out, "{:<22} {:>10}", format!("Čech (p={p}, q=0)"), g.to_string());
        }
        let _ = writeln!(
            out,
            "{:<22} {:>10}",
            "Čech (p=1, q=1)",
            self.cech_h1_coefficients.to_string()
        );
        for (p, g) in self.derived.iter().enumerate() {
            let _ = writeln!(out, "{:<22} {:>10}", format!("sheaf H^{p}"), g.to_string());
        }
        let _ = writeln!(out, "{:<22} {:>10}", "H0 agrees", self.h0_agrees);
        let _ = writeln!(out, "{:<22} {:>10}", "ranks consistent", self.rank_consistent);
        let _ = writeln!(out, "{:<22} {:>10}", "torsion consistent", self.torsion_consistent);
        let _ = writeln!(out, "{:<22} {:>10}", "degree-2 gap", self.gap);
        out
    }
}

pub fn covering_comparison_report(c: &Covering, f: &PosetSheaf) -> Result<ComparisonReport> {
    let sheaf_cx = CechEngine::new(f, 0).complex(c, Some(3))?;
    let cech = (0..3)
        .map(|p| Ok(sheaf_cx.cohomology(p)?.canonical().clone()))
        .collect::<Result<Vec<_>>>()?;
    let cech_h1_coefficients = cech_cohomology_hq(c, f, 1, 1)?.canonical().clone();
    let whole = Subset::full(f.base().len());
    let derived = (0..3)
        .map(|q| Ok(cohomology_on(f, &whole, q)?.canonical().clone()))
        .collect::<Result<Vec<_>>>()?;
    let (a, b, cc) = (&cech[2], &derived[2], &cech_h1_coefficients);
    let rank_consistent = a.rank + cc.rank == b.rank;
    let ta = a.torsion_order();
    let tb = b.torsion_order();
    let tc = cc.torsion_order();
    let torsion_consistent = (&tb % &ta) == 0.into() && ((&ta * &tc) % &tb) == 0.into();
    Ok(ComparisonReport {
        h0_agrees: cech[0] == derived[0],
        gap: cech[2] != derived[2],
        cech,
        cech_h1_coefficients,
        derived,
        rank_consistent,
        torsion_consistent,
    })
}
