//! Sheaf cohomology on finite posets through the canonical cochain complex.
//!
//! For a sheaf `F` on a poset and a subset `S` of its elements, the degree
//! `k` cochains are `⊕ F(p_k)` over strict chains `p_0 < … < p_k` inside
//! `S`, with differential
//!
//! ```text
//! (dφ)(p_0 < … < p_{k+1}) = Σ_{i ≤ k} (-1)^i φ(…p̂_i…) + (-1)^{k+1} ρ(p_k, p_{k+1}) φ(p_0 < … < p_k)
//! ```
//!
//! `H^0` is the group of compatible families, i.e. sections over `S` when `S`
//! is open, and the higher groups are its derived functors. Degrees above
//! the height of `S` are zero.

use std::collections::HashMap;

use serde::Serialize;

use crate::abgroup::{
    check_chain_map, connecting_map, induced_map, is_exact_at, CanonicalForm, Complex, GroupHom, Homology, IntMatrix,
    PresentedAbGroup,
};
use crate::error::{Error, Result};
use crate::finspace::{FinitePoset, Subset};
use crate::sheaf::{constant_sheaf, extension_by_zero, PosetSheaf, SheafMorphism, ShortExactSequence};

/// Canonical cochain complex of a sheaf over a subset of its base.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    support: Subset,
    chains: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    offsets: Vec<Vec<usize>>,
    complex: Complex,
}

impl CochainComplex {
    pub fn build(f: &PosetSheaf, support: &Subset) -> Result<Self> {
        let base = f.base();
        if support.universe() != base.len() {
            return Err(Error::input("support subset belongs to a different poset"));
        }
        let chains = base.chains_by_degree(support);
        let mut offsets = Vec::with_capacity(chains.len());
        let mut groups = Vec::with_capacity(chains.len());
        let mut index = Vec::with_capacity(chains.len());
        for deg in &chains {
            let mut off = Vec::with_capacity(deg.len());
            let mut total = 0;
            for c in deg {
                off.push(total);
                total += f.stalk(*c.last().expect("chains are non-empty")).generators();
            }
            let parts: Vec<&PresentedAbGroup> = deg.iter().map(|c| f.stalk(*c.last().expect("non-empty"))).collect();
            groups.push(PresentedAbGroup::direct_sum(&parts));
            offsets.push(off);
            index.push(
                deg.iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i))
                    .collect::<HashMap<_, _>>(),
            );
        }
        let mut diffs = Vec::with_capacity(chains.len().saturating_sub(1));
        for k in 0..chains.len().saturating_sub(1) {
            let mut d = IntMatrix::zeros(groups[k + 1].generators(), groups[k].generators());
            for (row_chain, tau) in chains[k + 1].iter().enumerate() {
                let r0 = offsets[k + 1][row_chain];
                let top = tau[k + 1];
                for i in 0..=k + 1 {
                    let mut face = tau.clone();
                    face.remove(i);
                    let col_chain = index[k][&face];
                    let c0 = offsets[k][col_chain];
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    if i <= k {
                        d.add_block(r0, c0, &IntMatrix::identity(f.stalk(top).generators()), sign);
                    } else {
                        d.add_block(r0, c0, &f.restriction(tau[k], top)?, sign);
                    }
                }
            }
            diffs.push(d);
        }
        let complex = Complex::new(groups, diffs)?;
        Ok(CochainComplex {
            support: support.clone(),
            chains,
            index,
            offsets,
            complex,
        })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn support(&self) -> &Subset {
        &self.support
    }

    pub fn chains(&self, k: usize) -> &[Vec<usize>] {
        self.chains.get(k).map_or(&[], Vec::as_slice)
    }

    /// Highest degree with a nonzero cochain group index set.
    pub fn top_degree(&self) -> Option<usize> {
        self.chains.len().checked_sub(1)
    }

    pub fn homology(&self, q: usize) -> Result<Homology> {
        self.complex.homology(q)
    }

    /// Degreewise projection onto the cochains of `smaller`, whose support
    /// must be contained in this one.
    pub fn projection_to(&self, smaller: &CochainComplex, k: usize) -> Result<IntMatrix> {
        if !smaller.support.is_subset_of(&self.support) {
            return Err(Error::input("projection target is not a subcomplex"));
        }
        let mut m = IntMatrix::zeros(smaller.complex.generators(k), self.complex.generators(k));
        for (j, c) in smaller.chains(k).iter().enumerate() {
            let i = self.index[k][c];
            let rows = smaller.block_len(k, j);
            m.add_block(smaller.offsets[k][j], self.offsets[k][i], &IntMatrix::identity(rows), 1);
        }
        Ok(m)
    }

    fn block_len(&self, k: usize, j: usize) -> usize {
        let next = self.offsets[k]
            .get(j + 1)
            .copied()
            .unwrap_or_else(|| self.complex.generators(k));
        next - self.offsets[k][j]
    }

    /// Degree-`k` component of the cochain map induced by a sheaf morphism
    /// whose source and target carry `self` and `target`.
    pub fn morphism_chain_map(&self, target: &CochainComplex, m: &SheafMorphism, k: usize) -> Result<IntMatrix> {
        if self.support != target.support {
            return Err(Error::input("chain map between complexes on different supports"));
        }
        let mut out = IntMatrix::zeros(target.complex.generators(k), self.complex.generators(k));
        for (j, c) in self.chains(k).iter().enumerate() {
            let t = target.index[k][c];
            out.add_block(
                target.offsets[k][t],
                self.offsets[k][j],
                m.component(*c.last().expect("non-empty")),
                1,
            );
        }
        Ok(out)
    }

    pub fn to_json(&self, base: &FinitePoset) -> CochainComplexJson {
        let degrees = self
            .chains
            .iter()
            .enumerate()
            .map(|(k, cs)| DegreeJson {
                degree: k,
                chains: cs
                    .iter()
                    .map(|c| c.iter().map(|&p| base.label(p)).collect::<Vec<_>>().join("<"))
                    .collect(),
                group: self.complex.group(k).canonical().clone(),
                generators: self.complex.generators(k),
            })
            .collect();
        CochainComplexJson {
            degrees,
            differentials: self.complex.diffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeJson {
    pub degree: usize,
    pub chains: Vec<String>,
    pub group: CanonicalForm,
    pub generators: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CochainComplexJson {
    pub degrees: Vec<DegreeJson>,
    pub differentials: Vec<IntMatrix>,
}

/// Cochain complex over the whole base.
pub fn cochain_complex(f: &PosetSheaf) -> Result<CochainComplex> {
    CochainComplex::build(f, &Subset::full(f.base().len()))
}

/// `H^q(S, F)` for the subspace `S` (any subset; for open `S` this is the
/// cohomology of the open subspace).
pub fn cohomology_on(f: &PosetSheaf, s: &Subset, q: usize) -> Result<Homology> {
    CochainComplex::build(f, s)?.homology(q)
}

/// `H^q(X, F)` as a group.
pub fn cohomology(f: &PosetSheaf, q: usize) -> Result<PresentedAbGroup> {
    Ok(cohomology_on(f, &Subset::full(f.base().len()), q)?.group().clone())
}

/// The map `H^q(V, F) → H^q(W, F)` for open `W ⊆ V`, induced by projecting
/// onto chains inside `W`.
pub fn restriction_induced(f: &PosetSheaf, v: &Subset, w: &Subset, q: usize) -> Result<GroupHom> {
    let base = f.base();
    base.open_set(v.clone())?;
    base.open_set(w.clone())?;
    if !w.is_subset_of(v) {
        return Err(Error::input("restriction target is not contained in the source"));
    }
    let cv = CochainComplex::build(f, v)?;
    let cw = CochainComplex::build(f, w)?;
    restriction_between(&cv, &cw, q)
}

/// Induced map on `H^q` between already built complexes, `small ⊆ big`.
pub fn restriction_between(big: &CochainComplex, small: &CochainComplex, q: usize) -> Result<GroupHom> {
    let maps = (0..=q + 1)
        .map(|k| big.projection_to(small, k))
        .collect::<Result<Vec<_>>>()?;
    let mut degrees = vec![q];
    if q > 0 {
        degrees.push(q - 1);
    }
    check_chain_map(big.complex(), small.complex(), &maps, &degrees)?;
    induced_map(&maps[q], &big.homology(q)?, &small.homology(q)?)
}

/// Cohomology of one sheaf over many supports, with cached complexes.
pub struct CohomologyCache<'a> {
    sheaf: &'a PosetSheaf,
    q: usize,
    entries: HashMap<Subset, (CochainComplex, Homology)>,
}

impl<'a> CohomologyCache<'a> {
    pub fn new(sheaf: &'a PosetSheaf, q: usize) -> Self {
        CohomologyCache {
            sheaf,
            q,
            entries: HashMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn sheaf(&self) -> &PosetSheaf {
        self.sheaf
    }

    fn ensure(&mut self, s: &Subset) -> Result<()> {
        if !self.entries.contains_key(s) {
            let cx = CochainComplex::build(self.sheaf, s)?;
            let h = cx.homology(self.q)?;
            self.entries.insert(s.clone(), (cx, h));
        }
        Ok(())
    }

    pub fn homology(&mut self, s: &Subset) -> Result<&Homology> {
        self.ensure(s)?;
        Ok(&self.entries[s].1)
    }

    pub fn group(&mut self, s: &Subset) -> Result<PresentedAbGroup> {
        Ok(self.homology(s)?.group().clone())
    }

    /// `H^q(big) → H^q(small)` for `small ⊆ big`.
    pub fn restriction(&mut self, big: &Subset, small: &Subset) -> Result<GroupHom> {
        self.ensure(big)?;
        self.ensure(small)?;
        let (cb, hb) = &self.entries[big];
        let (cs, hs) = &self.entries[small];
        let q = self.q;
        let maps = (0..=q + 1)
            .map(|k| cb.projection_to(cs, k))
            .collect::<Result<Vec<_>>>()?;
        let mut degrees = vec![q];
        if q > 0 {
            degrees.push(q - 1);
        }
        check_chain_map(cb.complex(), cs.complex(), &maps, &degrees)?;
        induced_map(&maps[q], hb, hs)
    }
}

/// Which of the three sheaves of a short exact sequence a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Term {
    Sub,
    Middle,
    Quotient,
}

#[derive(Debug, Clone, Serialize)]
pub struct LesNode {
    pub term: Term,
    pub degree: usize,
    pub group: CanonicalForm,
}

impl LesNode {
    pub fn label(&self) -> String {
        let name = match self.term {
            Term::Sub => "A",
            Term::Middle => "B",
            Term::Quotient => "C",
        };
        format!("H^{}({name})", self.degree)
    }
}

/// `0 → H^0(A) → H^0(B) → H^0(C) → H^1(A) → … → H^top(C) → H^{top+1}(A)`.
///
/// `maps[i]` goes from `nodes[i]` to `nodes[i + 1]`; `connecting[i]` flags
/// the snake-lemma maps. Exactness at every node is verified on
/// construction.
#[derive(Debug, Clone)]
pub struct LongExactSequence {
    pub nodes: Vec<LesNode>,
    pub maps: Vec<GroupHom>,
    pub connecting: Vec<bool>,
}

impl LongExactSequence {
    pub fn node_index(&self, term: Term, degree: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.term == term && n.degree == degree)
    }

    pub fn group(&self, term: Term, degree: usize) -> CanonicalForm {
        self.node_index(term, degree)
            .map_or_else(CanonicalForm::trivial, |i| self.nodes[i].group.clone())
    }

    /// Map leaving the given node, if any.
    pub fn map_from(&self, term: Term, degree: usize) -> Option<&GroupHom> {
        self.node_index(term, degree).and_then(|i| self.maps.get(i))
    }

    /// Re-checks exactness at every node; the first entry is injectivity of
    /// `H^0(A) → H^0(B)`.
    pub fn exactness(&self) -> Result<Vec<bool>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let first = &self.maps[0];
        out.push(first.is_injective()?);
        for pair in self.maps.windows(2) {
            out.push(is_exact_at(&pair[0], &pair[1])?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> LesJson {
        LesJson {
            nodes: self.nodes.iter().map(|n| (n.label(), n.group.clone())).collect(),
            maps: self
                .maps
                .iter()
                .zip(&self.connecting)
                .map(|(m, &c)| LesMapJson {
                    matrix: m.matrix.clone(),
                    connecting: c,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LesMapJson {
    pub matrix: IntMatrix,
    pub connecting: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LesJson {
    pub nodes: Vec<(String, CanonicalForm)>,
    pub maps: Vec<LesMapJson>,
}

/// Long exact cohomology sequence over the open subspace `v`.
pub fn les_of_short_exact(ses: &ShortExactSequence, v: &Subset) -> Result<LongExactSequence> {
    let base = ses.middle().base();
    base.open_set(v.clone())?;
    if !ses.exactness()?.exact {
        return Err(Error::input("sequence is not exact"));
    }
    let (a, b, c) = (ses.left(), ses.middle(), ses.right());
    let ca = CochainComplex::build(a, v)?;
    let cb = CochainComplex::build(b, v)?;
    let cc = CochainComplex::build(c, v)?;
    let levels = ca.chains.len();
    let f: Vec<IntMatrix> = (0..=levels)
        .map(|k| ca.morphism_chain_map(&cb, &ses.sub, k))
        .collect::<Result<_>>()?;
    let g: Vec<IntMatrix> = (0..=levels)
        .map(|k| cb.morphism_chain_map(&cc, &ses.quotient, k))
        .collect::<Result<_>>()?;
    let all: Vec<usize> = (0..levels).collect();
    check_chain_map(ca.complex(), cb.complex(), &f, &all)?;
    check_chain_map(cb.complex(), cc.complex(), &g, &all)?;

    let mut nodes = Vec::new();
    let mut maps = Vec::new();
    let mut connecting = Vec::new();
    let ha: Vec<Homology> = (0..=levels).map(|q| ca.homology(q)).collect::<Result<_>>()?;
    let hb: Vec<Homology> = (0..levels).map(|q| cb.homology(q)).collect::<Result<_>>()?;
    let hc: Vec<Homology> = (0..levels).map(|q| cc.homology(q)).collect::<Result<_>>()?;
    for q in 0..levels {
        nodes.push(LesNode {
            term: Term::Sub,
            degree: q,
            group: ha[q].canonical().clone(),
        });
        nodes.push(LesNode {
            term: Term::Middle,
            degree: q,
            group: hb[q].canonical().clone(),
        });
        nodes.push(LesNode {
            term: Term::Quotient,
            degree: q,
            group: hc[q].canonical().clone(),
        });
        maps.push(induced_map(&f[q], &ha[q], &hb[q])?);
        connecting.push(false);
        maps.push(induced_map(&g[q], &hb[q], &hc[q])?);
        connecting.push(false);
        maps.push(connecting_map(
            cb.complex(),
            cc.complex(),
            &f[q + 1],
            &g[q],
            q,
            &hc[q],
            &ha[q + 1],
        )?);
        connecting.push(true);
    }
    nodes.push(LesNode {
        term: Term::Sub,
        degree: levels,
        group: ha[levels].canonical().clone(),
    });
    if maps.is_empty() {
        // Empty support: the single node H^0(A) = 0.
        maps.push(GroupHom::zero(ha[0].group(), ha[0].group()));
        connecting.push(false);
    }
    let les = LongExactSequence {
        nodes,
        maps,
        connecting,
    };
    if let Some(bad) = les.exactness()?.iter().position(|ok| !ok) {
        return Err(Error::contract(format!(
            "long exact sequence fails at {}",
            les.nodes[bad].label()
        )));
    }
    Ok(les)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityStatus {
    /// Hypothesis holds and both sides were computed.
    Checked,
    /// `H^1(V, ℤ) ≠ 0`; no verdict.
    HypothesisNotMet,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonQuotientOutcome {
    pub status: IdentityStatus,
    /// `H^1(V, ℤ)`, the hypothesis group.
    pub h1_constant: CanonicalForm,
    /// `H^1(V, j_! ℤ_U)` for `U` the complement of the skeleton.
    pub lhs: Option<CanonicalForm>,
    /// `coker(H^0(V, ℤ) → H^0(V ∩ skeleton, ℤ))`.
    pub rhs: Option<CanonicalForm>,
    pub isomorphic: Option<bool>,
}

/// For open `V` with `H^1(V, ℤ) = 0`, compares `H^1(V, j_! ℤ_U)` with
/// `H^0(V ∩ Z, ℤ) / H^0(V, ℤ)` where `Z` is the closed `skeleton` and `U`
/// its open complement.
pub fn skeleton_quotient_check(base: &FinitePoset, v: &Subset, skeleton: &Subset) -> Result<SkeletonQuotientOutcome> {
    base.open_set(v.clone())?;
    base.closed_set(skeleton.clone())?;
    let z = PresentedAbGroup::integers();
    let constant = constant_sheaf(base, &z);
    let cv = CochainComplex::build(&constant, v)?;
    let h1 = cv.homology(1)?.canonical().clone();
    if !h1.is_trivial() {
        return Ok(SkeletonQuotientOutcome {
            status: IdentityStatus::HypothesisNotMet,
            h1_constant: h1,
            lhs: None,
            rhs: None,
            isomorphic: None,
        });
    }
    let f = extension_by_zero(base, &skeleton.complement(), &z)?;
    let lhs = cohomology_on(&f, v, 1)?.canonical().clone();
    let vz = v.intersection(skeleton);
    let cvz = CochainComplex::build(&constant, &vz)?;
    let map = restriction_between(&cv, &cvz, 0)?;
    let rhs = map.cokernel()?.canonical().clone();
    Ok(SkeletonQuotientOutcome {
        status: IdentityStatus::Checked,
        h1_constant: h1,
        isomorphic: Some(lhs == rhs),
        lhs: Some(lhs),
        rhs: Some(rhs),
    })
}
