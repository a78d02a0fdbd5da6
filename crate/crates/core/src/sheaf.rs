//! Sheaves of abelian groups on finite posets.
//!
//! A sheaf on a finite Alexandrov space is the same thing as a functor on
//! the poset: a stalk per element and a restriction `stalk(p) → stalk(q)`
//! for every `p ≤ q` (the minimal open of `q` sits inside that of `p`).
//! Restrictions are supplied on cover relations only; composites are derived
//! once at construction, where functoriality is also checked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abgroup::{is_exact_at, CanonicalForm, GroupHom, IntMatrix, PresentedAbGroup};
use crate::error::{Error, Result};
use crate::finspace::{FinitePoset, Subset};

#[derive(Debug, Clone)]
pub struct PosetSheaf {
    base: FinitePoset,
    stalks: Vec<PresentedAbGroup>,
    cover_maps: BTreeMap<(usize, usize), IntMatrix>,
    restrictions: BTreeMap<(usize, usize), IntMatrix>,
}

impl PosetSheaf {
    /// `cover_maps` must hold a matrix for every cover relation of `base`.
    pub fn new(
        base: FinitePoset,
        stalks: Vec<PresentedAbGroup>,
        cover_maps: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Self> {
        if stalks.len() != base.len() {
            return Err(Error::input(format!(
                "{} stalks for {} elements",
                stalks.len(),
                base.len()
            )));
        }
        for &(p, q) in base.covers() {
            let m = cover_maps
                .get(&(p, q))
                .ok_or_else(|| Error::input(format!("missing restriction {}<{}", base.label(p), base.label(q))))?;
            GroupHom::new(stalks[p].clone(), stalks[q].clone(), m.clone())
                .map_err(|e| Error::input(format!("restriction {}<{}: {e}", base.label(p), base.label(q))))?;
        }
        if let Some(&(p, q)) = cover_maps.keys().find(|k| !base.covers().contains(k)) {
            return Err(Error::input(format!("restriction given on non-cover pair ({p}, {q})")));
        }
        let restrictions = derive_composites(&base, &stalks, &cover_maps)?;
        Ok(PosetSheaf {
            base,
            stalks,
            cover_maps,
            restrictions,
        })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn stalk(&self, p: usize) -> &PresentedAbGroup {
        &self.stalks[p]
    }

    pub fn stalks(&self) -> &[PresentedAbGroup] {
        &self.stalks
    }

    /// Matrix of `stalk(p) → stalk(q)` for `p ≤ q`.
    pub fn restriction(&self, p: usize, q: usize) -> Result<IntMatrix> {
        if p == q {
            return Ok(IntMatrix::identity(self.stalks[p].generators()));
        }
        self.restrictions
            .get(&(p, q))
            .cloned()
            .ok_or_else(|| Error::input(format!("{} is not below {}", self.base.label(p), self.base.label(q))))
    }

    pub fn restriction_hom(&self, p: usize, q: usize) -> Result<GroupHom> {
        Ok(GroupHom {
            source: self.stalks[p].clone(),
            target: self.stalks[q].clone(),
            matrix: self.restriction(p, q)?,
        })
    }

    pub fn cover_maps(&self) -> &BTreeMap<(usize, usize), IntMatrix> {
        &self.cover_maps
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(PresentedAbGroup::is_trivial)
    }

    /// Pullback to the induced subposet on `s`, with the index map.
    pub fn restrict_to(&self, s: &Subset) -> Result<(PosetSheaf, Vec<usize>)> {
        let (sub, map) = self.base.induced(s);
        let stalks = map.iter().map(|&i| self.stalks[i].clone()).collect();
        let mut covers = BTreeMap::new();
        for &(a, b) in sub.covers() {
            covers.insert((a, b), self.restriction(map[a], map[b])?);
        }
        Ok((PosetSheaf::new(sub, stalks, covers)?, map))
    }
}

fn linear_extension(base: &FinitePoset) -> Vec<usize> {
    let n = base.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| ((0..n).filter(|&q| base.leq(q, p)).count(), p));
    order
}

fn derive_composites(
    base: &FinitePoset,
    stalks: &[PresentedAbGroup],
    cover_maps: &BTreeMap<(usize, usize), IntMatrix>,
) -> Result<BTreeMap<(usize, usize), IntMatrix>> {
    let order = linear_extension(base);
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); base.len()];
    for &(a, b) in base.covers() {
        below[b].push(a);
    }
    let mut res: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
    for &q in &order {
        for p in 0..base.len() {
            if !base.lt(p, q) {
                continue;
            }
            let mut chosen: Option<IntMatrix> = None;
            for &r in &below[q] {
                if !base.leq(p, r) {
                    continue;
                }
                let step = &cover_maps[&(r, q)];
                let candidate = if r == p {
                    step.clone()
                } else {
                    step.try_mul(&res[&(p, r)])?
                };
                match &chosen {
                    None => chosen = Some(candidate),
                    Some(first) => {
                        if !stalks[q].columns_vanish(&first.sub(&candidate)?)? {
                            return Err(Error::input(format!(
                                "restrictions are not functorial from {} to {}",
                                base.label(p),
                                base.label(q)
                            )));
                        }
                    }
                }
            }
            res.insert((p, q), chosen.expect("p < q has a cover below q above p"));
        }
    }
    Ok(res)
}

fn zero_block(target: &PresentedAbGroup, source: &PresentedAbGroup) -> IntMatrix {
    IntMatrix::zeros(target.generators(), source.generators())
}

/// Every stalk `g`, every restriction the identity.
pub fn constant_sheaf(base: &FinitePoset, g: &PresentedAbGroup) -> PosetSheaf {
    let stalks = vec![g.clone(); base.len()];
    let covers = base
        .covers()
        .iter()
        .map(|&c| (c, IntMatrix::identity(g.generators())))
        .collect();
    PosetSheaf::new(base.clone(), stalks, covers).expect("constant data is a sheaf")
}

/// `j_! g_U`: stalk `g` on the open set `u`, zero elsewhere.
pub fn extension_by_zero(base: &FinitePoset, u: &Subset, g: &PresentedAbGroup) -> Result<PosetSheaf> {
    let u = base.open_set(u.clone())?;
    let stalks: Vec<PresentedAbGroup> = (0..base.len())
        .map(|p| {
            if u.contains(p) {
                g.clone()
            } else {
                PresentedAbGroup::trivial()
            }
        })
        .collect();
    let covers = base
        .covers()
        .iter()
        .map(|&(a, b)| {
            let m = if u.contains(a) {
                IntMatrix::identity(g.generators())
            } else {
                zero_block(&stalks[b], &stalks[a])
            };
            ((a, b), m)
        })
        .collect();
    PosetSheaf::new(base.clone(), stalks, covers)
}

/// Components of `min_open(p) ∩ a` for every `p`.
fn local_components(base: &FinitePoset, a: &Subset) -> Result<Vec<Vec<Vec<usize>>>> {
    (0..base.len())
        .map(|p| Ok(base.components_within(&base.min_open(p)?.intersection(a))))
        .collect()
}

/// `i_* g_A` for a closed subset `a`: the stalk at `p` is `g` to the power
/// of the number of components of `min_open(p) ∩ a`.
pub fn closed_pushforward(base: &FinitePoset, a: &Subset, g: &PresentedAbGroup) -> Result<PosetSheaf> {
    base.closed_set(a.clone())?;
    let comps = local_components(base, a)?;
    let stalks: Vec<PresentedAbGroup> = comps.iter().map(|c| g.power(c.len())).collect();
    let k = g.generators();
    let mut covers = BTreeMap::new();
    for &(p, q) in base.covers() {
        let mut m = zero_block(&stalks[q], &stalks[p]);
        for (j, comp) in comps[q].iter().enumerate() {
            let i = comps[p]
                .iter()
                .position(|c| c.contains(&comp[0]))
                .expect("a component over a smaller open lies in one over the larger");
            m.add_block(j * k, i * k, &IntMatrix::identity(k), 1);
        }
        covers.insert((p, q), m);
    }
    PosetSheaf::new(base.clone(), stalks, covers)
}

/// A natural transformation between sheaves on the same base.
#[derive(Debug, Clone)]
pub struct SheafMorphism {
    source: PosetSheaf,
    target: PosetSheaf,
    components: Vec<IntMatrix>,
}

impl SheafMorphism {
    /// Checks every component is a homomorphism and every naturality square
    /// over a cover relation commutes.
    pub fn new(source: PosetSheaf, target: PosetSheaf, components: Vec<IntMatrix>) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::input("morphism between sheaves on different bases"));
        }
        if components.len() != source.base.len() {
            return Err(Error::input("one component per element required"));
        }
        for (p, m) in components.iter().enumerate() {
            GroupHom::new(source.stalks[p].clone(), target.stalks[p].clone(), m.clone())
                .map_err(|e| Error::input(format!("component at {}: {e}", source.base.label(p))))?;
        }
        for &(p, q) in source.base.covers() {
            let lhs = target.cover_maps[&(p, q)].try_mul(&components[p])?;
            let rhs = components[q].try_mul(&source.cover_maps[&(p, q)])?;
            if !target.stalks[q].columns_vanish(&lhs.sub(&rhs)?)? {
                return Err(Error::contract(format!(
                    "naturality fails on {}<{}",
                    source.base.label(p),
                    source.base.label(q)
                )));
            }
        }
        Ok(SheafMorphism {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: &PosetSheaf) -> Self {
        let components = f.stalks.iter().map(|g| IntMatrix::identity(g.generators())).collect();
        SheafMorphism {
            source: f.clone(),
            target: f.clone(),
            components,
        }
    }

    pub fn zero(source: &PosetSheaf, target: &PosetSheaf) -> Result<Self> {
        let components = source
            .stalks
            .iter()
            .zip(&target.stalks)
            .map(|(s, t)| zero_block(t, s))
            .collect();
        SheafMorphism::new(source.clone(), target.clone(), components)
    }

    pub fn source(&self) -> &PosetSheaf {
        &self.source
    }

    pub fn target(&self) -> &PosetSheaf {
        &self.target
    }

    pub fn component(&self, p: usize) -> &IntMatrix {
        &self.components[p]
    }

    pub fn component_hom(&self, p: usize) -> GroupHom {
        GroupHom {
            source: self.source.stalks[p].clone(),
            target: self.target.stalks[p].clone(),
            matrix: self.components[p].clone(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SheafMorphism) -> Result<SheafMorphism> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| b.try_mul(a))
            .collect::<Result<Vec<_>>>()?;
        SheafMorphism::new(self.source.clone(), other.target.clone(), components)
    }

    /// Restriction to the induced subposet on `s`.
    pub fn restrict_to(&self, s: &Subset) -> Result<SheafMorphism> {
        let (src, map) = self.source.restrict_to(s)?;
        let (tgt, _) = self.target.restrict_to(s)?;
        let components = map.iter().map(|&i| self.components[i].clone()).collect();
        SheafMorphism::new(src, tgt, components)
    }
}

/// The inclusion `j_! g_U → g_X`.
pub fn extension_inclusion(base: &FinitePoset, u: &Subset, g: &PresentedAbGroup) -> Result<SheafMorphism> {
    let ext = extension_by_zero(base, u, g)?;
    let constant = constant_sheaf(base, g);
    let components = (0..base.len())
        .map(|p| {
            if u.contains(p) {
                IntMatrix::identity(g.generators())
            } else {
                zero_block(constant.stalk(p), ext.stalk(p))
            }
        })
        .collect();
    SheafMorphism::new(ext, constant, components)
}

/// The unit `g_X → i_* g_A`: a section restricted to each local component.
pub fn closed_restriction(base: &FinitePoset, a: &Subset, g: &PresentedAbGroup) -> Result<SheafMorphism> {
    let push = closed_pushforward(base, a, g)?;
    let constant = constant_sheaf(base, g);
    let k = g.generators();
    let components = (0..base.len())
        .map(|p| {
            let c = push.stalk(p).generators() / k.max(1);
            let mut m = IntMatrix::zeros(push.stalk(p).generators(), k);
            for j in 0..c {
                m.add_block(j * k, 0, &IntMatrix::identity(k), 1);
            }
            m
        })
        .collect();
    SheafMorphism::new(constant, push, components)
}

/// Stalkwise kernel, with its inclusion into the source.
pub fn kernel_sheaf(m: &SheafMorphism) -> Result<(PosetSheaf, SheafMorphism)> {
    let base = m.source.base.clone();
    let mut stalks = Vec::with_capacity(base.len());
    let mut bases = Vec::with_capacity(base.len());
    for p in 0..base.len() {
        let (k, lattice) = m.component_hom(p).kernel()?;
        stalks.push(k);
        bases.push(lattice);
    }
    let mut covers = BTreeMap::new();
    for &(p, q) in base.covers() {
        let image = m.source.cover_maps[&(p, q)].try_mul(&bases[p])?;
        let coords = crate::abgroup::coordinates_in(&bases[q], &image)
            .map_err(|_| Error::contract("restriction does not preserve kernels"))?;
        covers.insert((p, q), coords);
    }
    let ker = PosetSheaf::new(base, stalks, covers)?;
    let inclusion = SheafMorphism::new(ker.clone(), m.source.clone(), bases)?;
    Ok((ker, inclusion))
}

/// Stalkwise cokernel, with the projection from the target.
pub fn cokernel_sheaf(m: &SheafMorphism) -> Result<(PosetSheaf, SheafMorphism)> {
    let base = m.target.base.clone();
    let stalks = (0..base.len())
        .map(|p| m.component_hom(p).cokernel())
        .collect::<Result<Vec<_>>>()?;
    let covers = m.target.cover_maps.clone();
    let coker = PosetSheaf::new(base, stalks, covers)?;
    let components = m
        .target
        .stalks
        .iter()
        .map(|g| IntMatrix::identity(g.generators()))
        .collect();
    let projection = SheafMorphism::new(m.target.clone(), coker.clone(), components)?;
    Ok((coker, projection))
}

/// Where a sequence of sheaf morphisms fails to be exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    /// Index of the sheaf in the sequence (the target of morphism `node - 1`).
    pub node: usize,
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub exact: bool,
    pub failure: Option<ExactnessFailure>,
}

/// Exactness at every interior node of `m_0, m_1, …`, checked stalkwise.
pub fn is_exact(seq: &[SheafMorphism]) -> Result<ExactnessReport> {
    for (i, pair) in seq.windows(2).enumerate() {
        let (f, g) = (&pair[0], &pair[1]);
        if f.target.stalks.len() != g.source.stalks.len() {
            return Err(Error::input("sequence is not composable"));
        }
        for p in 0..f.target.base.len() {
            if !is_exact_at(&f.component_hom(p), &g.component_hom(p))? {
                return Ok(ExactnessReport {
                    exact: false,
                    failure: Some(ExactnessFailure {
                        node: i + 1,
                        element: f.target.base.label(p).to_string(),
                    }),
                });
            }
        }
    }
    Ok(ExactnessReport {
        exact: true,
        failure: None,
    })
}

/// `0 → A --sub--> B --quotient--> C → 0`.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub sub: SheafMorphism,
    pub quotient: SheafMorphism,
}

impl ShortExactSequence {
    pub fn new(sub: SheafMorphism, quotient: SheafMorphism) -> Result<Self> {
        let ses = ShortExactSequence { sub, quotient };
        let report = ses.exactness()?;
        if !report.exact {
            let f = report.failure.expect("failure recorded");
            return Err(Error::input(format!(
                "sequence not exact at node {} element {}",
                f.node, f.element
            )));
        }
        Ok(ses)
    }

    pub fn exactness(&self) -> Result<ExactnessReport> {
        let a = self.sub.source();
        let c = self.quotient.target();
        let zero_a = zero_sheaf(a.base());
        let into = SheafMorphism::zero(&zero_a, a)?;
        let out = SheafMorphism::zero(c, &zero_a)?;
        is_exact(&[into, self.sub.clone(), self.quotient.clone(), out])
    }

    pub fn left(&self) -> &PosetSheaf {
        self.sub.source()
    }

    pub fn middle(&self) -> &PosetSheaf {
        self.sub.target()
    }

    pub fn right(&self) -> &PosetSheaf {
        self.quotient.target()
    }

    pub fn restrict_to(&self, s: &Subset) -> Result<ShortExactSequence> {
        Ok(ShortExactSequence {
            sub: self.sub.restrict_to(s)?,
            quotient: self.quotient.restrict_to(s)?,
        })
    }
}

pub fn zero_sheaf(base: &FinitePoset) -> PosetSheaf {
    constant_sheaf(base, &PresentedAbGroup::trivial())
}

/// `0 → j_! g_U → g_X → i_* g_Z → 0` for an open `u` with closed
/// complement `Z`.
pub fn open_closed_sequence(base: &FinitePoset, u: &Subset, g: &PresentedAbGroup) -> Result<ShortExactSequence> {
    let sub = extension_inclusion(base, u, g)?;
    let quotient = closed_restriction(base, &u.complement(), g)?;
    ShortExactSequence::new(sub, quotient)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StalkJson {
    #[serde(flatten)]
    pub form: CanonicalForm,
    /// Present only when the stalk is not stored in canonical presentation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationJson {
    pub generators: usize,
    pub relations: IntMatrix,
}

/// Wire format: stalks keyed by element label, restriction matrices keyed
/// by `"p<q"` over cover relations.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SheafJson {
    pub stalks: BTreeMap<String, StalkJson>,
    pub restrictions: BTreeMap<String, IntMatrix>,
}

fn reshape(m: IntMatrix, rows: usize, cols: usize) -> Result<IntMatrix> {
    if m.shape() == (rows, cols) {
        Ok(m)
    } else if m.shape() == (0, 0) && rows * cols == 0 {
        Ok(IntMatrix::zeros(rows, cols))
    } else {
        Err(Error::input(format!(
            "matrix of shape {:?}, expected {rows}x{cols}",
            m.shape()
        )))
    }
}

impl SheafJson {
    pub fn from_sheaf(f: &PosetSheaf) -> Self {
        let base = f.base();
        let stalks = (0..base.len())
            .map(|p| {
                let g = f.stalk(p);
                let canonical = PresentedAbGroup::from_canonical(g.canonical());
                let presentation = (canonical != *g).then(|| PresentationJson {
                    generators: g.generators(),
                    relations: g.relations().clone(),
                });
                (
                    base.label(p).to_string(),
                    StalkJson {
                        form: g.canonical().clone(),
                        presentation,
                    },
                )
            })
            .collect();
        let restrictions = f
            .cover_maps
            .iter()
            .map(|(&(p, q), m)| (format!("{}<{}", base.label(p), base.label(q)), m.clone()))
            .collect();
        SheafJson { stalks, restrictions }
    }

    pub fn to_sheaf(&self, base: &FinitePoset) -> Result<PosetSheaf> {
        let mut stalks = Vec::with_capacity(base.len());
        for label in base.labels() {
            let s = self
                .stalks
                .get(label)
                .ok_or_else(|| Error::input(format!("no stalk for {label}")))?;
            let g = match &s.presentation {
                None => PresentedAbGroup::from_canonical(&s.form),
                Some(p) => {
                    let rel = if p.relations.shape() == (0, 0) {
                        IntMatrix::zeros(p.generators, 0)
                    } else {
                        p.relations.clone()
                    };
                    PresentedAbGroup::new(p.generators, rel)?
                }
            };
            stalks.push(g);
        }
        let mut covers = BTreeMap::new();
        for (key, m) in &self.restrictions {
            let (a, b) = key
                .split_once('<')
                .ok_or_else(|| Error::input(format!("restriction key {key:?} is not of the form p<q")))?;
            let (p, q) = (base.index_of(a)?, base.index_of(b)?);
            let m = reshape(m.clone(), stalks[q].generators(), stalks[p].generators())?;
            covers.insert((p, q), m);
        }
        // Omitted restrictions between zero stalks are implied.
        for &(p, q) in base.covers() {
            if stalks[p].generators() == 0 || stalks[q].generators() == 0 {
                covers
                    .entry((p, q))
                    .or_insert_with(|| IntMatrix::zeros(stalks[q].generators(), stalks[p].generators()));
            }
        }
        PosetSheaf::new(base.clone(), stalks, covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> FinitePoset {
        FinitePoset::new(
            &["x", "v", "a", "b", "f"],
            &[("x", "a"), ("x", "b"), ("v", "a"), ("v", "b"), ("a", "f"), ("b", "f")],
        )
        .unwrap()
    }

    fn z() -> PresentedAbGroup {
        PresentedAbGroup::integers()
    }

    #[test]
    fn constant_sheaf_cases() {
        let pt = FinitePoset::new(&["p"], &[]).unwrap();
        assert_eq!(constant_sheaf(&pt, &z()).stalk(0), &z());
        let c = constant_sheaf(&x1(), &z());
        assert!(c.stalks().iter().all(|s| s == &z()));
        assert_eq!(c.restriction(0, 4).unwrap(), IntMatrix::identity(1));
        assert!(constant_sheaf(&x1(), &PresentedAbGroup::trivial()).is_zero());
    }

    #[test]
    fn extension_by_zero_cases() {
        let p = x1();
        let whole = extension_by_zero(&p, &Subset::full(5), &z()).unwrap();
        assert!(whole.stalks().iter().all(|s| s == &z()));
        assert!(extension_by_zero(&p, &Subset::empty(5), &z()).unwrap().is_zero());
        let f = extension_by_zero(&p, &p.subset_from_labels(&["f"]).unwrap(), &z()).unwrap();
        assert_eq!(f.stalk(4), &z());
        assert!(f.stalk(0).is_trivial());
        assert!(extension_by_zero(&p, &p.subset_from_labels(&["x"]).unwrap(), &z()).is_err());
    }

    #[test]
    fn closed_pushforward_cases() {
        let p = x1();
        let whole = closed_pushforward(&p, &Subset::full(5), &z()).unwrap();
        assert!(whole.stalks().iter().all(|s| s == &z()));
        let sk = p.subset_from_labels(&["x", "v", "a", "b"]).unwrap();
        let push = closed_pushforward(&p, &sk, &z()).unwrap();
        for i in 0..4 {
            assert_eq!(push.stalk(i).rank(), 1);
        }
        assert!(push.stalk(4).is_trivial());
        assert!(closed_pushforward(&p, &Subset::empty(5), &z()).unwrap().is_zero());
        assert!(closed_pushforward(&p, &p.subset_from_labels(&["a"]).unwrap(), &z()).is_err());
    }

    #[test]
    fn pushforward_stalks_are_local_component_counts() {
        // For a down-set A, min_open(p) ∩ A is empty when p ∉ A and has p as
        // its minimum otherwise, so the count is 0 or 1.
        let p = FinitePoset::new(&["m", "a", "b", "t"], &[("m", "a"), ("m", "b"), ("a", "t"), ("b", "t")]).unwrap();
        for open in p.all_open_sets() {
            let a = open.complement();
            let push = closed_pushforward(&p, &a, &z()).unwrap();
            for q in 0..p.len() {
                let comps = p.components_within(&p.min_open(q).unwrap().intersection(&a));
                assert_eq!(push.stalk(q).rank(), comps.len());
                assert_eq!(comps.len(), usize::from(a.contains(q)));
            }
        }
    }

    #[test]
    fn open_closed_kernel_is_extension_by_zero() {
        let p = x1();
        let u = p.subset_from_labels(&["f"]).unwrap();
        let unit = closed_restriction(&p, &u.complement(), &z()).unwrap();
        let (ker, _) = kernel_sheaf(&unit).unwrap();
        let ext = extension_by_zero(&p, &u, &z()).unwrap();
        for i in 0..p.len() {
            assert!(ker.stalk(i).is_isomorphic(ext.stalk(i)));
        }
        let seq = open_closed_sequence(&p, &u, &z()).unwrap();
        assert!(seq.exactness().unwrap().exact);
    }

    #[test]
    fn kernel_and_cokernel_trivial_cases() {
        let c = constant_sheaf(&x1(), &z());
        let (ker, _) = kernel_sheaf(&SheafMorphism::identity(&c)).unwrap();
        assert!(ker.is_zero());
        let zero = SheafMorphism::zero(&c, &c).unwrap();
        let (coker, _) = cokernel_sheaf(&zero).unwrap();
        for i in 0..5 {
            assert!(coker.stalk(i).is_isomorphic(c.stalk(i)));
        }
    }

    #[test]
    fn cokernel_can_carry_torsion() {
        let c = constant_sheaf(&x1(), &z());
        let comps = vec![IntMatrix::from_rows(&[vec![2]]); 5];
        let times2 = SheafMorphism::new(c.clone(), c.clone(), comps).unwrap();
        let (coker, _) = cokernel_sheaf(&times2).unwrap();
        assert_eq!(coker.stalk(0).to_string(), "Z/2");
    }

    #[test]
    fn exactness_reports() {
        let c = constant_sheaf(&x1(), &z());
        let id = SheafMorphism::identity(&c);
        let report = is_exact(&[id.clone(), id]).unwrap();
        assert!(!report.exact);
        assert_eq!(
            report.failure.unwrap(),
            ExactnessFailure {
                node: 1,
                element: "x".into()
            }
        );
        let zero = zero_sheaf(&x1());
        let zz = SheafMorphism::identity(&zero);
        assert!(is_exact(&[zz.clone(), zz]).unwrap().exact);
    }

    #[test]
    fn non_functorial_data_is_rejected() {
        let p = x1();
        let mut covers = BTreeMap::new();
        for &(a, b) in p.covers() {
            covers.insert((a, b), IntMatrix::identity(1));
        }
        // x<a<f and x<b<f must agree.
        let (a, f) = (p.index_of("a").unwrap(), p.index_of("f").unwrap());
        covers.insert((a, f), IntMatrix::from_rows(&[vec![-1]]));
        assert!(PosetSheaf::new(p, vec![z(); 5], covers).is_err());
    }

    #[test]
    fn naturality_is_checked() {
        let p = x1();
        let c = constant_sheaf(&p, &z());
        let mut comps = vec![IntMatrix::identity(1); 5];
        comps[4] = IntMatrix::from_rows(&[vec![2]]);
        assert!(SheafMorphism::new(c.clone(), c, comps).is_err());
    }

    #[test]
    fn sheaf_json_round_trip() {
        let p = x1();
        let u = p.subset_from_labels(&["f"]).unwrap();
        let f = extension_by_zero(&p, &u, &z()).unwrap();
        let json = serde_json::to_string(&SheafJson::from_sheaf(&f)).unwrap();
        let back: SheafJson = serde_json::from_str(&json).unwrap();
        let g = back.to_sheaf(&p).unwrap();
        assert_eq!(g.stalks(), f.stalks());
        assert_eq!(g.cover_maps(), f.cover_maps());
    }
}
