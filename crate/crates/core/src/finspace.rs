//! Finite T0 spaces as posets with the Alexandrov topology.
//!
//! Convention used everywhere in this crate: OPEN = UP-SET. The minimal
//! open neighbourhood of `p` is `{q : q ≥ p}`; for a face poset that is the
//! open star of a cell. [`FinitePoset::min_open`] is the single place the
//! convention is fixed, and every other open-set test goes through
//! [`FinitePoset::is_open`].

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of the elements of some poset, stored as a membership mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    mask: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset { mask: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Subset { mask: vec![true; n] }
    }

    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in members {
            s.mask[i] = true;
        }
        s
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Subset { mask }
    }

    /// Size of the ambient element set.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) {
        self.mask[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.mask[i] = false;
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        }
    }

    pub fn complement(&self) -> Subset {
        Subset {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !a || *b)
    }

    pub fn meets(&self, other: &Subset) -> bool {
        self.mask.iter().zip(&other.mask).any(|(a, b)| *a && *b)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An up-set of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenSet(Subset);

/// A down-set of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet(Subset);

impl Deref for OpenSet {
    type Target = Subset;
    fn deref(&self) -> &Subset {
        &self.0
    }
}

impl Deref for ClosedSet {
    type Target = Subset;
    fn deref(&self) -> &Subset {
        &self.0
    }
}

impl OpenSet {
    pub fn subset(&self) -> &Subset {
        &self.0
    }

    /// Intersections of opens are open.
    pub fn intersect(&self, other: &OpenSet) -> OpenSet {
        OpenSet(self.0.intersection(&other.0))
    }

    pub fn unite(&self, other: &OpenSet) -> OpenSet {
        OpenSet(self.0.union(&other.0))
    }

    /// The complement of an open set is closed.
    pub fn complement(&self) -> ClosedSet {
        ClosedSet(self.0.complement())
    }
}

impl ClosedSet {
    pub fn subset(&self) -> &Subset {
        &self.0
    }

    pub fn complement(&self) -> OpenSet {
        OpenSet(self.0.complement())
    }
}

/// A finite poset. Elements are kept in insertion order, which fixes the
/// lexicographic order of chains and hence every matrix built from them.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    height: usize,
}

impl FinitePoset {
    /// Builds the poset generated by `relations` (pairs `a < b`); they need
    /// not be covers, the transitive closure is taken.
    pub fn new<S: AsRef<str>>(labels: &[S], relations: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate element label {l:?}")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::input(format!("unknown element {s:?}")))
        };
        let mut rel = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            rel.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indices(labels, &rel)
    }

    pub fn from_indices(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate element label {l:?}")));
            }
        }
        let mut lt = vec![vec![false; n]; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::input(format!("relation ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::input(format!(
                    "relation {} < {} is reflexive",
                    labels[a], labels[a]
                )));
            }
            lt[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i][k] {
                    for j in 0..n {
                        if lt[k][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| lt[i][i]) {
            return Err(Error::input(format!(
                "order relations contain a cycle through {}",
                labels[i]
            )));
        }
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        let mut leq = lt;
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let height = longest_chain(n, &leq);
        Ok(FinitePoset {
            labels,
            index,
            leq,
            covers,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown element {label:?}")))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Hasse diagram edges `(a, b)`, `a` covered by `b`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Length of the longest strict chain (number of steps).
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn subset_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut s = Subset::empty(self.len());
        for l in labels {
            s.insert(self.index_of(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn subset_labels(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{q : q ≥ p}`, the smallest open set containing `p`.
    pub fn min_open(&self, p: usize) -> Result<OpenSet> {
        if p >= self.len() {
            return Err(Error::input(format!("element index {p} out of range")));
        }
        Ok(OpenSet(Subset::from_mask(self.leq[p].clone())))
    }

    /// `{q : q ≤ p}`, the closure of `p`.
    pub fn closure_of_point(&self, p: usize) -> ClosedSet {
        ClosedSet(Subset::from_mask((0..self.len()).map(|q| self.leq[q][p]).collect()))
    }

    pub fn is_open(&self, s: &Subset) -> bool {
        s.universe() == self.len() && self.covers.iter().all(|&(a, b)| !s.contains(a) || s.contains(b))
    }

    pub fn is_closed(&self, s: &Subset) -> bool {
        s.universe() == self.len() && self.covers.iter().all(|&(a, b)| !s.contains(b) || s.contains(a))
    }

    pub fn open_set(&self, s: Subset) -> Result<OpenSet> {
        if !self.is_open(&s) {
            return Err(Error::input(format!(
                "{:?} is not open (not an up-set)",
                self.subset_labels(&s)
            )));
        }
        Ok(OpenSet(s))
    }

    pub fn closed_set(&self, s: Subset) -> Result<ClosedSet> {
        if !self.is_closed(&s) {
            return Err(Error::input(format!(
                "{:?} is not closed (not a down-set)",
                self.subset_labels(&s)
            )));
        }
        Ok(ClosedSet(s))
    }

    pub fn whole(&self) -> OpenSet {
        OpenSet(Subset::full(self.len()))
    }

    /// Smallest open set containing `s`.
    pub fn up_closure(&self, s: &Subset) -> OpenSet {
        let mut out = Subset::empty(self.len());
        for p in s.iter() {
            for q in 0..self.len() {
                if self.leq[p][q] {
                    out.insert(q);
                }
            }
        }
        OpenSet(out)
    }

    /// Induced subposet on `s`, labels preserved, plus the map from new
    /// indices to old ones.
    pub fn induced(&self, s: &Subset) -> (FinitePoset, Vec<usize>) {
        let members = s.members();
        let labels = members.iter().map(|&i| self.labels[i].clone()).collect();
        let mut rel = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                if self.lt(i, j) {
                    rel.push((a, b));
                }
            }
        }
        let sub = FinitePoset::from_indices(labels, &rel).expect("a subposet of a poset is a poset");
        (sub, members)
    }

    pub fn open_subspace(&self, s: &Subset) -> Result<FinitePoset> {
        let open = self.open_set(s.clone())?;
        Ok(self.induced(&open).0)
    }

    pub fn closed_subspace(&self, a: &Subset) -> Result<FinitePoset> {
        let closed = self.closed_set(a.clone())?;
        Ok(self.induced(&closed).0)
    }

    /// All strict chains `p_0 < … < p_k`, lexicographic in element order.
    pub fn strict_chains(&self, k: usize) -> Vec<Vec<usize>> {
        self.strict_chains_within(&Subset::full(self.len()), k)
    }

    pub fn strict_chains_within(&self, s: &Subset, k: usize) -> Vec<Vec<usize>> {
        if k > self.height {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut chain = Vec::with_capacity(k + 1);
        for p in s.iter() {
            chain.push(p);
            self.extend_chains(s, k, &mut chain, &mut |c| out.push(c.to_vec()));
            chain.pop();
        }
        out
    }

    /// Strict chains within `s` grouped by length: entry `k` holds the
    /// chains with `k + 1` elements.
    pub fn chains_by_degree(&self, s: &Subset) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.height + 1];
        let mut chain = Vec::new();
        fn walk(p: &FinitePoset, s: &Subset, chain: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
            out[chain.len() - 1].push(chain.clone());
            let last = *chain.last().expect("non-empty");
            for q in s.iter() {
                if p.lt(last, q) {
                    chain.push(q);
                    walk(p, s, chain, out);
                    chain.pop();
                }
            }
        }
        for p in s.iter() {
            chain.push(p);
            walk(self, s, &mut chain, &mut out);
            chain.pop();
        }
        while out.last().is_some_and(Vec::is_empty) {
            out.pop();
        }
        out
    }

    fn extend_chains(&self, s: &Subset, k: usize, chain: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        if chain.len() == k + 1 {
            emit(chain);
            return;
        }
        let last = *chain.last().expect("non-empty");
        for q in s.iter() {
            if self.lt(last, q) {
                chain.push(q);
                self.extend_chains(s, k, chain, emit);
                chain.pop();
            }
        }
    }

    /// Connected components of the comparability graph.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_within(&Subset::full(self.len()))
    }

    /// Components of the comparability graph of the induced subposet on `s`.
    pub fn components_within(&self, s: &Subset) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut comps = Vec::new();
        for start in s.iter() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(p) = queue.pop_front() {
                comp.push(p);
                for q in s.iter() {
                    if !seen[q] && (self.leq[p][q] || self.leq[q][p]) {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Every up-set, in increasing order of the membership bitmask.
    /// Exponential in the number of elements.
    pub fn all_open_sets(&self) -> Vec<OpenSet> {
        let n = self.len();
        assert!(n < 32, "open-set enumeration is limited to fewer than 32 elements");
        (0u32..(1u32 << n))
            .map(|bits| Subset::from_mask((0..n).map(|i| bits >> i & 1 == 1).collect()))
            .filter(|s| self.is_open(s))
            .map(OpenSet)
            .collect()
    }
}

fn longest_chain(n: usize, leq: &[Vec<bool>]) -> usize {
    // depth[p] = longest chain ending at p; process in order of the number
    // of elements below, which is a linear extension.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| (0..n).filter(|&q| leq[q][p]).count());
    let mut depth = vec![0usize; n];
    for (pos, &p) in order.iter().enumerate() {
        for &q in &order[..pos] {
            if q != p && leq[q][p] {
                depth[p] = depth[p].max(depth[q] + 1);
            }
        }
    }
    depth.into_iter().max().unwrap_or(0)
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers
            .iter()
            .map(|&(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("FinitePoset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

/// Wire format: `{"elements": [...], "covers": [["a","b"], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl From<&FinitePoset> for PosetJson {
    fn from(p: &FinitePoset) -> Self {
        PosetJson {
            elements: p.labels.clone(),
            covers: p
                .covers
                .iter()
                .map(|&(a, b)| (p.labels[a].clone(), p.labels[b].clone()))
                .collect(),
        }
    }
}

impl TryFrom<PosetJson> for FinitePoset {
    type Error = Error;
    fn try_from(j: PosetJson) -> Result<Self> {
        FinitePoset::new(&j.elements, &j.covers)
    }
}

impl Serialize for FinitePoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinitePoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PosetJson::deserialize(d)?;
        FinitePoset::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// One cell of a regular CW complex: its dimension and the labels of the
/// cells in its boundary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub dim: usize,
    pub faces: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct RegularCwData {
    pub cells: Vec<Cell>,
}

impl RegularCwData {
    pub fn push(&mut self, label: impl Into<String>, dim: usize, faces: &[&str]) {
        self.cells.push(Cell {
            label: label.into(),
            dim,
            faces: faces.iter().map(|s| s.to_string()).collect(),
        });
    }
}

/// Face poset of a regular CW complex: cells ordered by the face relation.
pub fn face_poset(cw: &RegularCwData) -> Result<FinitePoset> {
    let dims: HashMap<&str, usize> = cw.cells.iter().map(|c| (c.label.as_str(), c.dim)).collect();
    let mut relations = Vec::new();
    for c in &cw.cells {
        for f in &c.faces {
            let fd = dims
                .get(f.as_str())
                .ok_or_else(|| Error::input(format!("cell {} names unknown face {f}", c.label)))?;
            if *fd >= c.dim {
                return Err(Error::input(format!(
                    "face {f} of {} has dimension {fd}, not below {}",
                    c.label, c.dim
                )));
            }
            relations.push((f.clone(), c.label.clone()));
        }
    }
    let labels: Vec<String> = cw.cells.iter().map(|c| c.label.clone()).collect();
    FinitePoset::new(&labels, &relations)
}

/// Random poset on `n` elements: elements get random levels below
/// `levels`, and each pair on increasing levels is related with
/// probability `density`. Keeping `levels` small bounds the chain count.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, levels: usize, density: f64) -> FinitePoset {
    let level: Vec<usize> = (0..n).map(|_| rng.gen_range(0..levels.max(1))).collect();
    let mut rel = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if level[a] < level[b] && rng.gen_bool(density) {
                rel.push((a, b));
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FinitePoset::from_indices(labels, &rel).expect("level-increasing relations are acyclic")
}

/// Random open set: the up-closure of a random subset.
pub fn random_open<R: Rng>(rng: &mut R, p: &FinitePoset, density: f64) -> OpenSet {
    let s = Subset::from_mask((0..p.len()).map(|_| rng.gen_bool(density)).collect());
    p.up_closure(&s)
}
