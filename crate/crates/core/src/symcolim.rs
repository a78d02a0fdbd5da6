//! Symbolic calculus for ω-indexed direct systems of abelian groups.
//!
//! Terms are built from `0`, `ℤ^k`, `∏_{n≥1} ℤ`, `⊕_{n≥1} ℤ`, quotients by
//! witnessed subgroups and colimits of described systems. [`normalize`]
//! applies a closed list of rewrite rules and leaves anything else marked
//! unreduced; [`cardinality_class`] answers `Unknown` for such terms.
//!
//! [`certify_theorem`] ties the calculus to a computed [`StageSystem`]: the
//! finite stages are checked against the truncated descriptor, then the
//! symbolic rules carry the colimit to `(∏ℤ)/(⊕ℤ)` and its cardinality.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::abgroup::{CanonicalForm, GroupHom, PresentedAbGroup};
use crate::wedge::{projection_matrix, StageSystem};

/// Why a subgroup sits inside the group it is quotiented out of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InclusionWitness {
    /// `A ⊆ A`.
    Identity,
    /// `0 ⊆ A`.
    Zero,
    /// `⊕_n ℤ ⊆ ∏_n ℤ` as finitely supported sequences.
    SumInProduct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolicGroup {
    Trivial,
    FreeFinite {
        rank: usize,
    },
    CountableProduct,
    CountableSum,
    Quotient {
        group: Box<SymbolicGroup>,
        subgroup: Box<SymbolicGroup>,
        witness: InclusionWitness,
    },
    Colim {
        system: SymbolicDirectSystem,
    },
    /// A term no rule applies to, kept verbatim.
    Unreduced {
        term: Box<SymbolicGroup>,
        reason: String,
    },
}

impl SymbolicGroup {
    /// `group / subgroup`, accepted only with a recognized inclusion.
    pub fn quotient(group: SymbolicGroup, subgroup: SymbolicGroup) -> Option<SymbolicGroup> {
        let witness = if group == subgroup {
            InclusionWitness::Identity
        } else if subgroup == SymbolicGroup::Trivial {
            InclusionWitness::Zero
        } else if group == SymbolicGroup::CountableProduct && subgroup == SymbolicGroup::CountableSum {
            InclusionWitness::SumInProduct
        } else {
            return None;
        };
        Some(SymbolicGroup::Quotient {
            group: Box::new(group),
            subgroup: Box::new(subgroup),
            witness,
        })
    }

    pub fn colim(system: SymbolicDirectSystem) -> SymbolicGroup {
        SymbolicGroup::Colim { system }
    }

    pub fn is_unreduced(&self) -> bool {
        match self {
            SymbolicGroup::Unreduced { .. } => true,
            SymbolicGroup::Quotient { group, subgroup, .. } => group.is_unreduced() || subgroup.is_unreduced(),
            _ => false,
        }
    }
}

impl fmt::Display for SymbolicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicGroup::Trivial => write!(f, "0"),
            SymbolicGroup::FreeFinite { rank: 1 } => write!(f, "Z"),
            SymbolicGroup::FreeFinite { rank } => write!(f, "Z^{rank}"),
            SymbolicGroup::CountableProduct => write!(f, "∏Z"),
            SymbolicGroup::CountableSum => write!(f, "⊕Z"),
            SymbolicGroup::Quotient { group, subgroup, .. } => write!(f, "({group})/({subgroup})"),
            SymbolicGroup::Colim { system } => write!(f, "colim[{system}]"),
            SymbolicGroup::Unreduced { term, .. } => write!(f, "unreduced[{term}]"),
        }
    }
}

/// Stage `m` (for `m ≥ 1`) of a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StageFamily {
    /// The same group at every stage.
    Constant { group: Box<SymbolicGroup> },
    /// `∏_{n≥m} ℤ`.
    TailProduct,
    /// `∏_{n<m} ℤ = ℤ^{m-1}`.
    HeadProduct,
    /// `ℤ^{N-m+1}`, zero for `m > N`: the tail product cut at `N`.
    Truncated { disks: usize },
}

impl StageFamily {
    pub fn stage(&self, m: usize) -> SymbolicGroup {
        match self {
            StageFamily::Constant { group } => (**group).clone(),
            StageFamily::TailProduct => SymbolicGroup::CountableProduct,
            StageFamily::HeadProduct => free(m.saturating_sub(1)),
            StageFamily::Truncated { disks } => free((disks + 1).saturating_sub(m)),
        }
    }
}

fn free(rank: usize) -> SymbolicGroup {
    if rank == 0 {
        SymbolicGroup::Trivial
    } else {
        SymbolicGroup::FreeFinite { rank }
    }
}

/// Kind of the maps `stage(m) → stage(m′)` for `m ≤ m′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    Projection,
    Inclusion,
    Identity,
    Zero,
}

impl TransitionKind {
    /// Kind of `later ∘ self`, `None` when the two kinds do not compose to a
    /// single kind.
    pub fn then(self, later: TransitionKind) -> Option<TransitionKind> {
        use TransitionKind::*;
        match (self, later) {
            (Zero, _) | (_, Zero) => Some(Zero),
            (Identity, k) | (k, Identity) => Some(k),
            (Projection, Projection) => Some(Projection),
            (Inclusion, Inclusion) => Some(Inclusion),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicDirectSystem {
    pub family: StageFamily,
    pub transition: TransitionKind,
}

impl SymbolicDirectSystem {
    /// `m ↦ ∏_{n≥m} ℤ` with projections.
    pub fn tail_products() -> Self {
        SymbolicDirectSystem {
            family: StageFamily::TailProduct,
            transition: TransitionKind::Projection,
        }
    }

    /// The same system cut at `disks`.
    pub fn truncated(&self, disks: usize) -> Option<Self> {
        match self.family {
            StageFamily::TailProduct => Some(SymbolicDirectSystem {
                family: StageFamily::Truncated { disks },
                transition: self.transition,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for SymbolicDirectSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match &self.family {
            StageFamily::Constant { group } => format!("m ↦ {group}"),
            StageFamily::TailProduct => "m ↦ ∏_{n≥m} Z".to_string(),
            StageFamily::HeadProduct => "m ↦ ∏_{n<m} Z".to_string(),
            StageFamily::Truncated { disks } => format!("m ↦ Z^({disks}-m+1)"),
        };
        write!(f, "{family}, {:?}", self.transition)
    }
}

/// Name of the rule that reduces a colimit, if one applies.
fn colim_rule(sys: &SymbolicDirectSystem) -> Option<(&'static str, SymbolicGroup)> {
    use TransitionKind::*;
    match (&sys.family, sys.transition) {
        (_, Zero) => Some(("zero transitions", SymbolicGroup::Trivial)),
        (StageFamily::TailProduct, Projection) => Some((
            "tail products under projections",
            SymbolicGroup::quotient(SymbolicGroup::CountableProduct, SymbolicGroup::CountableSum)
                .expect("sum sits in product"),
        )),
        (StageFamily::HeadProduct, Inclusion) => Some(("head products under inclusions", SymbolicGroup::CountableSum)),
        (StageFamily::Constant { group }, Identity) => Some(("constant system", normalize(group))),
        (StageFamily::Truncated { .. }, Projection) => Some(("eventually zero stages", SymbolicGroup::Trivial)),
        _ => None,
    }
}

/// Applies the rewrite rules bottom-up. Deterministic and idempotent.
pub fn normalize(g: &SymbolicGroup) -> SymbolicGroup {
    match g {
        SymbolicGroup::FreeFinite { rank: 0 } => SymbolicGroup::Trivial,
        SymbolicGroup::Colim { system } => match colim_rule(system) {
            Some((_, out)) => out,
            None => SymbolicGroup::Unreduced {
                term: Box::new(g.clone()),
                reason: format!("no rule for the system {system}"),
            },
        },
        SymbolicGroup::Quotient {
            group,
            subgroup,
            witness,
        } => {
            let (a, b) = (normalize(group), normalize(subgroup));
            if a == b {
                SymbolicGroup::Trivial
            } else if b == SymbolicGroup::Trivial {
                a
            } else {
                SymbolicGroup::Quotient {
                    group: Box::new(a),
                    subgroup: Box::new(b),
                    witness: *witness,
                }
            }
        }
        other => other.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite,
    CountablyInfinite,
    Uncountable,
    Unknown,
}

/// Cardinality of a normalized term; anything outside the rules is
/// `Unknown`.
pub fn cardinality_class(g: &SymbolicGroup) -> Cardinality {
    match g {
        SymbolicGroup::Trivial => Cardinality::Finite,
        SymbolicGroup::FreeFinite { rank: 0 } => Cardinality::Finite,
        SymbolicGroup::FreeFinite { .. } | SymbolicGroup::CountableSum => Cardinality::CountablyInfinite,
        SymbolicGroup::CountableProduct => Cardinality::Uncountable,
        SymbolicGroup::Quotient { group, subgroup, .. } => {
            let countable_sub = matches!(
                cardinality_class(subgroup),
                Cardinality::Finite | Cardinality::CountablyInfinite
            );
            if cardinality_class(group) == Cardinality::Uncountable && countable_sub {
                Cardinality::Uncountable
            } else {
                Cardinality::Unknown
            }
        }
        SymbolicGroup::Colim { .. } | SymbolicGroup::Unreduced { .. } => Cardinality::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    /// Checked by exact computation on the finite stages.
    MachineVerified,
    /// A rewrite rule of the calculus, applied to the infinite system.
    SymbolicRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Link {
    pub name: String,
    pub kind: LinkKind,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub disks: usize,
    pub system: SymbolicDirectSystem,
    pub links: Vec<Link>,
    pub normal_form: SymbolicGroup,
    pub cardinality: Cardinality,
    pub caveats: Vec<String>,
}

impl Certificate {
    /// Human-readable transcript, one line per link.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "colim of [{}] is {:?}", self.system, self.cardinality);
        for (i, l) in self.links.iter().enumerate() {
            let kind = match l.kind {
                LinkKind::MachineVerified => "verified",
                LinkKind::SymbolicRule => "symbolic",
            };
            let _ = writeln!(out, "{:>2}. [{kind}] {}: {}", i + 1, l.name, l.statement);
        }
        for c in &self.caveats {
            let _ = writeln!(out, "caveat: {c}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    /// Stage at which the evidence departs from the descriptor, if any.
    pub failing_stage: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failing_stage {
            Some(m) => write!(f, "refused at stage {m}: {}", self.reason),
            None => write!(f, "refused: {}", self.reason),
        }
    }
}

fn refuse(stage: Option<usize>, reason: impl Into<String>) -> Refusal {
    Refusal {
        failing_stage: stage,
        reason: reason.into(),
    }
}

/// Checks the finite evidence against `symbolic` cut at `N`, then applies
/// the symbolic rules. Every group and transition matrix of the evidence is
/// re-examined; the stored verdict flags are not trusted.
pub fn certify_theorem(evidence: &StageSystem, symbolic: &SymbolicDirectSystem) -> Result<Certificate, Refusal> {
    let n = evidence.disks;
    if n == 0 || evidence.stages.len() != n + 1 {
        return Err(refuse(None, "no finite stages to check"));
    }
    let cut = symbolic.truncated(n).ok_or_else(|| {
        refuse(
            None,
            format!("the system [{symbolic}] has no finite truncation to compare"),
        )
    })?;
    let mut links = Vec::new();
    for (i, stage) in evidence.stages.iter().enumerate() {
        let m = i + 1;
        if stage.m != m {
            return Err(refuse(Some(m), "stages out of order"));
        }
        let expected = cut.family.stage(m);
        let rank = match expected {
            SymbolicGroup::Trivial => 0,
            SymbolicGroup::FreeFinite { rank } => rank,
            _ => unreachable!("truncated stages are finite"),
        };
        if stage.group != CanonicalForm::free(rank) {
            return Err(refuse(
                Some(m),
                format!("group {} where the descriptor gives {expected}", stage.group),
            ));
        }
    }
    links.push(Link {
        name: "finite stages".into(),
        kind: LinkKind::MachineVerified,
        statement: format!("Ȟ¹(S_m, ℋ¹F) ≅ Z^({n}-m+1) for m = 1..={}", n + 1),
    });
    if cut.transition != TransitionKind::Projection {
        return Err(refuse(None, "finite stages carry projections, the descriptor does not"));
    }
    for from in 1..=n + 1 {
        for to in from..=n + 1 {
            let t = evidence
                .transition(from, to)
                .ok_or_else(|| refuse(Some(from), format!("transition {from}→{to} missing")))?;
            let src = PresentedAbGroup::free(n + 1 - from);
            let tgt = PresentedAbGroup::free(n + 1 - to);
            let hom = GroupHom::new(src, tgt, t.matrix.clone())
                .map_err(|e| refuse(Some(from), format!("transition {from}→{to} malformed: {e}")))?;
            let surjective = hom.is_surjective().map_err(|e| refuse(Some(from), e.to_string()))?;
            let (ker, _) = hom.kernel().map_err(|e| refuse(Some(from), e.to_string()))?;
            if !surjective || !t.surjective {
                return Err(refuse(Some(from), format!("transition {from}→{to} is not surjective")));
            }
            if ker.rank() != to - from || !ker.canonical().is_free() || t.kernel_rank != to - from {
                return Err(refuse(
                    Some(from),
                    format!("transition {from}→{to} has kernel {}", ker.canonical()),
                ));
            }
            if t.matrix != projection_matrix(n, from, to) || !t.is_projection {
                return Err(refuse(
                    Some(from),
                    format!("transition {from}→{to} is not the coordinate projection"),
                ));
            }
            if !t.retracts_refinement {
                return Err(refuse(
                    Some(from),
                    format!("transition {from}→{to} does not retract the refinement"),
                ));
            }
        }
    }
    if !evidence.composes {
        return Err(refuse(None, "transitions do not compose"));
    }
    links.push(Link {
        name: "finite transitions".into(),
        kind: LinkKind::MachineVerified,
        statement: "every t_{m→m′} is the surjective projection Z^(N-m+1) → Z^(N-m′+1) with free kernel of rank m′-m, and the system composes".into(),
    });
    let colim = SymbolicGroup::colim(symbolic.clone());
    let (rule, _) = colim_rule(symbolic).ok_or_else(|| refuse(None, format!("no rule reduces [{symbolic}]")))?;
    let normal_form = normalize(&colim);
    links.push(Link {
        name: "direct limit".into(),
        kind: LinkKind::SymbolicRule,
        statement: format!("{colim} = {normal_form} by the rule: {rule}"),
    });
    let cardinality = cardinality_class(&normal_form);
    if cardinality != Cardinality::Uncountable {
        return Err(refuse(
            None,
            format!("the limit {normal_form} is classified {cardinality:?}"),
        ));
    }
    links.push(Link {
        name: "cardinality".into(),
        kind: LinkKind::SymbolicRule,
        statement: format!("{normal_form} is uncountable: an uncountable group modulo a countable subgroup"),
    });
    let mut caveats = Vec::new();
    if n == 1 {
        caveats.push("single-transition evidence: only Z → 0 was checked".to_string());
    }
    Ok(Certificate {
        disks: n,
        system: symbolic.clone(),
        links,
        normal_form,
        cardinality,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedge::{build_wedge, stage_system};

    fn prod_mod_sum() -> SymbolicGroup {
        SymbolicGroup::quotient(SymbolicGroup::CountableProduct, SymbolicGroup::CountableSum).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let tail = SymbolicGroup::colim(SymbolicDirectSystem::tail_products());
        assert_eq!(normalize(&tail), prod_mod_sum());
        let constant = SymbolicGroup::colim(SymbolicDirectSystem {
            family: StageFamily::Constant {
                group: Box::new(SymbolicGroup::FreeFinite { rank: 1 }),
            },
            transition: TransitionKind::Identity,
        });
        assert_eq!(normalize(&constant), SymbolicGroup::FreeFinite { rank: 1 });
        let cut = SymbolicGroup::colim(SymbolicDirectSystem::tail_products().truncated(4).unwrap());
        assert_eq!(normalize(&cut), SymbolicGroup::Trivial);
        let heads = SymbolicGroup::colim(SymbolicDirectSystem {
            family: StageFamily::HeadProduct,
            transition: TransitionKind::Inclusion,
        });
        assert_eq!(normalize(&heads), SymbolicGroup::CountableSum);
        assert_eq!(
            normalize(&SymbolicGroup::FreeFinite { rank: 0 }),
            SymbolicGroup::Trivial
        );
    }

    #[test]
    fn unknown_patterns_stay_unreduced() {
        let odd = SymbolicGroup::colim(SymbolicDirectSystem {
            family: StageFamily::TailProduct,
            transition: TransitionKind::Inclusion,
        });
        let n = normalize(&odd);
        assert!(n.is_unreduced());
        assert_eq!(cardinality_class(&n), Cardinality::Unknown);
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn quotient_needs_a_witness() {
        assert!(SymbolicGroup::quotient(SymbolicGroup::CountableSum, SymbolicGroup::CountableProduct).is_none());
        let same = SymbolicGroup::quotient(SymbolicGroup::CountableSum, SymbolicGroup::CountableSum).unwrap();
        assert_eq!(normalize(&same), SymbolicGroup::Trivial);
    }

    #[test]
    fn cardinalities() {
        assert_eq!(cardinality_class(&prod_mod_sum()), Cardinality::Uncountable);
        assert_eq!(
            cardinality_class(&SymbolicGroup::CountableSum),
            Cardinality::CountablyInfinite
        );
        assert_eq!(cardinality_class(&SymbolicGroup::Trivial), Cardinality::Finite);
        assert_eq!(
            cardinality_class(&SymbolicGroup::FreeFinite { rank: 3 }),
            Cardinality::CountablyInfinite
        );
    }

    #[test]
    fn transition_kinds_compose() {
        use TransitionKind::*;
        assert_eq!(Projection.then(Projection), Some(Projection));
        assert_eq!(Identity.then(Inclusion), Some(Inclusion));
        assert_eq!(Projection.then(Inclusion), None);
        assert_eq!(Zero.then(Inclusion), Some(Zero));
    }

    #[test]
    fn certificates() {
        let sys = stage_system(&build_wedge(2).unwrap()).unwrap();
        let cert = certify_theorem(&sys, &SymbolicDirectSystem::tail_products()).unwrap();
        assert_eq!(cert.cardinality, Cardinality::Uncountable);
        assert!(cert.caveats.is_empty());
        assert_eq!(
            cert.links.iter().filter(|l| l.kind == LinkKind::SymbolicRule).count(),
            2
        );
        assert!(cert.transcript().contains("[symbolic]"));

        let one = stage_system(&build_wedge(1).unwrap()).unwrap();
        let cert = certify_theorem(&one, &SymbolicDirectSystem::tail_products()).unwrap();
        assert_eq!(cert.caveats.len(), 1);

        let mut bad = sys.clone();
        let t = bad.transitions.iter_mut().find(|t| t.from == 1 && t.to == 2).unwrap();
        t.matrix = t.matrix.scaled(2);
        let refusal = certify_theorem(&bad, &SymbolicDirectSystem::tail_products()).unwrap_err();
        assert_eq!(refusal.failing_stage, Some(1));

        let wrong = SymbolicDirectSystem {
            family: StageFamily::HeadProduct,
            transition: TransitionKind::Inclusion,
        };
        assert!(certify_theorem(&sys, &wrong).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = normalize(&SymbolicGroup::colim(SymbolicDirectSystem::tail_products()));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<SymbolicGroup>(&s).unwrap(), g);
    }
}
