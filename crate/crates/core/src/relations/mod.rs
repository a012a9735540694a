//! Relations between finite sets, their liftings to powersets, and the
//! directional-atomicity diagnostics for relations between CABAs.

mod cabarel;
mod finrel;

use serde::Serialize;
use thiserror::Error;

pub use cabarel::{CabaRel, CabaRelRepr, PairMatrix};
pub use finrel::FinRel;

use crate::carrier::{CarrierError, Subset};
use crate::config::{EnumConfig, EnumerationTooLarge};
use crate::lattice::{Caba, LawCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("carrier mismatch: `{left}` does not match `{right}`")]
    CarrierMismatch { left: String, right: String },
    #[error("relation `{0} -> {1}` is not an endorelation")]
    NotEndo(String, String),
    #[error("CABA mismatch: `{0}` vs `{1}`")]
    CabaMismatch(String, String),
    #[error("relation is not directionally atomic: {0}")]
    NotDirectionallyAtomic(String),
    #[error(transparent)]
    TooLarge(#[from] EnumerationTooLarge),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

/// `S ⇓R T` iff every member of `S` is `R`-related to some member of `T`.
pub fn lower_holds(r: &FinRel, s: Subset, t: Subset) -> bool {
    s.iter().all(|x| r.row(x).intersects(t))
}

/// `S ⇑R T` iff every member of `T` is `R`-related from some member of `S`.
pub fn upper_holds(r: &FinRel, s: Subset, t: Subset) -> bool {
    t.is_subset_of(r.image(s))
}

/// The lower lifting `⇓R : P(X) ⇸ P(Y)`.
pub fn lower_lift(r: &FinRel) -> CabaRel {
    CabaRel::lifted(
        Caba::powerset(r.src().clone()),
        Caba::powerset(r.dst().clone()),
        r.clone(),
    )
}

/// The upper lifting `⇑R : P(X) ⇸ P(Y)`.
pub fn upper_lift(r: &FinRel) -> CabaRel {
    CabaRel::upper(
        Caba::powerset(r.src().clone()),
        Caba::powerset(r.dst().clone()),
        r.clone(),
    )
}

/// All pairs of a lifting, refusing tables larger than the bound.
pub fn enumerate_lift(q: &CabaRel, cfg: &EnumConfig) -> Result<Vec<(Subset, Subset)>, RelError> {
    Ok(q.matrix(cfg)?.pairs().collect())
}

/// Restriction of a CABA relation to atoms: `x S y` iff `{x} Q {y}`.
pub fn atom_base(q: &CabaRel) -> FinRel {
    let (src, dst) = (q.src().atoms().clone(), q.dst().atoms().clone());
    let pairs = (0..src.len()).flat_map(|x| {
        (0..dst.len())
            .filter(move |&y| q.holds(Subset::singleton(x), Subset::singleton(y)))
            .map(move |y| (x, y))
    });
    FinRel::from_index_pairs(src.clone(), dst.clone(), pairs.collect::<Vec<_>>())
}

/// The variant relation `Ř : B' ⇸ B`:
/// `b' Ř b` iff every atom below `b'` is related from some atom below `b`.
///
/// Lifted relations take the shortcut through the converse of their base;
/// explicit ones are checked for directional atomicity and then computed from
/// the defining formula.
pub fn variant(q: &CabaRel, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
    match q.repr() {
        CabaRelRepr::Lifted(base) => Ok(CabaRel::lifted(
            q.dst().clone(),
            q.src().clone(),
            base.dagger(),
        )),
        _ => {
            let report = check_directionally_atomic(q, cfg)?;
            if let Some(reason) = report.first_failure() {
                return Err(RelError::NotDirectionallyAtomic(reason));
            }
            variant_by_definition(q, cfg)
        }
    }
}

/// The variant computed pointwise from its definition, without any
/// precondition check.
pub fn variant_by_definition(q: &CabaRel, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
    let (n, m) = (q.src().atom_count(), q.dst().atom_count());
    let atomic: Vec<Subset> = (0..m)
        .map(|a2| {
            (0..n)
                .filter(|&a| q.holds(Subset::singleton(a), Subset::singleton(a2)))
                .collect()
        })
        .collect();
    CabaRel::from_predicate(q.dst().clone(), q.src().clone(), cfg, |b2, b| {
        b2.iter().all(|a2| atomic[a2].intersects(b))
    })
}

/// Which of the three directional-atomicity conditions hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DaReport {
    pub bimodule: LawCheck,
    pub left_disjunctive: LawCheck,
    pub atomic_founded: LawCheck,
}

impl DaReport {
    pub fn all_pass(&self) -> bool {
        self.bimodule.holds && self.left_disjunctive.holds && self.atomic_founded.holds
    }

    pub fn first_failure(&self) -> Option<String> {
        [
            ("bimodule", &self.bimodule),
            ("left-disjunctive", &self.left_disjunctive),
            ("atomic-founded", &self.atomic_founded),
        ]
        .into_iter()
        .find(|(_, c)| !c.holds)
        .map(|(name, c)| format!("{name} fails at {}", c.witness.as_deref().unwrap_or("?")))
    }
}

/// Exhaustive directional-atomicity diagnostics.
///
/// * bimodule: every `p' ⊑ p Q q ⊑ q'` gives `p' Q q'`;
/// * left-disjunctive: for every `b`, `⊥ Q b`, and the elements related to `b`
///   are closed under binary joins (together: every finite join);
/// * atomic-founded: an atom related to `b` is related to an atom below `b`.
pub fn check_directionally_atomic(q: &CabaRel, cfg: &EnumConfig) -> Result<DaReport, RelError> {
    let m = q.matrix(cfg)?;
    Ok(check_matrix(
        &m,
        q.src().atom_count(),
        q.dst().atom_count(),
        |a, b| q.render_pair(a, b),
    ))
}

pub(crate) fn check_matrix(
    m: &PairMatrix,
    n: usize,
    k: usize,
    render: impl Fn(Subset, Subset) -> String,
) -> DaReport {
    DaReport {
        bimodule: first_bimodule_violation(m, n, k, &render)
            .map_or_else(LawCheck::pass, LawCheck::fail),
        left_disjunctive: first_disjunction_violation(m, n, k, &render)
            .map_or_else(LawCheck::pass, LawCheck::fail),
        atomic_founded: first_foundation_violation(m, n, k, &render)
            .map_or_else(LawCheck::pass, LawCheck::fail),
    }
}

/// Fast yes/no version of [`check_directionally_atomic`] for censuses.
pub(crate) fn matrix_is_directionally_atomic(m: &PairMatrix, n: usize, k: usize) -> bool {
    let quiet = |_: Subset, _: Subset| String::new();
    first_disjunction_violation(m, n, k, &quiet).is_none()
        && first_bimodule_violation(m, n, k, &quiet).is_none()
        && first_foundation_violation(m, n, k, &quiet).is_none()
}

fn first_bimodule_violation(
    m: &PairMatrix,
    _n: usize,
    k: usize,
    render: &impl Fn(Subset, Subset) -> String,
) -> Option<String> {
    for (p, q) in m.pairs() {
        for p2 in p.subsets() {
            for q2 in q.supersets(k) {
                if !m.get(p2, q2) {
                    return Some(format!(
                        "{} related but not {}",
                        render(p, q),
                        render(p2, q2)
                    ));
                }
            }
        }
    }
    None
}

fn first_disjunction_violation(
    m: &PairMatrix,
    n: usize,
    k: usize,
    render: &impl Fn(Subset, Subset) -> String,
) -> Option<String> {
    for b in Subset::all(k) {
        if !m.get(Subset::EMPTY, b) {
            return Some(format!(
                "empty join: {} not related",
                render(Subset::EMPTY, b)
            ));
        }
        let fiber: Vec<Subset> = Subset::all(n).filter(|&a| m.get(a, b)).collect();
        for (i, &a1) in fiber.iter().enumerate() {
            for &a2 in &fiber[i + 1..] {
                let joined = a1.union(a2);
                if !m.get(joined, b) {
                    return Some(format!(
                        "{} and {} related but not their join {}",
                        render(a1, b),
                        render(a2, b),
                        render(joined, b)
                    ));
                }
            }
        }
    }
    None
}

fn first_foundation_violation(
    m: &PairMatrix,
    n: usize,
    k: usize,
    render: &impl Fn(Subset, Subset) -> String,
) -> Option<String> {
    for x in 0..n {
        let atom = Subset::singleton(x);
        for b in Subset::all(k) {
            if m.get(atom, b) && !b.iter().any(|y| m.get(atom, Subset::singleton(y))) {
                return Some(render(atom, b));
            }
        }
    }
    None
}
