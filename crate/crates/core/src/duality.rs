//! Checks that the lower lifting is an equivalence onto directionally atomic
//! relations, and that the embeddings of functions commute with it.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::carrier::{Carrier, Subset};
use crate::config::EnumConfig;
use crate::lattice::{validate_caba, Caba, FiniteFunction, LatticeError, LawCheck};
use crate::modal::{
    check_simulatory, classify_frame_map, classify_sim, modal_operators, Frame, ModalError,
};
use crate::relations::{
    atom_base, lower_lift, matrix_is_directionally_atomic, CabaRel, FinRel, PairMatrix, RelError,
};

/// Outcome of a law checked on a batch of inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub checked: usize,
    /// `(input index, witness)` for each failing input.
    pub failures: Vec<(usize, String)>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn first_difference(
    a: &CabaRel,
    b: &CabaRel,
    cfg: &EnumConfig,
) -> Result<Option<String>, RelError> {
    Ok(a.first_difference(b, cfg)?.map(|(s, t)| {
        format!(
            "{}: {} vs {}",
            a.render_pair(s, t),
            a.holds(s, t),
            b.holds(s, t)
        )
    }))
}

/// `⇓id_X` is `⊆` on `P(X)`, over every pair of subsets.
pub fn verify_identity_law(x: &Arc<Carrier>, cfg: &EnumConfig) -> Result<LawCheck, RelError> {
    let lifted = lower_lift(&FinRel::identity(x.clone()));
    let subset = CabaRel::order(lifted.src(), cfg)?;
    Ok(first_difference(&lifted, &subset, cfg)?.map_or_else(LawCheck::pass, LawCheck::fail))
}

/// Compares `⇓composite` with `⇓r ; ⇓s`. Pass `r.compose(s)` for the
/// functor law; anything else tests the checker.
pub fn verify_composition_against(
    r: &FinRel,
    s: &FinRel,
    composite: &FinRel,
    cfg: &EnumConfig,
) -> Result<LawCheck, RelError> {
    let separate = lower_lift(r).compose(&lower_lift(s), cfg)?;
    let together = lower_lift(composite).materialise(cfg)?;
    Ok(first_difference(&together, &separate, cfg)?.map_or_else(LawCheck::pass, LawCheck::fail))
}

/// `⇓(R;S) = ⇓R ; ⇓S` on each composable pair.
pub fn verify_functor_laws(
    sample: &[(FinRel, FinRel)],
    cfg: &EnumConfig,
) -> Result<LawReport, RelError> {
    let mut failures = Vec::new();
    for (i, (r, s)) in sample.iter().enumerate() {
        let check = verify_composition_against(r, s, &r.compose(s)?, cfg)?;
        if let Some(w) = check.witness {
            failures.push((i, w));
        }
    }
    Ok(LawReport {
        checked: sample.len(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub candidates: u64,
    pub directionally_atomic: u64,
    /// `2^(|X|·|Y|)`.
    pub expected: u64,
    /// Every directionally atomic candidate is the lift of its atom base.
    pub each_is_a_lift: LawCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullFaithfulReport {
    pub src_size: usize,
    pub dst_size: usize,
    pub base_relations: u64,
    /// Distinct base relations have distinct lifts.
    pub injective: LawCheck,
    /// `atom_base(⇓R) = R`.
    pub round_trip: LawCheck,
    /// Brute-force count over every relation `P(X) ⇸ P(Y)`; only run while
    /// `2^|X| · 2^|Y| ≤ 16`.
    pub census: Option<Census>,
}

impl FullFaithfulReport {
    pub fn all_pass(&self) -> bool {
        self.injective.holds
            && self.round_trip.holds
            && self
                .census
                .as_ref()
                .is_none_or(|c| c.each_is_a_lift.holds && c.directionally_atomic == c.expected)
    }
}

const CENSUS_CELLS: usize = 16;

/// Faithfulness and fullness of the lower lifting between carriers of the
/// given sizes.
pub fn verify_full_faithful(
    src_size: usize,
    dst_size: usize,
    cfg: &EnumConfig,
) -> Result<FullFaithfulReport, RelError> {
    let x = Carrier::numbered("X", src_size);
    let y = Carrier::numbered("Y", dst_size);
    let cells = src_size * dst_size;
    if cells >= 32 {
        return Err(crate::config::EnumerationTooLarge {
            required: 1u128 << cells,
            bound: cfg.max_enum,
        }
        .into());
    }
    cfg.check_pairs(src_size, dst_size)?;
    let base_relations = 1u64 << cells;
    let relation = |code: u64| {
        let rows = (0..src_size)
            .map(|i| Subset((code >> (i * dst_size)) & y.full().0))
            .collect();
        FinRel::from_rows(x.clone(), y.clone(), rows)
    };

    let mut seen: HashSet<PairMatrix> = HashSet::new();
    let mut injective = None;
    let mut round_trip = None;
    for code in 0..base_relations {
        let r = relation(code);
        let lifted = lower_lift(&r);
        if round_trip.is_none() && atom_base(&lifted) != r {
            round_trip = Some(format!("atom base of the lift of {r} differs"));
        }
        if !seen.insert(lifted.matrix(cfg)?) && injective.is_none() {
            injective = Some(format!("lift of {r} coincides with an earlier one"));
        }
    }

    let census = if (1usize << src_size) * (1usize << dst_size) <= CENSUS_CELLS {
        Some(census(&x, &y)?)
    } else {
        None
    };
    Ok(FullFaithfulReport {
        src_size,
        dst_size,
        base_relations,
        injective: LawCheck::from_witness(injective),
        round_trip: LawCheck::from_witness(round_trip),
        census,
    })
}

fn census(x: &Arc<Carrier>, y: &Arc<Carrier>) -> Result<Census, RelError> {
    let (n, k) = (x.len(), y.len());
    let (rows, cols) = (1usize << n, 1usize << k);
    let cells = rows * cols;
    let cfg = EnumConfig::new(cells as u64);
    let (px, py) = (Caba::powerset(x.clone()), Caba::powerset(y.clone()));
    let mut found = 0;
    let mut not_lift = None;
    for code in 0u64..1 << cells {
        let mut m = PairMatrix::new(n, k);
        for c in Subset(code).iter() {
            m.set(Subset((c / cols) as u64), Subset((c % cols) as u64));
        }
        if !matrix_is_directionally_atomic(&m, n, k) {
            continue;
        }
        found += 1;
        if not_lift.is_none() {
            let q = CabaRel::from_matrix(px.clone(), py.clone(), m)?;
            not_lift = first_difference(&q, &lower_lift(&atom_base(&q)), &cfg)?;
        }
    }
    Ok(Census {
        candidates: 1 << cells,
        directionally_atomic: found,
        expected: 1 << (n * k),
        each_is_a_lift: LawCheck::from_witness(not_lift),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub r_directionally_atomic: LawCheck,
    pub r_inv_directionally_atomic: LawCheck,
    /// `r ; r_inv` is the order of the algebra.
    pub r_then_inv_is_order: LawCheck,
    /// `r_inv ; r` is `⊆` on the powerset of atoms.
    pub inv_then_r_is_inclusion: LawCheck,
    /// `x ⊑ ⋁X` iff every atom below `x` is below some member of `X`, for
    /// every element `x` and every set `X` of elements.
    pub atoms_join_prime: LawCheck,
    pub pairs_checked: u64,
}

impl SurjectivityReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.r_directionally_atomic,
            &self.r_inv_directionally_atomic,
            &self.r_then_inv_is_order,
            &self.inv_then_r_is_inclusion,
            &self.atoms_join_prime,
        ]
        .iter()
        .all(|c| c.holds)
    }
}

/// A CABA and the powerset of its atoms, related both ways.
#[derive(Debug, Clone)]
pub struct SurjectivityWitness {
    pub caba: Caba,
    /// `x r X` iff `x ⊑ ⋁X`.
    pub r: CabaRel,
    /// `X r_inv x` iff `⋁X ⊑ x`.
    pub r_inv: CabaRel,
    pub report: SurjectivityReport,
}

/// The powerset of `atoms` presented as an explicit order on named elements.
pub fn named_powerset(atoms: &Arc<Carrier>) -> Caba {
    let n = atoms.len();
    let elements = Carrier::new(
        format!("Sub({})", atoms.name()),
        Subset::all(n).map(|s| atoms.render(s)).collect::<Vec<_>>(),
    )
    .expect("subset renderings are distinct");
    let subsets: Vec<Subset> = Subset::all(n).collect();
    let pairs = (0..subsets.len()).flat_map(|i| {
        let subsets = &subsets;
        (0..subsets.len())
            .filter(move |&j| subsets[i].is_subset_of(subsets[j]))
            .map(move |j| (i, j))
    });
    let leq = FinRel::from_index_pairs(
        elements.clone(),
        elements.clone(),
        pairs.collect::<Vec<_>>(),
    );
    Caba::named(format!("Sub({})", atoms.name()), elements, leq)
        .expect("order is over its own carrier")
}

/// Builds `r` and `r_inv` for a named CABA from its order table alone and
/// checks them exhaustively. Powerset CABAs are first presented by
/// [`named_powerset`].
pub fn surjectivity_witness(
    caba: &Caba,
    cfg: &EnumConfig,
) -> Result<SurjectivityWitness, LatticeError> {
    let caba = if caba.is_named() {
        caba.clone()
    } else {
        named_powerset(caba.atoms())
    };
    let report = validate_caba(&caba);
    if let Some(reason) = report.first_failure() {
        return Err(LatticeError::NotACaba {
            name: caba.name().to_owned(),
            reason,
        });
    }
    let order = caba.named_order().expect("named");
    let n = caba.atom_count();
    let size = order.elements().len();
    cfg.check_pairs(n, n)?;
    cfg.check_count((size as u128) << size)?;

    let element = |atoms: Subset| {
        order
            .element_with_atoms(atoms)
            .expect("validated CABA has every join")
    };
    let join_of_atoms = |set: Subset| -> usize {
        let members: Subset = set.iter().map(|a| order.atom_element(a)).collect();
        order
            .join_by_order(members)
            .expect("validated CABA is complete")
    };
    let powerset = Caba::powerset(caba.atoms().clone());
    let r = CabaRel::from_predicate(caba.clone(), powerset.clone(), cfg, |x, set| {
        order.le(element(x), join_of_atoms(set))
    })?;
    let r_inv = CabaRel::from_predicate(powerset.clone(), caba.clone(), cfg, |set, x| {
        order.le(join_of_atoms(set), element(x))
    })?;

    let da = |q: &CabaRel| -> Result<LawCheck, LatticeError> {
        let rep = crate::relations::check_directionally_atomic(q, cfg)?;
        Ok(LawCheck::from_witness(rep.first_failure()))
    };
    let table_order = CabaRel::from_predicate(caba.clone(), caba.clone(), cfg, |a, b| {
        order.le(element(a), element(b))
    })?;
    let inclusion = CabaRel::order(&powerset, cfg)?;
    let r_then_inv = r.compose(&r_inv, cfg)?;
    let inv_then_r = r_inv.compose(&r, cfg)?;

    let join_prime = (0..size).find_map(|x| {
        Subset::all(size).find_map(|members| {
            let lhs = order.le(x, order.join_by_order(members)?);
            let rhs = order
                .decomposition(x)
                .iter()
                .all(|a| members.iter().any(|m| order.le(order.atom_element(a), m)));
            (lhs != rhs).then(|| {
                format!(
                    "{} against {}",
                    order.elements().element(x),
                    order.elements().render(members)
                )
            })
        })
    });

    let report = SurjectivityReport {
        r_directionally_atomic: da(&r)?,
        r_inv_directionally_atomic: da(&r_inv)?,
        r_then_inv_is_order: LawCheck::from_witness(first_difference(
            &r_then_inv,
            &table_order,
            cfg,
        )?),
        inv_then_r_is_inclusion: LawCheck::from_witness(first_difference(
            &inv_then_r,
            &inclusion,
            cfg,
        )?),
        atoms_join_prime: LawCheck::from_witness(join_prime),
        pairs_checked: ((size * size) + (size << size)) as u64,
    };
    Ok(SurjectivityWitness {
        caba,
        r,
        r_inv,
        report,
    })
}

/// `{(x, f(x))}`.
pub fn graph(f: &FiniteFunction) -> FinRel {
    FinRel::from_index_pairs(
        f.src().clone(),
        f.dst().clone(),
        f.mapping().iter().copied().enumerate().collect::<Vec<_>>(),
    )
}

/// `j(f) : P(dst) ⇸ P(src)`, relating `B` to `A` iff `B ⊆ f_!(A)`.
pub fn j_embed(f: &FiniteFunction, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
    CabaRel::from_predicate(
        Caba::powerset(f.dst().clone()),
        Caba::powerset(f.src().clone()),
        cfg,
        |b, a| b.is_subset_of(f.image(a)),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// `⇓(graph_rel†) = j(f)`, with `graph_rel` supplied.
pub fn verify_square_with(
    f: &FiniteFunction,
    graph_rel: &FinRel,
    cfg: &EnumConfig,
) -> Result<SquareReport, RelError> {
    let around = lower_lift(&graph_rel.dagger());
    let j = j_embed(f, cfg)?;
    let witness = first_difference(&around, &j, cfg)?;
    Ok(SquareReport {
        holds: witness.is_none(),
        witness,
    })
}

/// Both routes from a function to a relation between powersets agree.
pub fn verify_square_tarski(
    f: &FiniteFunction,
    cfg: &EnumConfig,
) -> Result<SquareReport, RelError> {
    verify_square_with(f, &graph(f), cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThomasonReport {
    pub square: SquareReport,
    pub graph_is_bisimulation: bool,
    pub j_is_bisimulatory: bool,
}

impl ThomasonReport {
    pub fn holds(&self) -> bool {
        self.square.holds && self.graph_is_bisimulation && self.j_is_bisimulatory
    }
}

/// The square for an open map of frames, plus the modal properties of both
/// routes. Maps that are not open are rejected.
pub fn verify_square_thomason(
    f: &FiniteFunction,
    x: &Frame,
    y: &Frame,
    cfg: &EnumConfig,
) -> Result<ThomasonReport, ModalError> {
    let map = classify_frame_map(f, x, y, cfg)?;
    if !map.open() {
        let why = map
            .morphism_witness
            .or(map.open_witness)
            .unwrap_or_else(|| "back condition fails".to_owned());
        return Err(ModalError::NotOpenMap(
            format!("{} -> {}", x.name(), y.name()),
            why,
        ));
    }
    let square = verify_square_tarski(f, cfg)?;
    let graph_is_bisimulation = classify_sim(&graph(f), x, y)?.is_bisimulation;
    let j = j_embed(f, cfg)?;
    let sim = check_simulatory(&j, &modal_operators(y, cfg), &modal_operators(x, cfg), cfg)?;
    Ok(ThomasonReport {
        square,
        graph_is_bisimulation,
        j_is_bisimulatory: sim.bisimulatory,
    })
}
