mod common;

use std::sync::Arc;

use duality_lab::duality::{
    graph, j_embed, named_powerset, surjectivity_witness, verify_composition_against,
    verify_identity_law,
};
use duality_lab::lattice::{adjoint_triple, validate_caba};
use duality_lab::logic::Rule;
use duality_lab::logic::{holds_entailment, holds_judgment};
use duality_lab::modal::{
    check_simulatory, classify_frame_map, classify_sim, greatest_fixpoint,
    lemma_equivalence_harness, modal_operators, SimKind,
};
use duality_lab::relations::{
    atom_base, check_directionally_atomic, lower_holds, lower_lift, upper_lift, variant,
    variant_by_definition, PairMatrix,
};
use duality_lab::{
    Caba, CabaRel, Carrier, EnumConfig, FinRel, FiniteFunction, Formula, Frame, Judgment, Models,
    RelExpr, Subset,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{rel_from_rows, set_formula};

fn cfg() -> EnumConfig {
    EnumConfig::default()
}

fn carrier(name: &str, n: usize) -> Arc<Carrier> {
    Carrier::numbered(name, n)
}

fn rows(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), n)
}

/// A relation between numbered carriers with sizes in `1..=max`.
fn rel(max: usize) -> impl Strategy<Value = FinRel> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        rows(n).prop_map(move |r| rel_from_rows(&carrier("X", n), &carrier("Y", m), &r))
    })
}

/// Two relations over the same carriers.
fn rel_pair(max: usize) -> impl Strategy<Value = (FinRel, FinRel)> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        (rows(n), rows(n)).prop_map(move |(a, b)| {
            let (x, y) = (carrier("X", n), carrier("Y", m));
            (rel_from_rows(&x, &y, &a), rel_from_rows(&x, &y, &b))
        })
    })
}

/// Composable `X -> Y -> Z`.
fn composable(max: usize) -> impl Strategy<Value = (FinRel, FinRel)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(n, m, k)| {
        (rows(n), rows(m)).prop_map(move |(a, b)| {
            let (x, y, z) = (carrier("X", n), carrier("Y", m), carrier("Z", k));
            (rel_from_rows(&x, &y, &a), rel_from_rows(&y, &z, &b))
        })
    })
}

fn function(max: usize) -> impl Strategy<Value = FiniteFunction> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        prop::collection::vec(0..m, n).prop_map(move |map| {
            FiniteFunction::new(carrier("X", n), carrier("Y", m), map).unwrap()
        })
    })
}

fn composable_functions(max: usize) -> impl Strategy<Value = (FiniteFunction, FiniteFunction)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(n, m, k)| {
        (
            prop::collection::vec(0..m, n),
            prop::collection::vec(0..k, m),
        )
            .prop_map(move |(f, g)| {
                let (x, y, z) = (carrier("X", n), carrier("Y", m), carrier("Z", k));
                (
                    FiniteFunction::new(x, y.clone(), f).unwrap(),
                    FiniteFunction::new(y, z, g).unwrap(),
                )
            })
    })
}

/// Two functions with the same source and target.
fn parallel_functions(max: usize) -> impl Strategy<Value = (FiniteFunction, FiniteFunction)> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(0..m, n),
            prop::collection::vec(0..m, n),
        )
            .prop_map(move |(f, g)| {
                let (x, y) = (carrier("X", n), carrier("Y", m));
                (
                    FiniteFunction::new(x.clone(), y.clone(), f).unwrap(),
                    FiniteFunction::new(x, y, g).unwrap(),
                )
            })
    })
}

fn frame_named(name: &'static str, max: usize) -> impl Strategy<Value = Frame> {
    (1..=max).prop_flat_map(move |n| {
        rows(n).prop_map(move |r| {
            let w = carrier(name, n);
            Frame::from_carrier(w.clone())
                .with_transitions(rel_from_rows(&w, &w, &r))
                .unwrap()
        })
    })
}

fn frame(max: usize) -> impl Strategy<Value = Frame> {
    frame_named("X", max)
}

/// Frames `X`, `Y` and a relation between their worlds.
fn frames_and_rel(max: usize) -> impl Strategy<Value = (Frame, Frame, FinRel)> {
    (frame_named("X", max), frame_named("Y", max)).prop_flat_map(|(x, y)| {
        rows(x.len()).prop_map(move |r| {
            let q = rel_from_rows(x.worlds(), y.worlds(), &r);
            (x.clone(), y.clone(), q)
        })
    })
}

fn frames_and_map(max: usize) -> impl Strategy<Value = (Frame, Frame, FiniteFunction)> {
    (frame_named("X", max), frame_named("Y", max)).prop_flat_map(|(x, y)| {
        prop::collection::vec(0..y.len(), x.len()).prop_map(move |map| {
            let f = FiniteFunction::new(x.worlds().clone(), y.worlds().clone(), map).unwrap();
            (x.clone(), y.clone(), f)
        })
    })
}

// core_lattice

proptest! {
    #[test]
    fn image_preimage_coimage_are_adjoint(f in function(4)) {
        let t = adjoint_triple(&f, &cfg()).unwrap();
        prop_assert!(t.report.all_pass(), "{:?}", t.report);
    }

    #[test]
    fn image_sends_atoms_to_atoms(f in function(5), i in 0usize..5) {
        let i = i % f.src().len();
        prop_assert_eq!(f.image(Subset::singleton(i)), Subset::singleton(f.apply(i)));
    }

    #[test]
    fn preimage_is_a_boolean_homomorphism(f in function(5), a in any::<u64>(), b in any::<u64>()) {
        let full = f.dst().full();
        let (a, b) = (Subset(a & full.0), Subset(b & full.0));
        let n = f.src().len();
        prop_assert_eq!(f.preimage(a.union(b)), f.preimage(a).union(f.preimage(b)));
        prop_assert_eq!(f.preimage(a.intersection(b)), f.preimage(a).intersection(f.preimage(b)));
        prop_assert_eq!(f.preimage(a.complement(f.dst().len())), f.preimage(a).complement(n));
        prop_assert_eq!(f.preimage(full), f.src().full());
        prop_assert_eq!(f.preimage(Subset::EMPTY), Subset::EMPTY);
    }

    #[test]
    fn powersets_validate(n in 0usize..=5) {
        let r = validate_caba(&Caba::powerset(carrier("S", n)));
        prop_assert!(r.all_pass(), "{:?}", r);
    }
}

// relations

proptest! {
    #[test]
    fn lift_of_identity_is_inclusion(n in 0usize..=4) {
        let c = verify_identity_law(&carrier("X", n), &cfg()).unwrap();
        prop_assert!(c.holds, "{:?}", c.witness);
    }

    #[test]
    fn lift_preserves_composition((r, s) in composable(3)) {
        let c = verify_composition_against(&r, &s, &r.compose(&s).unwrap(), &cfg()).unwrap();
        prop_assert!(c.holds, "{:?}", c.witness);
    }

    #[test]
    fn dropping_a_pair_breaks_composition((r, s) in composable(3)) {
        let rs = r.compose(&s).unwrap();
        prop_assume!(!rs.is_empty());
        let (i, j) = rs.pairs().next().unwrap();
        let mut mutated = rs.clone();
        mutated.remove(i, j);
        let c = verify_composition_against(&r, &s, &mutated, &cfg()).unwrap();
        prop_assert!(!c.holds);
    }

    #[test]
    fn lift_is_faithful((r, s) in rel_pair(3)) {
        let diff = lower_lift(&r).first_difference(&lower_lift(&s), &cfg()).unwrap();
        prop_assert_eq!(diff.is_none(), r == s);
    }

    #[test]
    fn atom_base_inverts_the_lift(r in rel(3)) {
        prop_assert_eq!(atom_base(&lower_lift(&r)), r);
    }

    /// A relation between powersets is directionally atomic exactly when it
    /// is the lift of its atom base. Candidates are lifts with one pair flipped,
    /// so both outcomes occur.
    #[test]
    fn directionally_atomic_iff_lift_of_atom_base(r in rel(2), flip in any::<(u8, u8)>(), do_flip in any::<bool>()) {
        let c = cfg();
        let lifted = lower_lift(&r);
        let mut m: PairMatrix = lifted.matrix(&c).unwrap();
        if do_flip {
            let a = Subset(u64::from(flip.0) % (1 << r.src().len()));
            let b = Subset(u64::from(flip.1) % (1 << r.dst().len()));
            if m.get(a, b) { m = without(&m, a, b) } else { m.set(a, b) }
        }
        let q = CabaRel::from_matrix(lifted.src().clone(), lifted.dst().clone(), m).unwrap();
        let da = check_directionally_atomic(&q, &c).unwrap().all_pass();
        let is_lift = q.first_difference(&lower_lift(&atom_base(&q)), &c).unwrap().is_none();
        prop_assert_eq!(da, is_lift);
    }

    #[test]
    fn upper_lift_is_conjugate_of_lower(r in rel(3)) {
        let c = cfg();
        let conj = lower_lift(&r.dagger()).dagger(&c).unwrap();
        prop_assert_eq!(upper_lift(&r).first_difference(&conj, &c).unwrap(), None);
    }

    #[test]
    fn variant_of_lift_is_lift_of_dagger(r in rel(3)) {
        let c = cfg();
        let expected = lower_lift(&r.dagger());
        let v = variant(&lower_lift(&r), &c).unwrap();
        prop_assert_eq!(v.first_difference(&expected, &c).unwrap(), None);
        let by_def = variant_by_definition(&lower_lift(&r), &c).unwrap();
        prop_assert_eq!(by_def.first_difference(&expected, &c).unwrap(), None);
        let back = variant(&v, &c).unwrap();
        prop_assert_eq!(back.first_difference(&lower_lift(&r), &c).unwrap(), None);
    }

    #[test]
    fn lifted_relations_are_directionally_atomic(r in rel(3)) {
        prop_assert!(check_directionally_atomic(&lower_lift(&r), &cfg()).unwrap().all_pass());
    }
}

fn without(m: &PairMatrix, a: Subset, b: Subset) -> PairMatrix {
    let mut out = PairMatrix::new(
        m.rows().trailing_zeros() as usize,
        m.cols().trailing_zeros() as usize,
    );
    for (p, q) in m.pairs() {
        if (p, q) != (a, b) {
            out.set(p, q);
        }
    }
    out
}

// duality

proptest! {
    #[test]
    fn j_is_directionally_atomic(f in function(3)) {
        prop_assert!(check_directionally_atomic(&j_embed(&f, &cfg()).unwrap(), &cfg()).unwrap().all_pass());
    }

    #[test]
    fn j_is_injective((f, g) in parallel_functions(3)) {
        let c = cfg();
        let same = j_embed(&f, &c).unwrap().first_difference(&j_embed(&g, &c).unwrap(), &c).unwrap().is_none();
        prop_assert_eq!(same, f == g);
    }

    #[test]
    fn j_reverses_composition((f, g) in composable_functions(3)) {
        let c = cfg();
        let whole = j_embed(&f.then(&g).unwrap(), &c).unwrap();
        let parts = j_embed(&g, &c).unwrap().compose(&j_embed(&f, &c).unwrap(), &c).unwrap();
        prop_assert_eq!(whole.first_difference(&parts, &c).unwrap(), None);
    }

    #[test]
    fn graph_is_a_functor((f, g) in composable_functions(4)) {
        prop_assert_eq!(graph(&FiniteFunction::identity(f.src().clone())), FinRel::identity(f.src().clone()));
        prop_assert_eq!(graph(&f.then(&g).unwrap()), graph(&f).compose(&graph(&g)).unwrap());
    }

    #[test]
    fn graph_dagger_lifts_to_j(f in function(3)) {
        let c = cfg();
        let lhs = lower_lift(&graph(&f).dagger());
        prop_assert_eq!(lhs.first_difference(&j_embed(&f, &c).unwrap(), &c).unwrap(), None);
    }

    #[test]
    fn powersets_are_their_own_surjectivity_witness(n in 0usize..=3) {
        let w = surjectivity_witness(&named_powerset(&carrier("A", n)), &cfg()).unwrap();
        prop_assert!(w.report.all_pass(), "{:?}", w.report);
    }
}

// modal

proptest! {
    #[test]
    fn diamond_is_left_adjoint_to_box(x in frame(4)) {
        let ops = modal_operators(&x, &cfg());
        prop_assert!(ops.adjunction.holds, "{:?}", ops.adjunction.witness);
    }

    #[test]
    fn map_tests_agree_and_open_iff_graph_bisimulation((x, y, f) in frames_and_map(3)) {
        let r = classify_frame_map(&f, &x, &y, &cfg()).unwrap();
        prop_assert!(r.verdict.consistent(), "{:?}", r.verdict);
        prop_assert_eq!(r.open(), classify_sim(&graph(&f), &x, &y).unwrap().is_bisimulation);
    }

    #[test]
    fn simulation_iff_simulatory((x, y, q) in frames_and_rel(3)) {
        let c = cfg();
        let sim = classify_sim(&q, &x, &y).unwrap();
        let alg = check_simulatory(&lower_lift(&q), &modal_operators(&x, &c), &modal_operators(&y, &c), &c).unwrap();
        prop_assert_eq!(sim.is_simulation, alg.simulatory.holds);
        prop_assert_eq!(sim.is_cosimulation, alg.cosimulatory.holds);
        let lemma = lemma_equivalence_harness(&q, &x, &y, &c).unwrap();
        prop_assert!(lemma.agree(), "{:?}", lemma);
    }

    #[test]
    fn simulatory_relations_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = cfg();
        let x = common::small_frame(&mut rng, "X", 3);
        let y = common::small_frame(&mut rng, "Y", 3);
        let z = common::small_frame(&mut rng, "Z", 3);
        let q1 = common::random_simulation(&mut rng, SimKind::Simulation, &x, &y);
        let q2 = common::random_simulation(&mut rng, SimKind::Simulation, &y, &z);
        let composite = lower_lift(&q1).compose(&lower_lift(&q2), &c).unwrap();
        let r = check_simulatory(&composite, &modal_operators(&x, &c), &modal_operators(&z, &c), &c).unwrap();
        prop_assert!(r.simulatory.holds, "{:?}", r.simulatory.witness);
    }

    #[test]
    fn greatest_bisimulation_is_symmetric(x in frame(4)) {
        let g = greatest_fixpoint(SimKind::Bisimulation, &x, &x);
        prop_assert_eq!(g.dagger(), g.clone());
        prop_assert!(classify_sim(&g, &x, &x).unwrap().is_bisimulation);
        prop_assert!(FinRel::identity(x.worlds().clone()).is_subset_of(&g));
    }
}

// logic

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rules_are_sound(seed in any::<u64>(), rule in 0usize..Rule::ALL.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::rule_instance(&mut rng, Rule::ALL[rule], 3);
        prop_assert!(inst.check().is_ok(), "{}", inst.check().err().unwrap_or_default());
    }

    #[test]
    fn identity_judgment_is_entailment(x in frame(3), s in any::<u64>(), t in any::<u64>()) {
        let full = x.worlds().full().0;
        let (phi, psi) = (set_formula(&x, Subset(s & full)), set_formula(&x, Subset(t & full)));
        let models = Models::new().with_frame(x.clone());
        let j = Judgment::new(phi.clone(), RelExpr::Id("X".into()), psi.clone());
        prop_assert_eq!(holds_judgment(&j, &models).unwrap().holds, holds_entailment(&x, &phi, &psi).unwrap());
    }

    #[test]
    fn disjunction_on_the_left_splits(r in rel(4), a in any::<u64>(), b in any::<u64>(), t in any::<u64>()) {
        let (sm, dm) = (r.src().full().0, r.dst().full().0);
        let (a, b, t) = (Subset(a & sm), Subset(b & sm), Subset(t & dm));
        prop_assert_eq!(lower_holds(&r, a.union(b), t), lower_holds(&r, a, t) && lower_holds(&r, b, t));
    }

    #[test]
    fn judgments_compose((r, s) in composable(4), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let a = Subset(a & r.src().full().0);
        let b = Subset(b & r.dst().full().0);
        let c = Subset(c & s.dst().full().0);
        if lower_holds(&r, a, b) && lower_holds(&s, b, c) {
            prop_assert!(lower_holds(&r.compose(&s).unwrap(), a, c));
        }
    }
}

#[test]
fn set_formulas_denote_their_sets() {
    let x = common::frame_from_code("X", 3, 0b101_010_001);
    for s in 0..8u64 {
        let f = set_formula(&x, Subset(s));
        assert_eq!(duality_lab::logic::eval_formula(&f, &x).unwrap(), Subset(s));
    }
    assert_eq!(set_formula(&x, Subset::EMPTY), Formula::Or(vec![]));
}
