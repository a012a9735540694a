//! Seeded batches of the duality and modal checks, as run by
//! `verify-duality`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::buffer::buffer_fixture;
use crate::carrier::Carrier;
use crate::config::EnumConfig;
use crate::duality::{
    graph, j_embed, named_powerset, surjectivity_witness, verify_full_faithful,
    verify_functor_laws, verify_identity_law, verify_square_tarski, verify_square_thomason,
};
use crate::lattice::{adjoint_triple, divisor_lattice_30, FiniteFunction, LatticeError};
use crate::modal::{
    check_simulatory, classify_frame_map, classify_sim, greatest_fixpoint,
    lemma_equivalence_harness, modal_operators, Frame, ModalError, SimKind,
};
use crate::relations::{lower_lift, RelError};
use crate::sample::{random_carrier, random_frame, random_function, random_rel};

pub const MAX_SUITE_SIZE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tarski,
    Thomason,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tarski" => Ok(Suite::Tarski),
            "thomason" => Ok(Suite::Thomason),
            _ => Err(format!("unknown suite `{s}` (expected tarski or thomason)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteParams {
    pub max_size: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            max_size: 3,
            seed: 0,
            samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub params: SuiteParams,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("--max-size must be between 1 and {MAX_SUITE_SIZE}, got {0}")]
    BadSize(usize),
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

struct Tally {
    name: &'static str,
    checked: u64,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> SuiteCheck {
        SuiteCheck {
            name: self.name.to_owned(),
            passed: self.witness.is_none(),
            checked: self.checked,
            witness: self.witness,
        }
    }
}

/// Every function between carriers of sizes `1..=k`.
fn all_functions(k: usize) -> impl Iterator<Item = FiniteFunction> {
    (1..=k).flat_map(move |n| {
        (1..=k).flat_map(move |m| {
            let x = Carrier::numbered("X", n);
            let y = Carrier::numbered("Y", m);
            (0..m.pow(n as u32)).map(move |code| {
                let map = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                FiniteFunction::new(x.clone(), y.clone(), map).expect("digits are below m")
            })
        })
    })
}

pub fn run_suite(
    suite: Suite,
    params: SuiteParams,
    cfg: &EnumConfig,
) -> Result<SuiteReport, SuiteError> {
    if params.max_size == 0 || params.max_size > MAX_SUITE_SIZE {
        return Err(SuiteError::BadSize(params.max_size));
    }
    let checks = match suite {
        Suite::Tarski => tarski(params, cfg)?,
        Suite::Thomason => thomason(params, cfg)?,
    };
    Ok(SuiteReport {
        suite,
        params,
        checks,
    })
}

fn tarski(p: SuiteParams, cfg: &EnumConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let k = p.max_size;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();

    let mut t = Tally::new("lift of identity is inclusion");
    for n in 0..=k {
        let c = verify_identity_law(&Carrier::numbered("X", n), cfg)?;
        t.record(c.holds, || {
            format!("size {n}: {}", c.witness.clone().unwrap_or_default())
        });
    }
    out.push(t.done());

    let sample: Vec<_> = (0..p.samples)
        .map(|_| {
            let x = random_carrier(&mut rng, "X", k);
            let y = random_carrier(&mut rng, "Y", k);
            let z = random_carrier(&mut rng, "Z", k);
            (random_rel(&mut rng, &x, &y), random_rel(&mut rng, &y, &z))
        })
        .collect();
    let law = verify_functor_laws(&sample, cfg)?;
    out.push(SuiteCheck {
        name: "lift preserves composition".into(),
        passed: law.all_pass(),
        checked: law.checked as u64,
        witness: law
            .failures
            .first()
            .map(|(i, w)| format!("sample {i}: {w}")),
    });

    let mut t = Tally::new("lift is faithful and full");
    for n in 1..=k.min(3) {
        for m in 1..=k.min(3) {
            let r = verify_full_faithful(n, m, cfg)?;
            t.record(r.all_pass(), || format!("{n}x{m}: {r:?}"));
        }
    }
    out.push(t.done());

    let mut t = Tally::new("every CABA is the powerset of its atoms");
    let w = surjectivity_witness(&divisor_lattice_30(), cfg)?;
    t.record(w.report.all_pass(), || format!("Div30: {:?}", w.report));
    for n in 0..=k.min(4) {
        let c = named_powerset(&Carrier::numbered("A", n));
        let w = surjectivity_witness(&c, cfg)?;
        t.record(w.report.all_pass(), || {
            format!("{}: {:?}", c.name(), w.report)
        });
    }
    out.push(t.done());

    let mut t = Tally::new("graph and j agree on every function");
    for f in all_functions(k) {
        let r = verify_square_tarski(&f, cfg)?;
        t.record(r.holds, || {
            format!("{f:?}: {}", r.witness.clone().unwrap_or_default())
        });
    }
    out.push(t.done());

    let mut t = Tally::new("j preserves composition");
    for _ in 0..p.samples {
        let x = random_carrier(&mut rng, "X", k);
        let y = random_carrier(&mut rng, "Y", k);
        let z = random_carrier(&mut rng, "Z", k);
        let f = random_function(&mut rng, &x, &y);
        let g = random_function(&mut rng, &y, &z);
        let whole = j_embed(&f.then(&g)?, cfg)?;
        let parts = j_embed(&g, cfg)?.compose(&j_embed(&f, cfg)?, cfg)?;
        let diff = whole.first_difference(&parts, cfg)?;
        t.record(diff.is_none(), || format!("{f:?} then {g:?}"));
    }
    out.push(t.done());

    let mut t = Tally::new("image, preimage and coimage form an adjoint triple");
    for _ in 0..p.samples {
        let x = random_carrier(&mut rng, "X", k);
        let y = random_carrier(&mut rng, "Y", k);
        let f = random_function(&mut rng, &x, &y);
        let tri = adjoint_triple(&f, cfg)?;
        t.record(tri.report.all_pass(), || format!("{f:?}: {:?}", tri.report));
    }
    out.push(t.done());
    Ok(out)
}

fn thomason(p: SuiteParams, cfg: &EnumConfig) -> Result<Vec<SuiteCheck>, SuiteError> {
    let k = p.max_size;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();
    let frame = |rng: &mut ChaCha8Rng, name: &str| -> Frame {
        let size = rand::Rng::gen_range(rng, 1..=k);
        random_frame(rng, name, size)
    };

    let mut adj = Tally::new("diamond is left adjoint to box");
    let mut maps = Tally::new("morphism and openness tests agree");
    let mut open = Tally::new("open maps are exactly maps whose graph is a bisimulation");
    let mut squares = Tally::new("open maps commute with j");
    for _ in 0..p.samples {
        let x = frame(&mut rng, "X");
        let y = frame(&mut rng, "Y");
        let ops = modal_operators(&x, cfg);
        adj.record(ops.adjunction.holds, || {
            ops.adjunction.witness.clone().unwrap_or_default()
        });
        let f = random_function(&mut rng, x.worlds(), y.worlds());
        let r = classify_frame_map(&f, &x, &y, cfg)?;
        maps.record(r.verdict.consistent(), || format!("{f:?}: {:?}", r.verdict));
        let bisim = classify_sim(&graph(&f), &x, &y)?.is_bisimulation;
        open.record(r.open() == bisim, || {
            format!("{f:?}: open {} but graph bisimulation {bisim}", r.open())
        });
        if r.open() {
            let s = verify_square_thomason(&f, &x, &y, cfg)?;
            squares.record(s.holds(), || format!("{f:?}: {s:?}"));
        }
    }
    let b = buffer_fixture(2)?;
    let s = verify_square_thomason(&b.quotient, &b.x, &b.z, cfg)?;
    squares.record(s.holds(), || format!("buffer quotient: {s:?}"));
    out.extend([adj.done(), maps.done(), open.done(), squares.done()]);

    let mut t = Tally::new("maps that are not open are rejected");
    let one = Frame::new("One", ["z"])?;
    let mut ab = Frame::new("F", ["a", "b"])?;
    ab.add_transition("a", "b")?;
    let f = FiniteFunction::new(one.worlds().clone(), ab.worlds().clone(), vec![0])?;
    let rejected = matches!(
        verify_square_thomason(&f, &one, &ab, cfg),
        Err(ModalError::NotOpenMap(..))
    );
    t.record(rejected, || {
        "deadlocked world onto a live one was accepted".into()
    });
    out.push(t.done());

    let mut lemma = Tally::new("three characterisations of (co)simulation agree");
    let mut cross = Tally::new("simulation iff lift is simulatory; cosimulation iff cosimulatory");
    let small = k.min(3);
    for _ in 0..p.samples {
        let (nx, ny) = (
            rand::Rng::gen_range(&mut rng, 1..=small),
            rand::Rng::gen_range(&mut rng, 1..=small),
        );
        let x = random_frame(&mut rng, "X", nx);
        let y = random_frame(&mut rng, "Y", ny);
        let q = random_rel(&mut rng, x.worlds(), y.worlds());
        let l = lemma_equivalence_harness(&q, &x, &y, cfg)?;
        lemma.record(l.agree(), || format!("{q}: {l:?}"));
        let sim = classify_sim(&q, &x, &y)?;
        let alg = check_simulatory(
            &lower_lift(&q),
            &modal_operators(&x, cfg),
            &modal_operators(&y, cfg),
            cfg,
        )?;
        cross.record(
            sim.is_simulation == alg.simulatory.holds
                && sim.is_cosimulation == alg.cosimulatory.holds,
            || format!("{q}: {sim:?} vs {alg:?}"),
        );
    }
    out.extend([lemma.done(), cross.done()]);

    let mut t = Tally::new("greatest bisimulation is symmetric and a bisimulation");
    for _ in 0..p.samples {
        let x = frame(&mut rng, "X");
        let g = greatest_fixpoint(SimKind::Bisimulation, &x, &x);
        let ok = g == g.dagger() && classify_sim(&g, &x, &x)?.is_bisimulation;
        t.record(ok, || format!("{g}"));
    }
    out.push(t.done());
    Ok(out)
}
