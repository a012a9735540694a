//! Finite complete atomic Boolean algebras.
//!
//! Every element of a [`Caba`] is identified with the set of atoms below it,
//! so elements are [`Subset`]s of the atom carrier whatever the presentation.
//! A named presentation (explicit elements and order) keeps its table so that
//! joins can also be computed by brute force in the declared order, and so
//! that [`validate_caba`] can check the laws against something that is not a
//! powerset by construction.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::carrier::{Carrier, CarrierError, Subset};
use crate::config::{EnumConfig, EnumerationTooLarge};
use crate::relations::{FinRel, RelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("arguments belong to different CABAs (`{0}` and `{1}`)")]
    MixedOwnership(String, String),
    #[error("`{op}` takes {expected} argument(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("`{element}` is not an element of `{caba}`")]
    UnknownElement { caba: String, element: String },
    #[error("`{name}` is not a CABA: {reason}")]
    NotACaba { name: String, reason: String },
    #[error("function is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("function maps `{0}` to more than one element")]
    NotFunctional(String),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    TooLarge(#[from] EnumerationTooLarge),
}

/// A finite CABA, either the powerset of an atom list or an explicit order.
///
/// Cheap to clone; equality is structural.
#[derive(Clone)]
pub struct Caba(Arc<CabaInner>);

#[derive(Debug, PartialEq, Eq)]
struct CabaInner {
    name: String,
    atoms: Arc<Carrier>,
    named: Option<NamedOrder>,
}

/// Explicit presentation of a lattice by its elements and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedOrder {
    elements: Arc<Carrier>,
    leq: FinRel,
    /// Element index of each atom, in atom order.
    atom_elements: Vec<usize>,
    /// Atom set below each element.
    decomposition: Vec<Subset>,
}

impl PartialEq for Caba {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Caba {}

impl fmt::Debug for Caba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Caba({}; atoms {:?})",
            self.name(),
            self.atoms().elements()
        )
    }
}

impl Caba {
    /// The powerset of `atoms`.
    pub fn powerset(atoms: Arc<Carrier>) -> Self {
        let name = format!("P({})", atoms.name());
        Caba(Arc::new(CabaInner {
            name,
            atoms,
            named: None,
        }))
    }

    /// A lattice given by its elements and order. `leq` is taken verbatim;
    /// use [`validate_caba`] to find out whether it is actually a CABA.
    pub fn named(
        name: impl Into<String>,
        elements: Arc<Carrier>,
        leq: FinRel,
    ) -> Result<Self, LatticeError> {
        let name = name.into();
        if leq.src() != &elements || leq.dst() != &elements {
            return Err(RelError::CarrierMismatch {
                left: elements.name().to_owned(),
                right: leq.src().name().to_owned(),
            }
            .into());
        }
        let n = elements.len();
        let le = |i: usize, j: usize| leq.contains(i, j);
        let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x)));
        let atom_elements: Vec<usize> = match bottom {
            Some(b) => (0..n)
                .filter(|&a| a != b && (0..n).all(|x| !le(x, a) || x == b || x == a))
                .collect(),
            None => Vec::new(),
        };
        let atoms = Carrier::new(
            format!("At({name})"),
            atom_elements
                .iter()
                .map(|&i| elements.element(i).to_owned()),
        )?;
        let decomposition = (0..n)
            .map(|x| {
                atom_elements
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| le(a, x))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let named = NamedOrder {
            elements,
            leq,
            atom_elements,
            decomposition,
        };
        Ok(Caba(Arc::new(CabaInner {
            name,
            atoms,
            named: Some(named),
        })))
    }

    /// Like [`Caba::named`], but rejects anything failing [`validate_caba`].
    pub fn named_validated(
        name: impl Into<String>,
        elements: Arc<Carrier>,
        leq: FinRel,
    ) -> Result<Self, LatticeError> {
        let caba = Self::named(name, elements, leq)?;
        let report = validate_caba(&caba);
        if let Some(reason) = report.first_failure() {
            return Err(LatticeError::NotACaba {
                name: caba.name().to_owned(),
                reason,
            });
        }
        Ok(caba)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn atoms(&self) -> &Arc<Carrier> {
        &self.0.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn named_order(&self) -> Option<&NamedOrder> {
        self.0.named.as_ref()
    }

    pub fn is_named(&self) -> bool {
        self.0.named.is_some()
    }

    pub fn top(&self) -> CabaElement {
        self.element(self.atoms().full())
    }

    pub fn bot(&self) -> CabaElement {
        self.element(Subset::EMPTY)
    }

    /// The element whose atom set is `atoms` (bits beyond the atom list are dropped).
    pub fn element(&self, atoms: Subset) -> CabaElement {
        CabaElement {
            owner: self.clone(),
            atoms: atoms.intersection(self.atoms().full()),
        }
    }

    /// Element with the given atom names.
    pub fn element_of<'a>(
        &self,
        atoms: impl IntoIterator<Item = &'a str>,
    ) -> Result<CabaElement, LatticeError> {
        Ok(self.element(self.atoms().subset_of(atoms)?))
    }

    /// Looks an element up by its declared name (named presentations only).
    pub fn element_named(&self, name: &str) -> Result<CabaElement, LatticeError> {
        let unknown = || LatticeError::UnknownElement {
            caba: self.name().to_owned(),
            element: name.to_owned(),
        };
        let order = self.named_order().ok_or_else(unknown)?;
        let i = order.elements.index_of(name).ok_or_else(unknown)?;
        Ok(self.element(order.decomposition[i]))
    }

    /// All elements in canonical (binary counting) order.
    pub fn elements(&self) -> impl Iterator<Item = CabaElement> + '_ {
        Subset::all(self.atom_count()).map(|s| self.element(s))
    }

    /// Human-readable name of the element with atom set `atoms`.
    pub fn render(&self, atoms: Subset) -> String {
        match self.named_order().and_then(|o| o.element_with_atoms(atoms)) {
            Some(i) => self.named_order().unwrap().elements.element(i).to_owned(),
            None => self.atoms().render(atoms),
        }
    }
}

impl NamedOrder {
    pub fn elements(&self) -> &Arc<Carrier> {
        &self.elements
    }

    pub fn leq(&self) -> &FinRel {
        &self.leq
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq.contains(i, j)
    }

    pub fn decomposition(&self, element: usize) -> Subset {
        self.decomposition[element]
    }

    pub fn atom_element(&self, atom: usize) -> usize {
        self.atom_elements[atom]
    }

    pub fn element_with_atoms(&self, atoms: Subset) -> Option<usize> {
        self.decomposition.iter().position(|&d| d == atoms)
    }

    /// Least upper bound of a set of element indices, found by brute force
    /// in the declared order.
    pub fn join_by_order(&self, members: Subset) -> Option<usize> {
        let n = self.elements.len();
        let upper: Vec<usize> = (0..n)
            .filter(|&u| members.iter().all(|m| self.le(m, u)))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&u| upper.iter().all(|&v| self.le(u, v)))
    }

    /// Greatest lower bound, by brute force.
    pub fn meet_by_order(&self, members: Subset) -> Option<usize> {
        let n = self.elements.len();
        let lower: Vec<usize> = (0..n)
            .filter(|&l| members.iter().all(|m| self.le(l, m)))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&l| lower.iter().all(|&v| self.le(v, l)))
    }
}

/// An element of a [`Caba`], identified with its atom decomposition.
#[derive(Clone, PartialEq, Eq)]
pub struct CabaElement {
    owner: Caba,
    atoms: Subset,
}

impl CabaElement {
    pub fn owner(&self) -> &Caba {
        &self.owner
    }

    pub fn atom_set(&self) -> Subset {
        self.atoms
    }

    pub fn is_atom(&self) -> bool {
        self.atoms.is_singleton()
    }

    pub fn leq(&self, other: &CabaElement) -> bool {
        self.atoms.is_subset_of(other.atoms)
    }

    /// Declared element name, if the owner has a named presentation.
    pub fn name(&self) -> Option<&str> {
        let order = self.owner.named_order()?;
        order
            .element_with_atoms(self.atoms)
            .map(|i| order.elements.element(i))
    }
}

impl fmt::Debug for CabaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.owner.render(self.atoms))
    }
}

impl fmt::Display for CabaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.owner.render(self.atoms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Join,
    Meet,
    Complement,
    Top,
    Bot,
}

impl BoolOp {
    fn name(self) -> &'static str {
        match self {
            BoolOp::Join => "join",
            BoolOp::Meet => "meet",
            BoolOp::Complement => "complement",
            BoolOp::Top => "top",
            BoolOp::Bot => "bot",
        }
    }
}

/// Applies a Boolean operation. Join and meet take any number of arguments;
/// the empty join is bottom and the empty meet is top.
pub fn boolean_ops(
    caba: &Caba,
    op: BoolOp,
    args: &[CabaElement],
) -> Result<CabaElement, LatticeError> {
    if let Some(stray) = args.iter().find(|a| &a.owner != caba) {
        return Err(LatticeError::MixedOwnership(
            caba.name().to_owned(),
            stray.owner.name().to_owned(),
        ));
    }
    let arity = |expected: usize| {
        if args.len() == expected {
            Ok(())
        } else {
            Err(LatticeError::Arity {
                op: op.name(),
                expected,
                got: args.len(),
            })
        }
    };
    let full = caba.atoms().full();
    let atoms = match op {
        BoolOp::Join => args.iter().fold(Subset::EMPTY, |acc, a| acc.union(a.atoms)),
        BoolOp::Meet => args.iter().fold(full, |acc, a| acc.intersection(a.atoms)),
        BoolOp::Complement => {
            arity(1)?;
            args[0].atoms.complement(caba.atom_count())
        }
        BoolOp::Top => {
            arity(0)?;
            full
        }
        BoolOp::Bot => {
            arity(0)?;
            Subset::EMPTY
        }
    };
    Ok(caba.element(atoms))
}

/// Outcome of one law check, with a counterexample when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LawCheck {
    pub fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self {
            holds: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_witness(w: Option<String>) -> Self {
        match w {
            Some(w) => Self::fail(w),
            None => Self::pass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub caba: String,
    pub partial_order: LawCheck,
    pub completeness: LawCheck,
    /// `"all-subsets"`, `"binary"` or `"structural"`.
    pub completeness_method: &'static str,
    pub distributivity: LawCheck,
    pub complements: LawCheck,
    pub atomicity: LawCheck,
    pub atoms: Vec<String>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.laws().iter().all(|(_, l)| l.holds)
    }

    pub fn laws(&self) -> [(&'static str, &LawCheck); 5] {
        [
            ("partial order", &self.partial_order),
            ("completeness", &self.completeness),
            ("distributivity", &self.distributivity),
            ("complements", &self.complements),
            ("atomicity", &self.atomicity),
        ]
    }

    pub fn first_failure(&self) -> Option<String> {
        self.laws()
            .iter()
            .find(|(_, l)| !l.holds)
            .map(|(name, l)| format!("{name} fails at {}", l.witness.as_deref().unwrap_or("?")))
    }
}

/// Element-set size up to which completeness is checked over every subset.
const ALL_SUBSETS_LIMIT: usize = 16;

/// Largest powerset presentation validated through an explicit order table.
const POWERSET_TABLE_ATOMS: usize = 6;

/// Checks the CABA laws exhaustively against the order table.
pub fn validate_caba(caba: &Caba) -> ValidationReport {
    match caba.named_order() {
        Some(order) => {
            let names = order.elements.elements().to_vec();
            let up = order.leq.rows().to_vec();
            OrderTable { names, up }.validate(caba.name())
        }
        None if caba.atom_count() <= POWERSET_TABLE_ATOMS => {
            let n = caba.atom_count();
            let names = Subset::all(n).map(|s| caba.atoms().render(s)).collect();
            let up = Subset::all(n)
                .map(|s| {
                    Subset::all(n)
                        .filter(|t| s.is_subset_of(*t))
                        .map(|t| t.0 as usize)
                        .collect()
                })
                .collect();
            OrderTable { names, up }.validate(caba.name())
        }
        None => ValidationReport {
            caba: caba.name().to_owned(),
            partial_order: LawCheck::pass(),
            completeness: LawCheck::pass(),
            completeness_method: "structural",
            distributivity: LawCheck::pass(),
            complements: LawCheck::pass(),
            atomicity: LawCheck::pass(),
            atoms: caba.atoms().elements().to_vec(),
        },
    }
}

/// A finite relation `leq` on at most 64 named elements; `up[i]` holds every
/// `j` with `i <= j`.
struct OrderTable {
    names: Vec<String>,
    up: Vec<Subset>,
}

impl OrderTable {
    fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn join(&self, members: Subset) -> Option<usize> {
        let upper = members.iter().fold(Subset::full(self.n()), |acc, m| {
            acc.intersection(self.up[m])
        });
        upper.iter().find(|&u| upper.is_subset_of(self.up[u]))
    }

    fn meet(&self, members: Subset) -> Option<usize> {
        let lower: Subset = (0..self.n())
            .filter(|&l| members.iter().all(|m| self.le(l, m)))
            .collect();
        lower.iter().find(|&l| lower.iter().all(|v| self.le(v, l)))
    }

    fn render_set(&self, s: Subset) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    fn validate(&self, caba: &str) -> ValidationReport {
        let n = self.n();
        let name = |i: usize| self.names[i].as_str();

        let partial_order = LawCheck::from_witness(
            (0..n)
                .find(|&i| !self.le(i, i))
                .map(|i| format!("{} is not below itself", name(i)))
                .or_else(|| {
                    (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .find_map(|(i, j)| {
                            (i != j && self.le(i, j) && self.le(j, i))
                                .then(|| format!("{} <= {} <= {}", name(i), name(j), name(i)))
                        })
                })
                .or_else(|| {
                    (0..n).find_map(|i| {
                        self.up[i].iter().find_map(|j| {
                            self.up[j].difference(self.up[i]).iter().next().map(|k| {
                                format!(
                                    "{} <= {} <= {} but not {} <= {}",
                                    name(i),
                                    name(j),
                                    name(k),
                                    name(i),
                                    name(k)
                                )
                            })
                        })
                    })
                }),
        );

        let (completeness, completeness_method) = if n <= ALL_SUBSETS_LIMIT {
            let w = Subset::all(n).find_map(|s| {
                if self.join(s).is_none() {
                    Some(format!("no join of {}", self.render_set(s)))
                } else if self.meet(s).is_none() {
                    Some(format!("no meet of {}", self.render_set(s)))
                } else {
                    None
                }
            });
            (LawCheck::from_witness(w), "all-subsets")
        } else {
            // A finite poset with bottom, top and binary joins/meets is complete.
            let mut w = None;
            if self.join(Subset::EMPTY).is_none() {
                w = Some("no bottom element".to_owned());
            } else if self.meet(Subset::EMPTY).is_none() {
                w = Some("no top element".to_owned());
            }
            'outer: for i in 0..n {
                for j in i + 1..n {
                    if w.is_some() {
                        break 'outer;
                    }
                    let pair = Subset::singleton(i).with(j);
                    if self.join(pair).is_none() {
                        w = Some(format!("no join of {}", self.render_set(pair)));
                    } else if self.meet(pair).is_none() {
                        w = Some(format!("no meet of {}", self.render_set(pair)));
                    }
                }
            }
            (LawCheck::from_witness(w), "binary")
        };

        let join2 = |a: usize, b: usize| self.join(Subset::singleton(a).with(b));
        let meet2 = |a: usize, b: usize| self.meet(Subset::singleton(a).with(b));

        let mut dist = None;
        'dist: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = join2(y, z).and_then(|yz| meet2(x, yz));
                    let rhs = match (meet2(x, y), meet2(x, z)) {
                        (Some(a), Some(b)) => join2(a, b),
                        _ => None,
                    };
                    if lhs.is_none() || lhs != rhs {
                        dist = Some(format!(
                            "{x} & ({y} | {z}) differs from ({x} & {y}) | ({x} & {z})",
                            x = name(x),
                            y = name(y),
                            z = name(z)
                        ));
                        break 'dist;
                    }
                }
            }
        }
        let distributivity = LawCheck::from_witness(dist);

        let bottom = self.join(Subset::EMPTY);
        let top = self.meet(Subset::EMPTY);
        let complements = LawCheck::from_witness(match (bottom, top) {
            (Some(bot), Some(top)) => (0..n)
                .find(|&x| !(0..n).any(|y| join2(x, y) == Some(top) && meet2(x, y) == Some(bot)))
                .map(|x| format!("{} has no complement", name(x))),
            _ => Some("no top or bottom element".to_owned()),
        });

        let atoms: Vec<usize> = match bottom {
            Some(b) => (0..n)
                .filter(|&a| a != b && (0..n).all(|x| !self.le(x, a) || x == b || x == a))
                .collect(),
            None => Vec::new(),
        };
        let atomicity = LawCheck::from_witness(match bottom {
            None => Some("no bottom element".to_owned()),
            Some(_) => (0..n).find_map(|x| {
                let below: Subset = atoms.iter().copied().filter(|&a| self.le(a, x)).collect();
                (self.join(below) != Some(x)).then(|| {
                    format!(
                        "{} is not the join of the atoms {} below it",
                        name(x),
                        self.render_set(below)
                    )
                })
            }),
        });

        ValidationReport {
            caba: caba.to_owned(),
            partial_order,
            completeness,
            completeness_method,
            distributivity,
            complements,
            atomicity,
            atoms: atoms.iter().map(|&a| self.names[a].clone()).collect(),
        }
    }
}

/// A total function between finite carriers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteFunction {
    src: Arc<Carrier>,
    dst: Arc<Carrier>,
    map: Vec<usize>,
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteFunction({} -> {}) ",
            self.src.name(),
            self.dst.name()
        )?;
        f.debug_map()
            .entries(
                self.map
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (self.src.element(i), self.dst.element(j))),
            )
            .finish()
    }
}

impl FiniteFunction {
    /// `map[i]` is the image of source element `i`.
    pub fn new(
        src: Arc<Carrier>,
        dst: Arc<Carrier>,
        map: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        if map.len() != src.len() {
            let missing = src.elements().get(map.len()).cloned().unwrap_or_default();
            return Err(LatticeError::NotTotal(missing));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= dst.len()) {
            return Err(CarrierError::Unknown {
                carrier: dst.name().to_owned(),
                element: bad.to_string(),
            }
            .into());
        }
        Ok(Self { src, dst, map })
    }

    pub fn from_pairs<'a>(
        src: Arc<Carrier>,
        dst: Arc<Carrier>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, LatticeError> {
        let mut map: Vec<Option<usize>> = vec![None; src.len()];
        for (a, b) in pairs {
            let i = src.require(a)?;
            let j = dst.require(b)?;
            match map[i] {
                Some(prev) if prev != j => return Err(LatticeError::NotFunctional(a.to_owned())),
                _ => map[i] = Some(j),
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| LatticeError::NotTotal(src.element(i).to_owned())))
            .collect::<Result<_, _>>()?;
        Ok(Self { src, dst, map })
    }

    pub fn identity(carrier: Arc<Carrier>) -> Self {
        let map = (0..carrier.len()).collect();
        Self {
            src: carrier.clone(),
            dst: carrier,
            map,
        }
    }

    pub fn src(&self) -> &Arc<Carrier> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Carrier> {
        &self.dst
    }

    pub fn mapping(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` followed by `next` (i.e. `next ∘ self`).
    pub fn then(&self, next: &FiniteFunction) -> Result<FiniteFunction, LatticeError> {
        if self.dst != next.src {
            return Err(RelError::CarrierMismatch {
                left: self.dst.name().to_owned(),
                right: next.src.name().to_owned(),
            }
            .into());
        }
        let map = self.map.iter().map(|&y| next.map[y]).collect();
        Ok(FiniteFunction {
            src: self.src.clone(),
            dst: next.dst.clone(),
            map,
        })
    }

    /// `f^*(B) = { x | f(x) ∈ B }`.
    pub fn preimage(&self, b: Subset) -> Subset {
        (0..self.map.len())
            .filter(|&x| b.contains(self.map[x]))
            .collect()
    }

    /// `f_!(A) = { f(x) | x ∈ A }`.
    pub fn image(&self, a: Subset) -> Subset {
        a.iter().map(|x| self.map[x]).collect()
    }

    /// `f_*(A) = { y | f^*({y}) ⊆ A }`.
    pub fn coimage(&self, a: Subset) -> Subset {
        (0..self.dst.len())
            .filter(|&y| self.preimage(Subset::singleton(y)).is_subset_of(a))
            .collect()
    }
}

/// The adjoint triple `f_! ⊣ f^* ⊣ f_*` of a function, with its exhaustive
/// Galois report.
#[derive(Debug, Clone)]
pub struct AdjointTriple {
    function: FiniteFunction,
    source_algebra: Caba,
    target_algebra: Caba,
    pub report: GaloisReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    /// `f_!(A) ⊆ B ⇔ A ⊆ f^*(B)`.
    pub image_left_of_preimage: LawCheck,
    /// `f^*(B) ⊆ A ⇔ B ⊆ f_*(A)`.
    pub preimage_left_of_coimage: LawCheck,
    /// `f_!` sends singletons to singletons.
    pub image_preserves_atoms: LawCheck,
    pub pairs_checked: u64,
}

impl GaloisReport {
    pub fn all_pass(&self) -> bool {
        self.image_left_of_preimage.holds
            && self.preimage_left_of_coimage.holds
            && self.image_preserves_atoms.holds
    }
}

impl AdjointTriple {
    pub fn function(&self) -> &FiniteFunction {
        &self.function
    }

    /// `P(src)`.
    pub fn source_algebra(&self) -> &Caba {
        &self.source_algebra
    }

    /// `P(dst)`.
    pub fn target_algebra(&self) -> &Caba {
        &self.target_algebra
    }

    /// `f^* : P(dst) → P(src)`.
    pub fn lower(&self, b: &CabaElement) -> CabaElement {
        self.source_algebra
            .element(self.function.preimage(b.atom_set()))
    }

    /// `f_! : P(src) → P(dst)`.
    pub fn left(&self, a: &CabaElement) -> CabaElement {
        self.target_algebra
            .element(self.function.image(a.atom_set()))
    }

    /// `f_* : P(src) → P(dst)`.
    pub fn right(&self, a: &CabaElement) -> CabaElement {
        self.target_algebra
            .element(self.function.coimage(a.atom_set()))
    }
}

/// Builds the adjoint triple of `f` and checks both adjunctions over every
/// pair of subsets.
pub fn adjoint_triple(f: &FiniteFunction, cfg: &EnumConfig) -> Result<AdjointTriple, LatticeError> {
    let (n, m) = (f.src.len(), f.dst.len());
    cfg.check_pairs(n, m)?;
    let src_render = |s: Subset| f.src.render(s);
    let dst_render = |s: Subset| f.dst.render(s);

    let mut left = None;
    let mut right = None;
    for a in Subset::all(n) {
        for b in Subset::all(m) {
            if left.is_none() && f.image(a).is_subset_of(b) != a.is_subset_of(f.preimage(b)) {
                left = Some(format!("A = {}, B = {}", src_render(a), dst_render(b)));
            }
            if right.is_none() && f.preimage(b).is_subset_of(a) != b.is_subset_of(f.coimage(a)) {
                right = Some(format!("A = {}, B = {}", src_render(a), dst_render(b)));
            }
        }
    }
    let atoms = (0..n)
        .find(|&x| !f.image(Subset::singleton(x)).is_singleton())
        .map(|x| format!("image of {{{}}}", f.src.element(x)));

    Ok(AdjointTriple {
        function: f.clone(),
        source_algebra: Caba::powerset(f.src.clone()),
        target_algebra: Caba::powerset(f.dst.clone()),
        report: GaloisReport {
            image_left_of_preimage: LawCheck::from_witness(left),
            preimage_left_of_coimage: LawCheck::from_witness(right),
            image_preserves_atoms: LawCheck::from_witness(atoms),
            pairs_checked: 1u64 << (n + m),
        },
    })
}

/// Divisors of 30 under divisibility: the CABA with atoms 2, 3 and 5.
pub fn divisor_lattice_30() -> Caba {
    let divisors = [1u32, 2, 3, 5, 6, 10, 15, 30];
    let elements = Carrier::new("Div30", divisors.iter().map(|d| d.to_string())).unwrap();
    let pairs = divisors.iter().enumerate().flat_map(|(i, &a)| {
        divisors
            .iter()
            .enumerate()
            .filter(move |&(_, &b)| b % a == 0)
            .map(move |(j, _)| (i, j))
    });
    let leq = FinRel::from_index_pairs(elements.clone(), elements.clone(), pairs);
    Caba::named("Div30", elements, leq).expect("divisor order is over its own carrier")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Caba {
        let c = Carrier::new("Chain", ["bot", "m", "top"]).unwrap();
        let leq = FinRel::from_pairs(c.clone(), c.clone(), [("bot", "m"), ("m", "top")])
            .unwrap()
            .reflexive_transitive_closure()
            .unwrap();
        Caba::named("Chain", c, leq).unwrap()
    }

    #[test]
    fn empty_join_and_meet() {
        let p = Caba::powerset(Carrier::new("S", ["1", "2"]).unwrap());
        assert_eq!(boolean_ops(&p, BoolOp::Join, &[]).unwrap(), p.bot());
        assert_eq!(boolean_ops(&p, BoolOp::Meet, &[]).unwrap(), p.top());
        assert!(boolean_ops(&p, BoolOp::Join, &[])
            .unwrap()
            .atom_set()
            .is_empty());
    }

    #[test]
    fn complement_of_singleton() {
        let p = Caba::powerset(Carrier::new("S", ["1", "2"]).unwrap());
        let one = p.element_of(["1"]).unwrap();
        let c = boolean_ops(&p, BoolOp::Complement, std::slice::from_ref(&one)).unwrap();
        assert_eq!(c, p.element_of(["2"]).unwrap());
        assert_eq!(boolean_ops(&p, BoolOp::Join, &[one, c]).unwrap(), p.top());
    }

    #[test]
    fn mixed_ownership_is_rejected() {
        let p = Caba::powerset(Carrier::new("S", ["1", "2"]).unwrap());
        let q = Caba::powerset(Carrier::new("T", ["1", "2"]).unwrap());
        let err = boolean_ops(&p, BoolOp::Join, &[p.top(), q.top()]).unwrap_err();
        assert!(matches!(err, LatticeError::MixedOwnership(..)));
    }

    #[test]
    fn arity_is_checked() {
        let p = Caba::powerset(Carrier::new("S", ["1"]).unwrap());
        assert!(matches!(
            boolean_ops(&p, BoolOp::Complement, &[]),
            Err(LatticeError::Arity {
                expected: 1,
                got: 0,
                ..
            })
        ));
        assert!(matches!(
            boolean_ops(&p, BoolOp::Top, &[p.bot()]),
            Err(LatticeError::Arity { .. })
        ));
    }

    #[test]
    fn divisor_join_matches_declared_order() {
        let div = divisor_lattice_30();
        let two = div.element_named("2").unwrap();
        let three = div.element_named("3").unwrap();
        let j = boolean_ops(&div, BoolOp::Join, &[two, three]).unwrap();
        assert_eq!(j.name(), Some("6"));
        // brute-force least upper bound in the leq table
        let order = div.named_order().unwrap();
        let members = Subset::singleton(order.elements().require("2").unwrap())
            .with(order.elements().require("3").unwrap());
        let lub = order.join_by_order(members).unwrap();
        assert_eq!(order.elements().element(lub), "6");
    }

    #[test]
    fn powerset_validates() {
        let p = Caba::powerset(Carrier::new("S", ["a", "b", "c"]).unwrap());
        let r = validate_caba(&p);
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.completeness_method, "all-subsets");
        assert_eq!(r.atoms, vec!["{a}", "{b}", "{c}"]);
    }

    #[test]
    fn divisor_lattice_validates_with_three_atoms() {
        let r = validate_caba(&divisor_lattice_30());
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.atoms, vec!["2", "3", "5"]);
    }

    #[test]
    fn chain_middle_has_no_complement() {
        let r = validate_caba(&chain3());
        assert!(r.partial_order.holds && r.completeness.holds && r.distributivity.holds);
        assert!(!r.complements.holds);
        assert_eq!(
            r.complements.witness.as_deref(),
            Some("m has no complement")
        );
        assert!(Caba::named_validated(
            "Chain",
            chain3().named_order().unwrap().elements().clone(),
            chain3().named_order().unwrap().leq().clone()
        )
        .is_err());
    }

    #[test]
    fn non_order_reports_witness() {
        let c = Carrier::new("C", ["a", "b"]).unwrap();
        let leq = FinRel::from_pairs(
            c.clone(),
            c.clone(),
            [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")],
        )
        .unwrap();
        let r = validate_caba(&Caba::named("C", c, leq).unwrap());
        assert!(!r.partial_order.holds);
        assert!(r.partial_order.witness.unwrap().contains("a <= b <= a"));
    }

    #[test]
    fn one_element_caba_is_vacuously_atomic() {
        let c = Carrier::new("One", ["z"]).unwrap();
        let caba = Caba::named("One", c.clone(), FinRel::identity(c)).unwrap();
        let r = validate_caba(&caba);
        assert!(r.all_pass(), "{r:?}");
        assert!(r.atoms.is_empty());
        assert_eq!(caba.atom_count(), 0);
        let empty = Caba::powerset(Carrier::new("E", Vec::<String>::new()).unwrap());
        assert!(validate_caba(&empty).all_pass());
    }

    #[test]
    fn adjoint_triple_examples() {
        let src = Carrier::new("N", ["1", "2"]).unwrap();
        let dst = Carrier::new("L", ["a"]).unwrap();
        let f = FiniteFunction::from_pairs(src.clone(), dst, [("1", "a"), ("2", "a")]).unwrap();
        let t = adjoint_triple(&f, &EnumConfig::default()).unwrap();
        assert!(t.report.all_pass());
        let a = t.target_algebra().element_of(["a"]).unwrap();
        assert_eq!(t.lower(&a), t.source_algebra().top());
        let one = t.source_algebra().element_of(["1"]).unwrap();
        assert_eq!(t.right(&one), t.target_algebra().bot());
        assert_eq!(t.left(&one), a);

        let id = adjoint_triple(&FiniteFunction::identity(src), &EnumConfig::default()).unwrap();
        for e in id.source_algebra().elements() {
            assert_eq!(id.left(&e).atom_set(), e.atom_set());
            assert_eq!(id.right(&e).atom_set(), e.atom_set());
            assert_eq!(id.lower(&e).atom_set(), e.atom_set());
        }
    }

    #[test]
    fn partial_functions_are_rejected() {
        let src = Carrier::new("N", ["1", "2"]).unwrap();
        let dst = Carrier::new("L", ["a", "b"]).unwrap();
        assert!(matches!(
            FiniteFunction::from_pairs(src.clone(), dst.clone(), [("1", "a")]),
            Err(LatticeError::NotTotal(x)) if x == "2"
        ));
        assert!(matches!(
            FiniteFunction::from_pairs(src, dst, [("1", "a"), ("1", "b"), ("2", "a")]),
            Err(LatticeError::NotFunctional(x)) if x == "1"
        ));
    }
}
