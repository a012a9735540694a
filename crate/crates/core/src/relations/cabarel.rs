use std::fmt;

use crate::carrier::Subset;
use crate::config::EnumConfig;
use crate::lattice::{Caba, CabaElement};

use super::{FinRel, RelError};

/// Dense bit matrix indexed by atom sets: row `a` bit `b` is set when the
/// element with atom set `a` is related to the element with atom set `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairMatrix {
    src_bits: usize,
    dst_bits: usize,
    words: usize,
    data: Vec<u64>,
}

impl PairMatrix {
    pub fn new(src_bits: usize, dst_bits: usize) -> Self {
        let cols = 1usize << dst_bits;
        let words = cols.div_ceil(64);
        Self {
            src_bits,
            dst_bits,
            words,
            data: vec![0; words << src_bits],
        }
    }

    pub fn rows(&self) -> usize {
        1 << self.src_bits
    }

    pub fn cols(&self) -> usize {
        1 << self.dst_bits
    }

    pub fn get(&self, a: Subset, b: Subset) -> bool {
        let b = b.0 as usize;
        self.data[a.0 as usize * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn set(&mut self, a: Subset, b: Subset) {
        let b = b.0 as usize;
        self.data[a.0 as usize * self.words + b / 64] |= 1 << (b % 64);
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.data[a * self.words..(a + 1) * self.words]
    }

    pub fn count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (Subset, Subset)> + '_ {
        (0..self.rows()).flat_map(move |a| {
            self.row(a).iter().enumerate().flat_map(move |(w, &word)| {
                Subset(word)
                    .iter()
                    .map(move |bit| (Subset(a as u64), Subset((w * 64 + bit) as u64)))
            })
        })
    }

    /// Relational composition through the shared middle index.
    pub fn compose(&self, other: &PairMatrix) -> PairMatrix {
        assert_eq!(self.dst_bits, other.src_bits);
        let mut out = PairMatrix::new(self.src_bits, other.dst_bits);
        for a in 0..self.rows() {
            let base = a * out.words;
            for (w, &word) in self.row(a).iter().enumerate() {
                for bit in Subset(word).iter() {
                    let mid = w * 64 + bit;
                    for (k, &x) in other.row(mid).iter().enumerate() {
                        out.data[base + k] |= x;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> PairMatrix {
        let mut out = PairMatrix::new(self.dst_bits, self.src_bits);
        for (a, b) in self.pairs() {
            out.set(b, a);
        }
        out
    }
}

impl fmt::Debug for PairMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(a, b)| (a.0, b.0)))
            .finish()
    }
}

/// How a [`CabaRel`] is represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CabaRelRepr {
    /// Every related pair, materialised.
    Explicit(PairMatrix),
    /// The lower lifting of a base relation between the atom carriers.
    Lifted(FinRel),
    /// The upper lifting of a base relation between the atom carriers.
    Upper(FinRel),
}

/// A relation between two CABAs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CabaRel {
    src: Caba,
    dst: Caba,
    repr: CabaRelRepr,
}

impl CabaRel {
    pub(crate) fn lifted(src: Caba, dst: Caba, base: FinRel) -> Self {
        Self {
            src,
            dst,
            repr: CabaRelRepr::Lifted(base),
        }
    }

    pub(crate) fn upper(src: Caba, dst: Caba, base: FinRel) -> Self {
        Self {
            src,
            dst,
            repr: CabaRelRepr::Upper(base),
        }
    }

    pub fn from_matrix(src: Caba, dst: Caba, matrix: PairMatrix) -> Result<Self, RelError> {
        if matrix.src_bits != src.atom_count() || matrix.dst_bits != dst.atom_count() {
            return Err(RelError::CabaMismatch(
                src.name().to_owned(),
                dst.name().to_owned(),
            ));
        }
        Ok(Self {
            src,
            dst,
            repr: CabaRelRepr::Explicit(matrix),
        })
    }

    /// Materialises `{(a, b) | pred(a, b)}` over all element pairs.
    pub fn from_predicate(
        src: Caba,
        dst: Caba,
        cfg: &EnumConfig,
        mut pred: impl FnMut(Subset, Subset) -> bool,
    ) -> Result<Self, RelError> {
        let (n, m) = (src.atom_count(), dst.atom_count());
        cfg.check_pairs(n, m)?;
        let mut matrix = PairMatrix::new(n, m);
        for a in Subset::all(n) {
            for b in Subset::all(m) {
                if pred(a, b) {
                    matrix.set(a, b);
                }
            }
        }
        Ok(Self {
            src,
            dst,
            repr: CabaRelRepr::Explicit(matrix),
        })
    }

    pub fn from_pairs(
        src: Caba,
        dst: Caba,
        cfg: &EnumConfig,
        pairs: impl IntoIterator<Item = (CabaElement, CabaElement)>,
    ) -> Result<Self, RelError> {
        cfg.check_pairs(src.atom_count(), dst.atom_count())?;
        let mut matrix = PairMatrix::new(src.atom_count(), dst.atom_count());
        for (a, b) in pairs {
            if a.owner() != &src || b.owner() != &dst {
                return Err(RelError::CabaMismatch(
                    a.owner().name().to_owned(),
                    b.owner().name().to_owned(),
                ));
            }
            matrix.set(a.atom_set(), b.atom_set());
        }
        Ok(Self {
            src,
            dst,
            repr: CabaRelRepr::Explicit(matrix),
        })
    }

    /// The order `⊑` of a CABA, as an explicit relation.
    pub fn order(caba: &Caba, cfg: &EnumConfig) -> Result<Self, RelError> {
        Self::from_predicate(caba.clone(), caba.clone(), cfg, |a, b| a.is_subset_of(b))
    }

    pub fn src(&self) -> &Caba {
        &self.src
    }

    pub fn dst(&self) -> &Caba {
        &self.dst
    }

    pub fn repr(&self) -> &CabaRelRepr {
        &self.repr
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, CabaRelRepr::Explicit(_))
    }

    /// Membership by atom sets. Always available, whatever the representation.
    pub fn holds(&self, a: Subset, b: Subset) -> bool {
        match &self.repr {
            CabaRelRepr::Explicit(m) => m.get(a, b),
            CabaRelRepr::Lifted(base) => super::lower_holds(base, a, b),
            CabaRelRepr::Upper(base) => super::upper_holds(base, a, b),
        }
    }

    pub fn holds_elements(&self, a: &CabaElement, b: &CabaElement) -> Result<bool, RelError> {
        if a.owner() != &self.src || b.owner() != &self.dst {
            return Err(RelError::CabaMismatch(
                a.owner().name().to_owned(),
                b.owner().name().to_owned(),
            ));
        }
        Ok(self.holds(a.atom_set(), b.atom_set()))
    }

    /// Every related pair as a dense matrix.
    pub fn matrix(&self, cfg: &EnumConfig) -> Result<PairMatrix, RelError> {
        match &self.repr {
            CabaRelRepr::Explicit(m) => Ok(m.clone()),
            _ => {
                let (n, m) = (self.src.atom_count(), self.dst.atom_count());
                cfg.check_pairs(n, m)?;
                let mut matrix = PairMatrix::new(n, m);
                for a in Subset::all(n) {
                    for b in Subset::all(m) {
                        if self.holds(a, b) {
                            matrix.set(a, b);
                        }
                    }
                }
                Ok(matrix)
            }
        }
    }

    /// The same relation with every pair materialised.
    pub fn materialise(&self, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
        Ok(CabaRel {
            src: self.src.clone(),
            dst: self.dst.clone(),
            repr: CabaRelRepr::Explicit(self.matrix(cfg)?),
        })
    }

    /// Relational composition `self ; other`, computed extensionally.
    pub fn compose(&self, other: &CabaRel, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
        if self.dst != other.src {
            return Err(RelError::CabaMismatch(
                self.dst.name().to_owned(),
                other.src.name().to_owned(),
            ));
        }
        let left = self.matrix(cfg)?;
        let right = other.matrix(cfg)?;
        Ok(CabaRel {
            src: self.src.clone(),
            dst: other.dst.clone(),
            repr: CabaRelRepr::Explicit(left.compose(&right)),
        })
    }

    /// The converse relation, materialised.
    pub fn dagger(&self, cfg: &EnumConfig) -> Result<CabaRel, RelError> {
        Ok(CabaRel {
            src: self.dst.clone(),
            dst: self.src.clone(),
            repr: CabaRelRepr::Explicit(self.matrix(cfg)?.transpose()),
        })
    }

    /// First pair (in canonical order) on which the two relations disagree.
    pub fn first_difference(
        &self,
        other: &CabaRel,
        cfg: &EnumConfig,
    ) -> Result<Option<(Subset, Subset)>, RelError> {
        if self.src != other.src || self.dst != other.dst {
            return Err(RelError::CabaMismatch(
                self.src.name().to_owned(),
                other.src.name().to_owned(),
            ));
        }
        let (n, m) = (self.src.atom_count(), self.dst.atom_count());
        cfg.check_pairs(n, m)?;
        for a in Subset::all(n) {
            for b in Subset::all(m) {
                if self.holds(a, b) != other.holds(a, b) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn extensionally_eq(&self, other: &CabaRel, cfg: &EnumConfig) -> Result<bool, RelError> {
        Ok(self.first_difference(other, cfg)?.is_none())
    }

    /// `(a, b)` rendered with the owners' element names.
    pub fn render_pair(&self, a: Subset, b: Subset) -> String {
        format!("({}, {})", self.src.render(a), self.dst.render(b))
    }
}
