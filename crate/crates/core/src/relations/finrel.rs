use std::fmt;
use std::sync::Arc;

use crate::carrier::{Carrier, CarrierError, Subset};

use super::RelError;

/// A relation between two finite carriers, stored as one successor mask per
/// source element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinRel {
    src: Arc<Carrier>,
    dst: Arc<Carrier>,
    rows: Vec<Subset>,
}

impl FinRel {
    pub fn empty(src: Arc<Carrier>, dst: Arc<Carrier>) -> Self {
        let rows = vec![Subset::EMPTY; src.len()];
        Self { src, dst, rows }
    }

    pub fn total(src: Arc<Carrier>, dst: Arc<Carrier>) -> Self {
        let rows = vec![dst.full(); src.len()];
        Self { src, dst, rows }
    }

    pub fn identity(carrier: Arc<Carrier>) -> Self {
        let rows = (0..carrier.len()).map(Subset::singleton).collect();
        Self {
            src: carrier.clone(),
            dst: carrier,
            rows,
        }
    }

    /// Builds from explicit rows; extra bits beyond the target carrier are dropped.
    pub fn from_rows(src: Arc<Carrier>, dst: Arc<Carrier>, rows: Vec<Subset>) -> Self {
        assert_eq!(rows.len(), src.len(), "one row per source element");
        let mask = dst.full();
        let rows = rows.into_iter().map(|r| r.intersection(mask)).collect();
        Self { src, dst, rows }
    }

    pub fn from_index_pairs(
        src: Arc<Carrier>,
        dst: Arc<Carrier>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut rel = Self::empty(src, dst);
        for (a, b) in pairs {
            rel.insert(a, b);
        }
        rel
    }

    pub fn from_pairs<'a>(
        src: Arc<Carrier>,
        dst: Arc<Carrier>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, CarrierError> {
        let mut rel = Self::empty(src, dst);
        for (a, b) in pairs {
            let i = rel.src.require(a)?;
            let j = rel.dst.require(b)?;
            rel.insert(i, j);
        }
        Ok(rel)
    }

    pub fn src(&self) -> &Arc<Carrier> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Carrier> {
        &self.dst
    }

    pub fn rows(&self) -> &[Subset] {
        &self.rows
    }

    /// Successors of source element `i`.
    pub fn row(&self, i: usize) -> Subset {
        self.rows[i]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(j < self.dst.len(), "target index out of range");
        self.rows[i].insert(j);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.rows[i].remove(j);
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Pairs in canonical (source-major, declaration) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn named_pairs(&self) -> Vec<(&str, &str)> {
        self.pairs()
            .map(|(i, j)| (self.src.element(i), self.dst.element(j)))
            .collect()
    }

    /// Forward image of a set of source elements.
    pub fn image(&self, s: Subset) -> Subset {
        s.iter()
            .fold(Subset::EMPTY, |acc, i| acc.union(self.rows[i]))
    }

    /// Source elements related to at least one member of `t`.
    pub fn preimage(&self, t: Subset) -> Subset {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].intersects(t))
            .collect()
    }

    /// Diagrammatic composition `self ; other`.
    pub fn compose(&self, other: &FinRel) -> Result<FinRel, RelError> {
        if self.dst != other.src {
            return Err(RelError::CarrierMismatch {
                left: self.dst.name().to_owned(),
                right: other.src.name().to_owned(),
            });
        }
        let rows = self.rows.iter().map(|&r| other.image(r)).collect();
        Ok(FinRel {
            src: self.src.clone(),
            dst: other.dst.clone(),
            rows,
        })
    }

    pub fn dagger(&self) -> FinRel {
        let mut rows = vec![Subset::EMPTY; self.dst.len()];
        for (i, j) in self.pairs() {
            rows[j].insert(i);
        }
        FinRel {
            src: self.dst.clone(),
            dst: self.src.clone(),
            rows,
        }
    }

    pub fn is_subset_of(&self, other: &FinRel) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset_of(*b))
    }

    pub fn union(&self, other: &FinRel) -> Result<FinRel, RelError> {
        self.same_carriers(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.union(*b))
            .collect();
        Ok(FinRel {
            src: self.src.clone(),
            dst: self.dst.clone(),
            rows,
        })
    }

    /// Same pairs, relabelled onto equally sized carriers.
    pub fn retarget(&self, src: Arc<Carrier>, dst: Arc<Carrier>) -> Result<FinRel, RelError> {
        if src.len() != self.src.len() || dst.len() != self.dst.len() {
            return Err(RelError::CarrierMismatch {
                left: format!("{}/{}", self.src.name(), self.dst.name()),
                right: format!("{}/{}", src.name(), dst.name()),
            });
        }
        Ok(FinRel {
            src,
            dst,
            rows: self.rows.clone(),
        })
    }

    /// Reflexive-transitive closure of an endorelation.
    pub fn reflexive_transitive_closure(&self) -> Result<FinRel, RelError> {
        if self.src != self.dst {
            return Err(RelError::NotEndo(
                self.src.name().to_owned(),
                self.dst.name().to_owned(),
            ));
        }
        let n = self.src.len();
        let mut rows: Vec<Subset> = (0..n).map(|i| self.rows[i].with(i)).collect();
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if rows[i].contains(k) {
                    rows[i] = rows[i].union(rows[k]);
                }
            }
        }
        Ok(FinRel {
            src: self.src.clone(),
            dst: self.dst.clone(),
            rows,
        })
    }

    fn same_carriers(&self, other: &FinRel) -> Result<(), RelError> {
        if self.src != other.src || self.dst != other.dst {
            return Err(RelError::CarrierMismatch {
                left: format!("{} -> {}", self.src.name(), self.dst.name()),
                right: format!("{} -> {}", other.src.name(), other.dst.name()),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinRel({} -> {}) ", self.src.name(), self.dst.name())?;
        f.debug_set().entries(self.named_pairs()).finish()
    }
}

impl fmt::Display for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .named_pairs()
            .into_iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}
