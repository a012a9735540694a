//! Named finite carriers and bit-mask subsets of them.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Largest carrier a [`Subset`] can index.
pub const MAX_CARRIER_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("carrier `{carrier}` declares `{element}` more than once")]
    Duplicate { carrier: String, element: String },
    #[error("carrier `{carrier}` has {size} elements; at most {MAX_CARRIER_SIZE} are supported")]
    TooLarge { carrier: String, size: usize },
    #[error("`{element}` is not an element of `{carrier}`")]
    Unknown { carrier: String, element: String },
}

/// A named, ordered list of distinct element names.
///
/// Declaration order is the canonical order: element `i` is bit `i` of every
/// [`Subset`] over this carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Carrier {
    name: String,
    elements: Vec<String>,
}

impl Carrier {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        elements: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, CarrierError> {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.len() > MAX_CARRIER_SIZE {
            return Err(CarrierError::TooLarge {
                carrier: name,
                size: elements.len(),
            });
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(CarrierError::Duplicate {
                    carrier: name,
                    element: e.clone(),
                });
            }
        }
        Ok(Arc::new(Self { name, elements }))
    }

    /// Carrier `{0, 1, .., n-1}` with decimal element names.
    pub fn numbered(name: impl Into<String>, n: usize) -> Arc<Self> {
        Self::new(name, (0..n).map(|i| i.to_string())).expect("numbered carrier is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == element)
    }

    pub fn require(&self, element: &str) -> Result<usize, CarrierError> {
        self.index_of(element).ok_or_else(|| CarrierError::Unknown {
            carrier: self.name.clone(),
            element: element.to_owned(),
        })
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Number of subsets, or `None` when it does not fit in a `u64`.
    pub fn powerset_size(&self) -> Option<u64> {
        1u64.checked_shl(self.len() as u32)
    }

    pub fn subset_of<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Subset, CarrierError> {
        let mut s = Subset::EMPTY;
        for n in names {
            s.insert(self.require(n)?);
        }
        Ok(s)
    }

    pub fn names(&self, subset: Subset) -> Vec<&str> {
        subset.iter().map(|i| self.element(i)).collect()
    }

    /// `{a,b}` rendering in canonical order.
    pub fn render(&self, subset: Subset) -> String {
        format!("{{{}}}", self.names(subset).join(","))
    }
}

/// A subset of a carrier with at most [`MAX_CARRIER_SIZE`] elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1u64 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to a carrier of `n` elements.
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// Every subset of an `n`-element carrier, in binary counting order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(n < 64, "cannot enumerate the powerset of {n} elements");
        (0..1u64 << n).map(Subset)
    }

    /// Every subset of `self`, including `self` and the empty set.
    pub fn subsets(self) -> Submasks {
        Submasks {
            of: self.0,
            next: Some(self.0),
        }
    }

    /// Every superset of `self` inside a carrier of `n` elements.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = Subset> {
        let base = self;
        self.complement(n)
            .subsets()
            .map(move |extra| base.union(extra))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Descending enumeration of the submasks of a mask.
pub struct Submasks {
    of: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.of)
        };
        Some(Subset(cur))
    }
}
