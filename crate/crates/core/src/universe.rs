//! The finite set of alternatives and its attributes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest universe a bit-set menu can hold.
pub const MAX_ALTERNATIVES: usize = 64;

/// An alternative, stored as its declaration index in a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AltId(pub u16);

impl AltId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A menu: a set of alternatives as a 64-bit mask over declaration indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AltSet(pub u64);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn singleton(x: AltId) -> Self {
        AltSet(1u64 << x.0)
    }

    /// The first `n` alternatives of a universe.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            AltSet(u64::MAX)
        } else {
            AltSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, x: AltId) -> bool {
        self.0 & (1u64 << x.0) != 0
    }

    pub fn insert(&mut self, x: AltId) {
        self.0 |= 1u64 << x.0;
    }

    pub fn with(self, x: AltId) -> Self {
        AltSet(self.0 | (1u64 << x.0))
    }

    pub fn without(self, x: AltId) -> Self {
        AltSet(self.0 & !(1u64 << x.0))
    }

    pub fn union(self, other: AltSet) -> Self {
        AltSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AltSet) -> Self {
        AltSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in ascending declaration order.
    pub fn iter(self) -> impl Iterator<Item = AltId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                Some(AltId(i as u16))
            }
        })
    }

    pub fn first(self) -> Option<AltId> {
        self.iter().next()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = AltSet> {
        // Standard submask walk, emitted in increasing numeric order.
        let full = self.0;
        let mut sub: u64 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = AltSet(sub);
            if sub == full {
                done = true;
            } else {
                sub = (sub.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }

    /// Non-empty subsets ordered by cardinality, then by sorted member list.
    pub fn nonempty_subsets_by_size(self) -> Vec<AltSet> {
        let mut all: Vec<AltSet> = self.subsets().filter(|s| !s.is_empty()).collect();
        all.sort_by_key(|s| s.sort_key());
        all
    }

    /// Key giving the canonical menu order: size first, then lexicographic members.
    pub fn sort_key(self) -> (usize, Vec<u16>) {
        (self.len(), self.iter().map(|x| x.0).collect())
    }
}

impl FromIterator<AltId> for AltSet {
    fn from_iter<I: IntoIterator<Item = AltId>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

/// An attribute value attached to an alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Bool(bool),
    Number(f64),
}

impl AttrValue {
    pub fn as_number(self) -> Option<f64> {
        match self {
            AttrValue::Number(v) => Some(v),
            AttrValue::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            AttrValue::Bool(b) => Some(b),
            AttrValue::Number(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub id: String,
    #[serde(default)]
    pub attrs: BTreeMap<String, AttrValue>,
}

impl Element {
    pub fn new(id: impl Into<String>) -> Self {
        Element {
            id: id.into(),
            attrs: BTreeMap::new(),
        }
    }

    pub fn attr(mut self, name: impl Into<String>, value: AttrValue) -> Self {
        self.attrs.insert(name.into(), value);
        self
    }

    pub fn num(self, name: impl Into<String>, value: f64) -> Self {
        self.attr(name, AttrValue::Number(value))
    }

    pub fn flag(self, name: impl Into<String>, value: bool) -> Self {
        self.attr(name, AttrValue::Bool(value))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum UniverseError {
    #[error("universe must contain at least one element")]
    Empty,
    #[error("duplicate alternative id `{0}`")]
    DuplicateId(String),
    #[error("universe has {0} elements; at most {MAX_ALTERNATIVES} are supported")]
    TooLarge(usize),
    #[error("unknown alternative `{0}`")]
    UnknownAlt(String),
    #[error("attribute `{attr}` is missing on alternative `{alt}`")]
    MissingAttr { attr: String, alt: String },
    #[error("attribute `{attr}` on alternative `{alt}` has the wrong type (expected {expected})")]
    WrongAttrType {
        attr: String,
        alt: String,
        expected: &'static str,
    },
    #[error("invalid universe JSON: {0}")]
    Json(String),
}

#[derive(Deserialize, Serialize)]
struct UniverseFile {
    elements: Vec<Element>,
}

/// The set X of alternatives. Declaration order is the tie-break order.
#[derive(Debug, Clone, PartialEq)]
pub struct Universe {
    elements: Vec<Element>,
    index: HashMap<String, AltId>,
}

impl Universe {
    pub fn new(elements: Vec<Element>) -> Result<Self, UniverseError> {
        if elements.is_empty() {
            return Err(UniverseError::Empty);
        }
        if elements.len() > MAX_ALTERNATIVES {
            return Err(UniverseError::TooLarge(elements.len()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.id.clone(), AltId(i as u16)).is_some() {
                return Err(UniverseError::DuplicateId(e.id.clone()));
            }
        }
        Ok(Universe { elements, index })
    }

    /// Plain alternatives without attributes.
    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Self, UniverseError> {
        Universe::new(ids.iter().map(|s| Element::new(s.as_ref())).collect())
    }

    pub fn from_json(text: &str) -> Result<Self, UniverseError> {
        let file: UniverseFile =
            serde_json::from_str(text).map_err(|e| UniverseError::Json(e.to_string()))?;
        Universe::new(file.elements)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&UniverseFile {
            elements: self.elements.clone(),
        })
        .expect("universe serializes")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn all(&self) -> AltSet {
        AltSet::full(self.len())
    }

    pub fn ids(&self) -> impl Iterator<Item = AltId> + Clone {
        (0..self.elements.len()).map(|i| AltId(i as u16))
    }

    pub fn element(&self, x: AltId) -> &Element {
        &self.elements[x.index()]
    }

    pub fn name(&self, x: AltId) -> &str {
        &self.elements[x.index()].id
    }

    pub fn lookup(&self, id: &str) -> Result<AltId, UniverseError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| UniverseError::UnknownAlt(id.to_string()))
    }

    /// Parses a comma-separated list of ids into a menu.
    pub fn parse_set(&self, text: &str) -> Result<AltSet, UniverseError> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.lookup(s))
            .collect()
    }

    pub fn format_set(&self, set: AltSet) -> String {
        let names: Vec<&str> = set.iter().map(|x| self.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Numeric attribute values for every alternative, indexed by declaration order.
    pub fn numeric_attr(&self, attr: &str) -> Result<Vec<f64>, UniverseError> {
        self.elements
            .iter()
            .map(|e| match e.attrs.get(attr) {
                None => Err(UniverseError::MissingAttr {
                    attr: attr.to_string(),
                    alt: e.id.clone(),
                }),
                Some(v) => v.as_number().ok_or_else(|| UniverseError::WrongAttrType {
                    attr: attr.to_string(),
                    alt: e.id.clone(),
                    expected: "number",
                }),
            })
            .collect()
    }

    /// Boolean attribute values for every alternative.
    pub fn bool_attr(&self, attr: &str) -> Result<Vec<bool>, UniverseError> {
        self.elements
            .iter()
            .map(|e| match e.attrs.get(attr) {
                None => Err(UniverseError::MissingAttr {
                    attr: attr.to_string(),
                    alt: e.id.clone(),
                }),
                Some(v) => v.as_bool().ok_or_else(|| UniverseError::WrongAttrType {
                    attr: attr.to_string(),
                    alt: e.id.clone(),
                    expected: "boolean",
                }),
            })
            .collect()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_set(self.all()))
    }
}
