//! Domain restrictions on admissible terms, stated over the leaf sequence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::Term;
use crate::universe::{AltId, AltSet, Universe, UniverseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Asc,
    Desc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Guarantee {
    /// Leaves strictly increase (or decrease) in a numeric attribute.
    SortedBy { attr: String, direction: Direction },
    /// No alternative occurs twice.
    NoDuplicates,
}

#[derive(Debug, Error, PartialEq)]
pub enum GuaranteeError {
    #[error("invalid guarantee `{0}` (expected `sorted_by:<attr>:<asc|desc>` or `no_duplicates`)")]
    Syntax(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

impl FromStr for Guarantee {
    type Err = GuaranteeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["no_duplicates"] => Ok(Guarantee::NoDuplicates),
            ["sorted_by", attr, dir] if !attr.is_empty() => {
                let direction = match *dir {
                    "asc" => Direction::Asc,
                    "desc" => Direction::Desc,
                    _ => return Err(GuaranteeError::Syntax(s.to_string())),
                };
                Ok(Guarantee::SortedBy {
                    attr: attr.to_string(),
                    direction,
                })
            }
            _ => Err(GuaranteeError::Syntax(s.to_string())),
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::NoDuplicates => f.write_str("no_duplicates"),
            Guarantee::SortedBy { attr, direction } => write!(
                f,
                "sorted_by:{attr}:{}",
                match direction {
                    Direction::Asc => "asc",
                    Direction::Desc => "desc",
                }
            ),
        }
    }
}

impl Guarantee {
    pub fn sorted_by(attr: impl Into<String>, direction: Direction) -> Self {
        Guarantee::SortedBy {
            attr: attr.into(),
            direction,
        }
    }

    pub fn resolve(&self, universe: &Universe) -> Result<ResolvedGuarantee, GuaranteeError> {
        Ok(match self {
            Guarantee::NoDuplicates => ResolvedGuarantee::NoDuplicates,
            Guarantee::SortedBy { attr, direction } => ResolvedGuarantee::SortedBy {
                keys: universe.numeric_attr(attr)?,
                ascending: *direction == Direction::Asc,
            },
        })
    }
}

/// A guarantee with attribute values looked up.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedGuarantee {
    SortedBy { keys: Vec<f64>, ascending: bool },
    NoDuplicates,
}

impl ResolvedGuarantee {
    /// Whether `next` may follow a prefix ending in `prev` that used `used`.
    pub fn admits_next(&self, prev: Option<AltId>, used: AltSet, next: AltId) -> bool {
        match self {
            ResolvedGuarantee::NoDuplicates => !used.contains(next),
            ResolvedGuarantee::SortedBy { keys, ascending } => match prev {
                None => true,
                Some(p) => {
                    let (a, b) = (keys[p.index()], keys[next.index()]);
                    if *ascending {
                        a < b
                    } else {
                        a > b
                    }
                }
            },
        }
    }

    pub fn admits_leaves(&self, leaves: &[AltId]) -> bool {
        let mut used = AltSet::EMPTY;
        let mut prev = None;
        for &x in leaves {
            if !self.admits_next(prev, used, x) {
                return false;
            }
            used.insert(x);
            prev = Some(x);
        }
        true
    }

    pub fn admits(&self, term: &Term) -> bool {
        self.admits_leaves(&term.leaves())
    }
}

/// True iff the leaf sequence of `term` satisfies `g`.
pub fn guarantee_filter(
    g: &Guarantee,
    universe: &Universe,
    term: &Term,
) -> Result<bool, GuaranteeError> {
    Ok(g.resolve(universe)?.admits(term))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::list_term;
    use crate::universe::Element;

    fn priced() -> Universe {
        Universe::new(vec![
            Element::new("a").num("price", 1.0),
            Element::new("b").num("price", 2.0),
            Element::new("c").num("price", 3.0),
        ])
        .unwrap()
    }

    #[test]
    fn sorted_and_duplicates() {
        let u = priced();
        let asc = Guarantee::sorted_by("price", Direction::Asc);
        let [a, b, c] = [0, 1, 2].map(AltId);
        assert!(guarantee_filter(&asc, &u, &list_term(&[a, b, c])).unwrap());
        assert!(!guarantee_filter(&asc, &u, &list_term(&[a, c, b])).unwrap());
        assert!(!guarantee_filter(&Guarantee::NoDuplicates, &u, &list_term(&[a, b, a])).unwrap());
        assert!(guarantee_filter(&Guarantee::NoDuplicates, &u, &list_term(&[c, a])).unwrap());
        let missing = Guarantee::sorted_by("rank", Direction::Desc);
        assert!(matches!(
            guarantee_filter(&missing, &u, &list_term(&[a])),
            Err(GuaranteeError::Universe(UniverseError::MissingAttr { .. }))
        ));
    }

    #[test]
    fn parses_cli_syntax() {
        assert_eq!(
            "sorted_by:price:desc".parse::<Guarantee>().unwrap(),
            Guarantee::sorted_by("price", Direction::Desc)
        );
        assert_eq!(
            "no_duplicates".parse::<Guarantee>().unwrap(),
            Guarantee::NoDuplicates
        );
        assert!("sorted_by:price".parse::<Guarantee>().is_err());
        assert_eq!(
            Guarantee::sorted_by("rank", Direction::Asc).to_string(),
            "sorted_by:rank:asc"
        );
    }
}
