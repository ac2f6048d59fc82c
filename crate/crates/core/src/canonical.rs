//! A fixed representation `r` with `extension(r(A)) = A`.
//!
//! Members of `A` are taken in ascending declaration order `a1 < a2 < ...`.
//! `r({a})` fills the first all-value constructor with `a`. For larger menus
//! the first expanding constructor is used: its value slots get `a1`; if it has
//! a value slot, its first recursive slot gets `r(A \ {a1})`, otherwise the
//! first recursive slot gets `r({a1})` and the second `r(A \ {a1})`. Remaining
//! recursive slots get `r({a1})`.

use thiserror::Error;

use crate::schema::{analyze_schema, AdtSchema, SlotKind};
use crate::term::{Child, Term};
use crate::universe::{AltId, AltSet};

#[derive(Debug, Error, PartialEq)]
pub enum RepresentationError {
    #[error("cannot represent the empty menu")]
    EmptyMenu,
    #[error(
        "schema `{schema}` cannot represent a menu of {size} alternatives (capacity {capacity})"
    )]
    Capacity {
        schema: String,
        size: usize,
        capacity: usize,
    },
}

/// How many distinct alternatives one term of a non-representable schema can hold.
pub fn fixed_capacity(schema: &AdtSchema) -> usize {
    let flags = analyze_schema(schema);
    if !flags.productive {
        return 0;
    }
    if flags.representable {
        return usize::MAX;
    }
    // No expanding constructor: a term is a chain of unary recursive wrappers
    // around one all-value constructor.
    schema
        .constructors
        .iter()
        .filter(|c| !c.has_recursive_slot())
        .map(|c| c.arity())
        .max()
        .unwrap_or(0)
}

pub fn canonical_representation(
    schema: &AdtSchema,
    set: AltSet,
) -> Result<Term, RepresentationError> {
    if set.is_empty() {
        return Err(RepresentationError::EmptyMenu);
    }
    let capacity = fixed_capacity(schema);
    if set.len() > capacity {
        return Err(RepresentationError::Capacity {
            schema: schema.name.clone(),
            size: set.len(),
            capacity,
        });
    }
    let members: Vec<AltId> = set.iter().collect();
    if analyze_schema(schema).representable {
        Ok(build(schema, &members))
    } else {
        Ok(build_flat(schema, &members))
    }
}

fn value_child(schema: &AdtSchema, x: AltId) -> Child {
    match schema.inner.as_deref() {
        None => Child::Value(x),
        Some(inner) => Child::Inner(singleton(inner, x)),
    }
}

fn singleton(schema: &AdtSchema, x: AltId) -> Term {
    let (i, c) = schema
        .constructors
        .iter()
        .enumerate()
        .find(|(_, c)| !c.has_recursive_slot())
        .expect("productive schema");
    Term::new(
        i as u16,
        c.slots.iter().map(|_| value_child(schema, x)).collect(),
    )
}

fn build(schema: &AdtSchema, members: &[AltId]) -> Term {
    let (&first, rest) = members.split_first().expect("non-empty");
    if rest.is_empty() {
        return singleton(schema, first);
    }
    let (i, c) = schema
        .constructors
        .iter()
        .enumerate()
        .find(|(_, c)| c.is_expanding())
        .expect("representable schema");
    let with_value = c.has_value_slot();
    let mut recursive_seen = 0;
    let children = c
        .slots
        .iter()
        .map(|slot| match slot {
            SlotKind::Value => value_child(schema, first),
            SlotKind::Recursive => {
                recursive_seen += 1;
                let takes_rest = if with_value {
                    recursive_seen == 1
                } else {
                    recursive_seen == 2
                };
                if takes_rest {
                    Child::Sub(build(schema, rest))
                } else {
                    Child::Sub(singleton(schema, first))
                }
            }
        })
        .collect();
    Term::new(i as u16, children)
}

fn build_flat(schema: &AdtSchema, members: &[AltId]) -> Term {
    let (i, c) = schema
        .constructors
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.has_recursive_slot() && c.arity() >= members.len())
        .min_by_key(|(_, c)| c.arity())
        .expect("capacity checked");
    let children = (0..c.arity())
        .map(|k| value_child(schema, members[k.min(members.len() - 1)]))
        .collect();
    Term::new(i as u16, children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_schema;
    use crate::universe::Universe;

    #[test]
    fn list_and_tree_examples() {
        let u = Universe::from_ids(&["x1", "x2", "x3"]).unwrap();
        let list = AdtSchema::list();
        let r = canonical_representation(&list, u.all()).unwrap();
        assert_eq!(r.to_sexpr(&list, &u), "(Cons x1 (Cons x2 (Sing x3)))");
        let tree = AdtSchema::tree();
        let r = canonical_representation(&tree, u.all()).unwrap();
        assert_eq!(
            r.to_sexpr(&tree, &u),
            "(Node (Leaf x1) (Node (Leaf x2) (Leaf x3) (Leaf x2)) (Leaf x1))"
        );
        assert_eq!(r.extension(), u.all());
        let one = AltSet::singleton(AltId(0));
        assert_eq!(
            canonical_representation(&list, one)
                .unwrap()
                .to_sexpr(&list, &u),
            "(Sing x1)"
        );
    }

    #[test]
    fn degenerate_schemas() {
        let u = Universe::from_ids(&["a", "b", "c"]).unwrap();
        let flat = parse_schema("schema F; C1: X; C2: X, X").unwrap();
        let r = canonical_representation(&flat, AltSet(0b011)).unwrap();
        assert_eq!(r.to_sexpr(&flat, &u), "(C2 a b)");
        assert!(matches!(
            canonical_representation(&flat, u.all()),
            Err(RepresentationError::Capacity { capacity: 2, .. })
        ));
        let chain = parse_schema("schema C; C1: X | C2: T").unwrap();
        assert!(canonical_representation(&chain, AltSet(0b001)).is_ok());
        assert!(canonical_representation(&chain, AltSet(0b011)).is_err());
        let barren = parse_schema("schema N; C1: T, T; C2: T").unwrap();
        assert!(canonical_representation(&barren, AltSet(0b001)).is_err());
        assert_eq!(
            canonical_representation(&AdtSchema::list(), AltSet::EMPTY),
            Err(RepresentationError::EmptyMenu)
        );
    }

    #[test]
    fn nested_schema_uses_inner_singletons() {
        let u = Universe::from_ids(&["a", "b"]).unwrap();
        let s = AdtSchema::wines().with_inner(AdtSchema::list()).unwrap();
        let r = canonical_representation(&s, u.all()).unwrap();
        assert_eq!(r.extension(), u.all());
        assert!(r.validate(&s, &u).is_ok());
    }
}
