mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::subsequence;

use common::sexpr_atoms;
use repchoice_core::canonical::canonical_representation;
use repchoice_core::enumeration::{enumerate_representations, EnumerationBudget};
use repchoice_core::procedures::{
    instantiate_procedure, ProcedureKind, ProcedureSpec, StrictOrder,
};
use repchoice_core::properties::{CheckBudget, Checker, Property, Verdict};
use repchoice_core::rationality::{
    induced_correspondence, rationalize_choice_function, ChoiceFunction,
};
use repchoice_core::replication::fixtures::xyz;
use repchoice_core::schema::AdtSchema;
use repchoice_core::term::{parse_term, substitute_subproblem, Child, Term};
use repchoice_core::universe::{AltId, AltSet, Universe};

const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

fn universe() -> Universe {
    Universe::from_ids(&NAMES).unwrap()
}

fn leaf(n: u16) -> impl Strategy<Value = Term> {
    (0..n).prop_map(|x| Term::new(0, vec![Child::Value(AltId(x))]))
}

fn list_terms(n: u16) -> impl Strategy<Value = Term> {
    leaf(n).prop_recursive(6, 8, 1, move |inner| {
        (0..n, inner).prop_map(|(x, t)| Term::new(1, vec![Child::Value(AltId(x)), Child::Sub(t)]))
    })
}

fn node_terms(n: u16, arity: usize) -> impl Strategy<Value = Term> {
    leaf(n).prop_recursive(4, 24, arity as u32, move |inner| {
        prop::collection::vec(inner, arity)
            .prop_map(|cs| Term::new(1, cs.into_iter().map(Child::Sub).collect()))
    })
}

/// A schema with a matching term over the first `n` alternatives.
fn schema_and_term(n: u16) -> impl Strategy<Value = (AdtSchema, Term)> {
    prop_oneof![
        list_terms(n).prop_map(|t| (AdtSchema::list(), t)),
        node_terms(n, 2).prop_map(|t| (AdtSchema::list2(), t)),
        node_terms(n, 3).prop_map(|t| (AdtSchema::tree(), t)),
    ]
}

fn substitutable_term(n: u16) -> impl Strategy<Value = (AdtSchema, Term)> {
    prop_oneof![
        node_terms(n, 2).prop_map(|t| (AdtSchema::list2(), t)),
        node_terms(n, 3).prop_map(|t| (AdtSchema::tree(), t)),
    ]
}

fn menu(n: usize) -> impl Strategy<Value = AltSet> {
    subsequence((0..n as u16).collect::<Vec<_>>(), 1..=n)
        .prop_map(|xs| xs.into_iter().fold(AltSet::EMPTY, |s, x| s.with(AltId(x))))
}

proptest! {
    #[test]
    fn extension_is_the_set_of_leaves((schema, t) in schema_and_term(5)) {
        let u = universe();
        let text = t.to_sexpr(&schema, &u);
        let names: BTreeSet<String> = t.extension().iter().map(|x| u.name(x).to_string()).collect();
        prop_assert_eq!(&names, &sexpr_atoms(&text));
        prop_assert_eq!(t.leaves().len(), t.leaf_count());
        prop_assert!(t.leaf_count() >= t.extension().len());
    }

    #[test]
    fn sexpr_round_trip((schema, t) in schema_and_term(5)) {
        let u = universe();
        let text = t.to_sexpr(&schema, &u);
        prop_assert_eq!(parse_term(&schema, &u, &text).unwrap(), t);
    }

    #[test]
    fn renaming_moves_one_member((_, t) in schema_and_term(4), x in 0u16..5, y in 0u16..5) {
        let (x, y) = (AltId(x), AltId(y));
        let ext = t.extension();
        let want = if ext.contains(x) { ext.without(x).with(y) } else { ext };
        prop_assert_eq!(t.rename_value(x, y).extension(), want);
        prop_assert_eq!(t.rename_value(x, y).leaf_count(), t.leaf_count());
    }

    #[test]
    fn substitution_unions_extensions((schema, a) in substitutable_term(3), b in node_terms(5, 2), x in 0u16..4) {
        let x = AltId(x);
        let b = if schema.name == "Tree" { Term::new(1, vec![Child::Sub(b.clone()), Child::Sub(b.clone()), Child::Sub(b)]) } else { b };
        let (t, occurred) = substitute_subproblem(&schema, &a, x, &b).unwrap();
        let ext = a.extension();
        prop_assert_eq!(occurred, ext.contains(x));
        let want = if occurred { ext.without(x).union(b.extension()) } else { ext };
        prop_assert_eq!(t.extension(), want);
    }

    #[test]
    fn canonical_terms_represent_their_menu(set in menu(5)) {
        for schema in [AdtSchema::list(), AdtSchema::list2(), AdtSchema::tree()] {
            let t = canonical_representation(&schema, set).unwrap();
            prop_assert_eq!(t.extension(), set);
            t.validate(&schema, &universe()).unwrap();
        }
    }

    #[test]
    fn enumerated_terms_are_distinct_representations(set in menu(3), extra in 0usize..3) {
        let max = set.len() + extra;
        for schema in [AdtSchema::list(), AdtSchema::list2(), AdtSchema::tree()] {
            let Ok(terms) = enumerate_representations(&schema, set, &EnumerationBudget::new(max)) else {
                continue;
            };
            let distinct: BTreeSet<&Term> = terms.iter().collect();
            prop_assert_eq!(distinct.len(), terms.len());
            for t in &terms {
                prop_assert_eq!(t.extension(), set);
                prop_assert!(t.leaf_count() <= max);
            }
        }
    }

    #[test]
    fn strict_orders_are_recovered(perm in Just((0..4u16).collect::<Vec<_>>()).prop_shuffle()) {
        let u = Universe::from_ids(&NAMES[..4]).unwrap();
        let ranking: Vec<AltId> = perm.into_iter().map(AltId).collect();
        let c = ChoiceFunction::from_order(&u, &StrictOrder::from_ranking(ranking.clone()));
        let r = rationalize_choice_function(&c, &u).unwrap();
        prop_assert_eq!(r.relation.unwrap().ranking(), ranking);
    }
}

fn cheap_procedures() -> Vec<(ProcedureSpec, AdtSchema)> {
    use ProcedureKind as K;
    vec![
        (
            ProcedureSpec::new(K::Maximize).param("order", "utility"),
            AdtSchema::list(),
        ),
        (
            ProcedureSpec::new(K::SatList)
                .param("u", "utility")
                .param("threshold", 0.5),
            AdtSchema::list(),
        ),
        (ProcedureSpec::new(K::SecondList), AdtSchema::list()),
        (
            ProcedureSpec::new(K::Avoid)
                .param("avoid", "x")
                .param("n", 2),
            AdtSchema::list2(),
        ),
        (
            ProcedureSpec::new(K::CondSat).param("known", "x,y"),
            AdtSchema::list2(),
        ),
        (
            ProcedureSpec::new(K::DefaultLarge)
                .param("default", "y")
                .param("n", 2),
            AdtSchema::list2(),
        ),
        (
            ProcedureSpec::new(K::BiasLarge).param("n", 2),
            AdtSchema::tree(),
        ),
        (
            ProcedureSpec::new(K::BiasSmall).param("n", 1),
            AdtSchema::tree(),
        ),
        (
            ProcedureSpec::new(K::CircularMax).param("cycle", "x,y,z"),
            AdtSchema::tree(),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn choices_are_members(i in 0usize..9, t in node_terms(3, 3), l in list_terms(3), l2 in node_terms(3, 2)) {
        let (spec, schema) = &cheap_procedures()[i];
        let p = instantiate_procedure(spec, &xyz(), schema).unwrap();
        let t = match schema.name.as_str() { "Tree" => t, "List" => l, _ => l2 };
        prop_assert!(t.extension().contains(p.choose(&t)));
    }

    #[test]
    fn correspondence_grows_with_budget(i in 0usize..9, extra in 0usize..2) {
        let (spec, schema) = &cheap_procedures()[i];
        let u = xyz();
        let p = instantiate_procedure(spec, &u, schema).unwrap();
        let small = induced_correspondence(&p, &EnumerationBudget::new(3 + extra)).unwrap();
        let large = induced_correspondence(&p, &EnumerationBudget::new(5 + extra)).unwrap();
        for (a, c) in small.iter() {
            let bigger = large.get(a).unwrap();
            prop_assert!(!c.is_empty());
            prop_assert!(c.is_subset(bigger));
            prop_assert!(bigger.is_subset(a));
        }
    }

    #[test]
    fn witnesses_replay(i in 0usize..9, max in 3usize..5) {
        let (spec, schema) = &cheap_procedures()[i];
        let p = instantiate_procedure(spec, &xyz(), schema).unwrap();
        let checker = Checker::new(&p, &CheckBudget::new(EnumerationBudget::new(max)));
        for prop in Property::ALL {
            let Ok(r) = checker.check(prop) else { continue };
            if r.verdict != Verdict::HoldsUpToBudget {
                prop_assert!(!r.witnesses.is_empty(), "{} {:?}", prop, r.verdict);
            }
            for w in &r.witnesses {
                prop_assert!(w.replay(&p), "{} {}", prop, w.to_json(&p));
            }
        }
    }
}
