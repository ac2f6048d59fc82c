//! Finitized checkers for the procedural axioms.
//!
//! Universal clauses range over terms within the budget; existential clauses
//! search for witnesses with `extra_leaves` more leaves. Only universal
//! violations are reported as `Falsified`; a failed existential search is
//! `NoWitnessWithinBudget`.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{
    for_each_representation, Domain, EnumerationBudget, EnumerationError, TermEnumerator,
};
use crate::guarantee::Guarantee;
use crate::procedures::Procedure;
use crate::rationality::{ChoiceCorrespondence, ChoiceFunction};
use crate::schema::{analyze_schema, SlotKind};
use crate::term::{Child, Term};
use crate::universe::{AltId, AltSet, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "EXT")]
    Ext,
    #[serde(rename = "INT")]
    Int,
    #[serde(rename = "SIND")]
    Sind,
    #[serde(rename = "TIIA")]
    Tiia,
    #[serde(rename = "alphaE")]
    AlphaE,
    #[serde(rename = "gammaE")]
    GammaE,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Ext,
        Property::Int,
        Property::Sind,
        Property::Tiia,
        Property::AlphaE,
        Property::GammaE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Ext => "EXT",
            Property::Int => "INT",
            Property::Sind => "SIND",
            Property::Tiia => "TIIA",
            Property::AlphaE => "alphaE",
            Property::GammaE => "gammaE",
        }
    }

    /// Whether the property has an existential clause.
    pub fn is_existential(self) -> bool {
        matches!(self, Property::Tiia | Property::AlphaE | Property::GammaE)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CheckError::UnknownProperty(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Falsified,
    HoldsUpToBudget,
    NoWitnessWithinBudget,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::HoldsUpToBudget
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckBudget {
    pub enumeration: EnumerationBudget,
    /// Extra leaves allowed when searching for existential witnesses.
    pub extra_leaves: usize,
    /// Leaf cap for the sub-terms plugged into constructors by the SIND check.
    pub sind_child_leaves: usize,
    /// Cap on the number of witnesses kept in a report.
    pub max_witnesses: usize,
}

impl CheckBudget {
    pub fn new(enumeration: EnumerationBudget) -> Self {
        CheckBudget {
            enumeration,
            extra_leaves: 1,
            sind_child_leaves: 3,
            max_witnesses: 32,
        }
    }

    /// `max_leaves` overall, and at most `|A| + slack` leaves for a menu A.
    pub fn with_slack(max_leaves: usize, slack: usize) -> Self {
        CheckBudget::new(EnumerationBudget::new(max_leaves).with_slack(slack))
    }

    pub fn with_extra_leaves(mut self, extra: usize) -> Self {
        self.extra_leaves = extra;
        self
    }

    pub fn with_max_witnesses(mut self, n: usize) -> Self {
        self.max_witnesses = n;
        self
    }

    pub fn universal_cap(&self, menu_size: usize) -> usize {
        self.enumeration.leaf_cap(menu_size)
    }

    pub fn existential(&self) -> EnumerationBudget {
        self.enumeration.widened(self.extra_leaves)
    }

    pub fn existential_cap(&self, menu_size: usize) -> usize {
        self.existential().leaf_cap(menu_size)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("unknown property `{0}` (expected EXT, INT, SIND, TIIA, alphaE or gammaE)")]
    UnknownProperty(String),
    #[error("TIIA needs a substitutable schema; `{0}` is not")]
    NotSubstitutable(String),
    #[error("SIND is not defined for nested schema `{0}`")]
    NestedSind(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Evidence attached to a verdict. Terms are replayable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Two representations of the same menu with different choices.
    Ext {
        a: Term,
        b: Term,
        choice_a: AltId,
        choice_b: AltId,
    },
    /// Renaming the chosen `x` to `y` did not make `y` the choice.
    Int {
        a: Term,
        x: AltId,
        y: AltId,
        renamed_choice: AltId,
    },
    /// Same constructor and sub-choices, different top choices; or a top
    /// choice that is none of the sub-choices (`b` absent).
    Sind {
        a: Term,
        b: Option<Term>,
        sub_choices: Vec<AltId>,
        choice_a: AltId,
        choice_b: Option<AltId>,
    },
    /// No re-representation of the overridden sub-problem keeps the choice.
    Tiia {
        a: Term,
        slot: usize,
        choice: AltId,
        sub_choice: AltId,
        target: AltSet,
    },
    /// No representation of `subset` chooses `choice`.
    AlphaE {
        a: Term,
        choice: AltId,
        subset: AltSet,
    },
    /// No representation of the union chooses `a`'s choice.
    GammaE {
        a: Term,
        b: Term,
        choice_a: AltId,
        choice_b: AltId,
        union: AltSet,
    },
}

impl Witness {
    /// Re-evaluates the witness; true iff the recorded violation reproduces.
    pub fn replay(&self, p: &Procedure) -> bool {
        match self {
            Witness::Ext {
                a,
                b,
                choice_a,
                choice_b,
            } => {
                a.extension() == b.extension()
                    && p.choose(a) == *choice_a
                    && p.choose(b) == *choice_b
                    && choice_a != choice_b
            }
            Witness::Int {
                a,
                x,
                y,
                renamed_choice,
            } => {
                p.choose(a) == *x
                    && p.choose(&a.rename_value(*x, *y)) == *renamed_choice
                    && renamed_choice != y
            }
            Witness::Sind {
                a,
                b,
                sub_choices,
                choice_a,
                choice_b,
            } => {
                let ok_a = p.choose(a) == *choice_a && direct_sub_choices(p, a) == *sub_choices;
                match (b, choice_b) {
                    (Some(b), Some(cb)) => {
                        ok_a && a.ctor == b.ctor
                            && p.choose(b) == *cb
                            && direct_sub_choices(p, b) == *sub_choices
                            && cb != choice_a
                    }
                    _ => ok_a && !sub_choices.contains(choice_a),
                }
            }
            Witness::Tiia {
                a,
                slot,
                choice,
                sub_choice,
                ..
            } => match a.children.get(*slot) {
                Some(Child::Sub(s)) => p.choose(a) == *choice && p.choose(s) == *sub_choice,
                _ => false,
            },
            Witness::AlphaE { a, choice, subset } => {
                p.choose(a) == *choice
                    && subset.contains(*choice)
                    && subset.is_subset(a.extension())
            }
            Witness::GammaE {
                a,
                b,
                choice_a,
                choice_b,
                union,
            } => {
                p.choose(a) == *choice_a
                    && p.choose(b) == *choice_b
                    && a.extension().contains(*choice_b)
                    && a.extension().union(b.extension()) == *union
            }
        }
    }

    /// The witness as JSON, with terms as s-expressions.
    pub fn to_json(&self, p: &Procedure) -> serde_json::Value {
        let (s, u) = (p.schema(), p.universe());
        let t = |t: &Term| serde_json::Value::String(t.to_sexpr(s, u));
        let x = |x: &AltId| serde_json::Value::String(u.name(*x).to_string());
        let set = |a: &AltSet| serde_json::Value::String(u.format_set(*a));
        match self {
            Witness::Ext {
                a,
                b,
                choice_a,
                choice_b,
            } => serde_json::json!({
                "kind": "different_choices",
                "a": t(a), "b": t(b), "choice_a": x(choice_a), "choice_b": x(choice_b),
            }),
            Witness::Int {
                a,
                x: from,
                y,
                renamed_choice,
            } => serde_json::json!({
                "kind": "renaming",
                "a": t(a), "x": x(from), "y": x(y), "renamed": t(&a.rename_value(*from, *y)),
                "renamed_choice": x(renamed_choice),
            }),
            Witness::Sind {
                a,
                b,
                sub_choices,
                choice_a,
                choice_b,
            } => serde_json::json!({
                "kind": if b.is_some() { "same_sub_choices" } else { "choice_not_a_sub_choice" },
                "a": t(a),
                "b": b.as_ref().map(t),
                "sub_choices": sub_choices.iter().map(x).collect::<Vec<_>>(),
                "choice_a": x(choice_a),
                "choice_b": choice_b.as_ref().map(x),
            }),
            Witness::Tiia {
                a,
                slot,
                choice,
                sub_choice,
                target,
            } => serde_json::json!({
                "kind": "no_re_representation",
                "a": t(a), "slot": slot, "choice": x(choice), "sub_choice": x(sub_choice),
                "target": set(target),
            }),
            Witness::AlphaE { a, choice, subset } => serde_json::json!({
                "kind": "subset_without_representation",
                "a": t(a), "choice": x(choice), "subset": set(subset),
            }),
            Witness::GammaE {
                a,
                b,
                choice_a,
                choice_b,
                union,
            } => serde_json::json!({
                "kind": "union_without_representation",
                "a": t(a), "b": t(b), "choice_a": x(choice_a), "choice_b": x(choice_b),
                "union": set(union),
            }),
        }
    }
}

/// Choices on the immediate children: values as themselves, sub-terms as `P`.
fn direct_sub_choices(p: &Procedure, a: &Term) -> Vec<AltId> {
    a.children
        .iter()
        .map(|c| match c {
            Child::Value(x) => *x,
            Child::Sub(t) | Child::Inner(t) => p.choose(t),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    #[serde(skip)]
    pub witnesses: Vec<Witness>,
    /// Total number of violations found, of which `witnesses` keeps a prefix.
    pub violations: usize,
    pub terms_checked: usize,
    pub budget: CheckBudget,
    pub guarantee: Option<Guarantee>,
}

impl PropertyReport {
    pub fn to_json(&self, p: &Procedure) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable report");
        v["witnesses"] = self.witnesses.iter().map(|w| w.to_json(p)).collect();
        v
    }
}

/// What the enumeration saw for one menu.
#[derive(Debug, Default)]
struct MenuData {
    /// Choices on terms within the universal budget, in order of first appearance.
    universal_order: Vec<AltId>,
    universal: AltSet,
    existential: AltSet,
    /// First universal term per choice.
    first_universal: BTreeMap<AltId, Term>,
}

#[derive(Debug, Default)]
struct Exploration {
    menus: BTreeMap<(usize, Vec<u16>), (AltSet, MenuData)>,
    universal_terms: usize,
}

impl Exploration {
    fn menu(&self, set: AltSet) -> Option<&MenuData> {
        self.menus.get(&set.sort_key()).map(|(_, d)| d)
    }

    fn iter(&self) -> impl Iterator<Item = (AltSet, &MenuData)> {
        self.menus.values().map(|(s, d)| (*s, d))
    }
}

/// Runs checks for one procedure and budget, sharing the enumeration.
pub struct Checker<'p> {
    p: &'p Procedure,
    budget: CheckBudget,
    exploration: OnceCell<Exploration>,
}

impl<'p> Checker<'p> {
    pub fn new(p: &'p Procedure, budget: &CheckBudget) -> Self {
        Checker {
            p,
            budget: budget.clone(),
            exploration: OnceCell::new(),
        }
    }

    pub fn check(&self, property: Property) -> Result<PropertyReport, CheckError> {
        match property {
            Property::Ext => self.ext(),
            Property::Int => self.int(),
            Property::Sind => self.sind(),
            Property::Tiia => self.tiia(),
            Property::AlphaE => self.alpha_e(),
            Property::GammaE => self.gamma_e(),
        }
    }

    fn report(
        &self,
        property: Property,
        witnesses: Vec<Witness>,
        violations: usize,
        terms: usize,
    ) -> PropertyReport {
        let verdict = if violations == 0 {
            Verdict::HoldsUpToBudget
        } else if property.is_existential() {
            Verdict::NoWitnessWithinBudget
        } else {
            Verdict::Falsified
        };
        PropertyReport {
            property,
            verdict,
            witnesses,
            violations,
            terms_checked: terms,
            budget: self.budget.clone(),
            guarantee: self.p.guarantee().cloned(),
        }
    }

    fn universe(&self) -> &Universe {
        self.p.universe()
    }

    fn explore(&self) -> Result<&Exploration, CheckError> {
        if let Some(e) = self.exploration.get() {
            return Ok(e);
        }
        let e = self.build_exploration()?;
        Ok(self.exploration.get_or_init(|| e))
    }

    fn build_exploration(&self) -> Result<Exploration, CheckError> {
        let p = self.p;
        let n = self.universe().len();
        let top = self.budget.existential_cap(n);
        let mut enumerator = TermEnumerator::new(p.schema(), &self.budget.existential())
            .with_guarantee(p.resolved_guarantee());
        let mut ex = Exploration::default();
        enumerator.for_each(Domain::Within(self.universe().all()), top, |t| {
            let ext = t.extension();
            let leaves = t.leaf_count();
            if leaves > self.budget.existential_cap(ext.len()) {
                return ControlFlow::Continue(());
            }
            let x = p.choose(t);
            let (_, data) = ex
                .menus
                .entry(ext.sort_key())
                .or_insert_with(|| (ext, MenuData::default()));
            data.existential.insert(x);
            if leaves <= self.budget.universal_cap(ext.len()) {
                ex.universal_terms += 1;
                if !data.universal.contains(x) {
                    data.universal.insert(x);
                    data.universal_order.push(x);
                    data.first_universal.insert(x, t.clone());
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(ex)
    }

    /// Visits every term within the universal budget.
    fn for_each_universal(&self, mut f: impl FnMut(&Term)) -> Result<usize, CheckError> {
        let n = self.universe().len();
        let mut enumerator = TermEnumerator::new(self.p.schema(), &self.budget.enumeration)
            .with_guarantee(self.p.resolved_guarantee());
        let mut count = 0;
        enumerator.for_each(
            Domain::Within(self.universe().all()),
            self.budget.universal_cap(n),
            |t| {
                if t.leaf_count() <= self.budget.universal_cap(t.extension().len()) {
                    count += 1;
                    f(t);
                }
                ControlFlow::Continue(())
            },
        )?;
        Ok(count)
    }

    fn ext(&self) -> Result<PropertyReport, CheckError> {
        let ex = self.explore()?;
        let mut witnesses = Vec::new();
        let mut violations = 0;
        for (_, data) in ex.iter() {
            if let [ca, cb, ..] = data.universal_order[..] {
                violations += 1;
                if witnesses.len() < self.budget.max_witnesses {
                    witnesses.push(Witness::Ext {
                        a: data.first_universal[&ca].clone(),
                        b: data.first_universal[&cb].clone(),
                        choice_a: ca,
                        choice_b: cb,
                    });
                }
            }
        }
        Ok(self.report(Property::Ext, witnesses, violations, ex.universal_terms))
    }

    fn int(&self) -> Result<PropertyReport, CheckError> {
        let p = self.p;
        let ids: Vec<AltId> = self.universe().ids().collect();
        let mut witnesses = Vec::new();
        let mut violations = 0;
        let terms = self.for_each_universal(|a| {
            let x = p.choose(a);
            for &y in &ids {
                if y == x {
                    continue;
                }
                let renamed = a.rename_value(x, y);
                if !p.admits(&renamed) {
                    continue;
                }
                let got = p.choose(&renamed);
                if got != y {
                    violations += 1;
                    if witnesses.len() < self.budget.max_witnesses {
                        witnesses.push(Witness::Int {
                            a: a.clone(),
                            x,
                            y,
                            renamed_choice: got,
                        });
                    }
                }
            }
        })?;
        Ok(self.report(Property::Int, witnesses, violations, terms))
    }

    fn sind(&self) -> Result<PropertyReport, CheckError> {
        let p = self.p;
        let schema = p.schema();
        if schema.is_nested() {
            return Err(CheckError::NestedSind(schema.name.clone()));
        }
        let all = self.universe().all();
        let child_cap = self
            .budget
            .sind_child_leaves
            .min(self.budget.enumeration.max_leaves);
        let mut pool: Vec<(Term, AltId)> = Vec::new();
        TermEnumerator::new(schema, &EnumerationBudget::new(child_cap)).for_each(
            Domain::Within(all),
            child_cap,
            |t| {
                pool.push((t.clone(), p.choose(t)));
                ControlFlow::Continue(())
            },
        )?;
        let values: Vec<AltId> = all.iter().collect();
        let mut witnesses = Vec::new();
        let mut violations = 0;
        let mut terms = 0;
        for (ci, c) in schema.constructors.iter().enumerate() {
            let ranges: Vec<std::ops::Range<usize>> = c
                .slots
                .iter()
                .map(|s| match s {
                    SlotKind::Value => 0..values.len(),
                    SlotKind::Recursive => 0..pool.len(),
                })
                .collect();
            let mut groups: HashMap<Vec<AltId>, (Term, AltId)> = HashMap::new();
            for combo in ranges.into_iter().multi_cartesian_product() {
                let mut children = Vec::with_capacity(combo.len());
                let mut subs = Vec::with_capacity(combo.len());
                for (slot, &i) in c.slots.iter().zip(&combo) {
                    match slot {
                        SlotKind::Value => {
                            children.push(Child::Value(values[i]));
                            subs.push(values[i]);
                        }
                        SlotKind::Recursive => {
                            children.push(Child::Sub(pool[i].0.clone()));
                            subs.push(pool[i].1);
                        }
                    }
                }
                let a = Term::new(ci as u16, children);
                if !p.admits(&a) {
                    continue;
                }
                terms += 1;
                let x = p.choose(&a);
                let mut violation = None;
                if !subs.contains(&x) {
                    violation = Some(Witness::Sind {
                        a: a.clone(),
                        b: None,
                        sub_choices: subs.clone(),
                        choice_a: x,
                        choice_b: None,
                    });
                }
                match groups.get(&subs) {
                    Some((first, fx)) => {
                        if *fx != x && violation.is_none() {
                            violation = Some(Witness::Sind {
                                a: first.clone(),
                                b: Some(a),
                                sub_choices: subs,
                                choice_a: *fx,
                                choice_b: Some(x),
                            });
                        }
                    }
                    None => {
                        groups.insert(subs, (a, x));
                    }
                }
                if let Some(w) = violation {
                    violations += 1;
                    if witnesses.len() < self.budget.max_witnesses {
                        witnesses.push(w);
                    }
                }
            }
        }
        Ok(self.report(Property::Sind, witnesses, violations, terms))
    }

    fn tiia(&self) -> Result<PropertyReport, CheckError> {
        let p = self.p;
        if !analyze_schema(p.schema()).substitutable || p.schema().is_nested() {
            return Err(CheckError::NotSubstitutable(p.schema().name.clone()));
        }
        let mut cache: HashMap<AltSet, Vec<Term>> = HashMap::new();
        let mut witnesses = Vec::new();
        let mut violations = 0;
        let mut error = None;
        let terms = self.for_each_universal(|a| {
            if error.is_some() {
                return;
            }
            for slot in 0..a.children.len() {
                match self.tiia_at_cached(a, slot, &mut cache) {
                    Ok(Some(w)) => {
                        violations += 1;
                        if witnesses.len() < self.budget.max_witnesses {
                            witnesses.push(w);
                        }
                    }
                    Ok(None) => {}
                    Err(e) => error = Some(e),
                }
            }
        })?;
        if let Some(e) = error {
            return Err(e);
        }
        Ok(self.report(Property::Tiia, witnesses, violations, terms))
    }

    /// The TIIA clause at one immediate sub-term: `None` if it holds there.
    pub fn tiia_at(&self, a: &Term, slot: usize) -> Result<Option<Witness>, CheckError> {
        self.tiia_at_cached(a, slot, &mut HashMap::new())
    }

    fn tiia_at_cached(
        &self,
        a: &Term,
        slot: usize,
        cache: &mut HashMap<AltSet, Vec<Term>>,
    ) -> Result<Option<Witness>, CheckError> {
        let p = self.p;
        let Some(Child::Sub(sub)) = a.children.get(slot) else {
            return Ok(None);
        };
        let x = p.choose(a);
        let y = p.choose(sub);
        if x == y {
            return Ok(None);
        }
        let target = sub.extension().without(y).with(x);
        let keeps = |b: &Term| {
            let replaced = a.with_child(slot, b.clone());
            p.admits(&replaced) && p.choose(&replaced) == x
        };
        if keeps(&sub.rename_value(y, x)) {
            return Ok(None);
        }
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(target) {
            let budget = self.budget.existential();
            let mut reps = Vec::new();
            match for_each_representation(p.schema(), target, &budget, None, |t| {
                reps.push(t.clone());
                ControlFlow::Continue(())
            }) {
                Ok(_) | Err(EnumerationError::Unsatisfiable { .. }) => {}
                Err(e) => return Err(e.into()),
            }
            e.insert(reps);
        }
        if cache[&target].iter().any(keeps) {
            return Ok(None);
        }
        Ok(Some(Witness::Tiia {
            a: a.clone(),
            slot,
            choice: x,
            sub_choice: y,
            target,
        }))
    }

    fn alpha_e(&self) -> Result<PropertyReport, CheckError> {
        let ex = self.explore()?;
        let mut witnesses = Vec::new();
        let mut violations = 0;
        for (set, data) in ex.iter() {
            for (&x, a) in &data.first_universal {
                for b in set.without(x).subsets() {
                    let b = b.with(x);
                    let ok = ex.menu(b).is_some_and(|d| d.existential.contains(x));
                    if !ok {
                        violations += 1;
                        if witnesses.len() < self.budget.max_witnesses {
                            witnesses.push(Witness::AlphaE {
                                a: a.clone(),
                                choice: x,
                                subset: b,
                            });
                        }
                    }
                }
            }
        }
        Ok(self.report(Property::AlphaE, witnesses, violations, ex.universal_terms))
    }

    fn gamma_e(&self) -> Result<PropertyReport, CheckError> {
        let ex = self.explore()?;
        let mut witnesses = Vec::new();
        let mut violations = 0;
        let menus: Vec<(AltSet, &MenuData)> = ex.iter().collect();
        for &(sa, da) in &menus {
            for (&x, a) in &da.first_universal {
                for &(sb, db) in &menus {
                    for (&y, b) in &db.first_universal {
                        if !sa.contains(y) {
                            continue;
                        }
                        let union = sa.union(sb);
                        let ok = ex.menu(union).is_some_and(|d| d.existential.contains(x));
                        if !ok {
                            violations += 1;
                            if witnesses.len() < self.budget.max_witnesses {
                                witnesses.push(Witness::GammaE {
                                    a: a.clone(),
                                    b: b.clone(),
                                    choice_a: x,
                                    choice_b: y,
                                    union,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(self.report(Property::GammaE, witnesses, violations, ex.universal_terms))
    }

    /// Whether `P(a) = c(extension(a))` on every term within the universal budget.
    pub fn implements(&self, c: &ChoiceFunction) -> Result<bool, CheckError> {
        let ex = self.explore()?;
        Ok(ex.iter().all(|(set, d)| {
            d.universal.is_empty()
                || c.get(set)
                    .is_some_and(|x| d.universal == AltSet::singleton(x))
        }))
    }

    /// The correspondence of choices on terms within the universal budget.
    /// Menus with no such term map to the empty set.
    pub fn universal_correspondence(
        &self,
        universe: &Universe,
    ) -> Result<ChoiceCorrespondence, CheckError> {
        let ex = self.explore()?;
        Ok(ChoiceCorrespondence::from_fn(universe, |s| {
            ex.menu(s).map_or(AltSet::EMPTY, |d| d.universal)
        }))
    }

    /// Menus represented by at least one term within the universal budget.
    pub fn universal_menus(&self) -> Result<Vec<(AltSet, AltSet)>, CheckError> {
        let ex = self.explore()?;
        Ok(ex
            .iter()
            .filter(|(_, d)| !d.universal.is_empty())
            .map(|(s, d)| (s, d.universal))
            .collect())
    }
}

pub fn check_property(
    p: &Procedure,
    property: Property,
    budget: &CheckBudget,
) -> Result<PropertyReport, CheckError> {
    Checker::new(p, budget).check(property)
}

pub fn check_ext(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::Ext, budget)
}

pub fn check_int(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::Int, budget)
}

pub fn check_sind(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::Sind, budget)
}

pub fn check_tiia(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::Tiia, budget)
}

pub fn check_alpha_e(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::AlphaE, budget)
}

pub fn check_gamma_e(p: &Procedure, budget: &CheckBudget) -> Result<PropertyReport, CheckError> {
    check_property(p, Property::GammaE, budget)
}

/// Formats a list of alternatives as `x,y,z`.
pub fn join_names(universe: &Universe, xs: &[AltId]) -> String {
    xs.iter().map(|x| universe.name(*x)).join(",")
}
