//! Decision procedures: total maps from terms to one of their leaves.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::guarantee::{
    guarantee_filter, Direction, Guarantee, GuaranteeError, ResolvedGuarantee,
};
use crate::rationality::ChoiceFunction;
use crate::schema::{AdtSchema, SlotKind};
use crate::term::{parse_term, Child, Term, TermError};
use crate::universe::{AltId, AltSet, Universe, UniverseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcedureKind {
    Maximize,
    SatList,
    SatList2,
    CondSat,
    DefaultLarge,
    FirstList,
    FirstList2,
    SecondList,
    SecondList2,
    LeftmostTree,
    BiasLarge,
    BiasSmall,
    Avoid,
    WineChecklist,
    WineChecklistNested,
    FirstOfSearch,
    CircularMax,
    Table,
    Lifted,
}

impl ProcedureKind {
    pub const ALL: [ProcedureKind; 19] = [
        ProcedureKind::Maximize,
        ProcedureKind::SatList,
        ProcedureKind::SatList2,
        ProcedureKind::CondSat,
        ProcedureKind::DefaultLarge,
        ProcedureKind::FirstList,
        ProcedureKind::FirstList2,
        ProcedureKind::SecondList,
        ProcedureKind::SecondList2,
        ProcedureKind::LeftmostTree,
        ProcedureKind::BiasLarge,
        ProcedureKind::BiasSmall,
        ProcedureKind::Avoid,
        ProcedureKind::WineChecklist,
        ProcedureKind::WineChecklistNested,
        ProcedureKind::FirstOfSearch,
        ProcedureKind::CircularMax,
        ProcedureKind::Table,
        ProcedureKind::Lifted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProcedureKind::Maximize => "maximize",
            ProcedureKind::SatList => "sat_list",
            ProcedureKind::SatList2 => "sat_list2",
            ProcedureKind::CondSat => "cond_sat",
            ProcedureKind::DefaultLarge => "default_large",
            ProcedureKind::FirstList => "first_list",
            ProcedureKind::FirstList2 => "first_list2",
            ProcedureKind::SecondList => "second_list",
            ProcedureKind::SecondList2 => "second_list2",
            ProcedureKind::LeftmostTree => "leftmost_tree",
            ProcedureKind::BiasLarge => "bias_large",
            ProcedureKind::BiasSmall => "bias_small",
            ProcedureKind::Avoid => "avoid",
            ProcedureKind::WineChecklist => "wine_checklist",
            ProcedureKind::WineChecklistNested => "wine_checklist_nested",
            ProcedureKind::FirstOfSearch => "first_of_search",
            ProcedureKind::CircularMax => "circular_max",
            ProcedureKind::Table => "table",
            ProcedureKind::Lifted => "lifted",
        }
    }

    /// Parameters the kind understands; `entry` and `choice` may repeat.
    fn accepted_params(self) -> &'static [&'static str] {
        match self {
            ProcedureKind::Maximize => &["order"],
            ProcedureKind::SatList | ProcedureKind::SatList2 => &["u", "threshold"],
            ProcedureKind::CondSat => &["known", "order"],
            ProcedureKind::DefaultLarge => &["default", "n", "order"],
            ProcedureKind::BiasLarge | ProcedureKind::BiasSmall => &["n", "order"],
            ProcedureKind::Avoid => &["avoid", "n"],
            ProcedureKind::CircularMax => &["cycle", "order"],
            ProcedureKind::Table => &["entry", "order"],
            ProcedureKind::Lifted => &["choice", "order"],
            _ => &[],
        }
    }
}

impl fmt::Display for ProcedureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProcedureKind {
    type Err = ProcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProcedureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ProcError::UnknownKind(s.to_string()))
    }
}

/// A procedure kind with its textual parameters, as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureSpec {
    pub kind: ProcedureKind,
    pub params: Vec<(String, String)>,
}

impl ProcedureSpec {
    pub fn new(kind: ProcedureKind) -> Self {
        ProcedureSpec {
            kind,
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.params
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, ProcError> {
        self.get(key).ok_or_else(|| ProcError::MissingParam {
            kind: self.kind,
            param: key.to_string(),
        })
    }

    fn bad(&self, key: &str, value: &str, reason: impl Into<String>) -> ProcError {
        ProcError::BadParam {
            param: key.to_string(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    fn size_threshold(&self) -> Result<usize, ProcError> {
        let v = self.require("n")?;
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(self.bad("n", v, "expected an integer >= 1")),
        }
    }

    fn finite(&self, key: &str) -> Result<f64, ProcError> {
        let v = self.require(key)?;
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.bad(key, v, "expected a finite number")),
        }
    }

    fn alt(&self, universe: &Universe, key: &str) -> Result<AltId, ProcError> {
        Ok(universe.lookup(self.require(key)?)?)
    }
}

impl fmt::Display for ProcedureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ProcError {
    #[error("unknown procedure kind `{0}`")]
    UnknownKind(String),
    #[error("procedure `{kind}` does not apply to schema `{schema}` (needs {needs})")]
    SchemaMismatch {
        kind: ProcedureKind,
        schema: String,
        needs: &'static str,
    },
    #[error("procedure `{kind}` needs parameter `{param}`")]
    MissingParam { kind: ProcedureKind, param: String },
    #[error("procedure `{kind}` does not take parameter `{param}`")]
    UnknownParam { kind: ProcedureKind, param: String },
    #[error("invalid value `{value}` for parameter `{param}`: {reason}")]
    BadParam {
        param: String,
        value: String,
        reason: String,
    },
    #[error("choice function is undefined on {0}")]
    Partial(String),
    #[error("term violates guarantee `{0}`")]
    GuaranteeViolation(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Guarantee(#[from] GuaranteeError),
}

/// A strict total order on X: a numeric attribute descending, ties by
/// declaration index. Without an attribute, declaration order itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictOrder {
    /// Alternatives from best to worst.
    ranked: Vec<AltId>,
    /// Position of each alternative in `ranked`.
    position: Vec<usize>,
}

impl StrictOrder {
    pub fn declaration(universe: &Universe) -> Self {
        StrictOrder::from_ranking(universe.ids().collect())
    }

    pub fn by_attribute(universe: &Universe, attr: &str) -> Result<Self, UniverseError> {
        let keys = universe.numeric_attr(attr)?;
        let mut ranked: Vec<AltId> = universe.ids().collect();
        ranked.sort_by(|a, b| keys[b.index()].total_cmp(&keys[a.index()]).then(a.cmp(b)));
        Ok(StrictOrder::from_ranking(ranked))
    }

    /// `ranked` lists every alternative once, best first.
    pub fn from_ranking(ranked: Vec<AltId>) -> Self {
        let mut position = vec![0; ranked.len()];
        for (i, x) in ranked.iter().enumerate() {
            position[x.index()] = i;
        }
        StrictOrder { ranked, position }
    }

    fn from_param(universe: &Universe, attr: Option<&str>) -> Result<Self, UniverseError> {
        match attr {
            Some(a) => StrictOrder::by_attribute(universe, a),
            None => Ok(StrictOrder::declaration(universe)),
        }
    }

    pub fn ranking(&self) -> &[AltId] {
        &self.ranked
    }

    pub fn prefers(&self, a: AltId, b: AltId) -> bool {
        self.position[a.index()] < self.position[b.index()]
    }

    /// The best member of a non-empty set.
    pub fn best(&self, set: AltSet) -> AltId {
        *self
            .ranked
            .iter()
            .find(|x| set.contains(**x))
            .expect("non-empty set")
    }
}

/// The resolved evaluation rule of a procedure.
#[derive(Debug, Clone)]
enum Rule {
    Maximize(StrictOrder),
    SatList {
        u: Vec<f64>,
        threshold: f64,
    },
    SatList2 {
        u: Vec<f64>,
        threshold: f64,
    },
    CondSat {
        known: AltSet,
        order: StrictOrder,
    },
    DefaultLarge {
        default: AltId,
        n: usize,
        order: StrictOrder,
    },
    FirstList,
    FirstList2,
    SecondList,
    SecondList2,
    LeftmostTree,
    Bias {
        large: bool,
        n: usize,
        order: StrictOrder,
    },
    Avoid {
        avoid: AltId,
        n: usize,
    },
    WineChecklist,
    WineChecklistNested,
    FirstOfSearch,
    CircularMax {
        successor: Vec<Option<AltId>>,
        order: StrictOrder,
    },
    Table {
        entries: HashMap<Term, AltId>,
        fallback: StrictOrder,
    },
    Lifted(ChoiceFunction),
}

/// An instantiated procedure bound to a schema and universe.
#[derive(Debug, Clone)]
pub struct Procedure {
    spec: ProcedureSpec,
    schema: AdtSchema,
    universe: Universe,
    rule: Rule,
    guarantee: Option<(Guarantee, ResolvedGuarantee)>,
    enforce: bool,
}

type Sig = &'static [&'static [SlotKind]];
use SlotKind::{Recursive as R, Value as V};
const LIST: Sig = &[&[V], &[V, R]];
const LIST2: Sig = &[&[V], &[R, R]];
const TREE: Sig = &[&[V], &[R, R, R]];
const WINES: Sig = &[&[V], &[R, R], &[R, R]];

fn has_signature(schema: &AdtSchema, sig: Sig) -> bool {
    schema.constructors.len() == sig.len()
        && schema
            .constructors
            .iter()
            .zip(sig)
            .all(|(c, s)| c.slots.as_slice() == *s)
}

fn flat_with(schema: &AdtSchema, sig: Sig) -> bool {
    schema.inner.is_none() && has_signature(schema, sig)
}

fn is_page(schema: &AdtSchema) -> bool {
    schema.inner.is_none()
        && schema.constructors.len() == 1
        && schema.constructors[0]
            .slots
            .iter()
            .all(|s| *s == SlotKind::Value)
}

impl Procedure {
    pub fn spec(&self) -> &ProcedureSpec {
        &self.spec
    }

    pub fn kind(&self) -> ProcedureKind {
        self.spec.kind
    }

    pub fn schema(&self) -> &AdtSchema {
        &self.schema
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Attaches a guarantee. With `enforce`, `apply` rejects terms violating it;
    /// otherwise it only restricts the domain seen by checkers.
    pub fn with_guarantee(mut self, g: Guarantee, enforce: bool) -> Result<Self, ProcError> {
        let resolved = g.resolve(&self.universe)?;
        self.guarantee = Some((g, resolved));
        self.enforce = enforce;
        Ok(self)
    }

    pub fn guarantee(&self) -> Option<&Guarantee> {
        self.guarantee.as_ref().map(|(g, _)| g)
    }

    pub fn resolved_guarantee(&self) -> Option<&ResolvedGuarantee> {
        self.guarantee.as_ref().map(|(_, r)| r)
    }

    /// Whether `a` lies in the procedure's (possibly restricted) domain.
    pub fn admits(&self, a: &Term) -> bool {
        self.resolved_guarantee().is_none_or(|g| g.admits(a))
    }

    /// Validated evaluation.
    pub fn apply(&self, a: &Term) -> Result<AltId, ProcError> {
        a.validate(&self.schema, &self.universe)?;
        if self.enforce {
            if let Some((g, r)) = &self.guarantee {
                if !r.admits(a) {
                    return Err(ProcError::GuaranteeViolation(g.to_string()));
                }
            }
        }
        Ok(self.choose(a))
    }

    /// Parses an s-expression and evaluates it.
    pub fn apply_text(&self, text: &str) -> Result<AltId, ProcError> {
        let t = parse_term(&self.schema, &self.universe, text)?;
        self.apply(&t)
    }

    /// Evaluation on a term already known to be valid for the schema.
    pub fn choose(&self, a: &Term) -> AltId {
        match &self.rule {
            Rule::Maximize(order) => order.best(a.extension()),
            Rule::SatList { u, threshold } => sat_list(a, u, *threshold),
            Rule::SatList2 { u, threshold } => sat_list2(a, u, *threshold),
            Rule::CondSat { known, order } => {
                let ext = a.extension();
                if 2 * ext.intersection(*known).len() > ext.len() {
                    *a.leaves()
                        .iter()
                        .find(|x| known.contains(**x))
                        .expect("known leaf")
                } else {
                    order.best(ext)
                }
            }
            Rule::DefaultLarge { default, n, order } => {
                let ext = a.extension();
                if ext.contains(*default) && ext.len() > *n {
                    *default
                } else {
                    order.best(ext)
                }
            }
            Rule::FirstList | Rule::FirstList2 | Rule::LeftmostTree | Rule::FirstOfSearch => {
                first_leaf(a)
            }
            Rule::SecondList => second_list(a),
            Rule::SecondList2 => second_list2(a),
            Rule::Bias { large, n, order } => bias(a, *large, *n, order),
            Rule::Avoid { avoid, n } => avoid_rule(a, *avoid, *n),
            Rule::WineChecklist | Rule::WineChecklistNested => wine(a),
            Rule::CircularMax { successor, order } => circular_max(a, successor, order),
            Rule::Table { entries, fallback } => match entries.get(a) {
                Some(x) => *x,
                None => fallback.best(a.extension()),
            },
            Rule::Lifted(c) => c
                .get(a.extension())
                .expect("lifted choice function is total"),
        }
    }
}

fn value(c: &Child) -> AltId {
    match c {
        Child::Value(x) => *x,
        Child::Inner(t) => first_leaf(t),
        Child::Sub(t) => first_leaf(t),
    }
}

fn sub(c: &Child) -> &Term {
    c.as_term().expect("sub-term")
}

/// The leftmost leaf, descending through first children.
fn first_leaf(a: &Term) -> AltId {
    value(&a.children[0])
}

fn sat_list(a: &Term, u: &[f64], t: f64) -> AltId {
    let mut cur = a;
    loop {
        let x = value(&cur.children[0]);
        if cur.ctor == 0 || u[x.index()] >= t {
            return x;
        }
        cur = sub(&cur.children[1]);
    }
}

fn sat_list2(a: &Term, u: &[f64], t: f64) -> AltId {
    if a.ctor == 0 {
        return value(&a.children[0]);
    }
    let left = sat_list2(sub(&a.children[0]), u, t);
    if u[left.index()] >= t {
        left
    } else {
        sat_list2(sub(&a.children[1]), u, t)
    }
}

fn second_list(a: &Term) -> AltId {
    if a.ctor == 0 {
        value(&a.children[0])
    } else {
        first_leaf(sub(&a.children[1]))
    }
}

fn second_list2(a: &Term) -> AltId {
    if a.ctor == 0 {
        return value(&a.children[0]);
    }
    let left = sub(&a.children[0]);
    if left.ctor == 0 {
        second_list2(sub(&a.children[1]))
    } else {
        second_list2(left)
    }
}

fn bias(a: &Term, large: bool, n: usize, order: &StrictOrder) -> AltId {
    let ext = a.extension();
    if ext.len() <= n || a.ctor == 0 {
        return order.best(ext);
    }
    let t: Vec<&Term> = a.children.iter().map(sub).collect();
    let s: Vec<usize> = t.iter().map(|c| c.extension().len()).collect();
    let pick = if large {
        if s[0] > s[1].max(s[2]) {
            0
        } else if s[1] > s[0].max(s[2]) {
            1
        } else {
            2
        }
    } else if s[0] < s[1].min(s[2]) {
        0
    } else if s[1] < s[0].min(s[2]) {
        1
    } else {
        2
    };
    bias(t[pick], large, n, order)
}

fn avoid_rule(a: &Term, avoid: AltId, n: usize) -> AltId {
    if a.ctor == 0 {
        return value(&a.children[0]);
    }
    let (l, r) = (sub(&a.children[0]), sub(&a.children[1]));
    let pl = avoid_rule(l, avoid, n);
    if pl != avoid || l.extension().union(r.extension()).len() <= n {
        pl
    } else {
        avoid_rule(r, avoid, n)
    }
}

fn wine(a: &Term) -> AltId {
    match a.ctor {
        0 => value(&a.children[0]),
        // Red: the red branch is the second child.
        1 => wine(sub(&a.children[1])),
        // Dry: the non-dry branch is the first child.
        _ => wine(sub(&a.children[0])),
    }
}

fn circular_max(a: &Term, successor: &[Option<AltId>], order: &StrictOrder) -> AltId {
    let beats = |c: AltId, m: AltId| -> bool {
        if successor[c.index()] == Some(m) {
            true
        } else if successor[m.index()] == Some(c) {
            false
        } else {
            order.prefers(c, m)
        }
    };
    let mut best: Option<AltId> = None;
    for ch in &a.children {
        let c = match ch {
            Child::Value(x) => *x,
            Child::Inner(t) => order.best(t.extension()),
            Child::Sub(t) => circular_max(t, successor, order),
        };
        best = Some(match best {
            Some(m) if !beats(c, m) => m,
            _ => c,
        });
    }
    best.expect("constructor with at least one slot")
}

/// Builds a procedure from its specification.
pub fn instantiate_procedure(
    spec: &ProcedureSpec,
    universe: &Universe,
    schema: &AdtSchema,
) -> Result<Procedure, ProcError> {
    for (k, _) in &spec.params {
        if !spec.kind.accepted_params().contains(&k.as_str()) {
            return Err(ProcError::UnknownParam {
                kind: spec.kind,
                param: k.clone(),
            });
        }
    }
    let mismatch = |needs: &'static str| ProcError::SchemaMismatch {
        kind: spec.kind,
        schema: schema.name.clone(),
        needs,
    };
    let order = || StrictOrder::from_param(universe, spec.get("order"));
    let rule = match spec.kind {
        ProcedureKind::Maximize => Rule::Maximize(order()?),
        ProcedureKind::SatList | ProcedureKind::SatList2 => {
            let u = universe.numeric_attr(spec.require("u")?)?;
            let threshold = spec.finite("threshold")?;
            if spec.kind == ProcedureKind::SatList {
                if !flat_with(schema, LIST) {
                    return Err(mismatch("the List grammar `Sing: X | Cons: X, T`"));
                }
                Rule::SatList { u, threshold }
            } else {
                if !flat_with(schema, LIST2) {
                    return Err(mismatch("the List2 grammar `Sing2: X | Cat: T, T`"));
                }
                Rule::SatList2 { u, threshold }
            }
        }
        ProcedureKind::CondSat => {
            if !flat_with(schema, LIST) && !flat_with(schema, LIST2) {
                return Err(mismatch("a List or List2 grammar"));
            }
            let raw = spec.require("known")?;
            let known = match universe.bool_attr(raw) {
                Ok(flags) => universe.ids().filter(|x| flags[x.index()]).collect(),
                Err(_) => universe.parse_set(raw)?,
            };
            Rule::CondSat {
                known,
                order: order()?,
            }
        }
        ProcedureKind::DefaultLarge => Rule::DefaultLarge {
            default: spec.alt(universe, "default")?,
            n: spec.size_threshold()?,
            order: order()?,
        },
        ProcedureKind::FirstList | ProcedureKind::SecondList => {
            if !flat_with(schema, LIST) {
                return Err(mismatch("the List grammar `Sing: X | Cons: X, T`"));
            }
            if spec.kind == ProcedureKind::FirstList {
                Rule::FirstList
            } else {
                Rule::SecondList
            }
        }
        ProcedureKind::FirstList2 | ProcedureKind::SecondList2 => {
            if !flat_with(schema, LIST2) {
                return Err(mismatch("the List2 grammar `Sing2: X | Cat: T, T`"));
            }
            if spec.kind == ProcedureKind::FirstList2 {
                Rule::FirstList2
            } else {
                Rule::SecondList2
            }
        }
        ProcedureKind::LeftmostTree => {
            if !flat_with(schema, TREE) {
                return Err(mismatch("the Tree grammar `Leaf: X | Node: T, T, T`"));
            }
            Rule::LeftmostTree
        }
        ProcedureKind::BiasLarge | ProcedureKind::BiasSmall => {
            if !flat_with(schema, TREE) {
                return Err(mismatch("the Tree grammar `Leaf: X | Node: T, T, T`"));
            }
            Rule::Bias {
                large: spec.kind == ProcedureKind::BiasLarge,
                n: spec.size_threshold()?,
                order: order()?,
            }
        }
        ProcedureKind::Avoid => {
            if !flat_with(schema, LIST2) {
                return Err(mismatch("the List2 grammar `Sing2: X | Cat: T, T`"));
            }
            Rule::Avoid {
                avoid: spec.alt(universe, "avoid")?,
                n: spec.size_threshold()?,
            }
        }
        ProcedureKind::WineChecklist => {
            if !flat_with(schema, WINES) {
                return Err(mismatch(
                    "the Wines grammar `Wine: X | Red: T, T | Dry: T, T`",
                ));
            }
            Rule::WineChecklist
        }
        ProcedureKind::WineChecklistNested => {
            let ok = has_signature(schema, WINES)
                && schema.inner.as_deref().is_some_and(|i| flat_with(i, LIST));
            if !ok {
                return Err(mismatch("the Wines grammar nested over the List grammar"));
            }
            Rule::WineChecklistNested
        }
        ProcedureKind::FirstOfSearch => {
            let ok = has_signature(schema, LIST) && schema.inner.as_deref().is_some_and(is_page);
            if !ok {
                return Err(mismatch(
                    "a search result grammar `R1: X | R2: X, T` over a page",
                ));
            }
            Rule::FirstOfSearch
        }
        ProcedureKind::CircularMax => {
            let raw = spec.require("cycle")?;
            let cycle: Vec<AltId> = raw
                .split(',')
                .map(|s| universe.lookup(s.trim()))
                .collect::<Result<_, _>>()?;
            let distinct: AltSet = cycle.iter().copied().collect();
            if cycle.len() < 3 || distinct.len() != cycle.len() {
                return Err(spec.bad(
                    "cycle",
                    raw,
                    "expected at least three distinct alternatives",
                ));
            }
            let mut successor = vec![None; universe.len()];
            for (i, x) in cycle.iter().enumerate() {
                successor[x.index()] = Some(cycle[(i + 1) % cycle.len()]);
            }
            Rule::CircularMax {
                successor,
                order: order()?,
            }
        }
        ProcedureKind::Table => {
            let mut entries = HashMap::new();
            for raw in spec.all("entry") {
                let (lhs, rhs) = raw
                    .rsplit_once("=>")
                    .ok_or_else(|| spec.bad("entry", raw, "expected `<term> => <alternative>`"))?;
                let term = parse_term(schema, universe, lhs.trim())?;
                let x = universe.lookup(rhs.trim())?;
                if !term.extension().contains(x) {
                    return Err(spec.bad("entry", raw, "choice must occur in the term"));
                }
                entries.insert(term, x);
            }
            Rule::Table {
                entries,
                fallback: order()?,
            }
        }
        ProcedureKind::Lifted => {
            let fallback = order()?;
            let mut c = ChoiceFunction::from_order(universe, &fallback);
            for raw in spec.all("choice") {
                let (lhs, rhs) = raw
                    .rsplit_once(':')
                    .ok_or_else(|| spec.bad("choice", raw, "expected `<x,y,...>:<alternative>`"))?;
                let set = universe.parse_set(lhs)?;
                let x = universe.lookup(rhs.trim())?;
                if !set.contains(x) {
                    return Err(spec.bad("choice", raw, "choice must belong to the menu"));
                }
                c.set(set, x);
            }
            Rule::Lifted(c)
        }
    };
    Ok(Procedure {
        spec: spec.clone(),
        schema: schema.clone(),
        universe: universe.clone(),
        rule,
        guarantee: None,
        enforce: false,
    })
}

/// The procedure `c ∘ extension` on `schema`.
pub fn lift_choice_function(
    c: &ChoiceFunction,
    universe: &Universe,
    schema: &AdtSchema,
) -> Result<Procedure, ProcError> {
    for set in universe.all().nonempty_subsets_by_size() {
        match c.get(set) {
            Some(x) if set.contains(x) => {}
            _ => return Err(ProcError::Partial(universe.format_set(set))),
        }
    }
    Ok(Procedure {
        spec: ProcedureSpec::new(ProcedureKind::Lifted),
        schema: schema.clone(),
        universe: universe.clone(),
        rule: Rule::Lifted(c.clone()),
        guarantee: None,
        enforce: false,
    })
}
