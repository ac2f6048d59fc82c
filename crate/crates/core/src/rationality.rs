//! Induced choice functions and correspondences, and whether a preference
//! relation rationalizes them. Every rationalization question is answered
//! twice, from binary menus and by exhaustive search, and the two answers
//! must agree.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canonical_representation, RepresentationError};
use crate::enumeration::{for_each_representation, EnumerationBudget, EnumerationError};
use crate::procedures::{Procedure, StrictOrder};
use crate::properties::{CheckBudget, CheckError, Checker, Property, Verdict};
use crate::schema::analyze_schema;
use crate::universe::{AltId, AltSet, Universe};

/// Largest universe for exhaustive search over strict orders.
pub const MAX_FUNCTION_ORACLE: usize = 6;
/// Largest universe for exhaustive search over weak orders.
pub const MAX_CORRESPONDENCE_ORACLE: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum RationalityError {
    #[error("schema `{0}` is not representable")]
    NotRepresentable(String),
    #[error("no admissible representation of {0} within the budget")]
    NoRepresentation(String),
    #[error("universe of {size} alternatives exceeds the oracle limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("{0} is not defined on every non-empty menu")]
    Partial(&'static str),
    #[error("constructive and exhaustive routes disagree: {0}")]
    RouteDisagreement(String),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// A map from menus to one of their members.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChoiceFunction {
    map: BTreeMap<AltSet, AltId>,
}

impl ChoiceFunction {
    /// Maximization of `order` on every non-empty subset of the universe.
    pub fn from_order(universe: &Universe, order: &StrictOrder) -> Self {
        ChoiceFunction::from_fn(universe, |s| order.best(s))
    }

    pub fn from_fn(universe: &Universe, mut f: impl FnMut(AltSet) -> AltId) -> Self {
        let map = universe
            .all()
            .nonempty_subsets_by_size()
            .into_iter()
            .map(|s| (s, f(s)))
            .collect();
        ChoiceFunction { map }
    }

    pub fn get(&self, set: AltSet) -> Option<AltId> {
        self.map.get(&set).copied()
    }

    pub fn set(&mut self, set: AltSet, x: AltId) {
        self.map.insert(set, x);
    }

    pub fn iter(&self) -> impl Iterator<Item = (AltSet, AltId)> + '_ {
        self.map.iter().map(|(s, x)| (*s, *x))
    }

    fn is_total_on(&self, universe: &Universe) -> bool {
        universe
            .all()
            .subsets()
            .filter(|s| !s.is_empty())
            .all(|s| self.get(s).is_some_and(|x| s.contains(x)))
    }
}

/// A map from menus to non-empty sub-menus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChoiceCorrespondence {
    map: BTreeMap<AltSet, AltSet>,
}

impl ChoiceCorrespondence {
    pub fn from_fn(universe: &Universe, mut f: impl FnMut(AltSet) -> AltSet) -> Self {
        let map = universe
            .all()
            .nonempty_subsets_by_size()
            .into_iter()
            .map(|s| (s, f(s)))
            .collect();
        ChoiceCorrespondence { map }
    }

    pub fn get(&self, set: AltSet) -> Option<AltSet> {
        self.map.get(&set).copied()
    }

    pub fn set(&mut self, set: AltSet, chosen: AltSet) {
        self.map.insert(set, chosen);
    }

    pub fn iter(&self) -> impl Iterator<Item = (AltSet, AltSet)> + '_ {
        self.map.iter().map(|(s, c)| (*s, *c))
    }

    fn is_total_on(&self, universe: &Universe) -> bool {
        universe
            .all()
            .subsets()
            .filter(|s| !s.is_empty())
            .all(|s| self.get(s).is_some_and(|c| !c.is_empty() && c.is_subset(s)))
    }
}

/// A binary relation on X; `holds(x, y)` reads "x is at least as good as y"
/// for weak relations and "x is strictly better than y" for strict ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreferenceRelation {
    matrix: Vec<Vec<bool>>,
}

impl PreferenceRelation {
    pub fn empty(n: usize) -> Self {
        PreferenceRelation {
            matrix: vec![vec![false; n]; n],
        }
    }

    /// The strict order ranking `ranked` best first.
    pub fn from_ranking(ranked: &[AltId]) -> Self {
        let mut r = PreferenceRelation::empty(ranked.len());
        for (i, a) in ranked.iter().enumerate() {
            for b in &ranked[i + 1..] {
                r.matrix[a.index()][b.index()] = true;
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn holds(&self, x: AltId, y: AltId) -> bool {
        self.matrix[x.index()][y.index()]
    }

    fn put(&mut self, x: usize, y: usize, v: bool) {
        self.matrix[x][y] = v;
    }

    /// Every pair of distinct alternatives is related at least one way.
    pub fn is_complete(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[i][j] || self.matrix[j][i]))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                !self.matrix[i][j] || (0..n).all(|k| !self.matrix[j][k] || self.matrix[i][k])
            })
        })
    }

    /// No two distinct alternatives are related both ways.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| i == j || !(self.matrix[i][j] && self.matrix[j][i])))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size()).all(|i| !self.matrix[i][i])
    }

    pub fn is_strict_total_order(&self) -> bool {
        self.is_irreflexive()
            && self.is_complete()
            && self.is_transitive()
            && self.is_antisymmetric()
    }

    /// `{x in A | x R y for every other y in A}`.
    pub fn maximal(&self, set: AltSet) -> AltSet {
        set.iter()
            .filter(|&x| set.iter().all(|y| x == y || self.holds(x, y)))
            .collect()
    }

    /// Ranking of a strict total order, best first.
    pub fn ranking(&self) -> Vec<AltId> {
        let mut ids: Vec<AltId> = (0..self.size() as u16).map(AltId).collect();
        ids.sort_by_key(|x| {
            std::cmp::Reverse(
                (0..self.size())
                    .filter(|&j| self.matrix[x.index()][j])
                    .count(),
            )
        });
        ids
    }

    /// Indifference classes of a complete transitive relation, best first.
    pub fn levels(&self) -> Vec<Vec<AltId>> {
        let n = self.size();
        let mut ids: Vec<AltId> = (0..n as u16).map(AltId).collect();
        let below = |x: AltId| {
            (0..n)
                .filter(|&j| j != x.index() && self.matrix[x.index()][j])
                .count()
        };
        ids.sort_by_key(|x| std::cmp::Reverse(below(*x)));
        let mut levels: Vec<Vec<AltId>> = Vec::new();
        for x in ids {
            match levels.last_mut() {
                Some(lvl) if below(lvl[0]) == below(x) => lvl.push(x),
                _ => levels.push(vec![x]),
            }
        }
        levels
    }

    /// `x1 > x2 > x3` or `x1 ~ x2 > x3`.
    pub fn describe(&self, universe: &Universe) -> String {
        self.levels()
            .iter()
            .map(|lvl| lvl.iter().map(|x| universe.name(*x)).join(" ~ "))
            .join(" > ")
    }
}

/// The result of asking whether a relation rationalizes choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rationalization {
    pub relation: Option<PreferenceRelation>,
    /// Candidate relations examined by the exhaustive route.
    pub candidates_checked: usize,
}

impl Rationalization {
    pub fn found(&self) -> bool {
        self.relation.is_some()
    }
}

/// `c(A) = P(r(A))` for the canonical representation `r`. Under a guarantee
/// the canonical term is used if admitted, else the first admitted
/// representation in enumeration order.
pub fn induced_choice_function(p: &Procedure) -> Result<ChoiceFunction, RationalityError> {
    let schema = p.schema();
    if !analyze_schema(schema).representable {
        return Err(RationalityError::NotRepresentable(schema.name.clone()));
    }
    let universe = p.universe();
    let mut c = ChoiceFunction::default();
    for set in universe.all().nonempty_subsets_by_size() {
        let canonical = canonical_representation(schema, set)?;
        let x = if p.admits(&canonical) {
            p.choose(&canonical)
        } else {
            let budget = EnumerationBudget::for_menu_size(set.len());
            let mut found = None;
            for_each_representation(schema, set, &budget, p.resolved_guarantee(), |t| {
                found = Some(p.choose(t));
                ControlFlow::Break(())
            })?;
            found.ok_or_else(|| RationalityError::NoRepresentation(universe.format_set(set)))?
        };
        c.set(set, x);
    }
    Ok(c)
}

/// `C(A) = {P(a) | a represents A within the budget}`, over admitted terms.
pub fn induced_correspondence(
    p: &Procedure,
    budget: &EnumerationBudget,
) -> Result<ChoiceCorrespondence, RationalityError> {
    let universe = p.universe();
    let mut cc = ChoiceCorrespondence::default();
    for set in universe.all().nonempty_subsets_by_size() {
        let mut chosen = AltSet::EMPTY;
        for_each_representation(p.schema(), set, budget, p.resolved_guarantee(), |t| {
            chosen.insert(p.choose(t));
            ControlFlow::Continue(())
        })?;
        if chosen.is_empty() {
            return Err(RationalityError::NoRepresentation(universe.format_set(set)));
        }
        cc.set(set, chosen);
    }
    Ok(cc)
}

/// Revealed order from binary menus, accepted iff it is a strict total order
/// whose maximization reproduces `c` everywhere.
pub fn rationalize_choice_function_constructive(
    c: &ChoiceFunction,
    universe: &Universe,
) -> Option<PreferenceRelation> {
    let n = universe.len();
    let mut r = PreferenceRelation::empty(n);
    for (x, y) in universe.ids().tuple_combinations() {
        let pick = c.get(AltSet::singleton(x).with(y))?;
        if pick == x {
            r.put(x.index(), y.index(), true);
        } else {
            r.put(y.index(), x.index(), true);
        }
    }
    if !r.is_strict_total_order() {
        return None;
    }
    let reproduces = c.iter().all(|(s, x)| r.maximal(s) == AltSet::singleton(x));
    reproduces.then_some(r)
}

/// Every strict order whose maximization reproduces `c`, by trying all `n!`.
pub fn rationalize_choice_function_exhaustive(
    c: &ChoiceFunction,
    universe: &Universe,
) -> Result<(Vec<PreferenceRelation>, usize), RationalityError> {
    let n = universe.len();
    if n > MAX_FUNCTION_ORACLE {
        return Err(RationalityError::TooLarge {
            size: n,
            limit: MAX_FUNCTION_ORACLE,
        });
    }
    let mut hits = Vec::new();
    let mut checked = 0;
    for perm in universe.ids().permutations(n) {
        checked += 1;
        let order = StrictOrder::from_ranking(perm.clone());
        if c.iter().all(|(s, x)| order.best(s) == x) {
            hits.push(PreferenceRelation::from_ranking(&perm));
        }
    }
    Ok((hits, checked))
}

/// Strict-order rationalization, cross-checked between both routes.
pub fn rationalize_choice_function(
    c: &ChoiceFunction,
    universe: &Universe,
) -> Result<Rationalization, RationalityError> {
    if !c.is_total_on(universe) {
        return Err(RationalityError::Partial("choice function"));
    }
    let constructive = rationalize_choice_function_constructive(c, universe);
    let (hits, checked) = rationalize_choice_function_exhaustive(c, universe)?;
    agree(constructive, hits, checked, "strict order")
}

/// Revealed weak relation from binary menus, accepted iff complete,
/// transitive, and its maximal elements reproduce `cc` everywhere.
pub fn rationalize_correspondence_constructive(
    cc: &ChoiceCorrespondence,
    universe: &Universe,
) -> Option<PreferenceRelation> {
    let n = universe.len();
    let mut r = PreferenceRelation::empty(n);
    for i in 0..n {
        r.put(i, i, true);
    }
    for (x, y) in universe.ids().tuple_combinations() {
        let chosen = cc.get(AltSet::singleton(x).with(y))?;
        r.put(x.index(), y.index(), chosen.contains(x));
        r.put(y.index(), x.index(), chosen.contains(y));
    }
    if !(r.is_complete() && r.is_transitive()) {
        return None;
    }
    let reproduces = cc.iter().all(|(s, chosen)| r.maximal(s) == chosen);
    reproduces.then_some(r)
}

/// Every complete transitive relation reproducing `cc`, by trying all
/// `3^(n choose 2)` complete relations.
pub fn rationalize_correspondence_exhaustive(
    cc: &ChoiceCorrespondence,
    universe: &Universe,
) -> Result<(Vec<PreferenceRelation>, usize), RationalityError> {
    let n = universe.len();
    if n > MAX_CORRESPONDENCE_ORACLE {
        return Err(RationalityError::TooLarge {
            size: n,
            limit: MAX_CORRESPONDENCE_ORACLE,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut hits = Vec::new();
    let mut checked = 0;
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut r = PreferenceRelation::empty(n);
        for i in 0..n {
            r.put(i, i, true);
        }
        let mut rest = code;
        for &(i, j) in &pairs {
            let (ij, ji) = match rest % 3 {
                0 => (true, false),
                1 => (false, true),
                _ => (true, true),
            };
            rest /= 3;
            r.put(i, j, ij);
            r.put(j, i, ji);
        }
        if !r.is_transitive() {
            continue;
        }
        checked += 1;
        if cc.iter().all(|(s, chosen)| r.maximal(s) == chosen) {
            hits.push(r);
        }
    }
    Ok((hits, checked))
}

/// Weak-order rationalization, cross-checked between both routes.
pub fn rationalize_correspondence(
    cc: &ChoiceCorrespondence,
    universe: &Universe,
) -> Result<Rationalization, RationalityError> {
    if !cc.is_total_on(universe) {
        return Err(RationalityError::Partial("choice correspondence"));
    }
    let constructive = rationalize_correspondence_constructive(cc, universe);
    let (hits, checked) = rationalize_correspondence_exhaustive(cc, universe)?;
    agree(constructive, hits, checked, "weak order")
}

fn agree(
    constructive: Option<PreferenceRelation>,
    hits: Vec<PreferenceRelation>,
    checked: usize,
    what: &str,
) -> Result<Rationalization, RationalityError> {
    match (&constructive, hits.as_slice()) {
        (None, []) => {}
        (Some(r), [h]) if r == h => {}
        _ => {
            return Err(RationalityError::RouteDisagreement(format!(
                "{what}: constructive route {}, exhaustive route found {} relation(s)",
                if constructive.is_some() {
                    "accepts"
                } else {
                    "rejects"
                },
                hits.len()
            )))
        }
    }
    Ok(Rationalization {
        relation: constructive,
        candidates_checked: checked,
    })
}

/// Both routes to each rationalizability question, with their verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct RationalityVerdict {
    /// Extensionality as reported by the EXT checker.
    pub ext: Verdict,
    /// The procedure agrees with its induced choice function on every enumerated term.
    pub implements_choice_function: bool,
    pub alpha_e: Verdict,
    pub gamma_e: Verdict,
    /// EXT and alphaE both hold.
    pub cf_by_axioms: bool,
    /// The choice function oracle found a strict order and the procedure implements it.
    pub cf_by_oracle: bool,
    pub cf_relation: Option<PreferenceRelation>,
    /// alphaE and gammaE both hold.
    pub cc_by_axioms: bool,
    pub cc_by_oracle: bool,
    pub cc_relation: Option<PreferenceRelation>,
    #[serde(skip)]
    pub correspondence: Vec<(AltSet, AltSet)>,
    pub budget: CheckBudget,
}

impl RationalityVerdict {
    pub fn cf_rationalizable(&self) -> bool {
        self.cf_by_axioms
    }

    pub fn cc_rationalizable(&self) -> bool {
        self.cc_by_axioms
    }
}

/// Decides choice-function and correspondence rationalizability by the
/// axioms and by the oracles. Existential clauses are searched at the
/// universal budget so that both routes see the same menus.
pub fn classify_procedure(
    p: &Procedure,
    budget: &CheckBudget,
) -> Result<RationalityVerdict, RationalityError> {
    let budget = CheckBudget {
        extra_leaves: 0,
        ..budget.clone()
    };
    let universe = p.universe();
    let checker = Checker::new(p, &budget);
    let ext = checker.check(Property::Ext)?.verdict;
    let alpha_e = checker.check(Property::AlphaE)?.verdict;
    let gamma_e = checker.check(Property::GammaE)?.verdict;

    let c = induced_choice_function(p)?;
    let implements_choice_function = checker.implements(&c)?;
    let cf = rationalize_choice_function(&c, universe)?;
    let cf_by_oracle = implements_choice_function && cf.found();
    let cf_by_axioms = ext == Verdict::HoldsUpToBudget && alpha_e == Verdict::HoldsUpToBudget;
    if (ext == Verdict::HoldsUpToBudget) != implements_choice_function {
        return Err(RationalityError::RouteDisagreement(format!(
            "EXT is {ext:?} but the induced choice function check says {implements_choice_function}"
        )));
    }
    if cf_by_axioms != cf_by_oracle {
        return Err(RationalityError::RouteDisagreement(format!(
            "choice function: axioms say {cf_by_axioms}, oracle says {cf_by_oracle}"
        )));
    }

    let cc_map = checker.universal_correspondence(universe)?;
    let cc = rationalize_correspondence(&cc_map, universe)?;
    let cc_by_axioms = alpha_e == Verdict::HoldsUpToBudget && gamma_e == Verdict::HoldsUpToBudget;
    if cc_by_axioms != cc.found() {
        return Err(RationalityError::RouteDisagreement(format!(
            "correspondence: axioms say {cc_by_axioms}, oracle says {}",
            cc.found()
        )));
    }
    Ok(RationalityVerdict {
        ext,
        implements_choice_function,
        alpha_e,
        gamma_e,
        cf_by_axioms,
        cf_by_oracle,
        cf_relation: cf.relation.filter(|_| cf_by_oracle),
        cc_by_axioms,
        cc_by_oracle: cc.found(),
        cc_relation: cc.relation,
        correspondence: cc_map.iter().collect(),
        budget,
    })
}
