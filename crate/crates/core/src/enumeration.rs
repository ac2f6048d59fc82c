//! Bounded exhaustive generation of terms.
//!
//! Terms are produced shape first: every constructor skeleton with a given
//! number of value slots, then every assignment of alternatives to those slots
//! in left-to-right order. Output order is leaf count, then shape (depth, then
//! preorder constructor indices), then assignment (lexicographic by
//! declaration index). Generation is duplicate-free by construction.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::guarantee::ResolvedGuarantee;
use crate::schema::{AdtSchema, SlotKind};
use crate::term::{Child, Term};
use crate::universe::{AltId, AltSet};

pub const DEFAULT_MAX_TERMS: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    /// Cap on the number of value slots in a term.
    pub max_leaves: usize,
    /// When set, a menu of size k is represented with at most `k + slack` leaves.
    pub slack: Option<usize>,
    /// Safety cap on the number of terms one enumeration may visit.
    pub max_terms: usize,
    /// Cap on term depth; only matters for grammars with unary recursive
    /// constructors, whose shapes are otherwise unbounded.
    pub max_depth: Option<usize>,
    /// Drop structurally repeated terms.
    pub dedup: bool,
}

impl EnumerationBudget {
    pub fn new(max_leaves: usize) -> Self {
        EnumerationBudget {
            max_leaves,
            slack: None,
            max_terms: DEFAULT_MAX_TERMS,
            max_depth: None,
            dedup: false,
        }
    }

    /// The default budget for a menu of `size` alternatives: `size + 2` leaves.
    pub fn for_menu_size(size: usize) -> Self {
        EnumerationBudget::new(size + 2)
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = Some(slack);
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    pub fn with_dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }

    /// Leaf cap for representations of a menu of `menu_size` alternatives.
    pub fn leaf_cap(&self, menu_size: usize) -> usize {
        match self.slack {
            Some(s) => self.max_leaves.min(menu_size + s),
            None => self.max_leaves,
        }
    }

    /// The same budget with `extra` more leaves.
    pub fn widened(&self, extra: usize) -> Self {
        let mut b = *self;
        b.max_leaves += extra;
        if let Some(s) = b.slack.as_mut() {
            *s += extra;
        }
        if let Some(d) = b.max_depth.as_mut() {
            *d += extra;
        }
        b
    }

    pub fn depth_cap(&self) -> usize {
        self.max_depth.unwrap_or(2 * self.max_leaves + 2)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EnumerationError {
    #[error("cannot represent a menu of {menu_size} alternatives with at most {max_leaves} leaves in schema `{schema}`")]
    Unsatisfiable {
        schema: String,
        menu_size: usize,
        max_leaves: usize,
    },
    #[error("enumeration exceeded the cap of {0} terms")]
    TermCap(usize),
    #[error("cannot enumerate representations of the empty menu")]
    EmptyMenu,
}

/// A constructor skeleton with unfilled value slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    /// Template term; its value slots hold placeholders.
    pub template: Term,
    pub leaf_count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Level {
    Outer,
    Inner,
}

/// Memoized skeleton generation for one schema.
pub struct ShapeGenerator<'a> {
    schema: &'a AdtSchema,
    depth_cap: usize,
    memo: HashMap<(Level, usize, usize), Rc<Vec<Term>>>,
    sorted: HashMap<usize, Rc<Vec<Shape>>>,
}

impl<'a> ShapeGenerator<'a> {
    pub fn new(schema: &'a AdtSchema, depth_cap: usize) -> Self {
        ShapeGenerator {
            schema,
            depth_cap,
            memo: HashMap::new(),
            sorted: HashMap::new(),
        }
    }

    /// All skeletons with exactly `leaf_count` value slots, in output order.
    pub fn shapes(&mut self, leaf_count: usize) -> Rc<Vec<Shape>> {
        if let Some(s) = self.sorted.get(&leaf_count) {
            return s.clone();
        }
        let raw = self.raw(Level::Outer, leaf_count, self.depth_cap);
        let mut keyed: Vec<(usize, Vec<u16>, Term)> = raw
            .iter()
            .map(|t| (t.depth(), t.skeleton(), t.clone()))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let shapes = Rc::new(
            keyed
                .into_iter()
                .map(|(_, _, template)| Shape {
                    template,
                    leaf_count,
                })
                .collect::<Vec<_>>(),
        );
        self.sorted.insert(leaf_count, shapes.clone());
        shapes
    }

    fn level_schema(&self, level: Level) -> &'a AdtSchema {
        match level {
            Level::Outer => self.schema,
            Level::Inner => self.schema.inner.as_deref().expect("inner schema"),
        }
    }

    fn raw(&mut self, level: Level, leaves: usize, depth: usize) -> Rc<Vec<Term>> {
        if leaves == 0 || depth == 0 {
            return Rc::new(Vec::new());
        }
        if let Some(v) = self.memo.get(&(level, leaves, depth)) {
            return v.clone();
        }
        let schema = self.level_schema(level);
        let nested = level == Level::Outer && schema.inner.is_some();
        let mut out = Vec::new();
        for (ci, c) in schema.constructors.iter().enumerate() {
            if c.slots.len() > leaves {
                continue;
            }
            let mut partial: Vec<Child> = Vec::with_capacity(c.slots.len());
            self.distribute(
                level,
                nested,
                &c.slots,
                leaves,
                depth - 1,
                &mut partial,
                &mut |children| out.push(Term::new(ci as u16, children.to_vec())),
            );
        }
        let rc = Rc::new(out);
        self.memo.insert((level, leaves, depth), rc.clone());
        rc
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &mut self,
        level: Level,
        nested: bool,
        slots: &[SlotKind],
        remaining: usize,
        child_depth: usize,
        partial: &mut Vec<Child>,
        emit: &mut dyn FnMut(&[Child]),
    ) {
        let Some((slot, rest)) = slots.split_first() else {
            if remaining == 0 {
                emit(partial);
            }
            return;
        };
        // Every later slot needs at least one leaf.
        let max_here = remaining.saturating_sub(rest.len());
        match slot {
            SlotKind::Value if !nested => {
                if max_here >= 1 {
                    partial.push(Child::Value(AltId(0)));
                    self.distribute(
                        level,
                        nested,
                        rest,
                        remaining - 1,
                        child_depth,
                        partial,
                        emit,
                    );
                    partial.pop();
                }
            }
            SlotKind::Value => {
                for m in 1..=max_here {
                    let subs = self.raw(Level::Inner, m, child_depth);
                    for s in subs.iter() {
                        partial.push(Child::Inner(s.clone()));
                        self.distribute(
                            level,
                            nested,
                            rest,
                            remaining - m,
                            child_depth,
                            partial,
                            emit,
                        );
                        partial.pop();
                    }
                }
            }
            SlotKind::Recursive => {
                for m in 1..=max_here {
                    let subs = self.raw(level, m, child_depth);
                    for s in subs.iter() {
                        partial.push(Child::Sub(s.clone()));
                        self.distribute(
                            level,
                            nested,
                            rest,
                            remaining - m,
                            child_depth,
                            partial,
                            emit,
                        );
                        partial.pop();
                    }
                }
            }
        }
    }
}

/// All skeletons with exactly `leaf_count` value slots.
pub fn enumerate_shapes(
    schema: &AdtSchema,
    leaf_count: usize,
    budget: &EnumerationBudget,
) -> Vec<Shape> {
    if leaf_count == 0 {
        return Vec::new();
    }
    ShapeGenerator::new(schema, budget.depth_cap())
        .shapes(leaf_count)
        .as_ref()
        .clone()
}

/// Which leaf assignments to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Leaves drawn from the set and covering all of it.
    Exactly(AltSet),
    /// Leaves drawn from the set, any extension.
    Within(AltSet),
}

impl Domain {
    fn pool(self) -> AltSet {
        match self {
            Domain::Exactly(s) | Domain::Within(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub terms: usize,
    pub shapes: usize,
    pub max_leaves: usize,
}

/// Term generator shared by the enumeration entry points and the checkers.
pub struct TermEnumerator<'a> {
    schema: &'a AdtSchema,
    shapes: ShapeGenerator<'a>,
    guarantee: Option<&'a ResolvedGuarantee>,
    max_terms: usize,
    dedup: bool,
    slack: Option<usize>,
}

impl<'a> TermEnumerator<'a> {
    pub fn new(schema: &'a AdtSchema, budget: &EnumerationBudget) -> Self {
        TermEnumerator {
            schema,
            shapes: ShapeGenerator::new(schema, budget.depth_cap()),
            guarantee: None,
            max_terms: budget.max_terms,
            dedup: budget.dedup,
            slack: budget.slack,
        }
    }

    pub fn with_guarantee(mut self, g: Option<&'a ResolvedGuarantee>) -> Self {
        self.guarantee = g;
        self
    }

    pub fn schema(&self) -> &'a AdtSchema {
        self.schema
    }

    /// Smallest leaf count at least `min` for which a shape exists, up to `max`.
    pub fn first_feasible(&mut self, min: usize, max: usize) -> Option<usize> {
        (min.max(1)..=max).find(|&n| !self.shapes.shapes(n).is_empty())
    }

    /// Visits every term of `domain` with between 1 and `max_leaves` leaves.
    /// With a slack budget, terms with more than `|extension| + slack` leaves
    /// are skipped.
    pub fn for_each<F>(
        &mut self,
        domain: Domain,
        max_leaves: usize,
        mut visit: F,
    ) -> Result<EnumerationStats, EnumerationError>
    where
        F: FnMut(&Term) -> ControlFlow<()>,
    {
        let pool: Vec<AltId> = domain.pool().iter().collect();
        let target = match domain {
            Domain::Exactly(s) => Some(s),
            Domain::Within(_) => None,
        };
        let min_leaves = target.map_or(1, |t| t.len().max(1));
        let mut stats = EnumerationStats {
            max_leaves,
            ..Default::default()
        };
        let mut seen: HashSet<Term> = HashSet::new();
        let mut values: Vec<AltId> = Vec::with_capacity(max_leaves);
        for n in min_leaves..=max_leaves {
            let shapes = self.shapes.shapes(n);
            for shape in shapes.iter() {
                stats.shapes += 1;
                let mut work = shape.template.clone();
                values.clear();
                let mut ctx = AssignCtx {
                    pool: &pool,
                    target,
                    guarantee: self.guarantee,
                    leaf_count: n,
                    min_distinct: self.slack.map_or(0, |s| n.saturating_sub(s)),
                    max_terms: self.max_terms,
                    dedup: self.dedup,
                    seen: &mut seen,
                    stats: &mut stats,
                    work: &mut work,
                };
                if let Some(flow) = ctx.assign(&mut values, AltSet::EMPTY, &mut visit)? {
                    if flow.is_break() {
                        return Ok(stats);
                    }
                }
            }
        }
        Ok(stats)
    }
}

struct AssignCtx<'c> {
    pool: &'c [AltId],
    target: Option<AltSet>,
    guarantee: Option<&'c ResolvedGuarantee>,
    leaf_count: usize,
    min_distinct: usize,
    max_terms: usize,
    dedup: bool,
    seen: &'c mut HashSet<Term>,
    stats: &'c mut EnumerationStats,
    work: &'c mut Term,
}

impl AssignCtx<'_> {
    fn assign<F>(
        &mut self,
        values: &mut Vec<AltId>,
        used: AltSet,
        visit: &mut F,
    ) -> Result<Option<ControlFlow<()>>, EnumerationError>
    where
        F: FnMut(&Term) -> ControlFlow<()>,
    {
        let pos = values.len();
        if pos == self.leaf_count {
            self.work.fill_leaves(values);
            if self.dedup && !self.seen.insert(self.work.clone()) {
                return Ok(None);
            }
            self.stats.terms += 1;
            if self.stats.terms > self.max_terms {
                return Err(EnumerationError::TermCap(self.max_terms));
            }
            let flow = visit(self.work);
            return Ok(flow.is_break().then_some(flow));
        }
        let left_after = self.leaf_count - pos - 1;
        for &x in self.pool {
            let now = used.with(x);
            if let Some(t) = self.target {
                if t.intersection(AltSet(!now.0)).len() > left_after {
                    continue;
                }
            }
            if now.len() + left_after < self.min_distinct {
                continue;
            }
            if let Some(g) = self.guarantee {
                if !g.admits_next(values.last().copied(), used, x) {
                    continue;
                }
            }
            values.push(x);
            let r = self.assign(values, now, visit)?;
            values.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
}

/// All terms with extension exactly `set`, within the budget.
pub fn enumerate_representations(
    schema: &AdtSchema,
    set: AltSet,
    budget: &EnumerationBudget,
) -> Result<Vec<Term>, EnumerationError> {
    enumerate_representations_with(schema, set, budget, None)
}

pub fn enumerate_representations_with(
    schema: &AdtSchema,
    set: AltSet,
    budget: &EnumerationBudget,
    guarantee: Option<&ResolvedGuarantee>,
) -> Result<Vec<Term>, EnumerationError> {
    let mut out = Vec::new();
    for_each_representation(schema, set, budget, guarantee, |t| {
        out.push(t.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Streams the terms with extension exactly `set` to `visit`.
pub fn for_each_representation<F>(
    schema: &AdtSchema,
    set: AltSet,
    budget: &EnumerationBudget,
    guarantee: Option<&ResolvedGuarantee>,
    visit: F,
) -> Result<EnumerationStats, EnumerationError>
where
    F: FnMut(&Term) -> ControlFlow<()>,
{
    if set.is_empty() {
        return Err(EnumerationError::EmptyMenu);
    }
    let cap = budget.leaf_cap(set.len());
    let mut e = TermEnumerator::new(schema, budget).with_guarantee(guarantee);
    if e.first_feasible(set.len(), cap).is_none() {
        return Err(EnumerationError::Unsatisfiable {
            schema: schema.name.clone(),
            menu_size: set.len(),
            max_leaves: cap,
        });
    }
    e.for_each(Domain::Exactly(set), cap, visit)
}

/// Number of representations of `set` per leaf count.
pub fn count_representations(
    schema: &AdtSchema,
    set: AltSet,
    budget: &EnumerationBudget,
) -> Result<BTreeMap<usize, u64>, EnumerationError> {
    let mut counts = BTreeMap::new();
    for_each_representation(schema, set, budget, None, |t| {
        *counts.entry(t.leaf_count()).or_insert(0) += 1;
        ControlFlow::Continue(())
    })?;
    Ok(counts)
}
