//! Represented decision problems: finite trees over a schema.

use std::fmt;

use thiserror::Error;

use crate::schema::{AdtSchema, SlotKind};
use crate::universe::{AltId, AltSet, Universe};

/// One argument of a constructor application.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    /// An alternative in a value slot.
    Value(AltId),
    /// A term of the inner schema in a value slot (nested schemas only).
    Inner(Term),
    /// A sub-term in a recursive slot.
    Sub(Term),
}

impl Child {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Child::Sub(t) | Child::Inner(t) => Some(t),
            Child::Value(_) => None,
        }
    }
}

/// A constructor (by declaration index) applied to its children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub ctor: u16,
    pub children: Vec<Child>,
}

#[derive(Debug, Error, PartialEq)]
pub enum TermError {
    #[error("unknown constructor `{name}` for schema `{schema}`")]
    UnknownConstructor { name: String, schema: String },
    #[error("constructor `{name}` takes {expected} argument(s), found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {position} of `{name}` must be {expected}")]
    SlotKind {
        name: String,
        position: usize,
        expected: &'static str,
    },
    #[error("unknown alternative `{0}`")]
    UnknownAlt(String),
    #[error("s-expression syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("constructor index {0} out of range")]
    BadIndex(u16),
    #[error("alternative index {0} out of range")]
    BadAlt(u16),
}

#[derive(Debug, Error, PartialEq)]
pub enum SubstitutionError {
    #[error("schema `{0}` is not substitutable")]
    NotSubstitutable(String),
}

impl Term {
    pub fn new(ctor: u16, children: Vec<Child>) -> Self {
        Term { ctor, children }
    }

    /// The set of alternatives occurring in the term.
    pub fn extension(&self) -> AltSet {
        let mut acc = AltSet::EMPTY;
        self.collect_extension(&mut acc);
        acc
    }

    fn collect_extension(&self, acc: &mut AltSet) {
        for c in &self.children {
            match c {
                Child::Value(x) => acc.insert(*x),
                Child::Inner(t) | Child::Sub(t) => t.collect_extension(acc),
            }
        }
    }

    /// Leaf values in left-to-right order, descending into inner terms.
    pub fn leaves(&self) -> Vec<AltId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<AltId>) {
        for c in &self.children {
            match c {
                Child::Value(x) => out.push(*x),
                Child::Inner(t) | Child::Sub(t) => t.collect_leaves(out),
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.children
            .iter()
            .map(|c| match c {
                Child::Value(_) => 1,
                Child::Inner(t) | Child::Sub(t) => t.leaf_count(),
            })
            .sum()
    }

    /// Nodes on the longest root-to-leaf path, counting inner terms.
    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| c.as_term().map_or(0, Term::depth))
            .max()
            .unwrap_or(0)
    }

    /// Constructor skeleton in preorder, used to compare shapes.
    pub fn skeleton(&self) -> Vec<u16> {
        let mut out = Vec::new();
        self.collect_skeleton(&mut out);
        out
    }

    fn collect_skeleton(&self, out: &mut Vec<u16>) {
        out.push(self.ctor);
        for c in &self.children {
            match c {
                Child::Value(_) => out.push(u16::MAX),
                Child::Inner(t) | Child::Sub(t) => t.collect_skeleton(out),
            }
        }
    }

    /// Overwrites the leaves in preorder with `values`.
    pub fn fill_leaves(&mut self, values: &[AltId]) {
        let mut pos = 0;
        self.fill_from(values, &mut pos);
        debug_assert_eq!(pos, values.len());
    }

    fn fill_from(&mut self, values: &[AltId], pos: &mut usize) {
        for c in &mut self.children {
            match c {
                Child::Value(x) => {
                    *x = values[*pos];
                    *pos += 1;
                }
                Child::Inner(t) | Child::Sub(t) => t.fill_from(values, pos),
            }
        }
    }

    /// `self[y/x]`: every leaf equal to `x` becomes `y`; the shape is unchanged.
    pub fn rename_value(&self, x: AltId, y: AltId) -> Term {
        Term {
            ctor: self.ctor,
            children: self
                .children
                .iter()
                .map(|c| match c {
                    Child::Value(v) => Child::Value(if *v == x { y } else { *v }),
                    Child::Inner(t) => Child::Inner(t.rename_value(x, y)),
                    Child::Sub(t) => Child::Sub(t.rename_value(x, y)),
                })
                .collect(),
        }
    }

    /// Replaces the `slot`-th child, which must be a recursive sub-term.
    pub fn with_child(&self, slot: usize, sub: Term) -> Term {
        let mut t = self.clone();
        t.children[slot] = Child::Sub(sub);
        t
    }

    pub fn validate(&self, schema: &AdtSchema, universe: &Universe) -> Result<(), TermError> {
        let c = schema
            .constructors
            .get(self.ctor as usize)
            .ok_or(TermError::BadIndex(self.ctor))?;
        if c.slots.len() != self.children.len() {
            return Err(TermError::Arity {
                name: c.name.clone(),
                expected: c.slots.len(),
                found: self.children.len(),
            });
        }
        for (i, (slot, child)) in c.slots.iter().zip(&self.children).enumerate() {
            match (slot, child, schema.inner.as_deref()) {
                (SlotKind::Value, Child::Value(x), None) => {
                    if x.index() >= universe.len() {
                        return Err(TermError::BadAlt(x.0));
                    }
                }
                (SlotKind::Value, Child::Inner(t), Some(inner)) => t.validate(inner, universe)?,
                (SlotKind::Recursive, Child::Sub(t), _) => t.validate(schema, universe)?,
                (SlotKind::Value, _, inner) => {
                    return Err(TermError::SlotKind {
                        name: c.name.clone(),
                        position: i + 1,
                        expected: if inner.is_some() {
                            "a term of the inner schema"
                        } else {
                            "an alternative"
                        },
                    })
                }
                (SlotKind::Recursive, _, _) => {
                    return Err(TermError::SlotKind {
                        name: c.name.clone(),
                        position: i + 1,
                        expected: "a sub-term",
                    })
                }
            }
        }
        Ok(())
    }

    /// Parses an s-expression such as `(Cons x1 (Sing x2))`.
    pub fn parse(schema: &AdtSchema, universe: &Universe, text: &str) -> Result<Term, TermError> {
        parse_term(schema, universe, text)
    }

    pub fn display<'a>(&'a self, schema: &'a AdtSchema, universe: &'a Universe) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            schema,
            universe,
        }
    }

    pub fn to_sexpr(&self, schema: &AdtSchema, universe: &Universe) -> String {
        self.display(schema, universe).to_string()
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    schema: &'a AdtSchema,
    universe: &'a Universe,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}",
            self.schema.constructor(self.term.ctor as usize).name
        )?;
        for c in &self.term.children {
            match c {
                Child::Value(x) => write!(f, " {}", self.universe.name(*x))?,
                Child::Sub(t) => write!(f, " {}", t.display(self.schema, self.universe))?,
                Child::Inner(t) => {
                    let inner = self.schema.inner.as_deref().expect("inner schema");
                    write!(f, " {}", t.display(inner, self.universe))?
                }
            }
        }
        f.write_str(")")
    }
}

/// `a ~ b`: both terms have the same extension.
pub fn equivalent(a: &Term, b: &Term) -> bool {
    a.extension() == b.extension()
}

/// `a[b/x]` for substitutable schemas. Returns the result and whether `x` occurred.
pub fn substitute_subproblem(
    schema: &AdtSchema,
    a: &Term,
    x: AltId,
    b: &Term,
) -> Result<(Term, bool), SubstitutionError> {
    if !crate::schema::analyze_schema(schema).substitutable || schema.is_nested() {
        return Err(SubstitutionError::NotSubstitutable(schema.name.clone()));
    }
    let mut occurred = false;
    let t = substitute_rec(a, x, b, &mut occurred);
    Ok((t, occurred))
}

fn substitute_rec(a: &Term, x: AltId, b: &Term, occurred: &mut bool) -> Term {
    if let [Child::Value(v)] = a.children.as_slice() {
        if *v == x {
            *occurred = true;
            return b.clone();
        }
        return a.clone();
    }
    Term {
        ctor: a.ctor,
        children: a
            .children
            .iter()
            .map(|c| match c {
                Child::Sub(t) => Child::Sub(substitute_rec(t, x, b, occurred)),
                other => other.clone(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

struct SexpReader<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> SexpReader<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> TermError {
        TermError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn read(&mut self) -> Result<Sexp, TermError> {
        self.skip_ws();
        let start = self.pos;
        match self.text[self.pos..].chars().next() {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected `)`")),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.text[self.pos..].chars().next() {
                        None => return Err(self.err("unclosed `(`")),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let rest = &self.text[self.pos..];
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                self.pos += len;
                Ok(Sexp::Atom(rest[..len].to_string(), start))
            }
        }
    }
}

pub fn parse_term(schema: &AdtSchema, universe: &Universe, text: &str) -> Result<Term, TermError> {
    let mut reader = SexpReader { text, pos: 0 };
    let sexp = reader.read()?;
    reader.skip_ws();
    if reader.pos != text.len() {
        return Err(reader.err("trailing input after term"));
    }
    from_sexp(schema, universe, &sexp)
}

fn from_sexp(schema: &AdtSchema, universe: &Universe, sexp: &Sexp) -> Result<Term, TermError> {
    let (items, offset) = match sexp {
        Sexp::List(items, offset) => (items, *offset),
        Sexp::Atom(a, offset) => {
            return Err(TermError::Syntax {
                offset: *offset,
                message: format!("expected `(Constructor ...)`, found atom `{a}`"),
            })
        }
    };
    let Some((Sexp::Atom(head, _), args)) = items.split_first() else {
        return Err(TermError::Syntax {
            offset,
            message: "expected a constructor name after `(`".into(),
        });
    };
    let ctor = schema
        .find(head)
        .ok_or_else(|| TermError::UnknownConstructor {
            name: head.clone(),
            schema: schema.name.clone(),
        })?;
    let spec = schema.constructor(ctor);
    if spec.slots.len() != args.len() {
        return Err(TermError::Arity {
            name: head.clone(),
            expected: spec.slots.len(),
            found: args.len(),
        });
    }
    let mut children = Vec::with_capacity(args.len());
    for (i, (slot, arg)) in spec.slots.iter().zip(args).enumerate() {
        let child = match (slot, arg, schema.inner.as_deref()) {
            (SlotKind::Value, Sexp::Atom(id, _), None) => Child::Value(
                universe
                    .lookup(id)
                    .map_err(|_| TermError::UnknownAlt(id.clone()))?,
            ),
            (SlotKind::Value, Sexp::List(..), Some(inner)) => {
                Child::Inner(from_sexp(inner, universe, arg)?)
            }
            (SlotKind::Recursive, Sexp::List(..), _) => {
                Child::Sub(from_sexp(schema, universe, arg)?)
            }
            (SlotKind::Value, _, inner) => {
                return Err(TermError::SlotKind {
                    name: head.clone(),
                    position: i + 1,
                    expected: if inner.is_some() {
                        "a term of the inner schema"
                    } else {
                        "an alternative"
                    },
                })
            }
            (SlotKind::Recursive, Sexp::Atom(..), _) => {
                return Err(TermError::SlotKind {
                    name: head.clone(),
                    position: i + 1,
                    expected: "a sub-term",
                })
            }
        };
        children.push(child);
    }
    Ok(Term {
        ctor: ctor as u16,
        children,
    })
}

/// Builds a `List` term `[x1, ..., xn]` (Sing/Cons, in that declaration order).
pub fn list_term(values: &[AltId]) -> Term {
    let (last, init) = values.split_last().expect("non-empty list");
    let mut t = Term::new(0, vec![Child::Value(*last)]);
    for v in init.iter().rev() {
        t = Term::new(1, vec![Child::Value(*v), Child::Sub(t)]);
    }
    t
}
