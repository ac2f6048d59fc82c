//! Grammars for represented decision problems.
//!
//! A schema is a list of constructors; each constructor slot holds either an
//! alternative (`X`) or a sub-term of the same schema (`T`). The text format is
//! line oriented:
//!
//! ```text
//! schema List
//! Sing: X
//! Cons: X, T
//! ```
//!
//! `;` and `|` are accepted as line separators so a grammar fits on one line.
//! A file may hold several `schema` blocks; `inner <Name>` in the first block
//! makes the named block the schema of the values stored in `X` slots.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SlotKind {
    Value,
    Recursive,
}

impl SlotKind {
    fn symbol(self) -> &'static str {
        match self {
            SlotKind::Value => "X",
            SlotKind::Recursive => "T",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructorSpec {
    pub name: String,
    pub slots: Vec<SlotKind>,
}

impl ConstructorSpec {
    pub fn new(name: impl Into<String>, slots: Vec<SlotKind>) -> Self {
        ConstructorSpec {
            name: name.into(),
            slots,
        }
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn has_value_slot(&self) -> bool {
        self.slots.contains(&SlotKind::Value)
    }

    pub fn has_recursive_slot(&self) -> bool {
        self.slots.contains(&SlotKind::Recursive)
    }

    /// At least two slots, at least one of them recursive.
    pub fn is_expanding(&self) -> bool {
        self.arity() >= 2 && self.has_recursive_slot()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdtSchema {
    pub name: String,
    pub constructors: Vec<ConstructorSpec>,
    pub inner: Option<Box<AdtSchema>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate constructor `{name}`")]
    DuplicateConstructor { line: usize, name: String },
    #[error("line {line}: constructor `{name}` has no slots")]
    ZeroArity { line: usize, name: String },
    #[error("schema `{0}` has no constructors")]
    NoConstructors(String),
    #[error("inner schema `{0}` is not defined in this file")]
    UnknownInner(String),
    #[error("nesting deeper than two levels is not supported (`{0}` has its own inner schema)")]
    NestingTooDeep(String),
    #[error("duplicate constructor `{0}`")]
    Duplicate(String),
    #[error("constructor `{0}` has no slots")]
    EmptyConstructor(String),
}

impl AdtSchema {
    /// Builds a schema, checking constructor names and arities.
    pub fn new(
        name: impl Into<String>,
        constructors: Vec<ConstructorSpec>,
    ) -> Result<Self, SchemaError> {
        let name = name.into();
        if constructors.is_empty() {
            return Err(SchemaError::NoConstructors(name));
        }
        let mut seen = HashSet::new();
        for c in &constructors {
            if c.slots.is_empty() {
                return Err(SchemaError::EmptyConstructor(c.name.clone()));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(SchemaError::Duplicate(c.name.clone()));
            }
        }
        Ok(AdtSchema {
            name,
            constructors,
            inner: None,
        })
    }

    pub fn with_inner(mut self, inner: AdtSchema) -> Result<Self, SchemaError> {
        if inner.inner.is_some() {
            return Err(SchemaError::NestingTooDeep(inner.name));
        }
        self.inner = Some(Box::new(inner));
        Ok(self)
    }

    pub fn constructor(&self, index: usize) -> &ConstructorSpec {
        &self.constructors[index]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.constructors.iter().position(|c| c.name == name)
    }

    pub fn is_nested(&self) -> bool {
        self.inner.is_some()
    }

    /// Slot kinds per constructor, in declaration order.
    pub fn signature(&self) -> Vec<Vec<SlotKind>> {
        self.constructors.iter().map(|c| c.slots.clone()).collect()
    }

    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        parse_schema(text)
    }

    /// Canonical text form, accepted by [`parse_schema`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_block(&mut out);
        if let Some(inner) = &self.inner {
            out.push_str(&format!("inner {}\n", inner.name));
            inner.write_block(&mut out);
        }
        out
    }

    fn write_block(&self, out: &mut String) {
        out.push_str(&format!("schema {}\n", self.name));
        for c in &self.constructors {
            let slots: Vec<&str> = c.slots.iter().map(|s| s.symbol()).collect();
            out.push_str(&format!("{}: {}\n", c.name, slots.join(", ")));
        }
    }

    pub fn list() -> Self {
        use SlotKind::*;
        AdtSchema::new(
            "List",
            vec![
                ConstructorSpec::new("Sing", vec![Value]),
                ConstructorSpec::new("Cons", vec![Value, Recursive]),
            ],
        )
        .unwrap()
    }

    pub fn list2() -> Self {
        use SlotKind::*;
        AdtSchema::new(
            "List2",
            vec![
                ConstructorSpec::new("Sing2", vec![Value]),
                ConstructorSpec::new("Cat", vec![Recursive, Recursive]),
            ],
        )
        .unwrap()
    }

    /// Trees whose inner nodes have three children.
    pub fn tree() -> Self {
        use SlotKind::*;
        AdtSchema::new(
            "Tree",
            vec![
                ConstructorSpec::new("Leaf", vec![Value]),
                ConstructorSpec::new("Node", vec![Recursive, Recursive, Recursive]),
            ],
        )
        .unwrap()
    }

    /// Binary trees with a red test and a dry test. The first child of each
    /// test node holds the "no" branch, the second the "yes" branch.
    pub fn wines() -> Self {
        use SlotKind::*;
        AdtSchema::new(
            "Wines",
            vec![
                ConstructorSpec::new("Wine", vec![Value]),
                ConstructorSpec::new("Red", vec![Recursive, Recursive]),
                ConstructorSpec::new("Dry", vec![Recursive, Recursive]),
            ],
        )
        .unwrap()
    }

    /// A results page holding `items` alternatives.
    pub fn page(items: usize) -> Self {
        AdtSchema::new(
            "Page",
            vec![ConstructorSpec::new("P", vec![SlotKind::Value; items])],
        )
        .unwrap()
    }

    /// Search results: a first page followed by optional further results.
    pub fn search_result(items_per_page: usize) -> Self {
        use SlotKind::*;
        AdtSchema::new(
            "Result",
            vec![
                ConstructorSpec::new("R1", vec![Value]),
                ConstructorSpec::new("R2", vec![Value, Recursive]),
            ],
        )
        .unwrap()
        .with_inner(AdtSchema::page(items_per_page))
        .unwrap()
    }
}

impl fmt::Display for AdtSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

struct Block {
    name: String,
    line: usize,
    constructors: Vec<ConstructorSpec>,
    inner: Option<(String, usize)>,
}

/// Parses the schema file format. The first block is the returned schema.
pub fn parse_schema(text: &str) -> Result<AdtSchema, SchemaError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let raw = raw.split('#').next().unwrap_or("");
        for stmt in raw.split([';', '|']) {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            parse_statement(stmt, line_no, &mut blocks)?;
        }
    }
    if blocks.is_empty() {
        return Err(SchemaError::Syntax {
            line: 1,
            message: "expected `schema <Name>` header".into(),
        });
    }
    let mut built: Vec<(AdtSchema, Option<(String, usize)>)> = Vec::new();
    for b in blocks {
        if b.constructors.is_empty() {
            return Err(SchemaError::Syntax {
                line: b.line,
                message: format!("schema `{}` declares no constructors", b.name),
            });
        }
        built.push((
            AdtSchema {
                name: b.name,
                constructors: b.constructors,
                inner: None,
            },
            b.inner,
        ));
    }
    let (mut main, inner_ref) = built.remove(0);
    if let Some((inner_name, line)) = inner_ref {
        let (inner, nested_ref) = built
            .into_iter()
            .find(|(s, _)| s.name == inner_name)
            .ok_or_else(|| SchemaError::UnknownInner(inner_name.clone()))?;
        if nested_ref.is_some() {
            return Err(SchemaError::NestingTooDeep(inner.name));
        }
        if inner.name == main.name {
            return Err(SchemaError::Syntax {
                line,
                message: "a schema cannot be its own inner schema".into(),
            });
        }
        main.inner = Some(Box::new(inner));
    }
    Ok(main)
}

fn parse_statement(stmt: &str, line: usize, blocks: &mut Vec<Block>) -> Result<(), SchemaError> {
    let syntax = |message: String| SchemaError::Syntax { line, message };
    if let Some(rest) = stmt.strip_prefix("schema ") {
        let name = rest.trim();
        if !is_identifier(name) {
            return Err(syntax(format!("invalid schema name `{name}`")));
        }
        blocks.push(Block {
            name: name.to_string(),
            line,
            constructors: Vec::new(),
            inner: None,
        });
        return Ok(());
    }
    let Some(block) = blocks.last_mut() else {
        return Err(syntax("expected `schema <Name>` header".into()));
    };
    if let Some(rest) = stmt.strip_prefix("inner ") {
        let name = rest.trim();
        if !is_identifier(name) {
            return Err(syntax(format!("invalid inner schema name `{name}`")));
        }
        if block.inner.is_some() {
            return Err(syntax("duplicate `inner` declaration".into()));
        }
        block.inner = Some((name.to_string(), line));
        return Ok(());
    }
    let Some((name, slots)) = stmt.split_once(':') else {
        return Err(syntax(format!(
            "expected `<Constructor>: <slot>, ...`, found `{stmt}`"
        )));
    };
    let name = name.trim();
    if !is_identifier(name) {
        return Err(syntax(format!("invalid constructor name `{name}`")));
    }
    let slots = slots.trim();
    if slots.is_empty() {
        return Err(SchemaError::ZeroArity {
            line,
            name: name.to_string(),
        });
    }
    let mut kinds = Vec::new();
    for s in slots.split(',') {
        match s.trim() {
            "X" => kinds.push(SlotKind::Value),
            "T" => kinds.push(SlotKind::Recursive),
            "" => return Err(syntax(format!("empty slot in constructor `{name}`"))),
            other => {
                return Err(syntax(format!(
                    "unknown slot `{other}` in constructor `{name}` (expected X or T)"
                )))
            }
        }
    }
    if block.constructors.iter().any(|c| c.name == name) {
        return Err(SchemaError::DuplicateConstructor {
            line,
            name: name.to_string(),
        });
    }
    block.constructors.push(ConstructorSpec::new(name, kinds));
    Ok(())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Structural properties of a grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemaFlags {
    /// No constructor has a recursive slot.
    pub flat: bool,
    /// Some constructor has no recursive slot.
    pub productive: bool,
    /// Every constructor with a value slot is unary.
    pub substitutable: bool,
    /// Some constructor has two or more slots, at least one recursive.
    pub expandable: bool,
    /// Every finite non-empty menu has a representation.
    pub representable: bool,
}

impl SchemaFlags {
    /// The weaker "productive and non-flat" criterion.
    pub fn productive_non_flat(&self) -> bool {
        self.productive && !self.flat
    }

    /// Set when the weaker criterion accepts a grammar that cannot represent
    /// menus with more than one element.
    pub fn discrepancy_note(&self) -> Option<&'static str> {
        if self.productive_non_flat() && !self.expandable {
            Some(
                "productive and non-flat, but no constructor combines a recursive slot with \
                 another slot: every finite term has a one-element extension",
            )
        } else {
            None
        }
    }
}

pub fn analyze_schema(schema: &AdtSchema) -> SchemaFlags {
    let cs = &schema.constructors;
    let flat = cs.iter().all(|c| !c.has_recursive_slot());
    let productive = cs.iter().any(|c| !c.has_recursive_slot());
    let substitutable = cs.iter().all(|c| !c.has_value_slot() || c.arity() == 1);
    let expandable = cs.iter().any(ConstructorSpec::is_expanding);
    SchemaFlags {
        flat,
        productive,
        substitutable,
        expandable,
        representable: productive && expandable,
    }
}
