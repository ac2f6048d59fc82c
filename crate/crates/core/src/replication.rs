//! Scripted reproduction of the propositions and worked examples at desk scale.
//!
//! Every case records where its expectation comes from, what it observed, and
//! replayable s-expression artifacts. The suite runs the cases in parallel and
//! reports them sorted by id.

use std::sync::OnceLock;
use std::thread;

use serde::Serialize;

use crate::canonical::canonical_representation;
use crate::enumeration::EnumerationBudget;
use crate::guarantee::{Direction, Guarantee};
use crate::procedures::{instantiate_procedure, Procedure, ProcedureKind, ProcedureSpec};
use crate::properties::{CheckBudget, Checker, Property, PropertyReport, Verdict, Witness};
use crate::rationality::{classify_procedure, induced_correspondence, RationalityVerdict};
use crate::schema::{analyze_schema, parse_schema, AdtSchema};
use crate::term::{equivalent, list_term, parse_term, Child, Term};
use crate::universe::{AltId, AltSet, Element, Universe};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in a worked example.
    Stated,
    /// Computed independently of the code under test.
    Derived,
    /// Follows from the definitions.
    Trivial,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Setup {
    pub schema: String,
    pub universe: Vec<String>,
    pub procedures: Vec<String>,
    pub budget: Option<String>,
    pub guarantee: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub passed: bool,
    /// One line per observation, each ending in `ok` or `MISMATCH`.
    pub observed: Vec<String>,
    /// Replayable terms and witnesses.
    pub artifacts: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplicationCase {
    pub id: &'static str,
    pub title: &'static str,
    pub provenance: Provenance,
    pub setup: Setup,
    pub expectation: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplicationReport {
    pub cases: Vec<ReplicationCase>,
    pub passed: usize,
    pub failed: usize,
    /// Manifest ids without a case. Empty when coverage is complete.
    pub manifest_missing: Vec<&'static str>,
}

impl ReplicationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.manifest_missing.is_empty()
    }
}

/// Every claim the suite must cover.
pub const MANIFEST: &[&str] = &[
    "canonical-representation",
    "cor-ext-sind",
    "cor-intensional",
    "cor-sind-tiia",
    "ext-example",
    "prop-cfi-ext",
    "prop-choice-function-rational",
    "prop-ext-alleq",
    "prop-fac-gamma-i",
    "prop-fac-gamma-ii",
    "prop-fac-gamma-iii",
    "prop-ind-implies-alpha-i",
    "prop-ind-implies-alpha-ii",
    "prop-ind-implies-alpha-iii",
    "prop-ind-implies-alpha-iv",
    "prop-ind-implies-alpha-v",
    "prop-ind-implies-alpha-vi",
    "prop-ind-implies-alpha-vi-witness",
    "prop-pmax-gamma",
    "prop-sind-tiia-i",
    "prop-sind-tiia-ii",
    "representability",
    "satis1-ext",
    "satis2-ext",
    "search-first",
    "table-correspondence",
    "wine-checklist",
    "wine-nested",
];

/// Runs every case whose id contains `filter` (all cases when `None`).
pub fn run_replication_suite(filter: Option<&str>) -> ReplicationReport {
    let defs: Vec<&CaseDef> = CASES
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.contains(f)))
        .collect();
    let ctx = Ctx::default();
    let mut cases: Vec<ReplicationCase> = thread::scope(|s| {
        let handles: Vec<_> = defs
            .iter()
            .map(|def| {
                let ctx = &ctx;
                s.spawn(move || def.execute(ctx))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("replication case panicked"))
            .collect()
    });
    cases.sort_by_key(|c| c.id);
    let passed = cases.iter().filter(|c| c.outcome.passed).count();
    ReplicationReport {
        failed: cases.len() - passed,
        passed,
        cases,
        manifest_missing: manifest_missing(),
    }
}

/// Manifest ids that no case implements.
pub fn manifest_missing() -> Vec<&'static str> {
    MANIFEST
        .iter()
        .copied()
        .filter(|id| !CASES.iter().any(|c| c.id == *id))
        .collect()
}

pub fn case_ids() -> Vec<&'static str> {
    let mut ids: Vec<_> = CASES.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids
}

/// Shared inputs for the cases.
pub mod fixtures {
    use super::*;

    /// x, y, z with u(x) < 0.5 < u(y) < u(z) and rank decreasing in declaration order.
    pub fn xyz() -> Universe {
        Universe::new(vec![
            Element::new("x").num("utility", 0.2).num("rank", 3.0),
            Element::new("y").num("utility", 0.8).num("rank", 2.0),
            Element::new("z").num("utility", 0.9).num("rank", 1.0),
        ])
        .expect("valid universe")
    }

    pub fn list_budget() -> CheckBudget {
        CheckBudget::new(EnumerationBudget::new(6))
    }

    pub fn tree_budget() -> CheckBudget {
        CheckBudget::new(EnumerationBudget::new(6))
    }

    /// Large enough for the smaller-sub-problem bias to lose TIIA.
    pub fn deep_tree_budget() -> CheckBudget {
        CheckBudget::new(EnumerationBudget::new(7))
    }

    pub fn wine_budget() -> CheckBudget {
        CheckBudget::new(EnumerationBudget::new(5))
    }

    pub struct CatalogEntry {
        pub name: &'static str,
        pub spec: ProcedureSpec,
        pub schema: AdtSchema,
        pub budget: CheckBudget,
    }

    fn entry(
        name: &'static str,
        spec: ProcedureSpec,
        schema: AdtSchema,
        budget: CheckBudget,
    ) -> CatalogEntry {
        CatalogEntry {
            name,
            spec,
            schema,
            budget,
        }
    }

    pub fn bias_large() -> ProcedureSpec {
        ProcedureSpec::new(ProcedureKind::BiasLarge).param("n", 1)
    }

    pub fn bias_small() -> ProcedureSpec {
        ProcedureSpec::new(ProcedureKind::BiasSmall).param("n", 1)
    }

    pub fn sat_list() -> ProcedureSpec {
        ProcedureSpec::new(ProcedureKind::SatList)
            .param("u", "utility")
            .param("threshold", 0.5)
    }

    pub fn circular_max() -> ProcedureSpec {
        ProcedureSpec::new(ProcedureKind::CircularMax).param("cycle", "x,y,z")
    }

    /// Chooses x when it is first or last in a three-element list, y otherwise.
    pub fn position_table() -> ProcedureSpec {
        let mut spec = ProcedureSpec::new(ProcedureKind::Table);
        for (list, choice) in [
            ("x y z", "x"),
            ("x z y", "x"),
            ("y z x", "x"),
            ("z y x", "x"),
            ("y x z", "y"),
            ("z x y", "y"),
        ] {
            let v: Vec<&str> = list.split(' ').collect();
            spec = spec.param(
                "entry",
                format!(
                    "(Cons {} (Cons {} (Sing {}))) => {choice}",
                    v[0], v[1], v[2]
                ),
            );
        }
        spec.param("order", "rank")
    }

    /// The procedure catalog over [`xyz`], each with its budget.
    pub fn catalog() -> Vec<CatalogEntry> {
        use ProcedureKind as K;
        let (list, list2, tree) = (AdtSchema::list(), AdtSchema::list2(), AdtSchema::tree());
        vec![
            entry(
                "maximize",
                ProcedureSpec::new(K::Maximize).param("order", "utility"),
                list2.clone(),
                list_budget(),
            ),
            entry("sat_list", sat_list(), list.clone(), list_budget()),
            entry(
                "sat_list2",
                ProcedureSpec::new(K::SatList2)
                    .param("u", "utility")
                    .param("threshold", 0.5),
                list2.clone(),
                list_budget(),
            ),
            entry(
                "cond_sat",
                ProcedureSpec::new(K::CondSat).param("known", "x,y"),
                list2.clone(),
                list_budget(),
            ),
            entry(
                "default_large",
                ProcedureSpec::new(K::DefaultLarge)
                    .param("default", "y")
                    .param("n", 2)
                    .param("order", "utility"),
                list2.clone(),
                list_budget(),
            ),
            entry(
                "first_list",
                ProcedureSpec::new(K::FirstList),
                list.clone(),
                list_budget(),
            ),
            entry(
                "first_list2",
                ProcedureSpec::new(K::FirstList2),
                list2.clone(),
                list_budget(),
            ),
            entry(
                "second_list",
                ProcedureSpec::new(K::SecondList),
                list.clone(),
                list_budget(),
            ),
            entry(
                "second_list2",
                ProcedureSpec::new(K::SecondList2),
                list2.clone(),
                list_budget(),
            ),
            entry(
                "leftmost_tree",
                ProcedureSpec::new(K::LeftmostTree),
                tree.clone(),
                tree_budget(),
            ),
            entry("bias_large", bias_large(), tree.clone(), tree_budget()),
            entry("bias_small", bias_small(), tree.clone(), tree_budget()),
            entry(
                "avoid",
                ProcedureSpec::new(K::Avoid)
                    .param("avoid", "x")
                    .param("n", 2),
                list2,
                list_budget(),
            ),
            entry("circular_max", circular_max(), tree, tree_budget()),
            entry(
                "wine_checklist",
                ProcedureSpec::new(K::WineChecklist),
                AdtSchema::wines(),
                wine_budget(),
            ),
            entry("table", position_table(), list, list_budget()),
        ]
    }

    /// The circular-max tree `Node x x (Node y z z)`.
    pub const CIRCULAR_TREE: &str = "(Node (Leaf x) (Leaf x) (Node (Leaf y) (Leaf z) (Leaf z)))";

    pub fn leaf(x: AltId) -> Term {
        Term::new(0, vec![Child::Value(x)])
    }

    pub fn leftmost(t: &Term) -> AltId {
        t.leaves()[0]
    }

    /// A binary node padded to a ternary one with a copy of its left child's first leaf.
    pub fn padded(l: Term, r: Term) -> Term {
        let pad = leaf(leftmost(&l));
        Term::new(1, vec![Child::Sub(l), Child::Sub(r), Child::Sub(pad)])
    }

    pub fn uvwxyz() -> Universe {
        Universe::from_ids(&["x", "y", "z", "u", "v", "w"]).expect("valid universe")
    }

    /// `Node (Node x (Node y z)) (Node v (Node w (Node u x)))`, padded.
    /// Returns the tree and the index of the sub-problem `a'`.
    pub fn padded_bias_tree(u: &Universe) -> (Term, usize) {
        let id = |s: &str| leaf(u.lookup(s).expect("known alternative"));
        let left = padded(id("x"), padded(id("y"), id("z")));
        let right = padded(id("v"), padded(id("w"), padded(id("u"), id("x"))));
        (padded(left, right), 1)
    }

    /// Wines with price, colour and dryness.
    pub fn wine_cellar() -> Universe {
        let w = |id: &str, price: f64, red: bool, dry: bool| {
            Element::new(id)
                .num("price", price)
                .flag("red", red)
                .flag("dry", dry)
        };
        Universe::new(vec![
            w("riesling", 14.0, false, false),
            w("moscato", 9.0, false, false),
            w("chablis", 22.0, false, true),
            w("lambrusco", 11.0, true, false),
            w("brachetto", 8.0, true, false),
            w("zinfandel", 19.0, true, false),
            w("barolo", 45.0, true, true),
            w("rioja", 17.0, true, true),
        ])
        .expect("valid universe")
    }

    pub fn nested_wines() -> AdtSchema {
        parse_schema("schema Wines; Wine: X; Red: T, T; Dry: T, T; inner List\nschema List; Sing: X; Cons: X, T")
            .expect("valid schema")
    }

    /// Red and dry tests over price-sorted lists; the first child of a test is the "no" branch.
    pub const WINE_TERM: &str = "(Red \
        (Dry (Wine (Cons moscato (Sing riesling))) (Wine (Sing chablis))) \
        (Dry (Wine (Cons brachetto (Cons lambrusco (Sing zinfandel)))) (Wine (Cons rioja (Sing barolo)))))";

    /// Items 1 to 20 with rank decreasing along the results.
    pub fn search_items(n: usize) -> Universe {
        Universe::new(
            (1..=n)
                .map(|i| Element::new(format!("i{i}")).num("rank", (n + 1 - i) as f64))
                .collect(),
        )
        .expect("valid universe")
    }

    /// `R2 p1 (R1 p2)` with pages of ten items.
    pub fn two_page_result() -> String {
        let page = |from: usize| {
            let items: Vec<String> = (from..from + 10).map(|i| format!("i{i}")).collect();
            format!("(P {})", items.join(" "))
        };
        format!("(R2 {} (R1 {}))", page(1), page(11))
    }
}

use fixtures::*;

/// Verdicts and classification of one catalog entry.
pub struct CatalogRow {
    pub name: &'static str,
    pub procedure: Procedure,
    pub budget: CheckBudget,
    pub reports: Vec<(Property, Result<PropertyReport, String>)>,
    pub classify: Result<RationalityVerdict, String>,
}

impl CatalogRow {
    pub fn verdict(&self, p: Property) -> Option<Verdict> {
        self.reports
            .iter()
            .find(|(q, _)| *q == p)
            .and_then(|(_, r)| r.as_ref().ok())
            .map(|r| r.verdict)
    }

    pub fn holds(&self, p: Property) -> bool {
        self.verdict(p) == Some(Verdict::HoldsUpToBudget)
    }

    pub fn report(&self, p: Property) -> Option<&PropertyReport> {
        self.reports
            .iter()
            .find(|(q, _)| *q == p)
            .and_then(|(_, r)| r.as_ref().ok())
    }

    /// `EXT=Hold INT=Fals ...` with `n/a` for checks that do not apply.
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .reports
            .iter()
            .map(|(p, r)| {
                format!(
                    "{}={}",
                    p.name(),
                    r.as_ref().map_or("n/a", |r| short(r.verdict))
                )
            })
            .collect();
        match &self.classify {
            Ok(v) => parts.push(format!(
                "CF={} CC={}",
                v.cf_rationalizable(),
                v.cc_rationalizable()
            )),
            Err(e) => parts.push(format!("classify error: {e}")),
        }
        format!("{}: {}", self.name, parts.join(" "))
    }
}

pub fn short(v: Verdict) -> &'static str {
    match v {
        Verdict::Falsified => "falsified",
        Verdict::HoldsUpToBudget => "holds",
        Verdict::NoWitnessWithinBudget => "no-witness",
    }
}

/// Checks every property and classifies one procedure.
pub fn evaluate(name: &'static str, p: Procedure, budget: &CheckBudget) -> CatalogRow {
    let checker = Checker::new(&p, budget);
    let reports = Property::ALL
        .iter()
        .map(|&prop| (prop, checker.check(prop).map_err(|e| e.to_string())))
        .collect();
    let classify = classify_procedure(&p, budget).map_err(|e| e.to_string());
    drop(checker);
    CatalogRow {
        name,
        procedure: p,
        budget: budget.clone(),
        reports,
        classify,
    }
}

/// Evaluates the whole catalog, one thread per entry.
pub fn catalog_matrix(universe: &Universe) -> Vec<CatalogRow> {
    let entries = catalog();
    thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| {
                s.spawn(move || {
                    let p = instantiate_procedure(&e.spec, universe, &e.schema)
                        .expect("catalog procedure");
                    evaluate(e.name, p, &e.budget)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("catalog evaluation panicked"))
            .collect()
    })
}

#[derive(Default)]
struct Ctx {
    matrix: OnceLock<(Universe, Vec<CatalogRow>)>,
}

impl Ctx {
    fn matrix(&self) -> &[CatalogRow] {
        &self
            .matrix
            .get_or_init(|| {
                let u = xyz();
                let rows = catalog_matrix(&u);
                (u, rows)
            })
            .1
    }

    fn row(&self, name: &str) -> &CatalogRow {
        self.matrix()
            .iter()
            .find(|r| r.name == name)
            .expect("catalog entry")
    }
}

/// Accumulates observations for one case.
struct Run {
    setup: Setup,
    passed: bool,
    observed: Vec<String>,
    artifacts: Vec<String>,
    notes: Vec<String>,
}

impl Run {
    fn new(setup: Setup) -> Self {
        Run {
            setup,
            passed: true,
            observed: Vec::new(),
            artifacts: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        self.passed &= ok;
        self.observed.push(format!(
            "{}: {}",
            what.into(),
            if ok { "ok" } else { "MISMATCH" }
        ));
    }

    fn expect_verdict(&mut self, row: &CatalogRow, p: Property, want: Verdict) {
        let got = row.verdict(p);
        self.expect(
            got == Some(want),
            format!(
                "{} {} {} (expected {})",
                row.name,
                p.name(),
                got.map_or("n/a", short),
                short(want)
            ),
        );
        if let Some(r) = row.report(p) {
            for w in r.witnesses.iter().take(1) {
                self.witness(&row.procedure, w);
            }
        }
    }

    fn witness(&mut self, p: &Procedure, w: &Witness) {
        let mut v = w.to_json(p);
        v["replays"] = w.replay(p).into();
        self.artifacts.push(v.to_string());
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

type CaseFn = fn(&Ctx) -> Result<Run, String>;

struct CaseDef {
    id: &'static str,
    title: &'static str,
    provenance: Provenance,
    expectation: &'static str,
    run: CaseFn,
}

impl CaseDef {
    fn execute(&self, ctx: &Ctx) -> ReplicationCase {
        let outcome = match (self.run)(ctx) {
            Ok(run) => (
                run.setup,
                Outcome {
                    passed: run.passed,
                    observed: run.observed,
                    artifacts: run.artifacts,
                    notes: run.notes,
                },
            ),
            Err(e) => (
                Setup::default(),
                Outcome {
                    passed: false,
                    observed: vec![format!("error: {e}")],
                    artifacts: Vec::new(),
                    notes: Vec::new(),
                },
            ),
        };
        ReplicationCase {
            id: self.id,
            title: self.title,
            provenance: self.provenance,
            setup: outcome.0,
            expectation: self.expectation,
            outcome: outcome.1,
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn setup(schema: &str, u: &Universe, procedures: &[&str], budget: Option<&CheckBudget>) -> Setup {
    Setup {
        schema: schema.to_string(),
        universe: u.ids().map(|x| u.name(x).to_string()).collect(),
        procedures: procedures.iter().map(|s| s.to_string()).collect(),
        budget: budget.map(describe_budget),
        guarantee: None,
    }
}

pub fn describe_budget(b: &CheckBudget) -> String {
    let e = &b.enumeration;
    let mut s = format!("max_leaves={}", e.max_leaves);
    if let Some(slack) = e.slack {
        s += &format!(" slack={slack}");
    }
    s + &format!(" extra_leaves={}", b.extra_leaves)
}

fn matrix_setup(ctx: &Ctx, names: &[&str]) -> Setup {
    let u = xyz();
    let rows: Vec<&CatalogRow> = if names.is_empty() {
        ctx.matrix().iter().collect()
    } else {
        names.iter().map(|n| ctx.row(n)).collect()
    };
    Setup {
        schema: "catalog".into(),
        universe: u.ids().map(|x| u.name(x).to_string()).collect(),
        procedures: rows
            .iter()
            .map(|r| {
                format!(
                    "{} on {} ({})",
                    r.procedure.spec(),
                    r.procedure.schema().name,
                    describe_budget(&r.budget)
                )
            })
            .collect(),
        budget: None,
        guarantee: None,
    }
}

const CASES: &[CaseDef] = &[
    CaseDef {
        id: "ext-example",
        title: "extension of lists with repeats",
        provenance: Provenance::Stated,
        expectation: "[[x,x,y]] = [[y,x]] = {x,y}",
        run: ext_example,
    },
    CaseDef {
        id: "canonical-representation",
        title: "canonical terms for {x1,x2,x3}",
        provenance: Provenance::Trivial,
        expectation: "List gives (Cons x1 (Cons x2 (Sing x3))); Tree pads with the first leaf; both extend to the menu",
        run: canonical_case,
    },
    CaseDef {
        id: "representability",
        title: "schema analyzer",
        provenance: Provenance::Stated,
        expectation: "List, List2, Tree representable; flat, non-productive and non-expanding grammars not, the last with a discrepancy note",
        run: representability,
    },
    CaseDef {
        id: "satis1-ext",
        title: "satisficing on lists is not extensional",
        provenance: Provenance::Stated,
        expectation: "P([x,y,z]) = y and P([x,z,y]) = z",
        run: satis1,
    },
    CaseDef {
        id: "satis2-ext",
        title: "satisficing on sorted lists",
        provenance: Provenance::Stated,
        expectation: "EXT holds on the sorted domain and the procedure is rationalizable by choice function",
        run: satis2,
    },
    CaseDef {
        id: "prop-sind-tiia-i",
        title: "SIND without TIIA",
        provenance: Provenance::Stated,
        expectation: "circular max: P(a) = x, replacing y by x gives z; SIND holds, TIIA has no witness",
        run: sind_tiia_i,
    },
    CaseDef {
        id: "prop-sind-tiia-ii",
        title: "TIIA without SIND",
        provenance: Provenance::Stated,
        expectation: "larger sub-problem bias: SIND falsified, TIIA holds",
        run: sind_tiia_ii,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-i",
        title: "INT implies alphaE",
        provenance: Provenance::Stated,
        expectation: "every catalog procedure with INT holding has alphaE holding",
        run: alpha_i,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-ii",
        title: "EXT and SIND imply alphaE",
        provenance: Provenance::Stated,
        expectation: "every catalog procedure with EXT and SIND holding has alphaE holding",
        run: alpha_ii,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-iii",
        title: "SIND and TIIA imply alphaE",
        provenance: Provenance::Stated,
        expectation: "every substitutable catalog procedure with SIND and TIIA holding has alphaE holding",
        run: alpha_iii,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-iv",
        title: "alphaE implies neither SIND nor INT",
        provenance: Provenance::Stated,
        expectation: "second_list: alphaE holds, SIND falsified; maximize and sat_list: alphaE holds, INT falsified",
        run: alpha_iv,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-v",
        title: "TIIA does not imply alphaE",
        provenance: Provenance::Stated,
        expectation: "larger sub-problem bias: TIIA holds, alphaE has no witness",
        run: alpha_v,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-vi",
        title: "alphaE does not imply TIIA",
        provenance: Provenance::Stated,
        expectation: "smaller sub-problem bias: alphaE holds, TIIA has no witness",
        run: alpha_vi,
    },
    CaseDef {
        id: "prop-ind-implies-alpha-vi-witness",
        title: "TIIA failure at the displayed tree",
        provenance: Provenance::Stated,
        expectation: "P(a) = x, P(a') = v, and no representation of {w,u,x} in place of a' keeps x",
        run: alpha_vi_witness,
    },
    CaseDef {
        id: "prop-fac-gamma-i",
        title: "INT implies gammaE, not conversely",
        provenance: Provenance::Stated,
        expectation: "every INT catalog procedure has gammaE; maximize has gammaE without INT",
        run: gamma_i,
    },
    CaseDef {
        id: "prop-fac-gamma-ii",
        title: "SIND implies gammaE on substitutable grammars, not conversely",
        provenance: Provenance::Stated,
        expectation: "every substitutable SIND catalog procedure has gammaE; bias_small has gammaE without SIND",
        run: gamma_ii,
    },
    CaseDef {
        id: "prop-fac-gamma-iii",
        title: "EXT and gammaE are independent",
        provenance: Provenance::Stated,
        expectation: "maximize has both; default_large has EXT, gammaE no-witness; INT procedures have gammaE, EXT falsified",
        run: gamma_iii,
    },
    CaseDef {
        id: "prop-ext-alleq",
        title: "under EXT, SIND, alphaE and gammaE coincide",
        provenance: Provenance::Stated,
        expectation: "for every catalog procedure with EXT holding the three verdicts agree on holding",
        run: ext_alleq,
    },
    CaseDef {
        id: "prop-cfi-ext",
        title: "choice function implementation iff EXT",
        provenance: Provenance::Stated,
        expectation: "EXT holds exactly when the procedure agrees with its induced choice function on every term",
        run: cfi_ext,
    },
    CaseDef {
        id: "prop-choice-function-rational",
        title: "rationalizable by choice function iff EXT and alphaE",
        provenance: Provenance::Stated,
        expectation: "the axiom route and the strict-order oracle agree on every catalog procedure",
        run: cf_rational,
    },
    CaseDef {
        id: "prop-pmax-gamma",
        title: "correspondence rationalizable iff alphaE and gammaE",
        provenance: Provenance::Stated,
        expectation: "the axiom route and the weak-order oracle agree on every catalog procedure",
        run: pmax_gamma,
    },
    CaseDef {
        id: "cor-ext-sind",
        title: "EXT and SIND give a choice function rationalization",
        provenance: Provenance::Stated,
        expectation: "every catalog procedure with EXT and SIND holding is CF-rationalizable",
        run: cor_ext_sind,
    },
    CaseDef {
        id: "cor-intensional",
        title: "INT gives a correspondence rationalization",
        provenance: Provenance::Stated,
        expectation: "every INT catalog procedure is CC-rationalizable with C_P(A) = A and total indifference",
        run: cor_intensional,
    },
    CaseDef {
        id: "cor-sind-tiia",
        title: "SIND and TIIA give a correspondence rationalization",
        provenance: Provenance::Stated,
        expectation: "every substitutable catalog procedure with SIND and TIIA holding is CC-rationalizable",
        run: cor_sind_tiia,
    },
    CaseDef {
        id: "table-correspondence",
        title: "correspondence of a position-dependent list procedure",
        provenance: Provenance::Stated,
        expectation: "C_P({x,y,z}) = {x,y}",
        run: table_correspondence,
    },
    CaseDef {
        id: "wine-checklist",
        title: "choosing by checklist",
        provenance: Provenance::Stated,
        expectation: "INT holds and the correspondence is rationalizable",
        run: wine_checklist,
    },
    CaseDef {
        id: "wine-nested",
        title: "checklist over price-sorted lists",
        provenance: Provenance::Derived,
        expectation: "the cheapest non-dry red wine, computed from the attributes",
        run: wine_nested,
    },
    CaseDef {
        id: "search-first",
        title: "first result of a search",
        provenance: Provenance::Stated,
        expectation: "item 1 on the two-page result; EXT holds under the rank ordering",
        run: search_first,
    },
];

fn ext_example(_: &Ctx) -> Result<Run, String> {
    let u = Universe::from_ids(&["x", "y"]).map_err(err)?;
    let schema = AdtSchema::list();
    let mut run = Run::new(setup("List", &u, &[], None));
    let a = parse_term(&schema, &u, "(Cons x (Cons x (Sing y)))").map_err(err)?;
    let b = parse_term(&schema, &u, "(Cons y (Sing x))").map_err(err)?;
    let xy = u.all();
    run.expect(
        a.extension() == xy,
        format!("[[x,x,y]] = {}", u.format_set(a.extension())),
    );
    run.expect(
        b.extension() == xy,
        format!("[[y,x]] = {}", u.format_set(b.extension())),
    );
    run.expect(equivalent(&a, &b), "[x,x,y] ~ [y,x]");
    run.artifacts.push(a.to_sexpr(&schema, &u));
    run.artifacts.push(b.to_sexpr(&schema, &u));
    Ok(run)
}

fn canonical_case(_: &Ctx) -> Result<Run, String> {
    let u = Universe::from_ids(&["x1", "x2", "x3"]).map_err(err)?;
    let mut run = Run::new(setup("List, Tree", &u, &[], None));
    for (schema, want) in [
        (AdtSchema::list(), "(Cons x1 (Cons x2 (Sing x3)))"),
        (
            AdtSchema::tree(),
            "(Node (Leaf x1) (Node (Leaf x2) (Leaf x3) (Leaf x2)) (Leaf x1))",
        ),
    ] {
        let t = canonical_representation(&schema, u.all()).map_err(err)?;
        let text = t.to_sexpr(&schema, &u);
        run.expect(text == want, format!("{}: {text}", schema.name));
        run.expect(
            t.extension() == u.all(),
            format!("{}: extension is the menu", schema.name),
        );
        run.artifacts.push(text);
    }
    Ok(run)
}

fn representability(_: &Ctx) -> Result<Run, String> {
    let u = Universe::from_ids(&["x"]).map_err(err)?;
    let mut run = Run::new(setup("various", &u, &[], None));
    for schema in [AdtSchema::list(), AdtSchema::list2(), AdtSchema::tree()] {
        let f = analyze_schema(&schema);
        run.expect(f.representable, format!("{} representable", schema.name));
    }
    for (text, note) in [
        ("schema Flat; A: X; B: X, X", false),
        ("schema Loop; C: X, T", false),
        ("schema Chain; C1: X | C2: T", true),
    ] {
        let schema = parse_schema(text).map_err(err)?;
        let f = analyze_schema(&schema);
        run.expect(
            !f.representable,
            format!("{} not representable", schema.name),
        );
        run.expect(
            f.discrepancy_note().is_some() == note,
            format!(
                "{} discrepancy note {}",
                schema.name,
                if note { "present" } else { "absent" }
            ),
        );
        if let Some(n) = f.discrepancy_note() {
            run.note(format!("{}: {n}", schema.name));
        }
    }
    Ok(run)
}

fn satis1(_: &Ctx) -> Result<Run, String> {
    let u = xyz();
    let budget = CheckBudget::new(EnumerationBudget::new(4));
    let p = instantiate_procedure(&sat_list(), &u, &AdtSchema::list()).map_err(err)?;
    let mut run = Run::new(setup(
        "List",
        &u,
        &["sat_list u=utility threshold=0.5"],
        Some(&budget),
    ));
    let (x, y, z) = (AltId(0), AltId(1), AltId(2));
    let a = list_term(&[x, y, z]);
    let b = list_term(&[x, z, y]);
    run.expect(p.choose(&a) == y, "P([x,y,z]) = y");
    run.expect(p.choose(&b) == z, "P([x,z,y]) = z");
    let r = Checker::new(&p, &budget)
        .check(Property::Ext)
        .map_err(err)?;
    run.expect(
        r.verdict == Verdict::Falsified,
        format!("EXT {}", short(r.verdict)),
    );
    let found = r.witnesses.iter().find(|w| {
        matches!(w, Witness::Ext { a: wa, b: wb, choice_a, choice_b }
            if *wa == a && *wb == b && *choice_a == y && *choice_b == z)
    });
    run.expect(
        found.is_some(),
        "checker reports the witness ([x,y,z], [x,z,y])",
    );
    if let Some(w) = found {
        run.witness(&p, w);
    }
    Ok(run)
}

fn satis2(_: &Ctx) -> Result<Run, String> {
    let u = xyz();
    let budget = list_budget();
    let g = Guarantee::sorted_by("rank", Direction::Desc);
    let p = instantiate_procedure(&sat_list(), &u, &AdtSchema::list())
        .map_err(err)?
        .with_guarantee(g.clone(), false)
        .map_err(err)?;
    let mut run = Run::new(setup(
        "List",
        &u,
        &["sat_list u=utility threshold=0.5"],
        Some(&budget),
    ));
    run.setup.guarantee = Some(g.to_string());
    let c = Checker::new(&p, &budget);
    for prop in [Property::Ext, Property::AlphaE] {
        let r = c.check(prop).map_err(err)?;
        run.expect(
            r.verdict.holds(),
            format!("{} {}", prop.name(), short(r.verdict)),
        );
    }
    let v = classify_procedure(&p, &budget).map_err(err)?;
    run.expect(v.cf_rationalizable(), "CF-rationalizable");
    if let Some(rel) = &v.cf_relation {
        run.note(format!("recovered order {}", rel.describe(&u)));
    }
    Ok(run)
}

fn sind_tiia_i(ctx: &Ctx) -> Result<Run, String> {
    let row = ctx.row("circular_max");
    let p = &row.procedure;
    let u = p.universe();
    let mut run = Run::new(setup(
        "Tree",
        u,
        &["circular_max cycle=x,y,z"],
        Some(&row.budget),
    ));
    let a = parse_term(p.schema(), u, CIRCULAR_TREE).map_err(err)?;
    let (x, y, z) = (AltId(0), AltId(1), AltId(2));
    run.expect(p.choose(&a) == x, "P(a) = x");
    let Some(Child::Sub(right)) = a.children.get(2) else {
        return Err("tree lost its right child".into());
    };
    let replaced = a.with_child(2, right.rename_value(y, x));
    run.expect(
        p.choose(&replaced) == z,
        "replacing y by x on the right sub-tree gives z",
    );
    run.artifacts.push(replaced.to_sexpr(p.schema(), u));
    run.expect_verdict(row, Property::Sind, Verdict::HoldsUpToBudget);
    run.expect_verdict(row, Property::Tiia, Verdict::NoWitnessWithinBudget);
    let w = Checker::new(p, &row.budget).tiia_at(&a, 2).map_err(err)?;
    run.expect(
        w.is_some(),
        "no re-representation of {x,z} on the right keeps x",
    );
    if let Some(w) = w {
        run.witness(p, &w);
    }
    Ok(run)
}

fn sind_tiia_ii(ctx: &Ctx) -> Result<Run, String> {
    let row = ctx.row("bias_large");
    let mut run = Run::new(matrix_setup(ctx, &["bias_large"]));
    run.expect_verdict(row, Property::Sind, Verdict::Falsified);
    run.expect_verdict(row, Property::Tiia, Verdict::HoldsUpToBudget);
    Ok(run)
}

/// Checks `premise => conclusion` over the catalog and requires a non-vacuous instance.
fn implication(
    ctx: &Ctx,
    run: &mut Run,
    premise: &[Property],
    conclusion: Property,
    substitutable_only: bool,
) {
    let mut instances = 0;
    for row in ctx.matrix() {
        if substitutable_only && !analyze_schema(row.procedure.schema()).substitutable {
            continue;
        }
        if premise.iter().all(|&p| row.holds(p)) {
            instances += 1;
            run.expect(
                row.holds(conclusion),
                format!(
                    "{}: {} {}",
                    row.name,
                    conclusion.name(),
                    row.verdict(conclusion).map_or("n/a", short)
                ),
            );
        }
    }
    run.expect(
        instances > 0,
        format!("{instances} procedure(s) satisfy the premise"),
    );
}

fn alpha_i(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    implication(ctx, &mut run, &[Property::Int], Property::AlphaE, false);
    Ok(run)
}

fn alpha_ii(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    implication(
        ctx,
        &mut run,
        &[Property::Ext, Property::Sind],
        Property::AlphaE,
        false,
    );
    Ok(run)
}

fn alpha_iii(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    implication(
        ctx,
        &mut run,
        &[Property::Sind, Property::Tiia],
        Property::AlphaE,
        true,
    );
    Ok(run)
}

fn alpha_iv(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &["second_list", "maximize", "sat_list"]));
    let second = ctx.row("second_list");
    run.expect_verdict(second, Property::AlphaE, Verdict::HoldsUpToBudget);
    run.expect_verdict(second, Property::Sind, Verdict::Falsified);
    for name in ["maximize", "sat_list"] {
        let row = ctx.row(name);
        run.expect_verdict(row, Property::AlphaE, Verdict::HoldsUpToBudget);
        run.expect_verdict(row, Property::Int, Verdict::Falsified);
    }
    Ok(run)
}

fn alpha_v(ctx: &Ctx) -> Result<Run, String> {
    let row = ctx.row("bias_large");
    let mut run = Run::new(matrix_setup(ctx, &["bias_large"]));
    run.expect_verdict(row, Property::Tiia, Verdict::HoldsUpToBudget);
    run.expect_verdict(row, Property::AlphaE, Verdict::NoWitnessWithinBudget);
    run.note(
        "with N = 1 a three-leaf node of equal-sized children falls through to its third child, \
         so Node r r (Leaf x) keeps any chosen x; with N >= 2 TIIA fails on three-leaf trees",
    );
    Ok(run)
}

fn alpha_vi(_: &Ctx) -> Result<Run, String> {
    let u = xyz();
    let budget = deep_tree_budget();
    let p = instantiate_procedure(&bias_small(), &u, &AdtSchema::tree()).map_err(err)?;
    let mut run = Run::new(setup("Tree", &u, &["bias_small n=1"], Some(&budget)));
    let row = evaluate("bias_small", p, &budget);
    run.expect_verdict(&row, Property::AlphaE, Verdict::HoldsUpToBudget);
    run.expect_verdict(&row, Property::Tiia, Verdict::NoWitnessWithinBudget);
    Ok(run)
}

fn alpha_vi_witness(_: &Ctx) -> Result<Run, String> {
    let u = uvwxyz();
    let budget = deep_tree_budget();
    let p = instantiate_procedure(&bias_small(), &u, &AdtSchema::tree()).map_err(err)?;
    let mut run = Run::new(setup("Tree", &u, &["bias_small n=1"], Some(&budget)));
    let (a, slot) = padded_bias_tree(&u);
    run.artifacts.push(a.to_sexpr(p.schema(), &u));
    run.note("binary nodes padded with a copy of the left child's first leaf");
    let id = |s: &str| u.lookup(s).expect("known alternative");
    run.expect(p.choose(&a) == id("x"), "P(a) = x");
    let Some(Child::Sub(sub)) = a.children.get(slot) else {
        return Err("padded tree lost its sub-problem".into());
    };
    run.expect(p.choose(sub) == id("v"), "P(a') = v");
    let w = Checker::new(&p, &budget).tiia_at(&a, slot).map_err(err)?;
    run.expect(
        w.is_some(),
        "no representation of {w,u,x} in place of a' keeps x",
    );
    match w {
        Some(w) => run.witness(&p, &w),
        None => run.note(
            "the outer node compares sizes 3, 3, 1 after the replacement and falls through to \
             its third child, which still chooses x",
        ),
    }
    Ok(run)
}

fn gamma_i(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    implication(ctx, &mut run, &[Property::Int], Property::GammaE, false);
    let max = ctx.row("maximize");
    run.expect_verdict(max, Property::GammaE, Verdict::HoldsUpToBudget);
    run.expect_verdict(max, Property::Int, Verdict::Falsified);
    Ok(run)
}

fn gamma_ii(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    implication(ctx, &mut run, &[Property::Sind], Property::GammaE, true);
    let small = ctx.row("bias_small");
    run.expect_verdict(small, Property::GammaE, Verdict::HoldsUpToBudget);
    run.expect_verdict(small, Property::Sind, Verdict::Falsified);
    Ok(run)
}

fn gamma_iii(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(
        ctx,
        &["maximize", "default_large", "first_list"],
    ));
    let max = ctx.row("maximize");
    run.expect_verdict(max, Property::Ext, Verdict::HoldsUpToBudget);
    run.expect_verdict(max, Property::GammaE, Verdict::HoldsUpToBudget);
    let default = ctx.row("default_large");
    run.expect_verdict(default, Property::Ext, Verdict::HoldsUpToBudget);
    run.expect_verdict(default, Property::GammaE, Verdict::NoWitnessWithinBudget);
    let first = ctx.row("first_list");
    run.expect_verdict(first, Property::GammaE, Verdict::HoldsUpToBudget);
    run.expect_verdict(first, Property::Ext, Verdict::Falsified);
    Ok(run)
}

fn ext_alleq(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    let mut instances = 0;
    for row in ctx.matrix().iter().filter(|r| r.holds(Property::Ext)) {
        instances += 1;
        let v = [Property::Sind, Property::AlphaE, Property::GammaE].map(|p| row.holds(p));
        run.expect(
            v[0] == v[1] && v[1] == v[2],
            format!(
                "{}: SIND {} alphaE {} gammaE {}",
                row.name, v[0], v[1], v[2]
            ),
        );
    }
    run.expect(
        instances > 0,
        format!("{instances} extensional procedure(s)"),
    );
    Ok(run)
}

fn classified(row: &CatalogRow) -> Result<&RationalityVerdict, String> {
    row.classify
        .as_ref()
        .map_err(|e| format!("{}: {e}", row.name))
}

fn cfi_ext(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    for row in ctx.matrix() {
        let v = classified(row)?;
        run.expect(
            v.ext.holds() == v.implements_choice_function,
            format!(
                "{}: EXT {}, implements {}",
                row.name,
                short(v.ext),
                v.implements_choice_function
            ),
        );
    }
    Ok(run)
}

fn cf_rational(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    for row in ctx.matrix() {
        let v = classified(row)?;
        run.expect(
            v.cf_by_axioms == v.cf_by_oracle,
            format!(
                "{}: axioms {}, oracle {}",
                row.name, v.cf_by_axioms, v.cf_by_oracle
            ),
        );
    }
    let max = classified(ctx.row("maximize"))?;
    let u = xyz();
    let order = max.cf_relation.as_ref().map(|r| r.describe(&u));
    run.expect(
        order.as_deref() == Some("z > y > x"),
        format!(
            "maximize recovers {}",
            order.as_deref().unwrap_or("nothing")
        ),
    );
    Ok(run)
}

fn pmax_gamma(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    let u = xyz();
    for row in ctx.matrix() {
        let v = classified(row)?;
        run.expect(
            v.cc_by_axioms == v.cc_by_oracle,
            format!(
                "{}: axioms {}, oracle {}{}",
                row.name,
                v.cc_by_axioms,
                v.cc_by_oracle,
                v.cc_relation
                    .as_ref()
                    .map(|r| format!(" ({})", r.describe(&u)))
                    .unwrap_or_default()
            ),
        );
    }
    Ok(run)
}

fn cor_ext_sind(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    let mut instances = 0;
    for row in ctx.matrix() {
        if row.holds(Property::Ext) && row.holds(Property::Sind) {
            instances += 1;
            let v = classified(row)?;
            run.expect(
                v.cf_rationalizable(),
                format!("{}: CF-rationalizable", row.name),
            );
        }
    }
    run.expect(
        instances > 0,
        format!("{instances} procedure(s) satisfy the premise"),
    );
    Ok(run)
}

fn cor_intensional(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    let u = xyz();
    let mut instances = 0;
    for row in ctx.matrix().iter().filter(|r| r.holds(Property::Int)) {
        instances += 1;
        let v = classified(row)?;
        run.expect(
            v.cc_rationalizable(),
            format!("{}: CC-rationalizable", row.name),
        );
        let identity = v.correspondence.iter().all(|(a, c)| a == c);
        run.expect(identity, format!("{}: C_P(A) = A", row.name));
        let indifferent = v.cc_relation.as_ref().map(|r| r.levels().len() == 1);
        run.expect(
            indifferent == Some(true),
            format!(
                "{}: {}",
                row.name,
                v.cc_relation
                    .as_ref()
                    .map_or("no relation".into(), |r| r.describe(&u))
            ),
        );
    }
    run.expect(
        instances > 0,
        format!("{instances} intensional procedure(s)"),
    );
    Ok(run)
}

fn cor_sind_tiia(ctx: &Ctx) -> Result<Run, String> {
    let mut run = Run::new(matrix_setup(ctx, &[]));
    let mut instances = 0;
    for row in ctx.matrix() {
        if analyze_schema(row.procedure.schema()).substitutable
            && row.holds(Property::Sind)
            && row.holds(Property::Tiia)
        {
            instances += 1;
            let v = classified(row)?;
            run.expect(
                v.cc_rationalizable(),
                format!("{}: CC-rationalizable", row.name),
            );
        }
    }
    run.expect(
        instances > 0,
        format!("{instances} procedure(s) satisfy the premise"),
    );
    Ok(run)
}

fn table_correspondence(ctx: &Ctx) -> Result<Run, String> {
    let row = ctx.row("table");
    let p = &row.procedure;
    let u = p.universe();
    let mut run = Run::new(matrix_setup(ctx, &["table"]));
    for b in [3, 4, 6] {
        let cc = induced_correspondence(p, &EnumerationBudget::new(b)).map_err(err)?;
        let got = cc.get(u.all()).unwrap_or(AltSet::EMPTY);
        run.expect(
            got == u.parse_set("x,y").map_err(err)?,
            format!("max_leaves {b}: C_P({{x,y,z}}) = {}", u.format_set(got)),
        );
    }
    Ok(run)
}

fn wine_checklist(ctx: &Ctx) -> Result<Run, String> {
    let row = ctx.row("wine_checklist");
    let mut run = Run::new(matrix_setup(ctx, &["wine_checklist"]));
    run.expect_verdict(row, Property::Int, Verdict::HoldsUpToBudget);
    let v = classified(row)?;
    run.expect(v.cc_rationalizable(), "CC-rationalizable");
    Ok(run)
}

fn wine_nested(_: &Ctx) -> Result<Run, String> {
    let u = wine_cellar();
    let schema = nested_wines();
    let p = instantiate_procedure(
        &ProcedureSpec::new(ProcedureKind::WineChecklistNested),
        &u,
        &schema,
    )
    .map_err(err)?;
    let mut run = Run::new(setup(
        "Wines over List",
        &u,
        &["wine_checklist_nested"],
        None,
    ));
    let a = parse_term(&schema, &u, WINE_TERM).map_err(err)?;
    run.artifacts.push(a.to_sexpr(&schema, &u));
    let price = u.numeric_attr("price").map_err(err)?;
    let red = u.bool_attr("red").map_err(err)?;
    let dry = u.bool_attr("dry").map_err(err)?;
    let want = u
        .ids()
        .filter(|x| red[x.index()] && !dry[x.index()])
        .min_by(|a, b| price[a.index()].total_cmp(&price[b.index()]))
        .ok_or("no non-dry red wine in the fixture")?;
    let got = p.apply(&a).map_err(err)?;
    run.expect(
        got == want,
        format!(
            "chosen {} (cheapest non-dry red {})",
            u.name(got),
            u.name(want)
        ),
    );
    Ok(run)
}

fn search_first(_: &Ctx) -> Result<Run, String> {
    let spec = ProcedureSpec::new(ProcedureKind::FirstOfSearch);
    let u = search_items(20);
    let schema = AdtSchema::search_result(10);
    let p = instantiate_procedure(&spec, &u, &schema).map_err(err)?;
    let a = parse_term(&schema, &u, &two_page_result()).map_err(err)?;
    let got = p.apply(&a).map_err(err)?;
    let mut run = Run::new(setup(
        "Result over Page(10)",
        &u,
        &["first_of_search"],
        None,
    ));
    run.artifacts.push(a.to_sexpr(&schema, &u));
    run.expect(
        u.name(got) == "i1",
        format!("two-page result chooses {}", u.name(got)),
    );

    let small = search_items(4);
    let schema = AdtSchema::search_result(2);
    let g = Guarantee::sorted_by("rank", Direction::Desc);
    let budget = CheckBudget::new(EnumerationBudget::new(6));
    let p = instantiate_procedure(&spec, &small, &schema)
        .map_err(err)?
        .with_guarantee(g.clone(), false)
        .map_err(err)?;
    run.note(format!(
        "EXT checked on pages of two items over four items, {}",
        describe_budget(&budget)
    ));
    run.setup.guarantee = Some(g.to_string());
    let r = Checker::new(&p, &budget)
        .check(Property::Ext)
        .map_err(err)?;
    run.expect(
        r.verdict.holds(),
        format!("EXT {} under {g}", short(r.verdict)),
    );
    run.expect(
        r.terms_checked > 0,
        format!("{} terms checked", r.terms_checked),
    );
    Ok(run)
}
