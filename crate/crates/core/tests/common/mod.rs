//! Oracles written independently of the library's enumeration and search code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use repchoice_core::schema::{AdtSchema, SlotKind};

pub fn binom(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Maps from n positions onto k values that hit every value.
pub fn surjections(n: u64, k: u64) -> u64 {
    (0..=k)
        .map(|j| {
            let t = (binom(k, j) * (k - j).pow(n as u32)) as i128;
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum::<i128>() as u64
}

/// Number of terms of a flat grammar with exactly `n` value slots.
pub fn shape_count(schema: &AdtSchema, n: usize) -> u64 {
    fn go(schema: &AdtSchema, n: usize, memo: &mut HashMap<usize, u64>) -> u64 {
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let mut total = 0;
        for c in &schema.constructors {
            let values = c.slots.iter().filter(|s| **s == SlotKind::Value).count();
            let rec = c.slots.len() - values;
            if values > n {
                continue;
            }
            total += compositions(schema, n - values, rec, memo);
        }
        memo.insert(n, total);
        total
    }
    /// Ways to fill `slots` recursive slots with sub-terms totalling `n` leaves.
    fn compositions(
        schema: &AdtSchema,
        n: usize,
        slots: usize,
        memo: &mut HashMap<usize, u64>,
    ) -> u64 {
        if slots == 0 {
            return u64::from(n == 0);
        }
        if n < slots {
            return 0;
        }
        (1..=n - (slots - 1))
            .map(|first| {
                let head = go(schema, first, memo);
                if head == 0 {
                    0
                } else {
                    head * compositions(schema, n - first, slots - 1, memo)
                }
            })
            .sum()
    }
    go(schema, n, &mut HashMap::new())
}

/// Terms representing exactly a k-element menu with at most `max` leaves.
pub fn representation_count(schema: &AdtSchema, k: usize, max: usize) -> u64 {
    (k..=max)
        .map(|n| shape_count(schema, n) * surjections(n as u64, k as u64))
        .sum()
}

/// Every term over `alts` with at most `max` leaves, as s-expressions, by
/// direct recursive generation.
pub fn naive_terms(schema: &AdtSchema, alts: &[&str], max: usize) -> Vec<String> {
    fn with_leaves(schema: &AdtSchema, alts: &[&str], n: usize) -> Vec<String> {
        let mut out = Vec::new();
        for c in &schema.constructors {
            let values = c.slots.iter().filter(|s| **s == SlotKind::Value).count();
            let rec = c.slots.len() - values;
            if values > n || (rec == 0 && values != n) || (rec > 0 && n - values < rec) {
                continue;
            }
            for split in splits(n - values, rec) {
                let subs: Vec<Vec<String>> = split
                    .iter()
                    .map(|&m| with_leaves(schema, alts, m))
                    .collect();
                let value_choices = (0..values).map(|_| alts.iter()).multi_cartesian_product();
                let value_choices: Vec<Vec<&&str>> = if values == 0 {
                    vec![vec![]]
                } else {
                    value_choices.collect()
                };
                let sub_choices: Vec<Vec<&String>> = if rec == 0 {
                    vec![vec![]]
                } else {
                    subs.iter()
                        .map(|s| s.iter())
                        .multi_cartesian_product()
                        .collect()
                };
                for vs in &value_choices {
                    for ss in &sub_choices {
                        let (mut vi, mut si) = (0, 0);
                        let mut text = format!("({}", c.name);
                        for slot in &c.slots {
                            text.push(' ');
                            match slot {
                                SlotKind::Value => {
                                    text += vs[vi];
                                    vi += 1;
                                }
                                SlotKind::Recursive => {
                                    text += ss[si];
                                    si += 1;
                                }
                            }
                        }
                        text.push(')');
                        out.push(text);
                    }
                }
            }
        }
        out
    }
    fn splits(n: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 0 {
            return if n == 0 { vec![vec![]] } else { vec![] };
        }
        (1..=n)
            .flat_map(|first| {
                splits(n - first, parts - 1)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect()
    }
    (1..=max)
        .flat_map(|n| with_leaves(schema, alts, n))
        .collect()
}

/// Alternatives mentioned in an s-expression: atoms not in head position.
pub fn sexpr_atoms(text: &str) -> BTreeSet<String> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let mut out = BTreeSet::new();
    let mut after_open = false;
    for tok in spaced.split_whitespace() {
        match tok {
            "(" => after_open = true,
            ")" => after_open = false,
            atom => {
                if !after_open {
                    out.insert(atom.to_string());
                }
                after_open = false;
            }
        }
    }
    out
}

/// All strict total orders on n alternatives, best first.
pub fn strict_orders(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

/// All complete transitive relations on n alternatives, as levels (0 best),
/// normalized so that the used levels are 0, 1, 2, ...
pub fn weak_orders(n: usize) -> Vec<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for levels in (0..n).map(|_| 0..n).multi_cartesian_product() {
        let used: BTreeSet<usize> = levels.iter().copied().collect();
        let rank: HashMap<usize, usize> = used.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        out.insert(levels.iter().map(|l| rank[l]).collect());
    }
    out.into_iter().collect()
}
