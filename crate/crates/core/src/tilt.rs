//! Tilting maps: closure operators of the easterly-wind order.
//!
//! Tilting at a set of node indices pushes the non-leaf children of each
//! selected node to the left (keeping their relative order); the reversed
//! map pushes them to the right. Rearranging children past leaves never
//! renumbers internal nodes, so index sets refer to the input and output
//! terms alike.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::order::{join, rewrite_successors};
use crate::poset::Poset;
use crate::term::{scope_sequence, Term};

/// A set of positive node indices, or every positive index at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TiltSet {
    All,
    Set(BTreeSet<usize>),
}

impl TiltSet {
    pub fn all() -> TiltSet {
        TiltSet::All
    }

    pub fn empty() -> TiltSet {
        TiltSet::Set(BTreeSet::new())
    }

    pub fn of<I: IntoIterator<Item = usize>>(indices: I) -> TiltSet {
        TiltSet::Set(indices.into_iter().collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            TiltSet::All => i >= 1,
            TiltSet::Set(s) => s.contains(&i),
        }
    }

    /// Is `self` a subset of `other`?
    pub fn subset_of(&self, other: &TiltSet) -> bool {
        match (self, other) {
            (_, TiltSet::All) => true,
            (TiltSet::All, TiltSet::Set(_)) => false,
            (TiltSet::Set(a), TiltSet::Set(b)) => a.is_subset(b),
        }
    }
}

fn rearrange(t: &Term, x: &TiltSet, counter: &mut usize, leaves_first: bool) -> Term {
    match t {
        Term::Leaf => Term::Leaf,
        Term::Node { gen, children } => {
            let me = *counter;
            *counter += 1;
            let rebuilt: Vec<Term> = children
                .iter()
                .map(|c| rearrange(c, x, counter, leaves_first))
                .collect();
            let children = if x.contains(me) {
                let (leaves, nodes): (Vec<Term>, Vec<Term>) =
                    rebuilt.into_iter().partition(Term::is_leaf);
                if leaves_first {
                    leaves.into_iter().chain(nodes).collect()
                } else {
                    nodes.into_iter().chain(leaves).collect()
                }
            } else {
                rebuilt
            };
            Term::node(gen.clone(), children)
        }
    }
}

/// Tilting map: non-leaf children first at every node of `x`.
pub fn tilt(x: &TiltSet, t: &Term) -> Term {
    let mut counter = 1;
    rearrange(t, x, &mut counter, false)
}

/// Reversed tilting map: leaf children first at every node of `x`.
pub fn reversed_tilt(x: &TiltSet, t: &Term) -> Term {
    let mut counter = 1;
    rearrange(t, x, &mut counter, true)
}

pub fn is_tilted(x: &TiltSet, t: &Term) -> bool {
    tilt(x, t) == *t
}

pub fn is_fully_tilted(t: &Term) -> bool {
    is_tilted(&TiltSet::All, t)
}

/// The equivalence class of `t` under equal tilting images is the order
/// interval between the reversed tilt and the tilt.
pub fn kernel_interval(x: &TiltSet, t: &Term) -> (Term, Term) {
    (reversed_tilt(x, t), tilt(x, t))
}

/// The tilted terms greater than or equal to a tilted term `t`, built by
/// closing rewrites under the tilting map; covering pairs are recomputed
/// inside the subset by transitive reduction.
pub fn tilted_upper_set(x: &TiltSet, t: &Term, ceiling: usize) -> Result<Poset> {
    if !is_tilted(x, t) {
        return Err(Error::NotTilted);
    }
    let mut elements: Vec<Term> = vec![t.clone()];
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    seen.insert(t.render(), 0);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while !queue.is_empty() {
        let frontier: Vec<usize> = queue.drain(..).collect();
        let expand = |&u: &usize| {
            rewrite_successors(&elements[u])
                .into_iter()
                .map(|(_, s)| {
                    let closed = tilt(x, &s);
                    (closed.render(), closed)
                })
                .collect::<Vec<_>>()
        };
        #[cfg(feature = "parallel")]
        let batches: Vec<Vec<(String, Term)>> = {
            use rayon::prelude::*;
            frontier.par_iter().map(expand).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let batches: Vec<Vec<(String, Term)>> = frontier.iter().map(expand).collect();
        for batch in batches {
            for (text, closed) in batch {
                if !seen.contains_key(&text) {
                    let idx = elements.len();
                    if idx >= ceiling {
                        return Err(Error::CeilingExceeded(ceiling));
                    }
                    seen.insert(text, idx);
                    elements.push(closed);
                    queue.push_back(idx);
                }
            }
        }
    }
    Poset::from_elements(elements)
}

/// Join inside a tilted poset: tilt the componentwise-maximum join.
pub fn tilted_join(x: &TiltSet, t1: &Term, t2: &Term) -> Result<Term> {
    Ok(tilt(x, &join(t1, t2)?))
}

/// Compare fully tilted terms by their scope sequences.
pub fn leq_fully_tilted(t1: &Term, t2: &Term) -> Result<bool> {
    if !is_fully_tilted(t1) || !is_fully_tilted(t2) {
        return Err(Error::NotFullyTilted);
    }
    if t1.decoration_word() != t2.decoration_word() {
        return Ok(false);
    }
    Ok(scope_sequence(t1)
        .iter()
        .zip(scope_sequence(t2))
        .all(|(a, b)| *a <= b))
}
