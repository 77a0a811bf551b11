//! Balanced forests, Fuss-Catalan lattices, and the rooted-tree (Tamari)
//! realization.
//!
//! A forest is a term whose root carries a natural-number decoration; the
//! word `w` of its non-root decorations indexes a maximal interval between
//! the row of corollas and the left-nested forest. Specializing `w` to a
//! constant word gives lattices counted by Fuss-Catalan numbers; the fully
//! tilted poset of the descending word is isomorphic to the Tamari order
//! via scope sequences of rooted trees.

use std::fmt;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::signature::{nat_gen, nat_index, Signature, MAX_ARITY};
use crate::term::{corolla, Term};
use crate::tilt::{tilted_upper_set, TiltSet};

/// Replace the leftmost leaf of a forest by a term.
pub fn graft_leftmost(f: &Term, t: &Term) -> Result<Term> {
    if f.arity() == 0 {
        return Err(Error::InvalidInput("forest has no leaf to graft on".into()));
    }
    fn rec(t: &Term, sub: &Term, done: &mut bool) -> Term {
        match t {
            Term::Leaf => {
                if *done {
                    Term::Leaf
                } else {
                    *done = true;
                    sub.clone()
                }
            }
            Term::Node { gen, children } => {
                let mut out = Vec::with_capacity(children.len());
                for c in children {
                    if *done {
                        out.push(c.clone());
                    } else {
                        out.push(rec(c, sub, done));
                    }
                }
                Term::node(gen.clone(), out)
            }
        }
    }
    let mut done = false;
    Ok(rec(f, t, &mut done))
}

/// The minimal forest of a word: a row of corollas under one root.
pub fn min_forest(w: &[String], sig: &Signature) -> Result<Term> {
    if w.len() > MAX_ARITY {
        return Err(Error::ArityTooLarge(w.len()));
    }
    let mut children = Vec::with_capacity(w.len());
    for name in w {
        children.push(corolla(sig, name)?);
    }
    Ok(Term::node(nat_gen(w.len()), children))
}

/// The maximal forest of a word: corollas grafted successively onto the
/// leftmost leaf.
pub fn max_forest(w: &[String], sig: &Signature) -> Result<Term> {
    if w.len() > MAX_ARITY {
        return Err(Error::ArityTooLarge(w.len()));
    }
    let mut f = Term::node(nat_gen(w.len()), vec![Term::Leaf; w.len()]);
    for name in w {
        f = graft_leftmost(&f, &corolla(sig, name)?)?;
    }
    Ok(f)
}

/// The balanced-forest poset of a word: the interval from the minimal to
/// the maximal forest inside the tilted order.
pub fn balanced_forest_poset(
    x: &TiltSet,
    w: &[String],
    sig: &Signature,
    ceiling: usize,
) -> Result<Poset> {
    tilted_upper_set(x, &min_forest(w, sig)?, ceiling)
}

/// Fuss-Catalan number `C(mn + n, n) / (mn + 1)`.
pub fn fuss_catalan_count(m: usize, n: usize) -> Result<u128> {
    let top = (m as u128)
        .checked_mul(n as u128)
        .and_then(|mn| mn.checked_add(n as u128))
        .ok_or(Error::Overflow)?;
    let mut binom: u128 = 1;
    for k in 1..=(n as u128) {
        binom = binom
            .checked_mul(top - k + 1)
            .ok_or(Error::Overflow)?
            / k;
    }
    Ok(binom / (m as u128 * n as u128 + 1))
}

/// The balanced-forest poset of the constant word `m^n` over the
/// natural-number signature.
pub fn fuss_catalan_poset(m: usize, n: usize, ceiling: usize) -> Result<Poset> {
    let word = vec![nat_gen(m); n];
    balanced_forest_poset(&TiltSet::empty(), &word, &Signature::nat(), ceiling)
}

/// The descending word `(n-1, n-2, ..., 0)` over the naturals.
pub fn descending_word(n: usize) -> Vec<String> {
    (0..n).map(|i| nat_gen(n - 1 - i)).collect()
}

/// The row of descending corollas, the minimum of the rooted-tree poset.
pub fn corolla_row(n: usize) -> Result<Term> {
    min_forest(&descending_word(n), &Signature::nat())
}

/// The fully tilted balanced-forest poset of the descending word.
pub fn rooted_tree_poset(n: usize, ceiling: usize) -> Result<Poset> {
    tilted_upper_set(&TiltSet::all(), &corolla_row(n)?, ceiling)
}

/// An ordered rooted tree without decorations or leaf slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RootedTree(pub Vec<RootedTree>);

impl RootedTree {
    pub fn size(&self) -> usize {
        1 + self.0.iter().map(RootedTree::size).sum::<usize>()
    }

    /// Per node, in preorder, the number of its strict descendants.
    pub fn scope_sequence(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn rec(t: &RootedTree, out: &mut Vec<usize>) -> usize {
            let at = out.len();
            out.push(0);
            let mut below = 0;
            for c in &t.0 {
                below += 1 + rec(c, out);
            }
            out[at] = below;
            below
        }
        rec(self, &mut out);
        out
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Strip leaves and decorations, keeping the internal-node shape.
/// `None` for the bare leaf, which has no nodes.
pub fn underlying_tree(t: &Term) -> Option<RootedTree> {
    match t {
        Term::Leaf => None,
        Term::Node { children, .. } => Some(RootedTree(
            children.iter().filter_map(underlying_tree).collect(),
        )),
    }
}

/// The fully tilted natural-number term of a rooted tree: nodes are labeled
/// `size-1` down to `0` in preorder and padded with trailing leaves so that
/// the node labeled `k` has `k` children.
pub fn tree_term(r: &RootedTree) -> Result<Term> {
    let n = r.size();
    if n - 1 > MAX_ARITY {
        return Err(Error::ArityTooLarge(n - 1));
    }
    fn rec(r: &RootedTree, next: &mut usize) -> Term {
        *next -= 1;
        let label = *next;
        let mut children: Vec<Term> = r.0.iter().map(|c| rec(c, next)).collect();
        debug_assert!(children.len() <= label);
        children.resize(label, Term::Leaf);
        Term::node(nat_gen(label), children)
    }
    let mut next = n;
    Ok(rec(r, &mut next))
}

/// The Tamari order on rooted trees via scope-sequence comparison.
pub fn tamari_leq(r1: &RootedTree, r2: &RootedTree) -> Result<bool> {
    if r1.size() != r2.size() {
        return Err(Error::SizeMismatch);
    }
    Ok(r1
        .scope_sequence()
        .iter()
        .zip(r2.scope_sequence())
        .all(|(a, b)| *a <= b))
}

/// A binary tree whose internal nodes carry terms over the arity-`m`
/// generator (the leaf term playing the filler decoration).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecoratedBinaryTree {
    Leaf,
    Node {
        dec: Term,
        left: Box<DecoratedBinaryTree>,
        right: Box<DecoratedBinaryTree>,
    },
}

impl DecoratedBinaryTree {
    pub fn node(dec: Term, left: DecoratedBinaryTree, right: DecoratedBinaryTree) -> Self {
        DecoratedBinaryTree::Node {
            dec,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            DecoratedBinaryTree::Leaf => 0,
            DecoratedBinaryTree::Node { left, right, .. } => 1 + left.degree() + right.degree(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            DecoratedBinaryTree::Leaf => "*".to_string(),
            DecoratedBinaryTree::Node { dec, left, right } => {
                format!("[{}]({},{})", dec.render_term(), left.render(), right.render())
            }
        }
    }

    /// Replace the `k`-th leaf (1-based, left to right) by a subtree.
    fn with_leaf_replaced(&self, k: &mut usize, sub: &DecoratedBinaryTree) -> Self {
        match self {
            DecoratedBinaryTree::Leaf => {
                *k -= 1;
                if *k == 0 {
                    sub.clone()
                } else {
                    DecoratedBinaryTree::Leaf
                }
            }
            DecoratedBinaryTree::Node { dec, left, right } => {
                if *k == 0 {
                    return self.clone();
                }
                let l = left.with_leaf_replaced(k, sub);
                let r = if *k == 0 {
                    (**right).clone()
                } else {
                    right.with_leaf_replaced(k, sub)
                };
                DecoratedBinaryTree::node(dec.clone(), l, r)
            }
        }
    }
}

/// Is `t` a term over the single generator of arity `m + 1`?
pub fn is_m_tree(t: &Term, m: usize) -> bool {
    match t {
        Term::Leaf => true,
        Term::Node { gen, children } => {
            nat_index(gen) == Some(m + 1) && children.iter().all(|c| is_m_tree(c, m))
        }
    }
}

/// Membership in the comb class: every decoration is a nonempty term over
/// the arity-`m` generator, heading a right branch of `degree - 1` nodes
/// decorated by the leaf, which ends at a leaf.
pub fn in_comb_class(r: &DecoratedBinaryTree, m: usize) -> bool {
    if m == 0 {
        return matches!(r, DecoratedBinaryTree::Leaf);
    }
    match r {
        DecoratedBinaryTree::Leaf => true,
        DecoratedBinaryTree::Node { dec, left, right } => {
            if dec.is_leaf() || !is_m_tree(dec, m - 1) {
                return false;
            }
            if !in_comb_class(left, m) {
                return false;
            }
            let mut cur = right;
            for _ in 1..dec.degree() {
                match &**cur {
                    DecoratedBinaryTree::Node {
                        dec: filler,
                        left,
                        right,
                    } if filler.is_leaf() => {
                        if !in_comb_class(left, m) {
                            return false;
                        }
                        cur = right;
                    }
                    _ => return false,
                }
            }
            matches!(&**cur, DecoratedBinaryTree::Leaf)
        }
    }
}

fn right_comb(dec: Term, lefts: Vec<DecoratedBinaryTree>) -> DecoratedBinaryTree {
    let mut result = DecoratedBinaryTree::Leaf;
    for (i, left) in lefts.into_iter().enumerate().rev() {
        let d = if i == 0 { dec.clone() } else { Term::Leaf };
        result = DecoratedBinaryTree::node(d, left, result);
    }
    result
}

/// Turn a tree over the arity-`(m+1)` generator into a decorated binary
/// tree: strip first subterms into a spine decoration and hang the stripped
/// subterms, recursively converted, on the comb's leaves.
pub fn to_binary_tree(t: &Term, m: usize) -> Result<DecoratedBinaryTree> {
    if m == 0 {
        return Err(Error::InvalidInput("the spine arity must be positive".into()));
    }
    if !is_m_tree(t, m) {
        return Err(Error::InvalidInput(format!(
            "expected a term over the arity-{} generator",
            m + 1
        )));
    }
    // Forgotten first subterms are collected in preorder of the spine:
    // each node pushes its own before its remaining children are stripped.
    fn strip(t: &Term, m: usize, forgotten: &mut Vec<Term>) -> Term {
        match t {
            Term::Leaf => Term::Leaf,
            Term::Node { children, .. } => {
                forgotten.push(children[0].clone());
                let rest: Vec<Term> = children[1..]
                    .iter()
                    .map(|c| strip(c, m, forgotten))
                    .collect();
                Term::node(nat_gen(m), rest)
            }
        }
    }
    fn rec(t: &Term, m: usize) -> DecoratedBinaryTree {
        match t {
            Term::Leaf => DecoratedBinaryTree::Leaf,
            Term::Node { .. } => {
                let mut forgotten = Vec::new();
                let spine = strip(t, m, &mut forgotten);
                let lefts: Vec<DecoratedBinaryTree> =
                    forgotten.iter().map(|s| rec(s, m)).collect();
                right_comb(spine, lefts)
            }
        }
    }
    Ok(rec(t, m))
}

/// Inverse of [`to_binary_tree`] on the comb class.
pub fn from_binary_tree(r: &DecoratedBinaryTree, m: usize) -> Result<Term> {
    if !in_comb_class(r, m) {
        return Err(Error::InvalidInput(
            "binary tree is outside the comb class".into(),
        ));
    }
    fn expand_with(s: &Term, m: usize, firsts: &mut std::vec::IntoIter<Term>) -> Term {
        match s {
            Term::Leaf => Term::Leaf,
            Term::Node { children, .. } => {
                let first = firsts.next().expect("one stripped subterm per node");
                let mut kids = vec![first];
                kids.extend(children.iter().map(|c| expand_with(c, m, firsts)));
                Term::node(nat_gen(m + 1), kids)
            }
        }
    }
    fn rec(r: &DecoratedBinaryTree, m: usize) -> Term {
        match r {
            DecoratedBinaryTree::Leaf => Term::Leaf,
            DecoratedBinaryTree::Node { dec, left, right } => {
                let mut lefts = vec![rec(left, m)];
                let mut cur = right;
                for _ in 1..dec.degree() {
                    if let DecoratedBinaryTree::Node { left, right, .. } = &**cur {
                        lefts.push(rec(left, m));
                        cur = right;
                    }
                }
                expand_with(dec, m, &mut lefts.into_iter())
            }
        }
    }
    Ok(rec(r, m))
}

/// Inorder decorations of a binary tree, packed under a root of matching
/// arity; leaf decorations become leaves.
pub fn binary_tree_forest(r: &DecoratedBinaryTree) -> Result<Term> {
    let n = r.degree();
    if n > MAX_ARITY {
        return Err(Error::ArityTooLarge(n));
    }
    let mut decorations = Vec::with_capacity(n);
    fn inorder(r: &DecoratedBinaryTree, out: &mut Vec<Term>) {
        if let DecoratedBinaryTree::Node { dec, left, right } = r {
            inorder(left, out);
            out.push(dec.clone());
            inorder(right, out);
        }
    }
    inorder(r, &mut decorations);
    Ok(Term::node(nat_gen(n), decorations))
}

/// Inverse of [`binary_tree_forest`] on forests satisfying the suffix
/// degree condition: peel the earliest component whose trailing leaves
/// match its degree, and splice its comb back at the matching gap.
pub fn forest_binary_tree(f: &Term, m: usize) -> Result<DecoratedBinaryTree> {
    if m == 0 {
        return Err(Error::InvalidInput("the spine arity must be positive".into()));
    }
    let children = match f {
        Term::Node { gen, children } if nat_index(gen) == Some(children.len()) => children,
        _ => return Err(Error::InvalidInput("expected a forest".into())),
    };
    let n = children.len();
    for c in children {
        if !is_m_tree(c, m - 1) {
            return Err(Error::InvalidInput(format!(
                "forest components must be terms over the arity-{m} generator"
            )));
        }
    }
    if n == 0 {
        return Ok(DecoratedBinaryTree::Leaf);
    }
    let mut pick = None;
    for (idx, c) in children.iter().enumerate() {
        let k = c.degree();
        if k == 0 {
            continue;
        }
        if idx + k <= n && children[idx + 1..idx + k].iter().all(Term::is_leaf) {
            pick = Some((idx, k));
            break;
        }
    }
    let (idx, k) = pick.ok_or_else(|| {
        Error::InvalidInput("forest does not satisfy the suffix degree condition".into())
    })?;
    let mut rest: Vec<Term> = Vec::with_capacity(n - k);
    rest.extend_from_slice(&children[..idx]);
    rest.extend_from_slice(&children[idx + k..]);
    let smaller = Term::node(nat_gen(n - k), rest);
    let base = forest_binary_tree(&smaller, m)?;
    let comb = right_comb(children[idx].clone(), vec![DecoratedBinaryTree::Leaf; k]);
    let mut gap = idx + 1;
    Ok(base.with_leaf_replaced(&mut gap, &comb))
}

/// Check that a forest belongs to the Fuss-Catalan poset support: balanced,
/// constant decorations, and every suffix of components has total degree at
/// most its length.
pub fn satisfies_suffix_condition(f: &Term) -> bool {
    let children = match f {
        Term::Node { gen, children } if nat_index(gen) == Some(children.len()) => children,
        _ => return false,
    };
    let n = children.len();
    let mut tail = 0usize;
    for l in 1..=n {
        tail += children[n - l].degree();
        if tail > l {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{leq, upper_set};
    use crate::term::{parse_forest, parse_term};

    fn sig() -> Signature {
        Signature::a_family(8)
    }

    #[test]
    fn extremal_forests_worked_example() {
        let w: Vec<String> = ["a2", "a1", "a0", "a0", "a0", "a3", "a2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let up = min_forest(&w, &sig()).unwrap();
        let down = max_forest(&w, &sig()).unwrap();
        assert_eq!(
            up.render(),
            "7:(a2(*,*),a1(*),a0,a0,a0,a3(*,*,*),a2(*,*))"
        );
        assert_eq!(
            down.render(),
            "7:(a2(a1(a0),a0),a0,a3(a2(*,*),*,*),*,*,*,*)"
        );
        assert!(crate::term::is_balanced_forest(&up));
        assert!(crate::term::is_balanced_forest(&down));
        assert!(leq(&up, &down));
    }

    #[test]
    fn empty_word_gives_empty_forest() {
        let up = min_forest(&[], &sig()).unwrap();
        assert_eq!(up.render(), "0:()");
        assert_eq!(up, max_forest(&[], &sig()).unwrap());
    }

    #[test]
    fn forest_interval_matches_term_poset() {
        // Same Hasse diagram as the running 14-element poset, with the root
        // decoration renamed to the natural number 3.
        let w: Vec<String> = ["a3", "a1", "a2"].iter().map(|s| s.to_string()).collect();
        let p = balanced_forest_poset(&TiltSet::empty(), &w, &sig(), 10_000).unwrap();
        assert_eq!(p.len(), 14);
        let base = parse_term("a3(a3(*,*,*), a1(*), a2(*,*))", &sig()).unwrap();
        let q = upper_set(&base, 10_000).unwrap();
        assert_eq!(p.covers().len(), q.covers().len());
        let top = max_forest(&w, &sig()).unwrap();
        assert_eq!(p.maximal_elements().len(), 1);
        assert_eq!(p.element(p.maximal_elements()[0]), &top);
    }

    #[test]
    fn fuss_catalan_counts_small() {
        assert_eq!(fuss_catalan_count(1, 4).unwrap(), 14);
        assert_eq!(fuss_catalan_count(2, 3).unwrap(), 12);
        assert_eq!(fuss_catalan_count(3, 4).unwrap(), 140);
        assert_eq!(fuss_catalan_poset(1, 4, 10_000).unwrap().len(), 14);
        assert_eq!(fuss_catalan_poset(2, 3, 10_000).unwrap().len(), 12);
    }

    #[test]
    fn rooted_tree_poset_sizes() {
        assert_eq!(rooted_tree_poset(0, 100).unwrap().len(), 1);
        assert_eq!(
            rooted_tree_poset(0, 100).unwrap().element(0).render(),
            "0:()"
        );
        assert_eq!(rooted_tree_poset(4, 10_000).unwrap().len(), 14);
        assert_eq!(rooted_tree_poset(5, 10_000).unwrap().len(), 42);
    }

    #[test]
    fn underlying_tree_worked_example() {
        let t = parse_term(
            "a4(*, a2(a1(*), a0), *, a3(a2(*,*), *, *))",
            &sig(),
        )
        .unwrap();
        let r = underlying_tree(&t).unwrap();
        assert_eq!(r.size(), 6);
        assert_eq!(r.scope_sequence(), vec![5, 2, 0, 0, 1, 0]);
        let expected = RootedTree(vec![
            RootedTree(vec![RootedTree::default(), RootedTree::default()]),
            RootedTree(vec![RootedTree::default()]),
        ]);
        assert_eq!(r, expected);
    }

    #[test]
    fn tree_term_worked_example() {
        let r = RootedTree(vec![
            RootedTree(vec![RootedTree::default(), RootedTree::default()]),
            RootedTree(vec![RootedTree::default()]),
        ]);
        let t = tree_term(&r).unwrap();
        assert_eq!(
            t.render(),
            "5:(n4(n3(*,*,*),n2(*,*),*,*),n1(n0),*,*,*)"
        );
        assert_eq!(underlying_tree(&t).unwrap(), r);
        // One node maps to the empty forest; the two-node path to 1:(n0).
        assert_eq!(tree_term(&RootedTree::default()).unwrap().render(), "0:()");
        let path2 = RootedTree(vec![RootedTree::default()]);
        assert_eq!(tree_term(&path2).unwrap(), corolla_row(1).unwrap());
    }

    #[test]
    fn tamari_comparisons() {
        let r = RootedTree(vec![
            RootedTree(vec![RootedTree::default(), RootedTree::default()]),
            RootedTree(vec![RootedTree::default()]),
        ]);
        assert!(tamari_leq(&r, &r).unwrap());
        // The linear path dominates everything of its size.
        fn path(n: usize) -> RootedTree {
            let mut t = RootedTree::default();
            for _ in 1..n {
                t = RootedTree(vec![t]);
            }
            t
        }
        let p = rooted_tree_poset(4, 10_000).unwrap();
        let top = path(5);
        for e in p.elements() {
            assert!(tamari_leq(&underlying_tree(e).unwrap(), &top).unwrap());
        }
        assert!(tamari_leq(&r, &path(2)).is_err());
    }

    #[test]
    fn binary_tree_worked_example() {
        // Degree-7 input over the arity-4 generator.
        let nat = Signature::nat();
        let t = parse_term(
            "n4(n4(*,*,*,*), n4(*,*,*,*), *, n4(n4(n4(*,*,*,*), *, *, n4(*,*,*,*)), *, *, *))",
            &nat,
        )
        .unwrap();
        let r = to_binary_tree(&t, 3).unwrap();
        assert!(in_comb_class(&r, 3));
        let f = binary_tree_forest(&r).unwrap();
        assert_eq!(
            f.render(),
            "7:(n3(*,*,*),n3(n3(*,*,*),*,n3(*,*,*)),*,n3(*,*,*),n3(*,*,n3(*,*,*)),*,*)"
        );
        assert!(satisfies_suffix_condition(&f));
        assert_eq!(from_binary_tree(&r, 3).unwrap(), t);
        assert_eq!(forest_binary_tree(&f, 3).unwrap(), r);
        // Leaves map to leaves and to the empty forest.
        assert_eq!(
            to_binary_tree(&Term::Leaf, 3).unwrap(),
            DecoratedBinaryTree::Leaf
        );
        assert_eq!(
            binary_tree_forest(&DecoratedBinaryTree::Leaf)
                .unwrap()
                .render(),
            "0:()"
        );
    }

    #[test]
    fn comb_class_requires_terminal_leaf() {
        let nat = Signature::nat();
        let chain = parse_term("n1(*)", &nat).unwrap();
        let bad = DecoratedBinaryTree::node(
            chain.clone(),
            DecoratedBinaryTree::Leaf,
            DecoratedBinaryTree::node(
                chain.clone(),
                DecoratedBinaryTree::Leaf,
                DecoratedBinaryTree::Leaf,
            ),
        );
        assert!(!in_comb_class(&bad, 1));
        assert!(from_binary_tree(&bad, 1).is_err());
        let f = parse_forest("2:(n1(n1(*)), *)", &nat).unwrap();
        assert!(satisfies_suffix_condition(&f));
        let r = forest_binary_tree(&f, 1).unwrap();
        assert_eq!(binary_tree_forest(&r).unwrap(), f);
    }
}
