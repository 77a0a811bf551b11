//! Connection words and the easterly-wind partial order.
//!
//! Every internal node contributes one dyadic coordinate
//! `pa(i) + 1 - 2^(lp(i) - arity(pa(i)))`; in binary fixed-point notation
//! this is the parent index followed by one `1` per internal sibling to the
//! right. Terms with equal decoration words are compared coordinatewise.
//! The covering relation relocates the subterm rooted at a node onto the
//! leaf visited immediately before it.

use std::collections::{BTreeMap, VecDeque};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::signature::Signature;
use crate::term::{Edge, Flat, Term, Visit};

pub(crate) fn connection_word_flat(flat: &Flat) -> Vec<Dyadic> {
    (1..=flat.degree())
        .map(|i| {
            let pa = flat.parent[i - 1];
            let lp = flat.position[i - 1];
            let ar = flat.arity[pa - 1];
            debug_assert!(lp <= ar);
            let k = (ar - lp) as u32;
            Dyadic::new(((pa as i128 + 1) << k) - 1, k)
        })
        .collect()
}

/// The connection word of a term, one exact dyadic per internal node.
pub fn connection_word(t: &Term) -> Vec<Dyadic> {
    connection_word_flat(&Flat::of(t))
}

pub(crate) fn term_from_connection_arities(
    gens: &[String],
    arities: &[usize],
    word: &[Dyadic],
) -> Result<Term> {
    if gens.len() != word.len() {
        return Err(Error::LengthMismatch {
            expected: gens.len(),
            found: word.len(),
        });
    }
    let n = gens.len();
    let mut flat = Flat {
        gens: gens.to_vec(),
        arity: arities.to_vec(),
        parent: Vec::with_capacity(n),
        position: Vec::with_capacity(n),
    };
    for (i, value) in word.iter().enumerate() {
        let i = i + 1;
        if value.num() <= 0 {
            return Err(Error::NotRealizable(format!(
                "entry {i} is not positive"
            )));
        }
        let parent = value.floor();
        if parent < 1 || parent > n as i128 {
            return Err(Error::NotRealizable(format!(
                "entry {i} lies outside every node interval"
            )));
        }
        let parent = parent as usize;
        // parent + 1 - value must be a power of two 2^(lp - arity).
        let residue_num = ((parent as i128 + 1) << value.den_exp()) - value.num();
        let residue = Dyadic::new(residue_num, value.den_exp());
        if residue.num() != 1 {
            return Err(Error::NotRealizable(format!(
                "entry {i} has a non-dyadic-power residue"
            )));
        }
        let ar = arities[parent - 1];
        let k = residue.den_exp() as usize;
        if k > ar {
            return Err(Error::NotRealizable(format!(
                "entry {i} needs a parent of arity at least {k}"
            )));
        }
        let lp = ar - k;
        if i == 1 {
            if parent != 1 || lp != 0 {
                return Err(Error::NotRealizable(
                    "first entry must encode the root loop".into(),
                ));
            }
        } else if lp == 0 {
            return Err(Error::NotRealizable(format!(
                "entry {i} encodes local position 0 off the root"
            )));
        }
        flat.parent.push(parent);
        flat.position.push(lp);
    }
    flat.to_term()
}

/// Rebuild the unique term with decoration word `word` and the given
/// connection word, if one exists.
pub fn term_from_connection(
    gens: &[String],
    word: &[Dyadic],
    sig: &Signature,
) -> Result<Term> {
    let mut arities = Vec::with_capacity(gens.len());
    for g in gens {
        arities.push(sig.arity_of(g).ok_or_else(|| Error::UnknownGenerator {
            name: g.clone(),
            pos: 0,
        })?);
    }
    term_from_connection_arities(gens, &arities, word)
}

/// Edge domination: `(p1, -j1)` lexicographically at most `(p2, -j2)`,
/// for two parent edges of one child.
pub fn dominates(e1: &Edge, e2: &Edge) -> Result<bool> {
    if e1.child != e2.child {
        return Err(Error::EdgeChildMismatch);
    }
    Ok((e1.parent, -(e1.position as i64)) <= (e2.parent, -(e2.position as i64)))
}

/// The easterly-wind order via coordinatewise connection-word comparison.
pub fn leq(t1: &Term, t2: &Term) -> bool {
    let (f1, f2) = (Flat::of(t1), Flat::of(t2));
    if f1.gens != f2.gens {
        return false;
    }
    connection_word_flat(&f1)
        .iter()
        .zip(connection_word_flat(&f2))
        .all(|(a, b)| *a <= b)
}

/// The same order via per-node edge domination; kept as a cross-check.
pub fn leq_by_edge_domination(t1: &Term, t2: &Term) -> bool {
    let (f1, f2) = (Flat::of(t1), Flat::of(t2));
    if f1.gens != f2.gens {
        return false;
    }
    f1.edges()
        .iter()
        .zip(f2.edges())
        .all(|(a, b)| dominates(a, &b).expect("same child index"))
}

/// Apply the rewrite rule at node `i`: relocate the subterm rooted at `i`
/// onto the leaf visited immediately before it, when that predecessor is a
/// leaf. `None` encodes inapplicability (including `i = 1` and out-of-range
/// indices).
pub fn rewrite(t: &Term, i: usize) -> Option<Term> {
    let flat = Flat::of(t);
    if i < 1 || i > flat.degree() {
        return None;
    }
    let walk = flat.walk();
    let at = walk.iter().position(|v| *v == Visit::Node(i))?;
    if at == 0 {
        return None;
    }
    match walk[at - 1] {
        Visit::Leaf { parent, position } => {
            let mut moved = flat;
            moved.parent[i - 1] = parent;
            moved.position[i - 1] = position;
            Some(moved.to_term().expect("rewrite keeps the term well-formed"))
        }
        Visit::Node(_) => None,
    }
}

/// All applicable rewrites of a term, as `(node index, result)` pairs.
pub fn rewrite_successors(t: &Term) -> Vec<(usize, Term)> {
    let flat = Flat::of(t);
    let walk = flat.walk();
    let mut out = Vec::new();
    for pair in walk.windows(2) {
        if let [Visit::Leaf { parent, position }, Visit::Node(i)] = *pair {
            let mut moved = flat.clone();
            moved.parent[i - 1] = parent;
            moved.position[i - 1] = position;
            out.push((
                i,
                moved.to_term().expect("rewrite keeps the term well-formed"),
            ));
        }
    }
    out
}

/// The set of terms greater than or equal to `t`, with its covering pairs,
/// built by breadth-first closure under the rewrite rule.
pub fn upper_set(t: &Term, ceiling: usize) -> Result<Poset> {
    let mut elements: Vec<Term> = vec![t.clone()];
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    seen.insert(t.render(), 0);
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while !queue.is_empty() {
        let frontier: Vec<usize> = queue.drain(..).collect();
        let expand = |&u: &usize| {
            let succ = rewrite_successors(&elements[u]);
            succ.into_iter()
                .map(|(_, s)| (u, s.render(), s))
                .collect::<Vec<_>>()
        };
        #[cfg(feature = "parallel")]
        let batches: Vec<Vec<(usize, String, Term)>> = {
            use rayon::prelude::*;
            frontier.par_iter().map(expand).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let batches: Vec<Vec<(usize, String, Term)>> = frontier.iter().map(expand).collect();
        for batch in batches {
            for (u, text, s) in batch {
                let idx = match seen.get(&text) {
                    Some(&idx) => idx,
                    None => {
                        let idx = elements.len();
                        if idx >= ceiling {
                            return Err(Error::CeilingExceeded(ceiling));
                        }
                        elements.push(s);
                        seen.insert(text, idx);
                        queue.push_back(idx);
                        idx
                    }
                };
                covers.push((u, idx));
            }
        }
    }
    Poset::from_parts(elements, covers)
}

/// Componentwise-maximum join of two terms of a common terminal interval.
pub fn join(t1: &Term, t2: &Term) -> Result<Term> {
    let (f1, f2) = (Flat::of(t1), Flat::of(t2));
    if f1.gens != f2.gens {
        return Err(Error::DecorationMismatch);
    }
    let joined: Vec<Dyadic> = connection_word_flat(&f1)
        .into_iter()
        .zip(connection_word_flat(&f2))
        .map(|(a, b)| a.max(b))
        .collect();
    term_from_connection_arities(&f1.gens, &f1.arity, &joined)
}

/// Greatest common lower bound of two elements within a poset, by brute
/// force over the element set.
pub fn meet_in(p: &Poset, t1: &Term, t2: &Term) -> Result<Term> {
    let i1 = p.index_of(t1).ok_or(Error::NotInPoset)?;
    let i2 = p.index_of(t2).ok_or(Error::NotInPoset)?;
    let matrix = p.above_matrix();
    let candidates: Vec<usize> = (0..p.len())
        .filter(|&k| Poset::matrix_has(&matrix[k], i1) && Poset::matrix_has(&matrix[k], i2))
        .collect();
    let mut best: Option<usize> = None;
    for &c in &candidates {
        match best {
            None => best = Some(c),
            Some(b) => {
                if Poset::matrix_has(&matrix[b], c) {
                    best = Some(c);
                }
            }
        }
    }
    let b = best.ok_or_else(|| Error::Internal("no common lower bound".into()))?;
    for &c in &candidates {
        if !Poset::matrix_has(&matrix[c], b) {
            return Err(Error::Internal(
                "common lower bounds have no greatest element".into(),
            ));
        }
    }
    Ok(p.element(b).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn sig() -> Signature {
        Signature::a_family(8)
    }

    fn t(text: &str) -> Term {
        parse_term(text, &sig()).unwrap()
    }

    fn d(num: i128, den_exp: u32) -> Dyadic {
        Dyadic::new(num, den_exp)
    }

    /// Left-hand term of the two running rewrite examples.
    pub(crate) fn running_term() -> Term {
        t("a3(a2(*, a2(a1(*), *)), a2(*, a0), a1(*))")
    }

    #[test]
    fn connection_word_of_running_pair() {
        let t1 = running_term();
        let t2 = rewrite(&t1, 5).unwrap();
        assert_eq!(
            connection_word(&t1),
            vec![d(15, 3), d(7, 2), d(2, 0), d(7, 1), d(3, 1), d(5, 0), d(1, 0)]
        );
        assert_eq!(
            connection_word(&t2),
            vec![d(15, 3), d(7, 2), d(2, 0), d(7, 1), d(3, 0), d(5, 0), d(1, 0)]
        );
        assert!(leq(&t1, &t2));
    }

    #[test]
    fn connection_word_of_corollas() {
        for k in 1..=6usize {
            let c = crate::term::corolla(&sig(), &format!("a{k}")).unwrap();
            assert_eq!(connection_word(&c), vec![d((2 << k) - 1, k as u32)]);
        }
    }

    #[test]
    fn rewrite_examples() {
        let base = running_term();
        assert_eq!(
            rewrite(&base, 3).unwrap(),
            t("a3(a2(a2(a1(*), *), *), a2(*, a0), a1(*))")
        );
        assert_eq!(
            rewrite(&base, 5).unwrap(),
            t("a3(a2(*, a2(a1(*), a2(*, a0))), *, a1(*))")
        );
        // No leaf precedes nodes 1, 2; node 7 is preceded by node 6.
        assert_eq!(rewrite(&base, 1), None);
        assert_eq!(rewrite(&base, 2), None);
        assert_eq!(rewrite(&base, 7), None);
        assert_eq!(rewrite(&base, 99), None);
    }

    #[test]
    fn rewrite_changes_one_dominated_edge() {
        let base = running_term();
        for (i, next) in rewrite_successors(&base) {
            assert_eq!(base.decoration_word(), next.decoration_word());
            let e1 = crate::term::structure(&base).edges;
            let e2 = crate::term::structure(&next).edges;
            let diffs: Vec<usize> = e1
                .iter()
                .zip(&e2)
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(k, _)| k + 1)
                .collect();
            assert_eq!(diffs, vec![i]);
            assert!(dominates(&e1[i - 1], &e2[i - 1]).unwrap());
        }
    }

    #[test]
    fn domination_examples() {
        let e = |parent, position, child| Edge {
            parent,
            position,
            child,
        };
        assert!(dominates(&e(2, 5, 4), &e(3, 7, 4)).unwrap());
        assert!(dominates(&e(2, 5, 4), &e(2, 3, 4)).unwrap());
        assert!(!dominates(&e(2, 5, 4), &e(1, 1, 4)).unwrap());
        assert!(!dominates(&e(2, 5, 4), &e(2, 6, 4)).unwrap());
        assert!(dominates(&e(2, 5, 4), &e(2, 5, 4)).unwrap());
        assert!(dominates(&e(2, 5, 4), &e(2, 5, 7)).is_err());
    }

    #[test]
    fn leq_is_reflexive_and_respects_decorations() {
        let a = running_term();
        assert!(leq(&a, &a));
        assert!(!leq(&a, &t("a1(*)")));
    }

    #[test]
    fn connection_roundtrip_and_rejections() {
        let a = running_term();
        let word = connection_word(&a);
        let rebuilt =
            term_from_connection(&a.decoration_word(), &word, &sig()).unwrap();
        assert_eq!(rebuilt, a);

        // dc = a1, cnc = (3/2) forces the unique degree-1 term.
        let built = term_from_connection(&["a1".into()], &[d(3, 1)], &sig()).unwrap();
        assert_eq!(built, t("a1(*)"));

        // Second entry 9/4 has residue 3/4, not a power of two.
        let bad = term_from_connection(
            &["a2".into(), "a0".into()],
            &[d(7, 2), d(9, 2)],
            &sig(),
        );
        assert!(matches!(bad, Err(Error::NotRealizable(_))));
    }

    #[test]
    fn join_worked_example() {
        let left = t("a3(*, a3(*, a0, *), a3(*,*,*))");
        let right = t("a3(a3(*,*,a0), a3(*,*,*), *)");
        let expected = t("a3(a3(*, a0, *), a3(*,*,*), *)");
        assert_eq!(join(&left, &right).unwrap(), expected);
        assert_eq!(join(&left, &left).unwrap(), left);
        assert!(matches!(
            join(&left, &t("a1(*)")),
            Err(Error::DecorationMismatch)
        ));
    }

    #[test]
    fn upper_set_of_maximal_term_is_singleton() {
        // Every leaf comes after every internal node.
        let m = t("a2(a2(a0, a0), *)");
        let p = upper_set(&m, 1000).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.covers().is_empty());
    }

    #[test]
    fn ceiling_is_enforced() {
        let base = t("a3(a3(*,*,*), a1(*), a2(*,*))");
        assert!(matches!(
            upper_set(&base, 5),
            Err(Error::CeilingExceeded(5))
        ));
    }
}
