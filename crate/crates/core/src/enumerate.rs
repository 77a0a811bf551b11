//! Exhaustive enumeration of small structures, used by the oracle suites
//! and the verification flags.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::forest::RootedTree;
use crate::hopf::LeaningForest;
use crate::signature::Signature;
use crate::term::Term;

/// All terms whose decoration word (in preorder) is exactly `word`.
pub fn terms_with_decoration_word(word: &[String], sig: &Signature) -> Result<Vec<Term>> {
    if word.is_empty() {
        return Ok(vec![Term::Leaf]);
    }
    let mut arities = Vec::with_capacity(word.len());
    for name in word {
        arities.push(sig.arity_of(name).ok_or_else(|| Error::UnknownGenerator {
            name: name.clone(),
            pos: 0,
        })?);
    }

    struct Ctx<'a> {
        word: &'a [String],
        arities: &'a [usize],
        memo: HashMap<(usize, usize), Rc<Vec<Term>>>,
    }

    // Terms spelling word[start..end]; the root is word[start] and the rest
    // splits into consecutive blocks, one per child slot (empty = leaf).
    fn block(ctx: &mut Ctx, start: usize, end: usize) -> Rc<Vec<Term>> {
        if let Some(hit) = ctx.memo.get(&(start, end)) {
            return hit.clone();
        }
        let arity = ctx.arities[start];
        let mut result: Vec<Term> = Vec::new();
        let mut partial: Vec<(usize, Vec<Term>)> = vec![(start + 1, Vec::new())];
        for slot in 0..arity {
            let mut next = Vec::new();
            for (pos, children) in partial {
                let last_slot = slot + 1 == arity;
                // A leaf consumes nothing.
                if !last_slot || pos == end {
                    let mut with_leaf = children.clone();
                    with_leaf.push(Term::Leaf);
                    next.push((pos, with_leaf));
                }
                let cuts: Vec<usize> = if last_slot {
                    if pos < end {
                        vec![end]
                    } else {
                        vec![]
                    }
                } else {
                    ((pos + 1)..=end).collect()
                };
                for cut in cuts {
                    for sub in block(ctx, pos, cut).iter() {
                        let mut with_sub = children.clone();
                        with_sub.push(sub.clone());
                        next.push((cut, with_sub));
                    }
                }
            }
            partial = next;
        }
        for (pos, children) in partial {
            if pos == end {
                result.push(Term::node(ctx.word[start].clone(), children));
            }
        }
        let rc = Rc::new(result);
        ctx.memo.insert((start, end), rc.clone());
        rc
    }

    let mut ctx = Ctx {
        word,
        arities: &arities,
        memo: HashMap::new(),
    };
    if arities[0] == 0 && word.len() > 1 {
        return Ok(Vec::new());
    }
    Ok(block(&mut ctx, 0, word.len()).as_ref().clone())
}

/// All words of the given length over the listed generator names.
pub fn words(gens: &[String], len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * gens.len());
        for w in &out {
            for g in gens {
                let mut w = w.clone();
                w.push(g.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All terms of the given degree over the listed generators, in canonical
/// text order. Degree zero yields the bare leaf.
pub fn terms_of_degree(sig: &Signature, gens: &[String], degree: usize) -> Result<Vec<Term>> {
    if degree == 0 {
        return Ok(vec![Term::Leaf]);
    }
    let mut out = Vec::new();
    for word in words(gens, degree) {
        out.extend(terms_with_decoration_word(&word, sig)?);
    }
    out.sort_by_key(|t| t.render());
    Ok(out)
}

/// All nonempty terms of degree at most `max_degree`.
pub fn terms_up_to_degree(
    sig: &Signature,
    gens: &[String],
    max_degree: usize,
) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        out.extend(terms_of_degree(sig, gens, d)?);
    }
    Ok(out)
}

/// All leaning forests of the given size, enumerated through their
/// description as words of nonempty terms.
pub fn leaning_forests_of_size(
    sig: &Signature,
    gens: &[String],
    size: usize,
) -> Result<Vec<LeaningForest>> {
    let mut by_degree: Vec<Vec<Term>> = vec![Vec::new()];
    for d in 1..=size {
        by_degree.push(terms_of_degree(sig, gens, d)?);
    }
    let mut out: Vec<LeaningForest> = Vec::new();
    fn rec(
        by_degree: &[Vec<Term>],
        remaining: usize,
        acc: &mut Vec<Term>,
        out: &mut Vec<LeaningForest>,
    ) {
        if remaining == 0 {
            out.push(
                LeaningForest::from_components(acc.clone())
                    .expect("nonempty components pack into a leaning forest"),
            );
            return;
        }
        for d in 1..=remaining {
            for t in &by_degree[d] {
                acc.push(t.clone());
                rec(by_degree, remaining - d, acc, out);
                acc.pop();
            }
        }
    }
    let mut acc = Vec::new();
    rec(&by_degree, size, &mut acc, &mut out);
    out.sort_by(|a, b| a.text().cmp(b.text()));
    Ok(out)
}

/// All ordered rooted trees with the given number of nodes.
pub fn rooted_trees(nodes: usize) -> Vec<RootedTree> {
    fn forests(total: usize, memo: &mut Vec<Option<Rc<Vec<Vec<RootedTree>>>>>) -> Rc<Vec<Vec<RootedTree>>> {
        if let Some(hit) = &memo[total] {
            return hit.clone();
        }
        let mut out: Vec<Vec<RootedTree>> = Vec::new();
        if total == 0 {
            out.push(Vec::new());
        } else {
            for first in 1..=total {
                let heads = trees(first, memo);
                let tails = forests(total - first, memo);
                for head in heads.iter() {
                    for tail in tails.iter() {
                        let mut f = Vec::with_capacity(1 + tail.len());
                        f.push(head.clone());
                        f.extend(tail.iter().cloned());
                        out.push(f);
                    }
                }
            }
        }
        let rc = Rc::new(out);
        memo[total] = Some(rc.clone());
        rc
    }
    fn trees(nodes: usize, memo: &mut Vec<Option<Rc<Vec<Vec<RootedTree>>>>>) -> Vec<RootedTree> {
        forests(nodes - 1, memo)
            .iter()
            .map(|f| RootedTree(f.clone()))
            .collect()
    }
    if nodes == 0 {
        return Vec::new();
    }
    let mut memo = vec![None; nodes];
    trees(nodes, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn sig() -> Signature {
        Signature::a_family(8)
    }

    fn gens(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn class_of_one_word() {
        let word = gens(&["a2", "a1", "a0"]);
        let class = terms_with_decoration_word(&word, &sig()).unwrap();
        let expected = [
            "a2(*,a1(a0))",
            "a2(a1(*),a0)",
            "a2(a1(a0),*)",
        ];
        let mut texts: Vec<String> = class.iter().map(|t| t.render()).collect();
        texts.sort();
        assert_eq!(texts, expected);
    }

    #[test]
    fn degree_counts_match_generating_series() {
        // T = x (4 + 6 T + 4 T^2 + T^3) over the arities {0, 1, 2, 3}.
        let g = gens(&["a0", "a1", "a2", "a3"]);
        let counts: Vec<usize> = (1..=4)
            .map(|d| terms_of_degree(&sig(), &g, d).unwrap().len())
            .collect();
        assert_eq!(counts, vec![4, 24, 208, 2080]);
    }

    #[test]
    fn nullary_root_blocks_extensions() {
        let class =
            terms_with_decoration_word(&gens(&["a0", "a1"]), &sig()).unwrap();
        assert!(class.is_empty());
        let single = terms_with_decoration_word(&gens(&["a0"]), &sig()).unwrap();
        assert_eq!(single, vec![parse_term("a0", &sig()).unwrap()]);
    }

    #[test]
    fn rooted_tree_counts_are_catalan() {
        let counts: Vec<usize> = (1..=6).map(|n| rooted_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn leaning_forest_counts() {
        let g = gens(&["a0", "a1", "a2"]);
        let l1 = leaning_forests_of_size(&sig(), &g, 1).unwrap();
        assert_eq!(l1.len(), 3);
        let l2 = leaning_forests_of_size(&sig(), &g, 2).unwrap();
        // Words of terms with total degree two: 9 pairs plus 9 single terms.
        assert_eq!(l2.len(), 18);
    }
}
