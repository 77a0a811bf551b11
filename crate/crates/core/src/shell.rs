//! Edge labeling of covering pairs and exact Möbius computation.
//!
//! A covering pair replaces a single parent edge `(p, j, i)` by a dominating
//! one; its label is the triple `(i, p, -j)` compared lexicographically.
//! Every interval then carries a unique strictly increasing maximal chain
//! (the lexicographically least one) and at most one weakly decreasing
//! maximal chain, which pins the Möbius function to `{-1, 0, 1}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::order::{leq, rewrite, rewrite_successors, upper_set};
use crate::poset::Poset;
use crate::term::{Flat, Term};
use crate::tilt::{is_tilted, tilt, TiltSet};

/// Label of a covering pair, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverLabel {
    pub node: usize,
    pub old_parent: usize,
    pub neg_position: i64,
}

/// The label `(i, p, -j)` of a covering pair, where `(p, j, i)` is the edge
/// of the lower term that the rewrite replaces.
pub fn el_label(t1: &Term, t2: &Term) -> Result<CoverLabel> {
    let (f1, f2) = (Flat::of(t1), Flat::of(t2));
    if f1.gens != f2.gens {
        return Err(Error::NotCovering);
    }
    let mut moved: Option<usize> = None;
    for i in 1..=f1.degree() {
        if f1.parent[i - 1] != f2.parent[i - 1] || f1.position[i - 1] != f2.position[i - 1] {
            if moved.is_some() {
                return Err(Error::NotCovering);
            }
            moved = Some(i);
        }
    }
    let i = moved.ok_or(Error::NotCovering)?;
    if rewrite(t1, i).as_ref() != Some(t2) {
        return Err(Error::NotCovering);
    }
    Ok(CoverLabel {
        node: i,
        old_parent: f1.parent[i - 1],
        neg_position: -(f1.position[i - 1] as i64),
    })
}

/// All saturated chains from `t1` to `t2`, each listed bottom to top.
pub fn saturated_chains(t1: &Term, t2: &Term) -> Result<Vec<Vec<Term>>> {
    if !leq(t1, t2) {
        return Err(Error::NotComparable);
    }
    let mut out = Vec::new();
    let mut chain = vec![t1.clone()];
    fn dfs(chain: &mut Vec<Term>, top: &Term, out: &mut Vec<Vec<Term>>) {
        let cur = chain.last().expect("chain is nonempty").clone();
        if cur == *top {
            out.push(chain.clone());
            return;
        }
        for (_, next) in rewrite_successors(&cur) {
            if leq(&next, top) {
                chain.push(next);
                dfs(chain, top, out);
                chain.pop();
            }
        }
    }
    dfs(&mut chain, t2, &mut out);
    Ok(out)
}

fn topological(p: &Poset) -> Vec<usize> {
    let mut indegree: Vec<usize> = (0..p.len()).map(|i| p.lower_covers(i).len()).collect();
    let mut ready: Vec<usize> = (0..p.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(p.len());
    while let Some(v) = ready.pop() {
        order.push(v);
        for &w in p.upper_covers(v) {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    order
}

/// Möbius values `mu(x, -)` for every element above `x`, by the standard
/// bottom-up recursion over the poset.
pub fn mobius_from(p: &Poset, x: usize) -> Vec<i64> {
    let mut mu = vec![0i64; p.len()];
    let order = topological(p);
    for &z in &order {
        if z == x {
            mu[z] = 1;
        } else if p.leq_idx(x, z) {
            let mut total = 0i64;
            for w in 0..p.len() {
                if w != z && p.leq_idx(x, w) && p.leq_idx(w, z) {
                    total += mu[w];
                }
            }
            mu[z] = -total;
        }
    }
    mu
}

/// The Möbius function of an interval of `p`.
pub fn mobius(p: &Poset, x: &Term, y: &Term) -> Result<i64> {
    let ix = p.index_of(x).ok_or(Error::NotInPoset)?;
    let iy = p.index_of(y).ok_or(Error::NotInPoset)?;
    if !p.leq_idx(ix, iy) {
        return Err(Error::NotComparable);
    }
    Ok(mobius_from(p, ix)[iy])
}

/// Full Möbius table of a small poset.
pub fn mobius_all(p: &Poset) -> Vec<Vec<i64>> {
    (0..p.len()).map(|x| mobius_from(p, x)).collect()
}

/// Möbius value of a tilted interval computed through the closure theorem:
/// sum of untilted Möbius values over the tilting-map fiber of the top.
pub fn mobius_via_closure(
    x: &TiltSet,
    t1: &Term,
    t2: &Term,
    ceiling: usize,
) -> Result<i64> {
    if !is_tilted(x, t1) || !is_tilted(x, t2) {
        return Err(Error::NotTilted);
    }
    if !leq(t1, t2) {
        return Err(Error::NotComparable);
    }
    let ambient = upper_set(t1, ceiling)?;
    let bottom = ambient.index_of(t1).ok_or(Error::NotInPoset)?;
    let mu = mobius_from(&ambient, bottom);
    let mut total = 0i64;
    for (i, candidate) in ambient.elements().iter().enumerate() {
        if tilt(x, candidate) == *t2 {
            total += mu[i];
        }
    }
    Ok(total)
}

/// Outcome of the labeling checks over one poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElReport {
    pub elements: usize,
    pub comparable_pairs: usize,
    pub mobius_values_in_range: bool,
    pub failures: Vec<String>,
}

impl ElReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.mobius_values_in_range
    }
}

struct ChainCounts<'a> {
    p: &'a Poset,
    labels: BTreeMap<(usize, usize), CoverLabel>,
}

impl<'a> ChainCounts<'a> {
    fn new(p: &'a Poset) -> Result<ChainCounts<'a>> {
        let mut labels = BTreeMap::new();
        for &(a, b) in p.covers() {
            labels.insert((a, b), el_label(p.element(a), p.element(b))?);
        }
        Ok(ChainCounts { p, labels })
    }

    /// Number of maximal chains from `v` to `top` whose labels are strictly
    /// increasing and start strictly above `prev`.
    fn increasing(
        &self,
        v: usize,
        top: usize,
        prev: Option<CoverLabel>,
        memo: &mut BTreeMap<(usize, Option<CoverLabel>), u64>,
    ) -> u64 {
        if v == top {
            return 1;
        }
        if let Some(&c) = memo.get(&(v, prev)) {
            return c;
        }
        let mut total = 0;
        for &w in self.p.upper_covers(v) {
            if !self.p.leq_idx(w, top) {
                continue;
            }
            let label = self.labels[&(v, w)];
            if prev.is_none_or(|l| l < label) {
                total += self.increasing(w, top, Some(label), memo);
            }
        }
        memo.insert((v, prev), total);
        total
    }

    /// Number of maximal chains with weakly decreasing labels.
    fn weakly_decreasing(
        &self,
        v: usize,
        top: usize,
        prev: Option<CoverLabel>,
        memo: &mut BTreeMap<(usize, Option<CoverLabel>), u64>,
    ) -> u64 {
        if v == top {
            return 1;
        }
        if let Some(&c) = memo.get(&(v, prev)) {
            return c;
        }
        let mut total = 0;
        for &w in self.p.upper_covers(v) {
            if !self.p.leq_idx(w, top) {
                continue;
            }
            let label = self.labels[&(v, w)];
            if prev.is_none_or(|l| label <= l) {
                total += self.weakly_decreasing(w, top, Some(label), memo);
            }
        }
        memo.insert((v, prev), total);
        total
    }

    /// The lexicographically least maximal chain from `lo` to `hi`:
    /// greedily follow the smallest label (labels of distinct covers of one
    /// element are distinct). Returns the label word.
    fn lex_least_chain(&self, lo: usize, hi: usize) -> Vec<CoverLabel> {
        let mut word = Vec::new();
        let mut v = lo;
        while v != hi {
            let (w, label) = self
                .p
                .upper_covers(v)
                .iter()
                .filter(|&&w| self.p.leq_idx(w, hi))
                .map(|&w| (w, self.labels[&(v, w)]))
                .min_by_key(|&(_, l)| l)
                .expect("interval of a lattice has a maximal chain");
            word.push(label);
            v = w;
        }
        word
    }
}

/// Check, over every comparable pair of `p`, that exactly one maximal chain
/// has strictly increasing labels, that it is the lexicographically least
/// maximal chain of the pair, that at most one maximal chain has weakly
/// decreasing labels, and that the Möbius value is `(-1)^length` times the
/// weakly decreasing count (hence lies in `{-1, 0, 1}`).
///
/// Requires the covering pairs of `p` to be covering pairs of the ambient
/// order (true for rewrite-closure posets and their intervals).
pub fn el_check(p: &Poset) -> Result<ElReport> {
    let counts = ChainCounts::new(p)?;
    let mut failures = Vec::new();
    let mut comparable = 0usize;
    let mut mobius_ok = true;
    for lo in 0..p.len() {
        let mu = mobius_from(p, lo);
        for hi in 0..p.len() {
            if !p.leq_idx(lo, hi) {
                continue;
            }
            comparable += 1;
            let mut memo = BTreeMap::new();
            let incr = counts.increasing(lo, hi, None, &mut memo);
            if incr != 1 {
                failures.push(format!(
                    "pair ({}, {}) has {} increasing chains",
                    p.text(lo),
                    p.text(hi),
                    incr
                ));
            }
            let least = counts.lex_least_chain(lo, hi);
            if !least.windows(2).all(|w| w[0] < w[1]) {
                failures.push(format!(
                    "lexicographically least chain of ({}, {}) is not increasing",
                    p.text(lo),
                    p.text(hi)
                ));
            }
            let mut memo = BTreeMap::new();
            let falling = counts.weakly_decreasing(lo, hi, None, &mut memo);
            if falling > 1 {
                failures.push(format!(
                    "pair ({}, {}) has {} weakly decreasing chains",
                    p.text(lo),
                    p.text(hi),
                    falling
                ));
            }
            let sign = if least.len() % 2 == 0 { 1 } else { -1 };
            let expected = sign * falling as i64;
            if mu[hi] != expected {
                mobius_ok = false;
                failures.push(format!(
                    "pair ({}, {}): mobius {} vs falling-chain value {}",
                    p.text(lo),
                    p.text(hi),
                    mu[hi],
                    expected
                ));
            }
            if !(-1..=1).contains(&mu[hi]) {
                mobius_ok = false;
                failures.push(format!(
                    "pair ({}, {}): mobius {} out of range",
                    p.text(lo),
                    p.text(hi),
                    mu[hi]
                ));
            }
        }
    }
    Ok(ElReport {
        elements: p.len(),
        comparable_pairs: comparable,
        mobius_values_in_range: mobius_ok,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::term::parse_term;

    fn sig() -> Signature {
        Signature::a_family(8)
    }

    fn t(text: &str) -> Term {
        parse_term(text, &sig()).unwrap()
    }

    #[test]
    fn labels_of_running_examples() {
        let base = t("a3(a2(*, a2(a1(*), *)), a2(*, a0), a1(*))");
        let up3 = rewrite(&base, 3).unwrap();
        let up5 = rewrite(&base, 5).unwrap();
        assert_eq!(
            el_label(&base, &up3).unwrap(),
            CoverLabel {
                node: 3,
                old_parent: 2,
                neg_position: -2
            }
        );
        assert_eq!(
            el_label(&base, &up5).unwrap(),
            CoverLabel {
                node: 5,
                old_parent: 1,
                neg_position: -2
            }
        );
        assert!(el_label(&base, &base).is_err());
        assert!(el_label(&up3, &base).is_err());
    }

    #[test]
    fn chains_of_equal_endpoints() {
        let a = t("a2(*, a1(*))");
        let chains = saturated_chains(&a, &a).unwrap();
        assert_eq!(chains, vec![vec![a.clone()]]);
        assert!(saturated_chains(&t("a2(a1(*), *)"), &a).is_err());
    }

    #[test]
    fn mobius_small_values() {
        let base = t("a3(a3(*,*,*), a1(*), a2(*,*))");
        let p = upper_set(&base, 10_000).unwrap();
        assert_eq!(p.len(), 14);
        let bottom = p.index_of(&base).unwrap();
        assert_eq!(mobius(&p, &base, &base).unwrap(), 1);
        for &(a, b) in p.covers() {
            if a == bottom {
                assert_eq!(
                    mobius(&p, p.element(a), p.element(b)).unwrap(),
                    -1,
                    "covers have mobius -1"
                );
            }
        }
        let table = mobius_all(&p);
        for row in &table {
            for &v in row {
                assert!((-1..=1).contains(&v));
            }
        }
    }

    #[test]
    fn closure_check_reduces_to_plain_mobius_for_empty_set() {
        let base = t("a3(a3(*,*,*), a1(*), a2(*,*))");
        let p = upper_set(&base, 10_000).unwrap();
        for e in p.elements() {
            assert_eq!(
                mobius_via_closure(&TiltSet::empty(), &base, e, 10_000).unwrap(),
                mobius(&p, &base, e).unwrap()
            );
        }
    }

    #[test]
    fn el_report_on_figure_poset() {
        let base = t("a3(a3(*,*,*), a1(*), a2(*,*))");
        let p = upper_set(&base, 10_000).unwrap();
        let report = el_check(&p).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.elements, 14);
    }
}
