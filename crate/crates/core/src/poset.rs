//! Finite posets of terms sharing one decoration word.
//!
//! Elements are kept in canonical order (sorted by rendered text) so that
//! all outputs are deterministic. Covering pairs either come directly from
//! the rewrite-rule closure (which generates exactly the covering relation)
//! or are recomputed by transitive reduction when a subset of terms is
//! assembled from elsewhere.

use std::sync::OnceLock;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::order::connection_word;
use crate::term::Term;

#[derive(Debug)]
pub struct Poset {
    elements: Vec<Term>,
    texts: Vec<String>,
    cnc: Vec<Vec<Dyadic>>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    above: OnceLock<Vec<Vec<u64>>>,
}

fn componentwise_leq(a: &[Dyadic], b: &[Dyadic]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl Poset {
    /// Assemble a poset whose covering pairs are already known
    /// (indices refer to `elements`). Elements are re-sorted canonically.
    pub(crate) fn from_parts(elements: Vec<Term>, covers: Vec<(usize, usize)>) -> Result<Poset> {
        let texts: Vec<String> = elements.iter().map(Term::render).collect();
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| texts[a].cmp(&texts[b]));
        let mut rank = vec![0usize; elements.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut sorted_elements = Vec::with_capacity(elements.len());
        let mut sorted_texts = Vec::with_capacity(elements.len());
        for &old in &order {
            sorted_elements.push(elements[old].clone());
            sorted_texts.push(texts[old].clone());
        }
        let mut sorted_covers: Vec<(usize, usize)> =
            covers.iter().map(|&(a, b)| (rank[a], rank[b])).collect();
        sorted_covers.sort_unstable();
        sorted_covers.dedup();
        Poset::assemble(sorted_elements, sorted_texts, sorted_covers)
    }

    /// Build a poset on an explicit set of terms; covering pairs are
    /// computed by transitive reduction of the order relation.
    pub fn from_elements(elements: Vec<Term>) -> Result<Poset> {
        let mut keyed: Vec<(String, Term)> = elements
            .into_iter()
            .map(|t| (t.render(), t))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let texts: Vec<String> = keyed.iter().map(|(s, _)| s.clone()).collect();
        let elements: Vec<Term> = keyed.into_iter().map(|(_, t)| t).collect();
        let cnc: Vec<Vec<Dyadic>> = elements.iter().map(connection_word).collect();
        let n = elements.len();

        let row = |i: usize| -> Vec<u64> {
            let mut bits = vec![0u64; n.div_ceil(64)];
            for j in 0..n {
                if i != j && componentwise_leq(&cnc[i], &cnc[j]) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        };
        #[cfg(feature = "parallel")]
        let strict: Vec<Vec<u64>> = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let strict: Vec<Vec<u64>> = (0..n).map(row).collect();

        let has = |bits: &[u64], j: usize| bits[j / 64] >> (j % 64) & 1 == 1;
        let mut covers = Vec::new();
        for i in 0..n {
            'next: for j in 0..n {
                if !has(&strict[i], j) {
                    continue;
                }
                for (w, &word) in strict[i].iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let k = w * 64 + word.trailing_zeros() as usize;
                        word &= word - 1;
                        if has(&strict[k], j) {
                            continue 'next;
                        }
                    }
                }
                covers.push((i, j));
            }
        }
        Poset::assemble(elements, texts, covers)
    }

    fn assemble(
        elements: Vec<Term>,
        texts: Vec<String>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Poset> {
        let cnc: Vec<Vec<Dyadic>> = elements.iter().map(connection_word).collect();
        if let Some(first) = elements.first() {
            let word = first.decoration_word();
            for t in &elements[1..] {
                if t.decoration_word() != word {
                    return Err(Error::Internal(
                        "poset elements must share one decoration word".into(),
                    ));
                }
            }
        }
        let n = elements.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Poset {
            elements,
            texts,
            cnc,
            covers,
            up,
            down,
            above: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Term] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Term {
        &self.elements[i]
    }

    pub fn text(&self, i: usize) -> &str {
        &self.texts[i]
    }

    pub fn texts(&self) -> &[String] {
        &self.texts
    }

    pub fn coordinates(&self) -> &[Vec<Dyadic>] {
        &self.cnc
    }

    pub fn index_of_text(&self, text: &str) -> Option<usize> {
        self.texts.binary_search_by(|t| t.as_str().cmp(text)).ok()
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index_of_text(&t.render())
    }

    /// Order relation between elements, by exact coordinate comparison.
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        i == j || componentwise_leq(&self.cnc[i], &self.cnc[j])
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    /// Indices of the interval `[lo, hi]`, in canonical order.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.leq_idx(lo, z) && self.leq_idx(z, hi))
            .collect()
    }

    /// Reflexive comparability matrix as bit rows (bit `j` of row `i` is
    /// set when element `i` is below element `j`). Computed once on demand.
    pub fn above_matrix(&self) -> &Vec<Vec<u64>> {
        self.above.get_or_init(|| {
            let n = self.len();
            (0..n)
                .map(|i| {
                    let mut bits = vec![0u64; n.div_ceil(64)];
                    for j in 0..n {
                        if self.leq_idx(i, j) {
                            bits[j / 64] |= 1 << (j % 64);
                        }
                    }
                    bits
                })
                .collect()
        })
    }

    pub fn matrix_has(bits: &[u64], j: usize) -> bool {
        bits[j / 64] >> (j % 64) & 1 == 1
    }

    /// DOT rendering: one node per element labeled with its canonical text,
    /// directed edges from lower to upper cover.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, text) in self.texts.iter().enumerate() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", i, text));
        }
        for &(a, b) in &self.covers {
            out.push_str(&format!("  v{} -> v{};\n", a, b));
        }
        out.push_str("}\n");
        out
    }

    /// JSON rendering with exact dyadic coordinates.
    pub fn to_json(&self) -> Result<String> {
        let mut coords = Vec::with_capacity(self.len());
        for word in &self.cnc {
            let mut entries = Vec::with_capacity(word.len());
            for d in word {
                let num = i64::try_from(d.num()).map_err(|_| Error::Overflow)?;
                entries.push(serde_json::json!({ "num": num, "den_exp": d.den_exp() }));
            }
            coords.push(serde_json::Value::Array(entries));
        }
        let value = serde_json::json!({
            "elements": self.texts,
            "covers": self.covers.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
            "coordinates": coords,
        });
        serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))
    }
}
