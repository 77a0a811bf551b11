//! Leaning forests and the natural Hopf algebra of the free nonsymmetric
//! operad.
//!
//! A leaning forest is a balanced forest whose root has all non-leaf
//! children first; these index the bases of the Hopf algebra. The
//! elementary basis multiplies by the over operation and comultiplies by
//! admissible pairs of index sets; the fundamental basis (Möbius inversion
//! along the leaning order) multiplies as an order interval, equivalently a
//! shifted shuffle; the homogeneous basis multiplies by the under
//! operation. Over the one-generator unary signature all of this
//! specializes to noncommutative symmetric functions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::shell::mobius_all;
use crate::signature::{nat_gen, nat_index, Signature, MAX_ARITY};
use crate::term::{concat_forests, forest_size, parse_forest, scope_sequence, structure, Flat, Term};
use crate::tilt::{tilt, tilted_upper_set, TiltSet};
use crate::DEFAULT_CEILING;

/// A balanced, `{1}`-tilted forest. Ordered by canonical text.
#[derive(Debug, Clone)]
pub struct LeaningForest {
    term: Term,
    text: String,
}

impl PartialEq for LeaningForest {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for LeaningForest {}

impl PartialOrd for LeaningForest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LeaningForest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text.cmp(&other.text)
    }
}

impl std::hash::Hash for LeaningForest {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl fmt::Display for LeaningForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl LeaningForest {
    pub fn new(term: Term) -> Result<LeaningForest> {
        let reject = |msg: &str| Err(Error::NotLeaning(format!("{}: {msg}", term.render())));
        let (size, children) = match &term {
            Term::Node { gen, children } => match nat_index(gen) {
                Some(k) => (k, children),
                None => return reject("root decoration is not a natural number"),
            },
            Term::Leaf => return reject("a bare leaf is not a forest"),
        };
        if children.len() != size {
            return reject("root arity differs from its decoration");
        }
        if term.degree() != size + 1 {
            return reject("forest is not balanced");
        }
        let first_leaf = children
            .iter()
            .position(Term::is_leaf)
            .unwrap_or(children.len());
        if children[first_leaf..].iter().any(|c| !c.is_leaf()) {
            return reject("a non-leaf child of the root follows a leaf");
        }
        let text = term.render();
        Ok(LeaningForest { term, text })
    }

    /// The empty forest `0:()`.
    pub fn empty() -> LeaningForest {
        LeaningForest::new(Term::node(nat_gen(0), Vec::new())).expect("empty forest is leaning")
    }

    /// Pack a word of nonempty terms under a common root.
    pub fn from_components(components: Vec<Term>) -> Result<LeaningForest> {
        if components.iter().any(Term::is_leaf) {
            return Err(Error::InvalidInput(
                "components of a leaning forest must be nonempty terms".into(),
            ));
        }
        let size: usize = components.iter().map(Term::degree).sum();
        if size > MAX_ARITY {
            return Err(Error::ArityTooLarge(size));
        }
        let mut children = components;
        let padding = size - children.len();
        children.extend(std::iter::repeat_with(|| Term::Leaf).take(padding));
        LeaningForest::new(Term::node(nat_gen(size), children))
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<LeaningForest> {
        LeaningForest::new(parse_forest(text, sig)?)
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Root decoration, equal to the degree minus one.
    pub fn size(&self) -> usize {
        forest_size(&self.term).expect("validated forest")
    }

    /// Number of non-leaf children of the root.
    pub fn length(&self) -> usize {
        self.components().len()
    }

    /// The non-leaf children of the root, in order.
    pub fn components(&self) -> &[Term] {
        match &self.term {
            Term::Node { children, .. } => {
                let end = children
                    .iter()
                    .position(Term::is_leaf)
                    .unwrap_or(children.len());
                &children[..end]
            }
            Term::Leaf => unreachable!("validated forest"),
        }
    }

    /// Decorations and arities of the non-root nodes, in preorder.
    pub fn component_word(&self) -> Vec<(String, usize)> {
        let flat = Flat::of(&self.term);
        (1..flat.degree())
            .map(|i| (flat.gens[i].clone(), flat.arity[i]))
            .collect()
    }

    /// Keep the root and the nodes `{i + 1 : i in keep}`. Nodes whose
    /// parent is removed are lifted below the root, in preorder order.
    pub fn restriction(&self, keep: &BTreeSet<usize>) -> Result<LeaningForest> {
        let n = self.size();
        for &i in keep {
            if i < 1 || i > n {
                return Err(Error::IndexOutOfRange { index: i, max: n });
            }
        }
        let flat = Flat::of(&self.term);
        let children_of = flat.children_of();
        let kept = |v: usize| v == 1 || keep.contains(&(v - 1));
        fn rebuild(
            flat: &Flat,
            children_of: &[Vec<(usize, usize)>],
            kept: &dyn Fn(usize) -> bool,
            v: usize,
        ) -> Term {
            let mut slots = vec![Term::Leaf; flat.arity[v - 1]];
            for &(pos, child) in &children_of[v - 1] {
                if kept(child) {
                    slots[pos - 1] = rebuild(flat, children_of, kept, child);
                }
            }
            Term::node(flat.gens[v - 1].clone(), slots)
        }
        let mut roots = Vec::new();
        for v in 2..=flat.degree() {
            if kept(v) && (flat.parent[v - 1] == 1 || !kept(flat.parent[v - 1])) {
                roots.push(rebuild(&flat, &children_of, &kept, v));
            }
        }
        let mut children = roots;
        children.resize(keep.len(), Term::Leaf);
        LeaningForest::new(Term::node(nat_gen(keep.len()), children))
    }

    /// Restriction to the first `k` indices.
    pub fn top_restriction(&self, k: usize) -> Result<LeaningForest> {
        if k > self.size() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.size(),
            });
        }
        self.restriction(&(1..=k).collect())
    }

    /// Restriction to the indices after the first `k`.
    pub fn bottom_restriction(&self, k: usize) -> Result<LeaningForest> {
        if k > self.size() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.size(),
            });
        }
        self.restriction(&((k + 1)..=self.size()).collect())
    }

    /// Over operation: tilt the concatenation at the root.
    pub fn over(&self, other: &LeaningForest) -> Result<LeaningForest> {
        let joined = concat_forests(&self.term, &other.term)?;
        LeaningForest::new(tilt(&TiltSet::of([1]), &joined))
    }

    /// Under operation: graft the root subterms of `other` (padded by a
    /// corolla) onto the extreme leaves of `self` (padded likewise).
    pub fn under(&self, other: &LeaningForest) -> Result<LeaningForest> {
        let n2 = other.size();
        let r = structure(&self.term).extreme_leaves.len();
        let host = concat_forests(&self.term, &Term::node(nat_gen(n2), vec![Term::Leaf; n2]))?;
        let donor = concat_forests(&other.term, &Term::node(nat_gen(r), vec![Term::Leaf; r]))?;
        let subs = match &donor {
            Term::Node { children, .. } => children.clone(),
            Term::Leaf => unreachable!("forest"),
        };
        let extreme: BTreeSet<usize> = structure(&host).extreme_leaves.iter().copied().collect();
        let mut rank = 0usize;
        let mut subs = subs.into_iter();
        fn rec(
            t: &Term,
            extreme: &BTreeSet<usize>,
            rank: &mut usize,
            subs: &mut std::vec::IntoIter<Term>,
        ) -> Term {
            match t {
                Term::Leaf => {
                    *rank += 1;
                    if extreme.contains(rank) {
                        subs.next().expect("one subterm per extreme leaf")
                    } else {
                        Term::Leaf
                    }
                }
                Term::Node { gen, children } => Term::node(
                    gen.clone(),
                    children
                        .iter()
                        .map(|c| rec(c, extreme, rank, subs))
                        .collect(),
                ),
            }
        }
        LeaningForest::new(rec(&host, &extreme, &mut rank, &mut subs))
    }
}

/// All admissible pairs `(I1, I2)`: a partition of `[size]` such that `I1`
/// is closed under non-root ancestors and `I2` under descendants.
pub fn admissible_pairs(f: &LeaningForest) -> Result<Vec<(BTreeSet<usize>, BTreeSet<usize>)>> {
    let n = f.size();
    if n > 24 {
        return Err(Error::CeilingExceeded(1 << 24));
    }
    let flat = Flat::of(f.term());
    let sc = scope_sequence(f.term());
    let mut out = Vec::new();
    'mask: for mask in 0..(1u32 << n) {
        let in_i1 = |i: usize| mask >> (i - 1) & 1 == 1;
        for i in 1..=n {
            if in_i1(i) {
                // Ancestors of node i+1, except the root, must sit in I1.
                let mut p = flat.parent[i]; // parent of node i + 1
                while p != 1 {
                    if !in_i1(p - 1) {
                        continue 'mask;
                    }
                    p = flat.parent[p - 1];
                }
            } else {
                // Descendants of node i+1 (a contiguous preorder range)
                // must sit in I2.
                for d in (i + 1)..=(i + sc[i]) {
                    if in_i1(d) {
                        continue 'mask;
                    }
                }
            }
        }
        let i1: BTreeSet<usize> = (1..=n).filter(|&i| in_i1(i)).collect();
        let i2: BTreeSet<usize> = (1..=n).filter(|&i| !in_i1(i)).collect();
        out.push((i1, i2));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    E,
    F,
    H,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::E => "E",
            Basis::F => "F",
            Basis::H => "H",
        })
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Basis> {
        match s {
            "E" | "e" => Ok(Basis::E),
            "F" | "f" => Ok(Basis::F),
            "H" | "h" => Ok(Basis::H),
            other => Err(Error::InvalidInput(format!("unknown basis `{other}`"))),
        }
    }
}

/// A finite linear combination of leaning forests with exact rational
/// coefficients, tagged by the basis it is expressed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfElement {
    basis: Basis,
    terms: BTreeMap<LeaningForest, BigRational>,
}

impl HopfElement {
    pub fn zero(basis: Basis) -> HopfElement {
        HopfElement {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_forest(basis: Basis, f: LeaningForest) -> HopfElement {
        let mut e = HopfElement::zero(basis);
        e.add_term(f, BigRational::one());
        e
    }

    /// The unit: the empty forest with coefficient one.
    pub fn unit(basis: Basis) -> HopfElement {
        HopfElement::from_forest(basis, LeaningForest::empty())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn add_term(&mut self, f: LeaningForest, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(f).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &HopfElement) -> Result<HopfElement> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> HopfElement {
        let mut out = HopfElement::zero(self.basis);
        for (f, c) in &self.terms {
            out.add_term(f.clone(), c * factor);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LeaningForest, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, f: &LeaningForest) -> BigRational {
        self.terms.get(f).cloned().unwrap_or_else(BigRational::zero)
    }

    /// JSON in the exchange schema
    /// `{"basis": "...", "terms": [{"forest": "...", "coeff": {"num": ..., "den": ...}}]}`.
    pub fn to_json(&self) -> Result<String> {
        use num::ToPrimitive;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (f, c) in &self.terms {
            let num = c.numer().to_i64().ok_or(Error::Overflow)?;
            let den = c.denom().to_i64().ok_or(Error::Overflow)?;
            terms.push(serde_json::json!({
                "forest": f.text(),
                "coeff": { "num": num, "den": den },
            }));
        }
        let value = serde_json::json!({
            "basis": self.basis.to_string(),
            "terms": terms,
        });
        serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn from_json_str(text: &str, sig: &Signature) -> Result<HopfElement> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("element JSON: {e}")))?;
        let basis: Basis = value
            .get("basis")
            .and_then(|b| b.as_str())
            .ok_or_else(|| Error::InvalidInput("element JSON needs a basis".into()))?
            .parse()?;
        let mut out = HopfElement::zero(basis);
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::InvalidInput("element JSON needs a terms array".into()))?;
        for entry in terms {
            let forest = entry
                .get("forest")
                .and_then(|f| f.as_str())
                .ok_or_else(|| Error::InvalidInput("term entry needs a forest".into()))?;
            let coeff = entry
                .get("coeff")
                .ok_or_else(|| Error::InvalidInput("term entry needs a coeff".into()))?;
            let num = coeff.get("num").and_then(|v| v.as_i64()).ok_or_else(|| {
                Error::InvalidInput("coefficient needs an integer num".into())
            })?;
            let den = coeff.get("den").and_then(|v| v.as_i64()).unwrap_or(1);
            if den == 0 {
                return Err(Error::InvalidInput("coefficient denominator is zero".into()));
            }
            out.add_term(
                LeaningForest::parse(forest, sig)?,
                BigRational::new(BigInt::from(num), BigInt::from(den)),
            );
        }
        Ok(out)
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 ({})", self.basis);
        }
        let mut first = true;
        for (forest, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "{}[{}]", self.basis, forest)?;
        }
        Ok(())
    }
}

/// A sum of tensor pairs of leaning forests, as produced by the coproduct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<(LeaningForest, LeaningForest), BigRational>,
}

impl Tensor {
    pub fn zero() -> Tensor {
        Tensor::default()
    }

    pub fn add_term(&mut self, left: LeaningForest, right: LeaningForest, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((left, right))
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(
        &self,
    ) -> impl Iterator<Item = (&(LeaningForest, LeaningForest), &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise product in the elementary basis.
    pub fn product_e(&self, other: &Tensor) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.add_term(l1.over(l2)?, r1.over(r2)?, c1 * c2);
            }
        }
        Ok(out)
    }
}

struct LeaningPosetData {
    poset: Rc<Poset>,
    mobius: Vec<Vec<i64>>,
}

/// Context for Hopf-algebra computations: caches one leaning poset (with
/// its Möbius table) per decoration word.
pub struct HopfAlgebra {
    ceiling: usize,
    cache: RefCell<BTreeMap<Vec<(String, usize)>, Rc<LeaningPosetData>>>,
}

impl Default for HopfAlgebra {
    fn default() -> Self {
        HopfAlgebra::new()
    }
}

impl HopfAlgebra {
    pub fn new() -> HopfAlgebra {
        HopfAlgebra::with_ceiling(DEFAULT_CEILING)
    }

    pub fn with_ceiling(ceiling: usize) -> HopfAlgebra {
        HopfAlgebra {
            ceiling,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    fn poset_for(&self, f: &LeaningForest) -> Result<Rc<LeaningPosetData>> {
        let key = f.component_word();
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let bottom = Term::node(
            nat_gen(key.len()),
            key.iter()
                .map(|(gen, arity)| Term::node(gen.clone(), vec![Term::Leaf; *arity]))
                .collect(),
        );
        let poset = Rc::new(tilted_upper_set(&TiltSet::of([1]), &bottom, self.ceiling)?);
        let mobius = mobius_all(&poset);
        let data = Rc::new(LeaningPosetData { poset, mobius });
        self.cache.borrow_mut().insert(key, data.clone());
        Ok(data)
    }

    /// The leaning poset of the decoration word of `f`, containing every
    /// leaning forest with that word.
    pub fn leaning_poset(&self, f: &LeaningForest) -> Result<Rc<Poset>> {
        Ok(self.poset_for(f)?.poset.clone())
    }

    /// The shifted shuffle as the order interval from the over to the
    /// under composite.
    pub fn shuffle(&self, f1: &LeaningForest, f2: &LeaningForest) -> Result<Vec<LeaningForest>> {
        let over = f1.over(f2)?;
        let under = f1.under(f2)?;
        let data = self.poset_for(&over)?;
        let io = data
            .poset
            .index_of(over.term())
            .ok_or_else(|| Error::Internal("over composite missing from its poset".into()))?;
        let iu = data
            .poset
            .index_of(under.term())
            .ok_or_else(|| Error::Internal("under composite missing from its poset".into()))?;
        data.poset
            .interval(io, iu)
            .into_iter()
            .map(|z| LeaningForest::new(data.poset.element(z).clone()))
            .collect()
    }

    /// The shifted shuffle by its defining property: forests whose top and
    /// bottom restrictions recover the operands.
    pub fn shuffle_by_restriction(
        &self,
        f1: &LeaningForest,
        f2: &LeaningForest,
    ) -> Result<Vec<LeaningForest>> {
        let over = f1.over(f2)?;
        let k = f1.size();
        let data = self.poset_for(&over)?;
        let mut out = Vec::new();
        for e in data.poset.elements() {
            let f = LeaningForest::new(e.clone())?;
            if &f.top_restriction(k)? == f1 && &f.bottom_restriction(k)? == f2 {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Product of two elements expressed in one common basis.
    pub fn product(&self, a: &HopfElement, b: &HopfElement) -> Result<HopfElement> {
        if a.basis() != b.basis() {
            return Err(Error::BasisMismatch);
        }
        let mut out = HopfElement::zero(a.basis());
        for (fa, ca) in a.terms() {
            for (fb, cb) in b.terms() {
                let coeff = ca * cb;
                match a.basis() {
                    Basis::E => out.add_term(fa.over(fb)?, coeff),
                    Basis::H => out.add_term(fa.under(fb)?, coeff),
                    Basis::F => {
                        for f in self.shuffle(fa, fb)? {
                            out.add_term(f, coeff.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coproduct on the elementary basis, by admissible pairs.
    pub fn coproduct(&self, a: &HopfElement) -> Result<Tensor> {
        if a.basis() != Basis::E {
            return Err(Error::BasisMismatch);
        }
        let mut out = Tensor::zero();
        for (f, c) in a.terms() {
            for (i1, i2) in admissible_pairs(f)? {
                out.add_term(f.restriction(&i1)?, f.restriction(&i2)?, c.clone());
            }
        }
        Ok(out)
    }

    fn expand_forest(
        &self,
        f: &LeaningForest,
        from: Basis,
        to: Basis,
    ) -> Result<HopfElement> {
        let data = self.poset_for(f)?;
        let i = data
            .poset
            .index_of(f.term())
            .ok_or_else(|| Error::Internal("forest missing from its leaning poset".into()))?;
        let mut out = HopfElement::zero(to);
        for j in 0..data.poset.len() {
            let (comparable, coeff) = match (from, to) {
                // F_f = sum of mobius(f, f') E_{f'} over f' above f.
                (Basis::F, Basis::E) => (data.poset.leq_idx(i, j), data.mobius[i][j]),
                // E_f = sum of F_{f'} over f' above f.
                (Basis::E, Basis::F) => (data.poset.leq_idx(i, j), 1),
                // H_f = sum of F_{f'} over f' below f.
                (Basis::H, Basis::F) => (data.poset.leq_idx(j, i), 1),
                // F_f = sum of mobius(f', f) H_{f'} over f' below f.
                (Basis::F, Basis::H) => (data.poset.leq_idx(j, i), data.mobius[j][i]),
                _ => return Err(Error::Internal("unsupported expansion".into())),
            };
            if comparable && coeff != 0 {
                out.add_term(
                    LeaningForest::new(data.poset.element(j).clone())?,
                    BigRational::from(BigInt::from(coeff)),
                );
            }
        }
        Ok(out)
    }

    /// Change of basis; round trips are identities.
    pub fn change_basis(&self, a: &HopfElement, target: Basis) -> Result<HopfElement> {
        if a.basis() == target {
            return Ok(a.clone());
        }
        let step = |from: Basis, to: Basis, a: &HopfElement| -> Result<HopfElement> {
            let mut out = HopfElement::zero(to);
            for (f, c) in a.terms() {
                let expanded = self.expand_forest(f, from, to)?;
                for (g, k) in expanded.terms() {
                    out.add_term(g.clone(), c * k);
                }
            }
            Ok(out)
        };
        match (a.basis(), target) {
            (Basis::F, Basis::E) | (Basis::E, Basis::F) | (Basis::H, Basis::F)
            | (Basis::F, Basis::H) => step(a.basis(), target, a),
            (Basis::E, Basis::H) | (Basis::H, Basis::E) => {
                let through = step(a.basis(), Basis::F, a)?;
                step(Basis::F, target, &through)
            }
            _ => unreachable!("equal bases returned above"),
        }
    }
}

/// Encode an integer composition as a leaning forest of unary chains over
/// the generator `a1`.
pub fn composition_forest(parts: &[usize]) -> Result<LeaningForest> {
    let mut components = Vec::with_capacity(parts.len());
    for &r in parts {
        if r == 0 {
            return Err(Error::InvalidInput("composition parts must be positive".into()));
        }
        let mut chain = Term::Leaf;
        for _ in 0..r {
            chain = Term::node("a1", vec![chain]);
        }
        components.push(chain);
    }
    LeaningForest::from_components(components)
}

/// Decode a leaning forest of unary chains back into a composition.
pub fn forest_composition(f: &LeaningForest) -> Result<Vec<usize>> {
    let mut parts = Vec::new();
    for c in f.components() {
        let mut len = 0usize;
        let mut cur = c;
        loop {
            match cur {
                Term::Leaf => break,
                Term::Node { gen, children } if gen == "a1" && children.len() == 1 => {
                    len += 1;
                    cur = &children[0];
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "forest component is not a unary chain".into(),
                    ))
                }
            }
        }
        parts.push(len);
    }
    Ok(parts)
}

/// Outcome of the specialization checks against noncommutative symmetric
/// functions over the one-generator unary signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcsfReport {
    pub max_weight: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl NcsfReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for NcsfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "weight <= {}: {} checks, {} failures",
            self.max_weight,
            self.checks,
            self.failures.len()
        )?;
        for line in &self.failures {
            writeln!(f, "  FAIL {line}")?;
        }
        Ok(())
    }
}

fn compositions_up_to(max_weight: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    fn rec(remaining: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for r in 1..=remaining {
            acc.push(r);
            out.push(acc.clone());
            rec(remaining - r, acc, out);
            acc.pop();
        }
    }
    let mut acc = Vec::new();
    rec(max_weight, &mut acc, &mut out);
    out.sort();
    out.dedup();
    out
}

impl HopfAlgebra {
    /// Verify, for all compositions of total weight at most `max_weight`,
    /// the concatenation rule on the elementary basis, the two-term ribbon
    /// rule on the fundamental basis, the fused rule on the homogeneous
    /// basis, and the binomial-free split of the coproduct.
    pub fn ncsf_check(&self, max_weight: usize) -> Result<NcsfReport> {
        let comps = compositions_up_to(max_weight);
        let mut checks = 0usize;
        let mut failures = Vec::new();
        let element = |basis: Basis, parts: &[usize]| -> Result<HopfElement> {
            Ok(HopfElement::from_forest(basis, composition_forest(parts)?))
        };
        for alpha in &comps {
            for beta in &comps {
                let weight: usize = alpha.iter().sum::<usize>() + beta.iter().sum::<usize>();
                if weight > max_weight {
                    continue;
                }
                let concat: Vec<usize> =
                    alpha.iter().chain(beta.iter()).copied().collect();
                // Elementary basis: concatenation.
                checks += 1;
                let got = self.product(&element(Basis::E, alpha)?, &element(Basis::E, beta)?)?;
                if got != element(Basis::E, &concat)? {
                    failures.push(format!("E rule at {alpha:?} * {beta:?}"));
                }
                // Homogeneous basis: fuse the boundary parts.
                let fused: Option<Vec<usize>> =
                    if alpha.is_empty() || beta.is_empty() {
                        None
                    } else {
                        let mut v = alpha.clone();
                        *v.last_mut().expect("nonempty") += beta[0];
                        v.extend_from_slice(&beta[1..]);
                        Some(v)
                    };
                checks += 1;
                let got = self.product(&element(Basis::H, alpha)?, &element(Basis::H, beta)?)?;
                let want = match &fused {
                    Some(v) => element(Basis::H, v)?,
                    None => element(Basis::H, &concat)?,
                };
                if got != want {
                    failures.push(format!("H rule at {alpha:?} * {beta:?}"));
                }
                // Fundamental basis: two-term ribbon rule.
                checks += 1;
                let got = self.product(&element(Basis::F, alpha)?, &element(Basis::F, beta)?)?;
                let want = match &fused {
                    Some(v) => element(Basis::F, &concat)?.add(&element(Basis::F, v)?)?,
                    None => element(Basis::F, &concat)?,
                };
                if got != want {
                    failures.push(format!("F rule at {alpha:?} * {beta:?}"));
                }
            }
        }
        // Coproduct splits one-part compositions without binomials.
        for r in 0..=max_weight {
            checks += 1;
            let parts: Vec<usize> = if r == 0 { vec![] } else { vec![r] };
            let got = self.coproduct(&element(Basis::E, &parts)?)?;
            let mut want = Tensor::zero();
            for i in 0..=r {
                let left: Vec<usize> = if i == 0 { vec![] } else { vec![i] };
                let right: Vec<usize> = if r - i == 0 { vec![] } else { vec![r - i] };
                want.add_term(
                    composition_forest(&left)?,
                    composition_forest(&right)?,
                    BigRational::one(),
                );
            }
            if got != want {
                failures.push(format!("coproduct split at ({r})"));
            }
        }
        Ok(NcsfReport {
            max_weight,
            checks,
            failures,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::a_family(8)
    }

    fn lf(text: &str) -> LeaningForest {
        LeaningForest::parse(text, &sig()).unwrap()
    }

    #[test]
    fn leaning_validation() {
        assert!(LeaningForest::parse("4:(a2(*, a1(a0)), a0, *, *)", &sig()).is_ok());
        // Balanced but not {1}-tilted.
        assert!(matches!(
            LeaningForest::parse("4:(a0, *, a2(a2(*,*), a1(*)), *)", &sig()),
            Err(Error::NotLeaning(_))
        ));
        // {1}-tilted but not balanced.
        assert!(matches!(
            LeaningForest::parse("3:(a1(*), *, *)", &sig()),
            Err(Error::NotLeaning(_))
        ));
        assert_eq!(lf("4:(a2(*, a1(a0)), a0, *, *)").length(), 2);
        assert_eq!(LeaningForest::empty().text(), "0:()");
    }

    fn running_restriction_forest() -> LeaningForest {
        lf("5:(a0, a2(*, a1(a0)), a3(*,*,*), *, *)")
    }

    #[test]
    fn restriction_worked_examples() {
        let f = running_restriction_forest();
        let keep = |v: &[usize]| v.iter().copied().collect::<BTreeSet<usize>>();
        assert_eq!(f.restriction(&keep(&[1, 4])).unwrap().text(), "2:(a0,a0)");
        assert_eq!(
            f.restriction(&keep(&[2, 3])).unwrap().text(),
            "2:(a2(*,a1(*)),*)"
        );
        assert_eq!(
            f.restriction(&keep(&[2, 4, 5])).unwrap().text(),
            "3:(a2(*,*),a0,a3(*,*,*))"
        );
        assert_eq!(f.restriction(&keep(&[1, 2, 3, 4, 5])).unwrap(), f);
        assert_eq!(f.restriction(&keep(&[])).unwrap(), LeaningForest::empty());
        assert!(f.restriction(&keep(&[9])).is_err());
    }

    #[test]
    fn top_and_bottom_restrictions() {
        let f = running_restriction_forest();
        let pairs = [
            ("0:()", "5:(a0,a2(*,a1(a0)),a3(*,*,*),*,*)"),
            ("1:(a0)", "4:(a2(*,a1(a0)),a3(*,*,*),*,*)"),
            ("2:(a0,a2(*,*))", "3:(a1(a0),a3(*,*,*),*)"),
            ("3:(a0,a2(*,a1(*)),*)", "2:(a0,a3(*,*,*))"),
            ("4:(a0,a2(*,a1(a0)),*,*)", "1:(a3(*,*,*))"),
            ("5:(a0,a2(*,a1(a0)),a3(*,*,*),*,*)", "0:()"),
        ];
        for (k, (top, bottom)) in pairs.iter().enumerate() {
            assert_eq!(f.top_restriction(k).unwrap().text(), *top, "top {k}");
            assert_eq!(
                f.bottom_restriction(k).unwrap().text(),
                *bottom,
                "bottom {k}"
            );
        }
    }

    #[test]
    fn over_and_under_worked_examples() {
        let f1 = lf("3:(a1(*), a2(*, a2(*,*)), *)");
        let f2 = lf("5:(a3(*,*,*), a2(*,*), a1(a2(*,*)), a1(*), *)");
        assert_eq!(
            f1.over(&f2).unwrap().text(),
            "8:(a1(*),a2(*,a2(*,*)),a3(*,*,*),a2(*,*),a1(a2(*,*)),a1(*),*,*)"
        );
        assert_eq!(
            f1.under(&f2).unwrap().text(),
            "8:(a1(*),a2(*,a2(a3(*,*,*),a2(*,*))),a1(a2(*,*)),a1(*),*,*,*,*)"
        );
        let e = LeaningForest::empty();
        assert_eq!(f1.over(&e).unwrap(), f1);
        assert_eq!(e.over(&f1).unwrap(), f1);
        assert_eq!(f1.under(&e).unwrap(), f1);
        assert_eq!(e.under(&f1).unwrap(), f1);
    }

    #[test]
    fn shuffle_worked_example() {
        let alg = HopfAlgebra::new();
        let f1 = lf("4:(a1(*), a3(*, a3(*, a0, *), *), *, *)");
        let f2 = lf("3:(a2(*, a1(*)), a0, *)");
        let got = alg.shuffle(&f1, &f2).unwrap();
        let expected = [
            "7:(a1(*),a3(*,a3(*,a0,*),*),a2(*,a1(*)),a0,*,*,*)",
            "7:(a1(*),a3(*,a3(*,a0,*),a2(*,a1(*))),a0,*,*,*,*)",
            "7:(a1(*),a3(*,a3(*,a0,a2(*,a1(*))),*),a0,*,*,*,*)",
            "7:(a1(*),a3(*,a3(*,a0,a2(*,a1(*))),a0),*,*,*,*,*)",
        ];
        let mut texts: Vec<&str> = got.iter().map(LeaningForest::text).collect();
        texts.sort();
        let mut want = expected.to_vec();
        want.sort();
        assert_eq!(texts, want);
        assert_eq!(got.len(), 4);
        // Endpoints are the over and under composites.
        assert!(got.contains(&f1.over(&f2).unwrap()));
        assert!(got.contains(&f1.under(&f2).unwrap()));
        // Dual computation agrees.
        let mut by_restriction = alg.shuffle_by_restriction(&f1, &f2).unwrap();
        by_restriction.sort();
        let mut by_interval = got.clone();
        by_interval.sort();
        assert_eq!(by_restriction, by_interval);
        // Shuffling with the empty forest is trivial.
        let e = LeaningForest::empty();
        assert_eq!(alg.shuffle(&f1, &e).unwrap(), vec![f1.clone()]);
        assert_eq!(alg.shuffle(&e, &f1).unwrap(), vec![f1.clone()]);
    }

    #[test]
    fn admissible_pairs_worked_example() {
        let f = lf("3:(a3(*, a1(*), *), a2(*,*), *)");
        let pairs = admissible_pairs(&f).unwrap();
        let render = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        let mut got: Vec<(String, String)> = pairs
            .iter()
            .map(|(a, b)| (render(a), render(b)))
            .collect();
        got.sort();
        let mut want = vec![
            ("123".to_string(), "".to_string()),
            ("12".to_string(), "3".to_string()),
            ("13".to_string(), "2".to_string()),
            ("1".to_string(), "23".to_string()),
            ("3".to_string(), "12".to_string()),
            ("".to_string(), "123".to_string()),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(admissible_pairs(&LeaningForest::empty()).unwrap().len(), 1);
        assert_eq!(admissible_pairs(&lf("1:(a1(*))")).unwrap().len(), 2);
    }

    #[test]
    fn elementary_product_worked_example() {
        let alg = HopfAlgebra::new();
        let a = HopfElement::from_forest(
            Basis::E,
            lf("4:(a1(a2(*,*)), a3(a1(*), *, *), *, *)"),
        );
        let b = HopfElement::from_forest(Basis::E, lf("2:(a2(a1(*), *), *)"));
        let got = alg.product(&a, &b).unwrap();
        let want = HopfElement::from_forest(
            Basis::E,
            lf("6:(a1(a2(*,*)), a3(a1(*), *, *), a2(a1(*), *), *, *, *)"),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn coproduct_worked_example() {
        let alg = HopfAlgebra::new();
        let a = HopfElement::from_forest(Basis::E, lf("3:(a3(*, a1(*), *), a2(*,*), *)"));
        let got = alg.coproduct(&a).unwrap();
        let mut want = Tensor::zero();
        let one = BigRational::one;
        let f = |s: &str| lf(s);
        want.add_term(LeaningForest::empty(), f("3:(a3(*,a1(*),*),a2(*,*),*)"), one());
        want.add_term(f("1:(a3(*,*,*))"), f("2:(a1(*),a2(*,*))"), one());
        want.add_term(f("1:(a2(*,*))"), f("2:(a3(*,a1(*),*),*)"), one());
        want.add_term(f("2:(a3(*,a1(*),*),*)"), f("1:(a2(*,*))"), one());
        want.add_term(f("2:(a3(*,*,*),a2(*,*))"), f("1:(a1(*))"), one());
        want.add_term(f("3:(a3(*,a1(*),*),a2(*,*),*)"), LeaningForest::empty(), one());
        assert_eq!(got, want);
        // Group-like unit.
        let unit = alg.coproduct(&HopfElement::unit(Basis::E)).unwrap();
        let mut expected = Tensor::zero();
        expected.add_term(LeaningForest::empty(), LeaningForest::empty(), one());
        assert_eq!(unit, expected);
    }

    #[test]
    fn fundamental_expansion_worked_example() {
        let alg = HopfAlgebra::new();
        let f = HopfElement::from_forest(Basis::F, lf("3:(a3(*, a1(*), *), a2(*,*), *)"));
        let got = alg.change_basis(&f, Basis::E).unwrap();
        let int = |n: i64| BigRational::from(BigInt::from(n));
        assert_eq!(got.coefficient(&lf("3:(a3(*,a1(*),*),a2(*,*),*)")), int(1));
        assert_eq!(got.coefficient(&lf("3:(a3(*,a1(*),a2(*,*)),*,*)")), int(-1));
        assert_eq!(got.coefficient(&lf("3:(a3(a1(*),*,*),a2(*,*),*)")), int(-1));
        assert_eq!(got.coefficient(&lf("3:(a3(a1(*),*,a2(*,*)),*,*)")), int(-1));
        assert_eq!(got.len(), 4);
        // Round trip.
        assert_eq!(alg.change_basis(&got, Basis::F).unwrap(), f);
    }

    #[test]
    fn homogeneous_expansion_worked_example() {
        let alg = HopfAlgebra::new();
        let h = HopfElement::from_forest(Basis::H, lf("3:(a3(*, a1(*), *), a2(*,*), *)"));
        let got = alg.change_basis(&h, Basis::F).unwrap();
        let one = BigRational::one();
        assert_eq!(got.coefficient(&lf("3:(a3(*,*,*),a1(*),a2(*,*))")), one);
        assert_eq!(got.coefficient(&lf("3:(a3(*,*,a1(*)),a2(*,*),*)")), one);
        assert_eq!(got.coefficient(&lf("3:(a3(*,a1(*),*),a2(*,*),*)")), one);
        assert_eq!(got.len(), 3);
        assert_eq!(alg.change_basis(&got, Basis::H).unwrap(), h);
    }

    #[test]
    fn fundamental_product_worked_example() {
        let alg = HopfAlgebra::new();
        let a = HopfElement::from_forest(
            Basis::F,
            lf("3:(a3(*,*,*), a2(*, a2(*,*)), *)"),
        );
        let b = HopfElement::from_forest(
            Basis::F,
            lf("4:(a3(*, a2(*,*), *), a1(*), a2(*,*), *)"),
        );
        let got = alg.product(&a, &b).unwrap();
        let one = BigRational::one();
        let keys = [
            "7:(a3(*,*,*),a2(*,a2(*,*)),a3(*,a2(*,*),*),a1(*),a2(*,*),*,*)",
            "7:(a3(*,*,*),a2(*,a2(*,a3(*,a2(*,*),*))),a1(*),a2(*,*),*,*,*)",
            "7:(a3(*,*,*),a2(*,a2(a3(*,a2(*,*),*),*)),a1(*),a2(*,*),*,*,*)",
            "7:(a3(*,*,*),a2(*,a2(a3(*,a2(*,*),*),a1(*))),a2(*,*),*,*,*,*)",
        ];
        assert_eq!(got.len(), 4);
        for k in keys {
            assert_eq!(got.coefficient(&lf(k)), one, "missing {k}");
        }
        // Identity in all three bases.
        for basis in [Basis::E, Basis::F, Basis::H] {
            let x = HopfElement::from_forest(basis, lf("2:(a2(*, a1(*)), *)"));
            assert_eq!(alg.product(&x, &HopfElement::unit(basis)).unwrap(), x);
            assert_eq!(alg.product(&HopfElement::unit(basis), &x).unwrap(), x);
        }
        assert!(matches!(
            alg.product(&a, &HopfElement::unit(Basis::E)),
            Err(Error::BasisMismatch)
        ));
    }

    #[test]
    fn ncsf_small_rules() {
        let alg = HopfAlgebra::new();
        let f2 = HopfElement::from_forest(Basis::F, composition_forest(&[2]).unwrap());
        let f1 = HopfElement::from_forest(Basis::F, composition_forest(&[1]).unwrap());
        let got = alg.product(&f2, &f1).unwrap();
        let mut want = HopfElement::zero(Basis::F);
        want.add_term(composition_forest(&[2, 1]).unwrap(), BigRational::one());
        want.add_term(composition_forest(&[3]).unwrap(), BigRational::one());
        assert_eq!(got, want);

        let h1 = HopfElement::from_forest(Basis::H, composition_forest(&[1]).unwrap());
        let got = alg.product(&h1, &h1).unwrap();
        assert_eq!(
            got,
            HopfElement::from_forest(Basis::H, composition_forest(&[2]).unwrap())
        );

        let report = alg.ncsf_check(4).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(
            forest_composition(&composition_forest(&[2, 1, 3]).unwrap()).unwrap(),
            vec![2, 1, 3]
        );
    }

    #[test]
    fn element_json_roundtrip() {
        let alg = HopfAlgebra::new();
        let f = HopfElement::from_forest(Basis::F, lf("3:(a3(*, a1(*), *), a2(*,*), *)"));
        let e = alg.change_basis(&f, Basis::E).unwrap();
        let json = e.to_json().unwrap();
        let back = HopfElement::from_json_str(&json, &sig()).unwrap();
        assert_eq!(back, e);
    }
}
