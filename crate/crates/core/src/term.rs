//! Terms: decorated ordered rooted trees over a signature.
//!
//! Internal nodes are addressed by their 1-based preorder rank and leaves by
//! their 1-based preorder rank among leaves. The textual grammar is
//!
//! ```text
//! term   := "*" | name | name "(" term ("," term)* ")"
//! forest := nat ":" "(" term ("," term)* ")" | "0:()"
//! name   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! with insignificant whitespace; nullary generators may omit parentheses.
//! A forest is a term whose root carries a natural-number decoration `n{k}`;
//! it renders back as `k:(...)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::signature::{nat_gen, nat_index, Signature, MAX_ARITY};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Leaf,
    Node { gen: String, children: Vec<Term> },
}

impl Term {
    pub fn node(gen: impl Into<String>, children: Vec<Term>) -> Term {
        Term::Node {
            gen: gen.into(),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Leaf)
    }

    /// Number of internal nodes.
    pub fn degree(&self) -> usize {
        match self {
            Term::Leaf => 0,
            Term::Node { children, .. } => {
                1 + children.iter().map(Term::degree).sum::<usize>()
            }
        }
    }

    /// Number of leaves.
    pub fn arity(&self) -> usize {
        match self {
            Term::Leaf => 1,
            Term::Node { children, .. } => children.iter().map(Term::arity).sum(),
        }
    }

    /// Decorations of the internal nodes in preorder.
    pub fn decoration_word(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn rec(t: &Term, out: &mut Vec<String>) {
            if let Term::Node { gen, children } = t {
                out.push(gen.clone());
                for c in children {
                    rec(c, out);
                }
            }
        }
        rec(self, &mut out);
        out
    }

    /// Canonical text: forest syntax when the root decoration is an `n{k}`
    /// name, plain term syntax otherwise.
    pub fn render(&self) -> String {
        if let Term::Node { gen, children } = self {
            if let Some(k) = nat_index(gen) {
                if k == 0 && children.is_empty() {
                    return "0:()".to_string();
                }
                let body: Vec<String> = children.iter().map(Term::render_term).collect();
                return format!("{}:({})", k, body.join(","));
            }
        }
        self.render_term()
    }

    /// Plain term syntax, decorations always written by name.
    pub fn render_term(&self) -> String {
        match self {
            Term::Leaf => "*".to_string(),
            Term::Node { gen, children } => {
                if children.is_empty() {
                    gen.clone()
                } else {
                    let body: Vec<String> = children.iter().map(Term::render_term).collect();
                    format!("{}({})", gen, body.join(","))
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The corolla of a generator: one internal node and `arity` leaves.
pub fn corolla(sig: &Signature, name: &str) -> Result<Term> {
    let arity = sig
        .arity_of(name)
        .ok_or_else(|| Error::UnknownGenerator {
            name: name.to_string(),
            pos: 0,
        })?;
    Ok(Term::node(name, vec![Term::Leaf; arity]))
}

/// An edge `(parent, position, child)` between internal nodes; the root
/// carries the conventional loop `(1, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub parent: usize,
    pub position: usize,
    pub child: usize,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.parent, self.position, self.child)
    }
}

/// Flattened preorder view of a term: per internal node (0-indexed slot for
/// node `i+1`) its decoration, arity, 1-based parent and local position.
/// The root is its own parent at position 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Flat {
    pub gens: Vec<String>,
    pub arity: Vec<usize>,
    pub parent: Vec<usize>,
    pub position: Vec<usize>,
}

/// One step of the full preorder walk (internal nodes and leaves).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Visit {
    Node(usize),
    Leaf { parent: usize, position: usize },
}

impl Flat {
    pub fn of(t: &Term) -> Flat {
        let mut flat = Flat {
            gens: Vec::new(),
            arity: Vec::new(),
            parent: Vec::new(),
            position: Vec::new(),
        };
        fn rec(t: &Term, parent: usize, position: usize, flat: &mut Flat) {
            if let Term::Node { gen, children } = t {
                flat.gens.push(gen.clone());
                flat.arity.push(children.len());
                flat.parent.push(parent);
                flat.position.push(position);
                let me = flat.gens.len();
                for (k, c) in children.iter().enumerate() {
                    rec(c, me, k + 1, flat);
                }
            }
        }
        rec(t, 1, 0, &mut flat);
        flat
    }

    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    /// Children of each node as `(position, child_index)` sorted by position.
    pub fn children_of(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.degree();
        let mut children = vec![Vec::new(); n];
        for i in 2..=n {
            children[self.parent[i - 1] - 1].push((self.position[i - 1], i));
        }
        for list in &mut children {
            list.sort_unstable();
        }
        children
    }

    /// Rebuild the term, checking that parents, positions and the preorder
    /// numbering are mutually consistent.
    pub fn to_term(&self) -> Result<Term> {
        let n = self.degree();
        if n == 0 {
            return Ok(Term::Leaf);
        }
        if self.parent[0] != 1 || self.position[0] != 0 {
            return Err(Error::NotRealizable("root must be its own parent".into()));
        }
        for i in 2..=n {
            let p = self.parent[i - 1];
            if p < 1 || p >= i {
                return Err(Error::NotRealizable(format!(
                    "node {i} has parent {p} outside 1..{i}"
                )));
            }
            let pos = self.position[i - 1];
            if pos < 1 || pos > self.arity[p - 1] {
                return Err(Error::NotRealizable(format!(
                    "node {i} sits at position {pos} of a node of arity {}",
                    self.arity[p - 1]
                )));
            }
        }
        let children = self.children_of();
        for list in &children {
            for pair in list.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(Error::NotRealizable(format!(
                        "child slot ({},{}) occupied twice",
                        pair[0].1, pair[0].0
                    )));
                }
            }
        }
        fn build(
            flat: &Flat,
            children: &[Vec<(usize, usize)>],
            i: usize,
            counter: &mut usize,
        ) -> Result<Term> {
            if i != *counter {
                return Err(Error::NotRealizable(format!(
                    "node {i} is visited {}th in preorder",
                    *counter
                )));
            }
            *counter += 1;
            let mut slots = vec![Term::Leaf; flat.arity[i - 1]];
            for &(pos, child) in &children[i - 1] {
                slots[pos - 1] = build(flat, children, child, counter)?;
            }
            Ok(Term::node(flat.gens[i - 1].clone(), slots))
        }
        let mut counter = 1;
        let t = build(self, &children, 1, &mut counter)?;
        Ok(t)
    }

    /// Full preorder walk over internal nodes and leaves.
    pub fn walk(&self) -> Vec<Visit> {
        let children = self.children_of();
        let mut out = Vec::new();
        fn rec(
            flat: &Flat,
            children: &[Vec<(usize, usize)>],
            i: usize,
            out: &mut Vec<Visit>,
        ) {
            out.push(Visit::Node(i));
            let mut next = children[i - 1].iter().peekable();
            for pos in 1..=flat.arity[i - 1] {
                match next.peek() {
                    Some(&&(p, child)) if p == pos => {
                        next.next();
                        rec(flat, children, child, out);
                    }
                    _ => out.push(Visit::Leaf {
                        parent: i,
                        position: pos,
                    }),
                }
            }
        }
        if self.degree() > 0 {
            rec(self, &children, 1, &mut out);
        }
        out
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(n);
        out.push(Edge {
            parent: 1,
            position: 0,
            child: 1,
        });
        for i in 2..=n {
            out.push(Edge {
                parent: self.parent[i - 1],
                position: self.position[i - 1],
                child: i,
            });
        }
        out
    }
}

/// Structural statistics of a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermStructure {
    pub degree: usize,
    pub arity: usize,
    pub decoration_word: Vec<String>,
    pub edges: Vec<Edge>,
    /// 1-based leaf ranks of the leaves visited after every internal node.
    pub extreme_leaves: Vec<usize>,
}

pub fn structure(t: &Term) -> TermStructure {
    let flat = Flat::of(t);
    let walk = flat.walk();
    let mut leaf_rank = 0;
    let mut extreme = Vec::new();
    let mut last_node_seen = 0usize;
    let total_nodes = flat.degree();
    for v in &walk {
        match v {
            Visit::Node(_) => last_node_seen += 1,
            Visit::Leaf { .. } => {
                leaf_rank += 1;
                if last_node_seen == total_nodes {
                    extreme.push(leaf_rank);
                }
            }
        }
    }
    TermStructure {
        degree: flat.degree(),
        arity: t.arity(),
        decoration_word: flat.gens.clone(),
        edges: flat.edges(),
        extreme_leaves: extreme,
    }
}

/// Replace the last internal node by a leaf.
pub fn contraction(t: &Term) -> Result<Term> {
    let mut flat = Flat::of(t);
    if flat.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    flat.gens.pop();
    flat.arity.pop();
    flat.parent.pop();
    flat.position.pop();
    flat.to_term()
}

/// Per internal node, the number of its strict internal-node descendants.
pub fn scope_sequence(t: &Term) -> Vec<usize> {
    let flat = Flat::of(t);
    let n = flat.degree();
    let mut sc = vec![0usize; n];
    for i in (2..=n).rev() {
        sc[flat.parent[i - 1] - 1] += sc[i - 1] + 1;
    }
    sc
}

/// Substitute the leaves of `t` from left to right by `args`.
pub fn full_composition(t: &Term, args: &[Term]) -> Result<Term> {
    if args.len() != t.arity() {
        return Err(Error::LengthMismatch {
            expected: t.arity(),
            found: args.len(),
        });
    }
    let mut iter = args.iter();
    fn rec<'a>(t: &Term, iter: &mut impl Iterator<Item = &'a Term>) -> Term {
        match t {
            Term::Leaf => iter.next().expect("arity checked").clone(),
            Term::Node { gen, children } => Term::node(
                gen.clone(),
                children.iter().map(|c| rec(c, iter)).collect(),
            ),
        }
    }
    Ok(rec(t, &mut iter))
}

/// Size of a forest (the natural-number decoration of its root).
pub fn forest_size(t: &Term) -> Option<usize> {
    match t {
        Term::Node { gen, .. } => nat_index(gen),
        Term::Leaf => None,
    }
}

/// A balanced forest has degree equal to its size plus one.
pub fn is_balanced_forest(t: &Term) -> bool {
    matches!(forest_size(t), Some(n) if t.degree() == n + 1)
}

/// Concatenation of forests: root sizes add, child lists are joined.
pub fn concat_forests(f1: &Term, f2: &Term) -> Result<Term> {
    let (n1, n2) = match (forest_size(f1), forest_size(f2)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidInput("concatenation needs forests".into())),
    };
    if n1 + n2 > MAX_ARITY {
        return Err(Error::ArityTooLarge(n1 + n2));
    }
    let kids = |f: &Term| match f {
        Term::Node { children, .. } => children.clone(),
        Term::Leaf => Vec::new(),
    };
    let mut children = kids(f1);
    children.extend(kids(f2));
    Ok(Term::node(nat_gen(n1 + n2), children))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: &'a Signature) -> Parser<'a> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            sig,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Syntax {
                pos: self.pos,
                msg: format!("expected `{}`", b as char),
            }),
        }
    }

    fn name(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_alphabetic() || *b == b'_' => {}
            _ => {
                return Err(Error::Syntax {
                    pos: self.pos,
                    msg: "expected a generator name or `*`".into(),
                })
            }
        }
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        Ok((
            std::str::from_utf8(&self.bytes[start..self.pos])
                .expect("ascii slice")
                .to_string(),
            start,
        ))
    }

    fn number(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Syntax {
                pos: self.pos,
                msg: "expected a number".into(),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let value = text.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: "number too large".into(),
        })?;
        Ok((value, start))
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(Term::Leaf)
            }
            _ => {
                let (name, start) = self.name()?;
                let expected = self.sig.arity_of(&name).ok_or(Error::UnknownGenerator {
                    name: name.clone(),
                    pos: start,
                })?;
                let mut children = Vec::new();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    if self.peek() == Some(b')') {
                        self.pos += 1;
                    } else {
                        loop {
                            children.push(self.term()?);
                            match self.peek() {
                                Some(b',') => {
                                    self.pos += 1;
                                }
                                Some(b')') => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => {
                                    return Err(Error::Syntax {
                                        pos: self.pos,
                                        msg: "expected `,` or `)`".into(),
                                    })
                                }
                            }
                        }
                    }
                }
                if children.len() != expected {
                    return Err(Error::ArityMismatch {
                        name,
                        pos: start,
                        expected,
                        found: children.len(),
                    });
                }
                Ok(Term::node(name, children))
            }
        }
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(Error::Syntax {
                pos: self.pos,
                msg: "trailing input".into(),
            });
        }
        Ok(())
    }

    fn forest(&mut self) -> Result<Term> {
        let (size, start) = self.number()?;
        if size > MAX_ARITY {
            return Err(Error::ArityTooLarge(size));
        }
        self.expect(b':')?;
        self.expect(b'(')?;
        let mut children = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                children.push(self.term()?);
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => {
                        return Err(Error::Syntax {
                            pos: self.pos,
                            msg: "expected `,` or `)`".into(),
                        })
                    }
                }
            }
        }
        if children.len() != size {
            return Err(Error::ArityMismatch {
                name: nat_gen(size),
                pos: start,
                expected: size,
                found: children.len(),
            });
        }
        Ok(Term::node(nat_gen(size), children))
    }
}

/// Parse a term; `render_term` is a left inverse.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig);
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

/// Parse a forest written as `n:(t1,...,tn)` (or `0:()`).
pub fn parse_forest(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig);
    let t = p.forest()?;
    p.end()?;
    Ok(t)
}

/// Parse either syntax, dispatching on the leading character.
pub fn parse_any(text: &str, sig: &Signature) -> Result<Term> {
    if text.trim_start().starts_with(|c: char| c.is_ascii_digit()) {
        parse_forest(text, sig)
    } else {
        parse_term(text, sig)
    }
}
