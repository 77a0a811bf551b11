//! Signatures: named generators with fixed arities.
//!
//! Two generator families are built in besides the user-declared names:
//!
//! * the `a` family (`a0`, `a1`, ...) where `a{i}` has arity `i`, enabled
//!   up to a declared maximum index;
//! * the natural-number family (`n0`, `n1`, ...) where `n{k}` has arity
//!   `k`. These names are reserved in every signature: they decorate the
//!   roots of forests, and form the whole signature of the Fuss-Catalan
//!   and rooted-tree posets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest admissible arity. Connection-word exponents are bounded by the
/// arity, and the cap keeps all dyadic comparisons inside `i128`.
pub const MAX_ARITY: usize = 64;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    named: BTreeMap<String, usize>,
    a_family_max: Option<usize>,
    nat_family: bool,
}

/// The index of a natural-number generator name `n{k}`.
pub fn nat_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('n')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// The generator name `n{k}` of arity `k`.
pub fn nat_gen(k: usize) -> String {
    format!("n{k}")
}

fn a_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Signature {
    /// A signature with the given user-declared generators.
    pub fn new<I, S>(generators: I) -> Result<Signature>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut named = BTreeMap::new();
        for (name, arity) in generators {
            let name = name.into();
            if arity > MAX_ARITY {
                return Err(Error::ArityTooLarge(arity));
            }
            if nat_index(&name).is_some() {
                return Err(Error::InvalidInput(format!(
                    "generator name `{name}` is reserved for the natural-number family"
                )));
            }
            if named.insert(name.clone(), arity).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate generator name `{name}`"
                )));
            }
        }
        Ok(Signature {
            named,
            a_family_max: None,
            nat_family: false,
        })
    }

    /// The signature consisting of the `a` family up to index `max`.
    pub fn a_family(max: usize) -> Signature {
        Signature {
            named: BTreeMap::new(),
            a_family_max: Some(max.min(MAX_ARITY)),
            nat_family: false,
        }
    }

    /// The signature of all natural numbers, `n{k}` with arity `k`.
    pub fn nat() -> Signature {
        Signature {
            named: BTreeMap::new(),
            a_family_max: None,
            nat_family: true,
        }
    }

    pub fn with_a_family(mut self, max: usize) -> Signature {
        self.a_family_max = Some(max.min(MAX_ARITY));
        self
    }

    pub fn with_nat_family(mut self) -> Signature {
        self.nat_family = true;
        self
    }

    /// Arity of a generator name, if the name belongs to this signature.
    pub fn arity_of(&self, name: &str) -> Option<usize> {
        if let Some(&a) = self.named.get(name) {
            return Some(a);
        }
        if let (Some(max), Some(i)) = (self.a_family_max, a_index(name)) {
            if i <= max {
                return Some(i);
            }
        }
        if self.nat_family {
            if let Some(k) = nat_index(name) {
                if k <= MAX_ARITY {
                    return Some(k);
                }
            }
        }
        None
    }

    /// Parse the JSON signature file format: an array of
    /// `{"name": ..., "arity": ...}` objects, optionally containing a
    /// `{"builtin_a_family_max": ...}` entry.
    pub fn from_json_str(text: &str) -> Result<Signature> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("signature JSON: {e}")))?;
        let entries = value
            .as_array()
            .ok_or_else(|| Error::InvalidInput("signature JSON must be an array".into()))?;
        let mut gens: Vec<(String, usize)> = Vec::new();
        let mut a_max = None;
        for entry in entries {
            let obj = entry.as_object().ok_or_else(|| {
                Error::InvalidInput("signature entries must be objects".into())
            })?;
            if let Some(m) = obj.get("builtin_a_family_max") {
                let m = m.as_u64().ok_or_else(|| {
                    Error::InvalidInput("builtin_a_family_max must be a nonnegative integer".into())
                })?;
                a_max = Some(m as usize);
                continue;
            }
            let name = obj
                .get("name")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::InvalidInput("generator entry needs a name".into()))?;
            let arity = obj
                .get("arity")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| Error::InvalidInput("generator entry needs an arity".into()))?;
            gens.push((name.to_string(), arity as usize));
        }
        let mut sig = Signature::new(gens)?;
        if let Some(m) = a_max {
            sig = sig.with_a_family(m);
        }
        Ok(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_resolve() {
        let sig = Signature::a_family(8);
        assert_eq!(sig.arity_of("a3"), Some(3));
        assert_eq!(sig.arity_of("a9"), None);
        assert_eq!(sig.arity_of("n2"), None);
        let nat = Signature::nat();
        assert_eq!(nat.arity_of("n17"), Some(17));
        assert_eq!(nat.arity_of("a1"), None);
    }

    #[test]
    fn reserved_and_duplicate_names_rejected() {
        assert!(Signature::new([("n3".to_string(), 3)]).is_err());
        assert!(Signature::new([("f".to_string(), 1), ("f".to_string(), 2)]).is_err());
        assert!(Signature::new([("big".to_string(), MAX_ARITY + 1)]).is_err());
    }

    #[test]
    fn json_format() {
        let sig = Signature::from_json_str(
            r#"[{"name":"mul","arity":2},{"name":"one","arity":0},{"builtin_a_family_max":4}]"#,
        )
        .unwrap();
        assert_eq!(sig.arity_of("mul"), Some(2));
        assert_eq!(sig.arity_of("one"), Some(0));
        assert_eq!(sig.arity_of("a4"), Some(4));
        assert_eq!(sig.arity_of("a5"), None);
    }
}
