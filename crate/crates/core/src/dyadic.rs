//! Exact dyadic rationals `m / 2^k`.
//!
//! Connection-word entries are always of this form: the binary fixed-point
//! expansion has the parent index before the point and a run of ones after
//! it. Values are kept normalized (odd numerator, or exponent zero) so that
//! structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;

/// A dyadic rational `num / 2^den_exp` in normal form.
///
/// The numerator is odd unless the exponent is zero. With node indices
/// bounded by the poset ceiling and arities bounded by
/// [`crate::signature::MAX_ARITY`], all comparisons fit in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    den_exp: u32,
}

impl Dyadic {
    pub fn new(mut num: i128, mut den_exp: u32) -> Dyadic {
        while num != 0 && num % 2 == 0 && den_exp > 0 {
            num /= 2;
            den_exp -= 1;
        }
        if num == 0 {
            den_exp = 0;
        }
        Dyadic { num, den_exp }
    }

    pub fn integer(n: i128) -> Dyadic {
        Dyadic { num: n, den_exp: 0 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    /// Floor of the value; exact for nonnegative and negative inputs alike.
    pub fn floor(&self) -> i128 {
        self.num >> self.den_exp
    }

    pub fn is_integer(&self) -> bool {
        self.den_exp == 0
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.den_exp.max(other.den_exp);
        let a = self.num << (e - self.den_exp);
        let b = other.num << (e - other.den_exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1i128 << self.den_exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use proptest::prelude::*;

    fn big(d: Dyadic) -> BigRational {
        BigRational::new(d.num().into(), (1i128 << d.den_exp()).into())
    }

    #[test]
    fn normalization() {
        assert_eq!(Dyadic::new(6, 2), Dyadic::new(3, 1));
        assert_eq!(Dyadic::new(0, 5), Dyadic::integer(0));
        assert_eq!(Dyadic::new(8, 3), Dyadic::integer(1));
        let d = Dyadic::new(12, 4);
        assert_eq!(Dyadic::new(d.num(), d.den_exp()), d);
    }

    #[test]
    fn display_mixed() {
        assert_eq!(Dyadic::new(15, 3).to_string(), "15/8");
        assert_eq!(Dyadic::new(5, 0).to_string(), "5");
    }

    proptest! {
        #[test]
        fn agrees_with_arbitrary_precision(a in -10_000i128..10_000, ea in 0u32..12,
                                           b in -10_000i128..10_000, eb in 0u32..12) {
            let x = Dyadic::new(a, ea);
            let y = Dyadic::new(b, eb);
            prop_assert_eq!(x.cmp(&y), big(x).cmp(&big(y)));
            prop_assert_eq!(big(x.max(y)), big(x).max(big(y)));
        }
    }
}
