//! Laurent polynomials in one variable with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `Σ c_k x^k` with `k ∈ Z`. Coefficients overflow-checked.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<i32, i128>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(1, 0)
    }

    pub fn monomial(c: i128, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(k, c);
        }
        Laurent { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, i128)>) -> Self {
        let mut p = Laurent::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i32, c: i128) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(k).or_insert(0);
        *e = e.checked_add(c).expect("coefficient overflow");
        if *e == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i32) -> i128 {
        self.terms.get(&k).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i128)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when this is `c·x^k`.
    pub fn as_monomial(&self) -> Option<(i128, i32)> {
        if self.terms.len() == 1 {
            let (&k, &c) = self.terms.iter().next().unwrap();
            Some((c, k))
        } else {
            None
        }
    }

    pub fn scale(&self, c: i128) -> Self {
        Laurent::from_terms(self.terms().map(|(k, a)| (k, a.checked_mul(c).expect("coefficient overflow"))))
    }

    pub fn shift(&self, d: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(&k, &c)| (k + d, c)).collect(),
        }
    }

    /// Substitute `x ↦ c·y^e`.
    pub fn substitute_monomial(&self, c: i128, e: i32) -> Self {
        let mut out = Laurent::zero();
        for (k, a) in self.terms() {
            let f = pow_i128(c, k);
            out.add_term(k * e, a.checked_mul(f).expect("coefficient overflow"));
        }
        out
    }

    /// Keep only terms with exponent `<= k`.
    pub fn truncate_above(&self, k: i32) -> Self {
        Laurent {
            terms: self.terms.range(..=k).map(|(&a, &b)| (a, b)).collect(),
        }
    }

    /// Exact division when `self = q · other` for a monomial `q`.
    pub fn monomial_ratio(&self, other: &Laurent) -> Option<(i128, i32)> {
        let (ka, ca) = self.terms.iter().next().map(|(k, c)| (*k, *c))?;
        let (kb, cb) = other.terms.iter().next().map(|(k, c)| (*k, *c))?;
        if ca % cb != 0 {
            return None;
        }
        let (c, k) = (ca / cb, ka - kb);
        (other.scale(c).shift(k) == *self).then_some((c, k))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Laurent::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Substitute `x ↦ p`; only defined when every exponent is non-negative.
    pub fn compose(&self, p: &Laurent) -> Option<Self> {
        if self.min_degree().is_some_and(|k| k < 0) {
            return None;
        }
        let mut out = Laurent::zero();
        let top = self.max_degree().unwrap_or(0);
        for k in (0..=top).rev() {
            out = &out * p;
            out.add_term(0, self.coeff(k));
        }
        Some(out)
    }

    /// `self / d` when the quotient is a Laurent polynomial with integer coefficients.
    pub fn div_exact(&self, d: &Laurent) -> Option<Self> {
        let (dk, dc) = d.terms.iter().next_back().map(|(k, c)| (*k, *c))?;
        let floor = self.min_degree().unwrap_or(0) - d.min_degree()?;
        let mut r = self.clone();
        let mut q = Laurent::zero();
        while let Some((rk, rc)) = r.terms.iter().next_back().map(|(k, c)| (*k, *c)) {
            let k = rk - dk;
            if k < floor || rc % dc != 0 {
                return None;
            }
            let t = Laurent::monomial(rc / dc, k);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Expansion of `self / d` in descending powers, keeping exponents `>= lowest`.
    /// Needs the leading coefficient of `d` to be `±1`.
    pub fn series_desc(&self, d: &Laurent, lowest: i32) -> Option<Self> {
        let (dk, dc) = d.terms.iter().next_back().map(|(k, c)| (*k, *c))?;
        if dc.abs() != 1 {
            return None;
        }
        let mut r = self.clone();
        let mut q = Laurent::zero();
        while let Some((rk, rc)) = r.terms.iter().next_back().map(|(k, c)| (*k, *c)) {
            let k = rk - dk;
            if k < lowest {
                break;
            }
            let t = Laurent::monomial(rc * dc, k);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn eval_i128(&self, x: i128) -> Option<i128> {
        // Only meaningful when x = ±1.
        if x.abs() != 1 {
            return None;
        }
        let mut s: i128 = 0;
        for (k, c) in self.terms() {
            s = s.checked_add(c * pow_i128(x, k))?;
        }
        Some(s)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Laurent::zero());
        }
        let mut out = Laurent::zero();
        let cleaned = s.replace(" - ", " + -").replace(' ', "");
        for tok in cleaned.split('+').filter(|t| !t.is_empty()) {
            let (c, k) = match tok.split_once('*') {
                Some((c, m)) => (c, m),
                None if tok.contains('^') || tok.ends_with(char::is_alphabetic) => ("1", tok),
                None => (tok, ""),
            };
            let c: i128 = match c {
                "-" => -1,
                "" => 1,
                _ => c.parse().map_err(|e| Error::Parse(format!("bad coefficient {c:?}: {e}")))?,
            };
            let k = if k.is_empty() {
                0
            } else if let Some((_, e)) = k.split_once('^') {
                e.trim_matches(|ch| ch == '(' || ch == ')')
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad exponent in {tok:?}: {e}")))?
            } else {
                1
            };
            out.add_term(k, c);
        }
        Ok(out)
    }

    /// Canonical form `c_k*A^k + ...`, ascending in `k`.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(k, c)| format!("{c}*{var}^{k}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(crate) fn pow_i128(c: i128, k: i32) -> i128 {
    match c {
        1 => 1,
        -1 => {
            if k.rem_euclid(2) == 0 {
                1
            } else {
                -1
            }
        }
        _ => {
            assert!(k >= 0, "negative power of {c}");
            c.checked_pow(k as u32).expect("coefficient overflow")
        }
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("x"))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("A"))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, c);
        }
        r
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, -c);
        }
        r
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                r.add_term(a + b, x.checked_mul(y).expect("coefficient overflow"));
            }
        }
        r
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string_var("A"))
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Laurent::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_series() {
        let d = Laurent::from_terms([(1, 1), (-1, 1)]);
        let p = &d * &Laurent::from_terms([(3, 2), (0, -5), (-4, 1)]);
        assert_eq!(p.div_exact(&d).unwrap(), Laurent::from_terms([(3, 2), (0, -5), (-4, 1)]));
        assert!(Laurent::one().div_exact(&d).is_none());
        // 1/(x + x^{-1}) = x^{-1} − x^{-3} + x^{-5} − …
        let s = Laurent::one().series_desc(&d, -7).unwrap();
        assert_eq!(s, Laurent::from_terms([(-1, 1), (-3, -1), (-5, 1), (-7, -1)]));
        let delta = Laurent::from_terms([(2, -1), (-2, -1)]);
        let x2 = Laurent::from_terms([(2, 1), (0, -2)]);
        assert_eq!(x2.compose(&delta).unwrap(), &(&delta * &delta) - &Laurent::monomial(2, 0));
        assert!(Laurent::monomial(1, -1).compose(&delta).is_none());
        assert_eq!(d.pow(2), Laurent::from_terms([(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn arithmetic() {
        let d = Laurent::from_terms([(2, -1), (-2, -1)]);
        let sq = &d * &d;
        assert_eq!(sq, Laurent::from_terms([(4, 1), (0, 2), (-4, 1)]));
        assert!((&d - &d).is_zero());
        assert_eq!(d.monomial_ratio(&d.shift(3).scale(-1)), Some((-1, -3)));
        assert_eq!(d.monomial_ratio(&Laurent::one()), None);
    }

    #[test]
    fn string_round_trip() {
        let p = Laurent::from_terms([(-3, 2), (0, -1), (5, 7)]);
        let s = p.to_string_var("A");
        assert_eq!(s, "2*A^-3 + -1*A^0 + 7*A^5");
        assert_eq!(Laurent::parse(&s).unwrap(), p);
        assert_eq!(Laurent::parse("A^2 - 3*A").unwrap(), Laurent::from_terms([(2, 1), (1, -3)]));
        assert_eq!(Laurent::parse("0").unwrap(), Laurent::zero());
    }

    #[test]
    fn substitution() {
        // q + q^-1 with q = -A^-2 gives -A^-2 - A^2.
        let p = Laurent::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(p.substitute_monomial(-1, -2), Laurent::from_terms([(2, -1), (-2, -1)]));
    }
}
