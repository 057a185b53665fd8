use std::collections::BTreeMap;

use serde::Serialize;

use super::Complex;
use crate::cob::FlatTangle;
use crate::error::{Error, Result};
use crate::poly::Laurent;
use crate::ring::Coeff;

/// Graded Euler characteristic: `Σ (−1)^{t−t₀} q^{q} [tangle]` with
/// `t₀ = parity/2` (the coset of the t-degrees mod 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerChar {
    /// `t2 mod 2` of every object (0 for integral t-degrees).
    pub parity: u8,
    pub terms: BTreeMap<FlatTangle, Laurent>,
}

impl EulerChar {
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|p| p.is_zero())
    }

    pub fn coeff(&self, t: &FlatTangle) -> Laurent {
        self.terms.get(t).cloned().unwrap_or_default()
    }
}

pub fn euler_char<R: Coeff>(c: &Complex<R>) -> Result<EulerChar> {
    let parity = c.objects.first().map_or(0, |o| o.degree.t2.rem_euclid(2) as u8);
    let mut terms: BTreeMap<FlatTangle, Laurent> = BTreeMap::new();
    let circle = Laurent::from_terms([(-1, 1), (1, 1)]);
    for o in &c.objects {
        if o.degree.t2.rem_euclid(2) as u8 != parity {
            return Err(Error::NotCoherent);
        }
        let k = (o.degree.t2 - parity as i32) / 2;
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut p = Laurent::monomial(sign, o.degree.q);
        for _ in 0..o.obj.loops {
            p = &p * &circle;
        }
        let e = terms.entry(o.obj.tangle.clone()).or_default();
        *e = &*e + &p;
    }
    terms.retain(|_, p| !p.is_zero());
    Ok(EulerChar { parity, terms })
}
