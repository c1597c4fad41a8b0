//! Exact coefficient fields: the rationals and prime fields F_p.
//!
//! All arithmetic in the crate is exact; there is no floating point
//! anywhere. Rational coefficients use arbitrary-precision integers,
//! prime fields require p < 2^31 so products fit in u64.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientField {
    /// The field of rational numbers (characteristic 0).
    Q,
    /// The prime field F_p, p < 2^31.
    Fp(u32),
}

impl CoefficientField {
    pub fn characteristic(&self) -> u32 {
        match self {
            CoefficientField::Q => 0,
            CoefficientField::Fp(p) => *p,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            CoefficientField::Q => Ok(()),
            CoefficientField::Fp(p) => {
                if *p >= (1 << 31) {
                    return Err(format!("prime {p} too large (need p < 2^31)"));
                }
                if !is_prime(*p as u64) {
                    return Err(format!("{p} is not prime"));
                }
                Ok(())
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. The variant must match the ring's field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coef {
    Q(BigRational),
    F(u64),
}

impl CoefficientField {
    pub fn zero(&self) -> Coef {
        match self {
            CoefficientField::Q => Coef::Q(BigRational::zero()),
            CoefficientField::Fp(_) => Coef::F(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            CoefficientField::Q => Coef::Q(BigRational::one()),
            CoefficientField::Fp(_) => Coef::F(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        match self {
            CoefficientField::Q => Coef::Q(BigRational::from(BigInt::from(v))),
            CoefficientField::Fp(p) => {
                let p = *p as i64;
                Coef::F(v.rem_euclid(p) as u64)
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Option<Coef> {
        match self {
            CoefficientField::Q => {
                if den == 0 {
                    None
                } else {
                    Some(Coef::Q(BigRational::new(
                        BigInt::from(num),
                        BigInt::from(den),
                    )))
                }
            }
            CoefficientField::Fp(_) => {
                let d = self.from_i64(den);
                if self.is_zero(&d) {
                    None
                } else {
                    Some(self.mul(&self.from_i64(num), &self.inv(&d)))
                }
            }
        }
    }

    pub fn is_zero(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(r) => r.is_zero(),
            Coef::F(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(r) => r.is_one(),
            Coef::F(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefficientField::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x + y),
            (CoefficientField::Fp(p), Coef::F(x), Coef::F(y)) => Coef::F((x + y) % (*p as u64)),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoefficientField::Q, Coef::Q(x)) => Coef::Q(-x),
            (CoefficientField::Fp(p), Coef::F(x)) => {
                let p = *p as u64;
                Coef::F(if *x == 0 { 0 } else { p - x })
            }
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefficientField::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x * y),
            (CoefficientField::Fp(p), Coef::F(x), Coef::F(y)) => Coef::F(x * y % (*p as u64)),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoefficientField::Q, Coef::Q(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Coef::Q(x.recip())
            }
            (CoefficientField::Fp(p), Coef::F(x)) => {
                assert!(*x != 0, "division by zero");
                Coef::F(mod_inv(*x, *p as u64))
            }
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }

    /// Render an element the way the polynomial grammar accepts it.
    pub fn render(&self, a: &Coef) -> String {
        match a {
            Coef::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coef::F(v) => v.to_string(),
        }
    }

    /// True when the element is "negative" for display purposes.
    pub fn is_display_negative(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(r) => r.is_negative(),
            Coef::F(_) => false,
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "element not invertible");
    t.rem_euclid(p as i128) as u64
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Q(r) => write!(f, "{r}"),
            Coef::F(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let f = CoefficientField::Fp(7);
        for a in 1..7 {
            let inv = f.inv(&Coef::F(a));
            assert!(f.is_one(&f.mul(&Coef::F(a), &inv)));
        }
    }

    #[test]
    fn char2_negation_is_identity() {
        let f = CoefficientField::Fp(2);
        assert_eq!(f.neg(&Coef::F(1)), Coef::F(1));
    }

    #[test]
    fn rational_exactness() {
        let f = CoefficientField::Q;
        let third = f.from_ratio(1, 3).unwrap();
        let sum = f.add(&f.add(&third, &third), &third);
        assert!(f.is_one(&sum));
    }

    #[test]
    fn prime_check() {
        assert!(CoefficientField::Fp(2).validate().is_ok());
        assert!(CoefficientField::Fp(9).validate().is_err());
        assert!(CoefficientField::Fp(0).validate().is_err());
    }
}
