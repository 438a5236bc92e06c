use std::fmt;
use std::sync::Arc;

use crate::error::{HallError, Result};

/// Largest supported field order.
pub const MAX_ORDER: usize = 16;

/// Element of a [`FiniteField`], stored as its index `0..q`.
///
/// The index is the base-`p` encoding of the representing polynomial,
/// digit `i` holding the coefficient of `x^i`. `0` and `1` are the additive
/// and multiplicative identities.
pub type Elt = u8;

/// Monic irreducible polynomials, low coefficients first, leading 1 omitted.
const IRREDUCIBLE: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0]),    // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0]), // x^4 + x + 1
    (3, 2, &[1, 0]),       // x^2 + 1
];

/// `F_q` with `q = p^k <= 16`, arithmetic by lookup table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: usize,
    add: Vec<Elt>,
    mul: Vec<Elt>,
    neg: Vec<Elt>,
    inv: Vec<Elt>,
}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.p, self.k).hash(state);
    }
}

pub type Field = Arc<FiniteField>;

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(HallError::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(HallError::InvalidField("degree must be at least 1".into()));
        }
        let q = (p as usize)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| HallError::InvalidField(format!("{p}^{k} exceeds {MAX_ORDER}")))?;
        let modulus: Vec<u8> = if k == 1 {
            vec![]
        } else {
            IRREDUCIBLE
                .iter()
                .find(|(pp, kk, _)| *pp == p && *kk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| HallError::InvalidField(format!("no table entry for {p}^{k}")))?
        };
        let (p8, k8) = (p as u8, k as usize);
        let digits = |x: usize| -> Vec<u8> {
            let mut x = x;
            (0..k8)
                .map(|_| {
                    let d = (x % p as usize) as u8;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u8]| -> usize { ds.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p8).collect();
                add[a * q + b] = encode(&s) as Elt;
                // schoolbook product then reduce by the modulus
                let mut prod = vec![0u32; 2 * k8];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + *x as u32 * *y as u32) % p;
                    }
                }
                for deg in (k8..2 * k8).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    // x^k = -modulus
                    for (i, m) in modulus.iter().enumerate() {
                        let sub = c * *m as u32 % p;
                        prod[deg - k8 + i] = (prod[deg - k8 + i] + p - sub) % p;
                    }
                }
                let r: Vec<u8> = prod[..k8].iter().map(|&x| x as u8).collect();
                mul[a * q + b] = encode(&r) as Elt;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elt).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as Elt })
            .collect();
        Ok(Arc::new(FiniteField { p, k, q, add, mul, neg, inv }))
    }

    /// Field of prime-power order `q`.
    pub fn with_order(q: usize) -> Result<Field> {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let mut pk = p as usize;
            let mut k = 1;
            while pk < q {
                pk *= p as usize;
                k += 1;
            }
            if pk == q {
                return Self::new(p, k);
            }
        }
        Err(HallError::InvalidField(format!("{q} is not a supported prime power")))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.q as u16).map(|x| x as Elt)
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elt) -> Option<Elt> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: Elt, mut e: u64) -> Elt {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, a: Elt) -> Elt {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elt) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_has_char_two() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn f4_has_no_zero_divisors() {
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.order(), 4);
        for x in 1..4 {
            assert_ne!(f.mul(x, x), 0);
        }
    }

    #[test]
    fn f3_units_cyclic_of_order_two() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.multiplicative_order(2), Some(2));
        assert_eq!(f.multiplicative_order(1), Some(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 5).is_err());
        assert!(FiniteField::new(5, 2).is_err());
        assert!(FiniteField::new(2, 0).is_err());
    }

    #[test]
    fn field_axioms_hold_for_every_supported_order() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FiniteField::with_order(q).unwrap();
            let els: Vec<Elt> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for &b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Frobenius is additive and multiplicative
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
            // Frobenius is a bijection
            let mut img: Vec<Elt> = els.iter().map(|&a| f.frobenius(a)).collect();
            img.sort();
            assert_eq!(img, els);
        }
    }
}
