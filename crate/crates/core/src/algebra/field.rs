//! Arithmetic in GF(p^m).
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of an
//! encoding are the coefficients of the polynomial residue, least
//! significant digit first. So in GF(4) with modulus `x^2 + x + 1` the
//! element `x` is `2` and `x + 1` is `3`.

use serde::Serialize;

use super::AlgebraError;

/// Largest field order we build.
pub const MAX_ORDER: u64 = 1 << 16;

/// Trial-division primality test; fine for the field sizes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// The finite field of order `q = p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Low-order coefficients `c_0..c_{m-1}` of the monic modulus
    /// `x^m + c_{m-1} x^{m-1} + ... + c_0`. Empty for prime fields.
    modulus: Vec<u32>,
    #[serde(skip)]
    exp: Vec<u32>,
    #[serde(skip)]
    log: Vec<u32>,
}

impl FiniteField {
    /// Builds GF(p^m) using the smallest monic irreducible of degree `m`,
    /// ordered by coefficient list from `x^{m-1}` down to the constant term.
    pub fn new(p: u64, m: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if m == 0 {
            return Err(AlgebraError::InvalidDegree(m));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(AlgebraError::TooLarge { p, m })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if m == 1 {
            Vec::new()
        } else {
            (0..q)
                .map(|n| digits(n, p, m as usize))
                .find(|low| {
                    let mut poly = low.clone();
                    poly.push(1);
                    is_irreducible(&poly, p)
                })
                .expect("an irreducible polynomial exists for every degree")
        };

        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_log_tables();
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self, AlgebraError> {
        let (p, m) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients from the constant term up, including the leading 1.
    /// Prime fields report the linear polynomial `x`.
    pub fn modulus(&self) -> Vec<u32> {
        if self.m == 1 {
            return vec![0, 1];
        }
        let mut poly = self.modulus.clone();
        poly.push(1);
        poly
    }

    /// Iterates over all element encodings.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % order;
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        let order = self.q - 1;
        let e = (order - self.log[a as usize]) % order;
        Ok(self.exp[e as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Polynomial product of two encodings reduced by the modulus. Only used
    /// to bootstrap the log tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let m = self.m as usize;
        let p = self.p;
        let da = digits(a, p, m);
        let db = digits(b, p, m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^m = -(c_{m-1} x^{m-1} + ... + c_0)
        for top in (m..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &c) in self.modulus.iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + (p - (lead * c) % p)) % p;
            }
        }
        undigits(&prod[..m], p)
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = self.slow_mul(x, g);
                    k += 1;
                }
                k == order
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }
}

fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `num` modulo the monic polynomial `den` over Z_p
/// (coefficients constant term first).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// True when the monic polynomial (constant term first) has no monic factor
/// of degree between 1 and half its degree.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for fdeg in 1..=deg / 2 {
        let count = (p as u64).pow(fdeg as u32);
        for n in 0..count {
            let mut factor = digits(n as u32, p, fdeg);
            factor.push(1);
            if poly_rem(poly, &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_prime_powers() {
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn irreducible_quadratics_over_z3() {
        // x^2+1, x^2+x+2, x^2+2x+2 are the irreducible monic quadratics over Z_3.
        let irreducible: Vec<_> = (0..9)
            .map(|n| {
                let mut poly = digits(n, 3, 2);
                poly.push(1);
                poly
            })
            .filter(|poly| is_irreducible(poly, 3))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 0, 1], vec![2, 1, 1], vec![2, 2, 1]]);
    }

    #[test]
    fn modulus_selection() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), vec![1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), vec![1, 0, 1]);
        // x^3 + x + 1 precedes x^3 + x^2 + 1 with the x^2 coefficient compared first.
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
        assert_eq!(FiniteField::new(5, 1).unwrap().modulus(), vec![0, 1]);
    }

    #[test]
    fn errors() {
        assert_eq!(FiniteField::new(6, 1), Err(AlgebraError::NotPrime(6)));
        assert_eq!(
            FiniteField::new(2, 17),
            Err(AlgebraError::TooLarge { p: 2, m: 17 })
        );
        assert_eq!(FiniteField::of_order(12), Err(AlgebraError::NotPrimePower(12)));
        assert!(FiniteField::new(2, 16).is_ok());
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.inv(0), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn small_examples() {
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.add(2, 4), 1);
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.inv(3), Ok(5));
        let f9 = FiniteField::new(3, 2).unwrap();
        // x * x = x^2 = -1 = 2 under x^2 + 1
        assert_eq!(f9.mul(3, 3), 2);
    }

    #[test]
    fn log_tables_match_polynomial_product() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = FiniteField::new(p, m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b), "GF({p}^{m}) {a}*{b}");
                }
            }
        }
    }
}
