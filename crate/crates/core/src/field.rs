//! Finite fields GF(p^k) with dense integer encodings.
//!
//! An element of GF(p^k) is stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` is its residue modulo the field's
//! defining polynomial. For prime fields this is just the residue in `[0, p-1]`.
//! Every element therefore doubles as an array index in `[0, q-1]`, which is what
//! the plane builder relies on.
//!
//! Extension fields multiply through exp/log tables built from a primitive element
//! found by scanning; prime fields use plain modular arithmetic.

use crate::error::{Error, Result};

/// Encoded field element in `[0, q-1]`.
pub type Elem = u32;

/// Prime fields above this order keep no inverse table.
const INVERSE_TABLE_LIMIT: u64 = 1 << 24;
/// Largest extension field we are willing to tabulate.
const EXTENSION_LIMIT: u64 = 1 << 20;
/// Largest prime characteristic; keeps `a * b` inside a `u64`.
const PRIME_LIMIT: u64 = 1 << 31;
/// Below this the quadratic character is a lookup table.
const LEGENDRE_TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Clone)]
enum Arith {
    Prime,
    Extension { exp: Vec<u32>, log: Vec<u32> },
}

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    arith: Arith,
    inverse: Vec<u32>,
}

/// Value of the Legendre symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Legendre {
    NonResidue = -1,
    Zero = 0,
    Residue = 1,
}

impl Legendre {
    pub fn value(self) -> i32 {
        self as i8 as i32
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Dense polynomial arithmetic over GF(p), coefficients low degree first.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let p = p as u64;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let dm = m.len() - 1;
        let lead_inv = super::pow_mod(m[dm] as u64, p - 2, p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                for (i, &mc) in m.iter().enumerate() {
                    let j = top - dm + i;
                    r[j] = (r[j] + p - c * mc as u64 % p) % p;
                }
            }
            r.pop();
        }
        trim(r.into_iter().map(|c| c as u32).collect())
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Monic polynomial of `degree` whose lower coefficients are the base-p digits
    /// of `index`, least significant digit = constant term.
    pub fn monic_from_index(mut index: u64, degree: u32, p: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            c.push((index % p as u64) as u32);
            index /= p as u64;
        }
        c.push(1);
        c
    }

    pub fn has_root(f: &[u32], p: u32) -> bool {
        let p64 = p as u64;
        (0..p64).any(|x| {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * x + c as u64) % p64;
            }
            acc == 0
        })
    }

    /// Root test plus trial division by every monic divisor of degree <= k/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = (f.len() - 1) as u32;
        if k <= 1 {
            return k == 1;
        }
        if has_root(f, p) {
            return false;
        }
        for d in 2..=k / 2 {
            let count = (p as u64).pow(d);
            for idx in 0..count {
                let g = monic_from_index(idx, d, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(q). For `q = p^k` with `k > 1` the defining polynomial is the
    /// lexicographically smallest monic irreducible of degree `k`, comparing
    /// coefficients from the constant term upwards.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p >= PRIME_LIMIT || (k > 1 && q > EXTENSION_LIMIT) {
            return Err(Error::FieldTooLarge(q));
        }
        let p32 = p as u32;
        if k == 1 {
            let inverse = if q <= INVERSE_TABLE_LIMIT {
                let mut inv = vec![0u32; q as usize];
                for a in 1..p {
                    inv[a as usize] = pow_mod(a, p - 2, p) as u32;
                }
                inv
            } else {
                Vec::new()
            };
            return Ok(Field {
                p: p32,
                k,
                q: p32,
                modulus: vec![0, 1],
                arith: Arith::Prime,
                inverse,
            });
        }

        let modulus = smallest_irreducible(p32, k);
        let mut field = Field {
            p: p32,
            k,
            q: q as u32,
            modulus,
            arith: Arith::Prime,
            inverse: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q as u32)
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        let mut inverse = vec![0u32; q as usize];
        for a in 1..q as usize {
            let l = log[a] as u64;
            inverse[a] = exp[((order - l) % order) as usize];
        }
        self.arith = Arith::Extension { exp, log };
        self.inverse = inverse;
    }

    fn digits(&self, mut a: Elem) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        poly::trim(d)
    }

    fn pack(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly::mul(&self.digits(a), &self.digits(b), self.p);
        self.pack(&poly::rem(&prod, &self.modulus, self.p))
    }

    fn slow_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, low degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        match self.k {
            1 => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            _ if self.p == 2 => a ^ b,
            _ => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for _ in 0..self.k {
                    out += ((a % self.p + b % self.p) % self.p) * place;
                    a /= self.p;
                    b /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.k {
            1 => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            _ if self.p == 2 => a,
            _ => {
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..self.k {
                    out += ((self.p - a % self.p) % self.p) * place;
                    a /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        match &self.arith {
            Arith::Prime => (a as u64 * b as u64 % self.p as u64) as Elem,
            Arith::Extension { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if let Some(&i) = self.inverse.get(a as usize) {
            return Some(i);
        }
        let p = self.p as u64;
        Some(pow_mod(a as u64, p - 2, p) as Elem)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of `a` in the multiplicative group; `None` for zero.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = self.q as u64 - 1;
        let mut order = n;
        for r in prime_factors(n) {
            while order % r == 0 && self.pow(a, order / r) == 1 {
                order /= r;
            }
        }
        Some(order)
    }

    /// Legendre symbol by Euler's criterion.
    pub fn legendre(&self, x: Elem) -> Result<Legendre> {
        if self.k != 1 || self.p == 2 {
            return Err(Error::LegendreNeedsOddPrime);
        }
        let p = self.p as u64;
        Ok(match pow_mod(x as u64, (p - 1) / 2, p) {
            0 => Legendre::Zero,
            1 => Legendre::Residue,
            _ => Legendre::NonResidue,
        })
    }

    /// The integer representative in `[0, p-1]`, which orders a prime field.
    pub fn lift(&self, x: Elem) -> Result<u32> {
        if self.k != 1 {
            return Err(Error::OrderNeedsPrimeField);
        }
        Ok(x)
    }
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    // Lexicographic, constant term first: the constant term is the most
    // significant key, so enumerate with reversed digit significance.
    (0..count)
        .map(|idx| {
            let mut f = poly::monic_from_index(idx, k, p);
            f[..k as usize].reverse();
            f
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// The quadratic character of an odd prime field, tuned for inner loops.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    p: u32,
    table: Option<Vec<i8>>,
}

impl QuadraticCharacter {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) || p as u64 >= PRIME_LIMIT {
            return Err(Error::LegendreNeedsOddPrime);
        }
        let table = (p < LEGENDRE_TABLE_LIMIT).then(|| {
            let mut t = vec![-1i8; p as usize];
            t[0] = 0;
            for x in 1..=(p as u64 - 1) / 2 {
                t[(x * x % p as u64) as usize] = 1;
            }
            t
        });
        Ok(QuadraticCharacter { p, table })
    }

    pub fn for_field(field: &Field) -> Result<Self> {
        if !field.is_prime_field() {
            return Err(Error::LegendreNeedsOddPrime);
        }
        Self::new(field.characteristic())
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// χ of an arbitrary integer, reduced mod p first.
    #[inline]
    pub fn chi(&self, x: i64) -> i32 {
        self.chi_residue(x.rem_euclid(self.p as i64) as u32)
    }

    /// χ of a residue already in `[0, p-1]`.
    #[inline]
    pub fn chi_residue(&self, x: u32) -> i32 {
        match &self.table {
            Some(t) => t[x as usize] as i32,
            None => {
                let p = self.p as u64;
                match pow_mod(x as u64, (p - 1) / 2, p) {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                }
            }
        }
    }
}
