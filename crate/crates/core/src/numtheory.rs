//! Exact residue-class arithmetic.
//!
//! Everything here works on integers; no floating point is involved. The
//! cyclic-generator test is the gate used by every spectral closed form in
//! the crate, so it must be exact.

use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};

/// An element of `Z/nZ` stored in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(GcircError::domain(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(Residue {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        gcd_unchecked(self.value, self.modulus) == 1
    }

    pub fn inverse(&self) -> Result<Residue> {
        let inv = mod_inverse(self.value as i64, self.modulus)?;
        Ok(Residue {
            value: inv,
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }
}

/// Witness that `g` does (or does not) generate `U(Z/pZ)`.
///
/// `checked_divisors` holds `(d, g^d mod p)` for every divisor `d` of `p - 1`
/// with `d < p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCertificate {
    pub g: u64,
    pub p: u64,
    pub checked_divisors: Vec<(u64, u64)>,
    pub is_generator: bool,
}

/// Reduces `value` into `[0, modulus)`. Negative values wrap around.
pub fn reduce(value: i64, modulus: u64) -> u64 {
    assert!(modulus > 0, "modulus must be positive");
    (value as i128).rem_euclid(modulus as i128) as u64
}

fn gcd_unchecked(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(GcircError::domain("gcd(0, 0) is undefined"));
    }
    Ok(gcd_unchecked(a, b))
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    result
}

fn check_modulus(n: u64) -> Result<()> {
    if n < 2 {
        Err(GcircError::domain(format!(
            "modulus must be at least 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn require_unit(g: i64, n: u64) -> Result<u64> {
    check_modulus(n)?;
    let r = reduce(g, n);
    if gcd_unchecked(r, n) != 1 {
        return Err(GcircError::NotInvertible { g, n });
    }
    Ok(r)
}

/// The unique `x` in `[1, n)` with `g * x = 1 (mod n)`.
pub fn mod_inverse(g: i64, n: u64) -> Result<u64> {
    let r = require_unit(g, n)?;
    // extended Euclid on (r, n)
    let (mut old_r, mut cur_r) = (r as i128, n as i128);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let q = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    debug_assert_eq!(old_r, 1);
    Ok(old_s.rem_euclid(n as i128) as u64)
}

/// Smallest `d >= 1` with `g^d = 1 (mod n)`.
pub fn multiplicative_order(g: i64, n: u64) -> Result<u64> {
    let r = require_unit(g, n)?;
    let mut acc = r;
    let mut d = 1u64;
    while acc != 1 % n {
        acc = mul_mod(acc, r, n);
        d += 1;
    }
    Ok(d)
}

/// `[g^1, g^2, ..., g^max_exp]` reduced mod `n`.
pub fn power_table(g: i64, n: u64, max_exp: usize) -> Result<Vec<u64>> {
    let r = require_unit(g, n)?;
    if max_exp == 0 {
        return Err(GcircError::domain("max_exp must be at least 1"));
    }
    let mut out = Vec::with_capacity(max_exp);
    let mut acc = 1u64;
    for _ in 0..max_exp {
        acc = mul_mod(acc, r, n);
        out.push(acc);
    }
    Ok(out)
}

/// All positive divisors of `m`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    if m == 0 {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Trial-division primality.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(GcircError::NotPrime(p))
    }
}

/// Tests whether `g` generates `U(Z/pZ)` by checking `g^d != 1` for every
/// proper divisor `d` of `p - 1`.
pub fn is_cyclic_generator(g: i64, p: u64) -> Result<GeneratorCertificate> {
    require_prime(p)?;
    let r = require_unit(g, p)?;
    let checked_divisors: Vec<(u64, u64)> = divisors(p - 1)
        .into_iter()
        .filter(|&d| d < p - 1)
        .map(|d| (d, pow_mod(r, d, p)))
        .collect();
    let is_generator = checked_divisors.iter().all(|&(_, v)| v != 1);
    Ok(GeneratorCertificate {
        g: r,
        p,
        checked_divisors,
        is_generator,
    })
}

/// Like [`is_cyclic_generator`] but turns a negative verdict into an error.
pub(crate) fn require_generator(g: i64, p: u64) -> Result<u64> {
    let cert = is_cyclic_generator(g, p).map_err(|e| match e {
        GcircError::NotInvertible { .. } => GcircError::NotGenerator { g, p },
        other => other,
    })?;
    if cert.is_generator {
        Ok(cert.g)
    } else {
        Err(GcircError::NotGenerator { g, p })
    }
}

/// Every cyclic generator of `U(Z/pZ)` in `[2, p - 1]`, ascending.
pub fn list_generators(p: u64) -> Result<Vec<u64>> {
    require_prime(p)?;
    if p < 3 {
        return Err(GcircError::domain("list_generators needs p >= 3"));
    }
    let mut out = Vec::new();
    for g in 2..p {
        if is_cyclic_generator(g as i64, p)?.is_generator {
            out.push(g);
        }
    }
    Ok(out)
}
