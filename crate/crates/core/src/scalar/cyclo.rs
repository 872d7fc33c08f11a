//! Arithmetic in Q(zeta_L) for L divisible by 4, as rational vectors modulo Phi_L.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = div_monic_int(&num, &den);
        }
    }
    num
}

fn div_monic_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (t, dc) in den.iter().enumerate() {
            rem[k + t] -= &c * dc;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Euler's totient by trial division.
pub fn totient(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    modulus: Vec<BigRational>,
    i_coords: Vec<BigRational>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Self {
        assert!(order.is_multiple_of(4), "field order must be divisible by 4");
        let modulus: Vec<BigRational> = cyclotomic_poly(order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let mut f = CyclotomicField { order, modulus, i_coords: Vec::new() };
        f.i_coords = f.zeta_power(order / 4);
        f
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn i_coords(&self) -> &[BigRational] {
        &self.i_coords
    }

    pub fn zeta_power(&self, k: u32) -> Vec<BigRational> {
        let k = (k % self.order) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        self.reduce(p)
    }

    /// Reduces an arbitrary polynomial modulo Phi_L into a vector of length `degree`.
    pub fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        let n = self.degree();
        for k in (n..p.len()).rev() {
            let c = std::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            for (t, m) in self.modulus.iter().enumerate().take(n) {
                if !m.is_zero() {
                    p[k - n + t] -= &c * m;
                }
            }
        }
        p.resize(n, BigRational::zero());
        p.truncate(n);
        p
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut p = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        self.reduce(p)
    }

    /// Complex conjugation: zeta -> zeta^{L-1}.
    pub fn conj(&self, a: &[BigRational]) -> Vec<BigRational> {
        let mut p = vec![BigRational::zero(); self.order as usize];
        for (k, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (self.order as usize - k) % self.order as usize;
            p[e] += c;
        }
        self.reduce(p)
    }

    /// Inverse via extended Euclid against Phi_L.
    pub fn inv(&self, a: &[BigRational]) -> Result<Vec<BigRational>> {
        if a.iter().all(|c| c.is_zero()) {
            return Err(Error::DivisionByZero);
        }
        // invariant: s * a = r (mod Phi)
        let mut r0 = trim(self.modulus.clone());
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub(&s0, &mul_plain(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r1 is a nonzero constant since Phi_L is irreducible
        let c = r1[0].clone();
        let out: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(self.reduce(out))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mul_plain(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut p = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    trim(p)
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut p = vec![BigRational::zero(); n];
    for (k, x) in a.iter().enumerate() {
        p[k] += x;
    }
    for (k, y) in b.iter().enumerate() {
        p[k] -= y;
    }
    trim(p)
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (t, bc) in b.iter().enumerate() {
            r[k + t] -= &c * bc;
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

/// Exact k-th root of a nonnegative rational, if it exists.
pub fn rational_nth_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    if num_traits::pow(rn.clone(), k as usize) == *n && num_traits::pow(rd.clone(), k as usize) == *d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}
