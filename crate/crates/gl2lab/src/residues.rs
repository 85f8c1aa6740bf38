//! Exact arithmetic in `Z/NZ` and on 2x2 matrices over it.
//!
//! # Matrix convention
//!
//! A matrix acts on column vectors. If `(P, Q)` is a basis of the `N`-torsion
//! and `sigma(P) = A*P + B*Q`, `sigma(Q) = C*P + D*Q`, the matrix of `sigma` is
//! written row-major as `[[A, C], [B, D]]`. In this crate the four entries are
//! called `a, b, c, d` in row-major order, so `a = A`, `b = C` (top right),
//! `c = B` (bottom left) and `d = D`. The cyclic subgroup generated by the
//! second basis vector `(0, 1)` is stable modulo `2^r` exactly when every
//! element has `b = 0 mod 2^r`.
//!
//! # Packing
//!
//! Group enumeration stores each matrix as one `u64`: `a` in bits 0..16, `b`
//! in bits 16..32, `c` in bits 32..48 and `d` in bits 48..64. Sixteen bits per
//! entry cover every supported modulus (the largest is `128 * 25 = 3200`).
//! The layout is stable: packed words may be persisted.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Odd parts accepted by [`Modulus::new`].
pub const SUPPORTED_ODD_PARTS: [u32; 7] = [1, 3, 5, 7, 9, 13, 25];

/// Largest supported exponent of 2 in a modulus.
pub const MAX_TWO_EXPONENT: u32 = 7;

/// A supported modulus `N = 2^a * q` with its factorization cached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    n: u32,
    two_exp: u32,
    odd: u32,
}

impl Modulus {
    /// Validates `n` against the supported range.
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > u32::MAX as u64 {
            return Err(Error::UnsupportedModulus(n));
        }
        let two_exp = n.trailing_zeros();
        let odd = (n >> two_exp) as u32;
        if two_exp > MAX_TWO_EXPONENT || !SUPPORTED_ODD_PARTS.contains(&odd) {
            return Err(Error::UnsupportedModulus(n));
        }
        Ok(Modulus { n: n as u32, two_exp, odd })
    }

    /// The modulus `2^e`.
    pub fn two_power(e: u32) -> Result<Self> {
        if e > MAX_TWO_EXPONENT {
            return Err(Error::UnsupportedModulus(1u64 << e.min(63)));
        }
        Modulus::new(1u64 << e)
    }

    /// The integer `N`.
    pub fn n(self) -> u32 {
        self.n
    }

    /// The exponent `a` of the 2-part.
    pub fn two_exponent(self) -> u32 {
        self.two_exp
    }

    /// The 2-part `2^a`.
    pub fn two_part(self) -> u32 {
        1 << self.two_exp
    }

    /// The odd part `q`.
    pub fn odd_part(self) -> u32 {
        self.odd
    }

    /// True when `N` is a power of 2 (including `N = 1`).
    pub fn is_two_power(self) -> bool {
        self.odd == 1
    }

    /// True when `self` divides `other`.
    pub fn divides(self, other: Modulus) -> bool {
        other.n.is_multiple_of(self.n)
    }

    /// True when `x` is a unit modulo `N`.
    pub fn is_unit(self, x: u32) -> bool {
        gcd(x as u64, self.n as u64) == 1
    }

    /// Reduces any integer into `[0, N)`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }

    /// All units of `Z/NZ` in increasing order.
    pub fn units(self) -> Vec<u32> {
        (0..self.n).filter(|&x| self.is_unit(x)).collect()
    }

    /// All positive divisors of `N` (each itself a supported modulus), increasing.
    pub fn divisors(self) -> Vec<Modulus> {
        let mut out: Vec<Modulus> = (1..=self.n)
            .filter(|d| self.n.is_multiple_of(*d))
            .map(|d| Modulus::new(d as u64).expect("divisor of a supported modulus"))
            .collect();
        out.sort();
        out
    }

    /// Prime-power factors `(p, e, p^e)` of `N`, the prime 2 first when present.
    pub fn prime_powers(self) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        if self.two_exp > 0 {
            out.push((2, self.two_exp, 1 << self.two_exp));
        }
        let mut q = self.odd;
        let mut p = 3;
        while q > 1 {
            if q.is_multiple_of(p) {
                let mut e = 0;
                let mut pe = 1;
                while q.is_multiple_of(p) {
                    q /= p;
                    e += 1;
                    pe *= p;
                }
                out.push((p, e, pe));
            }
            p += 2;
        }
        out
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `x` modulo `n`, if it exists. For `n = 1` the inverse of 0 is 0.
pub fn inv_mod(x: u32, n: u32) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (n as i64, (x % n) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i64) as u32)
}

/// Least `k >= 1` with `u^k = 1 mod m`.
pub fn unit_order(u: i64, m: Modulus) -> Result<u64> {
    let n = m.n() as u64;
    let u = m.reduce(u) as u64;
    if !m.is_unit(u as u32) {
        return Err(Error::NonUnit { value: u as i64, modulus: m.n() });
    }
    let mut x = u % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * u % n;
        k += 1;
    }
    Ok(k)
}

// ---------------------------------------------------------------------------
// Packed representation.

/// Packs row-major entries `[[a, b], [c, d]]` into one word.
#[inline]
pub fn pack(a: u32, b: u32, c: u32, d: u32) -> u64 {
    a as u64 | (b as u64) << 16 | (c as u64) << 32 | (d as u64) << 48
}

/// Inverse of [`pack`].
#[inline]
pub fn unpack(p: u64) -> [u32; 4] {
    [
        (p & 0xffff) as u32,
        (p >> 16 & 0xffff) as u32,
        (p >> 32 & 0xffff) as u32,
        (p >> 48) as u32,
    ]
}

/// Product of two packed matrices modulo `n`.
#[inline]
pub fn mul_packed(x: u64, y: u64, n: u32) -> u64 {
    let [a, b, c, d] = unpack(x).map(|v| v as u64);
    let [e, f, g, h] = unpack(y).map(|v| v as u64);
    let n = n as u64;
    pack(
        ((a * e + b * g) % n) as u32,
        ((a * f + b * h) % n) as u32,
        ((c * e + d * g) % n) as u32,
        ((c * f + d * h) % n) as u32,
    )
}

/// Determinant of a packed matrix modulo `n`.
#[inline]
pub fn det_packed(x: u64, n: u32) -> u32 {
    let [a, b, c, d] = unpack(x).map(|v| v as u64);
    let n = n as u64;
    ((a * d + n * n - (b * c) % (n * n)) % n) as u32
}

/// Inverse of a packed matrix modulo `n`, if invertible.
pub fn inv_packed(x: u64, n: u32) -> Option<u64> {
    let [a, b, c, d] = unpack(x);
    let di = inv_mod(det_packed(x, n), n)? as u64;
    let n64 = n as u64;
    let neg = |v: u32| (n64 - v as u64 % n64) % n64;
    Some(pack(
        (d as u64 * di % n64) as u32,
        (neg(b) * di % n64) as u32,
        (neg(c) * di % n64) as u32,
        (a as u64 * di % n64) as u32,
    ))
}

/// Transpose of a packed matrix.
#[inline]
pub fn transpose_packed(x: u64) -> u64 {
    let [a, b, c, d] = unpack(x);
    pack(a, c, b, d)
}

/// Entrywise reduction of a packed matrix to modulus `m`.
#[inline]
pub fn reduce_packed(x: u64, m: u32) -> u64 {
    let [a, b, c, d] = unpack(x);
    pack(a % m, b % m, c % m, d % m)
}

/// The packed identity modulo `n`.
#[inline]
pub fn identity_packed(n: u32) -> u64 {
    let one = 1 % n;
    pack(one, 0, 0, one)
}

/// The packed `-Id` modulo `n`.
#[inline]
pub fn minus_identity_packed(n: u32) -> u64 {
    let m1 = (n - 1) % n;
    pack(m1, 0, 0, m1)
}

/// Multiplicative order of an invertible packed matrix modulo `n`.
pub fn order_packed(x: u64, n: u32) -> u32 {
    let id = identity_packed(n);
    let mut y = x;
    let mut k = 1;
    while y != id {
        y = mul_packed(y, x, n);
        k += 1;
    }
    k
}

/// Entrywise CRT combination modulo `m1 * m2` for coprime moduli.
#[inline]
pub fn crt_packed(x1: u64, m1: u32, x2: u64, m2: u32, m1_inv_mod_m2: u32) -> u64 {
    let e1 = unpack(x1);
    let e2 = unpack(x2);
    let mut out = [0u32; 4];
    for i in 0..4 {
        out[i] = crt_scalar(e1[i], m1, e2[i], m2, m1_inv_mod_m2);
    }
    pack(out[0], out[1], out[2], out[3])
}

#[inline]
fn crt_scalar(r1: u32, m1: u32, r2: u32, m2: u32, m1_inv_mod_m2: u32) -> u32 {
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    let m2_64 = m2 as u64;
    let diff = (r2 as u64 + m2_64 - r1 as u64 % m2_64) % m2_64;
    let t = diff * m1_inv_mod_m2 as u64 % m2_64;
    r1 + m1 * t as u32
}

/// Lifts a packed matrix from modulus `from` to a multiple `to` so that the
/// result stays invertible when the input is. Prime factors of `to` not
/// dividing `from` receive the identity component; the remaining part is the
/// integer representative.
pub fn lift_packed(x: u64, from: Modulus, to: Modulus) -> u64 {
    debug_assert!(from.divides(to));
    // Split `to` into the part sharing primes with `from` and the rest.
    let mut shared = 1u32;
    for (p, _, pe) in to.prime_powers() {
        if from.n().is_multiple_of(p) {
            shared *= pe;
        }
    }
    let rest = to.n() / shared;
    let base = if from.n() == 1 { identity_packed(shared) } else { x };
    if rest == 1 {
        return base;
    }
    let inv = inv_mod(shared % rest, rest).expect("coprime split");
    crt_packed(base, shared, identity_packed(rest), rest, inv)
}

// ---------------------------------------------------------------------------
// Public matrix type.

/// A 2x2 matrix over `Z/NZ`, row-major `[[a, b], [c, d]]` (see module docs).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMatrix {
    modulus: Modulus,
    packed: u64,
}

impl ResidueMatrix {
    /// Builds a matrix from row-major integer entries, reducing them into `[0, N)`.
    pub fn new(modulus: Modulus, rows: [[i64; 2]; 2]) -> Self {
        let r = |v: i64| modulus.reduce(v);
        ResidueMatrix {
            modulus,
            packed: pack(r(rows[0][0]), r(rows[0][1]), r(rows[1][0]), r(rows[1][1])),
        }
    }

    /// Wraps a packed word whose entries are already reduced.
    pub fn from_packed(modulus: Modulus, packed: u64) -> Self {
        debug_assert!(unpack(packed).iter().all(|&v| v < modulus.n()));
        ResidueMatrix { modulus, packed }
    }

    /// The identity matrix.
    pub fn identity(modulus: Modulus) -> Self {
        Self::from_packed(modulus, identity_packed(modulus.n()))
    }

    /// The matrix `-Id`.
    pub fn minus_identity(modulus: Modulus) -> Self {
        Self::from_packed(modulus, minus_identity_packed(modulus.n()))
    }

    /// The modulus.
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The packed word.
    pub fn packed(&self) -> u64 {
        self.packed
    }

    /// Row-major entries `[a, b, c, d]`.
    pub fn entries(&self) -> [u32; 4] {
        unpack(self.packed)
    }

    /// Row-major entries as nested rows.
    pub fn rows(&self) -> [[u32; 2]; 2] {
        let [a, b, c, d] = self.entries();
        [[a, b], [c, d]]
    }

    /// Determinant in `[0, N)`.
    pub fn det(&self) -> u32 {
        det_packed(self.packed, self.modulus.n())
    }

    /// True iff `gcd(det, N) = 1`.
    pub fn is_invertible(&self) -> bool {
        self.modulus.is_unit(self.det())
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_packed(self.modulus, transpose_packed(self.packed))
    }

    /// Entrywise reduction to a divisor of the modulus.
    pub fn reduce_to(&self, target: Modulus) -> Result<Self> {
        if !target.divides(self.modulus) {
            return Err(Error::NotDivisor { target: target.n(), modulus: self.modulus.n() });
        }
        Ok(Self::from_packed(target, reduce_packed(self.packed, target.n())))
    }

    /// Lift to a multiple of the modulus that reduces back to `self` and stays
    /// invertible (see [`lift_packed`]).
    pub fn lift_to(&self, target: Modulus) -> Result<Self> {
        if !self.modulus.divides(target) {
            return Err(Error::NotDivisor { target: self.modulus.n(), modulus: target.n() });
        }
        Ok(Self::from_packed(target, lift_packed(self.packed, self.modulus, target)))
    }

    /// Multiplicative order (the matrix must be invertible).
    pub fn order(&self) -> Result<u32> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        Ok(order_packed(self.packed, self.modulus.n()))
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: [u32; 2]) -> [u32; 2] {
        let [a, b, c, d] = self.entries().map(|x| x as u64);
        let n = self.modulus.n() as u64;
        let (x, y) = (v[0] as u64 % n, v[1] as u64 % n);
        [((a * x + b * y) % n) as u32, ((c * x + d * y) % n) as u32]
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ResidueMatrix {
    /// Formats as `[[a,b],[c,d]] mod n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries();
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.modulus)
    }
}

impl FromStr for ResidueMatrix {
    type Err = Error;

    /// Parses `[[a,b],[c,d]] mod n` (whitespace-insensitive; entries may be negative).
    fn from_str(s: &str) -> Result<Self> {
        let err = |msg: &str| Error::Parse { line: None, msg: format!("{msg}: {s:?}") };
        let (mat, modulus) = s.rsplit_once("mod").ok_or_else(|| err("missing `mod n`"))?;
        let n: u64 = modulus.trim().parse().map_err(|_| err("bad modulus"))?;
        let m = Modulus::new(n)?;
        let rows = parse_matrix_rows(mat.trim())?;
        Ok(ResidueMatrix::new(m, rows))
    }
}

/// Parses the bracket form `[[a,b],[c,d]]` (a JSON array) into integer rows.
pub fn parse_matrix_rows(s: &str) -> Result<[[i64; 2]; 2]> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(s)
        .map_err(|e| Error::Parse { line: None, msg: format!("matrix {s:?}: {e}") })?;
    matrix_rows_from_vec(&rows)
}

/// Checks the 2x2 shape of nested integer rows.
pub fn matrix_rows_from_vec(rows: &[Vec<i64>]) -> Result<[[i64; 2]; 2]> {
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(Error::Parse { line: None, msg: format!("expected a 2x2 matrix, got {rows:?}") });
    }
    Ok([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
}

/// Matrix product; both factors must share the modulus.
pub fn mat_mul(x: &ResidueMatrix, y: &ResidueMatrix) -> Result<ResidueMatrix> {
    if x.modulus != y.modulus {
        return Err(Error::ModulusMismatch { left: x.modulus.n(), right: y.modulus.n() });
    }
    Ok(ResidueMatrix::from_packed(x.modulus, mul_packed(x.packed, y.packed, x.modulus.n())))
}

/// Matrix inverse.
pub fn mat_inv(x: &ResidueMatrix) -> Result<ResidueMatrix> {
    inv_packed(x.packed, x.modulus.n())
        .map(|p| ResidueMatrix::from_packed(x.modulus, p))
        .ok_or_else(|| Error::NotInvertible(x.to_string()))
}

/// The unique matrix modulo `2^a * q` reducing to `x2` modulo `2^a` and to
/// `xq` modulo `q`.
pub fn crt_lift(x2: &ResidueMatrix, xq: &ResidueMatrix) -> Result<ResidueMatrix> {
    let (m1, m2) = (x2.modulus.n(), xq.modulus.n());
    if gcd(m1 as u64, m2 as u64) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    let target = Modulus::new(m1 as u64 * m2 as u64)?;
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    Ok(ResidueMatrix::from_packed(target, crt_packed(x2.packed, m1, xq.packed, m2, inv)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn mat(n: u64, rows: [[i64; 2]; 2]) -> ResidueMatrix {
        ResidueMatrix::new(m(n), rows)
    }

    #[test]
    fn modulus_range() {
        for n in [1, 2, 3, 12, 104, 128, 3200, 25, 9] {
            assert!(Modulus::new(n).is_ok(), "{n}");
        }
        for n in [0, 11, 256, 15, 27, 6400, 49] {
            assert!(Modulus::new(n).is_err(), "{n}");
        }
        let x = m(104);
        assert_eq!((x.two_part(), x.odd_part(), x.two_exponent()), (8, 13, 3));
        assert_eq!(x.prime_powers(), vec![(2, 3, 8), (13, 1, 13)]);
        assert_eq!(m(1).prime_powers(), vec![]);
    }

    #[test]
    fn multiplication_examples() {
        let x = mat(4, [[3, 3], [0, 1]]);
        let y = mat(4, [[0, 1], [3, 1]]);
        assert_eq!(mat_mul(&x, &y).unwrap(), mat(4, [[1, 2], [3, 1]]));
        // Independent check with plain integer arithmetic.
        let big = [[(3 * 3), 3 + 3], [3, 1]];
        assert_eq!(mat_mul(&x, &y).unwrap(), mat(4, big));
        let u = mat(4, [[1, 2], [0, 1]]);
        assert_eq!(mat_mul(&u, &u).unwrap(), ResidueMatrix::identity(m(4)));
        assert_eq!(mat_mul(&ResidueMatrix::identity(m(4)), &x).unwrap(), x);
        assert!(mat_mul(&x, &mat(8, [[1, 0], [0, 1]])).is_err());
    }

    #[test]
    fn inverse_examples() {
        let x = mat(8, [[3, 0], [0, 1]]);
        assert_eq!(mat_inv(&x).unwrap(), x);
        assert_eq!(mat_inv(&ResidueMatrix::identity(m(8))).unwrap(), ResidueMatrix::identity(m(8)));
        assert!(mat_inv(&mat(8, [[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn unit_orders() {
        assert_eq!(unit_order(5, m(32)).unwrap(), 8);
        assert_eq!(unit_order(1, m(8)).unwrap(), 1);
        assert_eq!(unit_order(3, m(16)).unwrap(), 4);
        assert!(unit_order(2, m(8)).is_err());
        assert_eq!(unit_order(0, m(1)).unwrap(), 1);
    }

    #[test]
    fn crt_examples() {
        let i4 = ResidueMatrix::identity(m(4));
        let i3 = ResidueMatrix::identity(m(3));
        assert_eq!(crt_lift(&i4, &i3).unwrap(), ResidueMatrix::identity(m(12)));
        let x = crt_lift(&mat(4, [[1, 2], [0, 1]]), &mat(3, [[1, 1], [0, 1]])).unwrap();
        assert_eq!(x, mat(12, [[1, 10], [0, 1]]));
        assert_eq!(x.reduce_to(m(4)).unwrap(), mat(4, [[1, 2], [0, 1]]));
        assert_eq!(x.reduce_to(m(3)).unwrap(), mat(3, [[1, 1], [0, 1]]));
        let y = crt_lift(&mat(8, [[3, 0], [0, 1]]), &i3).unwrap();
        assert_eq!(y, mat(24, [[19, 0], [0, 1]]));
        assert!(crt_lift(&i4, &ResidueMatrix::identity(m(2))).is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = mat(12, [[7, 2], [3, 1]]);
        let s = x.to_string();
        assert_eq!(s, "[[7,2],[3,1]] mod 12");
        assert_eq!(s.parse::<ResidueMatrix>().unwrap(), x);
        assert_eq!(" [[ -1, 0 ],[0 , 1]] mod 8".parse::<ResidueMatrix>().unwrap(), mat(8, [[7, 0], [0, 1]]));
        assert!("[[1,0],[0]] mod 8".parse::<ResidueMatrix>().is_err());
        assert!("[[1,0],[0,1]] mod 11".parse::<ResidueMatrix>().is_err());
    }

    #[test]
    fn lifting_keeps_invertibility() {
        // From mod 1 the only element lifts to the identity.
        let z = ResidueMatrix::identity(m(1));
        assert_eq!(z.lift_to(m(32)).unwrap(), ResidueMatrix::identity(m(32)));
        // New odd primes get an identity component.
        let x = mat(4, [[3, 0], [0, 1]]);
        let l = x.lift_to(m(12)).unwrap();
        assert!(l.is_invertible());
        assert_eq!(l.reduce_to(m(4)).unwrap(), x);
        assert_eq!(l.reduce_to(m(3)).unwrap(), ResidueMatrix::identity(m(3)));
        // Same primes: integer representative.
        assert_eq!(mat(4, [[3, 2], [1, 1]]).lift_to(m(32)).unwrap(), mat(32, [[3, 2], [1, 1]]));
    }
}
