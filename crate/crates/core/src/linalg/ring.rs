use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted for `Z/m` and `F_p`; products of two reduced
/// residues must fit in an `i64`.
pub const MAX_MODULUS: i64 = 1 << 31;

/// An exact ring element.
///
/// Integer-like rings only ever use the numerator (`den == 1`). Over the
/// rationals the fraction is kept in lowest terms with a positive
/// denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    num: i64,
    den: i64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { num: 0, den: 1 };
    pub const ONE: Scalar = Scalar { num: 1, den: 1 };

    pub const fn int(n: i64) -> Self {
        Scalar { num: n, den: 1 }
    }

    /// Reduced fraction `num / den`. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Scalar { num: n, den: d }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidScalar(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(Scalar::int).map_err(|_| bad()),
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Scalar::frac(n, d))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The coefficient rings supported by the exact linear algebra layer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CoeffRing {
    Integers,
    IntegersMod(i64),
    PrimeField(i64),
    Rationals,
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn overflow() -> ! {
    panic!("integer overflow in exact arithmetic")
}

impl CoeffRing {
    pub fn integers_mod(m: i64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&m) {
            return Err(Error::InvalidRing(format!("modulus {m} must lie in [2, 2^31]")));
        }
        Ok(CoeffRing::IntegersMod(m))
    }

    pub fn prime_field(p: i64) -> Result<Self> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not a supported prime")));
        }
        Ok(CoeffRing::PrimeField(p))
    }

    /// The modulus for finite rings.
    pub fn modulus(&self) -> Option<i64> {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        self.canon(Scalar::ONE)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.canon(Scalar::int(n))
    }

    /// Canonical representative: `[0, m)` for finite rings, lowest terms for
    /// the rationals. Fractions are rejected by integer-like rings.
    pub fn canon(&self, a: Scalar) -> Scalar {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => {
                assert!(a.den == 1, "fraction {a} in {self}");
                Scalar::int(a.num.rem_euclid(m))
            }
            CoeffRing::Integers => {
                assert!(a.den == 1, "fraction {a} in {self}");
                a
            }
            CoeffRing::Rationals => Scalar::frac(a.num, a.den),
        }
    }

    /// Whether `a` is already in canonical form for this ring.
    pub fn is_canonical(&self, a: Scalar) -> bool {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => a.den == 1 && (0..m).contains(&a.num),
            CoeffRing::Integers => a.den == 1,
            CoeffRing::Rationals => a.den > 0 && a.num.gcd(&a.den) == 1,
        }
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => {
                let s = a.num + b.num;
                Scalar::int(if s >= m { s - m } else { s })
            }
            CoeffRing::Integers => Scalar::int(a.num.checked_add(b.num).unwrap_or_else(|| overflow())),
            CoeffRing::Rationals => {
                let g = a.den.gcd(&b.den);
                let l = (a.den / g).checked_mul(b.den).unwrap_or_else(|| overflow());
                let x = a.num.checked_mul(l / a.den).unwrap_or_else(|| overflow());
                let y = b.num.checked_mul(l / b.den).unwrap_or_else(|| overflow());
                Scalar::frac(x.checked_add(y).unwrap_or_else(|| overflow()), l)
            }
        }
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => Scalar::int(if a.num == 0 { 0 } else { m - a.num }),
            _ => Scalar { num: a.num.checked_neg().unwrap_or_else(|| overflow()), den: a.den },
        }
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => Scalar::int(a.num * b.num % m),
            CoeffRing::Integers => Scalar::int(a.num.checked_mul(b.num).unwrap_or_else(|| overflow())),
            CoeffRing::Rationals => {
                let g1 = a.num.gcd(&b.den).max(1);
                let g2 = b.num.gcd(&a.den).max(1);
                let n = (a.num / g1).checked_mul(b.num / g2).unwrap_or_else(|| overflow());
                let d = (a.den / g2).checked_mul(b.den / g1).unwrap_or_else(|| overflow());
                Scalar::frac(n, d)
            }
        }
    }

    /// `a^e` by repeated squaring.
    pub fn pow(&self, a: Scalar, mut e: u32) -> Scalar {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        match *self {
            CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => {
                let e = a.num.extended_gcd(&m);
                (e.gcd == 1).then(|| Scalar::int(e.x.rem_euclid(m)))
            }
            CoeffRing::Integers => (a.num == 1 || a.num == -1).then_some(a),
            CoeffRing::Rationals => (a.num != 0).then(|| Scalar::frac(a.den, a.num)),
        }
    }

    pub fn is_unit(&self, a: Scalar) -> bool {
        self.inv(a).is_some()
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::IntegersMod(m) => write!(f, "Z/{m}"),
            CoeffRing::PrimeField(p) => write!(f, "F{p}"),
            CoeffRing::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for CoeffRing {
    type Err = Error;

    /// Accepts `Z`, `Z/m`, `Fp`, `GF(p)` and `Q` (the ASCII forms are what
    /// `Display` produces).
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('ℤ', "Z").replace('ℚ', "Q").replace('𝔽', "F");
        let bad = || Error::InvalidRing(s.to_string());
        if t == "Z" {
            return Ok(CoeffRing::Integers);
        }
        if t == "Q" {
            return Ok(CoeffRing::Rationals);
        }
        if let Some(m) = t.strip_prefix("Z/") {
            return CoeffRing::integers_mod(m.parse().map_err(|_| bad())?);
        }
        if let Some(p) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            return CoeffRing::prime_field(p.parse().map_err(|_| bad())?);
        }
        if let Some(p) = t.strip_prefix('F') {
            return CoeffRing::prime_field(p.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

impl Serialize for CoeffRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoeffRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(CoeffRing::integers_mod(1).is_err());
        assert!(CoeffRing::integers_mod(4).is_ok());
        assert!(CoeffRing::prime_field(9).is_err());
        assert!(CoeffRing::prime_field(5).is_ok());
    }

    #[test]
    fn parse_and_display() {
        for s in ["Z", "Z/4", "F5", "Q"] {
            let r: CoeffRing = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("ℤ/9".parse::<CoeffRing>().unwrap(), CoeffRing::IntegersMod(9));
        assert_eq!("GF(7)".parse::<CoeffRing>().unwrap(), CoeffRing::PrimeField(7));
        assert!("Z/x".parse::<CoeffRing>().is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let r = CoeffRing::IntegersMod(4);
        assert_eq!(r.mul(Scalar::int(2), Scalar::int(2)), Scalar::ZERO);
        assert_eq!(r.add(Scalar::int(3), Scalar::int(2)), Scalar::int(1));
        assert_eq!(r.neg(Scalar::int(1)), Scalar::int(3));
        assert_eq!(r.inv(Scalar::int(3)), Some(Scalar::int(3)));
        assert_eq!(r.inv(Scalar::int(2)), None);
        assert_eq!(r.from_i64(-2), Scalar::int(2));
    }

    #[test]
    fn rational_arithmetic() {
        let q = CoeffRing::Rationals;
        let a = Scalar::frac(1, 2);
        let b = Scalar::frac(1, 3);
        assert_eq!(q.add(a, b), Scalar::frac(5, 6));
        assert_eq!(q.mul(a, b), Scalar::frac(1, 6));
        assert_eq!(q.inv(Scalar::frac(-2, 3)), Some(Scalar::frac(-3, 2)));
        assert_eq!("-2/4".parse::<Scalar>().unwrap(), Scalar::frac(-1, 2));
    }
}
