//! Exact scalars in ℚ(ω), ω a primitive cube root of unity.
//!
//! Every scalar is stored as `a + b·ω` with rational `a`, `b`; plain rationals
//! simply have `b = 0`. Multiplication uses ω² = −ω − 1.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    re: BigRational,
    w: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), w: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    /// The primitive cube root of unity ω.
    pub fn omega() -> Self {
        Scalar { re: BigRational::zero(), w: BigRational::one() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { re: r, w: BigRational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b·ω`.
    pub fn cyclotomic(a: BigRational, b: BigRational) -> Self {
        Scalar { re: a, w: b }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn omega_part(&self) -> &BigRational {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.w.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.w.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.w.is_zero()
    }

    /// Galois conjugate, ω ↦ ω².
    pub fn conj(&self) -> Self {
        // a + bω² = (a − b) − bω
        Scalar { re: &self.re - &self.w, w: -&self.w }
    }

    /// Field norm a² − ab + b², always a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.w + &self.w * &self.w
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(Scalar { re: c.re / &n, w: c.w / n })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, w: &self.w + &rhs.w }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, w: &self.w - &rhs.w }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.w.is_zero() && rhs.w.is_zero() {
            return Scalar::from_rational(&self.re * &rhs.re);
        }
        // (a + bω)(c + dω) = (ac − bd) + (ad + bc − bd)ω
        let bd = &self.w * &rhs.w;
        Scalar {
            re: &self.re * &rhs.re - &bd,
            w: &self.re * &rhs.w + &self.w * &rhs.re - bd,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like integer division.
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, w: -&self.w }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, w: -self.w }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.w += &rhs.w;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.w -= &rhs.w;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Literal(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(q) => {
            if q.starts_with(['-', '+']) {
                return Err(bad());
            }
            q.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Rationals print as `p` or `p/q`; anything with an ω part prints as `a+b*w`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else {
            write!(f, "{}+{}*w", fmt_rational(&self.re), fmt_rational(&self.w))
        }
    }
}

/// Accepts `p`, `p/q`, `a+b*w`, `b*w` and `w`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Literal(s.to_string()));
        }
        let Some(body) = s.strip_suffix('w') else {
            return Ok(Scalar::from_rational(parse_rational(s)?));
        };
        if body.is_empty() {
            return Ok(Scalar::omega());
        }
        let Some(body) = body.strip_suffix('*') else {
            return Err(Error::Literal(s.to_string()));
        };
        // the separating '+' is the first one past a leading sign
        let split = body
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+')
            .map(|(i, _)| i);
        let (a, b) = match split {
            Some(i) => (parse_rational(&body[..i])?, parse_rational(&body[i + 1..])?),
            None => (BigRational::zero(), parse_rational(body)?),
        };
        Ok(Scalar::cyclotomic(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn omega_is_a_primitive_cube_root() {
        let w = Scalar::omega();
        assert!(w.pow(3).is_one());
        assert!(!w.is_one());
        let sum = &(&Scalar::one() + &w) + &w.pow(2);
        assert!(sum.is_zero());
    }

    #[test]
    fn literals() {
        assert_eq!(s("1/2"), Scalar::ratio(1, 2));
        assert_eq!(s("4/8"), Scalar::ratio(1, 2));
        assert_eq!(s("-3"), Scalar::from(-3));
        let v = s("-2+1*w");
        assert_eq!(v.re(), &BigRational::from_integer((-2).into()));
        assert_eq!(v.omega_part(), &BigRational::one());
        assert_eq!(s("w"), Scalar::omega());
        assert_eq!(s("-1/3*w").omega_part(), &BigRational::new((-1).into(), 3.into()));
        assert_eq!(s("1+-2*w").to_string(), "1+-2*w");
        assert_eq!(s("-6/4").to_string(), "-3/2");
        for bad in ["", "1/0", "x", "1/-2", "1+2*", "1++w"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn denominators_stay_reduced() {
        let x = &s("2/6") + &s("1/6");
        assert_eq!(x.to_string(), "1/2");
        let y = &s("3/4") * &s("-4/9");
        assert_eq!(y.to_string(), "-1/3");
    }

    #[test]
    fn inverse_of_cyclotomic() {
        let x = s("2+3*w");
        let prod = &x * &x.inv().unwrap();
        assert!(prod.is_one());
        assert!(Scalar::zero().inv().is_none());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..7, -20i64..20, 1i64..7).prop_map(|(a, b, c, d)| {
            Scalar::cyclotomic(
                BigRational::new(a.into(), b.into()),
                BigRational::new(c.into(), d.into()),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if let Some(ai) = a.inv() {
                prop_assert!((&a * &ai).is_one());
            }
        }

        #[test]
        fn rational_subfield_closed(a in -50i64..50, b in 1i64..9, c in -50i64..50, d in 1i64..9) {
            let x = Scalar::ratio(a, b);
            let y = Scalar::ratio(c, d);
            let xy = &x * &y;
            prop_assert!(xy.is_rational());
            prop_assert_eq!(xy.re(), &(BigRational::new(a.into(), b.into()) * BigRational::new(c.into(), d.into())));
        }

        #[test]
        fn display_parse_roundtrip(a in arb_scalar()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }
    }
}
