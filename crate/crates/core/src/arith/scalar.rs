use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::{ArithError, Rational};

/// Element `a + b√5 + c√11 + d√55` of the biquadratic field Q(√5, √11).
///
/// Only equality and zero tests are exact decisions on this type; there is no ordering.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl ExactScalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        ExactScalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(a: Rational) -> Self {
        ExactScalar { a, ..Default::default() }
    }

    pub fn sqrt5() -> Self {
        ExactScalar { b: Rational::one(), ..Default::default() }
    }

    pub fn sqrt11() -> Self {
        ExactScalar { c: Rational::one(), ..Default::default() }
    }

    pub fn sqrt55() -> Self {
        ExactScalar { d: Rational::one(), ..Default::default() }
    }

    /// `√q` for a nonnegative rational `q`, when it lies in the field.
    ///
    /// That is the case iff `q / f` is a rational square for some `f ∈ {1, 5, 11, 55}`.
    pub fn sqrt_of_rational(q: &Rational) -> Option<Self> {
        if q.is_zero() {
            return Some(Self::zero());
        }
        for f in [1i64, 5, 11, 55] {
            if let Some(s) = (q / Rational::from(f)).sqrt_exact() {
                let mut out = Self::zero();
                match f {
                    1 => out.a = s,
                    5 => out.b = s,
                    11 => out.c = s,
                    _ => out.d = s,
                }
                return Some(out);
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Display-only approximation; never use it to decide anything.
    pub fn approx_as_float(&self) -> f64 {
        self.a.to_f64()
            + self.b.to_f64() * 5f64.sqrt()
            + self.c.to_f64() * 11f64.sqrt()
            + self.d.to_f64() * 55f64.sqrt()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ExactScalar {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }

    /// Image under √5 ↦ −√5.
    fn conj5(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    /// Image under √11 ↦ −√11.
    fn conj11(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        // x · σ5(x) lies in Q(√11); multiplying by its √11-conjugate gives the rational norm.
        let s5 = self.conj5();
        let half = self * &s5;
        let half_conj = half.conj11();
        let norm = &half * &half_conj;
        debug_assert!(norm.is_rational());
        let numer = &s5 * &half_conj;
        Ok(numer.scale(&norm.a.recip()?))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::rational(r)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::rational(Rational::from(n))
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, r: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a + &r.a,
            b: &self.b + &r.b,
            c: &self.c + &r.c,
            d: &self.d + &r.d,
        }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, r: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a - &r.a,
            b: &self.b - &r.b,
            c: &self.c - &r.c,
            d: &self.d - &r.d,
        }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, r: &ExactScalar) -> ExactScalar {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&r.a, &r.b, &r.c, &r.d);
        let five = Rational::from(5);
        let eleven = Rational::from(11);
        let ff = Rational::from(55);
        // √5·√5 = 5, √11·√11 = 11, √55·√55 = 55, √5·√11 = √55, √5·√55 = 5√11, √11·√55 = 11√5
        ExactScalar {
            a: a1 * a2 + &five * (b1 * b2) + &eleven * (c1 * c2) + &ff * (d1 * d2),
            b: a1 * b2 + b1 * a2 + &eleven * (c1 * d2 + d1 * c2),
            c: a1 * c2 + c1 * a2 + &five * (b1 * d2 + d1 * b2),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, r: ExactScalar) -> ExactScalar {
                $trait::$method(&self, &r)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, r: &ExactScalar) -> ExactScalar {
                $trait::$method(&self, r)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = [(&self.a, ""), (&self.b, "*r5"), (&self.c, "*r11"), (&self.d, "*r55")]
            .into_iter()
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, r)| format!("{x}{r}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = ArithError;

    /// Accepts the display form: nonzero terms `q`, `q*r5`, `q*r11`, `q*r55` joined by ` + `.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let mut out = ExactScalar::zero();
        let mut seen = [false; 4];
        for term in s.trim().split(" + ") {
            let (body, slot) = match term.split_once('*') {
                None => (term, 0),
                Some((q, "r5")) => (q, 1),
                Some((q, "r11")) => (q, 2),
                Some((q, "r55")) => (q, 3),
                Some(_) => return Err(bad()),
            };
            if std::mem::replace(&mut seen[slot], true) {
                return Err(bad());
            }
            let v: Rational = body.parse()?;
            *[&mut out.a, &mut out.b, &mut out.c, &mut out.d][slot] = v;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn sqrt11_squared_is_eleven() {
        let s = ExactScalar::sqrt11();
        assert_eq!(&s * &s, ExactScalar::from(11));
    }

    #[test]
    fn reciprocal_of_sqrt11_is_rationalized() {
        let inv = ExactScalar::sqrt11().inv().unwrap();
        assert_eq!(inv, ExactScalar::new(q(0, 1), q(0, 1), q(1, 11), q(0, 1)));
    }

    #[test]
    fn gamma2_times_radius_product() {
        // r1^2 = 12/5, r2^2 = 132/5, so r1 r2 = (12/5)√11
        let r1r2 = ExactScalar::sqrt_of_rational(&(q(12, 5) * q(132, 5))).unwrap();
        assert_eq!(r1r2, ExactScalar::sqrt11().scale(&q(12, 5)));
        let gamma2 = ExactScalar::from(-1).div(&ExactScalar::sqrt11().scale(&q(4, 1))).unwrap();
        assert_eq!(&gamma2 * &r1r2, ExactScalar::rational(q(-3, 5)));
    }

    #[test]
    fn division_by_zero_is_distinct_error() {
        assert_eq!(ExactScalar::one().div(&ExactScalar::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn text_form_roundtrips() {
        let x = ExactScalar::new(q(1, 15), q(0, 1), q(4, 165), q(-3, 7));
        let s = x.to_string();
        assert_eq!(s, "1/15 + 4/165*r11 + -3/7*r55");
        assert_eq!(s.parse::<ExactScalar>().unwrap(), x);
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!("0".parse::<ExactScalar>().unwrap(), ExactScalar::zero());
        assert_eq!("-1/44*r11".parse::<ExactScalar>().unwrap(), ExactScalar::new(q(0, 1), q(0, 1), q(-1, 44), q(0, 1)));
        assert!("1/2 + 3*r7".parse::<ExactScalar>().is_err());
        assert!("1*r5 + 2*r5".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn sqrt_of_rational_rejects_foreign_radicals() {
        assert!(ExactScalar::sqrt_of_rational(&q(3, 1)).is_none());
        assert_eq!(ExactScalar::sqrt_of_rational(&q(20, 1)), Some(ExactScalar::sqrt5().scale(&q(2, 1))));
    }
}
