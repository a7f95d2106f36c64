//! Catalog of parameterized identities for sums and differences of two cubes
//! (and one Gaussian-integer quintic), verified by exact evaluation.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational with reduced numerator/denominator.
pub type ExactRational = BigRational;

/// Gaussian integer a + b*i with exact ring arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussianInteger { re, im }
    }

    pub fn pow(&self, exp: u32) -> GaussianInteger {
        let mut acc = GaussianInteger::new(BigInt::one(), BigInt::zero());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Either side of an identity, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactValue {
    Rational(ExactRational),
    Gaussian(GaussianInteger),
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(r) => write!(f, "{r}"),
            ExactValue::Gaussian(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityName {
    GerardinSquare,
    TwoCubesSum,
    TwoCubes2t,
    WForm1,
    WForm2Plus,
    WForm2Minus,
    UvSum,
    PqSum,
    CatalanSquare,
    CatalanCubes,
    UvDiff,
    PqDiff,
    EulerFourCubes,
    GaussianQuintic,
}

pub const CATALOG: [IdentityName; 14] = [
    IdentityName::GerardinSquare,
    IdentityName::TwoCubesSum,
    IdentityName::TwoCubes2t,
    IdentityName::WForm1,
    IdentityName::WForm2Plus,
    IdentityName::WForm2Minus,
    IdentityName::UvSum,
    IdentityName::PqSum,
    IdentityName::CatalanSquare,
    IdentityName::CatalanCubes,
    IdentityName::UvDiff,
    IdentityName::PqDiff,
    IdentityName::EulerFourCubes,
    IdentityName::GaussianQuintic,
];

impl IdentityName {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::GerardinSquare => "gerardin-square",
            IdentityName::TwoCubesSum => "two-cubes-sum",
            IdentityName::TwoCubes2t => "two-cubes-2t",
            IdentityName::WForm1 => "w-form-1",
            IdentityName::WForm2Plus => "w-form-2-plus",
            IdentityName::WForm2Minus => "w-form-2-minus",
            IdentityName::UvSum => "uv-sum",
            IdentityName::PqSum => "pq-sum",
            IdentityName::CatalanSquare => "catalan-square",
            IdentityName::CatalanCubes => "catalan-cubes",
            IdentityName::UvDiff => "uv-diff",
            IdentityName::PqDiff => "pq-diff",
            IdentityName::EulerFourCubes => "euler-four-cubes",
            IdentityName::GaussianQuintic => "gaussian-quintic",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        CATALOG
            .iter()
            .copied()
            .find(|n| n.as_str() == name)
            .ok_or_else(|| Error::UnknownIdentity(name.into()))
    }

    pub fn param_count(self) -> usize {
        match self {
            IdentityName::WForm1 | IdentityName::WForm2Plus | IdentityName::WForm2Minus => 1,
            IdentityName::EulerFourCubes => 3,
            _ => 2,
        }
    }
}

/// One evaluated catalog case.  When not degenerate, lhs equals rhs exactly.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub name: IdentityName,
    pub params: Vec<BigInt>,
    pub lhs: ExactValue,
    pub rhs: ExactValue,
    pub degenerate: bool,
}

/// All coprime solutions of u^2 + 3 v^2 = w^3 arise this way:
/// (t^3 - 9 t s^2, 3 t^2 s - 3 s^3, t^2 + 3 s^2).
pub fn gerardin_triple(t: &BigInt, s: &BigInt) -> (BigInt, BigInt, BigInt) {
    assert!(!(t.is_zero() && s.is_zero()));
    let u = t.pow(3u32) - 9 * t * s * s;
    let v = 3 * t * t * s - 3 * s.pow(3u32);
    let w: BigInt = t * t + 3 * s * s;
    assert_eq!(&u * &u + 3 * &v * &v, w.pow(3u32));
    (u, v, w)
}

/// Euler's parametric solution to X^3 + Y^3 = S^3 + T^3.
pub fn euler_equal_sums(u: &BigInt, v: &BigInt, w: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let q: BigInt = u * u + 3 * v * v;
    let x: BigInt = w * (BigInt::one() - (u - 3 * v) * &q);
    let y: BigInt = w * ((u + 3 * v) * &q - BigInt::one());
    let s: BigInt = w * ((u + 3 * v) - &q * &q);
    let t: BigInt = w * (&q * &q + (3 * v - u));
    assert_eq!(x.pow(3u32) + y.pow(3u32), s.pow(3u32) + t.pow(3u32));
    (x, y, s, t)
}

/// Result of the Gaussian quintic parameterization: two conjugate pairs whose
/// fifth-power sums agree and equal a real closed form.
#[derive(Clone, Debug)]
pub struct GaussianQuinticResult {
    pub pairs: [(GaussianInteger, GaussianInteger); 2],
    pub value: BigInt,
}

pub fn gaussian_quintic(t: &BigInt, s: &BigInt) -> GaussianQuinticResult {
    let a = t * t + s * s;
    let b: BigInt = t * t - 2 * t * s - s * s;
    let c: BigInt = t * t + 2 * t * s - s * s;
    let pair = |imag: &BigInt| {
        (
            GaussianInteger::new(a.clone(), -imag.clone()),
            GaussianInteger::new(a.clone(), imag.clone()),
        )
    };
    let (p1, p2) = pair(&b);
    let (p3, p4) = pair(&c);
    let value = -8
        * &a
        * (t.pow(4u32) - 2 * t.pow(3u32) * s - 6 * t * t * s * s + 2 * t * s.pow(3u32) + s.pow(4u32))
        * (t.pow(4u32) + 2 * t.pow(3u32) * s - 6 * t * t * s * s - 2 * t * s.pow(3u32) + s.pow(4u32));
    for (l, r) in [(&p1, &p2), (&p3, &p4)] {
        let sum = &l.pow(5u32) + &r.pow(5u32);
        assert!(sum.im.is_zero(), "fifth-power sum must be real");
        assert_eq!(sum.re, value);
    }
    GaussianQuinticResult {
        pairs: [(p1, p2), (p3, p4)],
        value,
    }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn cube(r: &BigRational) -> BigRational {
    r * r * r
}

fn ratio(num: BigInt, den: BigInt) -> Option<BigRational> {
    if den.is_zero() {
        None
    } else {
        Some(BigRational::new(num, den))
    }
}

fn degenerate_case(name: IdentityName, params: &[BigInt]) -> IdentityCase {
    IdentityCase {
        name,
        params: params.to_vec(),
        lhs: ExactValue::Rational(BigRational::zero()),
        rhs: ExactValue::Rational(BigRational::zero()),
        degenerate: true,
    }
}

/// Evaluates one catalog identity at an integer parameter tuple.  Vanishing
/// denominators are reported as degenerate, never as errors.
pub fn check_identity(name: IdentityName, params: &[BigInt]) -> Result<IdentityCase> {
    if params.len() != name.param_count() {
        return Err(Error::InvalidInput(format!(
            "{} takes {} parameter(s), got {}",
            name.as_str(),
            name.param_count(),
            params.len()
        )));
    }
    let rational = |lhs: Option<BigRational>, rhs: BigRational| match lhs {
        Some(lhs) => {
            let case = IdentityCase {
                name,
                params: params.to_vec(),
                lhs: ExactValue::Rational(lhs.clone()),
                rhs: ExactValue::Rational(rhs.clone()),
                degenerate: false,
            };
            assert_eq!(lhs, rhs, "{} fails at {:?}", name.as_str(), params);
            Ok(case)
        }
        None => Ok(degenerate_case(name, params)),
    };

    match name {
        IdentityName::GerardinSquare => {
            let (t, s) = (&params[0], &params[1]);
            if t.is_zero() && s.is_zero() {
                return Ok(degenerate_case(name, params));
            }
            let (u, v, w) = gerardin_triple(t, s);
            rational(Some(rat(&u * &u + 3 * &v * &v)), rat(w.pow(3u32)))
        }
        IdentityName::TwoCubesSum => {
            let (t, s) = (&params[0], &params[1]);
            let a: BigInt = t.pow(3u32) - 3 * t * t * s - 9 * t * s * s + 3 * s.pow(3u32);
            let b: BigInt = t.pow(3u32) + 3 * t * t * s - 9 * t * s * s - 3 * s.pow(3u32);
            let base: BigInt = t * t + 3 * s * s;
            let rhs = 2 * (t.pow(3u32) - 9 * t * s * s) * base.pow(3u32);
            rational(Some(rat(a.pow(3u32) + b.pow(3u32))), rat(rhs))
        }
        IdentityName::TwoCubes2t => {
            let (t, s) = (&params[0], &params[1]);
            let den: BigInt = t * t + 3 * s * s;
            let a: BigInt = t.pow(3u32) - 3 * t * t * s - 9 * t * s * s + 3 * s.pow(3u32);
            let b: BigInt = t.pow(3u32) + 3 * t * t * s - 9 * t * s * s - 3 * s.pow(3u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) + cube(&ratio(b, den)?)))();
            rational(lhs, rat(2 * t * (t - 3 * s) * (t + 3 * s)))
        }
        IdentityName::WForm1 => {
            let w = &params[0];
            let den: BigInt = 3 * (w * w - w + 1);
            let a: BigInt = w.pow(3u32) + 3 * w * w - 6 * w + 1;
            let b: BigInt = w.pow(3u32) - 6 * w * w + 3 * w + 1;
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) - cube(&ratio(b, den)?)))();
            rational(lhs, rat(w * (w - 1)))
        }
        IdentityName::WForm2Plus | IdentityName::WForm2Minus => {
            let w = &params[0];
            let sign: BigInt = if name == IdentityName::WForm2Plus {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let den: BigInt = 3 * w * (4 * w.pow(6u32) + 2 * &sign * w.pow(3u32) + 1);
            let a: BigInt = 8 * w.pow(9u32) + 24 * &sign * w.pow(6u32) + 6 * w.pow(3u32) - &sign * 1;
            let b: BigInt = 8 * w.pow(9u32) - 12 * &sign * w.pow(6u32) - 12 * w.pow(3u32) - &sign * 1;
            let lhs = (|| {
                Some(
                    rat(sign.clone()) * cube(&ratio(a, den.clone())?)
                        - rat(sign.clone()) * cube(&ratio(b, den)?),
                )
            })();
            rational(lhs, rat(4 * w.pow(3u32) + 2 * &sign))
        }
        IdentityName::UvSum => {
            let (u, v) = (&params[0], &params[1]);
            let den: BigInt = 3 * (u * u + u * v + v * v);
            let a: BigInt = u.pow(3u32) + 6 * u * u * v + 3 * u * v * v - v.pow(3u32);
            let b: BigInt = v.pow(3u32) + 6 * v * v * u + 3 * v * u * u - u.pow(3u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) + cube(&ratio(b, den)?)))();
            rational(lhs, rat(u * v * (u + v)))
        }
        IdentityName::PqSum => {
            let (p, q) = (&params[0], &params[1]);
            let den: BigInt = 3 * p * q * (p.pow(6u32) + p.pow(3u32) * q.pow(3u32) + q.pow(6u32));
            let a: BigInt = p.pow(9u32) + 6 * p.pow(6u32) * q.pow(3u32) + 3 * p.pow(3u32) * q.pow(6u32) - q.pow(9u32);
            let b: BigInt = q.pow(9u32) + 6 * q.pow(6u32) * p.pow(3u32) + 3 * q.pow(3u32) * p.pow(6u32) - p.pow(9u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) + cube(&ratio(b, den)?)))();
            rational(lhs, rat(p.pow(3u32) + q.pow(3u32)))
        }
        IdentityName::CatalanSquare => {
            let (t, s) = (&params[0], &params[1]);
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let u = &half * rat((t + s) * (t - 2 * s) * (s - 2 * t));
            let v = &half * rat(3 * t * s * (t - s));
            let lhs = &u * &u + rat(BigInt::from(3)) * &v * &v;
            rational(Some(lhs), rat((t * t - t * s + s * s).pow(3u32)))
        }
        IdentityName::CatalanCubes => {
            let (t, s) = (&params[0], &params[1]);
            let den = t * t - t * s + s * s;
            let a: BigInt = t.pow(3u32) - 3 * t * t * s + s.pow(3u32);
            let b: BigInt = t.pow(3u32) - 3 * t * s * s + s.pow(3u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) + cube(&ratio(b, den)?)))();
            rational(lhs, rat((t + s) * (2 * s - t) * (s - 2 * t)))
        }
        IdentityName::UvDiff => {
            let (u, v) = (&params[0], &params[1]);
            let den: BigInt = 3 * (u * u - u * v + v * v);
            let a: BigInt = u.pow(3u32) + 3 * u * u * v - 6 * u * v * v + v.pow(3u32);
            let b: BigInt = u.pow(3u32) - 6 * u * u * v + 3 * u * v * v + v.pow(3u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) - cube(&ratio(b, den)?)))();
            rational(lhs, rat(u * v * (u - v)))
        }
        IdentityName::PqDiff => {
            let (p, q) = (&params[0], &params[1]);
            let den: BigInt = 3 * p * q * (p.pow(6u32) - p.pow(3u32) * q.pow(3u32) + q.pow(6u32));
            let a: BigInt = p.pow(9u32) + 3 * p.pow(6u32) * q.pow(3u32) - 6 * p.pow(3u32) * q.pow(6u32) + q.pow(9u32);
            let b: BigInt = p.pow(9u32) - 6 * p.pow(6u32) * q.pow(3u32) + 3 * p.pow(3u32) * q.pow(6u32) + q.pow(9u32);
            let lhs = (|| Some(cube(&ratio(a, den.clone())?) - cube(&ratio(b, den)?)))();
            rational(lhs, rat(p.pow(3u32) - q.pow(3u32)))
        }
        IdentityName::EulerFourCubes => {
            let (x, y, s, t) = euler_equal_sums(&params[0], &params[1], &params[2]);
            rational(Some(rat(x.pow(3u32) + y.pow(3u32))), rat(s.pow(3u32) + t.pow(3u32)))
        }
        IdentityName::GaussianQuintic => {
            let result = gaussian_quintic(&params[0], &params[1]);
            let sum = |pair: &(GaussianInteger, GaussianInteger)| &pair.0.pow(5u32) + &pair.1.pow(5u32);
            let lhs = sum(&result.pairs[0]);
            let rhs = sum(&result.pairs[1]);
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.re, result.value);
            Ok(IdentityCase {
                name,
                params: params.to_vec(),
                lhs: ExactValue::Gaussian(lhs),
                rhs: ExactValue::Gaussian(rhs),
                degenerate: false,
            })
        }
    }
}
