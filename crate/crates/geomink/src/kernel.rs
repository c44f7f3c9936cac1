//! Exact scalar and vector algebra.
//!
//! Every quantity in the toolkit is an arbitrary-precision rational (or, for
//! directions on the sphere, a primitive big-integer vector).  Nothing here
//! ever takes a square root, so every predicate is decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Errors raised by kernel operations that validate their inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("plane normal is the zero vector")]
    ZeroNormal,
    #[error("direction is the zero vector")]
    ZeroVector,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Result of a sign test or a three-way comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Comparison aliases: `SMALLER`, `EQUAL`, `LARGER`.
    pub const SMALLER: Sign = Sign::Negative;
    pub const EQUAL: Sign = Sign::Zero;
    pub const LARGER: Sign = Sign::Positive;

    pub fn of<T: Signed>(value: &T) -> Sign {
        if value.is_positive() {
            Sign::Positive
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn from_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_ordering((self.to_i32() * rhs.to_i32()).cmp(&0))
    }
}

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Build the rational `n / d`; `d` must be nonzero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p/q"` or a bare integer `"p"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, KernelError> {
    let bad = || KernelError::Parse(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to scaled integer division for huge operands.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(60);
        let n = (n >> shift).to_f64().unwrap_or(0.0);
        let d = (d >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions).
pub fn rational_approx(x: f64, max_den: u64) -> Rational {
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as u128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        p1 = x.abs().round() as u128;
        q1 = 1;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Exact rational 3-vector (points and unnormalized directions).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Vec3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3::new(rat(x), rat(y), rat(z))
    }

    pub fn zero() -> Self {
        Vec3::from_ints(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn dot(&self, o: &Vec3) -> Rational {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, k: &Rational) -> Vec3 {
        Vec3::new(&self.x * k, &self.y * k, &self.z * k)
    }

    pub fn coords(&self) -> [&Rational; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [
            rational_to_f64(&self.x),
            rational_to_f64(&self.y),
            rational_to_f64(&self.z),
        ]
    }

    /// The primitive integer vector with the same direction.
    pub fn to_ivec(&self) -> IVec3 {
        IVec3::from_vec3(self)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.z)
        )
    }
}

impl<'a> Add<&'a Vec3> for &'a Vec3 {
    type Output = Vec3;
    fn add(self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl<'a> Sub<&'a Vec3> for &'a Vec3 {
    type Output = Vec3;
    fn sub(self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-&self.x, -&self.y, -&self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        &self + &o
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        &self - &o
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        -&self
    }
}

/// Integer 3-vector; used in primitive form (gcd 1) as the canonical name of
/// a direction, so equal directions compare and hash equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVec3 {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl IVec3 {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Self {
        IVec3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        IVec3::new(x.into(), y.into(), z.into())
    }

    /// Scale a rational vector to the primitive integer vector pointing the
    /// same way (the zero vector maps to zero).
    pub fn from_vec3(v: &Vec3) -> Self {
        let l = v.x.denom().lcm(v.y.denom()).lcm(v.z.denom());
        let x = v.x.numer() * (&l / v.x.denom());
        let y = v.y.numer() * (&l / v.y.denom());
        let z = v.z.numer() * (&l / v.z.denom());
        IVec3::new(x, y, z).primitive()
    }

    /// Divide out the gcd of the components (direction preserved).
    pub fn primitive(self) -> Self {
        let g = self.x.gcd(&self.y).gcd(&self.z);
        if g.is_zero() || g.is_one() {
            return self;
        }
        IVec3::new(&self.x / &g, &self.y / &g, &self.z / &g)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn dot(&self, o: &IVec3) -> BigInt {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &IVec3) -> IVec3 {
        IVec3::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn norm_sq(&self) -> BigInt {
        self.dot(self)
    }

    pub fn add(&self, o: &IVec3) -> IVec3 {
        IVec3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &IVec3) -> IVec3 {
        IVec3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> IVec3 {
        IVec3::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn scale(&self, k: &BigInt) -> IVec3 {
        IVec3::new(&self.x * k, &self.y * k, &self.z * k)
    }

    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(
            Rational::from_integer(self.x.clone()),
            Rational::from_integer(self.y.clone()),
            Rational::from_integer(self.z.clone()),
        )
    }

    pub fn to_f64(&self) -> [f64; 3] {
        let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
        let (x, y, z) = (f(&self.x), f(&self.y), f(&self.z));
        if x.is_finite() && y.is_finite() && z.is_finite() {
            return [x, y, z];
        }
        let shift = self.x.bits().max(self.y.bits()).max(self.z.bits()) - 60;
        let g = |v: &BigInt| (v >> shift).to_f64().unwrap_or(0.0);
        [g(&self.x), g(&self.y), g(&self.z)]
    }

    /// Unit-length float approximation (for reports and filtering only).
    pub fn to_unit_f64(&self) -> [f64; 3] {
        let [x, y, z] = self.to_f64();
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 {
            [0.0; 3]
        } else {
            [x / n, y / n, z / n]
        }
    }
}

impl fmt::Display for IVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Sign of the exact inner product.
pub fn dot_sign(u: &Vec3, v: &Vec3) -> Sign {
    Sign::of(&u.dot(v))
}

/// Exact cross product.
pub fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    u.cross(v)
}

/// Side of `p` relative to the plane through the origin with `normal`.
pub fn side_of_origin_plane(normal: &Vec3, p: &Vec3) -> Result<Sign, KernelError> {
    if normal.is_zero() {
        return Err(KernelError::ZeroNormal);
    }
    Ok(dot_sign(normal, p))
}

/// Sign of the 3x3 determinant `det(a, b, c) = a · (b × c)`.
pub fn det3_sign(a: &IVec3, b: &IVec3, c: &IVec3) -> Sign {
    Sign::of(&a.dot(&b.cross(c)))
}

/// Which quarter of the turn a planar vector occupies relative to `start`:
/// 0 codirectional, 1 strictly left half, 2 opposite, 3 strictly right half.
fn turn_class<T: Signed + Clone>(start: &[T; 2], v: &[T; 2]) -> u8 {
    let c = start[0].clone() * v[1].clone() - start[1].clone() * v[0].clone();
    if c.is_positive() {
        1
    } else if c.is_negative() {
        3
    } else {
        let d = start[0].clone() * v[0].clone() + start[1].clone() * v[1].clone();
        if d.is_positive() {
            0
        } else {
            2
        }
    }
}

/// Compare the counterclockwise angles of `a` and `b` measured from `start`
/// in `[0, 2π)`.
pub fn ccw_angle_cmp<T: Signed + Clone>(start: &[T; 2], a: &[T; 2], b: &[T; 2]) -> Ordering {
    let ca = turn_class(start, a);
    let cb = turn_class(start, b);
    if ca != cb {
        return ca.cmp(&cb);
    }
    if ca == 0 || ca == 2 {
        return Ordering::Equal;
    }
    // Same open half-turn: `a` comes first iff `b` is counterclockwise of it.
    let c = a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Whether a counterclockwise sweep starting at `start` reaches the ray of
/// `probe` strictly before the ray of `target`.
///
/// A probe codirectional with `start` is never strictly before anything, and
/// a probe codirectional with `target` is not strictly before it.  A target
/// codirectional with `start` is reached only after a full turn.
pub fn ccw_strictly_before<T: Signed + Clone>(
    start: &[T; 2],
    probe: &[T; 2],
    target: &[T; 2],
) -> Result<bool, KernelError> {
    let nz = |v: &[T; 2]| !(v[0].is_zero() && v[1].is_zero());
    if !nz(start) || !nz(probe) || !nz(target) {
        return Err(KernelError::ZeroVector);
    }
    if turn_class(start, probe) == 0 {
        return Ok(false);
    }
    if turn_class(start, target) == 0 {
        return Ok(true);
    }
    Ok(ccw_angle_cmp(start, probe, target) == Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64, z: i64) -> Vec3 {
        Vec3::from_ints(x, y, z)
    }

    #[test]
    fn dot_sign_examples() {
        assert_eq!(dot_sign(&v(1, 0, 0), &v(0, 1, 0)), Sign::Zero);
        assert_eq!(dot_sign(&v(1, 2, 3), &v(1, 2, 3)), Sign::Positive);
        assert_eq!(dot_sign(&v(1, 1, -1), &v(1, 1, 1)), Sign::Positive);
        assert_eq!(v(1, 1, -1).dot(&v(1, 1, 1)), rat(1));
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(&v(1, 0, 0), &v(0, 1, 0)), v(0, 0, 1));
        assert_eq!(cross(&v(2, 0, 0), &v(4, 0, 0)), v(0, 0, 0));
        assert_eq!(cross(&v(1, 1, -1), &v(1, 1, 1)), v(2, -2, 0));
    }

    #[test]
    fn side_of_plane_examples() {
        assert_eq!(
            side_of_origin_plane(&v(0, 0, 1), &v(3, -2, 5)),
            Ok(Sign::Positive)
        );
        assert_eq!(
            side_of_origin_plane(&v(0, 0, 1), &v(3, -2, 0)),
            Ok(Sign::Zero)
        );
        assert_eq!(
            side_of_origin_plane(&v(2, -2, 0), &v(1, 1, 7)),
            Ok(Sign::Zero)
        );
        assert_eq!(
            side_of_origin_plane(&v(0, 0, 0), &v(1, 1, 7)),
            Err(KernelError::ZeroNormal)
        );
    }

    #[test]
    fn ccw_examples() {
        let p = |x: i64, y: i64| [BigInt::from(x), BigInt::from(y)];
        assert_eq!(
            ccw_strictly_before(&p(1, 1), &p(-1, 0), &p(1, -1)),
            Ok(true)
        );
        assert_eq!(ccw_strictly_before(&p(1, 0), &p(1, 0), &p(0, 1)), Ok(false));
        assert_eq!(
            ccw_strictly_before(&p(0, 1), &p(1, 0), &p(-1, 0)),
            Ok(false)
        );
        assert_eq!(ccw_strictly_before(&p(0, 1), &p(1, 0), &p(2, 0)), Ok(false));
        assert_eq!(
            ccw_strictly_before(&p(0, 0), &p(1, 0), &p(2, 0)),
            Err(KernelError::ZeroVector)
        );
    }

    #[test]
    fn rational_text_round_trip() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(r, ratio(-3, 2));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_direction() {
        let d = Vec3::new(ratio(1, 2), ratio(-3, 4), rat(0)).to_ivec();
        assert_eq!(d, IVec3::from_ints(2, -3, 0));
        assert_eq!(
            IVec3::from_ints(4, -6, 8).primitive(),
            IVec3::from_ints(2, -3, 4)
        );
    }

    #[test]
    fn approximations() {
        assert_eq!(rational_approx(0.5, 100), ratio(1, 2));
        assert_eq!(rational_approx(-0.75, 100), ratio(-3, 4));
        let pi = rational_approx(std::f64::consts::PI, 1000);
        assert_eq!(pi, ratio(355, 113));
    }
}
