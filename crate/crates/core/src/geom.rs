//! Exact geometric primitives.
//!
//! Coordinates are arbitrary-precision rationals. Small integers are kept in
//! a machine-word representation and the predicates evaluate them in `i128`
//! with overflow checks, falling back to big rationals when needed, so every
//! answer is exact.
//!
//! Ties along the x-axis are broken by a symbolic shear `x' = x + ε·y`: all
//! x-comparisons use lexicographic `(x, y)` order and no segment is vertical
//! in sheared coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Int(i64),
    /// Invariant: never an integer that fits in `i64`.
    Big(BigRational),
}

/// An exact rational coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coord(Repr);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid coordinate literal `{0}`")]
pub struct ParseCoordError(pub String);

impl Coord {
    pub const fn int(v: i64) -> Self {
        Coord(Repr::Int(v))
    }

    pub fn zero() -> Self {
        Coord::int(0)
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Coord(Repr::Int(v));
            }
        }
        Coord(Repr::Big(r))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coord::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self.0 {
            Repr::Int(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Int(v) => *v as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Int(v) => v.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn half(&self) -> Coord {
        match self.0 {
            Repr::Int(v) if v % 2 == 0 => Coord::int(v / 2),
            _ => Coord::from_big(self.to_big() / BigRational::from_integer(BigInt::from(2))),
        }
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::int(v)
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Int(a), Repr::Int(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident, $op:tt) => {
        impl $tr for &Coord {
            type Output = Coord;
            fn $m(self, rhs: &Coord) -> Coord {
                if let (Repr::Int(a), Repr::Int(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Coord::int(v);
                    }
                }
                Coord::from_big(self.to_big() $op rhs.to_big())
            }
        }
        impl $tr for Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match &self.0 {
            Repr::Int(v) => match v.checked_neg() {
                Some(n) => Coord::int(n),
                None => Coord::from_big(-self.to_big()),
            },
            Repr::Big(r) => Coord::from_big(-r.clone()),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Int(v) => write!(f, "{v}"),
            Repr::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = ParseCoordError;

    /// Accepts integers, decimals (`-1.25`) and rationals (`p/q`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoordError(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Coord::from_big(BigRational::new(n, d)));
        }
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Coord::int(v));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return Err(err());
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{ip}{fp}");
        let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(if neg { -num } else { num }, den);
        Ok(Coord::from_big(r))
    }
}

/// A point in the plane; `Ord` is lexicographic `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: impl Into<Coord>, y: impl Into<Coord>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point { x: (&self.x + &other.x).half(), y: (&self.y + &other.y).half() }
    }

    /// Order by `(y, x)`; the maximum is the topmost vertex of a set.
    pub fn cmp_top(&self, other: &Point) -> Ordering {
        self.y.cmp(&other.y).then_with(|| self.x.cmp(&other.x))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("degenerate segment at {0:?}")]
pub struct DegenerateSegment(pub Point);

/// A closed straight segment stored with `a < b` lexicographically. As an
/// edge of a subdivision it denotes the open segment between its endpoints.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    #[allow(clippy::result_large_err)]
    pub fn new(p: Point, q: Point) -> Result<Self, DegenerateSegment> {
        match p.cmp(&q) {
            Ordering::Less => Ok(Segment { a: p, b: q }),
            Ordering::Greater => Ok(Segment { a: q, b: p }),
            Ordering::Equal => Err(DegenerateSegment(p)),
        }
    }

    pub fn from_coords(x1: i64, y1: i64, x2: i64, y2: i64) -> Self {
        Segment::new(Point::new(x1, y1), Point::new(x2, y2)).expect("degenerate segment")
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(&self.b)
    }

    pub fn has_endpoint(&self, p: &Point) -> bool {
        self.a == *p || self.b == *p
    }

    /// `a <= p <= b` in lexicographic order: `p` lies in the sheared x-span.
    pub fn spans(&self, p: &Point) -> bool {
        self.a <= *p && *p <= self.b
    }

    /// Strictly inside the sheared x-span.
    pub fn spans_open(&self, p: &Point) -> bool {
        self.a < *p && *p < self.b
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.spans(p) && orient(&self.a, &self.b, p) == Orientation::Collinear
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Counterclockwise turn.
    Left,
    /// Clockwise turn.
    Right,
    Collinear,
}

impl Orientation {
    fn from_sign(s: i32) -> Self {
        match s {
            1 => Orientation::Left,
            -1 => Orientation::Right,
            _ => Orientation::Collinear,
        }
    }

    /// The orientation seen with the first two points swapped.
    pub fn flip(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

fn i128_sign(v: i128) -> i32 {
    v.signum() as i32
}

/// Sign of `ux * vy - uy * vx`.
pub fn cross_sign(ux: &Coord, uy: &Coord, vx: &Coord, vy: &Coord) -> i32 {
    if let (Some(a), Some(b), Some(c), Some(d)) = (ux.as_int(), uy.as_int(), vx.as_int(), vy.as_int()) {
        let l = (a as i128).checked_mul(d as i128);
        let r = (b as i128).checked_mul(c as i128);
        if let (Some(l), Some(r)) = (l, r) {
            if let Some(v) = l.checked_sub(r) {
                return i128_sign(v);
            }
        }
    }
    let v = ux.to_big() * vy.to_big() - uy.to_big() * vx.to_big();
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of the cross product `(q - p) x (r - p)`.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let (Some(px), Some(py), Some(qx), Some(qy), Some(rx), Some(ry)) =
        (p.x.as_int(), p.y.as_int(), q.x.as_int(), q.y.as_int(), r.x.as_int(), r.y.as_int())
    {
        let (ux, uy) = (qx as i128 - px as i128, qy as i128 - py as i128);
        let (vx, vy) = (rx as i128 - px as i128, ry as i128 - py as i128);
        if let (Some(l), Some(r)) = (ux.checked_mul(vy), uy.checked_mul(vx)) {
            if let Some(v) = l.checked_sub(r) {
                return Orientation::from_sign(i128_sign(v));
            }
        }
        let v = BigInt::from(ux) * BigInt::from(vy) - BigInt::from(uy) * BigInt::from(vx);
        return Orientation::from_sign(match v.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        });
    }
    let s = cross_sign(&(&q.x - &p.x), &(&q.y - &p.y), &(&r.x - &p.x), &(&r.y - &p.y));
    Orientation::from_sign(s)
}

/// True iff `p` is strictly interior to `s`.
pub fn point_in_open_segment(p: &Point, s: &Segment) -> bool {
    s.spans_open(p) && orient(&s.a, &s.b, p) == Orientation::Collinear
}

/// True iff the closed segments share a point other than a common endpoint.
pub fn segments_interact(s1: &Segment, s2: &Segment) -> bool {
    if s1 == s2 {
        return true;
    }
    let o1 = orient(&s1.a, &s1.b, &s2.a);
    let o2 = orient(&s1.a, &s1.b, &s2.b);
    let o3 = orient(&s2.a, &s2.b, &s1.a);
    let o4 = orient(&s2.a, &s2.b, &s1.b);
    use Orientation::*;
    if o1 == Collinear && o2 == Collinear {
        // Collinear pair: they interact iff the spans overlap in more than
        // a shared endpoint.
        let lo = if s1.a > s2.a { &s1.a } else { &s2.a };
        let hi = if s1.b < s2.b { &s1.b } else { &s2.b };
        return lo < hi;
    }
    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return o1 != o2 && o3 != o4;
    }
    // Exactly one touching configuration: some endpoint lies on the other
    // segment's line. It counts unless it is a shared endpoint.
    let touches = |p: &Point, s: &Segment| point_in_open_segment(p, s);
    if touches(&s2.a, s1) || touches(&s2.b, s1) || touches(&s1.a, s2) || touches(&s1.b, s2) {
        return true;
    }
    false
}

/// Vertical order of two interior-disjoint segments whose sheared x-spans
/// overlap. `Less` means `s1` lies below `s2`. Segments that cannot be
/// separated (identical, or meeting only at a point) fall back to
/// lexicographic segment order so the result is always total.
pub fn cmp_segments(s1: &Segment, s2: &Segment) -> Ordering {
    if s1 == s2 {
        return Ordering::Equal;
    }
    for q in [&s1.a, &s1.b] {
        if s2.spans(q) {
            match orient(&s2.a, &s2.b, q) {
                Orientation::Right => return Ordering::Less,
                Orientation::Left => return Ordering::Greater,
                Orientation::Collinear => {}
            }
        }
    }
    for q in [&s2.a, &s2.b] {
        if s1.spans(q) {
            match orient(&s1.a, &s1.b, q) {
                Orientation::Right => return Ordering::Greater,
                Orientation::Left => return Ordering::Less,
                Orientation::Collinear => {}
            }
        }
    }
    s1.cmp(s2)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("abscissa {x} is outside the span of {seg:?}")]
pub struct OutOfSpan {
    pub seg: Segment,
    pub x: Coord,
}

/// Vertical order of `s1` and `s2` at abscissa `x`; both spans must contain
/// `x`.
#[allow(clippy::result_large_err)]
pub fn compare_above_at(s1: &Segment, s2: &Segment, x: &Coord) -> Result<Ordering, OutOfSpan> {
    for s in [s1, s2] {
        if !(s.a.x <= *x && *x <= s.b.x) {
            return Err(OutOfSpan { seg: s.clone(), x: x.clone() });
        }
    }
    Ok(cmp_segments(s1, s2))
}

/// A direction vector ordered by counterclockwise angle from the positive
/// x-axis, in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    pub dx: Coord,
    pub dy: Coord,
}

impl Direction {
    pub fn between(from: &Point, to: &Point) -> Self {
        Direction { dx: &to.x - &from.x, dy: &to.y - &from.y }
    }

    fn upper(&self) -> bool {
        let sy = self.dy.signum();
        sy > 0 || (sy == 0 && self.dx.signum() > 0)
    }
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.upper(), other.upper()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => match cross_sign(&self.dx, &self.dy, &other.dx, &other.dy) {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => Ordering::Equal,
            },
        }
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Twice the signed area contribution `o.x * t.y - o.y * t.x` of a directed
/// edge (shoelace term).
pub fn shoelace(o: &Point, t: &Point) -> Coord {
    &(&o.x * &t.y) - &(&o.y * &t.x)
}

/// Parse a point from two coordinate literals.
pub fn parse_point(x: &str, y: &str) -> Result<Point, ParseCoordError> {
    Ok(Point { x: x.parse()?, y: y.parse()? })
}
