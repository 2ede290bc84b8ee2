//! Möbius and anti-Möbius transformations in `SL(2, ℂ)` normalization.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::sphere::SpherePoint;

/// Tolerance on `|tr² − 4|` below which a map is read as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-7;
/// Default cap on the order search in [`MobiusMap::rotation_order`].
pub const DEFAULT_MAX_ORDER: usize = 100;

/// `z ↦ (az + b)/(cz + d)` with `ad − bc = 1`.
///
/// The sign ambiguity of the normalization is fixed by requiring the first
/// non-negligible entry (row-major) to have argument in `(−π/2, π/2]`;
/// equality tests still compare against both signs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
}

/// Conjugacy class of a non-trivial map, read off `tr²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Rescales to determinant one; `strict` also rejects nearly singular input.
fn normalize_entries<T: Real>(m: [Complex<T>; 4], strict: bool) -> Result<[Complex<T>; 4]> {
    let [a, b, c, d] = m;
    let det = a * d - b * c;
    let scale = m.iter().map(|x| x.norm()).fold(T::zero(), T::max);
    let floor = if strict { lit::<T>(1e3) * T::epsilon() * scale * scale } else { T::zero() };
    if !scale.is_finite() || !det.norm().is_finite() || !(det.norm() > floor) {
        return Err(Error::Degenerate("singular or non-finite matrix".into()));
    }
    let s = det.sqrt();
    let mut out = [a / s, b / s, c / s, d / s];
    let scale = out.iter().map(|x| x.norm()).fold(T::zero(), T::max);
    let tiny = lit::<T>(1e3) * T::epsilon() * scale;
    if let Some(first) = out.iter().find(|x| x.norm() > tiny) {
        let flip = first.re < T::zero() || (first.re == T::zero() && first.im < T::zero());
        if flip {
            for x in out.iter_mut() {
                *x = -*x;
            }
        }
    }
    Ok(out)
}

fn entries_close<T: Real>(x: &[Complex<T>; 4], y: &[Complex<T>; 4], eps: T) -> bool {
    let scale = x
        .iter()
        .chain(y.iter())
        .map(|v| v.norm())
        .fold(T::one(), T::max);
    let tol = eps * scale;
    let same = x.iter().zip(y).all(|(p, q)| (*p - *q).norm() <= tol);
    let flipped = x.iter().zip(y).all(|(p, q)| (*p + *q).norm() <= tol);
    same || flipped
}

/// Map sending `p1, p2, p3` to `0, 1, ∞` (points given projectively).
fn to_standard<T: Real>(p: [SpherePoint<T>; 3]) -> Result<[Complex<T>; 4]> {
    let [(x1, y1), (x2, y2), (x3, y3)] = [p[0].pair(), p[1].pair(), p[2].pair()];
    let d23 = x2 * y3 - x3 * y2;
    let d21 = x2 * y1 - x1 * y2;
    Ok([y1 * d23, -x1 * d23, y3 * d21, -x3 * d21])
}

fn check_distinct<T: Real>(p: &[SpherePoint<T>; 3], eps: T) -> Result<()> {
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i].chordal(&p[j]) <= eps {
                return Err(Error::Degenerate(format!(
                    "points {} and {} coincide within tolerance",
                    p[i], p[j]
                )));
            }
        }
    }
    Ok(())
}

impl<T: Real> MobiusMap<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let [a, b, c, d] = normalize_entries([a, b, c, d], true)?;
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { a: o, b: z, c: z, d: o }
    }

    /// `z ↦ e^{iθ} z`.
    pub fn rotation(theta: T) -> Self {
        let h = theta / (T::one() + T::one());
        Self::new(
            Complex::new(h.cos(), h.sin()),
            Complex::new(T::zero(), T::zero()),
            Complex::new(T::zero(), T::zero()),
            Complex::new(h.cos(), -h.sin()),
        )
        .expect("rotation is regular")
    }

    /// `z ↦ k z` for nonzero `k`.
    pub fn scaling(k: Complex<T>) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(k, zero, zero, Complex::new(T::one(), T::zero()))
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = [
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        ];
        let [a, b, c, d] = normalize_entries(m, false).expect("product of regular maps is regular");
        Self { a, b, c, d }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] =
            normalize_entries([self.d, -self.b, -self.c, self.a], false).expect("inverse is regular");
        Self { a, b, c, d }
    }

    /// `self ∘ g ∘ self⁻¹`.
    pub fn conjugate(&self, g: &Self) -> Self {
        self.compose(g).compose(&self.inverse())
    }

    pub fn power(&self, k: usize) -> Self {
        let mut out = Self::identity();
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Image of a point; a denominator at rounding level relative to the matrix reads as ∞.
    pub fn apply(&self, p: &SpherePoint<T>) -> SpherePoint<T> {
        let (z, w) = p.pair();
        let den = self.c * z + self.d * w;
        let scale = self.a.norm() + self.b.norm() + self.c.norm() + self.d.norm();
        if den.norm() <= lit::<T>(1e3) * T::epsilon() * scale {
            return SpherePoint::Infinity;
        }
        SpherePoint::from_pair(self.a * z + self.b * w, den).unwrap_or(SpherePoint::Infinity)
    }

    /// Image of a finite point as an affine coordinate, `None` at the pole of the map.
    pub fn apply_finite(&self, z: Complex<T>) -> Option<Complex<T>> {
        let den = self.c * z + self.d;
        (den.norm_sqr() > T::zero()).then(|| (self.a * z + self.b) / den)
    }

    /// Complex derivative `1/(cz + d)²`.
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    pub fn approx_eq(&self, other: &Self, eps: T) -> bool {
        entries_close(&self.entries(), &other.entries(), eps)
    }

    pub fn is_identity(&self, eps: T) -> bool {
        self.approx_eq(&Self::identity(), eps)
    }

    pub fn trace_sq(&self) -> Complex<T> {
        let t = self.a + self.d;
        t * t
    }

    pub fn classify(&self, eps: T) -> MapClass {
        if self.is_identity(eps) {
            return MapClass::Identity;
        }
        let t2 = self.trace_sq();
        let tol = lit::<T>(PARABOLIC_TOL);
        let four = lit::<T>(4.0);
        if (t2 - Complex::new(four, T::zero())).norm() <= tol {
            MapClass::Parabolic
        } else if t2.im.abs() <= tol && t2.re >= -tol && t2.re < four {
            MapClass::Elliptic
        } else {
            MapClass::Loxodromic
        }
    }

    /// Smallest `k ≤ max_order` with `T^k = id`, found by iterated composition.
    pub fn rotation_order(&self, max_order: usize, eps: T) -> Option<usize> {
        match self.classify(eps) {
            MapClass::Identity => Some(1),
            MapClass::Elliptic => {
                let mut p = *self;
                for k in 2..=max_order {
                    p = p.compose(self);
                    if p.is_identity(eps) {
                        return Some(k);
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Fixed points: roots of `cz² + (d − a)z − b = 0` read projectively.
    pub fn fixed_points(&self, eps: T) -> Result<Vec<SpherePoint<T>>> {
        let class = self.classify(eps);
        if class == MapClass::Identity {
            return Err(Error::Degenerate("identity fixes every point".into()));
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let bq = d - a;
        let disc = bq * bq + Complex::new(lit::<T>(4.0), T::zero()) * b * c;
        let s = disc.sqrt();
        let s = if (bq.conj() * s).re >= T::zero() { s } else { -s };
        let q = -(bq + s) / (T::one() + T::one());
        // Projective roots [q : c] and [−b : q]; at most one of them is [0 : 0].
        let mut pts: Vec<SpherePoint<T>> = [(q, c), (-b, q)]
            .into_iter()
            .filter_map(|(n, d)| SpherePoint::from_pair(n, d).ok())
            .collect();
        if pts.is_empty() {
            return Err(Error::Degenerate("no fixed point found".into()));
        }
        if class == MapClass::Parabolic {
            pts.truncate(1);
            return Ok(pts);
        }
        if pts.len() == 1 {
            pts.push(pts[0]);
        }
        Ok(pts)
    }

    /// Unique map with `src[i] ↦ dst[i]`; ∞ is allowed anywhere.
    pub fn from_three_pairs(src: [SpherePoint<T>; 3], dst: [SpherePoint<T>; 3], eps: T) -> Result<Self> {
        check_distinct(&src, eps)?;
        check_distinct(&dst, eps)?;
        let s = Self::from_raw(to_standard(src)?)?;
        let t = Self::from_raw(to_standard(dst)?)?;
        Ok(t.inverse().compose(&s))
    }

    fn from_raw(m: [Complex<T>; 4]) -> Result<Self> {
        Self::new(m[0], m[1], m[2], m[3])
    }

    /// Renormalizes entries known to come from a regular map.
    fn from_regular(m: [Complex<T>; 4]) -> Self {
        let [a, b, c, d] = normalize_entries(m, false).expect("regular matrix");
        Self { a, b, c, d }
    }

    pub fn cast<U: Real>(&self) -> MobiusMap<U> {
        let f = |z: Complex<T>| Complex::new(U::from_f64(z.re.to_f64().unwrap()).unwrap(), U::from_f64(z.im.to_f64().unwrap()).unwrap());
        MobiusMap::new(f(self.a), f(self.b), f(self.c), f(self.d)).expect("cast preserves regularity")
    }
}

impl<T: Real> fmt::Display for MobiusMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}z + {})/({}z + {})", self.a, self.b, self.c, self.d)
    }
}

/// `z ↦ (a z̄ + b)/(c z̄ + d)`, stored as the Möbius matrix applied after conjugation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiMobiusMap<T> {
    m: MobiusMap<T>,
}

fn conj_map<T: Real>(m: &MobiusMap<T>) -> MobiusMap<T> {
    let [a, b, c, d] = m.entries();
    MobiusMap::from_regular([a.conj(), b.conj(), c.conj(), d.conj()])
}

impl<T: Real> AntiMobiusMap<T> {
    pub fn from_matrix(m: MobiusMap<T>) -> Self {
        Self { m }
    }

    /// Complex conjugation `z ↦ z̄`.
    pub fn conjugation() -> Self {
        Self { m: MobiusMap::identity() }
    }

    pub fn matrix(&self) -> MobiusMap<T> {
        self.m
    }

    pub fn apply(&self, p: &SpherePoint<T>) -> SpherePoint<T> {
        self.m.apply(&p.conj())
    }

    /// `self ∘ other` for two anti-conformal maps.
    pub fn compose_anti(&self, other: &Self) -> MobiusMap<T> {
        self.m.compose(&conj_map(&other.m))
    }

    /// `self ∘ g` for a conformal `g`.
    pub fn compose_mobius(&self, g: &MobiusMap<T>) -> Self {
        Self { m: self.m.compose(&conj_map(g)) }
    }

    /// `g ∘ self` for a conformal `g`.
    pub fn precompose_mobius(g: &MobiusMap<T>, s: &Self) -> Self {
        Self { m: g.compose(&s.m) }
    }

    pub fn inverse(&self) -> Self {
        // σ⁻¹(z) = conj(M⁻¹(z)) = conj(M⁻¹)(z̄)
        Self { m: conj_map(&self.m.inverse()) }
    }

    pub fn is_involution(&self, eps: T) -> bool {
        self.compose_anti(self).is_identity(eps)
    }

    pub fn approx_eq(&self, other: &Self, eps: T) -> bool {
        self.m.approx_eq(&other.m, eps)
    }

    /// Unique anti-conformal map with `src[i] ↦ dst[i]`.
    pub fn from_three_pairs(src: [SpherePoint<T>; 3], dst: [SpherePoint<T>; 3], eps: T) -> Result<Self> {
        let src_c = [src[0].conj(), src[1].conj(), src[2].conj()];
        Ok(Self { m: MobiusMap::from_three_pairs(src_c, dst, eps)? })
    }

    /// Reflection in the circle through three distinct points.
    pub fn reflection_through(p: [SpherePoint<T>; 3], eps: T) -> Result<Self> {
        let zero = SpherePoint::zero();
        let one = SpherePoint::from_re_im(T::one(), T::zero());
        let t = MobiusMap::from_three_pairs([zero, one, SpherePoint::Infinity], p, eps)?;
        // t ∘ conj ∘ t⁻¹
        Ok(Self::precompose_mobius(&t, &Self::conjugation().compose_mobius(&t.inverse())))
    }

    /// Three points of the fixed circle when `self` is a reflection.
    ///
    /// The map is conjugated so that a swapped pair `u ↔ σ(u)` sits at `0 ↔ ∞`;
    /// a reflection then reads `z ↦ k/z̄` with `k > 0`, whose fixed circle is `|z|² = k`.
    pub fn fixed_circle(&self, eps: T) -> Option<[SpherePoint<T>; 3]> {
        if !self.is_involution(eps) {
            return None;
        }
        let probes = [
            SpherePoint::zero(),
            SpherePoint::Infinity,
            SpherePoint::from_re_im(T::one(), T::zero()),
            SpherePoint::from_re_im(T::zero(), T::one()),
            SpherePoint::from_re_im(lit(-0.7), lit(0.4)),
        ];
        let (u, su) = probes
            .iter()
            .map(|u| (*u, self.apply(u)))
            .max_by(|x, y| x.0.chordal(&x.1).partial_cmp(&y.0.chordal(&y.1)).unwrap())?;
        if u.chordal(&su) <= lit(1e-3) {
            return None;
        }
        let w = probes
            .iter()
            .copied()
            .max_by(|x, y| {
                let dx = x.chordal(&u).min(x.chordal(&su));
                let dy = y.chordal(&u).min(y.chordal(&su));
                dx.partial_cmp(&dy).unwrap()
            })?;
        let one = SpherePoint::from_re_im(T::one(), T::zero());
        let s = MobiusMap::from_three_pairs([u, w, su], [SpherePoint::zero(), one, SpherePoint::Infinity], eps).ok()?;
        let conj = Self::precompose_mobius(&s, &self.compose_mobius(&s.inverse()));
        let [a, b, c, d] = conj.m.entries();
        let scale = b.norm().max(c.norm());
        if a.norm() > lit::<T>(1e-6) * scale || d.norm() > lit::<T>(1e-6) * scale {
            return None;
        }
        let k = b / c;
        if k.re <= T::zero() || k.im.abs() > lit::<T>(1e-6) * k.re {
            return None;
        }
        let r = k.re.sqrt();
        let si = s.inverse();
        Some([
            si.apply(&SpherePoint::from_re_im(r, T::zero())),
            si.apply(&SpherePoint::from_re_im(T::zero(), r)),
            si.apply(&SpherePoint::from_re_im(-r, T::zero())),
        ])
    }

    pub fn is_reflection(&self, eps: T) -> bool {
        self.fixed_circle(eps).is_some()
    }
}
