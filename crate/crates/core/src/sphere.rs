//! Points of the Riemann sphere, chordal geometry and tolerant multiset matching.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// A point of the Riemann sphere.
///
/// Finite points keep their affine coordinate verbatim so that serialization
/// round-trips bit-exactly; the normalized projective pair is derived on demand
/// by [`SpherePoint::pair`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint<T> {
    Finite(Complex<T>),
    Infinity,
}

/// A finite collection of sphere points where order does not matter.
pub type PointMultiset<T> = Vec<SpherePoint<T>>;

impl<T: Real> SpherePoint<T> {
    pub fn zero() -> Self {
        SpherePoint::Finite(Complex::new(T::zero(), T::zero()))
    }

    pub fn from_re_im(re: T, im: T) -> Self {
        SpherePoint::Finite(Complex::new(re, im))
    }

    /// Finite point, rejecting NaN and infinite components.
    pub fn try_finite(z: Complex<T>) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(SpherePoint::Finite(z))
        } else {
            Err(Error::Degenerate(format!("non-finite coordinate {z:?}")))
        }
    }

    /// Point with projective coordinates `[num : den]`.
    ///
    /// Denominators that vanish relative to the numerator at machine precision
    /// are read as infinity.
    pub fn from_pair(num: Complex<T>, den: Complex<T>) -> Result<Self> {
        let (n, d) = (num.norm(), den.norm());
        if !(n.is_finite() && d.is_finite()) || (n == T::zero() && d == T::zero()) {
            return Err(Error::Degenerate("projective pair [0:0] or non-finite".into()));
        }
        if d <= T::epsilon() * n {
            return Ok(SpherePoint::Infinity);
        }
        if den == Complex::new(T::one(), T::zero()) {
            return Ok(SpherePoint::Finite(num));
        }
        Ok(SpherePoint::Finite(num / den))
    }

    /// Scales `[num : den]` so that its larger-modulus component is exactly `1`.
    ///
    /// A pair that already has an exact unit component (and no component
    /// noticeably larger) is returned unchanged, so normalizing is idempotent
    /// bit for bit.
    pub fn normalize_pair(num: Complex<T>, den: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let one = Complex::new(T::one(), T::zero());
        let (n, d) = (num.norm(), den.norm());
        if !(n.is_finite() && d.is_finite()) || (n == T::zero() && d == T::zero()) {
            return Err(Error::Degenerate("projective pair [0:0] or non-finite".into()));
        }
        let slack = T::one() + lit::<T>(4.0) * T::epsilon();
        if (num == one && d <= slack) || (den == one && n <= slack) {
            return Ok((num, den));
        }
        Ok(if n >= d { (one, den / num) } else { (num / den, one) })
    }

    /// Normalized projective pair: the larger-modulus component is exactly `1`.
    pub fn pair(&self) -> (Complex<T>, Complex<T>) {
        let one = Complex::new(T::one(), T::zero());
        match *self {
            SpherePoint::Infinity => (one, Complex::new(T::zero(), T::zero())),
            SpherePoint::Finite(z) => {
                if z.norm_sqr() <= T::one() {
                    (z, one)
                } else {
                    (one, z.inv())
                }
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal(&self, other: &Self) -> T {
        let (z1, w1) = self.pair();
        let (z2, w2) = other.pair();
        let num = (z1 * w2 - z2 * w1).norm();
        let den = (z1.norm_sqr() + w1.norm_sqr()).sqrt() * (z2.norm_sqr() + w2.norm_sqr()).sqrt();
        let two = T::one() + T::one();
        (two * num / den).min(two)
    }

    pub fn approx_eq(&self, other: &Self, eps: T) -> bool {
        self.chordal(other) <= eps
    }

    pub fn conj(&self) -> Self {
        match *self {
            SpherePoint::Finite(z) => SpherePoint::Finite(z.conj()),
            SpherePoint::Infinity => SpherePoint::Infinity,
        }
    }

    /// Antipodal point `z ↦ -1/z̄`.
    pub fn antipode(&self) -> Self {
        match *self {
            SpherePoint::Infinity => Self::zero(),
            SpherePoint::Finite(z) if z.norm_sqr() == T::zero() => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(-z.conj().inv()),
        }
    }

    /// Inverse stereographic projection onto the unit sphere (∞ is the north pole).
    pub fn to_unit_vector(&self) -> [T; 3] {
        let two = T::one() + T::one();
        match *self {
            SpherePoint::Infinity => [T::zero(), T::zero(), T::one()],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                if r2 <= T::one() {
                    let s = T::one() + r2;
                    [two * z.re / s, two * z.im / s, (r2 - T::one()) / s]
                } else {
                    let w = z.inv();
                    let q = w.norm_sqr();
                    let s = T::one() + q;
                    [two * w.re / s, -two * w.im / s, (T::one() - q) / s]
                }
            }
        }
    }

    /// Stereographic projection of a (not necessarily unit) nonzero vector's direction.
    pub fn from_vector(v: [T; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Degenerate("zero vector has no direction".into()));
        }
        let (x, y, h) = (v[0] / n, v[1] / n, v[2] / n);
        if h <= T::zero() {
            Ok(SpherePoint::Finite(Complex::new(x, y) / (T::one() - h)))
        } else {
            let d = Complex::new(x, -y);
            if d.norm_sqr() == T::zero() {
                return Ok(SpherePoint::Infinity);
            }
            Ok(SpherePoint::Finite(Complex::new(T::one() + h, T::zero()) / d))
        }
    }

    /// Spherical midpoint of the shorter great arc between two non-antipodal points.
    pub fn spherical_midpoint(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.to_unit_vector(), other.to_unit_vector());
        Self::from_vector([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }

    /// Point drawn uniformly with respect to the round measure.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let h: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - h * h).sqrt();
        Self::from_vector([lit(r * phi.cos()), lit(r * phi.sin()), lit(h)])
            .unwrap_or(SpherePoint::Infinity)
    }

    /// Sort key: `(re, im)` rounded to 12 significant decimals, ∞ last.
    pub fn canonical_key(&self) -> (u8, i64, i64) {
        let round = |x: T| -> i64 {
            let v = x.to_f64().unwrap_or(0.0);
            (v * 1e12).round() as i64
        };
        match *self {
            SpherePoint::Finite(z) => (0, round(z.re), round(z.im)),
            SpherePoint::Infinity => (1, 0, 0),
        }
    }

    pub fn cast<U: Real>(&self) -> SpherePoint<U> {
        match *self {
            SpherePoint::Finite(z) => SpherePoint::Finite(Complex::new(
                U::from_f64(z.re.to_f64().unwrap()).unwrap(),
                U::from_f64(z.im.to_f64().unwrap()).unwrap(),
            )),
            SpherePoint::Infinity => SpherePoint::Infinity,
        }
    }
}

impl<T: Real> From<Complex<T>> for SpherePoint<T> {
    fn from(z: Complex<T>) -> Self {
        SpherePoint::Finite(z)
    }
}

impl<T: Real> std::fmt::Display for SpherePoint<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "∞"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// Index of a point of `set` within `eps` of `p`, if any (nearest wins).
pub fn find_close<T: Real>(set: &[SpherePoint<T>], p: &SpherePoint<T>, eps: T) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, q) in set.iter().enumerate() {
        let d = p.chordal(q);
        if d <= eps && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

pub fn contains_close<T: Real>(set: &[SpherePoint<T>], p: &SpherePoint<T>, eps: T) -> bool {
    set.iter().any(|q| p.chordal(q) <= eps)
}

/// Smallest chordal distance from `p` to a point of `set` (2 for an empty set).
pub fn distance_to_set<T: Real>(set: &[SpherePoint<T>], p: &SpherePoint<T>) -> T {
    set.iter().map(|q| p.chordal(q)).fold(lit(2.0), T::min)
}

/// Removes points within `eps` of an earlier point.
pub fn dedup_close<T: Real>(points: &[SpherePoint<T>], eps: T) -> Vec<SpherePoint<T>> {
    let mut out: Vec<SpherePoint<T>> = Vec::with_capacity(points.len());
    for p in points {
        if !contains_close(&out, p, eps) {
            out.push(*p);
        }
    }
    out
}

/// Smallest pairwise chordal distance inside `points` (2 if fewer than two).
pub fn min_separation<T: Real>(points: &[SpherePoint<T>]) -> T {
    let mut m: T = lit(2.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            m = m.min(points[i].chordal(&points[j]));
        }
    }
    m
}

/// Bijection `a[i] ↦ b[perm[i]]` with every pair within `eps`, if one exists.
///
/// A greedy nearest-neighbour pass is tried first; when it fails an optimal
/// assignment on chordal distances decides.
pub fn match_multisets<T: Real>(
    a: &[SpherePoint<T>],
    b: &[SpherePoint<T>],
    eps: T,
) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut used = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    let mut greedy_ok = true;
    for p in a {
        let mut best: Option<(usize, T)> = None;
        for (j, q) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = p.chordal(q);
            if d <= eps && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, _)) => {
                used[j] = true;
                perm.push(j);
            }
            None => {
                greedy_ok = false;
                break;
            }
        }
    }
    if greedy_ok {
        return Some(perm);
    }
    // Every point of `a` needs at least one candidate before the assignment is worth solving.
    if a.iter().any(|p| !contains_close(b, p, eps)) {
        return None;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|p| b.iter().map(|q| p.chordal(q).to_f64().unwrap_or(f64::INFINITY)).collect())
        .collect();
    let perm = hungarian(&cost);
    let ok = perm.iter().enumerate().all(|(i, &j)| a[i].chordal(&b[j]) <= eps);
    ok.then_some(perm)
}

/// Largest matched distance of the optimal assignment between equally sized multisets.
pub fn matching_residual<T: Real>(a: &[SpherePoint<T>], b: &[SpherePoint<T>]) -> Option<T> {
    if a.len() != b.len() {
        return None;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|p| b.iter().map(|q| p.chordal(q).to_f64().unwrap_or(f64::INFINITY)).collect())
        .collect();
    let perm = hungarian(&cost);
    Some(
        perm.iter()
            .enumerate()
            .map(|(i, &j)| a[i].chordal(&b[j]))
            .fold(T::zero(), T::max),
    )
}

pub fn multiset_eq<T: Real>(a: &[SpherePoint<T>], b: &[SpherePoint<T>], eps: T) -> bool {
    match_multisets(a, b, eps).is_some()
}

/// Minimum-cost perfect assignment on a square cost matrix (O(n³) potentials method).
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}
