//! Rational 1-forms `η = λ ∏(z − qⱼ)/∏(z − pᵢ) dz` with simple zeros and poles.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::poly;
use crate::scalar::{cis, lit, Real};
use crate::sphere::{distance_to_set, matching_residual, multiset_eq, SpherePoint};

/// Seed of the deterministic probe-point stream.
const PROBE_SEED: u64 = 0x1f0e_5eed;
/// Candidates drawn before the best-separated probes are kept.
const PROBE_CANDIDATES: usize = 48;
/// Chordal coincidence threshold (in units of ε) for roots of coefficient input.
const ROOT_COINCIDENCE: f64 = 1e3;

/// A rational 1-form on the Riemann sphere with simple zeros and poles.
///
/// Entries at ∞ contribute no factor to the affine expression; Gauss–Bonnet
/// (`|poles| − |zeros| = 2`) is enforced on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalOneForm<T> {
    lambda: Complex<T>,
    zeros: Vec<SpherePoint<T>>,
    poles: Vec<SpherePoint<T>>,
}

/// A pole together with its residue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residue<T> {
    pub pole: SpherePoint<T>,
    pub value: Complex<T>,
}

fn finite_points<T: Real>(s: &[SpherePoint<T>]) -> impl Iterator<Item = Complex<T>> + '_ {
    s.iter().filter_map(|p| p.finite())
}

fn snap_infinity<T: Real>(p: SpherePoint<T>, eps: T) -> SpherePoint<T> {
    if p.chordal(&SpherePoint::Infinity) <= eps {
        SpherePoint::Infinity
    } else {
        p
    }
}

/// Deterministic finite probe points, as far as possible from `avoid`.
pub fn probe_points<T: Real>(avoid: &[SpherePoint<T>], count: usize, eps: T) -> Result<Vec<Complex<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let min_sep = lit::<T>(1e3) * eps;
    let mut cands: Vec<(T, Complex<T>)> = Vec::new();
    let mut drawn = 0;
    while cands.len() < PROBE_CANDIDATES && drawn < 100 * PROBE_CANDIDATES {
        drawn += 1;
        let p = SpherePoint::<T>::random(&mut rng);
        let Some(z) = p.finite() else { continue };
        // Keep probes in a moderate annulus so the affine products stay well scaled.
        if z.norm() > lit(4.0) {
            continue;
        }
        let d = distance_to_set(avoid, &p).min(p.chordal(&SpherePoint::Infinity));
        if d > min_sep {
            cands.push((d, z));
        }
    }
    if cands.len() < count {
        return Err(Error::Internal("could not place regular probe points".into()));
    }
    cands.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(cands.into_iter().take(count).map(|(_, z)| z).collect())
}

impl<T: Real> RationalOneForm<T> {
    /// Validates simplicity, disjointness and the pole/zero count.
    pub fn new(lambda: Complex<T>, zeros: Vec<SpherePoint<T>>, poles: Vec<SpherePoint<T>>, eps: T) -> Result<Self> {
        if !(lambda.norm() > T::zero()) || !lambda.norm().is_finite() {
            return Err(Error::InvalidForm("lambda must be finite and nonzero".into()));
        }
        if poles.len() != zeros.len() + 2 {
            return Err(Error::InvalidForm(format!(
                "Gauss–Bonnet violated: {} poles and {} zeros (need poles = zeros + 2)",
                poles.len(),
                zeros.len()
            )));
        }
        let all: Vec<_> = zeros.iter().chain(poles.iter()).collect();
        for (i, p) in all.iter().enumerate() {
            if let Some(z) = p.finite() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::InvalidForm("non-finite coordinate".into()));
                }
            }
            for q in &all[..i] {
                if p.chordal(q) <= eps {
                    return Err(Error::InvalidForm(format!("points {p} and {q} coincide (non-simple or shared)")));
                }
            }
        }
        Ok(Self { lambda, zeros, poles })
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    pub fn zeros(&self) -> &[SpherePoint<T>] {
        &self.zeros
    }

    pub fn poles(&self) -> &[SpherePoint<T>] {
        &self.poles
    }

    /// Zeros followed by poles.
    pub fn special_points(&self) -> Vec<SpherePoint<T>> {
        let mut v = self.zeros.clone();
        v.extend_from_slice(&self.poles);
        v
    }

    /// `μ η`.
    pub fn scaled(&self, mu: Complex<T>) -> Self {
        Self { lambda: self.lambda * mu, ..self.clone() }
    }

    /// `e^{iθ} η`.
    pub fn rotated(&self, theta: T) -> Self {
        self.scaled(cis(theta))
    }

    pub fn with_lambda(&self, lambda: Complex<T>) -> Self {
        Self { lambda, ..self.clone() }
    }

    /// Coefficient `f(z)` of `η = f(z) dz` at a finite point.
    pub fn evaluate(&self, z: Complex<T>, eps: T) -> Result<Complex<T>> {
        let p = SpherePoint::Finite(z);
        if self.poles.iter().any(|q| q.chordal(&p) <= eps) {
            return Err(Error::AtPole);
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        let mut v = self.lambda;
        for q in finite_points(&self.zeros) {
            v = v * (z - q);
        }
        for p in finite_points(&self.poles) {
            v = v / (z - p);
        }
        v
    }

    /// Coefficient `h(w)` of `η = h(w) dw` in the chart `w = 1/z` at infinity.
    pub fn evaluate_at_infinity_chart(&self, w: Complex<T>) -> Complex<T> {
        let nz = finite_points(&self.zeros).count() as i32;
        let np = finite_points(&self.poles).count() as i32;
        let one = Complex::new(T::one(), T::zero());
        let mut v = -self.lambda * w.powi(np - nz - 2);
        for q in finite_points(&self.zeros) {
            v = v * (one - q * w);
        }
        for p in finite_points(&self.poles) {
            v = v / (one - p * w);
        }
        v
    }

    /// `f'(q)` at a finite simple zero `q` (index into the zero list).
    pub fn derivative_at_zero(&self, index: usize) -> Result<Complex<T>> {
        let q = self.zeros[index]
            .finite()
            .ok_or_else(|| Error::Precondition("zero at infinity".into()))?;
        let mut v = self.lambda;
        for (j, z) in self.zeros.iter().enumerate() {
            if j != index {
                if let Some(z) = z.finite() {
                    v = v * (q - z);
                }
            }
        }
        for p in finite_points(&self.poles) {
            v = v / (q - p);
        }
        Ok(v)
    }

    /// Residues at every pole, in pole order. The residue at ∞ (when ∞ is a pole)
    /// is minus the sum of the finite ones.
    pub fn residues(&self) -> Vec<Residue<T>> {
        let mut out: Vec<Residue<T>> = Vec::with_capacity(self.poles.len());
        let mut sum = Complex::new(T::zero(), T::zero());
        for (i, pole) in self.poles.iter().enumerate() {
            let Some(p) = pole.finite() else {
                out.push(Residue { pole: *pole, value: Complex::new(T::zero(), T::zero()) });
                continue;
            };
            let mut v = self.lambda;
            for q in finite_points(&self.zeros) {
                v = v * (p - q);
            }
            for (j, other) in self.poles.iter().enumerate() {
                if j != i {
                    if let Some(o) = other.finite() {
                        v = v / (p - o);
                    }
                }
            }
            sum = sum + v;
            out.push(Residue { pole: *pole, value: v });
        }
        for r in out.iter_mut() {
            if r.pole.is_infinite() {
                r.value = -sum;
            }
        }
        out
    }

    /// Residue at the pole closest to `p`, which must lie within `eps`.
    pub fn residue_at(&self, p: &SpherePoint<T>, eps: T) -> Result<Complex<T>> {
        self.residues()
            .into_iter()
            .find(|r| r.pole.chordal(p) <= eps)
            .map(|r| r.value)
            .ok_or_else(|| Error::Precondition(format!("{p} is not a pole")))
    }

    /// `T_* η = (T⁻¹)^* η`: zeros and poles are transported and `λ` is fixed by probing.
    pub fn pushforward(&self, t: &MobiusMap<T>, eps: T) -> Result<Self> {
        let zeros: Vec<_> = self.zeros.iter().map(|q| snap_infinity(t.apply(q), eps)).collect();
        let poles: Vec<_> = self.poles.iter().map(|p| snap_infinity(t.apply(p), eps)).collect();
        let s = t.inverse();
        let mut avoid: Vec<_> = zeros.iter().chain(poles.iter()).copied().collect();
        avoid.push(t.apply(&SpherePoint::Infinity));
        let probes = probe_points(&avoid, 3, eps)?;
        let shape = Self { lambda: Complex::new(T::one(), T::zero()), zeros, poles };
        let mut lambdas = Vec::with_capacity(3);
        for w in probes {
            let z = s
                .apply_finite(w)
                .ok_or_else(|| Error::Internal("probe mapped to infinity".into()))?;
            let g = self.eval_unchecked(z) * s.derivative(w);
            lambdas.push(g / shape.eval_unchecked(w));
        }
        let l0 = lambdas[0];
        let tol = lit::<T>(1e2) * eps;
        for l in &lambdas[1..] {
            if (*l - l0).norm() > tol * l0.norm() {
                return Err(Error::Internal(format!(
                    "pushforward probes disagree: {l0} vs {l}"
                )));
            }
        }
        Ok(Self { lambda: l0, ..shape })
    }

    /// Largest of the zero/pole matching residuals and the relative probe mismatch.
    pub fn residual(&self, other: &Self, eps: T) -> Option<T> {
        let rz = matching_residual(&self.zeros, &other.zeros)?;
        let rp = matching_residual(&self.poles, &other.poles)?;
        let mut avoid = self.special_points();
        avoid.extend(other.special_points());
        let probes = probe_points(&avoid, 3, eps).ok()?;
        let mut rv = T::zero();
        for w in probes {
            let (a, b) = (self.eval_unchecked(w), other.eval_unchecked(w));
            rv = rv.max((a - b).norm() / b.norm());
        }
        Some(rz.max(rp).max(rv))
    }

    /// Same zeros, same poles and agreeing values at three regular probes.
    pub fn form_equal(&self, other: &Self, eps: T) -> bool {
        multiset_eq(&self.zeros, &other.zeros, eps)
            && multiset_eq(&self.poles, &other.poles, eps)
            && self.residual(other, eps).is_some_and(|r| r <= eps)
    }

    /// Builds the form `λ · numer/denom dz` from ascending coefficient lists.
    pub fn from_rational_coefficients(
        numer: &[Complex<T>],
        denom: &[Complex<T>],
        lambda: Complex<T>,
        eps: T,
    ) -> Result<Self> {
        let n = poly::trim(numer);
        let d = poly::trim(denom);
        if n.is_empty() || d.is_empty() {
            return Err(Error::InvalidForm("zero numerator or denominator".into()));
        }
        let (dn, dd) = (n.len() - 1, d.len() - 1);
        let lead = lambda * n[dn] / d[dd];
        let mut zeros: Vec<SpherePoint<T>> = poly::roots(&n)?.into_iter().map(SpherePoint::Finite).collect();
        let mut poles: Vec<SpherePoint<T>> = poly::roots(&d)?.into_iter().map(SpherePoint::Finite).collect();
        let coincide = lit::<T>(ROOT_COINCIDENCE) * eps;
        for q in &zeros {
            if poles.iter().any(|p| p.chordal(q) <= coincide) {
                return Err(Error::NonReduced(q.to_string()));
            }
        }
        for set in [&zeros, &poles] {
            for i in 0..set.len() {
                if set[..i].iter().any(|p| p.chordal(&set[i]) <= coincide) {
                    return Err(Error::NonSimpleRoot(set[i].to_string()));
                }
            }
        }
        match dd as i64 - dn as i64 {
            1 => poles.push(SpherePoint::Infinity),
            2 => {}
            3 => zeros.push(SpherePoint::Infinity),
            _ => return Err(Error::NonSimpleRoot("∞".into())),
        }
        Self::new(lead, zeros, poles, eps)
    }

    /// Ascending coefficients `(numer, denom)` with `denom` monic and `λ` folded into `numer`.
    pub fn to_coefficients(&self) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let zs: Vec<_> = finite_points(&self.zeros).collect();
        let ps: Vec<_> = finite_points(&self.poles).collect();
        let numer = poly::from_roots(&zs).into_iter().map(|c| c * self.lambda).collect();
        (numer, poly::from_roots(&ps))
    }

    pub fn cast<U: Real>(&self) -> RationalOneForm<U> {
        let c = |z: Complex<T>| Complex::new(U::from_f64(z.re.to_f64().unwrap()).unwrap(), U::from_f64(z.im.to_f64().unwrap()).unwrap());
        RationalOneForm {
            lambda: c(self.lambda),
            zeros: self.zeros.iter().map(|p| p.cast()).collect(),
            poles: self.poles.iter().map(|p| p.cast()).collect(),
        }
    }
}
