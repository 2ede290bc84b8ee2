//! Residue-based isochrony test and the reflection (mirror) certificate.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::groups::FiniteMobiusGroup;
use crate::isotropy::BORDERLINE;
use crate::mobius::AntiMobiusMap;
use crate::oneform::{RationalOneForm, Residue};
use crate::scalar::{lit, Real};
use crate::sphere::{contains_close, find_close, SpherePoint};

/// Default angular tolerance (radians) for "purely imaginary" and "collinear".
pub const ANGLE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct IsochronyOptions {
    pub angle_tol: f64,
    /// For two-pole forms, require vanishing residues (never satisfiable) instead of
    /// purely imaginary ones.
    pub strict_two_pole: bool,
}

impl Default for IsochronyOptions {
    fn default() -> Self {
        Self { angle_tol: ANGLE_TOL, strict_two_pole: false }
    }
}

#[derive(Clone, Debug)]
pub struct IsochronyReport<T> {
    pub residues: Vec<Residue<T>>,
    /// Every residue is purely imaginary.
    pub is_isochronous: bool,
    /// All residues lie on one real line through 0.
    pub rotatable: bool,
    /// Smallest `θ ∈ [0, π)` making `e^{iθ}η` isochronous, when rotatable.
    pub theta: Option<T>,
    /// Largest angle between a residue and the imaginary axis.
    pub max_deviation: T,
    /// Largest angle between a residue and the best common line.
    pub collinearity_defect: T,
}

/// Angle between the line `ℝ·r` and the line of direction `phi`, in `[0, π/2]`.
fn line_angle<T: Real>(r: Complex<T>, phi: T) -> T {
    let pi = T::PI();
    let mut d = (r.arg() - phi) % pi;
    if d < T::zero() {
        d = d + pi;
    }
    d.min(pi - d)
}

pub fn isochrony_report<T: Real>(form: &RationalOneForm<T>, opts: IsochronyOptions) -> IsochronyReport<T> {
    let residues = form.residues();
    let tol = lit::<T>(opts.angle_tol);
    let scale = residues.iter().map(|r| r.value.norm()).fold(T::zero(), T::max);
    let negligible = lit::<T>(1e-12) * scale;
    let live: Vec<Complex<T>> = residues
        .iter()
        .map(|r| r.value)
        .filter(|r| r.norm() > negligible)
        .collect();
    let half_pi = T::FRAC_PI_2();
    let max_deviation = live
        .iter()
        .map(|r| line_angle(*r, half_pi))
        .fold(T::zero(), T::max);
    // Best line through 0 from the mean of doubled directions.
    let s: Complex<T> = live.iter().map(|r| (r / r.norm()).powi(2)).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    let (phi, defect) = if s.norm() <= lit::<T>(1e-12) * lit(live.len().max(1) as f64) {
        (half_pi, half_pi)
    } else {
        let phi = s.arg() / lit(2.0);
        (phi, live.iter().map(|r| line_angle(*r, phi)).fold(T::zero(), T::max))
    };
    let two_pole_strict = opts.strict_two_pole && form.poles().len() == 2;
    let is_isochronous = max_deviation <= tol && !two_pole_strict;
    let rotatable = defect <= tol && !two_pole_strict;
    let theta = if is_isochronous {
        Some(T::zero())
    } else if rotatable {
        let pi = T::PI();
        let mut t = (half_pi - phi) % pi;
        if t < T::zero() {
            t = t + pi;
        }
        if pi - t <= tol {
            t = T::zero();
        }
        Some(t)
    } else {
        None
    };
    IsochronyReport { residues, is_isochronous, rotatable, theta, max_deviation, collinearity_defect: defect }
}

/// Isochronous forms are exactly those whose flat geometry is polyhedral.
pub fn has_polyhedral_geometry<T: Real>(form: &RationalOneForm<T>) -> bool {
    isochrony_report(form, IsochronyOptions::default()).is_isochronous
}

/// A reflection preserving every `G`-orbit of zeros and poles.
#[derive(Clone, Debug)]
pub struct MirrorCertificate<T> {
    /// Three points of the mirror circle.
    pub circle_points: [SpherePoint<T>; 3],
    pub reflection: AntiMobiusMap<T>,
    /// `pole_pairing[i] = j` when the reflection sends pole `i` to pole `j`.
    pub pole_pairing: Vec<usize>,
    pub zero_pairing: Vec<usize>,
}

/// Index of `sigma(p)` among `pts`, provided it also lies in the orbit of `p`.
fn pairing<T: Real>(
    sigma: &AntiMobiusMap<T>,
    pts: &[SpherePoint<T>],
    orbits: &[Vec<SpherePoint<T>>],
    tol: T,
) -> Option<Vec<usize>> {
    pts.iter()
        .zip(orbits)
        .map(|(p, o)| {
            let img = sigma.apply(p);
            if !contains_close(o, &img, tol) {
                return None;
            }
            find_close(pts, &img, tol)
        })
        .collect()
}

fn orbits<T: Real>(group: &FiniteMobiusGroup<T>, pts: &[SpherePoint<T>], eps: T) -> Vec<Vec<SpherePoint<T>>> {
    pts.iter().map(|p| group.orbit(p, eps)).collect()
}

fn certify<T: Real>(
    sigma: AntiMobiusMap<T>,
    form: &RationalOneForm<T>,
    pole_orbits: &[Vec<SpherePoint<T>>],
    zero_orbits: &[Vec<SpherePoint<T>>],
    eps: T,
) -> Option<MirrorCertificate<T>> {
    let tol = lit::<T>(BORDERLINE) * eps;
    let pole_pairing = pairing(&sigma, form.poles(), pole_orbits, tol)?;
    let zero_pairing = pairing(&sigma, form.zeros(), zero_orbits, tol)?;
    if !sigma.is_reflection(eps) {
        return None;
    }
    let circle_points = sigma.fixed_circle(eps)?;
    Some(MirrorCertificate { circle_points, reflection: sigma, pole_pairing, zero_pairing })
}

/// Searches for a reflection `σ` with `σ(p) ∈ G·p` for every zero and pole.
///
/// A reflection permuting the poles is fixed by the images of three of them, so
/// a source triple (smallest orbits first) is sent to every ordered triple of
/// points in the corresponding orbits. Forms with fewer than three poles have
/// no finite isotropy and yield `None`.
pub fn mirror_search<T: Real>(
    form: &RationalOneForm<T>,
    group: &FiniteMobiusGroup<T>,
    eps: T,
) -> Option<MirrorCertificate<T>> {
    let poles = form.poles();
    if poles.len() < 3 {
        return None;
    }
    let pole_orbits = orbits(group, poles, eps);
    let zero_orbits = orbits(group, form.zeros(), eps);
    let mut order: Vec<usize> = (0..poles.len()).collect();
    order.sort_by_key(|&i| (pole_orbits[i].len(), i));
    let cost = |i: usize, j: usize, k: usize| pole_orbits[i].len() * pole_orbits[j].len() * pole_orbits[k].len();
    let min_cost = cost(order[0], order[1], order[2]);
    let pool = &order[..order.len().min(24)];
    let mut src = [order[0], order[1], order[2]];
    let mut best = T::zero();
    for a in 0..pool.len() {
        for b in a + 1..pool.len() {
            for c in b + 1..pool.len() {
                let (i, j, k) = (pool[a], pool[b], pool[c]);
                let sep = poles[i].chordal(&poles[j]).min(poles[i].chordal(&poles[k])).min(poles[j].chordal(&poles[k]));
                if cost(i, j, k) == min_cost && sep > best {
                    best = sep;
                    src = [i, j, k];
                }
            }
        }
    }
    let src_pts = [poles[src[0]], poles[src[1]], poles[src[2]]];
    for a in &pole_orbits[src[0]] {
        for b in &pole_orbits[src[1]] {
            for c in &pole_orbits[src[2]] {
                let Ok(sigma) = AntiMobiusMap::from_three_pairs(src_pts, [*a, *b, *c], eps) else { continue };
                if let Some(cert) = certify(sigma, form, &pole_orbits, &zero_orbits, eps) {
                    return Some(cert);
                }
            }
        }
    }
    None
}

/// Re-checks a certificate and returns the rotation `θ` it guarantees.
///
/// A valid certificate whose form is not rotatable is reported as
/// [`Error::Internal`]: it would falsify the implementation, not the theorem.
pub fn sufficient_condition_implies<T: Real>(
    form: &RationalOneForm<T>,
    group: &FiniteMobiusGroup<T>,
    cert: &MirrorCertificate<T>,
    eps: T,
) -> Result<T> {
    let pole_orbits = orbits(group, form.poles(), eps);
    let zero_orbits = orbits(group, form.zeros(), eps);
    if certify(cert.reflection, form, &pole_orbits, &zero_orbits, eps).is_none() {
        return Err(Error::Precondition("invalid mirror certificate".into()));
    }
    isochrony_report(form, IsochronyOptions::default())
        .theta
        .ok_or_else(|| Error::Internal("mirror certificate but residues are not collinear".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paper::{dihedral_family, two_pole};

    #[test]
    fn two_pole_form_with_imaginary_lambda() {
        let eta = two_pole::<f64>(Complex::new(0.0, 1.0), 1e-8).unwrap();
        let r = isochrony_report(&eta, IsochronyOptions::default());
        assert!(r.is_isochronous);
        let strict = isochrony_report(&eta, IsochronyOptions { strict_two_pole: true, ..Default::default() });
        assert!(!strict.is_isochronous);
    }

    #[test]
    fn real_lambda_rotates_by_half_pi() {
        let eta = dihedral_family::<f64>(3, Complex::new(1.0, 0.0), 1e-8).unwrap();
        let r = isochrony_report(&eta, IsochronyOptions::default());
        assert!(!r.is_isochronous && r.rotatable);
        assert!((r.theta.unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }
}
