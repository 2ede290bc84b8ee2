//! Phase portraits of the field `X = e^{-iθ}/f ∂/∂z` dual to `η = f dz`.
//!
//! Trajectories are integrated with an adaptive Dormand–Prince 5(4) scheme in
//! spherical arc length, switching to the chart `w = 1/z` near ∞. Along every
//! trajectory `Im(e^{iθ}Ψ)` is constant, where `Ψ = ∫ η`; [`psi_drift`]
//! measures that independently by quadrature along the emitted polyline.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isotropy::{isotropy, BORDERLINE};
use crate::json::complex_to_value;
use crate::oneform::RationalOneForm;
use crate::scalar::{cis, lit, to_c64, Real};
use crate::sphere::{find_close, SpherePoint};

/// Chordal radius around zeros and poles inside which grid samples are omitted.
pub const SAMPLE_GUARD: f64 = 1e-6;
/// Switch to the chart at ∞ beyond this modulus, and back below `CHART_RETURN`.
const CHART_SWITCH: f64 = 1e3;
const CHART_RETURN: f64 = 1e2;
const MIN_STEP: f64 = 1e-12;
const MAX_STEPS: usize = 400_000;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
        if !ok {
            return Err(Error::Precondition(format!("bad window {x0},{x1},{y0},{y1}")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn square(r: f64) -> Self {
        Self { x0: -r, x1: r, y0: -r, y1: r }
    }

    pub fn contains(&self, z: Complex<f64>) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Same center, sides scaled by `factor`.
    pub fn expanded(&self, factor: f64) -> Self {
        let (cx, cy) = ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0);
        let (hx, hy) = ((self.x1 - self.x0) * factor / 2.0, (self.y1 - self.y0) * factor / 2.0);
        Self { x0: cx - hx, x1: cx + hx, y0: cy - hy, y1: cy + hy }
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `x0,x1,y0,y1`
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("window: {e}")))?;
        match v[..] {
            [x0, x1, y0, y1] => Window::new(x0, x1, y0, y1),
            _ => Err(Error::Parse("window needs four numbers x0,x1,y0,y1".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample<T> {
    pub at: Complex<T>,
    pub value: Complex<T>,
}

/// `e^{-iθ}/f` on an `nx × ny` grid spanning the window (corners included),
/// omitting points within [`SAMPLE_GUARD`] of a zero or pole.
pub fn sample_grid<T: Real>(
    form: &RationalOneForm<T>,
    window: &Window,
    nx: usize,
    ny: usize,
    theta: T,
) -> Vec<FieldSample<T>> {
    let special = form.special_points();
    let guard = lit::<T>(SAMPLE_GUARD);
    let rot = cis(-theta);
    let coord = |lo: f64, hi: f64, i: usize, n: usize| if n <= 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let at = Complex::new(lit::<T>(coord(window.x0, window.x1, i, nx)), lit::<T>(coord(window.y0, window.y1, j, ny)));
            let p = SpherePoint::Finite(at);
            if special.iter().any(|s| s.chordal(&p) <= guard) {
                continue;
            }
            let value = rot / form.eval_unchecked(at);
            if value.re.is_finite() && value.im.is_finite() {
                out.push(FieldSample { at, value });
            }
        }
    }
    out
}

pub fn samples_to_json<T: Real>(samples: &[FieldSample<T>]) -> Value {
    Value::Array(
        samples
            .iter()
            .map(|s| json!({ "at": complex_to_value(s.at), "value": complex_to_value(s.value) }))
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryKind {
    Streamline,
    Separatrix,
}

/// Why an integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    MaxLength,
    /// Came back to its starting point.
    Closed,
    /// Entered the guard radius of a zero or pole.
    NearSingularity,
    LeftWindow,
    /// The step size collapsed, typically spiralling into a pole.
    StepUnderflow,
    StepLimit,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub points: Vec<Complex<T>>,
    pub kind: TrajectoryKind,
    /// The zero a separatrix emanates from.
    pub origin: Option<SpherePoint<T>>,
    pub status: Termination,
    /// Spherical arc length covered by the integrator.
    pub length: T,
}

#[derive(Clone, Debug)]
pub struct StreamOptions {
    /// Maximal spherical arc length.
    pub max_len: f64,
    /// Local error tolerance per step.
    pub tol: f64,
    /// Chordal guard radius around zeros and poles.
    pub guard: f64,
    /// Chordal distance to the start that counts as a closed orbit.
    pub close_tol: f64,
    pub max_step: f64,
    /// Stop when leaving this rectangle.
    pub window: Option<Window>,
    /// Integrate `-X` instead of `X`.
    pub backward: bool,
}

impl Default for StreamOptions {
    fn default() -> Self {
        Self { max_len: 20.0, tol: 1e-8, guard: 1e-3, close_tol: 1e-3, max_step: 0.05, window: None, backward: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chart {
    Plane,
    Infinity,
}

struct Field<'a, T> {
    form: &'a RationalOneForm<T>,
    /// `±e^{-iθ}`
    rot: Complex<T>,
}

impl<T: Real> Field<'_, T> {
    fn coef(&self, chart: Chart, u: Complex<T>) -> Complex<T> {
        match chart {
            Chart::Plane => self.form.eval_unchecked(u),
            Chart::Infinity => self.form.evaluate_at_infinity_chart(u),
        }
    }

    /// Unit-speed (spherical metric) direction of the field in chart coordinates.
    fn velocity(&self, chart: Chart, u: Complex<T>) -> Option<Complex<T>> {
        let f = self.coef(chart, u);
        let m = f.norm();
        if !m.is_finite() || m == T::zero() {
            return None;
        }
        let conf = (T::one() + u.norm_sqr()) / lit(2.0);
        let v = self.rot * f.conj() / m * conf;
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step; returns the 5th-order point and the weighted error.
///
/// The error is measured both spherically and in `Ψ` units (`|f|·|Δu|`), which
/// keeps the first integral tight near poles.
fn dp_step<T: Real>(field: &Field<T>, chart: Chart, u: Complex<T>, h: T) -> Option<(Complex<T>, T)> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut k = [zero; 7];
    k[0] = field.velocity(chart, u)?;
    for s in 1..7 {
        let mut acc = zero;
        for (j, kj) in k.iter().enumerate().take(s) {
            acc = acc + *kj * lit::<T>(A[s - 1][j]);
        }
        k[s] = field.velocity(chart, u + acc * h)?;
    }
    let mut hi = zero;
    let mut lo = zero;
    for s in 0..7 {
        hi = hi + k[s] * lit::<T>(B5[s]);
        lo = lo + k[s] * lit::<T>(B4[s]);
    }
    let next = u + hi * h;
    let weight = (lit::<T>(2.0) / (T::one() + u.norm_sqr())).max(field.coef(chart, u).norm());
    Some((next, (hi - lo).norm() * h.abs() * weight))
}

fn chart_point<T: Real>(chart: Chart, u: Complex<T>) -> SpherePoint<T> {
    match chart {
        Chart::Plane => SpherePoint::Finite(u),
        Chart::Infinity if u.norm() == T::zero() => SpherePoint::Infinity,
        Chart::Infinity => SpherePoint::Finite(u.inv()),
    }
}

fn sub3<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Closest approach of `p` to the chord `[a, b]` in ℝ³, with its parameter.
fn segment_distance<T: Real>(p: [T; 3], a: [T; 3], b: [T; 3]) -> (T, T) {
    let ab = sub3(b, a);
    let len2 = dot3(ab, ab);
    let t = if len2 > T::zero() { (dot3(sub3(p, a), ab) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
    let d = sub3(p, q);
    (dot3(d, d).sqrt(), t)
}

fn integrate<T: Real>(
    form: &RationalOneForm<T>,
    start: SpherePoint<T>,
    theta: T,
    opts: &StreamOptions,
    origin: Option<SpherePoint<T>>,
    kind: TrajectoryKind,
) -> Trajectory<T> {
    let sign = if opts.backward { -T::one() } else { T::one() };
    let field = Field { form, rot: cis(-theta) * sign };
    let base_guard = lit::<T>(opts.guard);
    let guards: Vec<(SpherePoint<T>, T)> = form
        .special_points()
        .into_iter()
        .map(|s| {
            let r = match origin {
                Some(o) if o.approx_eq(&s, lit(1e-12)) => base_guard.min(start.chordal(&o) / lit(2.0)),
                _ => base_guard,
            };
            (s, r)
        })
        .collect();
    let mut traj = Trajectory { points: Vec::new(), kind, origin, status: Termination::MaxLength, length: T::zero() };
    if guards.iter().any(|(s, r)| s.chordal(&start) < *r) {
        traj.status = Termination::NearSingularity;
        return traj;
    }
    if let Some(z) = start.finite() {
        traj.points.push(z);
    }
    let (mut chart, mut u) = match start {
        SpherePoint::Finite(z) if z.norm() <= lit(CHART_SWITCH) => (Chart::Plane, z),
        SpherePoint::Finite(z) => (Chart::Infinity, z.inv()),
        SpherePoint::Infinity => (Chart::Infinity, Complex::new(T::zero(), T::zero())),
    };
    let (max_len, tol, max_step) = (lit::<T>(opts.max_len), lit::<T>(opts.tol), lit::<T>(opts.max_step));
    let close_tol = lit::<T>(opts.close_tol);
    let min_step = lit::<T>(MIN_STEP);
    let start_vec = start.to_unit_vector();
    let mut prev_vec = start_vec;
    let mut left_start = false;
    let mut h = max_step.min(lit(1e-2));
    let fifth = lit::<T>(0.2);
    let mut steps = 0usize;
    traj.status = loop {
        if traj.length >= max_len {
            break Termination::MaxLength;
        }
        steps += 1;
        if steps > MAX_STEPS {
            break Termination::StepLimit;
        }
        match chart {
            Chart::Plane if u.norm() > lit(CHART_SWITCH) => {
                chart = Chart::Infinity;
                u = u.inv();
            }
            Chart::Infinity if u.norm() > lit::<T>(1.0 / CHART_RETURN) => {
                chart = Chart::Plane;
                u = u.inv();
            }
            _ => {}
        }
        let hs = h.min(max_len - traj.length);
        let Some((next, err)) = dp_step(&field, chart, u, hs) else {
            h = hs / lit(4.0);
            if h < min_step {
                break Termination::StepUnderflow;
            }
            continue;
        };
        let factor = if err > T::zero() { lit::<T>(0.9) * (tol / err).powf(fifth) } else { lit(5.0) };
        if err > tol {
            h = hs * factor.max(lit(0.2));
            if h < min_step {
                break Termination::StepUnderflow;
            }
            continue;
        }
        let p = chart_point(chart, next);
        let v = p.to_unit_vector();
        if left_start {
            let (d, t) = segment_distance(start_vec, prev_vec, v);
            if d < close_tol {
                // Land on the point of closest approach rather than past it.
                if let Some((closing, _)) = dp_step(&field, chart, u, hs * t) {
                    if let Some(z) = chart_point(chart, closing).finite() {
                        traj.points.push(z);
                    }
                    traj.length = traj.length + hs * t;
                }
                break Termination::Closed;
            }
        } else if p.chordal(&start) > close_tol * lit(2.0) {
            left_start = true;
        }
        u = next;
        prev_vec = v;
        traj.length = traj.length + hs;
        if let Some(z) = p.finite() {
            traj.points.push(z);
        }
        if guards.iter().any(|(s, r)| s.chordal(&p) < *r) {
            break Termination::NearSingularity;
        }
        if let (Some(w), Some(z)) = (&opts.window, p.finite()) {
            if !w.contains(to_c64(z)) {
                break Termination::LeftWindow;
            }
        }
        h = (hs * factor.min(lit(5.0)).max(lit(0.2))).min(max_step);
    };
    traj
}

/// Integrates `z' = e^{-iθ}/f(z)` from `start` (forward unless `opts.backward`).
///
/// Singular encounters end the trajectory with a [`Termination`] status; they are
/// never errors.
pub fn integrate_streamline<T: Real>(form: &RationalOneForm<T>, start: Complex<T>, theta: T, opts: &StreamOptions) -> Trajectory<T> {
    integrate(form, SpherePoint::Finite(start), theta, opts, None, TrajectoryKind::Streamline)
}

#[derive(Clone, Copy, Debug)]
pub struct PsiDrift<T> {
    /// `max |Im(e^{iθ}(Ψ(z_k) − Ψ(z_0)))|` along the polyline.
    pub max_abs: T,
    /// Spherical (chordal) length of the polyline.
    pub length: T,
}

impl<T: Real> PsiDrift<T> {
    /// Drift per unit arc length; paths shorter than one unit count as one.
    pub fn per_unit_length(&self) -> T {
        self.max_abs / self.length.max(T::one())
    }
}

const GL_NODES: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss_legendre<T: Real>(g: impl Fn(Complex<T>) -> Complex<T>, a: Complex<T>, b: Complex<T>) -> Complex<T> {
    let half = (b - a) / lit::<T>(2.0);
    let mid = (a + b) / lit::<T>(2.0);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc = acc + g(mid + half * lit::<T>(*x)) * lit::<T>(w);
    }
    acc * half
}

/// Independent check of the first integral: `∫ η` by Gauss–Legendre quadrature
/// over each chord of the polyline (in the chart at ∞ for far chords).
pub fn psi_drift<T: Real>(form: &RationalOneForm<T>, traj: &Trajectory<T>, theta: T) -> PsiDrift<T> {
    let rot = cis(theta);
    let far = lit::<T>(CHART_RETURN);
    let mut psi = Complex::new(T::zero(), T::zero());
    let mut drift = PsiDrift { max_abs: T::zero(), length: T::zero() };
    for pair in traj.points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let piece = if a.norm().max(b.norm()) > far && a.norm() > T::zero() && b.norm() > T::zero() {
            gauss_legendre(|w| form.evaluate_at_infinity_chart(w), a.inv(), b.inv())
        } else {
            gauss_legendre(|z| form.eval_unchecked(z), a, b)
        };
        psi = psi + piece;
        drift.max_abs = drift.max_abs.max((rot * psi).im.abs());
        drift.length = drift.length + SpherePoint::Finite(a).chordal(&SpherePoint::Finite(b));
    }
    drift
}

/// The four critical trajectories leaving each finite zero.
///
/// Near a simple zero `q`, `e^{iθ}Ψ ≈ e^{iθ}c(z−q)²/2` with `c = f'(q)`; it is real
/// along the rays `arg(z−q) = (mπ − arg c − θ)/2`. Seeds sit at
/// `10⁻³ × (distance to the nearest other special point)`, and odd rays (where
/// the real part decreases outward) are integrated backward.
pub fn separatrices<T: Real>(form: &RationalOneForm<T>, theta: T, opts: &StreamOptions) -> Vec<Trajectory<T>> {
    let special = form.special_points();
    let mut seeds = Vec::new();
    for (idx, q) in form.zeros().iter().enumerate() {
        let Some(qz) = q.finite() else { continue };
        let Ok(c) = form.derivative_at_zero(idx) else { continue };
        let dmin = special
            .iter()
            .filter_map(|s| s.finite())
            .map(|s| (s - qz).norm())
            .filter(|d| *d > T::zero())
            .fold(T::infinity(), T::min);
        let r0 = lit::<T>(1e-3) * if dmin.is_finite() { dmin } else { T::one() };
        for m in 0..4 {
            let alpha = (lit::<T>(m as f64) * T::PI() - c.arg() - theta) / lit(2.0);
            seeds.push((*q, qz + cis(alpha) * r0, m % 2 == 1));
        }
    }
    seeds
        .par_iter()
        .map(|(q, seed, backward)| {
            let o = StreamOptions { backward: *backward, ..opts.clone() };
            let mut t = integrate(form, SpherePoint::Finite(*seed), theta, &o, Some(*q), TrajectoryKind::Separatrix);
            if let Some(qz) = q.finite() {
                t.points.insert(0, qz);
            }
            t
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    pub window: Window,
    pub theta: f64,
    /// Streamline seeds per axis; `(0, 0)` draws no streamlines.
    pub grid: (usize, usize),
    pub separatrices: bool,
    /// Add a second panel with the orthographic view of the sphere.
    pub sphere: bool,
    /// Width of the plane panel in pixels.
    pub width: f64,
    pub stream: StreamOptions,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            window: Window::square(3.0),
            theta: 0.0,
            grid: (10, 10),
            separatrices: true,
            sphere: false,
            width: 640.0,
            stream: StreamOptions { max_len: 6.0, tol: 1e-7, ..StreamOptions::default() },
        }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];

/// Orbit index of every pole under the isotropy group (one class when the
/// isotropy is not finite or cannot be computed).
fn pole_classes<T: Real>(form: &RationalOneForm<T>, eps: T) -> Vec<usize> {
    let poles = form.poles();
    let mut class = vec![usize::MAX; poles.len()];
    let group = isotropy(form, eps).ok().and_then(|r| r.group().cloned());
    let Some(group) = group else { return vec![0; poles.len()] };
    let mut next = 0;
    for i in 0..poles.len() {
        if class[i] != usize::MAX {
            continue;
        }
        for img in group.orbit(&poles[i], eps) {
            if let Some(j) = find_close(poles, &img, lit::<T>(BORDERLINE) * eps) {
                class[j] = next;
            }
        }
        class[i] = next;
        next += 1;
    }
    class
}

struct Canvas {
    window: Window,
    width: f64,
    height: f64,
}

impl Canvas {
    fn px(&self, z: Complex<f64>) -> (f64, f64) {
        let w = &self.window;
        ((z.re - w.x0) / (w.x1 - w.x0) * self.width, (w.y1 - z.im) / (w.y1 - w.y0) * self.height)
    }
}

fn polyline_runs(out: &mut String, runs: &[Vec<(f64, f64)>]) {
    for run in runs.iter().filter(|r| r.len() >= 2) {
        out.push_str("<polyline points=\"");
        for (i, (x, y)) in run.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x:.2},{y:.2}");
        }
        out.push_str("\"/>\n");
    }
}

/// Splits a trajectory into drawable runs, cutting where it leaves `clip`.
fn plane_runs<T: Real>(traj: &Trajectory<T>, canvas: &Canvas, clip: &Window) -> Vec<Vec<(f64, f64)>> {
    let mut runs = vec![Vec::new()];
    for z in traj.points.iter().map(|z| to_c64(*z)) {
        if clip.contains(z) {
            runs.last_mut().expect("nonempty").push(canvas.px(z));
        } else if !runs.last().expect("nonempty").is_empty() {
            runs.push(Vec::new());
        }
    }
    runs
}

/// Orthographic view of the sphere, looking slightly down on the north pole.
struct SphereView {
    cx: f64,
    cy: f64,
    r: f64,
}

impl SphereView {
    const TILT: f64 = 1.0;

    fn project(&self, v: [f64; 3]) -> Option<(f64, f64)> {
        let (s, c) = Self::TILT.sin_cos();
        let depth = -s * v[1] + c * v[2];
        let up = c * v[1] + s * v[2];
        (depth >= 0.0).then(|| (self.cx + self.r * v[0], self.cy - self.r * up))
    }

    fn point<T: Real>(&self, p: &SpherePoint<T>) -> Option<(f64, f64)> {
        let v = p.to_unit_vector();
        self.project([v[0].to_f64()?, v[1].to_f64()?, v[2].to_f64()?])
    }

    fn runs<T: Real>(&self, traj: &Trajectory<T>) -> Vec<Vec<(f64, f64)>> {
        let mut runs = vec![Vec::new()];
        for z in &traj.points {
            match self.point(&SpherePoint::Finite(*z)) {
                Some(q) => runs.last_mut().expect("nonempty").push(q),
                None if !runs.last().expect("nonempty").is_empty() => runs.push(Vec::new()),
                None => {}
            }
        }
        runs
    }
}

fn pole_marker(out: &mut String, class_name: &str, (x, y): (f64, f64), class: usize, size: f64) {
    let color = PALETTE[class % PALETTE.len()];
    let s = size;
    let _ = match class {
        0 => writeln!(
            out,
            "<path class=\"{class_name}\" data-orbit=\"{class}\" fill=\"{color}\" d=\"M{x:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z\"/>",
            y - s,
            x + 0.9 * s,
            y + 0.6 * s,
            x - 0.9 * s,
            y + 0.6 * s
        ),
        1 => writeln!(
            out,
            "<rect class=\"{class_name}\" data-orbit=\"{class}\" fill=\"{color}\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
            x - 0.7 * s,
            y - 0.7 * s,
            1.4 * s,
            1.4 * s
        ),
        _ => writeln!(
            out,
            "<circle class=\"{class_name}\" data-orbit=\"{class}\" fill=\"{color}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\"/>",
            0.7 * s
        ),
    };
}

fn zero_marker(out: &mut String, class_name: &str, (x, y): (f64, f64), s: f64) {
    let _ = writeln!(
        out,
        "<path class=\"{class_name}\" stroke=\"#111\" stroke-width=\"1.5\" d=\"M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}\"/>",
        x - s,
        y - s,
        x + s,
        y + s,
        x - s,
        y + s,
        x + s,
        y - s
    );
}

/// Deterministic SVG 1.1 portrait: streamlines, separatrices, pole markers by
/// orbit (triangle, square, then circles) and crosses at zeros.
pub fn render_svg<T: Real>(form: &RationalOneForm<T>, opts: &RenderOptions, eps: T) -> String {
    let theta = lit::<T>(opts.theta);
    let w = opts.window;
    let width = opts.width;
    let height = width * (w.y1 - w.y0) / (w.x1 - w.x0);
    let canvas = Canvas { window: w, width, height };
    let clip = w.expanded(1.2);
    let stream = StreamOptions { window: Some(w.expanded(1.5)), ..opts.stream.clone() };

    let special = form.special_points();
    let (nx, ny) = opts.grid;
    let mut seeds = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let z = Complex::new(
                w.x0 + (w.x1 - w.x0) * (i as f64 + 0.5) / nx as f64,
                w.y0 + (w.y1 - w.y0) * (j as f64 + 0.5) / ny as f64,
            );
            let p = SpherePoint::Finite(Complex::new(lit::<T>(z.re), lit::<T>(z.im)));
            if special.iter().all(|s| s.chordal(&p) > lit::<T>(10.0 * stream.guard)) {
                seeds.push(p);
            }
        }
    }
    let streamlines: Vec<Trajectory<T>> = seeds
        .par_iter()
        .map(|p| {
            let fwd = integrate(form, *p, theta, &stream, None, TrajectoryKind::Streamline);
            let back = integrate(form, *p, theta, &StreamOptions { backward: true, ..stream.clone() }, None, TrajectoryKind::Streamline);
            let mut points: Vec<Complex<T>> = back.points.into_iter().rev().collect();
            points.extend(fwd.points.into_iter().skip(1));
            Trajectory { points, length: fwd.length + back.length, ..fwd }
        })
        .collect();
    let seps = if opts.separatrices { separatrices(form, theta, &opts.stream) } else { Vec::new() };
    let classes = pole_classes(form, eps);

    let sphere = opts.sphere.then(|| SphereView { cx: width + 20.0 + height / 2.0, cy: height / 2.0, r: height / 2.0 - 10.0 });
    let total_width = if opts.sphere { width + 40.0 + height } else { width };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{total_width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {total_width:.2} {height:.2}\">"
    );
    let _ = writeln!(out, "<defs><clipPath id=\"plane\"><rect x=\"0\" y=\"0\" width=\"{width:.2}\" height=\"{height:.2}\"/></clipPath></defs>");
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{total_width:.2}\" height=\"{height:.2}\" fill=\"#ffffff\"/>");
    out.push_str("<g clip-path=\"url(#plane)\">\n");
    out.push_str("<g class=\"streamlines\" fill=\"none\" stroke=\"#8aa6c1\" stroke-width=\"0.8\">\n");
    for t in &streamlines {
        polyline_runs(&mut out, &plane_runs(t, &canvas, &clip));
    }
    out.push_str("</g>\n<g class=\"separatrices\" fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"1.6\">\n");
    for t in &seps {
        polyline_runs(&mut out, &plane_runs(t, &canvas, &clip));
    }
    out.push_str("</g>\n<g class=\"markers\">\n");
    for (p, class) in form.poles().iter().zip(&classes) {
        if let Some(z) = p.finite() {
            pole_marker(&mut out, "pole", canvas.px(to_c64(z)), *class, 6.0);
        }
    }
    for q in form.zeros() {
        if let Some(z) = q.finite() {
            zero_marker(&mut out, "zero", canvas.px(to_c64(z)), 4.0);
        }
    }
    out.push_str("</g>\n</g>\n");
    let at_infinity = form
        .poles()
        .iter()
        .zip(&classes)
        .find(|(p, _)| p.is_infinite())
        .map(|(_, c)| format!("pole (orbit {c})"))
        .or_else(|| form.zeros().iter().any(|q| q.is_infinite()).then(|| "zero".to_string()));
    if let Some(note) = at_infinity {
        let _ = writeln!(out, "<text class=\"infinity-note\" x=\"8\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">∞: {note}</text>", height - 8.0);
    }
    if let Some(view) = &sphere {
        let _ = writeln!(
            out,
            "<g class=\"sphere\"><circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"#444\"/>",
            view.cx, view.cy, view.r
        );
        out.push_str("<g fill=\"none\" stroke=\"#8aa6c1\" stroke-width=\"0.6\">\n");
        for t in &streamlines {
            polyline_runs(&mut out, &view.runs(t));
        }
        out.push_str("</g>\n<g fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"1.2\">\n");
        for t in &seps {
            polyline_runs(&mut out, &view.runs(t));
        }
        out.push_str("</g>\n");
        for (p, class) in form.poles().iter().zip(&classes) {
            if let Some(q) = view.point(p) {
                pole_marker(&mut out, "pole-sphere", q, *class, 4.0);
            }
        }
        for z in form.zeros() {
            if let Some(q) = view.point(z) {
                zero_marker(&mut out, "zero-sphere", q, 3.0);
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paper::two_pole;

    #[test]
    fn sample_is_reciprocal() {
        let eta = two_pole::<f64>(Complex::new(0.0, 1.0), 1e-8).unwrap();
        let s = sample_grid(&eta, &Window::square(1.0), 3, 3, 0.0);
        let at_one = s.iter().find(|s| s.at == Complex::new(1.0, 0.0)).unwrap();
        assert!((at_one.value - Complex::new(0.0, -1.0)).norm() < 1e-15);
        // the zero-free, pole-at-0 form loses only the center sample
        assert_eq!(s.len(), 8);
    }

    #[test]
    fn window_parsing() {
        let w: Window = "-3,3,-2,2".parse().unwrap();
        assert_eq!(w, Window { x0: -3.0, x1: 3.0, y0: -2.0, y1: 2.0 });
        assert!("1,0,0,1".parse::<Window>().is_err());
        assert!("1,2,3".parse::<Window>().is_err());
    }
}
