//! Complex polynomials in ascending coefficient order and their roots.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Drops exactly-zero coefficients of highest degree.
pub fn trim<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(|c| c.norm_sqr() == T::zero()) {
        v.pop();
    }
    v
}

/// Horner evaluation.
pub fn eval<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

pub fn derivative<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * lit::<T>(k as f64))
        .collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots<T: Real>(roots: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut p = vec![Complex::new(T::one(), T::zero())];
    for &r in roots {
        let mut q = vec![Complex::new(T::zero(), T::zero()); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            q[k + 1] = q[k + 1] + c;
            q[k] = q[k] - c * r;
        }
        p = q;
    }
    p
}

/// All roots with multiplicity: companion-matrix eigenvalues followed by Newton polishing.
pub fn roots<T: Real>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let p = trim(coeffs);
    if p.is_empty() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let zeros_at_origin = p.iter().take_while(|c| c.norm_sqr() == T::zero()).count();
    let q = &p[zeros_at_origin..];
    let n = q.len() - 1;
    let mut out = vec![Complex::new(T::zero(), T::zero()); zeros_at_origin];
    if n == 0 {
        return Ok(out);
    }
    let lead = q[n];
    let mut h = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
    for j in 0..n {
        h[0][j] = -q[n - 1 - j] / lead;
    }
    for i in 1..n {
        h[i][i - 1] = Complex::new(T::one(), T::zero());
    }
    balance(&mut h);
    let eig = hessenberg_eigenvalues(h)?;
    let dp = derivative(q);
    for z in eig {
        out.push(newton_polish(q, &dp, z));
    }
    Ok(out)
}

fn newton_polish<T: Real>(p: &[Complex<T>], dp: &[Complex<T>], mut z: Complex<T>) -> Complex<T> {
    let mut r = eval(p, z).norm();
    for _ in 0..3 {
        let d = eval(dp, z);
        if d.norm_sqr() == T::zero() {
            break;
        }
        let cand = z - eval(p, z) / d;
        let rc = eval(p, cand).norm();
        if !(rc < r) {
            break;
        }
        z = cand;
        r = rc;
    }
    z
}

/// Diagonal similarity that equalizes row and column norms.
fn balance<T: Real>(h: &mut [Vec<Complex<T>>]) {
    let n = h.len();
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + h[j][i].norm();
                    r = r + h[i][j].norm();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f = f * radix;
                c = c * sqrdx;
            }
            g = r * radix;
            while c > g {
                f = f / radix;
                c = c / sqrdx;
            }
            if (c + r) / f < lit::<T>(0.95) * s {
                done = false;
                let g = T::one() / f;
                for j in 0..n {
                    h[i][j] = h[i][j] * g;
                }
                for row in h.iter_mut() {
                    row[i] = row[i] * f;
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the shifted QR iteration with deflation.
fn hessenberg_eigenvalues<T: Real>(mut h: Vec<Vec<Complex<T>>>) -> Result<Vec<Complex<T>>> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    let zero = Complex::new(T::zero(), T::zero());
    let norm = h
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.norm())
        .fold(T::zero(), T::max)
        .max(T::min_positive_value());
    let mut hi = n;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        if hi == 1 {
            eig.push(h[0][0]);
            break;
        }
        // Locate the start of the active unreduced block.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == T::zero() { norm } else { s };
            if h[lo][lo - 1].norm() <= T::epsilon() * s {
                h[lo][lo - 1] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 60 * n + 100 {
            return Err(Error::Internal("eigenvalue iteration did not converge".into()));
        }
        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[hi - 1][hi - 1] + Complex::new(h[hi - 1][hi - 2].norm() * lit::<T>(0.75), T::zero())
        } else {
            wilkinson_shift(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1])
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * lit::<T>(4.0)).sqrt();
    let l1 = (tr + disc) / two;
    let l2 = (tr - disc) / two;
    if (l1 - d).norm() <= (l2 - d).norm() { l1 } else { l2 }
}

/// One explicitly shifted QR step on rows/columns `lo..hi` via Givens rotations.
fn qr_step<T: Real>(h: &mut [Vec<Complex<T>>], lo: usize, hi: usize, mu: Complex<T>) {
    for k in lo..hi {
        h[k][k] = h[k][k] - mu;
    }
    let mut rots: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let (x, y) = (h[k][k], h[k + 1][k]);
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == T::zero() {
            (T::one(), Complex::new(T::zero(), T::zero()))
        } else if x.norm() == T::zero() {
            (T::zero(), Complex::new(T::one(), T::zero()))
        } else {
            let xn = x.norm();
            (xn / r, (x / xn) * y.conj() / r)
        };
        for j in k..hi {
            let (u, v) = (h[k][j], h[k + 1][j]);
            h[k][j] = u * c + s * v;
            h[k + 1][j] = -s.conj() * u + v * c;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        for row in h.iter_mut().take((k + 2).min(hi)).skip(lo) {
            let (u, v) = (row[k], row[k + 1]);
            row[k] = u * c + v * s.conj();
            row[k + 1] = -u * s + v * c;
        }
    }
    for k in lo..hi {
        h[k][k] = h[k][k] + mu;
    }
}
