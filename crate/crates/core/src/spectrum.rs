//! Instantaneous spectrum and minimum adiabatic gap.
//!
//! Eigenvalues come from the trigonometric solution of the depressed cubic.
//! Writing `H = (tr H / 3)·I + B` with `B` traceless, the characteristic
//! polynomial of `B` is `μ³ + pμ + q` with `p = −½ tr B² ≤ 0` and
//! `q = −det B`, and the roots are `2r cos(θ − 2πk/3)` with `r = √(−p/3)`,
//! `cos 3θ = −q / (2r³)`. Both gaps have closed forms in `(r, θ)`:
//! `ε₁ − ε₂ = 2√3 r sin(π/3 − θ)` and `ε₂ − ε₃ = 2√3 r sin θ`.

use std::f64::consts::{FRAC_PI_3, PI};

use thiserror::Error;

use crate::model::{ComplexMatrix3, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("eigenvalues_sorted requires a Hermitian matrix")]
pub struct NotHermitian;

/// Instantaneous eigenvalues at time `t`, `eps1 ≥ eps2 ≥ eps3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub t: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

impl SpectrumPoint {
    pub fn top_gap(&self) -> f64 {
        self.eps1 - self.eps2
    }

    pub fn bottom_gap(&self) -> f64 {
        self.eps2 - self.eps3
    }
}

/// Minimum of a gap over `[−T, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapResult {
    pub gap: f64,
    pub t_min: f64,
    /// `gap / √κ`; values of order one or below signal a breakdown of
    /// adiabatic following.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapOptions {
    /// Number of uniformly spaced scan points over `[−T, T]` (at least 3).
    pub scan_points: usize,
    /// Golden-section refinement stops once `κ·(b − a)` falls below this.
    pub refine_tol: f64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self { scan_points: 4001, refine_tol: 1e-8 }
    }
}

/// Depressed-cubic data: eigenvalues are `shift + 2r cos(θ − 2πk/3)`.
#[derive(Debug, Clone, Copy)]
struct TrigCubic {
    shift: f64,
    r: f64,
    theta: f64,
}

impl TrigCubic {
    fn new(shift: f64, p: f64, q: f64) -> Self {
        let r = (-p / 3.0).max(0.0).sqrt();
        let r3 = r * r * r;
        let theta = if r3 > 0.0 {
            (-q / (2.0 * r3)).clamp(-1.0, 1.0).acos() / 3.0
        } else {
            0.0
        };
        Self { shift, r, theta }
    }

    fn eigenvalues(&self) -> [f64; 3] {
        let two_r = 2.0 * self.r;
        let e1 = self.shift + two_r * self.theta.cos();
        let e3 = self.shift + two_r * (self.theta + 2.0 * FRAC_PI_3).cos();
        let e2 = self.shift + two_r * (self.theta - 2.0 * FRAC_PI_3).cos();
        let mut e = [e1, e2, e3];
        e.sort_by(|a, b| b.total_cmp(a));
        e
    }

    fn top_gap(&self) -> f64 {
        (2.0 * 3f64.sqrt() * self.r * (FRAC_PI_3 - self.theta).sin()).max(0.0)
    }

    fn bottom_gap(&self) -> f64 {
        (2.0 * 3f64.sqrt() * self.r * self.theta.sin()).max(0.0)
    }
}

fn cubic_from_matrix(h: &ComplexMatrix3) -> TrigCubic {
    let m = h.entries();
    let shift = h.trace().re / 3.0;
    let d = [m[0][0].re - shift, m[1][1].re - shift, m[2][2].re - shift];
    let (a01, a02, a12) = (m[0][1], m[0][2], m[1][2]);
    let off = a01.norm_sqr() + a02.norm_sqr() + a12.norm_sqr();
    let p = -0.5 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) - off;
    let det = d[0] * d[1] * d[2] + 2.0 * (a01 * a12 * a02.conj()).re
        - d[0] * a12.norm_sqr()
        - d[1] * a02.norm_sqr()
        - d[2] * a01.norm_sqr();
    TrigCubic::new(shift, p, -det)
}

fn cubic_from_params(params: &SystemParams, t: f64) -> TrigCubic {
    let kt = params.kappa * t;
    let shift = params.delta / 3.0;
    let d = [-kt - shift, params.delta - shift, kt - shift];
    let (o12, o23, o13) = (params.omega12, params.omega23, params.omega13);
    let (s12, s23, s13) = (o12 * o12, o23 * o23, o13 * o13);
    let p = -0.5 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) - (s12 + s23 + s13);
    let det = d[0] * d[1] * d[2] + 2.0 * o12 * o23 * o13 * params.phase_combination().cos()
        - d[0] * s23
        - d[1] * s13
        - d[2] * s12;
    TrigCubic::new(shift, p, -det)
}

/// Real eigenvalues of a Hermitian 3×3 matrix in descending order.
pub fn eigenvalues_sorted(h: &ComplexMatrix3) -> Result<(f64, f64, f64), NotHermitian> {
    if !h.is_hermitian() {
        return Err(NotHermitian);
    }
    let [e1, e2, e3] = cubic_from_matrix(h).eigenvalues();
    Ok((e1, e2, e3))
}

/// Spectrum of `H(t)` evaluated from the parameters (phases enter only via
/// `φ₁₂ + φ₂₃ − φ₁₃`).
pub fn spectrum_at(params: &SystemParams, t: f64) -> SpectrumPoint {
    let [eps1, eps2, eps3] = cubic_from_params(params, t).eigenvalues();
    SpectrumPoint { t, eps1, eps2, eps3 }
}

/// `ε₁(t) − ε₂(t)`.
pub fn gap_top(params: &SystemParams, t: f64) -> f64 {
    cubic_from_params(params, t).top_gap()
}

/// `ε₂(t) − ε₃(t)`.
pub fn gap_bottom(params: &SystemParams, t: f64) -> f64 {
    cubic_from_params(params, t).bottom_gap()
}

/// Minimum of `ε₁ − ε₂` over `[−T, T]` with default scan settings.
pub fn min_gap(params: &SystemParams) -> GapResult {
    min_gap_with(params, &GapOptions::default())
}

pub fn min_gap_with(params: &SystemParams, opts: &GapOptions) -> GapResult {
    minimize_gap(params, opts, |t| gap_top(params, t))
}

/// Minimum of `ε₂ − ε₃` over `[−T, T]`: the gap guarding the reverse
/// transfer `|3⟩ → |1⟩` along the lowest adiabatic state.
pub fn min_gap_reverse(params: &SystemParams) -> GapResult {
    min_gap_reverse_with(params, &GapOptions::default())
}

pub fn min_gap_reverse_with(params: &SystemParams, opts: &GapOptions) -> GapResult {
    minimize_gap(params, opts, |t| gap_bottom(params, t))
}

fn minimize_gap(params: &SystemParams, opts: &GapOptions, f: impl Fn(f64) -> f64) -> GapResult {
    let horizon = params.horizon;
    let (t_min, gap) = scan_and_refine(&f, -horizon, horizon, opts.scan_points, opts.refine_tol / params.kappa);
    GapResult { gap, t_min, margin: gap / params.kappa.sqrt() }
}

/// Global minimum of `f` on `[a, b]`: uniform scan, then golden-section
/// search on the bracket around the best scan point until its width is
/// below `width_tol`. Ties go to the smallest abscissa.
fn scan_and_refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, points: usize, width_tol: f64) -> (f64, f64) {
    let n = points.max(3);
    let at = |i: usize| if i == n - 1 { b } else { a + (b - a) * (i as f64) / ((n - 1) as f64) };
    let mut best = (0usize, f(a));
    for i in 1..n {
        let v = f(at(i));
        if v < best.1 {
            best = (i, v);
        }
    }
    let (i, v) = best;
    if v == 0.0 {
        return (at(i), 0.0);
    }
    let lo = at(i.saturating_sub(1));
    let hi = at((i + 1).min(n - 1));
    let (x, fx) = golden_section(f, lo, hi, width_tol);
    if fx < v || (fx == v && x < at(i)) {
        (x, fx)
    } else {
        (at(i), v)
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, width_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Bracket shrinks by 1/φ per iteration; 200 iterations exhaust f64.
    for _ in 0..200 {
        if (b - a) <= width_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Evenly spaced samples of the spectrum over `[−T, T]`.
pub fn spectrum_scan(params: &SystemParams, points: usize) -> Vec<SpectrumPoint> {
    let n = points.max(2);
    let t0 = -params.horizon;
    (0..n)
        .map(|i| {
            let t = if i == n - 1 { params.horizon } else { t0 + 2.0 * params.horizon * i as f64 / (n - 1) as f64 };
            spectrum_at(params, t)
        })
        .collect()
}

/// `φ₁₂ + φ₂₃ − φ₁₃` values `2πk/n` for `k = 0..n`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}
