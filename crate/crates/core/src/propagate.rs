//! Time evolution over `[−T, T]`.
//!
//! Three propagators share the adaptive integrator in [`crate::ode`]:
//!
//! - [`propagate_schrodinger`]: `i ċ = H(t) c`,
//! - [`propagate_nonhermitian`]: `i ċ = H_D(t) c`, norm decays,
//! - [`propagate_lindblad`]: master equation on `{|1⟩,|2⟩,|3⟩,|E⟩}` where the
//!   sink `|E⟩` collects every external state. Jump operators are
//!   `√γ_j |E⟩⟨j|` with `γ_j = 2Γ_j`, so the main-subspace block follows the
//!   same dynamics as the non-Hermitian propagator.
//!
//! All three integrate in the interaction picture of the bare energies:
//! `c_j = e^{−iθ_j(t)} a_j` with `θ = (−κt²/2, Δt, κt²/2)`. The fast phase
//! winding in the wings `|κt| ≫ Ω` then multiplies only the couplings, and
//! an uncoupled state is integrated exactly.

use std::cell::Cell;

use num_complex::Complex64;

use crate::error::SolverError;
use crate::model::SystemParams;
use crate::ode::{self, OdeOptions, OdeStats, C64};

const I: C64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: C64 = Complex64 { re: 0.0, im: 0.0 };

/// Pure amplitudes over `|1⟩, |2⟩, |3⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub amplitudes: [C64; 3],
}

impl StateVector {
    /// Bare state `|k⟩`, `k ∈ {1, 2, 3}`.
    pub fn basis(k: usize) -> Self {
        assert!((1..=3).contains(&k), "bare states are numbered 1..=3");
        let mut amplitudes = [ZERO; 3];
        amplitudes[k - 1] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> [f64; 3] {
        self.amplitudes.map(|c| c.norm_sqr())
    }
}

/// Density operator over `|1⟩, |2⟩, |3⟩` and the aggregated sink `|E⟩`
/// (index 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    pub entries: [[C64; 4]; 4],
}

impl DensityMatrix4 {
    /// `|k⟩⟨k|`, `k ∈ {1, 2, 3}`.
    pub fn basis(k: usize) -> Self {
        Self::pure(&StateVector::basis(k))
    }

    pub fn pure(psi: &StateVector) -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = psi.amplitudes[i] * psi.amplitudes[j].conj();
            }
        }
        Self { entries }
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[i][i].re).sum()
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.entries[0][0].re, self.entries[1][1].re, self.entries[2][2].re]
    }

    pub fn sink_population(&self) -> f64 {
        self.entries[3][3].re
    }

    /// Hermitian, unit trace within `1e−8`, and `ρ + 1e−8·I` positive definite
    /// (equivalently every eigenvalue `≥ −1e−8`).
    pub fn validate(&self) -> Result<(), SolverError> {
        let e = &self.entries;
        for i in 0..4 {
            for j in 0..4 {
                if !e[i][j].is_finite() || (e[i][j] - e[j][i].conj()).norm() > 1e-10 {
                    return Err(SolverError::InitialDensity(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-8 {
            return Err(SolverError::InitialDensity(format!("trace {tr}")));
        }
        if !self.is_positive(1e-8) {
            return Err(SolverError::InitialDensity("not positive semidefinite".into()));
        }
        Ok(())
    }

    /// Cholesky factorization of `ρ + floor·I`.
    fn is_positive(&self, floor: f64) -> bool {
        let mut l = [[ZERO; 4]; 4];
        for j in 0..4 {
            let mut d = self.entries[j][j].re + floor;
            for k in 0..j {
                d -= l[j][k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j][j] = d.into();
            for i in j + 1..4 {
                let mut s = self.entries[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k].conj();
                }
                l[i][j] = s / d;
            }
        }
        true
    }

    fn to_flat(self) -> [C64; 16] {
        let mut out = [ZERO; 16];
        for i in 0..4 {
            out[4 * i..4 * i + 4].copy_from_slice(&self.entries[i]);
        }
        out
    }

    fn from_flat(flat: &[C64; 16]) -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row.copy_from_slice(&flat[4 * i..4 * i + 4]);
        }
        Self { entries }
    }
}

/// One trajectory sample. `norm` is the main-subspace probability
/// (`Σ|c_k|²` or `ρ₁₁ + ρ₂₂ + ρ₃₃`); `sink` is `ρ_EE` and zero for pure
/// states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub populations: [f64; 3],
    pub norm: f64,
    pub sink: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult<S> {
    pub final_state: S,
    /// Uniform samples from `−T` to `+T` inclusive.
    pub trajectory: Vec<Sample>,
    pub stats: OdeStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Local error bound per step, in `[1e−12, 1e−4]`.
    pub tol: f64,
    /// Number of uniformly spaced trajectory samples (at least 2).
    pub samples: usize,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, samples: 2001, max_steps: OdeOptions::default().max_steps }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn check(&self) -> Result<OdeOptions, SolverError> {
        if !(1e-12..=1e-4).contains(&self.tol) {
            return Err(SolverError::Tolerance(self.tol));
        }
        Ok(OdeOptions { tol: self.tol, max_steps: self.max_steps, ..OdeOptions::default() })
    }
}

fn sample_times(horizon: f64, count: usize) -> Vec<f64> {
    let n = count.max(2);
    (0..n)
        .map(|i| match i {
            0 => -horizon,
            i if i == n - 1 => horizon,
            i => -horizon + 2.0 * horizon * i as f64 / (n - 1) as f64,
        })
        .collect()
}

/// Bare-energy phases `θ_j(t)`; the sink has energy zero.
#[inline]
fn bare_phases(kappa: f64, delta: f64, t: f64) -> [f64; 3] {
    let half = 0.5 * kappa * t * t;
    [-half, delta * t, half]
}

/// Couplings `V_jk e^{i(θ_j − θ_k)}` for the upper triangle, ordered
/// `(12, 13, 23)`.
///
/// The phase factors are taken relative to the last anchor time, where they
/// were evaluated exactly; stage times of one step sit close together, so
/// most calls only need [`cis_small`] of the increment.
#[derive(Clone)]
struct Couplings {
    kappa: f64,
    delta: f64,
    h12: C64,
    h13: C64,
    h23: C64,
    anchor: Cell<(f64, C64, C64)>,
}

/// Largest phase increment handed to [`cis_small`].
const MAX_INCREMENT: f64 = 2.0;

impl Couplings {
    fn new(params: &SystemParams) -> Self {
        let (h12, h13, h23) = params.couplings();
        let mut c = Self { kappa: params.kappa, delta: params.delta, h12, h13, h23, anchor: Cell::default() };
        c.anchor = Cell::new(c.exact(-params.horizon));
        c
    }

    fn exact(&self, t: f64) -> (f64, C64, C64) {
        let th = bare_phases(self.kappa, self.delta, t);
        (t, C64::from_polar(1.0, th[0] - th[1]), C64::from_polar(1.0, th[1] - th[2]))
    }

    #[inline]
    fn at(&self, t: f64) -> (C64, C64, C64) {
        let (ta, a12, a23) = self.anchor.get();
        let dt = t - ta;
        // θ₁ − θ₂ and θ₂ − θ₃ are quadratic in t; the increments factor
        // exactly, free of cancellation.
        let mean = 0.5 * self.kappa * (t + ta);
        let d12 = -dt * (mean + self.delta);
        let d23 = dt * (self.delta - mean);
        let (e12, e23) = if d12.abs() <= MAX_INCREMENT && d23.abs() <= MAX_INCREMENT {
            (a12 * cis_small(d12), a23 * cis_small(d23))
        } else {
            let fresh = self.exact(t);
            self.anchor.set(fresh);
            (fresh.1, fresh.2)
        };
        (self.h12 * e12, self.h13 * (e12 * e23), self.h23 * e23)
    }
}

/// `e^{ix}` for `|x| ≤ 2` from truncated Taylor series; the first omitted
/// terms are below `2^26/26! ≈ 1.6e−19`.
#[inline]
fn cis_small(x: f64) -> C64 {
    const C: [f64; 13] = [
        1.0,
        -1.0 / 2.0,
        1.0 / 24.0,
        -1.0 / 720.0,
        1.0 / 40320.0,
        -1.0 / 3628800.0,
        1.0 / 479001600.0,
        -1.0 / 87178291200.0,
        1.0 / 20922789888000.0,
        -1.0 / 6402373705728000.0,
        1.0 / 2432902008176640000.0,
        -1.0 / 1.1240007277776077e21,
        1.0 / 6.204484017332394e23,
    ];
    const S: [f64; 13] = [
        1.0,
        -1.0 / 6.0,
        1.0 / 120.0,
        -1.0 / 5040.0,
        1.0 / 362880.0,
        -1.0 / 39916800.0,
        1.0 / 6227020800.0,
        -1.0 / 1307674368000.0,
        1.0 / 355687428096000.0,
        -1.0 / 121645100408832000.0,
        1.0 / 51090942171709440000.0,
        -1.0 / 2.585201673888498e22,
        1.0 / 1.5511210043330986e25,
    ];
    let x2 = x * x;
    let mut c = C[12];
    let mut s = S[12];
    for k in (0..12).rev() {
        c = c * x2 + C[k];
        s = s * x2 + S[k];
    }
    C64::new(c, s * x)
}

/// Right-hand side `−i(V_I(t) − i·diag(decay)) a`.
struct Generator {
    couplings: Couplings,
    decay: [f64; 3],
}

impl Generator {
    fn new(params: &SystemParams, decay: [f64; 3]) -> Self {
        Self { couplings: Couplings::new(params), decay }
    }

    #[inline]
    fn apply(&self, t: f64, a: &[C64; 3], da: &mut [C64; 3]) {
        let (v12, v13, v23) = self.couplings.at(t);
        let va = [
            v12 * a[1] + v13 * a[2],
            v12.conj() * a[0] + v23 * a[2],
            v13.conj() * a[0] + v23.conj() * a[1],
        ];
        for k in 0..3 {
            da[k] = C64::new(va[k].im, -va[k].re) - self.decay[k] * a[k];
        }
    }
}

/// `a_j = e^{sign·iθ_j(t)} c_j`; `sign = 1` enters the interaction picture.
fn rotate(params: &SystemParams, t: f64, sign: f64, c: &[C64; 3]) -> [C64; 3] {
    let th = bare_phases(params.kappa, params.delta, t);
    [0, 1, 2].map(|k| c[k] * C64::from_polar(1.0, sign * th[k]))
}

fn check_initial(initial: &StateVector) -> Result<(), SolverError> {
    let n = initial.norm_sqr();
    if !n.is_finite() || (n - 1.0).abs() > 1e-10 {
        return Err(SolverError::InitialNorm(n));
    }
    Ok(())
}

fn propagate_pure(
    params: &SystemParams,
    initial: &StateVector,
    opts: &SolverOptions,
    decay: [f64; 3],
) -> Result<PropagationResult<StateVector>, SolverError> {
    let params = params.validated()?;
    let ode_opts = opts.check()?;
    check_initial(initial)?;
    let generator = Generator::new(&params, decay);
    let times = sample_times(params.horizon, opts.samples);
    let mut trajectory = Vec::with_capacity(times.len());
    let t0 = -params.horizon;
    let (a_final, stats) = ode::integrate(
        |t, a: &[C64; 3], da: &mut [C64; 3]| generator.apply(t, a, da),
        rotate(&params, t0, 1.0, &initial.amplitudes),
        &times,
        &ode_opts,
        |t, c| {
            let populations = c.map(|z| z.norm_sqr());
            trajectory.push(Sample { t, populations, norm: populations.iter().sum(), sink: 0.0 });
        },
    )?;
    let amplitudes = rotate(&params, params.horizon, -1.0, &a_final);
    Ok(PropagationResult { final_state: StateVector { amplitudes }, trajectory, stats })
}

/// Integrates `i ċ = H(t) c` from `−T` to `T`. Decay rates are ignored.
pub fn propagate_schrodinger(
    params: &SystemParams,
    initial: &StateVector,
    tol: f64,
) -> Result<PropagationResult<StateVector>, SolverError> {
    propagate_schrodinger_with(params, initial, &SolverOptions::with_tol(tol))
}

pub fn propagate_schrodinger_with(
    params: &SystemParams,
    initial: &StateVector,
    opts: &SolverOptions,
) -> Result<PropagationResult<StateVector>, SolverError> {
    propagate_pure(params, initial, opts, [0.0; 3])
}

/// Integrates `i ċ = H_D(t) c` from `−T` to `T`.
pub fn propagate_nonhermitian(
    params: &SystemParams,
    initial: &StateVector,
    tol: f64,
) -> Result<PropagationResult<StateVector>, SolverError> {
    propagate_nonhermitian_with(params, initial, &SolverOptions::with_tol(tol))
}

pub fn propagate_nonhermitian_with(
    params: &SystemParams,
    initial: &StateVector,
    opts: &SolverOptions,
) -> Result<PropagationResult<StateVector>, SolverError> {
    propagate_pure(params, initial, opts, params.decay_rates())
}

/// Lindblad evolution on the main subspace plus sink with rates `γ_j = 2Γ_j`.
pub fn propagate_lindblad(
    params: &SystemParams,
    initial: &DensityMatrix4,
    tol: f64,
) -> Result<PropagationResult<DensityMatrix4>, SolverError> {
    propagate_lindblad_with(params, initial, &SolverOptions::with_tol(tol))
}

pub fn propagate_lindblad_with(
    params: &SystemParams,
    initial: &DensityMatrix4,
    opts: &SolverOptions,
) -> Result<PropagationResult<DensityMatrix4>, SolverError> {
    let params = params.validated()?;
    let ode_opts = opts.check()?;
    initial.validate()?;
    let rates = params.decay_rates().map(|g| 2.0 * g);
    let couplings = Couplings::new(&params);
    let times = sample_times(params.horizon, opts.samples);
    let mut trajectory = Vec::with_capacity(times.len());

    let rhs = |t: f64, rho: &[C64; 16], drho: &mut [C64; 16]| {
        let (v12, v13, v23) = couplings.at(t);
        let h: [[C64; 4]; 4] = [
            [ZERO, v12, v13, ZERO],
            [v12.conj(), ZERO, v23, ZERO],
            [v13.conj(), v23.conj(), ZERO, ZERO],
            [ZERO; 4],
        ];
        // −i[H, ρ]
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += h[i][k] * rho[4 * k + j] - rho[4 * i + k] * h[k][j];
                }
                drho[4 * i + j] = -I * acc;
            }
        }
        // γ_j (|E⟩⟨j|ρ|j⟩⟨E| − ½{|j⟩⟨j|, ρ})
        for (j, &gamma) in rates.iter().enumerate() {
            if gamma == 0.0 {
                continue;
            }
            drho[15] += gamma * rho[5 * j];
            for k in 0..4 {
                drho[4 * j + k] -= 0.5 * gamma * rho[4 * j + k];
                drho[4 * k + j] -= 0.5 * gamma * rho[4 * k + j];
            }
        }
    };

    let rho0 = rotate_density(&params, -params.horizon, 1.0, initial);
    let (flat, stats) = ode::integrate(rhs, rho0.to_flat(), &times, &ode_opts, |t, rho| {
        let populations = [rho[0].re, rho[5].re, rho[10].re];
        trajectory.push(Sample { t, populations, norm: populations.iter().sum(), sink: rho[15].re });
    })?;
    let final_state = rotate_density(&params, params.horizon, -1.0, &DensityMatrix4::from_flat(&flat));
    Ok(PropagationResult { final_state, trajectory, stats })
}

/// `ρ_jk ↦ e^{sign·i(θ_j − θ_k)} ρ_jk` with `θ_E = 0`.
fn rotate_density(params: &SystemParams, t: f64, sign: f64, rho: &DensityMatrix4) -> DensityMatrix4 {
    let th = bare_phases(params.kappa, params.delta, t);
    let th = [th[0], th[1], th[2], 0.0];
    let mut entries = rho.entries;
    for (j, row) in entries.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            if j != k {
                *e *= C64::from_polar(1.0, sign * (th[j] - th[k]));
            }
        }
    }
    DensityMatrix4 { entries }
}

/// Final population of `|3⟩` at `+T` starting from `|1⟩` at `−T`.
pub fn transfer_efficiency(params: &SystemParams, tol: f64) -> Result<f64, SolverError> {
    let opts = SolverOptions { tol, samples: 2, ..SolverOptions::default() };
    let r = propagate_nonhermitian_with(params, &StateVector::basis(1), &opts)?;
    Ok(r.final_state.populations()[2].clamp(0.0, 1.0))
}
