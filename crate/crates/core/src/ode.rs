//! Embedded Runge-Kutta integration of complex linear systems.
//!
//! Two embedded pairs with FSAL and local extrapolation are available:
//! Dormand-Prince 5(4) and the eighth-order Dormand-Prince 8(5,3). The
//! eighth-order pair is the default; on the long oscillatory runs of this
//! model the damping of the fifth-order pair along the imaginary axis makes
//! the norm drift by roughly `1e5·tol`, far above the requested accuracy.
//!
//! Error control is absolute and per unit step: a step of length `h` is
//! accepted when its estimated local error is at most `tol·min(h, 1)`, in the
//! Euclidean norm (8(5,3)) or the max-norm over real components (5(4)). The
//! local error per step never exceeds `tol`, and errors accumulated over a
//! long run stay proportional to `tol` times the run length instead of the
//! step count.
//!
//! Output is produced exactly at requested sample times by shortening the
//! step that would cross them.

use num_complex::Complex64;

use crate::error::SolverError;

pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Dormand-Prince 5(4), component-wise max-norm error.
    DormandPrince54,
    /// Dormand-Prince 8(5,3), Hairer's blended RMS error estimate.
    #[default]
    DormandPrince853,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub tol: f64,
    pub max_steps: usize,
    pub method: Method,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_steps: 50_000_000, method: Method::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn combine<const N: usize>(y: &[C64; N], h: f64, terms: &[(f64, &[C64; N])]) -> [C64; N] {
    let mut out = *y;
    for (w, k) in terms {
        let hw = h * w;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * hw;
        }
    }
    out
}

// Dormand-Prince 8(5,3) tableau. `DOP853_BHH` weights stages 1, 9 and 12.
const DOP853_C: [f64; 12] = [0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0];
const DOP853_A: [[f64; 11]; 12] = [
    [0.0; 11],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636],
];
const DOP853_B: [f64; 12] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];
const DOP853_E5: [f64; 12] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294];
// Third-order estimator weights on stages 1, 9 and 12.
const DOP853_BHH: [f64; 3] = [0.2440944881889764, 0.7338466882816118, 0.022058823529411766];

#[inline]
fn combine_stages<const N: usize>(y: &[C64; N], h: f64, weights: &[f64], k: &[[C64; N]]) -> [C64; N] {
    let mut out = *y;
    for (w, ki) in weights.iter().zip(k) {
        if *w == 0.0 {
            continue;
        }
        let hw = h * w;
        for (o, kij) in out.iter_mut().zip(ki.iter()) {
            *o += kij * hw;
        }
    }
    out
}

/// Result of one trial step: new state, derivative at the new state and the
/// scaled error (accept when `<= 1`).
struct Trial<const N: usize> {
    y: [C64; N],
    f: [C64; N],
    err: f64,
    evals: usize,
}

fn trial_dp54<const N: usize, F>(rhs: &mut F, t: f64, t_new: f64, y: &[C64; N], k1: &[C64; N], h: f64, tol: f64) -> Trial<N>
where
    F: FnMut(f64, &[C64; N], &mut [C64; N]),
{
    let zero = [C64::new(0.0, 0.0); N];
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (zero, zero, zero, zero, zero, zero);
    let y2 = combine(y, h, &[(A21, k1)]);
    rhs(t + C2 * h, &y2, &mut k2);
    let y3 = combine(y, h, &[(A31, k1), (A32, &k2)]);
    rhs(t + C3 * h, &y3, &mut k3);
    let y4 = combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]);
    rhs(t + C4 * h, &y4, &mut k4);
    let y5 = combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
    rhs(t + C5 * h, &y5, &mut k5);
    let y6 = combine(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
    rhs(t_new, &y6, &mut k6);
    let y_new = combine(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    rhs(t_new, &y_new, &mut k7);

    let mut err: f64 = 0.0;
    for i in 0..N {
        let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        err = err.max(e.re.abs() / tol).max(e.im.abs() / tol);
    }
    Trial { y: y_new, f: k7, err, evals: 6 }
}

fn trial_dop853<const N: usize, F>(rhs: &mut F, t: f64, t_new: f64, y: &[C64; N], k1: &[C64; N], h: f64, tol: f64) -> Trial<N>
where
    F: FnMut(f64, &[C64; N], &mut [C64; N]),
{
    let mut k = [[C64::new(0.0, 0.0); N]; 12];
    k[0] = *k1;
    for s in 1..12 {
        let ys = combine_stages(y, h, &DOP853_A[s][..s], &k[..s]);
        let ts = if s == 11 { t_new } else { t + DOP853_C[s] * h };
        let mut ks = [C64::new(0.0, 0.0); N];
        rhs(ts, &ys, &mut ks);
        k[s] = ks;
    }
    let y_new = combine_stages(y, h, &DOP853_B, &k);
    let mut f_new = [C64::new(0.0, 0.0); N];
    rhs(t_new, &y_new, &mut f_new);

    let (mut err5, mut err3) = (0.0, 0.0);
    for i in 0..N {
        let mut slope = C64::new(0.0, 0.0);
        let mut e5 = C64::new(0.0, 0.0);
        for s in 0..12 {
            slope += k[s][i] * DOP853_B[s];
            e5 += k[s][i] * DOP853_E5[s];
        }
        let e3 = slope - k[0][i] * DOP853_BHH[0] - k[8][i] * DOP853_BHH[1] - k[11][i] * DOP853_BHH[2];
        err5 += (e5 / tol).norm_sqr();
        err3 += (e3 / tol).norm_sqr();
    }
    let deno = err5 + 0.01 * err3;
    let deno = if deno > 0.0 { deno } else { 1.0 };
    let err = h.abs() * err5 / deno.sqrt();
    Trial { y: y_new, f: f_new, err, evals: 12 }
}

/// Integrates `y' = f(t, y)` from `samples[0]` to the last sample, calling
/// `observe(t, y)` at every sample time (including both ends).
///
/// `samples` must be strictly increasing with at least two entries.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    y0: [C64; N],
    samples: &[f64],
    opts: &OdeOptions,
    mut observe: O,
) -> Result<([C64; N], OdeStats), SolverError>
where
    F: FnMut(f64, &[C64; N], &mut [C64; N]),
    O: FnMut(f64, &[C64; N]),
{
    assert!(samples.len() >= 2, "need at least start and end sample");
    let tol = opts.tol;
    let (order, min_fac, max_fac) = match opts.method {
        Method::DormandPrince54 => (5.0, 0.2, 5.0),
        Method::DormandPrince853 => (8.0, 0.333, 6.0),
    };
    let mut stats = OdeStats::default();
    let t_end = *samples.last().unwrap();
    let mut t = samples[0];
    let mut y = y0;
    observe(t, &y);

    let mut k1 = [C64::new(0.0, 0.0); N];
    rhs(t, &y, &mut k1);
    stats.rhs_evals += 1;

    let mut h = initial_step(&y, &k1, t_end - t, tol);
    let mut next_sample = 1;

    while next_sample < samples.len() {
        let target = samples[next_sample];
        let remaining = target - t;
        let hits_target = h >= remaining;
        let step = if hits_target { remaining } else { h };

        let tiny = 1e-14 * t.abs().max(1.0);
        if step < tiny && !hits_target {
            return Err(SolverError::StepSizeUnderflow { t, h: step });
        }
        if stats.steps + stats.rejected >= opts.max_steps {
            return Err(SolverError::TooManySteps { t, max_steps: opts.max_steps });
        }

        let t_new = if hits_target { target } else { t + step };
        let step_tol = tol * step.min(1.0);
        let trial = match opts.method {
            Method::DormandPrince54 => trial_dp54(&mut rhs, t, t_new, &y, &k1, step, step_tol),
            Method::DormandPrince853 => trial_dop853(&mut rhs, t, t_new, &y, &k1, step, step_tol),
        };
        stats.rhs_evals += trial.evals;
        let err = trial.err;
        if !err.is_finite() {
            if trial.y.iter().any(|z| !z.is_finite()) && step < tiny {
                return Err(SolverError::NonFinite(t));
            }
            stats.rejected += 1;
            h = step * 0.1;
            continue;
        }

        let factor = if err == 0.0 { max_fac } else { (0.9 * err.powf(-1.0 / order)).clamp(min_fac, max_fac) };
        if err <= 1.0 {
            stats.steps += 1;
            t = t_new;
            y = trial.y;
            k1 = trial.f;
            if hits_target {
                observe(t, &y);
                next_sample += 1;
                // Keep the step the controller would have used had the sample
                // time not truncated it.
                h = h.max(step * factor);
            } else {
                h = step * factor;
            }
        } else {
            stats.rejected += 1;
            h = step * factor.min(1.0);
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(SolverError::StepSizeUnderflow { t, h });
        }
    }
    Ok((y, stats))
}

fn initial_step<const N: usize>(y: &[C64; N], f: &[C64; N], span: f64, tol: f64) -> f64 {
    let y_norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let f_norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let h = if y_norm > 1e-10 && f_norm > 1e-10 { 0.01 * y_norm / f_norm } else { 1e-6 };
    (h * tol.powf(0.2).max(1e-3) * 10.0).min(span).max(1e-12 * span)
}
