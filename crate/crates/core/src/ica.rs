//! Independent crossing approximation.
//!
//! The bare energies `−κt`, `Δ`, `κt` cross pairwise at `t = Δ/κ` (pair
//! 2–3), `t = 0` (pair 1–3) and `t = −Δ/κ` (pair 1–2). For `|Δ|` large
//! against every coupling the three crossings are far apart in time and each
//! acts as an isolated two-level Landau-Zener event with adiabatic transfer
//! probability `1 − exp(−2πΩ²/α)`, `α` being the relative slope of the two
//! bare energies (`κ` or `2κ`).
//!
//! Populations are composed incoherently along the schedule: at a crossing
//! of `i` and `j` with transfer probability `p`, the bare populations mix as
//! `P_i ← (1−p)P_i + pP_j` and symmetrically for `P_j`; between crossings
//! each `P_k` decays at `2Γ_k`. Starting from `|1⟩`:
//!
//! - `Δ < 0`: the 2–3 crossing meets empty states, the 1–3 crossing moves
//!   `p₁₃` into `|3⟩`, and the 1–2 crossing no longer touches `|3⟩`, so
//!   `P₃ = p₁₃` up to decay of `|1⟩` and `|3⟩`.
//! - `Δ > 0`: `|2⟩` receives `p₁₂` at `−Δ/κ`, holds it for `2Δ/κ` while
//!   decaying at `2Γ₂`, and hands it to `|3⟩` at `Δ/κ`, giving
//!   `P₃ ≈ p₁₂ p₂₃ e^{−2Γ₂·2Δ/κ}` plus the small share routed through the
//!   1–3 crossing.
//!
//! The corrections are of relative order `ξ = max Ω / |Δ|`. Predictions
//! with `|Δ|` below a multiple of `max Ω` (5 by default) are tagged
//! [`Regime::Invalid`].

use std::f64::consts::PI;

use crate::error::ParamError;
use crate::model::SystemParams;

/// Default validity threshold: the approximation is tagged valid when
/// `|Δ| ≥ 5·max Ω`.
pub const DEFAULT_VALIDITY_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    NegativeDetuning,
    PositiveDetuning,
    Invalid,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NegativeDetuning => "negative",
            Regime::PositiveDetuning => "positive",
            Regime::Invalid => "invalid",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A pairwise crossing of bare energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    /// Levels, numbered from 1, `pair.0 < pair.1`.
    pub pair: (usize, usize),
    pub time: f64,
    /// `|d(E_i − E_j)/dt|`.
    pub relative_slope: f64,
    pub coupling: f64,
    pub p_adiabatic: f64,
    /// All three bare energies meet here (`Δ = 0`).
    pub triple: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcaPrediction {
    pub p3: f64,
    /// `max Ω / |Δ|`, infinite at `Δ = 0`.
    pub xi: f64,
    pub regime: Regime,
}

/// Adiabatic transfer probability of an isolated linear crossing with
/// coupling `Ω` and relative slope `α`: `1 − exp(−2πΩ²/α)`.
pub fn lz_probability(coupling: f64, relative_slope: f64) -> Result<f64, ParamError> {
    if !relative_slope.is_finite() || relative_slope <= 0.0 {
        return Err(ParamError::Slope(relative_slope));
    }
    if !coupling.is_finite() || coupling < 0.0 {
        return Err(ParamError::Coupling { name: "coupling", value: coupling });
    }
    Ok(-(-2.0 * PI * coupling * coupling / relative_slope).exp_m1())
}

fn event(pair: (usize, usize), time: f64, slope: f64, coupling: f64) -> CrossingEvent {
    let p_adiabatic = lz_probability(coupling, slope).expect("validated parameters");
    CrossingEvent { pair, time, relative_slope: slope, coupling, p_adiabatic, triple: false }
}

/// Time-ordered crossings of the bare energies.
///
/// For `Δ = 0` a single event marks the triple crossing at `t = 0`; it
/// carries the 1–3 coupling and slope.
pub fn crossing_schedule(params: &SystemParams) -> Result<Vec<CrossingEvent>, ParamError> {
    let p = params.validated()?;
    let k = p.kappa;
    let c23 = event((2, 3), p.delta / k, k, p.omega23);
    let c13 = event((1, 3), 0.0, 2.0 * k, p.omega13);
    let c12 = event((1, 2), -p.delta / k, k, p.omega12);
    Ok(if p.delta < 0.0 {
        vec![c23, c13, c12]
    } else if p.delta > 0.0 {
        vec![c12, c13, c23]
    } else {
        vec![CrossingEvent { triple: true, ..c13 }]
    })
}

/// Prediction with the default validity threshold.
pub fn ica_predict(params: &SystemParams) -> Result<IcaPrediction, ParamError> {
    ica_predict_with(params, DEFAULT_VALIDITY_FACTOR)
}

/// Prediction tagged valid when `|Δ| ≥ validity_factor · max Ω`.
pub fn ica_predict_with(params: &SystemParams, validity_factor: f64) -> Result<IcaPrediction, ParamError> {
    let p = params.validated()?;
    let schedule = crossing_schedule(&p)?;
    let rates = p.decay_rates().map(|g| 2.0 * g);

    let mut pops = [1.0, 0.0, 0.0];
    let mut now = -p.horizon;
    let decay_until = |pops: &mut [f64; 3], now: &mut f64, t: f64| {
        let dt = t - *now;
        for (pk, r) in pops.iter_mut().zip(rates) {
            *pk *= (-r * dt).exp();
        }
        *now = t;
    };
    for ev in schedule.iter().filter(|ev| ev.time.abs() <= p.horizon) {
        decay_until(&mut pops, &mut now, ev.time);
        let (i, j) = (ev.pair.0 - 1, ev.pair.1 - 1);
        let q = ev.p_adiabatic;
        let (pi, pj) = (pops[i], pops[j]);
        pops[i] = (1.0 - q) * pi + q * pj;
        pops[j] = (1.0 - q) * pj + q * pi;
    }
    decay_until(&mut pops, &mut now, p.horizon);

    let max_coupling = p.max_coupling();
    let xi = if p.delta == 0.0 {
        if max_coupling == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        max_coupling / p.delta.abs()
    };
    let regime = if p.delta == 0.0 || p.delta.abs() < validity_factor * max_coupling {
        Regime::Invalid
    } else if p.delta < 0.0 {
        Regime::NegativeDetuning
    } else {
        Regime::PositiveDetuning
    };
    Ok(IcaPrediction { p3: pops[2].clamp(0.0, 1.0), xi, regime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{self, OdeOptions, C64};
    use crate::propagate::transfer_efficiency;

    fn params(delta: f64, omega13: f64) -> SystemParams {
        SystemParams { delta, omega13, ..SystemParams::default() }
    }

    /// Two-level crossing `H = [[a, Ω], [Ω, −a]]`, `a = −αt/2`, over
    /// `[−T, T]` with `κT = 100`. Starts in the upper adiabatic state and
    /// returns the final population of the upper adiabatic state, which
    /// removes the `O(Ω/αT)` ripple of the bare populations at finite `T`.
    fn two_level_transfer(coupling: f64, slope: f64, kappa: f64) -> f64 {
        let horizon = 100.0 / kappa;
        let upper = |t: f64| {
            let phi = 0.5 * coupling.atan2(-0.5 * slope * t);
            [C64::new(phi.cos(), 0.0), C64::new(phi.sin(), 0.0)]
        };
        let opts = OdeOptions { tol: 1e-11, ..OdeOptions::default() };
        let (c, _) = ode::integrate(
            |t, c: &[C64; 2], dc: &mut [C64; 2]| {
                let a = -0.5 * slope * t;
                dc[0] = C64::new(0.0, -1.0) * (a * c[0] + coupling * c[1]);
                dc[1] = C64::new(0.0, -1.0) * (coupling * c[0] - a * c[1]);
            },
            upper(-horizon),
            &[-horizon, horizon],
            &opts,
            |_, _| {},
        )
        .unwrap();
        let u = upper(horizon);
        (u[0].conj() * c[0] + u[1].conj() * c[1]).norm_sqr()
    }

    #[test]
    fn lz_examples() {
        assert_eq!(lz_probability(0.0, 0.1).unwrap(), 0.0);
        let p = lz_probability(0.5, 0.2).unwrap();
        assert!((p - (1.0 - (-PI * 0.25 / 0.1).exp())).abs() < 1e-15);
        assert!((p - 0.99961).abs() < 1e-5);
        assert!(1.0 - lz_probability(1.0, 0.1).unwrap() < 1e-27);
        assert!(matches!(lz_probability(1.0, 0.0), Err(ParamError::Slope(_))));
        assert!(matches!(lz_probability(1.0, -0.1), Err(ParamError::Slope(_))));
        assert!(lz_probability(-1.0, 0.1).is_err());
    }

    #[test]
    fn lz_matches_two_level_propagation() {
        let kappa = 0.1;
        for omega in [0.1, 0.3, 0.5, 1.0] {
            for slope in [kappa, 2.0 * kappa] {
                let exact = two_level_transfer(omega, slope, kappa);
                let lz = lz_probability(omega, slope).unwrap();
                assert!((exact - lz).abs() < 1e-3, "Ω={omega} α={slope}: {exact} vs {lz}");
            }
        }
    }

    #[test]
    fn schedule_order_follows_detuning_sign() {
        let s = crossing_schedule(&params(-2.0, 0.5)).unwrap();
        let got: Vec<_> = s.iter().map(|e| (e.pair, e.time)).collect();
        assert_eq!(got, vec![((2, 3), -20.0), ((1, 3), 0.0), ((1, 2), 20.0)]);
        let s = crossing_schedule(&params(2.0, 0.5)).unwrap();
        let got: Vec<_> = s.iter().map(|e| (e.pair, e.time)).collect();
        assert_eq!(got, vec![((1, 2), -20.0), ((1, 3), 0.0), ((2, 3), 20.0)]);
        for e in &s {
            let expected = if e.pair == (1, 3) { 0.2 } else { 0.1 };
            assert_eq!(e.relative_slope, expected);
            assert!((0.0..=1.0).contains(&e.p_adiabatic));
        }
        let s = crossing_schedule(&params(0.0, 0.5)).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].triple && s[0].time == 0.0);
        assert_eq!(ica_predict(&params(0.0, 0.5)).unwrap().regime, Regime::Invalid);
    }

    #[test]
    fn negative_detuning_transfers_through_direct_crossing() {
        let pred = ica_predict(&params(-8.0, 0.5)).unwrap();
        assert_eq!(pred.regime, Regime::NegativeDetuning);
        let expected = 1.0 - (-PI * 0.25 / 0.1).exp();
        assert!((pred.p3 - expected).abs() < 1e-12);
        assert!((pred.xi - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn positive_detuning_goes_through_middle_state() {
        let pred = ica_predict(&params(8.0, 0.0)).unwrap();
        assert_eq!(pred.regime, Regime::PositiveDetuning);
        assert!((pred.p3 - 1.0).abs() < 1e-12);
        let exact = transfer_efficiency(&params(8.0, 0.0), 1e-10).unwrap();
        assert!((pred.p3 - exact).abs() < 0.02, "{} vs {exact}", pred.p3);

        let lossy = SystemParams { gamma2: 0.025, ..params(8.0, 0.0) };
        let pred = ica_predict(&lossy).unwrap();
        assert!((pred.p3 - (-8.0f64).exp()).abs() < 1e-12);
        let exact = transfer_efficiency(&lossy, 1e-10).unwrap();
        assert!((pred.p3 - exact).abs() < 0.02, "{} vs {exact}", pred.p3);
    }

    #[test]
    fn reduces_to_closed_forms() {
        // Δ > 0 with a 1–3 coupling: p₁₂ p₂₃ e^{−2Γ₂·2Δ/κ} plus the share
        // through the 1–3 crossing that survives the 2–3 crossing.
        let p = SystemParams { delta: 6.0, omega12: 0.1, omega23: 0.2, omega13: 0.3, gamma2: 0.002, ..SystemParams::default() };
        let p12 = lz_probability(0.1, 0.1).unwrap();
        let p23 = lz_probability(0.2, 0.1).unwrap();
        let p13 = lz_probability(0.3, 0.2).unwrap();
        let expected = p12 * p23 * (-2.0 * 0.002 * 120.0f64).exp() + (1.0 - p12) * p13 * (1.0 - p23);
        assert!((ica_predict(&p).unwrap().p3 - expected).abs() < 1e-14);

        // Δ < 0: only the 1–3 crossing matters, whatever the middle decay.
        for gamma2 in [0.0, 0.01, 0.5] {
            let p = SystemParams { delta: -6.0, omega12: 0.3, omega13: 0.2, gamma2, ..SystemParams::default() };
            assert!((ica_predict(&p).unwrap().p3 - lz_probability(0.2, 0.2).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn positive_side_degrades_with_middle_decay() {
        let mut last = f64::INFINITY;
        for gamma2 in [0.0, 0.001, 0.005, 0.025, 0.1] {
            let p = SystemParams { gamma2, ..params(6.0, 0.5) };
            let p3 = ica_predict(&p).unwrap().p3;
            assert!(p3 < last);
            last = p3;
        }
    }

    #[test]
    fn crossings_outside_the_window_do_not_happen() {
        let p = SystemParams { delta: 5.0, horizon: 20.0, ..params(0.0, 0.0) };
        assert_eq!(ica_predict(&p).unwrap().p3, 0.0);
    }

    #[test]
    fn validity_threshold() {
        let p = params(-4.0, 0.5);
        assert_eq!(ica_predict(&p).unwrap().regime, Regime::Invalid);
        assert_eq!(ica_predict_with(&p, 3.0).unwrap().regime, Regime::NegativeDetuning);
        assert_eq!(ica_predict(&params(5.0, 0.5)).unwrap().regime, Regime::PositiveDetuning);
    }
}
