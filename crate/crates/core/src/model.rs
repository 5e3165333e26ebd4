//! Model parameters and the three-level Hamiltonian.
//!
//! ```text
//!          ⎛ −κt            Ω₁₂e^{−iφ₁₂}   Ω₁₃e^{−iφ₁₃} ⎞
//!   H(t) = ⎜ Ω₁₂e^{+iφ₁₂}   Δ              Ω₂₃e^{−iφ₂₃} ⎟
//!          ⎝ Ω₁₃e^{+iφ₁₃}   Ω₂₃e^{+iφ₂₃}   κt           ⎠
//! ```
//!
//! The dissipative variant subtracts `i·diag(Γ₁, Γ₂, Γ₃)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::ParamError;

/// All parameters of the model.
///
/// Couplings are stored as a non-negative magnitude plus a phase; a negative
/// real coupling is the magnitude with phase `π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Sweep rate of the bare energies `∓κt`.
    pub kappa: f64,
    /// Static energy of `|2⟩`.
    pub delta: f64,
    pub omega12: f64,
    pub omega23: f64,
    pub omega13: f64,
    pub phi12: f64,
    pub phi23: f64,
    pub phi13: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Half-duration `T`; evolution runs over `[−T, T]`.
    pub horizon: f64,
}

impl Default for SystemParams {
    /// Solid-line parameters of the ideal Δ-sweeps: `κ = 0.1`, `κT = 100`,
    /// `Ω₁₂ = Ω₂₃ = 1`, no `|1⟩–|3⟩` coupling, no decay.
    fn default() -> Self {
        Self {
            kappa: 0.1,
            delta: 0.0,
            omega12: 1.0,
            omega23: 1.0,
            omega13: 0.0,
            phi12: 0.0,
            phi23: 0.0,
            phi13: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma3: 0.0,
            horizon: 1000.0,
        }
    }
}

fn normalize_phase(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

impl SystemParams {
    /// Checks the invariants and returns a copy with phases folded into `[0, 2π)`.
    pub fn validated(&self) -> Result<Self, ParamError> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(ParamError::Kappa(self.kappa));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(ParamError::Horizon(self.horizon));
        }
        if !self.delta.is_finite() {
            return Err(ParamError::NonFinite { name: "delta", value: self.delta });
        }
        for (name, value) in [("omega12", self.omega12), ("omega23", self.omega23), ("omega13", self.omega13)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ParamError::Coupling { name, value });
            }
        }
        for (name, value) in [("gamma1", self.gamma1), ("gamma2", self.gamma2), ("gamma3", self.gamma3)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ParamError::Decay { name, value });
            }
        }
        for (name, value) in [("phi12", self.phi12), ("phi23", self.phi23), ("phi13", self.phi13)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        Ok(Self {
            phi12: normalize_phase(self.phi12),
            phi23: normalize_phase(self.phi23),
            phi13: normalize_phase(self.phi13),
            ..*self
        })
    }

    /// The only phase combination the spectrum depends on, `φ₁₂ + φ₂₃ − φ₁₃`.
    pub fn phase_combination(&self) -> f64 {
        self.phi12 + self.phi23 - self.phi13
    }

    pub fn max_coupling(&self) -> f64 {
        self.omega12.max(self.omega23).max(self.omega13)
    }

    pub fn has_decay(&self) -> bool {
        self.gamma1 > 0.0 || self.gamma2 > 0.0 || self.gamma3 > 0.0
    }

    pub fn decay_rates(&self) -> [f64; 3] {
        [self.gamma1, self.gamma2, self.gamma3]
    }

    /// Upper-triangle couplings `(h₁₂, h₁₃, h₂₃)` as complex numbers.
    pub fn couplings(&self) -> (Complex64, Complex64, Complex64) {
        (
            Complex64::from_polar(self.omega12, -self.phi12),
            Complex64::from_polar(self.omega13, -self.phi13),
            Complex64::from_polar(self.omega23, -self.phi23),
        )
    }

    /// Parameters whose top gap equals the bottom gap `ε₂ − ε₃` of `self`:
    /// `Δ → −Δ` and every coupling negated (phase shifted by `π`).
    pub fn reversed(&self) -> Self {
        Self {
            delta: -self.delta,
            phi12: normalize_phase(self.phi12 + std::f64::consts::PI),
            phi23: normalize_phase(self.phi23 + std::f64::consts::PI),
            phi13: normalize_phase(self.phi13 + std::f64::consts::PI),
            ..*self
        }
    }
}

/// Dense 3×3 complex matrix, row-major, with a Hermiticity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix3 {
    entries: [[Complex64; 3]; 3],
    hermitian: bool,
}

impl ComplexMatrix3 {
    /// Wraps arbitrary entries; the flag is set when `M = M†` to within `1e−14`
    /// relative to the largest entry.
    pub fn new(entries: [[Complex64; 3]; 3]) -> Self {
        let scale = entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
        let hermitian = (0..3).all(|i| (0..3).all(|j| (entries[i][j] - entries[j][i].conj()).norm() <= tol));
        Self { entries, hermitian }
    }

    /// Builds a Hermitian matrix from its real diagonal and upper triangle
    /// `(m₀₁, m₀₂, m₁₂)`; the lower triangle is the conjugate.
    pub fn hermitian(diag: [f64; 3], upper: (Complex64, Complex64, Complex64)) -> Self {
        let (a01, a02, a12) = upper;
        let entries = [
            [diag[0].into(), a01, a02],
            [a01.conj(), diag[1].into(), a12],
            [a02.conj(), a12.conj(), diag[2].into()],
        ];
        Self { entries, hermitian: true }
    }

    pub fn entries(&self) -> &[[Complex64; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    pub fn mul_vec(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let m = &self.entries;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    fn with_diagonal_shift(mut self, shift: [Complex64; 3]) -> Self {
        for (k, s) in shift.into_iter().enumerate() {
            self.entries[k][k] += s;
        }
        self.hermitian = self.hermitian && shift.iter().all(|s| s.im == 0.0);
        self
    }
}

/// `H(t)`: diagonal `(−κt, Δ, κt)`, couplings `Ω_ij e^{−iφ_ij}` above the
/// diagonal and their conjugates below.
pub fn hamiltonian_at(params: &SystemParams, t: f64) -> ComplexMatrix3 {
    let kt = params.kappa * t;
    ComplexMatrix3::hermitian([-kt, params.delta, kt], params.couplings())
}

/// `H_D(t) = H(t) − i·diag(Γ₁, Γ₂, Γ₃)`.
pub fn dissipative_hamiltonian_at(params: &SystemParams, t: f64) -> ComplexMatrix3 {
    let shift = params.decay_rates().map(|g| Complex64::new(0.0, -g));
    hamiltonian_at(params, t).with_diagonal_shift(shift)
}

/// Coefficients of the monic cubic `det(λI − H) = c3·λ³ + c2·λ² + c1·λ + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoly {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CharPoly {
    pub fn eval(&self, lambda: f64) -> f64 {
        ((self.c3 * lambda + self.c2) * lambda + self.c1) * lambda + self.c0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c3.abs().max(self.c2.abs()).max(self.c1.abs()).max(self.c0.abs())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c3, self.c2, self.c1, self.c0]
    }
}

/// Closed-form characteristic polynomial of `H(t)` (decay rates ignored).
///
/// ```text
/// λ³ − Δλ² − (Ω₁₂² + Ω₂₃² + Ω₁₃² + κ²t²)λ
///    − 2Ω₁₂Ω₂₃Ω₁₃ cos(φ₁₂ + φ₂₃ − φ₁₃) + (Ω₁₂² − Ω₂₃²)κt + (κ²t² + Ω₁₃²)Δ
/// ```
pub fn char_poly_coeffs(params: &SystemParams, t: f64) -> CharPoly {
    let kt = params.kappa * t;
    let (o12, o23, o13) = (params.omega12, params.omega23, params.omega13);
    let kt2 = kt * kt;
    CharPoly {
        c3: 1.0,
        c2: -params.delta,
        c1: -(o12 * o12 + o23 * o23 + o13 * o13 + kt2),
        c0: -2.0 * o12 * o23 * o13 * params.phase_combination().cos()
            + (o12 * o12 - o23 * o23) * kt
            + (kt2 + o13 * o13) * params.delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn det3(m: &[[Complex64; 3]; 3]) -> Complex64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Oracle: evaluate `det(λI − H)` numerically at four abscissae and solve
    /// the Vandermonde system for the cubic's coefficients.
    fn numeric_char_poly(h: &ComplexMatrix3) -> [f64; 4] {
        let xs = [-2.0, -0.5, 1.0, 3.0];
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let mut m = *h.entries();
                for (k, row) in m.iter_mut().enumerate() {
                    for (l, e) in row.iter_mut().enumerate() {
                        *e = if k == l { Complex64::from(x) - *e } else { -*e };
                    }
                }
                det3(&m).re
            })
            .collect();
        // Lagrange interpolation expanded into monomial coefficients.
        let mut coeffs = [0.0; 4];
        for i in 0..4 {
            let others: Vec<f64> = (0..4).filter(|&j| j != i).map(|j| xs[j]).collect();
            let denom: f64 = others.iter().map(|&x| xs[i] - x).product();
            let (a, b, cc) = (others[0], others[1], others[2]);
            let w = ys[i] / denom;
            coeffs[0] += w;
            coeffs[1] += -w * (a + b + cc);
            coeffs[2] += w * (a * b + a * cc + b * cc);
            coeffs[3] += -w * a * b * cc;
        }
        coeffs
    }

    fn couplings_only(o12: f64, o23: f64, o13: f64) -> SystemParams {
        SystemParams { omega12: o12, omega23: o23, omega13: o13, ..SystemParams::default() }
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let p = couplings_only(0.0, 0.0, 0.0);
        let h = hamiltonian_at(&p, 7.0);
        assert!(h.is_hermitian());
        for i in 0..3 {
            for j in 0..3 {
                let expected = match (i, j) {
                    (0, 0) => c(-(0.1 * 7.0), 0.0),
                    (2, 2) => c(0.1 * 7.0, 0.0),
                    _ => c(0.0, 0.0),
                };
                assert_eq!(h.get(i, j), expected);
            }
        }
    }

    #[test]
    fn symmetric_chain_at_origin() {
        let p = couplings_only(1.0, 1.0, 0.0);
        let h = hamiltonian_at(&p, 0.0);
        let expected = [[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.get(i, j), c(expected[i][j], 0.0), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn phased_coupling_substitution() {
        let p = SystemParams { delta: -2.0, omega12: 1.0, phi12: PI / 2.0, ..couplings_only(1.0, 0.0, 0.0) };
        let h = hamiltonian_at(&p, 10.0);
        assert!((h.get(0, 1) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((h.get(1, 0) - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!([h.get(0, 0).re, h.get(1, 1).re, h.get(2, 2).re], [-1.0, -2.0, 1.0]);
    }

    #[test]
    fn zero_decay_gives_hermitian_hamiltonian() {
        let p = SystemParams { delta: 0.7, omega13: 0.3, ..SystemParams::default() };
        let hd = dissipative_hamiltonian_at(&p, 3.0);
        assert_eq!(hd, hamiltonian_at(&p, 3.0));
        assert!(hd.is_hermitian());
    }

    #[test]
    fn decay_only_on_middle_state() {
        let p = SystemParams { delta: 1.0, gamma2: 0.5, ..couplings_only(0.0, 0.0, 0.0) };
        let hd = dissipative_hamiltonian_at(&p, 0.0);
        assert!(!hd.is_hermitian());
        assert_eq!(hd.get(0, 0), c(0.0, 0.0));
        assert_eq!(hd.get(1, 1), c(1.0, -0.5));
        assert_eq!(hd.get(2, 2), c(0.0, 0.0));

        let p = SystemParams { gamma2: 0.025, ..couplings_only(1.0, 1.0, 0.0) };
        let diff: Vec<Complex64> = (0..9)
            .map(|k| dissipative_hamiltonian_at(&p, 0.0).get(k / 3, k % 3) - hamiltonian_at(&p, 0.0).get(k / 3, k % 3))
            .collect();
        for (k, d) in diff.iter().enumerate() {
            let expected = if k == 4 { c(0.0, -0.025) } else { c(0.0, 0.0) };
            assert_eq!(*d, expected);
        }
    }

    #[test]
    fn char_poly_examples() {
        let p = couplings_only(1.0, 1.0, 0.0);
        assert_eq!(char_poly_coeffs(&p, 0.0).as_array(), [1.0, 0.0, -2.0, 0.0]);

        let p = couplings_only(1.0, 1.0, 1.0);
        let closed = char_poly_coeffs(&p, 0.0).as_array();
        let numeric = numeric_char_poly(&hamiltonian_at(&p, 0.0));
        let frozen = [1.0, 0.0, -3.0, -2.0];
        for k in 0..4 {
            assert!((numeric[k] - frozen[k]).abs() < 1e-12, "oracle coefficient {k}: {}", numeric[k]);
            assert!((closed[k] - frozen[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn char_poly_depends_on_phase_combination_only() {
        let base = SystemParams { delta: 0.4, omega13: 0.6, ..SystemParams::default() };
        let a = SystemParams { phi12: 0.3, phi23: 0.5, phi13: 0.8, ..base };
        let b = SystemParams { phi12: 0.1, phi23: 0.7, phi13: 0.8, ..base };
        let (ca, cb) = (char_poly_coeffs(&a, 2.5), char_poly_coeffs(&b, 2.5));
        for k in 0..4 {
            assert!((ca.as_array()[k] - cb.as_array()[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn validation_rejects_bad_params_and_folds_phases() {
        let bad = [
            SystemParams { kappa: 0.0, ..Default::default() },
            SystemParams { horizon: -1.0, ..Default::default() },
            SystemParams { omega13: -0.1, ..Default::default() },
            SystemParams { gamma2: f64::NAN, ..Default::default() },
            SystemParams { delta: f64::INFINITY, ..Default::default() },
        ];
        for p in bad {
            assert!(p.validated().is_err(), "{p:?}");
        }
        let p = SystemParams { phi12: -PI / 2.0, phi13: 5.0 * PI, ..Default::default() }.validated().unwrap();
        assert!((p.phi12 - 1.5 * PI).abs() < 1e-15);
        assert!((p.phi13 - PI).abs() < 1e-14);
        assert!(p.phi12 >= 0.0 && p.phi12 < TAU);
    }

    #[test]
    fn generic_constructor_detects_hermiticity() {
        let herm = ComplexMatrix3::new([
            [c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
            [c(0.0, -2.0), c(3.0, 0.0), c(1.0, 1.0)],
            [c(0.0, 0.0), c(1.0, -1.0), c(-1.0, 0.0)],
        ]);
        assert!(herm.is_hermitian());
        let mut e = *herm.entries();
        e[1][1] = c(3.0, 0.1);
        assert!(!ComplexMatrix3::new(e).is_hermitian());
    }

    fn params_strategy() -> impl Strategy<Value = SystemParams> {
        (
            0.01f64..2.0,
            -6.0f64..6.0,
            0.0f64..2.0,
            0.0f64..2.0,
            0.0f64..2.0,
            0.0f64..TAU,
            0.0f64..TAU,
            0.0f64..TAU,
            proptest::array::uniform3(0.0f64..0.5),
        )
            .prop_map(|(kappa, delta, omega12, omega23, omega13, phi12, phi23, phi13, g)| SystemParams {
                kappa,
                delta,
                omega12,
                omega23,
                omega13,
                phi12,
                phi23,
                phi13,
                gamma1: g[0],
                gamma2: g[1],
                gamma3: g[2],
                horizon: 100.0 / kappa,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn equal_phase_combinations_give_equal_coefficients(
            p in params_strategy(),
            shift in -3.0f64..3.0,
            t in -50.0f64..50.0,
        ) {
            // Move `shift` from φ₁₂ into φ₂₃: the combination is unchanged.
            let q = SystemParams { phi12: p.phi12 + shift, phi23: p.phi23 - shift, ..p }.validated().unwrap();
            let (a, b) = (char_poly_coeffs(&p, t), char_poly_coeffs(&q, t));
            for k in 0..4 {
                prop_assert!((a.as_array()[k] - b.as_array()[k]).abs() <= 1e-12 * a.max_abs_coeff().max(1.0));
            }
        }

        #[test]
        fn hamiltonian_is_exactly_hermitian(p in params_strategy(), t in -1e3f64..1e3) {
            let h = hamiltonian_at(&p, t);
            prop_assert!(h.is_hermitian());
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(h.get(i, j), h.get(j, i).conj());
                }
            }
        }

        #[test]
        fn dissipative_difference_is_minus_i_gamma(p in params_strategy(), t in -1e3f64..1e3) {
            let (h, hd) = (hamiltonian_at(&p, t), dissipative_hamiltonian_at(&p, t));
            let g = p.decay_rates();
            for i in 0..3 {
                for j in 0..3 {
                    let expected = if i == j { c(0.0, -g[i]) } else { c(0.0, 0.0) };
                    prop_assert_eq!(hd.get(i, j) - h.get(i, j), expected);
                }
            }
        }

        #[test]
        fn closed_form_matches_numeric_determinant(p in params_strategy(), t in -20.0f64..20.0) {
            let closed = char_poly_coeffs(&p, t);
            let numeric = numeric_char_poly(&hamiltonian_at(&p, t));
            let scale = closed.max_abs_coeff().max(1.0);
            for k in 0..4 {
                prop_assert!((closed.as_array()[k] - numeric[k]).abs() <= 1e-9 * scale);
            }
        }
    }
}
