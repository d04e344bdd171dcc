//! Brute-force integration of the thermal qubit master equation.
//!
//! Everything here works with explicit 2×2 matrices and the generic Lindblad
//! form `dρ/dt = -i[H, ρ] + Σ_k r_k (L_k ρ L_k† - {L_k† L_k, ρ}/2)`, with no
//! use of the closed-form relaxation laws. It exists to check those laws.
//!
//! Basis ordering: index 0 is the excited state (σ_z = +1), index 1 the
//! ground state, so `σ₊ = |e⟩⟨g|` has its single entry at `[0][1]`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qubit;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A general complex 2×2 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorMatrix(pub [[C64; 2]; 2]);

impl OperatorMatrix {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        OperatorMatrix([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn sigma_y() -> Self {
        Self::new(ZERO, -I, I, ZERO)
    }

    pub fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, -ONE)
    }

    /// Raising operator `|e⟩⟨g|`.
    pub const fn sigma_plus() -> Self {
        Self::new(ZERO, ONE, ZERO, ZERO)
    }

    /// Lowering operator `|g⟩⟨e|`.
    pub const fn sigma_minus() -> Self {
        Self::new(ZERO, ZERO, ONE, ZERO)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for OperatorMatrix {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for OperatorMatrix {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-ONE)
    }
}

impl Mul for OperatorMatrix {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `σ_x² = 1`, `σ_x σ_y = i σ_z` and `[σ₊, σ₋] = σ_z`, to machine precision.
pub fn pauli_algebra_holds() -> bool {
    let (x, y, z) = (OperatorMatrix::sigma_x(), OperatorMatrix::sigma_y(), OperatorMatrix::sigma_z());
    let id = OperatorMatrix::identity();
    let plus_minus = OperatorMatrix::sigma_plus().commutator(&OperatorMatrix::sigma_minus());
    (x * x - id).max_abs() < 1e-15
        && (x * y - z.scale(I)).max_abs() < 1e-15
        && (plus_minus - z).max_abs() < 1e-15
}

/// Hermitian 2×2 matrix stored as two real diagonal entries and the upper
/// off-diagonal element, so Hermiticity holds by construction.
///
/// Physical states have unit trace and nonnegative eigenvalues; the
/// regression-theorem operand `(σ_x ρ + ρ σ_x)/2` uses the same
/// representation but is traceless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityMatrix {
    /// `⟨e|ρ|e⟩`
    pub excited: f64,
    /// `⟨g|ρ|g⟩`
    pub ground: f64,
    /// `⟨e|ρ|g⟩`
    pub coherence: C64,
}

impl DensityMatrix {
    pub fn new(excited: f64, ground: f64, coherence: C64) -> Self {
        DensityMatrix { excited, ground, coherence }
    }

    pub fn ground_state() -> Self {
        Self::new(0.0, 1.0, ZERO)
    }

    pub fn maximally_mixed() -> Self {
        Self::new(0.5, 0.5, ZERO)
    }

    /// Gibbs state of `H = ω σ_z / 2`.
    pub fn gibbs(omega: f64, temperature: f64) -> Result<Self> {
        let z = qubit::equilibrium_polarization(omega, temperature)?.value() * 2.0;
        Ok(Self::new((1.0 + z) / 2.0, (1.0 - z) / 2.0, ZERO))
    }

    /// Pure state from Bloch-sphere angles.
    pub fn pure(theta: f64, phi: f64) -> Self {
        let (a, b) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        Self::new(a * a, b * b, C64::from_polar(a * b, -phi))
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        OperatorMatrix::new(
            C64::new(self.excited, 0.0),
            self.coherence,
            self.coherence.conj(),
            C64::new(self.ground, 0.0),
        )
    }

    /// Hermitian part of `m`.
    pub fn from_matrix(m: &OperatorMatrix) -> Self {
        let m = &m.0;
        Self::new(m[0][0].re, m[1][1].re, (m[0][1] + m[1][0].conj()) * 0.5)
    }

    pub fn trace(&self) -> f64 {
        self.excited + self.ground
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.excited + self.ground);
        let half_gap = (0.25 * (self.excited - self.ground).powi(2) + self.coherence.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Unit trace and positive semidefinite within `tol`.
    pub fn is_state(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol && self.eigenvalues()[0] >= -tol
    }

    /// `Tr[op ρ]`.
    pub fn expect(&self, op: &OperatorMatrix) -> C64 {
        (*op * self.to_matrix()).trace()
    }

    /// `⟨σ_z⟩ / 2`.
    pub fn polarization(&self) -> f64 {
        0.5 * (self.excited - self.ground)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.excited - other.excited)
            .abs()
            .max((self.ground - other.ground).abs())
            .max((self.coherence - other.coherence).norm())
    }

    fn axpy(&self, s: f64, other: &Self) -> Self {
        Self::new(
            self.excited + s * other.excited,
            self.ground + s * other.ground,
            self.coherence + other.coherence * s,
        )
    }
}

/// Generator of the thermal master equation for one qubit at fixed frequency.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    hamiltonian: OperatorMatrix,
    jumps: Vec<(f64, OperatorMatrix)>,
    omega: f64,
    gamma: f64,
}

impl Lindbladian {
    /// Absorption `γ₀ n D[σ₊]` and emission `γ₀ (n+1) D[σ₋]` at
    /// `H = ω σ_z / 2`. `gamma0 = 0` gives unitary dynamics.
    pub fn thermal(omega: f64, temperature: f64, gamma0: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::domain(format!("gamma0 must be >= 0, got {gamma0}")));
        }
        let n = qubit::thermal_occupation(omega, temperature)?;
        Ok(Lindbladian {
            hamiltonian: OperatorMatrix::sigma_z().scale(C64::new(omega / 2.0, 0.0)),
            jumps: vec![
                (gamma0 * n, OperatorMatrix::sigma_plus()),
                (gamma0 * (n + 1.0), OperatorMatrix::sigma_minus()),
            ],
            omega,
            gamma: gamma0 * (2.0 * n + 1.0),
        })
    }

    /// Total population relaxation rate (sum of the jump rates).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Largest RK4 step allowed by [`evolve`]: `min(1/ω, 1/γ) / 50`.
    pub fn max_step(&self) -> f64 {
        let inv_gamma = if self.gamma > 0.0 { 1.0 / self.gamma } else { f64::INFINITY };
        (1.0 / self.omega).min(inv_gamma) / 50.0
    }

    pub fn apply(&self, rho: &OperatorMatrix) -> OperatorMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        for (rate, l) in &self.jumps {
            if *rate == 0.0 {
                continue;
            }
            let ld = l.adjoint();
            let dissipator = *l * *rho * ld - (ld * *l).anticommutator(rho).scale(C64::new(0.5, 0.0));
            out = out + dissipator.scale(C64::new(*rate, 0.0));
        }
        out
    }

    pub fn rhs(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_matrix(&self.apply(&rho.to_matrix()))
    }

    fn rk4_step(&self, rho: &DensityMatrix, h: f64) -> DensityMatrix {
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&rho.axpy(h / 2.0, &k1));
        let k3 = self.rhs(&rho.axpy(h / 2.0, &k2));
        let k4 = self.rhs(&rho.axpy(h, &k3));
        rho.axpy(h / 6.0, &k1)
            .axpy(h / 3.0, &k2)
            .axpy(h / 3.0, &k3)
            .axpy(h / 6.0, &k4)
    }

    /// Propagate over `duration` with uniform steps no longer than `dt`.
    pub fn propagate(&self, rho: &DensityMatrix, duration: f64, dt: f64) -> DensityMatrix {
        let n = step_count(duration, dt);
        if n == 0 {
            return *rho;
        }
        let h = duration / n as f64;
        (0..n).fold(*rho, |acc, _| self.rk4_step(&acc, h))
    }

    /// Liouvillian as a 4×4 matrix acting on row-major `vec(ρ)`.
    fn superoperator(&self) -> Matrix4<C64> {
        let mut sup = Matrix4::zeros();
        for col in 0..4 {
            let mut basis = OperatorMatrix::zero();
            basis.0[col / 2][col % 2] = ONE;
            let image = self.apply(&basis).0;
            for row in 0..4 {
                sup[(row, col)] = image[row / 2][row % 2];
            }
        }
        sup
    }
}

fn step_count(duration: f64, dt: f64) -> usize {
    if duration <= 0.0 {
        return 0;
    }
    // Guard against n*dt landing one ulp short of an exact multiple.
    ((duration / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

/// `dρ/dt` for the thermal qubit master equation.
pub fn lindblad_rhs(rho: &DensityMatrix, omega: f64, temperature: f64, gamma0: f64) -> Result<DensityMatrix> {
    Ok(Lindbladian::thermal(omega, temperature, gamma0)?.rhs(rho))
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

/// Fixed-step RK4 trajectory from `rho0` up to `t_final`.
///
/// If `t_final` is not a multiple of `dt` the step is shrunk uniformly to
/// `t_final / ceil(t_final/dt)`. Fails with [`Error::StepTooLarge`] unless
/// `dt ≤ min(1/ω, 1/γ)/50`.
pub fn evolve(
    rho0: &DensityMatrix,
    omega: f64,
    temperature: f64,
    gamma0: f64,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::domain(format!("t_final must be >= 0, got {t_final}")));
    }
    let lind = Lindbladian::thermal(omega, temperature, gamma0)?;
    let limit = lind.max_step();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let n = step_count(t_final, dt);
    let h = if n == 0 { 0.0 } else { t_final / n as f64 };
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut rho = *rho0;
    times.push(0.0);
    states.push(rho);
    for k in 1..=n {
        rho = lind.rk4_step(&rho, h);
        times.push(k as f64 * h);
        states.push(rho);
    }
    Ok(Trajectory { times, states })
}

/// Stationary state of the Liouvillian, found as its trace-normalised null
/// vector.
pub fn steady_state(omega: f64, temperature: f64, gamma0: f64) -> Result<DensityMatrix> {
    if !(gamma0 > 0.0) {
        return Err(Error::domain("steady state needs gamma0 > 0"));
    }
    let lind = Lindbladian::thermal(omega, temperature, gamma0)?;
    let mut sys = lind.superoperator();
    // The population rows are dependent; swap one for the trace condition.
    for col in 0..4 {
        sys[(0, col)] = ZERO;
    }
    sys[(0, 0)] = ONE;
    sys[(0, 3)] = ONE;
    let rhs = Vector4::new(ONE, ZERO, ZERO, ZERO);
    let v = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::domain("singular Liouvillian"))?;
    let m = OperatorMatrix::new(v[0], v[1], v[2], v[3]);
    Ok(DensityMatrix::from_matrix(&m))
}

/// Default oracle step: a quarter of the [`evolve`] stability limit.
pub fn oracle_step(omega: f64, temperature: f64, gamma0: f64) -> Result<f64> {
    Ok(Lindbladian::thermal(omega, temperature, gamma0)?.max_step() / 4.0)
}

/// Symmetrised stationary correlator `½⟨{σ_x(t), σ_x(t+τ)}⟩` on `tau_grid`,
/// via the regression theorem in state form: propagate
/// `(σ_x ρ_ss + ρ_ss σ_x)/2` with the same Lindbladian and read off `σ_x`.
pub fn correlation_numeric(omega: f64, temperature: f64, gamma0: f64, tau_grid: &[f64]) -> Result<Vec<f64>> {
    let dt = oracle_step(omega, temperature, gamma0)?;
    correlation_numeric_with_step(omega, temperature, gamma0, tau_grid, dt)
}

pub fn correlation_numeric_with_step(
    omega: f64,
    temperature: f64,
    gamma0: f64,
    tau_grid: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    if tau_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("tau grid must be nonnegative and nondecreasing"));
    }
    let lind = Lindbladian::thermal(omega, temperature, gamma0)?;
    let limit = lind.max_step();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let rho_ss = if gamma0 > 0.0 {
        steady_state(omega, temperature, gamma0)?
    } else {
        // Without a bath every diagonal state is stationary; use the Gibbs one.
        DensityMatrix::gibbs(omega, temperature)?
    };
    let sx = OperatorMatrix::sigma_x();
    let rho_m = rho_ss.to_matrix();
    let mut op = DensityMatrix::from_matrix(&(sx * rho_m + rho_m * sx).scale(C64::new(0.5, 0.0)));
    let mut out = Vec::with_capacity(tau_grid.len());
    let mut t = 0.0;
    for &tau in tau_grid {
        op = lind.propagate(&op, tau - t, dt);
        t = tau;
        out.push(op.expect(&sx).re);
    }
    Ok(out)
}

/// Largest deviation of the numeric correlator from `e^{-γτ/2} cos ωτ` over
/// `points` samples of `τ ∈ [0, 10/γ]`, relative to the envelope `e^{-γτ/2}`.
pub fn oracle_discrepancy(omega: f64, temperature: f64, gamma0: f64, points: usize) -> Result<f64> {
    if gamma0 <= 0.0 || points < 2 {
        return Err(Error::domain("oracle comparison needs gamma0 > 0 and at least 2 points"));
    }
    let gamma = Lindbladian::thermal(omega, temperature, gamma0)?.gamma();
    let t_end = 10.0 / gamma;
    let grid: Vec<f64> = (0..points).map(|k| t_end * k as f64 / (points - 1) as f64).collect();
    let numeric = correlation_numeric(omega, temperature, gamma0, &grid)?;
    let mut worst: f64 = 0.0;
    for (tau, c) in grid.iter().zip(numeric) {
        let exact = crate::lgi::correlation_xx(*tau, omega, gamma)?;
        worst = worst.max((c - exact).abs() / (-0.5 * gamma * tau).exp());
    }
    Ok(worst)
}
