//! Finite-truncation matrix engine in the bare Fock⊗spin basis.
//!
//! Builds the free, Jaynes-Cummings, and Rabi Hamiltonians plus the two
//! control operators X⊗1 and P⊗1 as dense matrices, propagates
//! piecewise-constant controls by Hermitian eigendecomposition, and computes
//! the rotating-wave time average in closed form. The excitation number
//! C = a†a + σ†σ commutes with H_JC, so every 2×2 block fully contained in
//! the truncation has *exact* eigenvalues — this module is the brute-force
//! oracle against which the closed forms of [`crate::model`] and
//! [`crate::coupling`] are verified.
//!
//! Basis order: index 2n is |n⟩⊗e₁, index 2n+1 is |n⟩⊗e₋₁, n = 0..n_fock.
//!
//! Coupling normalization: H_JC = ω(a†a+½) + (Ω/2)σ_z + g(aσ† + a†σ),
//! i.e. the ladder expansion of (g/√2)(X⊗σ_x − P⊗σ_y). This is the
//! normalization under which the closed-form spectrum ω(n+1) ± f_n holds.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, LevelIndex, ModelParams, Sign};

pub const SCHEMA_VERSION: u32 = 1;

/// Operators that sandwich X/P should keep their support this many Fock
/// levels below the cutoff; truncation artifacts live inside the band.
pub const GUARD_BAND: i32 = 10;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Flat index of |n⟩⊗e_s in the interleaved basis.
pub fn basis_index(n: i32, spin: Sign) -> usize {
    debug_assert!(n >= 0);
    2 * n as usize
        + match spin {
            Sign::Plus => 0,  // e₁
            Sign::Minus => 1, // e₋₁
        }
}

/// A dense operator on the truncated space of dimension 2(n_fock+1).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    n_fock: i32,
    mat: DMatrix<Complex64>,
}

impl TruncatedOperator {
    fn zeros(n_fock: i32) -> Result<Self> {
        if n_fock < 1 {
            return Err(Error::Domain(format!("n_fock must be >= 1, got {n_fock}")));
        }
        let dim = 2 * (n_fock as usize + 1);
        Ok(Self { n_fock, mat: DMatrix::zeros(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_fock(&self) -> i32 {
        self.n_fock
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// max |M_jk − conj(M_kj)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                worst = worst.max((self.mat[(j, k)] - self.mat[(k, j)].conj()).norm());
            }
        }
        worst
    }

    /// max-abs entry.
    pub fn max_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise difference, same truncation required.
    pub fn sub(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        if self.n_fock != other.n_fock {
            return Err(Error::Dimension(format!(
                "operator truncations differ: {} vs {}",
                self.n_fock, other.n_fock
            )));
        }
        Ok(Self { n_fock: self.n_fock, mat: &self.mat - &other.mat })
    }

    /// Serialize to the documented JSON schema: dimension, basis order, and
    /// row-major (re, im) entry pairs.
    pub fn to_json(&self) -> String {
        let dump = OperatorDump {
            schema_version: SCHEMA_VERSION,
            dim: self.dim(),
            n_fock: self.n_fock,
            basis: BASIS_DESCRIPTION.to_string(),
            entries: self.mat.transpose().iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string_pretty(&dump).expect("operator dump serialization cannot fail")
    }
}

const BASIS_DESCRIPTION: &str = "interleaved: index 2n = |n>⊗e1, 2n+1 = |n>⊗e-1";

#[derive(Debug, Serialize, Deserialize)]
struct OperatorDump {
    schema_version: u32,
    dim: usize,
    n_fock: i32,
    basis: String,
    /// Row-major [re, im] pairs.
    entries: Vec<[f64; 2]>,
}

/// H₀ = ω(a†a + ½) + (Ω/2)σ_z — diagonal in the bare basis.
pub fn build_h0(params: &ModelParams, n_fock: i32) -> Result<TruncatedOperator> {
    let mut op = TruncatedOperator::zeros(n_fock)?;
    for n in 0..=n_fock {
        let osc = params.omega() * (n as f64 + 0.5);
        for spin in [Sign::Plus, Sign::Minus] {
            let idx = basis_index(n, spin);
            op.mat[(idx, idx)] = Complex64::new(osc + spin.as_f64() * params.capital_omega() / 2.0, 0.0);
        }
    }
    Ok(op)
}

/// H_JC = H₀ + g(aσ† + a†σ). Blocks with total excitation ≤ n_fock are
/// exact: no matrix element couples them to the truncated tail.
pub fn build_jc(params: &ModelParams, n_fock: i32) -> Result<TruncatedOperator> {
    let mut op = build_h0(params, n_fock)?;
    let g = params.g();
    // a σ† : |n+1⟩⊗e₋₁ → √(n+1) |n⟩⊗e₁ (and the adjoint)
    for n in 0..n_fock {
        let up = basis_index(n, Sign::Plus);
        let dn = basis_index(n + 1, Sign::Minus);
        let v = Complex64::new(g * ((n + 1) as f64).sqrt(), 0.0);
        op.mat[(up, dn)] = v;
        op.mat[(dn, up)] = v;
    }
    Ok(op)
}

/// H_R = H₀ + g(a + a†)(σ + σ†) — the Rabi Hamiltonian; differs from
/// [`build_jc`] exactly by the counter-rotating part g(aσ + a†σ†).
pub fn build_rabi(params: &ModelParams, n_fock: i32) -> Result<TruncatedOperator> {
    let mut op = build_jc(params, n_fock)?;
    let g = params.g();
    // a†σ† : |n⟩⊗e₋₁ → √(n+1) |n+1⟩⊗e₁ (and the adjoint)
    for n in 0..n_fock {
        let lo = basis_index(n, Sign::Minus);
        let hi = basis_index(n + 1, Sign::Plus);
        let v = Complex64::new(g * ((n + 1) as f64).sqrt(), 0.0);
        op.mat[(hi, lo)] = v;
        op.mat[(lo, hi)] = v;
    }
    Ok(op)
}

/// Which bosonic quadrature a control operator acts with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlKind {
    /// X = (a + a†)/√2.
    X,
    /// P = i(a† − a)/√2.
    P,
}

/// The control operator X⊗1 or P⊗1: tridiagonal in the Fock index,
/// identity on spin.
pub fn build_control(kind: ControlKind, n_fock: i32) -> Result<TruncatedOperator> {
    let mut op = TruncatedOperator::zeros(n_fock)?;
    let rt2 = std::f64::consts::SQRT_2;
    for n in 0..n_fock {
        let amp = ((n + 1) as f64).sqrt() / rt2;
        for spin in [Sign::Plus, Sign::Minus] {
            let lo = basis_index(n, spin);
            let hi = basis_index(n + 1, spin);
            match kind {
                ControlKind::X => {
                    // ⟨n+1|X|n⟩ = √(n+1)/√2, real symmetric
                    op.mat[(hi, lo)] = Complex64::new(amp, 0.0);
                    op.mat[(lo, hi)] = Complex64::new(amp, 0.0);
                }
                ControlKind::P => {
                    // ⟨n+1|P|n⟩ = i√(n+1)/√2 with P = i(a†−a)/√2
                    op.mat[(hi, lo)] = I * amp;
                    op.mat[(lo, hi)] = -I * amp;
                }
            }
        }
    }
    Ok(op)
}

/// A normalized state on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_fock: i32,
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Build from raw amplitudes, normalizing; rejects (near-)zero input.
    pub fn from_amplitudes(n_fock: i32, amps: Vec<Complex64>) -> Result<Self> {
        if n_fock < 1 {
            return Err(Error::Domain(format!("n_fock must be >= 1, got {n_fock}")));
        }
        let dim = 2 * (n_fock as usize + 1);
        if amps.len() != dim {
            return Err(Error::Dimension(format!("expected {dim} amplitudes, got {}", amps.len())));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes must be finite".into()));
        }
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if norm < 1e-12 {
            return Err(Error::Domain("cannot normalize a (near-)zero state".into()));
        }
        Ok(Self { n_fock, amps: v / Complex64::new(norm, 0.0) })
    }

    /// The bare basis state |n⟩⊗e_s.
    pub fn basis_state(n_fock: i32, n: i32, spin: Sign) -> Result<Self> {
        if n < 0 || n > n_fock {
            return Err(Error::Domain(format!("Fock index {n} outside [0, {n_fock}]")));
        }
        let dim = 2 * (n_fock as usize + 1);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[basis_index(n, spin)] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(n_fock, amps)
    }

    /// The dressed eigenstate |n,ν⟩ embedded in the truncation; requires the
    /// whole 2×2 block inside (level.n + 1 ≤ n_fock).
    pub fn dressed_state(params: &ModelParams, n_fock: i32, level: LevelIndex) -> Result<Self> {
        level.validate(params)?;
        if level.n + 1 > n_fock {
            return Err(Error::Domain(format!(
                "dressed level n={} needs n+1 <= n_fock={n_fock}",
                level.n
            )));
        }
        let dim = 2 * (n_fock as usize + 1);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        if level.is_spurious() {
            amps[basis_index(0, Sign::Minus)] = Complex64::new(1.0, 0.0);
        } else {
            let (x, y) = model::eigenvector_coeffs(params, level)?;
            amps[basis_index(level.n, Sign::Plus)] = Complex64::new(x, 0.0);
            amps[basis_index(level.n + 1, Sign::Minus)] = Complex64::new(y, 0.0);
        }
        Self::from_amplitudes(n_fock, amps)
    }

    pub fn n_fock(&self) -> i32 {
        self.n_fock
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// |amplitude|² of the bare basis state |n⟩⊗e_s.
    pub fn population(&self, n: i32, spin: Sign) -> f64 {
        self.amps[basis_index(n, spin)].norm_sqr()
    }

    /// Total |amplitude|² inside the excitation block ℋ_n
    /// (span{|n⟩⊗e₁, |n+1⟩⊗e₋₁}; ℋ₋₁ = span{|0⟩⊗e₋₁}).
    pub fn block_population(&self, n: i32) -> Result<f64> {
        if n < -1 || n + 1 > self.n_fock {
            return Err(Error::Domain(format!("block index {n} outside truncation")));
        }
        if n == -1 {
            return Ok(self.population(0, Sign::Minus));
        }
        Ok(self.population(n, Sign::Plus) + self.population(n + 1, Sign::Minus))
    }

    pub fn to_json(&self) -> String {
        let dump = StateDump {
            schema_version: SCHEMA_VERSION,
            dim: self.dim(),
            n_fock: self.n_fock,
            basis: BASIS_DESCRIPTION.to_string(),
            amplitudes: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string_pretty(&dump).expect("state dump serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StateDump {
    schema_version: u32,
    dim: usize,
    n_fock: i32,
    basis: String,
    amplitudes: Vec<[f64; 2]>,
}

/// |⟨psi|phi⟩| ∈ [0, 1].
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    if psi.dim() != phi.dim() {
        return Err(Error::Dimension(format!("state dims differ: {} vs {}", psi.dim(), phi.dim())));
    }
    Ok(psi.amps.dotc(&phi.amps).norm().min(1.0))
}

/// ‖psi − phi‖ (the distance the controllability definition is stated in).
pub fn norm_distance(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    if psi.dim() != phi.dim() {
        return Err(Error::Dimension(format!("state dims differ: {} vs {}", psi.dim(), phi.dim())));
    }
    Ok((&psi.amps - &phi.amps).norm())
}

/// One constant-control interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub duration: f64,
    pub u1: f64,
    pub u2: f64,
}

/// A piecewise-constant control schedule.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PiecewiseControl {
    pub segments: Vec<ControlSegment>,
}

impl PiecewiseControl {
    pub fn new(segments: Vec<ControlSegment>) -> Result<Self> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.duration > 0.0) || !s.duration.is_finite() {
                return Err(Error::Domain(format!(
                    "segment {i}: duration must be positive and finite, got {}",
                    s.duration
                )));
            }
            if !s.u1.is_finite() || !s.u2.is_finite() {
                return Err(Error::NonFinite(format!("segment {i}: control values must be finite")));
            }
        }
        Ok(Self { segments })
    }

    /// Parse the schedule file format: one segment per line,
    /// `duration u1 u2`, blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "schedule line {}: expected 'duration u1 u2', got {raw:?}",
                    lineno + 1
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("schedule line {}: bad number {s:?}", lineno + 1)))
            };
            segments.push(ControlSegment { duration: num(fields[0])?, u1: num(fields[1])?, u2: num(fields[2])? });
        }
        Self::new(segments)
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Check the admissible-control bound u₁, u₂ ∈ [0, c]; propagation
    /// itself accepts any real controls.
    pub fn validate_bounds(&self, c: f64) -> Result<()> {
        for (i, s) in self.segments.iter().enumerate() {
            for u in [s.u1, s.u2] {
                if !(0.0..=c).contains(&u) {
                    return Err(Error::Domain(format!("segment {i}: control {u} outside [0, {c}]")));
                }
            }
        }
        Ok(())
    }
}

/// Final state plus per-segment diagnostics.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub state: StateVector,
    /// |‖ψ‖ − 1| after each segment (before renormalization — none is done).
    pub unitarity_defects: Vec<f64>,
    /// (time, state) at t = 0 and after each segment.
    pub trajectory: Vec<(f64, StateVector)>,
}

/// Apply exp(−i(H + u₁H₁ + u₂H₂)Δt) per segment via Hermitian
/// eigendecomposition; one decomposition per distinct (u₁, u₂), cached for
/// the duration of the call.
pub fn propagate(
    h: &TruncatedOperator,
    controls: (&TruncatedOperator, &TruncatedOperator),
    schedule: &PiecewiseControl,
    psi0: &StateVector,
) -> Result<PropagationResult> {
    let (h1, h2) = controls;
    let dim = h.dim();
    if h1.dim() != dim || h2.dim() != dim || psi0.dim() != dim {
        return Err(Error::Dimension(format!(
            "inconsistent dimensions: H {dim}, H1 {}, H2 {}, psi0 {}",
            h1.dim(),
            h2.dim(),
            psi0.dim()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("psi0 norm {} not within 1e-10 of 1", psi0.norm())));
    }

    type Eigen = (DVector<f64>, DMatrix<Complex64>);
    let mut cache: HashMap<(u64, u64), Eigen> = HashMap::new();

    let mut psi = psi0.amps.clone();
    let mut defects = Vec::with_capacity(schedule.segments.len());
    let mut trajectory = vec![(0.0, psi0.clone())];
    let mut t = 0.0;
    for seg in &schedule.segments {
        let key = (seg.u1.to_bits(), seg.u2.to_bits());
        if !cache.contains_key(&key) {
            let total = &h.mat
                + h1.mat.scale(seg.u1)
                + h2.mat.scale(seg.u2);
            if total.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("non-finite entry in the total Hamiltonian".into()));
            }
            let eig = nalgebra::SymmetricEigen::new(total);
            cache.insert(key, (eig.eigenvalues, eig.eigenvectors));
        }
        let (evals, q) = &cache[&key];
        // psi ← Q diag(e^{−iλΔt}) Q† psi
        let mut coeffs = q.adjoint() * &psi;
        for (c, &lambda) in coeffs.iter_mut().zip(evals.iter()) {
            *c *= (-I * lambda * seg.duration).exp();
        }
        psi = q * coeffs;
        t += seg.duration;
        defects.push((psi.norm() - 1.0).abs());
        trajectory.push((t, StateVector { n_fock: psi0.n_fock, amps: psi.clone() }));
    }
    Ok(PropagationResult {
        state: StateVector { n_fock: psi0.n_fock, amps: psi },
        unitarity_defects: defects,
        trajectory,
    })
}

/// Time average of the interaction-picture coupling,
/// (1/T)∫₀ᵀ e^{iH₀t}(H_R − H₀)e^{−iH₀t} dt, computed in closed form: each
/// matrix element of the coupling oscillates at the bare frequency
/// difference ν_jk = E⁰_j − E⁰_k, and (1/T)∫₀ᵀ e^{iνt} dt =
/// (e^{iνT} − 1)/(iνT). Co-rotating elements oscillate at ±Δ, the
/// counter-rotating ones at ±(Ω+ω): the latter average away like 1/T.
///
/// Returns the averaged operator and the max-norm of its counter-rotating
/// part.
pub fn rwa_average(params: &ModelParams, n_fock: i32, t_final: f64) -> Result<(TruncatedOperator, f64)> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Domain(format!("averaging time must be positive and finite, got {t_final}")));
    }
    let h0 = build_h0(params, n_fock)?;
    let jc = build_jc(params, n_fock)?;
    let rabi = build_rabi(params, n_fock)?;
    let co = jc.sub(&h0)?;
    let counter = rabi.sub(&jc)?;

    let bare: Vec<f64> = (0..h0.dim()).map(|j| h0.mat[(j, j)].re).collect();
    let phi = |nu: f64| -> Complex64 {
        if nu.abs() * t_final < 1e-300 {
            return Complex64::new(1.0, 0.0);
        }
        ((I * nu * t_final).exp() - 1.0) / (I * nu * t_final)
    };

    let mut averaged = TruncatedOperator::zeros(n_fock)?;
    let mut counter_norm = 0.0f64;
    for j in 0..averaged.dim() {
        for k in 0..averaged.dim() {
            let factor = phi(bare[j] - bare[k]);
            let co_avg = co.mat[(j, k)] * factor;
            let counter_avg = counter.mat[(j, k)] * factor;
            averaged.mat[(j, k)] = co_avg + counter_avg;
            counter_norm = counter_norm.max(counter_avg.norm());
        }
    }
    Ok((averaged, counter_norm))
}
