//! Closed-form spectrum of the Jaynes-Cummings Hamiltonian.
//!
//! The total excitation number `C = a†a + σ†σ` commutes with `H_JC`, so the
//! Hamiltonian reduces to 2×2 blocks
//!
//! ```text
//! H_n = ω(n+1)·1 + [[Δ/2, g√(n+1)], [g√(n+1), -Δ/2]]
//! ```
//!
//! on `span{|n⟩⊗e₁, |n+1⟩⊗e₋₁}`, plus the one-dimensional block spanned by
//! the uncoupled state `|0⟩⊗e₋₁` (the "spurious" level). Everything in this
//! module is an exact closed form derived from these blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary sign label, used both for the dressed-branch index ν and for the
/// detuning sign δ(Δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("expected '+' or '-', got {other:?}"))),
        }
    }
}

/// Physical constants of the model: oscillator frequency ω, two-level
/// splitting Ω, and coupling g (ħ = 1 throughout).
///
/// The single source of truth for every formula in the crate. No smallness
/// constraint on the detuning is enforced here; operations whose claims
/// assume |Δ| ≪ ω check it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    capital_omega: f64,
    g: f64,
}

impl ModelParams {
    pub fn new(omega: f64, capital_omega: f64, g: f64) -> Result<Self> {
        if !omega.is_finite() || !capital_omega.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite("model parameters must be finite".into()));
        }
        if omega <= 0.0 || capital_omega <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need omega > 0 and capital_omega > 0, got omega={omega}, capital_omega={capital_omega}"
            )));
        }
        Ok(Self { omega, capital_omega, g })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn capital_omega(&self) -> f64 {
        self.capital_omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Same frequencies, different coupling.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.omega, self.capital_omega, g)
    }

    /// The detuning Δ = Ω − ω.
    pub fn detuning(&self) -> f64 {
        self.capital_omega - self.omega
    }

    /// δ(Δ): `Plus` for Δ ≥ 0, `Minus` for Δ < 0.
    pub fn delta_sign(&self) -> Sign {
        if self.detuning() >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A dressed-level label 𝒏 = (n, ν) with n ≥ −1.
///
/// `n = -1` denotes the spurious level `|0⟩⊗e₋₁`; it is legal only with
/// ν = δ(Δ), which depends on the parameters, so full validity is checked
/// against a [`ModelParams`] at use sites rather than at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelIndex {
    pub n: i32,
    pub nu: Sign,
}

impl LevelIndex {
    pub fn new(n: i32, nu: Sign) -> Result<Self> {
        if n < -1 {
            return Err(Error::InvalidLevel(format!("level index n={n} < -1")));
        }
        Ok(Self { n, nu })
    }

    /// The spurious level (−1, δ(Δ)) for the given parameters.
    pub fn spurious(params: &ModelParams) -> Self {
        Self { n: -1, nu: params.delta_sign() }
    }

    pub fn is_spurious(&self) -> bool {
        self.n == -1
    }

    /// Whether this label belongs to the index set 𝒩 for `params`.
    pub fn is_valid_for(&self, params: &ModelParams) -> bool {
        self.n >= 0 || (self.n == -1 && self.nu == params.delta_sign())
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if self.is_valid_for(params) {
            Ok(())
        } else {
            Err(Error::InvalidLevel(format!(
                "level ({}, {}) not in the index set for delta_sign = {}",
                self.n,
                self.nu,
                params.delta_sign()
            )))
        }
    }

    /// Sign with which `f_n` enters the energy `E_𝒏 = ω(n+1) + sign·f_n`.
    ///
    /// For n ≥ 0 this is ν. The spurious level is the eigenstate `|0⟩⊗e₋₁`
    /// with exact eigenvalue (ω − Ω)/2 = −Δ/2, so its effective sign is
    /// −δ(Δ).
    pub fn energy_sign(&self, params: &ModelParams) -> f64 {
        if self.n == -1 {
            -params.delta_sign().as_f64()
        } else {
            self.nu.as_f64()
        }
    }

    /// Membership in 𝔑₊, the index copy of ℕ used by resonance family
    /// bookkeeping: n-indices whose transition arcs carry `f_n` with a minus
    /// sign. Contains −1 exactly when Δ < 0.
    pub fn in_frak_plus(n: i32, params: &ModelParams) -> bool {
        n >= 0 || (n == -1 && params.delta_sign() == Sign::Minus)
    }

    /// Membership in 𝔑₋; contains −1 exactly when Δ ≥ 0.
    pub fn in_frak_minus(n: i32, params: &ModelParams) -> bool {
        n >= 0 || (n == -1 && params.delta_sign() == Sign::Plus)
    }
}

impl std::fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.n, self.nu)
    }
}

/// Half the gap of the 2×2 block: f_n(g) = ½√(Δ² + 4g²(n+1)).
///
/// For n = −1 this is |Δ|/2 exactly, independent of g.
pub fn f(params: &ModelParams, n: i32) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain(format!("f_n needs n >= -1, got n={n}")));
    }
    let delta = params.detuning();
    // hypot avoids overflow for large n and keeps f exact when one term is 0
    Ok(0.5 * f64::hypot(delta, 2.0 * params.g() * ((n + 1) as f64).sqrt()))
}

/// d f_n / d g = g(n+1)/f_n for f_n ≠ 0; 0 where the derivative degenerates
/// (g = 0 with Δ ≠ 0, or n = −1).
pub fn f_derivative(params: &ModelParams, n: i32) -> Result<f64> {
    let fn_val = f(params, n)?;
    if n == -1 || fn_val == 0.0 {
        return Ok(0.0);
    }
    Ok(params.g() * ((n + 1) as f64) / fn_val)
}

/// Which of the two natural labelings of the spectrum to use.
///
/// They coincide except at Δ = 0, where `Magnitude` orders each pair by
/// energy (E_{(n,±)} = ω(n+1) ± |g|√(n+1)) and `Analytic` follows the
/// g-analytic continuation (E_{(n,ν)} = ω(n+1) + ν√(n+1)·g, signed in g).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Labeling {
    Magnitude,
    Analytic,
}

/// Exact eigenvalue of `H_JC` for the given dressed level.
///
/// Magnitude labeling: E_𝒏 = ω(n+1) + ν f_n(g). The spurious level returns
/// its exact eigenvalue −Δ/2 under both labelings.
pub fn energy(params: &ModelParams, level: LevelIndex, labeling: Labeling) -> Result<f64> {
    level.validate(params)?;
    if level.n == -1 {
        return Ok(-params.detuning() / 2.0);
    }
    let base = params.omega() * (level.n + 1) as f64;
    match labeling {
        Labeling::Magnitude => Ok(base + level.energy_sign(params) * f(params, level.n)?),
        Labeling::Analytic => {
            if params.detuning() == 0.0 {
                Ok(base + level.nu.as_f64() * ((level.n + 1) as f64).sqrt() * params.g())
            } else {
                Ok(base + level.energy_sign(params) * f(params, level.n)?)
            }
        }
    }
}

/// Mixing angle of the block `H_n` together with its half-angle cosine and
/// sine, c_n = cos(θ_n/2) and s_n = sin(θ_n/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingCoefficients {
    pub theta: f64,
    pub c: f64,
    pub s: f64,
}

/// Mixing angle θ_n of the 2×2 block, chosen so that the dressed vectors of
/// [`eigenvector_coeffs`] are exact eigenvectors for every sign of Δ:
///
/// θ_n = atan2(2g√(n+1), Δ) ∈ (−π, π].
///
/// For Δ > 0 this is the usual arctan branch in (−π/2, π/2); for Δ = 0 it is
/// sign(g)·π/2; for Δ < 0 it moves past ±π/2 so that (cos θ/2, sin θ/2) keeps
/// tracking the upper-energy eigenvector. At g = 0, Δ = 0 the block is a
/// multiple of the identity and θ_n := 0 picks the bare basis.
pub fn mixing(params: &ModelParams, n: i32) -> Result<MixingCoefficients> {
    if n < 0 {
        return Err(Error::Domain(format!("mixing angle needs n >= 0, got n={n}")));
    }
    let y = 2.0 * params.g() * ((n + 1) as f64).sqrt();
    let delta = params.detuning();
    let theta = if y == 0.0 && delta == 0.0 { 0.0 } else { y.atan2(delta) };
    Ok(MixingCoefficients { theta, c: (theta / 2.0).cos(), s: (theta / 2.0).sin() })
}

/// Coefficients of the dressed state on (|n⟩⊗e₁, |n+1⟩⊗e₋₁):
/// ν = + → (c_n, s_n), ν = − → (−s_n, c_n). The spurious level is
/// |0⟩⊗e₋₁, i.e. (0, 1) with the second slot meaning |0⟩⊗e₋₁.
pub fn eigenvector_coeffs(params: &ModelParams, level: LevelIndex) -> Result<(f64, f64)> {
    level.validate(params)?;
    if level.n == -1 {
        return Ok((0.0, 1.0));
    }
    let mix = mixing(params, level.n)?;
    match level.nu {
        Sign::Plus => Ok((mix.c, mix.s)),
        Sign::Minus => Ok((-mix.s, mix.c)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorOrder {
    Two,
    Four,
}

/// Small-g expansion of `E_𝒏`, or the exact linear form where the expansion
/// degenerates (Δ = 0, and the g-independent spurious level).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaylorEnergy {
    /// E ≈ c0 + c2·g² + c4·g⁴.
    Quartic { c0: f64, c2: f64, c4: f64 },
    /// E = c0 + c1·g exactly.
    Linear { c0: f64, c1: f64 },
}

impl TaylorEnergy {
    pub fn eval(&self, g: f64) -> f64 {
        match *self {
            TaylorEnergy::Quartic { c0, c2, c4 } => c0 + c2 * g * g + c4 * g.powi(4),
            TaylorEnergy::Linear { c0, c1 } => c0 + c1 * g,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TaylorEnergy::Linear { .. })
    }
}

/// Taylor expansion of the eigenvalue at g = 0:
///
/// E_𝒏 = ω(n+1) + ν(|Δ|/2 + (n+1)g²/|Δ| − (n+1)²g⁴/|Δ|³ + O(g⁶))   (Δ ≠ 0)
///
/// For Δ = 0 the eigenvalue is exactly linear in g (analytic labeling) and
/// the exact form is returned regardless of the requested order.
pub fn taylor_energy(params: &ModelParams, level: LevelIndex, order: TaylorOrder) -> Result<TaylorEnergy> {
    level.validate(params)?;
    if level.n == -1 {
        // g-independent
        return Ok(TaylorEnergy::Linear { c0: -params.detuning() / 2.0, c1: 0.0 });
    }
    let base = params.omega() * (level.n + 1) as f64;
    let nu = level.nu.as_f64();
    let np1 = (level.n + 1) as f64;
    let delta_abs = params.detuning().abs();
    if delta_abs == 0.0 {
        return Ok(TaylorEnergy::Linear { c0: base, c1: nu * np1.sqrt() });
    }
    let c2 = nu * np1 / delta_abs;
    let c4 = match order {
        TaylorOrder::Two => 0.0,
        TaylorOrder::Four => -nu * np1 * np1 / delta_abs.powi(3),
    };
    Ok(TaylorEnergy::Quartic { c0: base + nu * delta_abs / 2.0, c2, c4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(omega: f64, capital_omega: f64, g: f64) -> ModelParams {
        ModelParams::new(omega, capital_omega, g).unwrap()
    }

    /// Eigenvalues of the 2x2 block via explicit diagonalization.
    fn block_eigenvalues(p: &ModelParams, n: i32) -> (f64, f64) {
        let a = p.detuning() / 2.0;
        let b = p.g() * ((n + 1) as f64).sqrt();
        let base = p.omega() * (n + 1) as f64;
        let r = (a * a + b * b).sqrt();
        (base - r, base + r)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 1.0, 0.1).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.1).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.1).is_err());
        assert!(LevelIndex::new(-2, Sign::Plus).is_err());
    }

    #[test]
    fn f_values() {
        let p = params(1.0, 1.0, 0.5);
        assert_relative_eq!(f(&p, 0).unwrap(), 0.5);
        let p = params(1.0, 1.1, 0.2);
        assert_relative_eq!(f(&p, 0).unwrap(), 0.5 * (0.01f64 + 0.16).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(f(&p, 0).unwrap(), 0.206_155_281_3, max_relative = 1e-9);
        // n = -1 is |Δ|/2 for any g
        assert_relative_eq!(f(&p, -1).unwrap(), 0.05, max_relative = 1e-12);
        assert!(f(&p, -2).is_err());
    }

    #[test]
    fn f_no_overflow_at_large_n() {
        let p = params(1.0, 1.0, 1e150);
        let v = f(&p, i32::MAX - 1).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn energy_matches_block_oracle() {
        for &(om, comega, g) in &[(1.0, 1.0, 0.5), (1.0, 1.1, 0.2), (1.0, 0.9, -0.7), (2.0, 1.5, 1.3)] {
            let p = params(om, comega, g);
            for n in 0..30 {
                let (lo, hi) = block_eigenvalues(&p, n);
                let e_minus = energy(&p, LevelIndex::new(n, Sign::Minus).unwrap(), Labeling::Magnitude).unwrap();
                let e_plus = energy(&p, LevelIndex::new(n, Sign::Plus).unwrap(), Labeling::Magnitude).unwrap();
                assert_relative_eq!(e_minus, lo, max_relative = 1e-12);
                assert_relative_eq!(e_plus, hi, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn free_hamiltonian_degenerate_pairs() {
        let p = params(1.0, 1.0, 0.0);
        for n in 0..5 {
            for nu in [Sign::Plus, Sign::Minus] {
                let lvl = LevelIndex::new(n, nu).unwrap();
                assert_relative_eq!(energy(&p, lvl, Labeling::Magnitude).unwrap(), (n + 1) as f64);
                assert_relative_eq!(energy(&p, lvl, Labeling::Analytic).unwrap(), (n + 1) as f64);
            }
        }
    }

    #[test]
    fn spurious_level_energy_is_minus_half_detuning() {
        // Exact eigenvalue of |0⟩⊗e₋₁ under ω(a†a+1/2) + (Ω/2)σ_z is (ω−Ω)/2.
        for &(om, comega) in &[(1.0, 1.2), (1.0, 0.7), (1.0, 1.0)] {
            let p = params(om, comega, 0.35);
            let spur = LevelIndex::spurious(&p);
            let expected = (om - comega) / 2.0;
            assert_relative_eq!(energy(&p, spur, Labeling::Magnitude).unwrap(), expected, epsilon = 1e-15);
            assert_relative_eq!(energy(&p, spur, Labeling::Analytic).unwrap(), expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn spurious_level_validity() {
        let p = params(1.0, 1.2, 0.1); // Δ > 0, δ = +
        assert!(LevelIndex::new(-1, Sign::Plus).unwrap().is_valid_for(&p));
        assert!(!LevelIndex::new(-1, Sign::Minus).unwrap().is_valid_for(&p));
        let p = params(1.2, 1.0, 0.1); // Δ < 0, δ = −
        assert!(LevelIndex::new(-1, Sign::Minus).unwrap().is_valid_for(&p));
        assert!(!LevelIndex::new(-1, Sign::Plus).unwrap().is_valid_for(&p));
    }

    #[test]
    fn analytic_vs_magnitude_at_resonance() {
        let p = params(1.0, 1.0, -0.3);
        let lvl = LevelIndex::new(0, Sign::Plus).unwrap();
        assert_relative_eq!(energy(&p, lvl, Labeling::Analytic).unwrap(), 0.7, max_relative = 1e-14);
        assert_relative_eq!(energy(&p, lvl, Labeling::Magnitude).unwrap(), 1.3, max_relative = 1e-14);
    }

    #[test]
    fn mixing_limits() {
        // Δ ≠ 0, g = 0: θ = 0
        let p = params(1.0, 1.3, 0.0);
        let m = mixing(&p, 2).unwrap();
        assert_eq!(m.theta, 0.0);
        assert_eq!((m.c, m.s), (1.0, 0.0));
        // Δ = 0, g > 0: θ = π/2
        let p = params(1.0, 1.0, 0.4);
        let m = mixing(&p, 0).unwrap();
        assert_relative_eq!(m.theta, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(m.c, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(m.s, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        // Δ = 0, g < 0: θ = −π/2
        let p = params(1.0, 1.0, -0.4);
        assert_relative_eq!(mixing(&p, 0).unwrap().theta, -std::f64::consts::FRAC_PI_2);
        // degenerate corner g = 0, Δ = 0: bare-basis convention
        let p = params(1.0, 1.0, 0.0);
        assert_eq!(mixing(&p, 5).unwrap().theta, 0.0);
        assert!(mixing(&p, -1).is_err());
    }

    #[test]
    fn mixing_angle_from_block_diagonalization() {
        // (ω=1, Ω=1.1, g=0.2, n=0): the upper eigenvector of the block
        // [[0.05, 0.2], [0.2, -0.05]] is (0.78821..., 0.61541...); the mixing
        // angle convention must reproduce it with a positive second slot.
        let p = params(1.0, 1.1, 0.2);
        let m = mixing(&p, 0).unwrap();
        assert_relative_eq!(m.theta.abs(), 1.325_817_663_668_033, max_relative = 1e-12);
        let (c0, s0) = eigenvector_coeffs(&p, LevelIndex::new(0, Sign::Plus).unwrap()).unwrap();
        // oracle: normalized (b, r - a) with a = Δ/2, b = g√(n+1)
        let (a, b) = (0.05, 0.2);
        let r = f64::hypot(a, b);
        let norm = f64::hypot(b, r - a);
        assert_relative_eq!(c0, b / norm, max_relative = 1e-12);
        assert_relative_eq!(s0, (r - a) / norm, max_relative = 1e-12);
    }

    #[test]
    fn eigenvector_coeffs_satisfy_block_equation() {
        // H_n v = E v for both branches, all detuning signs
        for &(om, comega, g) in &[(1.0, 1.1, 0.2), (1.0, 0.8, 0.3), (1.0, 0.8, -0.3), (1.0, 1.0, 0.5)] {
            let p = params(om, comega, g);
            for n in 0..8 {
                let a = p.detuning() / 2.0;
                let b = g * ((n + 1) as f64).sqrt();
                for nu in [Sign::Plus, Sign::Minus] {
                    let lvl = LevelIndex::new(n, nu).unwrap();
                    let (x, y) = eigenvector_coeffs(&p, lvl).unwrap();
                    let e = energy(&p, lvl, Labeling::Magnitude).unwrap() - p.omega() * (n + 1) as f64;
                    assert!((a * x + b * y - e * x).abs() < 1e-13, "row 1 fails at n={n} nu={nu}");
                    assert!((b * x - a * y - e * y).abs() < 1e-13, "row 2 fails at n={n} nu={nu}");
                    assert_relative_eq!(x * x + y * y, 1.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn eigenvector_limits() {
        // uncoupled limit, Δ > 0 labeling
        let p = params(1.0, 1.3, 0.0);
        assert_eq!(eigenvector_coeffs(&p, LevelIndex::new(3, Sign::Plus).unwrap()).unwrap(), (1.0, 0.0));
        // Δ = 0, g > 0: minus branch is (−√2/2, √2/2)
        let p = params(1.0, 1.0, 0.6);
        let (x, y) = eigenvector_coeffs(&p, LevelIndex::new(2, Sign::Minus).unwrap()).unwrap();
        assert_relative_eq!(x, -std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(y, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-14);
        // spurious level
        let p = params(1.0, 1.2, 0.4);
        assert_eq!(eigenvector_coeffs(&p, LevelIndex::spurious(&p)).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn taylor_coefficients() {
        let p = params(1.0, 1.2, 0.0);
        let t = taylor_energy(&p, LevelIndex::new(0, Sign::Plus).unwrap(), TaylorOrder::Four).unwrap();
        match t {
            TaylorEnergy::Quartic { c0, c2, c4 } => {
                assert_relative_eq!(c0, 1.1, max_relative = 1e-14);
                assert_relative_eq!(c2, 5.0, max_relative = 1e-12);
                assert_relative_eq!(c4, -125.0, max_relative = 1e-12);
            }
            _ => panic!("expected quartic expansion"),
        }
        // order-2 constant term is ω(n+1) + ν|Δ|/2
        let t2 = taylor_energy(&p, LevelIndex::new(3, Sign::Minus).unwrap(), TaylorOrder::Two).unwrap();
        assert_relative_eq!(t2.eval(0.0), 4.0 - 0.1, max_relative = 1e-14);
        // Δ = 0 falls back to the exact linear form
        let p0 = params(1.0, 1.0, 0.0);
        let t0 = taylor_energy(&p0, LevelIndex::new(1, Sign::Plus).unwrap(), TaylorOrder::Four).unwrap();
        assert!(t0.is_exact());
        assert_relative_eq!(t0.eval(0.3), 2.0 + 2f64.sqrt() * 0.3, max_relative = 1e-14);
    }

    #[test]
    fn taylor_remainder_is_order_g6() {
        // |E − taylor₄| ≤ C·g⁶ on a grid with |g| ≤ |Δ|/4: the ratio
        // |E − T₄|/g⁶ must stay bounded as g → 0.
        let p = params(1.0, 1.2, 0.0);
        let lvl = LevelIndex::new(2, Sign::Plus).unwrap();
        let t4 = taylor_energy(&p, lvl, TaylorOrder::Four).unwrap();
        let mut max_ratio: f64 = 0.0;
        for k in 1..=20 {
            let g = 0.05 * k as f64 / 20.0; // up to |Δ|/4
            let pg = p.with_g(g).unwrap();
            let err = (energy(&pg, lvl, Labeling::Magnitude).unwrap() - t4.eval(g)).abs();
            max_ratio = max_ratio.max(err / g.powi(6));
        }
        // C = (n+1)³/|Δ|⁵ · 2 is a generous bound at these parameters
        assert!(max_ratio < 2.0 * 27.0 / 0.2f64.powi(5), "ratio {max_ratio}");
    }

    #[test]
    fn spectrum_set_symmetric_under_g_flip() {
        let p = params(1.0, 1.15, 0.45);
        let pm = p.with_g(-0.45).unwrap();
        for n in 0..20 {
            for nu in [Sign::Plus, Sign::Minus] {
                let lvl = LevelIndex::new(n, nu).unwrap();
                let a = energy(&p, lvl, Labeling::Magnitude).unwrap();
                let b = energy(&pm, lvl, Labeling::Magnitude).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn frak_set_membership() {
        let p = params(1.0, 1.2, 0.1); // Δ > 0
        assert!(LevelIndex::in_frak_minus(-1, &p));
        assert!(!LevelIndex::in_frak_plus(-1, &p));
        let p = params(1.2, 1.0, 0.1); // Δ < 0
        assert!(LevelIndex::in_frak_plus(-1, &p));
        assert!(!LevelIndex::in_frak_minus(-1, &p));
        assert!(LevelIndex::in_frak_plus(0, &p) && LevelIndex::in_frak_minus(7, &p));
    }
}
