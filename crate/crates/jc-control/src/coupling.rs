//! Matrix elements of the control operators in the dressed basis.
//!
//! The controls are H₁ = X⊗1 and H₂ = P⊗1, acting on the bosonic part only.
//! In the dressed basis the elements of H₁ are real and follow closed forms
//! in c_n = cos(θ_n/2), s_n = sin(θ_n/2); H₂ elements equal i times the H₁
//! element in the catalogue orientation (higher level in the bra). Selection
//! rule: levels whose n-indices differ by 2 or more are uncoupled, as are
//! same-n opposite-branch pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{self, Labeling, LevelIndex, ModelParams, Sign};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// An unordered pair of dressed levels with its transition frequency and
/// control amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEdge {
    pub a: LevelIndex,
    pub b: LevelIndex,
    /// |E_a − E_b| ≥ 0.
    pub freq: f64,
    /// ⟨a|H₁|b⟩ (real, symmetric in a ↔ b).
    pub h1: f64,
    /// ⟨a|H₂|b⟩ in the stored (a, b) orientation.
    pub h2: Complex64,
}

impl TransitionEdge {
    /// Whether this edge and `other` denote the same unordered level pair.
    pub fn same_pair(&self, other: &TransitionEdge) -> bool {
        (self.a == other.a && self.b == other.b) || (self.a == other.b && self.b == other.a)
    }
}

/// ⟨a|H₁|b⟩ from the closed-form catalogue.
pub fn h1_element(params: &ModelParams, a: LevelIndex, b: LevelIndex) -> Result<f64> {
    a.validate(params)?;
    b.validate(params)?;
    if a == b {
        // X has zero diagonal in the Fock basis and the two slots of a
        // dressed state differ in spin, so diagonal elements vanish.
        return Ok(0.0);
    }
    // orient: hi is the larger n
    let (hi, lo) = if a.n >= b.n { (a, b) } else { (b, a) };
    let dn = hi.n - lo.n;
    if dn == 0 || dn >= 2 {
        return Ok(0.0);
    }
    // dn == 1
    if lo.n == -1 {
        let m0 = model::mixing(params, 0)?;
        return Ok(match hi.nu {
            Sign::Minus => m0.c * FRAC_1_SQRT_2,
            Sign::Plus => m0.s * FRAC_1_SQRT_2,
        });
    }
    let n = lo.n;
    let mn = model::mixing(params, n)?;
    let mn1 = model::mixing(params, n + 1)?;
    let rn1 = ((n + 1) as f64).sqrt();
    let rn2 = ((n + 2) as f64).sqrt();
    let val = match (hi.nu, lo.nu) {
        // same branch, upper: (n+1,+) ↔ (n,+)
        (Sign::Plus, Sign::Plus) => rn1 * mn.c * mn1.c + rn2 * mn.s * mn1.s,
        // same branch, lower: (n+1,−) ↔ (n,−) — c and s swap roles because
        // the minus eigenvector is (−s, c)
        (Sign::Minus, Sign::Minus) => rn1 * mn.s * mn1.s + rn2 * mn.c * mn1.c,
        // (n+1,−) ↔ (n,+)
        (Sign::Minus, Sign::Plus) => rn2 * mn.s * mn1.c - rn1 * mn.c * mn1.s,
        // (n+1,+) ↔ (n,−)
        (Sign::Plus, Sign::Minus) => rn2 * mn.c * mn1.s - rn1 * mn.s * mn1.c,
    };
    Ok(val * FRAC_1_SQRT_2)
}

/// ⟨a|H₂|b⟩ = i⟨a|H₁|b⟩ when `a` is the higher level (catalogue
/// orientation); swapping the arguments conjugates.
pub fn h2_element(params: &ModelParams, a: LevelIndex, b: LevelIndex) -> Result<Complex64> {
    let h1 = h1_element(params, a, b)?;
    if a.n >= b.n {
        Ok(Complex64::new(0.0, h1))
    } else {
        Ok(Complex64::new(0.0, -h1))
    }
}

/// Assemble the full [`TransitionEdge`] for a level pair.
pub fn edge(params: &ModelParams, a: LevelIndex, b: LevelIndex) -> Result<TransitionEdge> {
    let ea = model::energy(params, a, Labeling::Magnitude)?;
    let eb = model::energy(params, b, Labeling::Magnitude)?;
    Ok(TransitionEdge {
        a,
        b,
        freq: (ea - eb).abs(),
        h1: h1_element(params, a, b)?,
        h2: h2_element(params, a, b)?,
    })
}

/// All levels of the index set with n ≤ n_max, spurious level first, then
/// (n,−), (n,+) in increasing n.
pub fn levels_up_to(params: &ModelParams, n_max: i32) -> Vec<LevelIndex> {
    let mut levels = vec![LevelIndex::spurious(params)];
    for n in 0..=n_max {
        levels.push(LevelIndex { n, nu: Sign::Minus });
        levels.push(LevelIndex { n, nu: Sign::Plus });
    }
    levels
}

/// Enumerate every unordered coupled pair with n-indices ≤ n_max and
/// |⟨a|H₁|b⟩| > threshold, spurious-level edges included.
///
/// A threshold of 0 keeps exactly the structurally coupled pairs (the
/// selection-rule zeros are exact); a small positive threshold is useful for
/// degeneracy-adjacent scans.
pub fn coupled_pairs(params: &ModelParams, n_max: i32, threshold: f64) -> Result<Vec<TransitionEdge>> {
    let levels = levels_up_to(params, n_max);
    let mut edges = Vec::new();
    for (i, &a) in levels.iter().enumerate() {
        for &b in &levels[i + 1..] {
            // only adjacent n-indices can couple
            if (a.n - b.n).abs() != 1 {
                continue;
            }
            let e = edge(params, b, a)?; // higher level first
            if e.h1.abs() > threshold {
                edges.push(e);
            }
        }
    }
    Ok(edges)
}
