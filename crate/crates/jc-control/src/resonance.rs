//! The singular set S* = S₁ ∪ S₂ of coupling values where certification of
//! controllability fails.
//!
//! S₁ collects eigenvalue crossings with nonzero control coupling
//! (`E_𝒏 = E_{(n+1,−)}`, closed form `G⁽¹⁾`). S₂ collects resonance
//! coincidences between a chain transition and another coupled transition;
//! after unfolding the absolute values these reduce to three families of
//! scalar equations `2ω = RHS(g)` whose right-hand sides are strictly
//! increasing in |g| on their valid index ranges, so each is solved by
//! doubling-bracket bisection. The crossings `G⁽²⁾` (`E_𝒏 = E_{(n+2,−)}`)
//! are benign — the coupling between the crossing levels vanishes there —
//! and are reported separately.

use serde::{Deserialize, Serialize};

use crate::chain;
use crate::coupling::{self, TransitionEdge};
use crate::error::{Error, Result};
use crate::model::{self, Labeling, LevelIndex, ModelParams, Sign};

/// Which equation produced a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularFamily {
    /// g = 0, always singular.
    Zero,
    /// Eigenvalue crossing E_𝒏 = E_{(n+1,−)} (the set S₁).
    CritEig,
    /// 2ω = f_{m+1} + f_m − f_{n+1} + f_n, m, n ∈ 𝔑₊.
    OnePlusC,
    /// 2ω = f_{m+1} − f_m − f_{n+1} + f_n, m, n ∈ 𝔑₋, m < n.
    OneD,
    /// 2ω = f_{m+1} + f_m − f_{n+1} − f_n, m, n ∈ 𝔑₋, m > n.
    TwoC,
}

/// One (family, indices) witness for a singular value of g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularTag {
    pub family: SingularFamily,
    /// m index for the S₂ families.
    pub m: Option<i32>,
    /// n index (S₂ families and CritEig).
    pub n: Option<i32>,
    /// ν label (CritEig only).
    pub nu: Option<Sign>,
    /// |lhs − rhs| of the defining equation at `g_star`.
    pub residual: f64,
}

/// A value g* in the singular set, with every witness that produced it.
///
/// Solutions come in ± pairs; the non-negative representative is stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub g_star: f64,
    pub tags: Vec<SingularTag>,
}

/// Result of [`enumerate_singular`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularEnumeration {
    pub points: Vec<SingularPoint>,
    /// True when the index cap provably truncates: the boundary index
    /// already yields roots within [0, g_max], so larger indices (outside
    /// the cap) would too. The singular set accumulates at g = 0.
    pub may_truncate: bool,
}

/// A pair of coupled transitions whose frequencies coincide within `tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceHit {
    pub chain_edge: TransitionEdge,
    pub other: TransitionEdge,
    pub delta_freq: f64,
}

fn validate_crossing_root(
    params0: &ModelParams,
    level: LevelIndex,
    partner: LevelIndex,
    g: f64,
) -> Result<Option<f64>> {
    let p = params0.with_g(g)?;
    let lhs = model::energy(&p, level, Labeling::Magnitude)?;
    let rhs = model::energy(&p, partner, Labeling::Magnitude)?;
    if (lhs - rhs).abs() <= 1e-10 * params0.omega() {
        Ok(Some(g))
    } else {
        // spurious branch of the squared equation
        Ok(None)
    }
}

/// Crossing point G⁽¹⁾ of E_𝒏 with E_{(n+1,−)}, or `None` when the levels
/// never cross.
///
/// Closed form: G⁽¹⁾² = ω²(2n+3) − s√(4ω⁴(n²+3n+2) + ω²Δ²) with s the sign
/// of f_n in E_𝒏 (s = ν for n ≥ 0, s = −δ(Δ) for the spurious level).
pub fn g1_crossing(params: &ModelParams, level: LevelIndex) -> Result<Option<f64>> {
    level.validate(params)?;
    let omega = params.omega();
    let delta = params.detuning();
    let s = level.energy_sign(params);
    let n = level.n as f64;
    let inner = 4.0 * omega.powi(4) * (n * n + 3.0 * n + 2.0) + omega * omega * delta * delta;
    let radicand = omega * omega * (2.0 * n + 3.0) - s * inner.sqrt();
    if radicand < 0.0 {
        return Ok(None);
    }
    let partner = LevelIndex::new(level.n + 1, Sign::Minus)?;
    validate_crossing_root(params, level, partner, radicand.sqrt())
}

/// Crossing point G⁽²⁾ of E_𝒏 with E_{(n+2,−)}, or `None`.
///
/// These crossings are benign: the control coupling between the crossing
/// levels vanishes identically (|n_a − n_b| = 2 selection rule), so they are
/// not part of the singular set.
pub fn g2_crossing(params: &ModelParams, level: LevelIndex) -> Result<Option<f64>> {
    level.validate(params)?;
    let omega = params.omega();
    let delta = params.detuning();
    let s = level.energy_sign(params);
    let n = level.n as f64;
    let inner = 4.0 * omega.powi(4) * (n * n + 4.0 * n + 3.0) + omega * omega * delta * delta;
    let radicand = 2.0 * omega * omega * (n + 2.0) - s * inner.sqrt();
    if radicand < 0.0 {
        return Ok(None);
    }
    let partner = LevelIndex::new(level.n + 2, Sign::Minus)?;
    validate_crossing_root(params, level, partner, radicand.sqrt())
}

fn check_family_indices(family: SingularFamily, m: i32, n: i32, params0: &ModelParams) -> Result<()> {
    let bad = |msg: String| Err(Error::Domain(msg));
    match family {
        SingularFamily::OnePlusC => {
            if !LevelIndex::in_frak_plus(m, params0) || !LevelIndex::in_frak_plus(n, params0) {
                return bad(format!("OnePlusC needs m, n in the plus index set, got m={m}, n={n}"));
            }
        }
        SingularFamily::OneD => {
            if !LevelIndex::in_frak_minus(m, params0) || !LevelIndex::in_frak_minus(n, params0) {
                return bad(format!("OneD needs m, n in the minus index set, got m={m}, n={n}"));
            }
            if m >= n {
                return bad(format!("OneD needs m < n, got m={m}, n={n}"));
            }
        }
        SingularFamily::TwoC => {
            if !LevelIndex::in_frak_minus(m, params0) || !LevelIndex::in_frak_minus(n, params0) {
                return bad(format!("TwoC needs m, n in the minus index set, got m={m}, n={n}"));
            }
            if m <= n {
                return bad(format!("TwoC needs m > n, got m={m}, n={n}"));
            }
        }
        SingularFamily::Zero | SingularFamily::CritEig => {
            return bad("solve_s2 handles the OnePlusC/OneD/TwoC families only".into());
        }
    }
    Ok(())
}

fn family_rhs(params0: &ModelParams, family: SingularFamily, m: i32, n: i32, g: f64) -> Result<f64> {
    let p = params0.with_g(g)?;
    let fm1 = model::f(&p, m + 1)?;
    let fm = model::f(&p, m)?;
    let fn1 = model::f(&p, n + 1)?;
    let fnn = model::f(&p, n)?;
    Ok(match family {
        SingularFamily::OnePlusC => fm1 + fm - fn1 + fnn,
        SingularFamily::OneD => fm1 - fm - fn1 + fnn,
        SingularFamily::TwoC => fm1 + fm - fn1 - fnn,
        _ => unreachable!(),
    })
}

/// Asymptotic slope of RHS in |g| (the Δ-independent large-g limit).
fn family_slope(family: SingularFamily, m: i32, n: i32) -> f64 {
    let r = |k: i32| ((k + 1) as f64).sqrt();
    match family {
        SingularFamily::OnePlusC => r(m + 1) + r(m) - r(n + 1) + r(n),
        SingularFamily::OneD => r(m + 1) - r(m) - r(n + 1) + r(n),
        SingularFamily::TwoC => r(m + 1) + r(m) - r(n + 1) - r(n),
        _ => unreachable!(),
    }
}

/// All g ≥ 0 solving the resonance family equation 2ω = RHS(g).
///
/// RHS is strictly increasing in |g| on the valid index ranges, so there is
/// at most one non-negative root: the bracket [0, g_up] is found by doubling
/// and refined by bisection to relative tolerance 1e−12. Empty when the
/// equation has no positive solution, in particular when RHS(0) = |Δ| ≥ 2ω
/// already (outside the near-resonant regime no positive root exists).
/// Index-set violations are a domain error, not an
/// empty result. Solutions come in ± pairs; the non-negative representative
/// is returned.
pub fn solve_s2(omega: f64, capital_omega: f64, family: SingularFamily, m: i32, n: i32) -> Result<Vec<f64>> {
    let params0 = ModelParams::new(omega, capital_omega, 0.0)?;
    if m < -1 || n < -1 {
        return Err(Error::Domain(format!("indices must be >= -1, got m={m}, n={n}")));
    }
    check_family_indices(family, m, n, &params0)?;

    let target = 2.0 * omega;
    if params0.detuning() == 0.0 {
        // exactly linear in |g|
        let slope = family_slope(family, m, n);
        if slope <= 0.0 {
            return Ok(vec![]);
        }
        return Ok(vec![target / slope]);
    }

    if family_rhs(&params0, family, m, n, 0.0)? >= target {
        // no crossing from below
        return Ok(vec![]);
    }
    if family_slope(family, m, n) <= 0.0 {
        // RHS bounded below the target
        return Ok(vec![]);
    }

    // bracket by doubling
    let mut hi = omega;
    let mut doublings = 0;
    while family_rhs(&params0, family, m, n, hi)? < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Domain("bracketing failed after 200 doublings".into()));
        }
    }
    let mut lo = 0.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if family_rhs(&params0, family, m, n, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(vec![0.5 * (lo + hi)])
}

/// Enumerate the singular set restricted to [0, g_max] with all level and
/// family indices capped at `n_cap`. Points closer than 1e−9·ω are merged,
/// keeping every (family, indices) tag. Sorted ascending; g = 0 is always
/// included.
pub fn enumerate_singular(
    omega: f64,
    capital_omega: f64,
    g_max: f64,
    n_cap: i32,
) -> Result<SingularEnumeration> {
    if g_max < 0.0 {
        return Err(Error::Domain(format!("g_max must be >= 0, got {g_max}")));
    }
    if n_cap < 0 {
        return Err(Error::Domain(format!("n_cap must be >= 0, got {n_cap}")));
    }
    let params0 = ModelParams::new(omega, capital_omega, 0.0)?;

    let mut raw: Vec<(f64, SingularTag)> = vec![(
        0.0,
        SingularTag { family: SingularFamily::Zero, m: None, n: None, nu: None, residual: 0.0 },
    )];

    // S₁: eigenvalue crossings
    let mut levels = vec![LevelIndex::spurious(&params0)];
    for n in 0..=n_cap {
        levels.push(LevelIndex { n, nu: Sign::Minus });
        levels.push(LevelIndex { n, nu: Sign::Plus });
    }
    for &level in &levels {
        if let Some(g) = g1_crossing(&params0, level)? {
            if g > 0.0 && g <= g_max {
                let p = params0.with_g(g)?;
                let residual = (model::energy(&p, level, Labeling::Magnitude)?
                    - model::energy(&p, LevelIndex::new(level.n + 1, Sign::Minus)?, Labeling::Magnitude)?)
                .abs();
                raw.push((
                    g,
                    SingularTag {
                        family: SingularFamily::CritEig,
                        m: None,
                        n: Some(level.n),
                        nu: Some(level.nu),
                        residual,
                    },
                ));
            }
        }
    }

    // S₂: resonance families
    let mut may_truncate = false;
    for family in [SingularFamily::OnePlusC, SingularFamily::OneD, SingularFamily::TwoC] {
        for m in -1..=n_cap {
            for n in -1..=n_cap {
                if check_family_indices(family, m, n, &params0).is_err() {
                    continue;
                }
                for g in solve_s2(omega, capital_omega, family, m, n)? {
                    if g <= g_max {
                        if m == n_cap || n == n_cap {
                            // the boundary index still lands in range, so
                            // indices beyond the cap would as well
                            may_truncate = true;
                        }
                        let residual = (family_rhs(&params0, family, m, n, g)? - 2.0 * omega).abs();
                        raw.push((
                            g,
                            SingularTag { family, m: Some(m), n: Some(n), nu: None, residual },
                        ));
                    }
                }
            }
        }
    }

    // merge points closer than the dedup tolerance
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let dedup_tol = 1e-9 * omega;
    let mut points: Vec<SingularPoint> = Vec::new();
    for (g, tag) in raw {
        match points.last_mut() {
            Some(last) if (g - last.g_star).abs() <= dedup_tol => last.tags.push(tag),
            _ => points.push(SingularPoint { g_star: g, tags: vec![tag] }),
        }
    }
    Ok(SingularEnumeration { points, may_truncate })
}

/// All benign G⁽²⁾ crossing points in [0, g_max] with n ≤ n_cap, as
/// (g, level) pairs sorted by g.
pub fn benign_crossings(
    omega: f64,
    capital_omega: f64,
    g_max: f64,
    n_cap: i32,
) -> Result<Vec<(f64, LevelIndex)>> {
    let params0 = ModelParams::new(omega, capital_omega, 0.0)?;
    let mut out = Vec::new();
    let mut levels = vec![LevelIndex::spurious(&params0)];
    for n in 0..=n_cap {
        levels.push(LevelIndex { n, nu: Sign::Minus });
        levels.push(LevelIndex { n, nu: Sign::Plus });
    }
    for &level in &levels {
        if let Some(g) = g2_crossing(&params0, level)? {
            if g > 0.0 && g <= g_max {
                out.push((g, level));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Scan the finite truncation for transition-frequency coincidences: every
/// chain edge is compared against every coupled pair with n-indices ≤ n_max,
/// and pairs with |freq₁ − freq₂| ≤ tol are reported.
pub fn resonance_scan(params: &ModelParams, n_max: i32, tol: f64) -> Result<Vec<ResonanceHit>> {
    if n_max < 0 {
        return Err(Error::Domain(format!("n_max must be >= 0, got {n_max}")));
    }
    if tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be > 0, got {tol}")));
    }
    let chain_edges = chain::build_c0(params, n_max)?;
    let coupled = coupling::coupled_pairs(params, n_max, 0.0)?;
    let mut hits = Vec::new();
    for ce in &chain_edges {
        for other in &coupled {
            if ce.same_pair(other) {
                continue;
            }
            let d = (ce.freq - other.freq).abs();
            if d <= tol {
                hits.push(ResonanceHit { chain_edge: *ce, other: *other, delta_freq: d });
            }
        }
    }
    Ok(hits)
}
