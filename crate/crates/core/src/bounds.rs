//! Closed-form perturbation bounds for (preconditioned) Cholesky-QR and the
//! sampling amount guaranteeing a well-conditioned preconditioned matrix.
//!
//! The normwise relative perturbations are, in order of occurrence:
//!
//! | field   | perturbation                                        |
//! |---------|-----------------------------------------------------|
//! | `eps_a` | input `A`                                           |
//! | `eps_s` | triangular solve `A₁ = A R_s⁻¹`                     |
//! | `eps_1` | Gram product `A₁ᵀA₁`                                |
//! | `eps_2` | Cholesky factorization                              |
//! | `eps_3` | triangular solve `Q = A₁ R₂⁻¹`                      |
//! | `eps_4` | product `R₂ R_s`                                    |

use crate::error::{Error, Result};
use crate::UNIT_ROUNDOFF;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSet {
    pub eps_a: f64,
    pub eps_s: f64,
    pub eps_1: f64,
    pub eps_2: f64,
    pub eps_3: f64,
    pub eps_4: f64,
    /// Two-norm condition number of the preconditioner `R_s`.
    pub kappa_rs: f64,
}

impl EpsilonSet {
    pub fn new(
        eps_a: f64,
        eps_s: f64,
        eps_1: f64,
        eps_2: f64,
        eps_3: f64,
        eps_4: f64,
        kappa_rs: f64,
    ) -> Result<Self> {
        let e = Self {
            eps_a,
            eps_s,
            eps_1,
            eps_2,
            eps_3,
            eps_4,
            kappa_rs,
        };
        e.validate()?;
        Ok(e)
    }

    /// Every perturbation equal to `u`, with `κ(R_s) = kappa_rs`.
    pub fn uniform(u: f64, kappa_rs: f64) -> Result<Self> {
        Self::new(u, u, u, u, u, u, kappa_rs)
    }

    /// Every perturbation equal to the unit roundoff and `κ(R_s) = 1`.
    pub fn unit_roundoff() -> Self {
        Self::uniform(UNIT_ROUNDOFF, 1.0).expect("unit roundoff is a valid perturbation")
    }

    pub fn validate(&self) -> Result<()> {
        let eps = [
            self.eps_a, self.eps_s, self.eps_1, self.eps_2, self.eps_3, self.eps_4,
        ];
        if eps.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return Err(Error::Domain(format!(
                "perturbations must be finite and nonnegative: {eps:?}"
            )));
        }
        if !(self.kappa_rs.is_finite() && self.kappa_rs >= 1.0) {
            return Err(Error::Domain(format!(
                "kappa_rs must be finite and >= 1, got {}",
                self.kappa_rs
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    pub eps_f: f64,
    pub gamma_1: f64,
    pub gamma_2: f64,
    pub gamma_3: f64,
}

/// Bound values. The three bounds are `None` when the hypothesis
/// `κ(A₁)²γ₂ < 1` fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    /// Factor multiplying `κ(R₂)` in the bound on `κ(R̂₂)`.
    pub cond_r2_factor: Option<f64>,
    /// Bound on `‖I − Q̂ᵀQ̂‖₂`.
    pub ortho: Option<f64>,
    /// Bound on `‖A − Q̂R̂‖₂/‖A‖₂`.
    pub residual: Option<f64>,
    pub assumption_ok: bool,
    pub eta: f64,
    pub kappa_a1: f64,
}

/// `ε_F = (ε_A + ε_s)κ(R_s)` and the three γ terms.
pub fn gamma_terms(e: &EpsilonSet) -> GammaSet {
    let eps_f = (e.eps_a + e.eps_s) * e.kappa_rs;
    let one_f = 1.0 + eps_f;
    let chol = e.eps_1 + (1.0 + e.eps_1) * e.eps_2;
    GammaSet {
        eps_f,
        gamma_1: one_f * one_f * (chol + 2.0 * e.eps_3 + e.eps_3 * e.eps_3),
        gamma_2: 2.0 * eps_f + eps_f * eps_f + one_f * one_f * chol,
        gamma_3: e.eps_4 * one_f * (1.0 + e.eps_3),
    }
}

fn check_kappa_eta(kappa_a1: f64, eta: f64) -> Result<()> {
    if !(kappa_a1.is_finite() && kappa_a1 >= 1.0) {
        return Err(Error::Domain(format!(
            "kappa_a1 must be >= 1, got {kappa_a1}"
        )));
    }
    if !(eta >= 1.0 && eta <= kappa_a1) {
        return Err(Error::Domain(format!(
            "eta must lie in [1, kappa_a1 = {kappa_a1}], got {eta}"
        )));
    }
    Ok(())
}

/// Full (non-asymptotic) bounds for preconditioned Cholesky-QR.
pub fn preconditioned_bounds(
    g: &GammaSet,
    e: &EpsilonSet,
    kappa_a1: f64,
    eta: f64,
) -> Result<BoundSet> {
    e.validate()?;
    check_kappa_eta(kappa_a1, eta)?;
    let k2 = kappa_a1 * kappa_a1;
    let assumption_ok = k2 * g.gamma_2 < 1.0;
    let mut out = BoundSet {
        cond_r2_factor: None,
        ortho: None,
        residual: None,
        assumption_ok,
        eta,
        kappa_a1,
    };
    if assumption_ok {
        let denom = 1.0 - k2 * g.gamma_2;
        let growth = ((1.0 + g.gamma_2) / denom).sqrt();
        out.cond_r2_factor = Some(growth);
        out.ortho = Some(k2 * g.gamma_1 / denom);
        out.residual = Some(
            e.eps_a
                + (e.eps_s + (1.0 + g.eps_f) * e.eps_3) * eta
                + g.gamma_3 * growth * eta * kappa_a1,
        );
    }
    Ok(out)
}

/// First-order versions of [`preconditioned_bounds`]; `assumption_ok` tests
/// `κ(A₁)²γ̃₂ < 1` with the first-order `γ̃₂`.
pub fn first_order_bounds(e: &EpsilonSet, kappa_a1: f64, eta: f64) -> Result<BoundSet> {
    e.validate()?;
    check_kappa_eta(kappa_a1, eta)?;
    let k2 = kappa_a1 * kappa_a1;
    let g1 = e.eps_1 + e.eps_2 + 2.0 * e.eps_3;
    let g2 = 2.0 * (e.eps_a + e.eps_s) * e.kappa_rs + e.eps_1 + e.eps_2;
    let assumption_ok = k2 * g2 < 1.0;
    let mut out = BoundSet {
        cond_r2_factor: None,
        ortho: None,
        residual: None,
        assumption_ok,
        eta,
        kappa_a1,
    };
    if assumption_ok {
        out.cond_r2_factor = Some((1.0 + g2 * (1.0 + k2)).sqrt());
        out.ortho = Some(g1 * k2);
        out.residual = Some(e.eps_a + (e.eps_s + e.eps_3 + e.eps_4 * kappa_a1) * eta);
    }
    Ok(out)
}

/// Bounds for unpreconditioned Cholesky-QR: the preconditioned bounds with
/// `ε_s = 0`, `κ(R_s) = 1`, `ε₄ = 0` and `η = 1`.
pub fn unpreconditioned_bounds(e: &EpsilonSet, kappa_a: f64) -> Result<BoundSet> {
    let special = EpsilonSet {
        eps_s: 0.0,
        eps_4: 0.0,
        kappa_rs: 1.0,
        ..*e
    };
    preconditioned_bounds(&gamma_terms(&special), &special, kappa_a, 1.0)
}

/// Minimum sample count and the implied condition number bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingBound {
    pub c_min: u64,
    /// `√((1+ε)/(1−ε))`.
    pub kappa_bound: f64,
}

/// Smallest `c` with `c ≥ 2mμ(1 + ε/3) ln(n/δ) / ε²`.
///
/// The right-hand side is evaluated in `f64` in the order written and the
/// result is its ceiling.
pub fn sampling_lower_bound(
    m: usize,
    n: usize,
    mu: f64,
    eps: f64,
    delta: f64,
) -> Result<SamplingBound> {
    if m == 0 || n == 0 || n > m {
        return Err(Error::Domain(format!(
            "need 1 <= n <= m, got m = {m}, n = {n}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let mu_min = n as f64 / m as f64;
    // Allow the last-bit slack of a computed coherence.
    if !(mu >= mu_min * (1.0 - 4.0 * UNIT_ROUNDOFF) && mu <= 1.0 + 4.0 * UNIT_ROUNDOFF) {
        return Err(Error::Domain(format!(
            "coherence must lie in [n/m = {mu_min}, 1], got {mu}"
        )));
    }
    let rhs = 2.0 * m as f64 * mu * (1.0 + eps / 3.0) * (n as f64 / delta).ln() / (eps * eps);
    Ok(SamplingBound {
        c_min: rhs.ceil().max(1.0) as u64,
        kappa_bound: ((1.0 + eps) / (1.0 - eps)).sqrt(),
    })
}

/// `4·u·κ(A₁)`, the empirical magnitude of the deviation from orthonormality.
pub fn ortho_estimate(kappa_a1: f64) -> f64 {
    4.0 * UNIT_ROUNDOFF * kappa_a1
}
