use crate::{Error, Result};

/// Nonzero minimizer of the double well, `ψ(HAT_S) ≈ 0`.
pub const HAT_S: f64 = 0.750025;

/// Coefficient of the convex quadratic part: `ψ_c(s) = CONVEX_COEFF · s²`.
pub const CONVEX_COEFF: f64 = 63.0;

/// Double-well potential `ψ = c_dw (ψ_c − ψ_e)` with
/// `ψ_c(s) = 63 s²` and `ψ_e(s) = −16 s⁴ + (64/3) s³ + 57 s² − 0.5625`.
///
/// Both parts are convex on the relevant range, so `ψ_c` is treated
/// implicitly and `ψ_e` explicitly in the `s` update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWell {
    c_dw: f64,
}

impl DoubleWell {
    pub fn new(c_dw: f64) -> Result<Self> {
        if !(c_dw >= 0.0) || !c_dw.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "double-well scale must be finite and nonnegative, got {c_dw}"
            )));
        }
        Ok(Self { c_dw })
    }

    pub fn c_dw(&self) -> f64 {
        self.c_dw
    }

    /// `ψ_c(s)` without the scale.
    pub fn convex_part(s: f64) -> f64 {
        CONVEX_COEFF * s * s
    }

    /// `ψ_e(s)` without the scale.
    pub fn concave_part(s: f64) -> f64 {
        let s2 = s * s;
        -16.0 * s2 * s2 + (64.0 / 3.0) * s2 * s + 57.0 * s2 - 0.5625
    }

    /// `ψ(s)`.
    pub fn value(&self, s: f64) -> f64 {
        // 63s² − ψ_e(s) = 16s⁴ − (64/3)s³ + 6s² + 0.5625
        let s2 = s * s;
        self.c_dw * (16.0 * s2 * s2 - (64.0 / 3.0) * s2 * s + 6.0 * s2 + 0.5625)
    }

    /// `c_dw ψ_c'(s)`.
    pub fn cprime(&self, s: f64) -> f64 {
        self.c_dw * 2.0 * CONVEX_COEFF * s
    }

    /// `c_dw ψ_e'(s)`.
    pub fn eprime(&self, s: f64) -> f64 {
        self.c_dw * s * (-64.0 * s * s + 64.0 * s + 114.0)
    }

    /// `ψ'(s)`.
    pub fn derivative(&self, s: f64) -> f64 {
        self.cprime(s) - self.eprime(s)
    }

    /// `ψ''(s)`.
    pub fn second_derivative(&self, s: f64) -> f64 {
        self.c_dw * (192.0 * s * s - 128.0 * s + 12.0)
    }

    /// Slope of the implicit term, `c_dw ψ_c''`.
    pub fn implicit_slope(&self) -> f64 {
        2.0 * CONVEX_COEFF * self.c_dw
    }
}
