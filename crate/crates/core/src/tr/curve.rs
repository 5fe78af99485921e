use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formal::{LaurentPoly, Rational};

/// A curve `x = z^2/2`, `y = y(z)` given by its Laurent germ at `z = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCurve {
    label: String,
    y: LaurentPoly,
    /// `z (y(z) - y(-z))`, the kernel denominator with `dx = z dz` stripped.
    denominator: LaurentPoly,
}

impl SpectralCurve {
    pub fn new(label: impl Into<String>, y: LaurentPoly) -> Result<Self> {
        let label = label.into();
        let odd = y.clone() - y.reflect();
        if odd.is_zero() {
            return Err(Error::DegenerateCurve(label));
        }
        let denominator = odd.shift(1);
        Ok(Self { label, y, denominator })
    }

    /// `y = 1/z`: irregular branch point.
    pub fn bessel() -> Self {
        Self::new("bessel", LaurentPoly::monomial(-1, Rational::from_integer(1.into())))
            .expect("bessel curve is non-degenerate")
    }

    /// `y = z`: regular branch point.
    pub fn airy() -> Self {
        Self::new("airy", LaurentPoly::monomial(1, Rational::from_integer(1.into())))
            .expect("airy curve is non-degenerate")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn y_germ(&self) -> &LaurentPoly {
        &self.y
    }

    /// Lowest exponent of `1 / (z (y(z) - y(-z)))`.
    pub fn prefactor_leading_exponent(&self) -> i64 {
        -self.denominator.min_exponent().expect("non-degenerate")
    }

    /// `1 / (z (y(z) - y(-z)))` truncated to exponents `<= max_exp`.
    pub fn kernel_prefactor(&self, max_exp: i64) -> LaurentPoly {
        self.denominator.inverse_truncated(max_exp).expect("non-degenerate")
    }
}

/// Coefficients `c[(a, b)]` of `K(z1, z) dz / dz1 = sum c[(a,b)] z^a z1^-b`,
/// expanded for `|z| < |z1|`.
///
/// With `x = z^2/2` the kernel is `D(z) / (z - z1)` where
/// `D = 1 / (z (y(z) - y(-z)))`, and `1/(z - z1) = -sum_{k>=0} z^k z1^{-k-1}`.
/// `order` bounds both the geometric index `k` and the number of retained
/// exponents of `D` above its leading one.
pub fn kernel_coeffs(curve: &SpectralCurve, order: usize) -> BTreeMap<(i64, i64), Rational> {
    let mut out = BTreeMap::new();
    if order == 0 {
        return out;
    }
    let lead = curve.prefactor_leading_exponent();
    let prefactor = curve.kernel_prefactor(lead + order as i64 - 1);
    for k in 0..order as i64 {
        for (d_exp, d) in prefactor.terms() {
            let c: Rational = -d.clone();
            if !c.is_zero() {
                out.insert((d_exp + k, k + 1), c);
            }
        }
    }
    out
}
