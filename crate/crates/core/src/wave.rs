//! Principal specialisation `p_i = z^-i` of the partition function, the wave
//! function `psi(z, hbar) = sum a_d (hbar/z)^d`, and its quantum curve.
//!
//! `psi_0 = exp(z/hbar) z^(-1/2) psi` is never expanded; statements about it
//! go through the conjugated operator acting on `psi`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bessel::{odd_partitions, UTable};
use crate::error::{Error, Result};
use crate::formal::{double_factorial, factorial, format_rational, rat, Rational};
use crate::report::{Report, ResidualTerm};
use crate::series::{free_energy, PSeries};

/// `S_0(z) = -z`.
pub const S0: &str = "-z";
/// `S_1(z) = -1/2 log z`.
pub const S1: &str = "-1/2 log z";

/// Truncated power series `sum_{d=0}^{N} a_d w^d` in `w = hbar / z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarSeries {
    coeffs: Vec<Rational>,
}

impl OneVarSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Highest stored power of `w`; `None` when empty.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Product truncated at the shorter length.
    pub fn mul(&self, other: &OneVarSeries) -> OneVarSeries {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        OneVarSeries { coeffs: out }
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<OneVarSeries> {
        let c0 = self.coeff(0);
        if !c0.is_zero() {
            return Err(Error::NonZeroConstant(format_rational(&c0)));
        }
        let len = self.coeffs.len();
        let mut acc = vec![Rational::zero(); len];
        let mut power = OneVarSeries { coeffs: acc.clone() };
        if len > 0 {
            acc[0] = Rational::one();
            power.coeffs[0] = Rational::one();
        }
        for k in 1..len {
            power = power.mul(self);
            let inv_k = Rational::new(BigInt::one(), BigInt::from(k));
            power.coeffs.iter_mut().for_each(|c| *c *= &inv_k);
            for (a, p) in acc.iter_mut().zip(&power.coeffs) {
                *a += p;
            }
        }
        Ok(OneVarSeries { coeffs: acc })
    }
}

/// `{"var": "hbar_over_z", "coeffs": ["1", "1/8", ...]}`.
impl Serialize for OneVarSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OneVarSeries", 2)?;
        st.serialize_field("var", "hbar_over_z")?;
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// `p_i -> z^-i`: a monomial of degree `d` carries `hbar^d`, so it lands on
/// `w^d`.
pub fn principal_specialize(a: &PSeries) -> OneVarSeries {
    let mut coeffs = vec![Rational::zero(); a.order() as usize + 1];
    for (m, c) in a.terms() {
        coeffs[m.degree() as usize] += c;
    }
    OneVarSeries { coeffs }
}

/// `a_d = (2d-1)!!^2 / (8^d d!)`.
pub fn wave_coeff(d: i64) -> Result<Rational> {
    if d < 0 {
        return Err(Error::NegativeIndex(d));
    }
    let df = double_factorial(2 * d - 1)?;
    let den = BigInt::from(8).pow(d as u32) * factorial(d as u64);
    Ok(Rational::new(&df * &df, den))
}

/// `a_0 .. a_order` from the closed form.
pub fn wave_function(order: usize) -> OneVarSeries {
    OneVarSeries { coeffs: (0..=order as i64).map(|d| wave_coeff(d).expect("d >= 0")).collect() }
}

/// Coefficients of `1/2 z^2 psi'' + hbar^-1 z^2 psi' + psi/8` in `w`:
/// `1/2 d(d+1) a_d + a_d/8 - (d+1) a_{d+1}` for `d < N`.
pub fn quantum_curve_residual(psi: &OneVarSeries) -> OneVarSeries {
    let n = psi.coeffs.len();
    let coeffs = (0..n.saturating_sub(1))
        .map(|d| {
            let a = &psi.coeffs[d];
            let next = &psi.coeffs[d + 1];
            let dd = d as i64;
            a * rat(dd * (dd + 1), 2) + a * rat(1, 8) - next * BigInt::from(dd + 1)
        })
        .collect();
    OneVarSeries { coeffs }
}

/// Laurent polynomial in `hbar` and `z`, keyed by `(hbar exponent, z exponent)`.
type HzSeries = BTreeMap<(i64, i64), Rational>;

fn hz_add(acc: &mut HzSeries, key: (i64, i64), c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(key).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&key);
    }
}

fn hz_d_dz(s: &HzSeries) -> HzSeries {
    let mut out = HzSeries::new();
    for (&(h, z), c) in s {
        hz_add(&mut out, (h, z - 1), c * BigInt::from(z));
    }
    out
}

fn hz_times(s: &HzSeries, h: i64, z: i64, c: &Rational) -> HzSeries {
    s.iter().map(|(&(a, b), v)| ((a + h, b + z), v * c)).collect()
}

/// `hbar^2 z^2 psi'' + 2 hbar z^2 psi' + hbar^2/4 psi`, the `psi_0` operator
/// `hbar^2 z^2 d^2 + hbar^2 z d - z^2` conjugated by `exp(z/hbar) z^(-1/2)`.
/// Every term sits at `hbar^(d+2) z^-d`; the result lists the coefficient of
/// `hbar^2 w^d` for `d < N`.
pub fn conjugated_residual(psi: &OneVarSeries) -> OneVarSeries {
    let mut f = HzSeries::new();
    for (d, a) in psi.coeffs.iter().enumerate() {
        hz_add(&mut f, (d as i64, -(d as i64)), a.clone());
    }
    let d1 = hz_d_dz(&f);
    let d2 = hz_d_dz(&d1);
    let mut total = HzSeries::new();
    for part in [hz_times(&d2, 2, 2, &Rational::one()), hz_times(&d1, 1, 2, &rat(2, 1)), hz_times(&f, 2, 0, &rat(1, 4))]
    {
        for (k, c) in part {
            hz_add(&mut total, k, c);
        }
    }
    let n = psi.coeffs.len().saturating_sub(1);
    let mut coeffs = vec![Rational::zero(); n];
    for ((h, z), c) in total {
        assert_eq!(h + z, 2, "conjugated operator left the hbar/z grading");
        let d = (h - 2) as usize;
        if d < n {
            coeffs[d] = c;
        }
    }
    OneVarSeries { coeffs }
}

/// Quantum curve check on both routes to `psi`: closed form and
/// specialisation of `Z`. Also compares the two routes term by term.
pub fn quantum_curve_check(table: &UTable, order: u32) -> Report {
    let closed = wave_function(order as usize);
    let z = free_energy(table, order).exp_truncated().expect("F has no constant term");
    let specialised = principal_specialize(&z);
    let mut residuals = Vec::new();
    for (label, psi) in [("closed form", &closed), ("specialised Z", &specialised)] {
        for (d, c) in quantum_curve_residual(psi).coeffs.iter().enumerate() {
            if !c.is_zero() {
                residuals.push(ResidualTerm::new(
                    format!("quantum curve ({label})"),
                    format!("w^{d}"),
                    format_rational(c),
                ));
            }
        }
        let conj = conjugated_residual(psi);
        for (d, c) in conj.coeffs.iter().enumerate() {
            if !c.is_zero() {
                residuals.push(ResidualTerm::new(
                    format!("psi_0 equation ({label})"),
                    format!("hbar^2 w^{d}"),
                    format_rational(c),
                ));
            }
        }
    }
    for d in 0..=order as usize {
        let diff = specialised.coeff(d) - closed.coeff(d);
        if !diff.is_zero() {
            residuals.push(ResidualTerm::new("specialised Z - closed form", format!("w^{d}"), format_rational(&diff)));
        }
    }
    Report::new("quantum-curve", order, i64::from(order) - 1, residuals)
}

/// `sum_{2g-2+n=d} (-1)^n / n! sum_{mu ordered} U_{g,n}(mu)`, straight from
/// the table.
fn signed_specialised_free_energy(table: &UTable, d: u32) -> Rational {
    let mut acc = Rational::zero();
    for g in 1..=d.div_ceil(2) {
        let n = i64::from(d) - 2 * i64::from(g) + 2;
        if n < 1 {
            continue;
        }
        let mut sum = Rational::zero();
        for parts in odd_partitions(d, n as u32) {
            let key = crate::bessel::MuKey::new(parts).expect("odd parts");
            sum += table.u(g, &key) * key.orderings();
        }
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        acc += sum * Rational::new(sign, factorial(n as u64));
    }
    acc
}

/// Per-degree comparison of `log Z` specialised at `p_i = z^-i` with
/// `hbar -> -hbar` against the signed sum over the table.
pub fn sk_identity_residuals(table: &UTable, order: u32) -> Vec<(u32, Rational, Rational)> {
    let z = free_energy(table, order).exp_truncated().expect("F has no constant term");
    let log_psi = principal_specialize(&z.log_truncated().expect("Z has constant term 1"));
    (0..=order)
        .filter_map(|d| {
            let sign = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let lhs = log_psi.coeff(d as usize) * sign;
            let rhs = signed_specialised_free_energy(table, d);
            (lhs != rhs).then_some((d, lhs, rhs))
        })
        .collect()
}

pub fn sk_identity_check(table: &UTable, order: u32) -> bool {
    sk_identity_residuals(table, order).is_empty()
}

pub fn sk_identity_report(table: &UTable, order: u32) -> Report {
    let residuals = sk_identity_residuals(table, order)
        .into_iter()
        .map(|(d, lhs, rhs)| {
            ResidualTerm::new("log Z|_(s=-hbar) - signed sum", format!("w^{d}"), format_rational(&(lhs - rhs)))
        })
        .collect();
    Report::new("sk-identity", order, i64::from(order), residuals)
}
