use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::curve::{kernel_coeffs, SpectralCurve};
use crate::error::{Error, Result};
use crate::formal::{factorial, format_rational, rat, Rational};
use crate::memo::MemoTable;

/// Principal-part tensor of a correlation differential:
/// `omega_{g,n} = sum coeffs[mu] prod_i mu_i dz_i / z_i^(mu_i + 1)`.
///
/// `coeffs` holds every ordered tuple, so the map is the full symmetric
/// tensor; [`extract_u`] checks the symmetry and canonicalises it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaCoeffs {
    pub g: u32,
    pub n: u32,
    pub coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl OmegaCoeffs {
    /// Largest pole order `mu_i + 1` among stored terms.
    pub fn max_pole_order(&self) -> Option<u32> {
        self.coeffs.keys().flat_map(|k| k.iter().copied()).max().map(|m| m + 1)
    }

    /// Canonical records, one per sorted key. Fails if the tensor is not
    /// symmetric.
    pub fn records(&self) -> Result<Vec<OmegaRecord>> {
        Ok(extract_u(self)?
            .into_iter()
            .map(|(mu, value)| OmegaRecord { g: self.g, n: self.n, mu, value: format_rational(&value) })
            .collect())
    }
}

/// One line of the serialised record stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaRecord {
    pub g: u32,
    pub n: u32,
    pub mu: Vec<u32>,
    pub value: String,
}

/// Canonicalises a symmetric tensor to descending-sorted keys. Every
/// permutation class must be complete and constant; anything else is an
/// internal inconsistency.
pub fn extract_u(o: &OmegaCoeffs) -> Result<BTreeMap<Vec<u32>, Rational>> {
    let mut classes: BTreeMap<Vec<u32>, (usize, Rational)> = BTreeMap::new();
    for (mu, v) in &o.coeffs {
        let mut key = mu.clone();
        key.sort_unstable_by(|a, b| b.cmp(a));
        match classes.get_mut(&key) {
            Some((count, value)) => {
                if value != v {
                    return Err(asymmetric(o, key));
                }
                *count += 1;
            }
            None => {
                classes.insert(key, (1, v.clone()));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (key, (count, value)) in classes {
        if BigInt::from(count) != distinct_permutations(&key) {
            return Err(asymmetric(o, key));
        }
        out.insert(key, value);
    }
    Ok(out)
}

fn asymmetric(o: &OmegaCoeffs, mu: Vec<u32>) -> Error {
    Error::AsymmetricTensor { g: o.g, n: o.n, mu }
}

fn distinct_permutations(sorted: &[u32]) -> BigInt {
    let mut denom = BigInt::one();
    let mut run = 0u64;
    for (i, p) in sorted.iter().enumerate() {
        run += 1;
        if sorted.get(i + 1) != Some(p) {
            denom *= factorial(run);
            run = 0;
        }
    }
    factorial(sorted.len() as u64) / denom
}

/// One term of a factor `omega(±z, z_rest)` expanded at `z = 0`: a Laurent
/// monomial `coeff z^z_exp dz` times the basis element indexed by `rest` in
/// the remaining points.
struct FactorTerm {
    z_exp: i64,
    coeff: Rational,
    rest: Vec<u32>,
}

/// Sign picked up by a factor evaluated at `-z`: `(-z)^e d(-z) = (-1)^(e+1) z^e dz`.
fn reflection_sign(z_exp: i64) -> bool {
    (z_exp + 1).rem_euclid(2) == 1
}

/// Memoised recursion on one curve. Lower `(g, n)` results are shared
/// through an idempotent-insert table, so an engine may be used from several
/// threads.
#[derive(Debug)]
pub struct TrEngine {
    curve: SpectralCurve,
    memo: MemoTable<(u32, u32), Arc<OmegaCoeffs>>,
}

impl TrEngine {
    pub fn new(curve: SpectralCurve) -> Self {
        Self { curve, memo: MemoTable::new() }
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    /// `omega_{g,n}` for `2g - 2 + n > 0`.
    pub fn omega(&self, g: u32, n: u32) -> Result<Arc<OmegaCoeffs>> {
        if n == 0 || 2 * i64::from(g) - 2 + i64::from(n) <= 0 {
            return Err(Error::UnstableTopology { g, n });
        }
        if let Some(hit) = self.memo.get(&(g, n)) {
            return Ok(hit);
        }
        let computed = Arc::new(self.residue_step(g, n)?);
        Ok(self.memo.insert((g, n), computed))
    }

    /// Every `omega_{g,n}` with `1 <= 2g - 2 + n <= chi_max`, in increasing
    /// `2g - 2 + n`.
    pub fn omega_up_to(&self, chi_max: u32) -> Result<Vec<Arc<OmegaCoeffs>>> {
        let mut out = Vec::new();
        for chi in 1..=i64::from(chi_max) {
            for g in 0..=(chi + 2) / 2 {
                let n = chi - 2 * g + 2;
                if n >= 1 {
                    out.push(self.omega(g as u32, n as u32)?);
                }
            }
        }
        Ok(out)
    }

    /// Terms of `omega_{g,k+1}(±z, z_rest)`. For `(0, 2)` the diagonal-free
    /// expansion `sum_{m>=1} m z^(m-1) z_k^(-m-1)` is used, cut at `m <= m_max`.
    fn factor_terms(&self, g: u32, k: usize, reflected: bool, m_max: i64) -> Result<Vec<FactorTerm>> {
        let sign = |z_exp: i64, c: Rational| {
            if reflected && reflection_sign(z_exp) {
                -c
            } else {
                c
            }
        };
        if (g, k) == (0, 1) {
            return Ok((1..=m_max)
                .map(|m| FactorTerm { z_exp: m - 1, coeff: sign(m - 1, Rational::one()), rest: vec![m as u32] })
                .collect());
        }
        let omega = self.omega(g, k as u32 + 1)?;
        Ok(omega
            .coeffs
            .iter()
            .map(|(mu, u)| {
                let z_exp = -i64::from(mu[0]) - 1;
                let density = u * BigInt::from(mu[0]);
                FactorTerm { z_exp, coeff: sign(z_exp, density), rest: mu[1..].to_vec() }
            })
            .collect())
    }

    fn is_bidifferential(g: u32, k: usize) -> bool {
        (g, k) == (0, 1)
    }

    /// Expansion of the bracket `omega_{g-1,n+1}(z, -z, z_S) + sum' omega omega`
    /// at `z = 0`, keyed by `(z exponent, basis index in z_S)`, with `dz^2`
    /// stripped.
    fn bracket(&self, g: u32, n: u32) -> Result<BTreeMap<(i64, Vec<u32>), Rational>> {
        let mut out: BTreeMap<(i64, Vec<u32>), Rational> = BTreeMap::new();
        let mut add = |key: (i64, Vec<u32>), c: Rational| {
            if c.is_zero() {
                return;
            }
            let slot = out.entry(key).or_insert_with(Rational::zero);
            *slot += c;
        };
        let s = (n - 1) as usize;
        let lead = self.curve.prefactor_leading_exponent();

        if g >= 1 {
            if (g - 1, n + 1) == (0, 2) {
                // omega_{0,2}(z, -z) = -dz^2 / (4 z^2)
                add((-2, vec![]), rat(-1, 4));
            } else {
                for (mu, u) in &self.omega(g - 1, n + 1)?.coeffs {
                    let (ea, eb) = (-i64::from(mu[0]) - 1, -i64::from(mu[1]) - 1);
                    let mut c = u * (BigInt::from(mu[0]) * mu[1]);
                    if reflection_sign(eb) {
                        c = -c;
                    }
                    add((ea + eb, mu[2..].to_vec()), c);
                }
            }
        }

        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0u64..(1u64 << s) {
                let left_pos: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
                let right_pos: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 0).collect();
                let (kl, kr) = (left_pos.len(), right_pos.len());
                // exclude omega_{0,1}
                if (g1, kl) == (0, 0) || (g2, kr) == (0, 0) {
                    continue;
                }
                let (left, right) = match (Self::is_bidifferential(g1, kl), Self::is_bidifferential(g2, kr)) {
                    (false, false) => (self.factor_terms(g1, kl, false, 0)?, self.factor_terms(g2, kr, true, 0)?),
                    (true, false) => {
                        let right = self.factor_terms(g2, kr, true, 0)?;
                        let Some(other_min) = right.iter().map(|t| t.z_exp).min() else { continue };
                        (self.factor_terms(0, 1, false, -lead - other_min)?, right)
                    }
                    (false, true) => {
                        let left = self.factor_terms(g1, kl, false, 0)?;
                        let Some(other_min) = left.iter().map(|t| t.z_exp).min() else { continue };
                        let right = self.factor_terms(0, 1, true, -lead - other_min)?;
                        (left, right)
                    }
                    (true, true) => (self.factor_terms(0, 1, false, -lead)?, self.factor_terms(0, 1, true, -lead)?),
                };
                for a in &left {
                    for b in &right {
                        let mut rest = vec![0u32; s];
                        for (slot, &v) in left_pos.iter().zip(&a.rest) {
                            rest[*slot] = v;
                        }
                        for (slot, &v) in right_pos.iter().zip(&b.rest) {
                            rest[*slot] = v;
                        }
                        add((a.z_exp + b.z_exp, rest), &a.coeff * &b.coeff);
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `omega_{g,n}(z1, z_S) = Res_{z=0} K(z1, z) [bracket]`.
    ///
    /// The residue only sees kernel terms `z^a z1^-b` with `a = -1 - e` for
    /// some bracket exponent `e`. Since the prefactor starts at `z^lead` and
    /// the geometric index is non-negative, `order = -e_min - lead` kernel
    /// terms suffice; this also bounds the `omega_{0,2}` expansions above.
    fn residue_step(&self, g: u32, n: u32) -> Result<OmegaCoeffs> {
        let bracket = self.bracket(g, n)?;
        let mut coeffs = BTreeMap::new();
        let Some(e_min) = bracket.keys().map(|(e, _)| *e).min() else {
            return Ok(OmegaCoeffs { g, n, coeffs });
        };
        let order = (-e_min - self.curve.prefactor_leading_exponent()).max(0) as usize;
        let kernel = kernel_coeffs(&self.curve, order);

        let mut by_exp: HashMap<i64, Vec<(&Vec<u32>, &Rational)>> = HashMap::new();
        for ((e, rest), c) in &bracket {
            by_exp.entry(*e).or_default().push((rest, c));
        }

        let mut density: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (&(a, b), kc) in &kernel {
            let Some(terms) = by_exp.get(&(-1 - a)) else { continue };
            for (rest, c) in terms {
                // b >= 1; b == 1 would be a simple pole at z1 = 0, which must cancel
                let mut key = Vec::with_capacity(n as usize);
                key.push((b - 1) as u32);
                key.extend_from_slice(rest);
                *density.entry(key).or_insert_with(Rational::zero) += kc * *c;
            }
        }
        for (key, d) in density {
            if d.is_zero() {
                continue;
            }
            if key[0] == 0 {
                return Err(Error::NonPrincipalTerm { g, n });
            }
            // the other points are already in the `mu dz / z^(mu+1)` basis
            let first = BigInt::from(key[0]);
            coeffs.insert(key, d / first);
        }
        Ok(OmegaCoeffs { g, n, coeffs })
    }
}

/// One-shot `omega_{g,n}` for `curve`.
pub fn compute_omega(curve: &SpectralCurve, g: u32, n: u32) -> Result<OmegaCoeffs> {
    let engine = TrEngine::new(curve.clone());
    Ok((*engine.omega(g, n)?).clone())
}
