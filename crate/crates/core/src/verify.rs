//! Named verification targets, each producing a [`Report`].

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::bessel::{check_string_dilaton, odd_partitions, MuKey, UTable};
use crate::constraints::{evolve_check, kdv_check, virasoro_annihilation_check, virasoro_commutator_check};
use crate::formal::{format_rational, rat};
use crate::report::{Report, ResidualTerm};
use crate::series::{free_energy, PMonomial, PSeries};
use crate::tr::{extract_u, SpectralCurve, TrEngine};
use crate::wave::{quantum_curve_check, sk_identity_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Virasoro,
    Commutator,
    Cutjoin,
    Kdv,
    QuantumCurve,
    StringDilaton,
    OracleEquivalence,
    SkIdentity,
}

impl Target {
    pub const ALL: [Target; 8] = [
        Target::Virasoro,
        Target::Commutator,
        Target::Cutjoin,
        Target::Kdv,
        Target::QuantumCurve,
        Target::StringDilaton,
        Target::OracleEquivalence,
        Target::SkIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Virasoro => "virasoro",
            Target::Commutator => "commutator",
            Target::Cutjoin => "cutjoin",
            Target::Kdv => "kdv",
            Target::QuantumCurve => "quantum-curve",
            Target::StringDilaton => "string-dilaton",
            Target::OracleEquivalence => "oracle-equivalence",
            Target::SkIdentity => "sk-identity",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown verify target `{s}`"))
    }
}

/// Truncation parameters shared by all targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Weighted degree `N` for series-based checks.
    pub order: u32,
    /// Largest `2g - 2 + n` for table-based checks.
    pub chi_max: u32,
    /// Largest Virasoro index.
    pub m_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { order: 6, chi_max: 6, m_max: 4 }
    }
}

pub fn run_target(target: Target, table: &UTable, cfg: &VerifyConfig) -> Report {
    match target {
        Target::Virasoro => {
            let z = free_energy(table, cfg.order).exp_truncated().expect("F has no constant term");
            virasoro_annihilation_check(&z, cfg.m_max)
        }
        Target::Commutator => commutator_report(cfg.order, cfg.m_max),
        Target::Cutjoin => {
            let z = free_energy(table, cfg.order).exp_truncated().expect("F has no constant term");
            evolve_check(&z)
        }
        Target::Kdv => kdv_check(table, cfg.order).unwrap_or_else(|e| {
            Report::new("kdv", cfg.order, -1, vec![ResidualTerm::new("kdv", "order", e.to_string())])
        }),
        Target::QuantumCurve => quantum_curve_check(table, cfg.order),
        Target::StringDilaton => string_dilaton_report(table, cfg.chi_max),
        Target::OracleEquivalence => oracle_equivalence_report(table, cfg.chi_max),
        Target::SkIdentity => sk_identity_report(table, cfg.order),
    }
}

/// Every monomial in odd-indexed variables of weighted degree `<= max_degree`.
pub fn monomials_up_to(max_degree: u32) -> Vec<PMonomial> {
    let mut out = vec![PMonomial::one()];
    for d in 1..=max_degree {
        for n in 1..=d {
            for parts in odd_partitions(d, n) {
                out.push(PMonomial::from_parts(&parts).expect("odd parts"));
            }
        }
    }
    out
}

/// `[L_m, L_n] = (m - n) L_{m+n}` on each monomial of degree `<= max_degree`
/// for `n < m <= m_max`. Monomials are exact, so each one is stored at an
/// order high enough that no term of the output is cut.
pub fn commutator_report(max_degree: u32, m_max: u32) -> Report {
    let mut residuals = Vec::new();
    for mono in monomials_up_to(max_degree) {
        for m in 0..=m_max {
            for n in 0..m {
                let order = mono.degree() as u32 + 2 * (m + n) + 2;
                let a = PSeries::monomial(mono.clone(), rat(1, 1), order);
                if !virasoro_commutator_check(m, n, &a) {
                    residuals.push(ResidualTerm::new(
                        format!("[L_{m}, L_{n}] - {}L_{}", m - n, m + n),
                        mono.to_string(),
                        "nonzero",
                    ));
                }
            }
        }
    }
    Report::new("commutator", max_degree, i64::from(max_degree), residuals)
}

/// String/dilaton identity on every nonzero `(g, mu)` with `2g - 2 + n <= chi_max`.
pub fn string_dilaton_report(table: &UTable, chi_max: u32) -> Report {
    let mut residuals = Vec::new();
    for e in table.entries(chi_max, None) {
        if !check_string_dilaton(table, e.g, &e.mu) {
            residuals.push(ResidualTerm::new(
                "U_{g,n+1}(1, mu) - (2g-2+n) U_{g,n}(mu)",
                format!("g={} mu={:?}", e.g, e.mu.parts()),
                "nonzero",
            ));
        }
    }
    Report::new("string-dilaton", chi_max, i64::from(chi_max), residuals)
}

/// Residue pipeline on the Bessel curve against the closed recursion, for
/// every stable `(g, n)` with `2g - 2 + n <= chi_max`.
pub fn oracle_equivalence_report(table: &UTable, chi_max: u32) -> Report {
    let engine = TrEngine::new(SpectralCurve::bessel());
    let mut residuals = Vec::new();
    for chi in 1..=chi_max {
        for g in 0..=chi.div_ceil(2) {
            let n = i64::from(chi) + 2 - 2 * i64::from(g);
            if n < 1 {
                continue;
            }
            let n = n as u32;
            let label = format!("omega_{{{g},{n}}}");
            let from_tr = match engine.omega(g, n).and_then(|o| extract_u(&o)) {
                Ok(map) => map,
                Err(e) => {
                    residuals.push(ResidualTerm::new(label, "engine", e.to_string()));
                    continue;
                }
            };
            for parts in odd_partitions(chi, n) {
                let expected = table.u_value(g, &parts);
                let got = from_tr.get(&parts).cloned().unwrap_or_else(Zero::zero);
                if got != expected {
                    residuals.push(ResidualTerm::new(
                        label.clone(),
                        format!("{parts:?}"),
                        format_rational(&(got - expected)),
                    ));
                }
            }
            for (mu, v) in &from_tr {
                let on_support =
                    MuKey::new(mu.clone()).is_ok() && mu.iter().map(|&p| u64::from(p)).sum::<u64>() == u64::from(chi);
                if !on_support && !v.is_zero() {
                    residuals.push(ResidualTerm::new(label.clone(), format!("{mu:?}"), format_rational(v)));
                }
            }
        }
    }
    Report::new("oracle-equivalence", chi_max, i64::from(chi_max), residuals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("kdV".parse::<Target>().is_err());
    }

    #[test]
    fn monomial_count() {
        // odd-part partitions of 0..=5: 1, 1, 1, 2, 2, 3
        assert_eq!(monomials_up_to(5).len(), 10);
    }

    #[test]
    fn all_targets_pass_at_small_order() {
        let table = UTable::new();
        let cfg = VerifyConfig { order: 6, chi_max: 4, m_max: 2 };
        for t in Target::ALL {
            let r = run_target(t, &table, &cfg);
            assert!(r.passed(), "{t}: {:?}", r.residual_terms);
            assert_eq!(r.check, t.name());
        }
    }

    #[test]
    fn mutated_table_fails_oracle() {
        let table = UTable::with_base_case(rat(1, 4));
        let r = oracle_equivalence_report(&table, 3);
        assert!(!r.passed());
    }
}
