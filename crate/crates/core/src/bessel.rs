//! The closed recursion for the Bessel-curve coefficients `U_{g,n}(mu)`,
//! together with the string/dilaton identity and the tabulated low-genus
//! closed forms.
//!
//! `U_{g,n}` vanishes unless every part of `mu` is odd and
//! `sum(mu) = 2g - 2 + n`; the table never stores such zeros and lookups
//! short-circuit before recursing. The recursion is seeded by
//! `U_{1,1}(1) = 1/8`, with `U_{0,1} = U_{0,2} = 0`.

use serde::{Serialize, Serializer};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formal::{factorial, format_rational, rat, Rational};
use crate::memo::MemoTable;

/// Non-empty multiset of positive odd integers, stored sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuKey(Vec<u32>);

impl MuKey {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p % 2 == 0) {
            return Err(Error::InvalidMuKey(parts));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    /// `mu ∪ {1}`.
    pub fn with_one(&self) -> MuKey {
        let mut parts = self.0.clone();
        parts.push(1);
        MuKey(parts)
    }

    /// Number of distinct orderings of the multiset.
    pub fn orderings(&self) -> BigInt {
        let mut denom = BigInt::from(1);
        let mut run = 1u64;
        for w in self.0.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                denom *= factorial(run);
                run = 1;
            }
        }
        denom *= factorial(run);
        factorial(self.0.len() as u64) / denom
    }
}

impl Serialize for MuKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// True iff every part is odd and `sum(mu) = 2g - 2 + n`.
pub fn support_predicate(g: u32, parts: &[u32]) -> bool {
    if parts.is_empty() || parts.iter().any(|&p| p % 2 == 0) {
        return false;
    }
    let sum: i64 = parts.iter().map(|&p| i64::from(p)).sum();
    sum == euler_weight(g, parts.len())
}

/// `2g - 2 + n`.
pub fn euler_weight(g: u32, n: usize) -> i64 {
    2 * i64::from(g) - 2 + n as i64
}

/// All multisets of exactly `count` positive odd parts summing to `total`,
/// each sorted descending, in descending lexicographic order.
pub fn odd_partitions(total: u32, count: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, count: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if count == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // remaining count-1 parts need at least count-1
        if total < count {
            return;
        }
        let mut part = max_part.min(total - (count - 1));
        if part.is_multiple_of(2) {
            part = part.saturating_sub(1);
        }
        while part >= 1 {
            prefix.push(part);
            go(total - part, count - 1, part, prefix, out);
            prefix.pop();
            if part < 2 {
                break;
            }
            part -= 2;
        }
    }
    let mut out = Vec::new();
    if count == 0 {
        return out;
    }
    go(total, count, total, &mut Vec::new(), &mut out);
    out
}

/// One stored coefficient, serialised as `{"g", "n", "mu", "value"}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UEntry {
    pub g: u32,
    pub mu: MuKey,
    pub value: Rational,
}

impl Serialize for UEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("UEntry", 4)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("n", &self.mu.len())?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("value", &format_rational(&self.value))?;
        st.end()
    }
}

/// Memoised evaluator of the recursion. Safe to share between threads.
#[derive(Debug)]
pub struct UTable {
    memo: MemoTable<(u32, Vec<u32>), Rational>,
    base: Rational,
}

impl Default for UTable {
    fn default() -> Self {
        Self::new()
    }
}

impl UTable {
    pub fn new() -> Self {
        Self::with_base_case(rat(1, 8))
    }

    /// Table seeded with an arbitrary `U_{1,1}(1)`. Only the true value 1/8
    /// produces the Bessel coefficients; other seeds exist for mutation tests.
    pub fn with_base_case(u11: Rational) -> Self {
        let memo = MemoTable::new();
        if !u11.is_zero() {
            memo.insert((1, vec![1]), u11.clone());
        }
        Self { memo, base: u11 }
    }

    pub fn base_case(&self) -> &Rational {
        &self.base
    }

    /// Number of memoised non-zero entries.
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn u(&self, g: u32, mu: &MuKey) -> Rational {
        self.u_value(g, mu.parts())
    }

    /// `U_{g,n}(mu)` for any ordering of `mu`. Even or zero parts, and any
    /// `mu` off the support, give 0 without recursing.
    pub fn u_value(&self, g: u32, parts: &[u32]) -> Rational {
        if !support_predicate(g, parts) {
            return Rational::zero();
        }
        let mut key = parts.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if (g, key.as_slice()) == (1, [1].as_slice()) {
            return self.base.clone();
        }
        let memo_key = (g, key);
        if let Some(v) = self.memo.get(&memo_key) {
            return v;
        }
        let value = self.recursion_step(g, &memo_key.1, 0);
        if value.is_zero() {
            return value;
        }
        self.memo.insert(memo_key, value)
    }

    /// Evaluates one step of the recursion with `parts[first]` playing the
    /// role of the distinguished part. Lower coefficients come from the memo.
    pub fn u_value_with_first(&self, g: u32, parts: &[u32], first: usize) -> Rational {
        if !support_predicate(g, parts) {
            return Rational::zero();
        }
        if (g, parts) == (1, [1].as_slice()) {
            return self.base.clone();
        }
        self.recursion_step(g, parts, first)
    }

    fn recursion_step(&self, g: u32, parts: &[u32], first: usize) -> Rational {
        let mu1 = parts[first];
        let rest: Vec<u32> = parts.iter().enumerate().filter(|&(i, _)| i != first).map(|(_, &p)| p).collect();

        let mut total = Rational::zero();

        // merge term: (mu1 + mu_k - 1) U_{g,n-1}(mu1 + mu_k - 1, mu_{S\k})
        let mut merged = Vec::with_capacity(rest.len());
        for k in 0..rest.len() {
            let joined = mu1 + rest[k] - 1;
            merged.clear();
            merged.push(joined);
            merged.extend(rest.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &p)| p));
            let u = self.u_value(g, &merged);
            if !u.is_zero() {
                total += u * BigInt::from(joined);
            }
        }

        // split term: 1/2 sum_{alpha+beta = mu1-1, odd} alpha beta [ ... ]
        let mut split = Rational::zero();
        let mut alpha = 1;
        while alpha + 1 < mu1 {
            let beta = mu1 - 1 - alpha;
            let weight = BigInt::from(alpha) * beta;
            let mut inner = Rational::zero();
            if g >= 1 {
                let mut parts = Vec::with_capacity(rest.len() + 2);
                parts.push(alpha);
                parts.push(beta);
                parts.extend_from_slice(&rest);
                inner += self.u_value(g - 1, &parts);
            }
            inner += self.product_sum(g, alpha, beta, &rest);
            if !inner.is_zero() {
                split += inner * weight;
            }
            alpha += 2;
        }
        total += split / BigInt::from(2);
        total / BigInt::from(mu1)
    }

    /// `sum_{g1+g2=g, I ⊔ J = S} U_{g1}(alpha, mu_I) U_{g2}(beta, mu_J)`, over
    /// labelled subsets of the positions in `rest`.
    fn product_sum(&self, g: u32, alpha: u32, beta: u32, rest: &[u32]) -> Rational {
        let mut acc = Rational::zero();
        let s = rest.len();
        let mut left = Vec::with_capacity(s + 1);
        let mut right = Vec::with_capacity(s + 1);
        for mask in 0u64..(1u64 << s) {
            left.clear();
            right.clear();
            left.push(alpha);
            right.push(beta);
            for (i, &p) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(p);
                } else {
                    right.push(p);
                }
            }
            for g1 in 0..=g {
                let a = self.u_value(g1, &left);
                if a.is_zero() {
                    continue;
                }
                let b = self.u_value(g - g1, &right);
                if !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }

    /// All non-zero coefficients with `1 <= 2g - 2 + n <= chi_max`, ordered by
    /// `(2g - 2 + n, g, mu)` with `mu` descending lexicographically.
    pub fn entries(&self, chi_max: u32, g_max: Option<u32>) -> Vec<UEntry> {
        let mut out = Vec::new();
        for chi in 1..=chi_max {
            for g in 0..=(chi + 2) / 2 {
                if g_max.is_some_and(|m| g > m) {
                    continue;
                }
                let n = i64::from(chi) - 2 * i64::from(g) + 2;
                if n < 1 {
                    continue;
                }
                for parts in odd_partitions(chi, n as u32) {
                    let value = self.u_value(g, &parts);
                    if !value.is_zero() {
                        out.push(UEntry { g, mu: MuKey(parts), value });
                    }
                }
            }
        }
        out
    }
}

/// `U_{g,n+1}(1, mu) == (2g - 2 + n) U_{g,n}(mu)`.
pub fn check_string_dilaton(table: &UTable, g: u32, mu: &MuKey) -> bool {
    let lhs = table.u(g, &mu.with_one());
    let rhs = table.u(g, mu) * BigInt::from(euler_weight(g, mu.len()));
    lhs == rhs
}

/// One tabulated family `U_{g,n}(shape, 1, ..., 1) = num/den (n + 2g - 3)!`.
struct Family {
    g: u32,
    shape: &'static [u32],
    num: i64,
    den: i64,
}

const FAMILIES: &[Family] = &[
    Family { g: 1, shape: &[], num: 1, den: 1 << 3 },
    Family { g: 2, shape: &[3], num: 3, den: 1 << 8 },
    Family { g: 3, shape: &[5], num: 15, den: 1 << 13 },
    Family { g: 3, shape: &[3, 3], num: 21, den: 5 << 12 },
    Family { g: 4, shape: &[7], num: 175, den: 1 << 19 },
    Family { g: 4, shape: &[5, 3], num: 575, den: 7 << 19 },
    Family { g: 4, shape: &[3, 3, 3], num: 2407, den: 105 << 18 },
];

/// The tabulated genus `<= 4` families, as `(g, shape)` with `shape` the parts
/// greater than one.
pub fn closed_form_families() -> impl Iterator<Item = (u32, &'static [u32])> {
    FAMILIES.iter().map(|f| (f.g, f.shape))
}

/// Closed form for `U_{g,n}(shape, 1, ..., 1)`, where `shape` lists the parts
/// greater than one and the remaining `n - shape.len()` parts are 1.
pub fn closed_form(g: u32, shape: &[u32], n: u32) -> Result<Rational> {
    let mut sorted = shape.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let fam = FAMILIES
        .iter()
        .find(|f| f.g == g && f.shape == sorted.as_slice())
        .ok_or_else(|| Error::UntabulatedFamily { g, shape: shape.to_vec() })?;
    let min = (fam.shape.len() as u32).max(1);
    if n < min {
        return Err(Error::TooFewPoints { shape: shape.to_vec(), n, min });
    }
    let fact = (i64::from(n) + 2 * i64::from(g) - 3) as u64;
    Ok(rat(fam.num, fam.den) * factorial(fact))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(p: &[u32]) -> MuKey {
        MuKey::new(p.to_vec()).unwrap()
    }

    #[test]
    fn u_value_examples() {
        let t = UTable::new();
        assert_eq!(t.u_value(1, &[1]), rat(1, 8));
        assert_eq!(t.u_value(2, &[3, 1]), rat(9, 128));
        assert_eq!(t.u_value(2, &[1, 3]), rat(9, 128));
        assert_eq!(t.u_value(3, &[3, 3]), rat(63, 512));
        assert_eq!(t.u_value(1, &[2]), rat(0, 1));
        assert_eq!(t.u_value(2, &[3]), rat(3, 128));
    }

    #[test]
    fn genus_zero_vanishes() {
        let t = UTable::new();
        for n in 1..7u32 {
            for parts in odd_partitions(n.saturating_sub(2).max(1), n) {
                assert!(t.u_value(0, &parts).is_zero());
            }
        }
    }

    #[test]
    fn off_support_is_not_memoised() {
        let t = UTable::new();
        let before = t.len();
        assert!(t.u_value(2, &[5, 1]).is_zero());
        assert!(t.u_value(4, &[9, 9, 9]).is_zero());
        assert_eq!(t.len(), before);
    }

    #[test]
    fn support_examples() {
        assert!(support_predicate(1, &[1, 1, 1]));
        assert!(support_predicate(2, &[3, 1]));
        assert!(!support_predicate(2, &[5, 1]));
        assert!(!support_predicate(1, &[]));
        assert!(!support_predicate(1, &[2]));
    }

    #[test]
    fn string_dilaton_examples() {
        let t = UTable::new();
        assert!(check_string_dilaton(&t, 1, &key(&[1])));
        assert_eq!(t.u_value(1, &[1, 1]), rat(1, 8));
        assert!(check_string_dilaton(&t, 2, &key(&[3])));
        assert_eq!(t.u_value(2, &[3, 1]), rat(9, 128));
        assert!(check_string_dilaton(&t, 0, &key(&[1, 1])));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form(4, &[7], 1).unwrap(), rat(7875, 32768));
        assert_eq!(closed_form(3, &[5], 2).unwrap(), rat(225, 1024));
        assert_eq!(closed_form(1, &[], 2).unwrap(), rat(1, 8));
        assert_eq!(closed_form(4, &[3, 5], 2).unwrap(), closed_form(4, &[5, 3], 2).unwrap());
        assert!(matches!(closed_form(2, &[5], 1), Err(Error::UntabulatedFamily { .. })));
        assert!(matches!(closed_form(4, &[3, 3, 3], 2), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn recursion_agrees_for_every_distinguished_part() {
        let t = UTable::new();
        for entry in t.entries(7, None) {
            let parts = entry.mu.parts();
            for first in 0..parts.len() {
                assert_eq!(
                    t.u_value_with_first(entry.g, parts, first),
                    entry.value,
                    "g={} mu={:?} first={}",
                    entry.g,
                    parts,
                    first
                );
            }
        }
    }

    #[test]
    fn odd_partition_enumeration() {
        assert_eq!(odd_partitions(6, 4), vec![vec![3, 1, 1, 1]]);
        assert_eq!(odd_partitions(6, 2), vec![vec![5, 1], vec![3, 3]]);
        assert!(odd_partitions(5, 2).is_empty());
        assert!(odd_partitions(3, 0).is_empty());
    }

    #[test]
    fn orderings_count() {
        assert_eq!(key(&[3, 1, 1, 1]).orderings(), BigInt::from(4));
        assert_eq!(key(&[5, 3, 1]).orderings(), BigInt::from(6));
        assert_eq!(key(&[1, 1]).orderings(), BigInt::from(1));
    }

    #[test]
    fn mu_key_rejects_even_or_empty() {
        assert!(MuKey::new(vec![]).is_err());
        assert!(MuKey::new(vec![3, 2]).is_err());
        assert_eq!(key(&[1, 5, 3]).parts(), &[5, 3, 1]);
    }

    #[test]
    fn entry_serialises_as_record() {
        let e = UEntry { g: 2, mu: key(&[3]), value: rat(3, 128) };
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"g":2,"n":1,"mu":[3],"value":"3/128"}"#);
    }

    #[test]
    fn shared_table_across_threads() {
        let t = UTable::new();
        let results: Vec<Rational> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|_| s.spawn(|| t.u_value(4, &[3, 3, 3, 1, 1, 1]))).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let expected = closed_form(4, &[3, 3, 3], 6).unwrap();
        assert!(results.iter().all(|r| *r == expected));
    }
}
