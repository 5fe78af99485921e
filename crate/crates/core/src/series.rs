//! Sparse exact polynomials in the odd variables `p1, p3, p5, ...`, truncated
//! by weighted degree `sum i * exp(p_i)`.
//!
//! For every series built from the Bessel coefficients the power of `hbar`
//! attached to a monomial equals its weighted degree, so `hbar` is not stored;
//! output that wants it prints `hbar^degree`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::bessel::{odd_partitions, MuKey, UTable};
use crate::error::{Error, Result};
use crate::formal::{factorial, format_rational, Rational};

/// Index of a `p` variable; always odd and positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddIndex(u32);

impl OddIndex {
    pub fn new(i: u32) -> Result<Self> {
        if i % 2 == 1 {
            Ok(Self(i))
        } else {
            Err(Error::InvalidOddIndex(i))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Monomial `prod p_i^e_i` over odd `i`, stored ascending by index with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PMonomial {
    vars: Vec<(u32, u32)>,
}

impl PMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: OddIndex) -> Self {
        Self { vars: vec![(i.0, 1)] }
    }

    /// Builds from `(index, exponent)` pairs; repeated indices accumulate and
    /// zero exponents are dropped.
    pub fn from_exps<I: IntoIterator<Item = (u32, u32)>>(exps: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, e) in exps {
            OddIndex::new(i)?;
            *map.entry(i).or_insert(0) += e;
        }
        Ok(Self { vars: map.into_iter().filter(|&(_, e)| e > 0).collect() })
    }

    /// `p_{mu_1} ... p_{mu_n}`.
    pub fn from_parts(parts: &[u32]) -> Result<Self> {
        Self::from_exps(parts.iter().map(|&p| (p, 1)))
    }

    pub fn degree(&self) -> u64 {
        self.vars.iter().map(|&(i, e)| u64::from(i) * u64::from(e)).sum()
    }

    pub fn exp(&self, i: u32) -> u32 {
        self.vars.iter().find(|&&(j, _)| j == i).map_or(0, |&(_, e)| e)
    }

    pub fn vars(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vars.iter().copied()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.vars.last().map(|&(i, _)| i)
    }

    pub fn mul(&self, other: &PMonomial) -> PMonomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut a, mut b) = (self.vars.iter().peekable(), other.vars.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, e)), Some(&&(j, f))) => match i.cmp(&j) {
                    Ordering::Less => {
                        vars.push((i, e));
                        a.next();
                    }
                    Ordering::Greater => {
                        vars.push((j, f));
                        b.next();
                    }
                    Ordering::Equal => {
                        vars.push((i, e + f));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&x), None) => {
                    vars.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    vars.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        PMonomial { vars }
    }

    /// `d/dp_i` of the monomial: `(exponent, quotient)`, or `None` if `p_i`
    /// does not occur.
    pub fn derive(&self, i: u32) -> Option<(u32, PMonomial)> {
        let pos = self.vars.iter().position(|&(j, _)| j == i)?;
        let e = self.vars[pos].1;
        let mut vars = self.vars.clone();
        if e == 1 {
            vars.remove(pos);
        } else {
            vars[pos].1 -= 1;
        }
        Some((e, PMonomial { vars }))
    }

    /// True iff every variable is among `allowed`.
    pub fn only_uses(&self, allowed: &[u32]) -> bool {
        self.vars.iter().all(|(i, _)| allowed.contains(i))
    }
}

/// Graded, then lexicographic reading variables from the highest index down.
impl Ord for PMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.vars.iter().rev().cmp(other.vars.iter().rev()))
    }
}

impl PartialOrd for PMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        for (k, &(i, e)) in self.vars.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "p{i}")?;
            } else {
                write!(f, "p{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `{"1": 2, "3": 1}`, ascending by index.
impl Serialize for PMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.vars.len()))?;
        for (i, e) in &self.vars {
            map.serialize_entry(&i.to_string(), e)?;
        }
        map.end()
    }
}

/// Truncated series: every stored monomial has weighted degree `<= order`
/// and no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeries {
    order: u32,
    terms: BTreeMap<PMonomial, Rational>,
}

impl PSeries {
    pub fn zero(order: u32) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: u32) -> Self {
        Self::monomial(PMonomial::one(), c, order)
    }

    pub fn monomial(m: PMonomial, c: Rational, order: u32) -> Self {
        let mut s = Self::zero(order);
        s.add_term(m, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (PMonomial, Rational)>>(order: u32, terms: I) -> Self {
        let mut s = Self::zero(order);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Accumulates `c * m`; terms above the truncation order are discarded.
    pub fn add_term(&mut self, m: PMonomial, c: Rational) {
        if c.is_zero() || m.degree() > u64::from(self.order) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMonomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&PMonomial::one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.terms.keys().filter_map(PMonomial::max_index).max()
    }

    /// Same terms, truncated to `order` (which may also raise the order when
    /// the caller knows the series is exact).
    pub fn with_order(&self, order: u32) -> Self {
        Self::from_terms(order, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Sets every variable outside `keep` to zero.
    pub fn restrict(&self, keep: &[u32]) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.only_uses(keep)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Self { order: self.order, terms }
    }

    /// Terms of exact weighted degree `d`.
    pub fn homogeneous_part(&self, d: u64) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        Self { order: self.order, terms }
    }

    pub fn add(&self, other: &PSeries) -> PSeries {
        let mut out = Self::zero(self.order.min(other.order));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PSeries) -> PSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> PSeries {
        if s.is_zero() {
            return Self::zero(self.order);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        PSeries { order: self.order, terms }
    }

    pub fn mul(&self, other: &PSeries) -> PSeries {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > u64::from(order) {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > u64::from(order) {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// `d/dp_i`. The truncation order is kept.
    pub fn partial(&self, i: u32) -> PSeries {
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            if let Some((e, q)) = m.derive(i) {
                out.add_term(q, c * BigInt::from(e));
            }
        }
        out
    }

    /// `exp(self)` truncated at the same order. Needs a zero constant term.
    pub fn exp_truncated(&self) -> Result<PSeries> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::NonZeroConstant(format_rational(&c0)));
        }
        // every term has degree >= 1, so self^k vanishes once k > order
        let mut acc = Self::one(self.order);
        let mut power = Self::one(self.order);
        for k in 1..=self.order {
            power = power.mul(self).scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// `log(self)` truncated at the same order. Needs constant term 1.
    pub fn log_truncated(&self) -> Result<PSeries> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantNotOne(format_rational(&c0)));
        }
        let tail = self.sub(&Self::one(self.order));
        let mut acc = Self::zero(self.order);
        let mut power = Self::one(self.order);
        for k in 1..=self.order {
            power = power.mul(&tail);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            acc = acc.add(&power.scale(&Rational::new(sign, BigInt::from(k))));
        }
        Ok(acc)
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(hbar^{})", self.order + 1);
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let d = m.degree();
            match (m.is_one(), d) {
                (true, _) => write!(f, "{}", format_rational(c))?,
                (false, 1) => write!(f, "{} {} hbar", format_rational(c), m)?,
                (false, _) => write!(f, "{} {} hbar^{}", format_rational(c), m, d)?,
            }
        }
        write!(f, " + O(hbar^{})", self.order + 1)
    }
}

struct TermRecord<'a>(&'a PMonomial, &'a Rational);

impl Serialize for TermRecord<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("mono", self.0)?;
        st.serialize_field("coeff", &format_rational(self.1))?;
        st.end()
    }
}

/// `{"order": N, "terms": [{"mono": {...}, "coeff": "p/q"}]}` in canonical
/// monomial order.
impl Serialize for PSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PSeries", 2)?;
        st.serialize_field("order", &self.order)?;
        let terms: Vec<TermRecord<'_>> = self.terms.iter().map(|(m, c)| TermRecord(m, c)).collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `F = sum_{g,n} sum_mu U_{g,n}(mu) hbar^(2g-2+n) / n! p_mu1 ... p_mun`,
/// truncated at weighted degree `order`.
///
/// The sum runs over ordered tuples; a multiset `mu` therefore contributes
/// `orderings(mu) * U / n!`. Only coefficients on the support are inserted,
/// so each monomial's degree is its `hbar` exponent.
pub fn free_energy(table: &UTable, order: u32) -> PSeries {
    let mut out = PSeries::zero(order);
    for chi in 1..=order {
        for g in 1..=chi.div_ceil(2) {
            let n = i64::from(chi) - 2 * i64::from(g) + 2;
            if n < 1 {
                continue;
            }
            for parts in odd_partitions(chi, n as u32) {
                let key = MuKey::new(parts).expect("odd partitions are valid keys");
                let u = table.u(g, &key);
                if u.is_zero() {
                    continue;
                }
                let weight = Rational::new(key.orderings(), factorial(n as u64));
                let mono = PMonomial::from_parts(key.parts()).expect("odd parts");
                out.add_term(mono, u * weight);
            }
        }
    }
    out
}

/// `Z = exp(F)` at the given order.
pub fn partition_function(table: &UTable, order: u32) -> PSeries {
    free_energy(table, order).exp_truncated().expect("F has no constant term")
}
