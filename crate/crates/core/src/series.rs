//! Truncated formal power series.
//!
//! `TruncatedSeries` is a multivariate series in Novikov symbols q₁..q_K and
//! coordinates u¹..u^R over the scalar ring, with two independent truncation
//! bounds: total Novikov degree and total u-degree. A term survives iff it
//! respects both bounds. `Laurent1` is a small univariate Laurent series used
//! for residue extraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// Exponent key: (Novikov exponents, u exponents).
type Key = (Vec<u32>, Vec<u32>);

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    nov_vars: usize,
    u_vars: usize,
    nov_order: u32,
    u_order: u32,
    terms: BTreeMap<Key, Scalar>,
}

impl TruncatedSeries {
    pub fn zero(nov_vars: usize, u_vars: usize, nov_order: u32, u_order: u32) -> Self {
        TruncatedSeries { nov_vars, u_vars, nov_order, u_order, terms: BTreeMap::new() }
    }

    pub fn constant(
        nov_vars: usize,
        u_vars: usize,
        nov_order: u32,
        u_order: u32,
        c: Scalar,
    ) -> Self {
        let mut s = Self::zero(nov_vars, u_vars, nov_order, u_order);
        s.add_term(vec![0; nov_vars], vec![0; u_vars], c);
        s
    }

    pub fn nov_vars(&self) -> usize {
        self.nov_vars
    }

    pub fn u_vars(&self) -> usize {
        self.u_vars
    }

    pub fn nov_order(&self) -> u32 {
        self.nov_order
    }

    pub fn u_order(&self) -> u32 {
        self.u_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.nov_vars == other.nov_vars
            && self.u_vars == other.u_vars
            && self.nov_order == other.nov_order
            && self.u_order == other.u_order
    }

    /// Adds c·q^nov·u^exp, silently dropping terms beyond either bound.
    pub fn add_term(&mut self, nov: Vec<u32>, u: Vec<u32>, c: Scalar) {
        assert_eq!(nov.len(), self.nov_vars, "novikov exponent arity");
        assert_eq!(u.len(), self.u_vars, "u exponent arity");
        if c.is_zero() {
            return;
        }
        if nov.iter().sum::<u32>() > self.nov_order || u.iter().sum::<u32>() > self.u_order {
            return;
        }
        let key = (nov, u);
        let slot = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, nov: &[u32], u: &[u32]) -> Scalar {
        self.terms.get(&(nov.to_vec(), u.to_vec())).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "series shape mismatch");
        let mut out = self.clone();
        for ((n, u), c) in &other.terms {
            out.add_term(n.clone(), u.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nov_vars, self.u_vars, self.nov_order, self.u_order);
        for ((n, u), c) in &self.terms {
            out.add_term(n.clone(), u.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.nov_vars, self.u_vars, self.nov_order, self.u_order);
        for ((n, u), c) in &self.terms {
            out.add_term(n.clone(), u.clone(), c * s);
        }
        out
    }

    pub fn mul_rational(&self, c: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "series shape mismatch");
        let mut out = Self::zero(self.nov_vars, self.u_vars, self.nov_order, self.u_order);
        for ((n1, u1), c1) in &self.terms {
            for ((n2, u2), c2) in &other.terms {
                let n: Vec<u32> = n1.iter().zip(n2).map(|(a, b)| a + b).collect();
                let u: Vec<u32> = u1.iter().zip(u2).map(|(a, b)| a + b).collect();
                out.add_term(n, u, c1 * c2);
            }
        }
        out
    }

    /// exp(Σ_p coeffs[p]·u^p), expanded to the u-truncation order.
    pub fn exp_u_linear(
        nov_vars: usize,
        nov_order: u32,
        u_order: u32,
        coeffs: &[BigInt],
    ) -> Self {
        let u_vars = coeffs.len();
        let mut linear = Self::zero(nov_vars, u_vars, nov_order, u_order);
        for (p, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0u32; u_vars];
            exp[p] = 1;
            linear.add_term(
                vec![0; nov_vars],
                exp,
                Scalar::from_rational(BigRational::from(c.clone())),
            );
        }
        let mut out = Self::constant(nov_vars, u_vars, nov_order, u_order, Scalar::one());
        let mut power = out.clone();
        let mut factorial = BigRational::one();
        for e in 1..=u_order {
            power = power.mul(&linear);
            if power.is_zero() {
                break;
            }
            factorial *= BigRational::from(BigInt::from(e));
            out = out.add(&power.mul_rational(&factorial.recip()));
        }
        out
    }

    /// Termwise ∂/∂u^p.
    pub fn derivative_u(&self, p: usize) -> Self {
        assert!(p < self.u_vars, "u index out of range");
        let mut out = Self::zero(self.nov_vars, self.u_vars, self.nov_order, self.u_order);
        for ((n, u), c) in &self.terms {
            if u[p] == 0 {
                continue;
            }
            let mut du = u.clone();
            du[p] -= 1;
            out.add_term(n.clone(), du, c.mul_rational(&BigRational::from(BigInt::from(u[p]))));
        }
        out
    }

    /// Restriction u = 0.
    pub fn eval_u_zero(&self) -> Self {
        let mut out = Self::zero(self.nov_vars, self.u_vars, self.nov_order, self.u_order);
        for ((n, u), c) in &self.terms {
            if u.iter().all(|&e| e == 0) {
                out.add_term(n.clone(), u.clone(), c.clone());
            }
        }
        out
    }
}

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    sym: &str,
    exps: &[u32],
) -> Result<bool, fmt::Error> {
    let mut wrote = false;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if wrote {
            write!(f, "·")?;
        }
        wrote = true;
        write!(f, "{sym}{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(wrote)
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/1");
        }
        for (idx, ((n, u), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            let constant = n.iter().all(|&e| e == 0) && u.iter().all(|&e| e == 0);
            if !constant {
                write!(f, " ")?;
                let wrote = write_monomial(f, "q", n)?;
                if wrote && u.iter().any(|&e| e > 0) {
                    write!(f, "·")?;
                }
                write_monomial(f, "u", u)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Univariate Laurent series Σ_j coeffs[j]·t^(lead+j) with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent1 {
    lead: i64,
    coeffs: Vec<BigRational>,
}

impl Laurent1 {
    pub fn new(lead: i64, coeffs: Vec<BigRational>) -> Self {
        Laurent1 { lead, coeffs }
    }

    /// exp(b·t) to t^order inclusive.
    pub fn exp_linear(b: &BigInt, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = BigRational::one();
        coeffs.push(c.clone());
        for j in 1..=order {
            c = c * BigRational::from(b.clone()) / BigRational::from(BigInt::from(j as i64));
            coeffs.push(c.clone());
        }
        Laurent1 { lead: 0, coeffs }
    }

    /// (exp(b·t) − 1)/(b·t) = Σ_j (b·t)^j/(j+1)!, to t^order.
    pub fn exp_quotient(b: &BigInt, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = BigRational::one();
        coeffs.push(c.clone());
        for j in 1..=order {
            c = c * BigRational::from(b.clone()) / BigRational::from(BigInt::from(j as i64 + 1));
            coeffs.push(c.clone());
        }
        Laurent1 { lead: 0, coeffs }
    }

    pub fn coefficient(&self, power: i64) -> BigRational {
        let idx = power - self.lead;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return BigRational::zero();
        }
        self.coeffs[idx as usize].clone()
    }

    pub fn mul(&self, other: &Laurent1) -> Laurent1 {
        // truncation order follows the shorter operand
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Laurent1 { lead: self.lead + other.lead, coeffs }
    }

    /// Multiplicative inverse; requires a nonzero bottom coefficient.
    pub fn invert(&self) -> Laurent1 {
        let a0 = &self.coeffs[0];
        assert!(!a0.is_zero(), "cannot invert a series with zero bottom coefficient");
        let len = self.coeffs.len();
        let mut coeffs = vec![BigRational::zero(); len];
        coeffs[0] = a0.recip();
        for n in 1..len {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &coeffs[n - j];
            }
            coeffs[n] = -acc / a0;
        }
        Laurent1 { lead: -self.lead, coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Laurent1 {
        Laurent1 { lead: self.lead, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn shift(&self, by: i64) -> Laurent1 {
        Laurent1 { lead: self.lead + by, coeffs: self.coeffs.clone() }
    }
}

impl fmt::Debug for Laurent1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("{}·t^{}", c, self.lead + j as i64))
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn exp_linear_two_vars() {
        // exp(u1 + 2u2) at u order 2: 1 + u1 + 2u2 + u1²/2 + 2u1u2 + 2u2²
        let e = TruncatedSeries::exp_u_linear(0, 0, 2, &[BigInt::from(1), BigInt::from(2)]);
        assert_eq!(e.coefficient(&[], &[0, 0]).rational_part(), q(1, 1));
        assert_eq!(e.coefficient(&[], &[1, 0]).rational_part(), q(1, 1));
        assert_eq!(e.coefficient(&[], &[0, 1]).rational_part(), q(2, 1));
        assert_eq!(e.coefficient(&[], &[2, 0]).rational_part(), q(1, 2));
        assert_eq!(e.coefficient(&[], &[1, 1]).rational_part(), q(2, 1));
        assert_eq!(e.coefficient(&[], &[0, 2]).rational_part(), q(2, 1));
    }

    #[test]
    fn truncation_respects_both_bounds() {
        let mut s = TruncatedSeries::zero(1, 1, 2, 1);
        s.add_term(vec![3], vec![0], Scalar::one()); // beyond nov order
        s.add_term(vec![2], vec![1], Scalar::one()); // within both
        s.add_term(vec![0], vec![2], Scalar::one()); // beyond u order
        assert_eq!(s.terms().count(), 1);
        assert_eq!(s.coefficient(&[2], &[1]), Scalar::one());
    }

    #[test]
    fn derivative_and_product_rule() {
        let a = TruncatedSeries::exp_u_linear(0, 0, 3, &[BigInt::from(2)]);
        // d/du exp(2u) = 2 exp(2u), up to one order lower
        let d = a.derivative_u(0);
        let twice = a.mul_rational(&q(2, 1));
        for e in 0..3u32 {
            assert_eq!(d.coefficient(&[], &[e]), twice.coefficient(&[], &[e]));
        }
    }

    #[test]
    fn display_is_sorted() {
        let mut s = TruncatedSeries::zero(2, 1, 4, 4);
        s.add_term(vec![0, 1], vec![0], Scalar::one());
        s.add_term(vec![1, 0], vec![2], Scalar::from_int(3));
        assert_eq!(s.to_string(), "(1/1) q2 + (3/1) q1·u1^2");
    }

    #[test]
    fn laurent_inverse_of_unit() {
        let g = Laurent1::exp_quotient(&BigInt::from(3), 6);
        let gi = g.invert();
        let prod = g.mul(&gi);
        assert_eq!(prod.coefficient(0), q(1, 1));
        for j in 1..=6 {
            assert_eq!(prod.coefficient(j), q(0, 1));
        }
    }

    #[test]
    fn laurent_pole_bookkeeping() {
        // t⁻¹·(1 + t) has residue 1 and constant term 1
        let s = Laurent1::new(-1, vec![q(1, 1), q(1, 1)]);
        assert_eq!(s.coefficient(-1), q(1, 1));
        assert_eq!(s.coefficient(0), q(1, 1));
        assert_eq!(s.coefficient(1), q(0, 1));
        let shifted = s.shift(2);
        assert_eq!(shifted.coefficient(1), q(1, 1));
    }
}
