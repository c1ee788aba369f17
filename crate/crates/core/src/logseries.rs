//! Finite expansions in boundary coordinates r_1..r_μ with logarithmic and
//! simple-pole terms along the node hyperplanes w = Σ_j c_j r_j. Closed
//! under ∂/∂r_p; equality is decidable because every term is kept in a
//! canonical form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::Scalar;

type Mono = Vec<u32>;

/// Sum of three kinds of terms, coefficients in Q[λ, z⁻¹]:
///   c · r^α                      (polynomial)
///   c · r^α · log w              (w a nonzero integer linear form, kept raw:
///                                 log w and log(−w) differ by a constant and
///                                 never merge)
///   c · r^α / ŵ^e                (ŵ primitive with positive leading
///                                 coefficient; α has no power of ŵ's leading
///                                 variable, so the fraction part of a sum is
///                                 unique and `is_zero` is sound)
#[derive(Clone, PartialEq, Eq)]
pub struct LogSeries {
    vars: usize,
    poly: BTreeMap<Mono, Scalar>,
    logs: BTreeMap<(Vec<BigInt>, Mono), Scalar>,
    fracs: BTreeMap<(Vec<BigInt>, u32, Mono), Scalar>,
}

/// Content and sign pulled out of a nonzero integer form: w = factor·ŵ with
/// ŵ primitive and its first nonzero entry positive.
fn primitive_normalize(form: &[BigInt]) -> Option<(BigRational, Vec<BigInt>)> {
    let mut g = BigInt::zero();
    for c in form {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return None;
    }
    let lead = form.iter().find(|c| !c.is_zero()).expect("nonzero form");
    if lead.is_negative() {
        g = -g;
    }
    let hat: Vec<BigInt> = form.iter().map(|c| c / &g).collect();
    Some((BigRational::from(g), hat))
}

fn leading_index(form: &[BigInt]) -> usize {
    form.iter().position(|c| !c.is_zero()).expect("nonzero form")
}

impl LogSeries {
    pub fn zero(vars: usize) -> Self {
        LogSeries { vars, poly: BTreeMap::new(), logs: BTreeMap::new(), fracs: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        let mut s = Self::zero(vars);
        s.add_poly(vec![0; vars], c);
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty() && self.logs.is_empty() && self.fracs.is_empty()
    }

    /// Purely polynomial, hence single-valued and pole-free.
    pub fn is_holomorphic(&self) -> bool {
        self.logs.is_empty() && self.fracs.is_empty()
    }

    pub fn add_poly(&mut self, mono: Mono, c: Scalar) {
        assert_eq!(mono.len(), self.vars, "monomial length mismatch");
        if c.is_zero() {
            return;
        }
        merge(&mut self.poly, mono, c);
    }

    /// Adds c·r^α·log w. The form is kept exactly as given.
    pub fn add_log(&mut self, form: &[BigInt], mono: Mono, c: Scalar) {
        assert_eq!(form.len(), self.vars, "form length mismatch");
        assert_eq!(mono.len(), self.vars, "monomial length mismatch");
        assert!(form.iter().any(|x| !x.is_zero()), "log of the zero form");
        if c.is_zero() {
            return;
        }
        merge(&mut self.logs, (form.to_vec(), mono), c);
    }

    /// Adds c·r^α/w^e, rewriting into canonical form: the content and sign
    /// of w move into the coefficient, and the leading variable of ŵ is
    /// eliminated from the numerator by substituting it with
    /// (ŵ − rest)/lead, splitting off polynomial parts where the pole order
    /// cancels.
    pub fn add_fraction(
        &mut self,
        form: &[BigInt],
        e: u32,
        mono: Mono,
        c: Scalar,
    ) -> Result<(), Error> {
        assert_eq!(form.len(), self.vars, "form length mismatch");
        assert_eq!(mono.len(), self.vars, "monomial length mismatch");
        if e == 0 {
            self.add_poly(mono, c);
            return Ok(());
        }
        if c.is_zero() {
            return Ok(());
        }
        let Some((factor, hat)) = primitive_normalize(form) else {
            return Err(Error::Series("pole along the zero form".into()));
        };
        let c = c.mul_rational(&factor.recip().pow(e as i32));
        let j0 = leading_index(&hat);
        let t = mono[j0];
        if t == 0 {
            merge(&mut self.fracs, (hat, e, mono), c);
            return Ok(());
        }
        // r_{j0}^t = ((W − v)/lead)^t with v = ŵ − lead·r_{j0}; expand in W
        // and re-attach W^s as ŵ-powers against the pole
        let lead = BigRational::from(hat[j0].clone());
        let mut rest = hat.clone();
        rest[j0] = BigInt::zero();
        let mut reduced = mono.clone();
        reduced[j0] = 0;

        // polynomials in (r, W): key (mono, w_power)
        let mut expansion: BTreeMap<(Mono, u32), BigRational> = BTreeMap::new();
        expansion.insert((vec![0; self.vars], 0), BigRational::one());
        let mut step: BTreeMap<(Mono, u32), BigRational> = BTreeMap::new();
        step.insert((vec![0; self.vars], 1), lead.recip());
        for (j, coeff) in rest.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut m = vec![0; self.vars];
            m[j] = 1;
            step.insert((m, 0), -BigRational::from(coeff.clone()) / lead.clone());
        }
        for _ in 0..t {
            let mut next: BTreeMap<(Mono, u32), BigRational> = BTreeMap::new();
            for ((m1, w1), c1) in &expansion {
                for ((m2, w2), c2) in &step {
                    let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                    let entry = next.entry((m, w1 + w2)).or_insert_with(BigRational::zero);
                    *entry += c1 * c2;
                }
            }
            next.retain(|_, v| !v.is_zero());
            expansion = next;
        }
        for ((m, w_pow), coeff) in expansion {
            let m: Mono = m.iter().zip(&reduced).map(|(a, b)| a + b).collect();
            let part = c.mul_rational(&coeff);
            if w_pow >= e {
                // pole cancels; expand the leftover ŵ-power into monomials
                self.add_form_power_times(&hat, w_pow - e, &m, part);
            } else {
                merge(&mut self.fracs, (hat.clone(), e - w_pow, m), part);
            }
        }
        Ok(())
    }

    /// Adds c·r^α·ŵ^p expanded as a polynomial.
    fn add_form_power_times(&mut self, hat: &[BigInt], p: u32, mono: &Mono, c: Scalar) {
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        terms.insert(mono.clone(), BigRational::one());
        for _ in 0..p {
            let mut next: BTreeMap<Mono, BigRational> = BTreeMap::new();
            for (m, cm) in &terms {
                for (j, hj) in hat.iter().enumerate() {
                    if hj.is_zero() {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2[j] += 1;
                    *next.entry(m2).or_insert_with(BigRational::zero) +=
                        cm * BigRational::from(hj.clone());
                }
            }
            terms = next;
        }
        for (m, cm) in terms {
            self.add_poly(m, c.mul_rational(&cm));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.poly {
            merge(&mut out.poly, m.clone(), c.clone());
        }
        for (k, c) in &other.logs {
            merge(&mut out.logs, k.clone(), c.clone());
        }
        for (k, c) in &other.fracs {
            merge(&mut out.fracs, k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_rational(-BigRational::one()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.poly {
            let c = c * s;
            if !c.is_zero() {
                out.poly.insert(m.clone(), c);
            }
        }
        for (k, c) in &self.logs {
            let c = c * s;
            if !c.is_zero() {
                out.logs.insert(k.clone(), c);
            }
        }
        for (k, c) in &self.fracs {
            let c = c * s;
            if !c.is_zero() {
                out.fracs.insert(k.clone(), c);
            }
        }
        out
    }

    pub fn mul_rational(&self, c: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(c.clone()))
    }

    /// ∂/∂r_p. Each kind stays within the type:
    ///   ∂(r^α)        → polynomial
    ///   ∂(r^α log w)  → log term + fraction w_p·r^α/w
    ///   ∂(r^α/ŵ^e)    → fractions of order e and e+1
    pub fn derivative(&self, p: usize) -> Self {
        assert!(p < self.vars, "variable index out of range");
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.poly {
            if let Some((dm, dc)) = mono_derivative(m, p, c) {
                out.add_poly(dm, dc);
            }
        }
        for ((form, m), c) in &self.logs {
            if let Some((dm, dc)) = mono_derivative(m, p, c) {
                out.add_log(form, dm, dc);
            }
            let wp = &form[p];
            if !wp.is_zero() {
                out.add_fraction(form, 1, m.clone(), c.mul_rational(&BigRational::from(wp.clone())))
                    .expect("nonzero form");
            }
        }
        for ((hat, e, m), c) in &self.fracs {
            if let Some((dm, dc)) = mono_derivative(m, p, c) {
                out.add_fraction(hat, *e, dm, dc).expect("nonzero form");
            }
            let wp = &hat[p];
            if !wp.is_zero() {
                let dc = c.mul_rational(&-BigRational::from(BigInt::from(*e) * wp));
                out.add_fraction(hat, e + 1, m.clone(), dc).expect("nonzero form");
            }
        }
        out
    }

    /// Value at r = 0 under the boundary convention that every monomial
    /// multiple of a log vanishes there. Fails on terms with no limit:
    /// poles, or a bare logarithm.
    pub fn boundary_value(&self) -> Result<Scalar, Error> {
        if !self.fracs.is_empty() {
            return Err(Error::Series("pole at the boundary".into()));
        }
        if self.logs.keys().any(|(_, m)| m.iter().all(|&e| e == 0)) {
            return Err(Error::Series("bare logarithm at the boundary".into()));
        }
        Ok(self.poly.get(&vec![0; self.vars]).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Coefficient views, for reports and tests.
    pub fn poly_coefficient(&self, mono: &[u32]) -> Scalar {
        self.poly.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn log_coefficient(&self, form: &[BigInt], mono: &[u32]) -> Scalar {
        self.logs
            .get(&(form.to_vec(), mono.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of r^mono/ŵ^e for the canonical ŵ of the given form.
    pub fn fraction_coefficient(&self, form: &[BigInt], e: u32, mono: &[u32]) -> Scalar {
        let Some((factor, hat)) = primitive_normalize(form) else {
            return Scalar::zero();
        };
        self.fracs
            .get(&(hat, e, mono.to_vec()))
            .map(|c| c.mul_rational(&factor.pow(e as i32)))
            .unwrap_or_else(Scalar::zero)
    }
}

fn mono_derivative(m: &Mono, p: usize, c: &Scalar) -> Option<(Mono, Scalar)> {
    if m[p] == 0 {
        return None;
    }
    let mut dm = m.clone();
    dm[p] -= 1;
    Some((dm, c.mul_rational(&BigRational::from(BigInt::from(m[p])))))
}

fn merge<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.remove(&key) {
        Some(prev) => {
            let sum = &prev + &c;
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, form: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (j, c) in form.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let a = c.abs();
        if !a.is_one() {
            write!(f, "{a}·")?;
        }
        write!(f, "r{}", j + 1)?;
        first = false;
    }
    Ok(())
}

fn write_mono(f: &mut fmt::Formatter<'_>, m: &[u32]) -> fmt::Result {
    for (j, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        write!(f, "·r{}", j + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            Ok(())
        };
        for (m, c) in &self.poly {
            sep(f)?;
            write!(f, "({c})")?;
            write_mono(f, m)?;
        }
        for ((form, m), c) in &self.logs {
            sep(f)?;
            write!(f, "({c})")?;
            write_mono(f, m)?;
            write!(f, "·log(")?;
            write_form(f, form)?;
            write!(f, ")")?;
        }
        for ((hat, e, m), c) in &self.fracs {
            sep(f)?;
            write!(f, "({c})")?;
            write_mono(f, m)?;
            write!(f, "·(")?;
            write_form(f, hat)?;
            write!(f, ")^-{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
