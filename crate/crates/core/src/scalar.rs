//! The coefficient ring Q[λ, z⁻¹].
//!
//! λ stands for 1/(2π√−1) and z⁻¹ for the inverse of the formal connection
//! parameter; both are kept as transcendental generators. Equality is
//! coefficient-wise, so identities proved here are identities of formal
//! expressions, never numerical approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of Q[λ, z⁻¹], keyed by (λ exponent, z⁻¹ exponent).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar::monomial(0, 0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// The generator λ.
    pub fn lambda() -> Self {
        Scalar::monomial(1, 0, BigRational::one())
    }

    /// The generator z⁻¹.
    pub fn z_inv() -> Self {
        Scalar::monomial(0, 1, BigRational::one())
    }

    pub fn monomial(lambda_pow: u32, z_inv_pow: u32, c: BigRational) -> Self {
        let mut s = Scalar::default();
        s.insert(lambda_pow, z_inv_pow, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, lambda_pow: u32, z_inv_pow: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = (lambda_pow, z_inv_pow);
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Coefficient of λ^a·(z⁻¹)^b.
    pub fn coefficient(&self, lambda_pow: u32, z_inv_pow: u32) -> BigRational {
        self.terms.get(&(lambda_pow, z_inv_pow)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The purely rational part (λ⁰z⁰ coefficient).
    pub fn rational_part(&self) -> BigRational {
        self.coefficient(0, 0)
    }

    /// Some(c) when the element is the constant c with no λ or z⁻¹ content.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.keys().any(|&k| k != (0, 0)) {
            return None;
        }
        Some(self.rational_part())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn mul_rational(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Substitute z⁻¹ ↦ λ, i.e. evaluate at z = 2π√−1.
    pub fn substitute_z_inv_by_lambda(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (&(a, b), c) in &self.terms {
            out.insert(a + b, 0, c.clone());
        }
        out
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.insert(a, b, c.clone());
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.insert(a, b, -c.clone());
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.insert(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", c.numer(), c.denom())
}

impl fmt::Display for Scalar {
    /// Renders e.g. "2/1 · z^-1" or "1/1 + 3/2 · λ^2". Always "p/q" form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/1");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write_rational(f, c)?;
            if a == 1 {
                write!(f, " · λ")?;
            } else if a > 1 {
                write!(f, " · λ^{a}")?;
            }
            if b > 0 {
                write!(f, " · z^-{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense matrix over the scalar ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        ScalarMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        ScalarMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ScalarMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.entries[i * self.cols + k].clone() * other.get(k, j).clone()
                        + out.get(i, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ScalarMatrix {
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn ring_arithmetic() {
        let a = Scalar::lambda() + Scalar::from_int(2);
        let b = Scalar::z_inv();
        let prod = &a * &b;
        assert_eq!(prod.coefficient(1, 1), q(1, 1));
        assert_eq!(prod.coefficient(0, 1), q(2, 1));
        assert!((&prod - &prod).is_zero());
        assert_eq!(&a + &(-&a), Scalar::zero());
    }

    #[test]
    fn substitution_merges_exponents() {
        // (2 + 3z⁻¹)λ ↦ 2λ + 3λ²
        let s = (Scalar::from_int(2) + Scalar::z_inv().mul_rational(&q(3, 1))) * Scalar::lambda();
        let t = s.substitute_z_inv_by_lambda();
        assert_eq!(t.coefficient(1, 0), q(2, 1));
        assert_eq!(t.coefficient(2, 0), q(3, 1));
        assert_eq!(t.coefficient(1, 1), q(0, 1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::z_inv().mul_rational(&q(2, 1)).to_string(), "2/1 · z^-1");
        assert_eq!(Scalar::zero().to_string(), "0/1");
        assert_eq!(
            (Scalar::one() + Scalar::lambda().mul_rational(&q(-3, 2))).to_string(),
            "1/1 + -3/2 · λ"
        );
    }

    #[test]
    fn matrix_product_blocks() {
        let mut m = ScalarMatrix::zeros(2, 2);
        m.set(1, 0, Scalar::z_inv());
        // strictly lower triangular squares to zero
        assert!(m.mul(&m).is_zero());
        assert!(!m.is_zero());
    }
}
