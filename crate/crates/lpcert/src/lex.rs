//! Lexicographic ε-polynomial values.
//!
//! A [`LexValue`] is a polynomial in a symbolic perturbation parameter ε,
//! stored as its coefficient sequence `coeffs[k]` for ε^k. Values are ordered
//! lexicographically by first differing coefficient, which is exactly the
//! order induced by evaluating at any sufficiently small ε > 0. Working in
//! this arithmetic realizes "arbitrary and sufficiently small" perturbations
//! without ever picking a numeric ε.
//!
//! Every instance fixes the length at m_I + 1 coefficients (ε⁰ through
//! ε^{m_I}); mixing lengths is a contract violation and panics.

use std::cmp::Ordering;

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct LexValue {
    coeffs: Vec<Rational>,
}

impl LexValue {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "LexValue needs at least the constant term"
        );
        LexValue { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        LexValue::new(vec![Rational::zero(); len])
    }

    /// Constant polynomial (only the ε⁰ term).
    pub fn constant(value: Rational, len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        coeffs[0] = value;
        LexValue::new(coeffs)
    }

    /// Monomial `value · ε^power`.
    pub fn monomial(value: Rational, power: usize, len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        coeffs[power] = value;
        LexValue::new(coeffs)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Sign of the first nonzero coefficient; 0 iff identically zero.
    ///
    /// This is the sign of the value at every sufficiently small ε > 0.
    pub fn sign(&self) -> i8 {
        for c in &self.coeffs {
            let s = c.sign();
            if s != 0 {
                return s;
            }
        }
        0
    }

    pub fn add(&self, other: &LexValue) -> LexValue {
        self.check_len(other);
        LexValue::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &LexValue) -> LexValue {
        self.check_len(other);
        LexValue::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LexValue {
        LexValue::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn mul_scalar(&self, s: &Rational) -> LexValue {
        LexValue::new(self.coeffs.iter().map(|a| a * s).collect())
    }

    /// Componentwise exact division. Division by zero is a contract violation.
    pub fn div_scalar(&self, s: &Rational) -> LexValue {
        assert!(!s.is_zero(), "LexValue division by zero scalar");
        LexValue::new(self.coeffs.iter().map(|a| a / s).collect())
    }

    /// Exact value of the polynomial at a numeric ε (Horner).
    pub fn eval(&self, eps: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * eps + c)
    }

    /// A positive ε₀ such that the sign of the evaluated polynomial equals
    /// [`sign`](Self::sign) for every ε in (0, ε₀).
    ///
    /// For leading (lowest-power) nonzero coefficient a_k and
    /// t = max_{j>k} |a_j|, any ε < |a_k| / (|a_k| + t) works: the tail is
    /// then dominated by |a_k| ε^k. Conservative but exact; test helper for
    /// validating the "sufficiently small" argument numerically.
    pub fn sign_preservation_bound(&self) -> Rational {
        let lead = match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => k,
            None => return Rational::one(),
        };
        let lead_abs = self.coeffs[lead].abs();
        let tail_max = self.coeffs[lead + 1..]
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        if tail_max.is_zero() {
            return Rational::one();
        }
        &lead_abs / (lead_abs.clone() + tail_max)
    }

    fn check_len(&self, other: &LexValue) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "LexValue length mismatch"
        );
    }
}

impl PartialOrd for LexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_len(other);
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl std::fmt::Debug for LexValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})e")?,
                _ => write!(f, "({c})e^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Inner product of a rational row with a LexValue vector.
pub fn lex_dot(row: &[Rational], xs: &[LexValue]) -> LexValue {
    assert_eq!(row.len(), xs.len(), "lex_dot length mismatch");
    let len = xs.first().map(LexValue::len).unwrap_or(1);
    let mut acc = LexValue::zero(len);
    for (a, x) in row.iter().zip(xs) {
        if !a.is_zero() {
            acc = acc.add(&x.mul_scalar(a));
        }
    }
    acc
}
