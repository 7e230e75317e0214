use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{coordinate_names, format_rational, LinearForm, Rational, SymbolicError};

/// Exponent vector of a monomial, ordered graded-lexicographically with
/// `x1 > x2 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with exact rational coefficients.
/// Zero coefficients are never stored, so structural equality is equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::variable(nvars, index), Rational::one());
        p
    }

    pub fn from_linear(form: &LinearForm) -> Self {
        let n = form.dim();
        let mut p = Self::zero(n);
        for (i, c) in form.coeffs().iter().enumerate() {
            p.add_term(Monomial::variable(n, i), c.clone());
        }
        p
    }

    /// Product of linear forms; the empty product is `1` in `nvars` variables.
    pub fn product_of_linear<'a>(nvars: usize, forms: impl IntoIterator<Item = &'a LinearForm>) -> Self {
        forms.into_iter().fold(Self::one(nvars), |acc, f| &acc * &Self::from_linear(f))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity differs from polynomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(k)` when every term has degree `k`; the zero polynomial has no
    /// definite degree and returns `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Whether the polynomial lies in `S^k`; zero lies in every graded piece.
    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Polynomial) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different numbers of variables");
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, SymbolicError> {
        if point.len() != self.nvars {
            return Err(SymbolicError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Ring map sending `x_i` to `images[i]`; the result lives in the
    /// polynomial ring of the images.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, Polynomial::nvars);
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (mx, &e) in max_exp.iter_mut().zip(&m.0) {
                *mx = (*mx).max(e);
            }
        }
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &top)| {
                let mut list = vec![Polynomial::one(target)];
                for k in 1..=top as usize {
                    let next = &list[k - 1] * img;
                    list.push(next);
                }
                list
            })
            .collect();
        let mut result = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            result += &term;
        }
        result
    }

    pub fn substitute_linear(&self, images: &[LinearForm]) -> Polynomial {
        let images: Vec<Polynomial> = images.iter().map(Polynomial::from_linear).collect();
        if images.is_empty() {
            return self.clone();
        }
        self.substitute(&images)
    }

    /// Division by a nonzero linear form, pivoting on its leading variable.
    /// The remainder is free of that variable, and vanishes iff the form
    /// divides the polynomial.
    pub fn div_rem_linear(&self, form: &LinearForm) -> Result<(Polynomial, Polynomial), SymbolicError> {
        if form.dim() != self.nvars {
            return Err(SymbolicError::DimensionMismatch { expected: self.nvars, found: form.dim() });
        }
        let k = form.leading_index().ok_or(SymbolicError::ZeroForm)?;
        let lead = form.coeffs()[k].clone();
        let divisor = Polynomial::from_linear(form);
        let mut remainder = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        loop {
            let next = remainder
                .terms
                .iter()
                .filter(|(m, _)| m.0[k] > 0)
                .max_by(|(a, _), (b, _)| a.0[k].cmp(&b.0[k]).then_with(|| a.cmp(b)))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((mut m, c)) = next else { break };
            m.0[k] -= 1;
            let q = Polynomial::from_terms(self.nvars, [(m, c / &lead)]);
            remainder -= &(&q * &divisor);
            quotient += &q;
        }
        Ok((quotient, remainder))
    }

    /// The exact quotient `self / form`, or `None` if the form does not divide.
    pub fn divides_linear(&self, form: &LinearForm) -> Result<Option<Polynomial>, SymbolicError> {
        let (q, r) = self.div_rem_linear(form)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Derivative along the constant vector field `xi`.
    pub fn directional_derivative(&self, xi: &[Rational]) -> Polynomial {
        assert_eq!(xi.len(), self.nvars, "direction has the wrong dimension");
        let mut result = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 || xi[i].is_zero() {
                    continue;
                }
                let mut dm = m.clone();
                dm.0[i] -= 1;
                result.add_term(dm, c * &xi[i] * Rational::from_integer(e.into()));
            }
        }
        result
    }

    /// Whether the polynomial is constant along `xi`, i.e. lies in the
    /// subring generated by the annihilator of `xi`.
    pub fn annihilates(&self, xi: &[Rational]) -> bool {
        self.directional_derivative(xi).is_zero()
    }

    /// Canonical text: terms in descending graded-lex order, unit
    /// coefficients omitted, rationals as `p/q`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
            if vars.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&coordinate_names(self.nvars)))
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.check_arity(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.check_arity(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_arity(rhs);
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}
