use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Polynomial, Rational, SymbolicError};

/// An element of the dual of the torus Lie algebra, written in the fixed
/// coordinate basis `x1..xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    /// The coordinate function `x_{index+1}`.
    pub fn coordinate(dim: usize, index: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[index] = Rational::one();
        Self::new(coeffs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The dual pairing `<form, xi>`.
    pub fn pair(&self, xi: &[Rational]) -> Result<Rational, SymbolicError> {
        if xi.len() != self.dim() {
            return Err(SymbolicError::DimensionMismatch { expected: self.dim(), found: xi.len() });
        }
        Ok(self.coeffs.iter().zip(xi).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Index of the first nonzero coefficient; this is the leading variable
    /// under the graded-lex order with `x1 > x2 > ...`.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Splits the form as `scale * monic`, where `monic` has leading
    /// coefficient one. `None` for the zero form.
    pub fn normalize(&self) -> Option<(Rational, LinearForm)> {
        let lead = self.leading_index()?;
        let scale = self.coeffs[lead].clone();
        let monic = self.scale(&scale.recip());
        Some((scale, monic))
    }

    /// Nonzero forms that are rational multiples of each other.
    pub fn is_parallel(&self, other: &LinearForm) -> bool {
        match (self.normalize(), other.normalize()) {
            (Some((_, a)), Some((_, b))) => a == b,
            _ => false,
        }
    }

    /// The ratio `self / other` when `self` is a multiple of the nonzero form
    /// `other` (the zero form is the zero multiple).
    pub fn ratio_to(&self, other: &LinearForm) -> Option<Rational> {
        let lead = other.leading_index()?;
        let c = &self.coeffs[lead] / &other.coeffs[lead];
        (other.scale(&c) == *self).then_some(c)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_linear(self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.pair(point).expect("point dimension matches the form")
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;

    fn add(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.dim(), rhs.dim(), "linear forms of different dimension");
        LinearForm::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;

    fn sub(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.dim(), rhs.dim(), "linear forms of different dimension");
        LinearForm::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        LinearForm::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        -&self
    }
}

impl Mul<&Rational> for &LinearForm {
    type Output = LinearForm;

    fn mul(self, rhs: &Rational) -> LinearForm {
        self.scale(rhs)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// Orthogonal projection data for `rho_e`: the ring map sending a form
/// `a` to `a - a(xi)/w(xi) * w`, which kills `w` and lands in the
/// annihilator of `xi`.
#[derive(Clone, Debug)]
pub struct Projection {
    weight: LinearForm,
    xi: Vec<Rational>,
    weight_at_xi: Rational,
    images: Vec<LinearForm>,
}

impl Projection {
    pub fn along(weight: &LinearForm, xi: &[Rational]) -> Result<Self, SymbolicError> {
        let weight_at_xi = weight.pair(xi)?;
        if weight_at_xi.is_zero() {
            return Err(SymbolicError::DegenerateProjection);
        }
        let dim = weight.dim();
        let images = (0..dim)
            .map(|i| {
                let c = &xi[i] / &weight_at_xi;
                &LinearForm::coordinate(dim, i) - &weight.scale(&c)
            })
            .collect();
        Ok(Self { weight: weight.clone(), xi: xi.to_vec(), weight_at_xi, images })
    }

    pub fn weight(&self) -> &LinearForm {
        &self.weight
    }

    pub fn apply_linear(&self, form: &LinearForm) -> LinearForm {
        let c = form.eval(&self.xi) / &self.weight_at_xi;
        form - &self.weight.scale(&c)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p.substitute_linear(&self.images)
    }

    /// `rho_e` applied to a product of linear forms, kept factored.
    pub fn apply_product<'a>(&self, factors: impl IntoIterator<Item = &'a LinearForm>) -> Vec<LinearForm> {
        factors.into_iter().map(|f| self.apply_linear(f)).collect()
    }
}

/// `rho_e(p)` for the edge weight `e_weight` and polarizing vector `xi`.
pub fn rho(e_weight: &LinearForm, xi: &[Rational], p: &Polynomial) -> Result<Polynomial, SymbolicError> {
    if p.nvars() != e_weight.dim() {
        return Err(SymbolicError::DimensionMismatch { expected: e_weight.dim(), found: p.nvars() });
    }
    Ok(Projection::along(e_weight, xi)?.apply(p))
}

/// Rank of a family of forms, by fraction-free elimination over the rationals.
pub fn rank(forms: &[LinearForm]) -> usize {
    let mut rows: Vec<Vec<Rational>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `form` lies in the span of `basis`.
pub fn in_span(form: &LinearForm, basis: &[LinearForm]) -> bool {
    let mut extended = basis.to_vec();
    let before = rank(&extended);
    extended.push(form.clone());
    rank(&extended) == before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rational;

    fn xi(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn pairing_examples() {
        let a = LinearForm::from_ints(&[1, -1]);
        assert_eq!(a.pair(&xi(&[2, 1])).unwrap(), rational(1));
        assert_eq!(LinearForm::zero(3).pair(&xi(&[4, 5, 6])).unwrap(), rational(0));
        let b = LinearForm::from_ints(&[-1, 1, 0]);
        assert_eq!(b.pair(&xi(&[1, 2, 3])).unwrap(), rational(1));
    }

    #[test]
    fn pairing_rejects_wrong_length() {
        let a = LinearForm::from_ints(&[1, -1]);
        assert_eq!(a.pair(&xi(&[1, 2, 3])), Err(SymbolicError::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn parallel_and_ratio() {
        let a = LinearForm::from_ints(&[2, -4, 0]);
        let b = LinearForm::from_ints(&[-1, 2, 0]);
        assert!(a.is_parallel(&b));
        assert_eq!(a.ratio_to(&b), Some(rational(-2)));
        assert!(!a.is_parallel(&LinearForm::from_ints(&[1, 0, 0])));
        assert!(!a.is_parallel(&LinearForm::zero(3)));
    }

    #[test]
    fn projection_kills_weight_and_xi_direction() {
        let w = LinearForm::from_ints(&[1, 0, -1]);
        let x = xi(&[3, 2, 1]);
        let proj = Projection::along(&w, &x).unwrap();
        assert!(proj.apply_linear(&w).is_zero());
        let a = LinearForm::from_ints(&[0, 1, -1]);
        let image = proj.apply_linear(&a);
        assert!(image.pair(&x).unwrap().is_zero());
        // idempotent on its image
        assert_eq!(proj.apply_linear(&image), image);
    }

    #[test]
    fn projection_needs_polarizing_weight() {
        let w = LinearForm::from_ints(&[1, -1]);
        assert_eq!(Projection::along(&w, &xi(&[1, 1])).unwrap_err(), SymbolicError::DegenerateProjection);
    }

    #[test]
    fn span_membership() {
        let basis = [LinearForm::from_ints(&[1, -1, 0, 0]), LinearForm::from_ints(&[0, 1, -1, 0])];
        assert!(in_span(&LinearForm::from_ints(&[1, 0, -1, 0]), &basis));
        assert!(!in_span(&LinearForm::from_ints(&[1, 0, 0, -1]), &basis));
        assert_eq!(rank(&basis), 2);
    }
}
