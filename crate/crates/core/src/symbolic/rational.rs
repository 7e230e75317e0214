use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{coordinate_names, LinearForm, Polynomial, Rational, SymbolicError};

/// A polynomial divided by a product of nonzero linear forms.
///
/// Denominator factors are stored monic (leading coefficient one), with any
/// scalar folded into the numerator, so parallel factors share a key.
#[derive(Clone, Debug)]
pub struct RationalExpr {
    num: Polynomial,
    den: BTreeMap<LinearForm, u32>,
}

impl RationalExpr {
    pub fn from_polynomial(p: Polynomial) -> Self {
        Self { num: p, den: BTreeMap::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_polynomial(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_polynomial(Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(nvars, c))
    }

    /// `num / prod(factors)`.
    pub fn new<'a>(num: Polynomial, factors: impl IntoIterator<Item = &'a LinearForm>) -> Result<Self, SymbolicError> {
        let mut e = Self::from_polynomial(num);
        for f in factors {
            e = e.div_linear(f)?;
        }
        Ok(e)
    }

    /// `prod(num_factors) / prod(den_factors)` kept factored as far as
    /// possible: matching monic factors cancel before anything is expanded.
    pub fn from_factors(
        nvars: usize,
        num_factors: &[LinearForm],
        den_factors: &[LinearForm],
    ) -> Result<Self, SymbolicError> {
        let mut scale = Rational::one();
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for f in den_factors {
            let (s, monic) = f.normalize().ok_or(SymbolicError::ZeroForm)?;
            scale /= s;
            *den.entry(monic).or_default() += 1;
        }
        let mut num = Polynomial::constant(nvars, scale);
        for f in num_factors {
            if let Some((s, monic)) = f.normalize() {
                if let Some(m) = den.get_mut(&monic) {
                    *m -= 1;
                    if *m == 0 {
                        den.remove(&monic);
                    }
                    num = num.scale(&s);
                    continue;
                }
            }
            num = &num * &f.to_polynomial();
        }
        Ok(Self { num, den })
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Monic denominator factors with multiplicities.
    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.den
    }

    pub fn denominator_polynomial(&self) -> Polynomial {
        self.den.iter().fold(Polynomial::one(self.nvars()), |acc, (f, &k)| &acc * &f.to_polynomial().pow(k))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.to_polynomial().is_ok_and(|p| p.is_one())
    }

    pub fn div_linear(&self, form: &LinearForm) -> Result<Self, SymbolicError> {
        if form.dim() != self.nvars() {
            return Err(SymbolicError::DimensionMismatch { expected: self.nvars(), found: form.dim() });
        }
        let (s, monic) = form.normalize().ok_or(SymbolicError::ZeroForm)?;
        let mut den = self.den.clone();
        *den.entry(monic).or_default() += 1;
        Ok(Self { num: self.num.scale(&s.recip()), den })
    }

    pub fn div_scalar(&self, c: &Rational) -> Result<Self, SymbolicError> {
        if c.is_zero() {
            return Err(SymbolicError::ZeroForm);
        }
        Ok(Self { num: self.num.scale(&c.recip()), den: self.den.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> Self {
        Self { num: &self.num * p, den: self.den.clone() }.reduce()
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let factors: Vec<LinearForm> = self.den.keys().cloned().collect();
        for f in factors {
            while let Some(&k) = self.den.get(&f) {
                match self.num.divides_linear(&f).expect("denominator factor is nonzero") {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.den.remove(&f);
                        } else {
                            self.den.insert(f.clone(), k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.clone().reduce().den.is_empty()
    }

    pub fn to_polynomial(&self) -> Result<Polynomial, SymbolicError> {
        let reduced = self.clone().reduce();
        if reduced.den.is_empty() {
            Ok(reduced.num)
        } else {
            Err(SymbolicError::NotPolynomial(reduced.to_string()))
        }
    }

    /// `1 / self` when the numerator is a nonzero constant.
    pub fn recip_of_constant_numerator(&self) -> Option<Self> {
        let c = self.num.as_constant()?;
        if c.is_zero() {
            return None;
        }
        let num = self.denominator_polynomial().scale(&c.recip());
        Some(Self::from_polynomial(num))
    }

    /// Sum of many terms over their common denominator, reduced once.
    pub fn sum_flat<'a>(nvars: usize, terms: impl IntoIterator<Item = &'a RationalExpr>) -> Self {
        let terms: Vec<&RationalExpr> = terms.into_iter().collect();
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for t in &terms {
            for (f, &k) in &t.den {
                let e = den.entry(f.clone()).or_default();
                *e = (*e).max(k);
            }
        }
        let mut num = Polynomial::zero(nvars);
        for t in &terms {
            let mut lifted = t.num.clone();
            for (f, &k) in &den {
                let have = t.den.get(f).copied().unwrap_or(0);
                if k > have {
                    lifted = &lifted * &f.to_polynomial().pow(k - have);
                }
            }
            num += &lifted;
        }
        Self { num, den }.reduce()
    }

    /// Sum of many terms, added pairwise in a balanced tree and reduced at
    /// every node, so that neighbouring terms cancel before denominators
    /// accumulate.
    pub fn sum<'a>(nvars: usize, terms: impl IntoIterator<Item = &'a RationalExpr>) -> Self {
        let terms: Vec<&RationalExpr> = terms.into_iter().collect();
        fn go(nvars: usize, terms: &[&RationalExpr]) -> RationalExpr {
            match terms {
                [] => RationalExpr::zero(nvars),
                [t] => (*t).clone().reduce(),
                _ if terms.len() <= 2 => RationalExpr::sum_flat(nvars, terms.iter().copied()),
                _ => {
                    let (a, b) = terms.split_at(terms.len() / 2);
                    let (a, b) = (go(nvars, a), go(nvars, b));
                    RationalExpr::sum_flat(nvars, [&a, &b])
                }
            }
        }
        go(nvars, &terms)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, SymbolicError> {
        let d = self.denominator_polynomial().eval(point)?;
        if d.is_zero() {
            return Err(SymbolicError::ZeroForm);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        if self.den.is_empty() {
            return num;
        }
        let num = if self.num.num_terms() > 1 { format!("({num})") } else { num };
        let factors: Vec<String> = self
            .den
            .iter()
            .map(|(f, &k)| {
                let body = f.to_polynomial();
                let text = body.render(names);
                let text = if body.num_terms() > 1 { format!("({text})") } else { text };
                if k == 1 {
                    text
                } else {
                    format!("{text}^{k}")
                }
            })
            .collect();
        if factors.len() == 1 {
            format!("{num}/{}", factors[0])
        } else {
            format!("{num}/({})", factors.join("*"))
        }
    }
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.denominator_polynomial() == &other.num * &self.denominator_polynomial()
    }
}

impl Eq for RationalExpr {}

impl From<Polynomial> for RationalExpr {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&coordinate_names(self.nvars())))
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;

    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::sum(self.nvars(), [self, rhs])
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;

    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;

    fn neg(self) -> RationalExpr {
        RationalExpr { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;

    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        let mut den = self.den.clone();
        for (f, &k) in &rhs.den {
            *den.entry(f.clone()).or_default() += k;
        }
        RationalExpr { num: &self.num * &rhs.num, den }.reduce()
    }
}
