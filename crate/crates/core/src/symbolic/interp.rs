use super::{rational, LinearForm, Polynomial, RationalExpr, SymbolicError};

fn check_distinct(nodes: &[LinearForm]) -> Result<(), SymbolicError> {
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(SymbolicError::RepeatedNodes(i, j));
            }
        }
    }
    Ok(())
}

fn nvars(nodes: &[LinearForm]) -> usize {
    nodes.first().map_or(0, LinearForm::dim)
}

/// The `r`-th elementary symmetric polynomial of the nodes.
pub fn elementary_symmetric(nodes: &[LinearForm], r: usize) -> Result<Polynomial, SymbolicError> {
    if r > nodes.len() {
        return Err(SymbolicError::OutOfRange { r, n: nodes.len() });
    }
    // e_k of the first i nodes, updated in place.
    let n = nvars(nodes);
    let mut e = vec![Polynomial::zero(n); r + 1];
    e[0] = Polynomial::one(n);
    for node in nodes {
        let x = node.to_polynomial();
        for k in (1..=r).rev() {
            let add = &e[k - 1] * &x;
            e[k] += &add;
        }
    }
    Ok(e.swap_remove(r))
}

/// `sigma^j_r`: the `r`-th elementary symmetric polynomial of all nodes but
/// the `j`-th.
pub fn elementary_symmetric_omitting(nodes: &[LinearForm], j: usize, r: usize) -> Result<Polynomial, SymbolicError> {
    let rest: Vec<LinearForm> = nodes.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, f)| f.clone()).collect();
    if rest.is_empty() {
        return if r == 0 { Ok(Polynomial::one(nvars(nodes))) } else { Err(SymbolicError::OutOfRange { r, n: 0 }) };
    }
    elementary_symmetric(&rest, r)
}

/// `a_ij = x_i^(j-1)`.
pub fn vandermonde(nodes: &[LinearForm]) -> Vec<Vec<Polynomial>> {
    nodes
        .iter()
        .map(|x| {
            let x = x.to_polynomial();
            (0..nodes.len() as u32).map(|k| x.pow(k)).collect()
        })
        .collect()
}

fn differences(nodes: &[LinearForm], j: usize) -> Vec<LinearForm> {
    nodes.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, x)| &nodes[j] - x).collect()
}

fn sign(k: usize) -> num_rational::BigRational {
    if k.is_multiple_of(2) {
        rational(1)
    } else {
        rational(-1)
    }
}

/// Inverse of the Vandermonde matrix through the symmetric functions of the
/// nodes with one node omitted: `b_ij = (-1)^(n-i) sigma^j_(n-i) / prod_(l != j) (x_j - x_l)`.
pub fn vandermonde_inverse(nodes: &[LinearForm]) -> Result<Vec<Vec<RationalExpr>>, SymbolicError> {
    check_distinct(nodes)?;
    let n = nodes.len();
    let mut b = vec![Vec::with_capacity(n); n];
    for (i, row) in b.iter_mut().enumerate() {
        let k = n - 1 - i;
        for j in 0..n {
            let num = elementary_symmetric_omitting(nodes, j, k)?.scale(&sign(k));
            row.push(RationalExpr::new(num, &differences(nodes, j))?);
        }
    }
    Ok(b)
}

/// The same inverse written with the symmetric functions of all nodes:
/// `b_ij = sum_r (-1)^(n-i-r) sigma_(n-i-r) x_j^r / prod_(l != j) (x_j - x_l)`.
pub fn vandermonde_inverse_power_form(nodes: &[LinearForm]) -> Result<Vec<Vec<RationalExpr>>, SymbolicError> {
    check_distinct(nodes)?;
    let n = nodes.len();
    let sigmas: Vec<Polynomial> = (0..=n).map(|r| elementary_symmetric(nodes, r)).collect::<Result<_, _>>()?;
    let mut b = vec![Vec::with_capacity(n); n];
    for (i, row) in b.iter_mut().enumerate() {
        let k = n - 1 - i;
        for j in 0..n {
            let xj = nodes[j].to_polynomial();
            let mut num = Polynomial::zero(nvars(nodes));
            for r in 0..=k {
                num += &(&sigmas[k - r] * &xj.pow(r as u32)).scale(&sign(k - r));
            }
            row.push(RationalExpr::new(num, &differences(nodes, j))?);
        }
    }
    Ok(b)
}

/// The interpolating polynomial `p(x) = sum_i g_i x^(i-1)` through the
/// points `(x_i, f_i)`, with coefficients in the fraction field.
#[derive(Clone, Debug)]
pub struct Interpolant {
    pub coefficients: Vec<RationalExpr>,
}

impl Interpolant {
    /// `p(x)` at a linear form.
    pub fn eval_at(&self, x: &LinearForm) -> RationalExpr {
        let x = x.to_polynomial();
        let terms: Vec<RationalExpr> =
            self.coefficients.iter().enumerate().map(|(k, g)| g.mul_polynomial(&x.pow(k as u32))).collect();
        RationalExpr::sum(x.nvars(), &terms)
    }

    /// The coefficients, when they are all polynomials.
    pub fn polynomial_coefficients(&self) -> Option<Vec<Polynomial>> {
        self.coefficients.iter().map(|g| g.to_polynomial().ok()).collect()
    }
}

pub fn lagrange_interpolate(points: &[(LinearForm, Polynomial)]) -> Result<Interpolant, SymbolicError> {
    let nodes: Vec<LinearForm> = points.iter().map(|(x, _)| x.clone()).collect();
    let b = vandermonde_inverse(&nodes)?;
    let coefficients = b
        .iter()
        .map(|row| {
            let terms: Vec<RationalExpr> = row.iter().zip(points).map(|(bij, (_, f))| bij.mul_polynomial(f)).collect();
            RationalExpr::sum(nvars(&nodes), &terms)
        })
        .collect();
    Ok(Interpolant { coefficients })
}
