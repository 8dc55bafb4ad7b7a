use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `e_i`, the index of a first-order partial derivative.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self - other`, or `None` if some component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (1..=a).map(f64::from).product::<f64>())
            .product()
    }

    /// `ξ^α`
    pub fn monomial(&self, xi: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(xi)
            .map(|(&a, &x)| if a == 0 { 1.0 } else { x.powi(a as i32) })
            .product()
    }

    /// All multi-indices of the given dimension with total degree exactly `degree`,
    /// in lexicographic order.
    pub fn all_of_degree(dim: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=left {
                prefix.push(a);
                rec(dim, left - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            return out;
        }
        rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
        out
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Sparse real polynomial `P(ξ) = Σ c_α ξ^α` on `R^n`.
///
/// Stored coefficients are always nonzero and the cached order is the
/// maximal total degree of a stored term (0 for the zero polynomial).
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
    order: u32,
}

impl SymbolPoly {
    pub fn zero(dim: usize) -> Self {
        SymbolPoly {
            dim,
            terms: BTreeMap::new(),
            order: 0,
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_terms(dim, [(MultiIndex::zeros(dim), c)])
    }

    /// The coordinate function `ξ_axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        Self::from_terms(dim, [(MultiIndex::unit(dim, axis), 1.0)])
    }

    /// `|ξ|^k` for even `k`, expanded into monomials.
    pub fn norm_power(dim: usize, k: u32) -> Self {
        assert!(k % 2 == 0, "|x|^k needs an even exponent");
        let r2 = (0..dim).fold(Self::zero(dim), |acc, i| {
            &acc + &Self::from_terms(dim, [(MultiIndex::unit(dim, i).add(&MultiIndex::unit(dim, i)), 1.0)])
        });
        r2.pow(k / 2)
    }

    /// Builds a polynomial from (index, coefficient) pairs. Repeated indices
    /// are summed and zero coefficients dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut map: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (idx, c) in terms {
            assert_eq!(idx.dim(), dim, "multi-index dimension mismatch");
            *map.entry(idx).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        let order = map.keys().map(MultiIndex::degree).max().unwrap_or(0);
        SymbolPoly {
            dim,
            terms: map,
            order,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total degree `m` of the highest stored term.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn coeff(&self, idx: &MultiIndex) -> f64 {
        self.terms.get(idx).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        self.terms.iter().map(|(idx, c)| c * idx.monomial(xi)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dim, 1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact `∂^α P`. Over-differentiation yields the zero polynomial.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        assert_eq!(alpha.dim(), self.dim, "multi-index dimension mismatch");
        let terms = self.terms.iter().filter_map(|(beta, &c)| {
            let rest = beta.checked_sub(alpha)?;
            let falling: f64 = beta
                .as_slice()
                .iter()
                .zip(alpha.as_slice())
                .map(|(&b, &a)| ((b - a + 1)..=b).map(f64::from).product::<f64>())
                .product();
            Some((rest, c * falling))
        });
        Self::from_terms(self.dim, terms)
    }

    /// `P_m`, the terms of total degree exactly `m`.
    pub fn principal_part(&self) -> Self {
        self.homogeneous_part(self.order)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .filter(|(k, _)| k.degree() == degree)
                .map(|(k, &c)| (k.clone(), c)),
        )
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|k| k.degree() == self.order)
    }

    /// Product truncated to total degree `<= max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() <= max_degree {
                    out.push((a.add(b), ca * cb));
                }
            }
        }
        Self::from_terms(self.dim, out)
    }

    /// Taylor re-expansion about `center`: the returned polynomial `T`
    /// satisfies `T(h) = P(center + h)`, so its coefficients are `∂^α P(center)/α!`.
    pub fn shifted(&self, center: &[f64]) -> Self {
        assert_eq!(center.len(), self.dim);
        let dim = self.dim;
        // (h_i + c_i)^k for every needed (i, k)
        let mut powers: Vec<Vec<SymbolPoly>> = Vec::with_capacity(dim);
        for (i, &c) in center.iter().enumerate() {
            let max_k = self
                .terms
                .keys()
                .map(|k| k.as_slice()[i])
                .max()
                .unwrap_or(0);
            let lin = &Self::coordinate(dim, i) + &Self::constant(dim, c);
            let mut pw = vec![Self::constant(dim, 1.0)];
            for k in 1..=max_k as usize {
                let next = &pw[k - 1] * &lin;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = Self::zero(dim);
        for (idx, &c) in &self.terms {
            let mut term = Self::constant(dim, c);
            for (i, &a) in idx.as_slice().iter().enumerate() {
                if a > 0 {
                    term = &term * &powers[i][a as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Univariate coefficients `c_j` of `ρ ↦ P(ρω) = Σ_j c_j ρ^j`.
    pub fn ray_coefficients(&self, omega: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.order as usize + 1];
        for (idx, &v) in &self.terms {
            c[idx.degree() as usize] += v * idx.monomial(omega);
        }
        c
    }

    /// If `P(ξ) = Σ_k c_k |ξ|^{2k}`, returns the profile coefficients `c_k`.
    pub fn radial_profile(&self) -> Option<Vec<f64>> {
        if self.is_zero() || self.order % 2 == 1 {
            return None;
        }
        let mut e1 = vec![0.0; self.dim];
        e1[0] = 1.0;
        let ray = self.ray_coefficients(&e1);
        if ray.iter().skip(1).step_by(2).any(|&c| c != 0.0) {
            return None;
        }
        let profile: Vec<f64> = ray.iter().step_by(2).copied().collect();
        let rebuilt = profile
            .iter()
            .enumerate()
            .fold(Self::zero(self.dim), |acc, (k, &c)| {
                &acc + &Self::norm_power(self.dim, 2 * k as u32).scale(c)
            });
        let scale = self.terms.values().fold(0.0_f64, |a, c| a.max(c.abs()));
        let keys_match = rebuilt.terms.keys().eq(self.terms.keys());
        let close = rebuilt
            .terms
            .iter()
            .all(|(k, c)| (c - self.coeff(k)).abs() <= 1e-12 * scale);
        (keys_match && close).then_some(profile)
    }

    /// `∂_i P` for every axis.
    pub fn gradient(&self) -> Vec<SymbolPoly> {
        (0..self.dim)
            .map(|i| self.derivative(&MultiIndex::unit(self.dim, i)))
            .collect()
    }

    /// Second partials `∂_i∂_j P`, row-major, full `n × n`.
    pub fn hessian(&self) -> Vec<SymbolPoly> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let idx = MultiIndex::unit(n, i).add(&MultiIndex::unit(n, j));
                out.push(self.derivative(&idx));
            }
        }
        out
    }
}

impl Add for &SymbolPoly {
    type Output = SymbolPoly;
    fn add(self, rhs: &SymbolPoly) -> SymbolPoly {
        assert_eq!(self.dim, rhs.dim);
        SymbolPoly::from_terms(
            self.dim,
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(k, &c)| (k.clone(), c)),
        )
    }
}

impl Sub for &SymbolPoly {
    type Output = SymbolPoly;
    fn sub(self, rhs: &SymbolPoly) -> SymbolPoly {
        self + &(-rhs)
    }
}

impl Neg for &SymbolPoly {
    type Output = SymbolPoly;
    fn neg(self) -> SymbolPoly {
        self.scale(-1.0)
    }
}

impl Mul for &SymbolPoly {
    type Output = SymbolPoly;
    fn mul(self, rhs: &SymbolPoly) -> SymbolPoly {
        assert_eq!(self.dim, rhs.dim);
        self.mul_truncated(rhs, u32::MAX)
    }
}

/// Canonical text form: terms by ascending degree, then descending
/// exponent vector, e.g. `1 + 2*x1^2 + 2*x2^2 + x1^4 + 2*x1^2*x2^2 + x2^4`.
impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        for (pos, idx) in keys.into_iter().enumerate() {
            let c = self.terms[idx];
            let mag = c.abs();
            if pos == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = idx
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, a)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_coeff(mag))?;
            } else if mag == 1.0 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_coeff(mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Shortest representation that parses back to the same bits.
pub(crate) fn format_coeff(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{:?}", c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn biharmonic(dim: usize) -> SymbolPoly {
        SymbolPoly::norm_power(dim, 4)
    }

    #[test]
    fn second_derivative_of_squared_norm_squared() {
        let p = biharmonic(2);
        let d = p.derivative(&MultiIndex::new(vec![2, 0]));
        let expected = SymbolPoly::from_terms(
            2,
            [
                (MultiIndex::new(vec![2, 0]), 12.0),
                (MultiIndex::new(vec![0, 2]), 4.0),
            ],
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn zero_derivative_is_identity() {
        let p = &biharmonic(3) + &SymbolPoly::constant(3, 1.0);
        assert_eq!(p.derivative(&MultiIndex::zeros(3)), p);
    }

    #[test]
    fn over_differentiation_gives_zero() {
        let p = &biharmonic(2) + &SymbolPoly::coordinate(2, 0);
        let d = p.derivative(&MultiIndex::new(vec![3, 2]));
        assert!(d.is_zero());
        assert_eq!(d.order(), 0);
    }

    #[test]
    fn principal_part_filters_top_degree() {
        let one = SymbolPoly::constant(2, 1.0);
        let p = &one + &biharmonic(2);
        assert_eq!(p.principal_part(), biharmonic(2));
        let q = &(&one + &SymbolPoly::norm_power(2, 2).scale(2.0)) + &biharmonic(2);
        assert_eq!(q.principal_part(), biharmonic(2));
        assert_eq!(biharmonic(2).principal_part(), biharmonic(2));
    }

    #[test]
    fn shifted_reproduces_values() {
        let p = &(&SymbolPoly::constant(2, 1.0) + &biharmonic(2)) + &SymbolPoly::coordinate(2, 0).pow(3);
        let c = [0.3, -1.2];
        let s = p.shifted(&c);
        for h in [[0.0, 0.0], [0.5, 0.25], [-1.0, 2.0]] {
            let a = s.eval(&h);
            let b = p.eval(&[c[0] + h[0], c[1] + h[1]]);
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn radial_profile_detects_radial_symbols() {
        let p = &(&SymbolPoly::constant(3, 1.0) + &SymbolPoly::norm_power(3, 2).scale(2.0)) + &biharmonic(3);
        assert_eq!(p.radial_profile(), Some(vec![1.0, 2.0, 1.0]));
        let q = &p + &SymbolPoly::coordinate(3, 0).pow(2);
        assert_eq!(q.radial_profile(), None);
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&SymbolPoly::constant(2, 1.0) + &SymbolPoly::norm_power(2, 2).scale(2.0)) + &biharmonic(2);
        assert_eq!(p.to_string(), "1 + 2*x1^2 + 2*x2^2 + x1^4 + 2*x1^2*x2^2 + x2^4");
        let q = SymbolPoly::from_terms(2, [(MultiIndex::new(vec![1, 0]), -0.5)]);
        assert_eq!(q.to_string(), "-0.5*x1");
    }
}
