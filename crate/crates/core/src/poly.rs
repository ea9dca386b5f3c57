//! Dense-coefficient multivariate polynomials over the complex field.
//!
//! Small degrees and few variables only; the representation is a sorted map
//! from exponent multi-indices to coefficients, which keeps every operation
//! deterministic (iteration order is the lexicographic order of the index).

use crate::C64;
use nalgebra::DMatrix;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: C64) -> Self {
        let mut p = Self::zero(nvars);
        if value != C64::new(0.0, 0.0) {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut powers = vec![0u32; nvars];
        powers[i] = 1;
        Self::monomial(nvars, powers, C64::new(1.0, 0.0))
    }

    pub fn monomial(nvars: usize, powers: Vec<u32>, coeff: C64) -> Self {
        assert_eq!(powers.len(), nvars);
        let mut p = Self::zero(nvars);
        if coeff != C64::new(0.0, 0.0) {
            p.terms.insert(powers, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|p| p.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nvars);
        let mut acc = C64::new(0.0, 0.0);
        for (powers, coeff) in &self.terms {
            let mut term = *coeff;
            for (xi, &p) in x.iter().zip(powers) {
                if p > 0 {
                    term *= xi.powu(p);
                }
            }
            acc += term;
        }
        acc
    }

    fn insert_add(&mut self, powers: Vec<u32>, coeff: C64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(powers) {
            Entry::Vacant(slot) => {
                if coeff.norm() != 0.0 {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                let updated = *slot.get() + coeff;
                if updated.norm() == 0.0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = updated;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.insert_add(p.clone(), *c);
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = Self::zero(self.nvars);
        if factor == C64::new(0.0, 0.0) {
            return out;
        }
        for (p, c) in &self.terms {
            out.terms.insert(p.clone(), c * factor);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let powers: Vec<u32> = pa.iter().zip(pb).map(|(a, b)| a + b).collect();
                out.insert_add(powers, ca * cb);
            }
        }
        out
    }

    /// Holomorphic partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (powers, coeff) in &self.terms {
            if powers[i] == 0 {
                continue;
            }
            let mut p = powers.clone();
            p[i] -= 1;
            out.insert_add(p, coeff * C64::new(powers[i] as f64, 0.0));
        }
        out
    }

    /// Substitute `x = A u + b`, returning a polynomial in the `u` variables.
    /// `A` has one row per original variable and one column per new variable.
    pub fn compose_affine(&self, a: &DMatrix<C64>, b: &[C64]) -> Self {
        assert_eq!(a.nrows(), self.nvars);
        assert_eq!(b.len(), self.nvars);
        let m = a.ncols();
        // linear replacement polynomial for each original variable
        let lins: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                let mut lin = MultiPoly::constant(m, b[i]);
                for j in 0..m {
                    lin = lin.add(&MultiPoly::monomial(
                        m,
                        {
                            let mut p = vec![0u32; m];
                            p[j] = 1;
                            p
                        },
                        a[(i, j)],
                    ));
                }
                lin
            })
            .collect();
        let mut out = MultiPoly::zero(m);
        for (powers, coeff) in &self.terms {
            let mut term = MultiPoly::constant(m, *coeff);
            for (i, &p) in powers.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&lins[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_and_partial() {
        // p = 2 x0^2 x1 + i x1
        let p = MultiPoly::monomial(2, vec![2, 1], c(2.0, 0.0)).add(&MultiPoly::monomial(
            2,
            vec![0, 1],
            c(0.0, 1.0),
        ));
        let x = [c(1.0, 1.0), c(2.0, 0.0)];
        // x0^2 = 2i, so p = 8i + 2i = 10i
        assert!((p.eval(&x) - c(0.0, 10.0)).norm() < 1e-14);
        let dp0 = p.partial(0); // 4 x0 x1
        assert!((dp0.eval(&x) - c(8.0, 8.0)).norm() < 1e-14);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn affine_composition_matches_pointwise() {
        // p(x0, x1) = x0^2 - x1, substitute x = A u + b
        let p = MultiPoly::monomial(2, vec![2, 0], c(1.0, 0.0)).sub(&MultiPoly::coordinate(2, 1));
        let a =
            DMatrix::from_row_slice(2, 2, &[c(0.5, 0.1), c(0.0, 1.0), c(1.0, 0.0), c(0.3, 0.0)]);
        let b = [c(0.1, 0.0), c(0.0, -0.2)];
        let q = p.compose_affine(&a, &b);
        let u = [c(0.4, -0.3), c(0.2, 0.5)];
        let x = [
            a[(0, 0)] * u[0] + a[(0, 1)] * u[1] + b[0],
            a[(1, 0)] * u[0] + a[(1, 1)] * u[1] + b[1],
        ];
        assert!((q.eval(&u) - p.eval(&x)).norm() < 1e-13);
    }

    #[test]
    fn cancellation_prunes_terms() {
        let p = MultiPoly::coordinate(1, 0);
        let q = p.sub(&p);
        assert!(q.is_zero());
    }
}
