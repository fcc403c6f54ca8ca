//! Points and velocities in `R^n`.

use alloc::vec::Vec;
use core::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct VecN<S>(Vec<S>);

impl<S: Scalar> VecN<S> {
    pub fn new(components: Vec<S>) -> Self {
        assert!(!components.is_empty(), "dimension must be at least 1");
        VecN(components)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new((0..dim).map(|_| S::zero()).collect())
    }

    /// Unit vector `e_axis` (zero-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = S::one();
        v
    }

    pub fn from_ints(components: &[i64]) -> Self {
        Self::new(components.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }

    pub fn into_components(self) -> Vec<S> {
        self.0
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn scale(&self, c: &S) -> Self {
        VecN(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `self + t * dir`
    pub fn advance(&self, dir: &Self, t: &S) -> Self {
        debug_assert_eq!(self.dim(), dir.dim());
        VecN(
            self.0
                .iter()
                .zip(&dir.0)
                .map(|(x, v)| x.clone() + v.clone() * t.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Mass-weighted mean `Σ w_i p_i / Σ w_i`. `None` for an empty input or a
    /// non-positive total weight.
    pub fn weighted_mean<'a, I>(items: I) -> Option<Self>
    where
        I: IntoIterator<Item = (&'a S, &'a Self)>,
    {
        let mut total = S::zero();
        let mut acc: Option<Self> = None;
        for (w, p) in items {
            total = total + w.clone();
            let term = p.scale(w);
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        let acc = acc?;
        if !total.is_positive() {
            return None;
        }
        let inv = S::one() / total;
        Some(acc.scale(&inv))
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> VecN<T> {
        VecN(self.0.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }
}

impl<S> Index<usize> for VecN<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &VecN<S> {
    type Output = VecN<S>;
    fn add(self, rhs: Self) -> VecN<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<S: Scalar> Sub for &VecN<S> {
    type Output = VecN<S>;
    fn sub(self, rhs: Self) -> VecN<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<S: Scalar> Neg for &VecN<S> {
    type Output = VecN<S>;
    fn neg(self) -> VecN<S> {
        VecN(self.0.iter().map(|a| -a.clone()).collect())
    }
}

/// True iff `|p - q|^2 <= tol^2`; exact equality when `tol` is zero.
pub fn coincide<S: Scalar>(p: &VecN<S>, q: &VecN<S>, tol: &S) -> Result<bool> {
    p.check_dim(q)?;
    Ok(coincide_unchecked(p, q, tol))
}

pub(crate) fn coincide_unchecked<S: Scalar>(p: &VecN<S>, q: &VecN<S>, tol: &S) -> bool {
    if tol.is_zero() {
        p == q
    } else {
        (p - q).norm_sq() <= tol.clone() * tol.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::vec;

    #[test]
    fn coincide_examples() {
        let a = VecN::<Rational>::from_ints(&[1, 1]);
        assert!(coincide(&a, &a.clone(), &Rational::zero()).unwrap());
        let e1 = VecN::<Rational>::from_ints(&[1, 0]);
        let e2 = VecN::<Rational>::from_ints(&[0, 1]);
        assert!(!coincide(&e1, &e2, &Rational::zero()).unwrap());

        let p = VecN::new(vec![1.0, 1e-10]);
        let q = VecN::new(vec![1.0, 0.0]);
        assert!(coincide(&p, &q, &1e-9).unwrap());
        assert!(!coincide(&p, &q, &1e-11).unwrap());
    }

    #[test]
    fn coincide_rejects_dimension_mismatch() {
        let p = VecN::new(vec![1.0, 0.0]);
        let q = VecN::new(vec![1.0]);
        assert_eq!(
            coincide(&p, &q, &0.0),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn weighted_mean_of_nothing() {
        let empty: [(&f64, &VecN<f64>); 0] = [];
        assert!(VecN::weighted_mean(empty).is_none());
    }
}
