//! Finitely supported measures on the real line.

use num_complex::Complex;

use crate::freeprob::{moments_to_cumulants, CumulantSeq};
use crate::scalar::Scalar;

/// Finite sum of point masses `sum_i mass_i delta_{location_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure<S> {
    atoms: Vec<(S, S)>,
}

impl<S: Scalar> AtomicMeasure<S> {
    /// Builds the measure, merging repeated locations and dropping zero masses.
    /// Atoms are kept sorted by location.
    pub fn new(atoms: impl IntoIterator<Item = (S, S)>) -> Self {
        let mut list: Vec<(S, S)> = atoms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable locations"));
        let mut merged: Vec<(S, S)> = Vec::with_capacity(list.len());
        for (loc, mass) in list {
            match merged.last_mut() {
                Some(last) if last.0 == loc => last.1 = last.1.clone() + mass,
                _ => merged.push((loc, mass)),
            }
        }
        merged.retain(|(_, m)| !m.is_zero());
        AtomicMeasure { atoms: merged }
    }

    pub fn dirac(at: S) -> Self {
        AtomicMeasure {
            atoms: vec![(at, S::one())],
        }
    }

    pub fn zero() -> Self {
        AtomicMeasure { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[(S, S)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> S {
        self.atoms
            .iter()
            .fold(S::zero(), |acc, (_, m)| acc + m.clone())
    }

    /// `int x^k dm`.
    pub fn moment(&self, k: u32) -> S {
        self.atoms
            .iter()
            .fold(S::zero(), |acc, (x, m)| acc + m.clone() * x.powi(k))
    }

    /// `M_0 .. M_k` inclusive.
    pub fn moments(&self, k: usize) -> Vec<S> {
        (0..=k as u32).map(|j| self.moment(j)).collect()
    }

    pub fn mean(&self) -> S {
        self.moment(1)
    }

    pub fn variance(&self) -> S {
        let m1 = self.moment(1);
        self.moment(2) - m1.clone() * m1
    }

    /// Free cumulants `R_1 .. R_k` of a probability measure.
    pub fn free_cumulants(&self, k: usize) -> CumulantSeq<S> {
        let m = self.moments(k);
        moments_to_cumulants(&m[1..])
    }

    /// Pushforward under `x -> factor * x`.
    pub fn scaled(&self, factor: S) -> Self {
        AtomicMeasure::new(
            self.atoms
                .iter()
                .map(|(x, m)| (x.clone() * factor.clone(), m.clone())),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AtomicMeasure<T> {
        AtomicMeasure::new(self.atoms.iter().map(|(x, m)| (f(x), f(m))))
    }

    pub fn to_f64(&self) -> AtomicMeasure<f64> {
        self.map(|v| v.to_float())
    }

    /// `G(z) = int dm(x) / (z - x)`.
    pub fn stieltjes(&self, z: Complex<f64>) -> Complex<f64> {
        self.atoms
            .iter()
            .map(|(x, m)| m.to_float() / (z - x.to_float()))
            .sum()
    }
}
