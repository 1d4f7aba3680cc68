// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! States on the joint coin ⊗ vertex Hilbert space.
//!
//! Basis states `|a, x⟩` are stored coin-major: the flat index of coin value
//! `a` at vertex `x` is `a * vertex_count + x`. With this ordering every coin
//! value owns one contiguous block of `vertex_count` amplitudes, so the
//! conditional translation is a plain index permutation inside each block.

use num_complex::Complex64;

use crate::error::{Result, WalkError};

pub type C64 = Complex64;

/// Largest density-matrix dimension the dense engine accepts.
///
/// A 9-cube (dimension 4608) needs roughly 340 MB per matrix at double
/// precision, and an evolution holds two of them.
pub const DENSITY_DIMENSION_CAP: usize = 8192;

pub(crate) const NORM_TOLERANCE: f64 = 1e-12;

/// Shape of the joint space: coin degree `d` and vertex count `|V|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertLayout {
    coin_degree: usize,
    vertex_count: usize,
}

impl HilbertLayout {
    pub fn new(coin_degree: usize, vertex_count: usize) -> Result<Self> {
        if coin_degree == 0 || vertex_count == 0 {
            return Err(WalkError::invalid(format!(
                "layout needs positive coin degree and vertex count, got d={coin_degree}, |V|={vertex_count}"
            )));
        }
        Ok(Self {
            coin_degree,
            vertex_count,
        })
    }

    #[inline]
    pub fn coin_degree(&self) -> usize {
        self.coin_degree
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Total dimension `d * |V|`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.coin_degree * self.vertex_count
    }

    #[inline]
    pub fn index(&self, coin: usize, vertex: usize) -> usize {
        debug_assert!(coin < self.coin_degree && vertex < self.vertex_count);
        coin * self.vertex_count + vertex
    }

    /// Inverse of [`HilbertLayout::index`].
    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.vertex_count, index % self.vertex_count)
    }
}

/// A normalized pure state `|ψ⟩` on the joint space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: HilbertLayout,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Product state `coin ⊗ |vertex⟩`.
    pub fn pure_from(
        coin_amplitudes: &[C64],
        vertex: usize,
        layout: HilbertLayout,
    ) -> Result<Self> {
        if coin_amplitudes.len() != layout.coin_degree() {
            return Err(WalkError::DimensionMismatch {
                expected: layout.coin_degree(),
                found: coin_amplitudes.len(),
            });
        }
        if vertex >= layout.vertex_count() {
            return Err(WalkError::OutOfRange {
                index: vertex,
                bound: layout.vertex_count(),
            });
        }
        let norm: f64 = coin_amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized(norm));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); layout.dim()];
        for (a, &c) in coin_amplitudes.iter().enumerate() {
            amplitudes[layout.index(a, vertex)] = c;
        }
        Ok(Self { layout, amplitudes })
    }

    /// Wraps an amplitude vector, checking length and unit norm.
    pub fn from_amplitudes(layout: HilbertLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(WalkError::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub(crate) fn from_raw(layout: HilbertLayout, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.dim());
        Self { layout, amplitudes }
    }

    #[inline]
    pub fn layout(&self) -> HilbertLayout {
        self.layout
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, coin: usize, vertex: usize) -> C64 {
        self.amplitudes[self.layout.index(coin, vertex)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `P(v) = Σ_a |⟨a,v|ψ⟩|²`.
    pub fn position_distribution(&self) -> Distribution {
        let v = self.layout.vertex_count();
        let mut values = vec![0.0; v];
        for block in self.amplitudes.chunks_exact(v) {
            for (p, c) in values.iter_mut().zip(block) {
                *p += c.norm_sqr();
            }
        }
        Distribution::new(values)
    }
}

/// A density operator stored as a dense row-major `D × D` matrix.
///
/// `normalized` is false for the conditional (surviving) states of absorbing
/// evolution, whose trace is the survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: HilbertLayout,
    matrix: Vec<C64>,
    normalized: bool,
}

impl DensityOperator {
    /// The projector `|ψ⟩⟨ψ|`.
    pub fn density_from(state: &PureState) -> Result<Self> {
        let dim = state.layout.dim();
        check_cap(dim)?;
        let psi = state.amplitudes();
        let mut matrix = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, row) in matrix.chunks_exact_mut(dim).enumerate() {
            let ai = psi[i];
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            for (entry, aj) in row.iter_mut().zip(psi) {
                *entry = ai * aj.conj();
            }
        }
        Ok(Self {
            layout: state.layout,
            matrix,
            normalized: true,
        })
    }

    /// Wraps a row-major matrix. Only the cap and shape are checked here; see
    /// [`DensityOperator::check_invariants`] for the physical checks.
    pub fn from_matrix(layout: HilbertLayout, matrix: Vec<C64>, normalized: bool) -> Result<Self> {
        let dim = layout.dim();
        check_cap(dim)?;
        if matrix.len() != dim * dim {
            return Err(WalkError::DimensionMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        Ok(Self {
            layout,
            matrix,
            normalized,
        })
    }

    /// The maximally mixed state `I / D`.
    pub fn maximally_mixed(layout: HilbertLayout) -> Result<Self> {
        let dim = layout.dim();
        check_cap(dim)?;
        let mut matrix = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self {
            layout,
            matrix,
            normalized: true,
        })
    }

    #[inline]
    pub fn layout(&self) -> HilbertLayout {
        self.layout
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    #[inline]
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn set_normalized(&mut self, normalized: bool) {
        self.normalized = normalized;
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    #[inline]
    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Vec<C64> {
        &mut self.matrix
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.matrix[i * dim + i].re).sum()
    }

    /// `Tr ρ²`, computed as the squared Frobenius norm (valid for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_a ⟨a,v|ρ|a,v⟩`.
    pub fn position_distribution(&self) -> Distribution {
        let v = self.layout.vertex_count();
        let dim = self.dim();
        let mut values = vec![0.0; v];
        for i in 0..dim {
            values[i % v] += self.matrix[i * dim + i].re;
        }
        Distribution::new(values)
    }

    /// Largest entrywise deviation `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let d = (self.matrix[i * dim + j] - self.matrix[j * dim + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Smallest eigenvalue, via a dense Hermitian eigensolver.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let m = nalgebra::DMatrix::from_fn(dim, dim, |i, j| self.matrix[i * dim + j]);
        let eig = nalgebra::SymmetricEigen::new(m);
        eig.eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, the trace condition, and (for dimension ≤ 64)
    /// positivity.
    pub fn check_invariants(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-12 {
            return Err(WalkError::invalid(format!(
                "density operator not Hermitian (error {herm:e})"
            )));
        }
        let tr = self.trace();
        if self.normalized {
            if (tr - 1.0).abs() > 1e-12 {
                return Err(WalkError::invalid(format!(
                    "density operator trace {tr} != 1"
                )));
            }
        } else if !(0.0..=1.0 + 1e-12).contains(&tr) {
            return Err(WalkError::invalid(format!(
                "conditional state trace {tr} outside [0, 1]"
            )));
        }
        if self.dim() <= 64 {
            let lambda = self.min_eigenvalue();
            if lambda < -1e-10 {
                return Err(WalkError::invalid(format!(
                    "density operator has eigenvalue {lambda:e}"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_cap(dim: usize) -> Result<()> {
    if dim > DENSITY_DIMENSION_CAP {
        return Err(WalkError::ResourceCap {
            dimension: dim,
            cap: DENSITY_DIMENSION_CAP,
        });
    }
    Ok(())
}

/// Anything that induces a probability distribution over vertices.
pub trait PositionDistribution {
    fn position_distribution(&self) -> Distribution;
}

impl PositionDistribution for PureState {
    fn position_distribution(&self) -> Distribution {
        PureState::position_distribution(self)
    }
}

impl PositionDistribution for DensityOperator {
    fn position_distribution(&self) -> Distribution {
        DensityOperator::position_distribution(self)
    }
}

/// Free-function form: distribution obtained by tracing out the coin.
pub fn position_distribution<S: PositionDistribution + ?Sized>(state: &S) -> Distribution {
    state.position_distribution()
}

/// Real probability vector over vertices.
///
/// Values are kept exactly as computed (tiny negative roundoff included);
/// [`Distribution::clamped`] is applied at output boundaries.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn uniform(len: usize) -> Self {
        Self {
            values: vec![1.0 / len as f64; len],
        }
    }

    pub fn point_mass(len: usize, vertex: usize) -> Result<Self> {
        if vertex >= len {
            return Err(WalkError::OutOfRange {
                index: vertex,
                bound: len,
            });
        }
        let mut values = vec![0.0; len];
        values[vertex] = 1.0;
        Ok(Self { values })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, vertex: usize) -> f64 {
        self.values[vertex]
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Copy with negative roundoff replaced by zero.
    pub fn clamped(&self) -> Distribution {
        Distribution {
            values: self.values.iter().map(|&p| p.max(0.0)).collect(),
        }
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, vertex: usize) -> &f64 {
        &self.values[vertex]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn layout_index_is_bijective() {
        let layout = HilbertLayout::new(3, 8).unwrap();
        let mut seen = vec![false; layout.dim()];
        for a in 0..3 {
            for x in 0..8 {
                let i = layout.index(a, x);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(layout.split(i), (a, x));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn basis_state_is_point_mass() {
        let layout = HilbertLayout::new(2, 3).unwrap();
        let psi = PureState::pure_from(&[c(1.0, 0.0), c(0.0, 0.0)], 0, layout).unwrap();
        assert_eq!(psi.amplitude(0, 0), c(1.0, 0.0));
        assert_eq!(psi.norm_sqr(), 1.0);
        assert_eq!(psi.position_distribution().values(), &[1.0, 0.0, 0.0]);
        let rho = DensityOperator::density_from(&psi).unwrap();
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        assert_eq!(rho.trace(), 1.0);
        assert_eq!(rho.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn symmetric_initial_state_block() {
        let layout = HilbertLayout::new(2, 3).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::pure_from(&[c(s, 0.0), c(0.0, s)], 1, layout).unwrap();
        let rho = DensityOperator::density_from(&psi).unwrap();
        let (r, l) = (layout.index(0, 1), layout.index(1, 1));
        assert!((rho.get(r, r).re - 0.5).abs() < 1e-15);
        assert!((rho.get(l, l).re - 0.5).abs() < 1e-15);
        assert!((rho.get(r, l) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((rho.get(l, r) - c(0.0, 0.5)).norm() < 1e-15);
        rho.check_invariants().unwrap();
    }

    #[test]
    fn hypercube_equal_superposition_coin() {
        let layout = HilbertLayout::new(3, 8).unwrap();
        let a = 1.0 / 3f64.sqrt();
        let psi = PureState::pure_from(&[c(a, 0.0); 3], 0, layout).unwrap();
        for coin in 0..3 {
            assert!((psi.amplitude(coin, 0).re - a).abs() < 1e-16);
        }
        assert!((psi.position_distribution()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_from_rejects_bad_input() {
        let layout = HilbertLayout::new(2, 3).unwrap();
        assert!(matches!(
            PureState::pure_from(&[c(1.0, 0.0), c(1.0, 0.0)], 0, layout),
            Err(WalkError::NotNormalized(_))
        ));
        assert!(matches!(
            PureState::pure_from(&[c(1.0, 0.0), c(0.0, 0.0)], 3, layout),
            Err(WalkError::OutOfRange { .. })
        ));
        assert!(matches!(
            PureState::pure_from(&[c(1.0, 0.0)], 0, layout),
            Err(WalkError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn two_site_superposition_distribution() {
        // (|R,1⟩ + |L,-1⟩)/√2 on the window {-1,0,1}
        let layout = HilbertLayout::new(2, 3).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 6];
        amps[layout.index(0, 2)] = c(s, 0.0);
        amps[layout.index(1, 0)] = c(s, 0.0);
        let psi = PureState::from_amplitudes(layout, amps).unwrap();
        let p = psi.position_distribution();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[2] - 0.5).abs() < 1e-15);
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let layout = HilbertLayout::new(2, 4097).unwrap();
        assert!(matches!(
            DensityOperator::maximally_mixed(layout),
            Err(WalkError::ResourceCap {
                dimension: 8194,
                cap: 8192
            })
        ));
    }

    #[test]
    fn clamping_only_touches_negatives() {
        let d = Distribution::new(vec![-1e-16, 0.5, 0.5]);
        assert_eq!(d.clamped().values(), &[0.0, 0.5, 0.5]);
        assert_eq!(d.values()[0], -1e-16);
    }
}
