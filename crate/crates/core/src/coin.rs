// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Coin-flip unitaries.
//!
//! On the line and cycle the coin basis order is `(R, L)`; swapping it
//! reflects every distribution.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use crate::error::{Result, WalkError};
use crate::hilbert::C64;

const UNITARY_TOLERANCE: f64 = 1e-12;

/// Internal hint that lets the engines skip the dense `d × d` product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoinStructure {
    Dense,
    /// `G = (2/d) J - I`: `G v = (2/d) Σ v - v`.
    Grover,
}

/// A validated `d × d` unitary, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    dim: usize,
    entries: Vec<C64>,
    unbiased: bool,
    structure: CoinStructure,
}

impl CoinOperator {
    /// `(1/√2) [[1, 1], [1, -1]]`.
    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::validate(2, vec![h, h, h, -h]).expect("Hadamard is unitary")
    }

    /// `[[sin θ, cos θ], [cos θ, -sin θ]]`, a rotation combined with a
    /// reflection (determinant -1). `rotation(π/4)` is the Hadamard coin.
    pub fn rotation(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(WalkError::invalid(format!(
                "rotation angle must be finite, got {theta}"
            )));
        }
        Ok(Self::rotation_unchecked(theta))
    }

    pub(crate) fn rotation_unchecked(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let entries = vec![
            C64::new(s, 0.0),
            C64::new(c, 0.0),
            C64::new(c, 0.0),
            C64::new(-s, 0.0),
        ];
        let unbiased = (s.abs() - c.abs()).abs() <= UNITARY_TOLERANCE;
        Self {
            dim: 2,
            entries,
            unbiased,
            structure: CoinStructure::Dense,
        }
    }

    /// Grover diffusion coin `G_ab = 2/d - δ_ab`.
    pub fn grover(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(WalkError::invalid(format!(
                "Grover coin needs d >= 2, got {d}"
            )));
        }
        let off = 2.0 / d as f64;
        let mut entries = vec![C64::new(off, 0.0); d * d];
        for a in 0..d {
            entries[a * d + a] = C64::new(off - 1.0, 0.0);
        }
        let mut coin = Self::validate(d, entries)?;
        coin.structure = CoinStructure::Grover;
        Ok(coin)
    }

    /// Accepts a row-major `d × d` matrix if it is unitary within 1e-12.
    pub fn validate(d: usize, entries: Vec<C64>) -> Result<Self> {
        if d == 0 || entries.len() != d * d {
            return Err(WalkError::invalid(format!(
                "coin matrix must be square: {} entries do not form a {d}x{d} matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(WalkError::invalid("coin matrix has non-finite entries"));
        }
        let dev = unitarity_error(d, &entries);
        if dev > UNITARY_TOLERANCE {
            return Err(WalkError::NonUnitary(dev));
        }
        let m0 = entries[0].norm();
        let unbiased = entries
            .iter()
            .all(|c| (c.norm() - m0).abs() <= UNITARY_TOLERANCE);
        Ok(Self {
            dim: d,
            entries,
            unbiased,
            structure: CoinStructure::Dense,
        })
    }

    /// Accepts a matrix given as rows.
    pub fn validate_coin(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(WalkError::invalid("coin matrix must be square"));
        }
        Self::validate(d, rows.concat())
    }

    /// Reads `d²` complex entries in row-major order, one `re im` pair per
    /// line. Blank lines and lines starting with `#` are ignored.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| WalkError::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    /// Parses the text format accepted by [`CoinOperator::from_file`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.ok_or_else(|| {
                    WalkError::invalid(format!("coin file line {}: expected `re im`", lineno + 1))
                })?
                .parse::<f64>()
                .map_err(|e| WalkError::invalid(format!("coin file line {}: {e}", lineno + 1)))
            };
            let re = parse(parts.next())?;
            let im = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(WalkError::invalid(format!(
                    "coin file line {}: trailing tokens",
                    lineno + 1
                )));
            }
            entries.push(C64::new(re, im));
        }
        let d = (entries.len() as f64).sqrt().round() as usize;
        if d * d != entries.len() {
            return Err(WalkError::invalid(format!(
                "coin file holds {} entries, which is not a perfect square",
                entries.len()
            )));
        }
        Self::validate(d, entries)
    }

    /// Text form understood by [`CoinOperator::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.entries {
            out.push_str(&format!("{:e} {:e}\n", c.re, c.im));
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// All entries share one modulus.
    #[inline]
    pub fn is_unbiased(&self) -> bool {
        self.unbiased
    }

    #[inline]
    pub(crate) fn structure(&self) -> CoinStructure {
        self.structure
    }

    /// `out = C · input` for one coin block.
    #[inline]
    pub fn apply(&self, input: &[C64], out: &mut [C64]) {
        let d = self.dim;
        match self.structure {
            CoinStructure::Grover => {
                let scale = 2.0 / d as f64;
                let s: C64 = input.iter().sum::<C64>() * scale;
                for (o, &v) in out.iter_mut().zip(input) {
                    *o = s - v;
                }
            }
            CoinStructure::Dense => {
                for (a, o) in out.iter_mut().enumerate() {
                    let row = &self.entries[a * d..(a + 1) * d];
                    *o = row.iter().zip(input).map(|(c, v)| c * v).sum();
                }
            }
        }
    }

    pub fn product(&self, other: &CoinOperator) -> Vec<C64> {
        matmul(self.dim, &self.entries, &other.entries)
    }

    /// Max entrywise deviation of `C†C` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(self.dim, &self.entries)
    }

    /// Determinant of a 2 × 2 coin.
    pub fn determinant_2x2(&self) -> Option<C64> {
        (self.dim == 2)
            .then(|| self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2])
    }
}

fn matmul(d: usize, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

fn unitarity_error(d: usize, m: &[C64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..d {
                s += m[k * d + i].conj() * m[k * d + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}
