// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Walk topologies and their conditional translations.
//!
//! * Line: a finite window `[-T_max, T_max]` of the integer lattice. Coin 0
//!   (`R`) moves right, coin 1 (`L`) moves left. The window wraps at its
//!   edges, which a walk of at most `T_max` steps from the origin never sees.
//! * Cycle: `N` vertices with periodic boundary, same coin convention.
//! * Hypercube: `2^N` bit-string vertices; coin `a` flips bit `a`.

use serde::Serialize;

use crate::error::{Result, WalkError};
use crate::hilbert::{HilbertLayout, PureState, C64};

/// Largest hypercube dimension accepted by the vector engines.
pub const MAX_HYPERCUBE_DIMENSION: usize = 20;

/// Coin value that moves the walker to larger coordinates on line and cycle.
pub const RIGHT: usize = 0;
/// Coin value that moves the walker to smaller coordinates on line and cycle.
pub const LEFT: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Topology {
    Line { max_steps: usize },
    Cycle { vertices: usize },
    Hypercube { dimension: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkSpace {
    topology: Topology,
    coin_degree: usize,
    vertex_count: usize,
    origin: usize,
}

impl WalkSpace {
    pub fn make_line(max_steps: usize) -> Result<Self> {
        if max_steps == 0 {
            return Err(WalkError::invalid("line window needs max_steps >= 1"));
        }
        Ok(Self {
            topology: Topology::Line { max_steps },
            coin_degree: 2,
            vertex_count: 2 * max_steps + 1,
            origin: max_steps,
        })
    }

    pub fn make_cycle(vertices: usize) -> Result<Self> {
        if vertices < 3 {
            return Err(WalkError::invalid(format!(
                "cycle needs N >= 3, got {vertices}"
            )));
        }
        Ok(Self {
            topology: Topology::Cycle { vertices },
            coin_degree: 2,
            vertex_count: vertices,
            origin: 0,
        })
    }

    pub fn make_hypercube(dimension: usize) -> Result<Self> {
        if dimension == 0 || dimension > MAX_HYPERCUBE_DIMENSION {
            return Err(WalkError::invalid(format!(
                "hypercube dimension must be in 1..={MAX_HYPERCUBE_DIMENSION}, got {dimension}"
            )));
        }
        Ok(Self {
            topology: Topology::Hypercube { dimension },
            coin_degree: dimension,
            vertex_count: 1 << dimension,
            origin: 0,
        })
    }

    #[inline]
    pub fn topology(&self) -> Topology {
        self.topology
    }

    #[inline]
    pub fn coin_degree(&self) -> usize {
        self.coin_degree
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Start vertex: window centre, vertex 0, or bit-string 0…0.
    #[inline]
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn layout(&self) -> HilbertLayout {
        HilbertLayout::new(self.coin_degree, self.vertex_count).expect("validated at construction")
    }

    /// Default coin state at the origin: `(|R> + i|L>)/√2` on line and
    /// cycle, the equal superposition `Σ_a |a>/√N` on the hypercube.
    pub fn default_coin_state(&self) -> Vec<C64> {
        match self.topology {
            Topology::Line { .. } | Topology::Cycle { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                vec![C64::new(s, 0.0), C64::new(0.0, s)]
            }
            Topology::Hypercube { dimension } => {
                vec![C64::new(1.0 / (dimension as f64).sqrt(), 0.0); dimension]
            }
        }
    }

    /// [`WalkSpace::default_coin_state`] at the origin.
    pub fn initial_state(&self) -> PureState {
        PureState::pure_from(&self.default_coin_state(), self.origin, self.layout())
            .expect("normalized by construction")
    }

    /// Total joint dimension `d * |V|`.
    pub fn dim(&self) -> usize {
        self.coin_degree * self.vertex_count
    }

    /// Short human-readable label such as `cycle(30)`.
    pub fn label(&self) -> String {
        match self.topology {
            Topology::Line { max_steps } => format!("line({max_steps})"),
            Topology::Cycle { vertices } => format!("cycle({vertices})"),
            Topology::Hypercube { dimension } => format!("hypercube({dimension})"),
        }
    }

    /// Image of `vertex` under the shift selected by `coin`. Indices are not
    /// checked; see [`WalkSpace::translate_index`].
    #[inline]
    pub fn translate(&self, coin: usize, vertex: usize) -> usize {
        match self.topology {
            Topology::Line { .. } | Topology::Cycle { .. } => {
                let n = self.vertex_count;
                if coin == RIGHT {
                    if vertex + 1 == n {
                        0
                    } else {
                        vertex + 1
                    }
                } else if vertex == 0 {
                    n - 1
                } else {
                    vertex - 1
                }
            }
            Topology::Hypercube { .. } => vertex ^ (1 << coin),
        }
    }

    /// Preimage of `vertex` under the shift selected by `coin`.
    #[inline]
    pub fn inverse_translate(&self, coin: usize, vertex: usize) -> usize {
        match self.topology {
            Topology::Line { .. } | Topology::Cycle { .. } => self.translate(1 - coin, vertex),
            Topology::Hypercube { .. } => vertex ^ (1 << coin),
        }
    }

    pub fn translate_index(&self, coin: usize, vertex: usize) -> Result<usize> {
        self.check_coin(coin)?;
        self.check_vertex(vertex)?;
        Ok(self.translate(coin, vertex))
    }

    pub(crate) fn check_coin(&self, coin: usize) -> Result<()> {
        if coin >= self.coin_degree {
            return Err(WalkError::OutOfRange {
                index: coin,
                bound: self.coin_degree,
            });
        }
        Ok(())
    }

    pub(crate) fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex >= self.vertex_count {
            return Err(WalkError::OutOfRange {
                index: vertex,
                bound: self.vertex_count,
            });
        }
        Ok(())
    }

    /// Signed lattice coordinate `x = i - T_max` of a line vertex.
    pub fn coordinate(&self, vertex: usize) -> Result<i64> {
        match self.topology {
            Topology::Line { max_steps } => {
                self.check_vertex(vertex)?;
                Ok(vertex as i64 - max_steps as i64)
            }
            _ => Err(WalkError::Unsupported(format!(
                "signed coordinates exist only on the line, not on {}",
                self.label()
            ))),
        }
    }

    /// Vertex index of a line coordinate.
    pub fn vertex_at(&self, x: i64) -> Result<usize> {
        match self.topology {
            Topology::Line { max_steps } => {
                let t = max_steps as i64;
                if x < -t || x > t {
                    return Err(WalkError::invalid(format!(
                        "coordinate {x} outside window [-{t}, {t}]"
                    )));
                }
                Ok((x + t) as usize)
            }
            _ => Err(WalkError::Unsupported(
                "vertex_at is defined on the line only".into(),
            )),
        }
    }

    /// Whether the vertex set splits into two classes with every edge
    /// crossing between them.
    pub fn is_bipartite(&self) -> bool {
        match self.topology {
            Topology::Line { .. } | Topology::Cycle { .. } => self.vertex_count.is_multiple_of(2),
            Topology::Hypercube { .. } => true,
        }
    }

    /// Class (0 or 1) of a vertex in the bipartition; meaningful only when
    /// [`WalkSpace::is_bipartite`] holds.
    #[inline]
    pub fn vertex_parity(&self, vertex: usize) -> usize {
        match self.topology {
            Topology::Hypercube { .. } => (vertex.count_ones() & 1) as usize,
            _ => vertex & 1,
        }
    }

    /// Vertex diametrically opposite the origin (bitwise complement on the
    /// hypercube).
    pub fn antipode(&self) -> usize {
        match self.topology {
            Topology::Line { .. } => self.origin,
            Topology::Cycle { vertices } => vertices / 2,
            Topology::Hypercube { .. } => self.vertex_count - 1,
        }
    }

    /// Distinct neighbours of `vertex`, one per coin value.
    pub fn neighbors(&self, vertex: usize) -> Vec<usize> {
        (0..self.coin_degree)
            .map(|a| self.translate(a, vertex))
            .collect()
    }

    /// Unbiased classical walk with resting probability `resting`.
    pub fn classical_matrix(&self, resting: f64) -> Result<StochasticMatrix> {
        if !(0.0..1.0).contains(&resting) {
            return Err(WalkError::invalid(format!(
                "resting probability {resting} outside [0, 1)"
            )));
        }
        let n = self.vertex_count;
        let mut columns = Vec::with_capacity(n);
        for i in 0..n {
            let nbrs = self.neighbors(i);
            let share = (1.0 - resting) / nbrs.len() as f64;
            let mut col: Vec<(usize, f64)> = Vec::with_capacity(nbrs.len() + 1);
            if resting > 0.0 {
                col.push((i, resting));
            }
            for j in nbrs {
                match col.iter_mut().find(|(k, _)| *k == j) {
                    Some(entry) => entry.1 += share,
                    None => col.push((j, share)),
                }
            }
            col.sort_by_key(|&(j, _)| j);
            columns.push(col);
        }
        Ok(StochasticMatrix {
            size: n,
            resting,
            columns,
        })
    }
}

/// Column-stochastic transition matrix stored by sparse columns:
/// entry `(j, i)` is the probability of moving from vertex `i` to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    size: usize,
    resting: f64,
    columns: Vec<Vec<(usize, f64)>>,
}

impl StochasticMatrix {
    /// Builds from a dense column-major-by-meaning matrix: `dense[j][i]` is
    /// the transition `i → j`. Columns must sum to 1 and entries be
    /// non-negative.
    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let n = dense.len();
        if n == 0 || dense.iter().any(|r| r.len() != n) {
            return Err(WalkError::invalid(
                "stochastic matrix must be square and non-empty",
            ));
        }
        let mut columns = vec![Vec::new(); n];
        for (j, row) in dense.iter().enumerate() {
            for (i, &w) in row.iter().enumerate() {
                if w < 0.0 || !w.is_finite() {
                    return Err(WalkError::invalid(format!(
                        "entry ({j},{i}) = {w} is not a probability"
                    )));
                }
                if w > 0.0 {
                    columns[i].push((j, w));
                }
            }
        }
        let m = Self {
            size: n,
            resting: 0.0,
            columns,
        };
        let worst = m.column_sum_error();
        if worst > 1e-12 {
            return Err(WalkError::invalid(format!(
                "columns do not sum to 1 (error {worst:e})"
            )));
        }
        Ok(m)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn resting(&self) -> f64 {
        self.resting
    }

    /// Entry `(j, i)`: probability of the move `i → j`.
    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.columns[i]
            .iter()
            .find(|(k, _)| *k == j)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn column(&self, i: usize) -> &[(usize, f64)] {
        &self.columns[i]
    }

    pub fn column_sum_error(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| (c.iter().map(|&(_, w)| w).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `out = M · input`.
    pub fn apply(&self, input: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, col) in self.columns.iter().enumerate() {
            let p = input[i];
            if p == 0.0 {
                continue;
            }
            for &(j, w) in col {
                out[j] += w * p;
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.size]; self.size];
        for (i, col) in self.columns.iter().enumerate() {
            for &(j, w) in col {
                dense[j][i] = w;
            }
        }
        dense
    }
}
