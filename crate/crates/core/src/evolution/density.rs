// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact density-operator evolution under projective-measurement
//! decoherence, and its absorbing (target-monitoring) variant.
//!
//! A step computes `X = U ρ` by row operations, then `Y = X U†` by column
//! operations, then applies the dephasing channel. Each measurement channel
//! `ρ ↦ (1-p) ρ + p Σ_i P_i ρ P_i` with computational-basis projectors is an
//! entrywise mask: entries coupling different measurement outcomes are scaled
//! by `1 - p`, all others are kept. The mask is fused into the column pass.
//!
//! Cost per step is `O(d · D²)` for a dense coin and `O(D²)` for Grover,
//! against `O(D³)` for a dense matrix product.

use rayon::prelude::*;

use crate::coin::{CoinOperator, CoinStructure};
use crate::error::{Result, WalkError};
use crate::hilbert::{check_cap, DensityOperator, Distribution, C64};
use crate::space::{Topology, WalkSpace};

use super::{
    check_compatible, coin_label, EngineKind, NoiseModel, NoiseTarget, RecordOptions, SeriesMeta,
    TimeSeries,
};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Stateful density evolution that reuses its buffers across steps.
pub struct DensityEvolution<'a> {
    space: &'a WalkSpace,
    coin: &'a CoinOperator,
    noise: NoiseModel,
    rho: DensityOperator,
    scratch: Vec<C64>,
    /// Per-vertex coin sums of rows, Grover fast path only.
    block_sums: Vec<C64>,
    /// `preimage[a * V + y]` is the vertex `x` with `translate(a, x) = y`.
    preimage: Vec<usize>,
    /// Vertex interval outside which every entry is zero (line only). Both
    /// buffers stay zero outside it, which lets the passes skip that region.
    support: Option<(usize, usize)>,
    steps_taken: usize,
}

impl<'a> DensityEvolution<'a> {
    pub fn new(
        initial: DensityOperator,
        coin: &'a CoinOperator,
        space: &'a WalkSpace,
        noise: NoiseModel,
    ) -> Result<Self> {
        check_compatible(space, coin, initial.layout())?;
        check_cap(initial.dim())?;
        if !matches!(noise.target(), NoiseTarget::None) && !noise.target().is_projective() {
            return Err(WalkError::Unsupported(format!(
                "noise target `{}` is only available in the trajectory engine",
                noise.target().name()
            )));
        }
        let d = space.coin_degree();
        let v = space.vertex_count();
        let mut preimage = vec![0; d * v];
        for a in 0..d {
            for x in 0..v {
                preimage[a * v + space.translate(a, x)] = x;
            }
        }
        let dim = initial.dim();
        let block_sums = if coin.structure() == CoinStructure::Grover {
            vec![ZERO; v * dim]
        } else {
            Vec::new()
        };
        let support = match (space.topology(), coin.structure()) {
            (Topology::Line { .. }, CoinStructure::Dense) => {
                Some(vertex_support(&initial, v).unwrap_or((space.origin(), space.origin())))
            }
            _ => None,
        };
        Ok(Self {
            space,
            coin,
            noise,
            rho: initial,
            scratch: vec![ZERO; dim * dim],
            block_sums,
            preimage,
            support,
            steps_taken: 0,
        })
    }

    #[inline]
    pub fn state(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn into_state(self) -> DensityOperator {
        self.rho
    }

    #[inline]
    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn position_distribution(&self) -> Distribution {
        self.rho.position_distribution()
    }

    /// One full noisy step. Linear, so valid on unnormalized states.
    pub fn step(&mut self) {
        let v = self.space.vertex_count();
        let range = match self.support {
            Some((lo, hi)) if lo > 0 && hi + 1 < v => {
                self.support = Some((lo - 1, hi + 1));
                (lo - 1, hi + 1)
            }
            _ => {
                self.support = None;
                (0, v - 1)
            }
        };
        self.row_pass(range);
        self.column_pass(range);
        std::mem::swap(self.rho.matrix_mut(), &mut self.scratch);
        self.steps_taken += 1;
    }

    /// `scratch = U ρ` on rows and columns whose vertex lies in `range`.
    fn row_pass(&mut self, range: (usize, usize)) {
        let d = self.space.coin_degree();
        let v = self.space.vertex_count();
        let dim = d * v;
        let rho = self.rho.matrix();
        let preimage = &self.preimage;
        match self.coin.structure() {
            CoinStructure::Grover => {
                let sums = &mut self.block_sums;
                sums.par_chunks_mut(dim).enumerate().for_each(|(x, out)| {
                    out.copy_from_slice(&rho[x * dim..(x + 1) * dim]);
                    for a in 1..d {
                        let src = &rho[(a * v + x) * dim..(a * v + x + 1) * dim];
                        for (o, &s) in out.iter_mut().zip(src) {
                            *o += s;
                        }
                    }
                });
                let scale = 2.0 / d as f64;
                let sums = &self.block_sums;
                self.scratch
                    .par_chunks_mut(dim)
                    .enumerate()
                    .for_each(|(r, out)| {
                        let a = r / v;
                        let x = preimage[r];
                        let sum = &sums[x * dim..(x + 1) * dim];
                        let own = &rho[(a * v + x) * dim..(a * v + x + 1) * dim];
                        for ((o, &s), &w) in out.iter_mut().zip(sum).zip(own) {
                            *o = s * scale - w;
                        }
                    });
            }
            CoinStructure::Dense => {
                let coin = self.coin;
                let (lo, hi) = range;
                self.scratch
                    .par_chunks_mut(dim)
                    .enumerate()
                    .for_each(|(r, out)| {
                        if !(lo..=hi).contains(&(r % v)) {
                            return;
                        }
                        let a_out = r / v;
                        let x = preimage[r];
                        for b in 0..d {
                            out[b * v + lo..=b * v + hi]
                                .iter_mut()
                                .for_each(|o| *o = ZERO);
                        }
                        for a_in in 0..d {
                            let c = coin.entry(a_out, a_in);
                            if c == ZERO {
                                continue;
                            }
                            let src = &rho[(a_in * v + x) * dim..(a_in * v + x + 1) * dim];
                            for b in 0..d {
                                let seg = b * v + lo..=b * v + hi;
                                let (o_seg, s_seg) = (&mut out[seg.clone()], &src[seg]);
                                if c.im == 0.0 {
                                    for (o, &s) in o_seg.iter_mut().zip(s_seg) {
                                        *o += s * c.re;
                                    }
                                } else {
                                    for (o, &s) in o_seg.iter_mut().zip(s_seg) {
                                        *o += s * c;
                                    }
                                }
                            }
                        }
                    });
            }
        }
    }

    /// `scratch = channel(scratch U†)`, row by row in place.
    fn column_pass(&mut self, range: (usize, usize)) {
        let d = self.space.coin_degree();
        let v = self.space.vertex_count();
        let dim = d * v;
        let preimage = &self.preimage;
        let coin = self.coin;
        let keep = 1.0 - self.noise.effective_rate();
        let target = if self.noise.is_noiseless() {
            NoiseTarget::None
        } else {
            self.noise.target()
        };
        let grover = coin.structure() == CoinStructure::Grover;
        let scale = 2.0 / d as f64;
        let (lo, hi) = range;
        self.scratch.par_chunks_mut(dim).enumerate().for_each_init(
            || (vec![ZERO; dim], vec![ZERO; v]),
            |(buf, sums), (r, row)| {
                if !(lo..=hi).contains(&(r % v)) {
                    return;
                }
                if grover {
                    buf.copy_from_slice(row);
                    sums.copy_from_slice(&buf[..v]);
                    for b in 1..d {
                        for (s, &w) in sums.iter_mut().zip(&buf[b * v..(b + 1) * v]) {
                            *s += w;
                        }
                    }
                    for b_out in 0..d {
                        let pre = &preimage[b_out * v..(b_out + 1) * v];
                        let own = &buf[b_out * v..(b_out + 1) * v];
                        for (y_out, o) in row[b_out * v..(b_out + 1) * v].iter_mut().enumerate() {
                            let y = pre[y_out];
                            *o = sums[y] * scale - own[y];
                        }
                    }
                } else {
                    // columns outside the range are zero in `row` and never
                    // written in `buf`
                    for b in 0..d {
                        buf[b * v + lo..=b * v + hi].copy_from_slice(&row[b * v + lo..=b * v + hi]);
                    }
                    for b_out in 0..d {
                        let pre = &preimage[b_out * v..(b_out + 1) * v];
                        for y_out in lo..=hi {
                            let o = &mut row[b_out * v + y_out];
                            let y = pre[y_out];
                            let mut acc = ZERO;
                            for b_in in 0..d {
                                let c = coin.entry(b_out, b_in);
                                if c != ZERO {
                                    acc += buf[b_in * v + y] * c.conj();
                                }
                            }
                            *o = acc;
                        }
                    }
                }
                apply_mask(row, r, d, v, target, keep, range);
            },
        );
    }

    /// Projects onto the complement of `target` (all coin values) and returns
    /// the probability that was removed.
    pub fn absorb_vertex(&mut self, target: usize) -> f64 {
        let d = self.space.coin_degree();
        let v = self.space.vertex_count();
        let dim = d * v;
        let m = self.rho.matrix_mut();
        let mut halted = 0.0;
        for a in 0..d {
            let i = a * v + target;
            halted += m[i * dim + i].re;
            m[i * dim..(i + 1) * dim].iter_mut().for_each(|z| *z = ZERO);
        }
        for row in m.chunks_exact_mut(dim) {
            for a in 0..d {
                row[a * v + target] = ZERO;
            }
        }
        self.rho.set_normalized(false);
        halted
    }
}

#[inline]
fn apply_mask(
    row: &mut [C64],
    r: usize,
    d: usize,
    v: usize,
    target: NoiseTarget,
    keep: f64,
    range: (usize, usize),
) {
    let (a, x) = (r / v, r % v);
    let (lo, hi) = range;
    match target {
        NoiseTarget::None | NoiseTarget::ImperfectCoin => {}
        NoiseTarget::Coin => {
            for b in (0..d).filter(|&b| b != a) {
                row[b * v + lo..=b * v + hi]
                    .iter_mut()
                    .for_each(|z| *z *= keep);
            }
        }
        NoiseTarget::Particle | NoiseTarget::Both => {
            for b in 0..d {
                for y in lo..=hi {
                    let c = b * v + y;
                    let kept = if target == NoiseTarget::Particle {
                        y == x
                    } else {
                        c == r
                    };
                    if !kept {
                        row[c] *= keep;
                    }
                }
            }
        }
    }
}

/// Smallest vertex interval holding every nonzero entry.
fn vertex_support(rho: &DensityOperator, v: usize) -> Option<(usize, usize)> {
    let dim = rho.dim();
    let m = rho.matrix();
    let mut range: Option<(usize, usize)> = None;
    let mut widen = |x: usize| {
        range = Some(match range {
            None => (x, x),
            Some((lo, hi)) => (lo.min(x), hi.max(x)),
        });
    };
    for i in 0..dim {
        for j in 0..dim {
            if m[i * dim + j] != ZERO {
                widen(i % v);
                widen(j % v);
            }
        }
    }
    range
}

/// One step of the discrete master equation.
pub fn step_density(
    rho: &DensityOperator,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
) -> Result<DensityOperator> {
    let mut evo = DensityEvolution::new(rho.clone(), coin, space, noise)?;
    evo.step();
    Ok(evo.into_state())
}

/// `steps` iterations of the master equation; record 0 is the initial
/// distribution.
pub fn run_density(
    initial: &DensityOperator,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
    steps: usize,
    record: RecordOptions,
) -> Result<TimeSeries> {
    let mut evo = DensityEvolution::new(initial.clone(), coin, space, noise)?;
    let mut series = TimeSeries::new(meta(space, coin, noise));
    series.records.push(evo.position_distribution());
    for _ in 0..steps {
        evo.step();
        series.records.push(evo.position_distribution());
    }
    if record.running_average {
        series.fill_running_average();
    }
    Ok(series)
}

/// One noisy step followed by the measurement `{P_v, 1 - P_v}` of the target
/// vertex. Returns the surviving (unnormalized) state and the halt
/// probability of this step.
pub fn step_absorbing(
    rho_cond: &DensityOperator,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
    target: usize,
) -> Result<(DensityOperator, f64)> {
    space.check_vertex(target)?;
    let mut evo = DensityEvolution::new(rho_cond.clone(), coin, space, noise)?;
    evo.step();
    let halted = evo.absorb_vertex(target);
    Ok((evo.into_state(), halted))
}

/// Absorbing run. `halt_probability[t]` is the probability of halting at
/// step `t`, with step 0 measuring the initial state; `records` hold the
/// surviving (unnormalized) distributions.
///
/// Order within a step: unitary, then decoherence, then target measurement.
pub fn run_absorbing(
    initial: &DensityOperator,
    coin: &CoinOperator,
    space: &WalkSpace,
    noise: NoiseModel,
    target: usize,
    steps: usize,
) -> Result<TimeSeries> {
    space.check_vertex(target)?;
    let mut evo = DensityEvolution::new(initial.clone(), coin, space, noise)?;
    let mut series = TimeSeries::new(meta(space, coin, noise));
    let mut halts = Vec::with_capacity(steps + 1);
    halts.push(evo.absorb_vertex(target));
    series.records.push(evo.position_distribution());
    for _ in 0..steps {
        evo.step();
        halts.push(evo.absorb_vertex(target));
        series.records.push(evo.position_distribution());
    }
    series.halt_probability = Some(halts);
    Ok(series)
}

fn meta(space: &WalkSpace, coin: &CoinOperator, noise: NoiseModel) -> SeriesMeta {
    SeriesMeta {
        space: space.label(),
        coin: Some(coin_label(coin)),
        noise,
        engine: EngineKind::Density,
        seed: None,
        trajectories: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::pure::step_pure;
    use crate::hilbert::PureState;
    use crate::space::{LEFT, RIGHT};

    fn basis(space: &WalkSpace, coin: usize, vertex: usize) -> PureState {
        let mut c = vec![ZERO; space.coin_degree()];
        c[coin] = C64::new(1.0, 0.0);
        PureState::pure_from(&c, vertex, space.layout()).unwrap()
    }

    fn symmetric(space: &WalkSpace) -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::pure_from(
            &[C64::new(s, 0.0), C64::new(0.0, s)],
            space.origin(),
            space.layout(),
        )
        .unwrap()
    }

    fn max_diff(a: &DensityOperator, b: &DensityOperator) -> f64 {
        a.matrix()
            .iter()
            .zip(b.matrix())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn noiseless_step_matches_pure_outer_product() {
        let cases: Vec<(WalkSpace, CoinOperator)> = vec![
            (WalkSpace::make_line(4).unwrap(), CoinOperator::hadamard()),
            (
                WalkSpace::make_cycle(5).unwrap(),
                CoinOperator::rotation(0.3).unwrap(),
            ),
            (
                WalkSpace::make_hypercube(3).unwrap(),
                CoinOperator::grover(3).unwrap(),
            ),
        ];
        for (space, coin) in &cases {
            let mut psi = if space.coin_degree() == 2 {
                symmetric(space)
            } else {
                basis(space, 1, 0)
            };
            let mut rho = DensityOperator::density_from(&psi).unwrap();
            for _ in 0..3 {
                psi = step_pure(&psi, coin, space).unwrap();
                rho = step_density(&rho, coin, space, NoiseModel::none()).unwrap();
                let want = DensityOperator::density_from(&psi).unwrap();
                assert!(max_diff(&rho, &want) < 1e-13, "{}", space.label());
            }
        }
    }

    #[test]
    fn line_support_tracking_matches_cycle() {
        // the line window wraps like a cycle of 2T + 1 vertices, and the
        // cycle path never restricts its passes
        let line = WalkSpace::make_line(6).unwrap();
        let ring = WalkSpace::make_cycle(13).unwrap();
        let coin = CoinOperator::rotation(0.7).unwrap();
        let c = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        for target in [NoiseTarget::Coin, NoiseTarget::Particle, NoiseTarget::Both] {
            let noise = NoiseModel::new(target, 0.3).unwrap();
            let start = |s: &WalkSpace| {
                DensityOperator::density_from(&PureState::pure_from(&c, 4, s.layout()).unwrap())
                    .unwrap()
            };
            let mut a = DensityEvolution::new(start(&line), &coin, &line, noise).unwrap();
            let mut b = DensityEvolution::new(start(&ring), &coin, &ring, noise).unwrap();
            for _ in 0..12 {
                a.step();
                b.step();
                let gap = a
                    .state()
                    .matrix()
                    .iter()
                    .zip(b.state().matrix())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                assert!(gap < 1e-14, "{target:?} gap {gap}");
            }
        }
    }

    #[test]
    fn full_dephasing_after_one_step() {
        let line = WalkSpace::make_line(2).unwrap();
        let o = line.origin();
        let rho0 = DensityOperator::density_from(&basis(&line, RIGHT, o)).unwrap();
        let noise = NoiseModel::new(NoiseTarget::Both, 1.0).unwrap();
        let rho = step_density(&rho0, &CoinOperator::hadamard(), &line, noise).unwrap();
        let l = line.layout();
        let r1 = l.index(RIGHT, o + 1);
        let lm1 = l.index(LEFT, o - 1);
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                let want = if i == j && (i == r1 || i == lm1) {
                    0.5
                } else {
                    0.0
                };
                assert!((rho.get(i, j) - C64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coin_and_particle_masks() {
        // after one step from the symmetric state, coin dephasing removes
        // (R, L) coherences while particle dephasing removes x != y ones
        let line = WalkSpace::make_line(2).unwrap();
        let rho0 = DensityOperator::density_from(&symmetric(&line)).unwrap();
        let h = CoinOperator::hadamard();
        let pure = step_density(&rho0, &h, &line, NoiseModel::none()).unwrap();
        let v = line.vertex_count();
        let p = 0.3;
        let coin = step_density(
            &rho0,
            &h,
            &line,
            NoiseModel::new(NoiseTarget::Coin, p).unwrap(),
        )
        .unwrap();
        let part = step_density(
            &rho0,
            &h,
            &line,
            NoiseModel::new(NoiseTarget::Particle, p).unwrap(),
        )
        .unwrap();
        for i in 0..rho0.dim() {
            for j in 0..rho0.dim() {
                let same_coin = i / v == j / v;
                let same_site = i % v == j % v;
                let f_coin = if same_coin { 1.0 } else { 1.0 - p };
                let f_part = if same_site { 1.0 } else { 1.0 - p };
                assert!((coin.get(i, j) - pure.get(i, j) * f_coin).norm() < 1e-15);
                assert!((part.get(i, j) - pure.get(i, j) * f_part).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn imperfect_coin_is_rejected() {
        let line = WalkSpace::make_line(2).unwrap();
        let rho0 = DensityOperator::density_from(&symmetric(&line)).unwrap();
        let noise = NoiseModel::new(NoiseTarget::ImperfectCoin, 0.1).unwrap();
        assert!(matches!(
            step_density(&rho0, &CoinOperator::hadamard(), &line, noise),
            Err(WalkError::Unsupported(_))
        ));
    }

    #[test]
    fn absorbing_two_cube() {
        let q2 = WalkSpace::make_hypercube(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::pure_from(&[C64::new(s, 0.0); 2], 0, q2.layout()).unwrap();
        let rho0 = DensityOperator::density_from(&psi).unwrap();
        let g = CoinOperator::grover(2).unwrap();
        let series = run_absorbing(&rho0, &g, &q2, NoiseModel::none(), 0b11, 2).unwrap();
        let h = series.halt_probability.clone().unwrap();
        assert!(h[0].abs() < 1e-15);
        assert!(h[1].abs() < 1e-15);
        assert!((h[2] - 1.0).abs() < 1e-15);
        let (_, first) = step_absorbing(&rho0, &g, &q2, NoiseModel::none(), 0b11).unwrap();
        assert!(first.abs() < 1e-15);
        assert!(step_absorbing(&rho0, &g, &q2, NoiseModel::none(), 4).is_err());
    }

    #[test]
    fn absorbing_conserves_total_probability() {
        let q3 = WalkSpace::make_hypercube(3).unwrap();
        let a = 1.0 / 3f64.sqrt();
        let psi = PureState::pure_from(&[C64::new(a, 0.0); 3], 0, q3.layout()).unwrap();
        let rho0 = DensityOperator::density_from(&psi).unwrap();
        let noise = NoiseModel::new(NoiseTarget::Particle, 0.1).unwrap();
        let series =
            run_absorbing(&rho0, &CoinOperator::grover(3).unwrap(), &q3, noise, 7, 30).unwrap();
        let cum = series.cumulative_halts().unwrap();
        for t in 0..=30 {
            assert!((cum[t] + series.at(t).mass() - 1.0).abs() < 1e-10);
            if t > 0 {
                assert!(cum[t] >= cum[t - 1]);
            }
        }
        assert!(cum[30] <= 1.0 + 1e-12);
    }
}
