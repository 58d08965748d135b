use num_complex::Complex;
use rand::Rng;
use serde::{Serialize, Serializer};

use super::{check_dim, check_probabilities, mub_exponent, sample_index, xy_exponent, MubLabel, Phases, QuditState};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pure state of a system qudit and an ancilla of the same dimension.
/// Amplitude of `|k>|a>` lives at index `k * d + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T> {
    dim: usize,
    amps: Vec<Complex<T>>,
}

/// Attaches an ancilla in `|0>` and applies `|k>|a> -> |k>|a + k mod d>`.
pub fn csum_entangle<T: Real>(state: &QuditState<T>) -> BipartiteState<T> {
    let d = state.dim();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
    for (k, &a) in state.amplitudes().iter().enumerate() {
        amps[k * d + k] = a;
    }
    BipartiteState { dim: d, amps }
}

impl<T: Real> BipartiteState<T> {
    pub fn product(system: &QuditState<T>, ancilla: &QuditState<T>) -> Result<Self> {
        if system.dim() != ancilla.dim() {
            return Err(Error::Param("system and ancilla dimensions differ".into()));
        }
        let amps = system
            .amplitudes()
            .iter()
            .flat_map(|&s| ancilla.amplitudes().iter().map(move |&a| s * a))
            .collect();
        Ok(BipartiteState {
            dim: system.dim(),
            amps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, k: usize, a: usize) -> Complex<T> {
        self.amps[k * self.dim + a]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().as_f64()).sum()
    }

    /// `U_{x,y}` on the system register; the ancilla is untouched.
    pub fn apply_xy_system(&self, x: u64, y: u64) -> Self {
        let d = self.dim;
        let (x, y) = ((x % d as u64) as usize, (y % d as u64) as usize);
        let phases = Phases::<T>::new(d);
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, &a)| a * phases.get(xy_exponent(d, x, y, idx / d)))
            .collect();
        BipartiteState { dim: d, amps }
    }

    /// Unnormalized ancilla vectors `<v_l^(j)| ⊗ 1 |self>` for every `l`.
    fn system_projections(&self, j: usize) -> Vec<Vec<Complex<T>>> {
        let d = self.dim;
        let phases = Phases::<T>::new(d);
        let scale = T::one() / T::from_f64(d as f64).sqrt();
        (0..d)
            .map(|l| {
                (0..d)
                    .map(|a| {
                        (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                            acc + phases.get(mub_exponent(d, j, l, k)).conj() * self.amps[k * d + a]
                        }) * scale
                    })
                    .collect()
            })
            .collect()
    }

    /// Marginal outcome probabilities of measuring the system in basis `j`.
    pub fn system_mub_probabilities(&self, j: u64) -> Result<Vec<f64>> {
        check_dim(self.dim)?;
        let j = (j % self.dim as u64) as usize;
        Ok(self
            .system_projections(j)
            .iter()
            .map(|anc| anc.iter().map(|c| c.norm_sqr().as_f64()).sum())
            .collect())
    }

    /// Measures the system register in basis `j`, collapsing it to
    /// `|v_l^(j)>` and leaving the ancilla in its conditional state.
    pub fn measure_mub_system<R: Rng + ?Sized>(&self, j: u64, rng: &mut R) -> Result<(u64, Self)> {
        check_dim(self.dim)?;
        let d = self.dim;
        let j = (j % d as u64) as usize;
        let projections = self.system_projections(j);
        let weights: Vec<f64> = projections
            .iter()
            .map(|anc| anc.iter().map(|c| c.norm_sqr().as_f64()).sum())
            .collect();
        check_probabilities::<T>(&weights)?;
        let l = sample_index(&weights, rng);
        let ancilla = QuditState::normalized(projections[l].clone())?;
        let system = QuditState::mub_vector(d, MubLabel::new(d as u64, j as u64, l as u64))?;
        Ok((l as u64, BipartiteState::product(&system, &ancilla)?))
    }

    /// Measures the ancilla in the computational basis.
    pub fn measure_ancilla_computational<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(u64, Self)> {
        let d = self.dim;
        let weights: Vec<f64> = (0..d)
            .map(|a| (0..d).map(|k| self.amplitude(k, a).norm_sqr().as_f64()).sum())
            .collect();
        check_probabilities::<T>(&weights)?;
        let a = sample_index(&weights, rng);
        let scale = T::from_f64(weights[a].sqrt());
        let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
        for k in 0..d {
            amps[k * d + a] = self.amplitude(k, a) / scale;
        }
        Ok((a as u64, BipartiteState { dim: d, amps }))
    }

    pub fn max_deviation(&self, other: &BipartiteState<T>) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm().as_f64())
            .fold(0.0, f64::max)
    }
}

impl<T: Real> Serialize for BipartiteState<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amps.iter().map(|a| [a.re.as_f64(), a.im.as_f64()]))
    }
}
