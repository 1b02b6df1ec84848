#![allow(dead_code)]

pub mod oracles;

use nonloc_core::{SetParams, StateSet, StateVector, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_dims(rng: &mut ChaCha8Rng, parties: usize, max_dim: usize) -> Vec<usize> {
    (0..parties).map(|_| rng.random_range(2..=max_dim)).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, dims: &[usize]) -> StateVector {
    let len: usize = dims.iter().product();
    let amps: Vec<C64> = (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::new(dims, amps, "random").unwrap()
}

/// `count` random orthonormal states (Gram–Schmidt on random vectors).
pub fn random_orthonormal_set(rng: &mut ChaCha8Rng, dims: &[usize], count: usize) -> StateSet {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    while basis.len() < count {
        let mut v: Vec<C64> = random_state(rng, dims).amplitudes().to_vec();
        for _ in 0..2 {
            for b in &basis {
                let p: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= y * p);
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        basis.push(v);
    }
    let states = basis
        .into_iter()
        .enumerate()
        .map(|(i, v)| StateVector::new(dims, v, format!("r{i}")).unwrap())
        .collect();
    StateSet::from_states("random", states, SetParams::default()).unwrap()
}
