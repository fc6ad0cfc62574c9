//! Seeded random data sources.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{DataSample, Dataset};
use crate::error::{Error, Result};

/// A stream of data samples. Each solver instance owns its source.
pub trait DataSource {
    fn draw(&mut self) -> Result<&DataSample>;

    /// Number of samples drawn so far.
    fn draws(&self) -> u64;
}

impl<S: DataSource + ?Sized> DataSource for &mut S {
    fn draw(&mut self) -> Result<&DataSample> {
        (**self).draw()
    }
    fn draws(&self) -> u64 {
        (**self).draws()
    }
}

/// I.i.d. uniform draws with replacement from a finite dataset.
#[derive(Debug, Clone)]
pub struct UniformSampler<'a> {
    samples: &'a [DataSample],
    rng: ChaCha8Rng,
    draws: u64,
}

impl<'a> UniformSampler<'a> {
    pub fn new(ds: &'a Dataset, seed: u64) -> Result<Self> {
        Self::from_samples(ds.samples(), seed)
    }

    pub fn from_samples(samples: &'a [DataSample], seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Self {
            samples,
            rng: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        })
    }

    /// Draws an index in `0..len`.
    pub fn draw_index(&mut self) -> usize {
        self.draws += 1;
        self.rng.gen_range(0..self.samples.len())
    }
}

impl DataSource for UniformSampler<'_> {
    fn draw(&mut self) -> Result<&DataSample> {
        let i = self.draw_index();
        Ok(&self.samples[i])
    }

    fn draws(&self) -> u64 {
        self.draws
    }
}

/// A single seeded pass over the dataset without replacement. Fails with
/// [`Error::Exhausted`] once every sample has been drawn.
#[derive(Debug, Clone)]
pub struct EpochSampler<'a> {
    samples: &'a [DataSample],
    order: Vec<usize>,
    pos: usize,
}

impl<'a> EpochSampler<'a> {
    pub fn new(ds: &'a Dataset, seed: u64) -> Result<Self> {
        let samples = ds.samples();
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..samples.len()).collect();
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        Ok(Self {
            samples,
            order,
            pos: 0,
        })
    }
}

impl DataSource for EpochSampler<'_> {
    fn draw(&mut self) -> Result<&DataSample> {
        let i = *self
            .order
            .get(self.pos)
            .ok_or(Error::Exhausted(self.pos as u64))?;
        self.pos += 1;
        Ok(&self.samples[i])
    }

    fn draws(&self) -> u64 {
        self.pos as u64
    }
}
