//! Projected stochastic subgradient descent on the risk-neutral problem
//! `min_{x ∈ X} E[ℓ(x, D)]`, used as the comparison method.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::loss::LossModel;
use crate::math;
use crate::risk::{evaluate_composite, RiskParams};
use crate::sampler::DataSource;
use crate::schedule::StepSchedule;
use crate::solver::{estimate_from_losses, IterationRecord, Telemetry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdParams {
    pub schedule: StepSchedule,
    pub batch: usize,
    pub max_iters: usize,
    pub seed: u64,
}

/// Projected SGD: `x ← Π_X(x − τₖ s̄)` with `s̄` the batch-averaged subgradient.
///
/// Telemetry uses the STS schema: `eta` holds the stationarity proxy
/// `‖x − Π_X(x − s̄)‖` (with `s̄` from the latest step), `robust_obj` holds the
/// mean loss and `u_minus_h` is 0.
#[derive(Debug)]
pub struct ProjectedSgd<'a, M: ?Sized> {
    pub params: SgdParams,
    set: &'a FeasibleSet,
    model: &'a M,
}

#[derive(Debug, Clone)]
pub struct SgdOutput {
    pub x: Vec<f64>,
    pub records: Vec<IterationRecord>,
    pub samples_consumed: u64,
    pub subgradient_evals: u64,
}

impl<'a, M: LossModel + ?Sized> ProjectedSgd<'a, M> {
    pub fn new(params: SgdParams, set: &'a FeasibleSet, model: &'a M) -> Result<Self> {
        params.schedule.validate()?;
        if params.batch == 0 {
            return Err(Error::param("batch size must be at least 1"));
        }
        if params.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        Error::check_dim(set.dimension(), model.dimension())?;
        Ok(Self { params, set, model })
    }

    pub fn run<S: DataSource + ?Sized>(
        &self,
        sampler: &mut S,
        telemetry: Telemetry<'_>,
        x0: Option<&[f64]>,
    ) -> Result<SgdOutput> {
        let n = self.model.dimension();
        let mut x = match x0 {
            Some(x0) => self.set.project(x0)?,
            None => self.set.project(&vec![0.0; n])?,
        };
        let interval = telemetry.interval.max(1);
        let batch = self.params.batch;
        let mut grad = vec![0.0; n];
        let mut s = vec![0.0; n];
        let mut probe = vec![0.0; n];
        let mut window = Vec::new();
        let mut records = Vec::new();
        let mut evals = 0u64;

        for k in 0..self.params.max_iters {
            s.iter_mut().for_each(|v| *v = 0.0);
            for _ in 0..batch {
                let l = {
                    let d = sampler.draw()?;
                    self.model.loss_and_subgradient(&x, d, &mut grad)?
                };
                evals += 1;
                if telemetry.reference.is_none() {
                    window.push(l);
                }
                for (si, gi) in s.iter_mut().zip(&grad) {
                    *si += gi;
                }
            }
            if batch > 1 {
                let inv = 1.0 / batch as f64;
                s.iter_mut().for_each(|v| *v *= inv);
            }

            let tau = self.params.schedule.step_size(k, 1.0);
            for (xi, si) in x.iter_mut().zip(&s) {
                *xi -= tau * si;
            }
            self.set.project_in_place(&mut x)?;
            if !math::all_finite(&x) {
                return Err(Error::NonFinite {
                    field: "x",
                    iteration: k + 1,
                    seed: self.params.seed,
                });
            }

            let done = k + 1;
            if done % interval == 0 || done == self.params.max_iters {
                for ((p, xi), si) in probe.iter_mut().zip(&x).zip(&s) {
                    *p = xi - si;
                }
                self.set.project_in_place(&mut probe)?;
                let eta = math::dist(&x, &probe);
                let mean_loss = match telemetry.reference {
                    Some(data) => {
                        evaluate_composite(self.model, data, &x, 0.0, &RiskParams::NEUTRAL)?.h_value
                    }
                    None => estimate_from_losses(&window, &RiskParams::NEUTRAL).0,
                };
                window.clear();
                records.push(IterationRecord {
                    k: done,
                    tau,
                    eta,
                    u_minus_h: 0.0,
                    robust_obj: mean_loss,
                    samples: sampler.draws(),
                });
            }
        }
        Ok(SgdOutput {
            x,
            records,
            samples_consumed: sampler.draws(),
            subgradient_evals: evals,
        })
    }
}
