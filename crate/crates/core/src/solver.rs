//! The single time-scale (STS) method.
//!
//! Each iteration, with one stepsize `τₖ`:
//!
//! ```text
//! yᵏ    = argmin_{y ∈ X} ⟨zᵏ, y − xᵏ⟩ + (c/2)‖y − xᵏ‖²
//! xᵏ⁺¹ = xᵏ + τₖ(yᵏ − xᵏ)
//! (g̃ₓ, g̃ᵤ, h̃, J̃) sampled at (xᵏ⁺¹, uᵏ)
//! zᵏ⁺¹ = zᵏ + aτₖ(g̃ₓ + J̃ᵀg̃ᵤ − zᵏ)
//! uᵏ⁺¹ = uᵏ + τₖ J̃(yᵏ − xᵏ) + bτₖ(h̃ − uᵏ)
//! ```
//!
//! Stationarity is witnessed by the gap `η(xᵏ, zᵏ) → 0` together with
//! `uᵏ − h(xᵏ) → 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::estimates::{make_estimates, StochasticEstimates};
use crate::feasible::{FeasibleSet, GapDiagnostic};
use crate::loss::LossModel;
use crate::math;
use crate::risk::{evaluate_composite, RiskParams};
use crate::sampler::DataSource;
use crate::schedule::StepSchedule;

/// Draws used to initialize `u⁰`.
pub const INIT_BATCH: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Subgradient-averaging rate.
    pub a: f64,
    /// Inner-value tracking rate.
    pub b: f64,
    /// Prox coefficient.
    pub c: f64,
    pub risk: RiskParams,
    pub batch: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl SolverParams {
    /// Unit rates, batch 1.
    pub fn new(risk: RiskParams, max_iters: usize, seed: u64) -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            risk,
            batch: 1,
            max_iters,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        if self.batch == 0 {
            return Err(Error::param("batch size must be at least 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub k: usize,
    pub x: Vec<f64>,
    /// Averaged composite subgradient.
    pub z: Vec<f64>,
    /// Tracked estimate of `h(x)`.
    pub u: f64,
    /// Gap from the most recent proximal step.
    pub last_eta: f64,
    pub samples_consumed: u64,
    pub subgradient_evals: u64,
}

/// Telemetry row; the CSV columns are `k,tau,eta,u_minus_h,robust_obj,samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub tau: f64,
    pub eta: f64,
    pub u_minus_h: f64,
    pub robust_obj: f64,
    pub samples: u64,
}

/// Telemetry configuration. With a reference dataset `h(x)` and `F(x)` are
/// evaluated exactly on it; otherwise they are estimated from the losses drawn
/// since the previous record.
#[derive(Debug, Clone, Copy)]
pub struct Telemetry<'a> {
    pub interval: usize,
    pub reference: Option<&'a [DataSample]>,
}

impl<'a> Telemetry<'a> {
    pub fn exact(interval: usize, reference: &'a [DataSample]) -> Self {
        Self {
            interval,
            reference: Some(reference),
        }
    }

    pub fn estimated(interval: usize) -> Self {
        Self {
            interval,
            reference: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepInfo {
    pub tau: f64,
    pub eta: f64,
    pub estimates: StochasticEstimates,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: SolverState,
    pub records: Vec<IterationRecord>,
}

/// An STS solver bound to a feasible set and a loss model.
#[derive(Debug)]
pub struct Sts<'a, M: ?Sized> {
    pub params: SolverParams,
    pub schedule: StepSchedule,
    set: &'a FeasibleSet,
    model: &'a M,
}

impl<'a, M: LossModel + ?Sized> Sts<'a, M> {
    pub fn new(
        params: SolverParams,
        schedule: StepSchedule,
        set: &'a FeasibleSet,
        model: &'a M,
    ) -> Result<Self> {
        params.validate()?;
        schedule.validate()?;
        Error::check_dim(set.dimension(), model.dimension())?;
        Ok(Self {
            params,
            schedule,
            set,
            model,
        })
    }

    /// `x⁰ = x0` (or the projection of the origin), `u⁰` = mean loss over
    /// [`INIT_BATCH`] draws, `z⁰` = one composite estimate at `(x⁰, u⁰)`.
    pub fn init_state<S: DataSource + ?Sized>(
        &self,
        sampler: &mut S,
        x0: Option<&[f64]>,
    ) -> Result<SolverState> {
        let x = match x0 {
            Some(x0) => {
                let violation = self.set.violation(x0)?;
                if violation > crate::FEASIBILITY_TOL {
                    return Err(Error::Infeasible { violation });
                }
                x0.to_vec()
            }
            None => self.set.project(&vec![0.0; self.set.dimension()])?,
        };
        let mut u = 0.0;
        for _ in 0..INIT_BATCH {
            u += self.model.loss(&x, sampler.draw()?)?;
        }
        u /= INIT_BATCH as f64;
        let est = make_estimates(
            self.model,
            &x,
            u,
            &self.params.risk,
            sampler,
            self.params.batch,
        )?;
        let state = SolverState {
            k: 0,
            x,
            z: est.composite,
            u,
            last_eta: 0.0,
            samples_consumed: (INIT_BATCH + est.samples_used) as u64,
            subgradient_evals: est.subgradient_evals as u64,
        };
        self.check_finite(&state)?;
        Ok(state)
    }

    /// Gap diagnostic `η(x, z)` at the current state.
    pub fn gap(&self, state: &SolverState) -> Result<GapDiagnostic> {
        self.set.solve_prox_step(&state.x, &state.z, self.params.c)
    }

    /// One STS iteration, updating `state` in place.
    pub fn iterate<S: DataSource + ?Sized>(
        &self,
        state: &mut SolverState,
        sampler: &mut S,
    ) -> Result<StepInfo> {
        let p = &self.params;
        let gap = self.gap(state)?;
        let tau = self.schedule.step_size(state.k, p.a);

        let dir: Vec<f64> = gap.y_bar.iter().zip(&state.x).map(|(y, x)| y - x).collect();
        for (x, d) in state.x.iter_mut().zip(&dir) {
            *x += tau * d;
        }
        self.set.project_in_place(&mut state.x)?;

        let est = make_estimates(self.model, &state.x, state.u, &p.risk, sampler, p.batch)?;

        let rate = p.a * tau;
        for (z, g) in state.z.iter_mut().zip(&est.composite) {
            *z += rate * (g - *z);
        }
        state.u += tau * math::dot(&est.j_tilde, &dir) + p.b * tau * (est.h_tilde - state.u);

        state.k += 1;
        state.last_eta = gap.eta;
        state.samples_consumed += est.samples_used as u64;
        state.subgradient_evals += est.subgradient_evals as u64;
        self.check_finite(state)?;
        Ok(StepInfo {
            tau,
            eta: gap.eta,
            estimates: est,
        })
    }

    /// Runs `max_iters` iterations from [`init_state`](Self::init_state),
    /// recording telemetry every `telemetry.interval` iterations and at the end.
    pub fn run<S: DataSource + ?Sized>(
        &self,
        sampler: &mut S,
        telemetry: Telemetry<'_>,
        x0: Option<&[f64]>,
    ) -> Result<RunOutput> {
        let mut state = self.init_state(sampler, x0)?;
        let mut records = Vec::new();
        let mut window: Vec<f64> = Vec::new();
        let interval = telemetry.interval.max(1);
        for _ in 0..self.params.max_iters {
            let info = self.iterate(&mut state, sampler)?;
            if telemetry.reference.is_none() {
                window.extend_from_slice(&info.estimates.draw_losses);
            }
            if state.k % interval == 0 || state.k == self.params.max_iters {
                records.push(self.record(&state, info.tau, telemetry, &window)?);
                window.clear();
            }
        }
        Ok(RunOutput { state, records })
    }

    fn record(
        &self,
        state: &SolverState,
        tau: f64,
        telemetry: Telemetry<'_>,
        window: &[f64],
    ) -> Result<IterationRecord> {
        let eta = self.gap(state)?.eta;
        let (h, robust) = match telemetry.reference {
            Some(data) => {
                let v = evaluate_composite(self.model, data, &state.x, state.u, &self.params.risk)?;
                (v.h_value, v.robust_value)
            }
            None => estimate_from_losses(window, &self.params.risk),
        };
        Ok(IterationRecord {
            k: state.k,
            tau,
            eta,
            u_minus_h: state.u - h,
            robust_obj: robust,
            samples: state.samples_consumed,
        })
    }

    fn check_finite(&self, state: &SolverState) -> Result<()> {
        let field = if !math::all_finite(&state.x) {
            "x"
        } else if !math::all_finite(&state.z) {
            "z"
        } else if !state.u.is_finite() {
            "u"
        } else {
            return Ok(());
        };
        Err(Error::NonFinite {
            field,
            iteration: state.k,
            seed: self.params.seed,
        })
    }
}

/// Plug-in estimates of `h` and `F` from a window of sampled losses.
pub(crate) fn estimate_from_losses(losses: &[f64], risk: &RiskParams) -> (f64, f64) {
    let Some(h) = crate::sum::mean(losses.iter().copied()) else {
        return (f64::NAN, f64::NAN);
    };
    let kappa = risk.kappa();
    let robust =
        crate::sum::mean(losses.iter().map(|&l| l + kappa * (l - h).max(0.0))).unwrap_or(f64::NAN);
    (h, robust)
}
