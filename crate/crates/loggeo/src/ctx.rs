//! Shared per-chart computation context with caches for the derived
//! structures (differential module, power modules, diagonal algebras,
//! divided-power models). Everything cached is immutable once built.

use crate::chart::LogChart;
use crate::diagonal::DiagonalAlgebra;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::omega::{DifferentialModule, Flavor, Omega1Basis, PowerModule};
use crate::pd::PdModel;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub struct ChartData {
    pub chart: LogChart,
    pub limits: Limits,
    omega1: Mutex<Option<Arc<DifferentialModule>>>,
    basis: Mutex<Option<Arc<Omega1Basis>>>,
    powers: Mutex<HashMap<(usize, Flavor), Arc<PowerModule>>>,
    diagonals: Mutex<HashMap<usize, Arc<DiagonalAlgebra>>>,
    pd_models: Mutex<HashMap<usize, Arc<PdModel>>>,
}

impl ChartData {
    pub fn new(chart: LogChart, limits: Limits) -> Arc<Self> {
        Arc::new(ChartData {
            chart,
            limits,
            omega1: Mutex::new(None),
            basis: Mutex::new(None),
            powers: Mutex::new(HashMap::new()),
            diagonals: Mutex::new(HashMap::new()),
            pd_models: Mutex::new(HashMap::new()),
        })
    }

    pub fn omega1(&self) -> Result<Arc<DifferentialModule>> {
        let mut guard = self.omega1.lock().unwrap();
        if let Some(m) = guard.as_ref() {
            return Ok(m.clone());
        }
        let m = Arc::new(crate::omega::omega1(&self.chart)?);
        *guard = Some(m.clone());
        Ok(m)
    }

    pub fn power(&self, degree: usize, flavor: Flavor) -> Result<Arc<PowerModule>> {
        {
            let guard = self.powers.lock().unwrap();
            if let Some(m) = guard.get(&(degree, flavor)) {
                return Ok(m.clone());
            }
        }
        let omega = self.omega1()?;
        let m = Arc::new(crate::omega::power_module(
            &self.chart,
            &omega,
            degree,
            flavor,
        ));
        let mut guard = self.powers.lock().unwrap();
        Ok(guard.entry((degree, flavor)).or_insert(m).clone())
    }

    /// The certified free basis of the differential module; errors when
    /// the chart carries no witness or the witness fails its checks.
    pub fn omega1_basis(&self) -> Result<Arc<Omega1Basis>> {
        let mut guard = self.basis.lock().unwrap();
        if let Some(b) = guard.as_ref() {
            return Ok(b.clone());
        }
        let spec = self.chart.omega1_basis.clone().ok_or_else(|| {
            Error::Precondition(format!(
                "chart {} carries no omega1_basis witness",
                self.chart.name
            ))
        })?;
        let omega = self.omega1()?;
        let b = Arc::new(crate::omega::resolve_omega1_basis(
            &self.chart,
            &omega,
            &spec,
            &self.limits,
        )?);
        *guard = Some(b.clone());
        Ok(b)
    }

    pub fn diagonal(self: &Arc<Self>, n: usize) -> Result<Arc<DiagonalAlgebra>> {
        {
            let guard = self.diagonals.lock().unwrap();
            if let Some(d) = guard.get(&n) {
                return Ok(d.clone());
            }
        }
        let d = Arc::new(DiagonalAlgebra::build(self, n)?);
        let mut guard = self.diagonals.lock().unwrap();
        Ok(guard.entry(n).or_insert(d).clone())
    }

    pub fn pd_model(self: &Arc<Self>, n: usize) -> Result<Arc<PdModel>> {
        {
            let guard = self.pd_models.lock().unwrap();
            if let Some(m) = guard.get(&n) {
                return Ok(m.clone());
            }
        }
        let m = Arc::new(PdModel::build(self, n)?);
        let mut guard = self.pd_models.lock().unwrap();
        Ok(guard.entry(n).or_insert(m).clone())
    }
}
