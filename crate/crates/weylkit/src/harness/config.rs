//! Sweep configuration and suite identifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::weyl::TransformMode;

/// One inequality family driven by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Hy,
    Paley,
    Hyp,
    Hormander,
    PaleyInv,
    HypInv,
    HormanderInv,
    HardyLittlewood,
    LorentzPaley,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Hy,
        Suite::Paley,
        Suite::Hyp,
        Suite::Hormander,
        Suite::PaleyInv,
        Suite::HypInv,
        Suite::HormanderInv,
        Suite::HardyLittlewood,
        Suite::LorentzPaley,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Suite::Hy => "hy",
            Suite::Paley => "paley",
            Suite::Hyp => "hyp",
            Suite::Hormander => "hormander",
            Suite::PaleyInv => "paley_inv",
            Suite::HypInv => "hyp_inv",
            Suite::HormanderInv => "hormander_inv",
            Suite::HardyLittlewood => "hardy_littlewood",
            Suite::LorentzPaley => "lorentz_paley",
        }
    }

    /// Whether the suite consumes the `q` grid (multiplier checks).
    pub fn uses_q(&self) -> bool {
        matches!(self, Suite::Hormander | Suite::HormanderInv)
    }

    /// Whether the suite consumes the `b` grid (interpolated forms).
    pub fn uses_b(&self) -> bool {
        matches!(self, Suite::Hyp | Suite::HypInv)
    }

    /// Whether the suite consumes the `beta` grid.
    pub fn uses_beta(&self) -> bool {
        matches!(self, Suite::HardyLittlewood)
    }

    /// The admissible `p` range of the suite; grid points outside it are
    /// omitted from the sweep rather than raising errors, so one grid can
    /// serve suites with different domains.
    pub fn admits_p(&self, p: f64) -> bool {
        match self {
            Suite::Hy => (1.0..=2.0).contains(&p),
            Suite::LorentzPaley => p > 1.0 && p < 2.0,
            _ => p > 1.0 && p <= 2.0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .find(|suite| suite.id() == s)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

fn default_record_timing() -> bool {
    true
}

/// Full description of a sweep run; the JSON serialization of this struct
/// is the `sweep --config` file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Comma-separated list of group specs, e.g. `"4,6,2x2x2"`.
    pub group_spec: String,
    pub suites: Vec<Suite>,
    pub p_grid: Vec<f64>,
    pub q_grid: Vec<f64>,
    pub b_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub output_path: String,
    pub mode: TransformMode,
    /// When false, wall times are reported as 0 so that equal
    /// configurations serialize to byte-identical output.
    #[serde(default = "default_record_timing")]
    pub record_timing: bool,
}

impl SweepConfig {
    /// The default sweep: small groups, the full suite list, and the
    /// standard exponent grids.
    pub fn default_sweep() -> Self {
        Self {
            group_spec: "4,6,8,2x2x2,16".into(),
            suites: Suite::ALL.to_vec(),
            p_grid: vec![1.1, 1.25, 1.5, 1.75, 2.0],
            q_grid: vec![2.0, 3.0, 4.0],
            b_grid: vec![2.0],
            beta_grid: vec![1.0, 2.0],
            trials: 100,
            seed: 42,
            tolerance: 1e-8,
            output_path: String::new(),
            mode: TransformMode::Fast,
            record_timing: true,
        }
    }

    /// Parses the group list.
    pub fn groups(&self) -> Result<Vec<FiniteAbelianGroup>> {
        self.group_spec
            .split(',')
            .map(|tok| tok.trim().parse::<FiniteAbelianGroup>())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidConfig("at least one suite is required".into()));
        }
        self.groups()?;
        if self.p_grid.is_empty() {
            return Err(Error::InvalidConfig("p_grid must be nonempty".into()));
        }
        for &p in &self.p_grid {
            if !(1.0..=2.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("p = {p} outside [1, 2]")));
            }
        }
        for &q in &self.q_grid {
            if !(q >= 2.0) || q.is_infinite() {
                return Err(Error::InvalidConfig(format!("q = {q} outside [2, inf)")));
            }
        }
        for &b in &self.b_grid {
            if !(b > 0.0) {
                return Err(Error::InvalidConfig(format!("b = {b} must be positive")));
            }
        }
        for &beta in &self.beta_grid {
            if !(beta > 0.0) {
                return Err(Error::InvalidConfig(format!("beta = {beta} must be positive")));
            }
        }
        for suite in &self.suites {
            if suite.uses_q() && self.q_grid.is_empty() {
                return Err(Error::InvalidConfig(format!("suite {suite} needs a q grid")));
            }
            if suite.uses_b() && self.b_grid.is_empty() {
                return Err(Error::InvalidConfig(format!("suite {suite} needs a b grid")));
            }
            if suite.uses_beta() && self.beta_grid.is_empty() {
                return Err(Error::InvalidConfig(format!("suite {suite} needs a beta grid")));
            }
        }
        Ok(())
    }
}
