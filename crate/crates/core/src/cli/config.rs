//! Run configuration, read from JSON or assembled from command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::continuity::{PathPolicy, PotentialFamily};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::flow::FlowConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Path,
    Flow,
    Scan,
    Pinch,
    Spectrum,
    Curvature,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Path => "path",
            Command::Flow => "flow",
            Command::Scan => "scan",
            Command::Pinch => "pinch",
            Command::Spectrum => "spectrum",
            Command::Curvature => "curvature",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Mobius,
    LegendreBump,
    Linear,
}

/// Tolerance keys understood by [`RunConfig::tol`].
pub const TOLERANCE_KEYS: [(&str, f64); 6] = [
    ("newton", 1e-10),
    ("residual", 1e-8),
    ("mobius_f", 1e-6),
    ("monitor_rel", 1e-6),
    ("identity", 1e-8),
    ("spectrum_rel", 1e-8),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub grid_n: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    /// Base potential over the round structure, as an expression in `x`.
    pub psi: Option<String>,
    /// Continuity parameter for `solve`.
    pub t: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub records: usize,
    pub ds: f64,
    pub s_end: f64,
    pub record_every: usize,
    pub family: FamilyKind,
    /// Family parameters; empty means the family defaults.
    pub params: Vec<f64>,
    pub eps: f64,
    pub spectrum_k: usize,
    pub m_max: usize,
    pub c: f64,
    pub samples: usize,
    pub output: PathBuf,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let path = PathPolicy::default();
        let flow = FlowConfig::default();
        RunConfig {
            command: Command::VerifyAll,
            grid_n: 256,
            seed: 0,
            tolerances: TOLERANCE_KEYS.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            psi: None,
            t: 1.0,
            t_start: path.t_start,
            t_end: path.t_end,
            records: path.records,
            ds: flow.ds,
            s_end: flow.s_end,
            record_every: flow.record_every,
            family: FamilyKind::Mobius,
            params: Vec::new(),
            eps: 0.05,
            spectrum_k: 9,
            m_max: 6,
            c: 4.0,
            samples: 100,
            output: PathBuf::from("out"),
            parallel: true,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.grid_n < crate::geometry::grid::MIN_NODES {
            return bad(format!("grid_n must be at least {}", crate::geometry::grid::MIN_NODES));
        }
        for (k, v) in &self.tolerances {
            if !TOLERANCE_KEYS.iter().any(|(name, _)| name == k) {
                return bad(format!("unknown tolerance {k:?}"));
            }
            if !(v.is_finite() && *v > 0.0) {
                return bad(format!("tolerance {k} must be positive, got {v}"));
            }
        }
        let positive = [
            ("t_end", self.t_end),
            ("ds", self.ds),
            ("eps", self.eps),
            ("c", self.c),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.t) {
            return bad(format!("t must lie in [0, 1], got {}", self.t));
        }
        if !(self.t_start > 0.0 && self.t_start < self.t_end && self.t_end <= 1.0) {
            return bad(format!(
                "need 0 < t_start < t_end <= 1, got {} and {}",
                self.t_start, self.t_end
            ));
        }
        if !(self.s_end >= 0.0 && self.s_end.is_finite()) {
            return bad(format!("s_end must be nonnegative, got {}", self.s_end));
        }
        if self.records < 2 || self.record_every == 0 || self.samples == 0 {
            return bad("records ≥ 2, record_every ≥ 1 and samples ≥ 1 are required".into());
        }
        if self.m_max == 0 || self.spectrum_k == 0 {
            return bad("m_max and spectrum_k must be positive".into());
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return bad("family parameters must be finite".into());
        }
        Ok(())
    }

    pub fn tol(&self, key: &str) -> f64 {
        self.tolerances.get(key).copied().unwrap_or_else(|| {
            TOLERANCE_KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .unwrap_or_else(|| panic!("no tolerance named {key}"))
        })
    }

    pub fn exec(&self) -> Exec {
        if self.parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    pub fn path_policy(&self) -> PathPolicy {
        let mut p = PathPolicy {
            t_start: self.t_start,
            t_end: self.t_end,
            records: self.records,
            ..PathPolicy::default()
        };
        p.newton.tol = self.tol("newton");
        p
    }

    pub fn flow_config(&self) -> FlowConfig {
        FlowConfig {
            ds: self.ds,
            s_end: self.s_end,
            record_every: self.record_every,
            ..FlowConfig::default()
        }
    }

    pub fn potential_family(&self) -> PotentialFamily {
        let defaults = PotentialFamily::defaults();
        let pick = |i: usize| {
            if self.params.is_empty() {
                defaults[i].params().to_vec()
            } else {
                self.params.clone()
            }
        };
        match self.family {
            FamilyKind::Mobius => PotentialFamily::Mobius { params: pick(0) },
            FamilyKind::LegendreBump => PotentialFamily::LegendreBump { params: pick(1) },
            FamilyKind::Linear => PotentialFamily::Linear { params: pick(2) },
        }
    }
}
