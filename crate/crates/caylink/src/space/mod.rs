//! Cayley configuration spaces: ELR, QIM and the nested-quadrilateral family.

mod elr;
mod fixture;
mod fourcycle;
mod precise;
mod qim;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalSet};
use crate::realize::{Extreme, ForwardType};

pub use elr::{elr, elr_full, elr_full_with_cap, elr_with, update, ElrContext, UpdateCase, TYPE_CAP};
pub use fixture::{nested_quad_fixture, nested_quad_fixture_with, LengthRule, Q1_SIDES};
pub use fourcycle::{find_four_cycle, CycleCase, FourCycle};
pub use precise::{qim_full_precise, BigFloat, PreciseSet, DEFAULT_BITS};
pub use qim::{qim, qim_arcs_of, qim_multipath, QimMode, QimPlan, QimReport, QimStage, StageChoice, INTERVAL_CAP};

/// Which extreme linkage produced an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointMeta {
    pub value: f64,
    pub step: usize,
    pub which: Extreme,
}

/// `Φ_f(G, l̄, σ)` with provenance for each endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedCayleySpace {
    pub sigma: ForwardType,
    pub set: IntervalSet,
    /// One entry per distinct endpoint value of `set`, ascending.
    pub endpoints: Vec<EndpointMeta>,
    /// Candidates that turned out to be interior points or unrealizable.
    pub dead_ends: Vec<f64>,
}

impl OrientedCayleySpace {
    /// Provenance of the endpoint within `tol` of `value`.
    pub fn meta_at(&self, value: f64, tol: f64) -> Vec<&EndpointMeta> {
        self.endpoints.iter().filter(|m| (m.value - value).abs() <= tol).collect()
    }
}

/// All nonempty oriented spaces and their union.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CayleySpace {
    pub by_type: BTreeMap<ForwardType, OrientedCayleySpace>,
    pub union: IntervalSet,
}

impl CayleySpace {
    pub fn from_spaces(spaces: impl IntoIterator<Item = OrientedCayleySpace>) -> CayleySpace {
        let by_type: BTreeMap<ForwardType, OrientedCayleySpace> =
            spaces.into_iter().filter(|s| !s.set.is_empty()).map(|s| (s.sigma.clone(), s)).collect();
        let union = IntervalSet::new(by_type.values().flat_map(|s| s.set.iter().copied()).collect::<Vec<Interval>>());
        CayleySpace { by_type, union }
    }

    pub fn get(&self, sigma: &ForwardType) -> Option<&OrientedCayleySpace> {
        self.by_type.get(sigma)
    }

    /// Number of oriented intervals over all types.
    pub fn interval_count(&self) -> usize {
        self.by_type.values().map(|s| s.set.len()).sum()
    }
}
