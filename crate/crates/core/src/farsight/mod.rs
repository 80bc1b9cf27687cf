//! Coalition moves, farsighted improving paths, reachability and stable sets.

mod certificate;
mod coalition;
mod engine;
mod horizon;
mod stable;

pub use certificate::{
    validate, validate_path, validate_path_horizon, Horizon, MoveStep, PathCertificate, PathViolation,
};
pub use coalition::{
    can_enforce, check_move, find_enforcing_coalition, school_move_admissible, Coalition, CoalitionDisplay,
    CoalitionParseError, MoveViolation,
};
pub use engine::{phi, PhiEngine, SearchError, DEFAULT_PHI_CAP};
pub use horizon::{phi_horizon, HorizonOptions, HorizonReach, DEFAULT_DEPTH_CAP, DEFAULT_NODE_BUDGET};
pub use stable::{
    check_stable_set, find_singleton_stable_sets, find_stable_sets, StableSetReport, StableSetSearch, Verdict,
    SUBSET_CAP,
};
