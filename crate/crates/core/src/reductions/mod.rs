//! The gap decision procedure driven by an online learner, and the
//! multi-instance hardness gadgets with exhaustive correspondence checks.

mod gadgets;
mod gap;

pub use gadgets::{
    content_id, dnf_to_matching, dnf_to_path, is_three_colorable, threecolor_to_p3, validate_correspondence,
    validate_threecolor_reduction, validate_vc_reduction, vc_to_multi_vc, CorrespondenceReport,
    CorrespondenceViolation, GraphReductionReport, MatchingGadget, VertexRole, COLORING_LIMIT, CORRESPONDENCE_LIMIT,
    VC_REDUCTION_LIMIT,
};
pub use gap::{gap_horizon, gap_solver, FollowTheLeader, GapAnswer, GapConfig, GapOutcome, OnlineVcLearner};
