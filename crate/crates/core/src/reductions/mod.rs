//! Exact-cover and vertex-cover gadgets, and deciding them through Pareto optimality.

mod gadgets;
mod solve;
mod source;

pub use gadgets::{
    build_vc_gadget, build_x3c_gadget, AgentRole, Gadget, GadgetKind, ItemRole, Source, DUMMY_MIDDLE,
    DUMMY_PATH_LEN, ELEMENT_BAIT, ELEMENT_PATH_LEN,
};
pub use solve::{
    check_perfect_condition, condition_layer, extract_exact_cover, extract_vertex_cover, normalize,
    perfect_allocation_from_cover, solve_vc_via_po, solve_x3c_via_po, ViaPoOutcome,
};
pub use source::{solve_vc_bruteforce, solve_x3c_bruteforce, VCInstance, X3CInstance};
