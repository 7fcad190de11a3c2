//! At most `t`-intersecting `k`-uniform set families: constructions,
//! verification, the cover-free bijection, bound formulas and exhaustive
//! search.

mod bounds;
mod brute;
mod construct;
mod family;

pub use bounds::{
    bound_one_more, bound_simple, bound_small_n, feasibility_check, max_sskh_prfs, Feasibility,
    PrfCountBound, PrfCountModel,
};
pub use brute::{brute_force_max, max_cover_free_via_bijection, BRUTE_FORCE_GUARD};
pub use construct::{
    add_distinguished, construct_exact_t, construct_small_n, double_family, fano_plane,
    relative_size, strip_distinguished,
};
pub use family::{verify_family, FamilyReport, Label, SetFamily, Witness};
