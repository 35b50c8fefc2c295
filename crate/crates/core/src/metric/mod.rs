//! Coarse disjoint unions, compression profiles, assembly of Hilbert space
//! embeddings, and the extension experiment on finite quotients of `A⋆B`.

mod assembly;
mod extension;
mod space;

pub use assembly::{
    assemble_direct_sum, direct_sum_families, gaussian_family, glue_bound_check, glue_embeddings, induced_embedding,
    induced_report, CosetSection, DirectSum, DirectSumReport, GaussianFamily, GlueReport, InducedReport, DEFAULT_LMAX,
    PSD_TOLERANCE, UNIT_TOLERANCE,
};
pub use extension::{
    extension_experiment, Action, ExtensionQuotient, ExtensionReport, FiberRow, LengthComparison, LengthProfileRow,
    RANDOM_WORD_CHECKS,
};
pub use space::{
    coarse_union, hilbert_union, profile, AxiomReport, BoundednessReport, CoarseUnion, CompressionProfile, FiniteMetric,
    MetricComponent, NeighbourhoodSet, ProfileRow, EXHAUSTIVE_TRIANGLE_MAX, SAMPLED_TRIANGLE_MAX,
};
