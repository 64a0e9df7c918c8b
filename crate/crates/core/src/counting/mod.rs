//! Solution counts of linear equations, collinear triples, the cluster
//! construction over ratio slices and the additive-energy counting chain.

mod cluster;
mod collinear;
mod er_chain;
mod sigma;

pub use cluster::{
    slice_taus, solymosi_cluster_report, ClusterContext, ClusterReport, GroupSums, SigmaBound, CLUSTER_SIGMA_BUDGET,
};
pub use collinear::{collinear_triples, collinear_triples_product, product_triples_lower};
pub use er_chain::{
    er_chain, er_chain_with, ErChain, TripleCount, CHECK_EST_FA, CHECK_EST_U, CHECK_SUM_F, CHECK_TRIPLE_LOW,
    ER_EXACT_LIMIT, RATIO_SOL_NEW, RATIO_TRIPLE_UPP,
};
pub use sigma::{sigma_count, sigma_max, sigma_max_bounded, SigmaOutcome, SigmaResult, SIGMA_MAX_TRIPLES};
