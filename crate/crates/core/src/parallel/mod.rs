//! Sharded execution of spectral pipelines over simulated workers.
//!
//! Workers are execution contexts that exchange data only through a
//! [`Network`], which records every transfer in an [`ExchangeLedger`]. Local
//! work of different workers runs concurrently when the `parallel` feature is
//! on. Initial data placement ("born sharded" inputs) and the final readout of
//! results are not communication and are not recorded.

mod dft;
mod ledger;
mod plan;
mod sharded;

pub use dft::{dft_direct, dft_row_partition, dft_two_worker_ct};
pub use ledger::{ExchangeLedger, Network, Transfer, DEFAULT_ELEMENT_BYTES};
pub use plan::{ShardPlan, Strategy};
pub use sharded::{pipeline_depth_split, sharded_polar_product, ShardedProduct};
