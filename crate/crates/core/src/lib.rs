//! Mapper graphs with covers chosen by Anderson-Darling guided interval
//! splitting, alongside uniform, balanced and fuzzy c-means covers.

pub mod bench;
pub mod clustering;
pub mod cover;
pub mod data;
pub mod gmm;
pub mod mapper;
pub mod stats;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Stats(#[from] stats::StatsError),
    #[error(transparent)]
    Gmm(#[from] gmm::GmmError),
    #[error(transparent)]
    Cover(#[from] cover::CoverError),
    #[error(transparent)]
    Clustering(#[from] clustering::ClusteringError),
    #[error(transparent)]
    Mapper(#[from] mapper::MapperError),
    #[error(transparent)]
    Data(#[from] data::DataError),
}
