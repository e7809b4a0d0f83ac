//! Explicit top-dimensional homology classes in Quillen complexes of finite
//! unitary groups, built from unitary permutation braids and checked by
//! brute force.

pub mod bruhat;
pub mod chains;
pub mod constructors;
pub mod coxeter;
pub mod field;
pub mod group;
pub mod oracle;
pub mod ubraid;

pub use field::{Elem, Field, FieldError};
pub use group::{AmbientGroup, AmbientKind, Group, GroupElement, GroupError, Mat};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bruhat(#[from] bruhat::BruhatError),
    #[error(transparent)]
    Ubraid(#[from] ubraid::UbraidError),
    #[error(transparent)]
    Chains(#[from] chains::ChainError),
    #[error(transparent)]
    Construct(#[from] constructors::ConstructError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}
