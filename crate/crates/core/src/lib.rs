//! Explicit Reedy fibrant replacement for projective-fibrant diagrams of
//! finite, truncated simplicial sets over finite Reedy categories, together
//! with exhaustive certificates for every structural property of the result.

pub mod certificate;
pub mod error;
pub mod holim;
pub mod path;
pub mod reedy;
pub mod replace;
pub mod sset;

pub use certificate::{Certificate, CertificateSet, Status};
pub use error::{Error, Result};
