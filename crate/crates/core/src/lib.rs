//! Exact mod-2 cohomology of planar polygon spaces and certified bounds for
//! their higher topological complexity.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, caching and the
//! command-line interface live in the `polytc` crate.

#![no_std]
extern crate alloc;

pub mod bounds;
pub mod cohomology;
pub mod error;
pub mod genetics;
pub mod lengthvec;
pub mod linsys;
pub mod lp;
pub mod sets;
pub mod tensor;

pub use bounds::{tc_bounds, BoundOptions, Method, TCBoundReport, Verification};
pub use cohomology::{build_ring, CohoClass, CupLength, Generator, Monomial, MonomialType, RingPresentation};
pub use error::{Error, Result};
pub use genetics::{
    classify, dominance_leq, enumerate_genetic_codes, realizable, Classifier, CodeSignature, EnumeratedCode,
    GeneticCode, SubgeeFamily, Template,
};
pub use lengthvec::LengthVector;
pub use sets::IndexSet;
pub use tensor::{
    evaluate_certificate, zcl_lower_bound, BasisTable, Certificate, Evaluation, Factor, FactorKind, TensorClass,
};
