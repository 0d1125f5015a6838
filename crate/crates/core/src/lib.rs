//! Exact decision procedures for holographic transformations of Boolean
//! signatures into the affine class and the product-type class.

pub mod affine;
pub mod candidates;
pub mod decision;
pub mod holant;
pub mod io;
pub mod product;
pub mod scalars;
pub mod signatures;
pub mod symmetric;
