//! Construction of pseudo-Anosov maps from {0,1} odd-block matrices, with
//! every coordinate computed exactly in the number field of the dilatation.

pub mod exactnum;
pub mod oddblock;
pub mod intervalmap;
pub mod alignment;
pub mod boxcomplex;
pub mod invariants;
