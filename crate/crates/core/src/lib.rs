//! Positivity tests for commuting 2-variable weighted shifts.
//!
//! The operator inequalities defining hyponormality, semi-hyponormality and
//! weak hyponormality are reduced, level by level, to finite symmetric
//! matrices: mostly 2×2 blocks handled in closed form by [`mat2`].

#![no_std]

extern crate alloc;

pub mod axy_region;
pub mod blockdecomp;
pub mod dense;
pub mod fuzz;
pub mod hypo_tests;
pub mod mat2;
pub mod ops;
pub mod shift_model;

pub use nalgebra;

pub use mat2::{PsdTolerance, Sym2};
pub use shift_model::{Point, Tail, WeightDiagram};
