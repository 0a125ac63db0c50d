//! Exact construction of finite-dimensional Hopf algebras from finite groups,
//! and certification of whether they are quantum permutation algebras.

pub mod exactnum;
pub mod io;
pub mod linalg;
pub mod modp;
pub mod permgrp;
pub mod hopf;
pub mod matchedpair;
pub mod builders;
pub mod magic;
pub mod coideal;
pub mod qpacert;
pub mod twist;
