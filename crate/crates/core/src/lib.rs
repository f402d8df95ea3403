#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod disks;
pub mod error;
pub mod flow;
pub mod graph;
pub mod io;
pub mod jacobian;
pub mod moebius;
pub mod solver;
pub mod svg;
pub mod triangulation;
