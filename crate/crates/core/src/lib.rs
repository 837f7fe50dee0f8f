// SPDX-License-Identifier: Apache-2.0

//! Alternation invariants of truth tables and exact reduction witnesses for
//! multidimensional step functions on Cantor space.

pub mod cantor;
pub mod cli;
pub mod dot;
pub mod injury;
pub mod normalize;
pub mod transducer;
pub mod truthtable;
pub mod verify;
