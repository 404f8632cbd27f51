//! Multiple patterning layout decomposition.
//!
//! Features of one layout layer are assigned to `k` masks so that features
//! closer than the minimum coloring distance land on different masks where
//! possible. Features may be split at stitch candidates; each stitch costs
//! `alpha`, each remaining conflict costs 1.

pub mod cost;
pub mod geom;
pub mod graph;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod simplify;
pub mod solvers;
pub mod stitch;
pub mod synth;
pub mod util;
