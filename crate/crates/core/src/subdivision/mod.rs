//! Interpolatory subdivision by adapted multi-Q patches and by Dupin
//! cyclide patches.

pub mod arc;
pub mod circular;
pub mod q;

pub use arc::CircArc;
pub use circular::{adapted_cyclide_patch, subdivide_circular, CircularSubdivision, SeedArcs};
pub use q::{adapted_q_patch, attach_edge_polylines, subdivide_q, EdgePolylines, SeedPolicy};
