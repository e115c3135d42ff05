//! Lattices, regions and the partition constructions used by the bound checks.

mod lattice;
mod partition;
mod region;

pub use lattice::{Lattice, Layout, SiteMetric};
pub use partition::{
    bar_census, cell_side_for, checkerboard_partition, four_square_partition, four_square_partition_layout,
    logical_support_grid, measured_bar_census, winding_axes, BarCensus, Part, PartitionCheck, PartitionPlan, Role,
    Separation,
};
pub use region::{
    boundary_shell, diameter, interior, neighborhood, region_distance, ring_sequence, Region, RingSequence, DIST_EPS,
};
