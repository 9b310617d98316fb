//! Directed gadgets for the cover-time hardness reductions, the reduction
//! graphs built from them and exact certificates of their timing properties.

mod builder;
mod certify;
mod construct;
mod qsat;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{Graph, VertexSet};

pub use certify::{
    hamilton_crossing_check, octopus_stats, quincunx_optimum, quincunx_success, slow_path_closed_form,
    slow_path_expected, slow_path_report, tsat_tunsat, CrossingCheck, OctopusStats, QsatTimes, SlowPathReport,
    GADGET_EPS,
};
pub use construct::{hamilton_reduction, quincunx, roundabout, slow_path, star_connector, steep_hill};
pub use qsat::{literal_name, qsat_graph, QsatInstance};

/// A gadget or reduction graph with its named vertices.
///
/// Single-vertex ports are also graph labels. List ports (arrivals,
/// departures, star ports, ...) keep construction order.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub ports: BTreeMap<String, Vec<usize>>,
    /// Vertices still to be covered, when the construction prescribes them.
    pub unvisited: Option<VertexSet>,
    pub start: Option<usize>,
}

impl GadgetGraph {
    /// The vertex behind a single-vertex port.
    pub fn port(&self, name: &str) -> Option<usize> {
        self.graph.label(name)
    }

    /// Number of quincunx entrances recorded by the construction.
    pub fn quincunx_count(&self) -> usize {
        self.ports.get("quincunx_entrances").map_or(0, Vec::len)
    }
}
