//! Emits the distance-versus-time plot data for the bundled five-node
//! scenario: every node's distance to reference node 4, one CSV row per
//! (time, node). Pipe it into any plotting tool.
//!
//! ```text
//! cargo run --example distance_series > distances.csv
//! ```

use manet_sim::{distance_series, metrics::distance_series_csv, scenario, NodeId, SimDuration};

fn main() {
    let scn = scenario::paper_5node();
    let samples =
        distance_series(&scn, NodeId(4), SimDuration::from_secs_f64(1.0)).expect("node 4 exists");
    print!("{}", distance_series_csv(&samples));

    let peak = |id: u16| {
        samples
            .iter()
            .filter(|s| s.node == NodeId(id))
            .map(|s| s.meters)
            .fold(0.0, f64::max)
    };
    eprintln!(
        "peak distance to node 4: node 1 = {:.1} m (departing),",
        peak(1)
    );
    eprintln!(
        "node 0 = {:.1} m (relay), nodes 2/3 = {:.1} m (settled)",
        peak(0),
        peak(2)
    );
}
