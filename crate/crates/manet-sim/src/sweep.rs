//! Multi-seed sweeps: the same scenario run once per seed, with per-seed
//! metric rows and mean/min/max aggregates.

use serde::Serialize;
use thiserror::Error;

use crate::metrics::{compute_metrics, MetricsReport};
use crate::scenario::{Scenario, ScenarioError};
use crate::sim::Simulation;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep needs at least one seed")]
    NoSeeds,
    #[error("seed {seed}: {source}")]
    Run {
        seed: u64,
        #[source]
        source: ScenarioError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub seed: u64,
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub in_flight: u64,
    pub delivery_ratio: Option<f64>,
    pub latency_mean_s: Option<f64>,
    pub control_packets: u64,
}

impl SweepRow {
    fn from_metrics(seed: u64, m: &MetricsReport) -> Self {
        SweepRow {
            seed,
            sent: m.sent,
            delivered: m.delivered,
            dropped: m.drops.total(),
            in_flight: m.in_flight,
            delivery_ratio: m.delivery_ratio,
            latency_mean_s: m.latency_mean_s,
            control_packets: m.control_tx.rreq
                + m.control_tx.rrep
                + m.control_tx.rerr
                + m.control_tx.hello,
        }
    }
}

/// Mean/min/max over the defined values of one numeric column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    fn over(values: impl Iterator<Item = f64>) -> Option<Aggregate> {
        let values: Vec<f64> = values.collect();
        if values.is_empty() {
            return None;
        }
        let sum: f64 = values.iter().sum();
        Some(Aggregate {
            mean: sum / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub scenario: String,
    pub rows: Vec<SweepRow>,
    pub delivery_ratio: Option<Aggregate>,
    pub latency_mean_s: Option<Aggregate>,
    pub sent: Aggregate,
    pub delivered: Aggregate,
}

impl SweepReport {
    /// Tab-separated rows plus aggregate lines; stable across runs with
    /// the same seeds, regardless of seed order.
    pub fn to_text(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map_or_else(|| "undefined".into(), |x| format!("{x:.6}"))
        }
        let mut out = String::from(
            "seed\tsent\tdelivered\tdropped\tin_flight\tdelivery_ratio\tlatency_mean_s\tcontrol_packets\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.seed,
                r.sent,
                r.delivered,
                r.dropped,
                r.in_flight,
                opt(r.delivery_ratio),
                opt(r.latency_mean_s),
                r.control_packets,
            ));
        }
        let mut agg_line = |name: &str, a: Option<Aggregate>| {
            match a {
                Some(a) => out.push_str(&format!(
                    "# {name}: mean={:.6} min={:.6} max={:.6}\n",
                    a.mean, a.min, a.max
                )),
                None => out.push_str(&format!("# {name}: undefined\n")),
            };
        };
        agg_line("delivery_ratio", self.delivery_ratio);
        agg_line("latency_mean_s", self.latency_mean_s);
        agg_line("sent", Some(self.sent));
        agg_line("delivered", Some(self.delivered));
        out
    }
}

/// Runs the scenario once per seed, each run fully isolated. Rows come
/// back in the order the seeds were given.
pub fn sweep(scenario: &Scenario, seeds: &[u64]) -> Result<SweepReport, SweepError> {
    if seeds.is_empty() {
        return Err(SweepError::NoSeeds);
    }
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let seeded = scenario.with_seed(seed);
        let mut sim =
            Simulation::new(&seeded).map_err(|source| SweepError::Run { seed, source })?;
        sim.run_to_end();
        let metrics = compute_metrics(sim.trace().records());
        rows.push(SweepRow::from_metrics(seed, &metrics));
    }
    Ok(SweepReport {
        scenario: scenario.name.clone(),
        delivery_ratio: Aggregate::over(rows.iter().filter_map(|r| r.delivery_ratio)),
        latency_mean_s: Aggregate::over(rows.iter().filter_map(|r| r.latency_mean_s)),
        sent: Aggregate::over(rows.iter().map(|r| r.sent as f64)).expect("at least one row"),
        delivered: Aggregate::over(rows.iter().map(|r| r.delivered as f64))
            .expect("at least one row"),
        rows,
    })
}
