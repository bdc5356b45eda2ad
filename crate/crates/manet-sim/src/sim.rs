//! One self-contained simulation run: builds the world from a scenario,
//! dispatches events until the end time, and owns the trace.
//!
//! A `Simulation` is single-threaded and exclusively owns all its state;
//! parallelism comes from running independent simulations (different
//! seeds or scenarios) concurrently.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::aodv::{AodvConfig, AodvNode};
use crate::clustering::{self, ClusterMode, ClusterRole, ClusterView};
use crate::kernel::EventQueue;
use crate::mobility::Mobility;
use crate::net::{Action, Net};
use crate::radio::{OutboundQueues, RadioParams};
use crate::rng::SimRng;
use crate::scenario::{DistanceSampling, Scenario, ScenarioError};
use crate::time::{SimDuration, SimTime};
use crate::trace::{TraceKind, TraceLog, TraceRecord};
use crate::traffic::{DataPacket, FlowSpec};
use crate::NodeId;

struct FlowState {
    spec: FlowSpec,
    next_seq: u64,
}

pub struct Simulation {
    queue: EventQueue<Action>,
    trace: TraceLog,
    mobility: Mobility,
    radio: RadioParams,
    outbound: OutboundQueues,
    loss_rng: ChaCha8Rng,
    cfg: AodvConfig,
    nodes: BTreeMap<NodeId, AodvNode>,
    flows: Vec<FlowState>,
    cluster_mode: ClusterMode,
    cluster_interval: SimDuration,
    cluster_view: Option<ClusterView>,
    formed_at: Option<SimTime>,
    distances: Option<DistanceSampling>,
    sim_end: SimTime,
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let mobility = Mobility::new(&scenario.node_positions(), &scenario.waypoints)
            .expect("validated scenario compiles");
        let rng = SimRng::new(scenario.seed);
        let mut sim = Simulation {
            queue: EventQueue::new(),
            trace: TraceLog::new(),
            mobility,
            radio: scenario.radio,
            outbound: OutboundQueues::new(),
            loss_rng: rng.stream("radio-loss"),
            cfg: scenario.aodv.clone(),
            nodes: scenario
                .node_ids()
                .into_iter()
                .map(|id| (id, AodvNode::new(id)))
                .collect(),
            flows: scenario
                .flows
                .iter()
                .map(|&spec| FlowState { spec, next_seq: 0 })
                .collect(),
            cluster_mode: scenario.cluster_mode,
            cluster_interval: scenario.cluster_interval,
            cluster_view: None,
            formed_at: None,
            distances: scenario.distances,
            sim_end: scenario.sim_end,
        };

        // Hellos start at a per-node phase inside the first interval so the
        // network does not beacon in lockstep; the phases come from a
        // dedicated stream of the master seed.
        let mut phase_rng = rng.stream("hello-phase");
        let interval_us = sim.cfg.hello_interval.as_micros().max(1);
        let node_ids: Vec<NodeId> = sim.nodes.keys().copied().collect();
        for node in node_ids {
            let phase = SimTime::from_micros(phase_rng.random_range(0..interval_us));
            sim.queue
                .schedule(phase, Action::HelloTick { node })
                .expect("phase is in the future");
        }
        for (idx, flow) in sim.flows.iter().enumerate() {
            sim.queue
                .schedule(flow.spec.start, Action::FlowTick { flow_index: idx })
                .expect("flow start is non-negative");
        }
        if sim.cluster_mode != ClusterMode::Off {
            sim.queue
                .schedule(SimTime::ZERO + sim.cluster_interval, Action::ClusterSample)
                .expect("first sample is in the future");
        }
        if let Some(d) = sim.distances {
            let _ = d;
            sim.queue
                .schedule(SimTime::ZERO, Action::DistanceSample)
                .expect("time zero is valid");
        }
        Ok(sim)
    }

    pub fn now(&self) -> SimTime {
        self.queue.now()
    }

    pub fn sim_end(&self) -> SimTime {
        self.sim_end
    }

    pub fn trace(&self) -> &TraceLog {
        &self.trace
    }

    pub fn into_trace(self) -> TraceLog {
        self.trace
    }

    pub fn node(&self, id: NodeId) -> Option<&AodvNode> {
        self.nodes.get(&id)
    }

    pub fn cluster_view(&self) -> Option<&ClusterView> {
        self.cluster_view.as_ref()
    }

    pub fn mobility(&self) -> &Mobility {
        &self.mobility
    }

    pub fn radio(&self) -> &RadioParams {
        &self.radio
    }

    /// Processes every event due at or before `t_end`, leaves the clock at
    /// `t_end`, and returns the records emitted by this call in order.
    pub fn run_until(&mut self, t_end: SimTime) -> &[TraceRecord] {
        let start = self.trace.len();
        while let Some((_, action)) = self.queue.pop_due(t_end) {
            self.dispatch(action);
        }
        self.queue.advance_to(t_end);
        &self.trace.records()[start..]
    }

    pub fn run_to_end(&mut self) -> &[TraceRecord] {
        self.run_until(self.sim_end)
    }

    fn dispatch(&mut self, action: Action) {
        match action {
            Action::ClusterSample => self.on_cluster_sample(),
            Action::DistanceSample => self.on_distance_sample(),
            Action::FlowTick { flow_index } => self.on_flow_tick(flow_index),
            Action::Deliver { to, from, frame } => {
                let (mut net, nodes) = self.parts();
                if let Some(node) = nodes.get_mut(&to) {
                    node.handle_frame(frame, from, &mut net);
                }
            }
            Action::HelloTick { node } => {
                let (mut net, nodes) = self.parts();
                nodes
                    .get_mut(&node)
                    .expect("hello ticks only for scenario nodes")
                    .on_hello_tick(&mut net);
            }
            Action::NeighborTimeout { node, neighbor } => {
                let (mut net, nodes) = self.parts();
                if let Some(n) = nodes.get_mut(&node) {
                    n.on_neighbor_timeout(neighbor, &mut net);
                }
            }
            Action::DiscoveryTimeout { node, dst } => {
                let (mut net, nodes) = self.parts();
                if let Some(n) = nodes.get_mut(&node) {
                    n.on_discovery_timeout(dst, &mut net);
                }
            }
            Action::BufferTimeout {
                node,
                dst,
                flow,
                seq,
            } => {
                let (mut net, nodes) = self.parts();
                if let Some(n) = nodes.get_mut(&node) {
                    n.on_buffer_timeout(dst, flow, seq, &mut net);
                }
            }
        }
    }

    fn parts(&mut self) -> (Net<'_>, &mut BTreeMap<NodeId, AodvNode>) {
        let Simulation {
            queue,
            trace,
            mobility,
            radio,
            outbound,
            loss_rng,
            cfg,
            nodes,
            cluster_mode,
            cluster_view,
            ..
        } = self;
        (
            Net {
                now: queue.now(),
                queue,
                trace,
                mobility,
                radio,
                outbound,
                loss_rng,
                cfg,
                cluster_mode: *cluster_mode,
                cluster_view: cluster_view.as_ref(),
            },
            nodes,
        )
    }

    fn on_flow_tick(&mut self, flow_index: usize) {
        let now = self.queue.now();
        let spec = self.flows[flow_index].spec;
        let packet_seq = self.flows[flow_index].next_seq;
        self.flows[flow_index].next_seq += 1;

        let next = now + spec.interval;
        if next < spec.stop {
            self.queue
                .schedule(next, Action::FlowTick { flow_index })
                .expect("next tick is in the future");
        }

        let packet = DataPacket {
            flow_id: spec.id,
            packet_seq,
            src: spec.src,
            dst: spec.dst,
            payload_bytes: spec.payload_bytes,
            created_at: now,
            hop_trace: vec![spec.src],
        };
        let (mut net, nodes) = self.parts();
        nodes
            .get_mut(&spec.src)
            .expect("flow sources are scenario nodes")
            .originate_data(packet, &mut net)
            .expect("scenario validation rejects self-addressed flows");
    }

    /// Re-derives the cluster structure from the current neighbor graph.
    /// Pure observation in overlay mode: nothing here may touch protocol
    /// state, the radio or the random streams.
    fn on_cluster_sample(&mut self) {
        let now = self.queue.now();
        self.queue
            .schedule_in(self.cluster_interval, Action::ClusterSample);

        let graph = self.mobility.snapshot_graph(now, self.radio.range_m);
        let incumbents = self
            .cluster_view
            .as_ref()
            .map(|v| v.heads())
            .unwrap_or_default();
        let mut view = clustering::elect_clusters(&graph, &incumbents);
        clustering::identify_gateways(&mut view, &graph);

        for (&node, new_role) in &view.roles {
            let old_role = self
                .cluster_view
                .as_ref()
                .and_then(|v| v.roles.get(&node))
                .unwrap_or(&ClusterRole::Undecided);
            if old_role != new_role {
                self.trace.push(
                    TraceRecord::new(now, TraceKind::Clst, node)
                        .with("event", "role")
                        .with("old", old_role)
                        .with("new", new_role),
                );
            }
        }
        if self.formed_at.is_none() {
            // First sampling instant with every node decided.
            self.formed_at = Some(now);
            let first = *view.roles.keys().next().expect("nodes exist");
            self.trace.push(
                TraceRecord::new(now, TraceKind::Clst, first)
                    .with("event", "formed")
                    .with("heads", view.heads().len()),
            );
        }
        view.formed_at = self.formed_at;
        self.cluster_view = Some(view);
    }

    fn on_distance_sample(&mut self) {
        let now = self.queue.now();
        let Some(d) = self.distances else { return };
        self.queue.schedule_in(d.sample_dt, Action::DistanceSample);
        let ids: Vec<NodeId> = self.mobility.node_ids().collect();
        for node in ids {
            if node == d.ref_node {
                continue;
            }
            let dist = self
                .mobility
                .distance(node, d.ref_node, now)
                .expect("scenario nodes exist");
            self.trace.push(
                TraceRecord::new(now, TraceKind::Dist, node)
                    .with("ref", d.ref_node)
                    .with("dist_m", format!("{dist:.3}")),
            );
        }
    }
}
