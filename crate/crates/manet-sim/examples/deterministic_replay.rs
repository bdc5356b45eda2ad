//! Replays the same scenario with the same seed and shows that the traces
//! are identical byte for byte — then changes the seed and shows they are
//! not.

use std::hash::{DefaultHasher, Hash, Hasher};

use manet_sim::{scenario, Simulation};

fn trace_hash(seed: u64) -> (u64, usize) {
    let scn = scenario::paper_5node().with_seed(seed);
    let mut sim = Simulation::new(&scn).expect("valid scenario");
    sim.run_to_end();
    let text = sim.trace().to_text();
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    (h.finish(), text.len())
}

fn main() {
    let (a, len_a) = trace_hash(42);
    let (b, len_b) = trace_hash(42);
    let (c, _) = trace_hash(43);

    println!("seed 42, run 1: {len_a} bytes, hash {a:#018x}");
    println!("seed 42, run 2: {len_b} bytes, hash {b:#018x}");
    println!("seed 43:        hash {c:#018x}");
    assert_eq!(a, b, "same seed must replay identically");
    println!(
        "\nsame seed: identical. different seed: {}",
        if a == c {
            "identical (!)"
        } else {
            "different, as expected"
        }
    );
}
