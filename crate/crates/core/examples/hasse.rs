//! Prints the interval below a multi-profile, as a chain or a DOT graph.
//!
//! cargo run --example hasse -- "[2t+1, t^2+1]"
use qatic::poset::{interval, IntervalOptions};
use qatic::parse_multiprofile;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "[6]".into());
    let top = parse_multiprofile(&text).expect("multi-profile");
    let graph = interval(&top, IntervalOptions::default()).expect("interval within the node cap");
    eprintln!("{} nodes, {} edges", graph.nodes.len(), graph.edges.len());
    if graph.is_chain() {
        print!("{}", graph.to_text());
    } else {
        print!("{}", graph.to_dot());
    }
}
