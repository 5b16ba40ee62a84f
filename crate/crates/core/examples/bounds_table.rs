//! Degree bounds for hypersurfaces of small degree, next to the classical
//! values where they are known.
use qatic::bounds::{classical_n0, Bounds, LeafConvention};
use qatic::{MultiProfile, Profile};

fn main() {
    let hi: u32 = std::env::args().nth(1).map_or(9, |s| s.parse().expect("degree"));
    let mut bounds = Bounds::new(LeafConvention::NodeCount);
    println!("{:>3} {:>8} {:>28} {:>22}", "d", "r", "n0", "classical");
    for d in 3..=hi {
        let top = MultiProfile::single(Profile::constant(d)).unwrap();
        let (r, n0) = bounds.n0_auto(&top).unwrap();
        println!("{d:>3} {r:>8} {n0:>28} {:>22}", classical_n0(d).unwrap_or("-"));
    }
    let top: MultiProfile = "[1+t,1+t]".parse().unwrap();
    let record = bounds.record(&top, None).unwrap();
    println!("{}: r0 = {}, r = {}, n0 = {}", top.display_text(), record.r0, record.r, record.n0);
}
