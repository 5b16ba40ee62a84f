//! Expected dimension of the space of r-planes on a complete intersection.
use qatic::fano::fano_verdict;
use qatic::{parse_multiprofile, PrimePower};

fn main() {
    let q = PrimePower::from_q(2).unwrap();
    for (a, n, r) in [("[3]", 3, 1), ("[3]", 5, 2), ("[1+t]", 3, 1), ("[1+t, 2]", 9, 2), ("[4]", 4, 1)] {
        let a = parse_multiprofile(a).unwrap();
        let report = fano_verdict(n, &a, r, Some(q)).unwrap();
        let gamma = report.gamma.as_ref().map(|g| g.value.to_string()).unwrap_or_default();
        println!(
            "{} in P^{n}, r = {r}: delta = {}, delta_- = {}, {:?}, gamma = {gamma}",
            a.display_text(),
            report.delta,
            report.delta_minus,
            report.verdict
        );
    }
}
