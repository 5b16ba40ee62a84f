//! Checks a few coefficient vectors against the carry search and prints a
//! collision for the ones that fail.
//!
//! cargo run --example profiles -- 4
use qatic::{parse_profile, PrimePower};

fn main() {
    let q: u64 = std::env::args().nth(1).map_or(2, |s| s.parse().expect("q"));
    let q = PrimePower::from_q(q).expect("q must be a prime power");
    for text in ["3", "1+t", "2+t", "t^2+3", "3t+1", "1+2t+t^2", "q+1"] {
        let Ok(a) = parse_profile(text) else {
            println!("{text:>10}  (not a polynomial in t)");
            continue;
        };
        let check = a.check(q);
        let degree = a.numerical_degree(q);
        match check.witness {
            None => println!("{:>10}  profile, a(q) = {degree}", a.to_string()),
            Some((b, c)) => println!("{:>10}  not a profile: {b}, {c} both evaluate to {}", a.to_string(), b.eval(q.q())),
        }
    }
}
