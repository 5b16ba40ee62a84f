//! The three orderings on a pair of profiles of equal degree.
use qatic::order::{contains, prec, squig};
use qatic::{parse_profile, PrimePower};

fn main() {
    let q = PrimePower::from_q(2).unwrap();
    let pairs = [("1+t+t^2", "1+3t"), ("1+3t", "7"), ("3+t^2", "1+3t"), ("1+t^2", "1+2t")];
    for (a, b) in pairs {
        let (a, b) = (parse_profile(a).unwrap(), parse_profile(b).unwrap());
        println!("{a} vs {b} at q = {q}");
        let verdicts = [prec(&a, &b), contains(&a, &b, q).unwrap(), squig(&a, &b, q).unwrap()];
        for v in verdicts {
            let witness = v.witness.map(|w| format!(" ({w})")).unwrap_or_default();
            println!("  {:?}: {}{witness}", v.relation, v.holds);
        }
    }
}
