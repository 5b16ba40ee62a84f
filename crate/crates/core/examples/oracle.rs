//! Brute-force checks by monomial enumeration, for cross-checking the fast
//! deciders on small inputs.
use qatic::oracle::{decomposable_set, mult_injective_bruteforce, span_subset, DEFAULT_CAP};
use qatic::{parse_profile, PrimePower};

fn main() {
    let q = PrimePower::from_q(2).unwrap();
    let a = parse_profile("1+t").unwrap();
    for (e, count) in decomposable_set(&a, q, 2, DEFAULT_CAP).unwrap() {
        println!("{e} <- {count} decomposition(s)");
    }
    for text in ["1+t", "2+t", "3"] {
        let p = parse_profile(text).unwrap();
        let injective: Vec<bool> = (1..=3)
            .map(|m| mult_injective_bruteforce(&p, q, m, DEFAULT_CAP).unwrap())
            .collect();
        println!("{p}: injective for m = 1, 2, 3: {injective:?}");
    }
    let (x, y) = (parse_profile("3+t^2").unwrap(), parse_profile("1+3t").unwrap());
    for m in 1..=4 {
        let check = span_subset(&x, &y, q, m, DEFAULT_CAP).unwrap();
        let witness = check.witness.map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        println!("m = {m}: {x} contained in {y}: {} (witness {witness})", check.holds);
    }
}
