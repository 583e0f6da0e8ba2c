//! Posets used by sweeps and tests.

use crate::fnalg::Carrier;
use crate::order::{Lattice, Poset};

pub fn chain(size: usize) -> Poset {
    Poset::chain(Carrier::range("C", size).expect("chain size in 2..=64"))
}

pub fn chain_lattice(size: usize) -> Lattice {
    Lattice::chain(Carrier::range("C", size).expect("chain size in 2..=64"))
}

/// `0 < a, b < c, d < 1` with every element of `{a, b}` below every element
/// of `{c, d}`. Bounded, hence bidirected, but `a ∨ b` does not exist.
pub fn bidirected_non_lattice() -> Poset {
    let carrier = Carrier::new("P6", vec!["0", "a", "b", "c", "d", "1"]).expect("distinct symbols");
    Poset::from_covers(
        carrier,
        &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
    )
    .expect("acyclic covers")
}

/// The diamond `M3`, the smallest non-distributive lattice.
pub fn diamond() -> Lattice {
    let carrier = Carrier::new("M3", vec!["0", "a", "b", "c", "1"]).expect("distinct symbols");
    let poset = Poset::from_covers(carrier, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        .expect("acyclic covers");
    Lattice::from_poset(poset).expect("M3 is a lattice")
}

/// Looks a fixture up by its command-line name.
pub fn by_name(name: &str) -> Option<Poset> {
    match name {
        "p6" | "bidirected" => Some(bidirected_non_lattice()),
        "m3" | "diamond" => Some(diamond().poset().clone()),
        _ => name
            .strip_prefix("chain")
            .and_then(|k| k.parse().ok())
            .filter(|k| (2..=64).contains(k))
            .map(chain),
    }
}
