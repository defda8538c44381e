//! Inputs shared by the benchmarks.

use octic_cert::family::{build_P, ordered_pairs};
use octic_cert::{CuboidParams, Poly, Rat};

/// The first `n` family members in sweep order.
pub fn family_members(n: usize) -> Vec<Poly<Rat>> {
    ordered_pairs(16)
        .into_iter()
        .take(n)
        .map(|(a, u)| build_P(&CuboidParams::new(a, u).expect("coprime pair")))
        .collect()
}

/// `f·g` for two members, a reducible input of degree 16.
pub fn reducible_product() -> Poly<Rat> {
    let m = family_members(2);
    &m[0] * &m[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs() {
        let m = family_members(3);
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|f| f.degree() == Some(8)));
        assert_eq!(reducible_product().degree(), Some(16));
    }
}
