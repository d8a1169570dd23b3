//! Counter-based seed derivation.

/// One round of the SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of replication `index` under `master`; independent of execution order.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn distinct_seeds() {
        let seen: HashSet<u64> = (0..10_000).map(|i| replication_seed(42, i)).collect();
        assert_eq!(seen.len(), 10_000);
        assert_ne!(replication_seed(1, 0), replication_seed(2, 0));
        assert_eq!(replication_seed(7, 3), replication_seed(7, 3));
    }
}
