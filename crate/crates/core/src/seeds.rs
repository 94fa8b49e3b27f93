//! Stable per-task seed derivation.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `master ⊕ hash(coords)`; independent of platform, thread count and
/// evaluation order.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    let h = coords
        .iter()
        .fold(0x5EED_0F_C0DE_u64, |acc, &c| mix64(acc ^ mix64(c)));
    master ^ h
}
