pub mod boundary_pair;
pub mod carleson;
pub mod decompose;
pub mod identities;
pub mod linear_pair;

/// Derived per-task seed: keeps sub-experiments decoupled while remaining a
/// pure function of the root seed.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    // splitmix64 step
    let mut z = root.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of a scenario run: `pass` feeds the process exit status.
pub struct ScenarioOutcome {
    pub pass: bool,
    pub summary: String,
}
