use rand::RngCore;

/// Counter-based handle to an independent random stream.
///
/// A key is a 64-bit hash; children are derived by hashing in a tag, so any
/// stream can be reached from `(seed, trial, ...)` without touching the
/// streams that precede it. This is what makes trials order-independent and
/// lets nested windows share their common geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        Self(mix(seed.wrapping_add(GAMMA)))
    }

    pub fn child(self, tag: u64) -> Self {
        Self(mix(self.0 ^ mix(tag.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }

    /// Child for a signed index (block numbers run in both directions).
    pub fn child_signed(self, tag: i64) -> Self {
        self.child(((tag << 1) ^ (tag >> 63)) as u64)
    }

    /// Cheap child for dense integer tags that are already hash-like, such as
    /// interferer tags. One finalizer round instead of two.
    pub fn mark(self, tag: u64) -> Self {
        Self(mix(self.0 ^ tag))
    }

    pub fn id(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> SplitMix64 {
        SplitMix64(self.0)
    }
}

/// SplitMix64 generator: a Weyl sequence passed through the finalizer.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl RngCore for SplitMix64 {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(GAMMA);
        mix(self.0)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
