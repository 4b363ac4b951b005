use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha8 generator keyed by `(seed, stream)`.
///
/// Streams are independent; [`SeededRng::fork`] derives child streams from
/// the key alone, so forking is unaffected by how many values were drawn.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child generator for sub-task `sub`.
    pub fn fork(&self, sub: u64) -> SeededRng {
        let stream = splitmix64(self.stream ^ splitmix64(sub.wrapping_add(0x5851_f42d_4c95_7f2d)));
        SeededRng::new(self.seed, stream)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_key_same_sequence() {
        let mut a = SeededRng::new(7, 3);
        let mut b = SeededRng::new(7, 3);
        let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn streams_differ() {
        let mut a = SeededRng::new(7, 3);
        let mut b = SeededRng::new(7, 4);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn fork_ignores_consumed_state() {
        let base = SeededRng::new(11, 0);
        let mut used = base.clone();
        let _: f64 = used.random();
        let mut f1 = base.fork(5);
        let mut f2 = used.fork(5);
        assert_eq!(f1.next_u64(), f2.next_u64());
        assert_ne!(base.fork(5).stream(), base.fork(6).stream());
    }
}
