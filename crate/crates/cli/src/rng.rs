//! Counter-based pseudo-random generator: every draw hashes
//! (key, counter), so streams are reproducible across platforms and
//! independent of call order batching.

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { key: mix(seed ^ 0x9E3779B97F4A7C15), counter: 0 }
    }

    /// Independent stream for a named subtask.
    pub fn stream(&self, tag: u64) -> CounterRng {
        CounterRng { key: mix(self.key ^ mix(tag)), counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.key.wrapping_add(mix(self.counter)));
        self.counter += 1;
        v
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.uniform() * (hi - lo)
    }

    /// Uniform in [-0.5, 0.5).
    pub fn unit(&mut self) -> f64 {
        self.uniform() - 0.5
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
