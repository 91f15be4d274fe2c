//! Channel simulation: sensor sampling, scheduler gating, deceptive-signal
//! injection, and the tester-side measurement-discrimination protocol.
//!
//! One tick of the non-secure channel carries the securely delivered
//! scheduler bit `gamma` and an unordered set of at most two payloads: the
//! true measurement (when `gamma = 1`) and possibly a deceptive signal. The
//! tester recovers a measurement only when `gamma = 1` and exactly one
//! payload lies in the transmit region `U`; everything else is discarded.
//!
//! All randomness flows through [`RngStream`], a seeded ChaCha stream cipher
//! with named substreams, so trials can run in any order (or in parallel)
//! and still reproduce bit-identical results.

use arrayvec::ArrayVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exponent::AttackModel;
use crate::model::{HypothesisPair, LrbScheduler, SchedulerSpec};
use crate::{Error, Result};

/// Reproducible random source: identical `(seed, stream_index)` always
/// reproduces identical draws, on any platform and under any parallelism.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Derive an independent stream keyed by `tags` (for example
    /// `(phase, run length, trial)`), sharing this stream's seed. The
    /// derivation mixes each tag through splitmix64, so distinct tag tuples
    /// give distinct streams.
    pub fn substream(&self, tags: &[u64]) -> RngStream {
        let mut index = self.stream_index;
        for &tag in tags {
            index = splitmix64(index ^ splitmix64(tag));
        }
        RngStream::new(self.seed, index)
    }

    /// A standard-normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// A uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// One sensor measurement `y = theta + sigma * Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSample {
    y: f64,
}

impl SensorSample {
    pub fn value(&self) -> f64 {
        self.y
    }
}

/// What the tester receives at one tick: the scheduler bit plus an unordered
/// payload set (at most the true measurement and one deceptive signal, in
/// randomized presentation order).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelObservation {
    gamma: bool,
    payloads: ArrayVec<f64, 2>,
}

impl ChannelObservation {
    pub fn gamma(&self) -> bool {
        self.gamma
    }

    pub fn payloads(&self) -> &[f64] {
        &self.payloads
    }
}

/// Result of the discrimination protocol at one tick. `delta` is set exactly
/// when a transmitted measurement was uniquely identified, in which case
/// `recovered` holds it (and it lies in the transmit region).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationOutcome {
    gamma: bool,
    delta: bool,
    recovered: Option<f64>,
}

impl DiscriminationOutcome {
    pub fn gamma(&self) -> bool {
        self.gamma
    }

    pub fn delta(&self) -> bool {
        self.delta
    }

    pub fn recovered(&self) -> Option<f64> {
        self.recovered
    }

    /// Bookkeeping for pipelines without discrimination (secure channel,
    /// random scheduler): every transmitted measurement counts, `delta =
    /// gamma`.
    pub(crate) fn pass_through(gamma: bool, y: f64) -> Self {
        Self {
            gamma,
            delta: gamma,
            recovered: gamma.then_some(y),
        }
    }

    fn discarded(gamma: bool) -> Self {
        Self {
            gamma,
            delta: false,
            recovered: None,
        }
    }
}

/// Draw one sensor measurement under state `theta`.
pub fn generate_sample(rng: &mut RngStream, theta: f64, pair: &HypothesisPair) -> SensorSample {
    SensorSample {
        y: theta + pair.sigma() * rng.standard_normal(),
    }
}

/// With probability `intensity`, draw a deceptive signal from
/// `N(q_mean, q_var)`. Zero intensity consumes no randomness, so a
/// zero-intensity attack reproduces the exact no-attack stream.
pub fn attacker_inject(rng: &mut RngStream, attack: &AttackModel) -> Option<f64> {
    if attack.intensity() == 0.0 {
        return None;
    }
    if !rng.bernoulli(attack.intensity()) {
        return None;
    }
    Some(attack.q_mean() + attack.q_var().sqrt() * rng.standard_normal())
}

/// Run the scheduler on a sample and assemble the channel observation,
/// merging in an injected signal if present. With two payloads the
/// presentation order is randomized so arrival order carries no information.
pub fn transmit(
    sample: &SensorSample,
    sched: &SchedulerSpec,
    injected: Option<f64>,
    rng: &mut RngStream,
) -> ChannelObservation {
    let gamma = match sched {
        SchedulerSpec::Lrb(s) => s.decide(sample.value()),
        SchedulerSpec::Random(s) => rng.bernoulli(s.p()),
    };
    let mut payloads = ArrayVec::new();
    if gamma {
        payloads.push(sample.value());
    }
    if let Some(q) = injected {
        payloads.push(q);
    }
    if payloads.len() == 2 && rng.bernoulli(0.5) {
        payloads.swap(0, 1);
    }
    ChannelObservation { gamma, payloads }
}

/// The discrimination protocol. When `gamma = 0` everything received is
/// deceptive and discarded. When `gamma = 1`, a unique payload in the
/// transmit region must be the true measurement and is recovered; zero or two
/// in-region payloads are ambiguous and the tick is discarded.
///
/// Only defined for the LRB scheduler: the random scheduler reveals no region
/// for received values to be checked against.
pub fn discriminate(
    obs: &ChannelObservation,
    sched: &SchedulerSpec,
) -> Result<DiscriminationOutcome> {
    let lrb = match sched {
        SchedulerSpec::Lrb(s) => s,
        SchedulerSpec::Random(_) => return Err(Error::UnsupportedProtocol("random")),
    };
    Ok(discriminate_lrb(obs, lrb))
}

pub(crate) fn discriminate_lrb(
    obs: &ChannelObservation,
    sched: &LrbScheduler,
) -> DiscriminationOutcome {
    if !obs.gamma() {
        return DiscriminationOutcome::discarded(false);
    }
    let mut in_region = obs
        .payloads()
        .iter()
        .copied()
        .filter(|&v| sched.transmit_region_contains(v));
    match (in_region.next(), in_region.next()) {
        (Some(v), None) => DiscriminationOutcome {
            gamma: true,
            delta: true,
            recovered: Some(v),
        },
        _ => DiscriminationOutcome::discarded(true),
    }
}
