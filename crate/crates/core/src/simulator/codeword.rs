use std::fmt;

use rand::{Rng, RngCore};

use crate::exact_comb::CodeParams;
use crate::exponents::ChannelModel;

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// A binary word of fixed length, packed 64 units per `u64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    len: usize,
    bits: Vec<u64>,
}

impl Codeword {
    pub fn zeros(len: usize) -> Self {
        Self { len, bits: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            w.set(i, true);
        }
        w
    }

    /// A word with ones exactly at `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut w = Self::zeros(len);
        for &p in positions {
            assert!(p < len, "position {p} out of range for length {len}");
            w.set(p, true);
        }
        w
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            w.set(i, b);
        }
        w
    }

    pub(crate) fn from_raw(len: usize, bits: &[u64]) -> Self {
        Self { len, bits: bits.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of active units.
    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.bits[i / 64] |= mask;
        } else {
            self.bits[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i / 64] ^= 1u64 << (i % 64);
    }

    /// Number of units active in both words, `⟨self, other⟩`.
    pub fn overlap(&self, other: &Codeword) -> u64 {
        overlap(&self.bits, &other.bits)
    }

    pub fn as_words(&self) -> &[u64] {
        &self.bits
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

#[inline]
pub(crate) fn overlap(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

/// Writes a uniformly random weight-`a` word into `out` by a partial
/// Fisher–Yates shuffle of the unit indices.
pub(crate) fn sample_into<R: Rng + ?Sized>(params: CodeParams, rng: &mut R, scratch: &mut Vec<u32>, out: &mut [u64]) {
    let (n, a) = (params.n() as usize, params.a() as usize);
    scratch.clear();
    scratch.extend(0..n as u32);
    out.iter_mut().for_each(|w| *w = 0);
    for i in 0..a {
        let j = rng.random_range(i..n);
        scratch.swap(i, j);
        let p = scratch[i] as usize;
        out[p / 64] |= 1u64 << (p % 64);
    }
}

/// Uniformly random constant-weight word: every one of the `C(N, a)` words is
/// equally likely.
pub fn sample_codeword<R: Rng + ?Sized>(params: CodeParams, rng: &mut R) -> Codeword {
    let mut w = Codeword::zeros(params.n() as usize);
    let mut scratch = Vec::with_capacity(params.n() as usize);
    sample_into(params, rng, &mut scratch, &mut w.bits);
    w
}

// Bernoulli flip decision with 2^-64 resolution.
#[derive(Clone, Copy)]
pub(crate) enum Flip {
    Never,
    Always,
    Below(u64),
}

impl Flip {
    pub(crate) fn new(p: f64) -> Self {
        if p <= 0.0 {
            Flip::Never
        } else if p >= 1.0 {
            Flip::Always
        } else {
            Flip::Below((p * 18_446_744_073_709_551_616.0) as u64)
        }
    }

    #[inline]
    fn draw<R: RngCore + ?Sized>(self, rng: &mut R) -> bool {
        match self {
            Flip::Never => false,
            Flip::Always => true,
            Flip::Below(t) => rng.next_u64() < t,
        }
    }
}

/// Sends `w` through the channel: every active unit turns off with
/// probability `p10`, every inactive unit turns on with probability `p01`.
pub fn apply_channel<R: RngCore + ?Sized>(w: &Codeword, channel: &ChannelModel, rng: &mut R) -> Codeword {
    let off = Flip::new(channel.p10());
    let on = Flip::new(channel.p01());
    let mut out = w.clone();
    for i in 0..w.len {
        let flip = if w.get(i) { off } else { on };
        if flip.draw(rng) {
            out.flip(i);
        }
    }
    out
}
