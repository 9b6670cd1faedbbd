//! Arithmetic in GF(2^b) and deterministic stream-keyed random element draws.
//!
//! Elements are stored in the low `b` bits of a `u64`. Addition is XOR;
//! multiplication is a carry-less product reduced modulo an irreducible
//! polynomial fixed per field width.

use std::sync::OnceLock;

use thiserror::Error;

/// Element of GF(2^b), valid bits in the low `b` positions of the word.
pub type FieldElement = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field width {0}, expected one of 8, 16, 32, 64")]
    UnsupportedWidth(u32),
}

/// Low-order terms of the reduction polynomial x^b + r(x) for each width.
///
/// b=8:  x^8+x^4+x^3+x+1, b=16: x^16+x^5+x^3+x+1,
/// b=32: x^32+x^7+x^3+x^2+1, b=64: x^64+x^4+x^3+x+1.
const POLY_8: u64 = 0x1B;
const POLY_16: u64 = 0x2B;
const POLY_32: u64 = 0x8D;
const POLY_64: u64 = 0x1B;

/// A binary Galois field GF(2^b), b in {8, 16, 32, 64}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    bits: u32,
    low_poly: u64,
}

impl Field {
    pub fn new(bits: u32) -> Result<Field, FieldError> {
        let low_poly = match bits {
            8 => POLY_8,
            16 => POLY_16,
            32 => POLY_32,
            64 => POLY_64,
            other => return Err(FieldError::UnsupportedWidth(other)),
        };
        Ok(Field { bits, low_poly })
    }

    pub fn gf64() -> Field {
        Field { bits: 64, low_poly: POLY_64 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn low_poly(&self) -> u64 {
        self.low_poly
    }

    /// Bit mask covering the valid element bits.
    pub fn mask(&self) -> u64 {
        if self.bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.bits) - 1
        }
    }

    pub fn truncate(&self, raw: u64) -> FieldElement {
        raw & self.mask()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.bits == 64 {
            mul64(a, b, self.low_poly)
        } else {
            mul_narrow(a, b, self.bits, self.low_poly)
        }
    }
}

/// Carry-less product reduced mod x^64 + r(x), r of degree <= 4.
///
/// The high half folds twice: hi * x^64 == hi * r, whose own overflow
/// (at most deg r bits) folds once more.
#[inline]
fn mul64(a: u64, b: u64, low_poly: u64) -> u64 {
    let (lo, hi) = clmul64(a, b);
    let (l2, h2) = clmul64(hi, low_poly);
    let (l3, _) = clmul64(h2, low_poly);
    lo ^ l2 ^ l3
}

/// Product for b < 64: the carry-less product fits in a u64 and is reduced
/// by shifting the full polynomial under every set bit above position b-1.
#[inline]
fn mul_narrow(a: u64, b: u64, bits: u32, low_poly: u64) -> u64 {
    let (mut acc, _) = clmul64(a, b);
    let full = (1u64 << bits) | low_poly;
    let mut pos = 2 * bits - 2;
    while pos >= bits {
        if acc >> pos & 1 == 1 {
            acc ^= full << (pos - bits);
        }
        pos -= 1;
    }
    acc
}

/// 64x64 -> 128 carry-less multiplication, returned as (low, high) words.
#[inline]
pub fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    if have_pclmul() {
        return unsafe { clmul64_pclmul(a, b) };
    }
    clmul64_portable(a, b)
}

#[cfg(target_arch = "x86_64")]
fn have_pclmul() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| std::arch::is_x86_feature_detected!("pclmulqdq"))
}

#[cfg(not(target_arch = "x86_64"))]
#[allow(unused)]
fn have_pclmul() -> bool {
    false
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let p = _mm_clmulepi64_si128::<0>(x, y);
    (
        _mm_extract_epi64::<0>(p) as u64,
        _mm_extract_epi64::<1>(p) as u64,
    )
}

/// Branchless shift-and-XOR fallback, bit-identical to the hardware path.
pub fn clmul64_portable(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    for i in 0..64 {
        let mask = (((a as i64) << (63 - i)) >> 63) as u64;
        lo ^= mask & (b << i);
        if i > 0 {
            hi ^= mask & (b >> (64 - i));
        }
    }
    (lo, hi)
}

/// Stream tags keying independent substreams of a [`RandomTape`].
pub mod stream {
    pub const GAMMA: u64 = 1;
    pub const OMEGA: u64 = 2;
    pub const PLAIN_Z: u64 = 3;
    pub const EDGE_POS: u64 = 4;
    pub const EDGE_FIRST: u64 = 5;
    pub const DELTA: u64 = 6;
    pub const STUB: u64 = 7;
    pub const TIMESTAMP: u64 = 8;
    pub const ORIENT: u64 = 9;
    pub const DEGREE: u64 = 10;
    pub const INSTANCE: u64 = 11;
    pub const STEP: u64 = 12;
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-mode pseudorandom tape: every draw is a pure function of
/// (master seed, stream tag, index tuple), so evaluation order and thread
/// count cannot change outputs.
#[derive(Debug, Clone, Copy)]
pub struct RandomTape {
    seed: u64,
}

impl RandomTape {
    pub fn new(seed: u64) -> RandomTape {
        RandomTape { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Raw 64-bit draw for the given stream and index tuple.
    pub fn draw64(&self, stream: u64, idx: &[u64]) -> u64 {
        let mut h = mix64(
            self.seed ^ GOLDEN.wrapping_mul(stream ^ ((idx.len() as u64) << 56)),
        );
        for &w in idx {
            h = mix64(h ^ w.wrapping_add(GOLDEN));
        }
        h
    }

    /// Field element drawn uniformly from `field`.
    pub fn draw(&self, field: &Field, stream: u64, idx: &[u64]) -> FieldElement {
        field.truncate(self.draw64(stream, idx))
    }

    /// Uniform value in [0, bound). Modulo bias is below bound/2^64.
    pub fn uniform(&self, stream: u64, idx: &[u64], bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.draw64(stream, idx) % bound
    }

    /// Derived tape for an independent sub-computation.
    pub fn descend(&self, stream: u64, idx: &[u64]) -> RandomTape {
        RandomTape { seed: self.draw64(stream, idx) }
    }
}
