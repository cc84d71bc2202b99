//! Target state specifications.
//!
//! A fixed-Hamming-weight state on `n` qubits is a superposition
//! `Σ α_x |x⟩` over length-`n` bitstrings `x` carrying exactly `k` ones.
//! Bitstrings are written with `x_1` as the leftmost character, and `x_1`
//! lives on the first working qubit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported register width. Bitstrings are packed into a `u64`.
pub const MAX_N: u32 = 63;

/// Tolerance on `|Σ|α|² − 1|` accepted by [`validate`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Number of redraws attempted by the random generators before giving up.
const MAX_DRAW_ATTEMPTS: usize = 8;

/// A binary string of at most [`MAX_N`] characters.
///
/// Packed so that `x_1` is the most significant of the `len` low bits; the
/// packed value is therefore the basis index of `|x_1 … x_n⟩`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u32,
    bits: u64,
}

impl BitString {
    pub const EMPTY: BitString = BitString { len: 0, bits: 0 };

    /// Builds a string from its packed value. Bits above `len` must be clear.
    pub fn from_bits(bits: u64, len: u32) -> Self {
        assert!(len <= MAX_N, "bitstring length {len} exceeds {MAX_N}");
        assert!(bits >> len == 0, "bits {bits:#b} do not fit in {len} characters");
        BitString { len, bits }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn hamming_weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Character `x_pos`, 1-based from the left.
    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos >= 1 && pos <= self.len(), "position {pos} outside 1..={}", self.len);
        (self.bits >> (self.len as usize - pos)) & 1 == 1
    }

    /// Substring `x[i, j]`, 1-based and inclusive.
    pub fn substring(&self, i: usize, j: usize) -> BitString {
        assert!(i >= 1 && j <= self.len() && i <= j + 1);
        let width = (j + 1 - i) as u32;
        let shifted = self.bits >> (self.len() - j);
        BitString::from_bits(shifted & mask(width), width)
    }

    /// The last `len` characters.
    pub fn suffix(&self, len: usize) -> BitString {
        assert!(len <= self.len());
        BitString::from_bits(self.bits & mask(len as u32), len as u32)
    }

    pub fn ends_with(&self, suffix: &BitString) -> bool {
        suffix.len <= self.len && self.bits & mask(suffix.len) == suffix.bits
    }

    /// `bit` followed by `self`.
    pub fn prepend(&self, bit: bool) -> BitString {
        BitString::from_bits(self.bits | (u64::from(bit) << self.len), self.len + 1)
    }
}

fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 1..=self.len() {
            f.write_str(if self.bit(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_N as usize {
            return Err(Error::InvalidN(s.len() as u32));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidBitString(s.to_string())),
                };
        }
        Ok(BitString { len: s.len() as u32, bits })
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All length-`n` strings of weight `k`, in increasing numeric order.
pub fn weight_k_strings(n: u32, k: u32) -> impl Iterator<Item = BitString> {
    assert!(n <= MAX_N && k <= n);
    let limit = 1u64 << n;
    let mut next = Some(mask(k));
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            // Gosper's hack: next integer with the same popcount.
            let low = current & current.wrapping_neg();
            let ripple = current + low;
            let candidate = (((ripple ^ current) >> 2) / low) | ripple;
            (candidate < limit).then_some(candidate)
        };
        Some(BitString { len: n, bits: current })
    })
}

fn check_dimensions(n: u32, k: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidN(n));
    }
    if k > n {
        return Err(Error::InvalidK { n, k });
    }
    Ok(())
}

/// A validated fixed-Hamming-weight target state.
///
/// Absent keys have amplitude zero. Explicit zero entries are kept as written.
#[derive(Clone, Debug, PartialEq)]
pub struct HwkStateSpec {
    n: u32,
    k: u32,
    amplitudes: BTreeMap<BitString, Complex64>,
}

impl HwkStateSpec {
    /// Validates `(key, amplitude)` pairs into a spec.
    pub fn from_amplitudes(
        n: u32,
        k: u32,
        amplitudes: impl IntoIterator<Item = (BitString, Complex64)>,
    ) -> Result<Self> {
        let entries = amplitudes
            .into_iter()
            .map(|(key, amp)| (key.to_string(), amp))
            .collect();
        validate(RawStateSpec { n, k, entries }, ValidateOptions::default())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn amplitude(&self, x: &BitString) -> Complex64 {
        self.amplitudes.get(x).copied().unwrap_or_default()
    }

    /// Explicit entries in increasing bitstring order.
    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_raw())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, ValidateOptions::default())
    }

    pub fn from_json_with(text: &str, options: ValidateOptions) -> Result<Self> {
        let raw: RawStateSpec = serde_json::from_str(text)?;
        validate(raw, options)
    }

    pub fn to_raw(&self) -> RawStateSpec {
        RawStateSpec {
            n: self.n,
            k: self.k,
            entries: self
                .amplitudes
                .iter()
                .map(|(key, amp)| (key.to_string(), *amp))
                .collect(),
        }
    }
}

/// An unvalidated spec as read from disk: `{"n", "k", "amplitudes": {"<bits>": [re, im]}}`.
///
/// Entries keep their on-disk order and any duplicates so that [`validate`]
/// can report them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawStateSpec {
    pub n: u32,
    pub k: u32,
    #[serde(rename = "amplitudes", with = "amplitude_map")]
    pub entries: Vec<(String, Complex64)>,
}

mod amplitude_map {
    use super::*;

    pub fn serialize<S: Serializer>(
        entries: &[(String, Complex64)],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (key, amp) in entries {
            map.serialize_entry(key, &[amp.re, amp.im])?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<(String, Complex64)>, D::Error> {
        struct EntryVisitor;

        impl<'de> Visitor<'de> for EntryVisitor {
            type Value = Vec<(String, Complex64)>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from bitstrings to [re, im] pairs")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(access.size_hint().unwrap_or(0));
                while let Some((key, [re, im])) = access.next_entry::<String, [f64; 2]>()? {
                    out.push((key, Complex64::new(re, im)));
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(EntryVisitor)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Rescale a nonzero input to unit norm instead of rejecting it.
    pub renormalize: bool,
}

/// Checks every key and the normalization of a raw spec.
pub fn validate(raw: RawStateSpec, options: ValidateOptions) -> Result<HwkStateSpec> {
    let RawStateSpec { n, k, entries } = raw;
    check_dimensions(n, k)?;
    let mut amplitudes = BTreeMap::new();
    for (key, amp) in entries {
        let parsed: BitString = key.parse().map_err(|err| match err {
            Error::InvalidN(_) => Error::WrongLength { key: key.clone(), len: key.len(), n },
            other => other,
        })?;
        if parsed.len() != n as usize {
            return Err(Error::WrongLength { len: parsed.len(), key, n });
        }
        if parsed.hamming_weight() != k {
            return Err(Error::WrongWeight { weight: parsed.hamming_weight(), key, k });
        }
        if amplitudes.insert(parsed, amp).is_some() {
            return Err(Error::DuplicateKey(key));
        }
    }
    let norm_sq: f64 = amplitudes.values().map(|a: &Complex64| a.norm_sqr()).sum();
    if !norm_sq.is_finite() || norm_sq == 0.0 {
        return Err(Error::NotNormalized { norm_sq });
    }
    if options.renormalize {
        let scale = norm_sq.sqrt().recip();
        amplitudes.values_mut().for_each(|a| *a *= scale);
    } else if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(HwkStateSpec { n, k, amplitudes })
}

/// The Dicke state: uniform amplitude `1/√C(n,k)` on every weight-`k` string.
pub fn dicke(n: u32, k: u32) -> Result<HwkStateSpec> {
    check_dimensions(n, k)?;
    let amp = Complex64::new((binomial(n, k) as f64).sqrt().recip(), 0.0);
    Ok(HwkStateSpec {
        n,
        k,
        amplitudes: weight_k_strings(n, k).map(|x| (x, amp)).collect(),
    })
}

/// A seeded random state with full support over all `C(n,k)` strings.
pub fn random_hwk(n: u32, k: u32, seed: u64) -> Result<HwkStateSpec> {
    random_hwk_sparse(n, k, seed, 0.0)
}

/// Like [`random_hwk`], then zeroes `⌊sparsity · C(n,k)⌋` seeded entries
/// (always leaving at least one nonzero) before normalizing.
///
/// Real and imaginary parts are independent standard normals.
pub fn random_hwk_sparse(n: u32, k: u32, seed: u64, sparsity: f64) -> Result<HwkStateSpec> {
    check_dimensions(n, k)?;
    let sparsity = sparsity.clamp(0.0, 1.0);
    let keys: Vec<BitString> = weight_k_strings(n, k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAW_ATTEMPTS {
        let mut amps: Vec<Complex64> = keys
            .iter()
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let zeroed = ((sparsity * keys.len() as f64).floor() as usize).min(keys.len() - 1);
        for idx in index::sample(&mut rng, keys.len(), zeroed) {
            amps[idx] = Complex64::default();
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq > 0.0 && norm_sq.is_finite() {
            let scale = norm_sq.sqrt().recip();
            return Ok(HwkStateSpec {
                n,
                k,
                amplitudes: keys.iter().copied().zip(amps.into_iter().map(|a| a * scale)).collect(),
            });
        }
    }
    Err(Error::DegenerateDraw(MAX_DRAW_ATTEMPTS))
}

/// `Σ |α_x|²` over weight-`k` strings ending in `suffix`, by direct summation.
///
/// This is the slow reference; synthesis uses per-node subtree weights.
pub fn suffix_weight(spec: &HwkStateSpec, suffix: &BitString) -> f64 {
    spec.amplitudes
        .iter()
        .filter(|(x, _)| x.ends_with(suffix))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
