//! Multipartite index bookkeeping.
//!
//! Composite basis indices are mixed-radix numbers with subsystem 1 as the
//! most significant digit: for dims `(d_1, ..., d_N)` the basis state
//! `|i_1 i_2 ... i_N⟩` sits at `Σ_k i_k · Π_{j>k} d_j`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the total Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_DIM_CAP`].
pub const DIM_CAP_ENV: &str = "GME_DIM_CAP";

/// Maximum number of subsystems; subsets are stored as `u32` masks.
pub const MAX_PARTIES: usize = 24;

/// Active total-dimension cap, read once from `GME_DIM_CAP` (falls back to 4096).
pub fn dim_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DIM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_DIM_CAP)
    })
}

/// Local dimensions of an N-partite system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemShape {
    dims: Vec<usize>,
    total: usize,
}

impl SystemShape {
    /// Validates `dims` against the active dimension cap.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, dim_cap())
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("system needs at least one subsystem".into()));
        }
        if dims.len() > MAX_PARTIES {
            return Err(Error::Shape(format!(
                "{} subsystems exceeds the supported maximum of {MAX_PARTIES}",
                dims.len()
            )));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Shape(format!("local dimension {d} < 2")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total.saturating_mul(d);
            if total > cap {
                return Err(Error::Size {
                    requested: total,
                    cap,
                });
            }
        }
        Ok(Self { dims, total })
    }

    /// `n` subsystems of equal dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Common local dimension, if every subsystem has the same one.
    pub fn homogeneous_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    /// Place value of each subsystem's digit in the composite index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Digits `(i_1, ..., i_N)` of a composite index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn compose(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Product of local dimensions over the parties in `bits`.
    pub fn dim_of(&self, bits: u32) -> usize {
        self.dims
            .iter()
            .enumerate()
            .filter(|(k, _)| bits & (1 << k) != 0)
            .map(|(_, &d)| d)
            .product()
    }

    /// Shape of the subsystems selected by `bits`, in their original order.
    pub fn restrict(&self, bits: u32) -> Result<Self> {
        let dims: Vec<usize> = self
            .dims
            .iter()
            .enumerate()
            .filter(|(k, _)| bits & (1 << k) != 0)
            .map(|(_, &d)| d)
            .collect();
        Self::with_cap(dims, usize::MAX)
    }

    /// Mask with every subsystem selected.
    pub fn full_bits(&self) -> u32 {
        if self.dims.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.dims.len()) - 1
        }
    }

    /// Every nonempty proper subset, in ascending bitmask order.
    pub fn cuts(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        let n = self.parties();
        (1..self.full_bits()).map(move |bits| SubsetMask { bits, parties: n })
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn format_set(bits: u32, parties: usize) -> String {
    let members: Vec<String> = (0..parties)
        .filter(|k| bits & (1 << k) != 0)
        .map(|k| (k + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// A nonempty proper subset α of the subsystems, i.e. one side of a cut α|ᾱ.
///
/// Bit `k` selects subsystem `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    parties: usize,
}

impl SubsetMask {
    pub fn new(bits: u32, parties: usize) -> Result<Self> {
        if !(2..=MAX_PARTIES).contains(&parties) {
            return Err(Error::Shape(format!(
                "a cut needs 2..={MAX_PARTIES} subsystems, got {parties}"
            )));
        }
        let full = (1u32 << parties) - 1;
        if bits == 0 || bits & !full != 0 || bits == full {
            return Err(Error::Shape(format!(
                "mask {bits:#b} is not a nonempty proper subset of {parties} subsystems"
            )));
        }
        Ok(Self { bits, parties })
    }

    /// Builds a mask from 1-based subsystem labels.
    pub fn from_parties(members: &[usize], parties: usize) -> Result<Self> {
        Self::new(labels_to_bits(members, parties)?, parties)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, party: usize) -> bool {
        party < self.parties && self.bits & (1 << party) != 0
    }

    /// 0-based indices of the selected subsystems.
    pub fn members(&self) -> Vec<usize> {
        (0..self.parties).filter(|&k| self.contains(k)).collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & ((1u32 << self.parties) - 1),
            parties: self.parties,
        }
    }

    /// Errors unless the mask was built for a system with the shape's subsystem count.
    pub fn check(&self, shape: &SystemShape) -> Result<()> {
        if self.parties != shape.parties() {
            return Err(Error::Shape(format!(
                "mask over {} subsystems applied to a {}-partite system",
                self.parties,
                shape.parties()
            )));
        }
        Ok(())
    }

    /// Cut label such as `{1}|{2,3}`.
    pub fn cut_label(&self) -> String {
        format!(
            "{}|{}",
            format_set(self.bits, self.parties),
            format_set(self.complement().bits, self.parties)
        )
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(self.bits, self.parties))
    }
}

/// A nonempty subset of subsystems that may include all of them.
///
/// Used for correlation-tensor positions, where the full set is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartySet {
    bits: u32,
    parties: usize,
}

impl PartySet {
    pub fn new(bits: u32, parties: usize) -> Result<Self> {
        if parties == 0 || parties > MAX_PARTIES {
            return Err(Error::Shape(format!(
                "party set needs 1..={MAX_PARTIES} subsystems, got {parties}"
            )));
        }
        let full = (1u32 << parties) - 1;
        if bits == 0 || bits & !full != 0 {
            return Err(Error::Shape(format!(
                "mask {bits:#b} is not a nonempty subset of {parties} subsystems"
            )));
        }
        Ok(Self { bits, parties })
    }

    pub fn from_parties(members: &[usize], parties: usize) -> Result<Self> {
        Self::new(labels_to_bits(members, parties)?, parties)
    }

    pub fn full(parties: usize) -> Result<Self> {
        if parties == 0 || parties > MAX_PARTIES {
            return Err(Error::Shape(format!("invalid party count {parties}")));
        }
        Self::new((1u32 << parties) - 1, parties)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.parties)
            .filter(|&k| self.bits & (1 << k) != 0)
            .collect()
    }

    /// All nonempty subsets of this set, ascending by mask.
    pub fn nonempty_subsets(&self) -> impl Iterator<Item = PartySet> + '_ {
        let bits = self.bits;
        let parties = self.parties;
        // Enumerate submasks of `bits` in increasing numeric order.
        (1..=bits)
            .filter(move |s| s & !bits == 0)
            .map(move |s| PartySet { bits: s, parties })
    }

    pub fn check(&self, shape: &SystemShape) -> Result<()> {
        if self.parties != shape.parties() {
            return Err(Error::Shape(format!(
                "party set over {} subsystems applied to a {}-partite system",
                self.parties,
                shape.parties()
            )));
        }
        Ok(())
    }
}

impl From<SubsetMask> for PartySet {
    fn from(m: SubsetMask) -> Self {
        PartySet {
            bits: m.bits,
            parties: m.parties,
        }
    }
}

impl fmt::Display for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(self.bits, self.parties))
    }
}

fn labels_to_bits(members: &[usize], parties: usize) -> Result<u32> {
    let mut bits = 0u32;
    for &m in members {
        if m == 0 || m > parties || m > MAX_PARTIES {
            return Err(Error::Shape(format!(
                "subsystem label {m} outside 1..={parties}"
            )));
        }
        bits |= 1 << (m - 1);
    }
    Ok(bits)
}
