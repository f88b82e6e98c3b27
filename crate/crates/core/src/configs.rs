//! The edge-pattern alphabet inside a single block and across a single gap.
//!
//! A minimum-length tour restricted to one block always looks like one of
//! six patterns: a single traversal straight through, a return trip from the
//! top, a return trip from the bottom, two return trips that leave the
//! largest stretch between pick points unvisited, a double traversal, or
//! nothing at all. Between two adjacent intersections on a cross-aisle the
//! tour uses zero, one, or two parallel edges. These patterns are the
//! alphabet both the sweep solver and the brute forcer enumerate.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::Length;

/// Pattern of vertical edges within one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerticalConfig {
    /// One edge on every segment; connects the block's two ends.
    SingleTraversal,
    /// Doubled edges from the top end down to the lowest item.
    TopReturn,
    /// Doubled edges from the bottom end up to the highest item.
    BottomReturn,
    /// Doubled edges from both ends, skipping the largest stretch between
    /// consecutive covered points.
    LargestGap,
    /// Two edges on every segment; connects the ends with even parity.
    DoubleTraversal,
    /// No edges. Only valid when the block holds no items.
    None,
}

impl VerticalConfig {
    /// All six patterns in canonical order.
    pub const ALL: [VerticalConfig; 6] = [
        VerticalConfig::SingleTraversal,
        VerticalConfig::TopReturn,
        VerticalConfig::BottomReturn,
        VerticalConfig::LargestGap,
        VerticalConfig::DoubleTraversal,
        VerticalConfig::None,
    ];
}

impl fmt::Display for VerticalConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            VerticalConfig::SingleTraversal => "single",
            VerticalConfig::TopReturn => "top-return",
            VerticalConfig::BottomReturn => "bottom-return",
            VerticalConfig::LargestGap => "largest-gap",
            VerticalConfig::DoubleTraversal => "double",
            VerticalConfig::None => "none",
        };
        f.write_str(name)
    }
}

/// Multiplicity of the cross-aisle edge between two adjacent intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HorizontalConfig {
    None,
    Single,
    Double,
}

impl HorizontalConfig {
    pub const ALL: [HorizontalConfig; 3] = [
        HorizontalConfig::None,
        HorizontalConfig::Single,
        HorizontalConfig::Double,
    ];

    pub fn multiplicity(self) -> u32 {
        match self {
            HorizontalConfig::None => 0,
            HorizontalConfig::Single => 1,
            HorizontalConfig::Double => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One block of one aisle: its length and the distinct item offsets inside
/// it, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subaisle {
    length: Length,
    offsets: Vec<Length>,
}

impl Subaisle {
    /// Offsets are sorted and deduplicated; each must be strictly interior.
    pub fn new(length: Length, mut offsets: Vec<Length>) -> Result<Self, ConfigError> {
        offsets.sort_unstable();
        offsets.dedup();
        if let Some(&o) = offsets.iter().find(|&&o| o == 0 || o >= length) {
            return Err(ConfigError::OffsetOutOfRange { offset: o, length });
        }
        Ok(Subaisle { length, offsets })
    }

    pub fn length(&self) -> Length {
        self.length
    }

    pub fn offsets(&self) -> &[Length] {
        &self.offsets
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Segment count (= items + 1).
    pub fn segments(&self) -> usize {
        self.offsets.len() + 1
    }
}

/// Concrete realization of a configuration: per-segment multiplicities plus
/// the facts the sweep solver needs about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEffect {
    pub length: Length,
    /// Degree parity contributed to the (top, bottom) end vertices.
    pub parity_top: Parity,
    pub parity_bottom: Parity,
    /// Whether the two end vertices are connected through this block alone.
    pub connects_ends: bool,
    /// Edge multiplicity per segment, bottom to top.
    pub segment_multiplicities: Vec<u32>,
}

impl ConfigEffect {
    /// Edges touch the bottom end vertex.
    pub fn attaches_bottom(&self) -> bool {
        self.segment_multiplicities.first().is_some_and(|&m| m > 0)
    }

    /// Edges touch the top end vertex.
    pub fn attaches_top(&self) -> bool {
        self.segment_multiplicities.last().is_some_and(|&m| m > 0)
    }

    pub fn is_empty(&self) -> bool {
        self.segment_multiplicities.iter().all(|&m| m == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    OffsetOutOfRange { offset: Length, length: Length },
    /// `VerticalConfig::None` on a block that still holds items.
    ItemsNotCovered,
    /// `LargestGap` degenerates on an empty block; it is canonicalized away.
    GapOnEmptyBlock,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::OffsetOutOfRange { offset, length } => {
                write!(f, "offset {offset} not interior to a block of length {length}")
            }
            ConfigError::ItemsNotCovered => write!(f, "empty configuration on a block with items"),
            ConfigError::GapOnEmptyBlock => {
                write!(f, "largest-gap configuration on a block without items")
            }
        }
    }
}

impl core::error::Error for ConfigError {}

/// Realizes `config` on `subaisle` with minimum length.
///
/// Lengths, with `d` the block length and offsets `o_1 < .. < o_t`:
/// single `d`; top return `2 * (d - o_1)`; bottom return `2 * o_t`;
/// largest gap `2 * lo + 2 * (d - hi)` where `(lo, hi)` bounds the widest
/// stretch between consecutive covered points (ties go to the topmost);
/// double `2 * d`; none `0`. Returns from an empty block reach nothing and
/// cost zero.
pub fn vertical_config_effect(
    subaisle: &Subaisle,
    config: VerticalConfig,
) -> Result<ConfigEffect, ConfigError> {
    let segs = subaisle.segments();
    let d = subaisle.length();
    let offsets = subaisle.offsets();
    let effect = match config {
        VerticalConfig::SingleTraversal => ConfigEffect {
            length: d,
            parity_top: Parity::Odd,
            parity_bottom: Parity::Odd,
            connects_ends: true,
            segment_multiplicities: vec![1; segs],
        },
        VerticalConfig::TopReturn => {
            let mut mult = vec![0; segs];
            let mut length = 0;
            if let Some(&lowest) = offsets.first() {
                for m in mult.iter_mut().skip(1) {
                    *m = 2;
                }
                length = 2 * (d - lowest);
            }
            ConfigEffect {
                length,
                parity_top: Parity::Even,
                parity_bottom: Parity::Even,
                connects_ends: false,
                segment_multiplicities: mult,
            }
        }
        VerticalConfig::BottomReturn => {
            let mut mult = vec![0; segs];
            let mut length = 0;
            if let Some(&highest) = offsets.last() {
                for m in mult.iter_mut().take(segs - 1) {
                    *m = 2;
                }
                length = 2 * highest;
            }
            ConfigEffect {
                length,
                parity_top: Parity::Even,
                parity_bottom: Parity::Even,
                connects_ends: false,
                segment_multiplicities: mult,
            }
        }
        VerticalConfig::LargestGap => {
            if subaisle.is_empty() {
                return Err(ConfigError::GapOnEmptyBlock);
            }
            // Covered points, including both cross-aisle ends.
            let mut points = Vec::with_capacity(segs + 1);
            points.push(0);
            points.extend_from_slice(offsets);
            points.push(d);
            let mut best = 0usize;
            let mut best_size = 0;
            for g in 0..segs {
                let size = points[g + 1] - points[g];
                // Ties go to the topmost stretch.
                if size >= best_size {
                    best_size = size;
                    best = g;
                }
            }
            let mut mult = vec![2; segs];
            mult[best] = 0;
            ConfigEffect {
                length: 2 * points[best] + 2 * (d - points[best + 1]),
                parity_top: Parity::Even,
                parity_bottom: Parity::Even,
                connects_ends: false,
                segment_multiplicities: mult,
            }
        }
        VerticalConfig::DoubleTraversal => ConfigEffect {
            length: 2 * d,
            parity_top: Parity::Even,
            parity_bottom: Parity::Even,
            connects_ends: true,
            segment_multiplicities: vec![2; segs],
        },
        VerticalConfig::None => {
            if !subaisle.is_empty() {
                return Err(ConfigError::ItemsNotCovered);
            }
            ConfigEffect {
                length: 0,
                parity_top: Parity::Even,
                parity_bottom: Parity::Even,
                connects_ends: false,
                segment_multiplicities: vec![0; segs],
            }
        }
    };
    Ok(effect)
}

/// All valid configurations for a block, in canonical order, after
/// canonicalization: on an empty block the zero-length returns collapse
/// into `None` and `LargestGap` is dropped.
pub fn enumerate_vertical_configs(subaisle: &Subaisle) -> Vec<(VerticalConfig, ConfigEffect)> {
    let mut out = Vec::new();
    for config in VerticalConfig::ALL {
        if subaisle.is_empty() {
            match config {
                VerticalConfig::TopReturn
                | VerticalConfig::BottomReturn
                | VerticalConfig::LargestGap => continue,
                _ => {}
            }
        }
        match vertical_config_effect(subaisle, config) {
            Ok(effect) => out.push((config, effect)),
            Err(_) => continue,
        }
    }
    out
}

/// Realizes a horizontal configuration on a gap segment of width `g`.
/// The parity pair is reported as (left end, right end).
pub fn horizontal_config_effect(gap_width: Length, config: HorizontalConfig) -> ConfigEffect {
    let mult = config.multiplicity();
    let parity = if mult % 2 == 1 {
        Parity::Odd
    } else {
        Parity::Even
    };
    ConfigEffect {
        length: gap_width * mult as Length,
        parity_top: parity,
        parity_bottom: parity,
        connects_ends: mult > 0,
        segment_multiplicities: vec![mult],
    }
}
