use core::fmt;

use serde::{Deserialize, Serialize};

/// Quality grade of one behavior dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Grade {
    Zero,
    Half,
    Full,
}

impl Grade {
    pub const ALL: [Grade; 3] = [Grade::Zero, Grade::Half, Grade::Full];

    pub fn value(self) -> f64 {
        match self {
            Grade::Zero => 0.0,
            Grade::Half => 0.5,
            Grade::Full => 1.0,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

pub const BEHAVIOR_COUNT: usize = 2 * 3 * 3 * 3;

/// One point of the discrete behavior grid the toy policy chooses from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BehaviorTuple {
    pub format_ok: bool,
    pub ocr: Grade,
    pub asr: Grade,
    pub anchor: Grade,
}

impl BehaviorTuple {
    /// Well-formed, exact OCR, exact transcription, every entity anchored.
    pub const OPTIMAL: BehaviorTuple = BehaviorTuple {
        format_ok: true,
        ocr: Grade::Full,
        asr: Grade::Full,
        anchor: Grade::Full,
    };

    pub fn index(&self) -> usize {
        ((usize::from(self.format_ok) * 3 + self.ocr.index()) * 3 + self.asr.index()) * 3
            + self.anchor.index()
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index >= BEHAVIOR_COUNT {
            return None;
        }
        let anchor = Grade::ALL[index % 3];
        let asr = Grade::ALL[(index / 3) % 3];
        let ocr = Grade::ALL[(index / 9) % 3];
        let format_ok = index / 27 == 1;
        Some(BehaviorTuple {
            format_ok,
            ocr,
            asr,
            anchor,
        })
    }

    /// All 54 tuples in index order.
    pub fn all() -> impl Iterator<Item = BehaviorTuple> {
        (0..BEHAVIOR_COUNT).filter_map(BehaviorTuple::from_index)
    }
}

impl fmt::Display for BehaviorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.format_ok,
            self.ocr.value(),
            self.asr.value(),
            self.anchor.value()
        )
    }
}
