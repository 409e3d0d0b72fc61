//! Minimum-cost edit alignment under unit costs.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// One step of an alignment. Indices point into the reference and hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditOp {
    Hit { reference: usize, hypothesis: usize },
    Substitution { reference: usize, hypothesis: usize },
    Deletion { reference: usize },
    Insertion { hypothesis: usize },
}

impl EditOp {
    pub fn reference_index(&self) -> Option<usize> {
        match *self {
            EditOp::Hit { reference, .. }
            | EditOp::Substitution { reference, .. }
            | EditOp::Deletion { reference } => Some(reference),
            EditOp::Insertion { .. } => None,
        }
    }

    pub fn hypothesis_index(&self) -> Option<usize> {
        match *self {
            EditOp::Hit { hypothesis, .. }
            | EditOp::Substitution { hypothesis, .. }
            | EditOp::Insertion { hypothesis } => Some(hypothesis),
            EditOp::Deletion { .. } => None,
        }
    }

    pub fn is_error(&self) -> bool {
        !matches!(self, EditOp::Hit { .. })
    }
}

/// Result of [`align`].
///
/// `hits + substitutions + deletions` equals the reference length and
/// `hits + substitutions + insertions` equals the hypothesis length.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alignment {
    pub hits: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ops: Vec<EditOp>,
}

impl Alignment {
    /// Substitutions + deletions + insertions.
    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Aligns `hypothesis` against `reference`.
///
/// The returned alignment has minimal total cost. Among optimal alignments
/// the one chosen is found by walking front to back and, at every step,
/// taking the first optimal move in the order match/substitution, deletion,
/// insertion. This prefers a substitution over a deletion+insertion pair and
/// otherwise consumes reference tokens first.
pub fn align<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Alignment {
    let n = reference.len();
    let m = hypothesis.len();
    let width = m + 1;
    // suffix[i * width + j]: cost of aligning reference[i..] with hypothesis[j..]
    let mut suffix = vec![0usize; (n + 1) * width];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let cost = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let diag = suffix[(i + 1) * width + j + 1]
                    + usize::from(reference[i] != hypothesis[j]);
                let del = suffix[(i + 1) * width + j] + 1;
                let ins = suffix[i * width + j + 1] + 1;
                diag.min(del).min(ins)
            };
            suffix[i * width + j] = cost;
        }
    }

    let mut out = Alignment {
        ops: Vec::with_capacity(n.max(m)),
        ..Alignment::default()
    };
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = suffix[i * width + j];
        if i < n && j < m {
            let same = reference[i] == hypothesis[j];
            if suffix[(i + 1) * width + j + 1] + usize::from(!same) == here {
                if same {
                    out.hits += 1;
                    out.ops.push(EditOp::Hit { reference: i, hypothesis: j });
                } else {
                    out.substitutions += 1;
                    out.ops.push(EditOp::Substitution { reference: i, hypothesis: j });
                }
                i += 1;
                j += 1;
                continue;
            }
        }
        if i < n && suffix[(i + 1) * width + j] + 1 == here {
            out.deletions += 1;
            out.ops.push(EditOp::Deletion { reference: i });
            i += 1;
        } else {
            out.insertions += 1;
            out.ops.push(EditOp::Insertion { hypothesis: j });
            j += 1;
        }
    }
    out
}

/// Plain Levenshtein distance with two rolling rows.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Character-level Levenshtein distance between two strings.
pub fn char_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_distance(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let a = align(&["a", "b", "c"], &["a", "b", "c"]);
        assert_eq!((a.substitutions, a.deletions, a.insertions, a.hits), (0, 0, 0, 3));
    }

    #[test]
    fn one_sub_one_ins() {
        let a = align(&["a", "b", "c"], &["a", "x", "c", "d"]);
        assert_eq!((a.substitutions, a.deletions, a.insertions), (1, 0, 1));
        assert_eq!(
            a.ops,
            vec![
                EditOp::Hit { reference: 0, hypothesis: 0 },
                EditOp::Substitution { reference: 1, hypothesis: 1 },
                EditOp::Hit { reference: 2, hypothesis: 2 },
                EditOp::Insertion { hypothesis: 3 },
            ]
        );
    }

    #[test]
    fn single_deletion() {
        let a = align(&["a"], &[] as &[&str]);
        assert_eq!((a.deletions, a.errors()), (1, 1));
    }

    #[test]
    fn substitution_preferred_over_del_ins() {
        let a = align(&["a"], &["b"]);
        assert_eq!(a.ops, vec![EditOp::Substitution { reference: 0, hypothesis: 0 }]);
    }

    #[test]
    fn reference_consumed_first_on_ties() {
        // [a, b] vs [b, a]: cost 2 either as two subs or del+ins; subs first.
        let a = align(&["a", "b"], &["b", "a"]);
        assert_eq!(a.substitutions, 2);
        // [x, a] vs [a]: the deletion comes before the hit.
        let a = align(&["x", "a"], &["a"]);
        assert_eq!(a.ops[0], EditOp::Deletion { reference: 0 });
    }

    #[test]
    fn chars() {
        assert_eq!(char_distance("convirt", "convert"), 1);
        assert_eq!(char_distance("", "abc"), 3);
        assert_eq!(char_distance("kitten", "sitting"), 3);
    }
}
