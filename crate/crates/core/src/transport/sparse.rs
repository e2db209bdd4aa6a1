use serde::Serialize;

/// Gaps of at least this many exact zeros split a run.
const SPLIT_GAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Run {
    pub start: usize,
    pub values: Vec<f64>,
}

impl Run {
    pub fn end(&self) -> usize {
        self.start + self.values.len()
    }
}

/// A row of `len` samples stored as runs of values separated by exact zeros.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SparseRow {
    len: usize,
    runs: Vec<Run>,
}

impl SparseRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            runs: Vec::new(),
        }
    }

    /// Compress `dense[lo..hi]`; entries outside that range must be zero.
    pub fn from_dense_range(dense: &[f64], lo: usize, hi: usize) -> Self {
        let mut runs = Vec::new();
        let mut i = lo;
        let hi = hi.min(dense.len());
        while i < hi {
            if dense[i] == 0.0 {
                i += 1;
                continue;
            }
            let start = i;
            let mut last_nonzero = i;
            let mut j = i + 1;
            while j < hi && j - last_nonzero <= SPLIT_GAP {
                if dense[j] != 0.0 {
                    last_nonzero = j;
                }
                j += 1;
            }
            runs.push(Run {
                start,
                values: dense[start..=last_nonzero].to_vec(),
            });
            i = last_nonzero + 1;
        }
        Self {
            len: dense.len(),
            runs,
        }
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        Self::from_dense_range(dense, 0, dense.len())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Index range `[lo, hi)` containing every nonzero, if any.
    pub fn hull(&self) -> Option<(usize, usize)> {
        Some((self.runs.first()?.start, self.runs.last()?.end()))
    }

    pub fn get(&self, i: usize) -> f64 {
        let k = self.runs.partition_point(|r| r.end() <= i);
        match self.runs.get(k) {
            Some(r) if r.start <= i => r.values[i - r.start],
            _ => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.runs
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.runs
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0, |m, v| m.min(*v))
    }

    pub fn max(&self) -> f64 {
        self.runs
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0, |m, v| m.max(*v))
    }

    /// Write into a zeroed dense buffer.
    pub fn scatter(&self, dense: &mut [f64]) {
        for r in &self.runs {
            dense[r.start..r.end()].copy_from_slice(&r.values);
        }
    }

    /// Zero the positions this row occupies in `dense`.
    pub fn clear_in(&self, dense: &mut [f64]) {
        for r in &self.runs {
            dense[r.start..r.end()].iter_mut().for_each(|v| *v = 0.0);
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.len];
        self.scatter(&mut d);
        d
    }

    pub fn sum_squares(&self) -> f64 {
        self.runs
            .iter()
            .flat_map(|r| r.values.iter())
            .map(|v| v * v)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_split() {
        let mut d = vec![0.0; 100];
        d[3] = 1.0;
        d[5] = 2.0;
        d[40] = -1.0;
        d[41] = 0.5;
        let s = SparseRow::from_dense(&d);
        assert_eq!(s.runs().len(), 2);
        assert_eq!(s.to_dense(), d);
        assert_eq!(s.get(4), 0.0);
        assert_eq!(s.get(5), 2.0);
        assert_eq!(s.get(99), 0.0);
        assert_eq!(s.hull(), Some((3, 42)));
        assert_eq!(s.max_abs(), 2.0);
        assert_eq!(s.min(), -1.0);
    }

    #[test]
    fn empty_row() {
        let s = SparseRow::from_dense(&[0.0; 10]);
        assert!(s.is_empty());
        assert_eq!(s.hull(), None);
        assert_eq!(s.get(3), 0.0);
    }
}
