//! Mid-rank assignment shared by the rank tests.

/// Tie bookkeeping collected while ranking: how many values share their rank
/// with at least one other, and the variance-deflation term `sum(t^3 - t)`
/// over tie groups.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TieSummary {
    pub tied_values: usize,
    pub correction: f64,
}

impl TieSummary {
    pub fn has_ties(&self) -> bool {
        self.tied_values > 0
    }
}

/// 1-based ranks in input order, tied values receiving the mean of the ranks
/// they occupy.
pub fn midranks(values: &[f64]) -> (Vec<f64>, TieSummary) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; n];
    let mut summary = TieSummary::default();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let group = j - i;
        // ranks i+1 ..= j averaged
        let rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        if group > 1 {
            summary.tied_values += group;
            let t = group as f64;
            summary.correction += t * t * t - t;
        }
        i = j;
    }
    (ranks, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_without_ties() {
        let (ranks, ties) = midranks(&[3.0, 1.0, 2.0]);
        assert_eq!(ranks, vec![3.0, 1.0, 2.0]);
        assert!(!ties.has_ties());
        assert_eq!(ties.correction, 0.0);
    }

    #[test]
    fn ranks_average_ties() {
        let (ranks, ties) = midranks(&[1.0, 3.0, 2.0, 3.0, 5.0]);
        assert_eq!(ranks, vec![1.0, 3.5, 2.0, 3.5, 5.0]);
        assert_eq!(ties.tied_values, 2);
        assert_eq!(ties.correction, 6.0); // 2^3 - 2
    }

    #[test]
    fn pooled_pairs_example() {
        let (ranks, _) = midranks(&[1.0, 2.0, 1.0, 2.0]);
        assert_eq!(ranks, vec![1.5, 3.5, 1.5, 3.5]);
    }
}
