//! Constrained Viterbi decoding.
//!
//! Transitions are hard constraints rather than learned scores: `I-X` may
//! only follow `B-X` or `I-X`, and may not open a sentence. Every decoded
//! sequence is therefore strict IOB2.

use alloc::vec;
use alloc::vec::Vec;

use crate::tag::Tag;

/// Whether `cur` may follow `prev` (`None` = sentence start).
pub fn transition_allowed(prev: Option<&Tag>, cur: &Tag) -> bool {
    match cur {
        Tag::Inside(ty) => prev.and_then(Tag::entity_type) == Some(ty.as_str()),
        Tag::Outside | Tag::Begin(_) => true,
    }
}

/// Precomputed constraint table over a label inventory.
#[derive(Debug, Clone)]
pub struct Constraints {
    start: Vec<bool>,
    // allowed[prev * n + cur]
    allowed: Vec<bool>,
    n: usize,
}

impl Constraints {
    pub fn new(labels: &[Tag]) -> Self {
        let n = labels.len();
        let start = labels.iter().map(|t| transition_allowed(None, t)).collect();
        let mut allowed = vec![false; n * n];
        for (p, prev) in labels.iter().enumerate() {
            for (c, cur) in labels.iter().enumerate() {
                allowed[p * n + c] = transition_allowed(Some(prev), cur);
            }
        }
        Constraints { start, allowed, n }
    }

    pub fn allowed(&self, prev: usize, cur: usize) -> bool {
        self.allowed[prev * self.n + cur]
    }
}

/// Best label-id path under per-position scores (`scores[i][label]`).
///
/// Ties go to the smaller label id, both for the final label and for each
/// back-pointer, so an all-zero score table decodes to label 0 everywhere.
pub fn viterbi(scores: &[Vec<f64>], constraints: &Constraints) -> Vec<usize> {
    let n = constraints.n;
    if scores.is_empty() || n == 0 {
        return Vec::new();
    }
    let len = scores.len();
    let mut best = vec![f64::NEG_INFINITY; n];
    for (j, b) in best.iter_mut().enumerate() {
        if constraints.start[j] {
            *b = scores[0][j];
        }
    }
    let mut back = vec![vec![0usize; n]; len];
    let mut next = vec![f64::NEG_INFINITY; n];
    for i in 1..len {
        for j in 0..n {
            let mut arg = None;
            let mut top = f64::NEG_INFINITY;
            for (k, &b) in best.iter().enumerate() {
                if b == f64::NEG_INFINITY || !constraints.allowed(k, j) {
                    continue;
                }
                if arg.is_none() || b > top {
                    top = b;
                    arg = Some(k);
                }
            }
            match arg {
                Some(k) => {
                    next[j] = top + scores[i][j];
                    back[i][j] = k;
                }
                None => next[j] = f64::NEG_INFINITY,
            }
        }
        core::mem::swap(&mut best, &mut next);
    }

    let mut last = 0;
    for j in 1..n {
        if best[j] > best[last] {
            last = j;
        }
    }
    let mut path = vec![0; len];
    path[len - 1] = last;
    for i in (1..len).rev() {
        path[i - 1] = back[i][path[i]];
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag::tags;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn labels() -> Vec<Tag> {
        tags(&["O", "B-A", "B-B", "I-A", "I-B"])
    }

    fn valid(path: &[usize], labels: &[Tag]) -> bool {
        path.iter().enumerate().all(|(i, &c)| {
            let prev = if i == 0 { None } else { Some(&labels[path[i - 1]]) };
            transition_allowed(prev, &labels[c])
        })
    }

    fn total(path: &[usize], scores: &[Vec<f64>]) -> f64 {
        path.iter().enumerate().map(|(i, &c)| scores[i][c]).sum()
    }

    /// Exhaustive search over every valid path.
    fn brute_force(scores: &[Vec<f64>], labels: &[Tag]) -> Vec<usize> {
        let n = labels.len();
        let len = scores.len();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for code in 0..n.pow(len as u32) {
            let mut c = code;
            let mut path = vec![0; len];
            for slot in path.iter_mut() {
                *slot = c % n;
                c /= n;
            }
            if !valid(&path, labels) {
                continue;
            }
            let s = total(&path, scores);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, path));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn single_step_argmax() {
        let l = labels();
        let c = Constraints::new(&l);
        assert_eq!(viterbi(&[vec![0.0, 0.0, 2.0, 0.0, 0.0]], &c), vec![2]);
    }

    #[test]
    fn zero_scores_decode_to_label_zero() {
        let l = labels();
        let c = Constraints::new(&l);
        assert_eq!(viterbi(&vec![vec![0.0; 5]; 4], &c), vec![0; 4]);
    }

    #[test]
    fn forbidden_o_then_inside() {
        let l = labels();
        let c = Constraints::new(&l);
        // per-position argmax would be O, I-A
        let scores = vec![vec![1.0, 0.6, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 2.0, 0.0]];
        let path = viterbi(&scores, &c);
        assert!(valid(&path, &l));
        assert_ne!(path, vec![0, 3]);
        // valid options: B-A I-A scores 2.6, beating O O (1.0) and O B-* (1.0)
        assert_eq!(path, brute_force(&scores, &l));
        assert_eq!(path, vec![1, 3]);
    }

    #[test]
    fn random_paths_are_valid_and_optimal() {
        let l = labels();
        let c = Constraints::new(&l);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for len in 1..=4 {
            for _ in 0..200 {
                let scores: Vec<Vec<f64>> = (0..len)
                    .map(|_| (0..5).map(|_| rng.random_range(-3.0..3.0)).collect())
                    .collect();
                let path = viterbi(&scores, &c);
                assert!(valid(&path, &l));
                assert_eq!(path, brute_force(&scores, &l));
            }
        }
    }
}
