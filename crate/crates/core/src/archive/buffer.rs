use std::collections::VecDeque;

use super::BehaviorVector;

/// Queue of the most recent behaviors used to place the boundaries.
///
/// `capacity == None` keeps every sample ever offered.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    capacity: Option<usize>,
    samples: VecDeque<BehaviorVector>,
}

impl SampleBuffer {
    pub fn new(capacity: Option<usize>) -> Self {
        SampleBuffer {
            capacity,
            samples: VecDeque::new(),
        }
    }

    pub fn unbounded() -> Self {
        Self::new(None)
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    /// Appends a sample, evicting the oldest one when full.
    pub fn push(&mut self, sample: BehaviorVector) {
        if let Some(cap) = self.capacity {
            if cap == 0 {
                return;
            }
            while self.samples.len() >= cap {
                self.samples.pop_front();
            }
        }
        self.samples.push_back(sample);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BehaviorVector> {
        self.samples.iter()
    }

    /// Samples in insertion order, oldest first.
    pub fn to_vec(&self) -> Vec<BehaviorVector> {
        self.samples.iter().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: f64) -> BehaviorVector {
        BehaviorVector::new(vec![v])
    }

    #[test]
    fn finite_capacity_evicts_oldest_first() {
        let mut buf = SampleBuffer::new(Some(3));
        for v in 0..5 {
            buf.push(b(v as f64));
        }
        let kept: Vec<f64> = buf.iter().map(|s| s.values()[0]).collect();
        assert_eq!(kept, vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn unbounded_keeps_everything_in_order() {
        let mut buf = SampleBuffer::unbounded();
        for v in 0..100 {
            buf.push(b(v as f64));
        }
        assert_eq!(buf.len(), 100);
        assert!(buf.iter().enumerate().all(|(i, s)| s.values()[0] == i as f64));
    }
}
