use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Fixed-capacity FIFO store; pushing into a full buffer evicts the oldest item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayBuffer<T> {
    capacity: usize,
    items: VecDeque<T>,
}

impl<T> ReplayBuffer<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        ReplayBuffer {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, item: T) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(item);
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = T>) {
        for item in items {
            self.push(item);
        }
    }

    /// Item `i`, counting from the oldest.
    pub fn get(&self, i: usize) -> Option<&T> {
        self.items.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.items.iter()
    }

    /// `count` distinct positions drawn uniformly (fewer if the buffer is smaller).
    pub fn sample_indices<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<usize> {
        let count = count.min(self.items.len());
        rand::seq::index::sample(rng, self.items.len(), count).into_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evicts_oldest_first() {
        let mut buf = ReplayBuffer::new(3);
        buf.extend(0..5);
        assert_eq!(buf.len(), 3);
        assert_eq!(buf.iter().copied().collect::<Vec<_>>(), vec![2, 3, 4]);
    }

    #[test]
    fn samples_are_distinct() {
        let mut buf = ReplayBuffer::new(10);
        buf.extend(0..10);
        let mut idx = buf.sample_indices(&mut ChaCha8Rng::seed_from_u64(1), 6);
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 6);
        assert_eq!(buf.sample_indices(&mut ChaCha8Rng::seed_from_u64(1), 50).len(), 10);
    }
}
