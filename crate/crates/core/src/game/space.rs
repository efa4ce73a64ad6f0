use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest joint-profile space any game in this crate will enumerate.
pub const PROFILE_LIMIT: usize = 1_000_000;

/// Mixed-radix indexing of joint action profiles. Player 0 is the most
/// significant digit, so index order is lexicographic profile order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSpace {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl ProfileSpace {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidGame("empty action set".into()));
        }
        let mut len: usize = 1;
        for &s in &sizes {
            len = len
                .checked_mul(s)
                .filter(|&n| n <= PROFILE_LIMIT)
                .ok_or(Error::OracleScaleExceeded(u128::MAX, PROFILE_LIMIT as u128))?;
        }
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(Self { sizes, strides, len })
    }

    pub fn players(&self) -> usize {
        self.sizes.len()
    }

    pub fn actions(&self, player: usize) -> usize {
        self.sizes[player]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn encode(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.sizes.len());
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        self.sizes.iter().zip(&self.strides).map(|(&n, &s)| (index / s) % n).collect()
    }

    pub fn action_of(&self, index: usize, player: usize) -> usize {
        (index / self.strides[player]) % self.sizes[player]
    }

    /// Index of the profile where `player` switches to `action`.
    pub fn deviate(&self, index: usize, player: usize, action: usize) -> usize {
        let current = self.action_of(index, player);
        index - current * self.strides[player] + action * self.strides[player]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lexicographic_order() {
        let s = ProfileSpace::new(vec![2, 3]).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.decode(0), vec![0, 0]);
        assert_eq!(s.decode(1), vec![0, 1]);
        assert_eq!(s.decode(3), vec![1, 0]);
        assert_eq!(s.deviate(4, 0, 0), 1);
    }

    #[test]
    fn guards() {
        assert!(ProfileSpace::new(vec![]).is_err());
        assert!(ProfileSpace::new(vec![2, 0]).is_err());
        assert!(ProfileSpace::new(vec![10; 7]).is_err());
        assert!(ProfileSpace::new(vec![10; 6]).is_ok());
    }

    proptest! {
        #[test]
        fn encode_inverts_decode(sizes in prop::collection::vec(1usize..5, 1..5), seed in 0usize..10_000) {
            let s = ProfileSpace::new(sizes).unwrap();
            let idx = seed % s.len();
            prop_assert_eq!(s.encode(&s.decode(idx)), idx);
        }
    }
}
