//! Strict partitions and their enumeration.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Strictly decreasing positive parts; empty for the partition of 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StrictPartition(Vec<u32>);

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let ok = parts.last().is_none_or(|&p| p > 0) && parts.windows(2).all(|w| w[0] > w[1]);
        if !ok {
            return Err(Error::NotStrict(alloc::format!("{parts:?}")));
        }
        Ok(Self(parts))
    }

    /// Sorts distinct parts into decreasing order first.
    pub fn from_set(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, part: u32) -> bool {
        self.0.binary_search_by(|p| part.cmp(p)).is_ok()
    }

    /// Every strict partition with parts at most `max_part` and at most
    /// `max_len` parts, in lexicographic order of the part lists.
    pub fn bounded(max_part: u32, max_len: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(top: u32, max_len: usize, stack: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
            out.push(StrictPartition(stack.clone()));
            if stack.len() == max_len {
                return;
            }
            for p in (1..=top).rev() {
                stack.push(p);
                rec(p - 1, max_len, stack, out);
                stack.pop();
            }
        }
        rec(max_part, max_len, &mut stack, &mut out);
        out.sort();
        out
    }

    /// Strict partitions of exactly `n`.
    pub fn of_weight(n: u32) -> Vec<Self> {
        let mut out = Vec::new();
        fn rec(rest: u32, top: u32, stack: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
            if rest == 0 {
                out.push(StrictPartition(stack.clone()));
                return;
            }
            for p in (1..=top.min(rest)).rev() {
                stack.push(p);
                rec(rest - p, p - 1, stack, out);
                stack.pop();
            }
        }
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Strict partitions of weight at most `n`, by increasing weight.
    pub fn up_to_weight(n: u32) -> Vec<Self> {
        (0..=n).flat_map(Self::of_weight).collect()
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for StrictPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<core::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::NotStrict(String::from(s)))?;
        Self::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(StrictPartition::new(alloc::vec![3, 1]).is_ok());
        assert!(StrictPartition::new(alloc::vec![2, 2]).is_err());
        assert!(StrictPartition::new(alloc::vec![1, 0]).is_err());
        assert!(StrictPartition::new(alloc::vec![1, 3]).is_err());
        assert_eq!("3,2,1".parse::<StrictPartition>().unwrap().weight(), 6);
        assert_eq!(
            "".parse::<StrictPartition>().unwrap(),
            StrictPartition::empty()
        );
        assert_eq!(
            alloc::format!("{}", StrictPartition::from_set(alloc::vec![1, 4]).unwrap()),
            "(4,1)"
        );
    }

    #[test]
    fn counts() {
        // strict partitions of n: 1,1,1,2,2,3,4,5,6,8,10
        let counts: Vec<usize> = (0..=10)
            .map(|n| StrictPartition::of_weight(n).len())
            .collect();
        assert_eq!(counts, [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10]);
        // subsets of {1..5}
        assert_eq!(StrictPartition::bounded(5, 5).len(), 32);
        // 1 + 10 + C(10,2)
        assert_eq!(StrictPartition::bounded(10, 2).len(), 56);
        assert!(StrictPartition::new(alloc::vec![5, 3]).unwrap().contains(3));
        assert!(!StrictPartition::new(alloc::vec![5, 3]).unwrap().contains(4));
    }
}
