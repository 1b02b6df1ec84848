use std::fmt;

use crate::error::{Error, Result};

/// Which block of a bipartition an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// A two-block split of the parties `{0, …, n-1}`.
///
/// Both blocks are kept sorted. The split is canonical when `block_a`
/// holds party 0; non-canonical splits are allowed (they simply put the
/// other block on the row side of [`crate::regroup`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    block_a: Vec<usize>,
    block_b: Vec<usize>,
}

impl Bipartition {
    /// Build a bipartition of `n_parties` parties from the two blocks.
    pub fn new(n_parties: usize, block_a: &[usize], block_b: &[usize]) -> Result<Self> {
        let mut a = block_a.to_vec();
        let mut b = block_b.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a.is_empty() || b.is_empty() {
            return Err(Error::Shape("both blocks of a bipartition must be nonempty".into()));
        }
        let mut seen = vec![false; n_parties];
        for &p in a.iter().chain(&b) {
            if p >= n_parties {
                return Err(Error::Shape(format!("party {p} out of range for {n_parties} parties")));
            }
            if seen[p] {
                return Err(Error::Shape(format!("party {p} appears twice")));
            }
            seen[p] = true;
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::Shape(format!("party {p} missing from bipartition")));
        }
        Ok(Self { block_a: a, block_b: b })
    }

    /// The bipartition with `block` on side A and every other party on side B.
    pub fn from_block(n_parties: usize, block: &[usize]) -> Result<Self> {
        let rest: Vec<usize> = (0..n_parties).filter(|p| !block.contains(p)).collect();
        Self::new(n_parties, block, &rest)
    }

    pub fn block_a(&self) -> &[usize] {
        &self.block_a
    }

    pub fn block_b(&self) -> &[usize] {
        &self.block_b
    }

    pub fn block(&self, side: Side) -> &[usize] {
        match side {
            Side::A => &self.block_a,
            Side::B => &self.block_b,
        }
    }

    pub fn n_parties(&self) -> usize {
        self.block_a.len() + self.block_b.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.block_a.first() == Some(&0)
    }

    /// Same split with party 0 on side A.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn swapped(&self) -> Self {
        Self { block_a: self.block_b.clone(), block_b: self.block_a.clone() }
    }

    /// Size of the smaller block.
    pub fn min_block(&self) -> usize {
        self.block_a.len().min(self.block_b.len())
    }

    /// Grouped dimension of one side, given per-party dimensions.
    pub fn side_dim(&self, dims: &[usize], side: Side) -> usize {
        self.block(side).iter().map(|&p| dims[p]).product()
    }

    /// Parse `"0,1|2,3"`.
    pub fn parse(spec: &str, n_parties: usize) -> Result<Self> {
        let (left, right) = spec
            .split_once('|')
            .ok_or_else(|| Error::Shape(format!("expected `a,b|c,d`, got {spec:?}")))?;
        if right.contains('|') {
            return Err(Error::Shape(format!("more than two blocks in {spec:?}")));
        }
        let parse_block = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Shape(format!("bad party index {t:?} in {spec:?}")))
                })
                .collect()
        };
        Self::new(n_parties, &parse_block(left)?, &parse_block(right)?)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |b: &[usize]| b.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.block_a), join(&self.block_b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_blocks() {
        assert!(Bipartition::new(3, &[0], &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1], &[1, 2]).is_err());
        assert!(Bipartition::new(3, &[0], &[2]).is_err());
        assert!(Bipartition::new(3, &[0], &[1, 3]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let b = Bipartition::parse("2, 0|1", 3).unwrap();
        assert_eq!(b.block_a(), &[0, 2]);
        assert_eq!(b.to_string(), "0,2|1");
        assert!(b.is_canonical());
        let s = Bipartition::parse("1|0,2", 3).unwrap();
        assert!(!s.is_canonical());
        assert_eq!(s.canonical(), b);
        assert!(Bipartition::parse("0,1", 3).is_err());
        assert!(Bipartition::parse("0|1|2", 3).is_err());
        assert!(Bipartition::parse("0|x,2", 3).is_err());
    }
}
