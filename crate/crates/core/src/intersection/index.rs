use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical key (g, n, d) with d sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauIndex {
    g: u32,
    d: Vec<u32>,
}

pub(crate) fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 >= 1
}

impl TauIndex {
    /// Builds the canonical index, rejecting unstable (g, n).
    pub fn new(g: u32, d: impl Into<Vec<u32>>) -> Result<Self> {
        let mut d = d.into();
        if !is_stable(g, d.len()) {
            return Err(Error::domain(format!(
                "unstable index (g, n) = ({g}, {}): need 2g - 2 + n >= 1",
                d.len()
            )));
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        Ok(TauIndex { g, d })
    }

    /// [τ₀ⁿ]_{g,n}, i.e. the volume V_{g,n}.
    pub fn volume(g: u32, n: usize) -> Result<Self> {
        Self::new(g, vec![0; n])
    }

    /// Caller guarantees stability and descending order.
    pub(crate) fn from_sorted(g: u32, d: Vec<u32>) -> Self {
        debug_assert!(is_stable(g, d.len()));
        debug_assert!(d.windows(2).all(|w| w[0] >= w[1]));
        TauIndex { g, d }
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self) -> &[u32] {
        &self.d
    }

    /// 3g − 3 + n, the complex dimension of the moduli space.
    pub fn dim(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n() as i64
    }

    /// |d|.
    pub fn weight(&self) -> i64 {
        self.d.iter().map(|&x| x as i64).sum()
    }

    /// Power of π² carried by the value, or `None` when it vanishes.
    pub fn pi_power(&self) -> Option<usize> {
        let m = self.dim() - self.weight();
        (m >= 0).then_some(m as usize)
    }
}

impl fmt::Display for TauIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(u32::to_string).collect();
        write!(f, "({}, {}, [{}])", self.g, self.n(), d.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let a = TauIndex::new(1, vec![0, 2, 1]).unwrap();
        let b = TauIndex::new(1, vec![2, 0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.d(), &[2, 1, 0]);
    }

    #[test]
    fn stability() {
        assert!(TauIndex::new(0, vec![0, 0]).is_err());
        assert!(TauIndex::new(1, vec![]).is_err());
        assert!(TauIndex::new(2, vec![]).is_ok());
        assert!(TauIndex::new(0, vec![0, 0, 0]).is_ok());
    }

    #[test]
    fn pi_power_and_vanishing() {
        let i = TauIndex::new(1, vec![2]).unwrap();
        assert_eq!(i.pi_power(), None);
        assert_eq!(TauIndex::volume(2, 1).unwrap().pi_power(), Some(4));
    }
}
