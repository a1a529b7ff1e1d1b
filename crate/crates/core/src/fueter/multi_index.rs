use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// A multi-index `(a1, a2, a3)` in `N_0^3`.
///
/// Ordered graded-lexicographically on `(|a|, a1, a2, a3)`, which is the
/// canonical term order of [`crate::series::FueterSeries`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct MultiIndex {
    pub a1: u32,
    pub a2: u32,
    pub a3: u32,
}

impl From<[u32; 3]> for MultiIndex {
    fn from(a: [u32; 3]) -> Self {
        MultiIndex::new(a[0], a[1], a[2])
    }
}

impl From<MultiIndex> for [u32; 3] {
    fn from(m: MultiIndex) -> Self {
        [m.a1, m.a2, m.a3]
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.a1, self.a2, self.a3).cmp(&(other.degree(), other.a1, other.a2, other.a3))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a1, self.a2, self.a3)
    }
}

impl std::ops::Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, o: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)
    }
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex::new(0, 0, 0);

    pub const fn new(a1: u32, a2: u32, a3: u32) -> Self {
        MultiIndex { a1, a2, a3 }
    }

    /// The unit index `e_u`, `u` in `1..=3`.
    pub fn unit(u: usize) -> Self {
        match u {
            1 => MultiIndex::new(1, 0, 0),
            2 => MultiIndex::new(0, 1, 0),
            3 => MultiIndex::new(0, 0, 1),
            _ => panic!("unit multi-index {u} out of range 1..=3"),
        }
    }

    pub fn as_array(self) -> [u32; 3] {
        self.into()
    }

    /// Entry `a_u`, `u` in `1..=3`.
    pub fn get(self, u: usize) -> u32 {
        self.as_array()[u - 1]
    }

    pub fn degree(self) -> usize {
        (self.a1 + self.a2 + self.a3) as usize
    }

    /// `a - e_u`, or `None` when `a_u = 0`.
    pub fn minus_unit(self, u: usize) -> Option<MultiIndex> {
        let mut a = self.as_array();
        if a[u - 1] == 0 {
            return None;
        }
        a[u - 1] -= 1;
        Some(a.into())
    }

    pub fn plus_unit(self, u: usize) -> MultiIndex {
        self + MultiIndex::unit(u)
    }

    /// `a - b` when `b <= a` componentwise.
    pub fn checked_sub(self, b: MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex::new(
            self.a1.checked_sub(b.a1)?,
            self.a2.checked_sub(b.a2)?,
            self.a3.checked_sub(b.a3)?,
        ))
    }

    /// `a! = a1! a2! a3!`, exact.
    pub fn factorial(self) -> BigUint {
        self.as_array().iter().map(|&k| factorial(k as usize)).product()
    }

    /// Multinomial coefficient `|a|! / a!` as a float; exact while it fits
    /// the 53-bit mantissa.
    pub fn multinomial(self) -> f64 {
        binomial_f64(self.degree(), self.a1 as usize) * binomial_f64((self.a2 + self.a3) as usize, self.a2 as usize)
    }

    /// `x1^a1 x2^a2 x3^a3`.
    pub fn monomial(self, x1: f64, x2: f64, x3: f64) -> f64 {
        x1.powi(self.a1 as i32) * x2.powi(self.a2 as i32) * x3.powi(self.a3 as i32)
    }

    /// All indices of total degree `n`, in canonical order.
    pub fn of_degree(n: usize) -> impl Iterator<Item = MultiIndex> {
        let n = n as u32;
        (0..=n).flat_map(move |a1| (0..=(n - a1)).map(move |a2| MultiIndex::new(a1, a2, n - a1 - a2)))
    }

    /// All indices with `|a| <= n`, in canonical order.
    pub fn up_to_degree(n: usize) -> impl Iterator<Item = MultiIndex> {
        (0..=n).flat_map(MultiIndex::of_degree)
    }

    /// Number of indices with `|a| <= n`, i.e. `C(n + 3, 3)`.
    pub fn count_up_to_degree(n: usize) -> usize {
        (n + 1) * (n + 2) * (n + 3) / 6
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

pub(crate) fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
