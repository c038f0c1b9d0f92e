//! Fibonacci numbers, Zeckendorf decompositions and the closed forms that
//! locate every factor of the Fibonacci word.
//!
//! Indexing follows the finite Fibonacci words: `F_0 = F_1 = 1`, so
//! `F_n = |g_n|`.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{factors, floor_tau, letter_at, FactorSet, Source, Word};

/// `F_n` with its index, exact for every `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibIndex {
    pub n: usize,
    pub value: BigUint,
}

pub fn fib(n: usize) -> FibIndex {
    let (mut a, mut b) = (BigUint::from(1u32), BigUint::from(1u32));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    FibIndex { n, value: a }
}

const FIB_TABLE_LEN: usize = 92;

const FIB_TABLE: [u64; FIB_TABLE_LEN] = {
    let mut t = [0u64; FIB_TABLE_LEN];
    t[0] = 1;
    t[1] = 1;
    let mut i = 2;
    while i < FIB_TABLE_LEN {
        t[i] = t[i - 1] + t[i - 2];
        i += 1;
    }
    t
};

/// `F_n` when it fits in a machine word.
pub fn fib_u64(n: usize) -> Option<u64> {
    FIB_TABLE.get(n).copied()
}

pub fn fib_usize(n: usize) -> Option<usize> {
    fib_u64(n).and_then(|v| usize::try_from(v).ok())
}

fn f(n: usize) -> usize {
    fib_usize(n).expect("Fibonacci index within machine range")
}

/// The index `m` with `F_m = value`, if `value` is a Fibonacci number.
/// The value 1 reports index 1.
pub fn fib_index_of(value: usize) -> Option<usize> {
    (1..FIB_TABLE_LEN).find(|&i| fib_usize(i) == Some(value))
}

/// Non-adjacent Fibonacci decomposition. Indices are decreasing and drawn
/// from `1..`, so the value 1 is always written as `F_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zeckendorf {
    pub n: u64,
    pub terms: Vec<usize>,
}

impl Zeckendorf {
    pub fn sum(&self) -> u64 {
        self.terms.iter().map(|&i| FIB_TABLE[i]).sum()
    }
}

pub fn zeckendorf(n: u64) -> Zeckendorf {
    let mut terms = Vec::new();
    let mut rest = n;
    let mut idx = (1..FIB_TABLE_LEN).rev().find(|&i| FIB_TABLE[i] <= rest).unwrap_or(1);
    while rest > 0 {
        while FIB_TABLE[idx] > rest {
            idx -= 1;
        }
        terms.push(idx);
        rest -= FIB_TABLE[idx];
        // greedy never needs the neighbouring index
        idx = idx.saturating_sub(2).max(1);
    }
    Zeckendorf { n, terms }
}

/// The `n >= 2` with `F_n <= k < F_{n+1}`. A Fibonacci `k` gets the lower
/// bracket.
pub fn bracket(k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::OrderRange {
            k,
            reason: "the bracket needs k >= 2",
        });
    }
    let mut n = 2;
    while f(n + 1) <= k {
        n += 1;
    }
    Ok(n)
}

fn check_vertex(j: usize, k: usize) -> Result<()> {
    if j == 0 || j > k + 1 {
        return Err(Error::VertexIndex { j, max: k + 1 });
    }
    Ok(())
}

/// 1-based position of the first occurrence of `v_j`, the `j`-th distinct
/// length-`k` factor of the Fibonacci word.
pub fn first_occurrence(j: usize, k: usize) -> Result<usize> {
    let n = bracket(k)?;
    check_vertex(j, k)?;
    Ok(if j <= f(n) { j } else { j + f(n + 1) - (k + 1) })
}

/// The position set `{ b·t + c·⌊(t+1)τ⌋ + d : t >= 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocationForm {
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl LocationForm {
    pub fn position(&self, t: usize) -> Option<usize> {
        let beatty = usize::try_from(floor_tau(t as u64 + 1)).ok()?;
        self.b
            .checked_mul(t)?
            .checked_add(self.c.checked_mul(beatty)?)?
            .checked_add(self.d)
    }

    /// Positions for `t = 0..=t_max`.
    pub fn positions(&self, t_max: usize) -> Result<Vec<usize>> {
        (0..=t_max)
            .map(|t| self.position(t).ok_or(Error::Overflow("location form")))
            .collect()
    }

    /// All generated positions that are `<= limit`, in increasing order.
    pub fn positions_up_to(&self, limit: usize) -> Vec<usize> {
        (0..)
            .map_while(|t| self.position(t).filter(|&p| p <= limit))
            .collect()
    }
}

/// Closed-form location set of `v_j`.
///
/// Three ranges, by `n = bracket(k)`:
/// `(F_{n-1}, F_{n-2}, j)` for `j <= F_{n+1} - k - 1`,
/// `(F_n, F_{n-1}, j)` for `j <= F_n`,
/// `(F_{n+1}, F_n, j + F_{n+1} - (k+1))` for `F_n < j <= k + 1`.
pub fn location_form(j: usize, k: usize) -> Result<LocationForm> {
    let n = bracket(k)?;
    check_vertex(j, k)?;
    let form = if j + k < f(n + 1) {
        LocationForm {
            b: f(n - 1),
            c: f(n - 2),
            d: j,
        }
    } else if j <= f(n) {
        LocationForm {
            b: f(n),
            c: f(n - 1),
            d: j,
        }
    } else {
        LocationForm {
            b: f(n + 1),
            c: f(n),
            d: j + f(n + 1) - (k + 1),
        }
    };
    Ok(form)
}

pub fn locations(j: usize, k: usize, t_max: usize) -> Result<Vec<usize>> {
    location_form(j, k)?.positions(t_max)
}

/// Whether `a·x1 − b·x2 − c·x3 = d` has integer solutions, i.e. whether
/// `gcd(a, b, c)` divides `d`.
pub fn diophantine_solvable(a: u64, b: u64, c: u64, d: i64) -> bool {
    let g = a.gcd(&b).gcd(&c);
    if g == 0 {
        return d == 0;
    }
    d.unsigned_abs().is_multiple_of(g)
}

/// Certificate that `v_j` occurs at `1 + m(k − ℓ)`, i.e. lies on the walk
/// from `v_1` that advances `k − ℓ` letters per arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub ell: usize,
    pub j: usize,
    pub factor: Word,
    pub m: usize,
    pub t: usize,
    pub position: usize,
    pub verified: bool,
}

pub fn default_search_bound(k: usize, ell: usize) -> usize {
    10 * k.saturating_sub(ell)
}

/// Witness search for one `(k, ℓ)`; holds the factor list so the
/// `k + 1` searches share it.
#[derive(Debug, Clone)]
pub struct WitnessSearch {
    k: usize,
    ell: usize,
    factors: FactorSet,
}

impl WitnessSearch {
    pub fn new(k: usize, ell: usize) -> Result<Self> {
        if ell == 0 || ell >= k {
            return Err(Error::OverlapRange { k, ell });
        }
        let prefix = Source::Fibonacci.prefix_for_factors(k)?;
        let factors = factors(&prefix, k)?;
        Ok(WitnessSearch { k, ell, factors })
    }

    pub fn factors(&self) -> &FactorSet {
        &self.factors
    }

    /// Smallest `t <= search_bound` whose location is `≡ 1 (mod k − ℓ)`.
    /// The occurrence is then confirmed letter by letter.
    pub fn find(&self, j: usize, search_bound: usize) -> Result<Witness> {
        let (k, ell) = (self.k, self.ell);
        let form = location_form(j, k)?;
        let step = k - ell;
        let factor = self
            .factors
            .get(j)
            .cloned()
            .ok_or(Error::VertexIndex { j, max: self.factors.len() })?;
        for t in 0..=search_bound {
            let position = form.position(t).ok_or(Error::Overflow("witness position"))?;
            if (position - 1) % step != 0 {
                continue;
            }
            let verified = factor
                .iter()
                .enumerate()
                .all(|(i, &s)| letter_at((position + i) as u64) == s);
            return Ok(Witness {
                k,
                ell,
                j,
                factor,
                m: (position - 1) / step,
                t,
                position,
                verified,
            });
        }
        Err(Error::WitnessNotFound {
            k,
            ell,
            j,
            search_bound,
        })
    }

    /// Witnesses for `j = 1..=k+1`, in order.
    pub fn all(&self, search_bound: usize) -> Vec<Result<Witness>> {
        (1..=self.k + 1).map(|j| self.find(j, search_bound)).collect()
    }
}

pub fn reach_witness(k: usize, ell: usize, j: usize, search_bound: usize) -> Result<Witness> {
    WitnessSearch::new(k, ell)?.find(j, search_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{fibonacci_prefix, occurrences};

    #[test]
    fn fib_values() {
        assert_eq!(fib(0).value, BigUint::from(1u32));
        assert_eq!(fib(4).value, BigUint::from(5u32));
        assert_eq!(fib(10).value, BigUint::from(89u32));
        assert_eq!(fib(91).value, BigUint::from(fib_u64(91).unwrap()));
        assert_eq!(fib_u64(92), None);
        // F_99 = Fib(100) in the 0,1,1,... numbering
        assert_eq!(fib(99).value.to_string(), "354224848179261915075");
    }

    #[test]
    fn zeckendorf_examples() {
        assert_eq!(zeckendorf(1).terms, [1]);
        assert_eq!(zeckendorf(4).terms, [3, 1]);
        assert_eq!(zeckendorf(100).terms, [10, 5, 3]);
        assert!(zeckendorf(0).terms.is_empty());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(4), Ok(3));
        assert_eq!(bracket(5), Ok(4));
        assert_eq!(bracket(2), Ok(2));
        assert_eq!(bracket(7), Ok(4));
        assert!(bracket(1).is_err());
    }

    #[test]
    fn first_occurrence_examples() {
        assert_eq!(first_occurrence(1, 4), Ok(1));
        assert_eq!(first_occurrence(5, 4), Ok(5));
        let all: Vec<usize> = (1..=5).map(|j| first_occurrence(j, 4).unwrap()).collect();
        assert_eq!(all, [1, 2, 3, 4, 5]);
        assert_eq!(first_occurrence(6, 4), Err(Error::VertexIndex { j: 6, max: 5 }));
        assert_eq!(first_occurrence(0, 4), Err(Error::VertexIndex { j: 0, max: 5 }));
    }

    #[test]
    fn location_form_examples() {
        let f1 = location_form(1, 4).unwrap();
        assert_eq!((f1.b, f1.c, f1.d), (3, 2, 1));
        assert_eq!(f1.positions(3).unwrap(), [1, 6, 9, 14]);
        let f4 = location_form(4, 4).unwrap();
        assert_eq!((f4.b, f4.c, f4.d), (5, 3, 4));
        assert_eq!(f4.positions(1).unwrap(), [4, 12]);
        let f5 = location_form(5, 4).unwrap();
        assert_eq!((f5.b, f5.c, f5.d), (5, 3, 5));
        assert_eq!(f5.positions(1).unwrap(), [5, 13]);
        // lowest range is used when F_{n+1} - k - 1 >= 1
        let low = location_form(1, 5).unwrap();
        assert_eq!((low.b, low.c, low.d), (3, 2, 1));
    }

    #[test]
    fn locations_against_scan() {
        assert_eq!(locations(2, 4, 0).unwrap(), [first_occurrence(2, 4).unwrap()]);
        let w = fibonacci_prefix(50);
        let fs = factors(&w, 4).unwrap();
        for j in 1..=5 {
            let scan: Vec<usize> = occurrences(&w, fs.get(j).unwrap())
                .positions
                .into_iter()
                .filter(|&p| p + 3 <= 50)
                .collect();
            let gen = location_form(j, 4).unwrap().positions_up_to(47);
            assert_eq!(gen, scan, "j={j}");
        }
    }

    #[test]
    fn diophantine_examples() {
        assert!(diophantine_solvable(3, 3, 2, 0));
        assert!(!diophantine_solvable(4, 2, 2, 3));
        assert!(diophantine_solvable(4, 2, 2, -6));
        for n in 1..40 {
            let (b, c) = (fib_u64(n + 1).unwrap(), fib_u64(n).unwrap());
            assert!(diophantine_solvable(12, b, c, 7));
        }
    }

    #[test]
    fn witness_examples() {
        let w = reach_witness(4, 2, 1, 20).unwrap();
        assert_eq!((w.m, w.t, w.position, w.verified), (0, 0, 1, true));

        let w = reach_witness(4, 2, 5, 20).unwrap();
        assert_eq!((w.m, w.t, w.position, w.verified), (2, 0, 5, true));
        assert_eq!(w.factor.to_string(), "1010");

        // form (3, 2, 2): 2, 7, ...; 7 ≡ 1 (mod 3)
        let w = reach_witness(4, 1, 2, 30).unwrap();
        assert_eq!((w.m, w.t, w.position, w.verified), (2, 1, 7, true));
    }

    #[test]
    fn witness_errors() {
        assert_eq!(
            reach_witness(4, 4, 1, 10),
            Err(Error::OverlapRange { k: 4, ell: 4 })
        );
        assert!(matches!(reach_witness(4, 2, 6, 10), Err(Error::VertexIndex { .. })));
        // form (5, 3, 4) gives 4, 12, 17, ...; only 17 ≡ 1 (mod 2)
        assert_eq!(reach_witness(4, 2, 4, 2).unwrap().t, 2);
        let err = reach_witness(4, 2, 4, 1);
        assert_eq!(
            err,
            Err(Error::WitnessNotFound {
                k: 4,
                ell: 2,
                j: 4,
                search_bound: 1
            })
        );
    }

    #[test]
    fn witness_json_shape() {
        let w = reach_witness(4, 2, 5, 20).unwrap();
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"k":4,"ell":2,"j":5,"factor":"1010","m":2,"t":0,"position":5,"verified":true}"#
        );
    }
}
