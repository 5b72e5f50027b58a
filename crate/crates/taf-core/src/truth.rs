//! Truth degrees on a fixed rational grid, with Łukasiewicz connectives.
//!
//! A [`TruthGrid`] of resolution `k` carries the `k + 1` degrees
//! `0, 1/k, …, 1`. Every [`TruthValue`] stores its numerator and the shared
//! denominator, and all connectives work on numerators with plain integer
//! arithmetic, so results stay on the grid exactly — there is no floating
//! point anywhere in the algebra. The one operation that can fall off the
//! grid, a weighted average, is handled by [`TruthGrid::round`], which snaps
//! to the nearest grid degree and resolves ties toward the lower one.
//!
//! Binary connectives are the Łukasiewicz family:
//!
//! ```text
//! a ∧ b = max(a + b − 1, 0)      a ∨ b = min(a + b, 1)
//! ¬a    = 1 − a                  a → b = min(1 − a + b, 1)
//! a ↔ b = 1 − |a − b|
//! ```
//!
//! Indexed conjunction/disjunction over a family ([`TruthGrid::big_and`],
//! [`TruthGrid::big_or`]) are minimum and maximum, with `1` and `0` for the
//! empty family.

use crate::rational::Rational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthError {
    #[error("grid resolution must be at least 1")]
    ZeroResolution,
    #[error("numerator {num} exceeds grid resolution {res}")]
    NumeratorOutOfRange { num: u32, res: u32 },
    #[error("value {0} lies outside the unit interval")]
    OutsideUnitInterval(String),
}

/// The finite set of degrees `{0, 1/k, …, 1}` shared by one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthGrid {
    k: u32,
}

impl TruthGrid {
    /// A grid with denominator `k` (so `k + 1` degrees). `k = 1` is the
    /// classical two-valued case.
    pub fn new(k: u32) -> Result<Self, TruthError> {
        if k == 0 {
            return Err(TruthError::ZeroResolution);
        }
        Ok(TruthGrid { k })
    }

    pub fn resolution(self) -> u32 {
        self.k
    }

    /// Number of degrees on the grid (`k + 1`).
    pub fn len(self) -> u64 {
        u64::from(self.k) + 1
    }

    pub fn bottom(self) -> TruthValue {
        TruthValue { num: 0, den: self.k }
    }

    pub fn top(self) -> TruthValue {
        TruthValue { num: self.k, den: self.k }
    }

    /// The degree `num / k`.
    pub fn value(self, num: u32) -> Result<TruthValue, TruthError> {
        if num > self.k {
            return Err(TruthError::NumeratorOutOfRange { num, res: self.k });
        }
        Ok(TruthValue { num, den: self.k })
    }

    /// All degrees, ascending.
    pub fn values(self) -> impl Iterator<Item = TruthValue> {
        let k = self.k;
        (0..=k).map(move |num| TruthValue { num, den: k })
    }

    /// Nearest grid degree to an exact rational in `[0, 1]`; ties go to the
    /// lower degree. This is the only place a degree is ever rounded.
    pub fn round(self, r: &Rational) -> Result<TruthValue, TruthError> {
        if r.is_negative() || *r > Rational::one() {
            return Err(TruthError::OutsideUnitInterval(r.to_string()));
        }
        let scaled_num = i128::from(*r.numer()) * i128::from(self.k);
        let den = i128::from(*r.denom());
        let floor = scaled_num / den;
        let rem = scaled_num % den;
        let num = if 2 * rem > den { floor + 1 } else { floor };
        Ok(TruthValue { num: num as u32, den: self.k })
    }

    /// True when the rational is exactly one of the grid degrees.
    pub fn contains(self, r: &Rational) -> bool {
        if r.is_negative() || *r > Rational::one() {
            return false;
        }
        (i128::from(*r.numer()) * i128::from(self.k)) % i128::from(*r.denom()) == 0
    }

    /// The grid degree equal to an exact rational, if there is one.
    pub fn exact(self, r: &Rational) -> Option<TruthValue> {
        if !self.contains(r) {
            return None;
        }
        let num = (i128::from(*r.numer()) * i128::from(self.k)) / i128::from(*r.denom());
        Some(TruthValue { num: num as u32, den: self.k })
    }

    /// Indexed conjunction: minimum over the family, `1` when empty.
    pub fn big_and<I: IntoIterator<Item = TruthValue>>(self, values: I) -> TruthValue {
        values.into_iter().fold(self.top(), TruthValue::min)
    }

    /// Indexed disjunction: maximum over the family, `0` when empty.
    pub fn big_or<I: IntoIterator<Item = TruthValue>>(self, values: I) -> TruthValue {
        values.into_iter().fold(self.bottom(), TruthValue::max)
    }
}

/// One degree `num / den` on a [`TruthGrid`] with resolution `den`.
///
/// Two values taking part in the same connective must come from the same
/// grid; mixing grids is a programming error and panics. Ordering between
/// values of different grids compares the exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruthValue {
    num: u32,
    den: u32,
}

impl TruthValue {
    pub fn new(num: u32, resolution: u32) -> Result<Self, TruthError> {
        TruthGrid::new(resolution)?.value(num)
    }

    pub fn numerator(self) -> u32 {
        self.num
    }

    pub fn denominator(self) -> u32 {
        self.den
    }

    pub fn grid(self) -> TruthGrid {
        TruthGrid { k: self.den }
    }

    pub fn is_top(self) -> bool {
        self.num == self.den
    }

    pub fn is_bottom(self) -> bool {
        self.num == 0
    }

    /// The exact rational this degree denotes.
    pub fn to_rational(self) -> Rational {
        Rational::new(i64::from(self.num), i64::from(self.den))
    }

    /// Approximate float, for display only — never fed back into the algebra.
    pub fn to_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    fn same_grid(self, other: TruthValue) -> u32 {
        assert_eq!(
            self.den, other.den,
            "truth values from different grids combined ({}/{} with {}/{})",
            self.num, self.den, other.num, other.den
        );
        self.den
    }

    /// Łukasiewicz conjunction `max(a + b − 1, 0)`.
    pub fn and(self, other: TruthValue) -> TruthValue {
        let k = self.same_grid(other);
        TruthValue { num: (self.num + other.num).saturating_sub(k), den: k }
    }

    /// Łukasiewicz disjunction `min(a + b, 1)`.
    pub fn or(self, other: TruthValue) -> TruthValue {
        let k = self.same_grid(other);
        TruthValue { num: (self.num + other.num).min(k), den: k }
    }

    /// Łukasiewicz negation `1 − a`.
    pub fn not(self) -> TruthValue {
        TruthValue { num: self.den - self.num, den: self.den }
    }

    /// Łukasiewicz implication `min(1 − a + b, 1)`.
    pub fn implies(self, other: TruthValue) -> TruthValue {
        let k = self.same_grid(other);
        TruthValue { num: (k - self.num + other.num).min(k), den: k }
    }

    /// Łukasiewicz biconditional `1 − |a − b|`.
    pub fn iff(self, other: TruthValue) -> TruthValue {
        let k = self.same_grid(other);
        TruthValue { num: k - self.num.abs_diff(other.num), den: k }
    }

    pub fn min(self, other: TruthValue) -> TruthValue {
        self.same_grid(other);
        if self.num <= other.num {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: TruthValue) -> TruthValue {
        self.same_grid(other);
        if self.num >= other.num {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = u64::from(self.num) * u64::from(other.den);
        let rhs = u64::from(other.num) * u64::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for TruthValue {
    /// Unreduced `num/den`, so the grid stays visible (`2/4`, not `1/2`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn g(k: u32) -> TruthGrid {
        TruthGrid::new(k).unwrap()
    }

    fn v(num: u32, k: u32) -> TruthValue {
        TruthValue::new(num, k).unwrap()
    }

    #[test]
    fn construction_bounds() {
        assert_eq!(TruthGrid::new(0), Err(TruthError::ZeroResolution));
        assert!(TruthValue::new(5, 4).is_err());
        assert_eq!(g(4).len(), 5);
        assert_eq!(g(4).values().count(), 5);
    }

    #[test]
    fn connective_values_on_tenths() {
        let k = 10;
        let a = v(7, k);
        let b = v(6, k);
        assert_eq!(a.and(b), v(3, k));
        assert_eq!(a.or(b), v(10, k));
        assert_eq!(a.not(), v(3, k));
        assert_eq!(a.implies(b), v(9, k));
        assert_eq!(v(8, k).iff(v(3, k)), v(5, k));
        assert_eq!(v(2, k).implies(v(9, k)), v(10, k));
    }

    #[test]
    fn classical_grid_is_boolean() {
        let t = v(1, 1);
        let f = v(0, 1);
        assert_eq!(t.and(f), f);
        assert_eq!(t.or(f), t);
        assert_eq!(f.implies(t), t);
        assert_eq!(t.implies(f), f);
        assert_eq!(t.iff(t), t);
        assert_eq!(t.iff(f), f);
    }

    /// Exhaustive algebraic laws on a mid-size grid. Everything here is a
    /// consequence of the definitions, checked pair-by-pair with no slack.
    #[test]
    fn algebra_laws_exhaustive() {
        let grid = g(20);
        for a in grid.values() {
            assert_eq!(a.not().not(), a, "double negation at {a}");
            for b in grid.values() {
                assert_eq!(a.and(b), b.and(a), "and commutes");
                assert_eq!(a.or(b), b.or(a), "or commutes");
                assert_eq!(a.and(b).not(), a.not().or(b.not()), "De Morgan ∧");
                assert_eq!(a.or(b).not(), a.not().and(b.not()), "De Morgan ∨");
                assert_eq!(a.implies(b), a.not().or(b), "→ as ¬∨");
                let diff = a.to_rational() - b.to_rational();
                let expected = Rational::from_integer(1) - diff.abs();
                assert_eq!(a.iff(b).to_rational(), expected, "↔ as 1−|a−b|");
                for c in grid.values() {
                    assert_eq!(a.and(b).and(c), a.and(b.and(c)), "and associates");
                    assert_eq!(a.or(b).or(c), a.or(b.or(c)), "or associates");
                }
            }
        }
    }

    #[test]
    fn connectives_stay_on_grid() {
        for k in [1, 2, 3, 4, 7] {
            let grid = g(k);
            for a in grid.values() {
                assert!(a.not().numerator() <= k);
                for b in grid.values() {
                    for r in [a.and(b), a.or(b), a.implies(b), a.iff(b)] {
                        assert_eq!(r.denominator(), k);
                        assert!(r.numerator() <= k);
                    }
                }
            }
        }
    }

    #[test]
    fn indexed_connectives_are_min_max() {
        let grid = g(4);
        let vals = [v(1, 4), v(3, 4), v(2, 4)];
        assert_eq!(grid.big_and(vals), v(1, 4));
        assert_eq!(grid.big_or(vals), v(3, 4));
        assert_eq!(grid.big_and([]), grid.top());
        assert_eq!(grid.big_or([]), grid.bottom());
        // Deliberately not the iterated t-norm: 3/4 ⊗ 3/4 would be 2/4.
        assert_eq!(grid.big_and([v(3, 4), v(3, 4)]), v(3, 4));
    }

    #[test]
    fn rounding_snaps_to_nearest_and_breaks_ties_down() {
        let r = |t: &str| parse_rational(t).unwrap();
        assert_eq!(g(5).round(&r("0.1")).unwrap(), v(0, 5)); // exact tie 0 vs 1/5
        assert_eq!(g(4).round(&r("1/8")).unwrap(), v(0, 4)); // exact tie 0 vs 1/4
        assert_eq!(g(4).round(&r("0.8")).unwrap(), v(3, 4)); // 0.8 closer to 3/4 than 1
        assert_eq!(g(4).round(&r("0.7")).unwrap(), v(3, 4));
        assert_eq!(g(10).round(&r("0.8")).unwrap(), v(8, 10)); // already on grid
        assert_eq!(g(2).round(&r("0.9")).unwrap(), v(2, 2));
        assert!(g(2).round(&r("1.1")).is_err());
        assert!(g(2).round(&r("-0.1")).is_err());
    }

    #[test]
    fn exact_lookup() {
        let r = |t: &str| parse_rational(t).unwrap();
        assert_eq!(g(4).exact(&r("0.75")), Some(v(3, 4)));
        assert_eq!(g(4).exact(&r("1/2")), Some(v(2, 4)));
        assert_eq!(g(4).exact(&r("1/3")), None);
        assert!(g(3).contains(&r("1/3")));
    }

    #[test]
    fn ordering_is_exact_across_grids() {
        assert!(v(1, 2) < v(3, 4));
        assert_eq!(v(1, 2).cmp(&v(2, 4)), std::cmp::Ordering::Equal);
        assert!(v(2, 3) > v(1, 2));
    }

    #[test]
    fn display_keeps_grid_denominator() {
        assert_eq!(v(2, 4).to_string(), "2/4");
        assert_eq!(v(0, 2).to_string(), "0/2");
        assert_eq!(serde_json::to_string(&v(3, 4)).unwrap(), "\"3/4\"");
    }

    #[test]
    #[should_panic(expected = "different grids")]
    fn mixing_grids_panics() {
        let _ = v(1, 2).and(v(1, 3));
    }
}
