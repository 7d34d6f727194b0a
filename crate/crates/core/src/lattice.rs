//! Picard lattice of the plane blown up at `r` points.
//!
//! A class is stored as `(a; b_1, .., b_r)` and stands for `aL - sum b_j E_j`,
//! so the canonical class is `(-3; -1, .., -1)`. The pairing is
//! `L.L = 1`, `E_i.E_j = -delta_ij`, `L.E_i = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Largest number of blown-up points handled.
pub const MAX_BLOWUPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error(
        "dimension mismatch: class with {left} exceptional coefficients against one with {right}"
    )]
    DimensionMismatch { left: usize, right: usize },
    #[error("number of blown-up points {0} outside 0..=8")]
    BlowupsOutOfRange(usize),
    #[error("exceptional index {index} outside 1..={r}")]
    BadExceptionalIndex { index: usize, r: usize },
    #[error("class {0} has odd c.(c-K); not a lattice class")]
    ParityViolation(DivisorClass),
}

/// `aL - sum b_j E_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: Vec<i64>,
}

impl DivisorClass {
    pub fn new(a: i64, b: Vec<i64>) -> Self {
        DivisorClass { a, b }
    }

    pub fn zero(r: usize) -> Self {
        DivisorClass {
            a: 0,
            b: vec![0; r],
        }
    }

    /// Number of exceptional coefficients.
    pub fn r(&self) -> usize {
        self.b.len()
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b.iter().all(|&x| x == 0)
    }

    /// `|a| + sum |b_j|`.
    pub fn l1_norm(&self) -> i64 {
        self.a.abs() + self.b.iter().map(|x| x.abs()).sum::<i64>()
    }

    pub fn intersect(&self, other: &DivisorClass) -> Result<i64, LatticeError> {
        self.check_same(other)?;
        Ok(self.dot(other))
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    // Callers have already checked dimensions.
    fn dot(&self, other: &DivisorClass) -> i64 {
        self.a * other.a - self.b.iter().zip(&other.b).map(|(x, y)| x * y).sum::<i64>()
    }

    fn check_same(&self, other: &DivisorClass) -> Result<(), LatticeError> {
        if self.r() != other.r() {
            return Err(LatticeError::DimensionMismatch {
                left: self.r(),
                right: other.r(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.check_same(other)?;
        Ok(self.clone() + other)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.check_same(other)?;
        Ok(self.clone() - other)
    }

    /// Exact half, when every coefficient is even.
    pub fn halved(&self) -> Option<DivisorClass> {
        if self.a % 2 != 0 || self.b.iter().any(|x| x % 2 != 0) {
            return None;
        }
        Some(DivisorClass {
            a: self.a / 2,
            b: self.b.iter().map(|x| x / 2).collect(),
        })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if self.a != 0 {
            terms.push((self.a, "L".to_string()));
        }
        for (j, &bj) in self.b.iter().enumerate() {
            if bj != 0 {
                terms.push((-bj, format!("E{}", j + 1)));
            }
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, sym)) in terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if *c < 0 { "-" } else { "+" };
            match (k, *c < 0) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            f.write_str(sym)?;
        }
        Ok(())
    }
}

impl Add<&DivisorClass> for DivisorClass {
    type Output = DivisorClass;

    fn add(mut self, rhs: &DivisorClass) -> DivisorClass {
        self += rhs;
        self
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: DivisorClass) -> DivisorClass {
        self + &rhs
    }
}

impl AddAssign<&DivisorClass> for DivisorClass {
    fn add_assign(&mut self, rhs: &DivisorClass) {
        assert_eq!(self.r(), rhs.r(), "adding classes from different lattices");
        self.a += rhs.a;
        for (x, y) in self.b.iter_mut().zip(&rhs.b) {
            *x += y;
        }
    }
}

impl Sub<&DivisorClass> for DivisorClass {
    type Output = DivisorClass;

    fn sub(mut self, rhs: &DivisorClass) -> DivisorClass {
        self -= rhs;
        self
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        self - &rhs
    }
}

impl SubAssign<&DivisorClass> for DivisorClass {
    fn sub_assign(&mut self, rhs: &DivisorClass) {
        assert_eq!(
            self.r(),
            rhs.r(),
            "subtracting classes from different lattices"
        );
        self.a -= rhs.a;
        for (x, y) in self.b.iter_mut().zip(&rhs.b) {
            *x -= y;
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        DivisorClass {
            a: -self.a,
            b: self.b.into_iter().map(|x| -x).collect(),
        }
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;

    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass {
            a: self * rhs.a,
            b: rhs.b.into_iter().map(|x| self * x).collect(),
        }
    }
}

/// The lattice `Pic` of the plane blown up at `r` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceLattice {
    r: usize,
}

impl SurfaceLattice {
    pub fn new(r: usize) -> Result<Self, LatticeError> {
        if r > MAX_BLOWUPS {
            return Err(LatticeError::BlowupsOutOfRange(r));
        }
        Ok(SurfaceLattice { r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// `K^2 = 9 - r`.
    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }

    /// Topological Euler number `e = 12 - K^2 = 3 + r`.
    pub fn euler_number(&self) -> i64 {
        12 - self.degree()
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.r)
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::new(1, vec![0; self.r])
    }

    /// `E_j`, 1-based.
    pub fn exceptional(&self, j: usize) -> Result<DivisorClass, LatticeError> {
        if j == 0 || j > self.r {
            return Err(LatticeError::BadExceptionalIndex {
                index: j,
                r: self.r,
            });
        }
        let mut b = vec![0; self.r];
        b[j - 1] = -1;
        Ok(DivisorClass::new(0, b))
    }

    pub fn exceptionals(&self) -> Vec<DivisorClass> {
        (1..=self.r).map(|j| self.exceptional(j).unwrap()).collect()
    }

    /// `aL - sum_{j in through} E_j`: the class of a degree-`a` curve passing
    /// simply through the listed points (1-based).
    pub fn curve_through(&self, a: i64, through: &[usize]) -> Result<DivisorClass, LatticeError> {
        let mut c = DivisorClass::new(a, vec![0; self.r]);
        for &j in through {
            if j == 0 || j > self.r {
                return Err(LatticeError::BadExceptionalIndex {
                    index: j,
                    r: self.r,
                });
            }
            c.b[j - 1] += 1;
        }
        Ok(c)
    }

    /// `K = -3L + sum E_j`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::new(-3, vec![-1; self.r])
    }

    pub fn anticanonical_class(&self) -> DivisorClass {
        -self.canonical_class()
    }

    pub fn contains(&self, c: &DivisorClass) -> bool {
        c.r() == self.r
    }

    fn check(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if !self.contains(c) {
            return Err(LatticeError::DimensionMismatch {
                left: c.r(),
                right: self.r,
            });
        }
        Ok(())
    }

    /// `C.K`.
    pub fn canonical_degree(&self, c: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(c)?;
        Ok(c.dot(&self.canonical_class()))
    }

    /// Riemann-Roch on a rational surface: `chi(O(c)) = 1 + c.(c - K)/2`.
    pub fn euler_characteristic(&self, c: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(c)?;
        let twice = c.dot(&(c.clone() - &self.canonical_class()));
        if twice % 2 != 0 {
            return Err(LatticeError::ParityViolation(c.clone()));
        }
        Ok(1 + twice / 2)
    }

    /// Peeling semi-decision for effectivity of `c`.
    ///
    /// `negatives` lists irreducible curves of negative self-intersection
    /// known on the surface; the `E_j` are always added. While some such `N`
    /// has `c.N < 0`, `N` is a fixed component and is subtracted. Before
    /// each step the residual is tested against the nef classes `L` and `-K`
    /// (the surface is assumed weak Del Pezzo, i.e. `-K` nef) for a "no";
    /// the final residual is tested against Riemann-Roch for a "yes".
    pub fn is_effective(
        &self,
        c: &DivisorClass,
        negatives: &[DivisorClass],
    ) -> Result<Effectivity, LatticeError> {
        self.check(c)?;
        let mut curves: Vec<DivisorClass> = Vec::with_capacity(negatives.len() + self.r);
        for n in negatives {
            self.check(n)?;
            if !curves.contains(n) {
                curves.push(n.clone());
            }
        }
        for e in self.exceptionals() {
            if !curves.contains(&e) {
                curves.push(e);
            }
        }

        let budget = c.l1_norm();
        let mut residual = c.clone();
        let mut fixed = Vec::new();
        let mut steps = 0i64;
        let minus_k = self.anticanonical_class();
        loop {
            // each peeled curve is forced, so the residual is effective
            // whenever c is
            if residual.a < 0 {
                return Ok(Effectivity::No(NonEffectiveReason::NegativeDegree));
            }
            if residual.dot(&minus_k) < 0 {
                return Ok(Effectivity::No(
                    NonEffectiveReason::NegativeAnticanonicalDegree,
                ));
            }
            let Some(n) = curves.iter().find(|n| residual.dot(n) < 0) else {
                break;
            };
            if steps >= budget {
                return Ok(Effectivity::Undecided);
            }
            residual -= n;
            fixed.push(n.clone());
            steps += 1;
        }

        let decomposition = Decomposition { fixed, residual };
        if decomposition.residual.is_zero() {
            return Ok(Effectivity::Yes(decomposition));
        }
        let chi = self.euler_characteristic(&decomposition.residual)?;
        let nef_on_negatives = curves.iter().all(|n| decomposition.residual.dot(n) >= 0);
        if chi >= 1 && nef_on_negatives {
            return Ok(Effectivity::Yes(decomposition));
        }
        Ok(Effectivity::Undecided)
    }
}

/// Why a class was certified non-effective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonEffectiveReason {
    /// Residual meets the nef class `L` negatively.
    NegativeDegree,
    /// Residual meets the nef class `-K` negatively.
    NegativeAnticanonicalDegree,
}

/// `c = sum fixed + residual`, with every `fixed` entry an irreducible
/// negative curve and `residual` either zero or a class with sections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub fixed: Vec<DivisorClass>,
    pub residual: DivisorClass,
}

impl Decomposition {
    pub fn total(&self) -> DivisorClass {
        self.fixed
            .iter()
            .fold(self.residual.clone(), |acc, n| acc + n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum Effectivity {
    Yes(Decomposition),
    No(NonEffectiveReason),
    Undecided,
}

impl Effectivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Effectivity::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Effectivity::No(_))
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Effectivity::Undecided)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(r: usize) -> SurfaceLattice {
        SurfaceLattice::new(r).unwrap()
    }

    #[test]
    fn defining_relations() {
        let y = lat(5);
        let l = y.line();
        let e1 = y.exceptional(1).unwrap();
        let e2 = y.exceptional(2).unwrap();
        assert_eq!(l.intersect(&l).unwrap(), 1);
        assert_eq!(e1.intersect(&e2).unwrap(), 0);
        assert_eq!(e1.intersect(&e1).unwrap(), -1);
        assert_eq!(l.intersect(&e1).unwrap(), 0);
        let d = y.curve_through(1, &[1, 4, 5]).unwrap();
        assert_eq!(d.intersect(&e1).unwrap(), 1);
        assert_eq!(d.self_intersection(), -2);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let err = lat(3).line().intersect(&lat(4).line()).unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { left: 3, right: 4 });
        assert!(SurfaceLattice::new(9).is_err());
        assert!(lat(3).exceptional(4).is_err());
        assert!(lat(3).exceptional(0).is_err());
    }

    #[test]
    fn canonical_self_intersection() {
        assert_eq!(lat(0).canonical_class().self_intersection(), 9);
        assert_eq!(lat(3).canonical_class().self_intersection(), 6);
        assert_eq!(lat(5).canonical_class().self_intersection(), 4);
        for r in 0..=MAX_BLOWUPS {
            let y = lat(r);
            assert_eq!(y.canonical_class().self_intersection(), 9 - r as i64);
            assert_eq!(y.rank(), r + 1);
        }
    }

    #[test]
    fn display_uses_sign_convention() {
        let y = lat(5);
        assert_eq!(
            y.canonical_class().to_string(),
            "-3L + E1 + E2 + E3 + E4 + E5"
        );
        assert_eq!(
            y.curve_through(2, &[1, 3]).unwrap().to_string(),
            "2L - E1 - E3"
        );
        assert_eq!(y.zero().to_string(), "0");
        assert_eq!(y.exceptional(2).unwrap().to_string(), "E2");
    }

    #[test]
    fn euler_characteristic_examples() {
        let y = lat(5);
        assert_eq!(y.euler_characteristic(&y.zero()).unwrap(), 1);
        assert_eq!(y.euler_characteristic(&y.canonical_class()).unwrap(), 1);
        assert_eq!(y.euler_characteristic(&y.line()).unwrap(), 3);
        assert_eq!(y.euler_characteristic(&y.anticanonical_class()).unwrap(), 5);
    }

    #[test]
    fn minus_three_e_plus_three_e_is_not_effective() {
        let y = lat(5);
        let negatives = y.exceptionals();
        for i in 1..=3usize {
            let k = (i + 1) % 3 + 1; // i + 2 mod 3
            let c = 3 * y.exceptional(k).unwrap() - 3 * y.exceptional(i).unwrap();
            let ans = y.is_effective(&c, &negatives).unwrap();
            assert_eq!(
                ans,
                Effectivity::No(NonEffectiveReason::NegativeAnticanonicalDegree)
            );
        }
    }

    #[test]
    fn zero_is_effective() {
        let y = lat(4);
        match y.is_effective(&y.zero(), &[]).unwrap() {
            Effectivity::Yes(d) => {
                assert!(d.fixed.is_empty());
                assert!(d.residual.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn line_through_two_of_three_collinear_points_splits() {
        let y = lat(5);
        let node = y.curve_through(1, &[1, 4, 5]).unwrap();
        let c = y.curve_through(1, &[1, 4]).unwrap();
        let mut negatives = y.exceptionals();
        negatives.push(node.clone());
        match y.is_effective(&c, &negatives).unwrap() {
            Effectivity::Yes(d) => {
                let mut fixed = d.fixed.clone();
                fixed.sort();
                let mut expect = vec![node, y.exceptional(5).unwrap()];
                expect.sort();
                assert_eq!(fixed, expect);
                assert!(d.residual.is_zero());
                assert_eq!(d.total(), c);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_degree_is_not_effective() {
        let y = lat(2);
        let c = DivisorClass::new(-1, vec![0, 0]);
        assert_eq!(
            y.is_effective(&c, &[]).unwrap(),
            Effectivity::No(NonEffectiveReason::NegativeDegree)
        );
    }

    #[test]
    fn movable_classes_are_effective() {
        let y = lat(5);
        let ac = y.anticanonical_class();
        let ans = y.is_effective(&ac, &y.exceptionals()).unwrap();
        assert!(ans.is_yes());
    }

    fn arb_class(r: usize) -> impl Strategy<Value = DivisorClass> {
        (-6i64..=6, proptest::collection::vec(-4i64..=4, r))
            .prop_map(|(a, b)| DivisorClass::new(a, b))
    }

    fn arb_triple() -> impl Strategy<Value = (DivisorClass, DivisorClass, DivisorClass, i64, i64)> {
        (0usize..=8).prop_flat_map(|r| {
            (
                arb_class(r),
                arb_class(r),
                arb_class(r),
                -5i64..=5,
                -5i64..=5,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn pairing_is_symmetric_and_bilinear((x, y, z, s, t) in arb_triple()) {
            prop_assert_eq!(x.intersect(&y).unwrap(), y.intersect(&x).unwrap());
            let combo = s * x.clone() + t * y.clone();
            prop_assert_eq!(
                combo.intersect(&z).unwrap(),
                s * x.intersect(&z).unwrap() + t * y.intersect(&z).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn effectivity_is_order_independent(
            c in arb_class(5),
            perm_seed in any::<u64>(),
        ) {
            let y = lat(5);
            let mut negatives = y.exceptionals();
            negatives.push(y.curve_through(1, &[1, 4, 5]).unwrap());
            negatives.push(y.curve_through(1, &[1, 2]).unwrap());
            negatives.push(y.curve_through(1, &[2, 3]).unwrap());
            negatives.push(y.curve_through(1, &[2, 4]).unwrap());
            negatives.push(y.curve_through(1, &[3, 5]).unwrap());
            let base = y.is_effective(&c, &negatives).unwrap();
            let mut shuffled = negatives.clone();
            // deterministic Fisher-Yates from the seed
            let mut state = perm_seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let other = y.is_effective(&c, &shuffled).unwrap();
            prop_assert!(!(base.is_yes() && other.is_no()));
            prop_assert!(!(base.is_no() && other.is_yes()));
            for ans in [base, other] {
                if let Effectivity::Yes(d) = ans {
                    prop_assert_eq!(d.total(), c.clone());
                }
            }
        }
    }
}
