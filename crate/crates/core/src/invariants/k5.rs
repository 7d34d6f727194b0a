use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::InvariantError;
use crate::rational::{self, Rational};

/// `(a_1, a_2, a_3)`: parameters of the free lines `x_{i+2} = a_i x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamPoint5 {
    a: [Rational; 3],
}

impl ParamPoint5 {
    pub fn new(a: [Rational; 3]) -> Result<Self, InvariantError> {
        if a.iter().any(Zero::is_zero) {
            return Err(InvariantError::Degenerate("a_i = 0"));
        }
        Ok(ParamPoint5 { a })
    }

    pub fn from_ints(a: [i64; 3]) -> Result<Self, InvariantError> {
        ParamPoint5::new(a.map(rational::q))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ParamPoint5 {
            a: std::array::from_fn(|_| rational::random_nonzero(rng)),
        }
    }

    pub fn a(&self) -> &[Rational; 3] {
        &self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gen5 {
    /// `(a_1, a_2, a_3) -> (a_3, a_1, a_2)`.
    Cyc,
    /// `(a_1, a_2, a_3) -> (1/a_2, 1/a_1, 1/a_3)`.
    Trans,
    /// `a_i -> 1/a_i`.
    Cremona,
}

impl Gen5 {
    pub const ALL: [Gen5; 3] = [Gen5::Cyc, Gen5::Trans, Gen5::Cremona];

    fn apply(self, p: &ParamPoint5) -> ParamPoint5 {
        let [a1, a2, a3] = &p.a;
        let a = match self {
            Gen5::Cyc => [a3.clone(), a1.clone(), a2.clone()],
            Gen5::Trans => [a2.recip(), a1.recip(), a3.recip()],
            Gen5::Cremona => [a1.recip(), a2.recip(), a3.recip()],
        };
        ParamPoint5 { a }
    }
}

/// Applies a word right to left: `[g, h]` acts as `g(h(p))`.
pub fn act5(word: &[Gen5], p: &ParamPoint5) -> ParamPoint5 {
    word.iter().rev().fold(p.clone(), |acc, g| g.apply(&acc))
}

/// An element of the order-12 group: permute, then optionally invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Element5 {
    pub perm: [usize; 3],
    pub invert: bool,
}

impl Element5 {
    pub fn act(&self, p: &ParamPoint5) -> ParamPoint5 {
        ParamPoint5 {
            a: std::array::from_fn(|k| {
                let x = &p.a[self.perm[k]];
                if self.invert {
                    x.recip()
                } else {
                    x.clone()
                }
            }),
        }
    }
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
];

/// The twelve elements of the group generated by [`Gen5::ALL`].
pub fn group5() -> Vec<Element5> {
    PERMS
        .iter()
        .flat_map(|&perm| [false, true].map(|invert| Element5 { perm, invert }))
        .collect()
}

/// Orbit of `p` as the closure under the generators.
pub fn orbit5(p: &ParamPoint5) -> BTreeSet<ParamPoint5> {
    let mut seen = BTreeSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    while let Some(x) = frontier.pop() {
        for g in Gen5::ALL {
            let y = g.apply(&x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Elementary symmetric functions of `(a_1, a_2, a_3)`.
pub fn sigma5(p: &ParamPoint5) -> [Rational; 3] {
    let [a1, a2, a3] = &p.a;
    [a1 + a2 + a3, a1 * a2 + a2 * a3 + a3 * a1, a1 * a2 * a3]
}

/// `(y_1, y_2, y_3) = (s1 + s2/s3, s2 + s1/s3, s3 + 1/s3)`.
pub fn invariants5(p: &ParamPoint5) -> [Rational; 3] {
    let [s1, s2, s3] = sigma5(p);
    [&s1 + &s2 / &s3, &s2 + &s1 / &s3, &s3 + s3.recip()]
}

/// Solves `y_1 = s1 + s2/s3`, `y_2 = s2 + s1/s3` for `(s1, s2)`.
pub fn recover_sigma(y: &[Rational; 3], s3: &Rational) -> Result<[Rational; 2], InvariantError> {
    let t = s3.recip();
    let det = Rational::one() - &t * &t;
    if det.is_zero() {
        return Err(InvariantError::Degenerate("sigma_3 = +-1"));
    }
    let s1 = (&y[0] - &t * &y[1]) / &det;
    let s2 = (&y[1] - &t * &y[0]) / &det;
    Ok([s1, s2])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticCheck5 {
    pub orbit_size: usize,
    pub sigma_classes: usize,
    pub common_invariants: bool,
    pub sigma_recovered: bool,
}

impl QuadraticCheck5 {
    pub fn passed(&self) -> bool {
        self.sigma_classes == 2 && self.common_invariants && self.sigma_recovered
    }
}

/// Over the fiber of `y` through `p` the orbit splits into exactly two
/// classes of symmetric functions, swapped by `s3 -> 1/s3`, and each class is
/// determined by `y` and its own `s3`.
pub fn quadratic_extension_check5(p: &ParamPoint5) -> Result<QuadraticCheck5, InvariantError> {
    let s3 = &sigma5(p)[2];
    if s3.is_one() || (-s3).is_one() {
        return Err(InvariantError::Degenerate("sigma_3 = +-1"));
    }
    let orbit = orbit5(p);
    let y = invariants5(p);
    let mut classes: BTreeMap<[Rational; 3], usize> = BTreeMap::new();
    for x in &orbit {
        *classes.entry(sigma5(x)).or_default() += 1;
    }
    let common_invariants = orbit.iter().all(|x| invariants5(x) == y);
    let mut sigma_recovered = true;
    for s in classes.keys() {
        let [s1, s2] = recover_sigma(&y, &s[2])?;
        sigma_recovered &= s1 == s[0] && s2 == s[1];
    }
    Ok(QuadraticCheck5 {
        orbit_size: orbit.len(),
        sigma_classes: classes.len(),
        common_invariants,
        sigma_recovered,
    })
}
