use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::InvariantError;
use crate::rational::{self, Rational};

/// `(a, b)`: parameters of `D_{i,2}, D_{i,3}` in the primary case.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamPoint6 {
    a: [Rational; 3],
    b: [Rational; 3],
}

impl ParamPoint6 {
    pub fn new(a: [Rational; 3], b: [Rational; 3]) -> Result<Self, InvariantError> {
        for i in 0..3 {
            if a[i].is_zero() || b[i].is_zero() {
                return Err(InvariantError::Degenerate("a_i b_i = 0"));
            }
            if a[i] == b[i] {
                return Err(InvariantError::Degenerate("a_i = b_i"));
            }
            if (&a[i] + &b[i]).is_zero() {
                return Err(InvariantError::Degenerate("v_i = a_i + b_i = 0"));
            }
        }
        Ok(ParamPoint6 { a, b })
    }

    pub fn from_ints(a: [i64; 3], b: [i64; 3]) -> Result<Self, InvariantError> {
        ParamPoint6::new(a.map(rational::q), b.map(rational::q))
    }

    /// Redraws until the point is valid.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let a = std::array::from_fn(|_| rational::random_nonzero(rng));
            let b = std::array::from_fn(|_| rational::random_nonzero(rng));
            if let Ok(p) = ParamPoint6::new(a, b) {
                return p;
            }
        }
    }

    pub fn a(&self) -> &[Rational; 3] {
        &self.a
    }

    pub fn b(&self) -> &[Rational; 3] {
        &self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gen6 {
    /// New index `k` takes the old index `perm[k]` (0-based), in both
    /// triples.
    Perm([usize; 3]),
    /// Swaps `a_i` and `b_i` (1-based).
    Flip(usize),
    /// `(l1, l2)` with `l3 = 1/(l1 l2)`; scales `a_i, b_i` by `l_i`.
    Torus(Rational, Rational),
    /// Inverts all six coordinates.
    Cremona,
}

impl Gen6 {
    pub fn random_torus<R: Rng + ?Sized>(rng: &mut R) -> Gen6 {
        Gen6::Torus(rational::random_nonzero(rng), rational::random_nonzero(rng))
    }

    pub fn random_perm<R: Rng + ?Sized>(rng: &mut R) -> Gen6 {
        let mut perm = [0, 1, 2];
        perm.shuffle(rng);
        Gen6::Perm(perm)
    }

    fn apply(&self, p: &ParamPoint6) -> Result<ParamPoint6, InvariantError> {
        let (a, b) = match self {
            Gen6::Perm(perm) => {
                let mut seen = [false; 3];
                for &k in perm {
                    if k > 2 || std::mem::replace(&mut seen[k], true) {
                        return Err(InvariantError::Degenerate("not a permutation"));
                    }
                }
                (perm.map(|k| p.a[k].clone()), perm.map(|k| p.b[k].clone()))
            }
            Gen6::Flip(i) => {
                if !(1..=3).contains(i) {
                    return Err(InvariantError::Degenerate("flip index outside 1..=3"));
                }
                let (mut a, mut b) = (p.a.clone(), p.b.clone());
                std::mem::swap(&mut a[i - 1], &mut b[i - 1]);
                (a, b)
            }
            Gen6::Torus(l1, l2) => {
                if l1.is_zero() || l2.is_zero() {
                    return Err(InvariantError::Degenerate("torus parameter 0"));
                }
                return scale6(&torus_weights(l1, l2), p);
            }
            Gen6::Cremona => (
                p.a.clone().map(|x| x.recip()),
                p.b.clone().map(|x| x.recip()),
            ),
        };
        ParamPoint6::new(a, b)
    }
}

/// `(l1, l2, 1/(l1 l2))`.
pub fn torus_weights(l1: &Rational, l2: &Rational) -> [Rational; 3] {
    [l1.clone(), l2.clone(), (l1 * l2).recip()]
}

/// Diagonal scaling `a_i, b_i -> l_i a_i, l_i b_i` with arbitrary nonzero
/// weights (a torus element only when the product is 1).
pub fn scale6(l: &[Rational; 3], p: &ParamPoint6) -> Result<ParamPoint6, InvariantError> {
    if l.iter().any(Zero::is_zero) {
        return Err(InvariantError::Degenerate("zero scaling weight"));
    }
    ParamPoint6::new(
        std::array::from_fn(|i| &l[i] * &p.a[i]),
        std::array::from_fn(|i| &l[i] * &p.b[i]),
    )
}

/// Applies a word right to left.
pub fn act6(word: &[Gen6], p: &ParamPoint6) -> Result<ParamPoint6, InvariantError> {
    word.iter()
        .rev()
        .try_fold(p.clone(), |acc, g| g.apply(&acc))
}

/// `u_i = a_i b_i`, `v_i = a_i + b_i`, `w_i = u_i / v_i^2`, `v = prod v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derived6 {
    pub u: [Rational; 3],
    pub vi: [Rational; 3],
    pub w: [Rational; 3],
    pub v: Rational,
}

pub fn derived6(p: &ParamPoint6) -> Derived6 {
    let u: [Rational; 3] = std::array::from_fn(|i| &p.a[i] * &p.b[i]);
    let vi: [Rational; 3] = std::array::from_fn(|i| &p.a[i] + &p.b[i]);
    let w = std::array::from_fn(|i| &u[i] / (&vi[i] * &vi[i]));
    let v = vi.iter().fold(Rational::one(), |acc, x| acc * x);
    Derived6 { u, vi, w, v }
}

fn product(xs: &[Rational]) -> Rational {
    xs.iter().fold(Rational::one(), |acc, x| acc * x)
}

/// `(s1(w), s2(w), s3(w), v + 1/(v prod w))`.
pub fn invariants6(p: &ParamPoint6) -> [Rational; 4] {
    let d = derived6(p);
    let [w1, w2, w3] = &d.w;
    let pw = w1 * w2 * w3;
    let s = &d.v + (&d.v * &pw).recip();
    [w1 + w2 + w3, w1 * w2 + w2 * w3 + w3 * w1, pw, s]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusCheck6 {
    /// `(w, v)` unchanged by a torus element.
    pub fixes_w_and_v: bool,
    /// Weights `v_i(q)/v_i(p)` have product 1 and map `p` to `q`.
    pub recovered: bool,
    /// A scaling with weight product `c` multiplies `v` by `c`.
    pub v_scales_by_product: bool,
}

impl TorusCheck6 {
    pub fn passed(&self) -> bool {
        self.fixes_w_and_v && self.recovered && self.v_scales_by_product
    }
}

/// Weights `l_i = v_i(q)/v_i(p)`, or `None` if they do not map `p` to `q`.
pub fn recover_torus(p: &ParamPoint6, q: &ParamPoint6) -> Option<[Rational; 3]> {
    let (dp, dq) = (derived6(p), derived6(q));
    let l: [Rational; 3] = std::array::from_fn(|i| &dq.vi[i] / &dp.vi[i]);
    (scale6(&l, p).ok()? == *q).then_some(l)
}

/// `(w, v)` separates torus orbits: checks at `p` against the torus element
/// `(l1, l2)` and the scaling `scale`.
pub fn torus_quotient_check6(
    p: &ParamPoint6,
    l1: &Rational,
    l2: &Rational,
    scale: &[Rational; 3],
) -> Result<TorusCheck6, InvariantError> {
    let q = act6(&[Gen6::Torus(l1.clone(), l2.clone())], p)?;
    let (dp, dq) = (derived6(p), derived6(&q));
    let fixes_w_and_v = dp.w == dq.w && dp.v == dq.v;
    let recovered = match recover_torus(p, &q) {
        Some(l) => product(&l).is_one(),
        None => false,
    };
    let scaled = scale6(scale, p)?;
    let v_scales_by_product = derived6(&scaled).v == product(scale) * &dp.v;
    Ok(TorusCheck6 {
        fixes_w_and_v,
        recovered,
        v_scales_by_product,
    })
}
