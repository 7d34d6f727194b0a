use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{Rational, RationalJson};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("homogeneous coordinates are all zero")]
    ZeroVector,
    #[error("expected exactly 3 homogeneous coordinates, got {0}")]
    WrongArity(usize),
    #[error("bad rational: {0}")]
    BadRational(String),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("at most 8 points can be blown up, got {0}")]
    TooManyPoints(usize),
    #[error("the two lines coincide")]
    SameLine,
    #[error("the two points coincide")]
    SamePoint,
}

fn normalize(mut v: [Rational; 3]) -> Result<[Rational; 3], GeometryError> {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .cloned()
        .ok_or(GeometryError::ZeroVector)?;
    if !lead.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &lead;
        }
    }
    Ok(v)
}

fn dot(u: &[Rational; 3], v: &[Rational; 3]) -> Rational {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn cross(u: &[Rational; 3], v: &[Rational; 3]) -> [Rational; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn triple_from_json(v: Vec<RationalJson>) -> Result<[Rational; 3], GeometryError> {
    if v.len() != 3 {
        return Err(GeometryError::WrongArity(v.len()));
    }
    let parsed: Vec<Rational> = v
        .iter()
        .map(|j| Rational::try_from(j).map_err(|e| GeometryError::BadRational(e.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(parsed.try_into().unwrap())
}

macro_rules! homogeneous_triple {
    ($name:ident, $field:ident) => {
        impl $name {
            pub fn new($field: [Rational; 3]) -> Result<Self, GeometryError> {
                Ok($name {
                    $field: normalize($field)?,
                })
            }

            pub fn from_ints(v: [i64; 3]) -> Result<Self, GeometryError> {
                Self::new(v.map(crate::rational::q))
            }

            /// Representative scaled so the first nonzero entry is 1.
            pub fn $field(&self) -> &[Rational; 3] {
                &self.$field
            }
        }

        impl TryFrom<Vec<RationalJson>> for $name {
            type Error = GeometryError;

            fn try_from(v: Vec<RationalJson>) -> Result<Self, Self::Error> {
                Self::new(triple_from_json(v)?)
            }
        }

        impl From<$name> for Vec<RationalJson> {
            fn from(p: $name) -> Self {
                p.$field.iter().map(RationalJson::from).collect()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [x, y, z] = &self.$field;
                write!(f, "({x}:{y}:{z})")
            }
        }
    };
}

/// Point of the projective plane, kept in normalized form so equality and
/// hashing respect rescaling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<RationalJson>", into = "Vec<RationalJson>")]
pub struct ProjPoint {
    coords: [Rational; 3],
}

/// Line `c_1 x_1 + c_2 x_2 + c_3 x_3 = 0`, normalized like [`ProjPoint`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<RationalJson>", into = "Vec<RationalJson>")]
pub struct ProjLine {
    coeffs: [Rational; 3],
}

homogeneous_triple!(ProjPoint, coords);
homogeneous_triple!(ProjLine, coeffs);

impl ProjPoint {
    /// Coordinate point `P_i` (1-based): `(1:0:0)`, `(0:1:0)`, `(0:0:1)`.
    pub fn reference(i: usize) -> ProjPoint {
        let mut v = [0, 0, 0];
        v[i - 1] = 1;
        ProjPoint::from_ints(v).unwrap()
    }

    /// Line through two distinct points.
    pub fn join(&self, other: &ProjPoint) -> Result<ProjLine, GeometryError> {
        ProjLine::new(cross(&self.coords, &other.coords)).map_err(|_| GeometryError::SamePoint)
    }

    /// `x_1^2, x_2^2, x_3^2, x_1 x_2, x_1 x_3, x_2 x_3`.
    pub fn veronese(&self) -> [Rational; 6] {
        let [x, y, z] = &self.coords;
        [x * x, y * y, z * z, x * y, x * z, y * z]
    }
}

impl ProjLine {
    /// Intersection point of two distinct lines.
    pub fn meet(&self, other: &ProjLine) -> Result<ProjPoint, GeometryError> {
        ProjPoint::new(cross(&self.coeffs, &other.coeffs)).map_err(|_| GeometryError::SameLine)
    }
}

pub fn incident(p: &ProjPoint, l: &ProjLine) -> bool {
    dot(p.coords(), l.coeffs()).is_zero()
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, s: &ProjPoint) -> bool {
    dot(&cross(p.coords(), q.coords()), s.coords()).is_zero()
}

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[rank][col];
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][col..ncols].iter_mut().zip(&top[rank][col..ncols]) {
                *x -= &factor * p;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square rational matrix.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// True when the points lie on a common (possibly degenerate) conic.
pub fn on_common_conic(points: &[&ProjPoint]) -> bool {
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| p.veronese().to_vec()).collect();
    rank(&rows) < 6
}

fn check_distinct(points: &[ProjPoint]) -> Result<(), GeometryError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(GeometryError::DuplicatePoint(i, j));
            }
        }
    }
    Ok(())
}

/// Largest number of the points on one line.
pub fn max_collinear(points: &[ProjPoint]) -> usize {
    let mut best = points.len().min(2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let Ok(l) = points[i].join(&points[j]) else {
                continue;
            };
            best = best.max(points.iter().filter(|p| incident(p, &l)).count());
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Blowing up distinct points gives a weak Del Pezzo surface iff no 4 of
/// them are collinear and no 7 lie on a conic.
pub fn is_weak_del_pezzo_pointset(points: &[ProjPoint]) -> Result<bool, GeometryError> {
    if points.len() > 8 {
        return Err(GeometryError::TooManyPoints(points.len()));
    }
    check_distinct(points)?;
    if max_collinear(points) >= 4 {
        return Ok(false);
    }
    for idx in subsets(points.len(), 7) {
        let chosen: Vec<&ProjPoint> = idx.iter().map(|&i| &points[i]).collect();
        if on_common_conic(&chosen) {
            return Ok(false);
        }
    }
    Ok(true)
}
