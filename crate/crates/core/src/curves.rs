//! (-1)- and (-2)-classes on blow-ups of the plane, and lines on (weak)
//! Del Pezzo surfaces.
//!
//! A class `C = aL - sum b_j E_j` with `C^2 = C.K = -1` satisfies
//! `a^2 + 1 = sum b_j^2` and `sum b_j = 3a - 1`; a (-2)-class satisfies
//! `a^2 + 2 = sum b_j^2` and `sum b_j = 3a`. Classes contained in an
//! anticanonical divisor have `0 <= a <= 3`, which is the search range.
//! For `r = 8` this range does not exhaust the lattice roots and exceptional
//! classes; only the classes with `a <= 3` are produced.

use serde::Serialize;

use crate::exec::Exec;
use crate::lattice::{DivisorClass, SurfaceLattice, MAX_BLOWUPS};

/// Largest `a` searched.
pub const MAX_DEGREE: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("number of blown-up points {0} outside 0..=8")]
    OutOfRange(usize),
    #[error("{class} is not a (-2)-class on the plane blown up at {r} points")]
    NotMinusTwo { class: DivisorClass, r: usize },
    #[error("{first} and {second} meet negatively, so they cannot both be irreducible")]
    IncompatibleMinusTwo {
        first: DivisorClass,
        second: DivisorClass,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Minus1,
    Minus2,
}

impl CurveKind {
    pub fn self_intersection(self) -> i64 {
        match self {
            CurveKind::Minus1 => -1,
            CurveKind::Minus2 => -2,
        }
    }

    pub fn canonical_degree(self) -> i64 {
        match self {
            CurveKind::Minus1 => -1,
            CurveKind::Minus2 => 0,
        }
    }
}

/// Sorted, duplicate-free list of classes of one kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClassList {
    pub r: usize,
    pub kind: CurveKind,
    pub classes: Vec<DivisorClass>,
}

impl CurveClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &DivisorClass) -> bool {
        self.classes.binary_search(c).is_ok()
    }
}

pub fn enumerate_minus1_classes(r: usize) -> Result<CurveClassList, CurveError> {
    enumerate_classes_with(r, CurveKind::Minus1, Exec::default())
}

pub fn enumerate_minus2_classes(r: usize) -> Result<CurveClassList, CurveError> {
    enumerate_classes_with(r, CurveKind::Minus2, Exec::default())
}

/// Enumerates all classes of `kind` with `0 <= a <= 3`, splitting the search
/// on `(a, b_1)`. Output is sorted lexicographically on `(a, b)`.
pub fn enumerate_classes_with(
    r: usize,
    kind: CurveKind,
    exec: Exec,
) -> Result<CurveClassList, CurveError> {
    if r > MAX_BLOWUPS {
        return Err(CurveError::OutOfRange(r));
    }
    let shift = -kind.self_intersection();
    let mut tasks = Vec::new();
    for a in 0..=MAX_DEGREE {
        let sumsq = a * a + shift;
        // C.K = -3a + sum b_j
        let sum = 3 * a + kind.canonical_degree();
        let bound = isqrt(sumsq);
        if r == 0 {
            tasks.push((a, sumsq, sum, None));
        } else {
            for first in -bound..=bound {
                tasks.push((a, sumsq, sum, Some(first)));
            }
        }
    }
    let chunks = exec.map(tasks, |(a, sumsq, sum, first)| {
        let mut out = Vec::new();
        let mut b = Vec::with_capacity(r);
        match first {
            None => {
                if sumsq == 0 && sum == 0 {
                    out.push(DivisorClass::new(a, Vec::new()));
                }
            }
            Some(f) => {
                if f * f <= sumsq {
                    b.push(f);
                    search(a, r, sumsq - f * f, sum - f, &mut b, &mut out);
                }
            }
        }
        out
    });
    let mut classes: Vec<DivisorClass> = chunks.into_iter().flatten().collect();
    classes.sort();
    classes.dedup();
    Ok(CurveClassList { r, kind, classes })
}

fn search(
    a: i64,
    r: usize,
    sq_left: i64,
    sum_left: i64,
    b: &mut Vec<i64>,
    out: &mut Vec<DivisorClass>,
) {
    let slots = (r - b.len()) as i64;
    if slots == 0 {
        if sq_left == 0 && sum_left == 0 {
            out.push(DivisorClass::new(a, b.clone()));
        }
        return;
    }
    // Cauchy-Schwarz: (sum of the rest)^2 <= slots * (squares of the rest).
    if sum_left * sum_left > slots * sq_left {
        return;
    }
    let bound = isqrt(sq_left);
    for v in -bound..=bound {
        b.push(v);
        search(a, r, sq_left - v * v, sum_left - v, b, out);
        b.pop();
    }
}

fn isqrt(n: i64) -> i64 {
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A priori line bound `N(r) = r + C(r,2) + C(r,5)`: the number of
/// (-1)-classes with `a <= 2`.
pub fn max_line_count(r: usize) -> Result<u64, CurveError> {
    if r > MAX_BLOWUPS {
        return Err(CurveError::OutOfRange(r));
    }
    let r = r as u64;
    Ok(r + binomial(r, 2) + binomial(r, 5))
}

/// Number of lines lost to a single (-2)-curve `L - E_i - E_j - E_k` when
/// `r <= 6`: three lines `L - E_i - E_j` and `C(r-3, 2)` conics through five
/// points containing `i, j, k`.
pub fn single_nodal_loss(r: usize) -> u64 {
    3 + binomial(r.saturating_sub(3) as u64, 2)
}

/// Weak Del Pezzo surfaces that are not blow-ups of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuledModel {
    /// `P^1 x P^1`.
    F0,
    F2,
}

/// Neither quadric model carries a line.
pub fn ruled_model_line_count(_model: RuledModel) -> usize {
    0
}

fn validate_minus2(r: usize, effective_minus2: &[DivisorClass]) -> Result<(), CurveError> {
    let lat = SurfaceLattice::new(r).map_err(|_| CurveError::OutOfRange(r))?;
    for d in effective_minus2 {
        let ok = lat.contains(d)
            && d.self_intersection() == -2
            && lat.canonical_degree(d) == Ok(0)
            && (0..=MAX_DEGREE).contains(&d.a);
        if !ok {
            return Err(CurveError::NotMinusTwo {
                class: d.clone(),
                r,
            });
        }
    }
    for (k, d) in effective_minus2.iter().enumerate() {
        for e in &effective_minus2[k + 1..] {
            if d != e && d.intersect(e).unwrap() < 0 {
                return Err(CurveError::IncompatibleMinusTwo {
                    first: d.clone(),
                    second: e.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Lines of the anticanonical model of the weak Del Pezzo surface whose
/// irreducible (-2)-curves are `effective_minus2`: the (-1)-classes meeting
/// every such curve nonnegatively.
pub fn lines_on_weak_dp(
    r: usize,
    effective_minus2: &[DivisorClass],
) -> Result<CurveClassList, CurveError> {
    validate_minus2(r, effective_minus2)?;
    let all = enumerate_minus1_classes(r)?;
    let classes = all
        .classes
        .into_iter()
        .filter(|c| {
            effective_minus2
                .iter()
                .all(|d| c.intersect(d).unwrap() >= 0)
        })
        .collect();
    Ok(CurveClassList {
        r,
        kind: CurveKind::Minus1,
        classes,
    })
}

/// The (-1)-classes that stop being lines because some curve in
/// `effective_minus2` meets them negatively.
pub fn lost_lines(
    r: usize,
    effective_minus2: &[DivisorClass],
) -> Result<Vec<DivisorClass>, CurveError> {
    let kept = lines_on_weak_dp(r, effective_minus2)?;
    Ok(enumerate_minus1_classes(r)?
        .classes
        .into_iter()
        .filter(|c| !kept.contains(c))
        .collect())
}
