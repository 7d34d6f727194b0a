//! Branch divisors of the bidouble covers on the (weak) Del Pezzo surface.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::case::Case;
use crate::curves::{lines_on_weak_dp, CurveError};
use crate::lattice::{DivisorClass, Effectivity, LatticeError, SurfaceLattice};
use crate::plane::LineLabel;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("case {0} has no branch table")]
    Unsupported(Case),
    #[error("effectivity of {class} is undecided; cannot certify")]
    Inconclusive { class: DivisorClass },
    #[error("delta entries must be positive, got {0}")]
    NonPositiveDelta(String),
    #[error("m = {0} is outside 0..=4")]
    TripleCountOutOfRange(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Curves(#[from] CurveError),
}

/// `i mod 3` in `1..=3`.
pub fn cyclic(i: usize) -> usize {
    (i + 2) % 3 + 1
}

/// A component of `D_i`: one of the three lines or the exceptional curve
/// `E_{i+2}` over the corner `P_{i+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentLabel {
    Line(LineLabel),
    Exceptional(usize),
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Line(l) => l.fmt(f),
            ComponentLabel::Exceptional(i) => write!(f, "D{i},E"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchComponent {
    pub label: ComponentLabel,
    pub class: DivisorClass,
}

/// Classes of the branch data on the blown-up plane: `r = 3` for `K6`,
/// 4 for `K5`, 5 for both `K^2 = 4` cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchData {
    pub case: Case,
    pub r: usize,
    /// Four components per `D_i`, `i = 1, 2, 3`.
    pub components: [Vec<BranchComponent>; 3],
    /// `D_i` as the sum of its components.
    pub divisors: [DivisorClass; 3],
    /// `L_i = 3L - E_{i+1} - 2E_{i-1} - sum_{k>=4} E_k`.
    pub l_classes: [DivisorClass; 3],
    /// Irreducible (-2)-curves of the surface.
    pub minus_two: Vec<DivisorClass>,
}

impl BranchData {
    pub fn lattice(&self) -> SurfaceLattice {
        SurfaceLattice::new(self.r).unwrap()
    }

    pub fn component(&self, i: usize, j: usize) -> &DivisorClass {
        &self.components[i - 1][j - 1].class
    }

    pub fn divisor(&self, i: usize) -> &DivisorClass {
        &self.divisors[cyclic(i) - 1]
    }

    pub fn l_class(&self, i: usize) -> &DivisorClass {
        &self.l_classes[cyclic(i) - 1]
    }

    pub fn component_classes(&self, i: usize) -> Vec<DivisorClass> {
        self.components[cyclic(i) - 1]
            .iter()
            .map(|c| c.class.clone())
            .collect()
    }

    /// Replaces a line class and recomputes `D_i`; `L_i` is left as
    /// tabulated. Used as a negative control for the identity checks.
    pub fn with_component(&self, label: LineLabel, class: DivisorClass) -> BranchData {
        let mut out = self.clone();
        let i = label.pencil();
        out.components[i - 1][label.member() - 1].class = class;
        out.divisors[i - 1] = sum(&out.component_classes(i), self.r);
        out
    }
}

fn sum(classes: &[DivisorClass], r: usize) -> DivisorClass {
    classes.iter().fold(DivisorClass::zero(r), |acc, c| acc + c)
}

/// Class of the strict transform of `D'_{i,j}`.
fn line_class(case: Case, lat: &SurfaceLattice, i: usize, j: usize) -> DivisorClass {
    let through: Vec<usize> = match (case, j) {
        (_, 1) => vec![i, cyclic(i + 1)],
        (Case::K6, _) => vec![i],
        (Case::K5, 2) => vec![i, 4],
        (Case::K5, _) => vec![i],
        (Case::K4NonNodal, 2) => vec![i, 4],
        (Case::K4NonNodal, _) => vec![i, 5],
        (Case::K4Nodal, 2) if i == 1 => vec![1, 4, 5],
        (Case::K4Nodal, _) if i == 1 => vec![1],
        (Case::K4Nodal, 2) => vec![i, 4],
        (Case::K4Nodal, _) => vec![i, 5],
        (Case::K3 | Case::K2, _) => unreachable!(),
    };
    lat.curve_through(1, &through).unwrap()
}

/// Branch classes for one of the four cases with `K^2 >= 4`.
pub fn branch_table(case: Case) -> Result<BranchData, BranchError> {
    if !Case::MAIN.contains(&case) {
        return Err(BranchError::Unsupported(case));
    }
    let r = case.blowups();
    let lat = SurfaceLattice::new(r)?;
    let extra: DivisorClass = (4..=r).fold(lat.zero(), |acc, k| acc + lat.exceptional(k).unwrap());

    let components: [Vec<BranchComponent>; 3] = std::array::from_fn(|k| {
        let i = k + 1;
        let mut v: Vec<BranchComponent> = (1..=3)
            .map(|j| BranchComponent {
                label: ComponentLabel::Line(LineLabel::new(i as u8, j as u8).unwrap()),
                class: line_class(case, &lat, i, j),
            })
            .collect();
        v.push(BranchComponent {
            label: ComponentLabel::Exceptional(i),
            class: lat.exceptional(cyclic(i + 2)).unwrap(),
        });
        v
    });
    let divisors = std::array::from_fn(|k| {
        sum(
            &components[k]
                .iter()
                .map(|c| c.class.clone())
                .collect::<Vec<_>>(),
            r,
        )
    });
    let l_classes = std::array::from_fn(|k| {
        let i = k + 1;
        3 * lat.line()
            - lat.exceptional(cyclic(i + 1)).unwrap()
            - 2 * lat.exceptional(cyclic(i + 2)).unwrap()
            - &extra
    });
    let minus_two = if case == Case::K4Nodal {
        vec![lat.curve_through(1, &[1, 4, 5])?]
    } else {
        vec![]
    };
    Ok(BranchData {
        case,
        r,
        components,
        divisors,
        l_classes,
        minus_two,
    })
}

/// The table of `case` with one line class altered: an `E_4` swapped for
/// `E_5` where the case has both, otherwise a wrong `E_j`.
pub fn tampered_branch_table(case: Case) -> Result<BranchData, BranchError> {
    let bd = branch_table(case)?;
    let lat = bd.lattice();
    let (label, class) = match case {
        Case::K6 => ((1, 2), lat.curve_through(1, &[2])?),
        Case::K5 => ((1, 2), lat.curve_through(1, &[1, 2])?),
        Case::K4NonNodal => ((1, 2), lat.curve_through(1, &[1, 5])?),
        _ => ((2, 2), lat.curve_through(1, &[2, 5])?),
    };
    Ok(bd.with_component(LineLabel::new(label.0, label.1).unwrap(), class))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: DivisorClass,
    pub rhs: DivisorClass,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(identity: String, lhs: DivisorClass, rhs: DivisorClass) -> Self {
        let pass = lhs == rhs;
        IdentityCheck {
            identity,
            lhs,
            rhs,
            pass,
        }
    }
}

/// Linear-equivalence identities between `D_i`, `L_i` and `K`, for each
/// `i`. Failures are entries with `pass = false`.
pub fn verify_branch_identities(bd: &BranchData) -> Vec<IdentityCheck> {
    let lat = bd.lattice();
    let minus_k = lat.anticanonical_class();
    let e = |k: usize| lat.exceptional(cyclic(k)).unwrap();
    let extra: DivisorClass =
        (4..=bd.r).fold(lat.zero(), |acc, k| acc + lat.exceptional(k).unwrap());
    let mut out = Vec::new();
    for i in 1..=3 {
        let d = bd.divisor(i).clone();
        let l = bd.l_class(i).clone();
        let prev = bd.divisor(i + 2).clone();
        let next = bd.divisor(i + 1).clone();
        out.push(IdentityCheck::new(
            format!("D{i} = -K - 2E{} + 2E{}", cyclic(i), cyclic(i + 2)),
            d.clone(),
            minus_k.clone() - 2 * e(i) + 2 * e(i + 2),
        ));
        out.push(IdentityCheck::new(
            format!("L{i} = -K + E{} - E{}", cyclic(i), cyclic(i + 2)),
            l.clone(),
            minus_k.clone() + e(i) - e(i + 2),
        ));
        out.push(IdentityCheck::new(
            format!("D{i} - L{i} = -3E{} + 3E{}", cyclic(i), cyclic(i + 2)),
            d - &l,
            3 * e(i + 2) - 3 * e(i),
        ));
        out.push(IdentityCheck::new(
            format!("2L{i} = D{} + D{}", cyclic(i + 2), cyclic(i + 1)),
            2 * l,
            prev.clone() + &next,
        ));
        out.push(IdentityCheck::new(
            format!(
                "D{} + D{} = 6L - 4E{} - 2E{} - 2(E4 + ... + E{})",
                cyclic(i + 2),
                cyclic(i + 1),
                cyclic(i + 2),
                cyclic(i + 1),
                bd.r
            ),
            prev + &next,
            6 * lat.line() - 4 * e(i + 2) - 2 * e(i + 1) - 2 * extra.clone(),
        ));
    }
    out
}

/// What a component becomes on the anticanonical model, by its degree
/// `C.(-K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentImage {
    Contracted,
    Line,
    Conic,
    Other(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub label: ComponentLabel,
    pub class: DivisorClass,
    pub anticanonical_degree: i64,
    pub image: ComponentImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
    pub lines: usize,
    pub conics: usize,
    pub contracted: usize,
    /// `sum_i D_i^2`.
    pub sum_d_squared: i64,
}

impl Census {
    /// `conics = (3K^2 - lines) / 2`.
    pub fn conic_relation_holds(&self, k_squared: i64) -> bool {
        2 * self.conics as i64 == 3 * k_squared - self.lines as i64
    }
}

pub fn census(bd: &BranchData) -> Census {
    let lat = bd.lattice();
    let minus_k = lat.anticanonical_class();
    let entries: Vec<CensusEntry> = bd
        .components
        .iter()
        .flatten()
        .map(|c| {
            let deg = c.class.intersect(&minus_k).unwrap();
            let image = match deg {
                0 => ComponentImage::Contracted,
                1 => ComponentImage::Line,
                2 => ComponentImage::Conic,
                d => ComponentImage::Other(d),
            };
            CensusEntry {
                label: c.label,
                class: c.class.clone(),
                anticanonical_degree: deg,
                image,
            }
        })
        .collect();
    let count = |k: ComponentImage| entries.iter().filter(|e| e.image == k).count();
    Census {
        lines: count(ComponentImage::Line),
        conics: count(ComponentImage::Conic),
        contracted: count(ComponentImage::Contracted),
        sum_d_squared: bd.divisors.iter().map(|d| d.self_intersection()).sum(),
        entries,
    }
}

/// Negative curves used for the effectivity tests: the lines of the
/// surface and its (-2)-curves.
pub fn negative_curves(bd: &BranchData) -> Result<Vec<DivisorClass>, BranchError> {
    let mut out = lines_on_weak_dp(bd.r, &bd.minus_two)?.classes;
    out.extend(bd.minus_two.iter().cloned());
    Ok(out)
}

/// `true` iff every class is certified non-effective.
pub fn all_non_effective(
    lat: &SurfaceLattice,
    classes: &[DivisorClass],
    negatives: &[DivisorClass],
) -> Result<bool, BranchError> {
    let mut all_no = true;
    for c in classes {
        match lat.is_effective(c, negatives)? {
            Effectivity::Undecided => return Err(BranchError::Inconclusive { class: c.clone() }),
            Effectivity::Yes(_) => all_no = false,
            Effectivity::No(_) => {}
        }
    }
    Ok(all_no)
}

/// `|D_i - L_i|` is empty for all `i`, so every natural deformation of the
/// cover is again a bidouble cover.
pub fn natural_deformations_galois(
    bd: &BranchData,
    negatives: &[DivisorClass],
) -> Result<bool, BranchError> {
    let diffs: Vec<DivisorClass> = (1..=3)
        .map(|i| bd.divisor(i).clone() - bd.l_class(i))
        .collect();
    all_non_effective(&bd.lattice(), &diffs, negatives)
}

/// `s * sqrt(q)` with `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SignedSqrt {
    negative: bool,
    radicand: Rational,
}

impl SignedSqrt {
    fn mul(&self, other: &SignedSqrt) -> SignedSqrt {
        SignedSqrt {
            negative: self.negative != other.negative,
            radicand: &self.radicand * &other.radicand,
        }
    }

    /// Multiplication by a positive rational.
    fn scale(&self, c: &Rational) -> SignedSqrt {
        SignedSqrt {
            negative: self.negative,
            radicand: &self.radicand * c * c,
        }
    }

    fn square(&self) -> Rational {
        self.radicand.clone()
    }
}

/// Number of real points over a point where the branch equations take the
/// values `delta`, i.e. solutions of
/// `u1 u2 = d1 u3, u2 u3 = d2 u1, u3 u1 = d3 u2, u1^2 = d3 d1, u2^2 = d1 d2,
/// u3^2 = d2 d3`.
pub fn bidouble_fiber_check(delta: &[Rational; 3]) -> Result<usize, BranchError> {
    if delta.iter().any(|d| !d.is_positive()) {
        let shown: Vec<String> = delta.iter().map(|d| d.to_string()).collect();
        return Err(BranchError::NonPositiveDelta(shown.join(", ")));
    }
    let [d1, d2, d3] = delta;
    let squares = [d3 * d1, d1 * d2, d2 * d3];
    let mut count = 0;
    for signs in 0u8..8 {
        let u: Vec<SignedSqrt> = (0..3)
            .map(|k| SignedSqrt {
                negative: signs >> k & 1 == 1,
                radicand: squares[k].clone(),
            })
            .collect();
        let ok = u[0].mul(&u[1]) == u[2].scale(d1)
            && u[1].mul(&u[2]) == u[0].scale(d2)
            && u[2].mul(&u[0]) == u[1].scale(d3)
            && (0..3).all(|k| u[k].square() == squares[k]);
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// `K_S^2 = 6 - m` for `m` triple points.
pub fn k_squared(m: i64) -> Result<i64, BranchError> {
    if !(0..=4).contains(&m) {
        return Err(BranchError::TripleCountOutOfRange(m));
    }
    Ok(6 - m)
}
