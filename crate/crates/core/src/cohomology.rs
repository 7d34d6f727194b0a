//! Euler characteristics on the blown-up plane and the eigenspace
//! dimensions of the tangent sheaf cohomology of Burniat surfaces.

use std::fmt::Write as _;

use serde::Serialize;

use crate::branch::{branch_table, cyclic, BranchData, BranchError};
use crate::case::Case;
use crate::lattice::{DivisorClass, LatticeError, SurfaceLattice};
use crate::plane::{classify, representative, BurniatConfig, ConfigError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("case {0} is out of scope for the eigenspace table (needs K^2 in 4..=6)")]
    Unsupported(Case),
    #[error("character index {0} outside 1..=3")]
    BadIndex(usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `chi(O(c)) = 1 + c.(c - K)/2`.
pub fn rr_chi(c: &DivisorClass, lat: &SurfaceLattice) -> Result<i64, LatticeError> {
    lat.euler_characteristic(c)
}

/// `chi` of the restriction of `O(m)` to a disjoint union of smooth rational
/// curves: `sum (1 + m.c)`.
pub fn chi_on_branch(components: &[DivisorClass], m: &DivisorClass) -> Result<i64, LatticeError> {
    components.iter().map(|c| Ok(1 + m.intersect(c)?)).sum()
}

/// `chi(Omega^1(m)) = 2 + m^2 - e` on a rational surface with Euler number
/// `e = 12 - K^2`.
pub fn chi_omega1_twist(m: &DivisorClass, lat: &SurfaceLattice) -> Result<i64, LatticeError> {
    if m.r() != lat.r() {
        return Err(LatticeError::DimensionMismatch {
            left: m.r(),
            right: lat.r(),
        });
    }
    Ok(2 + m.self_intersection() - lat.euler_number())
}

/// Twist `E_i - E_{i+2}` of the `i`-th eigensheaf.
pub fn eigen_twist(lat: &SurfaceLattice, i: usize) -> DivisorClass {
    lat.exceptional(cyclic(i)).unwrap() - lat.exceptional(cyclic(i + 2)).unwrap()
}

/// `chi(Omega^1(log D_i)(E_i - E_{i+2}))`, from the residue sequence.
pub fn chi_log(bd: &BranchData, i: usize) -> Result<i64, CohomologyError> {
    if !(1..=3).contains(&i) {
        return Err(CohomologyError::BadIndex(i));
    }
    let lat = bd.lattice();
    let m = eigen_twist(&lat, i);
    Ok(chi_omega1_twist(&m, &lat)? + chi_on_branch(&bd.component_classes(i), &m)?)
}

/// `h^0` of the `i`-th log eigensheaf: one less than the number of lines
/// `D'_{i,j}` avoiding every off-corner triple point (zero if none do).
pub fn h0_log_eigensheaf(cfg: &BurniatConfig, i: usize) -> Result<usize, CohomologyError> {
    if !(1..=3).contains(&i) {
        return Err(CohomologyError::BadIndex(i));
    }
    let cls = classify(cfg)?;
    let free = (1..=3)
        .filter(|&j| {
            let l = cfg.line(i, j);
            cls.triple_points
                .iter()
                .all(|p| !crate::plane::incident(&p.point, l))
        })
        .count();
    Ok(free.saturating_sub(1))
}

/// Enriques-Kuranishi with `chi(O_S) = 1`.
pub fn chi_theta(k_squared: i64) -> i64 {
    -10 + 2 * k_squared
}

/// Dimension of the family of Burniat surfaces of the given case.
pub fn moduli_dim(case: Case) -> Result<i64, CohomologyError> {
    match case {
        Case::K6 => Ok(4),
        Case::K5 => Ok(3),
        Case::K4NonNodal | Case::K4Nodal => Ok(2),
        Case::K3 => Ok(1),
        Case::K2 => Err(CohomologyError::Unsupported(case)),
    }
}

/// One value per character of `(Z/2)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacterValues {
    pub inv: i64,
    #[serde(rename = "1")]
    pub chi1: i64,
    #[serde(rename = "2")]
    pub chi2: i64,
    #[serde(rename = "3")]
    pub chi3: i64,
}

impl CharacterValues {
    pub fn as_array(&self) -> [i64; 4] {
        [self.inv, self.chi1, self.chi2, self.chi3]
    }

    pub fn nontrivial(&self, i: usize) -> i64 {
        self.as_array()[i]
    }

    pub fn total(&self) -> i64 {
        self.as_array().iter().sum()
    }
}

/// Local structure of the moduli space at a point of the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kuranishi {
    Smooth,
    /// `C^2 x Spec C[t]/(t^m)` for the canonical model and `t^{2m}` for
    /// the minimal model, with `m >= 2` unknown.
    NonReduced {
        reduced_dimension: i64,
        canonical_model_order: String,
        minimal_model_order: String,
        order_lower_bound: i64,
    },
}

impl Kuranishi {
    pub fn for_case(case: Case) -> Kuranishi {
        if case.is_nodal() {
            Kuranishi::NonReduced {
                reduced_dimension: 2,
                canonical_model_order: "m".into(),
                minimal_model_order: "2m".into(),
                order_lower_bound: 2,
            }
        } else {
            Kuranishi::Smooth
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenspaceTable {
    pub case: Case,
    pub k_squared: i64,
    pub h1: CharacterValues,
    pub h2: CharacterValues,
    pub chi_log: [i64; 3],
    pub chi_theta: i64,
    pub moduli_dim: i64,
    pub kuranishi: Kuranishi,
}

/// Assembles `h^1(Theta_S)` and `h^2(Theta_S)` per character for a
/// classified configuration with `K^2 >= 4`.
pub fn eigenspace_table(cfg: &BurniatConfig) -> Result<EigenspaceTable, CohomologyError> {
    let case = classify(cfg)?.case;
    if !Case::MAIN.contains(&case) {
        return Err(CohomologyError::Unsupported(case));
    }
    let bd = branch_table(case)?;
    let k2 = case.k_squared();

    let mut h2 = [0i64; 4];
    let mut h1 = [0i64; 4];
    let mut chi = [0i64; 3];
    for i in 1..=3 {
        chi[i - 1] = chi_log(&bd, i)?;
        if chi[i - 1] != k2 - 4 {
            return Err(CohomologyError::Inconsistent(format!(
                "chi_log({i}) = {} but K^2 - 4 = {}",
                chi[i - 1],
                k2 - 4
            )));
        }
        h2[i] = h0_log_eigensheaf(cfg, i)? as i64;
        h1[i] = h2[i] - chi[i - 1];
    }
    let theta = chi_theta(k2);
    h1[0] = (1..=3).map(|i| h2[i] - h1[i]).sum::<i64>() - theta;

    if let Some(k) = h1.iter().chain(&h2).position(|&v| v < 0) {
        return Err(CohomologyError::Inconsistent(format!(
            "negative dimension at slot {k}"
        )));
    }
    let dim = moduli_dim(case)?;
    if dim != h1[0] {
        return Err(CohomologyError::Inconsistent(format!(
            "invariant h^1 = {} but the family has dimension {dim}",
            h1[0]
        )));
    }
    let values = |v: [i64; 4]| CharacterValues {
        inv: v[0],
        chi1: v[1],
        chi2: v[2],
        chi3: v[3],
    };
    Ok(EigenspaceTable {
        case,
        k_squared: k2,
        h1: values(h1),
        h2: values(h2),
        chi_log: chi,
        chi_theta: theta,
        moduli_dim: dim,
        kuranishi: Kuranishi::for_case(case),
    })
}

/// Table for the representative configuration of `case`.
pub fn eigenspace_table_for_case(case: Case) -> Result<EigenspaceTable, CohomologyError> {
    if !Case::MAIN.contains(&case) {
        return Err(CohomologyError::Unsupported(case));
    }
    eigenspace_table(&representative(case)?)
}

impl EigenspaceTable {
    /// `sum over characters (h^2 - h^1)`, which must equal `chi_theta`.
    pub fn euler_sum(&self) -> i64 {
        self.h2.total() - self.h1.total()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case {}  K^2 = {}", self.case, self.k_squared);
        let _ = writeln!(s, "{:<6}{:>5}{:>5}{:>5}{:>5}", "", "inv", "1", "2", "3");
        for (name, row) in [("h1", &self.h1), ("h2", &self.h2)] {
            let [a, b, c, d] = row.as_array();
            let _ = writeln!(s, "{name:<6}{a:>5}{b:>5}{c:>5}{d:>5}");
        }
        let _ = writeln!(s, "chi(Theta) = {}", self.chi_theta);
        let _ = writeln!(s, "moduli dimension = {}", self.moduli_dim);
        match &self.kuranishi {
            Kuranishi::Smooth => {
                let _ = writeln!(s, "Kuranishi base: smooth");
            }
            Kuranishi::NonReduced {
                reduced_dimension,
                canonical_model_order,
                minimal_model_order,
                order_lower_bound,
            } => {
                let _ = writeln!(
                    s,
                    "Kuranishi base: C^{reduced_dimension} x Spec C[t]/(t^{canonical_model_order}) \
                     (minimal model: t^{minimal_model_order}), {canonical_model_order} >= {order_lower_bound}"
                );
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,inv,1,2,3\n");
        for (name, row) in [("h1", &self.h1), ("h2", &self.h2)] {
            let [a, b, c, d] = row.as_array();
            let _ = writeln!(s, "{name},{a},{b},{c},{d}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(r: usize) -> SurfaceLattice {
        SurfaceLattice::new(r).unwrap()
    }

    #[test]
    fn riemann_roch_examples() {
        let y = lat(5);
        assert_eq!(rr_chi(&y.zero(), &y), Ok(1));
        assert_eq!(rr_chi(&y.canonical_class(), &y), Ok(1));
        // h^0 = h^1 = 0 for -L_i, and h^2(-L_i) = h^0(K + L_i) = 0
        let bd = branch_table(Case::K5).unwrap();
        for i in 1..=3 {
            assert_eq!(rr_chi(&-bd.l_class(i).clone(), &bd.lattice()), Ok(0));
        }
    }

    #[test]
    fn branch_chi() {
        let bd = branch_table(Case::K6).unwrap();
        let y = bd.lattice();
        for i in 1..=3 {
            let comps = bd.component_classes(i);
            assert_eq!(chi_on_branch(&comps, &eigen_twist(&y, i)), Ok(8));
            assert_eq!(chi_on_branch(&comps, &y.zero()), Ok(4));
        }
        let y1 = lat(1);
        let l_minus_e1 = y1.line() - y1.exceptional(1).unwrap();
        assert_eq!(
            chi_on_branch(&[l_minus_e1], &y1.exceptional(1).unwrap()),
            Ok(2)
        );
    }

    #[test]
    fn omega_twist() {
        let y4 = lat(4);
        assert_eq!(chi_omega1_twist(&eigen_twist(&y4, 1), &y4), Ok(-7));
        assert_eq!(chi_omega1_twist(&lat(0).zero(), &lat(0)), Ok(-1));
        assert_eq!(chi_omega1_twist(&lat(5).zero(), &lat(5)), Ok(-6));
    }

    #[test]
    fn log_chi_per_case() {
        for (case, want) in [
            (Case::K6, 2),
            (Case::K5, 1),
            (Case::K4NonNodal, 0),
            (Case::K4Nodal, 0),
        ] {
            let bd = branch_table(case).unwrap();
            for i in 1..=3 {
                assert_eq!(chi_log(&bd, i), Ok(want));
            }
        }
    }

    #[test]
    fn theta_chi() {
        assert_eq!(chi_theta(6), 2);
        assert_eq!(chi_theta(5), 0);
        assert_eq!(chi_theta(4), -2);
    }

    #[test]
    fn h0_values() {
        let h0 = |case| {
            let cfg = representative(case).unwrap();
            (1..=3)
                .map(|i| h0_log_eigensheaf(&cfg, i).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(h0(Case::K6), vec![2, 2, 2]);
        assert_eq!(h0(Case::K5), vec![1, 1, 1]);
        assert_eq!(h0(Case::K4NonNodal), vec![0, 0, 0]);
        assert_eq!(h0(Case::K4Nodal), vec![1, 0, 0]);
    }

    #[test]
    fn tables() {
        let t = eigenspace_table_for_case(Case::K4Nodal).unwrap();
        assert_eq!(t.h1.as_array(), [2, 1, 0, 0]);
        assert_eq!(t.h2.as_array(), [0, 1, 0, 0]);
        assert_eq!(t.euler_sum(), t.chi_theta);
        assert!(matches!(t.kuranishi, Kuranishi::NonReduced { .. }));
        assert!(t.to_text().contains("t^m"));
        assert!(t.to_csv().starts_with("row,inv,1,2,3\nh1,2,1,0,0\n"));
        assert!(matches!(
            eigenspace_table_for_case(Case::K3),
            Err(CohomologyError::Unsupported(Case::K3))
        ));
    }

    #[test]
    fn moduli_dimensions() {
        let dims: Vec<i64> = [
            Case::K6,
            Case::K5,
            Case::K4NonNodal,
            Case::K4Nodal,
            Case::K3,
        ]
        .into_iter()
        .map(|c| moduli_dim(c).unwrap())
        .collect();
        assert_eq!(dims, vec![4, 3, 2, 2, 1]);
    }
}
