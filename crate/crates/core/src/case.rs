use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Burniat family, indexed by `K_S^2` (and the nodal/non-nodal split at 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    K6,
    K5,
    #[serde(rename = "K4nn")]
    K4NonNodal,
    #[serde(rename = "K4n")]
    K4Nodal,
    K3,
    K2,
}

/// Name used for the surface in the primary/secondary/... terminology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Primary,
    Secondary,
    Tertiary,
    Quaternary,
}

impl Case {
    /// The four families with `K^2 >= 4`, in table order.
    pub const MAIN: [Case; 4] = [Case::K6, Case::K5, Case::K4NonNodal, Case::K4Nodal];

    /// Number of `(1,1,1)` triple points of the branch arrangement.
    pub fn triple_points(self) -> usize {
        match self {
            Case::K6 => 0,
            Case::K5 => 1,
            Case::K4NonNodal | Case::K4Nodal => 2,
            Case::K3 => 3,
            Case::K2 => 4,
        }
    }

    pub fn k_squared(self) -> i64 {
        6 - self.triple_points() as i64
    }

    /// Number of points blown up on the plane to reach the (weak) Del Pezzo
    /// surface carrying the branch divisor.
    pub fn blowups(self) -> usize {
        3 + self.triple_points()
    }

    pub fn is_nodal(self) -> bool {
        self == Case::K4Nodal
    }

    pub fn kind(self) -> SurfaceKind {
        match self.triple_points() {
            0 => SurfaceKind::Primary,
            1 | 2 => SurfaceKind::Secondary,
            3 => SurfaceKind::Tertiary,
            _ => SurfaceKind::Quaternary,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Case::K6 => "K6",
            Case::K5 => "K5",
            Case::K4NonNodal => "K4nn",
            Case::K4Nodal => "K4n",
            Case::K3 => "K3",
            Case::K2 => "K2",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown case `{0}` (expected K6, K5, K4nn, K4n, K3 or K2)")]
pub struct ParseCaseError(pub String);

impl FromStr for Case {
    type Err = ParseCaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K6" => Ok(Case::K6),
            "K5" => Ok(Case::K5),
            "K4nn" => Ok(Case::K4NonNodal),
            "K4n" => Ok(Case::K4Nodal),
            "K3" => Ok(Case::K3),
            "K2" => Ok(Case::K2),
            other => Err(ParseCaseError(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_squared_is_six_minus_m() {
        assert_eq!(Case::K6.k_squared(), 6);
        assert_eq!(Case::K5.k_squared(), 5);
        assert_eq!(Case::K4Nodal.k_squared(), 4);
        assert_eq!(Case::K2.k_squared(), 2);
        assert_eq!(Case::K4NonNodal.kind(), SurfaceKind::Secondary);
        assert_eq!(Case::K3.kind(), SurfaceKind::Tertiary);
    }

    #[test]
    fn parse_roundtrip() {
        for c in [
            Case::K6,
            Case::K5,
            Case::K4NonNodal,
            Case::K4Nodal,
            Case::K3,
            Case::K2,
        ] {
            assert_eq!(c.as_str().parse::<Case>().unwrap(), c);
        }
        assert!("K7".parse::<Case>().is_err());
    }
}
