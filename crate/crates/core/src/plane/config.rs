use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{collinear, incident, GeometryError, ProjLine, ProjPoint};
use crate::case::{Case, SurfaceKind};
use crate::exec::Exec;
use crate::rational::{self, Rational, RationalJson};

/// `(i, j)`: member `j` of the pencil through `P_i`. Member 1 is the side
/// of the coordinate triangle through `P_i` and `P_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u8, u8)", into = "(u8, u8)")]
pub struct LineLabel {
    pencil: u8,
    member: u8,
}

impl LineLabel {
    pub fn new(pencil: u8, member: u8) -> Result<Self, ConfigError> {
        if !(1..=3).contains(&pencil) || !(1..=3).contains(&member) {
            return Err(ConfigError::BadLabel(pencil, member));
        }
        Ok(LineLabel { pencil, member })
    }

    pub fn pencil(&self) -> usize {
        self.pencil as usize
    }

    pub fn member(&self) -> usize {
        self.member as usize
    }

    pub fn all() -> impl Iterator<Item = LineLabel> {
        (1..=3u8).flat_map(|i| {
            (1..=3u8).map(move |j| LineLabel {
                pencil: i,
                member: j,
            })
        })
    }
}

impl TryFrom<(u8, u8)> for LineLabel {
    type Error = ConfigError;

    fn try_from((i, j): (u8, u8)) -> Result<Self, Self::Error> {
        LineLabel::new(i, j)
    }
}

impl From<LineLabel> for (u8, u8) {
    fn from(l: LineLabel) -> Self {
        (l.pencil, l.member)
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{},{}", self.pencil, self.member)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledLine {
    pub label: LineLabel,
    pub coeffs: ProjLine,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line label ({0},{1}) outside 1..=3")]
    BadLabel(u8, u8),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate configuration: {0}")]
    Degenerate(Degeneracy),
    #[error("not a Burniat configuration: {0}")]
    InvalidBurniat(InvalidBurniat),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Degeneracy {
    #[error("{0} and {1} are the same line")]
    RepeatedLine(LineLabel, LineLabel),
    #[error("pencil parameter for {0} is zero, so the line is a side of the triangle")]
    ZeroParameter(LineLabel),
    #[error("point {0} lies on a side of the coordinate triangle")]
    PointOnTriangle(String),
    #[error("nodal case needs P1, P4, P5 collinear")]
    NodalPointsNotCollinear,
    #[error("labels must be exactly the nine (i,j) with i,j in 1..=3")]
    WrongLabelSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidBurniat {
    #[error("{count} lines pass through {point}")]
    MultiplicityTooHigh { point: String, count: usize },
    #[error("{first} and {second} meet at the triple point {point}")]
    SamePencil {
        point: String,
        first: LineLabel,
        second: LineLabel,
    },
    #[error("{0} does not belong to its pencil")]
    PencilViolation(LineLabel),
    #[error("{0} triple points; at most 4 are possible")]
    TooManyTriplePoints(usize),
}

impl From<Degeneracy> for ConfigError {
    fn from(d: Degeneracy) -> Self {
        ConfigError::Degenerate(d)
    }
}

impl From<InvalidBurniat> for ConfigError {
    fn from(e: InvalidBurniat) -> Self {
        ConfigError::InvalidBurniat(e)
    }
}

// x_k, 1-based and mod 3, as a 0-based index.
fn idx(k: usize) -> usize {
    (k - 1) % 3
}

/// Side `D_{i,1}`: the line `x_{i+2} = 0` through `P_i` and `P_{i+1}`.
pub fn side(i: usize) -> ProjLine {
    let mut c = [0, 0, 0];
    c[idx(i + 2)] = 1;
    ProjLine::from_ints(c).unwrap()
}

/// Member `x_{i+2} = c x_{i+1}` of the pencil through `P_i`.
pub fn pencil_line(i: usize, c: &Rational) -> ProjLine {
    let mut v = [Rational::zero(), Rational::zero(), Rational::zero()];
    v[idx(i + 1)] = c.clone();
    v[idx(i + 2)] = -Rational::one();
    ProjLine::new(v).unwrap()
}

/// Parameter `c = x_{i+2} / x_{i+1}` of the pencil-`i` line through `p`, or
/// `None` when that line is a side.
pub fn pencil_parameter(i: usize, p: &ProjPoint) -> Option<Rational> {
    let x = p.coords();
    let den = &x[idx(i + 1)];
    let num = &x[idx(i + 2)];
    if den.is_zero() || num.is_zero() {
        return None;
    }
    Some(num / den)
}

/// Parameter of a non-side line through `P_i`, read back from its
/// coefficients.
fn parameter_of(i: usize, l: &ProjLine) -> Option<Rational> {
    let c = l.coeffs();
    if !c[idx(i)].is_zero() || c[idx(i + 1)].is_zero() || c[idx(i + 2)].is_zero() {
        return None;
    }
    Some(-(&c[idx(i + 1)] / &c[idx(i + 2)]))
}

/// Per-case construction data. Lines not forced through `P_4`/`P_5` are
/// given by their pencil parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BurniatParams {
    /// `D_{i,2}: x_{i+2} = a_i x_{i+1}`, `D_{i,3}: x_{i+2} = b_i x_{i+1}`.
    K6 { a: [Rational; 3], b: [Rational; 3] },
    /// `D_{i,2}` through `P_4`; `D_{i,3}` free with parameter `b_i`.
    K5 { p4: ProjPoint, b: [Rational; 3] },
    /// `D_{i,2}` through `P_4`, `D_{i,3}` through `P_5`.
    K4NonNodal { p4: ProjPoint, p5: ProjPoint },
    /// `D_{1,2}` through `P_4, P_5` (with `P_1, P_4, P_5` collinear), `D_{1,3}`
    /// free with parameter `b_1`, `D_{i,2}` through `P_4` and `D_{i,3}` through
    /// `P_5` for `i = 2, 3`.
    K4Nodal {
        p4: ProjPoint,
        p5: ProjPoint,
        b1: Rational,
    },
}

impl BurniatParams {
    pub fn case(&self) -> Case {
        match self {
            BurniatParams::K6 { .. } => Case::K6,
            BurniatParams::K5 { .. } => Case::K5,
            BurniatParams::K4NonNodal { .. } => Case::K4NonNodal,
            BurniatParams::K4Nodal { .. } => Case::K4Nodal,
        }
    }

    pub fn extra_points(&self) -> Vec<ProjPoint> {
        match self {
            BurniatParams::K6 { .. } => vec![],
            BurniatParams::K5 { p4, .. } => vec![p4.clone()],
            BurniatParams::K4NonNodal { p4, p5 } | BurniatParams::K4Nodal { p4, p5, .. } => {
                vec![p4.clone(), p5.clone()]
            }
        }
    }

    /// Free rational parameters in file order: `a_1..a_3, b_1..b_3` (K6),
    /// `b_1..b_3` (K5), none (K4nn), `b_1` (K4n).
    pub fn scalars(&self) -> Vec<Rational> {
        match self {
            BurniatParams::K6 { a, b } => a.iter().chain(b).cloned().collect(),
            BurniatParams::K5 { b, .. } => b.to_vec(),
            BurniatParams::K4NonNodal { .. } => vec![],
            BurniatParams::K4Nodal { b1, .. } => vec![b1.clone()],
        }
    }

    pub fn from_parts(
        case: Case,
        scalars: &[Rational],
        extra_points: &[ProjPoint],
    ) -> Result<Self, ConfigError> {
        let want = |ns: usize, np: usize| -> Result<(), ConfigError> {
            if scalars.len() != ns || extra_points.len() != np {
                return Err(ConfigError::Input(format!(
                    "case {case} takes {ns} parameters and {np} extra points, got {} and {}",
                    scalars.len(),
                    extra_points.len()
                )));
            }
            Ok(())
        };
        let triple =
            |s: &[Rational]| -> [Rational; 3] { [s[0].clone(), s[1].clone(), s[2].clone()] };
        match case {
            Case::K6 => {
                want(6, 0)?;
                Ok(BurniatParams::K6 {
                    a: triple(&scalars[..3]),
                    b: triple(&scalars[3..]),
                })
            }
            Case::K5 => {
                want(3, 1)?;
                Ok(BurniatParams::K5 {
                    p4: extra_points[0].clone(),
                    b: triple(scalars),
                })
            }
            Case::K4NonNodal => {
                want(0, 2)?;
                Ok(BurniatParams::K4NonNodal {
                    p4: extra_points[0].clone(),
                    p5: extra_points[1].clone(),
                })
            }
            Case::K4Nodal => {
                want(1, 2)?;
                Ok(BurniatParams::K4Nodal {
                    p4: extra_points[0].clone(),
                    p5: extra_points[1].clone(),
                    b1: scalars[0].clone(),
                })
            }
            Case::K3 | Case::K2 => Err(ConfigError::Input(format!(
                "construction of case {case} is not supported"
            ))),
        }
    }
}

/// Nine labelled lines, sorted by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurniatConfig {
    pub case: Option<Case>,
    pub params: Option<BurniatParams>,
    pub extra_points: Vec<ProjPoint>,
    lines: Vec<LabeledLine>,
}

impl BurniatConfig {
    /// Checks that the labels are exactly the nine `(i, j)` and that the
    /// lines are pairwise distinct.
    pub fn from_lines(
        mut lines: Vec<LabeledLine>,
        extra_points: Vec<ProjPoint>,
    ) -> Result<Self, ConfigError> {
        lines.sort_by_key(|l| l.label);
        let labels: Vec<LineLabel> = lines.iter().map(|l| l.label).collect();
        if labels != LineLabel::all().collect::<Vec<_>>() {
            return Err(Degeneracy::WrongLabelSet.into());
        }
        for (k, l) in lines.iter().enumerate() {
            if let Some(m) = lines[k + 1..].iter().find(|m| m.coeffs == l.coeffs) {
                return Err(Degeneracy::RepeatedLine(l.label, m.label).into());
            }
        }
        Ok(BurniatConfig {
            case: None,
            params: None,
            extra_points,
            lines,
        })
    }

    pub fn lines(&self) -> &[LabeledLine] {
        &self.lines
    }

    pub fn line(&self, i: usize, j: usize) -> &ProjLine {
        &self.lines[3 * (i - 1) + (j - 1)].coeffs
    }

    /// Replaces one line; used to build deliberately broken configurations.
    pub fn with_line(&self, label: LineLabel, coeffs: ProjLine) -> Result<Self, ConfigError> {
        let mut lines = self.lines.clone();
        lines[3 * (label.pencil() - 1) + (label.member() - 1)].coeffs = coeffs;
        let mut cfg = BurniatConfig::from_lines(lines, self.extra_points.clone())?;
        cfg.case = self.case;
        Ok(cfg)
    }
}

/// Builds the nine lines for the given parameters.
pub fn build_burniat_lines(params: &BurniatParams) -> Result<BurniatConfig, ConfigError> {
    let through = |i: usize, p: &ProjPoint| -> Result<Rational, ConfigError> {
        pencil_parameter(i, p).ok_or_else(|| Degeneracy::PointOnTriangle(p.to_string()).into())
    };
    let (a, b): ([Rational; 3], [Rational; 3]) = match params {
        BurniatParams::K6 { a, b } => (a.clone(), b.clone()),
        BurniatParams::K5 { p4, b } => (
            [through(1, p4)?, through(2, p4)?, through(3, p4)?],
            b.clone(),
        ),
        BurniatParams::K4NonNodal { p4, p5 } => (
            [through(1, p4)?, through(2, p4)?, through(3, p4)?],
            [through(1, p5)?, through(2, p5)?, through(3, p5)?],
        ),
        BurniatParams::K4Nodal { p4, p5, b1 } => {
            // validates P5 off the triangle before the collinearity test
            through(1, p5)?;
            if !collinear(&ProjPoint::reference(1), p4, p5) {
                return Err(Degeneracy::NodalPointsNotCollinear.into());
            }
            (
                [through(1, p4)?, through(2, p4)?, through(3, p4)?],
                [b1.clone(), through(2, p5)?, through(3, p5)?],
            )
        }
    };

    let mut lines = Vec::with_capacity(9);
    for i in 1..=3usize {
        lines.push(LabeledLine {
            label: LineLabel::new(i as u8, 1)?,
            coeffs: side(i),
        });
        for (j, c) in [(2u8, &a[i - 1]), (3u8, &b[i - 1])] {
            let label = LineLabel::new(i as u8, j)?;
            if c.is_zero() {
                return Err(Degeneracy::ZeroParameter(label).into());
            }
            lines.push(LabeledLine {
                label,
                coeffs: pencil_line(i, c),
            });
        }
    }
    let mut cfg = BurniatConfig::from_lines(lines, params.extra_points())?;
    cfg.case = Some(params.case());
    cfg.params = Some(params.clone());
    Ok(cfg)
}

/// A fixed generic configuration for each constructible case.
pub fn representative(case: Case) -> Result<BurniatConfig, ConfigError> {
    let pt = |v: [i64; 3]| ProjPoint::from_ints(v).unwrap();
    let q = rational::q;
    let params = match case {
        Case::K6 => BurniatParams::K6 {
            a: [q(2), q(3), q(5)],
            b: [q(7), q(11), q(13)],
        },
        Case::K5 => BurniatParams::K5 {
            p4: pt([1, 1, 1]),
            b: [q(2), q(3), q(5)],
        },
        Case::K4NonNodal => BurniatParams::K4NonNodal {
            p4: pt([1, 1, 1]),
            p5: pt([1, 2, 5]),
        },
        Case::K4Nodal => BurniatParams::K4Nodal {
            p4: pt([1, 1, 1]),
            p5: pt([3, 1, 1]),
            b1: q(4),
        },
        Case::K3 | Case::K2 => {
            return Err(ConfigError::Input(format!(
                "construction of case {case} is not supported"
            )))
        }
    };
    build_burniat_lines(&params)
}

/// A point of the arrangement where at least two lines meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplePoint {
    pub point: ProjPoint,
    pub multiplicity: usize,
    pub labels: Vec<LineLabel>,
    /// `Some(i)` when the point is the reference point `P_i`.
    pub corner: Option<usize>,
}

/// Points where at least `min_multiplicity` of the lines meet, corners first,
/// then ordered by normalized coordinates.
pub fn multiple_points(lines: &[LabeledLine], min_multiplicity: usize) -> Vec<MultiplePoint> {
    let mut incidence: BTreeMap<ProjPoint, BTreeSet<LineLabel>> = BTreeMap::new();
    for (k, l) in lines.iter().enumerate() {
        for m in &lines[k + 1..] {
            if let Ok(p) = l.coeffs.meet(&m.coeffs) {
                let set = incidence.entry(p).or_default();
                set.insert(l.label);
                set.insert(m.label);
            }
        }
    }
    let corners: Vec<ProjPoint> = (1..=3).map(ProjPoint::reference).collect();
    let mut out: Vec<MultiplePoint> = incidence
        .into_iter()
        .filter(|(_, s)| s.len() >= min_multiplicity)
        .map(|(point, labels)| {
            let corner = corners.iter().position(|c| *c == point).map(|k| k + 1);
            MultiplePoint {
                multiplicity: labels.len(),
                labels: labels.into_iter().collect(),
                point,
                corner,
            }
        })
        .collect();
    out.sort_by(|x, y| {
        (x.corner.is_none(), x.corner, &x.point).cmp(&(y.corner.is_none(), y.corner, &y.point))
    });
    out
}

/// All points of multiplicity at least 3, corners included and tagged.
pub fn find_triple_points(cfg: &BurniatConfig) -> Vec<MultiplePoint> {
    multiple_points(cfg.lines(), 3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: Case,
    pub kind: SurfaceKind,
    pub m: usize,
    pub k_squared: i64,
    pub nodal: bool,
    /// Off-corner triple points.
    pub triple_points: Vec<MultiplePoint>,
    pub corners: Vec<MultiplePoint>,
}

fn check_pencils(cfg: &BurniatConfig) -> Result<(), InvalidBurniat> {
    for i in 1..=3usize {
        for j in 1..=3usize {
            let label = LineLabel::new(i as u8, j as u8).unwrap();
            let l = cfg.line(i, j);
            let ok = if j == 1 {
                *l == side(i)
            } else {
                incident(&ProjPoint::reference(i), l) && (1..=3).all(|k| *l != side(k))
            };
            if !ok {
                return Err(InvalidBurniat::PencilViolation(label));
            }
        }
    }
    Ok(())
}

/// Reads off `m`, `K^2`, the family and the nodal flag from the arrangement.
pub fn classify(cfg: &BurniatConfig) -> Result<Classification, ConfigError> {
    let points = find_triple_points(cfg);
    let (corners, off): (Vec<_>, Vec<_>) = points.iter().cloned().partition(|p| p.corner.is_some());
    for p in &off {
        if p.multiplicity >= 4 {
            return Err(InvalidBurniat::MultiplicityTooHigh {
                point: p.point.to_string(),
                count: p.multiplicity,
            }
            .into());
        }
        for (k, x) in p.labels.iter().enumerate() {
            if let Some(y) = p.labels[k + 1..].iter().find(|y| y.pencil == x.pencil) {
                return Err(InvalidBurniat::SamePencil {
                    point: p.point.to_string(),
                    first: *x,
                    second: *y,
                }
                .into());
            }
        }
    }
    check_pencils(cfg)?;

    let nodal = cfg.lines().iter().any(|l| {
        points
            .iter()
            .filter(|p| incident(&p.point, &l.coeffs))
            .count()
            >= 3
    });
    let m = off.len();
    let case = match m {
        0 => Case::K6,
        1 => Case::K5,
        2 if nodal => Case::K4Nodal,
        2 => Case::K4NonNodal,
        3 => Case::K3,
        4 => Case::K2,
        _ => return Err(InvalidBurniat::TooManyTriplePoints(m).into()),
    };
    Ok(Classification {
        case,
        kind: case.kind(),
        m,
        k_squared: 6 - m as i64,
        nodal,
        triple_points: off,
        corners,
    })
}

/// Number of choices of one non-side line per pencil whose parameters
/// multiply to 1, i.e. that are concurrent off the triangle.
pub fn concurrent_pencil_triples(cfg: &BurniatConfig) -> usize {
    let params: Vec<Vec<Rational>> = (1..=3)
        .map(|i| {
            (2..=3)
                .filter_map(|j| parameter_of(i, cfg.line(i, j)))
                .collect()
        })
        .collect();
    let mut count = 0;
    for x in &params[0] {
        for y in &params[1] {
            for z in &params[2] {
                if (x * y * z).is_one() {
                    count += 1;
                }
            }
        }
    }
    count
}

fn random_point<R: Rng>(rng: &mut R) -> ProjPoint {
    ProjPoint::new([
        rational::random_nonzero(rng),
        rational::random_nonzero(rng),
        rational::random_nonzero(rng),
    ])
    .unwrap()
}

fn random_triple<R: Rng>(rng: &mut R) -> [Rational; 3] {
    [
        rational::random_nonzero(rng),
        rational::random_nonzero(rng),
        rational::random_nonzero(rng),
    ]
}

fn draw_params<R: Rng>(case: Case, rng: &mut R) -> Option<BurniatParams> {
    Some(match case {
        Case::K6 => BurniatParams::K6 {
            a: random_triple(rng),
            b: random_triple(rng),
        },
        Case::K5 => BurniatParams::K5 {
            p4: random_point(rng),
            b: random_triple(rng),
        },
        Case::K4NonNodal => BurniatParams::K4NonNodal {
            p4: random_point(rng),
            p5: random_point(rng),
        },
        Case::K4Nodal => {
            let p4 = random_point(rng);
            let t = rational::random_nonzero(rng);
            let x = p4.coords();
            let p5 = ProjPoint::new([&x[0] + t, x[1].clone(), x[2].clone()]).ok()?;
            BurniatParams::K4Nodal {
                p4,
                p5,
                b1: rational::random_nonzero(rng),
            }
        }
        Case::K3 | Case::K2 => return None,
    })
}

/// Draws parameters for `case` whose configuration is generic for it: the
/// build succeeds and the only concurrences off the triangle are the
/// intended ones. Degenerate draws are rejected and redrawn.
pub fn sample_params<R: Rng>(case: Case, rng: &mut R) -> Result<BurniatParams, ConfigError> {
    if matches!(case, Case::K3 | Case::K2) {
        return Err(ConfigError::Input(format!(
            "sampling case {case} is not supported"
        )));
    }
    loop {
        let Some(params) = draw_params(case, rng) else {
            continue;
        };
        let Ok(cfg) = build_burniat_lines(&params) else {
            continue;
        };
        if concurrent_pencil_triples(&cfg) == case.triple_points() {
            return Ok(params);
        }
    }
}

/// `n` generic configurations; draw `k` uses stream `k` of the seeded
/// generator so the output does not depend on scheduling.
pub fn sample_configs(
    case: Case,
    n: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<BurniatConfig>, ConfigError> {
    exec.map_range(n, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        sample_params(case, &mut rng).and_then(|p| build_burniat_lines(&p))
    })
    .into_iter()
    .collect()
}

/// JSON form of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(default)]
    pub params: Vec<RationalJson>,
    #[serde(default)]
    pub extra_points: Vec<ProjPoint>,
    /// When empty the lines are rebuilt from `case`, `params` and
    /// `extra_points`.
    #[serde(default)]
    pub lines: Vec<LabeledLine>,
}

impl From<&BurniatConfig> for ConfigFile {
    fn from(cfg: &BurniatConfig) -> Self {
        ConfigFile {
            case: cfg.case,
            params: cfg
                .params
                .as_ref()
                .map(|p| p.scalars().iter().map(RationalJson::from).collect())
                .unwrap_or_default(),
            extra_points: cfg.extra_points.clone(),
            lines: cfg.lines.clone(),
        }
    }
}

impl TryFrom<ConfigFile> for BurniatConfig {
    type Error = ConfigError;

    fn try_from(f: ConfigFile) -> Result<Self, Self::Error> {
        let scalars: Vec<Rational> = f
            .params
            .iter()
            .map(|j| Rational::try_from(j).map_err(|e| ConfigError::Input(e.to_string())))
            .collect::<Result<_, _>>()?;
        let params = match f.case {
            Some(case) if !matches!(case, Case::K3 | Case::K2) => {
                Some(BurniatParams::from_parts(case, &scalars, &f.extra_points))
            }
            _ => None,
        };
        if f.lines.is_empty() {
            let case = f
                .case
                .ok_or_else(|| ConfigError::Input("config has neither lines nor case".into()))?;
            let params = params.unwrap_or_else(|| {
                Err(ConfigError::Input(format!(
                    "cannot build case {case} from parameters"
                )))
            })?;
            return build_burniat_lines(&params);
        }
        let mut cfg = BurniatConfig::from_lines(f.lines, f.extra_points)?;
        cfg.case = f.case;
        cfg.params = params.and_then(Result::ok);
        Ok(cfg)
    }
}
