use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::k5::*;
use super::k6::*;
use super::InvariantError;
use crate::exec::Exec;

/// The two families with a rational parameterization checked here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantCase {
    K5,
    K6,
}

impl FromStr for InvariantCase {
    type Err = InvariantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K5" => Ok(InvariantCase::K5),
            "K6" => Ok(InvariantCase::K6),
            other => Err(InvariantError::UnsupportedCase(other.to_string())),
        }
    }
}

impl fmt::Display for InvariantCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantCase::K5 => "K5",
            InvariantCase::K6 => "K6",
        })
    }
}

/// How much a passing entry establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Rational-function identity evaluated exactly at random points.
    Identity,
    /// Separation against the full, enumerated orbit.
    ExhaustiveOrbit,
    /// Separation against randomly sampled group elements only.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub identity: &'static str,
    pub kind: CheckKind,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub case: InvariantCase,
    pub trials: usize,
    pub seed: u64,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().map(|e| e.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn entry(&self, identity: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.identity == identity)
    }
}

pub const K5_CHECKS: [(&str, CheckKind); 10] = [
    ("y invariant under cyc", CheckKind::Identity),
    ("y invariant under trans", CheckKind::Identity),
    ("y invariant under cremona", CheckKind::Identity),
    (
        "y invariant under all 12 group elements",
        CheckKind::Identity,
    ),
    ("cyc^3 = id", CheckKind::Identity),
    ("cremona^2 = id", CheckKind::Identity),
    (
        "trans . cremona = transposition of a1, a2",
        CheckKind::Identity,
    ),
    (
        "12 group elements span the generated orbit",
        CheckKind::Identity,
    ),
    (
        "two sigma-classes per y-fiber, sigma recovered",
        CheckKind::Identity,
    ),
    ("y separates distinct orbits", CheckKind::ExhaustiveOrbit),
];

pub const K6_CHECKS: [(&str, CheckKind); 14] = [
    ("invariants6 fixed by perm", CheckKind::Identity),
    ("invariants6 fixed by flip(1)", CheckKind::Identity),
    ("invariants6 fixed by flip(2)", CheckKind::Identity),
    ("invariants6 fixed by flip(3)", CheckKind::Identity),
    ("invariants6 fixed by torus", CheckKind::Identity),
    ("invariants6 fixed by cremona", CheckKind::Identity),
    ("w fixed by torus", CheckKind::Identity),
    ("cremona^2 = id", CheckKind::Identity),
    ("flips commute", CheckKind::Identity),
    ("torus elements compose componentwise", CheckKind::Identity),
    ("cremona: v_i -> v_i / u_i", CheckKind::Identity),
    ("cremona: v -> 1 / (v prod w)", CheckKind::Identity),
    ("(w, v) determines the torus orbit", CheckKind::Identity),
    (
        "invariants6 separate points off sampled orbits",
        CheckKind::Sampled,
    ),
];

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn k5_trial(rng: &mut ChaCha8Rng) -> Vec<bool> {
    let p = ParamPoint5::random(rng);
    let y = invariants5(&p);
    let a = p.a();
    let orbit = orbit5(&p);
    let mut out = vec![
        invariants5(&act5(&[Gen5::Cyc], &p)) == y,
        invariants5(&act5(&[Gen5::Trans], &p)) == y,
        invariants5(&act5(&[Gen5::Cremona], &p)) == y,
        group5().iter().all(|g| invariants5(&g.act(&p)) == y),
        act5(&[Gen5::Cyc; 3], &p) == p,
        act5(&[Gen5::Cremona; 2], &p) == p,
        act5(&[Gen5::Trans, Gen5::Cremona], &p)
            == ParamPoint5::new([a[1].clone(), a[0].clone(), a[2].clone()]).unwrap(),
        group5()
            .iter()
            .map(|g| g.act(&p))
            .collect::<std::collections::BTreeSet<_>>()
            == orbit,
    ];

    let generic = loop {
        let x = ParamPoint5::random(rng);
        match quadratic_extension_check5(&x) {
            Ok(c) => break c,
            Err(_) => continue,
        }
    };
    out.push(generic.passed());

    let other = loop {
        let x = ParamPoint5::random(rng);
        if !orbit.contains(&x) {
            break x;
        }
    };
    out.push(invariants5(&other) != y);
    out
}

fn random_word6<R: Rng + ?Sized>(rng: &mut R) -> Vec<Gen6> {
    let mut word = vec![Gen6::random_perm(rng), Gen6::random_torus(rng)];
    for i in 1..=3 {
        if rng.gen_bool(0.5) {
            word.push(Gen6::Flip(i));
        }
    }
    if rng.gen_bool(0.5) {
        word.push(Gen6::Cremona);
    }
    word
}

fn k6_trial(rng: &mut ChaCha8Rng) -> Vec<bool> {
    let p = ParamPoint6::random(rng);
    let inv = invariants6(&p);
    let fixed = |g: Gen6| {
        act6(&[g], &p)
            .map(|x| invariants6(&x) == inv)
            .unwrap_or(false)
    };

    let perm = Gen6::random_perm(rng);
    let (l1, l2) = (
        crate::rational::random_nonzero(rng),
        crate::rational::random_nonzero(rng),
    );
    let (m1, m2) = (
        crate::rational::random_nonzero(rng),
        crate::rational::random_nonzero(rng),
    );
    let torus = Gen6::Torus(l1.clone(), l2.clone());
    let d = derived6(&p);

    let mut out = vec![
        fixed(perm),
        fixed(Gen6::Flip(1)),
        fixed(Gen6::Flip(2)),
        fixed(Gen6::Flip(3)),
        fixed(torus.clone()),
        fixed(Gen6::Cremona),
        act6(std::slice::from_ref(&torus), &p)
            .map(|x| derived6(&x).w == d.w)
            .unwrap_or(false),
        act6(&[Gen6::Cremona, Gen6::Cremona], &p).ok() == Some(p.clone()),
        [(1, 2), (1, 3), (2, 3)].iter().all(|&(i, j)| {
            act6(&[Gen6::Flip(i), Gen6::Flip(j)], &p) == act6(&[Gen6::Flip(j), Gen6::Flip(i)], &p)
        }),
        act6(&[torus.clone(), Gen6::Torus(m1.clone(), m2.clone())], &p)
            == act6(&[Gen6::Torus(&l1 * &m1, &l2 * &m2)], &p),
    ];
    let dc = derived6(&act6(&[Gen6::Cremona], &p).unwrap());
    out.push((0..3).all(|i| dc.vi[i] == &d.vi[i] / &d.u[i]));
    let pw = &d.w[0] * &d.w[1] * &d.w[2];
    out.push(dc.v == (&pw * &d.v).recip());

    let scale = std::array::from_fn(|_| crate::rational::random_nonzero(rng));
    out.push(
        torus_quotient_check6(&p, &l1, &l2, &scale)
            .map(|c| c.passed())
            .unwrap_or(false),
    );

    let sampled: Vec<ParamPoint6> = (0..8)
        .filter_map(|_| act6(&random_word6(rng), &p).ok())
        .collect();
    let other = loop {
        let x = ParamPoint6::random(rng);
        if x != p && !sampled.contains(&x) {
            break x;
        }
    };
    out.push(invariants6(&other) != inv && sampled.iter().all(|x| invariants6(x) == inv));
    out
}

/// Runs every check of the case on `trials` seeded random points. Trial `t`
/// draws from stream `t` of the seeded generator, so the report does not
/// depend on the execution mode.
pub fn verify_invariants(
    case: InvariantCase,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<SuiteReport, InvariantError> {
    if trials == 0 {
        return Err(InvariantError::NoTrials);
    }
    let (checks, outcomes): (&[(&'static str, CheckKind)], Vec<Vec<bool>>) = match case {
        InvariantCase::K5 => (
            &K5_CHECKS,
            exec.map_range(trials, |t| k5_trial(&mut trial_rng(seed, t))),
        ),
        InvariantCase::K6 => (
            &K6_CHECKS,
            exec.map_range(trials, |t| k6_trial(&mut trial_rng(seed, t))),
        ),
    };
    let entries = checks
        .iter()
        .enumerate()
        .map(|(k, &(identity, kind))| SuiteEntry {
            identity,
            kind,
            trials,
            failures: outcomes.iter().filter(|o| !o[k]).count(),
        })
        .collect();
    Ok(SuiteReport {
        case,
        trials,
        seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::DEFAULT_SEED;

    #[test]
    fn small_runs_pass() {
        for case in [InvariantCase::K5, InvariantCase::K6] {
            let r = verify_invariants(case, 20, DEFAULT_SEED, Exec::Sequential).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn modes_agree() {
        let a = verify_invariants(InvariantCase::K6, 16, 3, Exec::Sequential).unwrap();
        let b = verify_invariants(InvariantCase::K6, 16, 3, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_trials() {
        assert_eq!(
            verify_invariants(InvariantCase::K5, 0, 1, Exec::Sequential),
            Err(InvariantError::NoTrials)
        );
        assert!("K4n".parse::<InvariantCase>().is_err());
    }
}
