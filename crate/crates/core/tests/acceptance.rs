//! Acceptance gate: one check per criterion, each printing a PASS/FAIL line.
//! Arithmetic is exact throughout, so every tolerance is zero; the only
//! numeric threshold is the 1 s budget of criterion 1.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use burniat_core::branch::{
    bidouble_fiber_check, branch_table, census, negative_curves, verify_branch_identities,
};
use burniat_core::cohomology::{
    chi_log, eigenspace_table, eigenspace_table_for_case, h0_log_eigensheaf, moduli_dim, Kuranishi,
};
use burniat_core::curves::{enumerate_minus1_classes, lines_on_weak_dp, lost_lines};
use burniat_core::invariants::{
    quadratic_extension_check5, verify_invariants, InvariantCase, ParamPoint5,
};
use burniat_core::plane::{
    classify, representative, sample_configs, ConfigError, InvalidBurniat, LineLabel, ProjPoint,
};
use burniat_core::rational::{random_positive, DEFAULT_SEED};
use burniat_core::{Case, DivisorClass, Effectivity, Exec, SurfaceLattice};

const LINE_COUNT_BUDGET: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cls(a: i64, b: &[i64]) -> DivisorClass {
    DivisorClass::new(a, b.to_vec())
}

/// (-1)-classes by a plain scan of `a in 0..=3`, `b_j in -2..=2`, using only
/// the intersection form.
fn brute_force_minus1(r: usize) -> Vec<DivisorClass> {
    let lat = SurfaceLattice::new(r).unwrap();
    let k = lat.canonical_class();
    let mut out = Vec::new();
    for a in 0..=3 {
        for code in 0..5usize.pow(r as u32) {
            let mut c = code;
            let b: Vec<i64> = (0..r)
                .map(|_| {
                    let v = (c % 5) as i64 - 2;
                    c /= 5;
                    v
                })
                .collect();
            let x = DivisorClass::new(a, b);
            if x.self_intersection() == -1 && x.intersect(&k).unwrap() == -1 {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (2..=5)
        .map(|r| enumerate_minus1_classes(r).unwrap().len())
        .collect();
    let elapsed = start.elapsed();
    ensure(counts == [3, 6, 10, 16], || format!("counts {counts:?}"))?;
    ensure(elapsed < LINE_COUNT_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("counts {counts:?} in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let d = cls(1, &[1, 0, 0, 1, 1]);
    let lines = lines_on_weak_dp(5, std::slice::from_ref(&d)).map_err(|e| e.to_string())?;
    ensure(lines.len() == 12, || format!("{} lines", lines.len()))?;

    let mut oracle: Vec<DivisorClass> = brute_force_minus1(5)
        .into_iter()
        .filter(|c| c.intersect(&d).unwrap() < 0)
        .collect();
    oracle.sort();
    let mut lost = lost_lines(5, std::slice::from_ref(&d)).map_err(|e| e.to_string())?;
    lost.sort();
    ensure(lost == oracle, || {
        format!("lost {lost:?}, oracle {oracle:?}")
    })?;
    let mut expected = vec![
        cls(1, &[1, 0, 0, 1, 0]),
        cls(1, &[1, 0, 0, 0, 1]),
        cls(1, &[0, 0, 0, 1, 1]),
        cls(2, &[1, 1, 1, 1, 1]),
    ];
    expected.sort();
    ensure(lost == expected, || format!("lost {lost:?}"))?;

    for r in 5..=6usize {
        let mut b = vec![0; r];
        b[0] = 1;
        b[3] = 1;
        b[4] = 1;
        let n = lost_lines(r, &[DivisorClass::new(1, b)]).unwrap().len() as u64;
        let formula = 3 + binomial(r as u64 - 3, 2);
        ensure(n == formula, || {
            format!("r = {r}: lost {n}, formula {formula}")
        })?;
    }
    Ok("12 lines, 4 lost classes match the scan, loss 3 + C(r-3,2) for r = 5, 6".into())
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (case, nu) in [
        (Case::K6, 6),
        (Case::K5, 9),
        (Case::K4NonNodal, 12),
        (Case::K4Nodal, 10),
    ] {
        let bd = branch_table(case).map_err(|e| e.to_string())?;
        let report = verify_branch_identities(&bd);
        if let Some(bad) = report.iter().find(|c| !c.pass) {
            return Err(format!("{case}: {} fails", bad.identity));
        }
        checked += report.len();
        let c = census(&bd);
        ensure(c.lines == nu, || {
            format!("{case}: {} lines, want {nu}", c.lines)
        })?;
        let k2 = case.k_squared();
        ensure(2 * c.conics as i64 == 3 * k2 - nu as i64, || {
            format!("{case}: {} conics", c.conics)
        })?;
    }
    Ok(format!(
        "{checked} identities exact; census nu = 6, 9, 12, 10"
    ))
}

fn criterion_4() -> Outcome {
    for case in Case::MAIN {
        let bd = branch_table(case).map_err(|e| e.to_string())?;
        let neg = negative_curves(&bd).map_err(|e| e.to_string())?;
        let lat = bd.lattice();
        for i in 1..=3 {
            let diff = bd.divisor(i).clone() - bd.l_class(i);
            match lat.is_effective(&diff, &neg).map_err(|e| e.to_string())? {
                Effectivity::No(_) => {}
                other => return Err(format!("{case}, i = {i}: {other:?}")),
            }
        }
    }
    Ok("|D_i - L_i| empty for all i in all four cases".into())
}

fn criterion_5() -> Outcome {
    let expected = [
        (Case::K6, [4, 0, 0, 0], [0, 2, 2, 2], vec![2, 2, 2]),
        (Case::K5, [3, 0, 0, 0], [0, 1, 1, 1], vec![1, 1, 1]),
        (Case::K4NonNodal, [2, 0, 0, 0], [0, 0, 0, 0], vec![0, 0, 0]),
        (Case::K4Nodal, [2, 1, 0, 0], [0, 1, 0, 0], vec![1, 0, 0]),
    ];
    for (case, h1, h2, h0) in expected {
        let cfg = representative(case).map_err(|e| e.to_string())?;
        let t = eigenspace_table(&cfg).map_err(|e| e.to_string())?;
        ensure(t.h1.as_array() == h1, || format!("{case}: h1 {:?}", t.h1))?;
        ensure(t.h2.as_array() == h2, || format!("{case}: h2 {:?}", t.h2))?;
        let k2 = case.k_squared();
        ensure(t.euler_sum() == -10 + 2 * k2, || {
            format!("{case}: sum {}", t.euler_sum())
        })?;
        let bd = branch_table(case).unwrap();
        for i in 1..=3 {
            let c = chi_log(&bd, i).map_err(|e| e.to_string())?;
            ensure(c == k2 - 4, || format!("{case}: chi_log({i}) = {c}"))?;
        }
        let got: Vec<usize> = (1..=3)
            .map(|i| h0_log_eigensheaf(&cfg, i).unwrap())
            .collect();
        ensure(got == h0, || format!("{case}: h0 {got:?}"))?;
    }
    Ok("tables, Euler sums, chi_log and h0 exact for K6, K5, K4nn, K4n".into())
}

fn criterion_6() -> Outcome {
    let cases = [
        Case::K6,
        Case::K5,
        Case::K4NonNodal,
        Case::K4Nodal,
        Case::K3,
    ];
    let dims: Vec<i64> = cases.iter().map(|&c| moduli_dim(c).unwrap()).collect();
    ensure(dims == [4, 3, 2, 2, 1], || format!("dims {dims:?}"))?;
    for case in Case::MAIN {
        let t = eigenspace_table_for_case(case).map_err(|e| e.to_string())?;
        ensure(t.h1.inv == moduli_dim(case).unwrap(), || {
            format!("{case}: h1[inv] = {}", t.h1.inv)
        })?;
    }
    Ok(format!("dims {dims:?}, equal to h1[inv] for K^2 >= 4"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for k in 0..100 {
        let delta = std::array::from_fn(|_| random_positive(&mut rng));
        let n = bidouble_fiber_check(&delta).map_err(|e| e.to_string())?;
        ensure(n == 4, || format!("draw {k}: {n} points"))?;
    }
    Ok("4 points over each of 100 seeded delta triples".into())
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    for case in [InvariantCase::K5, InvariantCase::K6] {
        let r = verify_invariants(case, 1000, DEFAULT_SEED, Exec::Parallel)
            .map_err(|e| e.to_string())?;
        if let Some(bad) = r.entries.iter().find(|e| e.failures > 0) {
            return Err(format!(
                "{case}: `{}` failed {} times",
                bad.identity, bad.failures
            ));
        }
        total += r.entries.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut generic = 0;
    while generic < 100 {
        match quadratic_extension_check5(&ParamPoint5::random(&mut rng)) {
            Ok(c) => {
                ensure(c.passed() && c.sigma_classes == 2, || format!("{c:?}"))?;
                generic += 1;
            }
            Err(_) => continue,
        }
    }
    Ok(format!(
        "{total} checks x 1000 trials with 0 failures; 100 generic quadratic checks"
    ))
}

fn inject_four_concurrent(cfg: &burniat_core::plane::BurniatConfig) -> Result<ConfigError, String> {
    // P = D_{1,2} . D_{2,2}; route D_{3,2} through P (pencil-valid), then put
    // a fourth, pencil-violating line through P in place of D_{1,3}
    let p = cfg
        .line(1, 2)
        .meet(cfg.line(2, 2))
        .map_err(|e| e.to_string())?;
    let d32 = ProjPoint::reference(3)
        .join(&p)
        .map_err(|e| e.to_string())?;
    let other = ProjPoint::from_ints([7, -3, 11]).unwrap();
    let fourth = p.join(&other).map_err(|e| e.to_string())?;
    let broken = cfg
        .with_line(LineLabel::new(3, 2).unwrap(), d32)
        .and_then(|c| c.with_line(LineLabel::new(1, 3).unwrap(), fourth))
        .map_err(|e| e.to_string())?;
    classify(&broken)
        .err()
        .ok_or_else(|| "four concurrent lines accepted".to_string())
}

fn criterion_9() -> Outcome {
    for case in Case::MAIN {
        let configs =
            sample_configs(case, 200, DEFAULT_SEED, Exec::Parallel).map_err(|e| e.to_string())?;
        let hits = configs
            .iter()
            .filter(|c| classify(c).map(|k| k.case == case).unwrap_or(false))
            .count();
        ensure(hits == 200, || format!("{case}: {hits}/200"))?;
        for cfg in configs.iter().take(20) {
            let err = inject_four_concurrent(cfg)?;
            ensure(
                matches!(
                    err,
                    ConfigError::InvalidBurniat(InvalidBurniat::MultiplicityTooHigh {
                        count: 4,
                        ..
                    })
                ),
                || format!("{case}: injected config gave {err}"),
            )?;
        }
    }
    Ok("200/200 per case; 4 concurrent lines rejected".into())
}

fn criterion_10() -> Outcome {
    let t = eigenspace_table_for_case(Case::K4Nodal).map_err(|e| e.to_string())?;
    match &t.kuranishi {
        Kuranishi::NonReduced {
            canonical_model_order,
            minimal_model_order,
            order_lower_bound,
            ..
        } => {
            ensure(
                canonical_model_order == "m" && minimal_model_order == "2m",
                || format!("orders {canonical_model_order}, {minimal_model_order}"),
            )?;
            ensure(*order_lower_bound == 2, || {
                format!("bound {order_lower_bound}")
            })?;
        }
        Kuranishi::Smooth => return Err("nodal case reported smooth".into()),
    }
    for case in [Case::K6, Case::K5, Case::K4NonNodal] {
        let t = eigenspace_table_for_case(case).unwrap();
        ensure(t.kuranishi == Kuranishi::Smooth, || {
            format!("{case}: not smooth")
        })?;
    }
    Ok("nilpotence order reported as symbols m, 2m (m >= 2)".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("line counts", criterion_1),
        ("nodal loss", criterion_2),
        ("branch identities", criterion_3),
        ("Galois deformations", criterion_4),
        ("cohomology tables", criterion_5),
        ("moduli dimensions", criterion_6),
        ("fiber degree", criterion_7),
        ("invariant identities", criterion_8),
        ("classification", criterion_9),
        ("symbolic nilpotence order", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", k + 1),
            Err(why) => {
                println!("criterion {:>2} {name}: FAIL ({why})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
