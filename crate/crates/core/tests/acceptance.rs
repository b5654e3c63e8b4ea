//! One line per acceptance criterion. Criteria listed in `EXPECTED_FAIL`
//! are implemented literally and fail for a documented reason; the target
//! exits non-zero if any criterion deviates from its expected outcome.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use enumirror::cli::{run, RunConfig};
use enumirror::mirrorcheck::{chi_independence, mirror_w0, mirror_w_positive, Convention};
use enumirror::mmseries::{exps_printed, table1_report, table2_report, table2_row_100_discrepancy, vw_hat_b_t, Row};
use enumirror::modforms::check_genser;
use enumirror::numerictau::{check_calu_transform, check_e2_transform, check_eta_transform, check_tau_mirror};
use enumirror::qminv::{derive_from_mm, qm_series, qm_series_r2, qm_w0, InvariantKey, Role};
use enumirror::swlattice::{count_all_nk_bruteforce, count_nk_closed, g1_count_note, DEFAULT_BUDGET};
use enumirror::wallcross::{
    d_independence_check, default_u, enumerate_um, euler_cross_check, solve_degree_class, vanishing_verdict,
    wallcross_delta, Delta, KNumClass, Verdict,
};
use enumirror::algebra::ExactCoeff;

const GENSER_ORDER: i64 = 60;
const PIPELINE_ORDER: i64 = 40;
const NUMERIC_ORDER: i64 = 80;
const NUMERIC_TOL: f64 = 1e-6;
const MIRROR_SECONDS: f64 = 10.0;
const GENSER_SECONDS: f64 = 1.0;

/// Criteria that fail by design, with the reason printed next to them.
const EXPECTED_FAIL: [(u32, &str); 1] = [(
    1,
    "each theta/E2 combination equals minus its stated closed form; sign flip confirmed on all three",
)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn c1_genser() -> Outcome {
    let t = Instant::now();
    let rows: Vec<_> = (1..=3).map(|i| check_genser(i, GENSER_ORDER)).collect::<Result<_, _>>().map_err(e)?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < GENSER_SECONDS, format!("took {secs:.2}s"))?;
    let literal = rows.iter().filter(|r| r.equal).count();
    let negated = rows.iter().filter(|r| r.equal_to_negative).count();
    ensure(
        literal == 3,
        format!("{literal}/3 equal as stated; {negated}/3 equal after negating the closed form"),
    )?;
    Ok(format!("3/3 to order {GENSER_ORDER} in {secs:.2}s"))
}

fn c2_table1() -> Outcome {
    let mut cells = 0;
    for g in 2..=6 {
        for c in table1_report(g).map_err(e)? {
            ensure(c.matches, format!("g={g} row {} j={}: {} vs {}", c.row, c.j, c.computed, c.printed))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, g = 2..6"))
}

fn c3_table2() -> Outcome {
    let mut mismatched = 0;
    for g in 2..=6 {
        for c in table2_report(g).map_err(e)? {
            if !c.matches {
                ensure(c.row == Row::D1M0A0.label(), format!("unexpected mismatch g={g} row {}", c.row))?;
                mismatched += 1;
            }
        }
        for (d, a) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            ensure(vw_hat_b_t(d, a, g).map_err(e)? == exps_printed(d, a, g), format!("summed line g={g} ({d},{a})"))?;
        }
        let disc = table2_row_100_discrepancy(g).map_err(e)?.ok_or(format!("g={g}: discrepancy not detected"))?;
        ensure(disc.index_only && disc.computed_index == 1 && disc.printed_index == 2, format!("g={g}: {disc:?}"))?;
    }
    Ok(format!("summed lines match g = 2..6; row (1,0,0) calU1 vs printed calU2 detected ({mismatched} cells)"))
}

fn c4_pipeline() -> Outcome {
    let mut n = 0;
    for g in 2..=5 {
        for role in [Role::SL, Role::PGL] {
            for k in InvariantKey::all(role, 2, g).map_err(e)? {
                let d = derive_from_mm(&k, PIPELINE_ORDER).map_err(e)?;
                ensure(d == qm_series(&k).map_err(e)?, format!("{k:?}: {d}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} keys, g = 2..5"))
}

fn c5_mirror_wpos() -> Outcome {
    let t = Instant::now();
    let mut keys = 0;
    let mut alt_nonzero = 0;
    for r in [2, 3, 5] {
        for g in [2, 3] {
            let a = mirror_w_positive(r, g, Convention::Mixed, None).map_err(e)?;
            ensure(a.pass, format!("r={r} g={g}: {} nonzero residuals", a.failing()))?;
            ensure(a.keys.len() == (r * r) as usize, "key count")?;
            keys += a.keys.len();
            let b = mirror_w_positive(r, g, Convention::Primed, None).map_err(e)?;
            ensure(b.failing() >= 1, format!("r={r} g={g}: alternate convention also holds"))?;
            alt_nonzero += b.failing();
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < MIRROR_SECONDS, format!("took {secs:.2}s"))?;
    Ok(format!("{keys} keys exact; alternate convention leaves {alt_nonzero} nonzero residuals; {secs:.2}s"))
}

fn c6_mirror_w0() -> Outcome {
    let mut keys = 0;
    for r in [2, 3, 5] {
        for g in 1..=4 {
            let a = mirror_w0(r, g, Convention::Mixed).map_err(e)?;
            ensure(a.pass, format!("r={r} g={g}: {} nonzero residuals", a.failing()))?;
            keys += a.keys.len();
        }
    }
    for r in [2u32, 3, 5, 7] {
        let v = qm_w0(&InvariantKey::new(Role::SL, r, 1, 0, 0).map_err(e)?).map_err(e)?;
        let ri = BigInt::from(r);
        ensure(v * BigRational::from(ri.clone()) == BigRational::from(ri.pow(3) + ri), format!("g=1 table r={r}"))?;
        ensure(mirror_w0(r, 1, Convention::Mixed).map_err(e)?.pass, format!("g=1 relation r={r}"))?;
    }
    Ok(format!("{keys} keys, g = 1..4; g=1 table r <= 7"))
}

fn c7_lattice() -> Outcome {
    for (r, g) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let bf = count_all_nk_bruteforce(r, g, DEFAULT_BUDGET).map_err(e)?;
        for (k, &b) in bf.iter().enumerate() {
            ensure(BigInt::from(b) == count_nk_closed(r, g, k as u32), format!("r={r} g={g} k={k}"))?;
        }
        if r == 2 {
            let n0 = 1u128 << (4 * g - 1);
            let h = 1u128 << (2 * g - 1);
            ensure(bf[0] == n0 + h && bf[1] == n0 - h, format!("rank-two counts g={g}"))?;
        }
    }
    let notes: Vec<_> = [2, 3, 5].iter().map(|&r| g1_count_note(r, DEFAULT_BUDGET)).collect::<Result<_, _>>().map_err(e)?;
    ensure(notes.iter().all(|n| !n.printed_matches), "printed g=1 count unexpectedly matches")?;
    Ok(format!("5 (r,g) pairs; g=1 printed N_0 differs: counted {} vs {} at r=3", notes[1].brute_force, notes[1].printed))
}

fn c8_specialize() -> Outcome {
    let mut n = 0;
    for g in 2..=5 {
        for role in [Role::SL, Role::PGL] {
            for k in InvariantKey::all(role, 2, g).map_err(e)? {
                ensure(qm_series(&k).map_err(e)? == qm_series_r2(&k).map_err(e)?, format!("{k:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} keys, g = 2..5"))
}

fn c9_chi() -> Outcome {
    for r in [2, 3, 5] {
        for g in [2, 3] {
            let c = chi_independence(r, g).map_err(e)?;
            ensure(c.pass, format!("r={r} g={g}"))?;
        }
    }
    Ok("r in {2,3,5}, g in {2,3}".into())
}

fn c10_numeric() -> Outcome {
    let taus = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0), Complex64::new(0.0, 1.5)];
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for &t in &taus {
        let mut checks = vec![check_e2_transform(t, NUMERIC_ORDER, NUMERIC_TOL).map_err(e)?];
        for i in 1..=3 {
            checks.push(check_calu_transform(i, t, NUMERIC_ORDER, NUMERIC_TOL).map_err(e)?);
        }
        for (r, l) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
            checks.push(check_eta_transform(r, l, t, NUMERIC_ORDER, NUMERIC_TOL).map_err(e)?);
        }
        for c in checks {
            ensure(c.pass, format!("{} at {t}: residual {:e}, tail {:e}", c.law, c.residual, c.tail_bound))?;
            worst = worst.max(c.residual);
            n += 1;
        }
    }
    let mirror_taus = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0), Complex64::new(0.0, 3.0)];
    for (d, a) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let c = check_tau_mirror(2, d, a, mirror_taus, NUMERIC_ORDER, NUMERIC_TOL).map_err(e)?;
        ensure(c.pass, format!("tau mirror ({d},{a}): residual {:e}", c.residual))?;
        worst = worst.max(c.residual);
        n += 1;
    }
    Ok(format!("{n} laws at order {NUMERIC_ORDER}, tol {NUMERIC_TOL:e}; max residual {worst:.2e}"))
}

fn c11_wallcross() -> Outcome {
    let u = KNumClass::new(1, 1);
    ensure(vanishing_verdict(2, 1, 1, 2, u).map_err(e)? == Verdict::AllVanish, "(2,1,2,1) not AllVanish")?;
    let wc = solve_degree_class(2, 1, 2, u, 2).map_err(e)?;
    ensure(wc == KNumClass::new(2, 0), format!("w-check = {wc}"))?;
    let entries = enumerate_um(2, 1, 2, wc).map_err(e)?;
    let sky: Vec<_> = entries.iter().filter(|x| x.skyscraper).collect();
    ensure(sky.len() == 1 && sky[0].u_m == KNumClass::new(0, 1), "contributing entry")?;
    ensure(sky[0].known_evir == Some(ExactCoeff::from_int(2 * (2 - 2 * 2))), "e^vir")?;
    let delta = wallcross_delta(2, 1, 2, 2, u, Role::SL).map_err(e)?;
    let Delta::Known { q, delta } = delta else {
        return Err("delta unknown".into());
    };
    ensure(q == ExactCoeff::from_int(-4) && delta == ExactCoeff::from_int(128), format!("Q={q} delta={delta}"))?;
    for (r, w) in [(3, 3), (5, 10)] {
        let c = d_independence_check(r, 2, w).map_err(e)?;
        ensure(c.pass(), format!("d-independence r={r} w={w}"))?;
    }
    ensure(default_u(2, 1, 2).map_err(e)? == u, "default u")?;
    for r in [2, 3] {
        for g in [2, 3] {
            ensure(euler_cross_check(r, g).map_err(e)?, format!("Euler r={r} g={g}"))?;
        }
    }
    Ok(format!("w-check = {wc}, u_1 = (0, 1), Q = {q}, delta = {delta}; d-independence and Euler sums exact"))
}

fn c12_determinism() -> Outcome {
    let config = RunConfig {
        rank: 3,
        genus: vec![2, 3],
        checks: ["mirror-wpos", "mirror-w0", "numeric", "wallcross", "lattice", "table2"].iter().map(|s| s.to_string()).collect(),
        ..RunConfig::default()
    };
    let a = run(&config).map_err(e)?.to_json();
    let b = run(&config).map_err(e)?.to_json();
    ensure(a == b, "reports differ")?;
    Ok(format!("{} bytes identical across two runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "modular identities", c1_genser),
        (2, "table 1 reproduction", c2_table1),
        (3, "table 2 and summed lines", c3_table2),
        (4, "pipeline closure", c4_pipeline),
        (5, "mirror symmetry w>0", c5_mirror_wpos),
        (6, "mirror symmetry w=0", c6_mirror_w0),
        (7, "lattice counts", c7_lattice),
        (8, "rank-two specialization", c8_specialize),
        (9, "quantum chi-independence", c9_chi),
        (10, "numeric modular laws", c10_numeric),
        (11, "wall-crossing combinatorics", c11_wallcross),
        (12, "determinism", c12_determinism),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let out = f();
        let expected_fail = EXPECTED_FAIL.iter().find(|(k, _)| *k == n);
        match (&out, expected_fail) {
            (Ok(msg), None) => println!("[PASS] {n:>2} {name}: {msg}"),
            (Err(msg), Some((_, why))) => println!("[FAIL] {n:>2} {name}: {msg} (expected: {why})"),
            (Ok(msg), Some(_)) => {
                unexpected += 1;
                println!("[PASS] {n:>2} {name}: {msg} (UNEXPECTED: listed as failing)");
            }
            (Err(msg), None) => {
                unexpected += 1;
                println!("[FAIL] {n:>2} {name}: {msg}");
            }
        }
    }
    if unexpected > 0 {
        println!("acceptance: {unexpected} criteria deviate from the expected outcome");
        return ExitCode::FAILURE;
    }
    println!("acceptance: all criteria at their expected outcome");
    ExitCode::SUCCESS
}
