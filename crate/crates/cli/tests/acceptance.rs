//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ccc2d::correlation::{
    auto_correlation, cross_correlation, set_correlation_sum, verify_ccc, PhaseSum,
};
use ccc2d::mimo::{
    azimuth_grid, ber_simulation, ber_with_gains, elevation_grid, power_pattern, random_precoders,
    received_power, zc_precoders, BerPoint, DirectionPolicy, PrecoderSet, Scheme, SimConfig,
    SteeringConfig,
};
use ccc2d::{example_spec, CccFamily, ConstructionSpec, ZqArray};
use ccc2d_cli::FamilyFile;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    check(
        elapsed < limit,
        format!("{detail}; {:.2?} (limit {:?})", elapsed, limit),
    )
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ccc2d"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn criterion_1(dir: &TempDir) -> Outcome {
    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/example.toml");
    let out = dir.path().join("example.ccc");
    let start = Instant::now();
    let status = run_cli(&[
        "construct",
        "--spec",
        spec.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    if !status.status.success() {
        return Err(format!(
            "construct failed: {}",
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    let file = FamilyFile::parse(&fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let table = common::example_table();
    let mut matched = 0;
    for (p, arrays) in table.iter().enumerate() {
        for (t, expected) in arrays.iter().enumerate() {
            if &file.family.set(p)[t] != expected {
                return Err(format!("set {p} array {t} differs from the printed table"));
            }
            matched += 1;
        }
    }
    within(
        elapsed,
        Duration::from_secs(1),
        format!("{matched}/8 arrays bit-exact"),
    )
}

fn criterion_2() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let family = example_spec().build_ccc();
    let start = Instant::now();
    let report = pool.install(|| verify_ccc(&family, 0.0));
    let elapsed = start.elapsed();
    if !report.passed || !report.exact {
        return Err(format!("verify_ccc failed: {report}"));
    }
    // Spell out the ideal values once more through the exact sums.
    for p in 0..4 {
        for pp in 0..4 {
            for u1 in -7..8 {
                for u2 in -15..16 {
                    let v = set_correlation_sum(family.set(p), family.set(pp), u1, u2)
                        .unwrap()
                        .value;
                    let ideal = if p == pp && u1 == 0 && u2 == 0 {
                        512
                    } else {
                        0
                    };
                    if v != PhaseSum::integer(2, ideal) {
                        return Err(format!("sum at p={p} p'={pp} u=({u1},{u2}) is {v}"));
                    }
                }
            }
        }
    }
    within(
        elapsed,
        Duration::from_secs(10),
        format!(
            "exact, {} shifts, auto peak 512, all other sums 0",
            report.shifts_checked
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    let mut k1 = 0;
    while count < 60 {
        let q = [2, 4][rng.random_range(0..2)];
        let k = rng.random_range(1..=2);
        let n = rng.random_range(2..=4);
        let m = rng.random_range(2..=4);
        let spec =
            ConstructionSpec::sample_with(q, m, n, k, &mut rng).map_err(|e| e.to_string())?;
        let family = spec.build_ccc();
        let (bm, bn, l1, l2) = family.parameters();
        if (bm, bn, l1, l2) != (1 << k, 1 << k, 1 << n, 1 << m) {
            return Err(format!(
                "unexpected parameters {:?} for k={k} n={n} m={m}",
                family.parameters()
            ));
        }
        if k == 1 {
            k1 += 1;
        }
        let report = verify_ccc(&family, 0.0);
        if !report.passed {
            return Err(format!("q={q} k={k} n={n} m={m}: {report}"));
        }
        if let Some(v) = common::oracle_ccc_violation(&family) {
            return Err(format!(
                "oracle disagrees for q={q} k={k} n={n} m={m}: {v:?}"
            ));
        }
        count += 1;
    }
    if k1 == 0 {
        return Err("no k=1 sample drawn".into());
    }
    within(
        start.elapsed(),
        Duration::from_secs(300),
        format!("{count} random specs pass (k=1 cases with M=N=2: {k1})"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut shifts = 0;
    for case in 0..100 {
        let q = [2, 4][case % 2];
        let (rows, cols) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let mut draw = || {
            ZqArray::new(
                q,
                rows,
                cols,
                (0..rows * cols).map(|_| rng.random_range(0..q)).collect(),
            )
            .unwrap()
        };
        let (c, d) = (draw(), draw());
        let (l1, l2) = (rows as isize, cols as isize);
        for u1 in 1 - l1..l1 {
            for u2 in 1 - l2..l2 {
                let fast = cross_correlation(&c, &d, u1, u2).unwrap().value;
                let oracle = common::padded_correlation(&c, &d, u1, u2);
                let exact = match fast.coefficients() {
                    [a] => (*a, 0),
                    [a, b] => (*a, *b),
                    _ => unreachable!(),
                };
                if exact != oracle {
                    return Err(format!(
                        "case {case} u=({u1},{u2}): kernel {exact:?}, oracle {oracle:?}"
                    ));
                }
                let lhs = auto_correlation(&c, u1, -u2).unwrap().value;
                let rhs = auto_correlation(&c, -u1, u2).unwrap().value.conj();
                if lhs != rhs {
                    return Err(format!(
                        "case {case} u=({u1},{u2}): conjugate symmetry fails"
                    ));
                }
                shifts += 1;
            }
        }
    }
    check(
        true,
        format!("100 pairs, {shifts} shifts equal to the padded oracle; symmetry holds"),
    )
}

fn criterion_5() -> Outcome {
    let cfg = SteeringConfig::new(8, 16);
    let w = PrecoderSet::from_arrays(example_spec().build_ccc().set(0), "ccc").unwrap();
    let start = Instant::now();
    let pattern = power_pattern(&w, &cfg, &elevation_grid(50), &azimuth_grid(50))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rel = |x: f64| (x - 512.0).abs() / 512.0;
    if rel(pattern.min()) > 1e-9 || rel(pattern.max()) > 1e-9 {
        return Err(format!(
            "pattern ranges over [{}, {}]",
            pattern.min(),
            pattern.max()
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = 2.0 * PI / cfg.wavelength;
    for _ in 0..10 {
        let phi = rng.random_range(0.0..=PI / 2.0);
        let theta = rng.random_range(0.0..2.0 * PI);
        let direct: f64 = w
            .matrices()
            .iter()
            .map(|wn| {
                let mut h = Complex64::new(0.0, 0.0);
                for ((g, i), x) in wn.indexed_iter() {
                    let arg = -k
                        * phi.sin()
                        * (g as f64 * cfg.dy * theta.sin() + i as f64 * cfg.dx * theta.cos());
                    h += Complex64::from_polar(1.0, arg) * x;
                }
                h.norm_sqr()
            })
            .sum();
        let fast = received_power(&w, &cfg, phi, theta).unwrap();
        if rel(direct) > 1e-9 || (fast - direct).abs() > 1e-9 * 512.0 {
            return Err(format!(
                "direct evaluation at ({phi}, {theta}): {direct} vs {fast}"
            ));
        }
    }
    within(
        elapsed,
        Duration::from_secs(30),
        format!(
            "2500 grid points and 10 direct checks equal 512 to 1e-9 (spread {:e})",
            pattern.relative_spread()
        ),
    )
}

fn bpsk(snr_db: f64) -> f64 {
    0.5 * erfc(10f64.powf(snr_db / 20.0))
}

/// Two-sided two-proportion z-test; true when the rates differ at level `alpha`.
fn rates_differ(a: &BerPoint, b: &BerPoint, alpha: f64) -> (bool, f64) {
    let (n1, n2) = (a.bits as f64, b.bits as f64);
    let pooled = (a.bit_errors + b.bit_errors) as f64 / (n1 + n2);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)).sqrt();
    let z = if se == 0.0 {
        0.0
    } else {
        (a.ber() - b.ber()) / se
    };
    let critical = Normal::standard().inverse_cdf(1.0 - alpha / 2.0);
    (z.abs() > critical, z)
}

fn sim(
    snr_db: Vec<f64>,
    bits: u64,
    seed: u64,
    direction: DirectionPolicy,
    scheme: Scheme,
) -> SimConfig {
    SimConfig {
        snr_db,
        bits_per_point: bits,
        seed,
        direction,
        scheme,
    }
}

const BITS: u64 = 10_000_000;
const SNRS: [f64; 5] = [0.0, 2.0, 4.0, 6.0, 8.0];

fn ccc_precoders() -> PrecoderSet {
    PrecoderSet::from_arrays(example_spec().build_ccc().set(0), "ccc")
        .unwrap()
        .normalized()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = SteeringConfig::new(8, 16);
    let w = ccc_precoders();

    let noiseless = ber_simulation(
        &sim(
            vec![f64::INFINITY],
            1_000_000,
            1,
            DirectionPolicy::UniformPerFrame,
            Scheme::Ccc,
        ),
        &cfg,
        &w,
    )
    .map_err(|e| e.to_string())?;
    if noiseless.points[0].bit_errors != 0 {
        return Err(format!(
            "{} errors without noise",
            noiseless.points[0].bit_errors
        ));
    }

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let single = ber_with_gains(
        &sim(
            SNRS.to_vec(),
            BITS,
            6,
            DirectionPolicy::UniformPerFrame,
            Scheme::Ccc,
        ),
        [one, zero, zero, zero],
    )
    .map_err(|e| e.to_string())?;
    let mut worst_sigma = 0.0f64;
    for p in &single.points {
        let expected = bpsk(p.snr_db);
        if expected < 1e-4 {
            continue;
        }
        let sigma = (expected * (1.0 - expected) / p.bits as f64).sqrt();
        let dev = (p.ber() - expected).abs() / sigma;
        worst_sigma = worst_sigma.max(dev);
        if dev > 3.0 {
            return Err(format!(
                "single path at {} dB: {} vs {} ({dev:.2} sigma)",
                p.snr_db,
                p.ber(),
                expected
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut direction = || DirectionPolicy::Fixed {
        phi: rng.random_range(0.0..=PI / 2.0),
        theta: rng.random_range(0.0..2.0 * PI),
    };
    let (d1, d2) = (direction(), direction());
    let a = ber_simulation(&sim(vec![2.0], BITS, 61, d1, Scheme::Ccc), &cfg, &w)
        .map_err(|e| e.to_string())?;
    let b = ber_simulation(&sim(vec![2.0], BITS, 62, d2, Scheme::Ccc), &cfg, &w)
        .map_err(|e| e.to_string())?;
    let (differ, z) = rates_differ(&a.points[0], &b.points[0], 0.01);
    if differ {
        return Err(format!("CCC BER depends on direction (z = {z:.2})"));
    }
    within(
        start.elapsed(),
        Duration::from_secs(600),
        format!("noiseless BER 0; single path within {worst_sigma:.2} sigma of BPSK; two directions z = {z:.2}"),
    )
}

/// BER at the strongest and weakest grid directions of a precoder set.
fn extreme_directions(
    w: &PrecoderSet,
    cfg: &SteeringConfig,
    seed: u64,
    scheme: Scheme,
) -> Result<(BerPoint, BerPoint), String> {
    let pattern =
        power_pattern(w, cfg, &elevation_grid(30), &azimuth_grid(30)).map_err(|e| e.to_string())?;
    let samples: Vec<_> = pattern.samples().collect();
    let best =
        samples.iter().copied().fold(
            (0.0, 0.0, f64::NEG_INFINITY),
            |a, s| if s.2 > a.2 { s } else { a },
        );
    let worst =
        samples.iter().copied().fold(
            (0.0, 0.0, f64::INFINITY),
            |a, s| if s.2 < a.2 { s } else { a },
        );
    let run = |(phi, theta, _): (f64, f64, f64), seed| {
        ber_simulation(
            &sim(
                vec![4.0],
                1_000_000,
                seed,
                DirectionPolicy::Fixed { phi, theta },
                scheme,
            ),
            cfg,
            w,
        )
        .map(|r| r.points[0].clone())
        .map_err(|e| e.to_string())
    };
    Ok((run(best, seed)?, run(worst, seed + 1)?))
}

fn criterion_7() -> Outcome {
    let cfg = SteeringConfig::new(8, 16);
    let ccc = ccc_precoders();
    let random = random_precoders(8, 16, 4, 7).unwrap().normalized();
    let zc = zc_precoders(8, 16, 4, (1, 1)).unwrap().normalized();

    let uniform = |w: &PrecoderSet, scheme| {
        ber_simulation(
            &sim(
                SNRS.to_vec(),
                BITS,
                70,
                DirectionPolicy::UniformPerFrame,
                scheme,
            ),
            &cfg,
            w,
        )
        .map_err(|e| e.to_string())
    };
    let c = uniform(&ccc, Scheme::Ccc)?;
    let r = uniform(&random, Scheme::Random)?;
    let mut summary = Vec::new();
    for (pc, pr) in c.points.iter().zip(&r.points) {
        if pc.ber() >= pr.ber() {
            return Err(format!(
                "at {} dB CCC {} is not below random {}",
                pc.snr_db,
                pc.ber(),
                pr.ber()
            ));
        }
        summary.push(format!("{}dB {:.1e}/{:.1e}", pc.snr_db, pc.ber(), pr.ber()));
    }
    if c.points.last().unwrap().ber() > 1e-3 {
        return Err("CCC curve does not reach the low-BER region".into());
    }

    let (a, b) = extreme_directions(&ccc, &cfg, 71, Scheme::Ccc)?;
    let (ccc_differ, zc_ccc) = rates_differ(&a, &b, 0.01);
    if ccc_differ {
        return Err(format!("CCC BER varies with direction (z = {zc_ccc:.2})"));
    }
    for (w, scheme) in [(&random, Scheme::Random), (&zc, Scheme::Zc)] {
        let (a, b) = extreme_directions(w, &cfg, 73, scheme)?;
        let (differ, z) = rates_differ(&a, &b, 0.01);
        if !differ {
            return Err(format!(
                "{} BER does not vary with direction (z = {z:.2})",
                w.label()
            ));
        }
    }

    let out = run_cli(&["ber", "--scheme", "zc", "--bits", "4000", "--snr", "0"]);
    let csv = String::from_utf8_lossy(&out.stdout);
    if !out.status.success()
        || !csv.contains("zc-surrogate")
        || !csv.contains("# note: surrogate baseline")
    {
        return Err("ZC CSV is not labelled as a surrogate".into());
    }
    check(
        true,
        format!(
            "CCC/random BER {}; CCC direction-invariant, baselines not; ZC CSV labelled surrogate",
            summary.join(", ")
        ),
    )
}

fn criterion_8(dir: &TempDir) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut valid, mut invalid) = (0, 0);
    for case in 0..20u64 {
        let q = [2u32, 4][case as usize % 2];
        let sets: Vec<Vec<ZqArray>> = match case % 4 {
            // Row-major layout of a constructed family, intact or with one entry changed.
            0 | 1 => {
                let k = rng.random_range(1..=2);
                let spec = ConstructionSpec::sample_with(
                    q,
                    rng.random_range(k..=3),
                    rng.random_range(k..=2),
                    k,
                    &mut rng,
                )
                .map_err(|e| e.to_string())?;
                let mut sets: Vec<Vec<ZqArray>> = spec
                    .build_ccc()
                    .into_sets()
                    .into_iter()
                    .map(|s| {
                        s.into_iter()
                            .map(|a| {
                                ZqArray::new(q, 1, a.rows() * a.cols(), a.values().to_vec())
                                    .unwrap()
                            })
                            .collect()
                    })
                    .collect();
                if case % 4 == 1 {
                    let pos = rng.random_range(0..sets[0][0].cols());
                    let v = sets[0][0].get(0, pos);
                    sets[0][0].set(0, pos, (v + q / 2) % q);
                }
                sets
            }
            // A random Golay pair from the length-2^r path construction, with its mate.
            2 => {
                let r = rng.random_range(1..=5);
                let perm = {
                    let mut p: Vec<usize> = (0..r).collect();
                    for i in (1..r).rev() {
                        p.swap(i, rng.random_range(0..=i));
                    }
                    p
                };
                let len = 1usize << r;
                let bit = |i: usize, j: usize| (i >> j & 1) as u32;
                let a: Vec<u32> = (0..len)
                    .map(|i| {
                        (0..r.saturating_sub(1))
                            .map(|j| bit(i, perm[j]) * bit(i, perm[j + 1]))
                            .sum::<u32>()
                            % 2
                            * (q / 2)
                    })
                    .collect();
                let b: Vec<u32> = a
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v + bit(i, perm[0]) * (q / 2)) % q)
                    .collect();
                let rev = |s: &[u32]| s.iter().rev().copied().collect::<Vec<_>>();
                let neg = |s: Vec<u32>| s.into_iter().map(|v| (v + q / 2) % q).collect::<Vec<_>>();
                let row = |s: Vec<u32>| ZqArray::new(q, 1, len, s).unwrap();
                vec![
                    vec![row(a.clone()), row(b.clone())],
                    vec![row(rev(&b)), row(neg(rev(&a)))],
                ]
            }
            // Random sequences.
            _ => {
                let len = rng.random_range(2..=16);
                (0..2)
                    .map(|_| {
                        (0..2)
                            .map(|_| {
                                ZqArray::new(
                                    q,
                                    1,
                                    len,
                                    (0..len).map(|_| rng.random_range(0..q)).collect(),
                                )
                                .unwrap()
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        let seqs: Vec<Vec<Vec<u32>>> = sets
            .iter()
            .map(|s| s.iter().map(|a| a.values().to_vec()).collect())
            .collect();
        let expected = common::oracle_is_1d_ccc(q, &seqs);
        let path = dir.path().join(format!("seq{case}.ccc"));
        fs::write(
            &path,
            FamilyFile::external(CccFamily::new(sets).unwrap()).to_text(),
        )
        .unwrap();
        let out = run_cli(&["export-1d", path.to_str().unwrap()]);
        let code = out.status.code();
        if code != Some(if expected { 0 } else { 1 }) {
            return Err(format!(
                "case {case}: oracle says {expected}, export-1d exited {code:?}"
            ));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        for (p, set) in seqs.iter().enumerate() {
            for (t, s) in set.iter().enumerate() {
                let body: Vec<String> = s.iter().map(u32::to_string).collect();
                if !text.contains(&format!("\n{p} {t}: {}\n", body.join(" "))) {
                    return Err(format!("case {case}: sequence {p} {t} missing from output"));
                }
            }
        }
        if expected {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    check(
        valid >= 5 && invalid >= 5,
        format!(
            "20 external 1xL families agree with the 1D oracle ({valid} complete, {invalid} not)"
        ),
    )
}

fn main() {
    let dir = TempDir::new().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        (
            "1 example table reproduction",
            Box::new(|| criterion_1(&dir)),
        ),
        ("2 example exact verification", Box::new(criterion_2)),
        (
            "3 random construction property suite",
            Box::new(criterion_3),
        ),
        ("4 correlation kernel equivalence", Box::new(criterion_4)),
        ("5 uniform radiated power", Box::new(criterion_5)),
        ("6 BER sanity", Box::new(criterion_6)),
        ("7 BER comparison against baselines", Box::new(criterion_7)),
        ("8 1D reduction", Box::new(|| criterion_8(&dir))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
