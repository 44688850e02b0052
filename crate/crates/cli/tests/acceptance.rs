//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with `cargo test -p autoarray-cli --test acceptance`.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use autoarray::automata::DigitOrder;
use autoarray::diophantine::{
    height, mult_independence, place_set, product_over_places, subspace_product, witness_vector,
    Independence,
};
use autoarray::enclosure::RationalEnclosure;
use autoarray::fixtures;
use autoarray::series::{
    alpha_n_exact, alpha_n_oracle, approximants, build_p_n, error_bound, error_enclosure, ArraySpec,
    Generator,
};
use autoarray::spec::parse_rational;
use autoarray::stammering::{find_seed, stammer_pair, verify_pair};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow10(e: i32) -> BigRational {
    let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn approx_specs() -> Vec<(&'static str, ArraySpec)> {
    vec![
        ("tm_tm_xor_2_3", fixtures::tm_tm_xor_2_3()),
        ("tm_rs_sum_2_3", fixtures::tm_rs_sum_2_3()),
        ("tm3_xor_2_3_5", fixtures::tm3_xor_2_3_5()),
    ]
}

fn generator_agreement() -> Outcome {
    let pairs = [
        ("thue_morse", fixtures::thue_morse(), fixtures::thue_morse_dfao(DigitOrder::LsbFirst)),
        ("rudin_shapiro", fixtures::rudin_shapiro(), fixtures::rudin_shapiro_dfao()),
        ("period_doubling", fixtures::period_doubling(), fixtures::period_doubling_dfao()),
    ];
    let len = 1usize << 14;
    for (name, m, d) in pairs {
        let from_morphism = m.coded_prefix(len);
        let msb = Generator::from_morphism(m).msb_dfao();
        for n in 0..len {
            let a = d.seq_term(n as u64).map_err(|e| e.to_string())?;
            let b = msb.seq_term(n as u64).map_err(|e| e.to_string())?;
            ensure(a == from_morphism[n] && b == a, || {
                format!("{name}: a({n}) morphism {} dfao {a} bridge {b}", from_morphism[n])
            })?;
        }
    }
    Ok(format!("3 sequences agree on n < {len}"))
}

/// Distinct subsequences `n ↦ a(2^e n + j)`, `e ≤ depth`, compared on
/// `terms` terms.
fn brute_kernel(seq: &[i64], depth: u32, terms: usize) -> usize {
    let mut seen = HashSet::new();
    for e in 0..=depth {
        let step = 1usize << e;
        for j in 0..step {
            let sub: Vec<i64> = (0..terms).map(|n| seq[step * n + j]).collect();
            seen.insert(sub);
        }
    }
    seen.len()
}

fn kernel_sizes() -> Outcome {
    let (depth, terms) = (6u32, 1usize << 10);
    let mut report = Vec::new();
    for (name, m, d, want) in [
        ("thue_morse", fixtures::thue_morse(), fixtures::thue_morse_dfao(DigitOrder::LsbFirst), 2),
        ("rudin_shapiro", fixtures::rudin_shapiro(), fixtures::rudin_shapiro_dfao(), 4),
    ] {
        let states = d.canonicalize_padding().minimize().num_states();
        let kernel = d.kernel().map_err(|e| e.to_string())?.len();
        let seq = m.coded_prefix((1 << depth) * terms);
        let brute = brute_kernel(&seq, depth, terms);
        ensure(states == want && kernel == want && brute == want, || {
            format!("{name}: minimized {states}, kernel {kernel}, brute force {brute}, want {want}")
        })?;
        report.push(format!("{name} {want}"));
    }
    Ok(report.join(", "))
}

fn stammering() -> Outcome {
    let mut report = Vec::new();
    for (name, m) in fixtures::bundled_morphisms() {
        let seed = find_seed(&m);
        let w = seed.exponent.clone();
        let expected = BigRational::one() + rat(1, m.alphabet().len() as i64);
        ensure(w == expected, || format!("{name}: w = {w}, want {expected}"))?;
        if name == "thue_morse" {
            ensure(w == rat(3, 2), || format!("thue_morse: w = {w}"))?;
        }
        let mut last_period = 0;
        for n in 1..=10 {
            let pair = stammer_pair(&seed, &m, n).map_err(|e| e.to_string())?;
            let ok = verify_pair(&pair, &w, &m.fixed_point()).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{name} n={n}: U V^w is not a prefix"))?;
            ensure(pair.period() > last_period, || format!("{name} n={n}: |V_n| not increasing"))?;
            let ratio = rat(pair.preperiod() as i64, pair.period() as i64);
            ensure(ratio == seed.ratio(), || format!("{name} n={n}: |U|/|V| = {ratio}, want {}", seed.ratio()))?;
            last_period = pair.period();
        }
        report.push(format!("{name} w={w}"));
    }
    Ok(report.join(", "))
}

/// Criteria 4, 5 and 7 share their runs.
struct ApproxRuns {
    exact: Outcome,
    bounds: Outcome,
    inclusion: Outcome,
}

fn approximant_runs() -> ApproxRuns {
    let mut exact = Ok(());
    let mut bounds = Ok(());
    let mut inclusion = Ok(());
    let mut count = 0;
    'outer: for (name, spec) in approx_specs() {
        for n in 1..=8 {
            let approx = match approximants(&spec, n) {
                Ok(a) => a,
                Err(e) => {
                    exact = Err(format!("{name} n={n}: {e}"));
                    break 'outer;
                }
            };
            let a = alpha_n_exact(&spec, &approx).map_err(|e| e.to_string());
            let b = alpha_n_oracle(&spec, &approx).map_err(|e| e.to_string());
            let alpha_n = match (a, b) {
                (Ok(a), Ok(b)) if a == b => a,
                (Ok(a), Ok(b)) => {
                    exact = exact.and(Err(format!("{name} n={n}: exact {a} oracle {b}")));
                    continue;
                }
                (Err(e), _) | (_, Err(e)) => {
                    exact = exact.and(Err(format!("{name} n={n}: {e}")));
                    continue;
                }
            };
            count += 1;

            let poly = build_p_n(&spec, &approx);
            let stats = poly.stats();
            let coeff_bound = (1u128 << spec.dimension()) * spec.m() as u128;
            for (i, d) in stats.degrees.iter().enumerate() {
                let (r, s) = approx.shape()[i];
                if d.is_some_and(|d| d > r + s) {
                    bounds = bounds.and(Err(format!("{name} n={n}: deg X{} = {d:?} > {}", i + 1, r + s)));
                }
            }
            if stats.max_abs > coeff_bound {
                bounds = bounds.and(Err(format!("{name} n={n}: max |coeff| {} > {coeff_bound}", stats.max_abs)));
            }

            let bound = error_bound(&spec, &approx).unwrap();
            let width = &bound.rigorous / BigRational::from_integer(BigInt::from(1u64 << 20));
            let alpha = spec.evaluate_alpha(&width).unwrap();
            let err = error_enclosure(&alpha, &alpha_n);
            if err.hi() > &bound.rigorous {
                inclusion = inclusion.and(Err(format!("{name} n={n}: |α − α_n| ≤ {err} exceeds {}", bound.rigorous)));
            }
        }
    }
    ApproxRuns {
        exact: exact.map(|_| format!("{count} runs, reduced rationals identical")),
        bounds: bounds.map(|_| "degrees and coefficients within bounds".to_string()),
        inclusion: inclusion.map(|_| "error enclosures inside the union bound; nominal bound reported only".to_string()),
    }
}

fn closed_form() -> Outcome {
    let spec = fixtures::constant_2_3();
    let target = pow10(-30);
    let alpha = spec.evaluate_alpha(&target).map_err(|e| e.to_string())?;
    let three = rat(3, 1);
    ensure(alpha.width() <= target && alpha.contains(&three), || format!("α enclosure {alpha}"))?;
    for n in 1..=8 {
        let approx = approximants(&spec, n).map_err(|e| e.to_string())?;
        let a = alpha_n_exact(&spec, &approx).map_err(|e| e.to_string())?;
        ensure(a == three, || format!("n={n}: α_n = {a}"))?;
    }
    Ok(format!("α ∈ {alpha}, α_n = 3 for n ≤ 8"))
}

fn heights() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let num: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
        let den: i64 = rng.gen_range(1..=1_000_000_000);
        if num == 0 {
            continue;
        }
        let x = rat(num, den);
        let p = product_over_places(&x).map_err(|e| e.to_string())?;
        ensure(p.is_one(), || format!("∏_v |{x}|_v = {p}"))?;
    }
    let h = height(&[rat(3, 1), rat(4, 1)]).map_err(|e| e.to_string())?;
    ensure(h.is_point() && h.lo() == &rat(5, 1), || format!("H((3,4)) = {h}"))?;
    for _ in 0..100 {
        let len = rng.gen_range(1..=4);
        let mut x: Vec<BigRational> = (0..len)
            .map(|_| rat(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=10_000)))
            .collect();
        if x.iter().all(|c| c.is_zero()) {
            x[0] = rat(1, 1);
        }
        let mut lambda = rat(rng.gen_range(-100_000..=100_000), rng.gen_range(1..=100_000));
        if lambda.is_zero() {
            lambda = rat(7, 3);
        }
        let scaled: Vec<BigRational> = x.iter().map(|c| c * &lambda).collect();
        let (a, b) = (height(&x).unwrap(), height(&scaled).unwrap());
        ensure(a == b, || format!("H(x) = {a} but H(λx) = {b} for λ = {lambda}"))?;
    }
    Ok("product formula on 1000 rationals, H((3,4)) = 5, 100 scalings".into())
}

fn relative_width(e: &RationalEnclosure) -> Option<BigRational> {
    let m = e.lo().abs().min(e.hi().abs());
    if e.contains_zero() || m.is_zero() {
        None
    } else {
        Some(e.width() / m)
    }
}

fn witnesses() -> Outcome {
    let tol = pow10(-6);
    let mut count = 0;
    let mut worst = BigRational::zero();
    for (name, spec) in approx_specs() {
        let places = place_set(spec.bases());
        let a: Vec<BigInt> = (0..spec.dimension()).map(|i| spec.base(i)).collect();
        for n in 1..=8 {
            let approx = approximants(&spec, n).map_err(|e| e.to_string())?;
            let p = build_p_n(&spec, &approx).evaluate(&a);
            let w = witness_vector(&spec, &approx, &p).map_err(|e| format!("{name} n={n}: {e}"))?;
            let d = approx.denominator(&spec);
            ensure(w.subset_sum() == d, || format!("{name} n={n}: Σ x_I = {} ≠ {d}", w.subset_sum()))?;

            // second path: oracle α_n and an independently refined α
            let alpha_n = alpha_n_oracle(&spec, &approx).map_err(|e| e.to_string())?;
            let bound = error_bound(&spec, &approx).map_err(|e| e.to_string())?;
            let mut width = &bound.rigorous / BigRational::from_integer(BigInt::from(1u64 << 32));
            let d = BigRational::from_integer(d);
            let mut done = None;
            for _ in 0..200 {
                let alpha = spec.evaluate_alpha(&width).map_err(|e| e.to_string())?;
                let sp = match subspace_product(&w, &alpha, &places) {
                    Ok(sp) => sp,
                    Err(_) => {
                        width = alpha.width().min(width) / BigRational::from_integer(BigInt::from(2));
                        continue;
                    }
                };
                let fine = spec
                    .evaluate_alpha(&(alpha.width() / BigRational::from_integer(BigInt::from(16))))
                    .map_err(|e| e.to_string())?;
                let other = fine.shift(&-alpha_n.clone()).scale(&d);
                match (relative_width(&sp.l_last), relative_width(&other)) {
                    (Some(rl), Some(ro)) if rl <= tol && ro <= tol => {
                        done = Some((sp.l_last.clone(), other, rl));
                        break;
                    }
                    _ => width = alpha.width().min(width) / BigRational::from_integer(BigInt::from(1024)),
                }
            }
            let (l, other, rel) = done.ok_or_else(|| format!("{name} n={n}: could not reach relative width 1e-6"))?;
            ensure(other.within(&l), || format!("{name} n={n}: D(α − α_n) ∈ {other} not inside L = {l}"))?;
            worst = worst.max(rel);
            count += 1;
        }
    }
    Ok(format!(
        "{count} witnesses, sum identity exact, worst relative width of L {:.3e}",
        num_traits::ToPrimitive::to_f64(&worst).unwrap_or(f64::NAN)
    ))
}

fn independence() -> Outcome {
    let a = mult_independence(&[2, 3]).map_err(|e| e.to_string())?;
    let b = mult_independence(&[4, 8]).map_err(|e| e.to_string())?;
    let c = mult_independence(&[6, 10, 15]).map_err(|e| e.to_string())?;
    let cert = Independence::Dependent(vec![BigInt::from(3), BigInt::from(-2)]);
    ensure(a == Independence::Independent && b == cert && c == Independence::Independent, || {
        format!("(2,3): {a:?}, (4,8): {b:?}, (6,10,15): {c:?}")
    })?;
    Ok("(2,3) independent, (4,8) certificate (3,-2), (6,10,15) independent".into())
}

fn report(workers: &str) -> Result<Vec<u8>, String> {
    let spec = fixtures::fixture_dir().join("tm_tm_xor_2_3.json");
    let out = Command::new(env!("CARGO_BIN_EXE_autoarray"))
        .args(["run", "--spec"])
        .arg(&spec)
        .args(["--n-min", "1", "--n-max", "8", "--workers", workers])
        .env_remove("AUTOARRAY_WORKERS")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("run exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn exponent_report() -> Outcome {
    let first = report("1")?;
    let second = report("1")?;
    let parallel = report("8")?;
    ensure(first == second, || "two serial runs differ".into())?;
    ensure(first == parallel, || "workers 1 and 8 differ".into())?;
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).ok_or(format!("missing column {name}"));
    let (hlo, hhi, elo, ehi) = (col("height_lo")?, col("height_hi")?, col("exponent_lo")?, col("exponent_hi")?);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    ensure(rows.len() == 8, || format!("{} rows", rows.len()))?;
    let mut prev_hi: Option<BigRational> = None;
    let mut last = String::new();
    for (i, row) in rows.iter().enumerate() {
        let lo = parse_rational(row[hlo]).map_err(|e| e.to_string())?;
        let hi = parse_rational(row[hhi]).map_err(|e| e.to_string())?;
        ensure(lo <= hi, || format!("n={}: height enclosure reversed", i + 1))?;
        if let Some(p) = &prev_hi {
            ensure(p < &lo, || format!("n={}: height not increasing", i + 1))?;
        }
        prev_hi = Some(hi);
        let (a, b): (f64, f64) = (
            row[elo].parse().map_err(|_| format!("n={}: exponent {}", i + 1, row[elo]))?,
            row[ehi].parse().map_err(|_| format!("n={}: exponent {}", i + 1, row[ehi]))?,
        );
        ensure(a <= b && b - a < 1e-6, || format!("n={}: exponent enclosure [{a}, {b}]", i + 1))?;
        last = format!("[{a:.6}, {b:.6}]");
    }
    Ok(format!("8 rows, heights increasing, exponent at n=8 in {last}, byte-identical across runs and workers"))
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    (out, start.elapsed())
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome, Duration, Option<Duration>)> = Vec::new();
    let mut push = |id, label, limit: Option<u64>, (out, t): (Outcome, Duration)| {
        let limit = limit.map(Duration::from_secs);
        let out = match (out, limit) {
            (Ok(_), Some(l)) if t > l => Err(format!("took {t:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        results.push((id, label, out, t, limit));
    };

    push(1, "generator agreement", Some(10), timed(generator_agreement));
    push(2, "kernel sizes", Some(30), timed(kernel_sizes));
    push(3, "stammering", Some(10), timed(stammering));
    let start = Instant::now();
    let shared = catch_unwind(approximant_runs);
    let elapsed = start.elapsed();
    match shared {
        Ok(r) => {
            push(4, "alpha_n dual construction", Some(120), (r.exact, elapsed));
            push(5, "P_n bounds", None, (r.bounds, elapsed));
            push(6, "closed form", None, timed(closed_form));
            push(7, "error-bound inclusion", None, (r.inclusion, elapsed));
        }
        Err(_) => {
            for (id, label) in [(4, "alpha_n dual construction"), (5, "P_n bounds"), (7, "error-bound inclusion")] {
                push(id, label, None, (Err("approximant runs panicked".into()), elapsed));
            }
            push(6, "closed form", None, timed(closed_form));
        }
    }
    push(8, "heights and product formula", Some(5), timed(heights));
    push(9, "witness identities", Some(120), timed(witnesses));
    push(10, "independence certificates", Some(1), timed(independence));
    push(11, "exponent report", None, timed(exponent_report));

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, label, out, t, limit) in &results {
        let bound = limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
        match out {
            Ok(detail) => println!("criterion {id:>2} PASS {label} ({t:.2?}{bound}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL {label} ({t:.2?}{bound}): {detail}");
            }
        }
    }
    println!("{} criteria, {failed} failed", results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
