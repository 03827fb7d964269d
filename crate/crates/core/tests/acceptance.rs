//! Acceptance suite. Runs without the libtest harness so each criterion
//! prints one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use sadic::coincidence::{coincidence_at, e1_image, CoincidenceVerdict, GeomSegment};
use sadic::config::SystemConfig;
use sadic::directive::{Irreducibility, Primitivity};
use sadic::language::BalanceStatus;
use sadic::lyapunov::estimate_exponents;
use sadic::pipeline::run_verify;
use sadic::rauzy::{fractal_points, subtile_overlap, zwalk};
use sadic::spectral::right_eigenvector;
use sadic::{DirectiveSequence, Letter, Substitution, Vec2, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(name: &str) -> SystemConfig {
    let path = format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"));
    SystemConfig::parse(&std::fs::read_to_string(&path).expect("config file")).expect("valid config")
}

fn lib_sub(s: &Img) -> Substitution {
    sub_text(s).parse().expect("generated substitution parses")
}

fn lib_word(w: &[u8]) -> Word {
    w.iter().map(|d| char::from(b'0' + d)).collect::<String>().parse().expect("word")
}

fn vec2(c: [i64; 2]) -> Vec2 {
    Vec2::from_i64(c[0], c[1])
}

fn fibonacci() -> DirectiveSequence {
    DirectiveSequence::periodic(vec![Substitution::fibonacci()]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = config("fibonacci.toml");
    let r = run_verify(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(r.errors.is_empty(), || format!("stage errors {:?}", r.errors))?;

    let uni = r.unimodular.as_ref().ok_or("no unimodularity check")?;
    ensure(uni.status == sadic::pipeline::Status::Passed, || "not unimodular".into())?;

    match r.primitive.as_ref().map(|c| &c.result) {
        Some(Primitivity::PositiveAt { ell: 2, .. }) => {}
        other => return Err(format!("primitivity {other:?}")),
    }

    match r.irreducible.as_ref().map(|c| &c.result) {
        Some(Irreducibility::VerifiedOnWindow { window: (1, 50), .. }) => {}
        other => return Err(format!("irreducibility {other:?}")),
    }
    // disc(M^n) = L_n² − 4(−1)^n = 5 F_n², never a square.
    let f = fib_numbers(50);
    let d = fibonacci();
    for n in 1..=50 {
        let want = 5 * f[n] * f[n];
        let got = d.product_matrix(0, n).unwrap().discriminant();
        ensure(got == BigInt::from(want) && !is_square(want), || format!("disc at n = {n}: {got} vs {want}"))?;
    }

    let bal = &r.balance.as_ref().ok_or("no balance")?.result;
    let brute = brute_force_balance(&fibonacci_word(5000), 200);
    ensure(bal.c == 1 && brute == 1 && bal.max_len == 200 && bal.status == BalanceStatus::CertifiedUpToL, || {
        format!("C = {} (oracle {brute}), L = {}, {:?}", bal.c, bal.max_len, bal.status)
    })?;

    match &r.coincidence {
        Some(CoincidenceVerdict::CoincidentAt { n: 1, witness, .. }) => {
            let empty = Some(Word::empty());
            ensure(witness.prefix1 == empty && witness.prefix2 == empty && witness.letter == Letter::One, || {
                format!("witness {witness:?}")
            })?;
        }
        other => return Err(format!("coincidence {other:?}")),
    }

    let angle = r.rotation.as_ref().ok_or("no rotation")?.angle;
    let want = 1.0 / (PHI * PHI);
    ensure((angle - want).abs() < 1e-9, || format!("angle {angle} vs 1/φ² = {want}"))?;

    let orbit = r.orbit.as_ref().ok_or("no orbit check")?;
    ensure(orbit.steps == 10_000 && orbit.mismatches == 0, || {
        format!("{} mismatches in {} steps", orbit.mismatches, orbit.steps)
    })?;
    ensure(elapsed < 10.0, || format!("took {elapsed:.2}s"))?;
    Ok(format!(
        "ℓ=2, window [1,50], C=1 to L=200, coincidence n=1, angle {angle:.12}, 0/{} mismatches, {elapsed:.2}s",
        orbit.steps
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for t in 0..1000 {
        let s = random_sub(&mut rng, 6);
        let w = random_image(&mut rng, 30);
        let sigma = lib_sub(&s);
        let word = lib_word(&w);
        let lhs = sigma.incidence().apply(&word.abelianize());
        let rhs = sigma.apply(&word).abelianize();
        let oracle = vec2(counts(&apply(&s, &w)));
        ensure(lhs == rhs && rhs == oracle, || format!("pair {t}: {} {:?}", sub_text(&s), w))?;
    }
    for t in 0..1000 {
        let (s, u) = (random_sub(&mut rng, 6), random_sub(&mut rng, 6));
        let (sigma, tau) = (lib_sub(&s), lib_sub(&u));
        let composed = sigma.compose(&tau).incidence();
        let product = &sigma.incidence() * &tau.incidence();
        let su: Img = [apply(&s, &u[0]), apply(&s, &u[1])];
        let oracle = sadic::Mat2::from_i64(incidence(&su));
        ensure(composed == product && product == oracle, || {
            format!("pair {t}: {} ∘ {}", sub_text(&s), sub_text(&u))
        })?;
    }
    Ok("1000 abelianization pairs, 1000 product pairs, exact".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut coincident = 0;
    for t in 0..50 {
        let pair = [random_sub(&mut rng, 3), random_sub(&mut rng, 3)];
        let lib = [lib_sub(&pair[0]), lib_sub(&pair[1])];
        for n in 1..=8 {
            let subs: Vec<Img> = (0..n).map(|k| pair[k % 2].clone()).collect();
            let lib_subs: Vec<Substitution> = (0..n).map(|k| lib[k % 2].clone()).collect();
            let a = e1_composite_set(&subs, 1);
            let b = e1_composite_set(&subs, 2);
            let oracle = a.intersection(&b).next().is_some();
            let got = coincidence_at(&lib_subs).map_err(|e| e.to_string())?;
            ensure(got.is_some() == oracle, || {
                format!("pair {t} ({}; {}), n = {n}: oracle {oracle}", sub_text(&pair[0]), sub_text(&pair[1]))
            })?;
            if let Some(w) = got {
                let seg = (w.segment.x, w.segment.i.value());
                ensure(a.contains(&seg) && b.contains(&seg), || format!("pair {t}, n = {n}: witness {seg:?} not common"))?;
                coincident += 1;
            }
        }
    }
    Ok(format!("400 cases, {coincident} coincident, 0 mismatches"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in 0..1000 {
        let s = random_sub(&mut rng, 8);
        let x = [rng.gen_range(-50..=50), rng.gen_range(-50..=50)];
        let i: u8 = rng.gen_range(1..=2);
        let seg = GeomSegment::new(x, if i == 1 { Letter::One } else { Letter::Two });
        let line = e1_image(&lib_sub(&s), &seg).map_err(|e| e.to_string())?;
        let m = incidence(&s);
        let mut pos = mat_vec(&m, x);
        for g in &line {
            ensure(g.x == pos, || format!("case {t}: gap at {pos:?}"))?;
            pos[(g.i.value() - 1) as usize] += 1;
        }
        let mut end = x;
        end[(i - 1) as usize] += 1;
        ensure(pos == mat_vec(&m, end) && line.len() == s[(i - 1) as usize].len(), || {
            format!("case {t}: ends at {pos:?}")
        })?;
    }
    Ok("1000 segments chain from M x to M(x + e_i)".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let fib = config("fibonacci_model.toml").sequence_model().map_err(|e| e.to_string())?;
    let est = estimate_exponents(&fib, 100_000, 50, 5).map_err(|e| e.to_string())?;
    let log_phi = PHI.ln();
    let err1 = (est.theta1 - log_phi).abs();
    ensure(err1 < 1e-3, || format!("θ₁ = {} vs log φ = {log_phi}", est.theta1))?;
    ensure(est.sum_rule.holds, || format!("Fibonacci sum {} exceeds {}", est.sum_rule.sum, est.sum_rule.tolerance))?;

    let mixed = config("mixed_model.toml").sequence_model().map_err(|e| e.to_string())?;
    let m = estimate_exponents(&mixed, 100_000, 50, 5).map_err(|e| e.to_string())?;
    ensure(m.sum_rule.holds, || format!("mixed sum {} exceeds {}", m.sum_rule.sum, m.sum_rule.tolerance))?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 30.0, || format!("took {elapsed:.2}s"))?;
    Ok(format!(
        "θ₁ = {:.7} (|Δ| = {err1:.1e}), mixed θ₁+θ₂ = {:.1e} ± {:.1e}, {elapsed:.2}s",
        est.theta1, m.sum_rule.sum, m.sum_rule.tolerance
    ))
}

fn criterion_6() -> Outcome {
    let d = fibonacci();
    let u = right_eigenvector(&d, 200, 1e-20, 128).map_err(|e| e.to_string())?;
    let approx = fractal_points(&d, u.best(), 100_000, Letter::One).map_err(|e| e.to_string())?;
    ensure(approx.points.len() == 100_000, || format!("{} points", approx.points.len()))?;
    let outside = approx.points.iter().filter(|p| p.pi0.abs() > 1.0).count();
    ensure(outside == 0, || format!("{outside} points outside [−1, 1]"))?;
    let overlap = subtile_overlap(&approx, 1e-3, 1.0).map_err(|e| e.to_string())?;
    ensure(overlap.measure < 1e-2, || format!("overlap {}", overlap.measure))?;
    let (lo, hi) = approx.range().unwrap();
    Ok(format!("10^5 points in [{lo:.4}, {hi:.4}], overlap {:.0e}", overlap.measure))
}

fn criterion_7() -> Outcome {
    let d = fibonacci();
    let u = right_eigenvector(&d, 200, 1e-20, 128).map_err(|e| e.to_string())?;
    let text = fibonacci_word(200_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_abs = 0;
    for t in 0..100 {
        let (i, j) = (rng.gen_range(0..text.len() - 1000), rng.gen_range(0..text.len() - 1000));
        let (a, b) = (&text[i..i + 1000], &text[j..j + 1000]);
        let walk = zwalk(&lib_word(a), &lib_word(b), u.best(), 1000, 1).map_err(|e| e.to_string())?;
        let oracle: Vec<i64> = (0..=1000).map(|n| counts(&a[..n])[0] - counts(&b[..n])[0]).collect();
        ensure(walk.z == oracle, || format!("pair {t}: walk differs from letter counts"))?;
        for n in 0..1000 {
            ensure((oracle[n + 1] - oracle[n]).abs() <= 1, || format!("pair {t}: step at {n}"))?;
        }
        max_abs = max_abs.max(oracle.iter().map(|z| z.abs()).max().unwrap());
        ensure(walk.step_violations.is_empty() && walk.bound_violations.is_empty(), || {
            format!("pair {t}: {} step, {} bound violations", walk.step_violations.len(), walk.bound_violations.len())
        })?;
    }
    ensure(max_abs <= 1, || format!("max |z| = {max_abs}"))?;
    Ok(format!("100 pairs × 1000 steps, max |z| = {max_abs}, 0 violations"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sadic"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn criterion_8() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let cfg = |name: &str| format!("{dir}/{name}");
    let commands: Vec<Vec<String>> = vec![
        ["lyapunov", "--config", &cfg("fibonacci_model.toml"), "--length", "20000", "--seed", "11"].map(String::from).to_vec(),
        ["lyapunov", "--config", &cfg("mixed_model.toml"), "--length", "20000", "--seed", "11"].map(String::from).to_vec(),
        ["lyapunov", "--config", &cfg("sofic_model.toml"), "--length", "20000", "--seed", "11"].map(String::from).to_vec(),
        ["lyapunov", "--config", &cfg("mixed_model.toml"), "--length", "5000", "--seed", "3", "--untransposed"].map(String::from).to_vec(),
        ["verify", "--config", &cfg("fibonacci.toml")].map(String::from).to_vec(),
        ["fractal", "--config", &cfg("fibonacci.toml"), "--depth", "20000"].map(String::from).to_vec(),
    ];
    for c in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "8", "8"] {
            let mut args = vec!["--json", "--threads", threads];
            args.extend(c.iter().map(String::as_str));
            outputs.push(run_cli(&args)?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} output differs across runs", c.join(" ")))?;
    }
    Ok(format!("{} commands × 4 runs (threads 1, 1, 8, 8), byte-identical", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Fibonacci end-to-end", criterion_1),
        ("commutation suite", criterion_2),
        ("E₁ oracle equivalence", criterion_3),
        ("broken-line chaining", criterion_4),
        ("Lyapunov sanity", criterion_5),
        ("balance/containment link", criterion_6),
        ("z-walk properties", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {}. {name}: {reason}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
