//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The text corpus defaults to `tests/data/licenses.txt`; set
//! `KOLMOZIP_TEXT` to use another file of at least 100 KiB.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use kolmozip::coder::{dyadic_value, ideal_refine, shortest_binary_in_interval};
use kolmozip::kclab::{
    convergence_budget, family_gap, literal_ceiling, phi, phi_curve, run_program, MachineStatus,
};
use kolmozip::pipeline::*;
use kolmozip::predictors::{PredictorConfig, PredictorState};
use kolmozip::sources::{corpus_bytes, worksheet_corpus, MarkovSpec};
use kolmozip::{BitString, ExactInterval, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

const KIB: usize = 1024;
/// Recorded maximum joint-bound gap over pairs with l(x), l(y) <= 4 at t = 64.
const JOINT_GAP_BASELINE_L4: i64 = 16;
/// Recorded value of the same quantity for l <= 3.
const JOINT_GAP_BASELINE_L3: i64 = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg(kind: &str) -> PredictorConfig {
    PredictorConfig::new(kind.parse().unwrap(), 1)
}

struct Corpora {
    named: Vec<(&'static str, Vec<u8>)>,
    markov2: MarkovSpec,
}

fn corpora() -> Corpora {
    let text_path = std::env::var_os("KOLMOZIP_TEXT")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/licenses.txt")
        });
    let text = std::fs::read(&text_path).unwrap_or_else(|e| panic!("{}: {e}", text_path.display()));
    assert!(
        text.len() >= 100 * KIB,
        "text corpus must be at least 100 KiB"
    );
    let markov2 = MarkovSpec::random(2, 4, 1, 7).unwrap();
    let named = vec![
        (
            "random-64k",
            MarkovSpec::uniform(0, 256, 1)
                .unwrap()
                .generate(64 * KIB)
                .unwrap(),
        ),
        ("constant-64k", vec![b'A'; 64 * KIB]),
        ("markov2-256k", markov2.generate(256 * KIB).unwrap()),
        ("text", text),
        ("worksheet", corpus_bytes(&worksheet_corpus(1, 1000))),
    ];
    Corpora { named, markov2 }
}

const KINDS: [&str; 3] = ["uniform", "freq:2", "neural:2,16"];

struct Run {
    corpus: &'static str,
    kind: &'static str,
    stats: SessionStats,
    round_trip: bool,
}

fn run_all(c: &Corpora) -> (Vec<Run>, Duration) {
    let start = Instant::now();
    let jobs: Vec<(&'static str, &[u8], &'static str)> = c
        .named
        .iter()
        .flat_map(|(name, data)| KINDS.iter().map(move |&k| (*name, data.as_slice(), k)))
        .collect();
    let opts = SessionOptions {
        digest_every: None,
        per_token_bits: true,
    };
    let runs = jobs
        .par_iter()
        .map(|&(corpus, data, kind)| {
            let (art, stats) = compress_with(data, &cfg(kind), opts).unwrap();
            let bytes = art.serialize();
            let back = CompressedArtifact::deserialize(&bytes).and_then(|a| decompress(&a));
            Run {
                corpus,
                kind,
                stats,
                round_trip: back.as_deref() == Ok(data),
            }
        })
        .collect();
    (runs, start.elapsed())
}

fn criterion_1(runs: &[Run], elapsed: Duration) -> Outcome {
    let failed: Vec<String> = runs
        .iter()
        .filter(|r| !r.round_trip)
        .map(|r| format!("{}/{}", r.corpus, r.kind))
        .collect();
    let fast = elapsed < Duration::from_secs(120);
    outcome(
        failed.is_empty() && fast,
        format!(
            "{} runs, {} mismatched {:?}, {:.1}s (limit 120s)",
            runs.len(),
            failed.len(),
            failed,
            elapsed.as_secs_f64()
        ),
    )
}

fn product(widths: &[u32]) -> BigUint {
    match widths.len() {
        0 => BigUint::one(),
        1 => BigUint::from(widths[0]),
        n => product(&widths[..n / 2]) * product(&widths[n / 2..]),
    }
}

/// `payload - ideal` in `[0, 64]`, with `ideal = 16 n - log2(prod widths)`,
/// decided in integers: `2^(16n) <= prod * 2^payload <= 2^(16n + 64)`.
fn overhead_in_window(stats: &SessionStats) -> bool {
    let scaled = product(&stats.token_widths) << stats.payload_bits as usize;
    let base = 16 * stats.token_widths.len();
    (BigUint::one() << base) <= scaled && scaled <= (BigUint::one() << (base + 64))
}

fn criterion_2(runs: &[Run]) -> Outcome {
    let bad: Vec<String> = runs
        .iter()
        .filter(|r| !overhead_in_window(&r.stats))
        .map(|r| format!("{}/{}", r.corpus, r.kind))
        .collect();
    let (lo, hi) = runs
        .iter()
        .map(|r| r.stats.overhead_bits())
        .fold((f64::MAX, f64::MIN), |(a, b), o| (a.min(o), b.max(o)));
    outcome(
        bad.is_empty(),
        format!(
            "overhead {lo:.1}..{hi:.1} bits over {} runs, outside [0,64]: {bad:?}",
            runs.len()
        ),
    )
}

/// Mean `-log2 p` of each byte under the model's own (unquantized)
/// prediction, replaying the online updates outside the session code.
fn replayed_cross_entropy(data: &[u8], config: &PredictorConfig) -> f64 {
    let mut st = PredictorState::init(config).unwrap();
    let mut total = 0.0;
    for &b in data {
        let f = st.forecast();
        total -= f.distribution().probability(b as usize).log2();
        st.learn(&f, b);
    }
    total / data.len() as f64
}

fn criterion_3(runs: &[Run], c: &Corpora) -> Outcome {
    let markov = &c.named[2].1;
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for kind in ["freq:2", "neural:2,16"] {
        let run = runs
            .iter()
            .find(|r| r.corpus == "markov2-256k" && r.kind == kind)
            .unwrap();
        let replay = replayed_cross_entropy(markov, &cfg(kind));
        let diff = (run.stats.ideal_bpb() - replay).abs();
        worst = worst.max(diff);
        parts.push(format!(
            "{kind}: ideal {:.5} replay {replay:.5}",
            run.stats.ideal_bpb()
        ));
    }
    outcome(
        worst <= 0.01,
        format!("{}, max diff {worst:.2e} (limit 0.01)", parts.join("; ")),
    )
}

fn criterion_4(runs: &[Run], c: &Corpora) -> Outcome {
    let h = c.markov2.entropy_rate::<f64>();
    let freq = runs
        .iter()
        .find(|r| r.corpus == "markov2-256k" && r.kind == "freq:2")
        .unwrap()
        .stats
        .bpb();
    let bound = 1.05 * h + 0.1;
    let uniform: Vec<f64> = runs
        .iter()
        .filter(|r| r.kind == "uniform")
        .map(|r| r.stats.bpb())
        .collect();
    let uniform_ok = uniform.iter().all(|b| (b - 8.0).abs() <= 0.01);
    outcome(
        freq <= bound && uniform_ok,
        format!(
            "h = {h:.4}, freq:2 {freq:.4} <= {bound:.4}; uniform bpb {:.4}..{:.4}",
            uniform.iter().cloned().fold(f64::MAX, f64::min),
            uniform.iter().cloned().fold(f64::MIN, f64::max)
        ),
    )
}

fn criterion_5() -> Outcome {
    let source = MarkovSpec::random(3, 4, 1, 1)
        .unwrap()
        .generate(256 * KIB)
        .unwrap();
    let configs: Vec<_> = ["freq:1", "freq:3", "neural:3,16", "neural:3,64"]
        .iter()
        .map(|k| cfg(k))
        .collect();
    let r = scaling_ladder(&source, &configs).unwrap();
    let freq_ok = r[1].bpb <= r[0].bpb - 0.05;
    let width_ok = r[3].bpb <= r[2].bpb + 0.02;
    outcome(
        freq_ok && width_ok,
        format!(
            "freq:1 {:.4}, freq:3 {:.4} (need <= {:.4}); neural w16 {:.4}, w64 {:.4} (need <= {:.4})",
            r[0].bpb, r[1].bpb, r[0].bpb - 0.05, r[2].bpb, r[3].bpb, r[2].bpb + 0.02
        ),
    )
}

fn criterion_6() -> Outcome {
    let records = worksheet_corpus(2, 1000);
    let c = cfg("freq:0");
    let (mut with_m, mut without) = (0.0, 0.0);
    for r in &records {
        let km = [r.problem.as_slice(), r.working.as_slice()].concat();
        with_m += compress_conditional(&r.answer, &km, &c)
            .unwrap()
            .1
            .ideal_bits;
        without += compress_conditional(&r.answer, &r.problem, &c)
            .unwrap()
            .1
            .ideal_bits;
    }
    outcome(
        with_m < without,
        format!(
            "{} records: r|(k,m) {with_m:.0} bits < r|k {without:.0} bits",
            records.len()
        ),
    )
}

fn criterion_7(c: &Corpora) -> Outcome {
    let sample = &c.named[2].1[..16 * KIB];
    let mut notes = Vec::new();
    let mut ok = true;
    for kind in KINDS {
        let (art, stats) = compress_with(sample, &cfg(kind), SessionOptions::audit()).unwrap();
        let (_, trace) = decompress_conditional_with(&art, &[], Some(1)).unwrap();
        let digests_ok = stats.digests == trace.digests && stats.digests.len() == sample.len() + 1;
        let again = compress(sample, &cfg(kind)).unwrap().0;
        let identical = again.serialize() == art.serialize();
        ok &= digests_ok && identical;
        notes.push(format!(
            "{kind}: {} digests {}, rerun {}",
            stats.digests.len(),
            if digests_ok { "match" } else { "DIFFER" },
            if identical { "identical" } else { "DIFFERS" }
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let schedule: Vec<u64> = (0..=16).collect();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for x in BitString::all_up_to(6) {
        let l = x.len() as u64;
        for y in [BitString::new(), x.clone()] {
            let curve = phi_curve(&x, &y, &schedule).unwrap();
            checked += curve.len();
            if curve.windows(2).any(|w| w[1].value_bits > w[0].value_bits) {
                failures.push(format!("increasing curve x={x} y={y}"));
            }
            for e in &curve {
                if e.value_bits > literal_ceiling(&x) {
                    failures.push(format!("above ceiling x={x} t={}", e.budget));
                }
                if e.budget >= l && e.witness.is_none() {
                    failures.push(format!("no witness at t >= l(x), x={x} t={}", e.budget));
                }
                if let Some(w) = &e.witness {
                    let r = run_program(w, &y, e.budget, x.len());
                    if r.status != MachineStatus::Halted
                        || r.output != x
                        || w.bit_length() != e.value_bits
                    {
                        failures.push(format!("bad witness x={x} t={}", e.budget));
                    }
                }
                if y == x && e.budget >= l && e.value_bits > 3 {
                    failures.push(format!("phi(t,x,x) > 3 at x={x} t={}", e.budget));
                }
            }
            if curve[convergence_budget(&x) as usize].value_bits != curve.last().unwrap().value_bits
            {
                failures.push(format!("not settled at 2 l(x), x={x}"));
            }
        }
    }
    let ones: BitString = "11111111".parse().unwrap();
    let at4 = phi(4, &ones, &BitString::new()).unwrap().value_bits;
    let at8 = phi(8, &ones, &BitString::new()).unwrap().value_bits;
    if (at4, at8) != (24, 12) {
        failures.push(format!("eight ones: {at4} -> {at8}"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        failures.push("over 5 minutes".into());
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} estimates over l(x) <= 6, eight ones {at4} -> {at8}, {:.1}s; failures {:?}",
            elapsed.as_secs_f64(),
            &failures[..failures.len().min(5)]
        ),
    )
}

fn criterion_9() -> Outcome {
    let g3 = family_gap(3, 64).unwrap();
    let g4 = family_gap(4, 64).unwrap();
    outcome(
        g3.max_gap <= JOINT_GAP_BASELINE_L3 && g4.max_gap <= JOINT_GAP_BASELINE_L4,
        format!(
            "max gap L=3: {} (baseline {JOINT_GAP_BASELINE_L3}), L=4: {} over {} pairs (baseline {JOINT_GAP_BASELINE_L4}), argmax {:?}",
            g3.max_gap, g4.max_gap, g4.pairs, g4.argmax
        ),
    )
}

fn criterion_10() -> Outcome {
    let w = |v: &[i64]| {
        v.iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect::<Vec<_>>()
    };
    let p = [
        w(&[3, 3, 2, 1, 2]),
        w(&[1, 1, 3, 3, 2]),
        w(&[1, 1, 1, 1, 1]),
    ];
    let mut i = ExactInterval::unit();
    for (probs, sym) in p.iter().zip([1usize, 0, 1]) {
        i = ideal_refine(&i, probs, sym).unwrap();
    }
    let code = shortest_binary_in_interval(&i);
    let value: Rational = dyadic_value(&code);
    let expected_value = Rational::new(BigInt::from(9), BigInt::from(32));
    let mut decoded = String::new();
    let mut j = ExactInterval::unit();
    for probs in &p {
        if let Ok(Some((sym, sub))) = j.locate(probs, &value) {
            decoded.push((b'a' + sym as u8) as char);
            j = sub;
        }
    }
    outcome(
        code.to_string() == "01001" && value == expected_value && decoded == "bab",
        format!("code {code} = {value}, decodes to {decoded:?}"),
    )
}

fn main() {
    let c = corpora();
    let (runs, elapsed) = run_all(&c);
    let results = [
        ("lossless round-trip", criterion_1(&runs, elapsed)),
        ("code-length bound", criterion_2(&runs)),
        (
            "ideal bits equal replayed cross-entropy",
            criterion_3(&runs, &c),
        ),
        ("entropy approach", criterion_4(&runs, &c)),
        ("scaling ladder", criterion_5()),
        ("intermediate working helps", criterion_6()),
        ("determinism", criterion_7(&c)),
        ("phi properties", criterion_8()),
        ("joint-bound regression", criterion_9()),
        ("worked bab example", criterion_10()),
    ];
    let mut failed = 0;
    for (n, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {} {name}: {}",
            n + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
