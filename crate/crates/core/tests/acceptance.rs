//! Acceptance run: one line per criterion, exact arithmetic, wall-time limits.
//!
//! `SURFCONF_TIER=fast` skips the slow cases; the default runs everything.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfconf_core::groupring::{generator_series, mu, zeta, AlgebraElement, Gen, Word};
use surfconf_core::linalg::rank_of;
use surfconf_core::moriyama::{arrangements, delta, dimension, full_basis, shuffle_product, ArrangementBasisElement, HClass};
use surfconf_core::pairing::{ehat_patterns, DualClass};
use surfconf_core::surface::Limits;
use surfconf_core::verifier::{Status, Task, Tier, Verdict, Verifier};
use surfconf_core::Rational;

/// Sub-claims that cannot hold as stated; they are evaluated and reported,
/// and the run fails if their outcome changes.
const KNOWN_UNATTAINABLE: &[(u32, &str)] =
    &[(7, "mu-tilde: the image of mu vanishes only at g = 1; at g >= 2 only mu + c3 dies")];

struct Outcome {
    pass: bool,
    detail: String,
    payload: String,
    known_failure: bool,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, detail: String::new(), payload: String::new(), known_failure: false }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.payload.push_str(&format!("{what}={ok};"));
        if !ok {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&format!("failed: {what}"));
        }
    }

    fn verdict(&mut self, v: &Verdict, expected: Status) {
        self.payload.push_str(&serde_json::to_string(v).unwrap());
        self.check(v.status == expected, format!("{} {:?} is {}", v.theorem, v.params, v.status));
    }
}

struct Ctx {
    verifier: Verifier,
    slow: bool,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_element(r: &mut ChaCha8Rng, g: usize, cap: usize) -> AlgebraElement {
    let gens: Vec<Gen> = Gen::all(g).collect();
    let terms: Vec<(Word, Rational)> = (0..r.gen_range(1..5))
        .map(|_| {
            let len = r.gen_range(0..=cap);
            let w = Word((0..len).map(|_| gens[r.gen_range(0..gens.len())]).collect());
            (w, Rational::from_int(r.gen_range(-3..=3)))
        })
        .collect();
    AlgebraElement::from_terms(terms, cap).unwrap()
}

fn random_class(r: &mut ChaCha8Rng, labels: &[u8], g: usize) -> HClass {
    let basis = arrangements(labels, g);
    let mut x = HClass::zero(labels, g).unwrap();
    for _ in 0..r.gen_range(1..4) {
        let e = basis[r.gen_range(0..basis.len())].clone();
        x.add_scaled(&HClass::basis(e), &Rational::from_int(r.gen_range(-2..=2))).unwrap();
    }
    x
}

fn c1_ring(_: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    for i in 1..=4i32 {
        for x in [Gen::new(i, 4).unwrap(), Gen::new(-i, 4).unwrap()] {
            for cap in 0..=6 {
                let p = generator_series(x, 1, cap).unwrap().truncated_product(&generator_series(x, -1, cap).unwrap()).unwrap();
                o.check(p == AlgebraElement::one(cap), format!("inverse {x} cap {cap}"));
            }
        }
    }
    let mut r = rng(1);
    let mut ok = true;
    for _ in 0..100 {
        let (a, b, c) = (random_element(&mut r, 2, 4), random_element(&mut r, 2, 4), random_element(&mut r, 2, 4));
        let l = a.truncated_product(&b).unwrap().truncated_product(&c).unwrap();
        let rr = a.truncated_product(&b.truncated_product(&c).unwrap()).unwrap();
        ok &= l == rr;
    }
    o.check(ok, "associativity on 100 triples");
    o
}

fn c2_relator(_: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    for g in 1..=4 {
        let z = zeta(g, 3).unwrap();
        o.check(z.graded_piece(1).unwrap().is_zero(), format!("g={g} degree 1"));
        o.check(z.graded_piece(2).unwrap() == mu(g).unwrap().with_cap(3), format!("g={g} degree 2"));
    }
    o
}

fn c3_injectivity(_: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    for (g, n) in [(1, 2), (2, 2), (2, 3)] {
        let ix = full_basis(n, g);
        let labels: Vec<u8> = (1..=n as u8).collect();
        let images: Vec<_> = Word::all(n, g)
            .into_iter()
            .map(|w| delta(&AlgebraElement::word(w, n).unwrap(), &labels, g).unwrap().vector(&ix).unwrap())
            .collect();
        let rank = rank_of(&images, ix.dim());
        o.check(rank == (2 * g).pow(n as u32), format!("(g,n)=({g},{n}) rank {rank}"));
    }
    for g in 1..=4u64 {
        for n in 0..=4u64 {
            let rising: u64 = (0..n).map(|i| 2 * g + i).product();
            o.check(dimension(n as usize, g as usize) == rising, format!("dimension({n},{g})"));
        }
    }
    o
}

fn c4_shuffles(_: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(4);
    let (mut comm, mut assoc) = (true, true);
    let splits: [(&[u8], &[u8], &[u8]); 4] =
        [(&[1], &[2], &[3]), (&[1, 2], &[3], &[4]), (&[1], &[2, 3], &[4, 5]), (&[2, 1], &[4], &[3])];
    for t in 0..200 {
        let (a, b, c) = splits[t % splits.len()];
        let g = 1 + t % 2;
        let (x, y, z) = (random_class(&mut r, a, g), random_class(&mut r, b, g), random_class(&mut r, c, g));
        let sign = Rational::from_int(if (a.len() * b.len()) % 2 == 0 { 1 } else { -1 });
        comm &= shuffle_product(&x, &y).unwrap() == shuffle_product(&y, &x).unwrap().scale(&sign);
        let l = shuffle_product(&shuffle_product(&x, &y).unwrap(), &z).unwrap();
        let rr = shuffle_product(&x, &shuffle_product(&y, &z).unwrap()).unwrap();
        assoc &= l == rr;
    }
    o.check(comm, "graded commutativity on 200 instances");
    o.check(assoc, "associativity on 200 instances");
    o
}

fn run(ctx: &Ctx, o: &mut Outcome, task: Task, expected: Status) -> Verdict {
    let v = ctx.verifier.run(task).unwrap();
    o.verdict(&v, expected);
    v
}

fn c5_theorem_a(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    run(ctx, &mut o, Task::A { n: 3, g: 2 }, Status::VerifiedEqual);
    run(ctx, &mut o, Task::A { n: 3, g: 3 }, Status::VerifiedEqual);
    if ctx.slow {
        run(ctx, &mut o, Task::A { n: 4, g: 3 }, Status::VerifiedEqual);
    }
    o
}

fn c6_theorem_c(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    for k in 1..=2 {
        let v = run(ctx, &mut o, Task::C { k, n: 3, g: 3 }, Status::VerifiedEqual);
        o.check(v.dims["kernel_dim"] == 0, format!("k={k} kernel zero"));
    }
    let v = run(ctx, &mut o, Task::C { k: 3, n: 3, g: 3 }, Status::VerifiedEqual);
    o.check(v.dims["kernel_dim"] == v.dims["weight_image_dim"], "k=3 kernel = weight <= 1 image");
    if ctx.slow {
        run(ctx, &mut o, Task::C { k: 4, n: 4, g: 4 }, Status::VerifiedEqual);
    }
    o
}

fn c7_vanishing(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    let cases = [(3, 2), (3, 3), (4, 3)];
    for (n, g) in cases {
        run(ctx, &mut o, Task::Vanishing { n, g }, Status::VerifiedEqual);
    }
    let corollary = o.pass;
    if corollary {
        o.detail.push_str("lifts with s+r >= n+1 vanish at (3,2), (3,3), (4,3)");
    }
    let mut mu_all = true;
    let mut mu_payload = String::new();
    for (n, g) in cases {
        let v = ctx.verifier.run(Task::MuTilde { n, g }).unwrap();
        mu_payload.push_str(&serde_json::to_string(&v).unwrap());
        mu_all &= v.status == Status::VerifiedEqual;
        o.detail.push_str(&format!("{}mu-tilde (n={n},g={g}) {}", if o.detail.is_empty() { "" } else { "; " }, v.status));
    }
    for (n, g) in [(3, 1), (4, 1)] {
        let v = ctx.verifier.run(Task::MuTilde { n, g }).unwrap();
        mu_payload.push_str(&serde_json::to_string(&v).unwrap());
        o.check(v.status == Status::VerifiedEqual, format!("mu-tilde (n={n},g={g}) vanishes"));
    }
    o.payload.push_str(&mu_payload);
    if !mu_all {
        o.pass = false;
        o.known_failure = corollary && o.detail.matches("failed").count() == 0;
    }
    o
}

fn c8_independence(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    let mut cases = vec![(3, 3, 27), (2, 2, 4)];
    if ctx.slow {
        cases.push((4, 4, 257));
    }
    for (n, g, size) in cases {
        let v = run(ctx, &mut o, Task::Independence { n, g }, Status::VerifiedEqual);
        let (s, r) = (v.dims["family_size"], v.dims["family_rank"]);
        o.check(s == size && r == size, format!("(n,g)=({n},{g}) rank {r} of {s}"));
        for (name, value) in &v.dims {
            if let Some(stem) = name.strip_suffix("_size") {
                o.check(v.dims[&format!("{stem}_rank")] == *value, format!("{stem} full rank"));
            }
        }
    }
    o
}

fn c9_pairing(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    o.check(ehat_patterns([1, 2, 3], 1, 1).is_err(), "genus overflow rejected");
    let six = DualClass::from_patterns(3, 2, &ehat_patterns([1, 2, 3], 1, 2).unwrap()).unwrap();
    let expected = [
        ("1:(1,2);-1:(3)", 1),
        ("1:(2,1);-1:(3)", 1),
        ("1:(1);-1:(2,3)", -1),
        ("1:(1);-1:(3,2)", -1),
        ("1:(2);-1:(1,3)", -1),
        ("1:(2);-1:(3,1)", -1),
    ];
    let mut table_ok = six.len() == 6;
    for (text, sign) in expected {
        let e = ArrangementBasisElement::parse(text, 2).unwrap();
        table_ok &= six.get(&e) == Rational::from_int(sign);
    }
    o.check(table_ok, "six-row table signs");
    let mut cases = vec![(3, 3, 27)];
    if ctx.slow {
        cases.push((4, 4, 257));
    }
    for (n, g, size) in cases {
        let v = run(ctx, &mut o, Task::Pairing { n, g }, Status::VerifiedEqual);
        let p = v.pairing.as_ref().unwrap();
        o.check(p.family_size == size, format!("{size}x{size} matrix"));
        o.check(p.diagonal_signs.iter().all(|s| s.abs() == 1), "diagonal entries are +-1");
        o.check(p.off_diagonal_max_abs == "0", "off-diagonal entries vanish");
    }
    o
}

fn c10_cyclic(ctx: &Ctx) -> Outcome {
    let mut o = Outcome::new();
    let mut cases = vec![(1, 0, 2), (1, 1, 2), (1, 1, 3)];
    if ctx.slow {
        cases.extend([(2, 1, 4), (2, 2, 4)]);
    }
    for (k, w, g) in cases {
        run(ctx, &mut o, Task::Cyclic { k, w, g }, Status::VerifiedContained);
    }
    o
}

type Criterion = (u32, &'static str, fn(&Ctx) -> Outcome, Duration, Duration);

fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        (1, "Fox/Magnus ring sanity", c1_ring, s(5), s(5)),
        (2, "relator expansion", c2_relator, s(5), s(5)),
        (3, "Moriyama injectivity", c3_injectivity, s(30), s(30)),
        (4, "shuffle algebra", c4_shuffles, s(10), s(10)),
        (5, "kernel of the top graded piece", c5_theorem_a, s(60), s(600)),
        (6, "graded kernels", c6_theorem_c, s(120), s(600)),
        (7, "vanishing", c7_vanishing, s(120), s(120)),
        (8, "independence", c8_independence, s(60), s(600)),
        (9, "perfect pairing", c9_pairing, s(120), s(600)),
        (10, "cyclic lemma", c10_cyclic, s(60), s(600)),
    ]
}

fn main() -> ExitCode {
    let tier: Tier = std::env::var("SURFCONF_TIER").ok().and_then(|t| t.parse().ok()).unwrap_or(Tier::All);
    let slow = tier != Tier::Fast;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut payloads: Vec<Vec<String>> = Vec::new();
    let mut unexpected = 0;
    let mut passed = 0;
    let mut known = 0;
    for (round, dir) in dirs.iter().enumerate() {
        let ctx = Ctx { verifier: Verifier::new(Limits::default(), Some(dir.path().into())), slow };
        let mut round_payloads = Vec::new();
        for (id, name, f, fast_limit, slow_limit) in criteria() {
            let start = Instant::now();
            let mut o = f(&ctx);
            let elapsed = start.elapsed();
            let limit = if slow { slow_limit } else { fast_limit };
            if elapsed > limit {
                o.check(false, format!("runtime {elapsed:.2?} over {limit:?}"));
                o.known_failure = false;
            }
            round_payloads.push(o.payload.clone());
            if round > 0 {
                continue;
            }
            let known_reason = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id).map(|(_, r)| *r);
            let label = if o.pass { "PASS" } else { "FAIL" };
            let mut line = format!("[{label}] criterion {id:>2} {name} ({elapsed:.2?})");
            if !o.detail.is_empty() {
                line.push_str(&format!(": {}", o.detail));
            }
            match (o.pass, known_reason) {
                (true, None) => passed += 1,
                (true, Some(_)) => {
                    line.push_str(" [expected a documented failure; update the known list]");
                    unexpected += 1;
                }
                (false, Some(reason)) if o.known_failure => {
                    line.push_str(&format!(" [known: {reason}]"));
                    known += 1;
                }
                (false, _) => unexpected += 1,
            }
            println!("{line}");
        }
        payloads.push(round_payloads);
    }
    let deterministic = payloads[0] == payloads[1];
    println!(
        "[{}] criterion 11 determinism: {} payloads compared across two cold caches",
        if deterministic { "PASS" } else { "FAIL" },
        payloads[0].len()
    );
    if deterministic {
        passed += 1;
    } else {
        unexpected += 1;
    }
    println!("tier {tier:?}: {passed} passed, {known} known failures, {unexpected} unexpected");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
