//! The ten acceptance criteria. Each prints one line; any failure makes the
//! process exit nonzero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use shiftforge_core::block_ops::{check_axioms, continuity_check, Continuity, OneBlockOp};
use shiftforge_core::cli_io::{fixture, fixtures, run, write_outputs, Command, RunConfig};
use shiftforge_core::coset_structure::{
    class_family, coset_law_check, predecessor_law_check, product_law_check, Side,
};
use shiftforge_core::decomposition::{decompose, is_fractal, theta_code, Fractality};
use shiftforge_core::group_core::{prufer, Elem, Size};
use shiftforge_core::isg_embedding::{AbstractInverseMonoid, ChainEmbedding};
use shiftforge_core::sequence_core::{Axis, Sequence};
use shiftforge_core::shift_space::{SampleParams, Sampler, Shift, M_STEP_CAP};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Every bundled shift fixture, by name.
fn shift_fixtures() -> Vec<&'static str> {
    fixtures::BUNDLED
        .iter()
        .filter(|(_, text)| text.contains("\"shift\""))
        .map(|(file, _)| file.trim_end_matches(".json"))
        .collect()
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let el = t.elapsed();
    if el > limit {
        return Err(format!("took {el:?}, limit {limit:?}"));
    }
    Ok(el)
}

fn c1_parity_counts() -> Outcome {
    let t = Instant::now();
    let s = fixture("parity");
    let count = |n, k| class_family(&s, n, k, 64, Side::Follower).map(|f| f.len()).map_err(|e| e.to_string());
    ensure!(count(1, 1)? == 1, "|L^(1,1)| = {}", count(1, 1)?);
    for k in 2..=4 {
        ensure!(count(1, k)? == 2, "|L^(1,{k})| = {}", count(1, k)?);
    }
    for n in 2..=4 {
        for k in 2..=4 {
            ensure!(count(n, k)? == 4, "|L^({n},{k})| = {}", count(n, k)?);
        }
        // with k = 1 the follower sets are just E or O
        ensure!(count(n, 1)? == 2, "|L^({n},1)| = {}", count(n, 1)?);
    }
    let el = within(t, Duration::from_secs(1))?;
    Ok(format!("1 / 2 / 4 for n,k up to 4; |L^(n,1)| = 2 for n >= 2; {el:?}"))
}

fn c2_prufer_cardinalities() -> Outcome {
    let t = Instant::now();
    let s = fixture("prufer_fractal");
    let letters = s.alphabet.enumerate(256);
    ensure!(letters.iter().all(|a| matches!(a, Elem::Dyadic { level, .. } if *level <= 8)), "letters past level 8");
    for a in &letters {
        let f = s.followers_listed(a, 1024);
        ensure!(f.len() == 2, "F_1({a}) has {} elements", f.len());
    }
    let e = prufer::identity();
    let pred: Vec<&Elem> = letters.iter().filter(|a| s.allowed(a, &e)).collect();
    ensure!(pred.len() == 1, "P_1([0,1]) has {} elements to level 8", pred.len());
    let fr = is_fractal(&s, 4).map_err(|e| e.to_string())?;
    ensure!(matches!(fr, Fractality::SelfSimilarAtLevel { level: 1, .. }), "is_fractal gave {fr:?}");
    let el = within(t, Duration::from_secs(5))?;
    Ok(format!("256 letters with |F_1| = 2, |P_1([0,1])| = 1, self-similar at level 1; {el:?}"))
}

/// Shifts whose operation is a group-induced 1-block operation on a closed shift.
fn law_fixtures() -> Vec<&'static str> {
    shift_fixtures().into_iter().filter(|n| *n != "broken_closure" && fixture(n).alphabet.is_group()).collect()
}

fn c3_coset_laws() -> Outcome {
    const B: usize = 16;
    let mut total = 0;
    let names = law_fixtures();
    for name in &names {
        let s = fixture(name);
        let mut sampler = Sampler::new(3, SampleParams::default());
        let mut triples = 0;
        let mut tries = 0;
        while triples < 50 {
            tries += 1;
            ensure!(tries < 2000, "{name}: could not sample blocks");
            let n = 1 + tries % 2;
            let k = 1 + (tries / 2) % 2;
            let (Some(a), Some(b)) = (sampler.walk(&s, &[], n), sampler.walk(&s, &[], n)) else { continue };
            let fail = |e: shiftforge_core::Error| format!("{name}: {e}");
            coset_law_check(&s, &a, k, B).map_err(fail)?;
            predecessor_law_check(&s, &a, k, B).map_err(fail)?;
            for side in [Side::Follower, Side::Predecessor] {
                product_law_check(&s, &a, &b, k, B, side).map_err(fail)?;
                // classes of equal-length blocks are equal or disjoint
                let letters = s.alphabet.enumerate(if k == 1 { B } else { 4 });
                let fa: BTreeSet<Vec<Elem>> = s.brute_words(&a, k, &letters, side == Side::Follower).into_iter().collect();
                let fb: BTreeSet<Vec<Elem>> = s.brute_words(&b, k, &letters, side == Side::Follower).into_iter().collect();
                ensure!(fa == fb || fa.is_disjoint(&fb), "{name}: classes of {a:?} and {b:?} overlap without being equal");
            }
            triples += 1;
        }
        total += triples;
    }
    Ok(format!("{total} triples over {} fixtures ({}), B = {B}", names.len(), names.join(", ")))
}

fn c4_axioms() -> Outcome {
    let t = Instant::now();
    let mut per = Vec::new();
    for name in shift_fixtures().into_iter().filter(|n| *n != "broken_closure") {
        let s = fixture(name);
        let mut sampler = Sampler::new(17, SampleParams::default());
        let r = check_axioms(&s, &mut sampler, 200);
        ensure!(r.violations.is_empty(), "{name}: {}", r.violations[0]);
        per.push(name);
    }
    let el = within(t, Duration::from_secs(10))?;
    Ok(format!("200 triples each on {} fixtures, no violations; {el:?}", per.len()))
}

fn c5_continuity() -> Outcome {
    let check = |name: &str| {
        let s = fixture(name);
        continuity_check(&s, 64, &mut Sampler::new(5, SampleParams::default()))
    };
    ensure!(check("union_groups").is_continuous(), "union of groups is not continuous");
    let mut disc = vec!["full_int"];
    for name in shift_fixtures() {
        let s = fixture(name);
        if s.axis == Axis::TwoSided && s.has_infinitely_many_points() && name != "broken_closure" {
            disc.push(name);
        }
    }
    for name in &disc {
        match check(name) {
            Continuity::Discontinuous { witness } => ensure!(!witness.is_null(), "{name}: empty witness"),
            c => return Err(format!("{name}: {c:?}")),
        }
    }
    Ok(format!("union_groups continuous; discontinuous with witness: {}", disc.join(", ")))
}

fn c6_theta_round_trip() -> Outcome {
    let s = fixture("prufer_fractal");
    let t = theta_code(&s).map_err(|e| e.to_string())?;
    let mut sampler = Sampler::new(6, SampleParams::default());
    let mut xs: Vec<Sequence> = vec![Sequence::empty(Axis::TwoSided)];
    while xs.len() < 120 {
        if let Some(x) = sampler.walk_sequence(&s) {
            xs.push(x);
        }
    }
    let finite = xs.iter().filter(|x| !x.is_empty() && !x.is_infinite()).count();
    ensure!(finite > 0, "no finite walks");
    let (op, top) = (OneBlockOp::new(s.alphabet.clone()), OneBlockOp::new(t.target.alphabet.clone()));
    for (i, x) in xs.iter().enumerate() {
        let tx = t.code.apply(x);
        ensure!(t.inverse.apply(&tx) == *x, "round trip fails at {x}");
        ensure!(tx.length() == x.length(), "length changes at {x}");
        let y = &xs[(i * 7 + 1) % xs.len()];
        let lhs = t.code.apply(&op.apply(x, y).map_err(|e| e.to_string())?);
        let rhs = top.apply(&tx, &t.code.apply(y)).map_err(|e| e.to_string())?;
        ensure!(lhs == rhs, "theta(x y) != theta(x) theta(y) at {x}, {y}");
    }
    Ok(format!("{} walks ({finite} finite, 1 empty), no violations", xs.len()))
}

/// Closed walks of length `p` in the transition graph.
fn cycles(s: &Shift, letters: &[Elem], p: usize) -> Vec<Vec<Elem>> {
    paths(s, letters, p).into_iter().filter(|w| s.allowed(&w[p - 1], &w[0])).collect()
}

fn paths(s: &Shift, letters: &[Elem], len: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters
                    .iter()
                    .filter(|b| w.last().is_none_or(|a| s.allowed(a, b)))
                    .map(|b| {
                        let mut v = w.clone();
                        v.push(b.clone());
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// Every point of `s` with both periods and the centre at most `cap` long, anchored at 0.
fn small_points(s: &Shift, cap: usize) -> BTreeSet<Sequence> {
    let letters = s.alphabet.enumerate(16);
    let periods: Vec<Vec<Elem>> = (1..=cap).flat_map(|p| cycles(s, &letters, p)).collect();
    let centres: Vec<Vec<Elem>> = (0..=cap).flat_map(|c| paths(s, &letters, c)).collect();
    let mut out = BTreeSet::new();
    out.insert(Sequence::empty(Axis::TwoSided));
    for l in &periods {
        for c in &centres {
            let left = Sequence::left_ray(l.clone(), c.clone(), c.len() as i64 - 1).unwrap();
            if s.contains(&left).unwrap() {
                out.insert(left);
            }
            for r in &periods {
                let x = Sequence::bi_infinite(l.clone(), c.clone(), r.clone(), 0).unwrap();
                if s.contains(&x).unwrap() {
                    out.insert(x);
                }
            }
        }
    }
    out
}

fn c7_z4_decomposition() -> Outcome {
    let t = Instant::now();
    let s = fixture("z4_coset");
    let r = decompose(&s, 8, 7, 40).map_err(|e| e.to_string())?;
    let f = &r.fractal;
    ensure!(f.alphabet.size() == Size::Finite(2), "F over {}", f.alphabet.describe());
    let fl = f.alphabet.enumerate(2);
    for a in &fl {
        for b in &fl {
            ensure!(f.allowed(a, b) == (a == b), "F is not the identity-transition shift at {a} {b}");
        }
    }
    ensure!(r.h_orders() == vec![Size::Finite(2)], "H-list orders {:?}", r.h_orders());
    let h = &r.h_list[0];
    let hl = h.enumerate(2);
    ensure!(hl.iter().any(|x| *x != h.identity() && h.mul(x, x) == h.identity()), "H is not Z2");
    let fsize = f.alphabet.size().finite().unwrap();
    let hsize: u64 = r.h_orders().iter().map(|x| x.finite().unwrap()).product();
    ensure!(fsize * hsize == 4, "4 != {fsize} x {hsize}");
    ensure!(r.verification.violations.is_empty(), "{}", r.verification.violations[0]);

    let points: Vec<Sequence> = small_points(&s, 4).into_iter().collect();
    let op = OneBlockOp::new(s.alphabet.clone());
    let fop = OneBlockOp::new(f.alphabet.clone());
    let images: Vec<Sequence> = points.iter().map(|x| r.forward.apply(x)).collect();
    let distinct: BTreeSet<&Sequence> = images.iter().collect();
    ensure!(distinct.len() == points.len(), "forward code is not injective");
    for (x, y) in points.iter().zip(&images) {
        ensure!(r.target.contains(y).unwrap_or(false), "{y} is not in the target");
        ensure!(r.inverse.apply(y) == *x, "inverse fails at {x}");
        ensure!(r.forward.apply(&r.inverse.apply(y)) == *y, "forward after inverse fails at {y}");
    }
    // pairs: every point against two partners, plus all pairs with no centre and periods up to 2
    let short: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].left_len() <= 2 && points[i].right_len() <= 2 && points[i].center().is_empty())
        .collect();
    let mut pairs: Vec<(usize, usize)> = short.iter().flat_map(|&i| short.iter().map(move |&j| (i, j))).collect();
    for i in 0..points.len() {
        for step in [1, 997] {
            pairs.push((i, (i + step) % points.len()));
        }
    }
    for &(i, j) in &pairs {
        let (x, y) = (&points[i], &points[j]);
        let xy = op.apply(x, y).map_err(|e| e.to_string())?;
        let fxy = r.forward.apply(&xy);
        ensure!(fxy == r.star(&images[i], &images[j]), "star fails at {x}, {y}");
        ensure!(r.head(&fxy) == fop.apply_unchecked(&r.head(&images[i]), &r.head(&images[j])), "head is not a homomorphism at {x}, {y}");
    }
    let el = within(t, Duration::from_secs(5))?;
    Ok(format!("{} points, {} pairs, F = identity shift on 2 letters, H = [Z2], 4 = 2 x 2; {el:?}", points.len(), pairs.len()))
}

fn c8_embedding() -> Outcome {
    let mut parts = Vec::new();
    for m in [2, 3] {
        let s = AbstractInverseMonoid::truncated_sequences(m, 3).map_err(|e| e.to_string())?;
        let emb = ChainEmbedding::new(&s).map_err(|e| e.to_string())?;
        let r = emb.verify().map_err(|e| e.to_string())?;
        ensure!(r.passed(), "Z{m}: {}", r.violations[0]);
        parts.push(format!("Z{m}: {} elements, {} pairs", r.elements, r.pairs));
    }
    Ok(parts.join("; "))
}

fn c9_m_step() -> Outcome {
    let s = fixture("parity");
    ensure!(s.m_step(M_STEP_CAP).exact() == Some(2), "m_step = {:?}", s.m_step(M_STEP_CAP));
    let e = s.alphabet.identity();
    let keys: Vec<_> = (1..=6).map(|m| s.follower_key(&vec![e.clone(); m], 1)).collect();
    ensure!(keys[0] != keys[1] && keys[1..].iter().all(|k| *k == keys[1]), "followers of 1^m do not settle at 2");
    let hb = s.higher_block(2).map_err(|e| e.to_string())?;
    ensure!(hb.shift.markov_parts().is_some(), "2-block presentation is not Markov");
    let mut sampler = Sampler::new(9, SampleParams::default());
    let mut n = 0;
    for _ in 0..100 {
        let Some(x) = sampler.walk_sequence(&s) else { continue };
        let y = hb.forward.apply(&x);
        ensure!(hb.shift.contains(&y).unwrap_or(false), "{y} is not in the 2-block shift");
        ensure!(hb.inverse.apply(&y) == x, "round trip fails at {x}");
        n += 1;
    }
    Ok(format!("M = 2, Markov 2-block presentation, {n} round trips"))
}

fn c10_determinism() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut files = 0;
    for cmd in Command::ALL {
        let mut bytes = Vec::new();
        for round in 0..2 {
            let sub = dir.join(format!("{cmd}-{round}"));
            std::fs::create_dir_all(&sub).map_err(|e| e.to_string())?;
            let mut cfg = RunConfig::new(cmd).with_spec("z4_coset");
            cfg.monoid = Some("truncated_z2".into());
            cfg.seed = 1234;
            cfg.samples = 50;
            // relative paths keep the report identical across the two directories
            cfg.emit_dot = Some("graph.dot".into());
            cfg.out = Some("report.json".into());
            let outcome = run(&cfg);
            let abs = |p: &str| sub.join(p).to_string_lossy().into_owned();
            let mut written = cfg.clone();
            written.out = Some(abs("report.json"));
            let mut moved = outcome.clone();
            for (p, _) in moved.dot.iter_mut() {
                *p = Some(abs(p.as_deref().unwrap_or("stdout.dot")));
            }
            write_outputs(&written, &moved).map_err(|e| e.to_string())?;
            let mut round_files: Vec<(String, Vec<u8>)> = Vec::new();
            let mut names: Vec<_> = std::fs::read_dir(&sub).map_err(|e| e.to_string())?.flatten().map(|e| e.file_name()).collect();
            names.sort();
            for name in names {
                round_files.push((name.to_string_lossy().into_owned(), std::fs::read(sub.join(&name)).map_err(|e| e.to_string())?));
            }
            bytes.push(round_files);
        }
        ensure!(bytes[0] == bytes[1], "{cmd}: outputs differ between runs");
        files += bytes[0].len();
    }
    Ok(format!("{} commands, {files} files byte-identical across two runs", Command::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C1 parity class counts", c1_parity_counts),
        ("C2 Prufer follower and predecessor sizes", c2_prufer_cardinalities),
        ("C3 coset laws", c3_coset_laws),
        ("C4 inverse semigroup axioms", c4_axioms),
        ("C5 continuity classification", c5_continuity),
        ("C6 theta round trip", c6_theta_round_trip),
        ("C7 Z4 decomposition", c7_z4_decomposition),
        ("C8 chain embedding", c8_embedding),
        ("C9 M-step stabilization", c9_m_step),
        ("C10 determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
