//! The eleven acceptance criteria, one PASS/FAIL line each.
//! Run with `cargo test --release -p gpwalls-cli --test acceptance`.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use gpwalls::cayley::GeodesicPath;
use gpwalls::divergence::{divergence_profile, quadratic_bound_check, ClassifyConfig, Growth, SearchBound};
use gpwalls::rays::{
    block_decomposition, block_time, detect_contracting, estimate_contraction, estimate_slimness, sample_ray,
    Detection, DetectorParams, RaySpec,
};
use gpwalls::walls::{crosses, crosses_by_carrier, crosses_by_heap, separation, walls_of_path, Relation, Wall};
use gpwalls::{catalog, Group, Limits, Word};
use gpwalls_cli::suites::{a_hexagon_rays, c_block_ray, long_block_rays, run_suite, short_block_periods, SUITES};
use gpwalls_testkit::{all_words, EdgeClasses, WordBall};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(k: usize, r: usize, radius: usize) -> DetectorParams {
    DetectorParams { k, r, radius, horizon: 40 }
}

/// Calls `f` on every geodesic word of length at most `max` (depth first).
fn for_geodesics(g: &Group, max: usize, f: &mut dyn FnMut(&Word)) {
    fn go(g: &Group, w: &mut Word, max: usize, f: &mut dyn FnMut(&Word)) {
        f(w);
        if w.len() == max {
            return;
        }
        for l in g.letters() {
            w.push(l);
            if g.is_geodesic(w).unwrap() {
                go(g, w, max, f);
            }
            *w = w.prefix(w.len() - 1);
        }
    }
    go(g, &mut Word::new(), max, f);
}

fn random_geodesic(g: &Group, rng: &mut ChaCha8Rng, len: usize) -> Word {
    let letters = g.letters();
    let mut w = Word::new();
    while w.len() < len {
        let mut v = w.clone();
        v.push(letters[rng.gen_range(0..letters.len())]);
        if g.is_geodesic(&v).unwrap() {
            w = v;
        }
    }
    w
}

fn sampled(g: &Group, seed: u64) -> RaySpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_ray(g, &mut rng, 2, 4, 40).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut words = 0;
    for name in catalog::BUILTIN_NAMES {
        let g = catalog::group(name).unwrap();
        let ball = WordBall::new(&g, 5);
        let dist = ball.bfs(ball.class(&[]).unwrap());
        let mut class_of_nf: HashMap<Word, usize> = HashMap::new();
        for n in 0..=5 {
            for w in all_words(&g, n) {
                let c = ball.class(&w).unwrap();
                let nf = g.normal_form(&w).unwrap();
                check(dist[c] == Some(nf.len()), || format!("{name}: length of {w:?}"))?;
                let prev = *class_of_nf.entry(nf.word().clone()).or_insert(c);
                check(prev == c, || format!("{name}: {w:?} shares a normal form with another class"))?;
                words += 1;
            }
        }
        check(class_of_nf.len() == ball.class_count(), || format!("{name}: class count"))?;
    }
    Ok(format!("{words} words"))
}

fn distinct_walls(g: &Group, w: &Word) -> Result<(), String> {
    let walls = walls_of_path(g, &GeodesicPath::from_identity(g, w).unwrap()).unwrap();
    let set: HashSet<&Wall> = walls.iter().collect();
    check(set.len() == w.len(), || format!("repeated wall on {w:?}"))
}

fn wall_bijection() -> Outcome {
    let mut count = 0;
    for name in catalog::BUILTIN_NAMES {
        let g = catalog::group(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let len = rng.gen_range(0..=10);
            distinct_walls(&g, &random_geodesic(&g, &mut rng, len))?;
            count += 1;
        }
        let mut err = None;
        for_geodesics(&g, 6, &mut |w| {
            if err.is_none() {
                err = distinct_walls(&g, w).err();
                count += 1;
            }
        });
        if let Some(e) = err {
            return Err(format!("{name}: {e}"));
        }
    }
    Ok(format!("{count} geodesics"))
}

fn crossing_triple() -> Outcome {
    let mut pairs = 0;
    for name in ["hexagon", "croke-kleiner"] {
        let g = catalog::group(name).unwrap();
        let ball = WordBall::new(&g, 6);
        let edges = EdgeClasses::new(&g, &ball);
        let class_of = |w: &Wall| {
            let (tail, l) = w.source.clone().unwrap();
            edges.class(&g, &ball, ball.class(&tail).unwrap(), l).unwrap()
        };
        let mut err = None;
        for_geodesics(&g, 6, &mut |w| {
            if err.is_some() {
                return;
            }
            let walls = walls_of_path(&g, &GeodesicPath::from_identity(&g, w).unwrap()).unwrap();
            for i in 0..walls.len() {
                for j in i + 1..walls.len() {
                    let (a, b) = (&walls[i], &walls[j]);
                    let carrier = crosses_by_carrier(&g, a, b);
                    let heap = crosses_by_heap(&g, a, b);
                    let brute = edges.cross(class_of(a), class_of(b));
                    if carrier != heap || heap != brute {
                        err = Some(format!("{name} {w:?} {i} {j}: {carrier} {heap} {brute}"));
                    }
                    pairs += 1;
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn hexagon_separation() -> Outcome {
    let g = catalog::group("hexagon").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max = 0;
    let mut n = 0;
    while n < 100 {
        let len = rng.gen_range(2..=10);
        let w = random_geodesic(&g, &mut rng, len);
        let walls = walls_of_path(&g, &GeodesicPath::from_identity(&g, &w).unwrap()).unwrap();
        let i = rng.gen_range(0..len - 1);
        let j = rng.gen_range(i + 1..len);
        if crosses(&g, &walls[i], &walls[j]) {
            continue;
        }
        let v = separation(&g, &walls[i], &walls[j], 8, None).unwrap();
        check(v.relation == Relation::Disjoint, || format!("{w:?} {i} {j}"))?;
        check(v.crossing_both_count <= 1, || format!("{w:?} {i} {j}: {}", v.crossing_both_count))?;
        max = max.max(v.crossing_both_count);
        n += 1;
    }
    Ok(format!("100 pairs, max count {max}"))
}

fn detector_examples() -> Outcome {
    let ck = catalog::group("croke-kleiner").unwrap();
    let ad = RaySpec::parse(&ck, "", "a d", 40).unwrap();
    check(detect_contracting(&ck, &ad, &params(0, 2, 6)).unwrap().is_accept(), || "(a d) rejected".into())?;
    let b = RaySpec::parse(&ck, "", "b", 40).unwrap();
    for k in 0..=8 {
        check(!detect_contracting(&ck, &b, &params(k, 6, 8)).unwrap().is_accept(), || format!("b accepted at k={k}"))?;
    }
    let k33 = catalog::group("k33").unwrap();
    for seed in 0..20 {
        let ray = sampled(&k33, seed);
        for k in 0..=8 {
            let d = detect_contracting(&k33, &ray, &params(k, 6, 8)).unwrap();
            check(!d.is_accept(), || format!("k33 seed {seed} accepted at k={k}"))?;
        }
    }
    let h = catalog::group("hexagon").unwrap();
    for seed in 0..20 {
        let ray = sampled(&h, seed);
        let d = detect_contracting(&h, &ray, &params(1, 6, 8)).unwrap();
        check(d.is_accept(), || format!("hexagon {} rejected", ray.format(&h)))?;
    }
    Ok("(a d) accept, b reject k≤8, 20 k33 rejects, 20 hexagon accepts".into())
}

fn croke_kleiner_dichotomy() -> Outcome {
    let ck = catalog::group("croke-kleiner").unwrap();
    let periods = short_block_periods(&ck, 4).unwrap();
    for ray in &periods {
        let d = detect_contracting(&ck, ray, &params(0, 4, 6)).unwrap();
        check(d.is_accept(), || format!("{} rejected", ray.format(&ck)))?;
    }
    let long = long_block_rays(&ck).unwrap();
    for (l, ray) in &long {
        let bt = block_time(&block_decomposition(&ck, &ray.unroll(40)).unwrap());
        check(bt == *l, || format!("{}: block time {bt}", ray.format(&ck)))?;
        let d = detect_contracting(&ck, ray, &params(0, 4, 6)).unwrap();
        let o = d.obstruction().ok_or_else(|| format!("{} accepted", ray.format(&ck)))?;
        check(o.width() + 2 >= *l, || format!("{}: width {}", ray.format(&ck), o.width()))?;
    }
    Ok(format!("{} short-block periods accepted, {} long-block windows", periods.len(), long.len()))
}

fn gamma_contrast() -> Outcome {
    let g2 = catalog::group("gamma2").unwrap();
    for ray in a_hexagon_rays(&g2, 0, 20).unwrap() {
        let d = detect_contracting(&g2, &ray, &params(1, 4, 6)).unwrap();
        check(d.is_accept(), || format!("gamma2 {} rejected", ray.format(&g2)))?;
    }
    let g1 = catalog::group("gamma1").unwrap();
    let widths: Vec<usize> = [4, 6, 8, 10]
        .iter()
        .map(|&l| match detect_contracting(&g1, &c_block_ray(&g1, l).unwrap(), &params(1, 4, 6)).unwrap() {
            Detection::Accept(_) => 0,
            Detection::Reject(o) => o.width(),
        })
        .collect();
    check(widths.windows(2).all(|p| p[0] < p[1]), || format!("gamma1 widths {widths:?}"))?;
    Ok(format!("20 gamma2 rays accepted, gamma1 widths {widths:?}"))
}

fn divergence() -> Outcome {
    let cfg = ClassifyConfig::default();
    let tree = catalog::group("tree3").unwrap();
    let ray = RaySpec::parse(&tree, "", "t1 t2 t3", 30).unwrap();
    let p = divergence_profile(&tree, &ray, &[1, 2, 3, 4], None, SearchBound::Offset(2), cfg).unwrap();
    check(p.classification == Growth::NoDetour, || "tree3 ray has a detour".into())?;

    let k33 = catalog::group("k33").unwrap();
    let ray = RaySpec::parse(&k33, "", "x1 y1 x2 y2", 30).unwrap();
    let rs: Vec<usize> = (2..=10).collect();
    let p = divergence_profile(&k33, &ray, &rs, None, SearchBound::Offset(1), cfg).unwrap();
    let k33_slope = p.slope;
    check((0.8..=1.2).contains(&k33_slope), || format!("k33 slope {k33_slope}"))?;

    let h = catalog::group("hexagon")
        .unwrap()
        .with_limits(Limits { ball_cap: 60_000_000, ..Limits::default() });
    let ray = RaySpec::parse(&h, "", "h1 h3", 40).unwrap();
    let rs: Vec<usize> = (2..=12).collect();
    let p = divergence_profile(&h, &ray, &rs, None, SearchBound::Offset(1), cfg).unwrap();
    check(p.slope >= 1.3, || format!("hexagon slope {}", p.slope))?;
    let d = estimate_contraction(&h, &ray.path(&h, 24).unwrap(), &[1, 2, 3, 4], usize::MAX, 0).unwrap().d_hat;
    let mut checks = quadratic_bound_check(&p.r_values, &p.ldiv_values, d.max(1), 2.0).unwrap().0;
    for seed in 0..4 {
        let ray = sampled(&h, seed);
        let rs: Vec<usize> = (2..=6).collect();
        let p = divergence_profile(&h, &ray, &rs, None, SearchBound::Offset(1), cfg).unwrap();
        let d = estimate_contraction(&h, &ray.path(&h, 16).unwrap(), &[1, 2, 3], usize::MAX, seed).unwrap().d_hat;
        checks.extend(quadratic_bound_check(&p.r_values, &p.ldiv_values, d.max(1), 2.0).unwrap().0);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    check(passed * 10 >= checks.len() * 9, || format!("quadratic {passed}/{}", checks.len()))?;
    Ok(format!(
        "tree3 NO_DETOUR, k33 slope {k33_slope:.3}, hexagon slope {:.3}, quadratic {passed}/{}",
        p.slope,
        checks.len()
    ))
}

fn consistency() -> Outcome {
    let mut rays = Vec::new();
    let h = catalog::group("hexagon").unwrap();
    for seed in 0..20 {
        rays.push((h.clone(), sampled(&h, seed), params(1, 6, 8)));
    }
    let ck = catalog::group("croke-kleiner").unwrap();
    for ray in short_block_periods(&ck, 3).unwrap().into_iter().step_by(8) {
        rays.push((ck.clone(), ray, params(0, 4, 6)));
    }
    let mut accepted = 0;
    for (seed, (g, ray, p)) in rays.iter().enumerate() {
        if !detect_contracting(g, ray, p).unwrap().is_accept() {
            continue;
        }
        accepted += 1;
        let path = ray.path(g, 16).unwrap();
        let c = estimate_contraction(g, &path, &[0, 1, 2, 3], 30, seed as u64).unwrap();
        let s = estimate_slimness(g, &path, 3, 60, seed as u64).unwrap();
        let what = || format!("{}: D {} δi {} δii {}", ray.format(g), c.d_hat, s.delta_i, s.delta_ii);
        check(c.d_hat <= 6 * s.delta_i + 2, what)?;
        check(s.delta_i <= 3 * s.delta_ii + 2, what)?;
        check(s.delta_ii <= s.delta_i + 2, what)?;
    }
    Ok(format!("{accepted} accepted rays"))
}

// d(y1,y2) ≥ d(x1,y1) + d(x2,y2) − 2k − ν·d(x1,x2), y_i on the carriers
fn distance_lemma_on(name: &str, ray: &str, k: usize, seed: u64) -> Result<(), String> {
    let g = catalog::group(name).unwrap();
    let nu = g.graph().dimension();
    let path = RaySpec::parse(&g, "", ray, 20).unwrap().path(&g, 20).unwrap();
    let walls = walls_of_path(&g, &path).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < 100 {
        let i = rng.gen_range(0..walls.len() - 1);
        let j = rng.gen_range(i + 1..walls.len());
        let (w1, w2) = (&walls[i], &walls[j]);
        if !separation(&g, w1, w2, 6, None).unwrap().is_k_separated(k) {
            continue;
        }
        let x1 = path.vertices()[i].clone();
        let x2 = path.vertices()[j + 1].clone();
        let r = g.distance(&x1, &x2).unwrap();
        let mut carrier_point = |w: &Wall| {
            let link: Vec<_> = g.letters().into_iter().filter(|l| g.graph().commute(w.ty, l.gen())).collect();
            let len = rng.gen_range(0..=10);
            let u: Word = (0..len).map(|_| link[rng.gen_range(0..link.len())]).collect();
            w.carrier_vertex(&g, &g.normalize(&u), rng.gen()).unwrap()
        };
        let (y1, y2) = (carrier_point(w1), carrier_point(w2));
        let lhs = g.distance(&y1, &y2).unwrap() as i64;
        let rhs = (g.distance(&x1, &y1).unwrap() + g.distance(&x2, &y2).unwrap()) as i64
            - 2 * k as i64
            - (nu * r) as i64;
        check(lhs >= rhs, || format!("{name}: walls {i} {j}, {y1:?} {y2:?}"))?;
        checked += 1;
    }
    Ok(())
}

fn distance_lemma() -> Outcome {
    distance_lemma_on("hexagon", "h1 h3 h5", 1, 1)?;
    distance_lemma_on("croke-kleiner", "a b d c", 0, 2)?;
    Ok("100 + 100 quadruples".into())
}

fn golden() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for suite in SUITES {
        let out = run_suite(suite, 7).unwrap();
        let csv = std::fs::read_to_string(dir.join(suite).join("results.csv")).unwrap();
        let json = std::fs::read_to_string(dir.join(suite).join("summary.json")).unwrap();
        check(out.csv().unwrap() == csv, || format!("{suite}: results.csv differs"))?;
        check(out.summary_json() == json, || format!("{suite}: summary.json differs"))?;
        check(out.all_pass(), || format!("{suite}: a claim fails"))?;
    }
    Ok("4 suites byte-identical".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 wall bijection", wall_bijection),
        ("3 crossing triple agreement", crossing_triple),
        ("4 hexagon separation", hexagon_separation),
        ("5 detector examples", detector_examples),
        ("6 croke-kleiner dichotomy", croke_kleiner_dichotomy),
        ("7 gamma2 vs gamma1", gamma_contrast),
        ("8 divergence", divergence),
        ("9 cross-property consistency", consistency),
        ("10 distance lemma", distance_lemma),
        ("11 cli determinism", golden),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                println!("FAIL {name}: {why} ({secs:.1}s)");
                failed.push(name);
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
