//! Experiment suites. Every CSV row comes from a [`Task`], and
//! [`evaluate`] recomputes a task from scratch, so any row can be re-checked.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use gpwalls::divergence::{divergence_profile, quadratic_bound_check, ClassifyConfig, Growth, SearchBound};
use gpwalls::rays::{
    block_decomposition, block_time, bounded_projection_check, detect_contracting, estimate_contraction,
    estimate_slimness, itinerary, sample_ray, sample_ray_in, Amalgam, Detection, DetectorParams, RaySpec,
};
use gpwalls::walls::{crosses, separation, walls_of_path, Relation};
use gpwalls::{catalog, Error, Group, Result, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const SUITES: [&str; 4] = ["hexagon", "k33", "croke-kleiner", "gamma1-vs-gamma2"];

pub const CSV_HEADER: [&str; 6] = ["experiment", "group", "subject", "params", "metric", "value"];

/// One unit of work. Rays are written `prefix;period`, parameters as
/// space-separated `key=value` pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Task {
    pub experiment: String,
    pub group: String,
    pub subject: String,
    pub params: String,
}

impl Task {
    pub fn new(experiment: &str, group: &str, subject: impl Into<String>, params: impl Into<String>) -> Self {
        Task {
            experiment: experiment.into(),
            group: group.into(),
            subject: subject.into(),
            params: params.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub task: Task,
    pub metric: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub description: String,
    pub anchor: String,
    pub pass: bool,
    pub data_ref: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutput {
    pub name: String,
    pub seed: u64,
    pub rows: Vec<Row>,
    pub claims: Vec<Claim>,
}

impl SuiteOutput {
    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let t = &r.task;
            w.write_record([&t.experiment, &t.group, &t.subject, &t.params, &r.metric, &r.value])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Precondition(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn summary_json(&self) -> String {
        let claims: Vec<_> = self
            .claims
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "description": c.description,
                    "paper_anchor": c.anchor,
                    "status": if c.pass { "pass" } else { "fail" },
                    "data_ref": c.data_ref,
                })
            })
            .collect();
        let v = json!({
            "suite": self.name,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "claims": claims,
        });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("results.csv"), self.csv().map_err(std::io::Error::other)?)?;
        fs::write(dir.join("summary.json"), self.summary_json())
    }
}

pub fn parse_params(s: &str) -> Result<BTreeMap<String, String>> {
    s.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse { line: 0, reason: format!("bad parameter `{kv}`") })
        })
        .collect()
}

fn param<T: std::str::FromStr>(p: &BTreeMap<String, String>, key: &str) -> Result<T> {
    p.get(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse { line: 0, reason: format!("missing or bad parameter `{key}`") })
}

pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse { line: 0, reason: format!("bad number `{x}`") }))
        .collect()
}

/// `offset:k`, `fixed:n` or `scaled:m,k`.
pub fn parse_bound(s: &str) -> Result<SearchBound> {
    let bad = || Error::Parse { line: 0, reason: format!("bad search bound `{s}`") };
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let nums = parse_list(rest).map_err(|_| bad())?;
    match (kind, nums.as_slice()) {
        ("offset", [k]) => Ok(SearchBound::Offset(*k)),
        ("fixed", [n]) => Ok(SearchBound::Fixed(*n)),
        ("scaled", [m, k]) => Ok(SearchBound::Scaled(*m, *k)),
        _ => Err(bad()),
    }
}

pub fn format_bound(b: SearchBound) -> String {
    match b {
        SearchBound::Offset(k) => format!("offset:{k}"),
        SearchBound::Fixed(n) => format!("fixed:{n}"),
        SearchBound::Scaled(m, k) => format!("scaled:{m},{k}"),
    }
}

pub fn ray_subject(g: &Group, ray: &RaySpec) -> String {
    let f = |w: &Word| if w.is_empty() { String::new() } else { g.graph().format_word(w) };
    format!("{};{}", f(&ray.prefix), f(&ray.period))
}

pub fn parse_ray(g: &Group, subject: &str, horizon: usize) -> Result<RaySpec> {
    let (prefix, period) = subject
        .split_once(';')
        .ok_or_else(|| Error::Parse { line: 0, reason: format!("bad ray `{subject}`") })?;
    RaySpec::parse(g, prefix, period, horizon)
}

pub fn growth_name(g: Growth) -> &'static str {
    match g {
        Growth::NoDetour => "NO_DETOUR",
        Growth::Linear => "LINEAR",
        Growth::Superlinear => "SUPERLINEAR",
    }
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn opt(v: Option<usize>) -> String {
    v.map_or("inf".to_string(), |v| v.to_string())
}

/// Recomputes the metrics of a task.
pub fn evaluate(task: &Task) -> Result<Vec<(String, String)>> {
    let g = catalog::group(&task.group)?;
    let p = parse_params(&task.params)?;
    let m = |k: &str, v: String| (k.to_string(), v);
    let out = match task.experiment.as_str() {
        "detect" => {
            let ray = parse_ray(&g, &task.subject, param(&p, "horizon")?)?;
            let dp = DetectorParams {
                k: param(&p, "k")?,
                r: param(&p, "r")?,
                radius: param(&p, "radius")?,
                horizon: param(&p, "horizon")?,
            };
            match detect_contracting(&g, &ray, &dp)? {
                Detection::Accept(w) => vec![
                    m("verdict", "accept".into()),
                    m("max_gap", w.max_gap.to_string()),
                    m("width", "0".into()),
                    m("radius_limited", w.radius_limited.to_string()),
                ],
                Detection::Reject(o) => vec![
                    m("verdict", "reject".into()),
                    m("window", format!("{}..{}", o.start, o.end)),
                    m("width", o.width().to_string()),
                    m("open", o.open.to_string()),
                ],
            }
        }
        "separation" => {
            let w = g.graph().parse_word(&task.subject)?;
            let path = gpwalls::cayley::GeodesicPath::from_identity(&g, &w)?;
            let walls = walls_of_path(&g, &path)?;
            let (i, j): (usize, usize) = (param(&p, "i")?, param(&p, "j")?);
            let get = |n: usize| {
                walls.get(n.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: n, len: walls.len() })
            };
            let v = separation(&g, get(i)?, get(j)?, param(&p, "radius")?, None)?;
            let rel = match v.relation {
                Relation::Equal => "EQUAL",
                Relation::Crossing => "CROSSING",
                Relation::Disjoint => "DISJOINT",
            };
            vec![
                m("relation", rel.into()),
                m("crossing_both_count", v.crossing_both_count.to_string()),
                m("radius_limited", v.radius_limited().to_string()),
            ]
        }
        "ldiv" | "profile" => {
            let ray = parse_ray(&g, &task.subject, param(&p, "horizon")?)?;
            let bound = parse_bound(p.get("bound").map(String::as_str).unwrap_or(""))?;
            let rs = parse_list(p.get("r").map(String::as_str).unwrap_or(""))?;
            let prof = divergence_profile(&g, &ray, &rs, None, bound, ClassifyConfig::default())?;
            if task.experiment == "ldiv" {
                let w = &prof.witnesses[0];
                vec![
                    m("ldiv", opt(prof.ldiv_values[0])),
                    m("t_min", w.t.to_string()),
                    m("r_max", w.r_max.to_string()),
                ]
            } else {
                vec![
                    m("slope", format!("{:.4}", prof.slope)),
                    m("classification", growth_name(prof.classification).into()),
                ]
            }
        }
        "contraction" => {
            let ray = parse_ray(&g, &task.subject, param(&p, "length")?)?;
            let path = ray.path(&g, param(&p, "length")?)?;
            let radii = parse_list(p.get("radii").map(String::as_str).unwrap_or(""))?;
            let budget = match p.get("budget").map(String::as_str) {
                Some("all") => usize::MAX,
                _ => param(&p, "budget")?,
            };
            let c = estimate_contraction(&g, &path, &radii, budget, param(&p, "seed")?)?;
            vec![m("d_hat", c.d_hat.to_string())]
        }
        "slimness" => {
            let ray = parse_ray(&g, &task.subject, param(&p, "length")?)?;
            let path = ray.path(&g, param(&p, "length")?)?;
            let s = estimate_slimness(&g, &path, param(&p, "sample_radius")?, param(&p, "budget")?, param(&p, "seed")?)?;
            vec![m("delta_i", s.delta_i.to_string()), m("delta_ii", s.delta_ii.to_string())]
        }
        "quadratic" => {
            let ray = parse_ray(&g, &task.subject, param(&p, "horizon")?)?;
            let bound = parse_bound(p.get("bound").map(String::as_str).unwrap_or(""))?;
            let r: usize = param(&p, "r")?;
            let prof = divergence_profile(&g, &ray, &[r], None, bound, ClassifyConfig::default())?;
            let (rows, _) =
                quadratic_bound_check(&prof.r_values, &prof.ldiv_values, param(&p, "d_hat")?, param(&p, "slack")?)?;
            vec![
                m("ldiv", opt(rows[0].ldiv)),
                m("bound", format!("{:.3}", rows[0].bound)),
                m("pass", rows[0].pass.to_string()),
            ]
        }
        "blocks" => {
            let h: usize = param(&p, "horizon")?;
            let ray = parse_ray(&g, &task.subject, h)?;
            let blocks = block_decomposition(&g, &ray.unroll(h))?;
            vec![m("block_time", block_time(&blocks).to_string())]
        }
        "projection" => {
            let h: usize = param(&p, "horizon")?;
            let (a, b) = task
                .subject
                .split_once('|')
                .ok_or_else(|| Error::Parse { line: 0, reason: "expected `alpha|beta`".into() })?;
            let (alpha, beta) = (parse_ray(&g, a, h)?, parse_ray(&g, b, h)?);
            vec![m("displacement", bounded_projection_check(&g, &alpha, &beta, h)?.to_string())]
        }
        "itinerary" => {
            let w = g.graph().parse_word(&task.subject)?;
            let am = Amalgam::gamma1(&g)?;
            let it = itinerary(&g, &w, am)?;
            let again = itinerary(&g, &g.normalize(&w), am)?;
            vec![m("vertices", it.len().to_string()), m("invariant", (it == again).to_string())]
        }
        other => return Err(Error::Precondition(format!("unknown experiment `{other}`"))),
    };
    Ok(out)
}

struct Builder {
    rows: Vec<Row>,
}

impl Builder {
    fn run(&mut self, task: Task) -> Result<BTreeMap<String, String>> {
        let metrics = evaluate(&task)?;
        for (metric, value) in &metrics {
            self.rows.push(Row { task: task.clone(), metric: metric.clone(), value: value.clone() });
        }
        Ok(metrics.into_iter().collect())
    }
}

fn claim(id: &str, description: &str, anchor: &str, pass: bool, data_ref: &str) -> Claim {
    Claim {
        id: id.into(),
        description: description.into(),
        anchor: anchor.into(),
        pass,
        data_ref: format!("results.csv#experiment={data_ref}"),
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteOutput> {
    let mut b = Builder { rows: Vec::new() };
    let claims = match name {
        "hexagon" => hexagon(&mut b, seed)?,
        "k33" => k33(&mut b, seed)?,
        "croke-kleiner" => croke_kleiner(&mut b, seed)?,
        "gamma1-vs-gamma2" => gamma_contrast(&mut b, seed)?,
        other => return Err(Error::Precondition(format!("unknown suite `{other}`"))),
    };
    Ok(SuiteOutput { name: name.into(), seed, rows: b.rows, claims })
}

fn sampled_rays(g: &Group, seed: u64, n: usize) -> Result<Vec<RaySpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_ray(g, &mut rng, 2, 4, 40)).collect()
}

fn random_geodesic(g: &Group, rng: &mut ChaCha8Rng, len: usize) -> Word {
    let letters = g.letters();
    let mut w: Vec<_> = Vec::new();
    while w.len() < len {
        w.push(letters[rng.gen_range(0..letters.len())]);
        if !g.is_geodesic(&Word::from(w.clone())).unwrap_or(false) {
            w.pop();
        }
    }
    Word::from(w)
}

fn hexagon(b: &mut Builder, seed: u64) -> Result<Vec<Claim>> {
    let g = catalog::group("hexagon")?;
    let mut all_accept = true;
    let mut accepted = Vec::new();
    for ray in sampled_rays(&g, seed, 8)? {
        let subject = ray_subject(&g, &ray);
        let r = b.run(Task::new("detect", "hexagon", subject.clone(), "k=1 r=6 radius=8 horizon=40"))?;
        if r["verdict"] == "accept" {
            accepted.push(subject);
        } else {
            all_accept = false;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e9);
    let mut sep_ok = true;
    let mut pairs = 0;
    while pairs < 20 {
        let len = rng.gen_range(2..=10);
        let w = random_geodesic(&g, &mut rng, len);
        let walls = walls_of_path(&g, &gpwalls::cayley::GeodesicPath::from_identity(&g, &w)?)?;
        let i = rng.gen_range(0..w.len() - 1);
        let j = rng.gen_range(i + 1..w.len());
        if crosses(&g, &walls[i], &walls[j]) {
            continue;
        }
        let params = format!("i={} j={} radius=8", i + 1, j + 1);
        let r = b.run(Task::new("separation", "hexagon", g.graph().format_word(&w), params))?;
        sep_ok &= r["crossing_both_count"].parse::<usize>().unwrap_or(usize::MAX) <= 1;
        pairs += 1;
    }

    let main_ray = ";h1 h3";
    let rs: Vec<usize> = (2..=8).collect();
    let mut ldiv = Vec::new();
    for &r in &rs {
        let m = b.run(Task::new("ldiv", "hexagon", main_ray, format!("r={r} bound=offset:1 horizon=40")))?;
        ldiv.push(m["ldiv"].clone());
    }
    let prof = b.run(Task::new("profile", "hexagon", main_ray, format!("r={} bound=offset:1 horizon=40", list(&rs))))?;

    let mut slim_ok = true;
    for subject in accepted.iter().map(String::as_str).chain([main_ray]) {
        let c = b.run(Task::new("contraction", "hexagon", subject, format!("length=16 radii=0,1,2,3 budget=30 seed={seed}")))?;
        let s = b.run(Task::new("slimness", "hexagon", subject, format!("length=16 sample_radius=3 budget=60 seed={seed}")))?;
        let num = |m: &BTreeMap<String, String>, k: &str| m[k].parse::<usize>().unwrap_or(usize::MAX);
        let (d, di, dii) = (num(&c, "d_hat"), num(&s, "delta_i"), num(&s, "delta_ii"));
        slim_ok &= d <= 6 * di + 2 && di <= 3 * dii + 2 && dii <= di + 2;
    }

    let d_hat = b.rows.iter().rev().find(|r| r.metric == "d_hat").map(|r| r.value.clone()).unwrap_or_default();
    let d_hat = d_hat.parse::<usize>().unwrap_or(1).max(1);
    let mut passes = 0;
    for &r in &rs {
        let q = b.run(Task::new(
            "quadratic",
            "hexagon",
            main_ray,
            format!("r={r} bound=offset:1 horizon=40 d_hat={d_hat} slack=2"),
        ))?;
        passes += (q["pass"] == "true") as usize;
    }

    Ok(vec![
        claim("hexagon-accept", "all sampled rays accepted at k=1, r=6", "contracting-criterion", all_accept, "detect"),
        claim("hexagon-separation", "disjoint wall pairs have at most one wall crossing both", "one-separated-walls", sep_ok, "separation"),
        claim("hexagon-divergence", "lower divergence of (h1 h3)^∞ is superlinear", "lower-divergence", prof["classification"] == "SUPERLINEAR", "profile"),
        claim("hexagon-quadratic", "quadratic lower bound holds with slack 2 for at least 90% of r", "quadratic-divergence", passes * 10 >= rs.len() * 9, "quadratic"),
        claim("hexagon-thin", "contraction bounded by 6·delta_i + 2 and thin-triangle constants agree", "thin-triangles", slim_ok, "slimness"),
    ])
}

fn k33(b: &mut Builder, seed: u64) -> Result<Vec<Claim>> {
    let g = catalog::group("k33")?;
    let mut all_reject = true;
    let rays = sampled_rays(&g, seed, 8)?;
    for ray in &rays {
        let r = b.run(Task::new("detect", "k33", ray_subject(&g, ray), "k=8 r=6 radius=8 horizon=40"))?;
        all_reject &= r["verdict"] == "reject";
    }

    let diag = ";x1 y1 x2 y2";
    let rs: Vec<usize> = (2..=10).collect();
    for &r in &rs {
        b.run(Task::new("ldiv", "k33", diag, format!("r={r} bound=offset:1 horizon=40")))?;
    }
    let prof = b.run(Task::new("profile", "k33", diag, format!("r={} bound=offset:1 horizon=40", list(&rs))))?;
    let slope: f64 = prof["slope"].parse().unwrap_or(f64::NAN);
    let mut not_superlinear = prof["classification"] != "SUPERLINEAR";
    for ray in rays.iter().take(4) {
        let p = b.run(Task::new("profile", "k33", ray_subject(&g, ray), "r=3,4,5,6,7,8,9,10 bound=offset:1 horizon=40"))?;
        not_superlinear &= p["classification"] != "SUPERLINEAR";
    }

    let mut d = Vec::new();
    for rho in 1..=4 {
        let c = b.run(Task::new("contraction", "k33", diag, format!("length=24 radii={rho} budget=all seed={seed}")))?;
        d.push(c["d_hat"].parse::<usize>().unwrap_or(0));
    }

    let mut fails = true;
    for r in [17, 18, 20] {
        let q = b.run(Task::new("quadratic", "k33", diag, format!("r={r} bound=offset:1 horizon=50 d_hat=1 slack=2")))?;
        fails &= q["pass"] == "false";
    }

    Ok(vec![
        claim("k33-reject", "all sampled rays rejected at k=8", "direct-product-no-contracting-rays", all_reject, "detect"),
        claim("k33-linear", "diagonal ray has linear lower divergence (slope in [0.8, 1.2])", "lower-divergence", prof["classification"] == "LINEAR" && (0.8..=1.2).contains(&slope), "profile"),
        claim("k33-not-superlinear", "no sampled profile is superlinear", "lower-divergence", not_superlinear, "profile"),
        claim("k33-projection-growth", "projections of balls onto the diagonal grow with the radius", "contraction", d.windows(2).all(|p| p[0] < p[1]), "contraction"),
        claim("k33-quadratic-fails", "quadratic bound with D=1 fails at r = 17, 18, 20", "quadratic-divergence", fails, "quadratic"),
    ])
}

/// Periods of length at most `max_len` whose rays spend at most 3 letters in each block.
pub fn short_block_periods(g: &Group, max_len: usize) -> Result<Vec<RaySpec>> {
    let letters = g.letters();
    let mut out = Vec::new();
    let mut words: Vec<Vec<_>> = vec![Vec::new()];
    for _ in 0..max_len {
        words = words
            .iter()
            .flat_map(|w| letters.iter().map(move |&l| [w.as_slice(), &[l]].concat()))
            .collect();
        for w in &words {
            let Ok(ray) = RaySpec::new(g, Word::new(), Word::from(w.clone()), 40) else { continue };
            if block_time(&block_decomposition(g, &ray.unroll(40))?) <= 3 {
                out.push(ray);
            }
        }
    }
    Ok(out)
}

/// Rays `a d X (d a)^∞` where `X` repeats a pattern from the first block.
pub fn long_block_rays(g: &Group) -> Result<Vec<(usize, RaySpec)>> {
    let mut out = Vec::new();
    for l in [8, 10, 12] {
        for pattern in [&["a"][..], &["a", "b"], &["a", "c"], &["a", "c", "b"]] {
            let block: Vec<&str> = (0..l).map(|i| pattern[i % pattern.len()]).collect();
            out.push((l, RaySpec::parse(g, &format!("a d {}", block.join(" ")), "d a", 40)?));
        }
    }
    Ok(out)
}

fn croke_kleiner(b: &mut Builder, seed: u64) -> Result<Vec<Claim>> {
    let g = catalog::group("croke-kleiner")?;
    let ck = "croke-kleiner";
    let ad = b.run(Task::new("detect", ck, ";a d", "k=0 r=2 radius=6 horizon=40"))?;
    let mut b_rejected = true;
    for k in 0..=8 {
        let r = b.run(Task::new("detect", ck, ";b", format!("k={k} r=6 radius=8 horizon=40")))?;
        b_rejected &= r["verdict"] == "reject";
    }

    let mut short_ok = true;
    for ray in short_block_periods(&g, 3)? {
        let r = b.run(Task::new("detect", ck, ray_subject(&g, &ray), "k=0 r=4 radius=6 horizon=40"))?;
        short_ok &= r["verdict"] == "accept";
    }

    let mut long_ok = true;
    for (l, ray) in long_block_rays(&g)? {
        let subject = ray_subject(&g, &ray);
        let bt = b.run(Task::new("blocks", ck, subject.clone(), "horizon=40"))?;
        let r = b.run(Task::new("detect", ck, subject, "k=0 r=4 radius=6 horizon=40"))?;
        let width: usize = r["width"].parse().unwrap_or(0);
        long_ok &= r["verdict"] == "reject" && bt["block_time"] == l.to_string() && width + 2 >= l;
    }

    // random rays: short blocks must be accepted
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut consistent = true;
    for _ in 0..6 {
        let ray = sample_ray(&g, &mut rng, 0, 4, 40)?;
        let subject = ray_subject(&g, &ray);
        let bt = b.run(Task::new("blocks", ck, subject.clone(), "horizon=40"))?;
        let r = b.run(Task::new("detect", ck, subject, "k=0 r=4 radius=6 horizon=40"))?;
        if bt["block_time"].parse::<usize>().unwrap_or(usize::MAX) <= 3 {
            consistent &= r["verdict"] == "accept";
        }
    }

    let mut disp = Vec::new();
    for h in [10, 20, 30] {
        let r = b.run(Task::new("projection", ck, ";a d|;b", format!("horizon={h}")))?;
        disp.push(r["displacement"].clone());
    }

    Ok(vec![
        claim("ck-a-d", "(a d)^∞ accepted at k=0, r=2", "strongly-separated-walls", ad["verdict"] == "accept", "detect"),
        claim("ck-b", "b^∞ rejected for every k ≤ 8 at radius 8", "product-blocks", b_rejected, "detect"),
        claim("ck-short-blocks", "periodic rays with blocks of length ≤ 3 accepted at k=0, r=4", "bounded-block-time", short_ok, "detect"),
        claim("ck-long-blocks", "a block of length L leaves an obstruction window of width ≥ L-2", "bounded-block-time", long_ok, "blocks"),
        claim("ck-random", "sampled rays with short blocks are accepted", "bounded-block-time", consistent, "detect"),
        claim("ck-projection", "projection of b^∞ onto (a d)^∞ stays bounded", "visibility", disp.windows(2).all(|p| p[0] == p[1]), "projection"),
    ])
}

/// `c1 c3 c1 c3 (c4 c6)^{L/2} (c1 c3)^∞` in gamma1.
pub fn c_block_ray(g: &Group, l: usize) -> Result<RaySpec> {
    let block: Vec<&str> = (0..l).map(|i| if i % 2 == 0 { "c4" } else { "c6" }).collect();
    RaySpec::parse(g, &format!("c1 c3 c1 c3 {}", block.join(" ")), "c1 c3", 40)
}

pub fn a_hexagon_rays(g: &Group, seed: u64, n: usize) -> Result<Vec<RaySpec>> {
    let mask = g.mask_of(&["a1", "a2", "a3", "a4", "a5", "a6"])?;
    let letters: Vec<_> = g.letters().into_iter().filter(|l| mask >> l.gen() & 1 == 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_ray_in(g, &letters, &mut rng, 2, 4, 40)).collect()
}

fn gamma_contrast(b: &mut Builder, seed: u64) -> Result<Vec<Claim>> {
    let g2 = catalog::group("gamma2")?;
    let mut uniform = true;
    for ray in a_hexagon_rays(&g2, seed, 8)? {
        let r = b.run(Task::new("detect", "gamma2", ray_subject(&g2, &ray), "k=1 r=4 radius=6 horizon=40"))?;
        uniform &= r["verdict"] == "accept";
    }

    let g1 = catalog::group("gamma1")?;
    let mut widths = Vec::new();
    for l in [4, 6, 8, 10] {
        let ray = c_block_ray(&g1, l)?;
        let r = b.run(Task::new("detect", "gamma1", ray_subject(&g1, &ray), "k=1 r=4 radius=6 horizon=40"))?;
        widths.push(r["width"].parse::<usize>().unwrap_or(0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut invariant = true;
    for _ in 0..20 {
        let w = random_geodesic(&g1, &mut rng, 12);
        let r = b.run(Task::new("itinerary", "gamma1", g1.graph().format_word(&w), ""))?;
        invariant &= r["invariant"] == "true";
    }

    Ok(vec![
        claim("gamma2-uniform", "sampled a-hexagon rays in gamma2 all accepted at k=1, r=4", "gamma2-one-separated", uniform, "detect"),
        claim("gamma1-growth", "obstruction width grows with the C-block length in gamma1", "gamma1-singleton-components", widths.windows(2).all(|p| p[0] < p[1]), "detect"),
        claim("gamma1-itinerary", "itineraries do not depend on the spelling of the element", "itinerary", invariant, "itinerary"),
    ])
}
