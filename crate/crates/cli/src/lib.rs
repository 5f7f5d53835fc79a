//! Command-line front end for gpwalls.

pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gpwalls::cayley::GeodesicPath;
use gpwalls::divergence::{default_t_samples, ldiv_at, Ldiv};
use gpwalls::rays::{
    detect_contracting, estimate_contraction, estimate_slimness, itinerary, Amalgam, Detection, DetectorParams,
    RaySpec, Side,
};
use gpwalls::walls::{separation, walls_of_path, Relation, Wall};
use gpwalls::{catalog, parse_presentation, Error, Group};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gpwalls", version, about = "Walls, geodesics and contracting rays in graph products")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write results into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// hexagon, k33, gamma1, gamma2, croke-kleiner or tree3
    #[arg(long, conflicts_with = "graph")]
    pub builtin: Option<String>,
    /// Presentation graph in `.ggp` form.
    #[arg(short = 'g', long = "graph")]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RayArg {
    #[arg(long, default_value = "")]
    pub prefix: String,
    #[arg(long)]
    pub period: String,
    #[arg(long, default_value_t = 40)]
    pub horizon: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of a word.
    Nf {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short, long)]
        word: String,
    },
    /// Distance between two elements.
    Dist {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// Walls crossed by a geodesic word from the identity.
    Walls {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short, long)]
        word: String,
    },
    /// Separation between two walls of a geodesic word (1-based positions,
    /// first and last by default).
    Sep {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short, long)]
        word: String,
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(short = 'j')]
        j: Option<usize>,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Look for a chain of k-separated walls along a periodic ray.
    Detect {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ray: RayArg,
        #[arg(short = 'k', default_value_t = 1)]
        k: usize,
        #[arg(short = 'r', default_value_t = 6)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Lower divergence samples as CSV.
    Ldiv {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ray: RayArg,
        /// Comma-separated radii.
        #[arg(short = 'r')]
        r: String,
        /// Comma-separated centers; spread over the ray by default.
        #[arg(short = 't')]
        t: Option<String>,
        /// offset:k, fixed:n or scaled:m,k
        #[arg(long, default_value = "offset:1")]
        bound: String,
    },
    /// Thin-triangle constants along a ray segment.
    Slim {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ray: RayArg,
        #[arg(long, default_value_t = 16)]
        length: usize,
        #[arg(long, default_value_t = 3)]
        sample_radius: usize,
        #[arg(long, default_value_t = 60)]
        budget: usize,
    },
    /// Largest projection diameter of sampled balls onto a ray segment.
    Contract {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ray: RayArg,
        #[arg(long, default_value_t = 16)]
        length: usize,
        #[arg(long, default_value = "1,2,3")]
        radii: String,
        #[arg(long, default_value_t = 30)]
        budget: usize,
    },
    /// Path of a gamma1 word through the splitting tree.
    Itinerary {
        #[arg(short, long)]
        word: String,
    },
    /// Run an experiment suite and write results.csv and summary.json.
    Suite {
        /// hexagon, k33, croke-kleiner or gamma1-vs-gamma2
        name: String,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidLetter(_) => 2,
        Error::ResourceLimit { .. } => 4,
        _ => 3,
    }
}

fn load_group(g: &GraphArg) -> gpwalls::Result<Group> {
    match (&g.builtin, &g.graph) {
        (Some(name), _) => catalog::group(name),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            Ok(Group::new(parse_presentation(&text)?))
        }
        (None, None) => Err(Error::Precondition("give --builtin or -g".into())),
    }
}

fn load_ray(g: &Group, ray: &RayArg) -> gpwalls::Result<RaySpec> {
    RaySpec::parse(g, &ray.prefix, &ray.period, ray.horizon)
}

fn wall_json(g: &Group, w: &Wall) -> Value {
    json!({"type": g.graph().name(w.ty), "key": g.graph().format_word(&w.key)})
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Equal => "EQUAL",
        Relation::Crossing => "CROSSING",
        Relation::Disjoint => "DISJOINT",
    }
}

/// Text and JSON renderings of one command's result.
struct Output {
    text: String,
    json: Value,
    /// File written under `--out`; JSON unless the command emits CSV.
    file: (String, Option<String>),
}

impl Output {
    fn new(cmd: &str, text: String, json: Value) -> Self {
        Output { text, json, file: (format!("{cmd}.json"), None) }
    }
}

fn execute(cli: &Cli) -> gpwalls::Result<Output> {
    Ok(match &cli.command {
        Command::Nf { g, word } => {
            let g = load_group(g)?;
            let nf = g.parse_element(word)?;
            let s = g.format(&nf);
            Output::new("nf", s.clone(), json!({"normal_form": s, "length": nf.len()}))
        }
        Command::Dist { g, a, b } => {
            let g = load_group(g)?;
            let d = g.distance(&g.parse_element(a)?, &g.parse_element(b)?)?;
            Output::new("dist", d.to_string(), json!({"distance": d}))
        }
        Command::Walls { g, word } => {
            let g = load_group(g)?;
            let path = GeodesicPath::from_identity(&g, &g.graph().parse_word(word)?)?;
            let walls = walls_of_path(&g, &path)?;
            let text = walls.iter().map(|w| w.format(&g)).collect::<Vec<_>>().join("\n");
            Output::new("walls", text, Value::Array(walls.iter().map(|w| wall_json(&g, w)).collect()))
        }
        Command::Sep { g, word, i, j, radius } => {
            let g = load_group(g)?;
            let path = GeodesicPath::from_identity(&g, &g.graph().parse_word(word)?)?;
            let walls = walls_of_path(&g, &path)?;
            let n = walls.len();
            let pick = |p: usize| {
                p.checked_sub(1).and_then(|q| walls.get(q)).ok_or(Error::IndexOutOfRange { index: p, len: n })
            };
            let (w1, w2) = (pick(i.unwrap_or(1))?, pick(j.unwrap_or(n))?);
            let v = separation(&g, w1, w2, *radius, None)?;
            let rel = relation_name(v.relation);
            let text = format!("{rel} {}", v.crossing_both_count);
            let js = json!({
                "relation": rel,
                "crossing_both_count": v.crossing_both_count,
                "search_radius": v.search_radius,
                "radius_limited": v.radius_limited(),
                "walls": [wall_json(&g, w1), wall_json(&g, w2)],
                "witnesses": v.witnesses.iter().map(|w| wall_json(&g, w)).collect::<Vec<_>>(),
            });
            Output::new("sep", text, js)
        }
        Command::Detect { g, ray, k, r, radius } => {
            let g = load_group(g)?;
            let spec = load_ray(&g, ray)?;
            let p = DetectorParams { k: *k, r: *r, radius: *radius, horizon: ray.horizon };
            let (text, js) = match detect_contracting(&g, &spec, &p)? {
                Detection::Accept(w) => {
                    let pairs: Vec<Value> = w
                        .indices
                        .windows(2)
                        .zip(&w.pair_verdicts)
                        .map(|(ij, v)| json!({"i": ij[0], "j": ij[1], "crossing_both_count": v.crossing_both_count}))
                        .collect();
                    let chain = w.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                    (
                        format!("ACCEPT chain {chain} (max gap {})", w.max_gap),
                        json!({
                            "verdict": "accept",
                            "ray": spec.format(&g),
                            "indices": w.indices,
                            "pairs": pairs,
                            "max_gap": w.max_gap,
                            "radius_limited": w.radius_limited,
                        }),
                    )
                }
                Detection::Reject(o) => (
                    format!("REJECT window {}..{}{}", o.start, o.end, if o.open { " (open)" } else { "" }),
                    json!({
                        "verdict": "reject",
                        "ray": spec.format(&g),
                        "start": o.start,
                        "end": o.end,
                        "width": o.width(),
                        "open": o.open,
                    }),
                ),
            };
            Output::new("detect", text, js)
        }
        Command::Ldiv { g, ray, r, t, bound } => {
            let g = load_group(g)?;
            let spec = load_ray(&g, ray)?;
            let bound = suites::parse_bound(bound)?;
            let ts = t.as_deref().map(suites::parse_list).transpose()?;
            let ray_id = suites::ray_subject(&g, &spec);
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
            w.write_record(["ray_id", "r", "t_min", "ldiv", "infinite_flag", "witness_length"]).map_err(csv_err)?;
            let mut rows = Vec::new();
            for r in suites::parse_list(r)? {
                let candidates = match &ts {
                    Some(ts) => ts.clone(),
                    None => default_t_samples(&spec, r),
                };
                let mut best: Option<gpwalls::divergence::LdivSample> = None;
                for t in candidates {
                    let s = ldiv_at(&g, &spec, r, t, bound.at(r))?;
                    let better = match (&best, s.result.value()) {
                        (None, _) => true,
                        (Some(b), Some(v)) => b.result.value().map_or(true, |bv| v < bv),
                        _ => false,
                    };
                    if better {
                        best = Some(s);
                    }
                }
                let s = best.ok_or_else(|| Error::Precondition(format!("no valid center for r = {r}")))?;
                let (ldiv, inf, wl) = match &s.result {
                    Ldiv::Finite { length, witness } => (length.to_string(), false, witness.len().to_string()),
                    Ldiv::Infinite { .. } => ("inf".to_string(), true, String::new()),
                };
                w.write_record([ray_id.clone(), r.to_string(), s.t.to_string(), ldiv.clone(), inf.to_string(), wl])
                    .map_err(csv_err)?;
                rows.push(json!({"ray_id": ray_id, "r": r, "t_min": s.t, "ldiv": s.result.value(), "infinite_flag": inf}));
            }
            let bytes = w.into_inner().map_err(|e| Error::Precondition(format!("csv: {e}")))?;
            let text = String::from_utf8(bytes).expect("utf-8");
            let mut out = Output::new("ldiv", text.trim_end().to_string(), Value::Array(rows));
            out.file = ("ldiv.csv".into(), Some(text));
            out
        }
        Command::Slim { g, ray, length, sample_radius, budget } => {
            let g = load_group(g)?;
            let path = load_ray(&g, ray)?.path(&g, *length)?;
            let s = estimate_slimness(&g, &path, *sample_radius, *budget, cli.seed)?;
            Output::new(
                "slim",
                format!("delta_i {} delta_ii {}", s.delta_i, s.delta_ii),
                json!({"delta_i": s.delta_i, "delta_ii": s.delta_ii, "samples": s.samples.len()}),
            )
        }
        Command::Contract { g, ray, length, radii, budget } => {
            let g = load_group(g)?;
            let path = load_ray(&g, ray)?.path(&g, *length)?;
            let c = estimate_contraction(&g, &path, &suites::parse_list(radii)?, *budget, cli.seed)?;
            Output::new(
                "contract",
                format!("d_hat {}", c.d_hat),
                json!({"d_hat": c.d_hat, "samples": c.samples.len()}),
            )
        }
        Command::Itinerary { word } => {
            let g = catalog::group("gamma1")?;
            let it = itinerary(&g, &g.graph().parse_word(word)?, Amalgam::gamma1(&g)?)?;
            let side = |s: Side| match s {
                Side::Gamma => "G",
                Side::Omega => "O",
            };
            let text = it
                .vertices
                .iter()
                .map(|v| format!("{}:{}", side(v.side), g.graph().format_word(&v.key)))
                .collect::<Vec<_>>()
                .join("\n");
            let js: Vec<Value> = it
                .vertices
                .iter()
                .map(|v| json!({"side": side(v.side), "key": g.graph().format_word(&v.key)}))
                .collect();
            Output::new("itinerary", text, Value::Array(js))
        }
        Command::Suite { .. } => unreachable!("handled by run"),
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };

    if let Command::Suite { name } = &cli.command {
        let out = match suites::run_suite(name, cli.seed) {
            Ok(o) => o,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return exit_code(&e);
            }
        };
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from(name));
        if let Err(e) = out.write(&dir) {
            let _ = writeln!(stderr, "error: {}: {e}", dir.display());
            return 3;
        }
        if cli.json {
            let _ = write!(stdout, "{}", out.summary_json());
        } else {
            for c in &out.claims {
                let _ = writeln!(stdout, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.description);
            }
            let _ = writeln!(stdout, "wrote {}", dir.display());
        }
        return 0;
    }

    match execute(&cli) {
        Ok(out) => {
            let json_text = serde_json::to_string_pretty(&out.json).expect("json") + "\n";
            let _ = if cli.json { write!(stdout, "{json_text}") } else { writeln!(stdout, "{}", out.text) };
            if let Some(dir) = &cli.out {
                let (name, body) = out.file;
                if let Err(e) = write_file(dir, &name, body.as_deref().unwrap_or(&json_text)) {
                    let _ = writeln!(stderr, "error: {}: {e}", dir.display());
                    return 3;
                }
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
