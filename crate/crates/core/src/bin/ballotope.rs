use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use ballotope::geom::{ShiftIndex, VolumeEstimate};
use ballotope::linalg::{self, DEFAULT_BFS_CAP, DEFAULT_UNIMODULAR_CAP};
use ballotope::plot::{render_svg, PlotPath};
use ballotope::rational::{format_rational, parse_rational_list};
use ballotope::seq::{self, DEFAULT_BRUTE_CAP};
use ballotope::verify::{self, Context, Fixtures, Level};
use ballotope::vertex::{self, DEFAULT_VERTEX_CAP};
use ballotope::*;

const SCHEMA_VERSION: &str = "1.0";

#[derive(Parser)]
#[command(name = "ballotope", version, about = "Bidirectional ballot sequences and the ballot polytope")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for parallel operations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Report wall-clock time in `timing_ms` (otherwise 0, keeping output reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Dp,
    Brute,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Count bidirectional ballot sequences of length N.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        cap: usize,
    },
    /// List every bidirectional ballot sequence of length N.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        cap: usize,
    },
    /// Test whether a 0/1 word is a bidirectional ballot sequence.
    Check {
        #[arg(long)]
        bits: String,
    },
    /// Sumset and difference set of the positions of the ones.
    Sumset {
        #[arg(long)]
        bits: String,
    },
    /// n·B_n/2^n for one n or a range.
    Ratio {
        #[arg(long, conflicts_with_all = ["from", "to"])]
        n: Option<usize>,
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
    /// Ballot cone and polytope membership of a gap vector.
    Member {
        #[arg(long)]
        vector: String,
    },
    /// Interval family described by a non-negative gap vector.
    Intervals {
        #[arg(long)]
        vector: String,
    },
    /// Gap vector of an interval family given by its endpoints a1,b1,a2,b2,...
    Gaps {
        #[arg(long)]
        endpoints: String,
    },
    /// Test the two-sided measure condition on an interval family.
    Gerrymander {
        #[arg(long)]
        endpoints: String,
    },
    /// Left-rotate a gap vector by k places.
    Rotate {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        k: usize,
    },
    /// Rotations of a necklace that land in the ballot cone.
    Cut {
        #[arg(long)]
        necklace: String,
    },
    /// Rotation regions of the cube partition containing a point of [0,1]^m.
    Classify {
        #[arg(long)]
        vector: String,
    },
    /// Monte Carlo estimate of the polytope volume.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, env = "BALLOTOPE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Vertices of the ballot polytope.
    Vertices {
        #[arg(long)]
        n: usize,
        /// Only vertices interior to the cone.
        #[arg(long)]
        interior: bool,
        /// Attach the ballot sequence of each vertex.
        #[arg(long)]
        bbs: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Check the lower and upper bounds on B_l for odd l.
    Bounds {
        #[arg(long, default_value_t = 5)]
        min_l: usize,
        #[arg(long)]
        max_l: usize,
    },
    /// Slope vector and path values of a gap vector.
    Slope {
        #[arg(long)]
        vector: String,
    },
    /// Pad a gap vector to [1,0,v,0,1].
    Pad {
        #[arg(long)]
        vector: String,
    },
    /// Ballot sequence of a polytope vertex.
    ToBbs {
        #[arg(long)]
        vertex: String,
        /// Use the interior-vertex map (length 2n-1).
        #[arg(long)]
        interior: bool,
    },
    /// Polytope vertex of a ballot sequence.
    FromBbs {
        #[arg(long)]
        bits: String,
        /// Use the interior-vertex map (length 2n-1).
        #[arg(long)]
        interior: bool,
    },
    /// Constraint rows and right-hand sides describing the polytope.
    Constraints {
        #[arg(long)]
        n: usize,
    },
    /// Flat elimination trace of a square integer matrix.
    Eliminate {
        /// Rows separated by ';', entries by ','.
        #[arg(long, required_unless_present = "example", conflicts_with = "example")]
        matrix: Option<String>,
        /// Use the built-in 5×5 worked example.
        #[arg(long)]
        example: bool,
    },
    /// Flat elimination over every square row subset of the constraint matrix.
    Unimodular {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_UNIMODULAR_CAP)]
        cap: usize,
    },
    /// Basic feasible solutions, compared with the enumerated vertices.
    Bfs {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BFS_CAP)]
        cap: usize,
    },
    /// Run every invariant suite.
    Verify(VerifyArgs),
    /// Draw a height path or slope path as SVG.
    Plot {
        #[arg(long, required_unless_present = "vector", conflicts_with = "vector")]
        bbs: Option<String>,
        #[arg(long)]
        vector: Option<String>,
        /// Dashed guides at x=2 and x=len-2.
        #[arg(long)]
        guides: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    level: Level,
    #[arg(long, env = "BALLOTOPE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    corrupt_fixture: Option<String>,
}

/// A usage or input error; exits with status 2.
enum Failure {
    Usage(String),
}

impl From<BallotError> for Failure {
    fn from(e: BallotError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<Output, Failure>;

struct Output {
    params: Value,
    result: Value,
    table: Table,
    /// The command's own check failed; the envelope is still printed.
    failed: bool,
}

#[derive(Default)]
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    fn row(mut self, cells: Vec<String>) -> Self {
        self.rows.push(cells);
        self
    }

    fn push(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn output(params: Value, result: Value, table: Table) -> Outcome {
    Ok(Output { params, result, table, failed: false })
}

fn vector(s: &str) -> Result<GapVector> {
    GapVector::new(parse_rational_list(s)?)
}

fn bool_cell(b: bool) -> String {
    b.to_string()
}

fn list_cell<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_matrix(s: &str) -> std::result::Result<Vec<Vec<i64>>, Failure> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| Failure::Usage(format!("bad matrix entry {x:?}: {e}"))))
                .collect()
        })
        .collect::<std::result::Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Failure::Usage(format!("matrix must be square, got {} rows", rows.len())));
    }
    Ok(rows)
}

fn membership_value(v: &GapVector, r: &MembershipReport) -> Value {
    json!({
        "vector": v,
        "in_cone": r.in_cone,
        "in_polytope": r.in_polytope,
        "in_cone_interior": r.in_cone_interior,
        "min_ballot_dot": r.min_ballot_dot.as_ref().map(format_rational),
        "violated": r.violated.iter().map(|b| &b.entries).collect::<Vec<_>>(),
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Count { n, method, cap } => {
            if n == 0 {
                return Err(Failure::Usage("n must be >= 1".into()));
            }
            let params = json!({ "n": n, "method": method, "cap": cap });
            let dp = matches!(method, Method::Dp | Method::Both).then(|| seq::count_bbs(n));
            let brute = match method {
                Method::Brute | Method::Both => Some(seq::count_bbs_brute_capped(n, cap)?),
                Method::Dp => None,
            };
            let count = dp.clone().or_else(|| brute.clone()).expect("one method ran");
            let agree = match (&dp, &brute) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            let mut result = json!({ "n": n, "count": count.to_string() });
            if let Some(agree) = agree {
                result["dp"] = json!(dp.as_ref().map(ToString::to_string));
                result["brute"] = json!(brute.as_ref().map(ToString::to_string));
                result["agree"] = json!(agree);
            }
            let table = Table::new(&["n", "count"]).row(vec![n.to_string(), count.to_string()]);
            Ok(Output { params, result, table, failed: agree == Some(false) })
        }
        Command::Enumerate { n, cap } => {
            let all = seq::enumerate_bbs_capped(n, cap)?;
            let mut table = Table::new(&["index", "bits"]);
            for (i, b) in all.iter().enumerate() {
                table.push(vec![i.to_string(), b.to_string()]);
            }
            output(json!({ "n": n, "cap": cap }), json!({ "n": n, "count": all.len(), "sequences": all }), table)
        }
        Command::Check { bits } => {
            let b: BitSequence = bits.parse()?;
            let path = bbs_to_path(&b);
            let ok = is_bbs(&b);
            let table = Table::new(&["bits", "is_bbs"]).row(vec![b.to_string(), bool_cell(ok)]);
            output(
                json!({ "bits": bits }),
                json!({ "bits": b, "is_bbs": ok, "heights": path, "culminating": path.is_culminating() }),
                table,
            )
        }
        Command::Sumset { bits } => {
            let b: BitSequence = bits.parse()?;
            let r = sumset_fullness(&b);
            let table = Table::new(&["bits", "sumset_full", "diffset_full"]).row(vec![
                b.to_string(),
                bool_cell(r.sumset_full),
                bool_cell(r.diffset_full),
            ]);
            output(json!({ "bits": bits }), to_value(&r), table)
        }
        Command::Ratio { n, from, to } => {
            let (lo, hi) = match (n, from, to) {
                (Some(n), _, _) => (n, n),
                (None, Some(a), Some(b)) => (a, b),
                _ => return Err(Failure::Usage("give --n or both --from and --to".into())),
            };
            if lo == 0 || lo > hi {
                return Err(Failure::Usage(format!("bad range {lo}..={hi}")));
            }
            let counts = seq::count_bbs_table(hi);
            let mut table = Table::new(&["n", "count", "ratio", "ratio_approx"]);
            let rows: Vec<Value> = (lo..=hi)
                .map(|k| {
                    let r = seq::ratio_from_count(k, &counts[k - 1]);
                    let approx = rational::to_f64(&r);
                    table.push(vec![k.to_string(), counts[k - 1].to_string(), format_rational(&r), format!("{approx:.6}")]);
                    json!({ "n": k, "count": counts[k - 1].to_string(), "ratio": format_rational(&r), "ratio_approx": approx })
                })
                .collect();
            output(json!({ "from": lo, "to": hi }), json!({ "rows": rows }), table)
        }
        Command::Member { vector: s } => {
            let v = vector(&s)?;
            let r = membership(&v);
            let table = Table::new(&["vector", "in_cone", "in_polytope", "in_cone_interior"]).row(vec![
                v.to_string(),
                bool_cell(r.in_cone),
                bool_cell(r.in_polytope),
                bool_cell(r.in_cone_interior),
            ]);
            output(json!({ "vector": s }), membership_value(&v, &r), table)
        }
        Command::Intervals { vector: s } => {
            let v = vector(&s)?;
            let fam = intervals_from_gaps(&v)?;
            let mut table = Table::new(&["left", "right"]);
            for (a, b) in fam.intervals() {
                table.push(vec![format_rational(a), format_rational(b)]);
            }
            output(json!({ "vector": s }), to_value(&fam), table)
        }
        Command::Gaps { endpoints } => {
            let fam = IntervalFamily::new(parse_rational_list(&endpoints)?)?;
            let v = gaps_from_intervals(&fam);
            let table = Table::new(&["vector"]).row(vec![v.to_string()]);
            output(json!({ "endpoints": endpoints }), json!({ "vector": v }), table)
        }
        Command::Gerrymander { endpoints } => {
            let fam = IntervalFamily::new(parse_rational_list(&endpoints)?)?;
            let v = gaps_from_intervals(&fam);
            let g = is_gerrymander_measure(&fam);
            let in_cone = membership(&v).in_cone;
            let table = Table::new(&["vector", "is_gerrymander", "in_cone"]).row(vec![
                v.to_string(),
                bool_cell(g),
                bool_cell(in_cone),
            ]);
            output(
                json!({ "endpoints": endpoints }),
                json!({ "vector": v, "is_gerrymander": g, "in_cone": in_cone }),
                table,
            )
        }
        Command::Rotate { vector: s, k } => {
            let v = vector(&s)?;
            let r = rotate(&v, ShiftIndex::new(k, v.dim())?);
            let table = Table::new(&["k", "rotation"]).row(vec![k.to_string(), r.to_string()]);
            output(json!({ "vector": s, "k": k }), json!({ "k": k, "rotation": r }), table)
        }
        Command::Cut { necklace } => {
            let v = vector(&necklace)?;
            let c = cut_necklace(&v)?;
            let table = Table::new(&["canonical", "canonical_rotation", "unique", "generic", "cuts"]).row(vec![
                c.canonical.get().to_string(),
                c.canonical_rotation.to_string(),
                bool_cell(c.unique),
                bool_cell(c.generic),
                list_cell(c.cuts.iter().map(|k| k.get())),
            ]);
            output(json!({ "necklace": necklace }), to_value(&c), table)
        }
        Command::Classify { vector: s } => {
            let v = vector(&s)?;
            let r = classify_partition(&v)?;
            let table = Table::new(&["regions", "interior_regions", "generic"]).row(vec![
                list_cell(r.regions.iter().map(|k| k.get())),
                list_cell(r.interior_regions.iter().map(|k| k.get())),
                bool_cell(r.generic),
            ]);
            output(json!({ "vector": s }), to_value(&r), table)
        }
        Command::Volume { n, samples, seed } => {
            let est: VolumeEstimate = mc_volume(n, samples, seed)?;
            let target = format!("1/{}", 2 * n - 1);
            let table = Table::new(&["n", "samples", "hits", "estimate", "stderr"]).row(vec![
                n.to_string(),
                samples.to_string(),
                est.hits.to_string(),
                est.estimate.to_string(),
                est.stderr.to_string(),
            ]);
            let mut result = to_value(&est);
            result["exact"] = json!(target);
            output(json!({ "n": n, "samples": samples, "seed": seed }), result, table)
        }
        Command::Vertices { n, interior, bbs, cap } => {
            if interior && n < 2 {
                return Err(Failure::Usage("the interior-vertex map needs n >= 2".into()));
            }
            let set = vertex::enumerate_vertices_capped(n, cap)?;
            let mut table = Table::new(&["vertex", "interior", "bbs"]);
            let mut rows = Vec::new();
            for (v, &inner) in set.vertices.iter().zip(&set.interior_flags) {
                if interior && !inner {
                    continue;
                }
                let word = if !bbs {
                    None
                } else if interior {
                    Some(interior_vertex_to_bbs(v)?)
                } else {
                    Some(vertex_to_bbs(v)?)
                };
                table.push(vec![
                    v.to_string(),
                    bool_cell(inner),
                    word.as_ref().map(ToString::to_string).unwrap_or_default(),
                ]);
                let mut row = json!({ "vertex": v, "interior": inner });
                if let Some(word) = word {
                    row["bbs"] = json!(word);
                }
                rows.push(row);
            }
            output(
                json!({ "n": n, "interior": interior, "bbs": bbs, "cap": cap }),
                json!({ "n": n, "count": rows.len(), "interior_count": set.interior_count(), "vertices": rows }),
                table,
            )
        }
        Command::Bounds { min_l, max_l } => {
            let rows = verify_bounds(min_l, max_l)?;
            let passed = rows.iter().all(|r| r.passed());
            let mut table = Table::new(&["l", "count", "lower", "upper", "lower_ok", "upper_ok"]);
            for r in &rows {
                table.push(vec![
                    r.l.to_string(),
                    r.count.to_string(),
                    r.lower.as_ref().map(format_rational).unwrap_or_default(),
                    format_rational(&r.upper),
                    bool_cell(r.lower_ok),
                    bool_cell(r.upper_ok),
                ]);
            }
            Ok(Output {
                params: json!({ "min_l": min_l, "max_l": max_l }),
                result: json!({ "passed": passed, "rows": rows }),
                table,
                failed: !passed,
            })
        }
        Command::Slope { vector: s } => {
            let v = vector(&s)?;
            let p = slope_vector(&v);
            let mut table = Table::new(&["t", "slope", "value"]);
            for (t, y) in p.values.iter().enumerate() {
                let slope = if t == 0 { String::new() } else { format_rational(&p.slopes[t - 1]) };
                table.push(vec![t.to_string(), slope, format_rational(y)]);
            }
            let mut result = to_value(&p);
            result["unit_word"] = json!(p.unit_word());
            output(json!({ "vector": s }), result, table)
        }
        Command::Pad { vector: s } => {
            let p = pad_alpha(&vector(&s)?);
            let table = Table::new(&["padded"]).row(vec![p.to_string()]);
            output(json!({ "vector": s }), json!({ "padded": p }), table)
        }
        Command::ToBbs { vertex: s, interior } => {
            let v = CubeVertex::from_gap_vector(&vector(&s)?)?;
            let b = if interior { interior_vertex_to_bbs(&v)? } else { vertex_to_bbs(&v)? };
            let table = Table::new(&["vertex", "bbs"]).row(vec![v.to_string(), b.to_string()]);
            output(json!({ "vertex": s, "interior": interior }), json!({ "vertex": v, "bbs": b }), table)
        }
        Command::FromBbs { bits, interior } => {
            let b: BitSequence = bits.parse()?;
            let v = if interior { bbs_to_interior_vertex(&b)? } else { bbs_to_vertex(&b)? };
            let table = Table::new(&["bbs", "vertex"]).row(vec![b.to_string(), v.to_string()]);
            output(json!({ "bits": bits, "interior": interior }), json!({ "bbs": b, "vertex": v }), table)
        }
        Command::Constraints { n } => {
            if n == 0 {
                return Err(Failure::Usage("n must be >= 1".into()));
            }
            let sys = constraint_system(n);
            let mut table = Table::new(&["row", "rhs"]);
            for (r, b) in sys.rows.iter().zip(&sys.rhs) {
                table.push(vec![list_cell(r), b.to_string()]);
            }
            output(json!({ "n": n }), to_value(&sys), table)
        }
        Command::Eliminate { matrix, example } => {
            let (m, params) = match matrix {
                Some(s) if !example => (parse_matrix(&s)?, json!({ "matrix": s })),
                _ => (linalg::worked_example().0, json!({ "example": true })),
            };
            let trace = flat_elimination(&m)?;
            let mut table = Table::new(&["step", "matrix"]);
            for (i, step) in trace.steps.iter().enumerate() {
                table.push(vec![i.to_string(), step.iter().map(list_cell).collect::<Vec<_>>().join(";")]);
            }
            output(params, to_value(&trace), table)
        }
        Command::Unimodular { n, cap } => {
            let mut last = 0;
            let report = linalg::verify_unimodularity_with(n, cap, |done, total| {
                let pct = done * 100 / total.max(1);
                if pct / 10 != last / 10 || done == total {
                    eprintln!("unimodular: {done}/{total} subsets");
                    last = pct;
                }
            })?;
            let table = Table::new(&["n", "submatrices_tested", "invertible_count", "all_unimodular", "all_flat"]).row(vec![
                n.to_string(),
                report.submatrices_tested.to_string(),
                report.invertible_count.to_string(),
                bool_cell(report.all_unimodular),
                bool_cell(report.all_flat),
            ]);
            let failed = !report.passed();
            Ok(Output { params: json!({ "n": n, "cap": cap }), result: to_value(&report), table, failed })
        }
        Command::Bfs { n, cap } => {
            let survey = linalg::basic_solution_survey(n, cap)?;
            let vertices: Vec<GapVector> = vertex::enumerate_vertices(n)?
                .vertices
                .iter()
                .map(CubeVertex::to_gap_vector)
                .collect();
            let matches = survey.feasible == vertices;
            let mut table = Table::new(&["solution"]);
            for v in &survey.feasible {
                table.push(vec![v.to_string()]);
            }
            let mut result = to_value(&survey);
            result["matches_vertices"] = json!(matches);
            Ok(Output { params: json!({ "n": n, "cap": cap }), result, table, failed: !matches })
        }
        Command::Verify(args) => {
            let mut fixtures = Fixtures::default();
            if let Some(name) = &args.corrupt_fixture {
                fixtures.corrupt(name).map_err(Failure::Usage)?;
            }
            let ctx = Context { level: args.level, seed: args.seed, fixtures };
            let report = verify::run(&ctx, |name| eprintln!("verify: {name}"));
            let mut table = Table::new(&["suite", "passed"]);
            for s in &report.suites {
                table.push(vec![s.name.to_string(), bool_cell(s.passed)]);
            }
            if !report.passed {
                eprintln!("verify: failed suites: {}", report.failed.join(", "));
            }
            let mut params = json!({ "level": args.level, "seed": args.seed });
            if let Some(name) = &args.corrupt_fixture {
                params["corrupt_fixture"] = json!(name);
            }
            Ok(Output { params, result: to_value(&report), table, failed: !report.passed })
        }
        Command::Plot { bbs, vector: vec_arg, guides, out } => {
            let (mut path, params) = match (&bbs, &vec_arg) {
                (Some(b), _) => (PlotPath::from_bits(&b.parse()?), json!({ "bbs": b })),
                (None, Some(s)) => (PlotPath::from_vector(&vector(s)?), json!({ "vector": s })),
                (None, None) => return Err(Failure::Usage("give --bbs or --vector".into())),
            };
            if guides {
                path = path.with_padding_guides();
            }
            let svg = render_svg(&path);
            fs::write(&out, &svg).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
            let labels: Vec<String> = path.values.iter().map(rational::format_rational_short).collect();
            let mut params = params;
            params["guides"] = json!(guides);
            params["out"] = json!(out.display().to_string());
            let table = Table::new(&["out", "nodes", "bytes"]).row(vec![
                out.display().to_string(),
                path.values.len().to_string(),
                svg.len().to_string(),
            ]);
            output(
                params,
                json!({ "out": out.display().to_string(), "nodes": labels, "bytes": svg.len() }),
                table,
            )
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Count { .. } => "count",
        Command::Enumerate { .. } => "enumerate",
        Command::Check { .. } => "check",
        Command::Sumset { .. } => "sumset",
        Command::Ratio { .. } => "ratio",
        Command::Member { .. } => "member",
        Command::Intervals { .. } => "intervals",
        Command::Gaps { .. } => "gaps",
        Command::Gerrymander { .. } => "gerrymander",
        Command::Rotate { .. } => "rotate",
        Command::Cut { .. } => "cut",
        Command::Classify { .. } => "classify",
        Command::Volume { .. } => "volume",
        Command::Vertices { .. } => "vertices",
        Command::Bounds { .. } => "bounds",
        Command::Slope { .. } => "slope",
        Command::Pad { .. } => "pad",
        Command::ToBbs { .. } => "to-bbs",
        Command::FromBbs { .. } => "from-bbs",
        Command::Constraints { .. } => "constraints",
        Command::Eliminate { .. } => "eliminate",
        Command::Unimodular { .. } => "unimodular",
        Command::Bfs { .. } => "bfs",
        Command::Verify(_) => "verify",
        Command::Plot { .. } => "plot",
    }
}

fn print_tsv(table: &Table) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", table.header.join("\t"))?;
    for row in &table.rows {
        writeln!(out, "{}", row.join("\t"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    match run(cli.command) {
        Ok(out) => {
            let timing_ms = if cli.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            let printed = match cli.format {
                Format::Json => {
                    let mut env = Map::new();
                    env.insert("schema_version".into(), json!(SCHEMA_VERSION));
                    env.insert("command".into(), json!(name));
                    env.insert("params".into(), out.params);
                    env.insert("result".into(), out.result);
                    env.insert("timing_ms".into(), json!(timing_ms));
                    let mut stdout = std::io::stdout().lock();
                    serde_json::to_writer(&mut stdout, &Value::Object(env))
                        .map_err(std::io::Error::other)
                        .and_then(|_| writeln!(stdout))
                }
                Format::Tsv => print_tsv(&out.table),
            };
            if let Err(e) = printed {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(out.failed))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
