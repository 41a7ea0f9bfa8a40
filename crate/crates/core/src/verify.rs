//! Invariant suites run by `ballotope verify`.
//!
//! Each suite returns a pass flag and a JSON detail object. Suites with a
//! known anchor value (a count, a worked example) read it from [`Fixtures`],
//! which can be deliberately corrupted to confirm that a broken anchor is
//! reported by name.

use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::geom::{
    classify_partition, cut_necklace, gaps_from_intervals, intervals_from_gaps,
    is_gerrymander_measure, mc_volume, membership, GapVector,
};
use crate::linalg::{
    basic_solution_survey, constraint_system, flat_elimination, verify_unimodularity_with,
    worked_example, IntMatrix,
};
use crate::rational::{self, format_rational, Rational};
use crate::sampling;
use crate::seq::{
    bbs_to_path, count_bbs_brute, count_bbs_table, enumerate_bbs, is_bbs, ratio_from_count,
    sumset_fullness, BitSequence,
};
use crate::vertex::{
    bbs_to_interior_vertex, bbs_to_vertex, enumerate_vertices, interior_vertex_to_bbs,
    pad_alpha, slope_vector, verify_bounds, vertex_to_bbs, CubeVertex,
};

/// Band for `n·B_n/2^n` at `n = 100`, from the exact counter (value ≈ 0.25168).
pub const RATIO_BAND_100: (f64, f64) = (0.250, 0.255);
/// Coarse band for the same quantity.
pub const RATIO_BAND_100_COARSE: (f64, f64) = (0.18, 0.32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown level {other:?} (expected quick or full)")),
        }
    }
}

impl Level {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub b7: u64,
    pub figure_two_necklace: &'static str,
    pub figure_two_rotation: &'static str,
    pub worked_vertex: Vec<u8>,
    pub worked_bbs: &'static str,
    pub q2_count: usize,
    pub t2_count: usize,
    pub worked_elimination: (IntMatrix, Vec<IntMatrix>),
    pub bfs_q1: Vec<Vec<u8>>,
}

impl Default for Fixtures {
    fn default() -> Self {
        Self {
            b7: 5,
            figure_two_necklace: "1.78,1.55,0.76,2.06,3.21",
            figure_two_rotation: "3.21,1.78,1.55,0.76,2.06",
            worked_vertex: vec![0, 0, 1, 0, 0],
            worked_bbs: "110111011",
            q2_count: 5,
            t2_count: 1,
            worked_elimination: worked_example(),
            bfs_q1: vec![vec![0], vec![1]],
        }
    }
}

impl Fixtures {
    /// Perturbs the anchor checked by `suite`.
    pub fn corrupt(&mut self, suite: &str) -> Result<(), String> {
        match suite {
            "dp_vs_brute" => self.b7 += 1,
            "necklace" => self.figure_two_rotation = "1.78,1.55,0.76,2.06,3.21",
            "round_trips" => self.worked_bbs = "111011011",
            "vertex_bijection_counts" => self.q2_count += 1,
            "unimodularity" => self.worked_elimination.1[5][0][1] = 2,
            "basic_feasible_solutions" => self.bfs_q1.pop().map(drop).unwrap_or(()),
            other => {
                return Err(format!(
                    "suite {other:?} has no fixture to corrupt (choose one of {})",
                    CORRUPTIBLE.join(", ")
                ))
            }
        }
        Ok(())
    }
}

pub const CORRUPTIBLE: &[&str] = &[
    "dp_vs_brute",
    "necklace",
    "round_trips",
    "vertex_bijection_counts",
    "unimodularity",
    "basic_feasible_solutions",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub failed: Vec<&'static str>,
    pub suites: Vec<SuiteResult>,
}

pub struct Context {
    pub level: Level,
    pub seed: u64,
    pub fixtures: Fixtures,
}

type Suite = fn(&Context) -> (bool, Value);

pub const SUITES: &[(&str, Suite)] = &[
    ("dp_vs_brute", dp_vs_brute),
    ("monotonicity", monotonicity),
    ("path_characterization", path_characterization),
    ("sumset_fullness", sumset_suite),
    ("asymptotic_ratio", asymptotic_ratio),
    ("gerrymander_equivalence", gerrymander_equivalence),
    ("partition_cover", partition_cover),
    ("necklace", necklace),
    ("scaling_invariance", scaling_invariance),
    ("interval_round_trip", interval_round_trip),
    ("volume", volume),
    ("vertex_bijection_counts", vertex_bijection_counts),
    ("round_trips", round_trips),
    ("shift_identity", shift_identity),
    ("endpoint_slack", endpoint_slack),
    ("bounds", bounds),
    ("unimodularity", unimodularity),
    ("basic_feasible_solutions", basic_feasible),
    ("constraints_vs_membership", constraints_vs_membership),
];

/// Runs every suite in order; `on_start` is told each suite name before it runs.
pub fn run(ctx: &Context, mut on_start: impl FnMut(&str)) -> VerifyReport {
    let suites: Vec<SuiteResult> = SUITES
        .iter()
        .map(|&(name, suite)| {
            on_start(name);
            let (passed, detail) = suite(ctx);
            SuiteResult { name, passed, detail }
        })
        .collect();
    let failed: Vec<&'static str> = suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
    VerifyReport {
        level: ctx.level,
        seed: ctx.seed,
        passed: failed.is_empty(),
        failed,
        suites,
    }
}

fn parse_gap(s: &str) -> GapVector {
    GapVector::new(rational::parse_rational_list(s).expect("fixture parses")).expect("odd fixture")
}

fn dp_vs_brute(ctx: &Context) -> (bool, Value) {
    let limit = ctx.level.pick(16, 18);
    let table = count_bbs_table(limit);
    let mismatches: Vec<usize> = (1..=limit)
        .filter(|&n| count_bbs_brute(n).ok().as_ref() != Some(&table[n - 1]))
        .collect();
    let anchor_ok = table[6] == BigUint::from(ctx.fixtures.b7);
    (
        mismatches.is_empty() && anchor_ok,
        json!({ "checked_up_to": limit, "mismatches": mismatches, "b7_anchor_ok": anchor_ok }),
    )
}

fn monotonicity(ctx: &Context) -> (bool, Value) {
    let table = count_bbs_table(201);
    let drops: Vec<usize> = (1..=200).filter(|&n| table[n] < table[n - 1]).collect();
    let inject_to = ctx.level.pick(12, 14);
    let injection_failures: usize = (1..=inject_to)
        .map(|n| {
            enumerate_bbs(n)
                .expect("within cap")
                .into_iter()
                .filter(|b| {
                    let mut bits = b.bits().to_vec();
                    bits.push(true);
                    !is_bbs(&BitSequence::new(bits).expect("non-empty"))
                })
                .count()
        })
        .sum();
    (
        drops.is_empty() && injection_failures == 0,
        json!({ "checked_up_to": 200, "drops": drops, "append_one_failures": injection_failures }),
    )
}

fn path_characterization(ctx: &Context) -> (bool, Value) {
    let max_len = ctx.level.pick(12, 16);
    let mut words = 0u64;
    let mismatches: u64 = (1..=max_len)
        .map(|len| {
            words += 1 << len;
            (0..1u64 << len)
                .into_par_iter()
                .filter(|&w| {
                    let b = BitSequence::from_word(w, len);
                    is_bbs(&b) != bbs_to_path(&b).is_culminating()
                })
                .count() as u64
        })
        .sum();
    let bad_ends: usize = (1..=max_len)
        .flat_map(|n| enumerate_bbs(n).expect("within cap"))
        .filter(|b| !(b.bit(1) && b.bit(b.len())))
        .count();
    (
        mismatches == 0 && bad_ends == 0,
        json!({ "words_checked": words, "mismatches": mismatches, "bbs_not_framed_by_ones": bad_ends }),
    )
}

fn sumset_suite(ctx: &Context) -> (bool, Value) {
    let max_len = ctx.level.pick(12, 14);
    let mut checked = 0usize;
    let mut exceptions = Vec::new();
    for n in 1..=max_len {
        for b in enumerate_bbs(n).expect("within cap") {
            checked += 1;
            let r = sumset_fullness(&b);
            if !(r.sumset_full && r.diffset_full) {
                exceptions.push(b.to_string());
            }
        }
    }
    (
        exceptions.is_empty(),
        json!({ "sequences_checked": checked, "max_length": max_len, "exceptions": exceptions }),
    )
}

fn asymptotic_ratio(ctx: &Context) -> (bool, Value) {
    let table = count_bbs_table(200);
    let r100 = ratio_from_count(100, &table[99]);
    let value = rational::to_f64(&r100);
    let within = |(lo, hi): (f64, f64)| value >= lo && value <= hi;
    let passed = within(RATIO_BAND_100) && within(RATIO_BAND_100_COARSE);
    let mut detail = json!({
        "n": 100,
        "ratio": format_rational(&r100),
        "band": [RATIO_BAND_100.0, RATIO_BAND_100.1],
        "coarse_band": [RATIO_BAND_100_COARSE.0, RATIO_BAND_100_COARSE.1],
    });
    if ctx.level == Level::Full {
        let rows: Vec<Value> = (10..=200)
            .map(|n| json!({ "n": n, "ratio": format_rational(&ratio_from_count(n, &table[n - 1])) }))
            .collect();
        detail["table"] = Value::Array(rows);
    }
    (passed, detail)
}

/// Runs `check` on `count` seeded draws for each `n`, in parallel chunks
/// with one RNG stream per chunk. Returns failures per `n`.
fn sweep<F>(seed: u64, salt: u64, ns: &[usize], count: usize, check: F) -> Vec<(usize, usize)>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, usize) -> bool + Sync,
{
    const CHUNK: usize = 1000;
    ns.iter()
        .map(|&n| {
            let chunks = count.div_ceil(CHUNK);
            let failures: usize = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = sampling::rng(seed, salt << 40 | (n as u64) << 24 | c as u64);
                    let here = CHUNK.min(count - c * CHUNK);
                    (0..here).filter(|_| !check(&mut rng, n)).count()
                })
                .sum();
            (n, failures)
        })
        .collect()
}

fn failures_json(rows: &[(usize, usize)]) -> Value {
    Value::Array(rows.iter().map(|(n, f)| json!({ "n": n, "failures": f })).collect())
}

fn all_zero(rows: &[(usize, usize)]) -> bool {
    rows.iter().all(|&(_, f)| f == 0)
}

fn gerrymander_equivalence(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(1000, 10_000);
    let rows = sweep(ctx.seed, 1, &[2, 3, 4, 5, 6], per_n, |rng, n| {
        let fam = sampling::interval_family(rng, n);
        is_gerrymander_measure(&fam) == membership(&gaps_from_intervals(&fam)).in_cone
    });
    // the sweep should see both outcomes
    let hits = sweep(ctx.seed, 1, &[3], per_n.min(1000), |rng, n| {
        !membership(&gaps_from_intervals(&sampling::interval_family(rng, n))).in_cone
    });
    let in_cone_share = 1.0 - hits[0].1 as f64 / per_n.min(1000) as f64;
    let passed = all_zero(&rows) && in_cone_share > 0.0 && in_cone_share < 1.0;
    (
        passed,
        json!({ "families_per_n": per_n, "results": failures_json(&rows), "in_cone_share_n3": in_cone_share }),
    )
}

fn partition_cover(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(10_000, 100_000);
    let rows = sweep(ctx.seed, 2, &[2, 3, 4, 5], per_n, |rng, n| {
        let v = sampling::unit_cube_point(rng, 2 * n - 1);
        let r = classify_partition(&v).expect("point in cube");
        !r.regions.is_empty()
            && r.interior_regions.len() <= 1
            && (r.interior_regions.is_empty() || r.regions.len() == 1)
    });
    let vertex_rows: Vec<(usize, usize)> = (1..=5)
        .map(|n| {
            let m = 2 * n - 1;
            let uncovered = (0..1u64 << m)
                .filter(|&w| {
                    let v = CubeVertex::new((0..m).rev().map(|i| (w >> i & 1) as u8).collect())
                        .expect("0/1 entries");
                    classify_partition(&v.to_gap_vector()).expect("in cube").regions.is_empty()
                })
                .count();
            (n, uncovered)
        })
        .collect();
    (
        all_zero(&rows) && all_zero(&vertex_rows),
        json!({
            "points_per_n": per_n,
            "random_points": failures_json(&rows),
            "cube_vertices": failures_json(&vertex_rows),
        }),
    )
}

fn necklace(ctx: &Context) -> (bool, Value) {
    let f = &ctx.fixtures;
    let figure = cut_necklace(&parse_gap(f.figure_two_necklace)).expect("non-negative");
    let figure_ok = figure.unique && figure.canonical_rotation == parse_gap(f.figure_two_rotation);

    let per_m = ctx.level.pick(1000, 10_000);
    let ns: Vec<usize> = (1..=6).collect();
    let rows = sweep(ctx.seed, 3, &ns, per_m, |rng, n| {
        // redraw until generic; ties on a 10^-6 grid are rare
        loop {
            let v = sampling::fine_necklace(rng, 2 * n - 1);
            match cut_necklace(&v) {
                Ok(cut) if cut.generic => return cut.unique && cut.cuts.contains(&cut.argmin_cut),
                Ok(_) => continue,
                Err(_) => return false,
            }
        }
    });
    // argmin agreement on arbitrary (possibly degenerate) necklaces
    let degenerate = sweep(ctx.seed, 4, &ns, per_m / 10, |rng, n| {
        let m = 2 * n - 1;
        let v = GapVector::from_ints(&(0..m).map(|_| rng.random_range(0..3)).collect::<Vec<_>>())
            .expect("odd");
        cut_necklace(&v).is_ok()
    });
    let by_m: Vec<Value> = rows
        .iter()
        .map(|(n, fails)| json!({ "m": 2 * n - 1, "failures": fails }))
        .collect();
    (
        figure_ok && all_zero(&rows) && all_zero(&degenerate),
        json!({
            "figure_two_ok": figure_ok,
            "figure_two_rotation": figure.canonical_rotation.to_string(),
            "generic_necklaces_per_m": per_m,
            "results": by_m,
            "small_integer_necklaces": failures_json(&degenerate),
        }),
    )
}

fn scaling_invariance(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(1000, 10_000);
    let rows = sweep(ctx.seed, 5, &[1, 2, 3, 4, 5, 6], per_n, |rng, n| {
        let v = sampling::near_cube_point(rng, 2 * n - 1);
        let alpha = Rational::new(rng.random_range(1..=50i64).into(), rng.random_range(1..=50i64).into());
        membership(&v).in_cone == membership(&v.scale(&alpha)).in_cone
    });
    (all_zero(&rows), json!({ "points_per_n": per_n, "results": failures_json(&rows) }))
}

fn interval_round_trip(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(1000, 10_000);
    let rows = sweep(ctx.seed, 6, &[1, 2, 3, 4, 5, 6], per_n, |rng, n| {
        let v = sampling::orthant_point(rng, 2 * n - 1, 3);
        let fam = sampling::interval_family(rng, n);
        intervals_from_gaps(&v).map(|f| gaps_from_intervals(&f)).as_ref() == Ok(&v)
            && intervals_from_gaps(&gaps_from_intervals(&fam)).as_ref() == Ok(&fam)
    });
    (all_zero(&rows), json!({ "vectors_per_n": per_n, "results": failures_json(&rows) }))
}

fn volume(ctx: &Context) -> (bool, Value) {
    let samples = ctx.level.pick(200_000, 1_000_000);
    let mut passed = true;
    let rows: Vec<Value> = (1..=5)
        .map(|n| {
            let est = mc_volume(n, samples, ctx.seed).expect("valid arguments");
            let target = 1.0 / (2 * n - 1) as f64;
            let mut ok = (est.estimate - target).abs() <= 4.0 * est.stderr;
            if n == 1 {
                ok = est.estimate == 1.0;
            }
            if n == 2 {
                ok &= (est.estimate - 1.0 / 3.0).abs() < 0.005;
            }
            passed &= ok;
            json!({
                "n": n,
                "target": format!("1/{}", 2 * n - 1),
                "estimate": est.estimate,
                "stderr": est.stderr,
                "hits": est.hits,
                "ok": ok,
            })
        })
        .collect();
    (passed, json!({ "samples": samples, "results": rows }))
}

fn vertex_bijection_counts(ctx: &Context) -> (bool, Value) {
    let max_n = ctx.level.pick(5, 6);
    let table = count_bbs_table(2 * max_n + 3);
    let mut passed = true;
    let rows: Vec<Value> = (1..=max_n)
        .map(|n| {
            let q = enumerate_vertices(n).expect("within cap");
            let q_ok = BigUint::from(q.len()) == table[2 * n + 2]
                && count_bbs_brute(2 * n + 3).ok().as_ref() == Some(&table[2 * n + 2]);
            let t_ok = n < 2
                || (BigUint::from(q.interior_count()) == table[2 * n - 2]
                    && count_bbs_brute(2 * n - 1).ok().as_ref() == Some(&table[2 * n - 2]));
            passed &= q_ok && t_ok;
            json!({
                "n": n,
                "vertices": q.len(),
                "interior_vertices": q.interior_count(),
                "b_2n_plus_3": table[2 * n + 2].to_string(),
                "b_2n_minus_1": table[2 * n - 2].to_string(),
                "ok": q_ok && t_ok,
            })
        })
        .collect();
    let q2 = enumerate_vertices(2).expect("within cap");
    let anchors_ok = q2.len() == ctx.fixtures.q2_count && q2.interior_count() == ctx.fixtures.t2_count;
    (passed && anchors_ok, json!({ "results": rows, "anchors_ok": anchors_ok }))
}

fn round_trips(ctx: &Context) -> (bool, Value) {
    let max_n = ctx.level.pick(4, 5);
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let q = enumerate_vertices(n).expect("within cap");
        for v in &q.vertices {
            let back = vertex_to_bbs(v).and_then(|b| bbs_to_vertex(&b));
            if back.as_ref() != Ok(v) {
                failures.push(format!("vertex {v}"));
            }
        }
        for b in enumerate_bbs(2 * n + 3).expect("within cap") {
            if bbs_to_vertex(&b).and_then(|v| vertex_to_bbs(&v)).as_ref() != Ok(&b) {
                failures.push(format!("sequence {b}"));
            }
        }
        if n >= 2 {
            for v in q.interior() {
                let back = interior_vertex_to_bbs(v).and_then(|b| bbs_to_interior_vertex(&b));
                if back.as_ref() != Ok(v) {
                    failures.push(format!("interior vertex {v}"));
                }
            }
            for b in enumerate_bbs(2 * n - 1).expect("within cap") {
                let back = bbs_to_interior_vertex(&b).and_then(|v| interior_vertex_to_bbs(&v));
                if back.as_ref() != Ok(&b) {
                    failures.push(format!("interior sequence {b}"));
                }
            }
        }
    }
    let f = &ctx.fixtures;
    let worked = CubeVertex::new(f.worked_vertex.clone()).expect("0/1 fixture");
    let worked_bbs: BitSequence = f.worked_bbs.parse().expect("bit fixture");
    let worked_ok = vertex_to_bbs(&worked).as_ref() == Ok(&worked_bbs)
        && bbs_to_vertex(&worked_bbs).as_ref() == Ok(&worked);
    failures.truncate(20);
    (
        failures.is_empty() && worked_ok,
        json!({ "exhaustive_up_to_n": max_n, "failures": failures, "worked_pair_ok": worked_ok }),
    )
}

fn shift_identity(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(500, 5000);
    let two = rational::int(2);
    let rows = sweep(ctx.seed, 7, &[1, 2, 3, 4, 5, 6], per_n, |rng, n| {
        let m = 2 * n - 1;
        let v = sampling::unit_cube_point(rng, m);
        let inner = slope_vector(&v).values;
        let outer = slope_vector(&pad_alpha(&v)).values;
        let shifted = (0..=m).all(|k| outer[k + 2] == &inner[k] + &two);
        let head = (0..=2).all(|i| outer[i] == rational::int(i as i64));
        let tail = (1..=2).all(|i| outer[m + 2 + i] == &outer[m + 2] + rational::int(i as i64));
        shifted && head && tail
    });
    (all_zero(&rows), json!({ "vectors_per_n": per_n, "results": failures_json(&rows) }))
}

/// Along the path of a vertex, interior values stay within 1 of the endpoint values.
fn endpoint_slack(ctx: &Context) -> (bool, Value) {
    let max_n = ctx.level.pick(5, 6);
    let one = Rational::one();
    let rows: Vec<(usize, usize)> = (1..=max_n)
        .map(|n| {
            let m = 2 * n - 1;
            let q = enumerate_vertices(n).expect("within cap");
            let bad = q
                .vertices
                .iter()
                .filter(|v| {
                    let f = slope_vector(&v.to_gap_vector()).values;
                    let (lo, hi) = (&f[0] - &one, &f[m] + &one);
                    !f[1..m].iter().all(|y| *y >= lo && *y <= hi)
                })
                .count();
            (n, bad)
        })
        .collect();
    (all_zero(&rows), json!({ "vertices": failures_json(&rows) }))
}

fn bounds(_ctx: &Context) -> (bool, Value) {
    let rows = verify_bounds(5, 29).expect("valid range");
    let failed: Vec<usize> = rows.iter().filter(|r| !r.passed()).map(|r| r.l).collect();
    (failed.is_empty(), json!({ "l_range": [5, 29], "rows": rows, "failed": failed }))
}

fn unimodularity(ctx: &Context) -> (bool, Value) {
    let max_n = ctx.level.pick(3, 4);
    let mut passed = true;
    let reports: Vec<Value> = (2..=max_n)
        .map(|n| {
            let r = verify_unimodularity_with(n, 4, |_, _| {}).expect("within cap");
            passed &= r.passed();
            serde_json::to_value(&r).expect("serializable")
        })
        .collect();
    let (a0, expected) = &ctx.fixtures.worked_elimination;
    let trace = flat_elimination(a0).expect("square");
    let worked_ok = &trace.steps == expected && trace.all_flat && trace.determinant.abs() == 1;
    (passed && worked_ok, json!({ "reports": reports, "worked_example_ok": worked_ok }))
}

fn basic_feasible(ctx: &Context) -> (bool, Value) {
    let mut passed = true;
    let rows: Vec<Value> = (1..=3)
        .map(|n| {
            let survey = basic_solution_survey(n, 3).expect("within cap");
            let vertices: Vec<GapVector> = enumerate_vertices(n)
                .expect("within cap")
                .vertices
                .iter()
                .map(CubeVertex::to_gap_vector)
                .collect();
            let zero_one = survey
                .feasible
                .iter()
                .all(|v| CubeVertex::from_gap_vector(v).is_ok());
            let ok = survey.feasible == vertices && survey.all_integral && zero_one;
            passed &= ok;
            json!({
                "n": n,
                "basic_solutions": survey.basic_solutions,
                "basic_feasible": survey.feasible.len(),
                "vertices": vertices.len(),
                "all_integral": survey.all_integral,
                "ok": ok,
            })
        })
        .collect();
    let q1: Vec<GapVector> = ctx
        .fixtures
        .bfs_q1
        .iter()
        .map(|v| CubeVertex::new(v.clone()).expect("0/1").to_gap_vector())
        .collect();
    let anchor_ok = basic_solution_survey(1, 3).map(|s| s.feasible).as_ref() == Ok(&q1);
    (passed && anchor_ok, json!({ "results": rows, "q1_anchor_ok": anchor_ok }))
}

fn constraints_vs_membership(ctx: &Context) -> (bool, Value) {
    let per_n = ctx.level.pick(1000, 10_000);
    let flat = (1..=6).all(|n| constraint_system(n).is_flat());
    let rows = sweep(ctx.seed, 8, &[1, 2, 3, 4, 5], per_n, |rng, n| {
        let v = sampling::near_cube_point(rng, 2 * n - 1);
        constraint_system(n).satisfies(v.entries()) == membership(&v).in_polytope
    });
    let some_outside = (1..=5).any(|n| {
        let mut rng = sampling::rng(ctx.seed, 9);
        (0..100).any(|_| sampling::near_cube_point(&mut rng, 2 * n - 1).entries().iter().any(Signed::is_negative))
    });
    (
        flat && all_zero(&rows) && some_outside,
        json!({ "rows_flat": flat, "points_per_n": per_n, "results": failures_json(&rows) }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context { level: Level::Quick, seed: 2018, fixtures: Fixtures::default() }
    }

    #[test]
    fn every_corruptible_suite_exists() {
        for name in CORRUPTIBLE {
            assert!(SUITES.iter().any(|(s, _)| s == name), "{name}");
        }
        assert!(Fixtures::default().corrupt("bounds").is_err());
    }

    #[test]
    fn corrupted_anchor_fails_its_suite() {
        for name in ["dp_vs_brute", "necklace", "round_trips", "basic_feasible_solutions", "unimodularity"] {
            let mut c = ctx();
            let suite = SUITES.iter().find(|(s, _)| *s == name).unwrap().1;
            assert!(suite(&c).0, "{name} should pass with clean fixtures");
            c.fixtures.corrupt(name).unwrap();
            assert!(!suite(&c).0, "{name} should fail with a corrupted fixture");
        }
    }

    #[test]
    fn level_parsing() {
        assert_eq!("quick".parse::<Level>(), Ok(Level::Quick));
        assert_eq!("full".parse::<Level>(), Ok(Level::Full));
        assert!("medium".parse::<Level>().is_err());
    }
}
