//! The bidirectional ballot cone and polytope.
//!
//! A gap vector `[ℓ_1, g_1, ℓ_2, …, ℓ_n]` of odd length `m = 2n - 1` lies in
//! the cone when its dot product with every left and right ballot vector is
//! non-negative. The polytope is the cone cut down to the unit cube. All
//! predicates here are decided over exact rationals; only the Monte-Carlo
//! volume estimator works in floating point.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BallotError, Result};
use crate::rational::{self, is_non_negative, Rational};

/// Entries `[ℓ_1, g_1, …, ℓ_n]`; the length is always odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GapVector(#[serde(with = "rational::serde_rational_vec")] Vec<Rational>);

impl GapVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.len() % 2 == 0 {
            return Err(BallotError::Precondition(format!(
                "gap vector length must be odd, got {}",
                entries.len()
            )));
        }
        Ok(Self(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    /// Dimension `m = 2n - 1`.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of intervals `n`.
    pub fn intervals(&self) -> usize {
        self.0.len().div_ceil(2)
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(is_non_negative)
    }

    pub fn in_unit_cube(&self) -> bool {
        let one = Rational::one();
        self.0.iter().all(|x| is_non_negative(x) && *x <= one)
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * alpha).collect())
    }

    fn require_non_negative(&self) -> Result<()> {
        match self.0.iter().position(|x| x.is_negative()) {
            Some(i) => Err(BallotError::Precondition(format!(
                "entry {} is negative ({})",
                i + 1,
                rational::format_rational(&self.0[i])
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for GapVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&rational::format_rational_short(x))?;
        }
        f.write_str("]")
    }
}

/// Endpoints `a_1 <= b_1 <= a_2 <= … <= b_n` with `a_1 = 0`.
///
/// Degenerate intervals (`a_j = b_j`) are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    #[serde(with = "rational::serde_rational_vec")]
    endpoints: Vec<Rational>,
}

impl IntervalFamily {
    pub fn new(endpoints: Vec<Rational>) -> Result<Self> {
        if endpoints.is_empty() || endpoints.len() % 2 != 0 {
            return Err(BallotError::Precondition(
                "an interval family needs an even, non-zero number of endpoints".into(),
            ));
        }
        if !endpoints[0].is_zero() {
            return Err(BallotError::Precondition("the first interval must start at 0".into()));
        }
        if let Some(i) = endpoints.windows(2).position(|w| w[1] < w[0]) {
            return Err(BallotError::Precondition(format!(
                "endpoints must be weakly increasing (endpoint {} < endpoint {})",
                i + 2,
                i + 1
            )));
        }
        Ok(Self { endpoints })
    }

    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect())
    }

    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    pub fn len(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    /// `(a_j, b_j)` pairs.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.endpoints.chunks_exact(2).map(|c| (&c[0], &c[1]))
    }

    /// Right endpoint of the last interval.
    pub fn right_end(&self) -> &Rational {
        self.endpoints.last().expect("non-empty by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallotSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BallotVector {
    pub side: BallotSide,
    pub depth: usize,
    pub entries: Vec<i8>,
}

impl BallotVector {
    pub fn dot(&self, v: &[Rational]) -> Rational {
        self.entries
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (&w, x)| match w {
                1 => acc + x,
                -1 => acc - x,
                _ => acc,
            })
    }
}

/// Left ballot vectors by depth, then right ballot vectors by depth; `2(n-1)` in all.
pub fn ballot_vectors(n: usize) -> Vec<BallotVector> {
    assert!(n >= 1, "n must be >= 1");
    let m = 2 * n - 1;
    let left = (1..n).map(|k| {
        let mut entries = vec![0i8; m];
        for i in 0..2 * k {
            entries[i] = if i % 2 == 0 { 1 } else { -1 };
        }
        BallotVector { side: BallotSide::Left, depth: k, entries }
    });
    let right = (1..n).map(|k| {
        let mut entries = vec![0i8; m];
        for j in 0..2 * k {
            entries[m - 1 - j] = if j % 2 == 0 { 1 } else { -1 };
        }
        BallotVector { side: BallotSide::Right, depth: k, entries }
    });
    left.chain(right).collect()
}

/// Dot products against [`ballot_vectors`] in the same order, via alternating
/// prefix and suffix sums.
pub fn ballot_dots<T>(v: &[T]) -> Vec<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T> + for<'a> Sub<&'a T, Output = T>,
{
    let m = v.len();
    let n = m.div_ceil(2);
    let mut dots = Vec::with_capacity(2 * n.saturating_sub(1));
    let mut acc = T::zero();
    for k in 1..n {
        acc = acc + &v[2 * k - 2] - &v[2 * k - 1];
        dots.push(acc.clone());
    }
    let mut acc = T::zero();
    for k in 1..n {
        acc = acc + &v[m - 2 * k + 1] - &v[m - 2 * k];
        dots.push(acc.clone());
    }
    dots
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub in_cone: bool,
    pub in_polytope: bool,
    pub in_cone_interior: bool,
    /// `None` when there are no ballot vectors (n = 1), where the cone is all of space.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub min_ballot_dot: Option<Rational>,
    pub violated: Vec<BallotVector>,
}

fn serialize_opt_rational<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational::format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn membership(v: &GapVector) -> MembershipReport {
    let dots = ballot_dots(v.entries());
    let min_ballot_dot = dots.iter().min().cloned();
    let violated: Vec<BallotVector> = if dots.iter().any(|d| d.is_negative()) {
        ballot_vectors(v.intervals())
            .into_iter()
            .zip(&dots)
            .filter(|(_, d)| d.is_negative())
            .map(|(w, _)| w)
            .collect()
    } else {
        Vec::new()
    };
    let in_cone = violated.is_empty();
    let in_cone_interior = min_ballot_dot.as_ref().map_or(true, |d| d.is_positive());
    MembershipReport {
        in_cone,
        in_polytope: in_cone && v.in_unit_cube(),
        in_cone_interior,
        min_ballot_dot,
        violated,
    }
}

fn min_dot(v: &[Rational]) -> Option<Rational> {
    ballot_dots(v).into_iter().min()
}

pub fn gaps_from_intervals(family: &IntervalFamily) -> GapVector {
    GapVector(family.endpoints().windows(2).map(|w| &w[1] - &w[0]).collect())
}

pub fn intervals_from_gaps(v: &GapVector) -> Result<IntervalFamily> {
    v.require_non_negative()?;
    let mut endpoints = Vec::with_capacity(v.dim() + 1);
    let mut at = Rational::zero();
    endpoints.push(at.clone());
    for x in v.entries() {
        at += x;
        endpoints.push(at.clone());
    }
    IntervalFamily::new(endpoints)
}

/// Checks `μ(A ∩ [0,t]) >= t/2` and `μ(A ∩ [b-t,b]) >= t/2` for all `t ∈ [0,b]`.
///
/// The forward excess `μ(A ∩ [0,t]) - t/2` rises on intervals and falls on
/// gaps, so its minima sit at left endpoints; symmetrically the backward
/// excess bottoms out at right endpoints. Only those points are evaluated.
pub fn is_gerrymander_measure(family: &IntervalFamily) -> bool {
    let two = rational::int(2);
    let mut covered = Rational::zero();
    for (a, b) in family.intervals() {
        if covered.clone() * &two < *a {
            return false;
        }
        covered += b - a;
    }
    let end = family.right_end();
    let mut covered = Rational::zero();
    for (a, b) in family.intervals().collect::<Vec<_>>().into_iter().rev() {
        if covered.clone() * &two < end - b {
            return false;
        }
        covered += b - a;
    }
    true
}

/// Left-rotation amount `k` in `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ShiftIndex(usize);

impl ShiftIndex {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k >= m {
            return Err(BallotError::Precondition(format!("shift {k} out of range for m = {m}")));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// `result_i = v_{((i-1+k) mod m)+1}`.
pub fn rotate(v: &GapVector, k: ShiftIndex) -> GapVector {
    GapVector(rotate_slice(v.entries(), k.0))
}

pub(crate) fn rotate_slice<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.rotate_left(k % v.len().max(1));
    out
}

/// Rotation found by minimising `v · w_ℓ` over the partial sums
/// `w_ℓ = Σ_{i<=ℓ} τ^i(w)`, `w = [1,-1,0,…]`, where `τ` moves every entry two
/// places to the right. The minimiser `ℓ` puts `v` in the cone after a left
/// rotation by `2(ℓ+1) mod m`. Ties go to the smallest `ℓ`.
pub fn argmin_cut(v: &GapVector) -> ShiftIndex {
    let m = v.dim();
    let x = v.entries();
    let mut best: Option<(Rational, usize)> = None;
    let mut acc = Rational::zero();
    for l in 0..m {
        // τ^l(w) has +1 at 2l and -1 at 2l+1 (mod m)
        acc = acc + &x[(2 * l) % m] - &x[(2 * l + 1) % m];
        if best.as_ref().map_or(true, |(b, _)| acc < *b) {
            best = Some((acc.clone(), l));
        }
    }
    let l = best.map_or(0, |(_, l)| l);
    ShiftIndex((2 * (l + 1)) % m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecklaceCut {
    pub cuts: Vec<ShiftIndex>,
    pub canonical: ShiftIndex,
    pub unique: bool,
    /// Exactly one rotation has every ballot dot strictly positive.
    pub generic: bool,
    pub canonical_rotation: GapVector,
    pub argmin_cut: ShiftIndex,
}

/// Every rotation of a non-negative necklace that lands in the ballot cone.
pub fn cut_necklace(v: &GapVector) -> Result<NecklaceCut> {
    v.require_non_negative()?;
    let mins = rotation_min_dots(v);
    let cuts = rotations_where(&mins, |d| !d.is_negative());
    let generic = rotations_where(&mins, |d| d.is_positive()).len() == 1;
    let argmin = argmin_cut(v);
    let canonical = *cuts.first().ok_or_else(|| {
        BallotError::Precondition("no rotation lies in the cone; the cover property failed".into())
    })?;
    if !cuts.contains(&argmin) {
        return Err(BallotError::Precondition(format!(
            "argmin rotation {} is not among the cone rotations {:?}",
            argmin.0, cuts
        )));
    }
    Ok(NecklaceCut {
        unique: cuts.len() == 1,
        generic,
        canonical_rotation: rotate(v, canonical),
        canonical,
        argmin_cut: argmin,
        cuts,
    })
}

/// Rotations whose minimum ballot dot passes `keep`; with no ballot vectors every rotation passes.
fn rotations_where(mins: &[Option<Rational>], keep: impl Fn(&Rational) -> bool) -> Vec<ShiftIndex> {
    mins.iter()
        .enumerate()
        .filter(|(_, d)| d.as_ref().map_or(true, &keep))
        .map(|(k, _)| ShiftIndex(k))
        .collect()
}

fn rotation_min_dots(v: &GapVector) -> Vec<Option<Rational>> {
    (0..v.dim())
        .map(|k| min_dot(&rotate_slice(v.entries(), k)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub regions: Vec<ShiftIndex>,
    /// Rotations whose minimum ballot dot is strictly positive.
    pub interior_regions: Vec<ShiftIndex>,
    pub generic: bool,
}

/// Which rotated copies of the polytope contain a point of the unit cube.
pub fn classify_partition(v: &GapVector) -> Result<PartitionReport> {
    if !v.in_unit_cube() {
        return Err(BallotError::Precondition("every entry must lie in [0,1]".into()));
    }
    let mins = rotation_min_dots(v);
    let regions = rotations_where(&mins, |d| !d.is_negative());
    let interior_regions = rotations_where(&mins, |d| d.is_positive());
    Ok(PartitionReport {
        generic: regions.len() == 1 && interior_regions == regions,
        regions,
        interior_regions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Samples per independently seeded block. Fixed so that the estimate does
/// not depend on how blocks are spread across threads.
pub const MC_BLOCK: u64 = 1 << 16;

/// Fraction of uniform points of `[0,1]^m` that land in the polytope.
///
/// Block `b` draws from a ChaCha8 stream keyed by `(seed, b)`.
pub fn mc_volume(n: usize, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    if samples == 0 {
        return Err(BallotError::Precondition("samples must be >= 1".into()));
    }
    let m = 2 * n - 1;
    let blocks = samples.div_ceil(MC_BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut point = vec![0f64; m];
            let mut hits = 0u64;
            for _ in 0..count {
                point.iter_mut().for_each(|x| *x = rng.random::<f64>());
                if ballot_dots(&point).iter().all(|&d| d >= 0.0) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, parse_rational_list};

    fn gv(s: &str) -> GapVector {
        GapVector::new(parse_rational_list(s).unwrap()).unwrap()
    }

    fn family(pairs: &[(&str, &str)]) -> IntervalFamily {
        let p: Vec<_> = pairs
            .iter()
            .map(|(a, b)| {
                (crate::rational::parse_rational(a).unwrap(), crate::rational::parse_rational(b).unwrap())
            })
            .collect();
        IntervalFamily::from_pairs(&p).unwrap()
    }

    #[test]
    fn ballot_vector_sets() {
        assert!(ballot_vectors(1).is_empty());
        let v2: Vec<Vec<i8>> = ballot_vectors(2).into_iter().map(|b| b.entries).collect();
        assert_eq!(v2, vec![vec![1, -1, 0], vec![0, -1, 1]]);
        let v3: Vec<Vec<i8>> = ballot_vectors(3).into_iter().map(|b| b.entries).collect();
        assert_eq!(
            v3,
            vec![
                vec![1, -1, 0, 0, 0],
                vec![1, -1, 1, -1, 0],
                vec![0, 0, 0, -1, 1],
                vec![0, -1, 1, -1, 1],
            ]
        );
    }

    #[test]
    fn prefix_dots_match_explicit_dots() {
        let v = gv("3/4,1/3,1/2,2/3,1,5/7,2/9");
        let explicit: Vec<Rational> = ballot_vectors(4).iter().map(|w| w.dot(v.entries())).collect();
        assert_eq!(ballot_dots(v.entries()), explicit);
    }

    #[test]
    fn interval_conversions() {
        let fam = family(&[("0", "3/4"), ("13/12", "19/12"), ("9/4", "13/4")]);
        assert_eq!(gaps_from_intervals(&fam), gv("3/4,1/3,1/2,2/3,1"));
        assert_eq!(intervals_from_gaps(&gv("3/4,1/3,1/2,2/3,1")).unwrap(), fam);
        assert_eq!(gaps_from_intervals(&family(&[("0", "1")])), gv("1"));
        let degenerate = family(&[("0", "0"), ("1", "1")]);
        assert_eq!(gaps_from_intervals(&degenerate), gv("0,1,0"));
        assert_eq!(intervals_from_gaps(&gv("0,1,0")).unwrap(), degenerate);
        assert!(intervals_from_gaps(&gv("1,-1,1")).is_err());
    }

    #[test]
    fn interval_family_validation() {
        assert!(IntervalFamily::new(vec![int(1), int(2)]).is_err());
        assert!(IntervalFamily::new(vec![int(0), int(2), int(1), int(3)]).is_err());
        assert!(IntervalFamily::new(vec![int(0)]).is_err());
        assert!(GapVector::from_ints(&[1, 2]).is_err());
    }

    #[test]
    fn membership_examples() {
        let r = membership(&gv("3/4,1/3,1/2,2/3,1"));
        assert!(r.in_cone && r.in_polytope && r.in_cone_interior);
        assert_eq!(r.min_ballot_dot, Some(frac(1, 4)));

        let r = membership(&gv("1,1,1"));
        assert!(r.in_cone && !r.in_cone_interior);
        assert_eq!(r.min_ballot_dot, Some(int(0)));

        let r = membership(&gv("0,1,0"));
        assert!(!r.in_cone && !r.in_polytope);
        let violated: Vec<_> = r.violated.iter().map(|w| w.entries.clone()).collect();
        assert_eq!(violated, vec![vec![1, -1, 0], vec![0, -1, 1]]);

        let r = membership(&gv("2,1,2"));
        assert!(r.in_cone && !r.in_polytope);

        let r = membership(&gv("5"));
        assert!(r.in_cone && r.in_cone_interior && !r.in_polytope);
        assert_eq!(r.min_ballot_dot, None);
    }

    #[test]
    fn gerrymander_examples() {
        let fam = intervals_from_gaps(&gv("3/4,1/3,1/2,2/3,1")).unwrap();
        assert!(is_gerrymander_measure(&fam));
        assert!(!is_gerrymander_measure(&family(&[("0", "0"), ("1", "1")])));
        assert!(is_gerrymander_measure(&family(&[("0", "1")])));
        // forward fine, backward fails: long final gap before a short interval
        let fam = family(&[("0", "2"), ("3", "7/2")]);
        assert!(!is_gerrymander_measure(&fam));
        assert!(!membership(&gaps_from_intervals(&fam)).in_cone);
    }

    #[test]
    fn rotation_examples() {
        let v = GapVector::from_ints(&[0, 1, 2, 3, 4]).unwrap();
        let k = |k| ShiftIndex::new(k, 5).unwrap();
        assert_eq!(rotate(&v, k(3)), GapVector::from_ints(&[3, 4, 0, 1, 2]).unwrap());
        assert_eq!(rotate(&v, k(0)), v);
        for s in 1..5 {
            assert_eq!(rotate(&rotate(&v, k(s)), k(5 - s)), v);
        }
        assert!(ShiftIndex::new(5, 5).is_err());
    }

    #[test]
    fn necklace_figure_two() {
        let cut = cut_necklace(&gv("1.78,1.55,0.76,2.06,3.21")).unwrap();
        assert_eq!(cut.canonical_rotation, gv("3.21,1.78,1.55,0.76,2.06"));
        assert_eq!(cut.canonical.get(), 4);
        assert!(cut.unique && cut.generic);
        assert_eq!(cut.argmin_cut, cut.canonical);
    }

    #[test]
    fn necklace_degenerate_examples() {
        let cut = cut_necklace(&gv("1,1,1")).unwrap();
        assert_eq!(cut.cuts.iter().map(|k| k.get()).collect::<Vec<_>>(), [0, 1, 2]);
        assert_eq!(cut.canonical.get(), 0);
        assert!(!cut.unique && !cut.generic);

        let cut = cut_necklace(&gv("0,1,0")).unwrap();
        assert_eq!(cut.cuts.iter().map(|k| k.get()).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(cut.canonical.get(), 1);
        assert!(!cut.unique);

        assert!(cut_necklace(&gv("1,-1,1")).is_err());
        let cut = cut_necklace(&gv("7")).unwrap();
        assert!(cut.unique);
    }

    #[test]
    fn partition_examples() {
        let r = classify_partition(&gv("1,1,1")).unwrap();
        assert_eq!(r.regions.len(), 3);
        assert!(!r.generic);
        let r = classify_partition(&gv("1,0,1")).unwrap();
        assert_eq!(r.regions, vec![ShiftIndex(0)]);
        assert!(r.generic);
        let r = classify_partition(&gv("3/4,1/3,1/2,2/3,1")).unwrap();
        assert_eq!(r.regions, vec![ShiftIndex(0)]);
        assert!(r.generic);
        assert!(classify_partition(&gv("2,0,1")).is_err());
    }

    #[test]
    fn mc_volume_small_cases() {
        let r = mc_volume(1, 1000, 7).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.hits, 1000);
        let a = mc_volume(2, 200_000, 11).unwrap();
        let b = mc_volume(2, 200_000, 11).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 1.0 / 3.0).abs() < 4.0 * a.stderr, "{a:?}");
        assert!(mc_volume(2, 0, 1).is_err());
    }

    #[test]
    fn mc_volume_independent_of_thread_count() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_volume(3, 300_001, 99).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
