//! Vertices of the ballot polytope and their correspondence with ballot sequences.
//!
//! Every vertex of the polytope is a 0/1 vector, so vertices are found by
//! filtering cube vertices. A gap vector `v` becomes a path through its slope
//! vector `λ_i = (-1)^{i-1}(2v_i - 1)`; for a cube vertex the slopes are ±1 and
//! the path spells a 0/1 word.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BallotError, Result};
use crate::geom::{ballot_dots, membership, GapVector};
use crate::rational::{self, Rational};
use crate::seq::{count_bbs_table, is_bbs, BitSequence};

pub const DEFAULT_VERTEX_CAP: usize = 10;

/// A vertex of the unit cube, entries in {0,1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CubeVertex(Vec<u8>);

impl CubeVertex {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.len() % 2 == 0 {
            return Err(BallotError::Precondition("vertex length must be odd".into()));
        }
        if entries.iter().any(|&x| x > 1) {
            return Err(BallotError::Precondition("vertex entries must be 0 or 1".into()));
        }
        Ok(Self(entries))
    }

    fn from_word(word: u64, m: usize) -> Self {
        Self((0..m).rev().map(|i| (word >> i & 1) as u8).collect())
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn to_gap_vector(&self) -> GapVector {
        GapVector::new(self.0.iter().map(|&x| rational::int(x as i64)).collect())
            .expect("odd length by construction")
    }

    /// Converts a gap vector whose entries are all exactly 0 or 1.
    pub fn from_gap_vector(v: &GapVector) -> Result<Self> {
        let entries = v
            .entries()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if x.is_zero() {
                    Ok(0)
                } else if x.is_one() {
                    Ok(1)
                } else {
                    Err(BallotError::Precondition(format!(
                        "entry {} is {}, not a cube-vertex coordinate",
                        i + 1,
                        rational::format_rational(x)
                    )))
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Slopes `λ_1…λ_m` and the values `f(0)…f(m)` of the piecewise-linear path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopePath {
    #[serde(with = "rational::serde_rational_vec")]
    pub slopes: Vec<Rational>,
    #[serde(with = "rational::serde_rational_vec")]
    pub values: Vec<Rational>,
}

impl SlopePath {
    pub fn from_slopes(slopes: Vec<Rational>) -> Self {
        let mut values = Vec::with_capacity(slopes.len() + 1);
        let mut at = Rational::zero();
        values.push(at.clone());
        for s in &slopes {
            at += s;
            values.push(at.clone());
        }
        Self { slopes, values }
    }

    /// The 0/1 word spelled by ±1 slopes, or `None` if some slope is not ±1.
    pub fn unit_word(&self) -> Option<BitSequence> {
        let one = Rational::one();
        let bits = self
            .slopes
            .iter()
            .map(|s| {
                if *s == one {
                    Some(true)
                } else if *s == -one.clone() {
                    Some(false)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<bool>>>()?;
        BitSequence::new(bits).ok()
    }
}

/// `[1, 0, v_1, …, v_m, 0, 1]`.
pub fn pad_alpha(v: &GapVector) -> GapVector {
    let (one, zero) = (Rational::one(), Rational::zero());
    let mut entries = Vec::with_capacity(v.dim() + 4);
    entries.extend([one.clone(), zero.clone()]);
    entries.extend_from_slice(v.entries());
    entries.extend([zero, one]);
    GapVector::new(entries).expect("odd length is preserved")
}

pub fn slope_vector(v: &GapVector) -> SlopePath {
    let two = rational::int(2);
    let slopes = v
        .entries()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let s = &two * x - Rational::one();
            if i % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    SlopePath::from_slopes(slopes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSet {
    pub n: usize,
    pub vertices: Vec<CubeVertex>,
    /// `true` when every ballot dot is strictly positive.
    pub interior_flags: Vec<bool>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn interior(&self) -> impl Iterator<Item = &CubeVertex> {
        self.vertices
            .iter()
            .zip(&self.interior_flags)
            .filter(|(_, &f)| f)
            .map(|(v, _)| v)
    }

    pub fn interior_count(&self) -> usize {
        self.interior_flags.iter().filter(|&&f| f).count()
    }
}

pub fn enumerate_vertices(n: usize) -> Result<VertexSet> {
    enumerate_vertices_capped(n, DEFAULT_VERTEX_CAP)
}

/// Scans all `2^m` cube vertices, keeping those in the polytope.
pub fn enumerate_vertices_capped(n: usize, cap: usize) -> Result<VertexSet> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    if n > cap || n > 31 {
        return Err(BallotError::CapExceeded { operation: "enumerate_vertices", n, cap });
    }
    let m = 2 * n - 1;
    let found: Vec<(u64, bool)> = (0..1u64 << m)
        .into_par_iter()
        .filter_map(|word| {
            let coords: Vec<i64> = (0..m).rev().map(|i| (word >> i & 1) as i64).collect();
            let dots = ballot_dots(&coords);
            if dots.iter().all(|&d| d >= 0) {
                Some((word, dots.iter().all(|&d| d > 0)))
            } else {
                None
            }
        })
        .collect();
    let (vertices, interior_flags) = found
        .into_iter()
        .map(|(w, interior)| (CubeVertex::from_word(w, m), interior))
        .unzip();
    Ok(VertexSet { n, vertices, interior_flags })
}

/// BBS of length `2n+3` read off the slopes of `α(v)`.
pub fn vertex_to_bbs(v: &CubeVertex) -> Result<BitSequence> {
    let gaps = v.to_gap_vector();
    let report = membership(&gaps);
    if !report.in_polytope {
        return Err(BallotError::Precondition(format!(
            "{v} is not a vertex of the polytope: {} ballot constraint(s) violated",
            report.violated.len()
        )));
    }
    let word = slope_vector(&pad_alpha(&gaps))
        .unit_word()
        .expect("cube vertices have unit slopes");
    debug_assert!(is_bbs(&word));
    Ok(word)
}

/// Inverse of [`vertex_to_bbs`]: `w_j = 1` iff `j ≡ b_{j+2} (mod 2)`.
pub fn bbs_to_vertex(b: &BitSequence) -> Result<CubeVertex> {
    let len = b.len();
    if len < 5 || len % 2 == 0 {
        return Err(BallotError::Precondition(format!(
            "expected odd length >= 5, got {len}"
        )));
    }
    if !is_bbs(b) {
        return Err(BallotError::Precondition(format!("{b} is not a bidirectional ballot sequence")));
    }
    let entries = (1..=len - 4)
        .map(|j| u8::from(j % 2 == usize::from(b.bit(j + 2))))
        .collect();
    CubeVertex::new(entries)
}

/// BBS of length `2n-1` read off the slopes of `v` itself; `v` must be an interior vertex.
pub fn interior_vertex_to_bbs(v: &CubeVertex) -> Result<BitSequence> {
    let m = v.entries().len();
    if m < 3 {
        return Err(BallotError::Precondition(
            "the interior correspondence needs n >= 2".into(),
        ));
    }
    let gaps = v.to_gap_vector();
    let report = membership(&gaps);
    if !report.in_polytope {
        return Err(BallotError::Precondition(format!("{v} is not a vertex of the polytope")));
    }
    if !report.in_cone_interior {
        return Err(BallotError::Precondition(format!(
            "{v} lies on the cone boundary (minimum ballot dot {})",
            report.min_ballot_dot.as_ref().map(rational::format_rational).unwrap_or_default()
        )));
    }
    let word = slope_vector(&gaps).unit_word().expect("cube vertices have unit slopes");
    debug_assert!(is_bbs(&word));
    Ok(word)
}

/// Inverse of [`interior_vertex_to_bbs`]: `v_j = 1` iff `j ≡ b_j (mod 2)`.
pub fn bbs_to_interior_vertex(b: &BitSequence) -> Result<CubeVertex> {
    let len = b.len();
    if len < 3 || len % 2 == 0 {
        return Err(BallotError::Precondition(format!(
            "expected odd length >= 3, got {len}"
        )));
    }
    if !is_bbs(b) {
        return Err(BallotError::Precondition(format!("{b} is not a bidirectional ballot sequence")));
    }
    CubeVertex::new((1..=len).map(|j| u8::from(j % 2 == usize::from(b.bit(j)))).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub l: usize,
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
    /// `2^l / (16 (l - 4))`; absent for `l < 5`, where the bound is vacuous.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower: Option<Rational>,
    #[serde(with = "rational::serde_rational")]
    pub upper: Rational,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundRow {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

pub(crate) fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
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

/// Compares `B_l` against `2^l/(16(l-4)) <= B_l <= 2^l/l` for every odd `l` in range.
pub fn verify_bounds(l_min: usize, l_max: usize) -> Result<Vec<BoundRow>> {
    if l_min == 0 || l_min > l_max {
        return Err(BallotError::Precondition(format!("bad range {l_min}..={l_max}")));
    }
    let table = count_bbs_table(l_max);
    Ok((l_min..=l_max)
        .filter(|l| l % 2 == 1)
        .map(|l| bound_row(l, &table[l - 1]))
        .collect())
}

fn bound_row(l: usize, count: &BigUint) -> BoundRow {
    use num_bigint::BigInt;
    let b = Rational::from_integer(BigInt::from(count.clone()));
    let pow = Rational::from_integer(BigInt::one() << l);
    let upper = &pow / rational::int(l as i64);
    let lower = (l >= 5).then(|| &pow / rational::int(16 * (l as i64 - 4)));
    BoundRow {
        l,
        lower_ok: lower.as_ref().map_or(true, |lo| *lo <= b),
        upper_ok: b <= upper && !b.is_negative(),
        count: count.clone(),
        lower,
        upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, parse_rational_list};
    use crate::seq::enumerate_bbs;

    fn gv(s: &str) -> GapVector {
        GapVector::new(parse_rational_list(s).unwrap()).unwrap()
    }

    fn cv(e: &[u8]) -> CubeVertex {
        CubeVertex::new(e.to_vec()).unwrap()
    }

    fn bits(s: &str) -> BitSequence {
        s.parse().unwrap()
    }

    #[test]
    fn alpha_padding() {
        assert_eq!(pad_alpha(&gv("0,0,1,0,0")), gv("1,0,0,0,1,0,0,0,1"));
        assert_eq!(pad_alpha(&gv("1")), gv("1,0,1,0,1"));
        assert_eq!(pad_alpha(&gv("1/2,1/3,1/4")).dim(), 7);
    }

    #[test]
    fn slope_examples() {
        // even-indexed slopes flip sign: λ_2 = -(2/3 - 1) = 1/3
        let p = slope_vector(&gv("3/4,1/3,1/2,2/3,1"));
        assert_eq!(p.slopes, vec![frac(1, 2), frac(1, 3), int(0), frac(-1, 3), int(1)]);
        assert_eq!(
            p.values,
            vec![int(0), frac(1, 2), frac(5, 6), frac(5, 6), frac(1, 2), frac(3, 2)]
        );
        assert_eq!(p.unit_word(), None);

        let p = slope_vector(&gv("0,0,1,0,0"));
        assert_eq!(p.slopes, [-1, 1, 1, 1, -1].map(int).to_vec());
        assert_eq!(p.values, [0, -1, 0, 1, 2, 1].map(int).to_vec());

        let p = slope_vector(&gv("1,1,1,1,1"));
        assert_eq!(p.slopes, [1, -1, 1, -1, 1].map(int).to_vec());
    }

    #[test]
    fn vertices_small_n() {
        let q1 = enumerate_vertices(1).unwrap();
        assert_eq!(q1.vertices, vec![cv(&[0]), cv(&[1])]);

        let q2 = enumerate_vertices(2).unwrap();
        assert_eq!(
            q2.vertices,
            vec![cv(&[0, 0, 0]), cv(&[0, 0, 1]), cv(&[1, 0, 0]), cv(&[1, 0, 1]), cv(&[1, 1, 1])]
        );
        assert_eq!(q2.interior().cloned().collect::<Vec<_>>(), vec![cv(&[1, 0, 1])]);

        assert!(matches!(
            enumerate_vertices(11),
            Err(BallotError::CapExceeded { cap: 10, .. })
        ));
    }

    #[test]
    fn worked_bijection_pair() {
        assert_eq!(vertex_to_bbs(&cv(&[0, 0, 1, 0, 0])).unwrap(), bits("110111011"));
        assert_eq!(bbs_to_vertex(&bits("110111011")).unwrap(), cv(&[0, 0, 1, 0, 0]));
        assert_eq!(vertex_to_bbs(&cv(&[1, 0, 1])).unwrap(), bits("1111111"));
        assert_eq!(bbs_to_vertex(&bits("1111111")).unwrap(), cv(&[1, 0, 1]));
        // [1,1,1]: α = [1,0,1,1,1,0,1], slopes [1,1,1,-1,1,1,1]
        let b = vertex_to_bbs(&cv(&[1, 1, 1])).unwrap();
        assert_eq!(b, bits("1110111"));
        assert!(is_bbs(&b));
    }

    #[test]
    fn bijection_rejects_bad_inputs() {
        assert!(vertex_to_bbs(&cv(&[0, 1, 0])).is_err());
        assert!(bbs_to_vertex(&bits("111")).is_err());
        assert!(bbs_to_vertex(&bits("111111")).is_err());
        assert!(bbs_to_vertex(&bits("1101011")).is_ok());
        assert!(bbs_to_vertex(&bits("1001111")).is_err());
    }

    #[test]
    fn round_trip_length_nine() {
        for b in enumerate_bbs(9).unwrap() {
            let v = bbs_to_vertex(&b).unwrap();
            assert_eq!(vertex_to_bbs(&v).unwrap(), b);
        }
    }

    #[test]
    fn interior_examples() {
        assert_eq!(interior_vertex_to_bbs(&cv(&[1, 0, 1])).unwrap(), bits("111"));
        let t3 = enumerate_vertices(3).unwrap();
        let mut words: Vec<BitSequence> =
            t3.interior().map(|v| interior_vertex_to_bbs(v).unwrap()).collect();
        words.sort();
        assert_eq!(words, enumerate_bbs(5).unwrap());
        let err = interior_vertex_to_bbs(&cv(&[0, 0, 1, 0, 0])).unwrap_err();
        assert!(err.to_string().contains("boundary"), "{err}");
        assert!(interior_vertex_to_bbs(&cv(&[1])).is_err());
        assert_eq!(bbs_to_interior_vertex(&bits("11011")).unwrap(), cv(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn bound_examples() {
        let rows = verify_bounds(3, 7).unwrap();
        assert_eq!(rows.iter().map(|r| r.l).collect::<Vec<_>>(), [3, 5, 7]);
        assert_eq!(rows[0].lower, None);
        assert_eq!(rows[0].upper, frac(8, 3));
        assert_eq!(rows[1].lower, Some(int(2)));
        assert_eq!(rows[1].count, BigUint::from(2u32));
        assert_eq!(rows[2].lower, Some(frac(128, 48)));
        assert_eq!(rows[2].upper, frac(128, 7));
        assert!(rows.iter().all(BoundRow::passed));
        assert!(verify_bounds(9, 3).is_err());
    }
}
