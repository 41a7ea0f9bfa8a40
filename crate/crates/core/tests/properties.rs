use num_bigint::BigInt;
use proptest::prelude::*;

use ballotope::geom::{rotate, ShiftIndex};
use ballotope::linalg::{bareiss_determinant, constraint_system, flat_elimination};
use ballotope::rational::{format_rational, parse_rational, Rational};
use ballotope::*;

fn bits(max_len: usize) -> impl Strategy<Value = BitSequence> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(|b| BitSequence::new(b).unwrap())
}

/// Ballot sequences built by concatenating a random word between `1^k` blocks
/// until the result qualifies, so that positives are well represented.
fn ballot_sequence() -> impl Strategy<Value = BitSequence> {
    (prop::collection::vec(any::<bool>(), 0..24), 1usize..8).prop_map(|(mid, pad)| {
        let mut pad = pad;
        loop {
            let mut b = vec![true; pad];
            b.extend(&mid);
            b.extend(vec![true; pad]);
            let seq = BitSequence::new(b).unwrap();
            if is_bbs(&seq) {
                return seq;
            }
            pad += 1;
        }
    })
}

fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> + Clone {
    (-max_num..=max_num, 1..=max_den).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn non_negative(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> + Clone {
    (0..=max_num, 1..=max_den).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn gap_vector(entry: impl Strategy<Value = Rational> + Clone) -> impl Strategy<Value = GapVector> {
    (1usize..=6).prop_flat_map(move |n| {
        prop::collection::vec(entry.clone(), 2 * n - 1).prop_map(|e| GapVector::new(e).unwrap())
    })
}

fn cube_vertex(max_n: usize) -> impl Strategy<Value = CubeVertex> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u8..=1, 2 * n - 1).prop_map(|e| CubeVertex::new(e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ballot_iff_culminating_path(b in bits(40)) {
        prop_assert_eq!(is_bbs(&b), bbs_to_path(&b).is_culminating());
    }

    #[test]
    fn ballot_sequences_are_closed_under_reversal_and_appending_one(b in ballot_sequence()) {
        let mut rev = b.bits().to_vec();
        rev.reverse();
        prop_assert!(is_bbs(&BitSequence::new(rev).unwrap()));
        let mut longer = b.bits().to_vec();
        longer.push(true);
        prop_assert!(is_bbs(&BitSequence::new(longer).unwrap()));
        prop_assert!(b.bit(1) && b.bit(b.len()));
    }

    #[test]
    fn ballot_sequences_have_full_sumsets(b in ballot_sequence()) {
        let r = sumset_fullness(&b);
        prop_assert!(r.sumset_full && r.diffset_full);
    }

    #[test]
    fn rational_text_round_trips(r in rational(10_000, 10_000)) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn cone_is_scale_invariant(v in gap_vector(rational(8, 6)), p in 1i64..100, q in 1i64..100) {
        let alpha = Rational::new(p.into(), q.into());
        prop_assert_eq!(membership(&v).in_cone, membership(&v.scale(&alpha)).in_cone);
        prop_assert_eq!(membership(&v).in_cone_interior, membership(&v.scale(&alpha)).in_cone_interior);
    }

    #[test]
    fn polytope_lies_in_cone_and_cube(v in gap_vector(rational(8, 6))) {
        let r = membership(&v);
        prop_assert_eq!(r.in_polytope, r.in_cone && v.in_unit_cube());
        prop_assert_eq!(r.in_cone, r.violated.is_empty());
        if r.in_cone_interior {
            prop_assert!(r.in_cone);
        }
    }

    #[test]
    fn interval_round_trip(v in gap_vector(non_negative(20, 7))) {
        let fam = intervals_from_gaps(&v).unwrap();
        prop_assert_eq!(fam.len(), v.dim().div_ceil(2));
        prop_assert_eq!(gaps_from_intervals(&fam), v);
    }

    #[test]
    fn gerrymander_condition_matches_cone(v in gap_vector(non_negative(12, 4))) {
        let fam = intervals_from_gaps(&v).unwrap();
        prop_assert_eq!(is_gerrymander_measure(&fam), membership(&v).in_cone);
    }

    #[test]
    fn rotations_compose(v in gap_vector(rational(5, 3)), a in 0usize..11, b in 0usize..11) {
        let m = v.dim();
        let (a, b) = (a % m, b % m);
        let twice = rotate(&rotate(&v, ShiftIndex::new(a, m).unwrap()), ShiftIndex::new(b, m).unwrap());
        prop_assert_eq!(twice, rotate(&v, ShiftIndex::new((a + b) % m, m).unwrap()));
    }

    #[test]
    fn every_necklace_has_a_cut(v in gap_vector(non_negative(9, 5))) {
        let cut = cut_necklace(&v).unwrap();
        prop_assert!(!cut.cuts.is_empty());
        prop_assert!(cut.cuts.contains(&cut.argmin_cut));
        prop_assert_eq!(cut.canonical, *cut.cuts.iter().min().unwrap());
        for &k in &cut.cuts {
            prop_assert!(membership(&rotate(&v, k)).in_cone);
        }
        if cut.generic {
            prop_assert!(cut.unique);
        }
    }

    #[test]
    fn cuts_follow_rotation(v in gap_vector(non_negative(9, 5)), s in 0usize..11) {
        let m = v.dim();
        let s = s % m;
        let shifted = rotate(&v, ShiftIndex::new(s, m).unwrap());
        let mut expected: Vec<usize> = cut_necklace(&v).unwrap().cuts.iter().map(|k| (k.get() + m - s) % m).collect();
        expected.sort_unstable();
        let got: Vec<usize> = cut_necklace(&shifted).unwrap().cuts.iter().map(|k| k.get()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn partition_regions_cover_the_cube(v in gap_vector(non_negative(6, 6).prop_filter("in cube", |r| *r <= Rational::from_integer(1.into())))) {
        let r = classify_partition(&v).unwrap();
        prop_assert!(!r.regions.is_empty());
        prop_assert!(r.interior_regions.len() <= 1);
    }

    #[test]
    fn slope_path_is_consistent(v in gap_vector(rational(6, 6))) {
        let p = slope_vector(&v);
        prop_assert_eq!(p.values.len(), v.dim() + 1);
        prop_assert_eq!(&p.values[0], &Rational::from_integer(0.into()));
        for t in 1..p.values.len() {
            prop_assert_eq!(&p.values[t] - &p.values[t - 1], p.slopes[t - 1].clone());
        }
        let padded = slope_vector(&pad_alpha(&v)).values;
        let two = Rational::from_integer(2.into());
        for k in 0..p.values.len() {
            prop_assert_eq!(padded[k + 2].clone(), &p.values[k] + &two);
        }
    }

    #[test]
    fn vertex_maps_invert_each_other(v in cube_vertex(6)) {
        let in_polytope = membership(&v.to_gap_vector()).in_polytope;
        match vertex_to_bbs(&v) {
            Ok(b) => {
                prop_assert!(in_polytope && is_bbs(&b));
                prop_assert_eq!(bbs_to_vertex(&b).unwrap(), v.clone());
            }
            Err(_) => prop_assert!(!in_polytope),
        }
        let interior = membership(&v.to_gap_vector()).in_cone_interior && v.entries().len() >= 3;
        prop_assert_eq!(interior_vertex_to_bbs(&v).is_ok(), interior);
    }

    #[test]
    fn constraint_subsets_are_unimodular(n in 2usize..=5, seed in any::<u64>()) {
        let sys = constraint_system(n);
        let m = sys.dim();
        let mut rows: Vec<usize> = (0..sys.len()).collect();
        // deterministic shuffle from the seed
        let mut s = seed | 1;
        for i in (1..rows.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            rows.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let sub: Vec<Vec<i64>> = rows[..m].iter().map(|&r| sys.rows[r].clone()).collect();
        let trace = flat_elimination(&sub).unwrap();
        prop_assert_eq!(trace.determinant, bareiss_determinant(&sub));
        if !trace.singular {
            prop_assert_eq!(trace.determinant.abs(), 1);
            prop_assert!(trace.all_flat);
            prop_assert_eq!(trace.elimination_determinant, Some(trace.determinant));
        } else {
            prop_assert_eq!(trace.determinant, 0);
        }
    }

    #[test]
    fn elimination_agrees_with_bareiss_on_flat_matrices(
        size in 1usize..=5,
        entries in prop::collection::vec(-1i64..=1, 25),
    ) {
        let m: Vec<Vec<i64>> = (0..size).map(|r| entries[r * size..(r + 1) * size].to_vec()).collect();
        let trace = flat_elimination(&m).unwrap();
        prop_assert_eq!(trace.determinant, bareiss_determinant(&m));
        prop_assert_eq!(trace.singular, trace.determinant == 0);
        if let Some(d) = trace.elimination_determinant {
            prop_assert_eq!(d, trace.determinant);
        }
    }
}
