use std::collections::BTreeSet;

use proptest::prelude::*;

use pbd_core::algebra::{affine_space, projective_plane, steiner_triple_system, transversal_design};
use pbd_core::closure::{is_strong_subspace, is_subspace, span, strong_span};
use pbd_core::constructions::{delete_point, truncate};
use pbd_core::designs::{overlap_threshold, solve_overlap, verify_gdd, GroupDesign, PBDesign, Point};
use pbd_core::format::DesignFile;

fn small_pbds() -> Vec<PBDesign> {
    vec![
        affine_space(3, 2).unwrap(),
        affine_space(2, 3).unwrap(),
        affine_space(4, 2).unwrap(),
        affine_space(3, 3).unwrap(),
        projective_plane(2).unwrap(),
        projective_plane(3).unwrap(),
        projective_plane(4).unwrap(),
        steiner_triple_system(13).unwrap(),
        steiner_triple_system(15).unwrap(),
    ]
}

fn small_gdds() -> Vec<GroupDesign> {
    let mut out = vec![
        transversal_design(3, 3).unwrap(),
        transversal_design(4, 5).unwrap(),
        transversal_design(5, 4).unwrap(),
    ];
    out.extend(small_pbds().iter().map(|d| delete_point(d, 0).unwrap()));
    out
}

fn pick(v: usize, raw: &[usize]) -> Vec<Point> {
    let set: BTreeSet<Point> = raw.iter().map(|r| (r % v) as Point).collect();
    set.into_iter().collect()
}

proptest! {
    #[test]
    fn span_is_a_closure(which in 0usize..9, raw in prop::collection::vec(0usize..1000, 1..6), extra in prop::collection::vec(0usize..1000, 0..3)) {
        let d = &small_pbds()[which];
        let y = pick(d.v(), &raw);
        let mut z = y.clone();
        z.extend(pick(d.v(), &extra));
        let sy = span(d, &y).unwrap();
        let sz = span(d, &z).unwrap();
        prop_assert!(y.iter().all(|p| sy.contains(p)));
        prop_assert_eq!(&span(d, &sy).unwrap(), &sy);
        prop_assert!(sy.iter().all(|p| sz.contains(p)));
        prop_assert!(is_subspace(d, &sy));
    }

    #[test]
    fn strong_span_is_a_closure(which in 0usize..12, raw in prop::collection::vec(0usize..1000, 1..5), extra in prop::collection::vec(0usize..1000, 0..3)) {
        let g = &small_gdds()[which];
        let y = pick(g.v(), &raw);
        let mut z = y.clone();
        z.extend(pick(g.v(), &extra));
        let sy = strong_span(g, &y).unwrap();
        let sz = strong_span(g, &z).unwrap();
        prop_assert!(y.iter().all(|p| sy.contains(p)));
        prop_assert_eq!(&strong_span(g, &sy).unwrap(), &sy);
        prop_assert!(sy.iter().all(|p| sz.contains(p)));
        prop_assert!(is_strong_subspace(g, &sy));
    }

    #[test]
    fn overlap_lands_in_range(a in 1u64..50, c in 1u64..50, extra in 0u64..10_000) {
        let y = overlap_threshold(a, c) + extra;
        let o = solve_overlap(y, a, c).unwrap();
        prop_assert_eq!(o.n * a + o.x, y);
        prop_assert!(c <= o.x && o.x <= o.n);
    }

    #[test]
    fn text_format_round_trips(which in 0usize..12, keep in 1usize..4) {
        let g = &small_gdds()[which];
        let last = g.groups().len() - 1;
        let keep = keep.min(g.groups()[last].len());
        let t = truncate(g, last, keep).unwrap();
        prop_assert!(verify_gdd(&t).valid);
        let file = DesignFile::from(t);
        let text = file.to_text();
        let back = DesignFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.to_json(), file.to_json());
    }
}
