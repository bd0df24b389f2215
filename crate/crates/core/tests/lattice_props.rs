use planeperc_core::clusters::{self, Direction};
use planeperc_core::duality::complement;
use planeperc_core::lattice::{BondConfig, Boundary, Region};
use proptest::prelude::*;

fn region_strategy() -> impl Strategy<Value = Region> {
    prop_oneof![
        (3usize..9).prop_map(|n| Region::torus(n).unwrap()),
        (1usize..9, 1usize..9, any::<bool>()).prop_map(|(w, h, wired)| {
            let b = if wired { Boundary::Wired } else { Boundary::Free };
            Region::boxed(w, h, b).unwrap()
        }),
    ]
}

fn config_strategy() -> impl Strategy<Value = BondConfig> {
    region_strategy().prop_flat_map(|r| {
        proptest::collection::vec(any::<bool>(), r.edge_count())
            .prop_map(move |bits| BondConfig::from_bits(r, bits).unwrap())
    })
}

fn torus_config(max_n: usize) -> impl Strategy<Value = BondConfig> {
    (3usize..max_n).prop_flat_map(|n| {
        let r = Region::torus(n).unwrap();
        proptest::collection::vec(any::<bool>(), r.edge_count())
            .prop_map(move |bits| BondConfig::from_bits(r, bits).unwrap())
    })
}

proptest! {
    #[test]
    fn edge_index_is_a_bijection(r in region_strategy()) {
        let mut seen = vec![false; r.edge_count()];
        for i in 0..r.edge_count() {
            let e = r.edge_at(i).unwrap();
            prop_assert!(r.is_valid_edge(e));
            prop_assert_eq!(r.edge_index(e).unwrap(), i);
            prop_assert!(!seen[i]);
            seen[i] = true;
        }
        prop_assert!(r.edge_at(r.edge_count()).is_err());
    }

    #[test]
    fn incident_edges_match_degrees(r in region_strategy()) {
        let mut total = 0;
        for v in 0..r.vertex_count() {
            let edges = r.incident_edges(r.vertex_at(v)).unwrap();
            prop_assert!(edges.len() <= 4);
            if r.is_torus() {
                prop_assert_eq!(edges.len(), 4);
            }
            total += edges.len();
        }
        prop_assert_eq!(total, 2 * r.edge_count());
    }

    #[test]
    fn text_round_trip(c in config_strategy()) {
        prop_assert_eq!(BondConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn translation_is_a_group_action(
        c in torus_config(8),
        a in -10i64..10, b in -10i64..10, d in -10i64..10, e in -10i64..10,
    ) {
        let n = c.region().width() as i64;
        let two_step = c.translate(a, b).unwrap().translate(d, e).unwrap();
        prop_assert_eq!(two_step, c.translate(a + d, b + e).unwrap());
        prop_assert_eq!(c.translate(n, 0).unwrap(), c.clone());
        prop_assert_eq!(c.translate(0, 0).unwrap(), c);
    }

    // Restriction severs the wrap column, so a horizontal shift of the torus
    // agrees with a shift of the band only away from the cut: compare the
    // band columns that avoid the wrap edge both before and after shifting.
    #[test]
    fn restriction_commutes_with_horizontal_shift(
        c in torus_config(9), dx in 0i64..8, y0_frac in 0.0f64..1.0,
    ) {
        let n = c.region().width();
        let dx = dx % n as i64;
        let y0 = ((n as f64) * y0_frac) as usize % n;
        let left = c.translate(dx, 0).unwrap().halfplane_restrict(y0).unwrap();
        let right = c.halfplane_restrict(y0).unwrap();
        let band = right.region();
        for i in 0..band.edge_count() {
            let e = band.edge_at(i).unwrap();
            let shifted_x = e.base.x + dx as usize;
            let far_x = shifted_x + usize::from(e.dir == planeperc_core::lattice::Dir::Right);
            if far_x >= n {
                continue;
            }
            let moved = planeperc_core::lattice::EdgeRef::new(shifted_x, e.base.y, e.dir);
            prop_assert_eq!(left.edge_is_open(moved).unwrap(), right.is_open(i));
        }
    }

    #[test]
    fn restriction_keeps_edges_above_the_cut(c in torus_config(8), y0 in 0usize..8) {
        let n = c.region().width();
        let y0 = y0 % n;
        let band = c.halfplane_restrict(y0).unwrap();
        prop_assert_eq!(band.region().right_count(), (n - 1) * (n - y0));
        prop_assert_eq!(band.region().up_count(), n * (n - y0 - 1));
        for i in 0..band.len() {
            let e = band.region().edge_at(i).unwrap();
            let src = planeperc_core::lattice::EdgeRef::new(e.base.x, e.base.y + y0, e.dir);
            prop_assert_eq!(band.is_open(i), c.edge_is_open(src).unwrap());
        }
    }

    #[test]
    fn complement_is_an_involution(c in config_strategy()) {
        let cc = complement(&c);
        prop_assert_eq!(cc.open_count() + c.open_count(), c.len());
        prop_assert_eq!(complement(&cc), c);
    }

    #[test]
    fn opening_an_edge_is_monotone(c in config_strategy(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!c.is_empty());
        let i = pick.index(c.len());
        let mut opened = c.clone();
        opened.set(i, true);
        prop_assert!(
            clusters::label(&opened).cluster_count() <= clusters::label(&c).cluster_count()
        );
        if !c.region().is_torus() {
            for dir in [Direction::LeftRight, Direction::TopBottom] {
                if clusters::crossing(&c, dir).unwrap() {
                    prop_assert!(clusters::crossing(&opened, dir).unwrap());
                }
            }
        }
    }
}

#[test]
fn restricted_all_open_torus_is_all_open_band() {
    let t = Region::torus(6).unwrap();
    for y0 in 0..6 {
        let band = BondConfig::all_open(t).halfplane_restrict(y0).unwrap();
        assert_eq!(band.open_count(), band.len());
    }
}

#[test]
fn box_restriction_at_zero_is_identity() {
    let r = Region::free_box(5, 4).unwrap();
    let mut c = BondConfig::closed(r);
    for i in (0..c.len()).step_by(3) {
        c.set(i, true);
    }
    assert_eq!(c.halfplane_restrict(0).unwrap(), c);
}

#[test]
fn translating_a_box_is_rejected() {
    let c = BondConfig::closed(Region::free_box(4, 4).unwrap());
    assert!(c.translate(1, 0).is_err());
}
