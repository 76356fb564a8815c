use gicee::gaussmi::{conditional_mi_timeshared, Receiver, SignalSet};
use gicee::model::{ChannelParams, PowerState, Preset, TimeSharedAllocation};
use gicee::polytope::{lp_solve, LpOutcome};
use gicee::region::{build_system, region_for_allocation, region_union, RateVar, RegionSpec};
use gicee::schemes::Variant;
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = ChannelParams> {
    (0.0..3.0f64, 0.0..3.0f64, 0.0..2.0f64, 0.0..2.0f64).prop_map(|(c12, c21, c1e, c2e)| {
        ChannelParams {
            c12,
            c21,
            c1e,
            c2e,
            p1: 10.0,
            p2: 10.0,
        }
    })
}

/// Single states within budget: each user's four components share its 10.
fn state() -> impl Strategy<Value = PowerState> {
    let split = || {
        proptest::array::uniform4(0.0..1.0f64).prop_map(|w| {
            let total: f64 = w.iter().sum::<f64>() + 1e-3;
            w.map(|x| 10.0 * x / total)
        })
    };
    (split(), split()).prop_map(|(a, b)| PowerState {
        pc1: a[0],
        ps1: a[1],
        po1: a[2],
        pj1: a[3],
        pc2: b[0],
        ps2: b[1],
        po2: b[2],
        pj2: b[3],
    })
}

fn allocation() -> impl Strategy<Value = TimeSharedAllocation> {
    proptest::collection::vec((0.1..1.0f64, state()), 1..=3)
        .prop_map(|s| TimeSharedAllocation::normalized(s).unwrap())
}

const RANDOMIZATION: [RateVar; 6] = [
    RateVar::XC1,
    RateVar::XS1,
    RateVar::XO1,
    RateVar::XC2,
    RateVar::XS2,
    RateVar::XO2,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constraint_counts(ch in channel(), alloc in allocation()) {
        let system = build_system(&ch, &alloc).unwrap();
        prop_assert_eq!(system.inequalities().len(), 92);
        prop_assert_eq!(system.equalities().len(), 1);
    }

    #[test]
    fn randomization_saturates_eavesdropper(ch in channel(), alloc in allocation(), w in 0.0..1.0f64) {
        let system = build_system(&ch, &alloc).unwrap();
        let mut objective = vec![0.0; 10];
        objective[RateVar::RC1.index()] = w;
        objective[RateVar::RS1.index()] = w;
        objective[RateVar::RC2.index()] = 1.0 - w;
        objective[RateVar::RS2.index()] = 1.0 - w;
        if let LpOutcome::Optimal { point, .. } = lp_solve(&system, &objective).unwrap() {
            let total: f64 = RANDOMIZATION.iter().map(|v| point[v.index()]).sum();
            let eve = conditional_mi_timeshared(&ch, &alloc, Receiver::Ye, SignalSet::FULL).unwrap();
            prop_assert!((total - eve).abs() <= 1e-9, "{} vs {}", total, eve);
            prop_assert!(system.min_slack(&point) >= -1e-9);
        }
    }

    #[test]
    fn swapping_users_swaps_region(ch in channel(), st in state()) {
        let alloc = TimeSharedAllocation::single(st);
        let mirrored = TimeSharedAllocation::single(st.swapped());
        let a = region_for_allocation(&ch, &alloc, 16).unwrap();
        let b = region_for_allocation(&ch.swapped(), &mirrored, 16).unwrap().swapped();
        prop_assert_eq!(a.is_empty(), b.is_empty());
        prop_assert!(a.max_support_excess(&b, 64) <= 1e-9 || a.is_empty());
        prop_assert!(b.max_support_excess(&a, 64) <= 1e-9 || b.is_empty());
    }
}

#[test]
fn allocation_families_nest() {
    for preset in [Preset::Fig2, Preset::Fig3] {
        let ch = preset.channel();
        let union = |v| region_union(&RegionSpec::new(ch, v, 3, 16)).unwrap();
        let (ncp, r3, full) = (
            union(Variant::Ncp),
            union(Variant::R3),
            union(Variant::Full),
        );
        assert!(
            ncp.dominated_by(&r3, 128, 1e-9),
            "{preset}: ncp not within r3"
        );
        assert!(
            r3.dominated_by(&full, 128, 1e-9),
            "{preset}: r3 not within full"
        );
    }
}

#[test]
fn symmetric_channel_gives_symmetric_union() {
    let fig2 = Preset::Fig2.channel();
    for variant in [Variant::Ncp, Variant::R3, Variant::BOrCp] {
        let f = region_union(&RegionSpec::new(fig2, variant, 5, 16)).unwrap();
        let s = f.swapped();
        assert!(f.max_support_excess(&s, 128).abs() <= 1e-9, "{variant}");
        assert!(s.max_support_excess(&f, 128).abs() <= 1e-9, "{variant}");
    }
}

#[test]
fn fig3_common_binning_point() {
    // hand-solved LP value gamma(11) - gamma(6.6)
    let expected = 0.329_481_541_082_466_5;
    let alloc = TimeSharedAllocation::single(PowerState {
        pc1: 10.0,
        pc2: 1.0,
        ..Default::default()
    });
    let f = region_for_allocation(&Preset::Fig3.channel(), &alloc, 64).unwrap();
    assert!((f.max_r2() - expected).abs() <= 1e-9, "{}", f.max_r2());
    assert!(f
        .points
        .iter()
        .any(|p| p.r1 == 0.0 && (p.r2 - expected).abs() <= 1e-9));
}
