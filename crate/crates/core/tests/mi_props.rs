use gicee::gamma;
use gicee::gaussmi::{
    conditional_mi, mi_covariance_oracle, receiver_view, Receiver, ReceiverView, SignalIndex,
    SignalSet,
};
use gicee::model::{ChannelParams, PowerState};
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = ChannelParams> {
    (0.0..3.0f64, 0.0..3.0f64, 0.0..3.0f64, 0.0..3.0f64).prop_map(|(c12, c21, c1e, c2e)| {
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

fn state() -> impl Strategy<Value = PowerState> {
    proptest::array::uniform8(prop_oneof![Just(0.0), 0.0..10.0f64]).prop_map(|p| PowerState {
        pc1: p[0],
        ps1: p[1],
        po1: p[2],
        pj1: p[3],
        pc2: p[4],
        ps2: p[5],
        po2: p[6],
        pj2: p[7],
    })
}

fn receiver() -> impl Strategy<Value = Receiver> {
    prop_oneof![Just(Receiver::Y1), Just(Receiver::Y2), Just(Receiver::Ye)]
}

fn decodable_subset(receiver: Receiver, bits: u8) -> SignalSet {
    SignalSet::from_bits(bits).intersection(receiver.decodable())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn closed_form_matches_oracle(ch in channel(), st in state(), rx in receiver(), bits in any::<u8>()) {
        let s = decodable_subset(rx, bits);
        let closed = conditional_mi(&receiver_view(&ch, &st, rx), s).unwrap();
        let oracle = mi_covariance_oracle(&ch, &st, rx, s).unwrap();
        prop_assert!((closed - oracle).abs() <= 1e-12, "{} vs {}", closed, oracle);
    }

    #[test]
    fn monotone_in_power_and_floor(
        ch in channel(),
        st in state(),
        rx in receiver(),
        bits in any::<u8>(),
        pick in 0usize..6,
        bump in 0.0..5.0f64,
        raise in 0.0..5.0f64,
    ) {
        let s = decodable_subset(rx, bits);
        let view = receiver_view(&ch, &st, rx);
        let base = conditional_mi(&view, s).unwrap();
        let mut louder: ReceiverView = view;
        if let Some(p) = louder.effective[pick].as_mut() {
            *p += bump;
        }
        prop_assert!(conditional_mi(&louder, s).unwrap() >= base);
        let mut noisier = view;
        noisier.floor += raise;
        prop_assert!(conditional_mi(&noisier, s).unwrap() <= base);
    }

    #[test]
    fn normalized_monotone_submodular(ch in channel(), st in state(), rx in receiver()) {
        let view = receiver_view(&ch, &st, rx);
        let f = |s: SignalSet| conditional_mi(&view, s).unwrap();
        prop_assert_eq!(f(SignalSet::EMPTY), 0.0);
        let subsets: Vec<SignalSet> = rx.decodable().subsets().collect();
        for &a in &subsets {
            for &b in &subsets {
                let union = f(a.union(b));
                let meet = f(a.intersection(b));
                prop_assert!(union + meet <= f(a) + f(b) + 1e-12);
                if a.is_subset_of(b) {
                    prop_assert!(f(a) <= f(b));
                }
            }
        }
    }

    #[test]
    fn disjoint_union_is_sum_of_powers(ch in channel(), st in state(), rx in receiver(), x in any::<u8>(), y in any::<u8>()) {
        let a = decodable_subset(rx, x);
        let b = decodable_subset(rx, y).difference(a);
        let view = receiver_view(&ch, &st, rx);
        let power = |s: SignalSet| -> f64 { s.iter().map(|sig: SignalIndex| view.effective[sig.position()].unwrap()).sum() };
        let direct = conditional_mi(&view, a.union(b)).unwrap();
        let expected = gamma((power(a) + power(b)) / view.floor).unwrap();
        prop_assert!((direct - expected).abs() <= 1e-15, "{} vs {}", direct, expected);
    }

    #[test]
    fn undecodable_signals_rejected(ch in channel(), st in state()) {
        let y1 = receiver_view(&ch, &st, Receiver::Y1);
        prop_assert!(conditional_mi(&y1, SignalSet::of(&[SignalIndex::S2])).is_err());
        let y2 = receiver_view(&ch, &st, Receiver::Y2);
        prop_assert!(conditional_mi(&y2, SignalSet::of(&[SignalIndex::S1])).is_err());
    }
}
