use gsfl::costmodel::{self, Algorithm};
use gsfl::fedlearn::{self, ClientUpdate, ModelParams};
use gsfl::protocol::{WireError, WireMessage};
use proptest::prelude::*;

fn wire_message() -> impl Strategy<Value = WireMessage> {
    (
        any::<u16>(),
        any::<u16>(),
        any::<u128>(),
        prop::collection::vec(any::<u8>(), 0..512),
        prop::collection::vec(any::<u8>(), 0..400),
        any::<u8>(),
        any::<u32>(),
    )
        .prop_map(|(gid, mid, rand, payload, gs, ttl, ts)| WireMessage {
            gid,
            mid,
            rand,
            payload,
            gs,
            ttl,
            ts,
        })
}

fn update_set() -> impl Strategy<Value = Vec<ClientUpdate>> {
    (1usize..8).prop_flat_map(|d| {
        prop::collection::vec(
            (prop::collection::vec(-100.0f64..100.0, d), 1u32..10_000).prop_map(
                |(weights, sample_count)| ClientUpdate {
                    weights,
                    sample_count,
                },
            ),
            1..16,
        )
    })
}

proptest! {
    #[test]
    fn wire_round_trip(msg in wire_message()) {
        let bytes = msg.to_bytes().unwrap();
        prop_assert_eq!(bytes.len(), msg.encoded_len());
        prop_assert_eq!(WireMessage::from_bytes(&bytes).unwrap(), msg);
    }

    #[test]
    fn wire_rejects_truncation_and_trailing(msg in wire_message(), cut in 1usize..32, extra in 1usize..8) {
        let bytes = msg.to_bytes().unwrap();
        let cut = cut.min(bytes.len());
        prop_assert_eq!(WireMessage::from_bytes(&bytes[..bytes.len() - cut]), Err(WireError::Truncated));
        let mut longer = bytes.clone();
        longer.extend(std::iter::repeat_n(0u8, extra));
        prop_assert_eq!(WireMessage::from_bytes(&longer), Err(WireError::TrailingBytes(extra)));
    }

    #[test]
    fn aggregate_is_order_invariant(updates in update_set(), rotate in 0usize..16) {
        let mut shuffled = updates.clone();
        let k = rotate % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let a = fedlearn::aggregate(&updates).unwrap();
        let b = fedlearn::aggregate(&shuffled).unwrap();
        let bits = |m: &ModelParams| m.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn aggregate_stays_in_coordinate_hull(updates in update_set()) {
        let avg = fedlearn::aggregate(&updates).unwrap();
        for (j, v) in avg.weights.iter().enumerate() {
            let lo = updates.iter().map(|u| u.weights[j]).fold(f64::INFINITY, f64::min);
            let hi = updates.iter().map(|u| u.weights[j]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(*v >= lo - 1e-9 && *v <= hi + 1e-9);
        }
        let p: f64 = fedlearn::aggregation_weights(&updates).unwrap().iter().sum();
        prop_assert!((p - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn update_bytes_round_trip(weights in prop::collection::vec(any::<f64>(), 0..32), count in 1u32..) {
        let u = ClientUpdate { weights, sample_count: count };
        let back = ClientUpdate::from_bytes(&u.to_bytes()).unwrap();
        let bits = |w: &[f64]| w.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back.weights), bits(&u.weights));
        prop_assert_eq!(back.sample_count, count);
    }

    #[test]
    fn gsfl_signaling_closed_form(n in 1u64..500, extra in 0u64..500, t in 1u64..2000) {
        let m = n + extra;
        prop_assert_eq!(costmodel::signaling(Algorithm::Gsfl, t, m, n).unwrap(), 4 * m + t * (2 * n + 1));
    }
}
