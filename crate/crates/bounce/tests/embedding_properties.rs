//! Cross-module embedding properties over randomized spaces and split
//! chains.

use bounce::embedding::Embedding;
use bounce::space::{hamming_distance, InputSpace, Value, VariableKind, VariableSpec};
use bounce::TargetPoint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn variable_strategy() -> impl Strategy<Value = VariableSpec> {
    prop_oneof![
        Just(VariableSpec::Binary),
        (2u32..6).prop_map(|cardinality| VariableSpec::Categorical { cardinality }),
        (2u32..6).prop_map(|cardinality| VariableSpec::Ordinal { cardinality }),
        (any::<i8>(), 1u8..100).prop_map(|(lo, width)| VariableSpec::Continuous {
            lower: f64::from(lo),
            upper: f64::from(lo) + f64::from(width),
        }),
    ]
}

fn space_strategy() -> impl Strategy<Value = InputSpace> {
    proptest::collection::vec(variable_strategy(), 1..24)
        .prop_map(|vars| InputSpace::new(vars).unwrap())
}

fn sample_target<R: Rng>(e: &Embedding, rng: &mut R) -> TargetPoint {
    TargetPoint::new(
        e.bins()
            .iter()
            .map(|bin| match bin.kind() {
                VariableKind::Continuous => Value::Real(rng.gen_range(-1.0..=1.0)),
                VariableKind::Binary => Value::Sign(if rng.gen::<bool>() { 1 } else { -1 }),
                _ => Value::Label(rng.gen_range(1..=bin.cardinality().unwrap())),
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_chains_preserve_partition_and_projection(
        space in space_strategy(),
        seed in 0u64..10_000,
        splits in 1usize..6,
        b in 1usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = space.kinds_present().len();
        let d_init = kinds.max(1).min(space.dim());
        let mut embedding = Embedding::initial(&space, d_init, false, &mut rng).unwrap();
        let target = sample_target(&embedding, &mut rng);
        let reference = embedding.project_up(&target);
        space.validate_point(&reference).unwrap();

        let mut lifted = target;
        for _ in 0..splits {
            let next = embedding.split(b, &mut rng);
            // partition: every input dimension in exactly one homogeneous bin
            let mut seen = vec![0usize; space.dim()];
            for bin in next.bins() {
                prop_assert!(!bin.members().is_empty());
                for &m in bin.members() {
                    prop_assert_eq!(space.variable(m).kind(), bin.kind());
                    seen[m] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
            // monotone dimensionality, capped at D
            prop_assert!(next.target_dim() >= embedding.target_dim());
            prop_assert!(next.target_dim() <= space.dim());
            if embedding.target_dim() < space.dim() {
                prop_assert!(next.target_dim() > embedding.target_dim());
            }

            lifted = next.lift(&embedding, &lifted).unwrap();
            let up = next.project_up(&lifted);
            // discrete coordinates identical, continuous within 1e-12
            prop_assert_eq!(hamming_distance(&up, &reference).unwrap(), 0);
            for (a, b) in up.values.iter().zip(&reference.values) {
                if let (Value::Real(x), Value::Real(y)) = (a, b) {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
            }
            embedding = next;
        }
    }

    #[test]
    fn low_sequency_constant_targets_project_to_constants(
        n_bin in 1usize..10,
        n_cat in 1usize..6,
        seed in 0u64..1000,
    ) {
        let mut vars = vec![VariableSpec::Binary; n_bin];
        vars.extend(std::iter::repeat_n(VariableSpec::Categorical { cardinality: 4 }, n_cat));
        let space = InputSpace::new(vars).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let embedding = Embedding::initial(&space, 2, true, &mut rng).unwrap();
        let all_one = TargetPoint::new(
            embedding
                .bins()
                .iter()
                .map(|bin| match bin.kind() {
                    VariableKind::Binary => Value::Sign(1),
                    _ => Value::Label(1),
                })
                .collect(),
        );
        let up = embedding.project_up(&all_one);
        for v in &up.values {
            match v {
                Value::Sign(s) => prop_assert_eq!(*s, 1),
                Value::Label(l) => prop_assert_eq!(*l, 1),
                Value::Real(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn embedding_text_form_round_trips(space in space_strategy(), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = space.kinds_present().len();
        let embedding =
            Embedding::initial(&space, kinds.min(space.dim()), false, &mut rng).unwrap();
        let parsed = Embedding::from_text(&embedding.to_text()).unwrap();
        prop_assert_eq!(&embedding, &parsed);
        let split = embedding.split(2, &mut rng);
        let parsed_split = Embedding::from_text(&split.to_text()).unwrap();
        prop_assert_eq!(split, parsed_split);
    }
}
