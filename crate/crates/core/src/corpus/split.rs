use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::labeled::LabeledRecord;
use crate::error::{Error, Result};
use crate::rng::child_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train: 0.8,
            validation: 0.1,
            test: 0.1,
            seed: 42,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let fractions = [self.train, self.validation, self.test];
        if fractions.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "split fractions must be positive, got {fractions:?}"
            )));
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "split fractions must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Splits {
    pub train: Vec<LabeledRecord>,
    pub validation: Vec<LabeledRecord>,
    pub test: Vec<LabeledRecord>,
}

/// Per-part counts for a class of `n` items. Each part first receives the
/// floor of its quota; the leftover items go to the parts with the largest
/// fractional remainders, with ties resolved toward test, then validation.
/// Every count ends up strictly within 1 of its exact quota.
pub fn allocate(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let quotas = fractions.map(|f| f * n as f64);
    let mut counts = quotas.map(|q| (q + 1e-9).floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut leftover = n.saturating_sub(assigned);
    let mut order = [2usize, 1, 0];
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - counts[a] as f64;
        let rb = quotas[b] - counts[b] as f64;
        rb.total_cmp(&ra)
    });
    for &part in order.iter().cycle() {
        if leftover == 0 {
            break;
        }
        counts[part] += 1;
        leftover -= 1;
    }
    counts
}

/// Stratified, seeded three-way split. Within each class, records are
/// shuffled with an RNG derived from the seed and the class, then cut into
/// contiguous train/validation/test runs.
pub fn stratified_split(records: &[LabeledRecord], spec: &SplitSpec) -> Result<Splits> {
    spec.validate()?;
    let fractions = [spec.train, spec.validation, spec.test];
    let mut splits = Splits::default();
    for class in [0u8, 1] {
        let mut members: Vec<&LabeledRecord> =
            records.iter().filter(|r| r.label == class).collect();
        if members.is_empty() {
            return Err(Error::Stratification(format!(
                "class {class} has no records"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(spec.seed, class as u64));
        members.shuffle(&mut rng);
        let [n_train, n_val, _] = allocate(members.len(), fractions);
        let (train, rest) = members.split_at(n_train);
        let (val, test) = rest.split_at(n_val);
        splits.train.extend(train.iter().map(|r| (*r).clone()));
        splits.validation.extend(val.iter().map(|r| (*r).clone()));
        splits.test.extend(test.iter().map(|r| (*r).clone()));
    }
    Ok(splits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn corpus(pos: usize, neg: usize) -> Vec<LabeledRecord> {
        (0..pos + neg)
            .map(|i| LabeledRecord {
                id: i,
                text: format!("doc {i}"),
                label: u8::from(i < pos),
            })
            .collect()
    }

    fn class_counts(rs: &[LabeledRecord]) -> (usize, usize) {
        let pos = rs.iter().filter(|r| r.label == 1).count();
        (pos, rs.len() - pos)
    }

    #[test]
    fn exact_proportions() {
        let s = stratified_split(&corpus(500, 500), &SplitSpec::default()).unwrap();
        assert_eq!(class_counts(&s.train), (400, 400));
        assert_eq!(class_counts(&s.validation), (50, 50));
        assert_eq!(class_counts(&s.test), (50, 50));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let records = corpus(37, 41);
        let a = stratified_split(&records, &SplitSpec::default()).unwrap();
        let b = stratified_split(&records, &SplitSpec::default()).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(
            &records,
            &SplitSpec {
                seed: 7,
                ..SplitSpec::default()
            },
        )
        .unwrap();
        assert_ne!(a.train, c.train);
    }

    #[test]
    fn nine_records_follow_rounding_rule() {
        // Quotas for 5 positives are (4, 0.5, 0.5) and for 4 negatives
        // (3.2, 0.4, 0.4); each has one leftover, tied between validation
        // and test, which goes to test.
        assert_eq!(allocate(5, [0.8, 0.1, 0.1]), [4, 0, 1]);
        assert_eq!(allocate(4, [0.8, 0.1, 0.1]), [3, 0, 1]);
        let s = stratified_split(&corpus(5, 4), &SplitSpec::default()).unwrap();
        assert_eq!(class_counts(&s.train), (4, 3));
        assert_eq!(class_counts(&s.validation), (0, 0));
        assert_eq!(class_counts(&s.test), (1, 1));
    }

    #[test]
    fn missing_class_is_an_error() {
        let only_pos = corpus(5, 0);
        assert!(matches!(
            stratified_split(&only_pos, &SplitSpec::default()),
            Err(Error::Stratification(_))
        ));
    }

    #[test]
    fn invalid_fractions() {
        let bad = SplitSpec {
            train: 0.9,
            validation: 0.1,
            test: 0.0,
            seed: 1,
        };
        assert!(stratified_split(&corpus(3, 3), &bad).is_err());
        let bad = SplitSpec {
            train: 0.5,
            validation: 0.1,
            test: 0.1,
            seed: 1,
        };
        assert!(stratified_split(&corpus(3, 3), &bad).is_err());
    }

    proptest! {
        #[test]
        fn counts_within_one_of_quota(n in 1usize..500, a in 1u32..98, b in 1u32..98) {
            prop_assume!(a + b < 100);
            let fractions = [a as f64 / 100.0, b as f64 / 100.0, (100 - a - b) as f64 / 100.0];
            let counts = allocate(n, fractions);
            prop_assert_eq!(counts.iter().sum::<usize>(), n);
            for (c, f) in counts.iter().zip(fractions) {
                prop_assert!((*c as f64 - f * n as f64).abs() < 1.0);
            }
        }

        #[test]
        fn split_is_a_partition(pos in 1usize..60, neg in 1usize..60, seed in any::<u64>()) {
            let records = corpus(pos, neg);
            let s = stratified_split(&records, &SplitSpec { seed, ..SplitSpec::default() }).unwrap();
            let mut ids: Vec<usize> = s.train.iter().chain(&s.validation).chain(&s.test).map(|r| r.id).collect();
            ids.sort_unstable();
            prop_assert_eq!(ids, (0..pos + neg).collect::<Vec<_>>());
        }
    }
}
