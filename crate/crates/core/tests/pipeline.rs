use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stylodetect::corpus::{
    model_from_bytes, model_to_bytes, parse_conllu, stratified_split, Classifier, LabeledRecord,
    ModelFile, SplitSpec,
};
use stylodetect::eval::EvalReport;
use stylodetect::features::{
    assemble_feature_vector, extract_texts, feature_index, fit_standardizer, FeatureGroup,
    FEATURE_COUNT,
};
use stylodetect::forest::{best_split, fit_forest, ForestParams};
use stylodetect::text::{Document, Lexicons};

const TREEBANK: &str = "\
# newdoc id = 1
# text = The dog barked.
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tbarked\tbark\tVERB\t_\t_\t0\troot\t_\t_
4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_

# text = A very small cat slept on the warm mat.
1\tA\ta\tDET\t_\t_\t4\tdet\t_\t_
2\tvery\tvery\tADV\t_\t_\t3\tadvmod\t_\t_
3\tsmall\tsmall\tADJ\t_\t_\t4\tamod\t_\t_
4\tcat\tcat\tNOUN\t_\t_\t5\tnsubj\t_\t_
5\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_
6\ton\ton\tADP\t_\t_\t9\tcase\t_\t_
7\tthe\tthe\tDET\t_\t_\t9\tdet\t_\t_
8\twarm\twarm\tADJ\t_\t_\t9\tamod\t_\t_
9\tmat\tmat\tNOUN\t_\t_\t5\tobl\t_\t_
10\t.\t.\tPUNCT\t_\t_\t5\tpunct\t_\t_

";

#[test]
fn annotated_document_has_every_feature() {
    let sentences = parse_conllu(TREEBANK).unwrap();
    assert_eq!(sentences.len(), 2);
    assert!(sentences.iter().all(|s| s.doc_id.as_deref() == Some("1")));
    let doc = Document::from_conllu(&sentences);
    let v = assemble_feature_vector(&doc, Lexicons::builtin());
    assert_eq!(v.missing_indices(), Vec::<usize>::new());
    // "A" -> "cat" -> "slept" (root).
    assert_eq!(sentences[1].depth(0), 2);
}

#[test]
fn raw_text_leaves_only_dependency_features_missing() {
    // 12 words and 2 full stops.
    let lex = Lexicons::builtin();
    let v = &extract_texts(
        &["The dog barked. A very small cat slept on the warm mat."],
        lex,
        1,
    )[0];
    let deps: Vec<usize> = FeatureGroup::Dependency.range().collect();
    assert_eq!(v.missing_indices(), deps);
    assert!(feature_index("token_count").is_some_and(|i| v.get(i) == Some(14.0)));
}

fn gini(counts: [i64; 2]) -> Ratio<i64> {
    let n = counts[0] + counts[1];
    Ratio::from_integer(1) - Ratio::new(counts[0].pow(2) + counts[1].pow(2), n * n)
}

#[test]
fn chosen_split_minimises_exact_weighted_gini() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(2..12);
        let rows: Vec<[f64; 3]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.random_range(0..4) as f64))
            .collect();
        let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let mut best: Option<Ratio<i64>> = None;
        for f in 0..3 {
            for t in [0.5, 1.5, 2.5] {
                let side = |left: bool| {
                    let mut c = [0i64; 2];
                    for (r, &y) in rows.iter().zip(&labels) {
                        if (r[f] <= t) == left {
                            c[y as usize] += 1;
                        }
                    }
                    c
                };
                let (l, r) = (side(true), side(false));
                let (nl, nr) = (l[0] + l[1], r[0] + r[1]);
                if nl == 0 || nr == 0 {
                    continue;
                }
                let w = Ratio::new(nl, n as i64) * gini(l) + Ratio::new(nr, n as i64) * gini(r);
                best = Some(best.map_or(w, |b| b.min(w)));
            }
        }
        let idx: Vec<usize> = (0..n).collect();
        let ones = labels.iter().filter(|&&y| y == 1).count() as i64;
        let parent = gini([n as i64 - ones, ones]);
        let choice = best_split(&rows, &labels, &idx, &[0, 1, 2]);
        match (choice, best) {
            (Some(c), Some(b)) => {
                assert!(b < parent);
                let gain = parent - b;
                let exact = *gain.numer() as f64 / *gain.denom() as f64;
                assert!((c.gain - exact).abs() < 1e-12, "{} vs {exact}", c.gain);
            }
            (None, b) => assert!(b.is_none_or(|b| b >= parent)),
            (Some(c), None) => panic!("split {c:?} on unsplittable data"),
        }
    }
}

#[test]
fn split_train_serialize_and_evaluate() {
    let lex = Lexicons::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let records: Vec<LabeledRecord> = (0..80)
        .map(|id| {
            let label = (id % 2) as u8;
            let sentences: Vec<String> = (0..rng.random_range(4..8))
                .map(|_| {
                    let len = if label == 1 {
                        6
                    } else {
                        rng.random_range(2..18)
                    };
                    let words: Vec<&str> = (0..len)
                        .map(|_| {
                            ["the", "cat", "ran", "far", "quietly", "over", "hills"]
                                [rng.random_range(0..7)]
                        })
                        .collect();
                    format!("{}.", words.join(" "))
                })
                .collect();
            LabeledRecord {
                id,
                text: sentences.join(" "),
                label,
            }
        })
        .collect();
    let splits = stratified_split(
        &records,
        &SplitSpec {
            seed: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(
        splits.train.len() + splits.validation.len() + splits.test.len(),
        80
    );

    let featurize = |rs: &[LabeledRecord]| {
        let texts: Vec<&str> = rs.iter().map(|r| r.text.as_str()).collect();
        extract_texts(&texts, lex, 2)
    };
    let train = featurize(&splits.train);
    let test = featurize(&splits.test);
    let state = fit_standardizer(&train).unwrap();
    let x: Vec<[f64; FEATURE_COUNT]> = train
        .iter()
        .map(|v| state.standardize(v).unwrap())
        .collect();
    let y: Vec<u8> = splits.train.iter().map(|r| r.label).collect();
    let forest = fit_forest(
        &x,
        &y,
        &ForestParams {
            n_estimators: 25,
            ..Default::default()
        },
    )
    .unwrap();

    let file = ModelFile::new(Classifier::Forest(forest.clone()), Some(state.clone()));
    let bytes = model_to_bytes(&file);
    let restored = model_from_bytes(&bytes).unwrap();
    let Classifier::Forest(copy) = &restored.classifier else {
        panic!("wrong kind")
    };

    let probs: Vec<f64> = test
        .iter()
        .map(|v| {
            let row = state.standardize(v).unwrap();
            let p = forest.predict_proba(&row);
            assert_eq!(p.to_bits(), copy.predict_proba(&row).to_bits());
            p
        })
        .collect();
    let labels: Vec<u8> = splits.test.iter().map(|r| r.label).collect();
    let report = EvalReport::compute(&labels, &probs, 0.5).unwrap();
    assert!(report.metrics.accuracy.unwrap() >= 0.75, "{report:?}");
}
