use std::path::Path;

use stylodetect::convnet::ConvNetModel;
use stylodetect::corpus::{read_model, Classifier};
use stylodetect::features::FEATURES;
use stylodetect::forest::ForestModel;

use super::Context;
use crate::failure::Failure;

/// 2205185 -> "2,205,185"
fn grouped(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn describe_convnet(net: &ConvNetModel) {
    println!("model: convnet");
    println!(
        "{:<10} {:<16} {:<18} {:<18} {:>10}  activation",
        "layer", "type", "input", "output", "params"
    );
    for l in net.param_audit() {
        println!(
            "{:<10} {:<16} {:<18} {:<18} {:>10}  {}",
            l.name,
            l.kind,
            l.input_shape,
            l.output_shape,
            grouped(l.params),
            l.activation
        );
    }
    println!("total parameters: {}", grouped(net.param_count()));
    println!("threshold: {}", net.threshold);
}

fn describe_forest(forest: &ForestModel) {
    let depths: Vec<usize> = forest.trees.iter().map(|t| t.depth()).collect();
    let leaves: usize = forest.trees.iter().map(|t| t.leaf_count()).sum();
    println!("model: forest");
    println!("trees: {}", forest.trees.len());
    println!(
        "depth: min {} mean {:.2} max {}",
        depths.iter().min().unwrap_or(&0),
        depths.iter().sum::<usize>() as f64 / depths.len().max(1) as f64,
        depths.iter().max().unwrap_or(&0)
    );
    println!(
        "mean leaves per tree: {:.2}",
        leaves as f64 / forest.trees.len().max(1) as f64
    );
    println!("features per split: {}", forest.feature_subset_size);
    println!(
        "max depth: {}",
        forest
            .max_depth
            .map_or_else(|| "unlimited".to_string(), |d| d.to_string())
    );
    println!("threshold: {}", forest.threshold);
    let importances = forest.feature_importances();
    let mut ranked: Vec<(usize, f64)> = importances
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v > 0.0)
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    println!("\ntop feature importances");
    for (rank, (i, v)) in ranked.iter().take(10).enumerate() {
        let name = FEATURES.get(*i).map_or("?", |f| f.0);
        println!("{:>2}  {name:<38} {v:.6}", rank + 1);
    }
}

pub fn run(ctx: &Context, path: Option<&Path>, fresh_convnet: bool) -> Result<(), Failure> {
    if fresh_convnet {
        describe_convnet(&ConvNetModel::build(ctx.seed));
        return Ok(());
    }
    let path = path.ok_or_else(|| Failure::input("give a model file or --fresh-convnet"))?;
    let model = read_model(path)?;
    println!("schema hash: {:016x}", model.classifier.schema_hash());
    println!("seed: {}", model.classifier.seed());
    println!(
        "standardizer: {}",
        model.standardizer.as_ref().map_or_else(
            || "none".to_string(),
            |s| format!("fitted on {} rows", s.fitted_on)
        )
    );
    match &model.classifier {
        Classifier::ConvNet(net) => describe_convnet(net),
        Classifier::Forest(forest) => describe_forest(forest),
    }
    Ok(())
}
