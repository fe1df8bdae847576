#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stylodetect::text::Lexicons;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stylodetect"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed with {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Alphabetic vocabulary words, sorted so the pools are stable.
fn word_pool() -> Vec<String> {
    let mut words: Vec<String> = Lexicons::builtin()
        .vocabulary
        .iter()
        .filter(|w| w.len() >= 3 && w.chars().all(|c| c.is_ascii_lowercase()))
        .cloned()
        .collect();
    words.sort();
    words
}

/// A document whose style depends on its class, with overlap between the
/// classes: human-like text mixes short and long sentences and draws mostly
/// from a wide vocabulary; generated-like text keeps sentences close to one
/// length and leans on a small vocabulary.
fn document(rng: &mut ChaCha8Rng, pools: [&[String]; 3], generated: bool) -> String {
    let [function, narrow, wide] = pools;
    let (narrow_share, spread) = if generated {
        (rng.random_range(0.55..0.95), rng.random_range(1..=5))
    } else {
        (rng.random_range(0.0..0.45), rng.random_range(8..=16))
    };
    let mean_len = rng.random_range(15..=21);
    let target_words = rng.random_range(180..320);
    let mut words = 0;
    let mut text = String::new();
    while words < target_words {
        let len: usize = rng.random_range(mean_len - spread.min(mean_len - 3)..=mean_len + spread);
        for i in 0..len {
            let pool = if rng.random_bool(0.4) {
                function
            } else if rng.random_bool(narrow_share) {
                narrow
            } else {
                wide
            };
            let w = pool.choose(rng).unwrap();
            if i == 0 {
                let mut c = w.chars();
                text.push(c.next().unwrap().to_ascii_uppercase());
                text.push_str(c.as_str());
            } else {
                text.push(' ');
                text.push_str(w);
            }
            if i + 1 < len && i > 2 && rng.random_bool(0.08) {
                text.push(',');
            }
        }
        text.push_str(if rng.random_bool(0.1) { "? " } else { ". " });
        words += len;
    }
    text.trim_end().to_string()
}

/// Balanced labeled CSV (`id,text,generated`) of `n` documents.
pub fn synthetic_corpus(path: &Path, n: usize, seed: u64) -> PathBuf {
    let pool = word_pool();
    let wide = &pool[..pool.len().min(20_000)];
    // frequent-looking subset for the narrow vocabulary
    let narrow: Vec<String> = pool
        .iter()
        .step_by(pool.len() / 400)
        .take(400)
        .cloned()
        .collect();
    let mut function: Vec<String> = Lexicons::builtin().stop_words.iter().cloned().collect();
    function.sort();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut writer = csv::Writer::from_path(path).unwrap();
    writer.write_record(["id", "text", "generated"]).unwrap();
    for i in 0..n {
        let generated = i % 2 == 1;
        let doc = document(&mut rng, [&function, &narrow, wide], generated);
        writer
            .write_record([i.to_string(), doc, u8::from(generated).to_string()])
            .unwrap();
    }
    writer.flush().unwrap();
    path.to_path_buf()
}
