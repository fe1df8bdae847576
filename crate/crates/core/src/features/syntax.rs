use super::stats::{mean, ratio, std_dev};
use crate::text::Document;

const CLAUSAL_RELATIONS: &[&str] = &[
    "ccomp",
    "xcomp",
    "advcl",
    "acl",
    "csubj",
    "relcl",
    "acl:relcl",
];

/// Group D: share of tokens carrying each UPOS tag.
pub fn pos_proportions(doc: &Document) -> [Option<f64>; 17] {
    let Some(tags) = doc.pos_tags.as_ref().filter(|t| !t.is_empty()) else {
        return [None; 17];
    };
    let mut counts = [0usize; 17];
    for tag in tags {
        counts[tag.index()] += 1;
    }
    counts.map(|c| ratio(c, tags.len()))
}

/// Edges from `i` to its sentence root, following 1-based heads.
fn depth(heads: &[usize], i: usize) -> usize {
    let mut d = 0;
    let mut h = heads[i];
    while h != 0 && h <= heads.len() && d <= heads.len() {
        d += 1;
        h = heads[h - 1];
    }
    d
}

/// Group E; present only when the document carries dependency heads.
pub fn dependency_stats(doc: &Document) -> [Option<f64>; 6] {
    let Some(heads) = doc.dep_heads.as_ref() else {
        return [None; 6];
    };
    if doc.sentences.is_empty() {
        return [None; 6];
    }
    let mut distances = Vec::new();
    let mut sentence_max_depth = Vec::with_capacity(doc.sentences.len());
    let mut clausal = 0usize;
    for range in &doc.sentences {
        let heads = &heads[range.clone()];
        for (i, &h) in heads.iter().enumerate() {
            if h != 0 {
                distances.push((i + 1).abs_diff(h) as f64);
            }
        }
        let deepest = (0..heads.len()).map(|i| depth(heads, i)).max().unwrap_or(0);
        sentence_max_depth.push(deepest as f64);
        if let Some(rels) = doc.dep_rels.as_ref() {
            clausal += rels[range.clone()]
                .iter()
                .filter(|r| CLAUSAL_RELATIONS.contains(&r.as_str()))
                .count();
        }
    }
    let adjacent = distances.iter().filter(|&&d| d == 1.0).count();
    [
        mean(&distances),
        std_dev(&distances),
        ratio(adjacent, distances.len()),
        mean(&sentence_max_depth),
        sentence_max_depth.iter().copied().reduce(f64::max),
        ratio(clausal, doc.sentences.len()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::conllu::parse_conllu;
    use crate::text::{Lexicons, Upos};

    fn parse(src: &str) -> Document {
        Document::from_conllu(&parse_conllu(src).unwrap())
    }

    const DOG: &str = "1\tThe\t_\tDET\t_\t_\t2\tdet\t_\t_\n\
                       2\tdog\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_\n\
                       3\tbarks\t_\tVERB\t_\t_\t0\troot\t_\t_\n";

    #[test]
    fn pos_examples() {
        let mut doc = Document::from_text("x x x x", Lexicons::builtin());
        doc.pos_tags = Some(vec![Upos::Det, Upos::Noun, Upos::Verb, Upos::Punct]);
        let d = pos_proportions(&doc);
        for tag in [Upos::Det, Upos::Noun, Upos::Verb, Upos::Punct] {
            assert_eq!(d[tag.index()], Some(0.25));
        }
        assert_eq!(d.iter().flatten().sum::<f64>(), 1.0);
        doc.pos_tags = Some(vec![Upos::Noun, Upos::Noun, Upos::Noun, Upos::Verb]);
        let d = pos_proportions(&doc);
        assert_eq!(d[Upos::Noun.index()], Some(0.75));
        assert_eq!(d[Upos::Verb.index()], Some(0.25));
        doc.pos_tags = None;
        assert_eq!(pos_proportions(&doc), [None; 17]);
    }

    #[test]
    fn dog_barks_trace() {
        let e = dependency_stats(&parse(DOG));
        assert_eq!(e[0], Some(1.0));
        assert_eq!(e[1], Some(0.0));
        assert_eq!(e[2], Some(1.0));
        assert_eq!(e[3], Some(2.0));
        assert_eq!(e[4], Some(2.0));
        assert_eq!(e[5], Some(0.0));
    }

    #[test]
    fn single_token_sentence() {
        let e = dependency_stats(&parse("1\tYes\t_\tINTJ\t_\t_\t0\troot\t_\t_\n"));
        assert_eq!(e[0], None);
        assert_eq!(e[3], Some(0.0));
        assert_eq!(e[4], Some(0.0));
    }

    #[test]
    fn mixed_sentences_and_clausal_relations() {
        let second = "1\tI\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n\
                      2\tthink\t_\tVERB\t_\t_\t0\troot\t_\t_\n\
                      3\tit\t_\tPRON\t_\t_\t4\tnsubj\t_\t_\n\
                      4\tworks\t_\tVERB\t_\t_\t2\tccomp\t_\t_\n";
        let e = dependency_stats(&parse(&format!("{DOG}\n{second}")));
        // distances: [1, 1] and [1, 1, 2]
        assert_eq!(e[0], Some(6.0 / 5.0));
        assert_eq!(e[2], Some(4.0 / 5.0));
        // max depths 2 and 2
        assert_eq!(e[3], Some(2.0));
        assert_eq!(e[5], Some(0.5));
    }

    #[test]
    fn raw_text_has_no_dependencies() {
        let doc = Document::from_text("The dog barks.", Lexicons::builtin());
        assert_eq!(dependency_stats(&doc), [None; 6]);
    }
}
