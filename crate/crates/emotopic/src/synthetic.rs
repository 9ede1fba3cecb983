//! Deterministic synthetic corpora: token-level corpora with known class
//! structure for model tests, and a surface-level emotion tweet dataset
//! (diacritics, suffixes, stopwords, junk tokens) that exercises the full
//! preprocessing path. Everything derives from an explicit seed.

use crate::corpus::{Corpus, RawDocument, Vocabulary};
use crate::rng::{derive_seed, Rng};

/// Token-level corpus of `groups` classes with fully disjoint
/// vocabularies: group `g` draws uniformly from its own `words_per_group`
/// terms. Labels are `class0..classN` in group order.
pub fn separable_corpus(
    groups: usize,
    docs_per_group: usize,
    words_per_group: usize,
    tokens_per_doc: usize,
    seed: u64,
) -> Corpus {
    let mut rng = Rng::new(derive_seed(seed, "separable"));
    let v = groups * words_per_group;
    let terms: Vec<String> = (0..groups)
        .flat_map(|g| (0..words_per_group).map(move |w| format!("g{g}w{w}")))
        .collect();

    let mut docs = Vec::with_capacity(groups * docs_per_group);
    let mut labels = Vec::with_capacity(groups * docs_per_group);
    for _ in 0..docs_per_group {
        for g in 0..groups {
            let base = g * words_per_group;
            docs.push(
                (0..tokens_per_doc)
                    .map(|_| base + rng.below(words_per_group))
                    .collect::<Vec<_>>(),
            );
            labels.push(g);
        }
    }

    let df = count_df(&docs, v);
    Corpus {
        docs,
        vocab: Vocabulary::from_parts(terms, df),
        labels: Some(labels),
        class_names: (0..groups).map(|g| format!("class{g}")).collect(),
    }
}

/// A class-structured corpus plus the keyword terms of each class.
#[derive(Debug, Clone)]
pub struct NoisyCorpus {
    pub corpus: Corpus,
    pub class_keywords: Vec<Vec<String>>,
    pub noise_terms: Vec<String>,
}

/// Token-level corpus where each class owns a disjoint keyword set and all
/// classes share a pool of noise terms. Every document carries at least
/// two keyword tokens; the rest are keywords with probability
/// `keyword_prob`, noise otherwise.
pub fn noisy_class_corpus(
    classes: usize,
    docs_per_class: usize,
    keywords_per_class: usize,
    noise_count: usize,
    keyword_prob: f64,
    seed: u64,
) -> NoisyCorpus {
    let mut rng = Rng::new(derive_seed(seed, "noisy"));
    let keyword_total = classes * keywords_per_class;
    let v = keyword_total + noise_count;

    let mut terms: Vec<String> = (0..classes)
        .flat_map(|c| (0..keywords_per_class).map(move |w| format!("k{c}w{w}")))
        .collect();
    terms.extend((0..noise_count).map(|n| format!("noise{n}")));

    let mut docs = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..docs_per_class {
        for class in 0..classes {
            let keyword_base = class * keywords_per_class;
            let len = 8 + rng.below(7);
            let mut doc = Vec::with_capacity(len);
            let mut keywords = 0;
            for _ in 0..len {
                if rng.next_f64() < keyword_prob {
                    doc.push(keyword_base + rng.below(keywords_per_class));
                    keywords += 1;
                } else {
                    doc.push(keyword_total + rng.below(noise_count));
                }
            }
            for token in doc.iter_mut().take(2) {
                if keywords < 2 {
                    *token = keyword_base + rng.below(keywords_per_class);
                    keywords += 1;
                }
            }
            docs.push(doc);
            labels.push(class);
        }
    }

    let df = count_df(&docs, v);
    let class_keywords = (0..classes)
        .map(|c| {
            (0..keywords_per_class)
                .map(|w| format!("k{c}w{w}"))
                .collect()
        })
        .collect();
    NoisyCorpus {
        corpus: Corpus {
            docs,
            vocab: Vocabulary::from_parts(terms.clone(), df),
            labels: Some(labels),
            class_names: (0..classes).map(|c| format!("class{c}")).collect(),
        },
        class_keywords,
        noise_terms: terms[keyword_total..].to_vec(),
    }
}

fn count_df(docs: &[Vec<usize>], v: usize) -> Vec<u32> {
    let mut df = vec![0u32; v];
    for doc in docs {
        let mut seen = std::collections::BTreeSet::new();
        for &t in doc {
            if seen.insert(t) {
                df[t] += 1;
            }
        }
    }
    df
}

/// (surface form, stem after normalize + suffix strip)
type Lexeme = (&'static str, &'static str);

const HAPPY: [Lexeme; 8] = [
    ("mutlu", "mutlu"),
    ("neşe", "nese"),
    ("güzel", "guzel"),
    ("harika", "harika"),
    ("sevinç", "sevinc"),
    ("keyif", "keyif"),
    ("gülümse", "gulumse"),
    ("yaşa", "yasa"),
];
const SAD: [Lexeme; 8] = [
    ("üzgün", "uzgun"),
    ("hüzün", "huzun"),
    ("keder", "keder"),
    ("mutsuz", "mutsuz"),
    ("yalnız", "yalniz"),
    ("kayıp", "kayip"),
    ("üzül", "uzul"),
    ("gözyaşı", "gozyasi"),
];
const ANGRY: [Lexeme; 8] = [
    ("kızgın", "kizgin"),
    ("öfke", "ofke"),
    ("sinir", "sinir"),
    ("nefret", "nefret"),
    ("bağır", "bagir"),
    ("kavga", "kavga"),
    ("delir", "delir"),
    ("çatla", "catla"),
];
const FEAR: [Lexeme; 8] = [
    ("korku", "korku"),
    ("ürküt", "urkut"),
    ("panik", "panik"),
    ("dehşet", "dehset"),
    ("ürper", "urper"),
    ("çığlık", "ciglik"),
    ("korkut", "korkut"),
    ("titre", "titre"),
];
const CONFUSED: [Lexeme; 8] = [
    ("şaşkın", "saskin"),
    ("şaşır", "sasir"),
    ("acaba", "acaba"),
    ("garip", "garip"),
    ("tuhaf", "tuhaf"),
    ("karışık", "karisik"),
    ("hayret", "hayret"),
    ("afalla", "afalla"),
];

const NOISE: [&str; 30] = [
    "bugün", "yarın", "şimdi", "sonra", "biraz", "insan", "hava", "şehir", "yol", "ev", "okul",
    "film", "müzik", "kitap", "telefon", "araba", "para", "zaman", "hafta", "sabah", "akşam",
    "gece", "kahve", "çay", "yemek", "deniz", "park", "masa", "kapı", "pencere",
];

const STOPWORD_SURFACES: [&str; 10] =
    ["ve", "bir", "bu", "çok", "ama", "için", "gibi", "daha", "şu", "de"];

const JUNK: [&str; 3] = ["rt", "via", "http"];

const SUFFIXES: [&str; 6] = ["lar", "ler", "yum", "sun", "um", "im"];

/// The emotion classes of the surface generator, in label order.
pub fn emotion_class_names(classes: usize) -> Vec<String> {
    ["mutlu", "uzgun", "kizgin", "korku", "saskin"]
        .iter()
        .take(classes)
        .map(|s| s.to_string())
        .collect()
}

/// The stems each class's keywords normalize to; what an n-stage run is
/// expected to keep.
pub fn emotion_keyword_stems(classes: usize) -> Vec<Vec<String>> {
    [&HAPPY, &SAD, &ANGRY, &FEAR, &CONFUSED]
        .iter()
        .take(classes)
        .map(|lex| lex.iter().map(|&(_, stem)| stem.to_string()).collect())
        .collect()
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Raw labeled tweets for up to five emotion classes, interleaved by
/// class. Texts mix diacritic spellings, inflectional suffixes, stopwords,
/// retweet junk, punctuation, and case noise; after the bundled
/// preprocessing configuration they reduce to clean keyword/noise streams.
pub fn emotion_dataset(classes: usize, docs_per_class: usize, seed: u64) -> Vec<RawDocument> {
    assert!((1..=5).contains(&classes), "up to five emotion classes");
    let lexicons: [&[Lexeme; 8]; 5] = [&HAPPY, &SAD, &ANGRY, &FEAR, &CONFUSED];
    let class_names = emotion_class_names(classes);
    let mut rng = Rng::new(derive_seed(seed, "emotion-dataset"));

    let mut docs = Vec::with_capacity(classes * docs_per_class);
    let mut id = 0;
    for _ in 0..docs_per_class {
        for class in 0..classes {
            let lexicon = lexicons[class];
            let len = 8 + rng.below(7);
            let mut stems: Vec<&str> = Vec::with_capacity(len);
            let mut keywords = 0;
            for _ in 0..len {
                if rng.next_f64() < 0.7 {
                    stems.push(lexicon[rng.below(8)].0);
                    keywords += 1;
                } else {
                    stems.push(NOISE[rng.below(NOISE.len())]);
                }
            }
            for stem in stems.iter_mut().take(2) {
                if keywords < 2 {
                    *stem = lexicon[rng.below(8)].0;
                    keywords += 1;
                }
            }

            let mut words: Vec<String> = Vec::new();
            if rng.next_f64() < 0.1 {
                words.push("RT".to_string());
            }
            for stem in stems {
                if rng.next_f64() < 0.2 {
                    words.push(STOPWORD_SURFACES[rng.below(STOPWORD_SURFACES.len())].to_string());
                }
                if rng.next_f64() < 0.05 {
                    words.push(JUNK[rng.below(JUNK.len())].to_string());
                }
                let mut word = stem.to_string();
                if rng.next_f64() < 0.3 {
                    word.push_str(SUFFIXES[rng.below(SUFFIXES.len())]);
                }
                if rng.next_f64() < 0.15 {
                    word = capitalize(&word);
                }
                if rng.next_f64() < 0.2 {
                    word.push_str([",", "!", ".", "...", "?"][rng.below(5)]);
                }
                words.push(word);
            }

            docs.push(RawDocument {
                id,
                text: words.join(" "),
                label: Some(class_names[class].clone()),
            });
            id += 1;
        }
    }
    docs
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Render raw documents as the `text,label` dataset format.
pub fn dataset_to_csv(docs: &[RawDocument]) -> String {
    let mut out = String::from("text,label\n");
    for doc in docs {
        out.push_str(&csv_field(&doc.text));
        out.push(',');
        out.push_str(doc.label.as_deref().unwrap_or(""));
        out.push('\n');
    }
    out
}

/// The word lists the bundled preprocessing configuration ships with.
pub fn bundled_stopwords() -> String {
    "# Turkish stopwords, normalized\nve\nbir\nbu\nsu\no\nda\nde\nki\nmi\nmu\nne\nama\nicin\ngibi\ndaha\nen\ncok\naz\nben\nsen\nbiz\nsiz\nonlar\nsey\nher\nhic\nya\nise\nile\n".to_string()
}

pub fn bundled_noise_words() -> String {
    "# tokens with no emotional content\nrt\nvia\nhttp\nhttps\namp\n".to_string()
}

pub fn bundled_suffixes() -> String {
    "# inflectional suffixes, stripped longest-first\nlar\nler\nyum\nsun\num\nim\n".to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, read_dataset_csv, PreprocessConfig};
    use crate::text::{read_term_set, SuffixStemmer};
    use std::collections::HashSet;
    use std::sync::Arc;

    #[test]
    fn separable_groups_use_disjoint_terms() {
        let corpus = separable_corpus(2, 10, 5, 8, 42);
        assert_eq!(corpus.num_docs(), 20);
        assert_eq!(corpus.num_terms(), 10);
        let labels = corpus.labels().unwrap();
        for (doc, &label) in corpus.docs.iter().zip(labels) {
            for &t in doc {
                assert_eq!(t / 5, label);
            }
        }
    }

    #[test]
    fn noisy_corpus_guarantees_keywords_per_doc() {
        let generated = noisy_class_corpus(3, 20, 8, 30, 0.7, 9);
        let corpus = &generated.corpus;
        assert_eq!(corpus.num_terms(), 3 * 8 + 30);
        let keyword_total = 24;
        for doc in &corpus.docs {
            let keywords = doc.iter().filter(|&&t| t < keyword_total).count();
            assert!(keywords >= 2);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = emotion_dataset(3, 5, 7);
        let b = emotion_dataset(3, 5, 7);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.text, y.text);
            assert_eq!(x.label, y.label);
        }
    }

    #[test]
    fn surface_dataset_preprocesses_to_known_stems() {
        let docs = emotion_dataset(3, 30, 11);
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("data.csv");
        std::fs::write(&csv_path, dataset_to_csv(&docs)).unwrap();
        let stop_path = dir.path().join("stop.txt");
        std::fs::write(&stop_path, bundled_stopwords()).unwrap();
        let noise_path = dir.path().join("noise.txt");
        std::fs::write(&noise_path, bundled_noise_words()).unwrap();
        let suffix_path = dir.path().join("suffix.txt");
        std::fs::write(&suffix_path, bundled_suffixes()).unwrap();

        let raw = read_dataset_csv(&csv_path).unwrap();
        let config = PreprocessConfig::new(
            read_term_set(&stop_path).unwrap(),
            read_term_set(&noise_path).unwrap(),
            Arc::new(SuffixStemmer::from_file(&suffix_path).unwrap()),
        );
        let (corpus, report) = build_corpus(&raw, &config).unwrap();

        assert!(report.empty_doc_ids.is_empty());
        let known: HashSet<String> = emotion_keyword_stems(3)
            .into_iter()
            .flatten()
            .chain(NOISE.iter().map(|n| crate::text::normalize(n)))
            .collect();
        for term in corpus.vocab.terms() {
            assert!(known.contains(term), "unexpected term '{term}'");
        }
        assert_eq!(corpus.class_names, vec!["mutlu", "uzgun", "kizgin"]);
    }

    #[test]
    fn bundled_files_match_the_generator() {
        // data/ is produced by examples/generate_dataset.rs with the
        // defaults below; regenerate it if this drifts
        let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        let expected = dataset_to_csv(&emotion_dataset(3, 100, 2024));
        assert_eq!(
            std::fs::read_to_string(data.join("synthetic_3class.csv")).unwrap(),
            expected
        );
        assert_eq!(
            std::fs::read_to_string(data.join("stopwords_tr.txt")).unwrap(),
            bundled_stopwords()
        );
        assert_eq!(
            std::fs::read_to_string(data.join("noise_words.txt")).unwrap(),
            bundled_noise_words()
        );
        assert_eq!(
            std::fs::read_to_string(data.join("suffixes_tr.txt")).unwrap(),
            bundled_suffixes()
        );
    }

    #[test]
    fn csv_rendering_quotes_punctuation() {
        let docs = vec![RawDocument {
            id: 0,
            text: "mutlu, harika!".into(),
            label: Some("mutlu".into()),
        }];
        assert_eq!(
            dataset_to_csv(&docs),
            "text,label\n\"mutlu, harika!\",mutlu\n"
        );
    }
}
