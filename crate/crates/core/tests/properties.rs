//! Property tests for the invariants each module promises.

#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use narrative_arcs::arcs::{
    apply_window, build_character_arc, build_relation_arcs, savgol_coefficients, FilterKind, WindowPolicy, WindowSpec,
};
use narrative_arcs::characters::{cluster_names, CharacterConfig, Gender, Mention, MentionKind};
use narrative_arcs::corpus::{clean, CleaningConfig, Segmenter};
use narrative_arcs::evalkit::{accuracy, fleiss_kappa, label_shifts, shift_confusion, Shift, ShiftLabel};
use narrative_arcs::events::{EventTrigger, TriggerSource};
use narrative_arcs::participants::{dedupe_sentence_events, EventRecord};
use narrative_arcs::scoring::{circumstance, CircumstanceParams, EmotionLabel, EmotionScore, EmotionWeights};

use common::*;

fn filter_spec() -> impl Strategy<Value = WindowSpec> {
    (0usize..3, 1usize..8, 0usize..6).prop_map(|(k, half, p)| {
        let n = 2 * half + 1;
        match k {
            0 => WindowSpec::new(FilterKind::RollingMean, n, None),
            1 => WindowSpec::new(FilterKind::TriangularMean, n, None),
            _ => WindowSpec::savgol(n, p.min(n - 1)),
        }
        .unwrap()
    })
}

#[test]
fn savgol_weights_are_symmetric_and_sum_to_one() {
    for n in (1..=21).step_by(2) {
        for p in 0..=5.min(n - 1) {
            let w = savgol_coefficients(n, p, 0).unwrap();
            assert_eq!(w.len(), n);
            let sum: f64 = w.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "n={n} p={p}: sum {sum}");
            for k in 0..n {
                assert!((w[k] - w[n - 1 - k]).abs() < 1e-12, "n={n} p={p}: asymmetric at {k}");
            }
        }
    }
}

#[test]
fn savgol_matches_exact_rational_oracle() {
    for n in (3..=21).step_by(2) {
        for p in 0..=5.min(n - 1) {
            let w = savgol_coefficients(n, p, 0).unwrap();
            for (a, b) in w.iter().zip(savgol_oracle(n, p)) {
                assert!((a - to_f64(&b)).abs() < 1e-9, "n={n} p={p}");
            }
        }
    }
    // odd and even orders share weights in pairs: (2k, 2k+1)
    for n in [7, 9, 11] {
        assert_eq!(savgol_oracle(n, 2), savgol_oracle(n, 3));
    }
}

proptest! {
    #[test]
    fn savgol_reproduces_polynomials(
        half in 1usize..10,
        p in 0usize..6,
        coef in prop::collection::vec(-3.0f64..3.0, 6),
        extra in 0usize..20,
    ) {
        let n = 2 * half + 1;
        let p = p.min(n - 1);
        let len = n + extra;
        let series: Vec<f64> = (0..len)
            .map(|i| {
                let x = i as f64 / len as f64;
                coef[..=p].iter().rev().fold(0.0, |acc, c| acc * x + c)
            })
            .collect();
        let out = apply_window(&series, &WindowSpec::savgol(n, p).unwrap());
        for i in half..len - half {
            prop_assert!((out.values[i] - series[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn windows_preserve_constants_and_commute_with_offsets(
        spec in filter_spec(),
        series in prop::collection::vec(-100.0f64..100.0, 1..60),
        c in -1e3f64..1e3,
    ) {
        let out = apply_window(&series, &spec);
        prop_assert_eq!(out.values.len(), series.len());
        prop_assert_eq!(out.passthrough, series.len() < spec.size());
        let flat = apply_window(&vec![c; series.len()], &spec);
        for v in &flat.values {
            prop_assert!((v - c).abs() < 1e-9);
        }
        let moved = apply_window(&series.iter().map(|v| v + c).collect::<Vec<_>>(), &spec);
        for (a, b) in out.values.iter().zip(&moved.values) {
            prop_assert!((a + c - b).abs() < 1e-9);
        }
    }

    #[test]
    fn short_series_pass_through(spec in filter_spec(), series in prop::collection::vec(-5.0f64..5.0, 1..15)) {
        let out = apply_window(&series, &spec);
        if series.len() < spec.size() {
            prop_assert!(out.passthrough);
            prop_assert_eq!(out.values, series);
        }
    }
}

fn weights_from(betas: &[f64]) -> EmotionWeights {
    let mut map = BTreeMap::new();
    for (i, name) in EMOTION_NAMES.iter().enumerate() {
        let beta = if *name == "neutral" { 0.0 } else { betas[i] };
        map.insert(name.parse::<EmotionLabel>().unwrap(), beta);
    }
    EmotionWeights::new(map).unwrap()
}

fn emotion_set() -> impl Strategy<Value = Vec<(usize, f64)>> {
    prop::collection::btree_map(0..EMOTION_NAMES.len(), 0.001f64..0.999, 0..6).prop_map(|m| m.into_iter().collect())
}

fn scores(set: &[(usize, f64)]) -> Vec<EmotionScore> {
    set.iter()
        .map(|&(i, c)| EmotionScore {
            label: EMOTION_NAMES[i].parse().unwrap(),
            confidence: c,
        })
        .collect()
}

proptest! {
    #[test]
    fn circumstance_matches_direct_evaluation(
        s in 0.001f64..0.999,
        alpha in 0.001f64..0.999,
        betas in prop::collection::vec(-2.0f64..=2.0, 28),
        set in emotion_set(),
    ) {
        let params = CircumstanceParams::new(alpha, weights_from(&betas)).unwrap();
        let direct: BTreeMap<String, f64> = EMOTION_NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| ((*n).to_owned(), if *n == "neutral" { 0.0 } else { betas[i] }))
            .collect();
        let named: Vec<(&str, f64)> = set.iter().map(|&(i, c)| (EMOTION_NAMES[i], c)).collect();
        let got = circumstance(s, &scores(&set), &params).unwrap();
        prop_assert!((got - circumstance_direct(s, &named, alpha, &direct)).abs() <= 1e-12);
        let bound = alpha + 2.0 * set.iter().map(|(_, c)| c).sum::<f64>();
        prop_assert!(got.abs() <= bound + 1e-12);
    }

    #[test]
    fn circumstance_is_monotone(
        s1 in 0.001f64..0.999,
        s2 in 0.001f64..0.999,
        set in emotion_set(),
        extra in 0usize..27,
        c in 0.001f64..0.999,
    ) {
        let params = CircumstanceParams::default();
        let base = scores(&set);
        let t1 = circumstance(s1, &base, &params).unwrap();
        let t2 = circumstance(s2, &base, &params).unwrap();
        if s1 < s2 {
            prop_assert!(t1 < t2);
        }
        let label: EmotionLabel = EMOTION_NAMES[extra].parse().unwrap();
        let beta = params.weights.get(label).unwrap();
        let mut more = base.clone();
        more.push(EmotionScore { label, confidence: c });
        let t3 = circumstance(s1, &more, &params).unwrap();
        if beta > 0.0 {
            prop_assert!(t3 > t1);
        } else if beta < 0.0 {
            prop_assert!(t3 < t1);
        }
    }
}

fn record(
    event_id: usize,
    sentence: usize,
    actor: usize,
    experiencer: usize,
    s: f64,
    set: &[(usize, f64)],
) -> EventRecord {
    EventRecord {
        event_id,
        trigger: EventTrigger {
            event_id,
            token_index: event_id * 3,
            surface: "struck".into(),
            lemma: "strike".into(),
            sentence_index: sentence,
            realis: true,
            source: TriggerSource::Heuristic,
            annotation: None,
        },
        actor: Some(actor),
        experiencer: Some(experiencer),
        passive: false,
        self_relation: actor == experiencer,
        sentiment: s,
        emotions: scores(set),
    }
}

fn records() -> impl Strategy<Value = Vec<EventRecord>> {
    prop::collection::vec((0usize..4, 0usize..4, 0usize..3, 0.001f64..0.999, emotion_set()), 0..60).prop_map(|rows| {
        let mut sentence = 0;
        rows.into_iter()
            .enumerate()
            .map(|(i, (a, e, step, s, set))| {
                sentence += step.min(1);
                record(i, sentence, a, e, s, &set)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn character_arcs_are_the_union_of_relation_arcs(recs in records(), size in prop::option::of(0usize..4)) {
        let params = CircumstanceParams::default();
        let size = size.map(|h| 2 * h + 3);
        let policy = WindowPolicy { size, poly: size.map_or(3, |n| 3.min(n - 1)), ..WindowPolicy::default() };
        let relation = build_relation_arcs(&recs, &params, &policy).unwrap();
        for cluster in 0..4 {
            let arc = build_character_arc(cluster, &recs, &params, &policy).unwrap();
            let mut from_relations = Vec::new();
            let mut from_relations_exp = Vec::new();
            for (key, r) in &relation {
                for pt in &r.series.points {
                    if key.actor == cluster {
                        from_relations.push((pt.event_id, pt.raw_t.to_bits()));
                    }
                    if key.experiencer == cluster {
                        from_relations_exp.push((pt.event_id, pt.raw_t.to_bits()));
                    }
                }
            }
            from_relations.sort();
            from_relations_exp.sort();
            let actor: Vec<_> = arc.actor.points.iter().map(|p| (p.event_id, p.raw_t.to_bits())).collect();
            let exp: Vec<_> = arc.experiencer.points.iter().map(|p| (p.event_id, p.raw_t.to_bits())).collect();
            prop_assert_eq!(&actor, &from_relations);
            prop_assert_eq!(&exp, &from_relations_exp);
            prop_assert!(actor.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(arc.actor.smoothed().len(), arc.actor.len());
        }
        for (key, r) in &relation {
            prop_assert!(r.series.points.windows(2).all(|w| w[0].event_id < w[1].event_id));
            for pt in &r.series.points {
                let src = &recs[pt.event_id];
                prop_assert_eq!(src.pair(), Some((key.actor, key.experiencer)));
            }
        }
    }

    #[test]
    fn dedupe_keeps_a_subsequence_with_unique_triples(recs in records()) {
        let out = dedupe_sentence_events(recs.clone());
        let mut it = recs.iter();
        for r in &out {
            prop_assert!(it.any(|x| x == r), "not a subsequence");
        }
        let triples: BTreeSet<_> = out.iter().map(|r| (r.sentence_index(), r.actor, r.experiencer)).collect();
        prop_assert_eq!(triples.len(), out.len());
        let all: BTreeSet<_> = recs.iter().map(|r| (r.sentence_index(), r.actor, r.experiencer)).collect();
        prop_assert_eq!(all, triples);
    }
}

const NAME_POOL: [&str; 12] = [
    "Tom",
    "Tom Sawyer",
    "Mr. Sawyer",
    "Sid Sawyer",
    "Becky",
    "Becky Thatcher",
    "Judge Thatcher",
    "Huck",
    "Huck Finn",
    "Aunt Polly",
    "Polly",
    "Joe",
];

fn mention(text: &str, pos: usize) -> Mention {
    Mention {
        token_range: (pos * 4, pos * 4 + text.split(' ').count()),
        sentence_index: pos,
        kind: MentionKind::ProperName,
        text: text.to_owned(),
        gender: Gender::Unknown,
        possessive: false,
        object: false,
        clause: pos,
        cluster_id: None,
    }
}

/// canonical name, aliases, member token ranges
type ClusterShape = (String, Vec<String>, Vec<(usize, usize)>);

fn summary(mentions: &[Mention], clusters: &[narrative_arcs::characters::CharacterCluster]) -> BTreeSet<ClusterShape> {
    clusters
        .iter()
        .map(|c| {
            let mut ranges: Vec<_> = c.mention_indices.iter().map(|&i| mentions[i].token_range).collect();
            ranges.sort();
            (c.canonical_name.clone(), c.aliases.iter().cloned().collect(), ranges)
        })
        .collect()
}

proptest! {
    #[test]
    fn clustering_ignores_mention_order(
        picks in prop::collection::vec(0..NAME_POOL.len(), 1..25),
        shuffled in any::<u64>(),
    ) {
        let config = CharacterConfig::default();
        let mut ordered: Vec<Mention> = picks.iter().enumerate().map(|(i, &k)| mention(NAME_POOL[k], i)).collect();
        let mut permuted = ordered.clone();
        // deterministic permutation from the drawn seed
        let len = permuted.len();
        let mut state = shuffled;
        for i in (1..len).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            permuted.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = cluster_names(&mut ordered, &config);
        let b = cluster_names(&mut permuted, &config);
        prop_assert_eq!(summary(&ordered, &a), summary(&permuted, &b));

        // partition: each name mention sits in exactly one cluster
        for (mi, m) in ordered.iter().enumerate() {
            let owners: Vec<_> = a.iter().filter(|c| c.mention_indices.contains(&mi)).collect();
            prop_assert_eq!(owners.len(), 1);
            prop_assert_eq!(m.cluster_id, Some(owners[0].cluster_id));
        }
        for c in &a {
            prop_assert_eq!(c.mention_count, c.mention_indices.len());
            let longest = c.aliases.iter().map(|x| x.split(' ').count()).max().unwrap();
            prop_assert_eq!(c.canonical_name.split(' ').count(), longest);
        }
    }

    #[test]
    fn a_longer_alias_never_splits_the_cluster_it_extends(
        picks in prop::collection::vec(0..NAME_POOL.len(), 1..20),
        which in 0usize..20,
    ) {
        let config = CharacterConfig::default();
        let mut before: Vec<Mention> = picks.iter().enumerate().map(|(i, &k)| mention(NAME_POOL[k], i)).collect();
        let clusters = cluster_names(&mut before, &config);
        let target = &clusters[which % clusters.len()];
        let longer = format!("{} Junior", target.canonical_name);
        let mut after = before.clone();
        for m in after.iter_mut() {
            m.cluster_id = None;
        }
        after.push(mention(&longer, picks.len()));
        cluster_names(&mut after, &config);
        let members: Vec<usize> = target.mention_indices.clone();
        let joined = after[picks.len()].cluster_id;
        for &i in &members {
            prop_assert_eq!(after[i].cluster_id, joined, "{} left {}", &after[i].text, &longer);
        }
    }
}

fn text_strategy() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        Just("Mr. Sawyer left.".to_owned()),
        Just(" ".to_owned()),
        Just("\n".to_owned()),
        Just("\n\n  12  \n".to_owned()),
        Just("see https://example.org/x now".to_owned()),
        Just("\"Run!\" she cried.".to_owned()),
        Just("- 7 -".to_owned()),
        Just("Élodie wept; Tom laughed?".to_owned()),
        Just("\t".to_owned()),
        "[a-zA-Z.,!? ]{0,12}",
    ];
    prop::collection::vec(piece, 0..20).prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn cleaning_is_idempotent(raw in text_strategy()) {
        let rules = CleaningConfig::default();
        let once = clean(&raw, &rules).unwrap();
        prop_assert_eq!(clean(&once, &rules).unwrap(), once);
    }

    #[test]
    fn tokens_tile_the_clean_text(raw in text_strategy()) {
        let clean_text = clean(&raw, &CleaningConfig::default()).unwrap();
        let doc = Segmenter::default().segment("p", &raw, &clean_text);
        let chars: Vec<char> = clean_text.chars().collect();
        let mut rebuilt = String::new();
        let mut at = 0;
        for t in &doc.tokens {
            let gap: String = chars[at..t.start].iter().collect();
            prop_assert!(gap.chars().all(char::is_whitespace), "non-space gap {gap:?}");
            rebuilt.push_str(&gap);
            let surface: String = chars[t.start..t.end].iter().collect();
            prop_assert_eq!(&surface, &t.surface);
            rebuilt.push_str(&surface);
            at = t.end;
        }
        rebuilt.extend(&chars[at..]);
        prop_assert_eq!(rebuilt, clean_text.clone());
        // sentences are contiguous and in order
        for (i, s) in doc.sentences.iter().enumerate() {
            prop_assert_eq!(s.index, i);
            if i > 0 {
                prop_assert_eq!(doc.sentences[i - 1].end_token, s.first_token);
            }
        }
        let again = Segmenter::default().segment("p", &raw, &clean_text);
        prop_assert_eq!(doc, again);
    }
}

fn rating_matrix() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<usize>)> {
    (2usize..6, 2usize..8, 1usize..15).prop_flat_map(|(cats, raters, items)| {
        (
            prop::collection::vec(prop::collection::vec(0..cats, raters), items),
            Just((0..cats).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

fn to_counts(rows: &[Vec<usize>], cats: usize, relabel: &[usize]) -> Vec<Vec<usize>> {
    rows.iter()
        .map(|r| {
            let mut c = vec![0; cats];
            for &a in r {
                c[relabel[a]] += 1;
            }
            c
        })
        .collect()
}

proptest! {
    #[test]
    fn kappa_ignores_category_names((rows, perm) in rating_matrix()) {
        let identity: Vec<usize> = (0..perm.len()).collect();
        let a = fleiss_kappa(&to_counts(&rows, perm.len(), &identity));
        let b = fleiss_kappa(&to_counts(&rows, perm.len(), &perm));
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn kappa_is_one_exactly_when_raters_agree((rows, perm) in rating_matrix()) {
        let identity: Vec<usize> = (0..perm.len()).collect();
        let counts = to_counts(&rows, perm.len(), &identity);
        let observed = (0..counts[0].len()).filter(|&j| counts.iter().any(|r| r[j] > 0)).count();
        let unanimous = counts.iter().all(|r| r.iter().filter(|&&c| c > 0).count() == 1);
        match fleiss_kappa(&counts) {
            Ok(k) => {
                prop_assert!(observed > 1);
                prop_assert_eq!(k == 1.0, unanimous, "kappa {}", k);
            }
            Err(_) => prop_assert!(observed <= 1),
        }
    }

    #[test]
    fn accuracy_is_order_free(pairs in prop::collection::vec((0u8..4, 0u8..4), 1..40)) {
        let (p, g): (Vec<u8>, Vec<u8>) = pairs.iter().cloned().unzip();
        let mut rev = pairs.clone();
        rev.reverse();
        let (rp, rg): (Vec<u8>, Vec<u8>) = rev.into_iter().unzip();
        prop_assert_eq!(accuracy(&p, &g).unwrap(), accuracy(&rp, &rg).unwrap());
    }

    #[test]
    fn confusion_rows_sum_to_one(labels in prop::collection::vec((0usize..3, 0usize..3), 1..80)) {
        let system: Vec<ShiftLabel> = labels.iter().enumerate().map(|(i, &(s, _))| ShiftLabel { event_id: i, label: Shift::ALL[s] }).collect();
        let gold: Vec<ShiftLabel> = labels.iter().enumerate().map(|(i, &(_, g))| ShiftLabel { event_id: i, label: Shift::ALL[g] }).collect();
        let t = shift_confusion(&system, &gold).unwrap();
        for (row, counts) in t.rows.iter().zip(&t.counts) {
            let sum: f64 = row.iter().sum();
            if counts.iter().sum::<usize>() > 0 {
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            } else {
                prop_assert_eq!(sum, 0.0);
            }
        }
    }

    #[test]
    fn shift_labels_follow_the_sign_of_each_step(series in prop::collection::vec(-5.0f64..5.0, 2..30), band in 0.0f64..1.0) {
        let ids: Vec<usize> = (0..series.len()).map(|i| i * 2).collect();
        let labels = label_shifts(&series, &ids, band);
        prop_assert_eq!(labels.len(), series.len() - 1);
        for (i, l) in labels.iter().enumerate() {
            let d = series[i + 1] - series[i];
            let want = if d > band { Shift::Positive } else if d < -band { Shift::Negative } else { Shift::Neutral };
            prop_assert_eq!(l.label, want);
            prop_assert_eq!(l.event_id, ids[i + 1]);
        }
    }
}

/// The more-mentions rule for ambiguous short names means a longer alias can
/// pull an ambiguous variant away from a different cluster.
#[test]
fn ambiguous_surname_follows_the_larger_cluster() {
    let config = CharacterConfig::default();
    let names = ["Tom Sawyer", "Sid Sawyer", "Mr. Sawyer"];
    let mut before: Vec<Mention> = names.iter().enumerate().map(|(i, n)| mention(n, i)).collect();
    cluster_names(&mut before, &config);
    assert_eq!(
        before[2].cluster_id, before[0].cluster_id,
        "tie goes to the earlier cluster"
    );

    let mut after: Vec<Mention> = names.iter().enumerate().map(|(i, n)| mention(n, i)).collect();
    after.push(mention("Sid Sawyer Junior", 3));
    cluster_names(&mut after, &config);
    assert_eq!(after[2].cluster_id, after[1].cluster_id);
    assert_eq!(after[3].cluster_id, after[1].cluster_id);
}
