use proptest::prelude::*;
use zugang_core::{DatasetKind, Gazetteer, GazetteerError};

fn label() -> impl Strategy<Value = String> {
    let word = prop_oneof![
        "[A-Za-zäöüßÄÖÜ§]{1,12}",
        Just("Vorbereitung".to_string()),
        Just("vorbereitungskurs".to_string()),
        Just("(Gymnasium)".to_string()),
        Just("Fachberater/Fachberaterin".to_string()),
    ];
    prop::collection::vec(word, 1..5).prop_map(|w| w.join(" "))
}

fn dataset_file() -> impl Strategy<Value = (DatasetKind, Vec<(String, String)>, String)> {
    (prop::sample::select(DatasetKind::ALL.to_vec()), prop::collection::vec(label(), 0..30), prop::collection::vec(any::<bool>(), 30))
        .prop_map(|(kind, labels, blanks)| {
            let mut text = String::new();
            let mut records = Vec::new();
            for (i, l) in labels.into_iter().enumerate() {
                let id = format!("{} {}.{}", kind.letter(), i / 7, i);
                if blanks[i] {
                    text.push_str("  \n");
                }
                text.push_str(&format!("{id}|{l}|\n"));
                records.push((id, l));
            }
            (kind, records, text)
        })
}

proptest! {
    #[test]
    fn one_entry_per_non_empty_line((kind, records, text) in dataset_file()) {
        let g = Gazetteer::parse(&text, kind).unwrap();
        prop_assert_eq!(g.len(), text.lines().filter(|l| !l.trim().is_empty()).count());
        for (e, (id, label)) in g.entries().iter().zip(&records) {
            prop_assert_eq!(&e.id, id);
            prop_assert_eq!(&e.label, label);
            prop_assert_eq!(e.dataset, kind);
        }
    }

    #[test]
    fn filtering_is_idempotent((kind, _, text) in dataset_file()) {
        let g = Gazetteer::parse(&text, kind).unwrap();
        let once = g.filter_preparation();
        prop_assert_eq!(once.filter_preparation(), once.clone());
        prop_assert_eq!(once.len() + g.preparation_count(), g.len());
        prop_assert!(once.entries().iter().all(|e| !e.label.to_lowercase().contains("vorbereitung")));
    }

    #[test]
    fn pipe_format_round_trip((kind, _, text) in dataset_file()) {
        let g = Gazetteer::parse(&text, kind).unwrap();
        prop_assert_eq!(Gazetteer::parse(&g.to_pipe_format(), kind).unwrap(), g);
    }
}

#[test]
fn duplicate_ids_are_rejected() {
    assert_eq!(
        Gazetteer::parse("C 1|a|\nC 2|b|\nC 1|c|\n", DatasetKind::C),
        Err(GazetteerError::DuplicateId("C 1".into()))
    );
}

#[test]
fn merged_datasets_keep_order() {
    let a = Gazetteer::parse("A 1|Abitur|\n", DatasetKind::A).unwrap();
    let k = Gazetteer::parse("K 1|Erste Hilfe|\nK 2|Vorbereitung Erste Hilfe|\n", DatasetKind::K).unwrap();
    let g = a.merge(k).unwrap();
    assert_eq!(g.entries().iter().map(|e| e.id.as_str()).collect::<Vec<_>>(), ["A 1", "K 1", "K 2"]);
    assert_eq!((g.count(DatasetKind::K), g.preparation_count()), (2, 1));
    assert_eq!(g.get("K 1").unwrap().label, "Erste Hilfe");
}
