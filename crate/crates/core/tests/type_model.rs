use namebank::trigger::{guess_type, train_type_model, TriggerError, TriggerLexicon};
use namebank::EntityType;

const NAMES: &str = include_str!("../data/type_names.tsv");
const LEXICON: &str = include_str!("../data/lexicon/en.txt");

fn fixture() -> Vec<(EntityType, &'static str)> {
    NAMES
        .lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(t, n)| (t.parse().unwrap(), n))
        .collect()
}

fn split(rows: &[(EntityType, &'static str)]) -> (Vec<&'static str>, Vec<&'static str>) {
    let persons = rows
        .iter()
        .filter(|(t, _)| *t == EntityType::Person)
        .map(|(_, n)| *n)
        .collect();
    let orgs = rows
        .iter()
        .filter(|(t, _)| *t == EntityType::Organisation)
        .map(|(_, n)| *n)
        .collect();
    (persons, orgs)
}

#[test]
fn fixture_is_balanced() {
    let (p, o) = split(&fixture());
    assert_eq!((p.len(), o.len()), (50, 50));
}

#[test]
fn held_out_accuracy_is_reported() {
    let rows = fixture();
    // Every fifth name of each class is held out.
    let (train, test): (Vec<_>, Vec<_>) = rows.iter().enumerate().partition(|(i, _)| i % 5 != 4);
    let train: Vec<_> = train.into_iter().map(|(_, r)| *r).collect();
    let (persons, orgs) = split(&train);
    let model = train_type_model(&persons, &orgs, 1.0).unwrap();
    let correct = test.iter().filter(|(_, (t, n))| model.classify(n).0 == *t).count();
    println!(
        "held-out accuracy: {correct}/{} ({:.0}%)",
        test.len(),
        100.0 * correct as f64 / test.len() as f64
    );
    assert_eq!(test.len(), 20);
}

#[test]
fn person_name_is_typed_person() {
    let (persons, orgs) = split(&fixture());
    let persons: Vec<&str> = persons.into_iter().filter(|n| *n != "Angela Merkel").collect();
    let model = train_type_model(&persons, &orgs, 1.0).unwrap();
    let lex = TriggerLexicon::parse(LEXICON).unwrap();
    let (t, score) = guess_type("Angela Merkel", &lex, Some(&model)).unwrap();
    assert_eq!(t, EntityType::Person);
    assert!(score > 0.5 && score <= 1.0);
    assert_eq!(
        guess_type("Angela Merkel", &lex, None),
        Err(TriggerError::UntrainedModel)
    );
}

#[test]
fn swapping_classes_swaps_decisions() {
    let (persons, orgs) = split(&fixture());
    let a = train_type_model(&persons, &orgs, 0.5).unwrap();
    let b = train_type_model(&orgs, &persons, 0.5).unwrap();
    let flip = |t: EntityType| match t {
        EntityType::Person => EntityType::Organisation,
        EntityType::Organisation => EntityType::Person,
    };
    for probe in [
        "Angela Merkel",
        "World Bank",
        "Unknown Thing",
        "Zurich",
        "Karl Marx Institute",
        "X",
    ] {
        let (ta, sa) = a.classify(probe);
        let (tb, sb) = b.classify(probe);
        if sa != 0.5 {
            assert_eq!(tb, flip(ta), "{probe}");
            assert!((sa - sb).abs() < 1e-12);
        }
        assert!(sa > 0.0 && sa <= 1.0);
    }
}

#[test]
fn classifier_is_deterministic() {
    let (persons, orgs) = split(&fixture());
    let a = train_type_model(&persons, &orgs, 1.0).unwrap();
    let b = train_type_model(&persons, &orgs, 1.0).unwrap();
    for (_, n) in fixture() {
        assert_eq!(a.classify(n), b.classify(n));
    }
}
