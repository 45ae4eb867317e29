use hypcert::certify::Equation;
use hypcert::formats::{GluingData, FIGURE_EIGHT, REGULAR_TETRAHEDRON};
use hypcert::grouptool::{corpus::CORPUS, parse_presentation, ProofScript};
use num_complex::Complex64;
use proptest::prelude::*;

fn gluing() -> impl Strategy<Value = GluingData> {
    (1usize..=5).prop_flat_map(|n| {
        let shape = (prop::num::f64::NORMAL, prop::num::f64::NORMAL).prop_map(|(a, b)| Complex64::new(a, b));
        let eq = (prop::collection::vec(-9i64..=9, n), prop::collection::vec(-9i64..=9, n), -9i64..=9)
            .prop_map(|(a, b, c)| Equation { a, b, c });
        (prop::collection::vec(shape, n), prop::collection::vec(eq, 1..=2 * n))
            .prop_map(|(shapes, equations)| GluingData { shapes, equations })
    })
}

proptest! {
    #[test]
    fn gluing_data_round_trips(d in gluing()) {
        let text = d.to_string();
        prop_assert_eq!(GluingData::parse(&text).unwrap(), d.clone());
        // and the text is stable under a second round
        prop_assert_eq!(GluingData::parse(&text).unwrap().to_string(), text);
    }

    #[test]
    fn gluing_parser_never_panics(s in "[ -~\n]{0,200}") {
        let _ = GluingData::parse(&s);
    }

    #[test]
    fn gluing_parser_survives_mangled_fixtures(cut in 0usize..200, junk in "[ -~]{0,6}") {
        let src = FIGURE_EIGHT;
        let cut = cut.min(src.len());
        let mangled = format!("{}{}{}", &src[..cut], junk, &src[cut..]);
        let _ = GluingData::parse(&mangled);
    }

    #[test]
    fn script_parser_never_panics(s in "[ -~\n]{0,200}") {
        let _ = ProofScript::parse(&s);
        let _ = parse_presentation(&s);
    }
}

#[test]
fn shipped_fixtures_round_trip() {
    for text in [FIGURE_EIGHT, REGULAR_TETRAHEDRON] {
        let d = GluingData::parse(text).unwrap();
        assert_eq!(GluingData::parse(&d.to_string()).unwrap(), d);
    }
}

#[test]
fn shipped_scripts_round_trip() {
    for e in CORPUS {
        let s = e.script().unwrap();
        let again = ProofScript::parse(&s.to_string()).unwrap();
        assert_eq!(again, s, "{}", e.name);
        let p = e.presentation();
        assert!(parse_presentation(&p.to_string()).unwrap().equivalent(&p), "{}", e.name);
    }
}
