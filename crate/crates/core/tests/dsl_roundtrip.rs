mod common;

use common::{random_model, ModelShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqont_core::dsl::{parse_model, render_model};
use reqont_core::validate::ValidationOptions;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let m = random_model(&mut ChaCha8Rng::seed_from_u64(seed), ModelShape::WIDE);
        let text = render_model(&m);
        let pm = parse_model(&text, "gen.req", &ValidationOptions::default());
        prop_assert!(pm.diagnostics.is_empty(), "{:?}\n{}", pm.diagnostics, text);
        prop_assert_eq!(&pm.model, &m);
        // rendering is canonical
        prop_assert_eq!(render_model(&pm.model), text);
    }

    #[test]
    fn parsing_is_deterministic(seed in any::<u64>()) {
        let text = render_model(&random_model(&mut ChaCha8Rng::seed_from_u64(seed), ModelShape::WIDE));
        let a = parse_model(&text, "gen.req", &ValidationOptions::default());
        let b = parse_model(&text, "gen.req", &ValidationOptions::default());
        prop_assert_eq!(a.model, b.model);
        prop_assert_eq!(a.diagnostics, b.diagnostics);
    }

    #[test]
    fn spans_of_garbage_stay_inside_the_input(src in "[a-z{}:,<>~&|\\-=\\[\\]\" \n0-9.]{0,80}") {
        let pm = parse_model(&src, "junk.req", &ValidationOptions::default());
        let lines: Vec<&str> = src.split('\n').collect();
        for d in &pm.diagnostics {
            if let Some(s) = &d.span {
                prop_assert!(s.line as usize >= 1 && s.line as usize <= lines.len(), "{d}");
                let width = lines[s.line as usize - 1].chars().count();
                prop_assert!(s.column as usize >= 1 && s.column as usize <= width + 1, "{d}");
            }
        }
    }
}
