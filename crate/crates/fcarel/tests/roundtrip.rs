use fcarel::format::{parse_csv, parse_cxt, parse_cxt_named, write_csv, write_cxt, write_cxt_named};
use fcarel_core::{ConceptLattice, FormalContext};
use proptest::prelude::*;

fn context_strategy() -> impl Strategy<Value = FormalContext> {
    (0..12usize, 0..12usize, 0.0..=1.0f64, any::<u64>())
        .prop_map(|(g, m, p, seed)| FormalContext::coin_toss(g, m, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cxt_bytes_survive(ctx in context_strategy()) {
        let text = write_cxt(&ctx);
        let back = parse_cxt(&text).unwrap();
        prop_assert_eq!(&back, &ctx);
        prop_assert_eq!(write_cxt(&back), text);
    }

    #[test]
    fn csv_matches_cxt(ctx in context_strategy()) {
        let from_csv = parse_csv(&write_csv(&ctx)).unwrap();
        prop_assert_eq!(&from_csv, &ctx);
        prop_assert_eq!(ConceptLattice::build(&from_csv).unwrap(), ConceptLattice::build(&ctx).unwrap());
    }
}

#[test]
fn crlf_and_lowercase_read() {
    let text = "B\r\nname\r\n 2 \r\n2\r\n\r\ng\r\nh\r\na\r\nb\r\nXx\r\n.X\r\n";
    let (name, ctx) = parse_cxt_named(text).unwrap();
    assert_eq!(name, "name");
    assert_eq!(write_cxt_named("name", &ctx), "B\nname\n2\n2\ng\nh\na\nb\nXX\n.X\n");
}
