use proptest::prelude::*;
use rinv::report::{Item, Report, Status, Summary};

fn status() -> impl Strategy<Value = Status> {
    prop::sample::select(vec![Status::Pass, Status::Fail, Status::Erratum, Status::Skipped])
}

proptest! {
    #[test]
    fn failure_iff_some_item_fails(sts in prop::collection::vec(status(), 0..20)) {
        let mut r = Report::new(42);
        r.extend(sts.iter().enumerate().map(|(i, s)| Item::new("s", &format!("x{i}"), *s)));
        prop_assert_eq!(r.failed(), sts.contains(&Status::Fail));
        let out = r.to_jsonl();
        let last: Summary = serde_json::from_str(out.lines().last().unwrap()).unwrap();
        prop_assert_eq!(last.total, sts.len());
        prop_assert_eq!(last.counts["erratum"], sts.iter().filter(|s| **s == Status::Erratum).count());
    }

    #[test]
    fn output_independent_of_insertion_order(ids in prop::collection::btree_set(0u32..500, 1..30), rot in 0usize..30) {
        let mut items: Vec<Item> = ids.iter().map(|i| Item::new("s", &format!("L{i}"), Status::Pass)).collect();
        let mut a = Report::new(1);
        a.extend(items.clone());
        let k = rot % items.len();
        items.rotate_left(k);
        let mut b = Report::new(1);
        b.extend(items);
        prop_assert_eq!(a.to_jsonl(), b.to_jsonl());
    }
}
