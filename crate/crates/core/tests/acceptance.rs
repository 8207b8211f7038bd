use cobord_core::selftest::criteria;

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in criteria() {
        let r = c.run();
        println!("{r}");
        if !r.passed {
            failed.push(r.number);
        }
    }
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}
