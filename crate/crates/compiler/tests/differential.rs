mod common;

use h10_core::EngineConfig;

#[test]
fn truth_survives_stages_one_and_two() {
    let (yes, no) = common::differential(&EngineConfig::default(), 10).unwrap();
    assert!(common::SENTENCES.len() >= 20);
    assert!(yes >= 5 && no >= 5, "{yes} true, {no} false");
}
