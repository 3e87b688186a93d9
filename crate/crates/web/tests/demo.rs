use spherindex_web::{analyze, degenerate, fan_svg, fixture, fixture_names};

#[test]
fn b2_saturation_draws_eight_sectors() {
    let svg = fan_svg(&fixture("split_b2").unwrap(), true).unwrap();
    assert_eq!(svg.matches(r#"class="cone""#).count(), 8);
    assert_eq!(svg.matches("<line").count(), 8);
}

#[test]
fn standard_fan_of_a2_is_one_chamber() {
    let svg = fan_svg(&fixture("split_a2").unwrap(), false).unwrap();
    assert_eq!(svg.matches(r#"class="cone""#).count(), 1);
    assert!(svg.contains(r#"class="zk""#));
}

#[test]
fn reports_are_text() {
    assert!(fixture_names().contains(&"e6".to_string()));
    let text = fixture("e6").unwrap();
    assert!(analyze(&text).contains("B2"));
    assert!(degenerate(&text).contains("face"));
}
