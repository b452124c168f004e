use qdf_cli::csv::*;

#[test]
fn number_formatting() {
    assert_eq!(format_number(0.0), "0");
    assert_eq!(format_number(-0.0), "0");
    assert_eq!(format_number(1.0), "1");
    assert_eq!(format_number(0.5), "0.5");
    assert_eq!(format_number(50.0), "50");
    assert_eq!(format_number(0.7344452368976999), "0.734445236898");
    assert_eq!(format_number(-1.23456789012345e-7), "-1.23456789012e-7");
    assert_eq!(format_number(1e-5), "0.00001");
    assert_eq!(format_number(123456789012345.0), "1.23456789012e14");
    assert_eq!(format_number(0.1 + 0.2), "0.3");
    assert_eq!(format_number(f64::NAN), "nan");
}

#[test]
fn csv_round_trip() {
    let mut t = Table::new(vec!["t".into(), "F".into()]);
    t.push(vec![0.0, 1.0]);
    t.push(vec![0.5, 0.987654321098765]);
    let text = t.to_csv();
    assert_eq!(text, "t,F\n0,1\n0.5,0.987654321099\n");
    let back = Table::from_csv(&text).unwrap();
    assert_eq!(back.to_csv(), text);
    assert_eq!(back.column("F").unwrap()[0], 1.0);
}

#[test]
fn script_references_csv() {
    let t = Table::new(vec!["t".into(), "a".into(), "b".into()]);
    let s = plot_script("fig2.csv", &t, "F");
    assert!(s.contains("'fig2.csv' using 1:2") && s.contains("'fig2.csv' using 1:3"));
    assert!(s.contains("set output 'fig2.png'"));
}
