//! Parses an instance document, prints its canonical form, and shows the
//! errors malformed documents produce.

use rcdkit::{parse_instance, serialize_instance};

fn main() {
    let doc = r#"{"n":4,"nu":["1/4","1/4","1/4","1/4"],"R":[["0","1/3","1/3","1/3"],["0","1","0","0"],["0","0","1/2","1/2"],["0","0","2/4","2/4"]]}"#;
    let inst = parse_instance(doc).expect("valid document");
    let canonical = serialize_instance(&inst);
    println!("canonical: {canonical}");
    assert_eq!(parse_instance(&canonical).unwrap(), inst);

    for bad in [
        r#"{"n":2,"nu":["1/2","1/3"]}"#,
        r#"{"n":3,"nu":["1/2","1/2"]}"#,
        r#"{"n":1,"nu":["1"],"R":[["1"]],"epsilon":"0.1"}"#,
        r#"{"n":1,"nu":["one"]}"#,
    ] {
        println!("{bad}\n  -> {}", parse_instance(bad).unwrap_err());
    }
}
