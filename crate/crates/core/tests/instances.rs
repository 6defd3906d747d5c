mod common;

use proptest::prelude::*;
use vertexnim::{parse_instance, serialize, ParseError};

proptest! {
    #[test]
    fn parse_inverts_serialize(pos in common::small_positions()) {
        let text = serialize(&pos);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed, &pos);
        prop_assert_eq!(serialize(&parsed), text);
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "\n# header\ngame stockman normal   # rules\n\ngraph undirected\nv a 0\nv b 2\ne a b\nstart b\n";
    let pos = parse_instance(text).unwrap();
    assert_eq!(pos.graph().weights(), &[0, 2]);
}

#[test]
fn disconnected_graph_is_rejected() {
    let text = "game vertexnim normal\ngraph undirected\nv a 1\nv b 1\nstart a\n";
    assert!(matches!(parse_instance(text), Err(ParseError::Semantic { .. })));
}

#[test]
fn reserved_end_id_is_rejected() {
    let text = "game vertexnim normal\ngraph undirected\nv end 1\ne end end\nstart end\n";
    let err = parse_instance(text).unwrap_err();
    assert_eq!(err.line(), 3);
}

#[test]
fn unknown_keyword_is_syntax_error() {
    let text = "game vertexnim normal\nnode a 1\n";
    assert!(matches!(parse_instance(text), Err(ParseError::Syntax { line: 2, .. })));
}
