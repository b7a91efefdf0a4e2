//! Edge-list text format and its JSON alternative.
//!
//! Text: one `j k` edge per line, `#` starts a comment, blank lines are
//! skipped. JSON: `{"edges": [[j, k], ...]}`. Input starting with `{` is read
//! as JSON.

use serde::{Deserialize, Serialize};

use super::{Digraph, DigraphError, Node};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeList {
    edges: Vec<(Node, Node)>,
}

fn parse_error(line: usize, message: impl Into<String>) -> DigraphError {
    DigraphError::Parse { line, message: message.into() }
}

fn parse_node(token: &str, line: usize) -> Result<Node, DigraphError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(line, format!("expected a natural number, found {token:?}")));
    }
    token.parse().map_err(|_| parse_error(line, format!("node {token} does not fit in 64 bits")))
}

impl Digraph {
    /// Reads either format.
    pub fn parse(src: &str) -> Result<Digraph, DigraphError> {
        if src.trim_start().starts_with('{') {
            Digraph::from_json(src)
        } else {
            Digraph::from_text(src)
        }
    }

    pub fn from_text(src: &str) -> Result<Digraph, DigraphError> {
        let mut out = Digraph::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = content.split_whitespace();
            let Some(first) = tokens.next() else { continue };
            let second = tokens.next().ok_or_else(|| parse_error(line, "expected two nodes"))?;
            if let Some(extra) = tokens.next() {
                return Err(parse_error(line, format!("unexpected token {extra:?}")));
            }
            out.insert(parse_node(first, line)?, parse_node(second, line)?);
        }
        Ok(out)
    }

    pub fn from_json(src: &str) -> Result<Digraph, DigraphError> {
        let list: EdgeList = serde_json::from_str(src).map_err(|e| parse_error(e.line(), e.to_string()))?;
        Ok(list.edges.into_iter().collect())
    }

    /// Sorted edges, one `j k` per line.
    pub fn to_text(&self) -> String {
        self.edges().map(|(j, k)| format!("{j} {k}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "edges": self.edges().map(|(j, k)| [j, k]).collect::<Vec<_>>() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let src = "# two\n0 2\n\n0 4   # comment\n2 4\n";
        let a = Digraph::parse(src).unwrap();
        assert_eq!(a, Digraph::from_edges([(0, 2), (0, 4), (2, 4)]));
        assert_eq!(a.to_text(), "0 2\n0 4\n2 4\n");
        assert_eq!(Digraph::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn json_round_trip() {
        let a = Digraph::parse(r#"{"edges": [[2, 4], [0, 2], [0, 2]]}"#).unwrap();
        assert_eq!(a, Digraph::from_edges([(0, 2), (2, 4)]));
        assert_eq!(a.to_json().to_string(), r#"{"edges":[[0,2],[2,4]]}"#);
        assert_eq!(Digraph::parse(&a.to_json().to_string()).unwrap(), a);
    }

    #[test]
    fn empty_inputs() {
        assert!(Digraph::parse("").unwrap().is_empty());
        assert!(Digraph::parse("# nothing\n\n").unwrap().is_empty());
        assert!(Digraph::parse(r#"{"edges":[]}"#).unwrap().is_empty());
    }

    #[test]
    fn self_loops_are_not_parse_errors() {
        assert_eq!(Digraph::parse("0 0").unwrap(), Digraph::from_edges([(0, 0)]));
    }

    #[test]
    fn malformed_lines() {
        for (src, line) in [("0 1\n0", 2), ("a b", 1), ("1 2 3", 1), ("-1 2", 1), ("0 99999999999999999999", 1)] {
            match Digraph::parse(src) {
                Err(DigraphError::Parse { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
                other => panic!("{src:?} gave {other:?}"),
            }
        }
        assert!(Digraph::parse(r#"{"edges": [[1]]}"#).is_err());
        assert!(Digraph::parse(r#"{"edges": [[1, 2]], "x": 1}"#).is_err());
    }
}
