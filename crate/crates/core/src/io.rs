//! Plain-text family files.
//!
//! ```text
//! n k m
//! <m lines: sorted 1-based elements separated by single spaces, colex order>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::family::{Set, UniformFamily, MAX_N};

pub fn to_text(f: &UniformFamily) -> String {
    let mut out = format!("{} {} {}\n", f.n(), f.k(), f.len());
    for s in f.sets() {
        let line: Vec<String> = s.elems().map(|e| e.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).expect("writing to a String");
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_fields(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

/// Parse the text format. Member lines may appear in any order; errors
/// carry 1-based line numbers.
pub fn from_text(text: &str) -> Result<UniformFamily> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head = parse_fields(header, 1)?;
    let [n, k, m] = head[..] else {
        return Err(parse_err(1, "header must be \"n k m\""));
    };
    if n == 0 || n > MAX_N {
        return Err(parse_err(1, format!("n = {n} outside 1..={MAX_N}")));
    }
    if k > n {
        return Err(parse_err(1, format!("k = {k} exceeds n = {n}")));
    }
    let mut seen = std::collections::HashMap::new();
    let mut sets = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let elems = parse_fields(line, lineno)?;
        if elems.len() != k {
            return Err(parse_err(lineno, format!("expected {k} elements, found {}", elems.len())));
        }
        if let Some(&e) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(parse_err(lineno, format!("element {e} outside [1, {n}]")));
        }
        let s = Set::from_elems(elems.iter().copied()).expect("range checked");
        if s.len() != k {
            return Err(parse_err(lineno, "repeated element within a member"));
        }
        if let Some(prev) = seen.insert(s, lineno) {
            return Err(parse_err(lineno, format!("duplicate member {s} (first on line {prev})")));
        }
        sets.push(s);
    }
    if sets.len() != m {
        return Err(parse_err(1, format!("header declares {m} members, found {}", sets.len())));
    }
    UniformFamily::new(n, k, sets)
}

pub fn read_family(path: impl AsRef<Path>) -> Result<UniformFamily> {
    from_text(&std::fs::read_to_string(path)?)
}

pub fn write_family(f: &UniformFamily, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, to_text(f))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_g;

    #[test]
    fn round_trip_g94() {
        let g = build_g(9, 4).unwrap();
        let text = to_text(&g);
        assert!(text.starts_with("9 4 48\n"));
        assert!(text.ends_with('\n'));
        assert_eq!(from_text(&text).unwrap(), g);
    }

    #[test]
    fn colex_lines() {
        let f = UniformFamily::from_elem_lists(5, 2, &[&[1, 5], &[2, 3], &[1, 2]]).unwrap();
        assert_eq!(to_text(&f), "5 2 3\n1 2\n2 3\n1 5\n");
    }

    #[test]
    fn empty_family_header_only() {
        let f = from_text("6 3 0\n").unwrap();
        assert!(f.is_empty());
        assert_eq!((f.n(), f.k()), (6, 3));
        assert_eq!(to_text(&f), "6 3 0\n");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let cases = [
            ("6 4 1\n1 2 3\n", 2),
            ("6 3 2\n1 2 3\n3 2 1\n", 3),
            ("6 3 1\n1 2 7\n", 2),
            ("6 3 1\n1 x 3\n", 2),
            ("6 3 2\n1 2 3\n", 1),
            ("6 3\n", 1),
            ("6 3 1\n1 1 2\n", 2),
        ];
        for (text, line) in cases {
            match from_text(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
