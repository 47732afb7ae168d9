//! Text formats: solution files, classification catalogs, and the vector
//! and permutation notations used on the command line.
//!
//! Solution files are line-oriented ASCII with LF endings:
//!
//! ```text
//! ybe-solution 1
//! size 4
//! sigma 0: 2 1 0 3
//! ...
//! tau 3: 0 1 3 2
//! ```
//!
//! `#` starts a comment; rows must appear in ascending element order.
//! Vector lists elsewhere are written `1,1;2,0` (components by commas,
//! vectors by semicolons), with `-` for the empty list and `.` for the
//! empty vector.

use sha2::{Digest, Sha256};

use crate::congruence::ClassifiedEntry;
use crate::construct::SParams;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::solution::Solution;

pub fn serialize_solution(s: &Solution) -> String {
    let mut out = String::new();
    out.push_str("ybe-solution 1\n");
    out.push_str(&format!("size {}\n", s.n()));
    for x in 0..s.n() {
        out.push_str(&format!("sigma {x}:"));
        for &v in s.sigma_row(x) {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for x in 0..s.n() {
        out.push_str(&format!("tau {x}:"));
        for &v in s.tau_row(x) {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let stripped = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let trimmed = stripped.trim();
        if !trimmed.is_empty() {
            lines.push((lineno + 1, trimmed.to_string()));
        }
    }
    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let mut it = lines.into_iter();
    let (l1, header) = it
        .next()
        .ok_or_else(|| err(1, "empty file".into()))?;
    if header != "ybe-solution 1" {
        return Err(err(l1, format!("bad header {header:?}; expected \"ybe-solution 1\"")));
    }
    let (l2, size_line) = it
        .next()
        .ok_or_else(|| err(l1, "missing size line".into()))?;
    let n: usize = size_line
        .strip_prefix("size ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(l2, format!("bad size line {size_line:?}")))?;
    if n == 0 {
        return Err(err(l2, "size must be positive".into()));
    }

    let mut sigma: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut tau: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (kind, table) in [("sigma", &mut sigma), ("tau", &mut tau)] {
        for x in 0..n {
            let (ln, line) = it
                .next()
                .ok_or_else(|| err(l2, format!("missing {kind} row {x}")))?;
            let rest = line
                .strip_prefix(kind)
                .and_then(|r| r.trim_start().strip_prefix(&format!("{x}")))
                .and_then(|r| r.trim_start().strip_prefix(':'))
                .ok_or_else(|| {
                    err(ln, format!("expected \"{kind} {x}: ...\", found {line:?}"))
                })?;
            let mut row = Vec::with_capacity(n);
            for tok in rest.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| err(ln, format!("bad table entry {tok:?}")))?;
                row.push(v);
            }
            if row.len() != n {
                return Err(err(ln, format!("row has {} entries, expected {n}", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(err(ln, format!("entry {v} out of range 0..{n}")));
            }
            table.push(row);
        }
    }
    if let Some((ln, line)) = it.next() {
        return Err(err(ln, format!("trailing content {line:?}")));
    }
    Solution::from_tables(sigma, tau)
}

/// `1,1;2,0` — components by commas, vectors by semicolons; `-` empty
/// list, `.` empty vector.
pub fn format_vec_list(vs: &[Vec<i64>]) -> String {
    if vs.is_empty() {
        return "-".to_string();
    }
    vs.iter()
        .map(|v| {
            if v.is_empty() {
                ".".to_string()
            } else {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_vec_list(text: &str) -> Result<Vec<Vec<i64>>> {
    let text = text.trim();
    if text == "-" || text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part == "." {
            out.push(Vec::new());
            continue;
        }
        let mut v = Vec::new();
        for tok in part.split(',') {
            let x: i64 = tok.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad vector component {tok:?}"),
            })?;
            v.push(x);
        }
        out.push(v);
    }
    Ok(out)
}

/// Permutation input: one-line image notation `2,0,1` or cycle notation
/// `(0,1)(2,3)`; `id` is the identity.
pub fn parse_perm(text: &str, degree: usize) -> Result<Perm> {
    let text = text.trim();
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if text == "id" {
        return Ok(Perm::identity(degree));
    }
    if text.starts_with('(') {
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(bad(format!("expected '(' in cycle notation at {rest:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| bad("unbalanced cycle notation".into()))?;
            let inner = &rest[1..close];
            let cycle: Vec<usize> = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("bad cycle {inner:?}")))?;
            cycles.push(cycle);
            rest = rest[close + 1..].trim_start();
        }
        return Perm::from_cycles(degree, &cycles);
    }
    let images: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad(format!("bad image list {text:?}")))?;
    if images.len() != degree {
        return Err(bad(format!(
            "permutation has {} images, expected {degree}",
            images.len()
        )));
    }
    Perm::from_images(images)
}

/// Serializes the permutation in one-line image notation.
pub fn format_perm(p: &Perm) -> String {
    p.images()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn master_digest(params: &SParams) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("n={}", params.n));
    hasher.update(format!("moduli={:?}", params.group.moduli()));
    hasher.update(format!("c={:?}", params.c));
    hasher.update(format!("d={:?}", params.d));
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Catalog format: a two-line header then one record per entry, already in
/// canonical order. Rerunning the classification reproduces the bytes.
pub fn serialize_catalog(params: &SParams, entries: &[ClassifiedEntry]) -> String {
    let mut out = String::new();
    out.push_str("ybe-catalog 1\n");
    out.push_str(&format!(
        "n={} G={}^{} digest={}\n",
        params.n,
        params.n,
        params.group.moduli().len(),
        master_digest(params)
    ));
    for e in entries {
        let mpl = match e.mpl_level {
            crate::structure::Mpl::Level(k) => k.to_string(),
            crate::structure::Mpl::NotMultipermutation => "inf".to_string(),
        };
        out.push_str(&format!(
            "n={} delta={} S={} H={} theta={} size={} mpl={} involutive={} sqfree={}\n",
            params.n,
            e.s_sub_index(),
            format_vec_list(&e.triple.s_sub.canon_gens()),
            format_vec_list(&e.triple.h_sub.canon_gens()),
            format_vec_list(e.triple.theta.gen_images()),
            e.size,
            mpl,
            e.involutive as u8,
            e.square_free as u8,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::involutive_four_point;

    #[test]
    fn roundtrip_involutive_four_point() {
        let s = involutive_four_point();
        let text = serialize_solution(&s);
        let back = parse_solution(&text).unwrap();
        assert_eq!(s, back);
        assert_eq!(serialize_solution(&back), text);
    }

    #[test]
    fn parse_one_point() {
        let s = parse_solution("ybe-solution 1\nsize 1\nsigma 0: 0\ntau 0: 0\n").unwrap();
        assert_eq!(s.n(), 1);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a fixture\nybe-solution 1\n\nsize 1\nsigma 0: 0 # row\ntau 0: 0\n";
        assert!(parse_solution(text).is_ok());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "ybe-solution 1\nsize 2\nsigma 0: 0 1\nsigma 1: 0 1\ntau 0: 0 2\ntau 1: 0 1\n";
        match parse_solution(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_solution("nonsense") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected header error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_row_count_is_an_error() {
        let bad = "ybe-solution 1\nsize 2\nsigma 0: 0 1\ntau 0: 0 1\ntau 1: 0 1\n";
        assert!(parse_solution(bad).is_err());
    }

    #[test]
    fn vec_list_roundtrip() {
        for vs in [
            vec![],
            vec![vec![1, 1], vec![2, 0]],
            vec![vec![]],
            vec![vec![0]],
        ] {
            let text = format_vec_list(&vs);
            assert_eq!(parse_vec_list(&text).unwrap(), vs);
        }
    }

    #[test]
    fn perm_notations() {
        let p = parse_perm("(0,1)(2,3)", 4).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2]);
        let q = parse_perm("1,0,3,2", 4).unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_perm("id", 3).unwrap(), Perm::identity(3));
        assert_eq!(format_perm(&p), "1,0,3,2");
    }
}
