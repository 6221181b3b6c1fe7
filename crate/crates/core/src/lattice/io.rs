//! Point-set text format: a header `# leech-scaled8 norm=<p/q> count=<n>` followed by one
//! vector per line, 24 space-separated integers, lines in ascending lexicographic order of
//! the integer tuples.

use std::fmt::Write as _;

use crate::arith::Rational;

use super::leech::LatticeVector;
use super::LatticeError;

pub fn write_point_set(norm: &Rational, vectors: &[LatticeVector]) -> String {
    let mut sorted = vectors.to_vec();
    sorted.sort_unstable();
    let mut out = format!("# leech-scaled8 norm={norm} count={}\n", sorted.len());
    for v in &sorted {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn read_point_set(text: &str) -> Result<(Rational, Vec<LatticeVector>), LatticeError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| LatticeError::Format("empty point-set file".into()))?;
    let rest = header
        .strip_prefix("# leech-scaled8 ")
        .ok_or_else(|| LatticeError::Format(format!("bad header {header:?}")))?;
    let mut norm = None;
    let mut count = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("norm", v)) => norm = Some(v.parse::<Rational>().map_err(|e| LatticeError::Format(e.to_string()))?),
            Some(("count", v)) => count = Some(v.parse::<usize>().map_err(|e| LatticeError::Format(e.to_string()))?),
            _ => return Err(LatticeError::Format(format!("unknown header field {field:?}"))),
        }
    }
    let norm = norm.ok_or_else(|| LatticeError::Format("header lacks norm".into()))?;
    let count = count.ok_or_else(|| LatticeError::Format("header lacks count".into()))?;
    let mut vectors = Vec::with_capacity(count);
    for line in lines {
        let coords = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| LatticeError::Format(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        vectors.push(LatticeVector::from_slice(&coords)?);
    }
    if vectors.len() != count {
        return Err(LatticeError::Format(format!("header says {count} vectors, found {}", vectors.len())));
    }
    if vectors.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LatticeError::Format("vectors are not in strictly ascending order".into()));
    }
    Ok((norm, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::leech::canonical_anchors;

    #[test]
    fn header_and_order() {
        let (a, b) = canonical_anchors();
        let text = write_point_set(&Rational::from(4), &[a, b]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# leech-scaled8 norm=4 count=2"));
        assert!(lines.next().unwrap().starts_with("-3 1 1"));
        let (norm, back) = read_point_set(&text).unwrap();
        assert_eq!(norm, Rational::from(4));
        assert_eq!(back, vec![b, a]);
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let text = "# leech-scaled8 norm=4/1 count=2\n4 4 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n";
        assert!(read_point_set(text).is_err());
    }
}
