//! Text format for weighted point sets:
//!
//! ```text
//! # leech-scaled8 design layers=2 count=2300 dim=22
//! # layer weight=1 r2=12/5 count=275
//! <24 rationals "p/q" per line>
//! ...
//! ```

use crate::arith::Rational;
use crate::lattice::DIM;

use super::{ConstructError, Layer, ProjectedPoint, WeightedPointSet};

pub fn write_design(set: &WeightedPointSet) -> String {
    let mut out = format!("# leech-scaled8 design layers={} count={} dim={}\n", set.layers.len(), set.len(), set.dimension);
    for layer in &set.layers {
        out.push_str(&format!("# layer weight={} r2={} count={}\n", layer.weight, layer.radius_squared, layer.points.len()));
        for p in &layer.points {
            let parts: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> ConstructError {
    ConstructError::Invalid(msg.into())
}

fn field<'a>(line: &'a str, key: &str) -> Result<&'a str, ConstructError> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| bad(format!("header `{line}` lacks {key}=")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, ConstructError> {
    s.parse().map_err(|_| bad(format!("cannot parse {what} `{s}`")))
}

/// Parses [`write_design`] output, validating counts and the sphere invariants.
pub fn read_design(text: &str) -> Result<WeightedPointSet, ConstructError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty design file"))?;
    if !header.starts_with("# leech-scaled8 design") {
        return Err(bad(format!("unexpected header `{header}`")));
    }
    let nlayers: usize = parse(field(header, "layers")?, "layer count")?;
    let count: usize = parse(field(header, "count")?, "point count")?;
    let dimension: usize = parse(field(header, "dim")?, "dimension")?;

    let mut layers: Vec<(Layer, usize)> = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("# layer") {
            let weight: Rational = parse(field(rest, "weight")?, "weight")?;
            let radius_squared: Rational = parse(field(rest, "r2")?, "r2")?;
            let n: usize = parse(field(rest, "count")?, "layer count")?;
            layers.push((Layer { points: Vec::with_capacity(n), weight, radius_squared }, n));
            continue;
        }
        let (layer, _) = layers.last_mut().ok_or_else(|| bad("point before first layer header"))?;
        let coords = line.split_whitespace().map(|t| parse::<Rational>(t, "coordinate")).collect::<Result<Vec<_>, _>>()?;
        if coords.len() != DIM {
            return Err(bad(format!("point with {} coordinates", coords.len())));
        }
        layer.points.push(ProjectedPoint::new(coords)?);
    }
    if layers.len() != nlayers {
        return Err(bad(format!("header announces {nlayers} layers, found {}", layers.len())));
    }
    for (i, (l, n)) in layers.iter().enumerate() {
        if l.points.len() != *n {
            return Err(bad(format!("layer {i} announces {n} points, found {}", l.points.len())));
        }
    }
    let set = WeightedPointSet::new(dimension, layers.into_iter().map(|(l, _)| l).collect())?;
    if set.len() != count {
        return Err(bad(format!("header announces {count} points, found {}", set.len())));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> WeightedPointSet {
        let mut p = ProjectedPoint::zero();
        p.coords[3] = Rational::frac(2, 5);
        let q = p.neg();
        WeightedPointSet::new(
            1,
            vec![Layer { points: vec![p, q], weight: Rational::frac(1, 729), radius_squared: Rational::frac(1, 50) }],
        )
        .unwrap()
    }

    #[test]
    fn roundtrip() {
        let s = small();
        assert_eq!(read_design(&write_design(&s)).unwrap(), s);
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let text = write_design(&small()).replace("count=2 dim", "count=3 dim");
        assert!(read_design(&text).is_err());
        let text = write_design(&small()).replace("r2=1/50", "r2=1/49");
        assert!(read_design(&text).is_err());
    }
}
