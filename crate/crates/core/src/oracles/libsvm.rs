//! Reader and writer for the libsvm text format (`label idx:val idx:val …`).

use std::path::Path;

use crate::blocks::Blocks;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::logistic::Dataset;

struct RawLine {
    line: usize,
    label: f64,
    entries: Vec<(usize, f64)>,
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

/// Parses libsvm text into a dense dataset.
///
/// Indices are 1-based and strictly ascending within a line; the dimension is
/// the largest index seen. Blank lines and `#` comments are skipped. Labels
/// `≤ 0` map to −1 and positive labels to +1, except that a file whose labels
/// are exactly two positive values (e.g. `1`/`2`) maps the smaller to −1.
pub fn parse_libsvm<T: Scalar>(text: &str) -> Result<Dataset<T>> {
    let mut rows = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line");
        let label: f64 =
            label_tok.parse().map_err(|_| parse_error(line, format!("non-numeric label `{label_tok}`")))?;
        if !label.is_finite() {
            return Err(parse_error(line, format!("non-finite label `{label_tok}`")));
        }
        let mut entries = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) =
                tok.split_once(':').ok_or_else(|| parse_error(line, format!("expected `index:value`, got `{tok}`")))?;
            let idx: usize = idx.parse().map_err(|_| parse_error(line, format!("non-numeric index `{idx}`")))?;
            if idx == 0 {
                return Err(parse_error(line, "indices are 1-based"));
            }
            if idx <= last {
                return Err(parse_error(line, format!("index {idx} not ascending after {last}")));
            }
            let val: f64 = val.parse().map_err(|_| parse_error(line, format!("non-numeric value `{val}`")))?;
            if !val.is_finite() {
                return Err(parse_error(line, format!("non-finite value `{val}`")));
            }
            entries.push((idx, val));
            last = idx;
        }
        rows.push(RawLine { line, label, entries });
    }

    if rows.is_empty() {
        return Err(Error::Empty("libsvm input has no examples"));
    }
    let dim = rows.iter().filter_map(|r| r.entries.last().map(|e| e.0)).max().unwrap_or(0);
    if dim == 0 {
        return Err(parse_error(rows[0].line, "no feature present in any example"));
    }

    let mut distinct: Vec<f64> = rows.iter().map(|r| r.label).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let negative_label = if distinct.len() == 2 && distinct[0] > 0.0 { Some(distinct[0]) } else { None };

    let mut features = Blocks::zeros(rows.len(), dim);
    let mut labels = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let positive = match negative_label {
            Some(neg) => r.label != neg,
            None => r.label > 0.0,
        };
        labels.push(if positive { T::one() } else { -T::one() });
        let block = features.block_mut(i);
        for &(idx, val) in &r.entries {
            block[idx - 1] = T::of(val);
        }
    }
    Dataset::new(features, labels)
}

pub fn read_libsvm<T: Scalar>(path: &Path) -> Result<Dataset<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_libsvm(&text)
}

/// Writes nonzero entries (and always the last coordinate, so the dimension
/// survives a round trip).
pub fn write_libsvm<T: Scalar>(data: &Dataset<T>) -> String {
    let mut out = String::new();
    let d = data.dim();
    for (row, &y) in data.features().iter().zip(data.labels()) {
        out.push_str(if y > T::zero() { "+1" } else { "-1" });
        for (j, &v) in row.iter().enumerate() {
            if v != T::zero() || j + 1 == d {
                out.push_str(&format!(" {}:{}", j + 1, v));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_lines() {
        let d: Dataset<f64> = parse_libsvm("+1 1:0.5 3:-2\n").unwrap();
        assert_eq!(d.dim(), 3);
        assert_eq!(d.labels(), &[1.0]);
        assert_eq!(d.features().block(0), &[0.5, 0.0, -2.0]);

        let d: Dataset<f64> = parse_libsvm("0 2:1\n").unwrap();
        assert_eq!(d.labels(), &[-1.0]);
        assert_eq!(d.features().block(0), &[0.0, 1.0]);
    }

    #[test]
    fn comments_blank_lines_and_label_sets() {
        let text = "# header\n\n-1 1:1\n+1 2:3 # trailing\n";
        let d: Dataset<f64> = parse_libsvm(text).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.labels(), &[-1.0, 1.0]);

        let d: Dataset<f64> = parse_libsvm("1 1:1\n2 1:2\n2 2:1\n").unwrap();
        assert_eq!(d.labels(), &[-1.0, 1.0, 1.0]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_libsvm::<f64>("1 2:a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
        let err = parse_libsvm::<f64>("1 1:1\n\n-1 3:1 2:1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(matches!(parse_libsvm::<f64>("x 1:1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_libsvm::<f64>("1 0:1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_libsvm::<f64>("1 1-1"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_libsvm::<f64>("# nothing\n").is_err());
    }

    #[test]
    fn round_trip_keeps_trailing_zero_dimension() {
        let d: Dataset<f64> = parse_libsvm("+1 1:0.25 4:0\n-1 2:-3.5\n").unwrap();
        assert_eq!(d.dim(), 4);
        let back: Dataset<f64> = parse_libsvm(&write_libsvm(&d)).unwrap();
        assert_eq!(back, d);
    }
}
