//! CSV persistence for labeled datasets.
//!
//! Layout: one header row of feature names plus a final `label` column;
//! values written in scientific notation with 17 significant digits, which
//! round-trips f64 exactly. The raw-coefficient name prefix (`a,b,c` or
//! `A..E`) encodes degree and monic convention, and the remaining names are
//! validated against the known feature blocks, so a header is enough to
//! recover the dataset schema.

use std::collections::BTreeMap;
use std::path::Path;

use crate::dataset::{feature_names, DatasetConfig, LabeledDataset};
use crate::data::Matrix;
use crate::error::{Error, Result};
use crate::features::{DiscriminantFeatures, FeatureFamily, QUINTIC_RAW_NAMES};

fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the dataset to `path`.
pub fn write_csv(ds: &LabeledDataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::Io(format!("cannot open {} for writing: {e}", path.display())))?;
    let mut header: Vec<String> = ds.feature_names.clone();
    header.push("label".into());
    w.write_record(&header).map_err(|e| Error::Csv(e.to_string()))?;
    for i in 0..ds.n_rows() {
        let mut record: Vec<String> = ds.features.row(i).iter().map(|&v| format_value(v)).collect();
        record.push(ds.labels[i].to_string());
        w.write_record(&record).map_err(|e| Error::Csv(format!("row {i}: {e}")))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Infer (degree, monic, families) from a header's feature names.
fn schema_from_header(names: &[String]) -> Result<(usize, bool, Vec<FeatureFamily>)> {
    let (degree, monic) = if names.len() >= 3 && names[0] == "a" && names[1] == "b" && names[2] == "c"
    {
        (2usize, false)
    } else {
        let prefix = names
            .iter()
            .zip(QUINTIC_RAW_NAMES.iter())
            .take_while(|(a, b)| a.as_str() == **b)
            .count();
        if !(3..=5).contains(&prefix) {
            return Err(Error::Csv(format!(
                "header does not start with raw coefficient columns (a,b,c or A..E); got {:?}",
                names.iter().take(5).collect::<Vec<_>>()
            )));
        }
        (prefix, true)
    };

    let mut families = Vec::new();
    if degree == 5 {
        let mut pos = degree;
        for fam in FeatureFamily::ALL {
            let block = fam.feature_names();
            if names.len() >= pos + block.len()
                && names[pos..pos + block.len()].iter().zip(block).all(|(a, b)| a == b)
            {
                families.push(fam);
                pos += block.len();
            }
        }
        if pos != names.len() {
            return Err(Error::Csv(format!("unrecognized feature column '{}'", names[pos])));
        }
    } else {
        let expect = DiscriminantFeatures::names(degree)?;
        let n_raw = if degree == 2 { 3 } else { degree };
        let rest = &names[n_raw..];
        if rest.len() != expect.len() || rest.iter().zip(expect).any(|(a, b)| a != b) {
            return Err(Error::Csv(format!(
                "degree-{degree} header must carry the discriminant feature block {expect:?}"
            )));
        }
    }
    Ok((degree, monic, families))
}

/// Read a dataset written by [`write_csv`] (or any CSV with the same layout).
///
/// The returned config reconstructs degree/monic/families from the header and
/// row count from the data; the seed is unknowable from a CSV and is stored
/// as 0, with the coefficient range taken from the observed raw columns.
pub fn read_csv(path: &Path) -> Result<LabeledDataset> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header.last().map(String::as_str) != Some("label") {
        return Err(Error::Csv("missing final 'label' column".into()));
    }
    let names: Vec<String> = header[..header.len() - 1].to_vec();
    let (degree, monic, families) = schema_from_header(&names)?;
    let expected = feature_names(degree, monic, &families)?;
    debug_assert_eq!(expected, names);

    let mut flat: Vec<f64> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    for (row_idx, record) in r.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(format!("row {row_idx}: {e}")))?;
        if record.len() != header.len() {
            return Err(Error::Csv(format!(
                "row {row_idx} has {} fields, expected {}",
                record.len(),
                header.len()
            )));
        }
        for (col, field) in record.iter().take(names.len()).enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Csv(format!("row {row_idx}, column '{}': bad float '{field}'", names[col]))
            })?;
            if !v.is_finite() {
                return Err(Error::Csv(format!(
                    "row {row_idx}, column '{}': non-finite value",
                    names[col]
                )));
            }
            flat.push(v);
        }
        let label_field = record.get(names.len()).unwrap_or("");
        let label: u8 = label_field.parse().map_err(|_| {
            Error::Csv(format!("row {row_idx}, column 'label': bad label '{label_field}'"))
        })?;
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::Csv("no data rows".into()));
    }

    let n_rows = labels.len();
    let features = Matrix::from_flat(flat, n_rows, names.len())?;

    let n_raw = if degree == 2 { 3 } else { degree };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n_rows {
        for &v in &features.row(i)[..n_raw] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if lo >= hi {
        hi = lo + 1.0;
    }

    let mut class_counts: BTreeMap<u8, usize> = BTreeMap::new();
    for &l in &labels {
        *class_counts.entry(l).or_insert(0) += 1;
    }

    Ok(LabeledDataset {
        config: DatasetConfig {
            degree,
            n_samples: n_rows,
            coeff_range: (lo, hi),
            seed: 0,
            monic,
            families,
        },
        feature_names: names,
        features,
        labels,
        class_counts,
        n_resampled: 0,
    })
}
