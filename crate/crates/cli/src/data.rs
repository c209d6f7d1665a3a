//! CSV plumbing for datasets and per-epoch metrics.

use std::io::Write;
use std::path::Path;

use fbeta_core::sim::LabeledDataset;
use fbeta_core::train::EpochMetrics;

use crate::Failure;

/// Feature headers the reader recognizes, matching the simulator output.
static TANK_FEATURES: &[&str] = &["volume", "height"];
static VESSEL_FEATURES: &[&str] = &["R", "L", "cost"];

pub fn write_dataset<W: Write>(
    writer: &mut csv::Writer<W>,
    dataset: &LabeledDataset,
) -> csv::Result<()> {
    let mut header: Vec<&str> = dataset.feature_names.to_vec();
    header.push("label");
    writer.write_record(&header)?;
    for (row, &label) in dataset.features.iter().zip(&dataset.labels) {
        let mut record: Vec<String> = row.iter().map(f64::to_string).collect();
        record.push(label.to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Rebuild a dataset from a `simulate` CSV. Only the two simulator header
/// shapes are accepted; values round-trip exactly, so training on the
/// re-read dataset matches training on the original.
pub fn read_dataset(path: &Path) -> Result<LabeledDataset, Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let feature_names: &'static [&'static str] = if names.len() == TANK_FEATURES.len() + 1
        && names[..TANK_FEATURES.len()] == *TANK_FEATURES
        && names[TANK_FEATURES.len()] == "label"
    {
        TANK_FEATURES
    } else if names.len() == VESSEL_FEATURES.len() + 1
        && names[..VESSEL_FEATURES.len()] == *VESSEL_FEATURES
        && names[VESSEL_FEATURES.len()] == "label"
    {
        VESSEL_FEATURES
    } else {
        return Err(Failure::Domain(format!("unrecognized dataset header {names:?}")));
    };
    let width = feature_names.len();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let line = index + 2; // 1-based, after the header
        let record = record.map_err(|e| Failure::Domain(format!("line {line}: {e}")))?;
        if record.len() != width + 1 {
            return Err(Failure::Domain(format!(
                "line {line}: expected {} fields, got {}",
                width + 1,
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(width);
        for field in record.iter().take(width) {
            row.push(
                field
                    .parse::<f64>()
                    .map_err(|_| Failure::Domain(format!("line {line}: bad number {field:?}")))?,
            );
        }
        let label: u8 = record[width]
            .parse()
            .map_err(|_| Failure::Domain(format!("line {line}: bad label {:?}", &record[width])))?;
        if label > 1 {
            return Err(Failure::Domain(format!("line {line}: label must be 0 or 1")));
        }
        features.push(row);
        labels.push(label);
    }
    Ok(LabeledDataset { features, labels, feature_names })
}

pub fn write_metrics<W: Write>(
    writer: &mut csv::Writer<W>,
    metrics: &[EpochMetrics],
) -> csv::Result<()> {
    writer.write_record([
        "epoch",
        "train_loss",
        "precision",
        "recall",
        "f1",
        "mean_beta_opt",
        "default_fraction",
    ])?;
    for m in metrics {
        writer.write_record(&[
            m.epoch.to_string(),
            m.train_loss.to_string(),
            m.precision.to_string(),
            m.recall.to_string(),
            m.f1.to_string(),
            m.mean_beta_opt.to_string(),
            m.default_fraction.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
