//! RFC-4180 CSV input and output for relations. The header row defines the
//! schema; cell values are kept verbatim.

use std::fs::File;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use rsrepair_core::relation::{Relation, Schema};

pub fn load_relation_csv(path: &Path, sensitive: &str) -> Result<Relation> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let header = reader
        .headers()
        .with_context(|| format!("reading header of {}", path.display()))?
        .clone();
    let attributes: Vec<String> = header.iter().map(str::to_string).collect();
    let sensitive_index = attributes
        .iter()
        .position(|a| a == sensitive)
        .ok_or_else(|| anyhow!("sensitive attribute {sensitive:?} not in header {attributes:?}"))?;
    let schema = Schema::new(attributes, sensitive_index)?;

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.with_context(|| {
            format!("data row {} of {}", index + 1, path.display())
        })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(Relation::new(schema, rows)?)
}

pub fn save_relation_csv(relation: &Relation, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(relation.schema().attributes())?;
    for (_, row) in relation.rows() {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
