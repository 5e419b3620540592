//! Schemas and relations.
//!
//! A relation is a bag of string tuples over a named schema. Row identity is
//! the row id: ids are assigned 0..n-1 at construction and survive filtering,
//! so a sub-relation always refers back to the rows of the relation it was
//! taken from. One attribute is designated sensitive; its values drive the
//! representation machinery.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// An ordered attribute list with one designated sensitive attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    attributes: Vec<String>,
    sensitive_index: usize,
}

impl Schema {
    pub fn new<S: Into<String>>(attributes: Vec<S>, sensitive_index: usize) -> Result<Self> {
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        if attributes.is_empty() {
            return Err(Error::Schema("schema has no attributes".into()));
        }
        let mut seen = HashSet::new();
        for name in &attributes {
            if name.is_empty() {
                return Err(Error::Schema("empty attribute name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute {name:?}")));
            }
        }
        if sensitive_index >= attributes.len() {
            return Err(Error::Schema(format!(
                "sensitive index {sensitive_index} out of range for {} attributes",
                attributes.len()
            )));
        }
        Ok(Schema {
            attributes,
            sensitive_index,
        })
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_name(&self, index: usize) -> &str {
        &self.attributes[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    pub fn sensitive_index(&self) -> usize {
        self.sensitive_index
    }

    pub fn check_attribute(&self, index: usize) -> Result<()> {
        if index >= self.arity() {
            Err(Error::AttributeOutOfRange {
                index,
                arity: self.arity(),
            })
        } else {
            Ok(())
        }
    }
}

/// An indexed bag of tuples. Duplicate tuples are allowed; identity is the
/// row id. Cell values are opaque strings compared by exact equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    schema: Schema,
    ids: Vec<usize>,
    rows: Vec<Vec<String>>,
}

impl Relation {
    /// Builds a base relation; rows get ids 0..n-1 in order.
    pub fn new<S: Into<String>>(schema: Schema, rows: Vec<Vec<S>>) -> Result<Self> {
        let arity = schema.arity();
        let mut converted = Vec::with_capacity(rows.len());
        for (row_index, row) in rows.into_iter().enumerate() {
            let row: Vec<String> = row.into_iter().map(Into::into).collect();
            if row.len() != arity {
                return Err(Error::Arity {
                    row: row_index,
                    got: row.len(),
                    want: arity,
                });
            }
            converted.push(row);
        }
        let ids = (0..converted.len()).collect();
        Ok(Relation {
            schema,
            ids,
            rows: converted,
        })
    }

    pub fn empty(schema: Schema) -> Self {
        Relation {
            schema,
            ids: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Rebuilds a relation with the same schema and row ids but new cell
    /// contents; row count and arity must match.
    pub(crate) fn with_rows(&self, rows: Vec<Vec<String>>) -> Relation {
        debug_assert_eq!(rows.len(), self.rows.len());
        debug_assert!(rows.iter().all(|r| r.len() == self.schema.arity()));
        Relation {
            schema: self.schema.clone(),
            ids: self.ids.clone(),
            rows,
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Original row ids carried by this (sub-)relation, in row order.
    pub fn row_ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &[String])> {
        self.ids
            .iter()
            .copied()
            .zip(self.rows.iter().map(Vec::as_slice))
    }

    /// The cells of the row stored at `position` (not row id).
    pub fn row_at(&self, position: usize) -> &[String] {
        &self.rows[position]
    }

    /// Looks a row up by its original id.
    pub fn row_by_id(&self, id: usize) -> Option<&[String]> {
        self.position_of(id).map(|p| self.rows[p].as_slice())
    }

    fn position_of(&self, id: usize) -> Option<usize> {
        // Ids are strictly increasing in row order.
        self.ids.binary_search(&id).ok()
    }

    pub fn sensitive_value_at(&self, position: usize) -> &str {
        &self.rows[position][self.schema.sensitive_index()]
    }

    /// Distinct values of an attribute in first-occurrence order.
    pub fn distinct_values(&self, attribute: usize) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for row in &self.rows {
            let v = row[attribute].as_str();
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }

    /// Sub-relation keeping exactly the rows with the given original ids,
    /// preserving original row ids and order.
    pub fn project_rows(&self, ids: &[usize]) -> Result<Relation> {
        let mut wanted: Vec<usize> = ids.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        let mut out_ids = Vec::with_capacity(wanted.len());
        let mut out_rows = Vec::with_capacity(wanted.len());
        for id in wanted {
            match self.position_of(id) {
                Some(p) => {
                    out_ids.push(id);
                    out_rows.push(self.rows[p].clone());
                }
                None => return Err(Error::UnknownRowId(id)),
            }
        }
        Ok(Relation {
            schema: self.schema.clone(),
            ids: out_ids,
            rows: out_rows,
        })
    }
}
