// SPDX-License-Identifier: Apache-2.0

//! Nullable columnar tables and their Parquet encoding.

use std::fs::File;
use std::path::Path;
use std::sync::Arc;

use parquet::basic::{ConvertedType, LogicalType, Repetition, Type as PhysicalType};
use parquet::data_type::{BoolType, ByteArray, ByteArrayType, DoubleType, Int64Type};
use parquet::file::properties::WriterProperties;
use parquet::file::reader::{FileReader, SerializedFileReader};
use parquet::file::writer::SerializedFileWriter;
use parquet::record::Field;
use parquet::schema::types::Type;

use super::StoreError;

#[derive(Clone, Debug, PartialEq)]
pub enum Column {
    I64(Vec<Option<i64>>),
    F64(Vec<Option<f64>>),
    Str(Vec<Option<String>>),
    Bool(Vec<Option<bool>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::I64(v) => v.len(),
            Column::F64(v) => v.len(),
            Column::Str(v) => v.len(),
            Column::Bool(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn empty_like(&self) -> Column {
        match self {
            Column::I64(_) => Column::I64(Vec::new()),
            Column::F64(_) => Column::F64(Vec::new()),
            Column::Str(_) => Column::Str(Vec::new()),
            Column::Bool(_) => Column::Bool(Vec::new()),
        }
    }

    fn extend(&mut self, other: &Column) -> bool {
        match (self, other) {
            (Column::I64(a), Column::I64(b)) => a.extend_from_slice(b),
            (Column::F64(a), Column::F64(b)) => a.extend_from_slice(b),
            (Column::Str(a), Column::Str(b)) => a.extend_from_slice(b),
            (Column::Bool(a), Column::Bool(b)) => a.extend_from_slice(b),
            _ => return false,
        }
        true
    }

    fn physical(&self) -> PhysicalType {
        match self {
            Column::I64(_) => PhysicalType::INT64,
            Column::F64(_) => PhysicalType::DOUBLE,
            Column::Str(_) => PhysicalType::BYTE_ARRAY,
            Column::Bool(_) => PhysicalType::BOOLEAN,
        }
    }

    /// Cell text for CSV output; empty for null.
    pub fn cell_text(&self, row: usize) -> String {
        match self {
            Column::I64(v) => v[row].map(|x| x.to_string()).unwrap_or_default(),
            Column::F64(v) => v[row].map(|x| x.to_string()).unwrap_or_default(),
            Column::Str(v) => v[row].clone().unwrap_or_default(),
            Column::Bool(v) => v[row].map(|x| x.to_string()).unwrap_or_default(),
        }
    }
}

/// Named columns of equal length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, Column)>,
}

impl Table {
    pub fn new() -> Table {
        Table::default()
    }

    pub fn push(&mut self, name: &str, col: Column) -> &mut Self {
        debug_assert!(self.columns.is_empty() || col.len() == self.num_rows());
        self.columns.push((name.to_string(), col));
        self
    }

    pub fn num_rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    pub fn column(&self, name: &str) -> Result<&Column, StoreError> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| StoreError::Corrupt(format!("missing column `{name}`")))
    }

    pub fn i64s(&self, name: &str) -> Result<&[Option<i64>], StoreError> {
        match self.column(name)? {
            Column::I64(v) => Ok(v),
            _ => Err(StoreError::Corrupt(format!("column `{name}` is not INT64"))),
        }
    }

    pub fn f64s(&self, name: &str) -> Result<&[Option<f64>], StoreError> {
        match self.column(name)? {
            Column::F64(v) => Ok(v),
            _ => Err(StoreError::Corrupt(format!(
                "column `{name}` is not DOUBLE"
            ))),
        }
    }

    pub fn strs(&self, name: &str) -> Result<&[Option<String>], StoreError> {
        match self.column(name)? {
            Column::Str(v) => Ok(v),
            _ => Err(StoreError::Corrupt(format!("column `{name}` is not UTF8"))),
        }
    }

    pub fn bools(&self, name: &str) -> Result<&[Option<bool>], StoreError> {
        match self.column(name)? {
            Column::Bool(v) => Ok(v),
            _ => Err(StoreError::Corrupt(format!(
                "column `{name}` is not BOOLEAN"
            ))),
        }
    }

    /// Append the rows of `other`; schemas must agree.
    pub fn append(&mut self, other: &Table) -> Result<(), StoreError> {
        if self.columns.is_empty() {
            self.columns = other.columns.clone();
            return Ok(());
        }
        let same = self.columns.len() == other.columns.len()
            && self
                .columns
                .iter()
                .zip(&other.columns)
                .all(|((a, _), (b, _))| a == b);
        if !same {
            return Err(StoreError::Corrupt(
                "appending tables with different schemas".into(),
            ));
        }
        for ((_, a), (_, b)) in self.columns.iter_mut().zip(&other.columns) {
            if !a.extend(b) {
                return Err(StoreError::Corrupt(
                    "appending columns of different types".into(),
                ));
            }
        }
        Ok(())
    }

    /// Same schema, zero rows.
    pub fn empty_like(&self) -> Table {
        Table {
            columns: self
                .columns
                .iter()
                .map(|(n, c)| (n.clone(), c.empty_like()))
                .collect(),
        }
    }

    pub fn to_csv(&self) -> Result<String, StoreError> {
        let mut w = ::csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|(n, _)| n.as_str()))
            .map_err(|e| StoreError::Corrupt(e.to_string()))?;
        for r in 0..self.num_rows() {
            w.write_record(self.columns.iter().map(|(_, c)| c.cell_text(r)))
                .map_err(|e| StoreError::Corrupt(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| StoreError::Corrupt(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn schema(&self) -> Result<Type, StoreError> {
        let mut fields = Vec::with_capacity(self.columns.len());
        for (name, col) in &self.columns {
            let mut b = Type::primitive_type_builder(name, col.physical())
                .with_repetition(Repetition::OPTIONAL);
            if matches!(col, Column::Str(_)) {
                b = b
                    .with_logical_type(Some(LogicalType::String))
                    .with_converted_type(ConvertedType::UTF8);
            }
            fields.push(Arc::new(b.build()?));
        }
        Ok(Type::group_type_builder("schema")
            .with_fields(fields)
            .build()?)
    }

    pub fn write_parquet(&self, path: &Path) -> Result<(), StoreError> {
        let file = File::create(path)?;
        let props = Arc::new(
            WriterProperties::builder()
                .set_created_by("eda-schema".into())
                .build(),
        );
        let mut w = SerializedFileWriter::new(file, Arc::new(self.schema()?), props)?;
        if self.num_rows() > 0 {
            let mut rg = w.next_row_group()?;
            for (_, col) in &self.columns {
                let mut cw = rg.next_column()?.expect("column count matches schema");
                match col {
                    Column::I64(v) => {
                        let (vals, defs) = split(v, |x| *x);
                        cw.typed::<Int64Type>()
                            .write_batch(&vals, Some(&defs), None)?;
                    }
                    Column::F64(v) => {
                        let (vals, defs) = split(v, |x| *x);
                        cw.typed::<DoubleType>()
                            .write_batch(&vals, Some(&defs), None)?;
                    }
                    Column::Bool(v) => {
                        let (vals, defs) = split(v, |x| *x);
                        cw.typed::<BoolType>()
                            .write_batch(&vals, Some(&defs), None)?;
                    }
                    Column::Str(v) => {
                        let (vals, defs) = split(v, |x| ByteArray::from(x.as_str()));
                        cw.typed::<ByteArrayType>()
                            .write_batch(&vals, Some(&defs), None)?;
                    }
                }
                cw.close()?;
            }
            rg.close()?;
        }
        w.close()?;
        Ok(())
    }

    pub fn read_parquet(path: &Path) -> Result<Table, StoreError> {
        let reader = SerializedFileReader::new(File::open(path)?)?;
        let mut columns: Vec<(String, Column)> = reader
            .metadata()
            .file_metadata()
            .schema_descr()
            .columns()
            .iter()
            .map(|c| {
                let col = match c.physical_type() {
                    PhysicalType::INT64 => Column::I64(Vec::new()),
                    PhysicalType::DOUBLE => Column::F64(Vec::new()),
                    PhysicalType::BOOLEAN => Column::Bool(Vec::new()),
                    _ => Column::Str(Vec::new()),
                };
                (c.name().to_string(), col)
            })
            .collect();
        for row in reader.get_row_iter(None)? {
            let row = row?;
            for ((_, col), (_, field)) in columns.iter_mut().zip(row.get_column_iter()) {
                let ok = match (col, field) {
                    (Column::I64(v), Field::Null) => {
                        v.push(None);
                        true
                    }
                    (Column::F64(v), Field::Null) => {
                        v.push(None);
                        true
                    }
                    (Column::Str(v), Field::Null) => {
                        v.push(None);
                        true
                    }
                    (Column::Bool(v), Field::Null) => {
                        v.push(None);
                        true
                    }
                    (Column::I64(v), Field::Long(x)) => {
                        v.push(Some(*x));
                        true
                    }
                    (Column::F64(v), Field::Double(x)) => {
                        v.push(Some(*x));
                        true
                    }
                    (Column::Str(v), Field::Str(x)) => {
                        v.push(Some(x.clone()));
                        true
                    }
                    (Column::Bool(v), Field::Bool(x)) => {
                        v.push(Some(*x));
                        true
                    }
                    _ => false,
                };
                if !ok {
                    return Err(StoreError::Corrupt(format!(
                        "unexpected value {field:?} in {}",
                        path.display()
                    )));
                }
            }
        }
        Ok(Table { columns })
    }
}

fn split<T, U>(v: &[Option<T>], f: impl Fn(&T) -> U) -> (Vec<U>, Vec<i16>) {
    let mut vals = Vec::with_capacity(v.len());
    let mut defs = Vec::with_capacity(v.len());
    for x in v {
        match x {
            Some(x) => {
                vals.push(f(x));
                defs.push(1);
            }
            None => defs.push(0),
        }
    }
    (vals, defs)
}
