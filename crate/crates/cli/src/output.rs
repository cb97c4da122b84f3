//! CSV and JSON encodings of sweep rows.

use serde::Deserialize;
use serde_json::{json, Value};

use squo_core::{ScanResult, SweepRow};

use crate::error::CliError;

pub const HEADER: [&str; 16] = [
    "h",
    "energy0",
    "gap",
    "m_x",
    "m_z",
    "g_xx",
    "g_yy",
    "g_zz",
    "tangle",
    "vn_entropy",
    "exe",
    "exe_closed_form",
    "de_perp1",
    "de_perp2",
    "eer",
    "resolved",
];

/// Flat view of a row as it appears in a file. Unavailable values are NaN
/// and a divergent ratio is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct CsvRow {
    pub h: f64,
    pub energy0: f64,
    pub gap: f64,
    pub m_x: f64,
    pub m_z: f64,
    pub g_xx: f64,
    pub g_yy: f64,
    pub g_zz: f64,
    pub tangle: f64,
    pub vn_entropy: f64,
    pub exe: f64,
    pub exe_closed_form: f64,
    pub de_perp1: f64,
    pub de_perp2: f64,
    pub eer: f64,
    pub resolved: bool,
}

impl From<&SweepRow> for CsvRow {
    fn from(r: &SweepRow) -> Self {
        CsvRow {
            h: r.h,
            energy0: r.energy0,
            gap: r.gap,
            m_x: r.m_x,
            m_z: r.m_z,
            g_xx: r.g_xx,
            g_yy: r.g_yy,
            g_zz: r.g_zz,
            tangle: r.tangle,
            vn_entropy: r.vn_entropy,
            exe: r.exe,
            exe_closed_form: r.exe_closed_form.unwrap_or(f64::NAN),
            de_perp1: r.de_perp1,
            de_perp2: r.de_perp2,
            eer: r.eer.value(),
            resolved: r.resolved,
        }
    }
}

impl CsvRow {
    fn floats(&self) -> [f64; 15] {
        [
            self.h,
            self.energy0,
            self.gap,
            self.m_x,
            self.m_z,
            self.g_xx,
            self.g_yy,
            self.g_zz,
            self.tangle,
            self.vn_entropy,
            self.exe,
            self.exe_closed_form,
            self.de_perp1,
            self.de_perp2,
            self.eer,
        ]
    }

    fn record(&self) -> Vec<String> {
        let mut fields: Vec<String> = self.floats().iter().map(|&x| format_float(x)).collect();
        fields.push(self.resolved.to_string());
        fields
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (name, x) in HEADER.iter().zip(self.floats()) {
            let value = if name == &"exe_closed_form" && x.is_nan() { Value::Null } else { float_json(x) };
            map.insert(name.to_string(), value);
        }
        map.insert("resolved".into(), json!(self.resolved));
        Value::Object(map)
    }
}

/// Shortest decimal that parses back to the same value; scientific
/// notation outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x != 0.0 && !(1e-5..1e16).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Finite numbers stay numbers; the rest become the same strings as in
/// CSV.
pub fn float_json(x: f64) -> Value {
    if x.is_finite() { json!(x) } else { json!(format_float(x)) }
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[CsvRow]) -> Result<(), CliError> {
    write_table(out, &HEADER, rows.iter().map(|r| r.record()))
}

/// Header line plus one record per item, all fields pre-formatted.
pub fn write_table<W: std::io::Write>(
    out: W,
    header: &[&str],
    records: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let encode = |e: csv::Error| CliError::Encode(e.to_string());
    writer.write_record(header).map_err(encode)?;
    for record in records {
        writer.write_record(&record).map_err(encode)?;
    }
    writer.flush().map_err(|e| CliError::Encode(e.to_string()))
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CsvRow>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| CliError::Encode(e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::Encode(format!("unexpected header {header:?}")));
    }
    reader
        .deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(|e| CliError::Encode(e.to_string()))
}

pub fn csv_string(rows: &[CsvRow]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    String::from_utf8(buf).map_err(|e| CliError::Encode(e.to_string()))
}

pub fn candidates_json(candidates: &[(f64, f64)]) -> Value {
    Value::Array(
        candidates
            .iter()
            .map(|&(h, height)| json!({ "h": h, "height": float_json(height) }))
            .collect(),
    )
}

pub fn scan_json(result: &ScanResult) -> Value {
    json!({
        "rows": result.rows.iter().map(|r| CsvRow::from(r).to_json()).collect::<Vec<_>>(),
        "h_f_detected": result.h_f_detected,
        "h_f_formula": result.h_f_formula,
        "critical_candidates": candidates_json(&result.critical_candidates),
    })
}
