//! Result records, their JSON encoding and the on-disk cache.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use annulus_spectra::verify::SuiteReport;
use annulus_spectra::{ComparisonReport, EigenResult, EigenResult2D, FitReport, RadialProfile};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Radial(EigenResult),
    Planar(EigenResult2D),
    Rearrangement { profile: RadialProfile, reports: Vec<ComparisonReport> },
    Reports(Vec<ComparisonReport>),
    Rate { fit: FitReport, reports: Vec<ComparisonReport> },
    Suite(SuiteReport),
}

impl Payload {
    pub fn reports(&self) -> &[ComparisonReport] {
        match self {
            Payload::Radial(_) | Payload::Planar(_) => &[],
            Payload::Rearrangement { reports, .. } | Payload::Reports(reports) | Payload::Rate { reports, .. } => {
                reports
            }
            Payload::Suite(s) => &s.reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.reports().iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// SHA-256 of the canonical config.
    pub config_digest: String,
    pub tool_version: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub command: String,
    /// Canonical `key=value` pairs the digest is computed from.
    pub config: BTreeMap<String, String>,
    pub payload: Payload,
}

impl ResultRecord {
    /// Pretty JSON with every float written as `{:.16e}` (17 significant
    /// digits, enough to round-trip) and non-finite floats as `null`.
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
        self.serialize(&mut ser).expect("records serialize");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }
}

/// Reads one record, or a JSON array of records.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>, CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| CliError::Config(format!("{} is not a result record: {e}", path.display()));
    match serde_json::from_slice::<serde_json::Value>(&bytes).map_err(bad)? {
        serde_json::Value::Array(_) => serde_json::from_slice(&bytes).map_err(bad),
        _ => Ok(vec![serde_json::from_slice(&bytes).map_err(bad)?]),
    }
}

/// Record timestamp: `SOURCE_DATE_EPOCH` when given, the current time otherwise.
pub fn timestamp(source_date_epoch: Option<&str>) -> Result<String, CliError> {
    let time = match source_date_epoch {
        Some(s) => {
            let secs: i64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("SOURCE_DATE_EPOCH must be an integer, got {s:?}")))?;
            chrono::DateTime::from_timestamp(secs, 0)
                .ok_or_else(|| CliError::Config(format!("SOURCE_DATE_EPOCH out of range: {secs}")))?
        }
        None => chrono::Utc::now(),
    };
    Ok(time.to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

pub fn cache_path(dir: &Path, digest: &str) -> PathBuf {
    dir.join(format!("{digest}.json"))
}

/// Cached record bytes for `digest`, if present and written by this version.
pub fn cache_lookup(dir: &Path, digest: &str) -> Option<(Vec<u8>, ResultRecord)> {
    let bytes = std::fs::read(cache_path(dir, digest)).ok()?;
    let record = ResultRecord::from_json(&bytes).ok()?;
    (record.tool_version == TOOL_VERSION && record.config_digest == digest).then_some((bytes, record))
}

/// Writes through a temporary file so readers never see a partial record.
pub fn cache_store(dir: &Path, digest: &str, bytes: &[u8]) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = cache_path(dir, digest);
    let tmp = dir.join(format!(".{digest}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, path)
}

struct FixedFloats(PrettyFormatter<'static>);

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

#[cfg(test)]
mod tests {
    use annulus_spectra::Relation;
    use proptest::prelude::*;

    use super::*;

    fn record(lhs: f64, rhs: f64) -> ResultRecord {
        ResultRecord {
            config_digest: "d".into(),
            tool_version: TOOL_VERSION.into(),
            timestamp: timestamp(Some("0")).unwrap(),
            command: "verify.test".into(),
            config: BTreeMap::new(),
            payload: Payload::Reports(vec![ComparisonReport::relative(
                "t",
                lhs,
                rhs,
                Relation::Ge,
                0.01,
                "x".into(),
            )
            .detail("k", lhs * rhs)]),
        }
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let text = String::from_utf8(record(0.1, 3.0).to_json()).unwrap();
        assert!(text.contains("\"lhs\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"rhs\": 3.0000000000000000e0"), "{text}");
        assert!(text.contains("\"timestamp\": \"1970-01-01T00:00:00Z\""));
    }

    #[test]
    fn non_finite_become_null() {
        let text = String::from_utf8(record(f64::NAN, 1.0).to_json()).unwrap();
        assert!(text.contains("\"lhs\": null"));
    }

    #[test]
    fn bad_epoch_is_rejected() {
        assert!(timestamp(Some("yesterday")).is_err());
        assert_eq!(timestamp(Some("86400")).unwrap(), "1970-01-02T00:00:00Z");
    }

    // Keeps slack and the product detail finite.
    fn moderate() -> impl Strategy<Value = f64> {
        (prop::num::f64::NORMAL | prop::num::f64::ZERO).prop_filter("moderate", |x| *x == 0.0 || (1e-100..1e100).contains(&x.abs()))
    }

    proptest! {
        #[test]
        fn records_round_trip_bit_stably(lhs in moderate(), rhs in moderate()) {
            let r = record(lhs, rhs);
            let bytes = r.to_json();
            let back = ResultRecord::from_json(&bytes).unwrap();
            prop_assert_eq!(back.payload.reports()[0].lhs.to_bits(), lhs.to_bits());
            prop_assert_eq!(back.payload.reports()[0].rhs.to_bits(), rhs.to_bits());
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(back.to_json(), bytes);
        }
    }
}
