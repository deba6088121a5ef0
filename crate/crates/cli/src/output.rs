//! CSV tables and PGM masks.

use std::io::Write;

use annulus_spectra::{CellClass, FitReport, GridDomain, PlanarField, RadialProfile};

use crate::args::PlotKind;
use crate::record::{Payload, ResultRecord};
use crate::CliError;

/// Shortest decimal that reads back to the same `f64`; scientific outside
/// `[1e-4, 1e15)`. Non-finite values become empty cells.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        String::new()
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn header(kind: PlotKind) -> [&'static str; 3] {
    match kind {
        PlotKind::Fit => ["x", "y", "fit_y"],
        PlotKind::Profile => ["r", "u", "flux"],
        PlotKind::Field => ["x", "y", "value"],
    }
}

fn fit_rows(fit: &FitReport, rows: &mut Vec<[String; 3]>) {
    for (&x, &y) in fit.xs.iter().zip(&fit.ys) {
        rows.push([num(x), num(y), num(fit.fit_y(x))]);
    }
}

fn profile_rows(profile: &RadialProfile, rows: &mut Vec<[String; 3]>) {
    for i in 0..profile.len() {
        rows.push([num(profile.r[i]), num(profile.value[i]), num(profile.flux[i])]);
    }
}

fn field_rows(field: &PlanarField, rows: &mut Vec<[String; 3]>) {
    let domain = &field.domain;
    for (k, class) in domain.cell_class.iter().enumerate() {
        if *class != CellClass::Exterior {
            let (x, y) = domain.coords(k);
            rows.push([num(x), num(y), num(field.values[k])]);
        }
    }
}

/// What a payload plots as, if anything.
pub fn plot_kind(payload: &Payload) -> Option<PlotKind> {
    match payload {
        Payload::Rate { .. } | Payload::Suite(_) => Some(PlotKind::Fit),
        Payload::Radial(_) | Payload::Rearrangement { .. } => Some(PlotKind::Profile),
        Payload::Planar(_) => Some(PlotKind::Field),
        Payload::Reports(_) => None,
    }
}

/// Plot rows of the records, in order. All records must plot as the same
/// kind (and as `kind` when given); an empty set gives just the header.
pub fn plot_csv(records: &[ResultRecord], kind: Option<PlotKind>, out: impl Write) -> Result<(), CliError> {
    let mut found = kind;
    let mut rows = Vec::new();
    for (i, record) in records.iter().enumerate() {
        let k = plot_kind(&record.payload).ok_or_else(|| {
            CliError::Config(format!("record {i} ({}) has no plottable data", record.command))
        })?;
        match found {
            Some(f) if f != k => {
                return Err(CliError::Config(format!(
                    "mixed payload types: record {i} ({}) plots as {k:?}, expected {f:?}",
                    record.command
                )))
            }
            _ => found = Some(k),
        }
        match &record.payload {
            Payload::Rate { fit, .. } => fit_rows(fit, &mut rows),
            Payload::Suite(s) => s.fits.iter().for_each(|f| fit_rows(f, &mut rows)),
            Payload::Radial(r) => profile_rows(&r.profile, &mut rows),
            Payload::Rearrangement { profile, .. } => profile_rows(profile, &mut rows),
            Payload::Planar(p) => field_rows(&p.field, &mut rows),
            Payload::Reports(_) => unreachable!(),
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(found.unwrap_or(PlotKind::Fit))).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Field values on every non-exterior node, as x, y, value.
pub fn field_csv(field: &PlanarField, out: impl Write) -> Result<(), CliError> {
    let mut rows = Vec::new();
    field_rows(field, &mut rows);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(PlotKind::Field)).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Plain (ASCII) PGM of the node classes, top row first: 0 exterior,
/// 85 Dirichlet boundary, 170 Neumann boundary, 255 interior.
pub fn mask_pgm(domain: &GridDomain, mut out: impl Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "P2\n{} {}\n255", domain.nx, domain.ny).map_err(io)?;
    for j in (0..domain.ny).rev() {
        let line: Vec<&str> = (0..domain.nx)
            .map(|i| match domain.cell_class[domain.index(i, j)] {
                CellClass::Exterior => "0",
                CellClass::DirichletBoundary => "85",
                CellClass::NeumannBoundary => "170",
                CellClass::Interior => "255",
            })
            .collect();
        writeln!(out, "{}", line.join(" ")).map_err(io)?;
    }
    Ok(())
}
