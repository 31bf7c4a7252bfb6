//! File formats: JSON polynomials with optional reference eigenpairs, CSV
//! reports and SVG plots.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use pepbound_core::bounds::{BoundRow, RowFlags};
use pepbound_core::oracle::dd::DdComplex;
use pepbound_core::oracle::{flag_clusters, RefEigenpair, ReferenceSpectrum, RESIDUAL_TOL};
use pepbound_core::polyval::MatrixPolynomial;
use pepbound_core::{CMat, C64};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// `{"n", "d", "coeffs": [[[re, im], ...] × (d+1)]}` with coefficients in
/// ascending degree and entries row-major, optionally followed by refined
/// eigenpairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub n: usize,
    pub d: usize,
    pub coeffs: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refs: Option<Vec<RefEntry>>,
}

/// A reference eigenpair with double-double parts `[hi_re, lo_re, hi_im, lo_im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefEntry {
    pub lambda: [f64; 4],
    pub x: Vec<[f64; 4]>,
    pub residual: f64,
}

impl PolyFile {
    pub fn from_polynomial(p: &MatrixPolynomial, refs: Option<&ReferenceSpectrum>) -> Self {
        Self {
            n: p.n(),
            d: p.grade(),
            coeffs: p
                .coeffs()
                .iter()
                .map(|a| a.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            refs: refs.map(|r| {
                r.pairs
                    .iter()
                    .map(|q| RefEntry {
                        lambda: q.lambda.to_parts(),
                        x: q.x.iter().map(|z| z.to_parts()).collect(),
                        residual: q.residual,
                    })
                    .collect()
            }),
        }
    }

    pub fn to_polynomial(&self) -> Result<MatrixPolynomial> {
        if self.d == 0 || self.n == 0 {
            return Err(BenchError::Format("n and d must be positive".into()));
        }
        if self.coeffs.len() != self.d + 1 {
            return Err(BenchError::Format(format!(
                "expected {} coefficients, found {}",
                self.d + 1,
                self.coeffs.len()
            )));
        }
        let mut out = Vec::with_capacity(self.d + 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.len() != self.n * self.n {
                return Err(BenchError::Format(format!(
                    "coefficient {i} has {} entries, expected {}",
                    c.len(),
                    self.n * self.n
                )));
            }
            if c.iter().flatten().any(|v| !v.is_finite()) {
                return Err(BenchError::Format(format!("coefficient {i} has non-finite entries")));
            }
            let data = c.iter().map(|&[re, im]| C64::new(re, im)).collect();
            out.push(CMat::from_row_major(self.n, self.n, data)?);
        }
        Ok(MatrixPolynomial::new(out)?)
    }

    /// The cached reference eigenpairs, sorted by `|λ|` with clusters
    /// flagged. Stored residuals refer to the coefficients scaled to unit
    /// max norm, passed as `p`; a pair counts as converged when its residual
    /// meets the oracle threshold for `p`.
    pub fn references(&self, p: &MatrixPolynomial) -> Result<Option<ReferenceSpectrum>> {
        let Some(refs) = &self.refs else {
            return Ok(None);
        };
        let threshold = RESIDUAL_TOL * p.max_coeff_norm()?;
        let mut pairs = Vec::with_capacity(refs.len());
        for (k, r) in refs.iter().enumerate() {
            if r.x.len() != self.n {
                return Err(BenchError::Format(format!(
                    "reference {k} has a vector of the wrong length"
                )));
            }
            pairs.push(RefEigenpair {
                lambda: DdComplex::from_parts(r.lambda),
                x: r.x.iter().map(|&v| DdComplex::from_parts(v)).collect(),
                residual: r.residual,
                converged: r.residual <= threshold,
                iterations: 0,
                history: Vec::new(),
                clustered: false,
            });
        }
        pairs.sort_by(|a, b| a.lambda.abs_f64().total_cmp(&b.lambda.abs_f64()));
        flag_clusters(&mut pairs);
        Ok(Some(ReferenceSpectrum {
            pairs,
            failures: Vec::new(),
        }))
    }
}

pub fn parse_poly_json(text: &str) -> Result<PolyFile> {
    serde_json::from_str(text).map_err(|e| BenchError::Format(e.to_string()))
}

pub fn read_poly_file(path: &Path) -> Result<PolyFile> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| BenchError::io(path, e))?;
    parse_poly_json(&text)
}

pub fn write_poly_file(path: &Path, file: &PolyFile) -> Result<()> {
    let text = serde_json::to_string(file).map_err(|e| BenchError::Format(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| BenchError::io(path, e))
}

pub const CSV_HEADER: [&str; 11] = [
    "index",
    "lambda_re",
    "lambda_im",
    "abs_lambda",
    "residual",
    "sep",
    "sin_angle",
    "bound_kron",
    "bound_frob",
    "ratio",
    "flags",
];

const FLAG_NAMES: [&str; 5] = [
    "sep_vanishing",
    "ambiguous_pairing",
    "clustered",
    "recovery_fallback",
    "unconverged_reference",
];

fn flag_bits(f: &RowFlags) -> [bool; 5] {
    [
        f.sep_vanishing,
        f.ambiguous_pairing,
        f.clustered,
        f.recovery_fallback,
        f.unconverged_reference,
    ]
}

pub fn format_flags(f: &RowFlags) -> String {
    FLAG_NAMES
        .iter()
        .zip(flag_bits(f))
        .filter(|(_, on)| *on)
        .map(|(name, _)| *name)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_flags(s: &str) -> Result<RowFlags> {
    let mut f = RowFlags::default();
    for name in s.split(';').filter(|t| !t.is_empty()) {
        match name {
            "sep_vanishing" => f.sep_vanishing = true,
            "ambiguous_pairing" => f.ambiguous_pairing = true,
            "clustered" => f.clustered = true,
            "recovery_fallback" => f.recovery_fallback = true,
            "unconverged_reference" => f.unconverged_reference = true,
            other => return Err(BenchError::Format(format!("unknown flag {other:?}"))),
        }
    }
    Ok(f)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per eigenpair, 1-based index, 17 significant digits.
pub fn write_csv<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            (r.index + 1).to_string(),
            num(r.lambda_computed.re),
            num(r.lambda_computed.im),
            num(r.lambda_computed.norm()),
            num(r.residual),
            num(r.sep),
            num(r.sin_angle),
            num(r.bound_kron),
            num(r.bound_frob),
            num(r.ratio()),
            format_flags(&r.flags),
        ])?;
    }
    w.flush().map_err(|e| BenchError::Csv(e.into()))?;
    Ok(())
}

pub fn emit_csv(rows: &[BoundRow], path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| BenchError::io(path, e))?;
    write_csv(rows, BufWriter::new(f))
}

/// A parsed CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub index: usize,
    pub lambda: C64,
    pub abs_lambda: f64,
    pub residual: f64,
    pub sep: f64,
    pub sin_angle: f64,
    pub bound_kron: f64,
    pub bound_frob: f64,
    pub ratio: f64,
    pub flags: RowFlags,
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(BenchError::Format("unexpected CSV header".into()));
    }
    let field = |rec: &csv::StringRecord, i: usize| -> Result<f64> {
        rec[i]
            .parse()
            .map_err(|_| BenchError::Format(format!("column {} is not a number: {:?}", CSV_HEADER[i], &rec[i])))
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(CsvRow {
            index: rec[0]
                .parse()
                .map_err(|_| BenchError::Format(format!("bad index {:?}", &rec[0])))?,
            lambda: C64::new(field(&rec, 1)?, field(&rec, 2)?),
            abs_lambda: field(&rec, 3)?,
            residual: field(&rec, 4)?,
            sep: field(&rec, 5)?,
            sin_angle: field(&rec, 6)?,
            bound_kron: field(&rec, 7)?,
            bound_frob: field(&rec, 8)?,
            ratio: field(&rec, 9)?,
            flags: parse_flags(&rec[10])?,
        });
    }
    Ok(rows)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<CsvRow>> {
    let f = File::open(path).map_err(|e| BenchError::io(path, e))?;
    read_csv(BufReader::new(f))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const MARK: f64 = 6.0;

/// Decade range covering every finite positive value, at least one decade wide.
fn decade_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let logs: Vec<f64> = values.filter(|v| v.is_finite() && *v > 0.0).map(f64::log10).collect();
    if logs.is_empty() {
        return (-1.0, 0.0);
    }
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min).floor();
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

/// Scatter of `sin∠(x, x̃)` (circles) and the block Kronecker bound
/// (squares) against eigenvector index on a log₁₀ axis. Zero values are
/// drawn on the bottom edge and infinite ones on the top edge.
pub fn write_svg<W: Write>(rows: &[BoundRow], mut out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(BenchError::Config("nothing to plot".into()));
    }
    let (lo, hi) = decade_range(rows.iter().flat_map(|r| [r.sin_angle, r.bound_kron]));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_of = |k: usize| LEFT + (k as f64 + 0.5) / rows.len() as f64 * plot_w;
    let y_of = |v: f64| {
        let t = if v.is_nan() || v <= 0.0 {
            lo
        } else if v.is_infinite() {
            hi
        } else {
            v.log10().clamp(lo, hi)
        };
        TOP + (hi - t) / (hi - lo) * plot_h
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    s.push_str(
        "<style>text{font-family:sans-serif;font-size:12px}.axis{stroke:#000}.grid{stroke:#ddd}\
         .error{fill:#1f77b4}.bound{fill:none;stroke:#d62728;stroke-width:1.5}</style>\n",
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle">Eigenvector error and upper bound</text>"#,
        LEFT + plot_w / 2.0
    );

    let step = ((hi - lo) / 10.0).ceil().max(1.0) as i64;
    let mut e = lo as i64;
    while e <= hi as i64 {
        let y = y_of(10f64.powi(e as i32));
        let _ = writeln!(
            s,
            r#"<line class="grid" x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
        e += step;
    }
    let xstep = (rows.len() / 10).max(1);
    for k in (0..rows.len()).filter(|k| (k + 1) % xstep == 0 || *k == 0) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x_of(k),
            TOP + plot_h + 18.0,
            k + 1
        );
    }
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">eigenvector index</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">log10 scale</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, r) in rows.iter().enumerate() {
        let x = x_of(k);
        let _ = writeln!(
            s,
            r#"<circle class="error" data-index="{}" cx="{x:.2}" cy="{:.2}" r="{:.2}"/>"#,
            k + 1,
            y_of(r.sin_angle),
            MARK / 2.0
        );
        let _ = writeln!(
            s,
            r#"<rect class="bound" data-index="{}" x="{:.2}" y="{:.2}" width="{MARK:.2}" height="{MARK:.2}"/>"#,
            k + 1,
            x - MARK / 2.0,
            y_of(r.bound_kron) - MARK / 2.0
        );
    }

    let lx = LEFT + plot_w + 20.0;
    let _ = writeln!(
        s,
        r#"<circle class="error" cx="{:.2}" cy="{:.2}" r="{:.2}"/><text x="{:.2}" y="{:.2}">sin∠(x, x̃)</text>"#,
        lx,
        TOP + 10.0,
        MARK / 2.0,
        lx + 12.0,
        TOP + 14.0
    );
    let _ = writeln!(
        s,
        r#"<rect class="bound" x="{:.2}" y="{:.2}" width="{MARK:.2}" height="{MARK:.2}"/><text x="{:.2}" y="{:.2}">error bound</text>"#,
        lx - MARK / 2.0,
        TOP + 30.0 - MARK / 2.0,
        lx + 12.0,
        TOP + 34.0
    );
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes()).map_err(|e| BenchError::io("<svg>", e))
}

pub fn emit_plot(rows: &[BoundRow], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_svg(rows, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| BenchError::io(path, e))
}
