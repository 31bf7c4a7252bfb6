use pepbound::bench::{run_experiment, ExperimentConfig, ExperimentReport};
use pepbound::formats::*;
use pepbound_core::bounds::{BoundRow, RowFlags};
use pepbound_core::kronlin::Label;
use pepbound_core::oracle::reference_spectrum;
use pepbound_core::polyval::{random_polynomial, PolyKind, PolySpec};
use pepbound_core::C64;
use proptest::prelude::*;

fn p1_report() -> ExperimentReport {
    run_experiment(&ExperimentConfig::generated(PolyKind::P1, Label::L1, 11)).unwrap()
}

fn row(index: usize, sin: f64, bound: f64) -> BoundRow {
    BoundRow {
        index,
        lambda_exact: C64::new(1.0, 0.5),
        lambda_computed: C64::new(1.0, 0.5),
        residual: 1e-15,
        sep: 0.1,
        sin_angle: sin,
        bound_kron: bound,
        bound_frob: bound / 1.5,
        g_norm: 1.0,
        flags: RowFlags::default(),
    }
}

/// `(index, cy)` of circles and `(index, y + h/2)` of squares.
fn markers(svg: &str, class: &str) -> Vec<(usize, f64)> {
    svg.lines()
        .filter(|l| l.contains(&format!(r#"class="{class}" data-index="#)))
        .map(|l| {
            let attr = |name: &str| -> f64 {
                let start = l.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
                l[start..].split('"').next().unwrap().parse().unwrap()
            };
            let y = if class == "error" {
                attr("cy")
            } else {
                attr("y") + attr("height") / 2.0
            };
            (attr("data-index") as usize, y)
        })
        .collect()
}

#[test]
fn polynomial_json_round_trips_exactly() {
    let p = random_polynomial(&PolySpec::new(PolyKind::P2, 3, 5, 8)).unwrap();
    let refs = reference_spectrum(&p).unwrap();
    let file = PolyFile::from_polynomial(&p, Some(&refs));
    let text = serde_json::to_string(&file).unwrap();
    let back = parse_poly_json(&text).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.to_polynomial().unwrap(), p);
    let cached = back.references(&p).unwrap().unwrap();
    assert_eq!(cached.pairs.len(), refs.pairs.len());
    for (a, b) in cached.pairs.iter().zip(&refs.pairs) {
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.x, b.x);
        assert_eq!(a.converged, b.converged);
    }
    let bare = PolyFile::from_polynomial(&p, None);
    assert!(!serde_json::to_string(&bare).unwrap().contains("refs"));
    assert!(bare.references(&p).unwrap().is_none());
}

#[test]
fn polynomial_json_is_strict() {
    let ok = r#"{"n": 1, "d": 1, "coeffs": [[[1, 0]], [[0, 1]]]}"#;
    assert!(parse_poly_json(ok).unwrap().to_polynomial().is_ok());
    let unknown = r#"{"n": 1, "d": 1, "coeffs": [[[1, 0]], [[0, 1]]], "extra": 3}"#;
    assert!(parse_poly_json(unknown).is_err());
    let short = parse_poly_json(r#"{"n": 1, "d": 2, "coeffs": [[[1, 0]], [[0, 1]]]}"#).unwrap();
    assert!(short.to_polynomial().is_err());
    let wide = parse_poly_json(r#"{"n": 2, "d": 1, "coeffs": [[[1, 0]], [[0, 1]]]}"#).unwrap();
    assert!(wide.to_polynomial().is_err());
    assert!(parse_poly_json(r#"{"n": 1, "d": 1, "coeffs": [[[1, 0, 2]], [[0, 1]]]}"#).is_err());
    let zero_grade = parse_poly_json(r#"{"n": 1, "d": 0, "coeffs": [[[1, 0]]]}"#).unwrap();
    assert!(zero_grade.to_polynomial().is_err());
}

#[test]
fn empty_report_is_header_only() {
    let mut buf = Vec::new();
    write_csv(&[], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), CSV_HEADER.join(",") + "\n");
}

#[test]
fn csv_round_trip_recomputes_ratio_exactly() {
    let report = p1_report();
    let mut buf = Vec::new();
    write_csv(&report.rows, &mut buf).unwrap();
    assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), 51);
    let parsed = read_csv(buf.as_slice()).unwrap();
    assert_eq!(parsed.len(), report.rows.len());
    for (p, r) in parsed.iter().zip(&report.rows) {
        assert_eq!(p.index, r.index + 1);
        assert_eq!(p.lambda, r.lambda_computed);
        assert_eq!(p.sin_angle, r.sin_angle);
        assert_eq!(p.bound_kron, r.bound_kron);
        assert_eq!(p.ratio, p.bound_kron / p.sin_angle);
        assert_eq!(p.flags, r.flags);
    }
    assert!(parsed.windows(2).all(|w| w[0].abs_lambda <= w[1].abs_lambda));
}

#[test]
fn csv_rejects_foreign_headers() {
    assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn single_row_plot_has_two_markers() {
    let mut buf = Vec::new();
    write_svg(&[row(0, 1e-15, 1e-13)], &mut buf).unwrap();
    let svg = String::from_utf8(buf).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(markers(&svg, "error").len(), 1);
    assert_eq!(markers(&svg, "bound").len(), 1);
    assert!(svg.contains("eigenvector index") && svg.contains("log10 scale"));
    assert!(write_svg(&[], Vec::new()).is_err());
}

#[test]
fn bound_series_lies_above_error_series() {
    let report = p1_report();
    let mut buf = Vec::new();
    write_svg(&report.rows, &mut buf).unwrap();
    let svg = String::from_utf8(buf.clone()).unwrap();
    let errors = markers(&svg, "error");
    let bounds = markers(&svg, "bound");
    assert_eq!(errors.len(), 50);
    assert_eq!(bounds.len(), 50);
    for (e, b) in errors.iter().zip(&bounds) {
        assert_eq!(e.0, b.0);
        // SVG y grows downwards
        assert!(
            b.1 <= e.1 + 0.01,
            "index {}: bound at {} below error at {}",
            e.0,
            b.1,
            e.1
        );
    }
    let mut again = Vec::new();
    write_svg(&report.rows, &mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn degenerate_values_are_clipped_to_the_frame() {
    let rows = [row(0, 0.0, f64::INFINITY), row(1, 1e-14, 1e-12)];
    let mut buf = Vec::new();
    write_svg(&rows, &mut buf).unwrap();
    let svg = String::from_utf8(buf).unwrap();
    assert!(!svg.contains("NaN") && !svg.contains("inf"));
}

proptest! {
    #[test]
    fn flags_round_trip(bits in proptest::array::uniform5(any::<bool>())) {
        let f = RowFlags {
            sep_vanishing: bits[0],
            ambiguous_pairing: bits[1],
            clustered: bits[2],
            recovery_fallback: bits[3],
            unconverged_reference: bits[4],
        };
        let text = format_flags(&f);
        prop_assert_eq!(parse_flags(&text).unwrap(), f);
        prop_assert_eq!(text.is_empty(), !f.any());
    }

    #[test]
    fn csv_numbers_round_trip(re in any::<f64>(), sin in 0.0f64..1.0, bound in 0.0f64..1e3) {
        prop_assume!(re.is_finite());
        let mut r = row(0, sin, bound);
        r.lambda_computed = C64::new(re, -re / 3.0);
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let p = &read_csv(buf.as_slice()).unwrap()[0];
        prop_assert_eq!(p.lambda, r.lambda_computed);
        prop_assert_eq!(p.sin_angle, sin);
        prop_assert_eq!(p.bound_kron, bound);
        prop_assert_eq!(p.bound_frob, r.bound_frob);
    }
}
