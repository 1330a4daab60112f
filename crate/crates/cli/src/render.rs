//! Text rendering of regression reports in the Model Summary / ANOVA /
//! Coefficients layout, three decimals, leading zero dropped below one.

use std::fmt::Write as _;

use empo_core::polyfit::RegressionReport;

/// Three decimals, SPSS style: `.991`, `-5.229`, `1081.351`, `6.548E8`.
pub fn num3(v: f64) -> String {
    if v.abs() >= 1e8 {
        return format!("{v:.3E}");
    }
    let s = format!("{v:.3}");
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        if rest.chars().all(|c| c == '0') {
            format!(".{rest}")
        } else {
            format!("-.{rest}")
        }
    } else {
        s
    }
}

/// Significance at three decimals; anything below 0.0005 shows as `.000`.
pub fn sig3(v: f64) -> String {
    if v < 0.0005 {
        ".000".to_string()
    } else {
        num3(v)
    }
}

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map_or_else(String::new, f)
}

pub fn render_report(report: &RegressionReport) -> String {
    let mut out = String::new();
    let s = &report.summary;
    let a = &report.anova;

    let _ = writeln!(
        out,
        "Polynomial fit of degree {} on {} points",
        report.model.degree, report.m
    );
    if report.exact_fit {
        let _ = writeln!(out, "(exact fit: F and t are undefined)");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Model Summary");
    let _ = writeln!(
        out,
        "{:>8}  {:>10}  {:>19}  {:>28}",
        "R", "R Square", "Adjusted R Square", "Std. Error of the Estimate"
    );
    let _ = writeln!(
        out,
        "{:>8}  {:>10}  {:>19}  {:>28}",
        num3(s.r),
        num3(s.r_squared),
        num3(s.adjusted_r_squared),
        num3(s.std_error_of_estimate)
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "ANOVA");
    let _ = writeln!(
        out,
        "{:<12}  {:>16}  {:>4}  {:>16}  {:>10}  {:>6}",
        "", "Sum of Squares", "df", "Mean Square", "F", "Sig."
    );
    let _ = writeln!(
        out,
        "{:<12}  {:>16}  {:>4}  {:>16}  {:>10}  {:>6}",
        "Regression",
        num3(a.ss_regression),
        a.df_regression,
        num3(a.ms_regression),
        opt(a.f, num3),
        opt(a.sig, sig3)
    );
    let _ = writeln!(
        out,
        "{:<12}  {:>16}  {:>4}  {:>16}",
        "Residual",
        num3(a.ss_residual),
        a.df_residual,
        num3(a.ms_residual)
    );
    let _ = writeln!(
        out,
        "{:<12}  {:>16}  {:>4}",
        "Total",
        num3(a.ss_total),
        a.df_total
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "Coefficients");
    let _ = writeln!(
        out,
        "{:<12}  {:>16}  {:>14}  {:>8}  {:>9}  {:>6}",
        "", "B", "Std. Error", "Beta", "t", "Sig."
    );
    for row in &report.coefficients {
        let _ = writeln!(
            out,
            "{:<12}  {:>16}  {:>14}  {:>8}  {:>9}  {:>6}",
            row.term_name,
            num3(row.b),
            num3(row.std_error),
            opt(row.beta, num3),
            opt(row.t, num3),
            opt(row.sig, sig3)
        );
    }
    out
}
