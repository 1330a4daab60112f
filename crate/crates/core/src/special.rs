//! Tail probabilities for the t and F tests reported by the regression diagnostics.

/// Regularized incomplete beta `I_x(a, b)`.
///
/// Continued-fraction evaluation (with the usual `x > (a+1)/(a+b+2)` symmetry
/// switch) from `statrs`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "shape parameters must be positive");
    assert!((0.0..=1.0).contains(&x), "x must lie in [0, 1]");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    statrs::function::beta::beta_reg(a, b, x)
}

/// `2 P(T_df > |t|)`.
pub fn student_t_two_sided_sig(t: f64, df: u64) -> f64 {
    assert!(df >= 1, "df must be at least 1");
    if t.is_nan() {
        return f64::NAN;
    }
    let df = df as f64;
    let x = df / (df + t * t);
    regularized_incomplete_beta(0.5 * df, 0.5, x).clamp(0.0, 1.0)
}

/// `P(F_{df1, df2} > f)`.
pub fn f_sig(f: f64, df1: u64, df2: u64) -> f64 {
    assert!(
        df1 >= 1 && df2 >= 1,
        "degrees of freedom must be at least 1"
    );
    if f.is_nan() {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let x = d2 / (d2 + d1 * f);
    regularized_incomplete_beta(0.5 * d2, 0.5 * d1, x).clamp(0.0, 1.0)
}
