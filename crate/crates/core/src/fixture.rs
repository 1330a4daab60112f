//! Published interchange statistics for exchange selection sort on
//! geometric(p) input, `n = 1000`, 100 trials.

use crate::polyfit::DataPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub p: f64,
    pub mean_c: f64,
    pub sd_c: f64,
    pub cv_c: f64,
}

pub const TABLE1_N: usize = 1000;
pub const TABLE1_TRIALS: usize = 100;

/// Rows as printed, including the printed precision of each column.
pub const TABLE1_TEXT: &str = "\
p,mean_c,sd_c,cv_c
.1,30590.93,1785.8720,.05838
.2,17548.08,1294.4680,.0737669
.3,12175.57,1035.9940,.0850879
.4,9110.45,784.3701,.0860956
.5,6832.90,750.3445,.1098135
.6,5336.36,602.0993,.1128296
.7,4192.42,588.1761,.1402951
.8,3116.07,417.2080,.1338892
.9,2164.99,353.7879,.1634132
";

pub const TABLE1: [Table1Row; 9] = [
    Table1Row {
        p: 0.1,
        mean_c: 30590.93,
        sd_c: 1785.8720,
        cv_c: 0.05838,
    },
    Table1Row {
        p: 0.2,
        mean_c: 17548.08,
        sd_c: 1294.4680,
        cv_c: 0.0737669,
    },
    Table1Row {
        p: 0.3,
        mean_c: 12175.57,
        sd_c: 1035.9940,
        cv_c: 0.0850879,
    },
    Table1Row {
        p: 0.4,
        mean_c: 9110.45,
        sd_c: 784.3701,
        cv_c: 0.0860956,
    },
    Table1Row {
        p: 0.5,
        mean_c: 6832.90,
        sd_c: 750.3445,
        cv_c: 0.1098135,
    },
    Table1Row {
        p: 0.6,
        mean_c: 5336.36,
        sd_c: 602.0993,
        cv_c: 0.1128296,
    },
    Table1Row {
        p: 0.7,
        mean_c: 4192.42,
        sd_c: 588.1761,
        cv_c: 0.1402951,
    },
    Table1Row {
        p: 0.8,
        mean_c: 3116.07,
        sd_c: 417.2080,
        cv_c: 0.1338892,
    },
    Table1Row {
        p: 0.9,
        mean_c: 2164.99,
        sd_c: 353.7879,
        cv_c: 0.1634132,
    },
];

/// `(p, mean_c)` pairs for regression.
pub fn table1_points() -> Vec<DataPoint> {
    TABLE1
        .iter()
        .map(|r| DataPoint::new(r.p, r.mean_c))
        .collect()
}
