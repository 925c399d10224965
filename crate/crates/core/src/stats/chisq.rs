use serde::Serialize;

use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        if counts.len() != row_labels.len() || counts.iter().any(|r| r.len() != col_labels.len()) {
            return Err(StatsError::ShapeMismatch);
        }
        let n = counts.iter().flatten().sum();
        Ok(ContingencyTable { row_labels, col_labels, counts, n })
    }

    /// A table with labels `r0, r1, ...` and `c0, c1, ...`.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        let rows = counts.len();
        let cols = counts.first().map_or(0, Vec::len);
        Self::new(
            (0..rows).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|j| format!("c{j}")).collect(),
            counts,
        )
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.col_labels.len()).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn transposed(&self) -> ContingencyTable {
        let counts = (0..self.col_labels.len())
            .map(|j| self.counts.iter().map(|r| r[j]).collect())
            .collect();
        ContingencyTable {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            counts,
            n: self.n,
        }
    }

    /// Drop rows and columns whose total is zero.
    pub fn collapsed(&self) -> ContingencyTable {
        let rows: Vec<usize> = self.row_totals().iter().enumerate().filter(|(_, &t)| t > 0).map(|(i, _)| i).collect();
        let cols: Vec<usize> = self.col_totals().iter().enumerate().filter(|(_, &t)| t > 0).map(|(j, _)| j).collect();
        ContingencyTable {
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            counts: rows.iter().map(|&i| cols.iter().map(|&j| self.counts[i][j]).collect()).collect(),
            n: self.n,
        }
    }

    /// Each row as fractions of its total (zero rows stay zero).
    pub fn row_proportions(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|r| {
                let t: u64 = r.iter().sum();
                r.iter().map(|&c| if t > 0 { c as f64 / t as f64 } else { 0.0 }).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    /// The table actually tested, after dropping empty rows and columns.
    pub table: ContingencyTable,
    pub expected: Vec<Vec<f64>>,
    /// (observed − expected) / sqrt(expected) per cell.
    pub residuals: Vec<Vec<f64>>,
}

fn tested_table(t: &ContingencyTable) -> Result<ContingencyTable, StatsError> {
    let c = t.collapsed();
    if c.row_labels.len() < 2 || c.col_labels.len() < 2 || c.n == 0 {
        return Err(StatsError::DegenerateTable { rows: c.row_labels.len(), cols: c.col_labels.len() });
    }
    Ok(c)
}

pub fn chi_square_test(t: &ContingencyTable) -> Result<ChiSquareResult, StatsError> {
    let table = tested_table(t)?;
    let n = table.n as f64;
    let rows = table.row_totals();
    let cols = table.col_totals();
    let expected: Vec<Vec<f64>> =
        rows.iter().map(|&r| cols.iter().map(|&c| r as f64 * c as f64 / n).collect()).collect();

    let mut statistic = 0.0;
    let mut residuals = Vec::with_capacity(rows.len());
    for (obs_row, exp_row) in table.counts.iter().zip(&expected) {
        let mut res_row = Vec::with_capacity(cols.len());
        for (&o, &e) in obs_row.iter().zip(exp_row) {
            let d = o as f64 - e;
            statistic += d * d / e;
            res_row.push(d / e.sqrt());
        }
        residuals.push(res_row);
    }
    let dof = ((rows.len() - 1) * (cols.len() - 1)) as u64;
    Ok(ChiSquareResult { statistic, dof, p_value: chi_square_sf(statistic, dof as f64), table, expected, residuals })
}

pub fn cramers_v(t: &ContingencyTable) -> Result<f64, StatsError> {
    let chi = chi_square_test(t)?;
    let k = chi.table.row_labels.len().min(chi.table.col_labels.len()) as f64;
    Ok((chi.statistic / (chi.table.n as f64 * (k - 1.0))).sqrt().clamp(0.0, 1.0))
}

/// Upper tail P(X > x) of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof / 2.0, x / 2.0)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

const EPS: f64 = 1e-15;
const MAX_ITER: usize = 10_000;

/// Regularized lower incomplete gamma P(a, x) by its power series.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma Q(a, x) by continued fraction (modified Lentz).
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let q = if x < a + 1.0 { 1.0 - gamma_p_series(a, x) } else { gamma_q_cf(a, x) };
    q.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table(counts: Vec<Vec<u64>>) -> ContingencyTable {
        ContingencyTable::from_counts(counts).unwrap()
    }

    #[test]
    fn independence_and_perfect_association() {
        let r = chi_square_test(&table(vec![vec![10, 10], vec![10, 10]])).unwrap();
        assert_eq!((r.statistic, r.dof, r.p_value), (0.0, 1, 1.0));
        let r = chi_square_test(&table(vec![vec![20, 0], vec![0, 20]])).unwrap();
        assert_abs_diff_eq!(r.statistic, 40.0, epsilon = 1e-9);
        assert_eq!(r.dof, 1);
        assert_eq!(cramers_v(&table(vec![vec![10, 0], vec![0, 10]])).unwrap(), 1.0);
        assert_eq!(cramers_v(&table(vec![vec![5, 5], vec![5, 5]])).unwrap(), 0.0);
    }

    #[test]
    fn critical_value() {
        assert_abs_diff_eq!(chi_square_sf(3.841, 1.0), 0.05, epsilon = 0.001);
        assert_abs_diff_eq!(chi_square_sf(3.841458820694124, 1.0), 0.05, epsilon = 1e-10);
        assert_abs_diff_eq!(chi_square_sf(18.307038053275146, 10.0), 0.05, epsilon = 1e-10);
    }

    #[test]
    fn closed_forms() {
        // dof 2: Q = exp(-x/2)
        for x in [0.1, 1.0, 5.0, 30.0] {
            assert_abs_diff_eq!(chi_square_sf(x, 2.0), (-x / 2.0).exp(), epsilon = 1e-14);
        }
        // ln Γ(n) = ln (n-1)!
        assert_abs_diff_eq!(ln_gamma(5.0), 24f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(ln_gamma(0.5), std::f64::consts::PI.sqrt().ln(), epsilon = 1e-12);
    }

    #[test]
    fn degenerate_tables() {
        let err = chi_square_test(&table(vec![vec![5, 0], vec![3, 0]])).unwrap_err();
        assert!(matches!(err, StatsError::DegenerateTable { rows: 2, cols: 1 }));
        assert!(chi_square_test(&table(vec![vec![0, 0], vec![0, 0]])).is_err());
        // an empty row collapses away, leaving a valid 2x2
        let r = chi_square_test(&table(vec![vec![5, 1], vec![0, 0], vec![1, 5]])).unwrap();
        assert_eq!(r.dof, 1);
        assert_eq!(r.table.row_labels, ["r0", "r2"]);
    }

    #[test]
    fn residual_signs() {
        let r = chi_square_test(&table(vec![vec![30, 10], vec![10, 30]])).unwrap();
        assert!(r.residuals[0][0] > 0.0 && r.residuals[0][1] < 0.0);
        let sum: f64 = r.residuals.iter().flatten().map(|z| z * z).sum();
        assert_abs_diff_eq!(sum, r.statistic, epsilon = 1e-9);
    }

    #[test]
    fn shape_checked() {
        let err = ContingencyTable::new(vec!["a".into()], vec!["x".into()], vec![vec![1, 2]]).unwrap_err();
        assert!(matches!(err, StatsError::ShapeMismatch));
    }
}
