//! Log-factorials and binomial coefficients.

use std::sync::OnceLock;

const TABLE_LEN: usize = 1024;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        let mut acc = 0.0;
        for k in 1..TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)` by accumulated logarithms.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    let t = table();
    if n < TABLE_LEN {
        return t[n];
    }
    t[TABLE_LEN - 1] + (TABLE_LEN..=n).map(|k| (k as f64).ln()).sum::<f64>()
}

/// `C(n, k)` by the multiplicative recurrence; exact while the result stays
/// below `2^53`.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(40, 20), 137_846_528_820.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(7, 0), 1.0);
    }

    #[test]
    fn small_values_match_exact_factorials() {
        let mut f = 1.0f64;
        for n in 0..=20usize {
            if n > 0 {
                f *= n as f64;
            }
            assert!((ln_factorial(n) - f.ln()).abs() <= 1e-13 * f.ln().max(1.0));
        }
    }

    #[test]
    fn continues_past_table() {
        let n = TABLE_LEN + 5;
        let direct: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(n) - direct).abs() < 1e-9);
    }
}
