//! Exact fair-binomial tail probabilities.

/// P(Binomial(n, 1/2) >= d) for a real threshold `d`.
///
/// Up to n = 64 the sum of binomial coefficients fits a u128 and the result
/// is exact up to one final rounding (well under 1e-14). Larger n switch to
/// log-domain accumulation with a max-scaled sum, accurate to ~1e-12
/// relative.
pub fn binomial_tail(n: usize, d: f64) -> f64 {
    if d <= 0.0 {
        return 1.0;
    }
    let k = d.ceil() as usize; // S >= d iff S >= ceil(d) for integer S
    if k > n {
        return 0.0;
    }
    if n <= 64 {
        let mut coeff: u128 = 1; // C(n, 0)
        for i in 0..k {
            coeff = coeff * (n - i) as u128 / (i + 1) as u128;
        }
        let mut sum: u128 = 0;
        for i in k..=n {
            sum += coeff;
            if i < n {
                coeff = coeff * (n - i) as u128 / (i + 1) as u128;
            }
        }
        return sum as f64 * f64::powi(2.0, -(n as i32));
    }

    // ln C(n, i) from cumulative log factorials.
    let mut ln_fact = Vec::with_capacity(n + 1);
    ln_fact.push(0.0f64);
    let mut acc = 0.0f64;
    for j in 1..=n {
        acc += (j as f64).ln();
        ln_fact.push(acc);
    }
    let ln_term =
        |i: usize| ln_fact[n] - ln_fact[i] - ln_fact[n - i] - n as f64 * std::f64::consts::LN_2;
    let ln_max = (k..=n).map(ln_term).fold(f64::NEG_INFINITY, f64::max);
    if ln_max == f64::NEG_INFINITY {
        return 0.0;
    }
    let mut scaled = 0.0f64;
    for i in k..=n {
        scaled += (ln_term(i) - ln_max).exp();
    }
    (ln_max + scaled.ln()).exp()
}
