//! High-precision evaluation of `r^{-1}(gamma)` and of `alpha_*`.
//!
//! Everything is done on logarithms: the exponents `q_n` and `F_n` grow
//! exponentially and the bases superexponentially.

use astro_float::BigFloat;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::standard::standard_matrices;
use crate::error::{Error, Result};
use crate::precision::{matching_digits, PrecisionContext};
use crate::words::ContinuedFraction;

/// Published decimal expansion of `alpha_*`.
pub const ALPHA_STAR_REFERENCE: &str = "0.749326546330367557943961948091344672091327";

/// Guard bits kept above the largest log-domain magnitude.
const GUARD_BITS: f64 = 96.0;

/// Bases larger than this many bits are refused outright.
const MAX_BASE_BITS: u64 = 1 << 26;

/// A truncated evaluation of one of the alpha formulas.
#[derive(Clone, Debug)]
pub struct AlphaEstimate {
    pub terms: usize,
    pub bits: usize,
    /// Product form after all factors.
    pub value: BigFloat,
    /// Limit form at the same truncation.
    pub limit_form: BigFloat,
    /// `|P_N - P_{N-1}|` for the last two partial products.
    pub error_estimate: BigFloat,
    /// Partial products `P_1, ..., P_N`.
    pub partials: Vec<BigFloat>,
}

/// Printable summary of an [`AlphaEstimate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaRecord {
    pub terms: usize,
    pub bits: usize,
    pub value: String,
    pub limit_form: String,
    pub error_estimate: f64,
    pub form_gap: f64,
    pub digits_matched: usize,
}

impl AlphaEstimate {
    pub fn value_f64(&self, ctx: &mut PrecisionContext) -> f64 {
        ctx.to_f64(&self.value)
    }

    pub fn error_f64(&self, ctx: &mut PrecisionContext) -> f64 {
        ctx.to_f64(&self.error_estimate)
    }

    /// `|product form - limit form|`.
    pub fn form_gap(&self, ctx: &mut PrecisionContext) -> f64 {
        let d = ctx.sub(&self.value, &self.limit_form).abs();
        ctx.to_f64(&d)
    }

    /// Both forms within the error estimate of each other, allowing for
    /// rounding at the working precision.
    pub fn forms_agree(&self, ctx: &mut PrecisionContext) -> bool {
        let slack = 2f64.powi(-(self.bits as i32) / 2);
        self.form_gap(ctx) <= self.error_f64(ctx) + slack
    }

    /// Truncated decimal expansion `0.ddd...`.
    pub fn decimal(&self, ctx: &mut PrecisionContext, digits: usize) -> String {
        ctx.fixed_decimal(&self.value, digits)
    }

    /// Leading significant digits shared with [`ALPHA_STAR_REFERENCE`].
    pub fn digits_matched(&self, ctx: &mut PrecisionContext) -> usize {
        let digits = ALPHA_STAR_REFERENCE.len() - 2;
        matching_digits(&self.decimal(ctx, digits + 5), ALPHA_STAR_REFERENCE)
    }

    pub fn record(&self, ctx: &mut PrecisionContext, digits: usize) -> AlphaRecord {
        AlphaRecord {
            terms: self.terms,
            bits: self.bits,
            value: self.decimal(ctx, digits),
            limit_form: ctx.fixed_decimal(&self.limit_form, digits),
            error_estimate: self.error_f64(ctx),
            form_gap: self.form_gap(ctx),
            digits_matched: self.digits_matched(ctx),
        }
    }
}

fn check_terms(terms: usize) -> Result<()> {
    if terms < 3 {
        return Err(Error::out_of_range("terms", format!("{terms} < 3")));
    }
    Ok(())
}

/// Reject truncations whose log-domain terms would eat the working precision.
fn check_magnitude(log2_magnitude: f64, ctx: &PrecisionContext) -> Result<()> {
    let needed = log2_magnitude.max(0.0) + GUARD_BITS;
    if !needed.is_finite() || needed > ctx.bits() as f64 {
        return Err(Error::Precision(format!(
            "terms need about {needed:.0} bits, working precision is {}",
            ctx.bits()
        )));
    }
    Ok(())
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(0.0).max(1.0).log2();
    }
    let top = (x >> (bits - 64)).to_f64().unwrap_or(1.0);
    top.log2() + (bits - 64) as f64
}

/// `ln` of `(t + sqrt(t^2 - 4)) / 2`, the spectral radius of an SL(2)
/// matrix with trace `t >= 2`.
fn ln_sl2_radius(t: &BigUint, ctx: &mut PrecisionContext) -> BigFloat {
    if *t <= BigUint::from(2u8) {
        return ctx.from_u64(0);
    }
    let tf = ctx.from_biguint(t);
    let disc = ctx.sub(&ctx.mul(&tf, &tf), &ctx.from_u64(4));
    let rho = ctx.div(&ctx.add(&tf, &ctx.sqrt(&disc)), &ctx.from_u64(2));
    ctx.ln(&rho)
}

fn signed(x: BigFloat, negative: bool) -> BigFloat {
    if negative {
        x.neg()
    } else {
        x
    }
}

fn finish(
    terms: usize,
    log_partials: Vec<BigFloat>,
    log_limit: BigFloat,
    ctx: &mut PrecisionContext,
) -> AlphaEstimate {
    let partials: Vec<BigFloat> = log_partials.iter().map(|s| ctx.exp(s)).collect();
    let value = partials.last().expect("terms >= 3").clone();
    let prev = &partials[partials.len() - 2];
    let error_estimate = ctx.sub(&value, prev).abs();
    let limit_form = ctx.exp(&log_limit);
    AlphaEstimate {
        terms,
        bits: ctx.bits(),
        value,
        limit_form,
        error_estimate,
        partials,
    }
}

/// `r^{-1}(gamma)` for `gamma` given by its directive continued fraction.
///
/// Product form over `n = 0..terms-1`:
/// `prod (rho_n^{a_{n+1}} rho_{n-1} / rho_{n+1})^{(-1)^n q_n}`; the limit form
/// `(rho_N^{q_{N+1}} / rho_{N+1}^{q_N})^{(-1)^N}` is evaluated at `N = terms-1`.
pub fn alpha_inverse(
    cf: &ContinuedFraction,
    terms: usize,
    ctx: &mut PrecisionContext,
) -> Result<AlphaEstimate> {
    check_terms(terms)?;
    if cf.len() < terms {
        return Err(Error::out_of_range(
            "terms",
            format!(
                "{terms} terms need that many partial quotients, got {}",
                cf.len()
            ),
        ));
    }
    let truncated = ContinuedFraction::new(cf.quotients()[..terms].to_vec())?;
    // q_{N+1} bounds both the exponents and (up to a constant) ln rho_N.
    let q_last = truncated.convergent(terms as isize).1.clone();
    let lq = log2_big(&q_last);
    if lq > (MAX_BASE_BITS as f64).log2() {
        return Err(Error::Precision(format!("q_{terms} has {lq:.0} bits")));
    }
    check_magnitude(2.0 * lq + 1.0, ctx)?;

    let seq = standard_matrices(&truncated, &BigRational::one())?;
    let ln_rho: Vec<BigFloat> = (-1..=terms as isize)
        .map(|n| ln_sl2_radius(&seq.unscaled_trace(n), ctx))
        .collect();
    let lr = |n: isize| &ln_rho[(n + 1) as usize];
    let q = |n: isize, ctx: &PrecisionContext| ctx.from_biguint(&truncated.convergent(n).1);

    let mut sum = ctx.from_u64(0);
    let mut log_partials = Vec::with_capacity(terms);
    for n in 0..terms as isize {
        let a = ctx.from_u64(truncated.quotient(n as usize + 1));
        let inner = ctx.sub(&ctx.add(&ctx.mul(&a, lr(n)), lr(n - 1)), lr(n + 1));
        let term = signed(ctx.mul(&q(n, ctx), &inner), n % 2 == 1);
        sum = ctx.add(&sum, &term);
        log_partials.push(sum.clone());
    }
    let big_n = terms as isize - 1;
    let log_limit = signed(
        ctx.sub(
            &ctx.mul(&q(big_n + 1, ctx), lr(big_n)),
            &ctx.mul(&q(big_n, ctx), lr(big_n + 1)),
        ),
        big_n % 2 == 1,
    );
    Ok(finish(terms, log_partials, log_limit, ctx))
}

/// Traces `tau_0, ..., tau_n` from `tau_0 = 1`, `tau_1 = tau_2 = 2`,
/// `tau_{k+1} = tau_k tau_{k-1} - tau_{k-2}`.
pub fn fibonacci_traces(n: usize) -> Vec<BigUint> {
    let mut tau: Vec<BigUint> = [1u8, 2, 2].iter().map(|&x| BigUint::from(x)).collect();
    while tau.len() <= n {
        let k = tau.len();
        let next = &tau[k - 1] * &tau[k - 2] - &tau[k - 3];
        tau.push(next);
    }
    tau.truncate(n + 1);
    tau
}

fn fibonacci(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::from(0u8), BigUint::from(1u8)];
    while f.len() <= n {
        let k = f.len();
        let next = &f[k - 1] + &f[k - 2];
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// `alpha_* = prod_{n >= 1} (1 - tau_{n-1} / (tau_n tau_{n+1}))^{(-1)^n F_{n+1}}`
/// truncated after `terms` factors, with the limit form
/// `(tau_N^{F_{N+1}} / tau_{N+1}^{F_N})^{(-1)^N}` at `N = terms`.
pub fn alpha_star_tau(terms: usize, ctx: &mut PrecisionContext) -> Result<AlphaEstimate> {
    check_terms(terms)?;
    // ln tau_k grows like phi^k; estimate before building the integers
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let tau_bits = 0.25 * phi.powi(terms as i32 + 1);
    if tau_bits > MAX_BASE_BITS as f64 {
        return Err(Error::Precision(format!(
            "tau_{} has about {tau_bits:.0} bits",
            terms + 1
        )));
    }
    let tau = fibonacci_traces(terms + 1);
    let fib = fibonacci(terms + 1);
    check_magnitude(
        log2_big(&fib[terms + 1]) + log2_big(&tau[terms + 1]).log2(),
        ctx,
    )?;

    let mut sum = ctx.from_u64(0);
    let mut log_partials = Vec::with_capacity(terms);
    for n in 1..=terms {
        let den = &tau[n] * &tau[n + 1];
        let num = &den - &tau[n - 1];
        let ratio = ctx.div(&ctx.from_biguint(&num), &ctx.from_biguint(&den));
        let log_ratio = ctx.ln(&ratio);
        let term = signed(
            ctx.mul(&ctx.from_biguint(&fib[n + 1]), &log_ratio),
            n % 2 == 1,
        );
        sum = ctx.add(&sum, &term);
        log_partials.push(sum.clone());
    }
    let ln_tau = |k: usize, ctx: &mut PrecisionContext| {
        let t = ctx.from_biguint(&tau[k]);
        ctx.ln(&t)
    };
    let (lt_n, lt_n1) = (ln_tau(terms, ctx), ln_tau(terms + 1, ctx));
    let log_limit = signed(
        ctx.sub(
            &ctx.mul(&ctx.from_biguint(&fib[terms + 1]), &lt_n),
            &ctx.mul(&ctx.from_biguint(&fib[terms]), &lt_n1),
        ),
        terms % 2 == 1,
    );
    Ok(finish(terms, log_partials, log_limit, ctx))
}
