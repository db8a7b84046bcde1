//! Extended-precision reals for the alpha computations.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision for log-domain evaluations.
#[derive(Debug)]
pub struct PrecisionContext {
    bits: usize,
    consts: Consts,
}

impl PrecisionContext {
    pub const MIN_BITS: usize = 128;

    pub fn new(bits: usize) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::out_of_range(
                "bits",
                format!("{bits} < {} minimum working precision", Self::MIN_BITS),
            ));
        }
        let consts = Consts::new().map_err(|e| Error::Precision(format!("{e:?}")))?;
        Ok(PrecisionContext { bits, consts })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn from_u64(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.bits)
    }

    pub fn from_i64(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.bits)
    }

    /// Exact for integers up to the working precision, rounded beyond.
    pub fn from_biguint(&self, x: &BigUint) -> BigFloat {
        let two64 = BigFloat::from_u64(1 << 32, self.bits).mul(
            &BigFloat::from_u64(1 << 32, self.bits),
            self.bits,
            RM,
        );
        x.iter_u64_digits()
            .rev()
            .fold(BigFloat::from_u64(0, self.bits), |acc, limb| {
                acc.mul(&two64, self.bits, RM).add(
                    &BigFloat::from_u64(limb, self.bits),
                    self.bits,
                    RM,
                )
            })
    }

    pub fn parse(&mut self, decimal: &str) -> Result<BigFloat> {
        let v = BigFloat::parse(decimal, Radix::Dec, self.bits, RM, &mut self.consts);
        if v.is_nan() {
            return Err(Error::Precision(format!("cannot parse {decimal:?}")));
        }
        Ok(v)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    /// Decimal scientific notation with the full working precision.
    pub fn format(&mut self, a: &BigFloat) -> String {
        a.format(Radix::Dec, RM, &mut self.consts)
            .unwrap_or_else(|_| "NaN".to_string())
    }

    pub fn to_f64(&mut self, a: &BigFloat) -> f64 {
        self.format(a).parse().unwrap_or(f64::NAN)
    }

    /// `a` as a plain decimal `0.ddd...` truncated to `digits` places; only
    /// meaningful for `0 <= a < 1`.
    pub fn fixed_decimal(&mut self, a: &BigFloat, digits: usize) -> String {
        let scale = self.pow10(digits);
        let scaled = self.mul(a, &scale).floor();
        let text = self.format(&scaled);
        let integer = scientific_to_integer(&text);
        format!("0.{integer:0>digits$}")
    }

    fn pow10(&self, digits: usize) -> BigFloat {
        (0..digits).fold(self.from_u64(1), |acc, _| {
            self.mul(&acc, &self.from_u64(10))
        })
    }
}

/// `d.ddddde+k` (an integer-valued float) to its digit string.
fn scientific_to_integer(text: &str) -> String {
    let (mantissa, exponent) = text.split_once(['e', 'E']).unwrap_or((text, "0"));
    let exponent: i64 = exponent.parse().unwrap_or(0);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let keep = (exponent + 1).max(0) as usize;
    if digits.len() >= keep {
        digits[..keep].to_string()
    } else {
        format!("{digits:0<keep$}")
    }
}

/// Number of leading significant decimal digits on which `value` and
/// `reference` agree, both given as `0.ddd...` strings.
pub fn matching_digits(value: &str, reference: &str) -> usize {
    let strip = |s: &str| -> Vec<char> {
        s.trim_start_matches("0.")
            .chars()
            .skip_while(|&c| c == '0')
            .collect()
    };
    strip(value)
        .iter()
        .zip(strip(reference).iter())
        .take_while(|(a, b)| a == b)
        .count()
}
