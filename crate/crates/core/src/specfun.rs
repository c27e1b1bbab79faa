//! Special functions on the positive half-line: log-gamma, the polygamma
//! family up to order two, the regularized lower incomplete gamma function and
//! the standard normal quantile.
//!
//! All routines are pure and deterministic. Polygamma functions shift the
//! argument above [`ASYMPTOTIC_THRESHOLD`] with the upward recurrence and then
//! evaluate the asymptotic series; log-gamma uses Taylor expansions around 2,
//! downward recurrence on `[2.5, 10)` and Stirling's series beyond.

use crate::{Error, Result};

/// Below this value polygamma arguments are shifted upward before the
/// asymptotic series is applied.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub(crate) const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// ζ(k) − 1 for k = 2, 3, ...
const ZETA_MINUS_ONE: [f64; 32] = [
    6.44934066848226406e-01,
    2.02056903159594292e-01,
    8.23232337111381857e-02,
    3.69277551433699266e-02,
    1.73430619844491402e-02,
    8.34927738192282713e-03,
    4.07735619794433960e-03,
    2.00839282608221426e-03,
    9.94575127818085256e-04,
    4.94188604119464529e-04,
    2.46086553308048320e-04,
    1.22713347578489145e-04,
    6.12481350587048277e-05,
    3.05882363070204933e-05,
    1.52822594086518710e-05,
    7.63719763789976257e-06,
    3.81729326499984022e-06,
    1.90821271655393897e-06,
    9.53962033872796212e-07,
    4.76932986787806447e-07,
    2.38450502727733004e-07,
    1.19219925965311064e-07,
    5.96081890512594801e-08,
    2.98035035146522793e-08,
    1.49015548283650427e-08,
    7.45071178983543006e-09,
    3.72533402478845728e-09,
    1.86265972351304914e-09,
    9.31327432419668166e-10,
    4.65662906503378366e-10,
    2.32831183367650534e-10,
    1.16415501727005193e-10,
];

/// A strictly positive, finite real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(PositiveReal(value))
        } else {
            Err(Error::Domain { what: "value must be positive and finite", value })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PositiveReal::new(value)
    }
}

#[inline]
fn check_positive(x: f64, what: &'static str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain { what, value: x })
    }
}

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive(x, "ln_gamma requires x > 0").map(ln_gamma_unchecked)
}

/// ψ(x) = d/dx log Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma requires x > 0").map(digamma_unchecked)
}

/// ψ′(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma requires x > 0").map(trigamma_unchecked)
}

/// ψ″(x) for x > 0.
pub fn tetragamma(x: f64) -> Result<f64> {
    check_positive(x, "tetragamma requires x > 0").map(tetragamma_unchecked)
}

// Taylor series of log Γ(2 + z), accurate for |z| <= 0.5.
fn ln_gamma_near_two(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        power *= z;
        let k = (i + 2) as f64;
        let term = c * power / k;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    (1.0 - EULER_GAMMA) * z + sum
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // log Γ(x) = log Γ(x + 1) − log x
        return ln_gamma_unchecked(x + 1.0) - libm::log(x);
    }
    if x < 1.5 {
        let z = x - 1.0;
        return ln_gamma_near_two(z) - libm::log1p(z);
    }
    if x < 2.5 {
        return ln_gamma_near_two(x - 2.0);
    }
    if x < ASYMPTOTIC_THRESHOLD {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return libm::log(prod) + ln_gamma_near_two(y - 2.0);
    }
    (x - 0.5) * libm::log(x) - x + HALF_LN_2PI + ln_gamma_remainder(x)
}

/// `log Γ(x) − [(x − ½) log x − x + ½ log 2π]` for `x ≥ ASYMPTOTIC_THRESHOLD`.
pub(crate) fn ln_gamma_remainder(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2
                                        * (1.0 / 1188.0
                                            + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))))
}

pub(crate) fn digamma_unchecked(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / y;
        y += 1.0;
    }
    libm::log(y) - 0.5 / y - digamma_remainder(y) - shift
}

/// `log x − 1/(2x) − ψ(x)` for `x ≥ ASYMPTOTIC_THRESHOLD`.
pub(crate) fn digamma_remainder(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    inv2 * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))))
}

pub(crate) fn trigamma_unchecked(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let tail = inv
        * inv2
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2
                        * (1.0 / 42.0
                            - inv2
                                * (1.0 / 30.0
                                    - inv2
                                        * (5.0 / 66.0
                                            - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    inv + 0.5 * inv2 + tail + shift
}

pub(crate) fn tetragamma_unchecked(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < ASYMPTOTIC_THRESHOLD {
        shift += 2.0 / (y * y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let tail = inv2
        * inv2
        * (0.5
            - inv2
                * (1.0 / 6.0
                    - inv2
                        * (1.0 / 6.0
                            - inv2
                                * (0.3
                                    - inv2
                                        * (5.0 / 6.0
                                            - inv2 * (691.0 / 210.0 - inv2 * 35.0 / 2.0))))));
    -inv2 - inv2 * inv - tail - shift
}

/// `x·ψ′(x) − 1`, which is positive for every x > 0.
///
/// For large x the direct product cancels to about `1/(2x)`, so the asymptotic
/// expansion is used there instead.
pub fn x_trigamma_minus_one(x: f64) -> Result<f64> {
    check_positive(x, "x_trigamma_minus_one requires x > 0").map(x_trigamma_minus_one_unchecked)
}

pub(crate) fn x_trigamma_minus_one_unchecked(x: f64) -> f64 {
    if x < 20.0 {
        return x * trigamma_unchecked(x) - 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (0.5
        + inv
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2
                            * (1.0 / 42.0
                                - inv2
                                    * (1.0 / 30.0
                                        - inv2
                                            * (5.0 / 66.0
                                                - inv2
                                                    * (691.0 / 2730.0 - inv2 * 7.0 / 6.0)))))))
}

const INC_GAMMA_MAX_ITER: usize = 100_000;
const INC_GAMMA_EPS: f64 = 1e-16;

/// Regularized lower incomplete gamma function P(a, x) = γ(a, x) / Γ(a).
///
/// Series expansion for x < a + 1, Lentz continued fraction for the
/// complement otherwise.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    check_positive(a, "incomplete gamma requires a > 0")?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain { what: "incomplete gamma requires x >= 0", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let log_prefactor = a * libm::log(x) - x - ln_gamma_unchecked(a);
    let p = if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        let mut converged = false;
        for _ in 0..INC_GAMMA_MAX_ITER {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * INC_GAMMA_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { iterations: INC_GAMMA_MAX_ITER });
        }
        sum * libm::exp(log_prefactor)
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut converged = false;
        for i in 1..INC_GAMMA_MAX_ITER {
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
            if (delta - 1.0).abs() < INC_GAMMA_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { iterations: INC_GAMMA_MAX_ITER });
        }
        1.0 - libm::exp(log_prefactor) * h
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Quantile of the standard normal distribution (Wichura's AS 241).
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { what: "normal quantile requires 0 < p < 1", value: p });
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2509.080_928_730_122_7 * r + 33430.575_583_588_128) * r
            + 67265.770_927_008_7)
            * r
            + 45921.953_931_549_87)
            * r
            + 13731.693_765_509_461)
            * r
            + 1971.590_950_306_551_4)
            * r
            + 133.141_667_891_784_38)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((5226.495_278_852_545 * r + 28729.085_735_721_943) * r
            + 39307.895_800_092_71)
            * r
            + 21213.794_301_586_597)
            * r
            + 5394.196_021_424_751)
            * r
            + 687.187_007_492_057_9)
            * r
            + 42.313_330_701_600_91)
            * r
            + 1.0;
        return Ok(q * num / den);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = libm::sqrt(-libm::log(tail));
    let value = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 0.022_723_844_989_269_184) * r
            + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 0.015_198_666_563_616_457)
            * r
            + 0.148_103_976_427_480_08)
            * r
            + 0.689_767_334_985_1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 0.001_242_660_947_388_078_4)
            * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 0.014_875_361_290_850_615)
            * r
            + 0.136_929_880_922_735_8)
            * r
            + 0.599_832_206_555_888)
            * r
            + 1.0;
        num / den
    };
    Ok(if q < 0.0 { -value } else { value })
}
