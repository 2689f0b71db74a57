//! Scalar special functions used by the probit closed forms.
//!
//! The checked entry points (`std_normal_cdf`, `owens_t`, `bvn_cdf`) reject
//! non-finite or out-of-domain arguments. The `*_unchecked` variants are used
//! on hot paths where the arguments are already known to be valid.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use crate::error::{ensure_finite, Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Lower clamp applied to `ln Φ(z)`; roughly the log of the smallest subnormal.
pub const LOG_CDF_FLOOR: f64 = -745.0;

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::InvalidArgument(format!(
                "probability {value} outside [0, 1]"
            )))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub(crate) fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Probability(0.0)
        } else {
            Probability(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

pub fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal CDF Φ(z).
pub fn std_normal_cdf(z: f64) -> Result<Probability> {
    ensure_finite("z", z)?;
    Ok(Probability(norm_cdf(z)))
}

/// Upper tail `1 − Φ(z)`, accurate for large positive `z`.
pub fn norm_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// Unchecked Φ(z). Both halves are evaluated through the upper tail so that
/// `Φ(z) + Φ(−z)` is 1 to within one rounding.
pub fn norm_cdf(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 - norm_sf(z)
    } else {
        norm_sf(-z)
    }
}

/// `ln Φ(z)`, clamped below at [`LOG_CDF_FLOOR`].
pub fn log_norm_cdf(z: f64) -> f64 {
    let v = if z > 0.0 {
        (-norm_sf(z)).ln_1p()
    } else if z > -37.0 {
        norm_sf(-z).ln()
    } else {
        // Asymptotic tail expansion of the Mills ratio.
        let z2 = z * z;
        -0.5 * z2 - (-z).ln() - LN_SQRT_2PI + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    };
    v.max(LOG_CDF_FLOOR)
}

/// Inverse Mills ratio `φ(z) / Φ(z)`.
pub fn inv_mills(z: f64) -> f64 {
    if z > -37.0 {
        std_normal_pdf(z) / norm_cdf(z)
    } else {
        let z2 = z * z;
        -z / (1.0 - 1.0 / z2 + 3.0 / (z2 * z2))
    }
}

/// Entropy (nats) of a Bernoulli variable with success probability `p`.
pub fn bernoulli_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Owen's T function `T(h, a) = (1/2π) ∫₀^a exp(−h²(1+x²)/2) / (1+x²) dx`.
pub fn owens_t(h: f64, a: f64) -> Result<f64> {
    ensure_finite("h", h)?;
    ensure_finite("a", a)?;
    Ok(owens_t_unchecked(h, a))
}

pub fn owens_t_unchecked(h: f64, a: f64) -> f64 {
    if a < 0.0 {
        return -owens_t_unchecked(h, -a);
    }
    let h = h.abs();
    if a == 0.0 {
        return 0.0;
    }
    if h == 0.0 {
        return a.atan() / (2.0 * PI);
    }
    if a <= 1.0 {
        return owens_t_unit(h, a);
    }
    // Reflection onto |a| < 1:
    // T(h, a) = ½Q(h) + ½Q(ah) − Q(h)Q(ah) − T(ah, 1/a) for h > 0, a > 1.
    let ah = a * h;
    let qh = norm_sf(h);
    let qah = norm_sf(ah);
    0.5 * qh + 0.5 * qah - qh * qah - owens_t_unit(ah, 1.0 / a)
}

// h > 0, 0 < a <= 1.
fn owens_t_unit(h: f64, a: f64) -> f64 {
    if h <= 1.0 {
        owens_t_series(h, a)
    } else {
        owens_t_quadrature(h, a)
    }
}

// Owen's series in powers of a. Coefficients use the upper Poisson tail
// P(N > j), N ~ Poisson(h²/2), summed directly to avoid cancellation.
fn owens_t_series(h: f64, a: f64) -> f64 {
    const TERMS: usize = 40;
    let x = 0.5 * h * h;
    let emx = (-x).exp();
    let mut pois = [0.0; TERMS + 1];
    let mut t = emx;
    for (i, slot) in pois.iter_mut().enumerate() {
        if i > 0 {
            t *= x / i as f64;
        }
        *slot = t;
    }
    // tails[j] = Σ_{i > j} pois[i]
    let mut tail = 0.0;
    let mut tails = [0.0; TERMS];
    for j in (0..TERMS).rev() {
        tail += pois[j + 1];
        tails[j] = tail;
    }
    let a2 = a * a;
    let mut pow = a;
    let mut sum = 0.0;
    for (j, &tail_j) in tails.iter().enumerate() {
        let term = tail_j * pow / (2 * j + 1) as f64;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if term.abs() < 1e-20 {
            break;
        }
        pow *= a2;
    }
    (a.atan() - sum) / (2.0 * PI)
}

// Composite Gauss-Legendre on the defining integral. Panels are sized to
// the width 1/h of the Gaussian factor.
fn owens_t_quadrature(h: f64, a: f64) -> f64 {
    let h2 = h * h;
    let prefactor = (-0.5 * h2).exp() / (2.0 * PI);
    if prefactor == 0.0 {
        return 0.0;
    }
    let panels = (h * a).ceil().clamp(1.0, 8.0) as usize;
    let width = a / panels as f64;
    let rule = gauss_legendre_20();
    let mut total = 0.0;
    for p in 0..panels {
        let lo = p as f64 * width;
        let half = 0.5 * width;
        let mid = lo + half;
        let panel: f64 = rule
            .iter()
            .map(|&(node, weight)| {
                let x = mid + half * node;
                let x2 = x * x;
                weight * (-0.5 * h2 * x2).exp() / (1.0 + x2)
            })
            .sum();
        total += half * panel;
    }
    prefactor * total
}

/// 20-point Gauss-Legendre rule on [-1, 1] as `(node, weight)` pairs.
fn gauss_legendre_20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

// Newton iteration on the Legendre polynomial roots.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// Bivariate standard normal CDF `P(X ≤ h, Y ≤ k)` with correlation `rho`.
pub fn bvn_cdf(h: f64, k: f64, rho: f64) -> Result<Probability> {
    ensure_finite("h", h)?;
    ensure_finite("k", k)?;
    ensure_finite("rho", rho)?;
    if rho.abs() > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "correlation {rho} outside [-1, 1]"
        )));
    }
    Ok(Probability::saturating(bvn_cdf_unchecked(h, k, rho)))
}

pub fn bvn_cdf_unchecked(h: f64, k: f64, rho: f64) -> f64 {
    // Canonical argument order makes the result bitwise symmetric.
    let (h, k) = if h <= k { (h, k) } else { (k, h) };
    if rho >= 1.0 - 1e-12 {
        return norm_cdf(h).min(norm_cdf(k));
    }
    if rho <= -1.0 + 1e-12 {
        return (norm_cdf(h) + norm_cdf(k) - 1.0).max(0.0);
    }
    if h == 0.0 && k == 0.0 {
        return 0.25 + rho.asin() / (2.0 * PI);
    }
    let s = (1.0 - rho * rho).sqrt();
    let t_h = owens_t_limit(h, k - rho * h, s, k);
    let t_k = owens_t_limit(k, h - rho * k, s, h);
    let beta = if h * k > 0.0 || (h * k == 0.0 && h + k >= 0.0) {
        0.0
    } else {
        0.5
    };
    let v = 0.5 * (norm_cdf(h) + norm_cdf(k)) - t_h - t_k - beta;
    v.clamp(0.0, 1.0)
}

// T(x, num / (x·s)); for x = 0 the limit x → 0⁺ is taken, which pairs with
// the β convention above.
fn owens_t_limit(x: f64, num: f64, s: f64, other: f64) -> f64 {
    if x == 0.0 {
        0.25 * other.signum()
    } else {
        owens_t_unchecked(x, num / (x * s))
    }
}
