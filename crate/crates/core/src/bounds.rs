//! Rate / access-complexity calculators.
//!
//! The sphere-covering estimate for a code of length `beta * r` and radius
//! `alpha * r` is `H(alpha / beta) = 1 / beta`, which defines `alpha = f(beta)`:
//! the fraction of `r` independent substrings a server must read per query
//! when it stores `beta * r` coded substrings.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("entropy argument {x} outside [0, 1]")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

fn entropy_unchecked(x: f64) -> f64 {
    binary_entropy(x).expect("bisection stays inside [0, 1/2]")
}

/// The unique `x` in `[0, 1/2]` with `H(x) = c`, found by bisection.
pub fn entropy_inverse(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::param(format!("entropy value {c} outside [0, 1]")));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    if c == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // run to the resolution of f64, which is well below 1e-12
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy_unchecked(mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `alpha = f(beta) = beta * H^{-1}(1 / beta)` for `beta >= 1`.
pub fn f_of_beta(beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 1.0 || beta.is_infinite() {
        return Err(Error::param(format!(
            "beta = {beta} must be a finite value >= 1"
        )));
    }
    Ok(beta * entropy_inverse(1.0 / beta)?)
}

/// Storage-system parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub servers: usize,
    pub files: usize,
    pub file_bits: usize,
    /// Fraction of the database stored per server.
    pub eps: f64,
    /// Fraction of the database held as independent symbols for PIR.
    pub pir_fraction: f64,
}

impl SystemParams {
    pub fn new(
        servers: usize,
        files: usize,
        file_bits: usize,
        eps: f64,
        pir_fraction: f64,
    ) -> Result<Self> {
        if servers < 2 {
            return Err(Error::param("need at least 2 servers"));
        }
        if files == 0 || file_bits == 0 {
            return Err(Error::param("need at least one file of at least one bit"));
        }
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::param(format!(
                "storage fraction {eps} must be positive"
            )));
        }
        if !(0.0..=eps).contains(&pir_fraction) {
            return Err(Error::param(format!(
                "PIR storage fraction {pir_fraction} must lie in [0, {eps}]"
            )));
        }
        Ok(SystemParams {
            servers,
            files,
            file_bits,
            eps,
            pir_fraction,
        })
    }

    /// Total stored bits over database size.
    pub fn storage_overhead(&self) -> f64 {
        self.eps * self.servers as f64
    }

    pub fn bits_per_server(&self) -> f64 {
        self.eps * (self.files * self.file_bits) as f64
    }
}

/// A point `(N, M, L, Omega, Delta, eps)`; `Delta` is in units of `ML` bits.
#[derive(Debug, Clone, PartialEq)]
pub struct AchievableTuple {
    pub servers: Option<usize>,
    pub files: Option<usize>,
    pub file_bits: Option<usize>,
    pub rate: Ratio<u64>,
    pub access: f64,
    pub eps: f64,
}

impl AchievableTuple {
    pub fn rate_f64(&self) -> f64 {
        ratio_to_f64(&self.rate)
    }
}

/// Rate and access of the MDS-coded scheme with `K` data servers, using the
/// spare storage as a covering code with `beta = K * eps` and the finer
/// substring split that divides access by `gcd(K, N - K)`.
pub fn tajeddine_tuple(n: usize, k: usize, eps: f64) -> Result<AchievableTuple> {
    tajeddine_access(n, k, eps, true).map(|access| AchievableTuple {
        servers: Some(n),
        files: None,
        file_bits: None,
        rate: Ratio::new((n - k) as u64, n as u64),
        access,
        eps,
    })
}

fn tajeddine_access(n: usize, k: usize, eps: f64, with_gcd: bool) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= K < N, got K={k}, N={n}")));
    }
    if eps.is_nan() || eps * (k as f64) < 1.0 {
        return Err(Error::param(format!(
            "need eps >= 1/K, got eps={eps}, K={k}"
        )));
    }
    let divisor = if with_gcd { k.gcd(&(n - k)) } else { 1 };
    let coded = n as f64 * f_of_beta(k as f64 * eps)? / divisor as f64;
    Ok(coded.min(n as f64 / k as f64))
}

/// One row of the rate/access table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub k: usize,
    pub rate: Ratio<u64>,
    pub access: f64,
    /// Access with no redundancy in storage: `N / K`.
    pub access_uncoded: Ratio<u64>,
    pub gcd: usize,
}

/// Rows for `K = 1..N-1`. With `with_gcd`, access uses the gcd-refined split.
pub fn tajeddine_table(n: usize, eps: f64, with_gcd: bool) -> Result<Vec<TableRow>> {
    if n < 2 {
        return Err(Error::param("need at least 2 servers"));
    }
    if eps.is_nan() || eps < 1.0 {
        return Err(Error::param(format!("table needs eps >= 1, got {eps}")));
    }
    (1..n)
        .map(|k| {
            Ok(TableRow {
                k,
                rate: Ratio::new((n - k) as u64, n as u64),
                access: tajeddine_access(n, k, eps, with_gcd)?,
                access_uncoded: Ratio::new(n as u64, k as u64),
                gcd: k.gcd(&(n - k)),
            })
        })
        .collect()
}

/// Memory sharing of replicated sub-schemes over `floor(Np/q)` and
/// `ceil(Np/q)` servers, with `p/q` of each server's storage used for PIR.
pub fn memory_sharing_tuple(n: usize, p: usize, q: usize, eps: f64) -> Result<AchievableTuple> {
    if p == 0 || q == 0 {
        return Err(Error::param("p and q must be positive"));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::param(format!(
            "p/q = {p}/{q} is not in lowest terms"
        )));
    }
    let frac = Ratio::new(p as u64, q as u64);
    if frac < Ratio::new(1, n as u64) {
        return Err(Error::param(format!("p/q = {frac} is below 1/N")));
    }
    if eps < p as f64 / q as f64 {
        return Err(Error::param(format!("p/q = {frac} exceeds eps = {eps}")));
    }
    let servers = frac * n as u64;
    let lo = servers.floor().to_integer();
    let hi = servers.ceil().to_integer();
    if lo < 2 {
        return Err(Error::param(format!(
            "N*p/q = {servers} leaves sub-schemes with fewer than 2 servers"
        )));
    }
    // eta * hi + (1 - eta) * lo = Np/q  =>  eta = fractional part
    let eta = servers.fract();
    let per_file = |s: u64| Ratio::new(s, s - 1);
    let mut download = (Ratio::from_integer(1) - eta) * per_file(lo);
    if eta != Ratio::from_integer(0) {
        download += eta * per_file(hi);
    }
    Ok(AchievableTuple {
        servers: Some(n),
        files: None,
        file_bits: None,
        rate: download.recip(),
        access: ratio_to_f64(&servers) * f_of_beta(eps * q as f64 / p as f64)?,
        eps,
    })
}

pub fn ratio_to_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Evenly spaced `(beta, f(beta))` samples on `[beta_min, beta_max]`.
pub fn curve_samples(beta_min: f64, beta_max: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if !(1.0 <= beta_min && beta_min < beta_max) || !beta_max.is_finite() {
        return Err(Error::param(format!(
            "need 1 <= beta_min < beta_max, got [{beta_min}, {beta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::param("need at least 2 steps"));
    }
    let span = beta_max - beta_min;
    (0..steps)
        .map(|i| {
            let beta = if i + 1 == steps {
                beta_max
            } else {
                beta_min + span * i as f64 / (steps - 1) as f64
            };
            Ok((beta, f_of_beta(beta)?))
        })
        .collect()
}

/// Rounds half away from zero at `decimals` places (inputs here are non-negative).
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale + 0.5).floor() / scale
}
