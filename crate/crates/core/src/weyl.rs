//! Quadratic exponential sums `S(t) = Σ_p c_p e^{itp²}` and their bound in
//! terms of the Dirichlet approximation of `t/π`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finitely supported sequence `c_p`, `p = start, start+1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedSequence {
    pub start: i64,
    pub values: Vec<Complex64>,
}

impl IndexedSequence {
    pub fn new(start: i64, values: Vec<Complex64>) -> Self {
        Self { start, values }
    }

    /// `c_p`, zero off the stored range.
    pub fn get(&self, p: i64) -> Complex64 {
        let i = p - self.start;
        if i < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.values.get(i as usize).copied().unwrap_or_default()
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    /// Smallest and largest index with `c_p ≠ 0`.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.values.iter().position(|c| *c != Complex64::default())?;
        let last = self.values.iter().rposition(|c| *c != Complex64::default())?;
        Some((self.start + first as i64, self.start + last as i64))
    }
}

/// `δ^j c` for `j ∈ {1, 2}`, where `(δc)_p = c_p - c_{p-1}`.
pub fn difference(c: &IndexedSequence, order: u32) -> Result<IndexedSequence> {
    if !(1..=2).contains(&order) {
        return Err(Error::Domain(format!("difference order {order} must be 1 or 2")));
    }
    let once = IndexedSequence::new(
        c.start,
        (c.start..=c.end() + 1).map(|p| c.get(p) - c.get(p - 1)).collect(),
    );
    if order == 1 {
        Ok(once)
    } else {
        difference(&once, 1)
    }
}

/// Sequence with certified support `⊆ [-QN, QN]` and difference bounds
/// `|δ^j c_p| ≤ constant · K · N^{-j}`, `j = 0, 1, 2`, checked on the
/// support interior.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylSequence {
    seq: IndexedSequence,
    k_bound: f64,
    q_support: f64,
    n: u64,
    constant: f64,
}

impl WeylSequence {
    /// Checks the certificate with implicit constant `1`.
    pub fn new(seq: IndexedSequence, k_bound: f64, q_support: f64, n: u64) -> Result<Self> {
        Self::with_constant(seq, k_bound, q_support, n, 1.0)
    }

    pub fn with_constant(seq: IndexedSequence, k_bound: f64, q_support: f64, n: u64, constant: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Certificate("N must be positive".into()));
        }
        if !(k_bound >= 0.0 && q_support >= 1.0 && constant > 0.0) {
            return Err(Error::Certificate(format!(
                "need K >= 0, Q >= 1, constant > 0 (got K = {k_bound}, Q = {q_support}, constant = {constant})"
            )));
        }
        let reach = q_support * n as f64;
        if let Some((lo, hi)) = seq.support() {
            if (lo as f64) < -reach || (hi as f64) > reach {
                return Err(Error::Certificate(format!("support [{lo}, {hi}] not inside [-QN, QN] = ±{reach}")));
            }
            let nf = n as f64;
            let tol = 1e-12;
            for (j, bound) in [(0u32, 1.0), (1, 1.0 / nf), (2, 1.0 / (nf * nf))] {
                let limit = constant * k_bound * bound * (1.0 + tol) + f64::MIN_POSITIVE;
                // δ^j c_p involves c_{p-j..p}; interior stencils lie inside [lo, hi].
                for p in lo + j as i64..=hi {
                    let v = match j {
                        0 => seq.get(p),
                        1 => seq.get(p) - seq.get(p - 1),
                        _ => seq.get(p) - seq.get(p - 1) * 2.0 + seq.get(p - 2),
                    };
                    if v.norm() > limit {
                        return Err(Error::Certificate(format!(
                            "|δ^{j} c_{p}| = {} exceeds {}",
                            v.norm(),
                            limit
                        )));
                    }
                }
            }
        }
        Ok(Self { seq, k_bound, q_support, n, constant })
    }

    /// The flat sequence `c_p = 1` on `[1, N]` with `K = 1`, `Q = 1`.
    pub fn flat(n: u64) -> Self {
        let seq = IndexedSequence::new(1, vec![Complex64::new(1.0, 0.0); n as usize]);
        Self::new(seq, 1.0, 1.0, n).expect("flat sequence is certified")
    }

    pub fn zero(n: u64) -> Self {
        Self::new(IndexedSequence::new(0, Vec::new()), 0.0, 1.0, n).expect("zero sequence is certified")
    }

    pub fn sequence(&self) -> &IndexedSequence {
        &self.seq
    }

    pub fn k_bound(&self) -> f64 {
        self.k_bound
    }

    pub fn q_support(&self) -> f64 {
        self.q_support
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }
}

/// `t/π = a/q + β` with `gcd(|a|, q) = 1`, `|a| ≤ q ≤ N`, `|β| ≤ 1/(Nq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub a: i64,
    pub q: u64,
    pub beta: f64,
}

/// Dirichlet approximation of `t/π` by the last continued-fraction
/// convergent with denominator `≤ N`. The expansion runs in exact integer
/// arithmetic on the binary value of `t/π`.
pub fn dirichlet_approx(t: f64, n: u64) -> Result<RationalApprox> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if !(t.abs() <= PI) {
        return Err(Error::Domain(format!("t = {t} outside [-π, π]")));
    }
    let x = t / PI;
    if x == 0.0 {
        return Ok(RationalApprox { a: 0, q: 1, beta: 0.0 });
    }
    let (mut num, mut den) = exact_ratio(x.abs());
    // Convergents h/k of |x|, seeded with h₋₁/k₋₁ = 1/0 and h₋₂/k₋₂ = 0/1.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let limit = BigInt::from(n);
    let (mut best_h, mut best_k) = (BigInt::zero(), BigInt::one());
    while !den.is_zero() {
        let (a_i, r) = num.div_rem(&den);
        let h_next = &a_i * &h + &h_prev;
        let k_next = &a_i * &k + &k_prev;
        if k_next > limit {
            break;
        }
        best_h = h_next.clone();
        best_k = k_next.clone();
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        num = std::mem::replace(&mut den, r);
    }
    let q = best_k.to_u64().expect("denominator bounded by N");
    let a_abs = best_h.to_i64().expect("numerator bounded by q");
    let a = if x < 0.0 { -a_abs } else { a_abs };
    let beta = x - a as f64 / q as f64;
    Ok(RationalApprox { a, q, beta })
}

/// Exact `(num, den)` with `x = num/den` for a finite positive `x`.
fn exact_ratio(x: f64) -> (BigInt, BigInt) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mantissa);
    if e >= 0 {
        (m << e as usize, BigInt::one())
    } else {
        let den = BigInt::one() << (-e) as usize;
        let g = m.gcd(&den);
        (m / &g, den / g)
    }
}

/// `S(t) = Σ_p c_p e^{itp²}`, summed in ascending `p`.
pub fn weyl_sum(c: &WeylSequence, t: f64) -> Complex64 {
    sum_sequence(&c.seq, t)
}

pub(crate) fn sum_sequence(seq: &IndexedSequence, t: f64) -> Complex64 {
    seq.values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != Complex64::default())
        .map(|(i, &v)| {
            let p = (seq.start + i as i64).unsigned_abs() as f64;
            v * Complex64::from_polar(1.0, t * (p * p))
        })
        .sum()
}

/// `K Q^{3/2} N / √(q (1 + N² |β|))` with unit implicit constant.
pub fn weyl_reference_bound(c: &WeylSequence, approx: &RationalApprox) -> f64 {
    let n = c.n as f64;
    c.k_bound * c.q_support.powf(1.5) * n / (approx.q as f64 * (1.0 + n * n * approx.beta.abs())).sqrt()
}

/// One sample of a bound sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylSample {
    pub t: f64,
    pub modulus: f64,
    pub approx: RationalApprox,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylBoundReport {
    pub samples: Vec<WeylSample>,
    pub max_ratio: f64,
    pub argmax_t: f64,
}

/// Evaluates `|S(t)| / bound(t)` over the samples and reports the maximum
/// (first maximizer in sample order).
pub fn verify_weyl_bound(c: &WeylSequence, t_samples: &[f64]) -> Result<WeylBoundReport> {
    let mut samples = Vec::with_capacity(t_samples.len());
    let (mut max_ratio, mut argmax_t) = (0.0, t_samples.first().copied().unwrap_or(0.0));
    for &t in t_samples {
        let approx = dirichlet_approx(t, c.n)?;
        let modulus = weyl_sum(c, t).norm();
        let bound = weyl_reference_bound(c, &approx);
        let ratio = if bound > 0.0 { modulus / bound } else { 0.0 };
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_t = t;
        }
        samples.push(WeylSample { t, modulus, approx, bound, ratio });
    }
    Ok(WeylBoundReport { samples, max_ratio, argmax_t })
}

/// `σ_m = Σ_p conj(c_p) c_{p+m} e^{2itmp}` for the correlation expansion
/// `|S|² = Σ_m e^{itm²} σ_m`.
pub fn sigma(c: &WeylSequence, t: f64, m: i64) -> Complex64 {
    let s = &c.seq;
    (s.start..=s.end())
        .map(|p| s.get(p).conj() * s.get(p + m) * Complex64::from_polar(1.0, 2.0 * t * (m * p) as f64))
        .sum()
}

/// `N Q / (1 + N dist(mt/π, ℤ))²`.
pub fn sigma_reference(c: &WeylSequence, t: f64, m: i64) -> f64 {
    let x = m as f64 * t / PI;
    let dist = (x - x.round()).abs();
    let n = c.n as f64;
    n * c.q_support / (1.0 + n * dist).powi(2)
}

/// `(m, |σ_m|, reference)` for `|m| ≤ m_max`.
pub fn sigma_diagnostics(c: &WeylSequence, t: f64, m_max: i64) -> Vec<(i64, f64, f64)> {
    (-m_max..=m_max).map(|m| (m, sigma(c, t, m).norm(), sigma_reference(c, t, m))).collect()
}

/// `count` uniform samples of `[-π, π]` followed by the resonant points
/// `πa/q`, `q ≤ q_max`, `gcd(a, q) = 1`.
pub fn weyl_sample_times(count: usize, q_max: u64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..count)
        .map(|i| if count == 1 { 0.0 } else { (-PI + 2.0 * PI * i as f64 / (count - 1) as f64).clamp(-PI, PI) })
        .collect();
    for q in 1..=q_max {
        for a in -(q as i64)..=q as i64 {
            if a.unsigned_abs().gcd(&q) == 1 {
                out.push(PI * a as f64 / q as f64);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn differences() {
        let c = IndexedSequence::new(0, real(&[3.0; 6]));
        let d = difference(&c, 1).unwrap();
        assert!((1..=5).all(|p| d.get(p).norm() == 0.0));
        let lin = IndexedSequence::new(1, real(&(1..=8).map(|p| p as f64).collect::<Vec<_>>()));
        let d = difference(&lin, 1).unwrap();
        assert!((2..=8).all(|p| d.get(p) == Complex64::new(1.0, 0.0)));
        let sq = IndexedSequence::new(1, real(&(1..=8).map(|p| (p * p) as f64).collect::<Vec<_>>()));
        let d2 = difference(&sq, 2).unwrap();
        assert!((3..=8).all(|p| d2.get(p) == Complex64::new(2.0, 0.0)));
        assert!(difference(&sq, 3).is_err());
        assert!(difference(&sq, 0).is_err());
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_approx(0.0, 5).unwrap(), RationalApprox { a: 0, q: 1, beta: 0.0 });
        let r = dirichlet_approx(3.0 * PI / 10.0, 10).unwrap();
        assert_eq!((r.a, r.q), (3, 10));
        assert!(r.beta.abs() < 1e-15);
        let r = dirichlet_approx(PI * (1.0 / 3.0 + 1e-4), 10).unwrap();
        assert_eq!((r.a, r.q), (1, 3));
        assert!((r.beta - 1e-4).abs() < 1e-12);
        assert!(r.beta.abs() <= 1.0 / 30.0);
        let r = dirichlet_approx(-PI * 0.75, 100).unwrap();
        assert_eq!((r.a, r.q), (-3, 4));
        assert!(dirichlet_approx(4.0, 10).is_err());
    }

    /// Continued-fraction oracle: among all fractions with `q ≤ N`, brute
    /// force confirms that the returned one satisfies the pigeonhole bound.
    #[test]
    fn dirichlet_against_brute_force() {
        for &(t, n) in &[(0.123456, 17u64), (2.5, 40), (-1.0, 7), (3.0, 1000)] {
            let r = dirichlet_approx(t, n).unwrap();
            let x = t / PI;
            let exists = (1..=n).any(|q| {
                let a = (x * q as f64).round();
                (x - a / q as f64).abs() <= 1.0 / (n as f64 * q as f64)
            });
            assert!(exists);
            assert!(r.beta.abs() <= 1.0 / (n as f64 * r.q as f64));
            assert!(r.q <= n && r.a.unsigned_abs() <= r.q);
        }
    }

    #[test]
    fn weyl_sum_examples() {
        let flat = WeylSequence::flat(20);
        assert!((weyl_sum(&flat, 0.0) - Complex64::new(20.0, 0.0)).norm() < 1e-12);
        assert!((weyl_sum(&flat, 2.0 * PI) - Complex64::new(20.0, 0.0)).norm() < 1e-10);
    }

    /// Gauss sums: `|Σ_{0≤p<q} e^{2πip²/q}| = √q` for odd primes `q`.
    #[test]
    fn gauss_sum_modulus() {
        for q in [3u64, 5, 7, 11, 13, 29] {
            let seq = IndexedSequence::new(0, vec![Complex64::new(1.0, 0.0); q as usize]);
            let c = WeylSequence::new(seq, 1.0, 1.0, q).unwrap();
            let s = weyl_sum(&c, 2.0 * PI / q as f64);
            assert!((s.norm() - (q as f64).sqrt()).abs() < 1e-10, "q = {q}");
            let report = verify_weyl_bound(&c, &[2.0 * PI / q as f64]).unwrap();
            assert!((report.max_ratio - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn certificate_checks() {
        assert!(WeylSequence::new(IndexedSequence::new(-5, real(&[1.0; 3])), 1.0, 1.0, 4).is_err());
        let jumpy = IndexedSequence::new(1, real(&[1.0, -1.0, 1.0, -1.0]));
        assert!(matches!(WeylSequence::new(jumpy, 1.0, 1.0, 4), Err(Error::Certificate(_))));
        let smooth: Vec<f64> = (0..=40).map(|p| (PI * p as f64 / 40.0).sin()).collect();
        let seq = IndexedSequence::new(0, real(&smooth));
        assert!(WeylSequence::new(seq.clone(), 1.0, 1.0, 40).is_err());
        assert!(WeylSequence::with_constant(seq, 1.0, 1.0, 40, 10.0).is_ok());
    }

    #[test]
    fn zero_sequence_has_zero_ratio() {
        let r = verify_weyl_bound(&WeylSequence::zero(16), &weyl_sample_times(50, 4)).unwrap();
        assert_eq!(r.max_ratio, 0.0);
    }

    #[test]
    fn correlation_identity() {
        let c = WeylSequence::flat(12);
        let t = 0.731;
        let lhs = weyl_sum(&c, t).norm_sqr();
        let rhs: Complex64 = (-12..=12).map(|m| Complex64::from_polar(1.0, t * (m * m) as f64) * sigma(&c, t, m)).sum();
        assert!((rhs.re - lhs).abs() < 1e-9 && rhs.im.abs() < 1e-9);
        for (_, s, r) in sigma_diagnostics(&c, t, 12) {
            assert!(s <= 4.0 * r);
        }
    }

    #[test]
    fn uniform_samples_stay_in_range() {
        for count in [2, 3, 100, 101, 10000] {
            assert!(weyl_sample_times(count, 0).iter().all(|t| t.abs() <= PI));
        }
    }

    #[test]
    fn sample_set_contains_resonances() {
        let ts = weyl_sample_times(5, 3);
        assert_eq!(ts.len(), 5 + 3 + 2 + 4);
        assert!(ts.iter().any(|&t| (t - PI / 3.0).abs() < 1e-15));
    }
}
