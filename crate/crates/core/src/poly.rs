//! The subtree polynomial `S(G; x) = sum s_k x^k` and its roots.
//!
//! Root finding works on the reversed, normalized series
//! `F(y) = sum_{k=0}^{n-1} (s_{n-k} / s_n) y^k`, which satisfies
//! `S(x) = s_n x^n F(1/x)`: its coefficients decay factorially for dense
//! graphs, so the problem is well scaled even when `s_n` has dozens of
//! digits. Roots of `F` are located with the Aberth-Ehrlich iteration in
//! double precision, polished with Newton steps in double-double arithmetic
//! (106-bit significand), and mapped back by `x = 1/y`. The forced root at
//! `x = 0` is handled separately.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::Serialize;
use twofloat::TwoFloat;

use crate::counting::SubtreeCountVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::{rational_decimal, rational_f64, rational_string, ser_biguint_vec};
use crate::spanning::exact_beta;

pub type Ext = TwoFloat;
pub type ExtComplex = Complex<TwoFloat>;

/// Smallest admissible constant is strictly above this.
pub const C_THRESHOLD: f64 = 6.0;
pub const DEFAULT_C: f64 = 7.0;
pub const DEFAULT_CIRCLE_POINTS: usize = 256;
pub const DEFAULT_PRECISION_BITS: u32 = 106;
/// Roots closer than this after polishing are reported as one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-7;
pub const VIETA_TOLERANCE: f64 = 1e-8;

/// Exact conversion of a rational to the nearest double-double.
pub fn rational_to_ext(value: &BigRational) -> Ext {
    let hi = rational_f64(value);
    if !hi.is_finite() || hi == 0.0 {
        return Ext::from(hi);
    }
    let rest = value - BigRational::from_float(hi).expect("finite");
    Ext::new_add(hi, rational_f64(&rest))
}

/// Exact rational value of a double-double.
pub fn ext_to_rational(value: Ext) -> BigRational {
    let part = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    part(value.hi()) + part(value.lo())
}

fn ext_decimal(value: Ext) -> String {
    rational_decimal(&ext_to_rational(value), 30)
}

/// `a / b` to full double-double accuracy by long division on the high
/// words. `TwoFloat`'s own quotient of two double-doubles keeps only about
/// 53 bits.
pub fn ext_div(a: Ext, b: Ext) -> Ext {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    Ext::new_add(q1, q2) + q3
}

fn ext_complex_div(a: ExtComplex, b: ExtComplex) -> ExtComplex {
    let d = b.re * b.re + b.im * b.im;
    let num = a * b.conj();
    Complex::new(ext_div(num.re, d), ext_div(num.im, d))
}

fn ext_abs(z: ExtComplex) -> Ext {
    (z.re * z.re + z.im * z.im).sqrt()
}

fn to_ext(z: Complex<f64>) -> ExtComplex {
    Complex::new(Ext::from(z.re), Ext::from(z.im))
}

fn hi(z: ExtComplex) -> Complex<f64> {
    Complex::new(z.re.hi(), z.im.hi())
}

/// `exp(z)` in double-double: halve the argument until it is tiny, sum the
/// Taylor series, then square back up.
pub fn exp_ext(z: ExtComplex) -> ExtComplex {
    let size = ext_abs(z).hi();
    let mut halvings = 0;
    let mut scale = 1.0;
    while size * scale > 1.0 / 16.0 {
        scale *= 0.5;
        halvings += 1;
    }
    let w = z * Ext::from(scale);
    let mut term = ExtComplex::one();
    let mut sum = ExtComplex::one();
    for k in 1..40 {
        term *= w;
        term = Complex::new(term.re / k as f64, term.im / k as f64);
        sum += term;
        if ext_abs(term).hi() < 1e-36 * ext_abs(sum).hi() {
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum * sum;
    }
    sum
}

/// `S(G; x)`, stored as `s_1..s_n` (there is no constant term).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtreePolynomial {
    #[serde(serialize_with = "ser_biguint_vec")]
    coefficients: Vec<BigUint>,
}

pub fn build_polynomial(counts: &SubtreeCountVector) -> SubtreePolynomial {
    SubtreePolynomial {
        coefficients: counts.as_slice().to_vec(),
    }
}

impl SubtreePolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient of `x^k`; zero for `k = 0` and `k > n`.
    pub fn coefficient(&self, k: usize) -> BigUint {
        match k {
            0 => BigUint::zero(),
            k if k <= self.degree() => self.coefficients[k - 1].clone(),
            _ => BigUint::zero(),
        }
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    /// `S(x)` in double-double arithmetic.
    pub fn eval_ext(&self, x: ExtComplex) -> ExtComplex {
        let mut acc = ExtComplex::zero();
        for c in self.coefficients.iter().rev() {
            let c = rational_to_ext(&BigRational::from_integer(BigInt::from(c.clone())));
            acc = (acc + c) * x;
        }
        acc
    }

    /// The textual form `3x + 2x^2 + x^3`.
    pub fn to_text(&self) -> String {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let power = match i + 1 {
                    1 => "x".to_string(),
                    p => format!("x^{p}"),
                };
                if c.is_one() {
                    power
                } else {
                    format!("{c}{power}")
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// `F(y) = sum_{k=0}^{n-1} (s_{n-k}/s_n) y^k` with exact and double-double
/// coefficients, and `beta = s_{n-1}/s_n`.
#[derive(Clone, Debug)]
pub struct ReversedSeries {
    ratios: Vec<BigRational>,
    ratios_ext: Vec<Ext>,
    beta: BigRational,
}

impl ReversedSeries {
    pub fn new(counts: &SubtreeCountVector) -> Result<Self> {
        let beta = if counts.n() >= 2 {
            exact_beta(counts)?
        } else if counts.spanning().is_zero() {
            return Err(Error::Domain("s_n = 0".into()));
        } else {
            BigRational::zero()
        };
        let n = counts.n();
        let s_n = BigInt::from(counts.spanning().clone());
        let ratios: Vec<BigRational> = (0..n)
            .map(|k| BigRational::new(BigInt::from(counts.get(n - k)), s_n.clone()))
            .collect();
        let ratios_ext = ratios.iter().map(rational_to_ext).collect();
        Ok(ReversedSeries {
            ratios,
            ratios_ext,
            beta,
        })
    }

    /// `s_{n-k}/s_n` for `k = 0..n-1`.
    pub fn ratios(&self) -> &[BigRational] {
        &self.ratios
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn eval(&self, y: ExtComplex) -> ExtComplex {
        horner(&self.ratios_ext, y)
    }

    /// `|F(y) - e^{beta y}| / |e^{beta y}|` at a single point.
    pub fn pointwise_margin(&self, y: ExtComplex) -> (Ext, ExtComplex) {
        let e = exp_ext(y * rational_to_ext(&self.beta));
        (ext_div(ext_abs(self.eval(y) - e), ext_abs(e)), e)
    }
}

fn horner<T: Float>(coeffs: &[T], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| {
        acc * z + Complex::new(c, T::zero())
    })
}

fn horner_with_derivative<T: Float>(coeffs: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, T::zero());
    }
    (p, dp)
}

/// `|p(z)| / sum |c_k| |z|^k`: the relative backward error of `z` as a root.
fn relative_residual<T: Float>(coeffs: &[T], z: Complex<T>) -> T {
    let r = (z.re * z.re + z.im * z.im).sqrt();
    let scale = coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * r + c.abs());
    let p = horner(coeffs, z);
    (p.re * p.re + p.im * p.im).sqrt() / scale
}

struct AberthOutcome {
    roots: Vec<Complex<f64>>,
    iterations: u32,
    converged: bool,
}

/// Simultaneous Aberth-Ehrlich iteration for all roots of the polynomial with
/// ascending coefficients `coeffs`. Each sweep computes every correction
/// before applying any of them.
fn aberth(coeffs: &[f64], max_iterations: u32) -> AberthOutcome {
    let d = coeffs.len() - 1;
    if d == 0 {
        return AberthOutcome {
            roots: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    if d == 1 {
        return AberthOutcome {
            roots: vec![Complex::new(-coeffs[0] / coeffs[1], 0.0)],
            iterations: 0,
            converged: true,
        };
    }
    let radius = (coeffs[0].abs() / coeffs[d].abs()).powf(1.0 / d as f64);
    let mut z: Vec<Complex<f64>> = (0..d)
        .map(|j| Complex::from_polar(radius, std::f64::consts::TAU * j as f64 / d as f64 + 0.7))
        .collect();
    let mut done = vec![false; d];
    for iteration in 1..=max_iterations {
        let corrections: Vec<Complex<f64>> = (0..d)
            .map(|j| {
                if done[j] {
                    return Complex::zero();
                }
                let (p, dp) = horner_with_derivative(coeffs, z[j]);
                if p.is_zero() {
                    return Complex::zero();
                }
                let ratio = p / dp;
                let repulsion: Complex<f64> = (0..d)
                    .filter(|&k| k != j)
                    .map(|k| (z[j] - z[k]).inv())
                    .sum();
                ratio / (Complex::<f64>::one() - ratio * repulsion)
            })
            .collect();
        for j in 0..d {
            if done[j] {
                continue;
            }
            if !corrections[j].is_finite() {
                // Perturb a degenerate iterate rather than propagating NaN.
                z[j] *= Complex::from_polar(1.0 + 1e-3, 0.1);
                continue;
            }
            z[j] -= corrections[j];
            if corrections[j].norm() <= 1e-15 * z[j].norm().max(f64::MIN_POSITIVE) {
                done[j] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return AberthOutcome {
                roots: z,
                iterations: iteration,
                converged: true,
            };
        }
    }
    AberthOutcome {
        roots: z,
        iterations: max_iterations,
        converged: false,
    }
}

/// Newton refinement at the working precision; stops when the step is below
/// the precision or the residual stops improving.
fn newton_polish<T: Float>(
    coeffs: &[T],
    mut z: Complex<T>,
    tiny: T,
    max_steps: u32,
) -> (Complex<T>, u32) {
    let mut residual = relative_residual(coeffs, z);
    for step in 0..max_steps {
        let (p, dp) = horner_with_derivative(coeffs, z);
        if p.is_zero() || dp.is_zero() {
            return (z, step);
        }
        let delta = p / dp;
        let candidate = z - delta;
        let next = relative_residual(coeffs, candidate);
        if next.is_nan() || next > residual {
            return (z, step);
        }
        z = candidate;
        residual = next;
        let size = (z.re * z.re + z.im * z.im).sqrt();
        let dsize = (delta.re * delta.re + delta.im * delta.im).sqrt();
        if dsize <= tiny * size {
            return (z, step + 1);
        }
    }
    (z, max_steps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootOptions {
    /// 53 (double) or 106 (double-double) bits for the polish and residuals.
    pub precision_bits: u32,
    pub max_iterations: u32,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            precision_bits: DEFAULT_PRECISION_BITS,
            max_iterations: 2000,
        }
    }
}

impl RootOptions {
    pub fn validate(&self) -> Result<()> {
        match self.precision_bits {
            53 | 106 => Ok(()),
            p => Err(Error::InvalidArgument(format!(
                "precision_bits must be 53 or 106, got {p}"
            ))),
        }
    }

    /// Residual a certified root must not exceed, for a polynomial of
    /// degree `d`.
    pub fn residual_threshold(&self, d: usize) -> f64 {
        2f64.powi(16 - self.precision_bits as i32) * d.max(1) as f64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCluster {
    pub center: [f64; 2],
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootAnalysis {
    pub degree: usize,
    /// `[re, im]` as decimal strings, sorted by real then imaginary part.
    pub roots: Vec<[String; 2]>,
    pub moduli: Vec<f64>,
    pub residuals: Vec<f64>,
    pub residual_threshold: f64,
    pub max_modulus: f64,
    pub iterations: u32,
    pub polish_steps: u32,
    pub precision_bits: u32,
    pub vieta_relative_error: f64,
    pub conjugate_symmetric: bool,
    pub clusters: Vec<RootCluster>,
    #[serde(skip)]
    values: Vec<ExtComplex>,
}

impl RootAnalysis {
    pub fn values(&self) -> &[ExtComplex] {
        &self.values
    }

    pub fn values_f64(&self) -> Vec<Complex<f64>> {
        self.values.iter().map(|&z| hi(z)).collect()
    }

    /// Largest modulus among the nonzero roots (zero if there are none).
    pub fn max_nonzero_modulus(&self) -> f64 {
        self.max_modulus
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootFailure {
    pub reason: String,
    pub roots: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
}

pub fn find_roots(p: &SubtreePolynomial) -> Result<RootAnalysis> {
    find_roots_with(p, &RootOptions::default())
}

pub fn find_roots_with(p: &SubtreePolynomial, options: &RootOptions) -> Result<RootAnalysis> {
    options.validate()?;
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidArgument("polynomial has degree zero".into()));
    }
    if p.coefficient(1).is_zero() {
        return Err(Error::InvalidArgument("s_1 must be positive".into()));
    }
    if p.coefficient(n).is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient s_n is zero".into(),
        ));
    }
    let counts = SubtreeCountVector::new(p.coefficients().to_vec(), String::new())?;
    let series = ReversedSeries::new(&counts)?;
    let coeffs_f64: Vec<f64> = series.ratios().iter().map(rational_f64).collect();
    let start = aberth(&coeffs_f64, options.max_iterations);

    let mut polish_steps = 0;
    let mut ys: Vec<ExtComplex> = Vec::with_capacity(start.roots.len());
    let mut residuals = Vec::with_capacity(start.roots.len());
    for &y0 in &start.roots {
        if options.precision_bits == 106 {
            let (y, steps) = newton_polish(&series.ratios_ext, to_ext(y0), Ext::from(1e-31), 30);
            polish_steps = polish_steps.max(steps);
            residuals.push(relative_residual(&series.ratios_ext, y).hi());
            ys.push(y);
        } else {
            let (y, steps) = newton_polish(&coeffs_f64, y0, 1e-15, 30);
            polish_steps = polish_steps.max(steps);
            residuals.push(relative_residual(&coeffs_f64, y));
            ys.push(to_ext(y));
        }
    }

    let threshold = options.residual_threshold(n - 1);
    let failure = |reason: String, ys: &[ExtComplex], residuals: &[f64]| {
        Error::Certification(Box::new(RootFailure {
            reason,
            roots: ys.iter().map(|&y| [y.re.hi(), y.im.hi()]).collect(),
            residuals: residuals.to_vec(),
        }))
    };
    if let Some((i, r)) = residuals
        .iter()
        .enumerate()
        .find(|(_, r)| r.is_nan() || **r > threshold)
    {
        return Err(failure(
            format!(
                "root {i} has residual {r:e} above {threshold:e} (aberth converged: {})",
                start.converged
            ),
            &ys,
            &residuals,
        ));
    }

    let mut values: Vec<ExtComplex> = ys
        .iter()
        .map(|&y| ext_complex_div(ExtComplex::one(), y))
        .collect();
    values.push(ExtComplex::zero());
    residuals.push(0.0);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (za, zb) = (hi(values[a]), hi(values[b]));
        za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
    });
    let values: Vec<ExtComplex> = order.iter().map(|&i| values[i]).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    let moduli: Vec<f64> = values.iter().map(|&z| ext_abs(z).hi()).collect();

    // |product of nonzero roots| = s_1 / s_n, compared in logarithms.
    let log_product: f64 = moduli.iter().filter(|&&m| m > 0.0).map(|m| m.ln()).sum();
    let log_target = big_ln(&p.coefficient(1)) - big_ln(&p.coefficient(n));
    let vieta_relative_error = (log_product - log_target).exp_m1().abs();
    if vieta_relative_error.is_nan() || vieta_relative_error > VIETA_TOLERANCE {
        return Err(failure(
            format!("Vieta product off by relative {vieta_relative_error:e}"),
            &ys,
            &residuals,
        ));
    }

    let plain: Vec<Complex<f64>> = values.iter().map(|&z| hi(z)).collect();
    Ok(RootAnalysis {
        degree: n,
        roots: values
            .iter()
            .map(|z| [ext_decimal(z.re), ext_decimal(z.im)])
            .collect(),
        max_modulus: moduli.iter().cloned().fold(0.0, f64::max),
        moduli,
        residuals,
        residual_threshold: threshold,
        iterations: start.iterations,
        polish_steps,
        precision_bits: options.precision_bits,
        vieta_relative_error,
        conjugate_symmetric: conjugate_symmetric(&plain),
        clusters: clusters(&plain),
        values,
    })
}

/// Natural logarithm of a big integer, to double precision.
fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

fn conjugate_symmetric(roots: &[Complex<f64>]) -> bool {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let target = roots[i].conj();
        let tol = 1e-8 * roots[i].norm().max(1.0);
        let partner = (0..roots.len())
            .filter(|&j| !used[j] && (j != i || roots[i].im.abs() <= tol))
            .min_by(|&a, &b| {
                (roots[a] - target)
                    .norm()
                    .total_cmp(&(roots[b] - target).norm())
            });
        match partner {
            Some(j) if (roots[j] - target).norm() <= tol => {
                used[i] = true;
                used[j] = true;
            }
            _ => return false,
        }
    }
    true
}

/// Single-linkage groups of roots within `CLUSTER_RADIUS`; only groups with
/// more than one member are returned.
fn clusters(roots: &[Complex<f64>]) -> Vec<RootCluster> {
    let mut label: Vec<usize> = (0..roots.len()).collect();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm() < CLUSTER_RADIUS {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
    }
    let mut groups: Vec<RootCluster> = Vec::new();
    for root in 0..roots.len() {
        let members: Vec<usize> = (0..roots.len()).filter(|&i| label[i] == root).collect();
        if members.len() > 1 {
            let center: Complex<f64> =
                members.iter().map(|&i| roots[i]).sum::<Complex<f64>>() / members.len() as f64;
            groups.push(RootCluster {
                center: [center.re, center.im],
                multiplicity: members.len(),
            });
        }
    }
    groups
}

/// `C / (alpha log n)`: the root-modulus bound for dense graphs.
pub fn root_bound(alpha: &BigRational, n: usize, c: f64) -> Result<f64> {
    if c.is_nan() || c <= C_THRESHOLD {
        return Err(Error::InvalidArgument(format!(
            "C = {c} must exceed {C_THRESHOLD}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let a = rational_f64(alpha);
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    Ok(c / (a * (n as f64).ln()))
}

#[derive(Clone, Debug, Serialize)]
pub struct RoucheReport {
    pub n: usize,
    pub alpha: String,
    pub beta: String,
    pub c: f64,
    /// `alpha log n / C`.
    pub radius: f64,
    pub circle_points: usize,
    pub evaluated_points: usize,
    pub label: &'static str,
    /// Max over the sampled points of `|F(y) - e^{beta y}| / |e^{beta y}|`.
    pub sampled_supremum: f64,
    pub argmax_angle: f64,
    pub min_exp_modulus: f64,
    /// `n^{-1/C}`.
    pub witness_bound: f64,
    /// Sampled points where `|e^{beta y}| < n^{-1/C}`.
    pub witness_violations: usize,
    pub witness_holds: bool,
    /// Sampled supremum below one.
    pub consistent: bool,
}

/// Samples the Rouché comparison of `F(y)` with `e^{beta y}` on the circle
/// `|y| = alpha log n / C`: `circle_points` equally spaced points plus the
/// four axis points.
pub fn rouche_margin(
    counts: &SubtreeCountVector,
    alpha: &BigRational,
    c: f64,
    circle_points: usize,
) -> Result<RoucheReport> {
    if c.is_nan() || c <= C_THRESHOLD {
        return Err(Error::InvalidArgument(format!(
            "C = {c} must exceed {C_THRESHOLD}"
        )));
    }
    if circle_points == 0 {
        return Err(Error::InvalidArgument(
            "circle_points must be positive".into(),
        ));
    }
    let n = counts.n();
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let a = rational_f64(alpha);
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let series = ReversedSeries::new(counts)?;
    let radius = a * (n as f64).ln() / c;
    let r = Ext::from(radius);

    let mut angles: Vec<(f64, ExtComplex)> = (0..circle_points)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / circle_points as f64;
            (theta, to_ext(Complex::from_polar(radius, theta)))
        })
        .collect();
    let zero = Ext::zero();
    let axes = [
        (0.0, Complex::new(r, zero)),
        (std::f64::consts::FRAC_PI_2, Complex::new(zero, r)),
        (std::f64::consts::PI, Complex::new(-r, zero)),
        (3.0 * std::f64::consts::FRAC_PI_2, Complex::new(zero, -r)),
    ];
    for (theta, y) in axes {
        if let Some(slot) = angles.iter_mut().find(|(t, _)| (t - theta).abs() < 1e-12) {
            slot.1 = y;
        } else {
            angles.push((theta, y));
        }
    }

    let witness_bound = (n as f64).powf(-1.0 / c);
    let mut sup = 0.0f64;
    let mut argmax = 0.0;
    let mut min_exp = f64::INFINITY;
    let mut violations = 0;
    for &(theta, y) in &angles {
        let (margin, e) = series.pointwise_margin(y);
        let margin = margin.hi();
        if margin > sup {
            sup = margin;
            argmax = theta;
        }
        let modulus = ext_abs(e).hi();
        violations += usize::from(modulus < witness_bound);
        min_exp = min_exp.min(modulus);
    }
    Ok(RoucheReport {
        n,
        alpha: rational_string(alpha),
        beta: rational_decimal(series.beta(), 30),
        c,
        radius,
        circle_points,
        evaluated_points: angles.len(),
        label: "sampled supremum",
        sampled_supremum: sup,
        argmax_angle: argmax,
        min_exp_modulus: min_exp,
        witness_bound,
        witness_violations: violations,
        witness_holds: violations == 0,
        consistent: sup < 1.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonRow {
    pub k: usize,
    /// `s_{n-k}/s_n`.
    pub ratio: String,
    /// `beta^k / k!`.
    pub poisson_term: String,
    /// `(s_{n-k}/s_n) k! / beta^k - 1`, exact.
    pub deviation_exact: String,
    pub deviation: String,
    pub deviation_f64: f64,
    /// `e^{-k}/k!`, the dense random graph limit at edge probability one.
    pub random_graph_limit: f64,
    #[serde(skip)]
    pub deviation_rational: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub n: usize,
    pub beta: String,
    pub k_max: usize,
    pub rows: Vec<PoissonRow>,
    /// `max_{1 <= k <= k_max} |dev_k|`.
    pub max_abs_deviation: f64,
}

pub fn poisson_deviation(counts: &SubtreeCountVector, k_max: usize) -> Result<PoissonReport> {
    let n = counts.n();
    if k_max >= n {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} must be below n = {n}"
        )));
    }
    let series = ReversedSeries::new(counts)?;
    let beta = series.beta().clone();
    let mut rows = Vec::with_capacity(k_max + 1);
    let mut factorial = BigInt::one();
    let mut k_fact_f64 = 1.0;
    for k in 0..=k_max {
        if k > 0 {
            factorial *= k;
            k_fact_f64 *= k as f64;
        }
        let ratio = series.ratios()[k].clone();
        let poisson = beta.pow(k as i32) / BigRational::from_integer(factorial.clone());
        let deviation = if poisson.is_zero() {
            return Err(Error::Domain("beta = 0: deviations undefined".into()));
        } else {
            &ratio / &poisson - BigRational::one()
        };
        rows.push(PoissonRow {
            k,
            ratio: rational_decimal(&ratio, 30),
            poisson_term: rational_decimal(&poisson, 30),
            deviation_exact: rational_string(&deviation),
            deviation: rational_decimal(&deviation, 30),
            deviation_f64: rational_f64(&deviation),
            random_graph_limit: (-(k as f64)).exp() / k_fact_f64,
            deviation_rational: deviation,
        });
    }
    let max_abs_deviation = rows
        .iter()
        .skip(1)
        .map(|r| r.deviation_f64.abs())
        .fold(0.0, f64::max);
    Ok(PoissonReport {
        n,
        beta: rational_decimal(&beta, 30),
        k_max,
        rows,
        max_abs_deviation,
    })
}

/// `1 + 3^{1/3}`.
pub fn tree_root_bound() -> f64 {
    1.0 + 3f64.cbrt()
}

pub const TREE_BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct TreeRootReport {
    pub n: usize,
    pub max_modulus: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub within_bound: bool,
    /// Annulus `1/2 <= |x + 1/2| <= 1/2 + (n-1)^{1/(n-1)}`; reported only.
    pub annulus_outer: Option<f64>,
    pub roots_outside_annulus: usize,
    pub all_in_annulus: bool,
    pub roots: RootAnalysis,
}

/// Root moduli of a tree's subtree polynomial against `1 + 3^{1/3}`.
pub fn tree_root_check(tree: &Graph) -> Result<TreeRootReport> {
    if !tree.is_tree() {
        return Err(Error::Domain("input graph is not a tree".into()));
    }
    let n = tree.vertex_count();
    let counts = crate::counting::subtree_counts_with_cap(tree, 64)?;
    let roots = find_roots(&build_polynomial(&counts))?;
    let bound = tree_root_bound();
    let annulus_outer = (n >= 2).then(|| 0.5 + ((n - 1) as f64).powf(1.0 / (n - 1) as f64));
    let outside = match annulus_outer {
        Some(outer) => roots
            .values_f64()
            .iter()
            .filter(|z| {
                let d = (*z + 0.5).norm();
                d < 0.5 - TREE_BOUND_TOLERANCE || d > outer + TREE_BOUND_TOLERANCE
            })
            .count(),
        None => 0,
    };
    Ok(TreeRootReport {
        n,
        max_modulus: roots.max_modulus,
        bound,
        tolerance: TREE_BOUND_TOLERANCE,
        within_bound: roots.max_modulus <= bound + TREE_BOUND_TOLERANCE,
        annulus_outer,
        roots_outside_annulus: outside,
        all_in_annulus: outside == 0,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{complete_graph_counts, subtree_counts};
    use crate::graph::{generate, Family};
    use proptest::prelude::*;

    fn counts(v: &[u64]) -> SubtreeCountVector {
        SubtreeCountVector::new(v.iter().map(|&x| BigUint::from(x)).collect(), String::new())
            .unwrap()
    }

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn assert_root_set(found: &[Complex<f64>], expected: &[Complex<f64>], tol: f64) {
        assert_eq!(found.len(), expected.len());
        for e in expected {
            assert!(
                found.iter().any(|f| close(*f, *e, tol)),
                "missing {e} in {found:?}"
            );
        }
    }

    #[test]
    fn polynomial_construction() {
        let p = build_polynomial(&counts(&[3, 2, 1]));
        assert_eq!(p.to_text(), "3x + 2x^2 + x^3");
        assert_eq!(p.coefficient(0), BigUint::zero());
        assert_eq!(
            build_polynomial(&counts(&[3, 3, 3])).to_text(),
            "3x + 3x^2 + 3x^3"
        );
        assert_eq!(build_polynomial(&counts(&[1])).to_text(), "x");
    }

    #[test]
    fn rational_ext_round_trip() {
        let third = BigRational::new(1.into(), 3.into());
        let e = rational_to_ext(&third);
        let back = ext_to_rational(e);
        let err = rational_f64(&((back - &third) / &third));
        assert!(err.abs() < 1e-31);
    }

    #[test]
    fn double_double_quotient() {
        let third = ext_div(Ext::from(1.0), Ext::from(3.0));
        let err = ext_to_rational(third) - BigRational::new(1.into(), 3.into());
        assert!(rational_f64(&err).abs() < 1e-32);
        let a = rational_to_ext(&BigRational::new(22.into(), 7.into()));
        let b = rational_to_ext(&BigRational::new((-13).into(), 11.into()));
        let exact = BigRational::new((-242).into(), 91.into());
        let err = (ext_to_rational(ext_div(a, b)) - &exact) / exact;
        assert!(rational_f64(&err).abs() < 1e-31);
    }

    #[test]
    fn exponential_in_double_double() {
        assert_eq!(exp_ext(ExtComplex::zero()), ExtComplex::one());
        let e = exp_ext(ExtComplex::one());
        let err = ext_to_rational(e.re - Ext::from(std::f64::consts::E));
        // e - fl(e) = 1.445646891729250158e-16 in absolute terms.
        assert!((rational_f64(&err) - 1.445_646_891_729_250_2e-16).abs() < 1e-30);
        let minus_one = exp_ext(Complex::new(Ext::zero(), Ext::from(std::f64::consts::PI)));
        assert!((minus_one.re.hi() + 1.0).abs() < 1e-30 && minus_one.im.hi().abs() < 1.3e-16);
    }

    #[test]
    fn path_three_roots() {
        let r = find_roots(&build_polynomial(&counts(&[3, 2, 1]))).unwrap();
        let s2 = 2f64.sqrt();
        assert_root_set(
            &r.values_f64(),
            &[
                Complex::zero(),
                Complex::new(-1.0, s2),
                Complex::new(-1.0, -s2),
            ],
            1e-12,
        );
        assert!((r.max_modulus - 3f64.sqrt()).abs() < 1e-12);
        assert!(r.conjugate_symmetric);
        assert!(r.residuals.iter().all(|&x| x <= r.residual_threshold));
    }

    #[test]
    fn triangle_roots() {
        let r = find_roots(&build_polynomial(&counts(&[3, 3, 3]))).unwrap();
        let w = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert_root_set(&r.values_f64(), &[Complex::zero(), w, w.conj()], 1e-12);
        assert!((r.max_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_and_single_vertex() {
        let r = find_roots(&build_polynomial(&counts(&[1]))).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.max_modulus, 0.0);
        let r = find_roots(&build_polynomial(&counts(&[2, 1]))).unwrap();
        assert_root_set(
            &r.values_f64(),
            &[Complex::zero(), Complex::new(-2.0, 0.0)],
            1e-14,
        );
    }

    #[test]
    fn star_root_sits_on_the_tree_bound() {
        // S = x ((1 + x)^3 + 3): the real root is -1 - 3^{1/3}.
        let star = generate(&Family::Star(4), 0).unwrap();
        let report = tree_root_check(&star).unwrap();
        assert!((report.max_modulus - tree_root_bound()).abs() < 1e-13);
        assert!(report.within_bound);
    }

    #[test]
    fn double_precision_mode() {
        let opts = RootOptions {
            precision_bits: 53,
            ..RootOptions::default()
        };
        let r = find_roots_with(
            &build_polynomial(&complete_graph_counts(12).unwrap()),
            &opts,
        )
        .unwrap();
        assert_eq!(r.precision_bits, 53);
        let bad = RootOptions {
            precision_bits: 80,
            ..RootOptions::default()
        };
        assert!(matches!(
            find_roots_with(&build_polynomial(&counts(&[1])), &bad),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn complete_graph_roots_are_certified() {
        for n in [6, 10, 16, 20, 25, 30] {
            let r = find_roots(&build_polynomial(&complete_graph_counts(n).unwrap())).unwrap();
            assert_eq!(r.roots.len(), n);
            assert!(r.vieta_relative_error <= VIETA_TOLERANCE);
            assert!(r.conjugate_symmetric);
        }
    }

    #[test]
    fn root_bound_examples() {
        let a = BigRational::new(99.into(), 100.into());
        // 7 / (0.99 ln 100) = 1.535384...
        assert!((root_bound(&a, 100, 7.0).unwrap() - 1.535_384_5).abs() < 1e-6);
        assert!(root_bound(&a, 200, 7.0).unwrap() < root_bound(&a, 100, 7.0).unwrap());
        let a = BigRational::new(3.into(), 4.into());
        assert!((root_bound(&a, 4, 7.0).unwrap() - 6.732_576_9).abs() < 1e-6);
        assert!(matches!(
            root_bound(&a, 4, 6.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn margin_vanishes_at_origin() {
        let series = ReversedSeries::new(&complete_graph_counts(7).unwrap()).unwrap();
        let (m, e) = series.pointwise_margin(ExtComplex::zero());
        assert_eq!(m, Ext::zero());
        assert_eq!(e, ExtComplex::one());
    }

    #[test]
    fn rouche_on_k20() {
        let c = complete_graph_counts(20).unwrap();
        let alpha = BigRational::new(19.into(), 20.into());
        let report = rouche_margin(&c, &alpha, 7.0, 256).unwrap();
        assert_eq!(report.evaluated_points, 256);
        assert!(report.sampled_supremum >= 0.0 && report.sampled_supremum < 1.0);
        assert!(report.witness_holds);
        assert!(matches!(
            rouche_margin(&c, &alpha, 6.0, 256),
            Err(Error::InvalidArgument(_))
        ));
        let odd = rouche_margin(&c, &alpha, 7.0, 7).unwrap();
        assert_eq!(odd.evaluated_points, 7 + 3);
    }

    #[test]
    fn poisson_examples() {
        for c in [complete_graph_counts(9).unwrap(), counts(&[3, 2, 1])] {
            let rep = poisson_deviation(&c, 1).unwrap();
            assert!(rep.rows[0].deviation_rational.is_zero());
            assert!(rep.rows[1].deviation_rational.is_zero());
        }
        // dev_2 for K_20 from the closed form, in exact arithmetic.
        let q = |n: BigInt, d: BigInt| BigRational::new(n, d);
        let p20 = |e: u32| BigInt::from(20).pow(e);
        let beta = q(BigInt::from(20) * BigInt::from(19).pow(17), p20(18));
        let ratio2 = q(BigInt::from(190) * BigInt::from(18).pow(16), p20(18));
        let expected =
            ratio2 * BigRational::from_integer(2.into()) / beta.pow(2) - BigRational::one();
        let rep = poisson_deviation(&complete_graph_counts(20).unwrap(), 3).unwrap();
        assert_eq!(rep.rows[2].deviation_rational, expected);
        assert!(matches!(
            poisson_deviation(&counts(&[3, 2, 1]), 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn complete_graph_ratios_approach_the_random_graph_limit() {
        // s_{n-k}/s_n -> e^{-k}/k! for K_n.
        let gap = |n: usize| {
            let rep = poisson_deviation(&complete_graph_counts(n).unwrap(), 2).unwrap();
            let r = &rep.rows[2];
            (r.ratio.parse::<f64>().unwrap() - r.random_graph_limit).abs()
        };
        assert!(gap(80) < gap(40) && gap(40) < gap(20));
        assert!(gap(80) < 5e-3);
    }

    #[test]
    fn tree_check_rejects_non_trees() {
        let c4 = generate(&Family::Cycle(4), 0).unwrap();
        assert!(matches!(tree_root_check(&c4), Err(Error::Domain(_))));
        let p2 = generate(&Family::Path(2), 0).unwrap();
        let rep = tree_root_check(&p2).unwrap();
        assert!((rep.max_modulus - 2.0).abs() < 1e-14 && rep.within_bound);
        let p3 = tree_root_check(&generate(&Family::Path(3), 0).unwrap()).unwrap();
        assert!((p3.max_modulus - 3f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn root_sets_are_certified(n in 2usize..=10, p in 0.2f64..1.0, seed: u64) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            prop_assume!(g.is_connected());
            let c = subtree_counts(&g).unwrap();
            let r = find_roots(&build_polynomial(&c)).unwrap();
            prop_assert_eq!(r.roots.len(), n);
            prop_assert!(r.vieta_relative_error <= VIETA_TOLERANCE);
            prop_assert!(r.conjugate_symmetric);
            prop_assert!(r.residuals.iter().all(|&x| x <= r.residual_threshold));
            // Independent check: S vanishes (relatively) at every root.
            let poly = build_polynomial(&c);
            for &z in r.values() {
                let v = ext_abs(poly.eval_ext(z)).hi();
                let scale: f64 = (1..=n).map(|k| poly.coefficient(k).to_f64().unwrap() * ext_abs(z).hi().powi(k as i32)).sum();
                prop_assert!(v <= 1e-20 * scale.max(f64::MIN_POSITIVE) || scale == 0.0);
            }
        }

        #[test]
        fn deviations_vanish_for_k_up_to_one(n in 2usize..=9, p in 0.3f64..1.0, seed: u64) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            prop_assume!(g.is_connected());
            let rep = poisson_deviation(&subtree_counts(&g).unwrap(), 1).unwrap();
            prop_assert!(rep.rows[0].deviation_rational.is_zero());
            prop_assert!(rep.rows[1].deviation_rational.is_zero());
        }
    }
}
