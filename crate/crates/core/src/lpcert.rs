//! Floating point feasibility solving with exact Farkas certification.
//!
//! The simplex only ever produces *candidates*. A system is declared
//! infeasible solely by [`verify_farkas`], which works in exact rational
//! arithmetic; a system is declared feasible solely by an exactly verified
//! rational point.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("expected {expected} multipliers, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} coefficients, system has {expected} variables")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("invalid row tag {0:?}")]
    Tag(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    /// `a . x >= b`
    Ge,
    /// `a . x = b`
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// Provenance of a row, a whitespace-free token such as `dual:x_0_2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowTag(String);

impl RowTag {
    pub fn new(tag: impl Into<String>) -> Result<Self, LpError> {
        let tag = tag.into();
        if tag.is_empty() || tag.chars().any(char::is_whitespace) {
            return Err(LpError::Tag(tag));
        }
        Ok(RowTag(tag))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Rule part of the tag (before any `:`).
    pub fn rule(&self) -> &str {
        self.0.split(':').next().unwrap_or("")
    }
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<i64>,
    pub sense: Sense,
    pub rhs: i64,
    pub tag: RowTag,
}

/// Exact integer linear constraints over real variables. Variables are
/// unrestricted; sign conditions must appear as explicit rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConstraintSystem {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

impl ConstraintSystem {
    pub fn new(variables: Vec<String>) -> Self {
        Self { variables, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn push(&mut self, coeffs: Vec<i64>, sense: Sense, rhs: i64, tag: RowTag) -> Result<usize, LpError> {
        if coeffs.len() != self.variables.len() {
            return Err(LpError::RowLength {
                row: self.rows.len(),
                expected: self.variables.len(),
                found: coeffs.len(),
            });
        }
        self.rows.push(Row { coeffs, sense, rhs, tag });
        Ok(self.rows.len() - 1)
    }

    /// Appends `x_j >= 0` for every variable.
    pub fn push_nonnegativity(&mut self) {
        for j in 0..self.num_vars() {
            let mut c = vec![0; self.num_vars()];
            c[j] = 1;
            let tag = RowTag(alloc::format!("nonneg:{}", self.variables[j]));
            self.rows.push(Row { coeffs: c, sense: Sense::Ge, rhs: 0, tag });
        }
    }

    pub fn validate(&self) -> Result<(), LpError> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.len() != self.num_vars() {
                return Err(LpError::RowLength { row: i, expected: self.num_vars(), found: r.coeffs.len() });
            }
        }
        Ok(())
    }

    /// Whether the rational point satisfies every row exactly.
    pub fn satisfied_by(&self, point: &[BigRational]) -> bool {
        point.len() == self.num_vars()
            && self.rows.iter().all(|r| {
                let lhs: BigRational = r
                    .coeffs
                    .iter()
                    .zip(point)
                    .filter(|(c, _)| **c != 0)
                    .map(|(&c, x)| x * BigRational::from_integer(BigInt::from(c)))
                    .sum();
                let rhs = BigRational::from_integer(BigInt::from(r.rhs));
                match r.sense {
                    Sense::Ge => lhs >= rhs,
                    Sense::Eq => lhs == rhs,
                }
            })
    }
}

/// One exact multiplier per row; the weighted sum of rows is `0 (>=|=) combined_rhs`
/// with `combined_rhs > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<BigRational>,
    pub combined_rhs: BigRational,
}

impl FarkasCertificate {
    /// Builds the certificate, computing the combined right-hand side.
    pub fn from_multipliers(cs: &ConstraintSystem, multipliers: Vec<BigRational>) -> Self {
        let combined_rhs = cs
            .rows
            .iter()
            .zip(&multipliers)
            .filter(|(_, y)| !y.is_zero())
            .map(|(r, y)| y * BigRational::from_integer(BigInt::from(r.rhs)))
            .sum();
        Self { multipliers, combined_rhs }
    }

    pub fn support(&self) -> usize {
        self.multipliers.iter().filter(|y| !y.is_zero()).count()
    }
}

/// Exact check that `cert` proves `cs` has no real solution.
pub fn verify_farkas(cs: &ConstraintSystem, cert: &FarkasCertificate) -> Result<bool, LpError> {
    if cert.multipliers.len() != cs.rows.len() {
        return Err(LpError::SizeMismatch { expected: cs.rows.len(), found: cert.multipliers.len() });
    }
    cs.validate()?;
    let mut combo = vec![BigRational::zero(); cs.num_vars()];
    let mut rhs = BigRational::zero();
    for (row, y) in cs.rows.iter().zip(&cert.multipliers) {
        if y.is_zero() {
            continue;
        }
        if row.sense == Sense::Ge && y.is_negative() {
            return Ok(false);
        }
        for (acc, &c) in combo.iter_mut().zip(&row.coeffs) {
            if c != 0 {
                *acc += y * BigRational::from_integer(BigInt::from(c));
            }
        }
        rhs += y * BigRational::from_integer(BigInt::from(row.rhs));
    }
    Ok(combo.iter().all(Zero::is_zero) && rhs.is_positive() && rhs == cert.combined_rhs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Tolerance on row satisfaction.
    pub feasibility_tol: f64,
    pub pivot_tol: f64,
    /// Tolerance on reduced-cost signs in the ratio test.
    pub optimality_tol: f64,
    /// Consecutive degenerate pivots after which pivoting switches to
    /// Bland's smallest-index rule.
    pub degenerate_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200_000,
            feasibility_tol: 1e-7,
            pivot_tol: 1e-9,
            optimality_tol: 1e-9,
            degenerate_limit: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Feasible,
    InfeasibleCandidate,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Point (for `Feasible`).
    pub point: Vec<f64>,
    /// Float Farkas multipliers per row in the row's original units
    /// (for `InfeasibleCandidate`).
    pub multipliers: Vec<f64>,
    /// Multipliers relative to rows scaled to unit max coefficient.
    pub scaled_multipliers: Vec<f64>,
    /// Integer scale of each row (its largest absolute coefficient).
    pub row_scale: Vec<i64>,
    pub iterations: usize,
    /// Violation of the contradicting row, or the largest violation of a
    /// reported point.
    pub residual: f64,
}

/// Dense tableau dual simplex on the feasibility problem.
///
/// Variables with an explicit `x_j >= 0` row are bounded below; all others
/// are split into positive and negative parts. Each remaining row gets a
/// slack (nonnegative for `>=`, fixed at zero for `=`), so the all-slack
/// basis is a starting point. A small positive cost on every structural
/// column makes that basis dual feasible and breaks ties; no phase one is
/// needed. When a primal-infeasible row admits no entering column, that
/// tableau row is a Farkas combination and its slack coefficients are the
/// candidate multipliers.
pub fn solve_feasibility(cs: &ConstraintSystem, opts: &SolverOptions) -> SolveOutcome {
    let nv = cs.num_vars();
    let m_all = cs.rows.len();
    let mut bounded = vec![false; nv];
    let mut bound_row = vec![false; m_all];
    let mut trows: Vec<usize> = Vec::new();
    for (i, r) in cs.rows.iter().enumerate() {
        let mut nz = r.coeffs.iter().enumerate().filter(|(_, c)| **c != 0);
        if let (Some((j, &c)), None) = (nz.next(), nz.next()) {
            if r.sense == Sense::Ge && r.rhs == 0 && c > 0 && !bounded[j] {
                bounded[j] = true;
                bound_row[i] = true;
                continue;
            }
        }
        trows.push(i);
    }
    let row_scale: Vec<i64> =
        cs.rows.iter().map(|r| r.coeffs.iter().map(|c| c.abs()).max().filter(|&s| s > 0).unwrap_or(1)).collect();

    // Columns: structural parts, then one slack per tableau row.
    let mut col_var: Vec<(usize, f64)> = Vec::new();
    for (j, &b) in bounded.iter().enumerate() {
        col_var.push((j, 1.0));
        if !b {
            col_var.push((j, -1.0));
        }
    }
    let nstruct = col_var.len();
    let m = trows.len();
    let ncols = nstruct + m;
    let width = ncols + 1;
    let mut fixed = vec![false; ncols];
    let mut tab = vec![0.0f64; m * width];
    let mut basis: Vec<usize> = (0..m).map(|t| nstruct + t).collect();
    for (t, &i) in trows.iter().enumerate() {
        let r = &cs.rows[i];
        let s = row_scale[i] as f64;
        let row = &mut tab[t * width..(t + 1) * width];
        for (c, &(j, dir)) in col_var.iter().enumerate() {
            let a = r.coeffs[j];
            if a != 0 {
                row[c] = -(a as f64) / s * dir;
            }
        }
        row[nstruct + t] = 1.0;
        row[ncols] = -(r.rhs as f64) / s;
        fixed[nstruct + t] = r.sense == Sense::Eq;
    }
    // Reduced costs; the last entry carries the negated objective.
    let mut obj = vec![0.0f64; width];
    for (c, o) in obj.iter_mut().take(nstruct).enumerate() {
        *o = 1.0 + ((c * 7919) % 1009) as f64 / 1009.0;
    }
    let mut is_basic = vec![false; ncols];
    for &b in &basis {
        is_basic[b] = true;
    }

    let mut iterations = 0;
    let mut degenerate_run = 0usize;
    let mut verdict: Option<(usize, f64)> = None;
    let mut feasible = false;
    while iterations < opts.max_iterations {
        let bland = degenerate_run >= opts.degenerate_limit;
        // Leaving row: largest bound violation (Bland: smallest basic index).
        let mut leave: Option<(usize, f64)> = None;
        for t in 0..m {
            let beta = tab[t * width + ncols];
            let mut viol = if fixed[basis[t]] { beta.abs() } else { -beta };
            if viol <= opts.feasibility_tol {
                continue;
            }
            if !bland {
                let w: f64 = tab[t * width + nstruct..t * width + ncols].iter().map(|v| v * v).sum();
                viol /= libm::sqrt(w);
            }
            let better = match leave {
                None => true,
                Some((l, v)) => {
                    if bland {
                        basis[t] < basis[l]
                    } else {
                        viol > v
                    }
                }
            };
            if better {
                leave = Some((t, viol));
            }
        }
        let Some((r, _)) = leave else {
            feasible = true;
            break;
        };
        let beta = tab[r * width + ncols];
        // rho = +1: the basic value must rise, entering coefficients are negative.
        let rho = if beta < 0.0 { 1.0 } else { -1.0 };
        let row = &tab[r * width..(r + 1) * width];
        let eligible = |j: usize| !is_basic[j] && !fixed[j] && rho * row[j] < -opts.pivot_tol;
        let enter = if bland {
            let mut best: Option<(usize, f64)> = None;
            for j in (0..ncols).filter(|&j| eligible(j)) {
                let ratio = obj[j].max(0.0) / row[j].abs();
                if best.is_none_or(|(_, b)| ratio < b - 1e-12) {
                    best = Some((j, ratio));
                }
            }
            best.map(|(j, _)| j)
        } else {
            let mut bound = f64::INFINITY;
            for j in (0..ncols).filter(|&j| eligible(j)) {
                bound = bound.min((obj[j].max(0.0) + opts.optimality_tol) / row[j].abs());
            }
            let mut best: Option<(usize, f64)> = None;
            for j in (0..ncols).filter(|&j| eligible(j)) {
                let a = row[j].abs();
                if obj[j].max(0.0) / a <= bound && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(q) = enter else {
            verdict = Some((r, rho));
            break;
        };
        if obj[q] / row[q].abs() <= 1e-12 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        is_basic[basis[r]] = false;
        is_basic[q] = true;
        pivot(&mut tab, &mut obj, width, m, r, q);
        basis[r] = q;
        iterations += 1;
    }

    let mut outcome = SolveOutcome {
        status: SolveStatus::Inconclusive,
        point: Vec::new(),
        multipliers: Vec::new(),
        scaled_multipliers: Vec::new(),
        row_scale,
        iterations,
        residual: f64::NAN,
    };
    if let Some((r, rho)) = verdict {
        let mut scaled = vec![0.0f64; m_all];
        let mut mult = vec![0.0f64; m_all];
        for (t, &i) in trows.iter().enumerate() {
            scaled[i] = rho * tab[r * width + nstruct + t];
            mult[i] = scaled[i] / outcome.row_scale[i] as f64;
        }
        // Bound rows absorb the remaining negative coefficients.
        for i in (0..m_all).filter(|&i| bound_row[i]) {
            let row = &cs.rows[i];
            let j = row.coeffs.iter().position(|&c| c != 0).expect("bound row has a variable");
            let combo: f64 = trows.iter().map(|&k| mult[k] * cs.rows[k].coeffs[j] as f64).sum();
            mult[i] = (-combo / row.coeffs[j] as f64).max(0.0);
            scaled[i] = mult[i] * outcome.row_scale[i] as f64;
        }
        outcome.status = SolveStatus::InfeasibleCandidate;
        outcome.residual = tab[r * width + ncols].abs();
        outcome.multipliers = mult;
        outcome.scaled_multipliers = scaled;
        return outcome;
    }
    if !feasible {
        return outcome;
    }
    let mut colval = vec![0.0f64; ncols];
    for t in 0..m {
        colval[basis[t]] = tab[t * width + ncols];
    }
    let mut point = vec![0.0f64; nv];
    for (c, &(j, dir)) in col_var.iter().enumerate() {
        point[j] += dir * colval[c];
    }
    let mut worst = 0.0f64;
    for (i, r) in cs.rows.iter().enumerate() {
        let lhs: f64 = r.coeffs.iter().zip(&point).map(|(&c, x)| c as f64 * x).sum();
        let viol = match r.sense {
            Sense::Ge => (r.rhs as f64 - lhs).max(0.0),
            Sense::Eq => (r.rhs as f64 - lhs).abs(),
        } / outcome.row_scale[i] as f64;
        worst = worst.max(viol);
    }
    outcome.residual = worst;
    if worst <= opts.feasibility_tol * 10.0 {
        outcome.status = SolveStatus::Feasible;
        outcome.point = point;
    }
    outcome
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, m: usize, lr: usize, enter: usize) {
    let p = tab[lr * width + enter];
    {
        let row = &mut tab[lr * width..(lr + 1) * width];
        for v in row.iter_mut() {
            *v /= p;
        }
        row[enter] = 1.0;
    }
    let pivot_row: Vec<f64> = tab[lr * width..(lr + 1) * width].to_vec();
    let nz: Vec<usize> = (0..width).filter(|&j| pivot_row[j] != 0.0).collect();
    for t in 0..m {
        if t == lr {
            continue;
        }
        let f = tab[t * width + enter];
        if f == 0.0 {
            continue;
        }
        let row = &mut tab[t * width..(t + 1) * width];
        for &j in &nz {
            row[j] -= f * pivot_row[j];
        }
        row[enter] = 0.0;
    }
    let f = obj[enter];
    if f != 0.0 {
        for &j in &nz {
            obj[j] -= f * pivot_row[j];
        }
        obj[enter] = 0.0;
    }
}

/// Best rational approximation with denominator at most `max_denominator`
/// (continued fractions, choosing between the last convergent and the best
/// semiconvergent).
pub fn rationalize_value(value: f64, max_denominator: u64) -> BigRational {
    let max_den = max_denominator.max(1) as i128;
    if !value.is_finite() {
        return BigRational::zero();
    }
    let negative = value < 0.0;
    let mut x = libm::fabs(value);
    // h/k convergents
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    for _ in 0..64 {
        let a_f = libm::floor(x);
        if a_f > 1e30 {
            break;
        }
        let a = a_f as i128;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            // semiconvergent with the largest admissible coefficient
            let t = (max_den - k0) / k1.max(1);
            let (hs, ks) = (t * h1 + h0, t * k1 + k0);
            let best = ratio(h1, k1);
            let semi = ratio(hs, ks);
            let target = BigRational::from_float(libm::fabs(value)).unwrap_or_else(BigRational::zero);
            let pick = if ks > 0 && (&semi - &target).abs() < (&best - &target).abs() { semi } else { best };
            return if negative { -pick } else { pick };
        }
        let h2 = a * h1 + h0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = x - a_f;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    let r = ratio(h1, k1);
    if negative {
        -r
    } else {
        r
    }
}

fn ratio(h: i128, k: i128) -> BigRational {
    if k == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(h), BigInt::from(k))
}

/// Rationalizes every value with the given denominator bound.
pub fn rationalize(values: &[f64], max_denominator: u64) -> Vec<BigRational> {
    values.iter().map(|&v| rationalize_value(v, max_denominator)).collect()
}

/// Rationalizes Farkas multipliers: values on `>=` rows that are negative
/// (float noise) are clamped to zero.
pub fn rationalize_multipliers(cs: &ConstraintSystem, values: &[f64], max_denominator: u64) -> Vec<BigRational> {
    cs.rows
        .iter()
        .zip(values)
        .map(|(r, &v)| {
            let q = rationalize_value(v, max_denominator);
            if r.sense == Sense::Ge && q.is_negative() {
                BigRational::zero()
            } else {
                q
            }
        })
        .collect()
}

/// Denominator ladder and fallbacks used by [`prove_infeasible`].
#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    pub denominators: Vec<u64>,
    /// Try the exact binary value of each float multiplier after the ladder.
    pub exact_float: bool,
    /// Finally re-solve the multiplier support exactly.
    pub exact_resolve: bool,
    /// Support size above which the exact re-solve is skipped.
    pub exact_resolve_limit: usize,
    pub solver: SolverOptions,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            denominators: vec![1, 1_000, 1_000_000, 1_000_000_000],
            exact_float: true,
            exact_resolve: true,
            exact_resolve_limit: 600,
            solver: SolverOptions::default(),
        }
    }
}

impl RetryPolicy {
    /// Replaces the ladder by powers of ten up to `max`.
    pub fn with_max_denominator(mut self, max: u64) -> Self {
        let mut ladder = vec![1u64];
        let mut q = 1u64;
        while q < max {
            q = q.saturating_mul(1000).min(max);
            ladder.push(q);
        }
        self.denominators = ladder;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rung {
    Denominator(u64),
    ExactFloat,
    ExactResolve,
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rung::Denominator(q) => write!(f, "denominator<={q}"),
            Rung::ExactFloat => f.write_str("exact-float"),
            Rung::ExactResolve => f.write_str("exact-resolve"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertStats {
    pub iterations: usize,
    pub violation: f64,
    pub rung: Rung,
    pub support: usize,
    pub rows: usize,
    pub variables: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certified {
    pub certificate: FarkasCertificate,
    pub stats: CertStats,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    /// The system has an exactly verified rational solution.
    #[error("system is feasible (exactly verified point)")]
    ProvablyFeasible { point: Vec<BigRational> },
    #[error("certification failed: {reason}")]
    CertificationFailed { reason: String, status: SolveStatus },
}

/// Solves, rationalizes through the policy ladder, and returns the first
/// exactly verified Farkas certificate.
pub fn prove_infeasible(cs: &ConstraintSystem, policy: &RetryPolicy) -> Result<Certified, CertifyError> {
    let failed = |reason: &str, status| CertifyError::CertificationFailed { reason: reason.into(), status };
    if cs.validate().is_err() {
        return Err(failed("malformed system", SolveStatus::Inconclusive));
    }
    let outcome = solve_feasibility(cs, &policy.solver);
    match outcome.status {
        SolveStatus::Inconclusive => Err(failed("solver inconclusive", SolveStatus::Inconclusive)),
        SolveStatus::Feasible => {
            let mut ladder = policy.denominators.clone();
            ladder.push(1_000_000_000_000);
            for q in ladder {
                let point = rationalize(&outcome.point, q);
                if cs.satisfied_by(&point) {
                    return Err(CertifyError::ProvablyFeasible { point });
                }
            }
            Err(failed("float point found but no exact point verified", SolveStatus::Feasible))
        }
        SolveStatus::InfeasibleCandidate => {
            let stats = |rung, cert: &FarkasCertificate| CertStats {
                iterations: outcome.iterations,
                violation: outcome.residual,
                rung,
                support: cert.support(),
                rows: cs.rows.len(),
                variables: cs.num_vars(),
            };
            for &q in &policy.denominators {
                let scaled = rationalize_multipliers(cs, &outcome.scaled_multipliers, q);
                let y = unscale(scaled, &outcome.row_scale);
                if let Some(cert) = assemble_certificate(cs, y) {
                    let stats = stats(Rung::Denominator(q), &cert);
                    return Ok(Certified { certificate: cert, stats });
                }
            }
            if policy.exact_float {
                let y: Vec<BigRational> = cs
                    .rows
                    .iter()
                    .zip(&outcome.multipliers)
                    .map(|(r, &v)| {
                        let q = BigRational::from_float(v).unwrap_or_else(BigRational::zero);
                        if r.sense == Sense::Ge && q.is_negative() {
                            BigRational::zero()
                        } else {
                            q
                        }
                    })
                    .collect();
                if let Some(cert) = assemble_certificate(cs, y) {
                    let stats = stats(Rung::ExactFloat, &cert);
                    return Ok(Certified { certificate: cert, stats });
                }
            }
            if policy.exact_resolve {
                if let Some(y) = exact_resolve(cs, &outcome.multipliers, policy.exact_resolve_limit) {
                    if let Some(cert) = assemble_certificate(cs, y) {
                        let stats = stats(Rung::ExactResolve, &cert);
                        return Ok(Certified { certificate: cert, stats });
                    }
                }
            }
            Err(failed("no rationalization verified", SolveStatus::InfeasibleCandidate))
        }
    }
}

fn unscale(scaled: Vec<BigRational>, row_scale: &[i64]) -> Vec<BigRational> {
    scaled
        .into_iter()
        .zip(row_scale)
        .map(|(y, &s)| if s == 1 { y } else { y / BigRational::from_integer(BigInt::from(s)) })
        .collect()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Turns approximate multipliers into an exact certificate by cancelling
/// the residual combination with unit rows (for negative entries) and with a
/// single row of uniform sign (for positive entries), then verifying.
pub fn assemble_certificate(cs: &ConstraintSystem, mut y: Vec<BigRational>) -> Option<FarkasCertificate> {
    let nv = cs.num_vars();
    for (r, v) in cs.rows.iter().zip(y.iter_mut()) {
        if r.sense == Sense::Ge && v.is_negative() {
            *v = BigRational::zero();
        }
    }
    let residual = |y: &[BigRational]| -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); nv];
        for (r, v) in cs.rows.iter().zip(y) {
            if v.is_zero() {
                continue;
            }
            for (a, &c) in acc.iter_mut().zip(&r.coeffs) {
                if c != 0 {
                    *a += v * int(c);
                }
            }
        }
        acc
    };
    // Unit rows: for each variable the >= row x_j >= c (c largest) or the
    // equality row x_j = c.
    let mut unit_ge: Vec<Option<(usize, i64, i64)>> = vec![None; nv];
    let mut unit_eq: Vec<Option<(usize, i64, i64)>> = vec![None; nv];
    for (i, r) in cs.rows.iter().enumerate() {
        let mut nz = r.coeffs.iter().enumerate().filter(|(_, c)| **c != 0);
        if let (Some((j, &c)), None) = (nz.next(), nz.next()) {
            match r.sense {
                Sense::Ge if c > 0 => {
                    let better = unit_ge[j].is_none_or(|(_, c0, b0)| int(r.rhs) / int(c) > int(b0) / int(c0));
                    if better {
                        unit_ge[j] = Some((i, c, r.rhs));
                    }
                }
                Sense::Eq => {
                    unit_eq[j].get_or_insert((i, c, r.rhs));
                }
                _ => {}
            }
        }
    }
    let absorb_negatives = |y: &mut Vec<BigRational>, res: &[BigRational]| -> bool {
        for (j, rj) in res.iter().enumerate() {
            if !rj.is_negative() {
                continue;
            }
            // add mu * (c x_j) with mu * c = -rj
            if let Some((i, c, _)) = unit_ge[j] {
                y[i] += -rj / int(c);
            } else if let Some((i, c, _)) = unit_eq[j] {
                y[i] += -rj / int(c);
            } else {
                return false;
            }
        }
        true
    };
    let absorb_positives_eq = |y: &mut Vec<BigRational>, res: &[BigRational]| -> bool {
        for (j, rj) in res.iter().enumerate() {
            if !rj.is_positive() {
                continue;
            }
            if let Some((i, c, _)) = unit_eq[j] {
                y[i] -= rj / int(c);
            } else {
                return false;
            }
        }
        true
    };

    let res = residual(&y);
    let positive: Vec<usize> = (0..nv).filter(|&j| res[j].is_positive()).collect();
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    if positive.is_empty() {
        candidates.push(y.clone());
    } else {
        // equality unit rows
        let mut direct = y.clone();
        if absorb_positives_eq(&mut direct, &res) {
            candidates.push(direct);
        }
        // one row whose coefficients share a sign on every positive entry
        for (i, r) in cs.rows.iter().enumerate() {
            let all_pos = positive.iter().all(|&j| r.coeffs[j] > 0);
            let all_neg = positive.iter().all(|&j| r.coeffs[j] < 0);
            let t_sign = match (r.sense, all_pos, all_neg) {
                (Sense::Eq, true, _) => -1,
                (Sense::Eq, _, true) | (Sense::Ge, _, true) => 1,
                _ => continue,
            };
            let mut t = BigRational::zero();
            for &j in &positive {
                let need = &res[j] / int(r.coeffs[j].abs());
                if need > t {
                    t = need;
                }
            }
            let mut cand = y.clone();
            cand[i] += if t_sign > 0 { t } else { -t };
            candidates.push(cand);
        }
    }
    for mut cand in candidates {
        let res = residual(&cand);
        if res.iter().any(Signed::is_positive) {
            continue;
        }
        if !absorb_negatives(&mut cand, &res) {
            continue;
        }
        let cert = FarkasCertificate::from_multipliers(cs, cand);
        if verify_farkas(cs, &cert) == Ok(true) {
            return Some(cert);
        }
    }
    None
}

/// Exact Gaussian re-solve on the rows with nonzero float multipliers:
/// columns whose float combination vanishes become exact equations, the
/// right-hand side is normalized to one, and free unknowns take their
/// (rationalized) float values.
fn exact_resolve(cs: &ConstraintSystem, y: &[f64], limit: usize) -> Option<Vec<BigRational>> {
    let ymax = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if ymax == 0.0 {
        return None;
    }
    let support: Vec<usize> = (0..y.len()).filter(|&i| y[i].abs() > 1e-9 * ymax).collect();
    if support.is_empty() || support.len() > limit {
        return None;
    }
    let nv = cs.num_vars();
    let mut tight = Vec::new();
    for j in 0..nv {
        let mut s = 0.0;
        let mut mag = 0.0;
        for &i in &support {
            let t = y[i] * cs.rows[i].coeffs[j] as f64;
            s += t;
            mag += t.abs();
        }
        if mag > 0.0 && s.abs() <= 1e-7 * mag {
            tight.push(j);
        }
    }
    let rhs_float: f64 = support.iter().map(|&i| y[i] * cs.rows[i].rhs as f64).sum();
    if rhs_float <= 0.0 {
        return None;
    }
    // Equations: rows = tight columns + normalization; unknowns = support.
    let nu = support.len();
    let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(tight.len() + 1);
    for &j in &tight {
        let mut eq: Vec<BigRational> = support.iter().map(|&i| int(cs.rows[i].coeffs[j])).collect();
        eq.push(BigRational::zero());
        mat.push(eq);
    }
    let mut norm: Vec<BigRational> = support.iter().map(|&i| int(cs.rows[i].rhs)).collect();
    norm.push(BigRational::one());
    mat.push(norm);
    let pivots = rational_rref(&mut mat, nu)?;
    let mut is_pivot = vec![false; nu];
    for &(_, c) in &pivots {
        is_pivot[c] = true;
    }
    let mut sol = vec![BigRational::zero(); nu];
    for c in 0..nu {
        if !is_pivot[c] {
            sol[c] = rationalize_value(y[support[c]] / rhs_float, 1_000_000_000_000);
        }
    }
    for &(r, c) in pivots.iter().rev() {
        let mut v = mat[r][nu].clone();
        for c2 in (c + 1)..nu {
            if !mat[r][c2].is_zero() {
                v -= &mat[r][c2] * &sol[c2];
            }
        }
        sol[c] = v;
    }
    let mut full = vec![BigRational::zero(); cs.rows.len()];
    for (k, &i) in support.iter().enumerate() {
        full[i] = sol[k].clone();
    }
    Some(full)
}

/// Reduced row echelon form over the rationals of an augmented matrix with
/// `nu` unknown columns. Returns `(row, column)` pivots, or `None` when the
/// system is inconsistent.
fn rational_rref(mat: &mut [Vec<BigRational>], nu: usize) -> Option<Vec<(usize, usize)>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nu {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for v in mat[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    for row in mat.iter().skip(r) {
        if !row[nu].is_zero() {
            return None;
        }
    }
    Some(pivots)
}

/// Lossy conversion for logs.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Text form of a system: a `SYSTEM` header, one `VAR` line per variable and
/// one sparse `ROW <tag> <sense> <rhs> <col>:<coeff> ...` line per row.
pub fn system_to_text(cs: &ConstraintSystem) -> String {
    let mut out = alloc::format!("SYSTEM vars={} rows={}\n", cs.num_vars(), cs.rows.len());
    for v in &cs.variables {
        out.push_str(&alloc::format!("VAR {v}\n"));
    }
    for r in &cs.rows {
        out.push_str(&alloc::format!("ROW {} {} {}", r.tag, r.sense, r.rhs));
        for (j, c) in r.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            out.push_str(&alloc::format!(" {j}:{c}"));
        }
        out.push('\n');
    }
    out
}

fn parse_error(line: usize, message: impl Into<String>) -> LpError {
    LpError::Parse { line, message: message.into() }
}

fn header_count(field: Option<&str>, key: &str, line: usize) -> Result<usize, LpError> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_error(line, alloc::format!("expected {key}<count>")))
}

pub fn parse_system(text: &str) -> Result<ConstraintSystem, LpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, "empty system"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("SYSTEM") {
        return Err(parse_error(ln, "expected SYSTEM header"));
    }
    let nv = header_count(h.next(), "vars=", ln)?;
    let nr = header_count(h.next(), "rows=", ln)?;
    let mut cs = ConstraintSystem::default();
    for (ln, line) in lines {
        let mut f = line.split_whitespace();
        match f.next() {
            Some("VAR") => cs.variables.push(f.next().ok_or_else(|| parse_error(ln, "missing variable name"))?.into()),
            Some("ROW") => {
                let tag = RowTag::new(f.next().unwrap_or("")).map_err(|_| parse_error(ln, "missing tag"))?;
                let sense = match f.next() {
                    Some(">=") => Sense::Ge,
                    Some("=") => Sense::Eq,
                    _ => return Err(parse_error(ln, "expected >= or =")),
                };
                let rhs =
                    f.next().and_then(|v| v.parse().ok()).ok_or_else(|| parse_error(ln, "bad right-hand side"))?;
                let mut coeffs = vec![0i64; nv];
                for term in f {
                    let (j, c) = term
                        .split_once(':')
                        .and_then(|(j, c)| Some((j.parse::<usize>().ok()?, c.parse::<i64>().ok()?)))
                        .filter(|(j, _)| *j < nv)
                        .ok_or_else(|| parse_error(ln, alloc::format!("bad term {term}")))?;
                    coeffs[j] = c;
                }
                cs.rows.push(Row { coeffs, sense, rhs, tag });
            }
            _ => return Err(parse_error(ln, "expected VAR or ROW")),
        }
    }
    if cs.variables.len() != nv || cs.rows.len() != nr {
        return Err(parse_error(0, "counts do not match the header"));
    }
    Ok(cs)
}

/// Text form of a certificate: `CERT <id> rows=<m>`, one `<row> <p>/<q>`
/// line per nonzero multiplier and `CONTRADICTION 0 >= <p>/<q>`.
pub fn certificate_to_text(id: &str, cert: &FarkasCertificate) -> String {
    let mut out = alloc::format!("CERT {id} rows={}\n", cert.multipliers.len());
    for (i, y) in cert.multipliers.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
        out.push_str(&alloc::format!("{i} {}/{}\n", y.numer(), y.denom()));
    }
    let c = &cert.combined_rhs;
    out.push_str(&alloc::format!("CONTRADICTION 0 >= {}/{}\n", c.numer(), c.denom()));
    out
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, LpError> {
    s.parse().map_err(|_| parse_error(line, alloc::format!("bad rational {s}")))
}

/// Parses a certificate; returns its id and contents.
pub fn parse_certificate(text: &str) -> Result<(String, FarkasCertificate), LpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, "empty certificate"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("CERT") {
        return Err(parse_error(ln, "expected CERT header"));
    }
    let id = String::from(h.next().ok_or_else(|| parse_error(ln, "missing id"))?);
    let m = header_count(h.next(), "rows=", ln)?;
    let mut multipliers = vec![BigRational::zero(); m];
    let mut combined = None;
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("CONTRADICTION 0 >= ") {
            combined = Some(parse_rational(rest.trim(), ln)?);
            continue;
        }
        let (i, y) = line.split_once(' ').ok_or_else(|| parse_error(ln, "expected <row> <multiplier>"))?;
        let i: usize = i.parse().ok().filter(|&i| i < m).ok_or_else(|| parse_error(ln, "bad row index"))?;
        multipliers[i] = parse_rational(y.trim(), ln)?;
    }
    let combined_rhs = combined.ok_or_else(|| parse_error(0, "missing CONTRADICTION line"))?;
    Ok((id, FarkasCertificate { multipliers, combined_rhs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub(crate) fn system(nv: usize, rows: &[(&[i64], Sense, i64)]) -> ConstraintSystem {
        let vars = (0..nv).map(|j| alloc::format!("v{j}")).collect();
        let mut cs = ConstraintSystem::new(vars);
        for (i, (c, s, b)) in rows.iter().enumerate() {
            cs.push(c.to_vec(), *s, *b, RowTag::new(alloc::format!("r{i}")).unwrap()).unwrap();
        }
        cs
    }

    #[test]
    fn textbook_infeasible_pair() {
        let cs = system(1, &[(&[1], Sense::Ge, 1), (&[-1], Sense::Ge, 0)]);
        let out = solve_feasibility(&cs, &SolverOptions::default());
        assert_eq!(out.status, SolveStatus::InfeasibleCandidate);
        assert!((out.multipliers[0] - out.multipliers[1]).abs() < 1e-9);
        let cert = FarkasCertificate::from_multipliers(&cs, vec![q(1, 1), q(1, 1)]);
        assert_eq!(cert.combined_rhs, q(1, 1));
        assert_eq!(verify_farkas(&cs, &cert), Ok(true));
        let proved = prove_infeasible(&cs, &RetryPolicy::default()).unwrap();
        assert_eq!(proved.certificate.multipliers[0], proved.certificate.multipliers[1]);
        assert!(proved.certificate.multipliers[0].is_positive());
    }

    #[test]
    fn single_lower_bound_is_feasible() {
        let cs = system(1, &[(&[1], Sense::Ge, 1)]);
        let out = solve_feasibility(&cs, &SolverOptions::default());
        assert_eq!(out.status, SolveStatus::Feasible);
        assert!((out.point[0] - 1.0).abs() < 1e-9);
        let cert = FarkasCertificate::from_multipliers(&cs, vec![q(1, 1)]);
        assert_eq!(verify_farkas(&cs, &cert), Ok(false));
    }

    #[test]
    fn feasible_system_reports_exact_point() {
        let cs = system(1, &[(&[1], Sense::Ge, 0)]);
        match prove_infeasible(&cs, &RetryPolicy::default()) {
            Err(CertifyError::ProvablyFeasible { point }) => assert!(cs.satisfied_by(&point)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let cs = system(1, &[(&[1], Sense::Ge, 1)]);
        let cert = FarkasCertificate { multipliers: vec![], combined_rhs: q(1, 1) };
        assert_eq!(verify_farkas(&cs, &cert), Err(LpError::SizeMismatch { expected: 1, found: 0 }));
    }

    #[test]
    fn negative_multiplier_on_inequality_rejected() {
        let cs = system(1, &[(&[1], Sense::Ge, 1), (&[1], Sense::Ge, 0)]);
        let cert = FarkasCertificate::from_multipliers(&cs, vec![q(1, 1), q(-1, 1)]);
        assert_eq!(verify_farkas(&cs, &cert), Ok(false));
    }

    #[test]
    fn equalities_take_free_signs() {
        // x = 2, x >= 3
        let cs = system(1, &[(&[1], Sense::Eq, 2), (&[1], Sense::Ge, 3)]);
        let proved = prove_infeasible(&cs, &RetryPolicy::default()).unwrap();
        assert!(proved.certificate.multipliers[0].is_negative());
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize_value(0.3333333, 100), q(1, 3));
        assert_eq!(rationalize_value(0.499999, 10), q(1, 2));
        assert_eq!(rationalize_value(-2.5, 10), q(-5, 2));
        assert_eq!(rationalize_value(3.0, 1), q(3, 1));
        let cs = system(1, &[(&[1], Sense::Ge, 0)]);
        assert_eq!(rationalize_multipliers(&cs, &[-1e-12], 1000), vec![BigRational::zero()]);
    }

    #[test]
    fn free_variables_are_split() {
        // x <= -1 written as -x >= 1 is feasible for free x
        let cs = system(1, &[(&[-1], Sense::Ge, 1)]);
        let out = solve_feasibility(&cs, &SolverOptions::default());
        assert_eq!(out.status, SolveStatus::Feasible);
        assert!(out.point[0] <= -1.0 + 1e-9);
    }

    #[test]
    fn iteration_limit_is_inconclusive() {
        let cs = system(2, &[(&[1, 1], Sense::Ge, 2), (&[1, -1], Sense::Eq, 0)]);
        let opts = SolverOptions { max_iterations: 0, ..SolverOptions::default() };
        assert_eq!(solve_feasibility(&cs, &opts).status, SolveStatus::Inconclusive);
    }

    #[test]
    fn row_tags_reject_whitespace() {
        assert!(RowTag::new("a b").is_err());
        assert_eq!(RowTag::new("dual:x_1").unwrap().rule(), "dual");
        assert_eq!(Rung::Denominator(1000).to_string(), "denominator<=1000");
    }
}
