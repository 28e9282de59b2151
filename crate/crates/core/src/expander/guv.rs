use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::biregular::biregularize;
use super::graph::BipartiteGraph;
use super::{GraphError, Result};
use crate::galois::{FieldElem, FieldSpec, Poly};

/// Parameters of the polynomial-evaluation expander over `F_q`.
///
/// A left vertex is a polynomial `f` of degree `< n_q` (its base-`q` digits
/// are the coefficients, lowest first). Its neighbor for each `y` in `F_q`
/// is the right vertex with base-`q` digits
/// `(y, f(y), f^h(y), f^{h^2}(y), ...)`, powers taken mod `modulus`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuvParams {
    pub alpha: f64,
    pub field: FieldSpec,
    pub q: u32,
    pub h: u64,
    pub n_q: u32,
    pub m_q: u32,
    /// Irreducible of degree `n_q` over `F_q`.
    pub modulus: Poly,
    pub n_prime: u64,
    pub m_prime: u64,
}

/// Expansion guarantees carried alongside a constructed graph.
///
/// `gamma` is the guaranteed expansion `|Γ(S)| >= gamma |S|` for
/// `|S| <= k_max_thm`; `delta` is the deficiency relative to the final left
/// degree, so `gamma + delta` is that degree and `gamma_unique = gamma - delta`
/// is the implied unique-neighbor expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCertificate {
    pub alpha: f64,
    pub q: u32,
    pub h: u64,
    pub n_q: u32,
    pub m_q: u32,
    pub delta: u64,
    pub k_max_thm: u64,
    pub k_max_cor: u64,
    pub gamma: i64,
    pub gamma_unique: i64,
    pub vacuous: bool,
}

impl ExpansionCertificate {
    /// Left degree the guarantee is stated for.
    pub fn degree(&self) -> i64 {
        self.gamma + self.delta as i64
    }

    /// Guarantee after cutting every left list down to `d` edges.
    pub fn trimmed(&self, d: usize) -> Self {
        let gamma = d as i64 - self.delta as i64;
        self.with(gamma, self.delta)
    }

    /// Guarantee after adding edges up to left degree `d`; expansion is kept,
    /// the deficiency grows by the added degree.
    pub fn raised(&self, d: usize) -> Self {
        let delta = (d as i64 - self.gamma).max(0) as u64;
        self.with(self.gamma, delta)
    }

    fn with(&self, gamma: i64, delta: u64) -> Self {
        ExpansionCertificate {
            delta,
            gamma,
            gamma_unique: gamma - delta as i64,
            vacuous: gamma <= 0,
            ..self.clone()
        }
    }

    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} {} {} {} {} {} {}\n",
            self.alpha,
            self.q,
            self.h,
            self.n_q,
            self.m_q,
            self.delta,
            self.k_max_thm,
            self.k_max_cor,
            self.gamma,
            self.gamma_unique,
            self.vacuous
        )
    }
}

impl fmt::Display for ExpansionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_line().trim_end())
    }
}

impl FromStr for ExpansionCertificate {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self> {
        let err = |message: String| GraphError::Parse { line: 1, message };
        let mut lines = s.lines();
        let line = lines.next().ok_or_else(|| err("empty certificate".into()))?;
        if lines.next().is_some() {
            return Err(GraphError::Parse { line: 2, message: "trailing content".into() });
        }
        let tok: Vec<&str> = line.split(' ').collect();
        if tok.len() != 11 {
            return Err(err(format!("certificate needs 11 fields, found {}", tok.len())));
        }
        fn field<T: FromStr>(tok: &[&str], i: usize, name: &str) -> Result<T> {
            tok[i].parse().map_err(|_| GraphError::Parse {
                line: 1,
                message: format!("field {} ({name}) `{}` is malformed", i + 1, tok[i]),
            })
        }
        let cert = ExpansionCertificate {
            alpha: field(&tok, 0, "alpha")?,
            q: field(&tok, 1, "q")?,
            h: field(&tok, 2, "h")?,
            n_q: field(&tok, 3, "n_q")?,
            m_q: field(&tok, 4, "m_q")?,
            delta: field(&tok, 5, "delta")?,
            k_max_thm: field(&tok, 6, "k_thm")?,
            k_max_cor: field(&tok, 7, "k_cor")?,
            gamma: field(&tok, 8, "gamma")?,
            gamma_unique: field(&tok, 9, "gamma_unique")?,
            vacuous: field(&tok, 10, "vacuous")?,
        };
        if cert.gamma_unique != cert.gamma - cert.delta as i64 || cert.vacuous != (cert.gamma <= 0) {
            return Err(err("inconsistent certificate: need gamma_unique = gamma - delta and vacuous = gamma <= 0".into()));
        }
        Ok(cert)
    }
}

/// `ceil(q^alpha)`, snapping values within rounding noise of an integer.
fn power_ceil(q: u32, alpha: f64) -> u64 {
    let x = f64::from(q).powf(alpha);
    let near = x.round();
    if (x - near).abs() <= 1e-9 * x.max(1.0) {
        near as u64
    } else {
        x.ceil() as u64
    }
}

/// Chooses field and digit counts for an expander on `n` left and at most
/// `m` right vertices with left degree `d`.
pub fn derive_guv_params(alpha: f64, n: usize, m: usize, d: usize) -> Result<(GuvParams, ExpansionCertificate)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(GraphError::Precondition(format!("alpha={alpha} outside (0, 1]")));
    }
    if d < 2 || n < 1 {
        return Err(GraphError::Precondition(format!("need d >= 2 and n >= 1 (got d={d}, n={n})")));
    }
    let q = u32::try_from(d.next_power_of_two())
        .ok()
        .filter(|&q| q <= 1 << crate::galois::MAX_FIELD_BITS)
        .ok_or_else(|| GraphError::Guard(format!("field for degree {d} exceeds 2^16")))?;
    let field = FieldSpec::with_order(q)?;
    let q64 = u64::from(q);
    if (m as u64) < q64 {
        return Err(GraphError::Precondition(format!("m={m} < q={q}: no right digits")));
    }
    let mut n_q = 1u32;
    let mut n_prime = q64;
    while n_prime < n as u64 {
        n_q += 1;
        n_prime = n_prime.saturating_mul(q64);
    }
    let mut m_q = 1u32;
    let mut m_prime = q64;
    while let Some(next) = m_prime.checked_mul(q64).filter(|&v| v <= m as u64) {
        m_q += 1;
        m_prime = next;
    }
    if m_prime > u64::from(u32::MAX) {
        return Err(GraphError::Guard(format!("m'={m_prime} exceeds 32-bit vertex ids")));
    }
    let h = power_ceil(q, alpha);
    let modulus = field.find_irreducible(n_q)?;

    let delta = (h - 1) * u64::from(n_q - 1) * u64::from(m_q - 1);
    let k_max_thm = h.saturating_pow(m_q - 1);
    let k_max_cor = (m as f64 / (4.0 * (d * d) as f64)).powf(alpha).floor() as u64;
    let gamma = i64::from(q) - delta as i64;
    let cert = ExpansionCertificate {
        alpha,
        q,
        h,
        n_q,
        m_q,
        delta,
        k_max_thm,
        k_max_cor,
        gamma,
        gamma_unique: gamma - delta as i64,
        vacuous: gamma <= 0,
    };
    let params = GuvParams { alpha, field, q, h, n_q, m_q, modulus, n_prime, m_prime };
    Ok((params, cert))
}

impl GuvParams {
    /// Left vertex index to its polynomial (base-`q` digits, lowest first).
    pub fn left_poly(&self, left_index: u64) -> Poly {
        let q = u64::from(self.q);
        let mut rest = left_index;
        let coeffs = (0..self.n_q)
            .map(|_| {
                let c = FieldElem((rest % q) as u32);
                rest /= q;
                c
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Sorted right neighbors of a left vertex; always exactly `q` of them.
    pub fn neighbors(&self, left_index: u64) -> Result<Vec<u32>> {
        if left_index >= self.n_prime {
            return Err(GraphError::LeftOutOfRange { left: left_index as usize, n: self.n_prime as usize });
        }
        let field = &self.field;
        let f = self.left_poly(left_index);
        let mut powers = Vec::with_capacity(self.m_q as usize - 1);
        if self.m_q >= 2 {
            powers.push(field.poly_rem(&f, &self.modulus));
            for i in 1..self.m_q as usize - 1 {
                let next = field.poly_mod_pow(&powers[i - 1], self.h, &self.modulus)?;
                powers.push(next);
            }
        }
        let q = u64::from(self.q);
        Ok(field
            .elements()
            .map(|y| {
                let code = powers
                    .iter()
                    .fold(u64::from(y.value()), |acc, p| acc * q + u64::from(field.eval_unchecked(p, y).value()));
                code as u32
            })
            .collect())
    }

    /// The expander restricted to left vertices `0..n`, on `m_prime` right vertices.
    pub fn build_graph(&self, n: usize) -> Result<BipartiteGraph> {
        if n as u64 > self.n_prime {
            return Err(GraphError::Precondition(format!("n={n} exceeds n'={}", self.n_prime)));
        }
        let adjacency = (0..n as u64)
            .into_par_iter()
            .map(|u| self.neighbors(u))
            .collect::<Result<Vec<_>>>()?;
        BipartiteGraph::new(self.m_prime as usize, adjacency)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    /// Build at degree `d` directly, trim and pad, biregularize if needed.
    Direct,
    /// Split the deficiency budget as in the biregular corollary schedule.
    Theorem,
}

/// `2 (2d)^alpha log_d(n) log_d(m)`, the deficiency of the explicit biregular family.
pub fn explicit_delta(alpha: f64, n: usize, m: usize, d: usize) -> f64 {
    let ln_d = (d as f64).ln();
    2.0 * (2.0 * d as f64).powf(alpha) * ((n as f64).ln() / ln_d) * ((m as f64).ln() / ln_d)
}

/// Builds a `(d, r)`-biregular CDO graph on `n` assets and `m` CDOs.
///
/// A vacuous certificate is not an error; check `vacuous` on the result.
pub fn build_cdo_graph(
    alpha: f64,
    n: usize,
    m: usize,
    d: usize,
    r: usize,
    mode: BuildMode,
) -> Result<(BipartiteGraph, ExpansionCertificate)> {
    if n * d != m * r {
        return Err(GraphError::Precondition(format!("n*d = {} != m*r = {}", n * d, m * r)));
    }
    match mode {
        BuildMode::Direct => build_direct(alpha, n, m, d, r),
        BuildMode::Theorem => build_theorem(alpha, n, m, d, r),
    }
}

fn build_direct(alpha: f64, n: usize, m: usize, d: usize, r: usize) -> Result<(BipartiteGraph, ExpansionCertificate)> {
    let (params, cert) = derive_guv_params(alpha, n, m, d)?;
    let base = params.build_graph(n)?;
    let trimmed = base.trim_pad(n, m, d)?;
    if trimmed.is_biregular(d, r) {
        return Ok((trimmed, cert.trimmed(d)));
    }
    // keep as much of the expander as the biregular fill allows
    let m0 = base.m();
    for d0 in (1..d).rev() {
        if m * (d - d0) < m0 * d || d > m0 {
            continue;
        }
        let start = base.trim_pad(n, m0, d0)?;
        if let Ok(g) = biregularize(&start, m, d, r) {
            return Ok((g, cert.trimmed(d0).raised(d)));
        }
    }
    Err(GraphError::Infeasible(format!(
        "direct construction cannot be made ({d},{r})-biregular on m={m}; try theorem mode"
    )))
}

fn build_theorem(alpha: f64, n: usize, m: usize, d: usize, r: usize) -> Result<(BipartiteGraph, ExpansionCertificate)> {
    let delta = explicit_delta(alpha, n, m, d);
    let delta0 = (delta / 2.0 - 1e-9).ceil().max(0.0) as usize;
    if delta0 < 1 || delta0 >= d {
        return Err(GraphError::Infeasible(format!(
            "schedule needs 1 <= ceil(Delta/2) < d, got Delta/2={:.4}, d={d}",
            delta / 2.0
        )));
    }
    let d0 = d - delta0;
    if !(delta0 * m).is_multiple_of(d) || delta0 * m / d < d {
        return Err(GraphError::Infeasible(format!(
            "m0 = Delta0*m/d = {delta0}*{m}/{d} must be an integer >= d"
        )));
    }
    let m0 = delta0 * m / d;
    let (params, cert) = derive_guv_params(alpha, n, m0, d0.max(2))?;
    let base = params.build_graph(n)?.trim_pad(n, m0, d0)?;
    let graph = biregularize(&base, m, d, r)?;
    let mut cert = cert.trimmed(d0).raised(d);
    cert.k_max_cor = (delta * m as f64 / (8.0 * (d as f64).powi(3))).powf(alpha).floor() as u64;
    Ok((graph, cert))
}
