//! Coordinate charts, tensor fields on them and deterministic sampling.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{valid_coordinate_name, Expr};
use crate::jet::{Jet1, Jet2, MAX_DIM};
use crate::linalg::{self, Matrix};

/// Margin kept from every finite open boundary when sampling.
pub const DOMAIN_MARGIN: f64 = 1e-3;

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const POSITIVE: Interval = Interval { lo: 0.0, hi: f64::INFINITY };

    pub fn open(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// The window points are drawn from.
    ///
    /// Finite ends are shrunk by [`DOMAIN_MARGIN`]; a half-line `(lo, inf)`
    /// samples `(lo + 0.5, lo + 3)` and the whole line samples `(-2, 2)`.
    pub fn sampling_window(&self) -> Option<(f64, f64)> {
        let (lo, hi) = match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo + DOMAIN_MARGIN, self.hi - DOMAIN_MARGIN),
            (true, false) => (self.lo + 0.5, self.lo + 3.0),
            (false, true) => (self.hi - 3.0, self.hi - 0.5),
            (false, false) => (-2.0, 2.0),
        };
        (lo < hi).then_some((lo, hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |x: f64| {
            if x == f64::INFINITY {
                String::from("inf")
            } else if x == f64::NEG_INFINITY {
                String::from("-inf")
            } else {
                format!("{x}")
            }
        };
        write!(f, "({}, {})", end(self.lo), end(self.hi))
    }
}

/// A single coordinate chart with a metric given by expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<String>,
    metric: Matrix<Expr>,
    domain: Vec<Interval>,
}

impl Chart {
    /// Entries below the diagonal may be left as the zero literal; they are
    /// mirrored from above. Two different non-zero expressions for `g_ij` and
    /// `g_ji` are rejected.
    pub fn new(coords: Vec<String>, metric: Matrix<Expr>, domain: Vec<Interval>) -> Result<Chart> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Shape("a chart needs at least one coordinate".into()));
        }
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: n, max: MAX_DIM });
        }
        for (i, c) in coords.iter().enumerate() {
            if !valid_coordinate_name(c) {
                return Err(Error::Shape(format!("`{c}` is not a usable coordinate name")));
            }
            if coords[..i].contains(c) {
                return Err(Error::Shape(format!("coordinate `{c}` declared twice")));
            }
        }
        if metric.len() != n || metric.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("metric must be {n}x{n}")));
        }
        if domain.len() != n {
            return Err(Error::Shape(format!("domain needs {n} intervals")));
        }
        let mut metric = metric;
        for i in 0..n {
            for j in i + 1..n {
                let (up, low) = (&metric[i][j], &metric[j][i]);
                if low.is_zero() {
                    metric[j][i] = up.clone();
                } else if up.is_zero() {
                    metric[i][j] = low.clone();
                } else if up != low {
                    return Err(Error::Shape(format!(
                        "metric entries ({}, {}) and ({}, {}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        for e in metric.iter().flatten() {
            if e.arity() > n {
                return Err(Error::IndexOutOfRange { index: e.arity() - 1, dim: n });
            }
        }
        Ok(Chart { coords, metric, domain })
    }

    /// Diagonal metric with every coordinate ranging over `domain`.
    pub fn diagonal(coords: &[&str], diag: Vec<Expr>, domain: Vec<Interval>) -> Result<Chart> {
        let n = diag.len();
        let mut m = vec![vec![Expr::int(0); n]; n];
        for (i, d) in diag.into_iter().enumerate() {
            m[i][i] = d;
        }
        Chart::new(coords.iter().map(|s| String::from(*s)).collect(), m, domain)
    }

    /// Flat Euclidean chart on the given coordinate names.
    pub fn euclidean(coords: &[&str]) -> Result<Chart> {
        let n = coords.len();
        Chart::diagonal(coords, vec![Expr::int(1); n], vec![Interval::REAL_LINE; n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn metric(&self) -> &Matrix<Expr> {
        &self.metric
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn with_domain(mut self, i: usize, iv: Interval) -> Self {
        self.domain[i] = iv;
        self
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.domain).all(|(x, iv)| iv.contains(*x))
    }

    pub fn metric_at(&self, p: &[f64]) -> Result<Matrix<f64>> {
        self.check_point(p)?;
        let n = self.dim();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.metric[i][j].eval(p)?;
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        Ok(g)
    }

    /// Metric entries with first and second derivatives.
    pub fn metric_jets(&self, p: &[f64]) -> Result<Matrix<Jet2>> {
        self.check_point(p)?;
        let seeds = Jet2::seeds(p)?;
        let n = self.dim();
        let mut g = vec![vec![Jet2::constant(0.0); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.metric[i][j].eval(&seeds)?;
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        Ok(g)
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, chart has {}",
                p.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valence {
    /// (1,0)
    Vector,
    /// (0,1)
    OneForm,
    /// (1,1), stored row-major: entry `a * dim + b` is `T^a_b`.
    Endomorphism,
}

impl Valence {
    pub fn len(self, dim: usize) -> usize {
        match self {
            Valence::Vector | Valence::OneForm => dim,
            Valence::Endomorphism => dim * dim,
        }
    }
}

/// Closure producing field components with their first derivatives.
pub type ComputedComponents = Arc<dyn Fn(&[f64]) -> Result<Vec<Jet1>> + Send + Sync>;

#[derive(Clone)]
pub enum FieldSource {
    Exprs(Vec<Expr>),
    Computed(ComputedComponents),
}

/// Vector, one-form or endomorphism field over a chart.
#[derive(Clone)]
pub struct TensorField {
    valence: Valence,
    dim: usize,
    source: FieldSource,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("TensorField");
        d.field("valence", &self.valence).field("dim", &self.dim);
        match &self.source {
            FieldSource::Exprs(e) => d.field("components", e),
            FieldSource::Computed(_) => d.field("components", &"<computed>"),
        };
        d.finish()
    }
}

impl TensorField {
    pub fn from_exprs(valence: Valence, dim: usize, components: Vec<Expr>) -> Result<TensorField> {
        if components.len() != valence.len(dim) {
            return Err(Error::Shape(format!(
                "{valence:?} on a {dim}-dimensional chart needs {} components, got {}",
                valence.len(dim),
                components.len()
            )));
        }
        if let Some(e) = components.iter().find(|e| e.arity() > dim) {
            return Err(Error::IndexOutOfRange { index: e.arity() - 1, dim });
        }
        Ok(TensorField { valence, dim, source: FieldSource::Exprs(components) })
    }

    /// Endomorphism from a row-major matrix of expressions.
    pub fn endomorphism(rows: Vec<Vec<Expr>>) -> Result<TensorField> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("endomorphism matrix must be square".into()));
        }
        TensorField::from_exprs(Valence::Endomorphism, dim, rows.into_iter().flatten().collect())
    }

    pub fn constant(valence: Valence, dim: usize, values: &[i64]) -> Result<TensorField> {
        TensorField::from_exprs(valence, dim, values.iter().map(|v| Expr::int(*v)).collect())
    }

    pub fn computed(valence: Valence, dim: usize, f: ComputedComponents) -> TensorField {
        TensorField { valence, dim, source: FieldSource::Computed(f) }
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    pub fn exprs(&self) -> Option<&[Expr]> {
        match &self.source {
            FieldSource::Exprs(e) => Some(e),
            FieldSource::Computed(_) => None,
        }
    }

    /// Components and their first derivatives at `p`.
    pub fn eval_jets(&self, p: &[f64]) -> Result<Vec<Jet1>> {
        let out = match &self.source {
            FieldSource::Exprs(es) => {
                let seeds = Jet1::seeds(p)?;
                es.iter().map(|e| e.eval(&seeds)).collect::<Result<Vec<_>>>()?
            }
            FieldSource::Computed(f) => f(p)?,
        };
        if out.len() != self.valence.len(self.dim) {
            return Err(Error::Shape(format!(
                "field produced {} components, expected {}",
                out.len(),
                self.valence.len(self.dim)
            )));
        }
        Ok(out)
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        match &self.source {
            FieldSource::Exprs(es) => es.iter().map(|e| e.eval(p)).collect(),
            FieldSource::Computed(f) => Ok(f(p)?.iter().map(Jet1::value).collect()),
        }
    }

    /// Values as a matrix (endomorphisms) or a single row.
    pub fn eval_matrix(&self, p: &[f64]) -> Result<Matrix<f64>> {
        let v = self.eval(p)?;
        Ok(match self.valence {
            Valence::Endomorphism => v.chunks(self.dim).map(<[f64]>::to_vec).collect(),
            _ => vec![v],
        })
    }
}

/// `eval_field`: component values of `f` at `p`.
pub fn eval_field(f: &TensorField, p: &[f64]) -> Result<Vec<f64>> {
    f.eval(p)
}

/// Points and tangent vectors drawn deterministically from a chart's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
    /// `vectors[i]` are the tangent vectors attached to `points[i]`.
    pub vectors: Vec<Vec<Vec<f64>>>,
}

impl SampleSet {
    /// Consecutive groups of four vectors at point `i`.
    pub fn quadruples(&self, i: usize) -> impl Iterator<Item = [&[f64]; 4]> {
        self.vectors[i]
            .chunks_exact(4)
            .map(|c| [c[0].as_slice(), c[1].as_slice(), c[2].as_slice(), c[3].as_slice()])
    }

    /// Consecutive pairs of vectors at point `i`.
    pub fn pairs(&self, i: usize) -> impl Iterator<Item = [&[f64]; 2]> {
        self.vectors[i].chunks_exact(2).map(|c| [c[0].as_slice(), c[1].as_slice()])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest and largest Euclidean norm of sampled vectors.
pub const VECTOR_NORM_RANGE: (f64, f64) = (0.1, 10.0);

/// Draws `n_points` points, each with `vecs_per_point` tangent vectors.
///
/// Points are uniform in each coordinate's sampling window; vectors have a
/// uniformly random direction and a log-uniform Euclidean norm in
/// [`VECTOR_NORM_RANGE`]. The metric is checked to be positive definite at
/// every point.
pub fn sample(chart: &Chart, n_points: usize, vecs_per_point: usize, seed: u64) -> Result<SampleSet> {
    if n_points == 0 {
        return Err(Error::Shape("at least one sample point is required".into()));
    }
    let windows = chart
        .domain()
        .iter()
        .zip(chart.coords())
        .map(|(iv, c)| iv.sampling_window().ok_or_else(|| Error::EmptyDomain { coord: c.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = chart.dim();
    let mut points = Vec::with_capacity(n_points);
    let mut vectors = Vec::with_capacity(n_points);
    let (lo_norm, hi_norm) = VECTOR_NORM_RANGE;
    for _ in 0..n_points {
        let p: Vec<f64> = windows.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect();
        let g = chart.metric_at(&p)?;
        if !linalg::is_positive_definite(&g)? {
            return Err(Error::NotPositiveDefinite { point: p });
        }
        let mut vs = Vec::with_capacity(vecs_per_point);
        for _ in 0..vecs_per_point {
            let dir = loop {
                let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let r2: f64 = v.iter().map(|x| x * x).sum();
                if r2 > 1e-4 && r2 <= 1.0 {
                    let r = libm::sqrt(r2);
                    break v.into_iter().map(|x| x / r).collect::<Vec<_>>();
                }
            };
            let log_norm = rng.random_range(libm::log(lo_norm)..libm::log(hi_norm));
            let norm = libm::exp(log_norm);
            vs.push(dir.into_iter().map(|x| x * norm).collect());
        }
        points.push(p);
        vectors.push(vs);
    }
    Ok(SampleSet { seed, points, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn flat_sampling_is_deterministic() {
        let c = Chart::euclidean(&["x", "y", "z"]).unwrap();
        let a = sample(&c, 4, 3, 7).unwrap();
        let b = sample(&c, 4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points.len(), 4);
        for p in &a.points {
            assert!(p.iter().all(|x| *x > -2.0 && *x < 2.0));
        }
        for v in a.vectors.iter().flatten() {
            let n = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
            assert!((0.1..=10.0).contains(&n));
        }
        assert_ne!(a, sample(&c, 4, 3, 8).unwrap());
    }

    #[test]
    fn positive_half_line_window() {
        let coords = ["t", "x"];
        let m = vec![
            vec![Expr::int(1), Expr::int(0)],
            vec![Expr::int(0), parse_expr("t^2", &coords).unwrap()],
        ];
        let c = Chart::new(names(&coords), m, vec![Interval::POSITIVE, Interval::REAL_LINE]).unwrap();
        let s = sample(&c, 50, 0, 3).unwrap();
        assert!(s.points.iter().all(|p| p[0] > 0.5 && p[0] < 3.0));
    }

    #[test]
    fn bounded_window_keeps_margin() {
        let half = core::f64::consts::FRAC_PI_2;
        let c = Chart::diagonal(
            &["z"],
            vec![Expr::int(1)],
            vec![Interval::open(-half, half)],
        )
        .unwrap();
        let s = sample(&c, 200, 0, 1).unwrap();
        assert!(s.points.iter().all(|p| p[0].abs() <= half - 1e-3));
    }

    #[test]
    fn rejects_bad_input() {
        let c = Chart::diagonal(&["z"], vec![Expr::int(1)], vec![Interval::open(0.0, 1e-3)]).unwrap();
        assert!(matches!(sample(&c, 1, 0, 1), Err(Error::EmptyDomain { .. })));
        let c = Chart::diagonal(&["z"], vec![Expr::int(-1)], vec![Interval::REAL_LINE]).unwrap();
        assert!(matches!(sample(&c, 1, 0, 1), Err(Error::NotPositiveDefinite { .. })));
        let m = vec![
            vec![Expr::int(1), Expr::var(0)],
            vec![Expr::var(1), Expr::int(1)],
        ];
        assert!(Chart::new(names(&["x", "y"]), m, vec![Interval::REAL_LINE; 2]).is_err());
        assert!(Chart::euclidean(&["x", "x"]).is_err());
    }

    #[test]
    fn constant_fields() {
        let c = ["x", "y", "u", "v", "z"];
        let xi = TensorField::constant(Valence::Vector, 5, &[0, 0, 0, 0, 1]).unwrap();
        let eta = TensorField::constant(Valence::OneForm, 5, &[0, 0, 0, 0, 1]).unwrap();
        let p = [0.3, -1.0, 0.2, 0.7, 0.1];
        assert_eq!(eval_field(&xi, &p).unwrap(), vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(eval_field(&eta, &p).unwrap(), vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let mut rows = vec![vec![0i64; 5]; 5];
        rows[1][0] = 1;
        rows[0][1] = -1;
        rows[3][2] = 1;
        rows[2][3] = -1;
        let phi = TensorField::constant(Valence::Endomorphism, 5, &rows.concat()).unwrap();
        let m = phi.eval_matrix(&p).unwrap();
        assert_eq!(m[3][2], 1.0); // phi d_u = d_v
        assert_eq!(m[2][3], -1.0); // phi d_v = -d_u
        assert_eq!(c.len(), 5);
    }
}
