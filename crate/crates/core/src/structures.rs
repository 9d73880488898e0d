//! Almost contact metric and almost Hermitian structures, their algebraic
//! validation and the contact-geometry classification tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, SampleSet, TensorField, Valence};
use crate::error::{Error, Result};
use crate::frame::FrameGeometry;
use crate::geometry::{self, LocalGeometry};
use crate::identities::{self, Identity, IdentityReport};
use crate::linalg::{self, Matrix};
use crate::scalar::{Rational, Ring, Scalar};

/// `(φ, ξ, η)` as fields over a chart, with the chart metric.
#[derive(Debug, Clone)]
pub struct ChartContact {
    pub chart: Chart,
    pub phi: TensorField,
    pub xi: TensorField,
    pub eta: TensorField,
}

impl ChartContact {
    pub fn new(chart: Chart, phi: TensorField, xi: TensorField, eta: TensorField) -> Result<ChartContact> {
        let n = chart.dim();
        for (f, v, name) in [
            (&phi, Valence::Endomorphism, "phi"),
            (&xi, Valence::Vector, "xi"),
            (&eta, Valence::OneForm, "eta"),
        ] {
            if f.valence() != v || f.dim() != n {
                return Err(Error::Shape(format!(
                    "{name} must be a {v:?} field on the {n}-dimensional chart"
                )));
            }
        }
        Ok(ChartContact { chart, phi, xi, eta })
    }

    pub fn tensors_at(&self, p: &[f64]) -> Result<StructureTensors<f64>> {
        let geo = LocalGeometry::at(&self.chart, p)?;
        let phi = self.phi.eval_jets(p)?;
        let xi = self.xi.eval_jets(p)?;
        let eta = self.eta.eval_jets(p)?;
        let n = self.chart.dim();
        let mut lie = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += xi[i].value() * phi[a * n + b].d(i);
                    s -= phi[i * n + b].value() * xi[a].d(i);
                    s += phi[a * n + i].value() * xi[i].d(b);
                }
                lie[a][b] = s;
            }
        }
        Ok(StructureTensors {
            g: geo.g.clone(),
            ginv: geo.ginv.clone(),
            riem: geo.riem_array().to_vec(),
            phi: phi.chunks(n).map(|r| r.iter().map(|j| j.value()).collect()).collect(),
            xi: xi.iter().map(|j| j.value()).collect(),
            eta: eta.iter().map(|j| j.value()).collect(),
            nabla_xi: geo.nabla_vector(&xi),
            nabla_eta: geo.nabla_oneform(&eta),
            nabla_phi: geo.nabla_endomorphism(&phi),
            deta: geometry::exterior_d_matrix(&eta),
            lie_xi_phi: lie,
        })
    }
}

/// An almost contact metric structure on a chart or on an invariant frame.
#[derive(Debug, Clone)]
pub enum AlmostContactStructure {
    Chart(ChartContact),
    /// The frame must carry [`FrameContact`](crate::frame::FrameContact) data.
    Frame(FrameGeometry),
}

impl AlmostContactStructure {
    pub fn dim(&self) -> usize {
        match self {
            AlmostContactStructure::Chart(c) => c.chart.dim(),
            AlmostContactStructure::Frame(f) => f.dim(),
        }
    }

    pub fn chart(&self) -> Option<&ChartContact> {
        match self {
            AlmostContactStructure::Chart(c) => Some(c),
            AlmostContactStructure::Frame(_) => None,
        }
    }
}

/// `(J, g)` on a chart.
#[derive(Debug, Clone)]
pub struct AlmostHermitianStructure {
    pub chart: Chart,
    pub j: TensorField,
}

impl AlmostHermitianStructure {
    pub fn new(chart: Chart, j: TensorField) -> Result<AlmostHermitianStructure> {
        if j.valence() != Valence::Endomorphism || j.dim() != chart.dim() {
            return Err(Error::Shape("J must be an endomorphism field on the chart".into()));
        }
        if chart.dim() % 2 != 0 {
            return Err(Error::Shape("an almost Hermitian chart has even dimension".into()));
        }
        Ok(AlmostHermitianStructure { chart, j })
    }

    /// Tensors with `φ = J` and `ξ = η = 0`.
    pub fn tensors_at(&self, p: &[f64]) -> Result<StructureTensors<f64>> {
        let n = self.chart.dim();
        let zero = TensorField::constant(Valence::Vector, n, &vec![0; n])?;
        let zero_form = TensorField::constant(Valence::OneForm, n, &vec![0; n])?;
        ChartContact::new(self.chart.clone(), self.j.clone(), zero, zero_form)?.tensors_at(p)
    }
}

/// Everything the identity and classification checks need at one point, in
/// a fixed basis (coordinate vectors for charts, the frame for groups).
///
/// Derivative arrays are indexed by direction first: `nabla_xi[i]` is
/// `∇_{e_i} ξ`, `nabla_phi[i][a][b]` is `((∇_{e_i} φ) e_b)^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensors<S> {
    pub g: Matrix<S>,
    pub ginv: Matrix<S>,
    /// `R(e_i, e_j, e_k, e_l)`, flat.
    pub riem: Vec<S>,
    pub phi: Matrix<S>,
    pub xi: Vec<S>,
    pub eta: Vec<S>,
    pub nabla_xi: Matrix<S>,
    pub nabla_eta: Matrix<S>,
    pub nabla_phi: Vec<Matrix<S>>,
    /// `dη(e_i, e_j)` without a factor ½.
    pub deta: Matrix<S>,
    /// `(L_ξ φ)`, same layout as `phi`.
    pub lie_xi_phi: Matrix<S>,
}

fn comb<S: Ring>(x: &[S], y: &[S], b: &S) -> Vec<S> {
    // x + b·y
    x.iter().zip(y).map(|(a, c)| a.add(&b.mul(c))).collect()
}

impl<S: Scalar> StructureTensors<S> {
    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        linalg::bilinear(&self.g, x, y)
    }

    pub fn r(&self, x: &[S], y: &[S], z: &[S], w: &[S]) -> S {
        geometry::contract4(&self.riem, self.dim(), x, y, z, w)
    }

    /// `R_{XY} Z`
    pub fn r_op(&self, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
        let n = self.dim();
        let lowered: Vec<S> = (0..n)
            .map(|l| {
                let mut e = vec![S::zero(); n];
                e[l] = S::one();
                self.r(x, y, z, &e).neg()
            })
            .collect();
        linalg::mat_vec(&self.ginv, &lowered)
    }

    pub fn phi_of(&self, x: &[S]) -> Vec<S> {
        linalg::mat_vec(&self.phi, x)
    }

    pub fn eta_of(&self, x: &[S]) -> S {
        linalg::dot(&self.eta, x)
    }

    /// `∇_X ξ`
    pub fn nabla_xi_along(&self, x: &[S]) -> Vec<S> {
        along(&self.nabla_xi, x)
    }

    /// `(∇_X η)(Y)`
    pub fn nabla_eta_at(&self, x: &[S], y: &[S]) -> S {
        linalg::dot(&along(&self.nabla_eta, x), y)
    }

    /// `(∇_X φ) Y`
    pub fn nabla_phi_at(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut m = vec![vec![S::zero(); n]; n];
        for (xi, d) in x.iter().zip(&self.nabla_phi) {
            for a in 0..n {
                for b in 0..n {
                    m[a][b] = m[a][b].add(&xi.mul(&d[a][b]));
                }
            }
        }
        linalg::mat_vec(&m, y)
    }

    pub fn deta_at(&self, x: &[S], y: &[S]) -> S {
        linalg::bilinear(&self.deta, x, y)
    }

    /// `h X = ½ (L_ξ φ) X`
    pub fn h_of(&self, x: &[S]) -> Result<Vec<S>> {
        let two = S::from_int(2);
        linalg::mat_vec(&self.lie_xi_phi, x).iter().map(|v| v.div(&two)).collect()
    }

    /// `X − η(X) ξ`
    pub fn horizontal(&self, x: &[S]) -> Vec<S> {
        comb(x, &self.xi, &self.eta_of(x).neg())
    }

    /// `Ric(X, Y) = g^{ab} R(e_a, X, e_b, Y)`
    pub fn ricci(&self, x: &[S], y: &[S]) -> S {
        let n = self.dim();
        let mut acc = S::zero();
        for a in 0..n {
            for b in 0..n {
                let gab = &self.ginv[a][b];
                if gab.abs() == S::zero() {
                    continue;
                }
                let mut ea = vec![S::zero(); n];
                ea[a] = S::one();
                let mut eb = vec![S::zero(); n];
                eb[b] = S::one();
                acc = acc.add(&gab.mul(&self.r(&ea, x, &eb, y)));
            }
        }
        acc
    }
}

fn along<S: Ring>(rows: &Matrix<S>, x: &[S]) -> Vec<S> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = vec![S::zero(); n];
    for (xi, row) in x.iter().zip(rows) {
        for (o, r) in out.iter_mut().zip(row) {
            *o = o.add(&xi.mul(r));
        }
    }
    out
}

/// Frame-component tensors of an invariant almost contact structure.
pub fn frame_tensors(f: &FrameGeometry) -> Result<StructureTensors<Rational>> {
    let ct = f
        .contact()
        .ok_or_else(|| Error::Invalid("frame carries no almost contact tensors".into()))?;
    let n = f.dim();
    let nabla_xi = (0..n).map(|i| f.nabla(i, &ct.xi)).collect();
    let nabla_eta = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| -linalg::dot(&ct.eta, f.connection(i, j)))
                .collect()
        })
        .collect();
    let nabla_phi = (0..n)
        .map(|i| {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for b in 0..n {
                let col: Vec<Rational> = (0..n).map(|a| ct.phi[a][b]).collect();
                let d1 = f.nabla(i, &col);
                let d2 = linalg::mat_vec(&ct.phi, f.connection(i, b));
                for a in 0..n {
                    m[a][b] = d1[a] - d2[a];
                }
            }
            m
        })
        .collect();
    let deta = (0..n)
        .map(|i| (0..n).map(|j| -linalg::dot(&ct.eta, &f.bracket(i, j))).collect())
        .collect();
    let mut lie = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut s = Rational::zero();
            for m in 0..n {
                for k in 0..n {
                    s += ct.xi[m] * ct.phi[k][b] * f.structure_constant(a, m, k);
                    s -= ct.xi[m] * f.structure_constant(k, m, b) * ct.phi[a][k];
                }
            }
            lie[a][b] = s;
        }
    }
    Ok(StructureTensors {
        g: f.metric().clone(),
        ginv: f.metric_inverse().clone(),
        riem: f.curvature_array().to_vec(),
        phi: ct.phi.clone(),
        xi: ct.xi.clone(),
        eta: ct.eta.clone(),
        nabla_xi,
        nabla_eta,
        nabla_phi,
        deta,
        lie_xi_phi: lie,
    })
}

/// Tensors at one point together with the vectors checks are evaluated on.
#[derive(Debug, Clone)]
pub struct Evaluation<S> {
    pub point: Vec<f64>,
    pub tensors: StructureTensors<S>,
    pub vectors: Vec<Vec<S>>,
}

/// The sweep domain of a check: sampled chart points with sampled vectors, or
/// the single frame "point" with the frame basis swept exhaustively.
#[derive(Debug, Clone)]
pub struct EvaluationSet<S> {
    pub evals: Vec<Evaluation<S>>,
    /// Names of the basis vectors when the sweep is exhaustive.
    pub labels: Option<Vec<String>>,
}

impl<S: Scalar> EvaluationSet<S> {
    pub fn exhaustive(&self) -> bool {
        self.labels.is_some()
    }

    /// Index tuples into `vectors` for a check of the given arity:
    /// all `dim^arity` tuples in lexicographic order on frames, consecutive
    /// groups of sampled vectors on charts.
    pub fn tuples(&self, eval: &Evaluation<S>, arity: usize) -> Vec<Vec<usize>> {
        let m = eval.vectors.len();
        if self.exhaustive() {
            let total = m.pow(arity as u32);
            (0..total)
                .map(|mut t| {
                    let mut idx = vec![0; arity];
                    for slot in idx.iter_mut().rev() {
                        *slot = t % m;
                        t /= m;
                    }
                    idx
                })
                .collect()
        } else {
            (0..m / arity.max(1))
                .map(|c| (c * arity..(c + 1) * arity).collect())
                .collect()
        }
    }
}

pub fn chart_evaluations(s: &ChartContact, samples: &SampleSet) -> Result<EvaluationSet<f64>> {
    let evals = samples
        .points
        .iter()
        .zip(&samples.vectors)
        .map(|(p, vs)| {
            Ok(Evaluation {
                point: p.clone(),
                tensors: s.tensors_at(p)?,
                vectors: vs.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationSet { evals, labels: None })
}

pub fn hermitian_evaluations(h: &AlmostHermitianStructure, samples: &SampleSet) -> Result<EvaluationSet<f64>> {
    let evals = samples
        .points
        .iter()
        .zip(&samples.vectors)
        .map(|(p, vs)| {
            Ok(Evaluation {
                point: p.clone(),
                tensors: h.tensors_at(p)?,
                vectors: vs.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationSet { evals, labels: None })
}

pub fn frame_evaluations(f: &FrameGeometry) -> Result<EvaluationSet<Rational>> {
    let n = f.dim();
    let vectors = linalg::identity::<Rational>(n);
    Ok(EvaluationSet {
        evals: vec![Evaluation { point: Vec::new(), tensors: frame_tensors(f)?, vectors }],
        labels: Some(f.names().to_vec()),
    })
}

/// Runs `check` over the natural sweep of the structure.
pub fn sweep_contact(
    s: &AlmostContactStructure,
    samples: &SampleSet,
    check: &Identity,
    tol: f64,
) -> Result<IdentityReport> {
    match s {
        AlmostContactStructure::Chart(c) => identities::run(&chart_evaluations(c, samples)?, check, tol),
        AlmostContactStructure::Frame(f) => identities::run(&frame_evaluations(f)?, check, tol),
    }
}

/// Residuals of the algebraic compatibility conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub entries: Vec<IdentityReport>,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.verdict)
    }
}

/// Algebraic conditions on `(φ, ξ, η, g)`, each evaluated on the full
/// component arrays at every point (`η(ξ) = 1`, `φξ = 0`, `η∘φ = 0`,
/// `φ² = −I + η⊗ξ`, `g(φ·, φ·) = g − η⊗η`).
pub fn validate(s: &AlmostContactStructure, samples: &SampleSet, tol: f64) -> Result<ValidationReport> {
    let entries = match s {
        AlmostContactStructure::Chart(c) => {
            let set = chart_evaluations(c, samples)?;
            algebraic_reports(&set, true, tol)
        }
        AlmostContactStructure::Frame(f) => {
            let set = frame_evaluations(f)?;
            algebraic_reports(&set, true, tol)
        }
    };
    Ok(ValidationReport { entries })
}

/// `J² = −I` and `g(J·, J·) = g`.
pub fn validate_hermitian(h: &AlmostHermitianStructure, samples: &SampleSet, tol: f64) -> Result<ValidationReport> {
    let set = hermitian_evaluations(h, samples)?;
    Ok(ValidationReport { entries: algebraic_reports(&set, false, tol) })
}

fn algebraic_reports<S: Scalar>(set: &EvaluationSet<S>, contact: bool, tol: f64) -> Vec<IdentityReport> {
    let mut names: Vec<&'static str> = vec!["phi_squared", "metric_compatibility"];
    if contact {
        names.extend(["eta_xi", "phi_xi", "eta_phi"]);
    }
    names
        .into_iter()
        .map(|tag| {
            let mut worst: Option<(S, Vec<f64>)> = None;
            for e in &set.evals {
                let r = algebraic_residual(&e.tensors, tag);
                if worst.as_ref().is_none_or(|(w, _)| r > *w) {
                    worst = Some((r, e.point.clone()));
                }
            }
            identities::report_from(tag, set.evals.len(), worst, tol)
        })
        .collect()
}

fn algebraic_residual<S: Scalar>(t: &StructureTensors<S>, tag: &str) -> S {
    let n = t.dim();
    let mut worst = S::zero();
    let mut bump = |v: S| {
        let a = v.abs();
        if a > worst {
            worst = a;
        }
    };
    match tag {
        "eta_xi" => bump(t.eta_of(&t.xi).sub(&S::one())),
        "phi_xi" => t.phi_of(&t.xi).into_iter().for_each(&mut bump),
        "eta_phi" => {
            for b in 0..n {
                let col: Vec<S> = (0..n).map(|a| t.phi[a][b].clone()).collect();
                bump(t.eta_of(&col));
            }
        }
        "phi_squared" => {
            let p2 = linalg::mat_mul(&t.phi, &t.phi);
            for a in 0..n {
                for b in 0..n {
                    let id = if a == b { S::one() } else { S::zero() };
                    bump(p2[a][b].add(&id).sub(&t.xi[a].mul(&t.eta[b])));
                }
            }
        }
        _ => {
            // φᵀ g φ − g + η ηᵀ
            let gp = linalg::mat_mul(&t.g, &t.phi);
            for a in 0..n {
                for b in 0..n {
                    let mut s = S::zero();
                    for k in 0..n {
                        s = s.add(&t.phi[k][a].mul(&gp[k][b]));
                    }
                    bump(s.sub(&t.g[a][b]).add(&t.eta[a].mul(&t.eta[b])));
                }
            }
        }
    }
    worst
}

/// Outcome of the contact-geometry tests.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub compatibility: ValidationReport,
    /// `g(X, φY) = ½ dη(X, Y)`
    pub contact_metric: IdentityReport,
    /// `g(X, φY) = dη(X, Y)` with the unhalved exterior derivative.
    pub contact_metric_unhalved: IdentityReport,
    /// `L_ξ g = 0`
    pub killing_xi: IdentityReport,
    /// `∇_X ξ = −φX`
    pub sasakian_nabla_xi: IdentityReport,
    /// `(∇_X φ) Y = g(X, Y) ξ − η(Y) X`
    pub sasakian_nabla_phi: IdentityReport,
    /// `∇φ = 0`
    pub parallel_phi: IdentityReport,
    /// Smallest `|η ∧ (dη)^n|` coefficient over the points.
    pub contact_volume: f64,
    /// `Ric(ξ, ξ)` at the first point.
    pub ric_xi_xi: f64,
    pub ric_xi_xi_exact: Option<Rational>,
    /// Largest `|Ric(ξ, ξ) − 2n|` over the points.
    pub ric_xi_xi_deviation: f64,
    pub two_n: usize,
    pub tolerance: f64,
}

impl ClassificationReport {
    pub fn is_contact_form(&self) -> bool {
        self.contact_volume > self.tolerance
    }
    pub fn is_contact_metric(&self) -> bool {
        self.contact_metric.verdict
    }
    pub fn is_k_contact(&self) -> bool {
        self.contact_metric.verdict && self.killing_xi.verdict
    }
    pub fn is_sasakian(&self) -> bool {
        self.sasakian_nabla_phi.verdict && self.sasakian_nabla_xi.verdict
    }
    /// `Ric(ξ, ξ) = 2n`, the Ricci form of the K-contact criterion.
    pub fn ric_matches_2n(&self) -> bool {
        self.ric_xi_xi_deviation <= self.tolerance
    }
    pub fn checks(&self) -> [&IdentityReport; 6] {
        [
            &self.contact_metric,
            &self.contact_metric_unhalved,
            &self.killing_xi,
            &self.sasakian_nabla_xi,
            &self.sasakian_nabla_phi,
            &self.parallel_phi,
        ]
    }
}

pub fn classify(s: &AlmostContactStructure, samples: &SampleSet, tol: f64) -> Result<ClassificationReport> {
    match s {
        AlmostContactStructure::Chart(c) => classify_set(&chart_evaluations(c, samples)?, s, samples, tol),
        AlmostContactStructure::Frame(f) => classify_set(&frame_evaluations(f)?, s, samples, tol),
    }
}

fn classify_set<S: Scalar>(
    set: &EvaluationSet<S>,
    s: &AlmostContactStructure,
    samples: &SampleSet,
    tol: f64,
) -> Result<ClassificationReport> {
    let compatibility = validate(s, samples, tol)?;
    let two_n = s.dim() - 1;
    let mut volume = f64::INFINITY;
    let mut ric_first = None;
    let mut deviation: f64 = 0.0;
    for e in &set.evals {
        let t = &e.tensors;
        volume = volume.min(geometry::contact_volume(&t.eta, &t.deta).to_f64().abs());
        let ric = t.ricci(&t.xi, &t.xi);
        let dev = ric.sub(&S::from_int(two_n as i64)).abs().to_f64();
        deviation = deviation.max(dev);
        ric_first.get_or_insert(ric);
    }
    let ric = ric_first.ok_or_else(|| Error::Shape("no sample points".into()))?;
    Ok(ClassificationReport {
        compatibility,
        contact_metric: identities::run(set, &Identity::ContactMetric { halved: true }, tol)?,
        contact_metric_unhalved: identities::run(set, &Identity::ContactMetric { halved: false }, tol)?,
        killing_xi: identities::run(set, &Identity::KillingXi, tol)?,
        sasakian_nabla_xi: identities::run(set, &Identity::SasakianNablaXi, tol)?,
        sasakian_nabla_phi: identities::run(set, &Identity::SasakianNablaPhi, tol)?,
        parallel_phi: identities::run(set, &Identity::ParallelPhi, tol)?,
        contact_volume: volume,
        ric_xi_xi: ric.to_f64(),
        ric_xi_xi_exact: ric.exact(),
        ric_xi_xi_deviation: deviation,
        two_n,
        tolerance: tol,
    })
}

/// Residual of `R_{XY}ξ = κ(η(Y)X − η(X)Y) + μ(η(Y)hX − η(X)hY)`.
pub fn check_kappa_mu(
    s: &AlmostContactStructure,
    kappa: f64,
    mu: f64,
    samples: &SampleSet,
    tol: f64,
) -> Result<IdentityReport> {
    sweep_contact(s, samples, &Identity::KappaMu { kappa, mu }, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::sample;
    use crate::expr::Expr;
    use crate::frame::heisenberg_h21;
    use crate::scalar::ratio;

    fn h21() -> AlmostContactStructure {
        AlmostContactStructure::Frame(heisenberg_h21(ratio(3, 5), ratio(4, 5)).unwrap())
    }

    fn dummy_samples() -> SampleSet {
        SampleSet { seed: 0, points: Vec::new(), vectors: Vec::new() }
    }

    #[test]
    fn h21_validates_exactly() {
        let v = validate(&h21(), &dummy_samples(), 0.0).unwrap();
        for e in &v.entries {
            assert_eq!(e.exact, Some(ratio(0, 1)), "{}", e.tag);
        }
        assert!(v.passes());
    }

    #[test]
    fn h21_classification() {
        let r = classify(&h21(), &dummy_samples(), 1e-7).unwrap();
        assert_eq!(r.killing_xi.exact, Some(ratio(0, 1)));
        assert!(r.sasakian_nabla_xi.residual > 0.0);
        assert!(!r.is_sasakian());
        assert_eq!(r.ric_xi_xi_exact, Some(ratio(4, 1)));
        assert_eq!(r.two_n, 4);
        assert!(r.is_contact_form());
        assert!(!r.contact_metric.verdict);
    }

    #[test]
    fn frame_deta_matches_chart_convention() {
        // dη(X1, Y1) = −η([X1, Y1]) = −2
        let t = frame_tensors(&heisenberg_h21(ratio(1, 1), ratio(0, 1)).unwrap()).unwrap();
        assert_eq!(t.deta[0][2], ratio(-2, 1));
    }

    #[test]
    fn corrupted_phi_is_detected() {
        let chart = Chart::euclidean(&["x", "y", "z"]).unwrap();
        let mut rows = vec![vec![Expr::int(0); 3]; 3];
        rows[1][0] = Expr::decimal(1.1);
        rows[0][1] = Expr::int(-1);
        let phi = TensorField::endomorphism(rows).unwrap();
        let xi = TensorField::constant(Valence::Vector, 3, &[0, 0, 1]).unwrap();
        let eta = TensorField::constant(Valence::OneForm, 3, &[0, 0, 1]).unwrap();
        let s = AlmostContactStructure::Chart(ChartContact::new(chart.clone(), phi, xi, eta).unwrap());
        let samples = sample(&chart, 3, 4, 1).unwrap();
        let v = validate(&s, &samples, 1e-9).unwrap();
        let p2 = v.entries.iter().find(|e| e.tag == "phi_squared").unwrap();
        assert!(p2.residual >= 0.05);
        assert!(!v.passes());
    }
}
