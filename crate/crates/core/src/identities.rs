//! Residual checkers for curvature identities of almost Hermitian and almost
//! contact metric structures.
//!
//! Every check is a multilinear expression `LHS − RHS` in a few vector
//! arguments. Residuals are raw absolute values (vector-valued identities use
//! the largest component) and are maximised over a sweep: all basis tuples
//! on invariant frames, consecutive groups of sampled vectors on charts.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::SampleSet;
use crate::error::Result;
use crate::scalar::{Rational, Scalar};
use crate::structures::{
    self, AlmostContactStructure, AlmostHermitianStructure, EvaluationSet, StructureTensors,
};

/// Gray identities of an almost Hermitian structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gray {
    K1,
    K2,
    K3,
}

/// Contact analogues of the Gray identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactKind {
    G1,
    G2,
    G3,
}

impl ContactKind {
    pub const ALL: [ContactKind; 3] = [ContactKind::G1, ContactKind::G2, ContactKind::G3];

    pub fn gray(self) -> Gray {
        match self {
            ContactKind::G1 => Gray::K1,
            ContactKind::G2 => Gray::K2,
            ContactKind::G3 => Gray::K3,
        }
    }
}

/// Curvature relations with `ξ` in some slot that follow from `G1`..`G3`.
/// Primed arguments in the descriptions are projected to `ker η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consequence {
    /// `R(ξ,Y',ξ,W') = g(Y',W')`
    XiYXiW,
    /// `R(ξ,Y',Z',W') = 0`
    XiYZW,
    /// `R(ξ,Y',φZ',φW') = 0`
    XiYPhiZPhiW,
    /// `R − g(Y,W)g(X,Z) + g(X,W)g(Y,Z) = R(X,Y,φZ,φW) − g(Y,φW)g(X,φZ) + g(X,φW)g(Y,φZ)` on `ker η`
    G1Horizontal,
    /// `R_{XY}ξ = η(Y)X − η(X)Y` modulo `ξ`
    RXyXi,
    /// `η(R_{XY}φZ − g(Y,φZ)X + g(X,φZ)Y) = 0`
    EtaRXyPhiZ,
    /// `R = R(φX,Y,Z,φW) + R(X,φY,Z,φW) + R(X,Y,φZ,φW)` on `ker η`
    G2Horizontal,
    /// `R(ξ,Y,Z,φW) = η(Z)g(φW,Y)`
    XiYZPhiW,
    /// `R = R(φX,φY,φZ,φW)` on `ker η`
    G3Horizontal,
    /// `R(ξ,φY,ξ,φW) = g(φW,φY)`
    XiPhiYXiPhiW,
    /// `R(ξ,φY,φZ,φW) = 0`
    XiPhiYPhiZPhiW,
}

impl Consequence {
    pub fn suite(kind: ContactKind) -> &'static [Consequence] {
        use Consequence::*;
        match kind {
            ContactKind::G1 => &[XiYXiW, XiYZW, XiYPhiZPhiW, G1Horizontal, RXyXi, EtaRXyPhiZ],
            ContactKind::G2 => &[XiYXiW, XiYZW, G2Horizontal, XiYZPhiW],
            ContactKind::G3 => &[XiYXiW, XiYZW, G3Horizontal, XiPhiYXiPhiW, XiPhiYPhiZPhiW],
        }
    }

    pub fn name(self) -> &'static str {
        use Consequence::*;
        match self {
            XiYXiW => "xi_y_xi_w",
            XiYZW => "xi_y_z_w",
            XiYPhiZPhiW => "xi_y_phiz_phiw",
            G1Horizontal => "g1_horizontal",
            RXyXi => "r_xy_xi",
            EtaRXyPhiZ => "eta_r_xy_phiz",
            G2Horizontal => "g2_horizontal",
            XiYZPhiW => "xi_y_z_phiw",
            G3Horizontal => "g3_horizontal",
            XiPhiYXiPhiW => "xi_phiy_xi_phiw",
            XiPhiYPhiZPhiW => "xi_phiy_phiz_phiw",
        }
    }
}

/// Everything the sweep runner can evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Identity {
    /// Uses `φ` as `J`.
    Gray(Gray),
    Contact(ContactKind),
    CAlpha(f64),
    Consequence(Consequence),
    /// `g(X, φY) = c·dη(X, Y)` with `c = ½` (halved) or `c = 1`.
    ContactMetric { halved: bool },
    /// `(L_ξ g)(X, Y) = 0`
    KillingXi,
    /// `∇_X ξ = −φX`
    SasakianNablaXi,
    /// `(∇_X φ)Y = g(X,Y)ξ − η(Y)X`
    SasakianNablaPhi,
    ParallelPhi,
    KappaMu { kappa: f64, mu: f64 },
}

impl Identity {
    pub fn tag(&self) -> String {
        match self {
            Identity::Gray(Gray::K1) => "k1".into(),
            Identity::Gray(Gray::K2) => "k2".into(),
            Identity::Gray(Gray::K3) => "k3".into(),
            Identity::Contact(ContactKind::G1) => "g1".into(),
            Identity::Contact(ContactKind::G2) => "g2".into(),
            Identity::Contact(ContactKind::G3) => "g3".into(),
            Identity::CAlpha(a) => format!("c({a})"),
            Identity::Consequence(c) => c.name().into(),
            Identity::ContactMetric { halved: true } => "contact_metric".into(),
            Identity::ContactMetric { halved: false } => "contact_metric_unhalved".into(),
            Identity::KillingXi => "killing_xi".into(),
            Identity::SasakianNablaXi => "sasakian_nabla_xi".into(),
            Identity::SasakianNablaPhi => "sasakian_nabla_phi".into(),
            Identity::ParallelPhi => "parallel_phi".into(),
            Identity::KappaMu { kappa, mu } => format!("kappa-mu({kappa},{mu})"),
        }
    }

    /// Number of vector arguments.
    pub fn arity(&self) -> usize {
        use Consequence::*;
        match self {
            Identity::Gray(_) | Identity::Contact(_) | Identity::CAlpha(_) => 4,
            Identity::Consequence(c) => match c {
                XiYXiW | RXyXi | XiPhiYXiPhiW => 2,
                XiYZW | XiYPhiZPhiW | EtaRXyPhiZ | XiYZPhiW | XiPhiYPhiZPhiW => 3,
                G1Horizontal | G2Horizontal | G3Horizontal => 4,
            },
            Identity::SasakianNablaXi => 1,
            _ => 2,
        }
    }

    /// `|LHS − RHS|` at one tuple of vectors.
    pub fn residual<S: Scalar>(&self, t: &StructureTensors<S>, v: &[&[S]]) -> Result<S> {
        let g = |x: &[S], y: &[S]| t.inner(x, y);
        let r = |x: &[S], y: &[S], z: &[S], w: &[S]| t.r(x, y, z, w);
        let p = |x: &[S]| t.phi_of(x);
        let eta = |x: &[S]| t.eta_of(x);
        let out = match *self {
            Identity::Gray(kind) => {
                let [x, y, z, w] = quad(v);
                let base = r(x, y, z, w);
                let rhs = match kind {
                    Gray::K1 => r(x, y, &p(z), &p(w)),
                    Gray::K2 => {
                        let jx = p(x);
                        r(&jx, &p(y), z, w).add(&r(&jx, y, &p(z), w)).add(&r(&jx, y, z, &p(w)))
                    }
                    Gray::K3 => r(&p(x), &p(y), &p(z), &p(w)),
                };
                base.sub(&rhs)
            }
            Identity::Contact(kind) => {
                let [x, y, z, w] = quad(v);
                let base = r(x, y, z, w);
                let eta_pair = g(x, z).mul(&eta(w)).mul(&eta(y)).sub(&g(z, y).mul(&eta(x)).mul(&eta(w)));
                match kind {
                    ContactKind::G1 => {
                        let (pz, pw) = (p(z), p(w));
                        let lhs = r(x, y, &pz, &pw).sub(&base);
                        let rhs = g(y, &pw)
                            .mul(&g(x, &pz))
                            .sub(&g(x, &pw).mul(&g(y, &pz)))
                            .add(&g(x, w).mul(&g(y, z)))
                            .sub(&g(y, w).mul(&g(x, z)));
                        lhs.sub(&rhs)
                    }
                    ContactKind::G2 => {
                        let pw = p(w);
                        let rhs = r(&p(x), y, z, &pw)
                            .add(&r(x, &p(y), z, &pw))
                            .add(&r(x, y, &p(z), &pw))
                            .add(&eta_pair);
                        base.sub(&rhs)
                    }
                    ContactKind::G3 => {
                        let rhs = r(&p(x), &p(y), &p(z), &p(w))
                            .add(&eta_pair)
                            .add(&g(y, w).mul(&eta(x)).mul(&eta(z)))
                            .sub(&g(x, w).mul(&eta(y)).mul(&eta(z)));
                        base.sub(&rhs)
                    }
                }
            }
            Identity::CAlpha(alpha) => {
                let [x, y, z, w] = quad(v);
                let (pz, pw) = (p(z), p(w));
                let bracket = g(x, w)
                    .mul(&g(y, z))
                    .sub(&g(x, z).mul(&g(y, w)))
                    .add(&g(x, &pz).mul(&g(y, &pw)))
                    .sub(&g(x, &pw).mul(&g(y, &pz)));
                r(x, y, z, w).sub(&r(x, y, &pz, &pw)).add(&S::from_real(alpha)?.mul(&bracket))
            }
            Identity::Consequence(c) => consequence(t, c, v),
            Identity::ContactMetric { halved } => {
                let (x, y) = (v[0], v[1]);
                let d = t.deta_at(x, y);
                let d = if halved { d.div(&S::from_int(2))? } else { d };
                g(x, &p(y)).sub(&d)
            }
            Identity::KillingXi => {
                let (x, y) = (v[0], v[1]);
                g(&t.nabla_xi_along(x), y).add(&g(x, &t.nabla_xi_along(y)))
            }
            Identity::SasakianNablaXi => {
                let x = v[0];
                return Ok(max_abs(&axpy(&t.nabla_xi_along(x), &p(x), &S::one())));
            }
            Identity::SasakianNablaPhi => {
                let (x, y) = (v[0], v[1]);
                let d = t.nabla_phi_at(x, y);
                let d = axpy(&d, &t.xi, &g(x, y).neg());
                return Ok(max_abs(&axpy(&d, x, &eta(y))));
            }
            Identity::ParallelPhi => return Ok(max_abs(&t.nabla_phi_at(v[0], v[1]))),
            Identity::KappaMu { kappa, mu } => {
                let (x, y) = (v[0], v[1]);
                let (k, m) = (S::from_real(kappa)?, S::from_real(mu)?);
                let mut d = t.r_op(x, y, &t.xi);
                let (ex, ey) = (eta(x), eta(y));
                d = axpy(&d, x, &k.mul(&ey).neg());
                d = axpy(&d, y, &k.mul(&ex));
                d = axpy(&d, &t.h_of(x)?, &m.mul(&ey).neg());
                d = axpy(&d, &t.h_of(y)?, &m.mul(&ex));
                return Ok(max_abs(&d));
            }
        };
        Ok(out.abs())
    }
}

fn quad<'a, S>(v: &[&'a [S]]) -> [&'a [S]; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// `x + a·y`
fn axpy<S: Scalar>(x: &[S], y: &[S], a: &S) -> Vec<S> {
    x.iter().zip(y).map(|(p, q)| p.add(&a.mul(q))).collect()
}

fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter().map(Scalar::abs).fold(S::zero(), |m, a| if a > m { a } else { m })
}

fn consequence<S: Scalar>(t: &StructureTensors<S>, c: Consequence, v: &[&[S]]) -> S {
    use Consequence::*;
    let g = |x: &[S], y: &[S]| t.inner(x, y);
    let r = |x: &[S], y: &[S], z: &[S], w: &[S]| t.r(x, y, z, w);
    let p = |x: &[S]| t.phi_of(x);
    let h: Vec<Vec<S>> = v.iter().map(|x| t.horizontal(x)).collect();
    let xi = &t.xi;
    let val = match c {
        XiYXiW => r(xi, &h[0], xi, &h[1]).sub(&g(&h[0], &h[1])),
        XiYZW => r(xi, &h[0], &h[1], &h[2]),
        XiYPhiZPhiW => r(xi, &h[0], &p(&h[1]), &p(&h[2])),
        G1Horizontal => {
            let (x, y, z, w) = (&h[0], &h[1], &h[2], &h[3]);
            let (pz, pw) = (p(z), p(w));
            let lhs = r(x, y, z, w).sub(&g(y, w).mul(&g(x, z))).add(&g(x, w).mul(&g(y, z)));
            let rhs = r(x, y, &pz, &pw).sub(&g(y, &pw).mul(&g(x, &pz))).add(&g(x, &pw).mul(&g(y, &pz)));
            lhs.sub(&rhs)
        }
        RXyXi => {
            let (x, y) = (v[0], v[1]);
            let mut d = t.r_op(x, y, xi);
            d = axpy(&d, x, &t.eta_of(y).neg());
            d = axpy(&d, y, &t.eta_of(x));
            return max_abs(&t.horizontal(&d));
        }
        EtaRXyPhiZ => {
            let (x, y, z) = (v[0], v[1], v[2]);
            let pz = p(z);
            let mut d = t.r_op(x, y, &pz);
            d = axpy(&d, x, &g(y, &pz).neg());
            d = axpy(&d, y, &g(x, &pz));
            t.eta_of(&d)
        }
        G2Horizontal => {
            let (x, y, z, w) = (&h[0], &h[1], &h[2], &h[3]);
            let pw = p(w);
            let rhs = r(&p(x), y, z, &pw).add(&r(x, &p(y), z, &pw)).add(&r(x, y, &p(z), &pw));
            r(x, y, z, w).sub(&rhs)
        }
        XiYZPhiW => {
            let (y, z, w) = (v[0], v[1], v[2]);
            let pw = p(w);
            r(xi, y, z, &pw).sub(&t.eta_of(z).mul(&g(&pw, y)))
        }
        G3Horizontal => {
            let (x, y, z, w) = (&h[0], &h[1], &h[2], &h[3]);
            r(x, y, z, w).sub(&r(&p(x), &p(y), &p(z), &p(w)))
        }
        XiPhiYXiPhiW => {
            let (py, pw) = (p(v[0]), p(v[1]));
            r(xi, &py, xi, &pw).sub(&g(&pw, &py))
        }
        XiPhiYPhiZPhiW => r(xi, &p(v[0]), &p(v[1]), &p(v[2])),
    };
    val.abs()
}

/// Where a sweep attained its maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Indices of the vectors in the sweep (basis indices on frames).
    pub indices: Vec<usize>,
    /// Basis names on frames.
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub tag: String,
    /// Number of (point, vector tuple) evaluations.
    pub samples: usize,
    pub residual: f64,
    /// The residual as an exact rational on frames.
    pub exact: Option<Rational>,
    pub witness: Option<Witness>,
    pub tolerance: f64,
    /// Exact zero on frames, `residual ≤ tolerance` on charts.
    pub verdict: bool,
}

pub(crate) fn report_from<S: Scalar>(
    tag: &str,
    samples: usize,
    worst: Option<(S, Vec<f64>)>,
    tol: f64,
) -> IdentityReport {
    let (res, point) = match worst {
        Some((r, p)) => (Some(r), Some(p)),
        None => (None, None),
    };
    let mut rep = finish(tag.to_string(), samples, res.as_ref(), tol);
    rep.witness = point.map(|point| Witness { point, vectors: Vec::new(), indices: Vec::new(), labels: None });
    rep
}

fn finish<S: Scalar>(tag: String, samples: usize, res: Option<&S>, tol: f64) -> IdentityReport {
    let residual = res.map_or(0.0, Scalar::to_f64);
    let exact = match res {
        Some(r) => r.exact(),
        None => S::zero().exact(),
    };
    let verdict = match &exact {
        Some(e) => num_traits::Zero::is_zero(e),
        None => residual <= tol,
    };
    IdentityReport { tag, samples, residual, exact, witness: None, tolerance: tol, verdict }
}

/// Maximises `id` over the sweep; the first strict maximum is the witness.
pub fn run<S: Scalar>(set: &EvaluationSet<S>, id: &Identity, tol: f64) -> Result<IdentityReport> {
    let arity = id.arity();
    let mut best: Option<(S, usize, Vec<usize>)> = None;
    let mut samples = 0;
    for (e_idx, e) in set.evals.iter().enumerate() {
        for idx in set.tuples(e, arity) {
            let args: Vec<&[S]> = idx.iter().map(|&i| e.vectors[i].as_slice()).collect();
            let r = id.residual(&e.tensors, &args)?;
            samples += 1;
            if best.as_ref().is_none_or(|(b, _, _)| r > *b) {
                best = Some((r, e_idx, idx));
            }
        }
    }
    let mut rep = finish(id.tag(), samples, best.as_ref().map(|b| &b.0), tol);
    rep.witness = best.map(|(_, e_idx, idx)| {
        let e = &set.evals[e_idx];
        Witness {
            point: e.point.clone(),
            vectors: idx.iter().map(|&i| e.vectors[i].iter().map(Scalar::to_f64).collect()).collect(),
            labels: set.labels.as_ref().map(|names| idx.iter().map(|&i| names[i].clone()).collect()),
            indices: idx,
        }
    });
    Ok(rep)
}

pub fn check_hermitian(
    h: &AlmostHermitianStructure,
    kind: Gray,
    samples: &SampleSet,
    tol: f64,
) -> Result<IdentityReport> {
    run(&structures::hermitian_evaluations(h, samples)?, &Identity::Gray(kind), tol)
}

pub fn check_contact(
    s: &AlmostContactStructure,
    kind: ContactKind,
    samples: &SampleSet,
    tol: f64,
) -> Result<IdentityReport> {
    structures::sweep_contact(s, samples, &Identity::Contact(kind), tol)
}

pub fn check_c_alpha(s: &AlmostContactStructure, alpha: f64, samples: &SampleSet, tol: f64) -> Result<IdentityReport> {
    structures::sweep_contact(s, samples, &Identity::CAlpha(alpha), tol)
}

pub fn consequence_suite(
    s: &AlmostContactStructure,
    kind: ContactKind,
    samples: &SampleSet,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    Consequence::suite(kind)
        .iter()
        .map(|&c| structures::sweep_contact(s, samples, &Identity::Consequence(c), tol))
        .collect()
}

/// `G1 ⇒ G2 ⇒ G3` on verdicts.
pub fn inclusion_chain_holds(g1: &IdentityReport, g2: &IdentityReport, g3: &IdentityReport) -> bool {
    (!g1.verdict || g2.verdict) && (!g2.verdict || g3.verdict)
}

/// Identities of all three kinds in one pass.
pub fn contact_reports(s: &AlmostContactStructure, samples: &SampleSet, tol: f64) -> Result<[IdentityReport; 3]> {
    let [a, b, c] = ContactKind::ALL;
    Ok([
        check_contact(s, a, samples, tol)?,
        check_contact(s, b, samples, tol)?,
        check_contact(s, c, samples, tol)?,
    ])
}

/// Builds the default sampling for a chart-carried structure; frames ignore it.
pub fn default_samples(s: &AlmostContactStructure, n_points: usize, seed: u64) -> Result<SampleSet> {
    match s {
        AlmostContactStructure::Chart(c) => crate::chart::sample(&c.chart, n_points, 20, seed),
        AlmostContactStructure::Frame(_) => Ok(SampleSet { seed, points: vec![], vectors: vec![] }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::heisenberg_h21;
    use crate::scalar::ratio;

    fn h21() -> AlmostContactStructure {
        AlmostContactStructure::Frame(heisenberg_h21(ratio(3, 5), ratio(4, 5)).unwrap())
    }

    fn none() -> SampleSet {
        SampleSet { seed: 0, points: vec![], vectors: vec![] }
    }

    #[test]
    fn h21_contact_identities() {
        let [g1, g2, g3] = contact_reports(&h21(), &none(), 1e-7).unwrap();
        assert_eq!(g1.samples, 625);
        assert_eq!(g1.exact, Some(ratio(2, 1)));
        let w = g1.witness.unwrap();
        assert_eq!(w.labels.unwrap(), ["X1", "X2", "X1", "X2"]);
        assert_eq!(g2.exact, Some(ratio(0, 1)));
        assert_eq!(g3.exact, Some(ratio(0, 1)));
        assert!(g2.verdict && g3.verdict && !g1.verdict);
    }

    #[test]
    fn g1_at_named_quadruple() {
        let f = heisenberg_h21(ratio(3, 5), ratio(4, 5)).unwrap();
        let t = structures::frame_tensors(&f).unwrap();
        let e = crate::linalg::identity::<Rational>(5);
        let v = [&e[0][..], &e[2][..], &e[0][..], &e[3][..]];
        assert_eq!(Identity::Contact(ContactKind::G1).residual(&t, &v).unwrap(), ratio(24, 25));
    }

    #[test]
    fn h21_consequences() {
        for kind in ContactKind::ALL {
            for r in consequence_suite(&h21(), kind, &none(), 1e-7).unwrap() {
                if kind != ContactKind::G1 || matches!(r.tag.as_str(), "xi_y_xi_w" | "xi_y_z_w") {
                    assert_eq!(r.exact, Some(ratio(0, 1)), "{kind:?} {}", r.tag);
                }
            }
        }
    }

    #[test]
    fn witness_reproduces_residual() {
        let f = heisenberg_h21(ratio(3, 5), ratio(4, 5)).unwrap();
        let t = structures::frame_tensors(&f).unwrap();
        let rep = check_contact(&h21(), ContactKind::G1, &none(), 1e-7).unwrap();
        let e = crate::linalg::identity::<Rational>(5);
        let idx = rep.witness.unwrap().indices;
        let v: Vec<&[Rational]> = idx.iter().map(|&i| e[i].as_slice()).collect();
        assert_eq!(Identity::Contact(ContactKind::G1).residual(&t, &v).unwrap().exact(), rep.exact);
    }

    #[test]
    fn tags() {
        assert_eq!(Identity::CAlpha(1.0).tag(), "c(1)");
        assert_eq!(Identity::KappaMu { kappa: 1.0, mu: 0.0 }.tag(), "kappa-mu(1,0)");
    }
}
