//! Circle submersions `π: M → N` of a contact metric manifold onto an
//! almost Hermitian base, with `φ` defined by `φX↑ = (JX)↑`, and the lift
//! relations between their connections and curvatures.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, Interval, SampleSet, TensorField, Valence};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::geometry::LocalGeometry;
use crate::identities::{ContactKind, Identity};
use crate::jet::{Jet1, Jet2};
use crate::linalg::{self, Matrix};
use crate::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact, StructureTensors};

#[derive(Debug, Clone)]
pub struct SubmersionPair {
    pub total: ChartContact,
    pub base: AlmostHermitianStructure,
    /// Base coordinates as functions of the total-space coordinates.
    pub projection: Vec<Expr>,
}

/// Per-point data for horizontal lifts.
struct LiftData {
    /// Rows `dπ^α` followed by `η`.
    m: Matrix<Jet1>,
    inverse: Matrix<Jet1>,
    dpi: Matrix<f64>,
    base_point: Vec<f64>,
    pi1: Vec<Jet1>,
}

fn lift_data(total_chart: &Chart, eta: &TensorField, projection: &[Expr], p: &[f64]) -> Result<LiftData> {
    let n = total_chart.dim();
    if projection.len() + 1 != n {
        return Err(Error::Shape("the fibres of the submersion are one-dimensional".into()));
    }
    let seeds = Jet2::seeds(p)?;
    let pi = projection.iter().map(|e| e.eval(&seeds)).collect::<Result<Vec<Jet2>>>()?;
    let mut m: Matrix<Jet1> = pi.iter().map(|c| (0..n).map(|i| c.partial(i)).collect()).collect();
    m.push(eta.eval_jets(p)?);
    let inverse = linalg::inverse(&m).map_err(|_| Error::SingularLift)?;
    Ok(LiftData {
        m,
        inverse,
        dpi: pi.iter().map(|c| (0..n).map(|i| c.d(i)).collect()).collect(),
        base_point: pi.iter().map(Jet2::value).collect(),
        pi1: pi.iter().map(Jet2::first_order).collect(),
    })
}

impl LiftData {
    /// `X↑` with derivatives, for a constant base vector `X`.
    fn lift(&self, x: &[f64]) -> Vec<Jet1> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(x).fold(Jet1::constant(0.0), |acc, (l, xa)| acc + l.scale(*xa)))
            .collect()
    }

    fn project(&self, v: &[f64]) -> Vec<f64> {
        linalg::mat_vec(&self.dpi, v)
    }
}

impl SubmersionPair {
    /// Total space with `φ = L·diag(J, 0)·M`, where `M = [dπ; η]` and
    /// `L = M⁻¹`, i.e. `φX↑ = (JX)↑` and `φξ = 0`.
    pub fn boothby_wang(
        total_chart: Chart,
        xi: TensorField,
        eta: TensorField,
        base: AlmostHermitianStructure,
        projection: Vec<Expr>,
    ) -> Result<SubmersionPair> {
        let n = total_chart.dim();
        let k = n - 1;
        let (tc, et, b, pr) = (total_chart.clone(), eta.clone(), base.clone(), projection.clone());
        let phi = TensorField::computed(
            Valence::Endomorphism,
            n,
            Arc::new(move |p: &[f64]| {
                let ld = lift_data(&tc, &et, &pr, p)?;
                let j: Vec<Jet1> = b.j.eval_jets(&ld.base_point)?.iter().map(|c| c.compose(&ld.pi1)).collect();
                let m = &ld.m;
                // diag(J, 0)·M
                let jm: Matrix<Jet1> = (0..k)
                    .map(|a| {
                        (0..n)
                            .map(|i| (0..k).fold(Jet1::constant(0.0), |acc, c| acc + j[a * k + c] * m[c][i]))
                            .collect()
                    })
                    .collect();
                let mut out = vec![Jet1::constant(0.0); n * n];
                for r in 0..n {
                    for i in 0..n {
                        out[r * n + i] = (0..k).fold(Jet1::constant(0.0), |acc, a| acc + ld.inverse[r][a] * jm[a][i]);
                    }
                }
                Ok(out)
            }),
        );
        Ok(SubmersionPair { total: ChartContact::new(total_chart, phi, xi, eta)?, base, projection })
    }

    pub fn contact(&self) -> AlmostContactStructure {
        AlmostContactStructure::Chart(self.total.clone())
    }
}

/// The Hopf fibration of the unit `S³` over the round `S²` of radius ½.
///
/// `S³` uses `(a, p1, p2) ↦ (cos a e^{i p1}, sin a e^{i p2})` with
/// `ξ = ∂_{p1} + ∂_{p2}`; the base uses the stereographic chart
/// `G = (du² + dv²)/(1 + u² + v²)²` with `J∂_u = ∂_v`, and
/// `π = tan a (cos(p1 − p2), sin(p1 − p2))`.
pub fn hopf_pair() -> Result<SubmersionPair> {
    let tc = ["a", "p1", "p2"];
    let e = |s: &str| parse_expr(s, &tc);
    let total = Chart::diagonal(
        &tc,
        vec![Expr::int(1), e("cos(a)^2")?, e("sin(a)^2")?],
        vec![Interval::open(0.2, 1.35), Interval::REAL_LINE, Interval::REAL_LINE],
    )?;
    let xi = TensorField::constant(Valence::Vector, 3, &[0, 1, 1])?;
    let eta = TensorField::from_exprs(Valence::OneForm, 3, vec![Expr::int(0), e("cos(a)^2")?, e("sin(a)^2")?])?;
    let bc = ["u", "v"];
    let conf = parse_expr("1/(1 + u^2 + v^2)^2", &bc)?;
    let base_chart = Chart::diagonal(&bc, vec![conf.clone(), conf], vec![Interval::REAL_LINE; 2])?;
    let j = TensorField::constant(Valence::Endomorphism, 2, &[0, -1, 1, 0])?;
    let base = AlmostHermitianStructure::new(base_chart, j)?;
    let projection = vec![e("tan(a)*cos(p1 - p2)")?, e("tan(a)*sin(p1 - p2)")?];
    SubmersionPair::boothby_wang(total, xi, eta, base, projection)
}

/// Largest residuals of the lift relations over the sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftReport {
    /// `|dπ(ξ)|`
    pub vertical: f64,
    /// `∇_{X↑}Y↑ = (∇^N_X Y)↑ − G(X,JY)ξ`
    pub connection: f64,
    /// `∇_{X↑}ξ = −φX↑`
    pub nabla_xi: f64,
    /// `[X↑,Y↑] = −2G(X,JY)ξ` for coordinate fields of the base
    pub bracket: f64,
    /// `R^M(W↑,Z↑,X↑,Y↑) = R^N(W,Z,X,Y) − 2g(X↑,φY↑)g(W↑,φZ↑) + g(Y↑,φZ↑)g(W↑,φX↑) − g(X↑,φZ↑)g(W↑,φY↑)`
    pub curvature: f64,
    /// The identities that `K1`, `K2`, `K3` on the base induce on lifts.
    pub k1_lift: f64,
    pub k2_lift: f64,
    pub k3_lift: f64,
    pub tolerance: f64,
}

impl LiftReport {
    pub fn entries(&self) -> [(&'static str, f64); 8] {
        [
            ("vertical", self.vertical),
            ("connection_lift", self.connection),
            ("nabla_xi_lift", self.nabla_xi),
            ("bracket_lift", self.bracket),
            ("curvature_lift", self.curvature),
            ("k1_lift", self.k1_lift),
            ("k2_lift", self.k2_lift),
            ("k3_lift", self.k3_lift),
        ]
    }

    pub fn passes(&self) -> bool {
        self.entries().iter().all(|(_, r)| *r <= self.tolerance)
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(libm::fabs(*x)))
}

/// `∇_X Y` for a vector field `Y` given with first derivatives.
fn nabla_field(geo: &LocalGeometry, x: &[f64], y: &[Jet1]) -> Vec<f64> {
    let yv: Vec<f64> = y.iter().map(Jet1::value).collect();
    let gam = geo.connection(x, &yv);
    y.iter().zip(gam).map(|(c, g)| c.along(x) + g).collect()
}

fn k2_lift<S: crate::scalar::Scalar>(t: &StructureTensors<S>, v: [&[S]; 4]) -> S {
    let [x, y, z, w] = v;
    let p = |u: &[S]| t.phi_of(u);
    t.r(&p(x), y, z, w).add(&t.r(x, &p(y), z, w)).add(&t.r(x, y, &p(z), w)).add(&t.r(x, y, z, &p(w)))
}

pub fn check_submersion_lift(sp: &SubmersionPair, samples: &SampleSet, tol: f64) -> Result<LiftReport> {
    let mut rep = LiftReport {
        vertical: 0.0,
        connection: 0.0,
        nabla_xi: 0.0,
        bracket: 0.0,
        curvature: 0.0,
        k1_lift: 0.0,
        k2_lift: 0.0,
        k3_lift: 0.0,
        tolerance: tol,
    };
    for (p, vs) in samples.points.iter().zip(&samples.vectors) {
        let ld = lift_data(&sp.total.chart, &sp.total.eta, &sp.projection, p)?;
        let tt = sp.total.tensors_at(p)?;
        let bt = sp.base.tensors_at(&ld.base_point)?;
        let geo = LocalGeometry::at(&sp.total.chart, p)?;
        let bgeo = LocalGeometry::at(&sp.base.chart, &ld.base_point)?;
        rep.vertical = rep.vertical.max(max_abs(&ld.project(&tt.xi)));
        let val = |v: &[Jet1]| v.iter().map(Jet1::value).collect::<Vec<f64>>();
        for quad in vs.chunks_exact(4) {
            let base: Vec<Vec<f64>> = quad.iter().map(|v| ld.project(v)).collect();
            let lifts: Vec<Vec<Jet1>> = base.iter().map(|x| ld.lift(x)).collect();
            let up: Vec<Vec<f64>> = lifts.iter().map(|l| val(l)).collect();
            let (x, y) = (&base[0], &base[1]);
            let gxjy = bt.inner(x, &bt.phi_of(y));
            // connection
            let lhs = nabla_field(&geo, &up[0], &lifts[1]);
            let rhs = val(&ld.lift(&bgeo.connection(x, y)));
            let d: Vec<f64> = (0..lhs.len()).map(|i| lhs[i] - rhs[i] + gxjy * tt.xi[i]).collect();
            rep.connection = rep.connection.max(max_abs(&d));
            // ∇ξ
            let d: Vec<f64> = tt.nabla_xi_along(&up[0]).iter().zip(tt.phi_of(&up[0])).map(|(a, b)| a + b).collect();
            rep.nabla_xi = rep.nabla_xi.max(max_abs(&d));
            // bracket
            let br: Vec<f64> = (0..lhs.len())
                .map(|i| lifts[1][i].along(&up[0]) - lifts[0][i].along(&up[1]) + 2.0 * gxjy * tt.xi[i])
                .collect();
            rep.bracket = rep.bracket.max(max_abs(&br));
            // curvature, arguments (W, Z, X, Y)
            let [w, z, x, y] = [&up[0], &up[1], &up[2], &up[3]];
            let g = |a: &[f64], b: &[f64]| tt.inner(a, b);
            let ph = |a: &[f64]| tt.phi_of(a);
            let rn = bt.r(&base[0], &base[1], &base[2], &base[3]);
            let pred = rn - 2.0 * g(x, &ph(y)) * g(w, &ph(z)) + g(y, &ph(z)) * g(w, &ph(x)) - g(x, &ph(z)) * g(w, &ph(y));
            rep.curvature = rep.curvature.max(libm::fabs(tt.r(w, z, x, y) - pred));
            let v4 = [up[0].as_slice(), &up[1], &up[2], &up[3]];
            rep.k1_lift = rep.k1_lift.max(Identity::Contact(ContactKind::G1).residual(&tt, &v4)?);
            rep.k2_lift = rep.k2_lift.max(libm::fabs(k2_lift(&tt, v4)));
            let k3 = tt.r(&ph(v4[0]), &ph(v4[1]), &ph(v4[2]), &ph(v4[3])) - tt.r(v4[0], v4[1], v4[2], v4[3]);
            rep.k3_lift = rep.k3_lift.max(libm::fabs(k3));
        }
    }
    Ok(rep)
}
