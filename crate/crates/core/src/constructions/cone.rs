//! Metric cone `ℝ₊ × M` with `g̃ = dt² + t²g` and the almost complex structure
//! `J∂_t = −ξ/t`, `JX = φX + tη(X)∂_t`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, Interval, TensorField, Valence};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::LocalGeometry;
use crate::jet::Jet1;
use crate::linalg::Matrix;
use crate::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact, StructureTensors};

use super::fresh_name;

/// The cone over a chart-carried almost contact metric structure. The cone
/// coordinate `t` comes first.
#[derive(Debug, Clone)]
pub struct ConeBundle {
    pub base: ChartContact,
    pub chart: Chart,
    pub j: TensorField,
}

pub fn build_cone(s: &AlmostContactStructure) -> Result<ConeBundle> {
    let base = match s {
        AlmostContactStructure::Chart(c) => c.clone(),
        AlmostContactStructure::Frame(_) => return Err(Error::FrameCarrier),
    };
    let n = base.chart.dim();
    let m = n + 1;
    let t = Expr::var(0);
    let mut metric = vec![vec![Expr::int(0); m]; m];
    metric[0][0] = Expr::int(1);
    for i in 0..n {
        for j in 0..n {
            let gij = &base.chart.metric()[i][j];
            if !gij.is_zero() {
                metric[i + 1][j + 1] = t.clone().powi(2) * gij.shift_vars(1);
            }
        }
    }
    let mut coords = vec![fresh_name(&base.chart, "t")];
    coords.extend(base.chart.coords().iter().cloned());
    let mut domain = vec![Interval::POSITIVE];
    domain.extend_from_slice(base.chart.domain());
    let chart = Chart::new(coords, metric, domain)?;

    let b = base.clone();
    let j = TensorField::computed(
        Valence::Endomorphism,
        m,
        Arc::new(move |q: &[f64]| {
            let p = &q[1..];
            let dy = (1..=n).map(|i| Jet1::seed(q, i)).collect::<Result<Vec<_>>>()?;
            let lift = |v: Vec<Jet1>| v.iter().map(|c| c.compose(&dy)).collect::<Vec<_>>();
            let phi = lift(b.phi.eval_jets(p)?);
            let xi = lift(b.xi.eval_jets(p)?);
            let eta = lift(b.eta.eval_jets(p)?);
            let t = Jet1::seed(q, 0)?;
            let tinv = t.recip()?;
            let mut out = vec![Jet1::constant(0.0); m * m];
            for a in 0..n {
                out[(a + 1) * m] = -(xi[a] * tinv);
                out[a + 1] = t * eta[a];
                for c in 0..n {
                    out[(a + 1) * m + c + 1] = phi[a * n + c];
                }
            }
            Ok(out)
        }),
    );
    Ok(ConeBundle { base, chart, j })
}

impl ConeBundle {
    pub fn hermitian(&self) -> AlmostHermitianStructure {
        AlmostHermitianStructure { chart: self.chart.clone(), j: self.j.clone() }
    }

    /// Cone tensors at `q = (t, p)` with `φ = J`.
    pub fn tensors_at(&self, q: &[f64]) -> Result<StructureTensors<f64>> {
        self.hermitian().tensors_at(q)
    }

    /// The quantity `case` evaluated with the generic chart engine on the cone.
    pub fn generic(&self, case: ConeCase, q: &[f64], inputs: &[&[f64]]) -> Result<Vec<f64>> {
        check_inputs(case, q, inputs, self.chart.dim())?;
        Ok(match case {
            ConeCase::Connection => LocalGeometry::at(&self.chart, q)?.connection(inputs[0], inputs[1]),
            ConeCase::NablaJ => self.tensors_at(q)?.nabla_phi_at(inputs[0], inputs[1]),
            ConeCase::Curvature => self.tensors_at(q)?.r_op(inputs[0], inputs[1], inputs[2]),
            ConeCase::CurvatureJ => {
                let t = self.tensors_at(q)?;
                let jc = t.phi_of(inputs[2]);
                let jd = t.phi_of(inputs[3]);
                vec![t.inner(&t.r_op(inputs[0], inputs[1], &jc), &jd)]
            }
        })
    }
}

/// Which closed-form prediction to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeCase {
    /// `∇̃_A B` for constant-coefficient `A`, `B`.
    Connection,
    /// `(∇̃_A J) B`
    NablaJ,
    /// `R̃(A, B) C`
    Curvature,
    /// `g̃(R̃(A, B) JC, JD)`
    CurvatureJ,
}

impl ConeCase {
    pub fn from_name(name: &str) -> Result<ConeCase> {
        match name {
            "connection" => Ok(ConeCase::Connection),
            "nabla_j" => Ok(ConeCase::NablaJ),
            "curvature" => Ok(ConeCase::Curvature),
            "curvature_j" => Ok(ConeCase::CurvatureJ),
            _ => Err(Error::Invalid(alloc::format!("unknown cone case {name:?}"))),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            ConeCase::Connection | ConeCase::NablaJ => 2,
            ConeCase::Curvature => 3,
            ConeCase::CurvatureJ => 4,
        }
    }
}

fn check_inputs(case: ConeCase, q: &[f64], inputs: &[&[f64]], m: usize) -> Result<()> {
    if q.len() != m || inputs.len() != case.arity() || inputs.iter().any(|v| v.len() != m) {
        return Err(Error::Shape(alloc::format!(
            "{case:?} takes {} cone vectors of length {m}",
            case.arity()
        )));
    }
    Ok(())
}

/// Right-hand sides of the cone formulas, computed from base data only.
/// Cone vectors are split as `A = a∂_t + X` with `X` tangent to the base.
pub fn cone_closed_forms(cb: &ConeBundle, case: ConeCase, q: &[f64], inputs: &[&[f64]]) -> Result<Vec<f64>> {
    let m = cb.chart.dim();
    check_inputs(case, q, inputs, m)?;
    let t = q[0];
    let p = &q[1..];
    let split = |v: &[f64]| (v[0], v[1..].to_vec());
    let join = |a: f64, x: &[f64]| {
        let mut v = vec![a];
        v.extend_from_slice(x);
        v
    };
    let bt = cb.base.tensors_at(p)?;
    let g = |x: &[f64], y: &[f64]| bt.inner(x, y);
    match case {
        ConeCase::Connection => {
            let (a, x) = split(inputs[0]);
            let (b, y) = split(inputs[1]);
            let geo = LocalGeometry::at(&cb.base.chart, p)?;
            let nxy = geo.connection(&x, &y);
            let base: Vec<f64> = (0..m - 1).map(|i| nxy[i] + a / t * y[i] + b / t * x[i]).collect();
            Ok(join(-t * g(&x, &y), &base))
        }
        ConeCase::NablaJ => {
            let (_, x) = split(inputs[0]);
            let (b, y) = split(inputs[1]);
            // (∇̃_X J)∂_t = (0, −(∇_X ξ + φX)/t)
            let dxi = bt.nabla_xi_along(&x);
            let px = bt.phi_of(&x);
            // (∇̃_X J)Y = (t((∇_X η)Y − g(X, φY)), (∇_X φ)Y − g(X,Y)ξ + η(Y)X)
            let dphi = bt.nabla_phi_at(&x, &y);
            let (gxy, ey) = (g(&x, &y), bt.eta_of(&y));
            let head = t * (bt.nabla_eta_at(&x, &y) - g(&x, &bt.phi_of(&y)));
            let tail: Vec<f64> = (0..m - 1)
                .map(|i| -b / t * (dxi[i] + px[i]) + dphi[i] - gxy * bt.xi[i] + ey * x[i])
                .collect();
            Ok(join(head, &tail))
        }
        ConeCase::Curvature => {
            let (_, x) = split(inputs[0]);
            let (_, y) = split(inputs[1]);
            let (_, z) = split(inputs[2]);
            let r = bt.r_op(&x, &y, &z);
            let (gyz, gxz) = (g(&y, &z), g(&x, &z));
            let v: Vec<f64> = (0..m - 1).map(|i| r[i] - gyz * x[i] + gxz * y[i]).collect();
            Ok(join(0.0, &v))
        }
        ConeCase::CurvatureJ => {
            let (_, x) = split(inputs[0]);
            let (_, y) = split(inputs[1]);
            let (c, z) = split(inputs[2]);
            let (d, w) = split(inputs[3]);
            let (ex, ey) = (bt.eta_of(&x), bt.eta_of(&y));
            let xi = &bt.xi;
            let rxi = bt.r_op(&x, &y, xi);
            let pz = bt.phi_of(&z);
            let pw = bt.phi_of(&w);
            let rpz = bt.r_op(&x, &y, &pz);
            // g̃(R̃(X,Y)J∂_t, J∂_t)
            let tt = g(&rxi, xi) - ey * ex + ex * ey;
            // item 1: g̃(R̃(X,Y)J∂_t, JW)
            let i1 = -t * (g(&rxi, &pw) - ey * g(&x, &pw) + ex * g(&y, &pw));
            // item 2: g̃(R̃(X,Y)JZ, J∂_t)
            let i2 = -t * (bt.eta_of(&rpz) - ex * g(&y, &pz) + ey * g(&x, &pz));
            // item 3: g̃(R̃(X,Y)JZ, JW)
            let i3 = t * t * (g(&rpz, &pw) - g(&y, &pz) * g(&x, &pw) + g(&x, &pz) * g(&y, &pw));
            Ok(vec![c * d * tt + c * i1 + d * i2 + i3])
        }
    }
}

/// Largest `|generic − closed form|` entry.
pub fn closed_form_residual(cb: &ConeBundle, case: ConeCase, q: &[f64], inputs: &[&[f64]]) -> Result<f64> {
    let a = cb.generic(case, q, inputs)?;
    let b = cone_closed_forms(cb, case, q, inputs)?;
    Ok(a.iter().zip(&b).map(|(x, y)| libm::fabs(x - y)).fold(0.0, f64::max))
}

/// `J` as a matrix at `q`, for inspection.
pub fn j_matrix(cb: &ConeBundle, q: &[f64]) -> Result<Matrix<f64>> {
    cb.j.eval_matrix(q)
}

/// `|J∂_t + ξ/t|` and `|JX − φX − tη(X)∂_t|` over the coordinate basis.
pub fn j_definition_residual(cb: &ConeBundle, q: &[f64]) -> Result<f64> {
    let jm = j_matrix(cb, q)?;
    let p = &q[1..];
    let n = p.len();
    let phi = cb.base.phi.eval_matrix(p)?;
    let xi = cb.base.xi.eval(p)?;
    let eta = cb.base.eta.eval(p)?;
    let t = q[0];
    let mut worst: f64 = libm::fabs(jm[0][0]);
    for a in 0..n {
        worst = worst.max(libm::fabs(jm[a + 1][0] + xi[a] / t));
        worst = worst.max(libm::fabs(jm[0][a + 1] - t * eta[a]));
        for b in 0..n {
            worst = worst.max(libm::fabs(jm[a + 1][b + 1] - phi[a][b]));
        }
    }
    Ok(worst)
}
