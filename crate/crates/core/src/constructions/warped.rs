//! Warped products `B ×_b F` and the almost contact structures on `ℝ ×_f N`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{sample, Chart, Interval, SampleSet, TensorField, Valence};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::LocalGeometry;
use crate::jet::Jet2;
use crate::linalg;
use crate::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact};

/// Base chart, fiber chart and a warping function over the base coordinates.
#[derive(Debug, Clone)]
pub struct WarpedSpec {
    pub base: Chart,
    pub fiber: Chart,
    pub b: Expr,
}

/// `B × F` with `g̃ = π*g_B + (b∘π)² τ*g_F`; base coordinates first.
#[derive(Debug, Clone)]
pub struct WarpedProduct {
    pub spec: WarpedSpec,
    pub chart: Chart,
}

fn block_metric(a: &Chart, b: &Chart, scale_b: &Expr) -> Result<Chart> {
    let (n, k) = (a.dim(), b.dim());
    let mut metric = vec![vec![Expr::int(0); n + k]; n + k];
    for i in 0..n {
        for j in 0..n {
            metric[i][j] = a.metric()[i][j].clone();
        }
    }
    for i in 0..k {
        for j in 0..k {
            let e = &b.metric()[i][j];
            if !e.is_zero() {
                metric[n + i][n + j] = scale_b.clone() * e.shift_vars(n);
            }
        }
    }
    let mut coords: Vec<String> = a.coords().to_vec();
    coords.extend(b.coords().iter().cloned());
    let mut domain = a.domain().to_vec();
    domain.extend_from_slice(b.domain());
    Chart::new(coords, metric, domain)
}

pub fn build_warped(w: &WarpedSpec) -> Result<WarpedProduct> {
    let probe = sample(&w.base, 20, 0, 0)?;
    for p in &probe.points {
        let v: f64 = w.b.eval(p)?;
        if !(v > 0.0) {
            return Err(Error::NonPositiveWarping { value: v, point: p.clone() });
        }
    }
    let chart = block_metric(&w.base, &w.fiber, &w.b.clone().powi(2))?;
    Ok(WarpedProduct { spec: w.clone(), chart })
}

impl WarpedProduct {
    /// `∇̃_A B` for constant-coefficient fields, assembled from the base and
    /// fiber connections: `∇̃_X Y = ∇^B_X Y`, `∇̃_X Z = X(ln b) Z` and
    /// `∇̃_Z W = ∇^F_Z W − b² g_F(Z,W) ∇^B(ln b)`.
    pub fn connection_oracle(&self, q: &[f64], a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        let n = self.spec.base.dim();
        let (pb, pf) = q.split_at(n);
        let (x, z) = a.split_at(n);
        let (y, w) = b.split_at(n);
        let gb = LocalGeometry::at(&self.spec.base, pb)?;
        let gf = LocalGeometry::at(&self.spec.fiber, pf)?;
        let bj: Jet2 = self.spec.b.eval(&Jet2::seeds(pb)?)?;
        let bv = bj.value();
        let dlog: Vec<f64> = (0..n).map(|i| bj.d(i) / bv).collect();
        let grad = linalg::mat_vec(&gb.ginv, &dlog);
        let x_ln = linalg::dot(&dlog, x);
        let y_ln = linalg::dot(&dlog, y);
        let gzw = gf.inner(z, w);
        let mut out = gb.connection(x, y);
        for (o, gr) in out.iter_mut().zip(&grad) {
            *o -= bv * bv * gzw * gr;
        }
        let fib = gf.connection(z, w);
        out.extend(fib.iter().enumerate().map(|(i, f)| f + x_ln * w[i] + y_ln * z[i]));
        Ok(out)
    }
}

/// `ℝ ×_f N` with `g = dθ² + f(θ)² ḡ`, `ξ = ∂_θ`, `η = dθ`, `φ = J` on `N`.
/// The coordinate `θ` comes last.
#[derive(Debug, Clone)]
pub struct RWarped {
    pub fiber: AlmostHermitianStructure,
    /// `f` as an expression in a single variable.
    pub f: Expr,
    pub structure: ChartContact,
}

pub fn build_r_warped_contact(
    n: &AlmostHermitianStructure,
    f: &Expr,
    theta: &str,
    theta_domain: Interval,
) -> Result<RWarped> {
    if f.arity() > 1 {
        return Err(Error::Invalid("the warping function depends on θ only".into()));
    }
    let (lo, hi) = theta_domain
        .sampling_window()
        .ok_or_else(|| Error::EmptyDomain { coord: theta.into() })?;
    for k in 0..=64 {
        let th = lo + (hi - lo) * k as f64 / 64.0;
        let v: f64 = f.eval(&[th])?;
        if !(v > 0.0) {
            return Err(Error::NonPositiveWarping { value: v, point: vec![th] });
        }
    }
    let dim = n.chart.dim();
    let theta_chart = Chart::new(vec![theta.into()], vec![vec![Expr::int(1)]], vec![theta_domain])?;
    let chart = block_metric(&n.chart, &theta_chart, &Expr::int(1))?;
    // rescale the fiber block by f(θ)²
    let f2 = f.shift_vars(dim).powi(2);
    let mut metric = chart.metric().clone();
    for row in metric.iter_mut().take(dim) {
        for e in row.iter_mut().take(dim) {
            if !e.is_zero() {
                *e = f2.clone() * e.clone();
            }
        }
    }
    let chart = Chart::new(chart.coords().to_vec(), metric, chart.domain().to_vec())?;
    let m = dim + 1;
    let jex = n
        .j
        .exprs()
        .ok_or_else(|| Error::Invalid("the fiber J must be given by expressions".into()))?;
    let mut phi = vec![Expr::int(0); m * m];
    for a in 0..dim {
        for b in 0..dim {
            phi[a * m + b] = jex[a * dim + b].clone();
        }
    }
    let mut unit = vec![0; m];
    unit[dim] = 1;
    let structure = ChartContact::new(
        chart,
        TensorField::from_exprs(Valence::Endomorphism, m, phi)?,
        TensorField::constant(Valence::Vector, m, &unit)?,
        TensorField::constant(Valence::OneForm, m, &unit)?,
    )?;
    Ok(RWarped { fiber: n.clone(), f: f.clone(), structure })
}

impl RWarped {
    pub fn contact(&self) -> AlmostContactStructure {
        AlmostContactStructure::Chart(self.structure.clone())
    }

    fn f_jet(&self, theta: f64) -> Result<Jet2> {
        self.f.eval(&[Jet2::seed(&[theta], 0)?])
    }

    /// `R(A,B,C,D)` from `f`, `f'`, `f''` and the curvature of `N`:
    /// `R(W,ξ,X,ξ) = −(f''/f) g(X,W)`, `R(W,ξ,X,Y) = 0` and
    /// `R(W,Z,X,Y) = f²[R̄(W,Z,X,Y) + f'²(ḡ(X,Z)ḡ(Y,W) − ḡ(Y,Z)ḡ(X,W))]`.
    pub fn curvature_oracle(&self, q: &[f64], v: [&[f64]; 4]) -> Result<f64> {
        let dim = self.fiber.chart.dim();
        let fj = self.f_jet(q[dim])?;
        let (f, f1, f2) = (fj.value(), fj.d(0), fj.hessian(0, 0));
        let geo = LocalGeometry::at(&self.fiber.chart, &q[..dim])?;
        let [a, b, c, d] = v.map(|x| x.split_at(dim));
        let gbar = |x: &[f64], y: &[f64]| geo.inner(x, y);
        let g = |x: &[f64], y: &[f64]| f * f * gbar(x, y);
        let fiber4 = |w: &[f64], z: &[f64], x: &[f64], y: &[f64]| {
            f * f * (geo.curvature(w, z, x, y) + f1 * f1 * (gbar(x, z) * gbar(y, w) - gbar(y, z) * gbar(x, w)))
        };
        // R(W,ξ,X,ξ) as a function of (W, X)
        let mixed = |w: &[f64], x: &[f64]| -(f2 / f) * g(x, w);
        let (an, at) = (a.0, a.1[0]);
        let (bn, bt) = (b.0, b.1[0]);
        let (cn, ct) = (c.0, c.1[0]);
        let (dn, dt) = (d.0, d.1[0]);
        Ok(fiber4(an, bn, cn, dn) + bt * dt * mixed(an, cn) - bt * ct * mixed(an, dn) - at * dt * mixed(bn, cn)
            + at * ct * mixed(bn, dn))
    }
}

/// Largest `|ḡ(JY,Z)JX − ḡ(JX,Z)JY + ḡ(X,Z)Y − ḡ(Y,Z)X|` component over
/// consecutive triples of sampled fiber vectors.
pub fn eq_for_g1_residual(n: &AlmostHermitianStructure, samples: &SampleSet) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (p, vs) in samples.points.iter().zip(&samples.vectors) {
        let g = n.chart.metric_at(p)?;
        let j = n.j.eval_matrix(p)?;
        for tri in vs.chunks_exact(3) {
            let (x, y, z) = (&tri[0], &tri[1], &tri[2]);
            let (jx, jy) = (linalg::mat_vec(&j, x), linalg::mat_vec(&j, y));
            let c1 = linalg::bilinear(&g, &jy, z);
            let c2 = linalg::bilinear(&g, &jx, z);
            let c3 = linalg::bilinear(&g, x, z);
            let c4 = linalg::bilinear(&g, y, z);
            for i in 0..x.len() {
                let v = c1 * jx[i] - c2 * jy[i] + c3 * y[i] - c4 * x[i];
                worst = worst.max(libm::fabs(v));
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::Shape("no sample points".into()));
    }
    Ok(worst)
}
