//! Almost contact structures induced on real hypersurfaces of Kähler
//! manifolds: `ξ = −JN` and `JX = φX + η(X)N`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, SampleSet, TensorField, Valence};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::LocalGeometry;
use crate::jet::{Jet1, Jet2};
use crate::linalg::{self, Matrix};
use crate::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact};

/// Tolerance for the unit-normal, normality and metric pullback checks.
pub const EMBEDDING_TOL: f64 = 1e-9;

/// A parametrised hypersurface: a chart carrying the induced metric in
/// closed form, the immersion into the ambient chart and the unit normal,
/// all written in the hypersurface coordinates.
#[derive(Debug, Clone)]
pub struct HypersurfaceSpec {
    pub chart: Chart,
    pub immersion: Vec<Expr>,
    pub normal: Vec<Expr>,
}

struct Pulled {
    iota: Vec<Jet2>,
    /// `d_iota[a][A] = ∂_a ι^A` with its derivatives.
    d_iota: Vec<Vec<Jet1>>,
    normal: Vec<Jet1>,
    gbar: Matrix<Jet1>,
    jbar: Vec<Jet1>,
}

fn pull(ambient: &AlmostHermitianStructure, spec: &HypersurfaceSpec, p: &[f64]) -> Result<Pulled> {
    let m = spec.chart.dim();
    let big = ambient.chart.dim();
    if big != m + 1 || spec.immersion.len() != big || spec.normal.len() != big {
        return Err(Error::Shape("a hypersurface has codimension one in the ambient chart".into()));
    }
    let seeds = Jet2::seeds(p)?;
    let iota = spec.immersion.iter().map(|e| e.eval(&seeds)).collect::<Result<Vec<Jet2>>>()?;
    let iota1: Vec<Jet1> = iota.iter().map(Jet2::first_order).collect();
    let x: Vec<f64> = iota.iter().map(Jet2::value).collect();
    let d_iota = (0..m).map(|a| iota.iter().map(|c| c.partial(a)).collect()).collect();
    let seeds1 = Jet1::seeds(p)?;
    let normal = spec.normal.iter().map(|e| e.eval(&seeds1)).collect::<Result<Vec<Jet1>>>()?;
    let gbar = ambient
        .chart
        .metric_jets(&x)?
        .iter()
        .map(|row| row.iter().map(|j| j.first_order().compose(&iota1)).collect())
        .collect();
    let jbar = ambient.j.eval_jets(&x)?.iter().map(|j| j.compose(&iota1)).collect();
    Ok(Pulled { iota, d_iota, normal, gbar, jbar })
}

impl Pulled {
    fn ip(&self, u: &[Jet1], v: &[Jet1]) -> Jet1 {
        let mut acc = Jet1::constant(0.0);
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                acc = acc + *ua * self.gbar[a][b] * *vb;
            }
        }
        acc
    }

    fn j(&self, v: &[Jet1]) -> Vec<Jet1> {
        let n = v.len();
        (0..n)
            .map(|a| (0..n).fold(Jet1::constant(0.0), |acc, b| acc + self.jbar[a * n + b] * v[b]))
            .collect()
    }
}

/// `(φ, ξ, η)` in hypersurface coordinates with first derivatives.
fn induced(ambient: &AlmostHermitianStructure, spec: &HypersurfaceSpec, p: &[f64]) -> Result<[Vec<Jet1>; 3]> {
    let pl = pull(ambient, spec, p)?;
    let m = spec.chart.dim();
    let g: Matrix<Jet1> = spec
        .chart
        .metric_jets(p)?
        .iter()
        .map(|r| r.iter().map(Jet2::first_order).collect())
        .collect();
    let ginv = linalg::inverse(&g)?;
    let jd: Vec<Vec<Jet1>> = pl.d_iota.iter().map(|d| pl.j(d)).collect();
    let mut phi = vec![Jet1::constant(0.0); m * m];
    for b in 0..m {
        let low: Vec<Jet1> = (0..m).map(|c| pl.ip(&pl.d_iota[c], &jd[b])).collect();
        for a in 0..m {
            phi[a * m + b] = (0..m).fold(Jet1::constant(0.0), |acc, c| acc + ginv[a][c] * low[c]);
        }
    }
    let eta: Vec<Jet1> = jd.iter().map(|v| pl.ip(v, &pl.normal)).collect();
    let mjn: Vec<Jet1> = pl.j(&pl.normal).into_iter().map(|c| -c).collect();
    let low: Vec<Jet1> = pl.d_iota.iter().map(|d| pl.ip(d, &mjn)).collect();
    let xi = (0..m)
        .map(|a| (0..m).fold(Jet1::constant(0.0), |acc, c| acc + ginv[a][c] * low[c]))
        .collect();
    Ok([phi, xi, eta])
}

impl HypersurfaceSpec {
    /// The induced almost contact metric structure on the hypersurface chart.
    pub fn structure(&self, ambient: &AlmostHermitianStructure) -> Result<ChartContact> {
        let m = self.chart.dim();
        let field = |which: usize, valence: Valence| {
            let (amb, spec) = (ambient.clone(), self.clone());
            TensorField::computed(
                valence,
                m,
                Arc::new(move |p: &[f64]| {
                    let [phi, xi, eta] = induced(&amb, &spec, p)?;
                    Ok([phi, xi, eta].into_iter().nth(which).unwrap_or_default())
                }),
            )
        };
        ChartContact::new(
            self.chart.clone(),
            field(0, Valence::Endomorphism),
            field(1, Valence::Vector),
            field(2, Valence::OneForm),
        )
    }
}

#[derive(Debug, Clone)]
pub struct HypersurfaceReport {
    pub structure: ChartContact,
    /// Weingarten operator `A^c_a` at each sample point.
    pub weingarten: Vec<Matrix<f64>>,
    /// `trace(A)/dim` at each sample point.
    pub beta: Vec<f64>,
    /// Largest `|A − βI|` entry.
    pub umbilicity_residual: f64,
    /// Largest `|h(X, ξ) − η(AX)|` over sampled `X`.
    pub h_xi_residual: f64,
    /// Largest `|ι*ḡ − g|` entry.
    pub metric_residual: f64,
    pub tolerance: f64,
}

impl HypersurfaceReport {
    pub fn umbilical(&self) -> bool {
        self.umbilicity_residual <= self.tolerance
    }

    pub fn contact(&self) -> AlmostContactStructure {
        AlmostContactStructure::Chart(self.structure.clone())
    }
}

/// Induces the structure and measures the Weingarten operator at the sample
/// points. The ambient structure must be Kähler at the image points.
pub fn induce_hypersurface(
    ambient: &AlmostHermitianStructure,
    spec: &HypersurfaceSpec,
    samples: &SampleSet,
    tol: f64,
) -> Result<HypersurfaceReport> {
    let m = spec.chart.dim();
    let structure = spec.structure(ambient)?;
    let mut rep = HypersurfaceReport {
        structure: structure.clone(),
        weingarten: Vec::new(),
        beta: Vec::new(),
        umbilicity_residual: 0.0,
        h_xi_residual: 0.0,
        metric_residual: 0.0,
        tolerance: tol,
    };
    for (p, vs) in samples.points.iter().zip(&samples.vectors) {
        let pl = pull(ambient, spec, p)?;
        let x: Vec<f64> = pl.iota.iter().map(Jet2::value).collect();
        let kaehler = ambient.tensors_at(&x)?;
        let nabla_j = kaehler.nabla_phi.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
        if nabla_j > tol {
            return Err(Error::NotKaehler { residual: nabla_j });
        }
        let val = |v: &[Jet1]| v.iter().map(Jet1::value).collect::<Vec<f64>>();
        let gbar: Matrix<f64> = pl.gbar.iter().map(|r| val(r)).collect();
        let di: Vec<Vec<f64>> = pl.d_iota.iter().map(|d| val(d)).collect();
        let nv = val(&pl.normal);
        let norm2 = linalg::bilinear(&gbar, &nv, &nv);
        if libm::fabs(norm2 - 1.0) > EMBEDDING_TOL {
            return Err(Error::NonUnitNormal { norm: libm::sqrt(norm2) });
        }
        let pullback: Matrix<f64> = di.iter().map(|u| di.iter().map(|v| linalg::bilinear(&gbar, u, v)).collect()).collect();
        if !linalg::is_positive_definite(&pullback)? {
            return Err(Error::RankDeficient { point: p.clone() });
        }
        let normality = di.iter().map(|u| libm::fabs(linalg::bilinear(&gbar, u, &nv))).fold(0.0, f64::max);
        if normality > EMBEDDING_TOL {
            return Err(Error::NotNormal { residual: normality });
        }
        let g = spec.chart.metric_at(p)?;
        for a in 0..m {
            for b in 0..m {
                rep.metric_residual = rep.metric_residual.max(libm::fabs(pullback[a][b] - g[a][b]));
            }
        }
        if rep.metric_residual > EMBEDDING_TOL {
            return Err(Error::MetricMismatch { residual: rep.metric_residual });
        }
        let ginv = linalg::inverse(&g)?;
        let geo = LocalGeometry::at(&ambient.chart, &x)?;
        // ∇̃_a N = ∂_a(N∘ι) + Γ̄(∂_a ι, N)
        let dn: Vec<Vec<f64>> = (0..m)
            .map(|a| {
                let gam = geo.connection(&di[a], &nv);
                pl.normal.iter().zip(gam).map(|(n, c)| n.d(a) + c).collect()
            })
            .collect();
        let mut amat = vec![vec![0.0; m]; m];
        for a in 0..m {
            let low: Vec<f64> = di.iter().map(|u| -linalg::bilinear(&gbar, u, &dn[a])).collect();
            for c in 0..m {
                amat[c][a] = linalg::dot(&ginv[c], &low);
            }
        }
        let beta = (0..m).map(|i| amat[i][i]).sum::<f64>() / m as f64;
        for (a, row) in amat.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let target = if a == b { beta } else { 0.0 };
                rep.umbilicity_residual = rep.umbilicity_residual.max(libm::fabs(v - target));
            }
        }
        // h_ab = ḡ(∂_a∂_b ι + Γ̄(∂_a ι, ∂_b ι), N)
        let h: Matrix<f64> = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| {
                        let gam = geo.connection(&di[a], &di[b]);
                        let acc: Vec<f64> = pl.iota.iter().zip(gam).map(|(i, c)| i.hessian(a, b) + c).collect();
                        linalg::bilinear(&gbar, &acc, &nv)
                    })
                    .collect()
            })
            .collect();
        let st = structure.tensors_at(p)?;
        for v in vs {
            let hx = linalg::bilinear(&h, v, &st.xi);
            let ax = linalg::mat_vec(&amat, v);
            rep.h_xi_residual = rep.h_xi_residual.max(libm::fabs(hx - st.eta_of(&ax)));
        }
        rep.weingarten.push(amat);
        rep.beta.push(beta);
    }
    Ok(rep)
}
