//! Levi-Civita connection and curvature of a chart metric at a point.
//!
//! Index conventions: `gamma[k][i][j] = Γ^k_ij`, so that
//! `∇_{∂_i} ∂_j = Γ^k_ij ∂_k`; `riem` holds `R(∂_i, ∂_j, ∂_k, ∂_l)` in the
//! crate-wide sign convention.

use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, TensorField, Valence};
use crate::error::{Error, Result};
use crate::jet::Jet1;
use crate::linalg::{self, Matrix};

type T3 = Vec<Vec<Vec<f64>>>;

/// Connection and curvature data of a chart metric at one point.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    pub point: Vec<f64>,
    pub g: Matrix<f64>,
    pub ginv: Matrix<f64>,
    /// `dg[m][i][j] = ∂_m g_ij`
    pub dg: T3,
    /// `gamma[k][i][j] = Γ^k_ij`
    pub gamma: T3,
    /// `dgamma[m][k][i][j] = ∂_m Γ^k_ij`
    pub dgamma: Vec<T3>,
    riem: Vec<f64>,
}

impl LocalGeometry {
    pub fn at(chart: &Chart, p: &[f64]) -> Result<LocalGeometry> {
        let n = chart.dim();
        let gj = chart.metric_jets(p)?;
        let g: Matrix<f64> = gj.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect();
        let ginv = linalg::inverse(&g)?;
        let mut dg = vec![vec![vec![0.0; n]; n]; n];
        // ddg[m][a][i][j] = ∂_m ∂_a g_ij
        let mut ddg = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    dg[m][i][j] = gj[i][j].d(m);
                    for a in 0..n {
                        ddg[m][a][i][j] = gj[i][j].hessian(m, a);
                    }
                }
            }
        }
        // first-kind symbols Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), and ∂_m of them
        let mut low = vec![vec![vec![0.0; n]; n]; n];
        let mut dlow = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    low[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                    for m in 0..n {
                        dlow[m][l][i][j] =
                            0.5 * (ddg[m][i][j][l] + ddg[m][j][i][l] - ddg[m][l][i][j]);
                    }
                }
            }
        }
        let mut gamma = vec![vec![vec![0.0; n]; n]; n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    gamma[k][i][j] = (0..n).map(|l| ginv[k][l] * low[l][i][j]).sum();
                }
            }
        }
        // ∂_m g^{kl} = −g^{ka} ∂_m g_ab g^{bl}
        let mut dginv = vec![vec![vec![0.0; n]; n]; n];
        for m in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            s += ginv[k][a] * dg[m][a][b] * ginv[b][l];
                        }
                    }
                    dginv[m][k][l] = -s;
                }
            }
        }
        let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        dgamma[m][k][i][j] = (0..n)
                            .map(|l| dginv[m][k][l] * low[l][i][j] + ginv[k][l] * dlow[m][l][i][j])
                            .sum();
                    }
                }
            }
        }
        // R^l_ijk = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
        let mut r13 = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                        for m in 0..n {
                            s += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                        }
                        r13[((i * n + j) * n + k) * n + l] = s;
                    }
                }
            }
        }
        let mut riem = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let base = ((i * n + j) * n + k) * n;
                        riem[base + l] = -(0..n).map(|m| g[l][m] * r13[base + m]).sum::<f64>();
                    }
                }
            }
        }
        Ok(LocalGeometry {
            point: p.to_vec(),
            g,
            ginv,
            dg,
            gamma,
            dgamma,
            riem,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// `R(∂_i, ∂_j, ∂_k, ∂_l)`
    pub fn riem(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim();
        self.riem[((i * n + j) * n + k) * n + l]
    }

    /// Flat `dim⁴` array of `R(∂_i, ∂_j, ∂_k, ∂_l)`.
    pub fn riem_array(&self) -> &[f64] {
        &self.riem
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::bilinear(&self.g, x, y)
    }

    /// `R(X, Y, Z, W)`
    pub fn curvature(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        contract4(&self.riem, self.dim(), x, y, z, w)
    }

    /// The vector `R_{XY} Z`.
    pub fn curvature_operator(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let lowered: Vec<f64> = (0..n)
            .map(|l| {
                let mut e = vec![0.0; n];
                e[l] = 1.0;
                -self.curvature(x, y, z, &e)
            })
            .collect();
        linalg::mat_vec(&self.ginv, &lowered)
    }

    /// `∇_X Y` for constant-coefficient `Y` in this chart.
    pub fn connection(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += self.gamma[k][i][j] * x[i] * y[j];
                    }
                }
                s
            })
            .collect()
    }

    /// `(∇_{∂_i} V)^k = ∂_i V^k + Γ^k_ij V^j` for a vector field given as jets.
    pub fn nabla_vector(&self, v: &[Jet1]) -> Matrix<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| v[k].d(i) + (0..n).map(|j| self.gamma[k][i][j] * v[j].value()).sum::<f64>())
                    .collect()
            })
            .collect()
    }

    /// `(∇_{∂_i} θ)_j = ∂_i θ_j − Γ^k_ij θ_k`
    pub fn nabla_oneform(&self, t: &[Jet1]) -> Matrix<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| t[j].d(i) - (0..n).map(|k| self.gamma[k][i][j] * t[k].value()).sum::<f64>())
                    .collect()
            })
            .collect()
    }

    /// `(∇_{∂_i} T)^a_b = ∂_i T^a_b + Γ^a_ik T^k_b − T^a_k Γ^k_ib`, returned as
    /// `out[i][a][b]`; `t` is row-major.
    pub fn nabla_endomorphism(&self, t: &[Jet1]) -> Vec<Matrix<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| {
                                let mut s = t[a * n + b].d(i);
                                for k in 0..n {
                                    s += self.gamma[a][i][k] * t[k * n + b].value();
                                    s -= t[a * n + k].value() * self.gamma[k][i][b];
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// `(∇_{∂_i} g)_jk`; zero for the Levi-Civita connection.
    pub fn nabla_metric(&self) -> Vec<Matrix<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                let mut s = self.dg[i][j][k];
                                for m in 0..n {
                                    s -= self.gamma[m][i][j] * self.g[m][k];
                                    s -= self.gamma[m][i][k] * self.g[j][m];
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Ricci tensor `Σ_a R(E_a, X, E_a, Y)` over a Gram–Schmidt orthonormal frame.
    pub fn ricci(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let frame = linalg::gram_schmidt(&self.g)?;
        Ok(frame.iter().map(|e| self.curvature(e, x, e, y)).sum())
    }
}

/// `T(x, y, z, w)` for a flat `n⁴` array, skipping zero components.
pub fn contract4<S: crate::scalar::Ring>(t: &[S], n: usize, x: &[S], y: &[S], z: &[S], w: &[S]) -> S
where
    S: PartialEq,
{
    let zero = S::zero();
    let mut acc = S::zero();
    for (i, xi) in x.iter().enumerate() {
        if *xi == zero {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if *yj == zero {
                continue;
            }
            let xy = xi.mul(yj);
            for (k, zk) in z.iter().enumerate() {
                if *zk == zero {
                    continue;
                }
                let xyz = xy.mul(zk);
                let base = ((i * n + j) * n + k) * n;
                let mut inner = S::zero();
                for (l, wl) in w.iter().enumerate() {
                    if *wl != zero {
                        inner = inner.add(&t[base + l].mul(wl));
                    }
                }
                acc = acc.add(&xyz.mul(&inner));
            }
        }
    }
    acc
}

/// `christoffel`: the `Γ^k_ij` of `chart` at `p`.
pub fn christoffel(chart: &Chart, p: &[f64]) -> Result<T3> {
    Ok(LocalGeometry::at(chart, p)?.gamma)
}

/// `curvature`: the `(0,4)` tensor of `chart` at `p` as a flat `dim⁴` array.
pub fn curvature(chart: &Chart, p: &[f64]) -> Result<Vec<f64>> {
    Ok(LocalGeometry::at(chart, p)?.riem)
}

/// Covariant derivative `∇_X f` at `p`, in the valence of `f` (row-major for
/// endomorphisms).
pub fn covariant_derivative(chart: &Chart, f: &TensorField, p: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let geo = LocalGeometry::at(chart, p)?;
    let jets = f.eval_jets(p)?;
    let n = chart.dim();
    if x.len() != n || f.dim() != n {
        return Err(Error::Shape("covariant derivative: dimension mismatch".into()));
    }
    Ok(match f.valence() {
        Valence::Vector => along(&geo.nabla_vector(&jets), x),
        Valence::OneForm => along(&geo.nabla_oneform(&jets), x),
        Valence::Endomorphism => {
            let d = geo.nabla_endomorphism(&jets);
            let mut out = vec![0.0; n * n];
            for (i, xi) in x.iter().enumerate() {
                for a in 0..n {
                    for b in 0..n {
                        out[a * n + b] += xi * d[i][a][b];
                    }
                }
            }
            out
        }
    })
}

/// `Σ_i x^i rows[i]`
pub fn along(rows: &Matrix<f64>, x: &[f64]) -> Vec<f64> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for (xi, row) in x.iter().zip(rows) {
        for (o, r) in out.iter_mut().zip(row) {
            *o += xi * r;
        }
    }
    out
}

/// `(L_ξ g)(X, Y) = g(∇_X ξ, Y) + g(X, ∇_Y ξ)`
pub fn lie_derivative_metric(chart: &Chart, xi: &TensorField, p: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    let geo = LocalGeometry::at(chart, p)?;
    let d = geo.nabla_vector(&xi.eval_jets(p)?);
    Ok(geo.inner(&along(&d, x), y) + geo.inner(x, &along(&d, y)))
}

/// `dη(X, Y) = X^i Y^j (∂_i η_j − ∂_j η_i)`, without a factor ½.
pub fn exterior_d_oneform(eta: &TensorField, p: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    let e = eta.eval_jets(p)?;
    Ok(exterior_d_matrix(&e)
        .iter()
        .enumerate()
        .map(|(i, row)| x[i] * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
        .sum())
}

/// `dη_ij = ∂_i η_j − ∂_j η_i`
pub fn exterior_d_matrix(eta: &[Jet1]) -> Matrix<f64> {
    let n = eta.len();
    (0..n)
        .map(|i| (0..n).map(|j| eta[j].d(i) - eta[i].d(j)).collect())
        .collect()
}

/// `ricci` at `p`.
pub fn ricci(chart: &Chart, p: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    LocalGeometry::at(chart, p)?.ricci(x, y)
}

/// Coefficient of `η ∧ (dη)^n` on the coordinate basis, up to a fixed positive
/// normalisation: `Σ_σ sgn(σ) η_{σ0} dη_{σ1σ2} ⋯ dη_{σ(2n-1)σ(2n)}`.
pub fn contact_volume<S: crate::scalar::Ring>(eta: &[S], deta: &[Vec<S>]) -> S {
    let m = eta.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut acc = S::zero();
    permute(&mut perm, 0, true, &mut |p, even| {
        if m % 2 == 0 {
            return;
        }
        let mut term = eta[p[0]].clone();
        for k in 0..(m - 1) / 2 {
            term = term.mul(&deta[p[1 + 2 * k]][p[2 + 2 * k]]);
        }
        acc = if even { acc.add(&term) } else { acc.sub(&term) };
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, even: bool, f: &mut impl FnMut(&[usize], bool)) {
    if k == p.len() {
        f(p, even);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, if i == k { even } else { !even }, f);
        p.swap(k, i);
    }
}
