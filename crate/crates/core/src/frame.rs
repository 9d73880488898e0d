//! Left-invariant geometry on a Lie group from its structure constants,
//! computed exactly over the rationals.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Rational;

type T3 = Vec<Vec<Vec<Rational>>>;

/// Almost contact tensors in frame components: `phi[a][b]` is the `E_a`
/// component of `φ E_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameContact {
    pub phi: Matrix<Rational>,
    pub xi: Vec<Rational>,
    pub eta: Vec<Rational>,
}

/// Invariant frame `E_1..E_n` with `[E_i, E_j] = Σ_k c^k_ij E_k` and a
/// constant metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameGeometry {
    names: Vec<String>,
    c: T3,
    g: Matrix<Rational>,
    ginv: Matrix<Rational>,
    conn: T3,
    riem: Vec<Rational>,
    contact: Option<FrameContact>,
}

impl FrameGeometry {
    /// `c[k][i][j] = c^k_ij`.
    pub fn new(names: Vec<String>, c: T3, g: Matrix<Rational>) -> Result<FrameGeometry> {
        let n = names.len();
        let shape_ok = c.len() == n && c.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n));
        if !shape_ok || g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("frame of dimension {n}: c must be {n}x{n}x{n} and g {n}x{n}")));
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if c[k][i][j] != -c[k][j][i] {
                        return Err(Error::StructureConstants(format!(
                            "c[{}][{}][{}] is not antisymmetric in its lower indices",
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for p in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += c[m][i][j] * c[p][m][k] + c[m][j][k] * c[p][m][i] + c[m][k][i] * c[p][m][j];
                        }
                        if !s.is_zero() {
                            return Err(Error::StructureConstants(format!(
                                "Jacobi identity fails for (E{}, E{}, E{})",
                                i + 1,
                                j + 1,
                                k + 1
                            )));
                        }
                    }
                }
            }
        }
        if !linalg::is_positive_definite(&g)? {
            return Err(Error::Invalid("frame metric is not symmetric positive definite".into()));
        }
        let ginv = linalg::inverse(&g)?;
        // C_abc = g([E_a, E_b], E_c)
        let cl = |a: usize, b: usize, cc: usize| -> Rational {
            (0..n).fold(Rational::zero(), |acc, m| acc + c[m][a][b] * g[m][cc])
        };
        let mut conn = vec![vec![vec![Rational::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let low: Vec<Rational> = (0..n)
                    .map(|k| (cl(i, j, k) - cl(j, k, i) + cl(k, i, j)) / Rational::from_integer(2))
                    .collect();
                conn[i][j] = linalg::mat_vec(&ginv, &low);
            }
        }
        let mut fg = FrameGeometry { names, c, g, ginv, conn, riem: Vec::new(), contact: None };
        fg.riem = fg.compute_curvature();
        Ok(fg)
    }

    /// Abelian group with constant metric `g`.
    pub fn abelian(names: Vec<String>, g: Matrix<Rational>) -> Result<FrameGeometry> {
        let n = names.len();
        FrameGeometry::new(names, vec![vec![vec![Rational::zero(); n]; n]; n], g)
    }

    pub fn with_contact(mut self, contact: FrameContact) -> Result<FrameGeometry> {
        let n = self.dim();
        if contact.phi.len() != n
            || contact.phi.iter().any(|r| r.len() != n)
            || contact.xi.len() != n
            || contact.eta.len() != n
        {
            return Err(Error::Shape(format!("almost contact tensors must have dimension {n}")));
        }
        self.contact = Some(contact);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn metric(&self) -> &Matrix<Rational> {
        &self.g
    }

    pub fn metric_inverse(&self) -> &Matrix<Rational> {
        &self.ginv
    }

    pub fn contact(&self) -> Option<&FrameContact> {
        self.contact.as_ref()
    }

    /// `c^k_ij`
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Rational {
        self.c[k][i][j]
    }

    /// Coefficients of `[E_i, E_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| self.c[k][i][j]).collect()
    }

    /// `frame_connection`: coefficients of `∇_{E_i} E_j`.
    pub fn connection(&self, i: usize, j: usize) -> &[Rational] {
        &self.conn[i][j]
    }

    /// `∇_{E_i} V` for a constant-coefficient field `V`.
    pub fn nabla(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (m, vm) in v.iter().enumerate() {
            if vm.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&self.conn[i][m]) {
                *o += vm * c;
            }
        }
        out
    }

    /// `frame_curvature`: `R(E_i, E_j, E_k, E_l)`.
    pub fn curvature(&self, i: usize, j: usize, k: usize, l: usize) -> Rational {
        let n = self.dim();
        self.riem[((i * n + j) * n + k) * n + l]
    }

    /// Flat `dim⁴` array of curvature components.
    pub fn curvature_array(&self) -> &[Rational] {
        &self.riem
    }

    fn compute_curvature(&self) -> Vec<Rational> {
        let n = self.dim();
        let mut riem = vec![Rational::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // R_{E_i E_j} E_k = ∇_i ∇_j E_k − ∇_j ∇_i E_k − ∇_{[E_i,E_j]} E_k
                    let mut v = self.nabla(i, &self.conn[j][k]);
                    let w = self.nabla(j, &self.conn[i][k]);
                    for (a, b) in v.iter_mut().zip(&w) {
                        *a -= b;
                    }
                    for m in 0..n {
                        let cm = self.c[m][i][j];
                        if cm.is_zero() {
                            continue;
                        }
                        for (a, b) in v.iter_mut().zip(&self.conn[m][k]) {
                            *a -= cm * b;
                        }
                    }
                    let lowered = linalg::mat_vec(&self.g, &v);
                    for l in 0..n {
                        riem[((i * n + j) * n + k) * n + l] = -lowered[l];
                    }
                }
            }
        }
        riem
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// The generalized Heisenberg group `H(2,1)` with frame
/// `(X1, X2, Y1, Y2, xi)`, `[X_i, Y_j] = 2 δ_ij ξ`, orthonormal metric and the
/// almost contact structure whose `φ` is rotated by the angle with cosine `c`
/// and sine `s`.
pub fn heisenberg_h21(c: Rational, s: Rational) -> Result<FrameGeometry> {
    if c * c + s * s != Rational::one() {
        return Err(Error::NotPythagorean { c: format!("{c}"), s: format!("{s}") });
    }
    let names = ["X1", "X2", "Y1", "Y2", "xi"].iter().map(|s| String::from(*s)).collect();
    let z = Rational::zero();
    let two = Rational::from_integer(2);
    let mut cs = vec![vec![vec![z; 5]; 5]; 5];
    cs[4][0][2] = two;
    cs[4][2][0] = -two;
    cs[4][1][3] = two;
    cs[4][3][1] = -two;
    let fg = FrameGeometry::new(names, cs, linalg::identity(5))?;
    let mut phi = vec![vec![z; 5]; 5];
    // φX1 = cY1 + sY2, φX2 = sY1 − cY2, φY1 = −cX1 − sX2, φY2 = −sX1 + cX2
    phi[2][0] = c;
    phi[3][0] = s;
    phi[2][1] = s;
    phi[3][1] = -c;
    phi[0][2] = -c;
    phi[1][2] = -s;
    phi[0][3] = -s;
    phi[1][3] = c;
    let mut unit = vec![z; 5];
    unit[4] = Rational::one();
    fg.with_contact(FrameContact { phi, xi: unit.clone(), eta: unit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use alloc::collections::BTreeMap;

    const X1: usize = 0;
    const X2: usize = 1;
    const Y1: usize = 2;
    const Y2: usize = 3;
    const XI: usize = 4;

    fn h() -> FrameGeometry {
        heisenberg_h21(ratio(3, 5), ratio(4, 5)).unwrap()
    }

    fn unit(i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 5];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn connection_values() {
        let h = h();
        assert_eq!(h.connection(X1, Y1), unit(XI).as_slice());
        let minus_xi: Vec<Rational> = unit(XI).iter().map(|x| -x).collect();
        assert_eq!(h.connection(Y1, X1), minus_xi.as_slice());
        let minus_y1: Vec<Rational> = unit(Y1).iter().map(|x| -x).collect();
        assert_eq!(h.connection(X1, XI), minus_y1.as_slice());
        assert_eq!(h.connection(XI, X1), minus_y1.as_slice());
    }

    #[test]
    fn abelian_is_flat() {
        let names = ["a", "b", "c"].iter().map(|s| String::from(*s)).collect();
        let g = vec![
            vec![ratio(2, 1), ratio(1, 2), ratio(0, 1)],
            vec![ratio(1, 2), ratio(1, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(3, 1)],
        ];
        let f = FrameGeometry::abelian(names, g).unwrap();
        assert!(f.curvature_array().iter().all(Zero::is_zero));
        for i in 0..3 {
            for j in 0..3 {
                assert!(f.connection(i, j).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn curvature_table() {
        let h = h();
        assert_eq!(h.curvature(X1, X2, Y1, Y2), ratio(-1, 1));
        assert_eq!(h.curvature(X1, Y1, X2, Y2), ratio(-2, 1));
        assert_eq!(h.curvature(X1, Y2, X2, Y1), ratio(-1, 1));
        for (x, y) in [(X1, Y1), (X2, Y2)] {
            assert_eq!(h.curvature(x, y, x, y), ratio(-3, 1));
            assert_eq!(h.curvature(x, XI, x, XI), ratio(1, 1));
            assert_eq!(h.curvature(y, XI, y, XI), ratio(1, 1));
        }
        // every other component is forced by the symmetries
        let mut known: BTreeMap<[usize; 4], Rational> = BTreeMap::new();
        let mut seed = |q: [usize; 4], v: Rational| {
            let [a, b, c, d] = q;
            for (qq, s) in [
                ([a, b, c, d], 1),
                ([b, a, c, d], -1),
                ([a, b, d, c], -1),
                ([b, a, d, c], 1),
            ] {
                let [p, q2, r, t] = qq;
                known.insert([p, q2, r, t], v * Rational::from_integer(s));
                known.insert([r, t, p, q2], v * Rational::from_integer(s));
            }
        };
        seed([X1, X2, Y1, Y2], ratio(-1, 1));
        seed([X1, Y1, X2, Y2], ratio(-2, 1));
        seed([X1, Y2, X2, Y1], ratio(-1, 1));
        for (x, y) in [(X1, Y1), (X2, Y2)] {
            seed([x, y, x, y], ratio(-3, 1));
            seed([x, XI, x, XI], ratio(1, 1));
            seed([y, XI, y, XI], ratio(1, 1));
        }
        let mut nonzero = 0;
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        let r = h.curvature(i, j, k, l);
                        let want = known.get(&[i, j, k, l]).copied().unwrap_or_else(Rational::zero);
                        assert_eq!(r, want, "R({i},{j},{k},{l})");
                        nonzero += usize::from(!r.is_zero());
                    }
                }
            }
        }
        assert_eq!(nonzero, 48);
    }

    #[test]
    fn exact_symmetries_and_metricity() {
        let h = h();
        let n = 5;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = linalg::bilinear(h.metric(), h.connection(i, j), &unit(k))
                        + linalg::bilinear(h.metric(), &unit(j), h.connection(i, k));
                    assert!(lhs.is_zero());
                    for l in 0..n {
                        let r = h.curvature(i, j, k, l);
                        assert_eq!(r, -h.curvature(j, i, k, l));
                        assert_eq!(r, -h.curvature(i, j, l, k));
                        assert_eq!(r, h.curvature(k, l, i, j));
                        assert!((r + h.curvature(j, k, i, l) + h.curvature(k, i, j, l)).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn h21_structure_tensors() {
        let h0 = heisenberg_h21(ratio(1, 1), ratio(0, 1)).unwrap();
        let phi0 = &h0.contact().unwrap().phi;
        assert_eq!(linalg::mat_vec(phi0, &unit(X1)), unit(Y1));
        let minus_x1: Vec<Rational> = unit(X1).iter().map(|x| -x).collect();
        assert_eq!(linalg::mat_vec(phi0, &unit(Y1)), minus_x1);

        let h = h();
        let ct = h.contact().unwrap();
        let phi2 = linalg::mat_mul(&ct.phi, &ct.phi);
        for a in 0..5 {
            for b in 0..5 {
                let want = -Rational::from_integer(i128::from(a == b)) + ct.xi[a] * ct.eta[b];
                assert_eq!(phi2[a][b], want);
            }
        }
        for a in 0..5 {
            for b in 0..5 {
                let pa = linalg::mat_vec(&ct.phi, &unit(a));
                let pb = linalg::mat_vec(&ct.phi, &unit(b));
                let lhs = linalg::bilinear(h.metric(), &pa, &pb);
                let rhs = h.metric()[a][b] - ct.eta[a] * ct.eta[b];
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            heisenberg_h21(ratio(1, 2), ratio(1, 2)),
            Err(Error::NotPythagorean { .. })
        ));
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| String::from(*s)).collect();
        let z = Rational::zero();
        let mut c = vec![vec![vec![z; 3]; 3]; 3];
        c[2][0][1] = Rational::one();
        assert!(matches!(
            FrameGeometry::new(names.clone(), c.clone(), linalg::identity(3)),
            Err(Error::StructureConstants(_))
        ));
        c[2][1][0] = -Rational::one();
        assert!(FrameGeometry::new(names.clone(), c.clone(), linalg::identity(3)).is_ok());
        // [a,b] = c, [c,a] = a: Jacobi (a,b,c) fails
        c[0][2][0] = Rational::one();
        c[0][0][2] = -Rational::one();
        assert!(matches!(
            FrameGeometry::new(names, c, linalg::identity(3)),
            Err(Error::StructureConstants(_))
        ));
    }
}
