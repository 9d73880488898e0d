//! Built-in example geometries, addressable by name.
//!
//! Parameterised names: `h21:c,s` and `h21_chart:c,s` take a rational
//! Pythagorean pair (default `3/5,4/5`); `cone_of:<name>` builds the cone
//! over a chart-carried contact target. The forms `h21(c,s)` and
//! `cone_of(<name>)` are accepted too.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{Chart, Interval, TensorField, Valence};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::frame::{heisenberg_h21, FrameGeometry};
use crate::scalar::{ratio, Rational};
use crate::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact};

use super::cone::build_cone;
use super::hypersurface::HypersurfaceSpec;
use super::submersion::{hopf_pair, SubmersionPair};
use super::warped::{build_r_warped_contact, RWarped};

/// A resolved registry entry.
#[derive(Debug, Clone)]
pub enum Target {
    Contact(AlmostContactStructure),
    Hermitian(AlmostHermitianStructure),
    /// A circle submersion; its total space is an almost contact structure.
    Submersion(SubmersionPair),
}

impl Target {
    /// The almost contact structure the target carries, if any.
    pub fn contact(&self) -> Option<AlmostContactStructure> {
        match self {
            Target::Contact(s) => Some(s.clone()),
            Target::Submersion(sp) => Some(sp.contact()),
            Target::Hermitian(_) => None,
        }
    }

    pub fn chart(&self) -> Option<&Chart> {
        match self {
            Target::Contact(AlmostContactStructure::Chart(c)) => Some(&c.chart),
            Target::Contact(AlmostContactStructure::Frame(_)) => None,
            Target::Hermitian(h) => Some(&h.chart),
            Target::Submersion(sp) => Some(&sp.total.chart),
        }
    }
}

/// Registry names with a one-line description.
pub const TARGETS: &[(&str, &str)] = &[
    ("flat3", "R^3 with the flat cosymplectic structure xi = d/dz"),
    ("flat_cosymplectic5", "R^5 = C^2 x R with the flat cosymplectic structure"),
    ("flat_c2", "C^2 = R^4 with the standard Kaehler structure"),
    ("flat_c3", "C^3 = R^6 with the standard Kaehler structure"),
    ("s2_round", "unit sphere S^2 in polar coordinates, Kaehler"),
    ("h21", "Heisenberg group H(2,1), exact invariant frame (h21:c,s)"),
    ("h21_chart", "Heisenberg group H(2,1) in its global chart (h21_chart:c,s)"),
    ("sine_cone_cos", "R x_f R^4 with f = cos z on (-pi/2, pi/2)"),
    ("sine_cone_sin", "R x_f R^4 with f = sin z on (0, pi)"),
    ("r_warped_surface", "R x_f R^2 with f = cos(theta)"),
    ("s5_in_c3", "unit sphere S^5 in C^3 with the induced structure"),
    ("ellipsoid_in_c3", "ellipsoid 2x1^2 + |z|^2 = 1 in C^3 with the induced structure"),
    ("cone_of", "metric cone over a chart-carried contact target (cone_of:<name>)"),
    ("hopf_pair", "Hopf fibration S^3 -> S^2(1/2)"),
];

fn ex(s: &str, coords: &[&str]) -> Result<Expr> {
    parse_expr(s, coords)
}

fn constant_contact(coords: &[&str], phi: &[i64], xi: &[i64]) -> Result<ChartContact> {
    let n = coords.len();
    let chart = Chart::euclidean(coords)?;
    ChartContact::new(
        chart,
        TensorField::constant(Valence::Endomorphism, n, phi)?,
        TensorField::constant(Valence::Vector, n, xi)?,
        TensorField::constant(Valence::OneForm, n, xi)?,
    )
}

/// `R³` with `φ∂x = ∂y`, `φ∂y = −∂x`, `ξ = ∂z`, `η = dz`.
pub fn flat3() -> Result<AlmostContactStructure> {
    let phi = [0, -1, 0, 1, 0, 0, 0, 0, 0];
    Ok(AlmostContactStructure::Chart(constant_contact(&["x", "y", "z"], &phi, &[0, 0, 1])?))
}

/// `R⁵` with coordinates `(x, y, u, v, z)`, `φ∂x = ∂y`, `φ∂u = ∂v`, `ξ = ∂z`.
pub fn flat_cosymplectic5() -> Result<AlmostContactStructure> {
    let mut phi = [0i64; 25];
    phi[5] = 1; // φ^y_x
    phi[1] = -1; // φ^x_y
    phi[3 * 5 + 2] = 1; // φ^v_u
    phi[2 * 5 + 3] = -1; // φ^u_v
    Ok(AlmostContactStructure::Chart(constant_contact(
        &["x", "y", "u", "v", "z"],
        &phi,
        &[0, 0, 0, 0, 1],
    )?))
}

/// `Cⁿ` with coordinates `(x1, y1, …)` and `J∂x_k = ∂y_k`.
pub fn flat_c(n: usize) -> Result<AlmostHermitianStructure> {
    let names: Vec<String> = (1..=n).flat_map(|k| [format!("x{k}"), format!("y{k}")]).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let m = 2 * n;
    let mut j = vec![0i64; m * m];
    for k in 0..n {
        j[(2 * k + 1) * m + 2 * k] = 1;
        j[2 * k * m + 2 * k + 1] = -1;
    }
    AlmostHermitianStructure::new(Chart::euclidean(&refs)?, TensorField::constant(Valence::Endomorphism, m, &j)?)
}

/// Round `S²` with `g = dθ² + sin²θ dφ²`, `J∂θ = ∂φ / sin θ`.
pub fn s2_round() -> Result<AlmostHermitianStructure> {
    let c = ["theta", "phi"];
    let chart = Chart::diagonal(
        &c,
        vec![Expr::int(1), ex("sin(theta)^2", &c)?],
        vec![Interval::open(0.0, core::f64::consts::PI), Interval::REAL_LINE],
    )?;
    let j = TensorField::endomorphism(vec![
        vec![Expr::int(0), -ex("sin(theta)", &c)?],
        vec![ex("1/sin(theta)", &c)?, Expr::int(0)],
    ])?;
    AlmostHermitianStructure::new(chart, j)
}

pub fn h21(c: Rational, s: Rational) -> Result<AlmostContactStructure> {
    Ok(AlmostContactStructure::Frame(heisenberg_h21(c, s)?))
}

const H21_COORDS: [&str; 5] = ["x1", "x2", "y1", "y2", "z"];

fn rational_expr(r: Rational) -> Result<Expr> {
    let (p, q) = (*r.numer(), *r.denom());
    let p = i64::try_from(p).map_err(|_| Error::Invalid(format!("{r} is too large")))?;
    let q = i64::try_from(q).map_err(|_| Error::Invalid(format!("{r} is too large")))?;
    Ok(if q == 1 { Expr::int(p) } else { Expr::ratio(p, q) })
}

/// The frame `X1 = 2∂x1`, `X2 = 2∂x2`, `Y_i = 2(∂y_i + x_i ∂z)`, `ξ = 2∂z` of
/// the global chart as columns of component expressions.
fn h21_frame_exprs() -> Result<Vec<Vec<Expr>>> {
    let c = &H21_COORDS;
    let z = Expr::int(0);
    let two = Expr::int(2);
    Ok(vec![
        vec![two.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), two.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), two.clone(), z.clone(), ex("2*x1", c)?],
        vec![z.clone(), z.clone(), z.clone(), two.clone(), ex("2*x2", c)?],
        vec![z.clone(), z.clone(), z.clone(), z, two],
    ])
}

/// Components of the frame vectors `X1, X2, Y1, Y2, ξ` at a chart point.
pub fn h21_chart_frame(p: &[f64]) -> Result<Vec<Vec<f64>>> {
    h21_frame_exprs()?.iter().map(|v| v.iter().map(|e| e.eval(p)).collect()).collect()
}

/// `H(2,1)` in the global chart `(x1, x2, y1, y2, z)` with
/// `η = ½(dz − x1 dy1 − x2 dy2)` and `g = ¼ Σ (dx_i² + dy_i²) + η⊗η`.
pub fn h21_chart(c: Rational, s: Rational) -> Result<ChartContact> {
    let frame: FrameGeometry = heisenberg_h21(c, s)?;
    let coords = &H21_COORDS;
    let eta = vec![
        Expr::int(0),
        Expr::int(0),
        ex("-x1/2", coords)?,
        ex("-x2/2", coords)?,
        Expr::ratio(1, 2),
    ];
    let mut metric = vec![vec![Expr::int(0); 5]; 5];
    for i in 0..5 {
        for j in i..5 {
            let mut e = eta[i].clone() * eta[j].clone();
            if i == j && i < 4 {
                e = Expr::ratio(1, 4) + e;
            }
            metric[j][i] = e.clone();
            metric[i][j] = e;
        }
    }
    let chart = Chart::new(coords.iter().map(|s| s.to_string()).collect(), metric, vec![Interval::REAL_LINE; 5])?;
    let e = h21_frame_exprs()?;
    // coframe rows: ½dx1, ½dx2, ½dy1, ½dy2, η
    let half = Expr::ratio(1, 2);
    let mut coframe = vec![vec![Expr::int(0); 5]; 5];
    for (a, row) in coframe.iter_mut().enumerate().take(4) {
        row[a] = half.clone();
    }
    coframe[4] = eta.clone();
    let ct = frame.contact().ok_or(Error::FrameCarrier)?;
    let mut phi = vec![Expr::int(0); 25];
    for i in 0..5 {
        for j in 0..5 {
            let mut acc = Expr::int(0);
            for a in 0..5 {
                for b in 0..5 {
                    let v = ct.phi[a][b];
                    if v == ratio(0, 1) || e[a][i].is_zero() || coframe[b][j].is_zero() {
                        continue;
                    }
                    acc = acc + rational_expr(v)? * e[a][i].clone() * coframe[b][j].clone();
                }
            }
            phi[i * 5 + j] = acc;
        }
    }
    let xi = TensorField::constant(Valence::Vector, 5, &[0, 0, 0, 0, 2])?;
    ChartContact::new(
        chart,
        TensorField::from_exprs(Valence::Endomorphism, 5, phi)?,
        xi,
        TensorField::from_exprs(Valence::OneForm, 5, eta)?,
    )
}

/// Sine-cone `ℝ⁴ × I` with `g = dz² + f(z)²(dx² + dy² + du² + dv²)`,
/// `ξ = ∂z` and `φ∂x = ∂y`, `φ∂u = ∂v`.
pub fn sine_cone(sine: bool) -> Result<RWarped> {
    let fiber = AlmostHermitianStructure::new(
        Chart::euclidean(&["x", "y", "u", "v"])?,
        TensorField::constant(Valence::Endomorphism, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0])?,
    )?;
    let pi = core::f64::consts::PI;
    let (f, dom) = if sine {
        (ex("sin(z)", &["z"])?, Interval::open(0.0, pi))
    } else {
        (ex("cos(z)", &["z"])?, Interval::open(-pi / 2.0, pi / 2.0))
    };
    build_r_warped_contact(&fiber, &f, "z", dom)
}

/// `ℝ ×_{cos θ} ℝ²` over the flat Kähler plane.
pub fn r_warped_surface() -> Result<RWarped> {
    let fiber = AlmostHermitianStructure::new(
        Chart::euclidean(&["x", "y"])?,
        TensorField::constant(Valence::Endomorphism, 2, &[0, -1, 1, 0])?,
    )?;
    let pi = core::f64::consts::PI;
    build_r_warped_contact(&fiber, &ex("cos(theta)", &["theta"])?, "theta", Interval::open(-pi / 2.0, pi / 2.0))
}

const SPHERE_COORDS: [&str; 5] = ["a", "b", "q1", "q2", "q3"];

fn sphere_domain() -> Vec<Interval> {
    vec![
        Interval::open(0.3, 1.27),
        Interval::open(0.3, 1.27),
        Interval::REAL_LINE,
        Interval::REAL_LINE,
        Interval::REAL_LINE,
    ]
}

fn parse_all(items: &[&str], coords: &[&str]) -> Result<Vec<Expr>> {
    items.iter().map(|s| ex(s, coords)).collect()
}

/// `S⁵ ⊂ ℂ³` via `(cos a e^{i q1}, sin a cos b e^{i q2}, sin a sin b e^{i q3})`
/// with the outward unit normal.
pub fn s5_spec() -> Result<HypersurfaceSpec> {
    let c = &SPHERE_COORDS;
    let chart = Chart::diagonal(
        c,
        parse_all(&["1", "sin(a)^2", "cos(a)^2", "sin(a)^2*cos(b)^2", "sin(a)^2*sin(b)^2"], c)?,
        sphere_domain(),
    )?;
    let immersion = parse_all(
        &[
            "cos(a)*cos(q1)",
            "cos(a)*sin(q1)",
            "sin(a)*cos(b)*cos(q2)",
            "sin(a)*cos(b)*sin(q2)",
            "sin(a)*sin(b)*cos(q3)",
            "sin(a)*sin(b)*sin(q3)",
        ],
        c,
    )?;
    Ok(HypersurfaceSpec { chart, normal: immersion.clone(), immersion })
}

/// The ellipsoid `2x1² + y1² + |z2|² + |z3|² = 1` in the same parameters.
pub fn ellipsoid_spec() -> Result<HypersurfaceSpec> {
    let c = &SPHERE_COORDS;
    let mut metric = vec![vec![Expr::int(0); 5]; 5];
    metric[0][0] = ex("sin(a)^2*(cos(q1)^2/2 + sin(q1)^2) + cos(a)^2", c)?;
    metric[0][2] = ex("-sin(a)*cos(a)*sin(q1)*cos(q1)/2", c)?;
    metric[1][1] = ex("sin(a)^2", c)?;
    metric[2][2] = ex("cos(a)^2*(sin(q1)^2/2 + cos(q1)^2)", c)?;
    metric[3][3] = ex("sin(a)^2*cos(b)^2", c)?;
    metric[4][4] = ex("sin(a)^2*sin(b)^2", c)?;
    let chart = Chart::new(c.iter().map(|s| s.to_string()).collect(), metric, sphere_domain())?;
    let immersion = parse_all(
        &[
            "cos(a)*cos(q1)*sqrt(1/2)",
            "cos(a)*sin(q1)",
            "sin(a)*cos(b)*cos(q2)",
            "sin(a)*cos(b)*sin(q2)",
            "sin(a)*sin(b)*cos(q3)",
            "sin(a)*sin(b)*sin(q3)",
        ],
        c,
    )?;
    let normal = parse_all(
        &[
            "sqrt(2)*cos(a)*cos(q1)/sqrt(1 + cos(a)^2*cos(q1)^2)",
            "cos(a)*sin(q1)/sqrt(1 + cos(a)^2*cos(q1)^2)",
            "sin(a)*cos(b)*cos(q2)/sqrt(1 + cos(a)^2*cos(q1)^2)",
            "sin(a)*cos(b)*sin(q2)/sqrt(1 + cos(a)^2*cos(q1)^2)",
            "sin(a)*sin(b)*cos(q3)/sqrt(1 + cos(a)^2*cos(q1)^2)",
            "sin(a)*sin(b)*sin(q3)/sqrt(1 + cos(a)^2*cos(q1)^2)",
        ],
        c,
    )?;
    Ok(HypersurfaceSpec { chart, immersion, normal })
}

/// Splits `name:args` or `name(args)`.
fn split_target(s: &str) -> (&str, Option<&str>) {
    if let Some((n, a)) = s.split_once(':') {
        return (n, Some(a));
    }
    if let (Some(i), true) = (s.find('('), s.ends_with(')')) {
        return (&s[..i], Some(&s[i + 1..s.len() - 1]));
    }
    (s, None)
}

fn parse_pair(args: Option<&str>) -> Result<(Rational, Rational)> {
    let Some(a) = args else {
        return Ok((ratio(3, 5), ratio(4, 5)));
    };
    let parts: Vec<&str> = a.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Invalid(format!("expected two rationals c,s, got {a:?}")));
    }
    let none: [&str; 0] = [];
    let mut out = [ratio(0, 1); 2];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = parse_expr(p, &none)?.eval::<Rational>(&[])?;
    }
    Ok((out[0], out[1]))
}

fn no_args(name: &str, args: Option<&str>) -> Result<()> {
    match args {
        None => Ok(()),
        Some(_) => Err(Error::Invalid(format!("{name} takes no parameters"))),
    }
}

/// Resolves a registry name.
pub fn lookup(target: &str) -> Result<Target> {
    let (name, args) = split_target(target.trim());
    let contact = |s: AlmostContactStructure| Ok(Target::Contact(s));
    match name {
        "h21" => {
            let (c, s) = parse_pair(args)?;
            return contact(h21(c, s)?);
        }
        "h21_chart" => {
            let (c, s) = parse_pair(args)?;
            return contact(AlmostContactStructure::Chart(h21_chart(c, s)?));
        }
        "cone_of" => {
            let inner = args.ok_or_else(|| Error::Invalid("cone_of needs a base target".into()))?;
            let base = lookup(inner)?
                .contact()
                .ok_or_else(|| Error::Invalid(format!("{inner} carries no almost contact structure")))?;
            return Ok(Target::Hermitian(build_cone(&base)?.hermitian()));
        }
        _ => {}
    }
    no_args(name, args)?;
    match name {
        "flat3" => contact(flat3()?),
        "flat_cosymplectic5" => contact(flat_cosymplectic5()?),
        "flat_c2" => Ok(Target::Hermitian(flat_c(2)?)),
        "flat_c3" => Ok(Target::Hermitian(flat_c(3)?)),
        "s2_round" => Ok(Target::Hermitian(s2_round()?)),
        "sine_cone_cos" => contact(sine_cone(false)?.contact()),
        "sine_cone_sin" => contact(sine_cone(true)?.contact()),
        "r_warped_surface" => contact(r_warped_surface()?.contact()),
        "s5_in_c3" => contact(AlmostContactStructure::Chart(s5_spec()?.structure(&flat_c(3)?)?)),
        "ellipsoid_in_c3" => contact(AlmostContactStructure::Chart(ellipsoid_spec()?.structure(&flat_c(3)?)?)),
        "hopf_pair" => Ok(Target::Submersion(hopf_pair()?)),
        _ => Err(Error::UnknownTarget(target.to_string())),
    }
}

/// Every registry entry, with `cone_of` expanded over the chart-carried
/// contact targets.
pub fn all_targets() -> Vec<String> {
    let mut out: Vec<String> = TARGETS
        .iter()
        .map(|(n, _)| n.to_string())
        .filter(|n| n != "cone_of")
        .collect();
    for base in ["flat3", "flat_cosymplectic5", "h21_chart", "sine_cone_cos", "r_warped_surface", "s5_in_c3"] {
        out.push(format!("cone_of:{base}"));
    }
    out
}
