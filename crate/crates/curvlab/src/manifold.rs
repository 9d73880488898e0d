//! Manifold definition files.
//!
//! ```text
//! # the flat cosymplectic R^3
//! [chart]
//! dim = 3
//! coords = "x,y,z"
//! domain = "z in (-1, 1)"
//!
//! [metric]
//! g_11 = "1"
//! g_22 = "1"
//! g_33 = "1"
//!
//! [phi]
//! phi^2_1 = "1"
//! phi^1_2 = "-1"
//!
//! [xi]
//! xi^3 = "1"
//!
//! [eta]
//! eta_3 = "1"
//! ```
//!
//! Indices are 1-based numbers or coordinate names; two-index keys may drop
//! the separator when both indices are single digits (`g_12`). Omitted
//! components are zero and only one triangle of the metric is required.
//! A `[hermitian]` section with `J^i_j` entries replaces the three contact
//! sections. Unknown sections and keys are errors.
//!
//! A Lie-group frame is given by a lone `[frame]` section with exact
//! rational entries, `[e_i, e_j] = c[k][i][j] e_k`:
//!
//! ```text
//! [frame]
//! names = "X,Y,xi"
//! c[xi][X][Y] = "2"
//! g[1][1] = "1"
//! g[2][2] = "1"
//! g[3][3] = "1"
//! phi[2][1] = "1"    # component of phi(e_1) along e_2
//! phi[1][2] = "-1"
//! xi[3] = "1"
//! eta[3] = "1"
//! ```
//!
//! Only one of `c[k][i][j]`, `c[k][j][i]` is needed; omitted metric entries
//! mirror their transpose.

use std::collections::BTreeMap;
use std::ops::Range;

use curvlab_core::chart::{Chart, Interval, TensorField, Valence};
use curvlab_core::constructions::Target;
use curvlab_core::structures::{AlmostContactStructure, AlmostHermitianStructure, ChartContact};
use curvlab_core::frame::{FrameContact, FrameGeometry};
use curvlab_core::{parse_expr, Expr, Rational};

/// A malformed manifold file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message} (at byte {offset})")]
pub struct ParseError {
    /// Byte offset into the file.
    pub offset: usize,
    pub message: String,
}

fn fail<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Chart,
    Metric,
    Phi,
    Xi,
    Eta,
    Hermitian,
    Frame,
}

impl Section {
    fn from_name(s: &str) -> Option<Section> {
        Some(match s {
            "chart" => Section::Chart,
            "metric" => Section::Metric,
            "phi" => Section::Phi,
            "xi" => Section::Xi,
            "eta" => Section::Eta,
            "hermitian" => Section::Hermitian,
            "frame" => Section::Frame,
            _ => return None,
        })
    }
}

/// One `key = value` line with byte spans.
#[derive(Debug, Clone)]
struct Entry {
    key: String,
    key_at: usize,
    value: String,
    value_at: usize,
}

fn unquote(raw: &str, at: usize) -> Result<(String, usize), ParseError> {
    if let Some(rest) = raw.strip_prefix('"') {
        let Some(body) = rest.strip_suffix('"') else {
            return fail(at, "unterminated string");
        };
        if body.contains('"') {
            return fail(at, "stray quote inside value");
        }
        return Ok((body.to_string(), at + 1));
    }
    Ok((raw.to_string(), at))
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn trimmed(line: &str, range: Range<usize>) -> (usize, &str) {
    let s = &line[range.clone()];
    let lead = s.len() - s.trim_start().len();
    (range.start + lead, s.trim())
}

fn split_sections(text: &str) -> Result<BTreeMap<Section, (usize, Vec<Entry>)>, ParseError> {
    let mut out: BTreeMap<Section, (usize, Vec<Entry>)> = BTreeMap::new();
    let mut current: Option<Section> = None;
    let mut line_start = 0;
    for raw in text.split_inclusive('\n') {
        let start = line_start;
        line_start += raw.len();
        let line = raw.trim_end_matches(['\n', '\r']);
        let body = strip_comment(line);
        let (off, content) = trimmed(body, 0..body.len());
        if content.is_empty() {
            continue;
        }
        let at = start + off;
        if let Some(name) = content.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return fail(at, "unterminated section header");
            };
            let Some(sec) = Section::from_name(name.trim()) else {
                return fail(at, format!("unknown section [{}]", name.trim()));
            };
            if out.contains_key(&sec) {
                return fail(at, format!("duplicate section [{}]", name.trim()));
            }
            out.insert(sec, (at, Vec::new()));
            current = Some(sec);
            continue;
        }
        let Some(sec) = current else {
            return fail(at, "entry outside of any section");
        };
        let Some(eq) = body.find('=') else {
            return fail(at, "expected `key = value`");
        };
        let (key_at, key) = trimmed(body, 0..eq);
        let (value_off, value) = trimmed(body, eq + 1..body.len());
        if key.is_empty() {
            return fail(start + eq, "missing key");
        }
        if value.is_empty() {
            return fail(start + eq + 1, format!("missing value for `{key}`"));
        }
        let (value, value_at) = unquote(value, start + value_off)?;
        let entry = Entry { key: key.to_string(), key_at: start + key_at, value, value_at };
        out.get_mut(&sec).expect("section registered").1.push(entry);
    }
    Ok(out)
}

/// Splits `g_12`, `g_1_2`, `phi^1_2`, `xi^3`, `eta_x` into index tokens.
fn index_tokens<'a>(key: &'a str, prefix: &str, pattern: &[char]) -> Option<Vec<&'a str>> {
    let mut rest = key.strip_prefix(prefix)?;
    let mut out = Vec::new();
    for (k, sep) in pattern.iter().enumerate() {
        rest = rest.strip_prefix(*sep)?;
        let last = k + 1 == pattern.len();
        let end = if last { rest.len() } else { rest.find(pattern[k + 1]).unwrap_or(rest.len()) };
        let tok = &rest[..end];
        if !last && end == rest.len() {
            // `g_12`: two single-digit indices without a separator
            if tok.len() == 2 && tok.bytes().all(|b| b.is_ascii_digit()) {
                out.push(&tok[..1]);
                out.push(&tok[1..]);
                return (out.len() == pattern.len()).then_some(out);
            }
            return None;
        }
        out.push(tok);
        rest = &rest[end..];
    }
    Some(out)
}

struct Resolver<'a> {
    coords: &'a [String],
}

impl Resolver<'_> {
    fn index(&self, tok: &str, at: usize) -> Result<usize, ParseError> {
        let n = self.coords.len();
        if let Ok(i) = tok.parse::<usize>() {
            if (1..=n).contains(&i) {
                return Ok(i - 1);
            }
            return fail(at, format!("index {i} out of range 1..={n}"));
        }
        match self.coords.iter().position(|c| c == tok) {
            Some(i) => Ok(i),
            None => fail(at, format!("unknown index `{tok}`")),
        }
    }

    fn indices(&self, e: &Entry, prefix: &str, pattern: &[char]) -> Result<Vec<usize>, ParseError> {
        let Some(toks) = index_tokens(&e.key, prefix, pattern) else {
            return fail(e.key_at, format!("unknown key `{}`", e.key));
        };
        toks.iter().map(|t| self.index(t, e.key_at)).collect()
    }

    fn expr(&self, e: &Entry) -> Result<Expr, ParseError> {
        parse_expr(&e.value, self.coords).map_err(|err| {
            use curvlab_core::Error;
            let inner = match &err {
                Error::Syntax { offset, .. }
                | Error::UnknownIdentifier { offset, .. }
                | Error::NonIntegerExponent { offset } => *offset,
                _ => 0,
            };
            ParseError { offset: e.value_at + inner, message: format!("in `{}`: {err}", e.key) }
        })
    }
}

fn bound(text: &str, at: usize) -> Result<f64, ParseError> {
    match text.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => {
            let none: [&str; 0] = [];
            let e = parse_expr(t, &none).map_err(|err| ParseError { offset: at, message: err.to_string() })?;
            e.eval::<f64>(&[]).map_err(|err| ParseError { offset: at, message: err.to_string() })
        }
    }
}

/// `t in (0, inf)`
fn domain_entry(e: &Entry, coords: &[String]) -> Result<(usize, Interval), ParseError> {
    let Some((name, iv)) = e.value.split_once(" in ") else {
        return fail(e.value_at, "expected `<coord> in (<lo>, <hi>)`");
    };
    let Some(i) = coords.iter().position(|c| c == name.trim()) else {
        return fail(e.value_at, format!("unknown coordinate `{}`", name.trim()));
    };
    let iv_at = e.value_at + name.len() + 4;
    let iv = iv.trim();
    let Some(inner) = iv.strip_prefix('(').and_then(|s| s.strip_suffix(')')) else {
        return fail(iv_at, "domains are open intervals `(lo, hi)`");
    };
    let Some((lo, hi)) = inner.split_once(',') else {
        return fail(iv_at, "expected `(lo, hi)`");
    };
    let (lo, hi) = (bound(lo, iv_at)?, bound(hi, iv_at)?);
    if !(lo < hi) {
        return fail(iv_at, "empty interval");
    }
    Ok((i, Interval::open(lo, hi)))
}

fn parse_chart(sections: &BTreeMap<Section, (usize, Vec<Entry>)>) -> Result<Chart, ParseError> {
    let Some((chart_at, entries)) = sections.get(&Section::Chart) else {
        return fail(0, "missing [chart] section");
    };
    let mut dim = None;
    let mut coords: Option<Vec<String>> = None;
    let mut domains = Vec::new();
    for e in entries {
        match e.key.as_str() {
            "dim" if dim.is_none() => match e.value.parse::<usize>() {
                Ok(d) if d >= 1 => dim = Some((d, e.value_at)),
                _ => return fail(e.value_at, "dim must be a positive integer"),
            },
            "coords" if coords.is_none() => {
                coords = Some(e.value.split(',').map(|c| c.trim().to_string()).collect());
            }
            "domain" => domains.push(e),
            "dim" | "coords" => return fail(e.key_at, format!("duplicate key `{}`", e.key)),
            _ => return fail(e.key_at, format!("unknown key `{}` in [chart]", e.key)),
        }
    }
    let Some(coords) = coords else {
        return fail(*chart_at, "[chart] needs `coords`");
    };
    if let Some((d, at)) = dim {
        if d != coords.len() {
            return fail(at, format!("dim = {d} but {} coordinates are listed", coords.len()));
        }
    }
    let mut domain = vec![Interval::REAL_LINE; coords.len()];
    let mut seen = vec![false; coords.len()];
    for e in domains {
        let (i, iv) = domain_entry(e, &coords)?;
        if std::mem::replace(&mut seen[i], true) {
            return fail(e.value_at, format!("duplicate domain for `{}`", coords[i]));
        }
        domain[i] = iv;
    }
    let n = coords.len();
    let r = Resolver { coords: &coords };
    let Some((metric_at, entries)) = sections.get(&Section::Metric) else {
        return fail(0, "missing [metric] section");
    };
    // (expression, written as upper-triangle entry)
    let mut slots: Vec<Vec<Option<(Expr, bool)>>> = vec![vec![None; n]; n];
    for e in entries {
        let ij = r.indices(e, "g", &['_', '_'])?;
        let (i, j) = (ij[0].min(ij[1]), ij[0].max(ij[1]));
        let upper = ij[0] <= ij[1];
        let ex = r.expr(e)?;
        match &slots[i][j] {
            None => slots[i][j] = Some((ex, upper)),
            Some((_, u)) if *u == upper || i == j => {
                return fail(e.key_at, format!("duplicate key `{}`", e.key));
            }
            Some((prev, _)) if *prev != ex => {
                return fail(e.value_at, format!("`{}` disagrees with its transpose", e.key));
            }
            Some(_) => {}
        }
    }
    let mut metric = vec![vec![Expr::int(0); n]; n];
    for i in 0..n {
        for j in i..n {
            if let Some((ex, _)) = &slots[i][j] {
                metric[i][j] = ex.clone();
                metric[j][i] = ex.clone();
            }
        }
    }
    Chart::new(coords, metric, domain).map_err(|e| ParseError { offset: *metric_at, message: e.to_string() })
}

fn field(
    sections: &BTreeMap<Section, (usize, Vec<Entry>)>,
    sec: Section,
    r: &Resolver,
    prefix: &str,
    pattern: &[char],
) -> Result<(usize, Vec<Expr>), ParseError> {
    let n = r.coords.len();
    let (at, entries) = sections.get(&sec).expect("caller checked presence");
    let len = n.pow(pattern.len() as u32);
    let mut out = vec![Expr::int(0); len];
    let mut seen = vec![false; len];
    for e in entries {
        let idx = r.indices(e, prefix, pattern)?;
        let flat = idx.iter().fold(0, |acc, i| acc * n + i);
        if std::mem::replace(&mut seen[flat], true) {
            return fail(e.key_at, format!("duplicate key `{}`", e.key));
        }
        out[flat] = r.expr(e)?;
    }
    Ok((*at, out))
}


/// `c[3][1][2]` → `["3", "1", "2"]`
fn bracket_indices<'a>(key: &'a str, prefix: &str, arity: usize) -> Option<Vec<&'a str>> {
    let mut rest = key.strip_prefix(prefix)?;
    let mut out = Vec::with_capacity(arity);
    while let Some(r) = rest.strip_prefix('[') {
        let end = r.find(']')?;
        out.push(r[..end].trim());
        rest = &r[end + 1..];
    }
    (rest.is_empty() && out.len() == arity).then_some(out)
}

fn rational(e: &Entry) -> Result<Rational, ParseError> {
    let none: [&str; 0] = [];
    let wrap = |err: curvlab_core::Error| ParseError { offset: e.value_at, message: format!("in `{}`: {err}", e.key) };
    parse_expr(&e.value, &none).map_err(wrap)?.eval::<Rational>(&[]).map_err(wrap)
}

fn parse_frame(at: usize, entries: &[Entry]) -> Result<Target, ParseError> {
    let mut dim = None;
    let mut names: Option<Vec<String>> = None;
    for e in entries {
        match e.key.as_str() {
            "dim" if dim.is_none() => match e.value.parse::<usize>() {
                Ok(d) if d >= 1 => dim = Some((d, e.value_at)),
                _ => return fail(e.value_at, "dim must be a positive integer"),
            },
            "names" if names.is_none() => names = Some(e.value.split(',').map(|c| c.trim().to_string()).collect()),
            "dim" | "names" => return fail(e.key_at, format!("duplicate key `{}`", e.key)),
            _ => {}
        }
    }
    let names = match (names, dim) {
        (Some(n), Some((d, at))) if n.len() != d => {
            return fail(at, format!("dim = {d} but {} names are listed", n.len()));
        }
        (Some(n), _) => n,
        (None, Some((d, _))) => (1..=d).map(|i| format!("e{i}")).collect(),
        (None, None) => return fail(at, "[frame] needs `dim` or `names`"),
    };
    let n = names.len();
    let r = Resolver { coords: &names };
    let zero = Rational::from_integer(0);
    let mut c = vec![vec![vec![None::<Rational>; n]; n]; n];
    let mut g = vec![vec![None::<Rational>; n]; n];
    let mut phi = vec![vec![zero; n]; n];
    let mut xi = vec![zero; n];
    let mut eta = vec![zero; n];
    let mut contact_seen = false;
    let mut seen = std::collections::BTreeSet::new();
    for e in entries {
        if e.key == "dim" || e.key == "names" {
            continue;
        }
        let idx = |prefix: &str, arity: usize| -> Result<Option<Vec<usize>>, ParseError> {
            match bracket_indices(&e.key, prefix, arity) {
                Some(toks) => toks.iter().map(|t| r.index(t, e.key_at)).collect::<Result<Vec<_>, _>>().map(Some),
                None => Ok(None),
            }
        };
        let v = rational(e)?;
        let (slot, consistent) = if let Some(ix) = idx("c", 3)? {
            let (k, i, j) = (ix[0], ix[1], ix[2]);
            let ok = c[k][j][i].is_none_or(|o| o == -v);
            c[k][i][j] = Some(v);
            c[k][j][i] = Some(-v);
            (format!("c{k},{i},{j}"), ok)
        } else if let Some(ix) = idx("g", 2)? {
            let (i, j) = (ix[0], ix[1]);
            let ok = i == j || g[j][i].is_none_or(|o| o == v);
            g[i][j] = Some(v);
            g[j][i] = Some(v);
            (format!("g{i},{j}"), ok)
        } else if let Some(ix) = idx("phi", 2)? {
            contact_seen = true;
            phi[ix[0]][ix[1]] = v;
            (format!("phi{},{}", ix[0], ix[1]), true)
        } else if let Some(ix) = idx("xi", 1)? {
            contact_seen = true;
            xi[ix[0]] = v;
            (format!("xi{}", ix[0]), true)
        } else if let Some(ix) = idx("eta", 1)? {
            contact_seen = true;
            eta[ix[0]] = v;
            (format!("eta{}", ix[0]), true)
        } else {
            return fail(e.key_at, format!("unknown key `{}` in [frame]", e.key));
        };
        if !seen.insert(slot) {
            return fail(e.key_at, format!("duplicate key `{}`", e.key));
        }
        if !consistent {
            return fail(e.value_at, format!("`{}` disagrees with its transposed entry", e.key));
        }
    }
    let c = c.into_iter().map(|m| m.into_iter().map(|row| row.into_iter().map(|x| x.unwrap_or(zero)).collect()).collect()).collect();
    let g = g.into_iter().map(|row| row.into_iter().map(|x| x.unwrap_or(zero)).collect()).collect();
    let wrap = |e: curvlab_core::Error| ParseError { offset: at, message: e.to_string() };
    let frame = FrameGeometry::new(names, c, g).map_err(wrap)?;
    if !contact_seen {
        return fail(at, "[frame] needs phi, xi and eta entries");
    }
    let frame = frame.with_contact(FrameContact { phi, xi, eta }).map_err(wrap)?;
    Ok(Target::Contact(AlmostContactStructure::Frame(frame)))
}

/// Parses a manifold file into a registry-style target.
pub fn parse_manifold(text: &str) -> Result<Target, ParseError> {
    let sections = split_sections(text)?;
    if let Some((at, entries)) = sections.get(&Section::Frame) {
        if let Some((other, (o_at, _))) = sections.iter().find(|(s, _)| **s != Section::Frame) {
            return fail(*o_at, format!("[frame] cannot be combined with [{}]", format!("{other:?}").to_lowercase()));
        }
        return parse_frame(*at, entries);
    }
    let chart = parse_chart(&sections)?;
    let coords = chart.coords().to_vec();
    let n = coords.len();
    let r = Resolver { coords: &coords };
    let has = |s: Section| sections.contains_key(&s);
    let contact = [Section::Phi, Section::Xi, Section::Eta];
    if has(Section::Hermitian) {
        if let Some(s) = contact.iter().find(|s| has(**s)) {
            return fail(sections[s].0, "[hermitian] replaces the [phi]/[xi]/[eta] sections");
        }
        let (at, j) = field(&sections, Section::Hermitian, &r, "J", &['^', '_'])?;
        let wrap = |e: curvlab_core::Error| ParseError { offset: at, message: e.to_string() };
        let j = TensorField::from_exprs(Valence::Endomorphism, n, j).map_err(wrap)?;
        return Ok(Target::Hermitian(AlmostHermitianStructure::new(chart, j).map_err(wrap)?));
    }
    if let Some(missing) = contact.iter().find(|s| !has(**s)) {
        return fail(text.len(), format!("missing [{}] section", format!("{missing:?}").to_lowercase()));
    }
    let (at, phi) = field(&sections, Section::Phi, &r, "phi", &['^', '_'])?;
    let (_, xi) = field(&sections, Section::Xi, &r, "xi", &['^'])?;
    let (_, eta) = field(&sections, Section::Eta, &r, "eta", &['_'])?;
    let wrap = |e: curvlab_core::Error| ParseError { offset: at, message: e.to_string() };
    let s = ChartContact::new(
        chart,
        TensorField::from_exprs(Valence::Endomorphism, n, phi).map_err(wrap)?,
        TensorField::from_exprs(Valence::Vector, n, xi).map_err(wrap)?,
        TensorField::from_exprs(Valence::OneForm, n, eta).map_err(wrap)?,
    )
    .map_err(wrap)?;
    Ok(Target::Contact(AlmostContactStructure::Chart(s)))
}
