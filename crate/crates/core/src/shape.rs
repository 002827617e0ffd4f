//! Closed curves used as desired formation shapes.
//!
//! Every curve is parametrized over the unit phase interval `[0, 1)`; phases
//! outside that interval are reduced modulo one before evaluation.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use nalgebra::{Rotation2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or vector in the plane, in world units.
pub type Point = Vector2<f64>;

/// Names accepted by [`make_named_shape`].
pub const NAMED_SHAPES: [&str; 8] = [
    "square", "star", "heart", "shape1", "shape2", "shape3", "shape4", "shape5",
];

// Five random Fourier shapes, harmonic coefficients c0..c6 in
// (constant, sin 2πt, cos 2πt, sin 4πt, cos 4πt, sin 6πt, cos 6πt) order.
const FOURIER_CX: [[f64; 7]; 5] = [
    [0.0, 1.0, 0.76, 0.42, 0.26, 0.51, 0.40],
    [0.0, 1.0, 0.85, 0.76, 0.26, 0.50, 0.45],
    [0.0, 1.0, 0.95, 0.06, 0.08, 0.84, 0.74],
    [0.0, 1.0, 0.54, 0.37, 0.60, 0.63, 0.07],
    [0.0, 1.0, 0.10, 0.40, 0.15, 0.07, 0.40],
];
const FOURIER_CY: [[f64; 7]; 5] = [
    [0.0, 0.30, 1.0, 0.58, 0.45, 0.50, 0.91],
    [0.0, 0.79, 1.0, 0.03, 0.94, 0.43, 0.84],
    [0.0, 0.31, 1.0, 0.61, 0.61, 0.16, 0.58],
    [0.0, 0.84, 1.0, 0.23, 0.26, 0.47, 0.99],
    [0.0, 0.80, 1.0, 0.22, 0.77, 0.28, 0.54],
];

/// Reduce a phase into `[0, 1)`.
pub fn wrap_phase(t: f64) -> f64 {
    let r = t - t.floor();
    // -1e-18 - floor(-1e-18) rounds to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Truncated Fourier series `c0 + Σ_j c_{2j-1} sin(2πjt) + c_{2j} cos(2πjt)` per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCurve {
    cx: Vec<f64>,
    cy: Vec<f64>,
}

impl FourierCurve {
    /// Both lists hold a constant term followed by `J` (sin, cos) pairs.
    pub fn new(cx: Vec<f64>, cy: Vec<f64>) -> Result<Self> {
        if cx.len() != cy.len() {
            return Err(Error::config(format!(
                "fourier coefficient lists differ in length ({} vs {})",
                cx.len(),
                cy.len()
            )));
        }
        if cx.is_empty() || cx.len() % 2 == 0 {
            return Err(Error::config(format!(
                "fourier coefficient lists need a constant term plus sin/cos pairs, got {} entries",
                cx.len()
            )));
        }
        if cx.iter().chain(&cy).any(|c| !c.is_finite()) {
            return Err(Error::config("fourier coefficients must be finite"));
        }
        Ok(Self { cx, cy })
    }

    pub fn cx(&self) -> &[f64] {
        &self.cx
    }

    pub fn cy(&self) -> &[f64] {
        &self.cy
    }

    /// Number of harmonics `J`.
    pub fn harmonics(&self) -> usize {
        self.cx.len() / 2
    }

    fn eval(&self, t: f64) -> Point {
        let mut p = Point::new(self.cx[0], self.cy[0]);
        for j in 1..=self.harmonics() {
            let (s, c) = (TAU * j as f64 * t).sin_cos();
            p.x += self.cx[2 * j - 1] * s + self.cx[2 * j] * c;
            p.y += self.cy[2 * j - 1] * s + self.cy[2 * j] * c;
        }
        p
    }

    fn deriv(&self, t: f64) -> Point {
        let mut v = Point::zeros();
        for j in 1..=self.harmonics() {
            let w = TAU * j as f64;
            let (s, c) = (w * t).sin_cos();
            v.x += w * (self.cx[2 * j - 1] * c - self.cx[2 * j] * s);
            v.y += w * (self.cy[2 * j - 1] * c - self.cy[2 * j] * s);
        }
        v
    }

    fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let (cx, cy) = self
            .cx
            .iter()
            .zip(&self.cy)
            .map(|(&x, &y)| (c * x - s * y, s * x + c * y))
            .unzip();
        Self { cx, cy }
    }
}

/// Closed polygon traversed at constant speed: each edge's phase span is
/// proportional to its length.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonCurve {
    vertices: Vec<Point>,
    // breaks[s]..breaks[s + 1] is the phase span of edge s; breaks[n] == 1.
    breaks: Vec<f64>,
}

impl PolygonCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::config("polygon needs at least two vertices"));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(Error::config("polygon vertices must be finite"));
        }
        let n = vertices.len();
        let lengths: Vec<f64> = (0..n)
            .map(|s| (vertices[(s + 1) % n] - vertices[s]).norm())
            .collect();
        if let Some(s) = lengths.iter().position(|&l| l == 0.0) {
            return Err(Error::config(format!(
                "polygon edge {s} has zero length (repeated vertex)"
            )));
        }
        let total: f64 = lengths.iter().sum();
        let mut breaks = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        breaks.push(0.0);
        for l in &lengths[..n - 1] {
            acc += l;
            breaks.push(acc / total);
        }
        breaks.push(1.0);
        Ok(Self { vertices, breaks })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Phases at which the traversal reaches each vertex (the corners).
    pub fn corner_phases(&self) -> &[f64] {
        &self.breaks[..self.vertices.len()]
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|s| (self.vertices[(s + 1) % n] - self.vertices[s]).norm())
            .sum()
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.vertices.len();
        // first break strictly greater than t, minus one
        let idx = self.breaks.partition_point(|&b| b <= t);
        idx.saturating_sub(1).min(n - 1)
    }

    fn edge(&self, s: usize) -> (Point, Point, f64) {
        let n = self.vertices.len();
        let a = self.vertices[s];
        let b = self.vertices[(s + 1) % n];
        (a, b, self.breaks[s + 1] - self.breaks[s])
    }

    fn eval(&self, t: f64) -> Point {
        let s = self.segment(t);
        let (a, b, span) = self.edge(s);
        let u = (t - self.breaks[s]) / span;
        a + (b - a) * u
    }

    fn deriv(&self, t: f64) -> Point {
        let (a, b, span) = self.edge(self.segment(t));
        (b - a) / span
    }
}

/// `(sin³ 2πt, (cos 2πt − cos 4πt) / (3 − cos(6πt)/6))`, optionally rotated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeartCurve {
    rotation: f64,
}

impl HeartCurve {
    fn raw(t: f64) -> (Point, Point) {
        let (s1, c1) = (TAU * t).sin_cos();
        let (s2, c2) = (2.0 * TAU * t).sin_cos();
        let (s3, c3) = (3.0 * TAU * t).sin_cos();
        let num = c1 - c2;
        let den = 3.0 - c3 / 6.0;
        let p = Point::new(s1 * s1 * s1, num / den);
        let dnum = -TAU * s1 + 2.0 * TAU * s2;
        let dden = 3.0 * TAU * s3 / 6.0;
        let v = Point::new(
            3.0 * s1 * s1 * c1 * TAU,
            (dnum * den - num * dden) / (den * den),
        );
        (p, v)
    }

    fn eval(&self, t: f64) -> Point {
        Rotation2::new(self.rotation) * Self::raw(t).0
    }

    fn deriv(&self, t: f64) -> Point {
        Rotation2::new(self.rotation) * Self::raw(t).1
    }
}

/// A parametric closed curve `γ: [0, 1) → R²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShapeFile", into = "ShapeFile")]
pub enum ClosedCurve {
    Fourier(FourierCurve),
    Polygon(PolygonCurve),
    Heart(HeartCurve),
}

impl ClosedCurve {
    pub fn fourier(cx: Vec<f64>, cy: Vec<f64>) -> Result<Self> {
        FourierCurve::new(cx, cy).map(Self::Fourier)
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        PolygonCurve::new(vertices).map(Self::Polygon)
    }

    pub fn heart() -> Self {
        Self::Heart(HeartCurve::default())
    }

    /// `γ(t)`, with `t` reduced modulo one.
    pub fn eval(&self, t: f64) -> Point {
        let t = wrap_phase(t);
        match self {
            Self::Fourier(c) => c.eval(t),
            Self::Polygon(c) => c.eval(t),
            Self::Heart(c) => c.eval(t),
        }
    }

    /// `γ̇(t)`. On a polygon corner this is the velocity of the outgoing edge.
    pub fn deriv(&self, t: f64) -> Point {
        let t = wrap_phase(t);
        match self {
            Self::Fourier(c) => c.deriv(t),
            Self::Polygon(c) => c.deriv(t),
            Self::Heart(c) => c.deriv(t),
        }
    }

    /// The same curve rotated about the origin by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Self {
        match self {
            Self::Fourier(c) => Self::Fourier(c.rotated(angle)),
            Self::Polygon(c) => {
                let r = Rotation2::new(angle);
                let vertices = c.vertices.iter().map(|v| r * v).collect();
                // rotation preserves edge lengths, so the breaks carry over
                Self::Polygon(PolygonCurve {
                    vertices,
                    breaks: c.breaks.clone(),
                })
            }
            Self::Heart(c) => Self::Heart(HeartCurve {
                rotation: c.rotation + angle,
            }),
        }
    }

    /// Phases where the derivative jumps; empty for smooth curves.
    pub fn corner_phases(&self) -> &[f64] {
        match self {
            Self::Polygon(c) => c.corner_phases(),
            _ => &[],
        }
    }

    /// Parse shape-file text (TOML).
    pub fn from_spec_text(text: &str) -> Result<Self> {
        // tolerate an unquoted `kind = fourier`
        let normalized: String = text
            .lines()
            .map(|line| {
                let trimmed = line.trim();
                match trimmed.strip_prefix("kind") {
                    Some(rest) => {
                        let value = rest.trim_start().strip_prefix('=').map(str::trim);
                        match value {
                            Some(v) if !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric()) => {
                                format!("kind = \"{v}\"")
                            }
                            _ => line.to_string(),
                        }
                    }
                    None => line.to_string(),
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        let file: ShapeFile =
            toml::from_str(&normalized).map_err(|e| Error::Parse(format!("shape file: {e}")))?;
        Self::try_from(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_spec_text(&std::fs::read_to_string(path)?)
    }

    /// Render as shape-file text accepted by [`ClosedCurve::from_spec_text`].
    pub fn to_spec_text(&self) -> String {
        toml::to_string(&ShapeFile::from(self.clone())).expect("shape file serializes")
    }

    /// Resolve `name:<id>` or `file:<path>`; a bare name is treated as `name:`.
    pub fn from_source(source: &str) -> Result<Self> {
        if let Some(path) = source.strip_prefix("file:") {
            Self::load(path)
        } else {
            make_named_shape(source.strip_prefix("name:").unwrap_or(source))
        }
    }
}

/// `[γ(t) for t in offsets]`.
pub fn curve_sample(curve: &ClosedCurve, offsets: &[f64]) -> Result<Vec<Point>> {
    if offsets.is_empty() {
        return Err(Error::config("cannot sample a curve at zero offsets"));
    }
    Ok(offsets.iter().map(|&t| curve.eval(t)).collect())
}

/// Build one of the built-in shapes listed in [`NAMED_SHAPES`].
pub fn make_named_shape(name: &str) -> Result<ClosedCurve> {
    match name {
        "square" => ClosedCurve::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]),
        "star" => ClosedCurve::polygon(
            [9.0, 1.0, 13.0, 5.0, 17.0]
                .iter()
                .map(|k| {
                    let a = k * PI / 10.0;
                    Point::new(a.cos(), a.sin())
                })
                .collect(),
        ),
        "heart" => Ok(ClosedCurve::heart()),
        other => {
            let idx = other
                .strip_prefix("shape")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (1..=5).contains(n))
                .ok_or_else(|| {
                    Error::config(format!(
                        "unknown shape '{other}' (expected one of {})",
                        NAMED_SHAPES.join(", ")
                    ))
                })?;
            ClosedCurve::fourier(
                FOURIER_CX[idx - 1].to_vec(),
                FOURIER_CY[idx - 1].to_vec(),
            )
        }
    }
}

/// On-disk form of a [`ClosedCurve`].
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ShapeFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cx: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cy: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<f64>,
}

impl TryFrom<ShapeFile> for ClosedCurve {
    type Error = Error;

    fn try_from(file: ShapeFile) -> Result<Self> {
        match file.kind.as_str() {
            "fourier" => {
                let (Some(cx), Some(cy)) = (file.cx, file.cy) else {
                    return Err(Error::config("fourier shape needs both `cx` and `cy`"));
                };
                ClosedCurve::fourier(cx, cy)
            }
            "polygon" => {
                let vertices = file
                    .vertices
                    .ok_or_else(|| Error::config("polygon shape needs `vertices`"))?;
                ClosedCurve::polygon(vertices.iter().map(|[x, y]| Point::new(*x, *y)).collect())
            }
            "heart" => Ok(ClosedCurve::Heart(HeartCurve {
                rotation: file.rotation.unwrap_or(0.0),
            })),
            other => Err(Error::config(format!(
                "unknown shape kind '{other}' (expected fourier, polygon or heart)"
            ))),
        }
    }
}

impl From<ClosedCurve> for ShapeFile {
    fn from(curve: ClosedCurve) -> Self {
        let empty = ShapeFile {
            kind: String::new(),
            cx: None,
            cy: None,
            vertices: None,
            rotation: None,
        };
        match curve {
            ClosedCurve::Fourier(c) => ShapeFile {
                kind: "fourier".into(),
                cx: Some(c.cx),
                cy: Some(c.cy),
                ..empty
            },
            ClosedCurve::Polygon(c) => ShapeFile {
                kind: "polygon".into(),
                vertices: Some(c.vertices.iter().map(|v| [v.x, v.y]).collect()),
                ..empty
            },
            ClosedCurve::Heart(c) => ShapeFile {
                kind: "heart".into(),
                rotation: (c.rotation != 0.0).then_some(c.rotation),
                ..empty
            },
        }
    }
}
