//! The Desarguesian plane PG(2,q) and its affine part AG(2,q).
//!
//! Points and lines are homogeneous triples normalized so that the first nonzero
//! coordinate is 1. Sorting the normalized triples by `x q^2 + y q + z` gives a
//! closed-form index:
//!
//! ```text
//! (0:0:1)  -> 0
//! (0:1:z)  -> 1 + z
//! (1:y:z)  -> 1 + q + y q + z
//! ```
//!
//! Lines use the same encoding for their dual coordinates `[a:b:c]`, so the
//! points of a line and the lines through a point come out of one enumerator.
//! Incidence tables are materialized only for small planes; larger planes
//! enumerate incidences on demand in `O(q)` per line.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Planes up to this many incidences keep explicit index lists.
const INCIDENCE_TABLE_LIMIT: usize = 1 << 22;
/// Planes up to this many points keep per-line bitmaps (N^2 bits).
const BITMAP_POINT_LIMIT: usize = 8192;

pub type Triple = [Elem; 3];

/// Per-line membership bitmaps over point indices.
#[derive(Debug, Clone)]
pub struct LineBitmaps {
    words: usize,
    bits: Vec<u64>,
}

impl LineBitmaps {
    pub fn words_per_line(&self) -> usize {
        self.words
    }

    pub fn line(&self, l: usize) -> &[u64] {
        &self.bits[l * self.words..(l + 1) * self.words]
    }
}

#[derive(Debug, Clone)]
struct Incidence {
    line_points: Vec<u32>,
    point_lines: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    field: Field,
    q: usize,
    n: usize,
    incidence: Option<Incidence>,
    bitmaps: Option<LineBitmaps>,
}

impl ProjectivePlane {
    pub fn new(field: Field) -> Self {
        let q = field.order() as usize;
        let n = q * q + q + 1;
        let mut plane = ProjectivePlane {
            field,
            q,
            n,
            incidence: None,
            bitmaps: None,
        };
        if n * (q + 1) <= INCIDENCE_TABLE_LIMIT {
            let mut line_points = Vec::with_capacity(n * (q + 1));
            for l in 0..n {
                plane.for_each_incident(plane.triple(l), |p| line_points.push(p as u32));
            }
            // Point-line incidence is symmetric under the shared encoding.
            let point_lines = line_points.clone();
            plane.incidence = Some(Incidence {
                line_points,
                point_lines,
            });
        }
        if n <= BITMAP_POINT_LIMIT {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; n * words];
            for l in 0..n {
                let row = &mut bits[l * words..(l + 1) * words];
                plane.for_each_point_on_line(l, |p| row[p / 64] |= 1 << (p % 64));
            }
            plane.bitmaps = Some(LineBitmaps { words, bits });
        }
        plane
    }

    /// PG(2,q) over the canonical GF(q).
    pub fn of_order(q: u64) -> Result<Self> {
        Ok(Self::new(Field::new(q)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn num_lines(&self) -> usize {
        self.n
    }

    pub fn line_bitmaps(&self) -> Option<&LineBitmaps> {
        self.bitmaps.as_ref()
    }

    /// Materialized point list of line `l`, if the plane is small enough.
    pub fn line_points(&self, l: usize) -> Option<&[u32]> {
        let k = self.q + 1;
        self.incidence
            .as_ref()
            .map(|inc| &inc.line_points[l * k..(l + 1) * k])
    }

    /// Materialized line list of point `p`, if the plane is small enough.
    pub fn point_lines(&self, p: usize) -> Option<&[u32]> {
        let k = self.q + 1;
        self.incidence
            .as_ref()
            .map(|inc| &inc.point_lines[p * k..(p + 1) * k])
    }

    /// Normalized triple with index `idx` (points and lines share the encoding).
    pub fn triple(&self, idx: usize) -> Triple {
        debug_assert!(idx < self.n);
        let q = self.q;
        if idx == 0 {
            [0, 0, 1]
        } else if idx <= q {
            [0, 1, (idx - 1) as Elem]
        } else {
            let r = idx - 1 - q;
            [1, (r / q) as Elem, (r % q) as Elem]
        }
    }

    pub fn point(&self, idx: usize) -> Triple {
        self.triple(idx)
    }

    pub fn line(&self, idx: usize) -> Triple {
        self.triple(idx)
    }

    /// Scales a nonzero triple so its first nonzero coordinate is 1.
    pub fn normalize(&self, t: Triple) -> Option<Triple> {
        let lead = t.iter().copied().find(|&c| c != 0)?;
        let inv = self.field.inv(lead)?;
        Some(t.map(|c| self.field.mul(c, inv)))
    }

    /// Index of an arbitrary nonzero triple, after normalization.
    pub fn index_of(&self, t: Triple) -> Option<usize> {
        if t.iter().any(|&c| c >= self.field.order()) {
            return None;
        }
        let [x, y, z] = self.normalize(t)?;
        let q = self.q;
        Some(match (x, y) {
            (0, 0) => 0,
            (0, _) => 1 + z as usize,
            _ => 1 + q + y as usize * q + z as usize,
        })
    }

    fn dot(&self, a: Triple, b: Triple) -> Elem {
        let f = &self.field;
        f.add(
            f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])),
            f.mul(a[2], b[2]),
        )
    }

    fn cross(&self, a: Triple, b: Triple) -> Triple {
        let f = &self.field;
        [
            f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
            f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
            f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
        ]
    }

    /// `ax + by + cz = 0`.
    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.dot(self.triple(point), self.triple(line)) == 0
    }

    pub fn line_through(&self, p: usize, q: usize) -> Result<usize> {
        if p == q {
            return Err(Error::IdenticalPoints);
        }
        let l = self.cross(self.triple(p), self.triple(q));
        Ok(self.index_of(l).expect("distinct points span a line"))
    }

    /// Common point of two distinct lines.
    pub fn meet(&self, l: usize, m: usize) -> Result<usize> {
        if l == m {
            return Err(Error::param("identical lines"));
        }
        let p = self.cross(self.triple(l), self.triple(m));
        Ok(self.index_of(p).expect("distinct lines meet in a point"))
    }

    /// Calls `f` on every index incident with the dual of `t`, in increasing order.
    fn for_each_incident(&self, [a, b, c]: Triple, mut f: impl FnMut(usize)) {
        let fld = &self.field;
        let q = self.q;
        if c != 0 {
            let ci = fld.inv(c).unwrap();
            let k0 = fld.neg(fld.mul(a, ci));
            let k1 = fld.neg(fld.mul(b, ci));
            // (0:1:z) with b + cz = 0
            f(1 + k1 as usize);
            // (1:y:z) with z = k0 + k1 y
            if fld.is_prime_field() {
                let mut z = k0;
                for y in 0..q {
                    f(1 + q + y * q + z as usize);
                    z = fld.add(z, k1);
                }
            } else {
                for y in 0..q {
                    let z = fld.add(k0, fld.mul(k1, y as Elem));
                    f(1 + q + y * q + z as usize);
                }
            }
        } else if b != 0 {
            f(0);
            let y0 = fld.neg(fld.div(a, b).unwrap()) as usize;
            let base = 1 + q + y0 * q;
            (0..q).for_each(|z| f(base + z));
        } else {
            f(0);
            (0..q).for_each(|z| f(1 + z));
        }
    }

    /// Visits the `q + 1` points of line `l` in increasing index order.
    pub fn for_each_point_on_line(&self, l: usize, mut f: impl FnMut(usize)) {
        match self.line_points(l) {
            Some(pts) => pts.iter().for_each(|&p| f(p as usize)),
            None => self.for_each_incident(self.triple(l), f),
        }
    }

    /// Visits the `q + 1` lines through point `p` in increasing index order.
    pub fn for_each_line_through_point(&self, p: usize, mut f: impl FnMut(usize)) {
        match self.point_lines(p) {
            Some(ls) => ls.iter().for_each(|&l| f(l as usize)),
            None => self.for_each_incident(self.triple(p), f),
        }
    }

    pub fn points_on_line(&self, l: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.q + 1);
        self.for_each_point_on_line(l, |p| out.push(p));
        out
    }

    pub fn lines_through_point(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.q + 1);
        self.for_each_line_through_point(p, |l| out.push(l));
        out
    }

    pub fn affine_frame(&self) -> AffineFrame<'_> {
        AffineFrame::new(self)
    }
}

/// Classification of a line relative to the affine frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineLine {
    /// `y = d x + b`
    Sloped {
        d: Elem,
        b: Elem,
    },
    /// `x = c`
    Vertical {
        c: Elem,
    },
    Infinite,
}

/// Coordinates for AG(2,q) inside PG(2,q): affine points are `(x:y:1)`, the line
/// `y = dx + b` is `[d:-1:b]`, the vertical `x = c` is `[1:0:-c]` and the line at
/// infinity is `[0:0:1]`.
#[derive(Debug, Clone)]
pub struct AffineFrame<'a> {
    plane: &'a ProjectivePlane,
    point_of: Vec<u32>,
}

impl<'a> AffineFrame<'a> {
    fn new(plane: &'a ProjectivePlane) -> Self {
        let q = plane.q;
        let f = &plane.field;
        let mut point_of = vec![0u32; q * q];
        for x in 0..q as Elem {
            for y in 0..q as Elem {
                let idx = match (x, y) {
                    (0, 0) => 0,
                    (0, _) => 1 + f.inv(y).unwrap() as usize,
                    _ => {
                        let xi = f.inv(x).unwrap();
                        1 + q + f.mul(y, xi) as usize * q + xi as usize
                    }
                };
                point_of[x as usize * q + y as usize] = idx as u32;
            }
        }
        AffineFrame { plane, point_of }
    }

    pub fn plane(&self) -> &'a ProjectivePlane {
        self.plane
    }

    pub fn num_affine_points(&self) -> usize {
        self.point_of.len()
    }

    #[inline]
    pub fn point(&self, x: Elem, y: Elem) -> usize {
        self.point_of[x as usize * self.plane.q + y as usize] as usize
    }

    /// `(x, y)` for affine points, `None` on the line at infinity.
    pub fn coords(&self, point: usize) -> Option<(Elem, Elem)> {
        let [x, y, z] = self.plane.triple(point);
        let f = &self.plane.field;
        let zi = f.inv(z)?;
        Some((f.mul(x, zi), f.mul(y, zi)))
    }

    /// The line `y = d x + b`.
    pub fn line(&self, d: Elem, b: Elem) -> usize {
        let f = &self.plane.field;
        let q = self.plane.q;
        if d == 0 {
            // [0:-1:b] ~ [0:1:-b]
            1 + f.neg(b) as usize
        } else {
            let di = f.inv(d).unwrap();
            let y = f.neg(di);
            let z = f.mul(b, di);
            1 + q + y as usize * q + z as usize
        }
    }

    /// The line `x = c`.
    pub fn vertical(&self, c: Elem) -> usize {
        let q = self.plane.q;
        1 + q + self.plane.field.neg(c) as usize
    }

    pub fn infinite_line(&self) -> usize {
        0
    }

    pub fn classify(&self, line: usize) -> AffineLine {
        let f = &self.plane.field;
        match self.plane.triple(line) {
            [0, 0, _] => AffineLine::Infinite,
            // [a:b:c] with b != 0: y = -(a/b) x - c/b
            [a, b, c] if b != 0 => {
                let bi = f.inv(b).unwrap();
                AffineLine::Sloped {
                    d: f.neg(f.mul(a, bi)),
                    b: f.neg(f.mul(c, bi)),
                }
            }
            [a, _, c] => AffineLine::Vertical {
                c: f.neg(f.div(c, a).unwrap()),
            },
        }
    }
}
