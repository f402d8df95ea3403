//! Generalized Möbius transformations and tridisk canonicalization.

use num_complex::Complex64;

use crate::disks::{canonical_tridisk, Disk, Packing, Point, Tridisk};
use crate::error::{Error, Result};

/// `z ↦ (a w + b) / (c w + d)` with `w = conj(z)` when `conjugate_first` is set.
///
/// Coefficients are kept normalized to `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub conjugate_first: bool,
}

fn to_c(p: &Point) -> Complex64 {
    Complex64::new(p.x, p.y)
}

fn to_p(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

impl MoebiusMap {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one, conjugate_first: false }
    }

    /// Builds a map from raw coefficients, normalizing the determinant to 1.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64, conjugate_first: bool) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-300) || !(det.norm() > 1e-15 * scale * scale) {
            return Err(Error::Domain("degenerate Moebius map (ad - bc = 0)".into()));
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s, conjugate_first })
    }

    /// Inversion through the circle with the given center and radius.
    pub fn inversion(center: Point, radius: f64) -> Self {
        let c0 = to_c(&center);
        // z ↦ c0 + R² / conj(z − c0)
        MoebiusMap::new(
            c0,
            Complex64::new(radius * radius, 0.0) - c0 * c0.conj(),
            Complex64::new(1.0, 0.0),
            -c0.conj(),
            true,
        )
        .expect("inversion has nonzero determinant")
    }

    /// Image of a point, `None` for the pole.
    pub fn apply(&self, z: Complex64) -> Option<Complex64> {
        let w = if self.conjugate_first { z.conj() } else { z };
        let den = self.c * w + self.d;
        if den.norm() == 0.0 {
            return None;
        }
        Some((self.a * w + self.b) / den)
    }

    pub fn apply_point(&self, p: &Point) -> Option<Point> {
        self.apply(to_c(p)).map(to_p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let (a2, b2, c2, d2) = if self.conjugate_first {
            (other.a.conj(), other.b.conj(), other.c.conj(), other.d.conj())
        } else {
            (other.a, other.b, other.c, other.d)
        };
        let a = self.a * a2 + self.b * c2;
        let b = self.a * b2 + self.b * d2;
        let c = self.c * a2 + self.d * c2;
        let d = self.c * b2 + self.d * d2;
        MoebiusMap::new(a, b, c, d, self.conjugate_first ^ other.conjugate_first)
            .expect("composition of invertible maps is invertible")
    }

    pub fn inverse(&self) -> MoebiusMap {
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        let m = if self.conjugate_first { (a.conj(), b.conj(), c.conj(), d.conj()) } else { (a, b, c, d) };
        MoebiusMap::new(m.0, m.1, m.2, m.3, self.conjugate_first).expect("inverse of invertible map")
    }

    /// The unique orientation-preserving map with `φ(z_i) = w_i`.
    pub fn from_three_points(z: [Complex64; 3], w: [Complex64; 3]) -> Result<Self> {
        check_distinct(&z, "input")?;
        check_distinct(&w, "output")?;
        let tz = cross_ratio_map(&z)?;
        let tw = cross_ratio_map(&w)?;
        Ok(tw.inverse().compose(&tz))
    }

    /// Image disk, computed from the image-of-circle formulas.
    ///
    /// Fails when the pole lies in the closed disk, i.e. the image is a half-plane or
    /// the exterior of a circle.
    pub fn apply_to_disk(&self, disk: &Disk) -> Result<Disk> {
        let mut p = to_c(&disk.center);
        if self.conjugate_first {
            p = p.conj();
        }
        let r = disk.radius;
        let cpd = self.c * p + self.d;
        let big = cpd.norm_sqr();
        let small = self.c.norm_sqr() * r * r;
        let den = big - small;
        if !(den > 1e-12 * (big + small)) {
            return Err(Error::EscapedDisk);
        }
        let center = ((self.a * p + self.b) * cpd.conj() - self.a * self.c.conj() * (r * r)) / den;
        let det = (self.a * self.d - self.b * self.c).norm();
        Ok(Disk::from_parts(to_p(center), r * det / den))
    }

    pub fn apply_to_packing(&self, p: &Packing) -> Result<Packing> {
        let disks = p.disks().iter().map(|d| self.apply_to_disk(d)).collect::<Result<Vec<_>>>()?;
        Ok(Packing::from_disks_unchecked(disks, p.contact_tol()))
    }
}

fn check_distinct(z: &[Complex64; 3], what: &str) -> Result<()> {
    let scale = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if (z[i] - z[j]).norm() <= 1e-14 * scale {
            return Err(Error::Domain(format!("repeated {what} point {}", z[i])));
        }
    }
    Ok(())
}

/// Sends `z1, z2, z3` to `0, 1, ∞`.
fn cross_ratio_map(z: &[Complex64; 3]) -> Result<MoebiusMap> {
    let [z1, z2, z3] = *z;
    MoebiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1), false)
}

/// Maps the marked triple onto the canonical tridisk so that every unmarked disk lands in
/// the canonical tricusp.
///
/// The orientation-preserving map sending contact points (12, 23, 31) to their canonical
/// counterparts is tried first; if it puts unmarked disks on the wrong side of the
/// incircle it is followed by inversion through the canonical incircle.
pub fn canonicalize_tridisk(p: &Packing, marks: [usize; 3]) -> Result<(Packing, MoebiusMap)> {
    let n = p.len();
    if marks.iter().any(|&m| m >= n) || marks[0] == marks[1] || marks[1] == marks[2] || marks[0] == marks[2] {
        return Err(Error::Domain(format!("invalid marks {marks:?} for {n} disks")));
    }
    let tol = p.contact_tol().max(f64::EPSILON);
    let tri = Tridisk::new(marks.map(|m| *p.disk(m)), tol).map_err(|e| match e {
        Error::NotTangent(_, err) => Error::NotTangent(marks, err),
        other => other,
    })?;
    let canon = canonical_tridisk();
    let src = tri.contact_points().map(|q| to_c(&q));
    let dst = canon.contact_points().map(|q| to_c(&q));
    let phi = MoebiusMap::from_three_points(src, dst)?;
    let inc = canon.incircle();
    let flipped = MoebiusMap::inversion(inc.center, inc.radius).compose(&phi);

    for map in [phi, flipped] {
        let mut disks = Vec::with_capacity(n);
        let mut ok = true;
        for (i, d) in p.disks().iter().enumerate() {
            if let Some(k) = marks.iter().position(|&m| m == i) {
                disks.push(canon.disks[k]);
                continue;
            }
            match map.apply_to_disk(d) {
                Ok(img) if canon.in_tricusp(&img.center) => disks.push(img),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok((Packing::from_disks_unchecked(disks, p.contact_tol()), map));
        }
    }
    Err(Error::Inconsistent(format!("unmarked disks do not fit in the canonical tricusp for marks {marks:?}")))
}
