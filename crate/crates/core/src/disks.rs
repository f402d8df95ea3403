//! Disks, packings, inversive distance and tridisk geometry.

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Default relative tolerance for tangency and containment checks.
pub const DEFAULT_CONTACT_TOL: f64 = 1e-9;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(x: f64, y: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("invalid disk ({x}, {y}) r = {radius}")));
        }
        Ok(Disk { center: Point::new(x, y), radius })
    }

    pub(crate) fn from_parts(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn x(&self) -> f64 {
        self.center.x
    }

    pub fn y(&self) -> f64 {
        self.center.y
    }

    /// Point of `self`'s boundary on the ray towards `other`'s center.
    pub fn contact_point(&self, other: &Disk) -> Point {
        let d = other.center - self.center;
        self.center + d * (self.radius / d.norm())
    }

    pub fn contains_point(&self, q: &Point) -> bool {
        (q - self.center).norm() <= self.radius
    }

    pub fn scaled(&self, s: f64) -> Disk {
        Disk::from_parts(self.center * s, self.radius * s)
    }
}

/// `(|p_a - p_b|^2 - r_a^2 - r_b^2) / (2 r_a r_b)`.
pub fn inversive_distance(a: &Disk, b: &Disk) -> Result<f64> {
    if !(a.radius > 0.0) || !(b.radius > 0.0) {
        return Err(Error::Domain("inversive distance needs positive radii".into()));
    }
    Ok(invdist(a, b))
}

#[inline]
pub(crate) fn invdist(a: &Disk, b: &Disk) -> f64 {
    let d2 = (a.center - b.center).norm_squared();
    (d2 - (a.radius * a.radius + b.radius * b.radius)) / (2.0 * a.radius * b.radius)
}

/// Relative gap `|‖p_a − p_b‖ − (r_a + r_b)| / (r_a + r_b)`.
pub fn tangency_error(a: &Disk, b: &Disk) -> f64 {
    let s = a.radius + b.radius;
    ((a.center - b.center).norm() - s).abs() / s
}

/// Indexed disk family whose interiors are disjoint up to `contact_tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    disks: Vec<Disk>,
    contact_tol: f64,
}

impl Packing {
    pub fn new(disks: Vec<Disk>, contact_tol: f64) -> Result<Self> {
        if !(contact_tol >= 0.0) {
            return Err(Error::Domain(format!("contact_tol must be nonnegative, got {contact_tol}")));
        }
        for (i, d) in disks.iter().enumerate() {
            if !(d.radius > 0.0) || !d.radius.is_finite() || !d.center.x.is_finite() || !d.center.y.is_finite() {
                return Err(Error::Domain(format!("disk {i} is invalid: {d:?}")));
            }
        }
        let p = Packing { disks, contact_tol };
        if let Some((i, j)) = p.first_overlap() {
            return Err(Error::NotAPacking { i, j, invdist: p.invdist(i, j) });
        }
        Ok(p)
    }

    /// Skips the pairwise overlap check; used for intermediate numerical states.
    pub(crate) fn from_disks_unchecked(disks: Vec<Disk>, contact_tol: f64) -> Self {
        Packing { disks, contact_tol }
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn disk(&self, i: usize) -> &Disk {
        &self.disks[i]
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn contact_tol(&self) -> f64 {
        self.contact_tol
    }

    pub fn with_contact_tol(mut self, tol: f64) -> Self {
        self.contact_tol = tol;
        self
    }

    pub fn invdist(&self, i: usize, j: usize) -> f64 {
        invdist(&self.disks[i], &self.disks[j])
    }

    pub fn min_radius(&self) -> f64 {
        self.disks.iter().map(|d| d.radius).fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn into_disks(self) -> Vec<Disk> {
        self.disks
    }

    fn first_overlap(&self) -> Option<(usize, usize)> {
        let n = self.disks.len();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.disks[i], &self.disks[j]);
                let s = a.radius + b.radius;
                if (a.center - b.center).norm() < s - self.contact_tol * s {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Maximum deviation in any center coordinate or radius.
    pub fn max_deviation(&self, other: &Packing) -> f64 {
        assert_eq!(self.len(), other.len(), "packings differ in size");
        self.disks
            .iter()
            .zip(&other.disks)
            .map(|(a, b)| {
                (a.center.x - b.center.x).abs().max((a.center.y - b.center.y).abs()).max((a.radius - b.radius).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Three disks in mutual external tangency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tridisk {
    pub disks: [Disk; 3],
}

impl Tridisk {
    /// Checks pairwise tangency to relative tolerance `tol`.
    pub fn new(disks: [Disk; 3], tol: f64) -> Result<Self> {
        let err = max_tangency_error(&disks);
        if err > tol {
            return Err(Error::NotTangent([0, 1, 2], err));
        }
        Ok(Tridisk { disks })
    }

    /// Contact points in the order (12, 23, 31).
    pub fn contact_points(&self) -> [Point; 3] {
        let [a, b, c] = &self.disks;
        [a.contact_point(b), b.contact_point(c), c.contact_point(a)]
    }

    /// The circle through the three contact points, i.e. the inscribed circle of the
    /// center triangle.
    pub fn incircle(&self) -> Disk {
        let [a, b, c] = &self.disks;
        let la = (b.center - c.center).norm();
        let lb = (c.center - a.center).norm();
        let lc = (a.center - b.center).norm();
        let per = la + lb + lc;
        let center = (a.center * la + b.center * lb + c.center * lc) / per;
        let e1 = b.center - a.center;
        let e2 = c.center - a.center;
        let area = 0.5 * (e1.x * e2.y - e1.y * e2.x).abs();
        Disk::from_parts(center, 2.0 * area / per)
    }

    /// Strictly inside the incircle and strictly outside the three closed disks.
    pub fn in_tricusp(&self, q: &Point) -> bool {
        let inc = self.incircle();
        (q - inc.center).norm() < inc.radius && self.disks.iter().all(|d| (q - d.center).norm() > d.radius)
    }
}

fn max_tangency_error(d: &[Disk; 3]) -> f64 {
    tangency_error(&d[0], &d[1]).max(tangency_error(&d[1], &d[2])).max(tangency_error(&d[2], &d[0]))
}

/// Unit disks centered at (0,0), (2,0), (1,√3).
pub fn canonical_tridisk() -> Tridisk {
    Tridisk {
        disks: [
            Disk::from_parts(Point::new(0.0, 0.0), 1.0),
            Disk::from_parts(Point::new(2.0, 0.0), 1.0),
            Disk::from_parts(Point::new(1.0, SQRT_3), 1.0),
        ],
    }
}

/// The disk inside the tricusp of three mutually tangent disks that touches all three.
///
/// Uses the complex Descartes relation in coordinates centered at the centroid of the
/// three centers. Of the two roots, the one with the smaller tangency residual is taken.
pub fn inner_soddy_disk(a: &Disk, b: &Disk, c: &Disk, tol: f64) -> Result<Disk> {
    let err = max_tangency_error(&[*a, *b, *c]);
    if err > tol {
        return Err(Error::NotTangent([0, 1, 2], err));
    }
    let origin = (a.center + b.center + c.center) / 3.0;
    let z = |d: &Disk| Complex64::new(d.center.x - origin.x, d.center.y - origin.y);
    let (k1, k2, k3) = (1.0 / a.radius, 1.0 / b.radius, 1.0 / c.radius);
    let (z1, z2, z3) = (z(a), z(b), z(c));
    let k4 = k1 + k2 + k3 + 2.0 * (k1 * k2 + k2 * k3 + k3 * k1).sqrt();
    let lin = z1 * k1 + z2 * k2 + z3 * k3;
    let root = (z1 * z2 * (k1 * k2) + z2 * z3 * (k2 * k3) + z3 * z1 * (k3 * k1)).sqrt() * 2.0;
    let r4 = 1.0 / k4;
    let candidates = [(lin + root) / k4, (lin - root) / k4];
    let residual = |w: Complex64| {
        [(z1, a.radius), (z2, b.radius), (z3, c.radius)]
            .iter()
            .map(|&(zi, ri)| ((w - zi).norm() - (r4 + ri)).abs() / (r4 + ri))
            .fold(0.0, f64::max)
    };
    let best = if residual(candidates[0]) <= residual(candidates[1]) { candidates[0] } else { candidates[1] };
    Ok(Disk::from_parts(Point::new(best.re + origin.x, best.im + origin.y), r4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(x: f64, y: f64, r: f64) -> Disk {
        Disk::new(x, y, r).unwrap()
    }

    /// Independent oracle: three-point circumcircle.
    fn circumcircle(p: [Point; 3]) -> (Point, f64) {
        let (ax, ay, bx, by, cx, cy) = (p[0].x, p[0].y, p[1].x, p[1].y, p[2].x, p[2].y);
        let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        let ux =
            ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
        let uy =
            ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
        let c = Point::new(ux, uy);
        (c, (p[0] - c).norm())
    }

    #[test]
    fn inversive_distance_examples() {
        assert_eq!(inversive_distance(&disk(0., 0., 1.), &disk(2., 0., 1.)).unwrap(), 1.0);
        assert_eq!(inversive_distance(&disk(0., 0., 3.), &disk(0., 0., 3.)).unwrap(), -1.0);
        assert_eq!(inversive_distance(&disk(0., 0., 1.), &disk(4., 0., 1.)).unwrap(), 7.0);
    }

    #[test]
    fn nonpositive_radius_is_domain_error() {
        let bad = Disk::from_parts(Point::new(0., 0.), 0.0);
        assert!(matches!(inversive_distance(&bad, &disk(1., 0., 1.)), Err(Error::Domain(_))));
        assert!(Disk::new(0., 0., -1.).is_err());
    }

    #[test]
    fn canonical_tridisk_is_tangent() {
        let t = canonical_tridisk();
        let [a, b, c] = &t.disks;
        for (p, q) in [(a, b), (b, c), (c, a)] {
            assert!((invdist(p, q) - 1.0).abs() < 1e-15);
        }
        assert_eq!(t.disks[2].center, Point::new(1.0, 3f64.sqrt()));
    }

    #[test]
    fn incircle_matches_circumcircle_oracle() {
        let t = canonical_tridisk();
        let inc = t.incircle();
        let (c, r) = circumcircle([
            Point::new(1.0, 0.0),
            Point::new(1.5, 3f64.sqrt() / 2.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ]);
        assert!((inc.center - c).norm() < 1e-14);
        assert!((inc.radius - r).abs() < 1e-14);
        assert!((inc.radius - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((inc.center - Point::new(1.0, 3f64.sqrt() / 3.0)).norm() < 1e-14);

        // a non-equilateral tridisk
        let a = disk(0.0, 0.0, 1.0);
        let b = disk(3.0, 0.0, 2.0);
        let rc = 0.5;
        let c = {
            // place c tangent to both by intersecting circles of radius 1.5 and 2.5
            let (d1, d2) = (1.0 + rc, 2.0 + rc);
            let x = (d1 * d1 - d2 * d2 + 9.0) / 6.0;
            disk(x, (d1 * d1 - x * x).sqrt(), rc)
        };
        let t = Tridisk::new([a, b, c], 1e-12).unwrap();
        let (oc, orad) = circumcircle(t.contact_points());
        assert!((t.incircle().center - oc).norm() < 1e-12);
        assert!((t.incircle().radius - orad).abs() < 1e-12);
    }

    #[test]
    fn incircle_scales_with_tridisk() {
        let t = canonical_tridisk();
        let s = 3.7;
        let ts = Tridisk { disks: t.disks.map(|d| d.scaled(s)) };
        assert!((ts.incircle().radius - s * t.incircle().radius).abs() < 1e-13);
    }

    #[test]
    fn tricusp_membership() {
        let t = canonical_tridisk();
        assert!(t.in_tricusp(&Point::new(1.0, 3f64.sqrt() / 3.0)));
        assert!(!t.in_tricusp(&Point::new(0.0, 0.0)));
        assert!(!t.in_tricusp(&Point::new(100.0, 0.0)));
    }

    #[test]
    fn soddy_in_canonical_tricusp() {
        let [a, b, c] = canonical_tridisk().disks;
        let d = inner_soddy_disk(&a, &b, &c, 1e-12).unwrap();
        assert!((d.center - Point::new(1.0, 3f64.sqrt() / 3.0)).norm() < 1e-14);
        assert!((1.0 / d.radius - (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
        for o in [&a, &b, &c] {
            assert!((invdist(&d, o) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn soddy_recursive_insertion_stays_tangent() {
        let [a, b, c] = canonical_tridisk().disks;
        let d = inner_soddy_disk(&a, &b, &c, 1e-12).unwrap();
        let e = inner_soddy_disk(&a, &b, &d, 1e-12).unwrap();
        let f = inner_soddy_disk(&a, &e, &d, 1e-12).unwrap();
        for (x, y) in [(&e, &a), (&e, &b), (&e, &d), (&f, &a), (&f, &e), (&f, &d)] {
            assert!((invdist(x, y) - 1.0).abs() < 1e-12, "{}", invdist(x, y));
        }
    }

    #[test]
    fn soddy_rejects_non_tangent() {
        let a = disk(0., 0., 1.);
        let b = disk(3., 0., 1.);
        let c = disk(1., 2., 1.);
        assert!(matches!(inner_soddy_disk(&a, &b, &c, 1e-9), Err(Error::NotTangent(..))));
    }

    #[test]
    fn packing_rejects_overlap() {
        let r = Packing::new(vec![disk(0., 0., 1.), disk(1., 0., 1.)], 1e-9);
        assert!(matches!(r, Err(Error::NotAPacking { i: 0, j: 1, .. })));
        assert!(Packing::new(vec![disk(0., 0., 1.), disk(2., 0., 1.)], 1e-9).is_ok());
    }
}
