//! Vectors on the unit sphere, sign predicates, and the deterministic RNG
//! used by randomized search.
//!
//! All geometry in this crate lives on S² ⊂ R³. Points and loop normals are
//! unit vectors; a great circle is the zero set of `x ↦ n·x` for a unit
//! normal `n`, and every side/incidence decision reduces to the sign of a dot
//! product or of a 3×3 determinant. Tolerances are absolute on unit-scale
//! data.

use thiserror::Error;

/// Unit-norm invariant for [`UnitVec3`]: |x|² must be within this of 1.
pub const EPS_UNIT: f64 = 1e-12;

/// A loop passes through a vertex when |n·v| falls at or below this.
pub const EPS_VERTEX: f64 = 1e-9;

/// Three loops are concurrent when |det(n_i, n_j, n_k)| falls at or below this.
pub const EPS_CONCUR: f64 = 1e-9;

/// Minimum pairwise angle (radians) between distinct labeled points.
pub const EPS_DISTINCT: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("vector ({0}, {1}, {2}) is not unit length")]
    NotUnit(f64, f64, f64),
    #[error("cannot normalize a near-zero vector (norm {0})")]
    NearZero(f64),
}

/// A unit vector in R³: a point of S² or an oriented great-circle normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVec3 {
    /// Wraps components that are already unit length (within [`EPS_UNIT`]).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeomError> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > EPS_UNIT {
            return Err(GeomError::NotUnit(x, y, z));
        }
        Ok(Self { x, y, z })
    }

    /// Normalizes an arbitrary nonzero vector onto S².
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, GeomError> {
        let n = (x * x + y * y + z * z).sqrt();
        if n < 1e-14 {
            return Err(GeomError::NearZero(n));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn dot(&self, o: &UnitVec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &UnitVec3) -> [f64; 3] {
        [
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        ]
    }

    /// The antipodal point −p.
    pub fn antipode(&self) -> UnitVec3 {
        UnitVec3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Angle in [0, π] to another unit vector.
    pub fn angle_to(&self, o: &UnitVec3) -> f64 {
        self.dot(o).clamp(-1.0, 1.0).acos()
    }
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn normalize3(a: [f64; 3]) -> Result<UnitVec3, GeomError> {
    UnitVec3::normalized(a[0], a[1], a[2])
}

/// Scalar triple product det[a b c]; its sign is the orientation of the frame.
pub fn triple(a: &UnitVec3, b: &UnitVec3, c: &UnitVec3) -> f64 {
    dot3(a.cross(b), c.as_array())
}

/// Orthonormal tangent basis (u, w) at `p`, with w = p × u. Angles of tangent
/// directions measured against this basis are counterclockwise as seen from
/// outside the sphere.
pub fn tangent_basis(p: &UnitVec3) -> ([f64; 3], [f64; 3]) {
    // Pick the coordinate axis least aligned with p as the seed.
    let seed = if p.x.abs() <= p.y.abs() && p.x.abs() <= p.z.abs() {
        [1.0, 0.0, 0.0]
    } else if p.y.abs() <= p.z.abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let pa = p.as_array();
    let proj = dot3(seed, pa);
    let u = [
        seed[0] - proj * pa[0],
        seed[1] - proj * pa[1],
        seed[2] - proj * pa[2],
    ];
    let nu = norm3(u);
    let u = [u[0] / nu, u[1] / nu, u[2] / nu];
    let w = cross3(pa, u);
    (u, w)
}

/// Angle of the tangent component of `dir` at `p` against `basis`.
pub fn tangent_angle(basis: &([f64; 3], [f64; 3]), dir: [f64; 3]) -> f64 {
    dot3(dir, basis.1).atan2(dot3(dir, basis.0))
}

/// Point at parameter t ∈ \[0,1\] along the minor great-circle arc p → q.
pub fn slerp(p: &UnitVec3, q: &UnitVec3, t: f64) -> UnitVec3 {
    let omega = p.angle_to(q);
    if omega < 1e-12 {
        return *p;
    }
    let s = omega.sin();
    let a = ((1.0 - t) * omega).sin() / s;
    let b = (t * omega).sin() / s;
    UnitVec3::normalized(a * p.x + b * q.x, a * p.y + b * q.y, a * p.z + b * q.z)
        .expect("slerp of non-antipodal unit vectors")
}

/// SplitMix64 generator. Hand-rolled so that searched arrangements are
/// reproducible bit-for-bit across platforms and dependency upgrades; the
/// search contract is "same seed, same output".
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(1e-300);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform direction on S².
    pub fn unit_vec(&mut self) -> UnitVec3 {
        loop {
            let v = [self.normal(), self.normal(), self.normal()];
            if let Ok(u) = normalize3(v) {
                return u;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_invariant_enforced() {
        assert!(UnitVec3::new(1.0, 0.0, 0.0).is_ok());
        assert!(UnitVec3::new(1.0, 1e-5, 0.0).is_err());
        let u = UnitVec3::normalized(3.0, 4.0, 12.0).unwrap();
        assert!((u.dot(&u) - 1.0).abs() < EPS_UNIT);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let p = UnitVec3::normalized(0.3, -0.5, 0.81).unwrap();
        let (u, w) = tangent_basis(&p);
        assert!(dot3(u, p.as_array()).abs() < 1e-12);
        assert!(dot3(w, p.as_array()).abs() < 1e-12);
        assert!(dot3(u, w).abs() < 1e-12);
        assert!((norm3(u) - 1.0).abs() < 1e-12);
        assert!((norm3(w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slerp_endpoints_and_midpoint() {
        let p = UnitVec3::new(1.0, 0.0, 0.0).unwrap();
        let q = UnitVec3::new(0.0, 1.0, 0.0).unwrap();
        assert!(slerp(&p, &q, 0.0).angle_to(&p) < 1e-12);
        assert!(slerp(&p, &q, 1.0).angle_to(&q) < 1e-12);
        let m = slerp(&p, &q, 0.5);
        assert!((m.x - m.y).abs() < 1e-12);
    }

    #[test]
    fn rng_is_deterministic() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
