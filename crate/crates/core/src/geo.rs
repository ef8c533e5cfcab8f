//! Great-circle geometry on a spherical earth.

/// Mean earth radius (IUGG), meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Latitude/longitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Self {
        LatLon { lat, lon }
    }

    fn unit_vector(self) -> [f64; 3] {
        let (phi, lambda) = (self.lat.to_radians(), self.lon.to_radians());
        [phi.cos() * lambda.cos(), phi.cos() * lambda.sin(), phi.sin()]
    }
}

/// Haversine distance in meters.
pub fn haversine_m(a: LatLon, b: LatLon) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Shortest great-circle distance in meters from `p` to the minor arc `a`–`b`.
pub fn point_segment_distance_m(p: LatLon, a: LatLon, b: LatLon) -> f64 {
    let endpoint = haversine_m(p, a).min(haversine_m(p, b));
    let (va, vb, vp) = (a.unit_vector(), b.unit_vector(), p.unit_vector());
    let n = cross(va, vb);
    let n_len = norm(n);
    if n_len < 1e-15 {
        // degenerate or antipodal segment
        return endpoint;
    }
    let n = [n[0] / n_len, n[1] / n_len, n[2] / n_len];
    let off_plane = dot(vp, n);
    let c = [vp[0] - off_plane * n[0], vp[1] - off_plane * n[1], vp[2] - off_plane * n[2]];
    if norm(c) < 1e-15 {
        // p is a pole of the great circle; every arc point is equidistant
        return endpoint;
    }
    // foot of the perpendicular lies on the minor arc iff it is between a and b
    let within = dot(cross(va, c), n) >= 0.0 && dot(cross(c, vb), n) >= 0.0;
    if within {
        (off_plane.clamp(-1.0, 1.0).asin().abs() * EARTH_RADIUS_M).min(endpoint)
    } else {
        endpoint
    }
}
