use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{dot, lit, norm, Real};

/// Open half-space `{y : <normal, y> > offset}` with inward unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct HalfspaceSpec<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Real> HalfspaceSpec<T> {
    #[inline]
    pub fn slack(&self, x: &[T]) -> T {
        dot(&self.normal, x) - self.offset
    }
}

/// Intersection of finitely many open half-spaces with a certified interior point.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Polytope<T> {
    pub halfspaces: Vec<HalfspaceSpec<T>>,
    pub interior_point: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounded: Option<bool>,
    #[serde(skip)]
    vertices: OnceLock<VertexCache<T>>,
}

#[derive(Clone, Debug)]
struct VertexCache<T> {
    // Vertices of the polytope clipped to |y_k| <= big, and to |y_k| <= 2 big.
    near: Vec<Vec<T>>,
    far: Vec<Vec<T>>,
    bounded: bool,
}

impl<T: PartialEq> PartialEq for Polytope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.halfspaces == other.halfspaces
            && self.interior_point == other.interior_point
            && self.bounded == other.bounded
    }
}

impl<T: Real> Polytope<T> {
    pub fn new(halfspaces: Vec<HalfspaceSpec<T>>, interior_point: Vec<T>) -> Self {
        Self {
            halfspaces,
            interior_point,
            bounded: None,
            vertices: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.interior_point.len()
    }

    fn scale(&self) -> T {
        let mut s = T::one();
        for v in &self.interior_point {
            s = s.max(v.abs());
        }
        for h in &self.halfspaces {
            s = s.max(h.offset.abs());
        }
        s
    }

    fn cache(&self) -> &VertexCache<T> {
        self.vertices.get_or_init(|| {
            let big = lit::<T>(1e6) * self.scale();
            let near = clipped_vertices(&self.halfspaces, self.dim(), big);
            let far = clipped_vertices(&self.halfspaces, self.dim(), big + big);
            let reach = |vs: &[Vec<T>]| {
                vs.iter()
                    .map(|v| v.iter().fold(T::zero(), |m, c| m.max(c.abs())))
                    .fold(T::zero(), T::max)
            };
            let bounded = reach(&far) <= reach(&near) * (T::one() + lit(1e-9));
            VertexCache { near, far, bounded }
        })
    }

    pub fn is_bounded(&self) -> bool {
        self.cache().bounded
    }

    /// `sup_{y in P} <u, y>`, infinite when the polytope is unbounded along `u`.
    pub fn support(&self, u: &[T]) -> T {
        let c = self.cache();
        let best = |vs: &[Vec<T>]| vs.iter().map(|v| dot(u, v)).fold(T::neg_infinity(), T::max);
        let a = best(&c.near);
        let b = best(&c.far);
        if (b - a).abs() > lit::<T>(1e-9) * (T::one() + a.abs()) {
            T::infinity()
        } else {
            a
        }
    }

    /// Vertices of the polytope clipped to a large box (exact vertices when bounded).
    pub fn clipped_vertices(&self) -> &[Vec<T>] {
        &self.cache().near
    }
}

fn solve_small<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < lit(1e-12) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
                let v = b[col];
                b[r] -= f * v;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn clipped_vertices<T: Real>(hs: &[HalfspaceSpec<T>], n: usize, big: T) -> Vec<Vec<T>> {
    let mut rows: Vec<(Vec<T>, T)> = hs.iter().map(|h| (h.normal.clone(), h.offset)).collect();
    for k in 0..n {
        let mut e = vec![T::zero(); n];
        e[k] = T::one();
        rows.push((e.clone(), -big));
        e[k] = -T::one();
        rows.push((e, -big));
    }
    let m = rows.len();
    let tol = lit::<T>(1e-9) * big.max(T::one());
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<T>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<T> = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(v) = solve_small(a, b) {
            if rows.iter().all(|(nr, off)| dot(nr, &v) - *off >= -tol) {
                out.push(v);
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Declarative open domain in `R^n`.
///
/// Serialized as a JSON object with a `"type"` discriminator; see
/// `docs/domain.schema.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub enum DomainSpec<T> {
    /// `(a, b)` in `R^1`; `a` may be `-inf` and `b` may be `+inf` when built in code.
    Interval { a: T, b: T },
    /// Sorted, pairwise disjoint open intervals in `R^1`.
    IntervalUnion { intervals: Vec<[T; 2]> },
    Box { min: Vec<T>, max: Vec<T> },
    Ball { center: Vec<T>, radius: T },
    Halfspace { normal: Vec<T>, offset: T },
    Polytope(Polytope<T>),
    /// Disjoint union of convex parts.
    ConvexUnion { parts: Vec<DomainSpec<T>> },
}

/// Parameter intervals `{t : x + t w in Omega}`, sorted and disjoint; endpoints may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct RayTrace<T> {
    pub intervals: Vec<(T, T)>,
}

impl<T: Real> RayTrace<T> {
    /// Component containing `t = 0`, if any.
    pub fn component_at_zero(&self) -> Option<(T, T)> {
        self.intervals
            .iter()
            .copied()
            .find(|&(lo, hi)| lo < T::zero() && hi > T::zero())
    }

    pub fn inf(&self) -> Option<T> {
        self.intervals.first().map(|p| p.0)
    }

    pub fn sup(&self) -> Option<T> {
        self.intervals.last().map(|p| p.1)
    }

    pub fn contains(&self, t: T) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < t && t < hi)
    }
}

fn interval_trace<T: Real>(a: T, b: T, x: T, w: T) -> Option<(T, T)> {
    if w == T::zero() {
        return if a < x && x < b {
            Some((T::neg_infinity(), T::infinity()))
        } else {
            None
        };
    }
    let t1 = (a - x) / w;
    let t2 = (b - x) / w;
    let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

fn halfspace_trace<T: Real>(h: &HalfspaceSpec<T>, x: &[T], w: &[T]) -> Option<(T, T)> {
    let s = h.slack(x);
    let rate = dot(&h.normal, w);
    if rate > T::zero() {
        Some((-s / rate, T::infinity()))
    } else if rate < T::zero() {
        Some((T::neg_infinity(), -s / rate))
    } else if s > T::zero() {
        Some((T::neg_infinity(), T::infinity()))
    } else {
        None
    }
}

impl<T: Real> DomainSpec<T> {
    pub fn interval(a: T, b: T) -> Result<Self> {
        let d = DomainSpec::Interval { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn unit_box(n: usize) -> Self {
        DomainSpec::Box {
            min: vec![T::zero(); n],
            max: vec![T::one(); n],
        }
    }

    pub fn ball(center: Vec<T>, radius: T) -> Result<Self> {
        let d = DomainSpec::Ball { center, radius };
        d.validate()?;
        Ok(d)
    }

    /// Half-space `{<normal, y> > offset}`; the normal is normalized.
    pub fn halfspace(normal: Vec<T>, offset: T) -> Result<Self> {
        DomainSpec::Halfspace { normal, offset }.normalized()
    }

    pub fn polytope(halfspaces: Vec<HalfspaceSpec<T>>, interior_point: Vec<T>) -> Result<Self> {
        DomainSpec::Polytope(Polytope::new(halfspaces, interior_point)).normalized()
    }

    /// Slab `{offset < x_axis < offset + width}` in `R^n`.
    pub fn slab(n: usize, axis: usize, offset: T, width: T) -> Result<Self> {
        let mut e = vec![T::zero(); n];
        e[axis] = T::one();
        let mut f = vec![T::zero(); n];
        f[axis] = -T::one();
        let mut p = vec![T::zero(); n];
        p[axis] = offset + lit::<T>(0.5) * width;
        Self::polytope(
            vec![
                HalfspaceSpec { normal: e, offset },
                HalfspaceSpec {
                    normal: f,
                    offset: -(offset + width),
                },
            ],
            p,
        )
    }

    /// Parses JSON, normalizes half-space normals and validates.
    pub fn from_json(s: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let d: Self = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        d.normalized()
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string(self).expect("domain serializes")
    }

    /// Returns a copy with unit half-space normals, then validates it.
    pub fn normalized(self) -> Result<Self> {
        let fix = |h: HalfspaceSpec<T>| -> Result<HalfspaceSpec<T>> {
            let l = norm(&h.normal);
            if !(l > T::zero()) || !l.is_finite() {
                return Err(Error::InvalidDomain("half-space normal must be nonzero".into()));
            }
            Ok(HalfspaceSpec {
                normal: h.normal.iter().map(|&v| v / l).collect(),
                offset: h.offset / l,
            })
        };
        let d = match self {
            DomainSpec::Halfspace { normal, offset } => {
                let h = fix(HalfspaceSpec { normal, offset })?;
                DomainSpec::Halfspace {
                    normal: h.normal,
                    offset: h.offset,
                }
            }
            DomainSpec::Polytope(p) => {
                let hs = p.halfspaces.into_iter().map(fix).collect::<Result<Vec<_>>>()?;
                let mut q = Polytope::new(hs, p.interior_point);
                q.bounded = p.bounded;
                DomainSpec::Polytope(q)
            }
            DomainSpec::ConvexUnion { parts } => DomainSpec::ConvexUnion {
                parts: parts.into_iter().map(|p| p.normalized()).collect::<Result<Vec<_>>>()?,
            },
            other => other,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } | DomainSpec::IntervalUnion { .. } => 1,
            DomainSpec::Box { min, .. } => min.len(),
            DomainSpec::Ball { center, .. } => center.len(),
            DomainSpec::Halfspace { normal, .. } => normal.len(),
            DomainSpec::Polytope(p) => p.dim(),
            DomainSpec::ConvexUnion { parts } => parts.first().map_or(0, |p| p.dim()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainSpec::Interval { .. } => "interval",
            DomainSpec::IntervalUnion { .. } => "interval_union",
            DomainSpec::Box { .. } => "box",
            DomainSpec::Ball { .. } => "ball",
            DomainSpec::Halfspace { .. } => "halfspace",
            DomainSpec::Polytope(_) => "polytope",
            DomainSpec::ConvexUnion { .. } => "convex_union",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDomain(m));
        let n = self.dim();
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        match self {
            DomainSpec::Interval { a, b } => {
                if a.is_nan() || b.is_nan() || !(a < b) {
                    return bad("interval needs a < b".into());
                }
            }
            DomainSpec::IntervalUnion { intervals } => {
                if intervals.is_empty() {
                    return bad("interval_union needs at least one interval".into());
                }
                for iv in intervals {
                    if iv[0].is_nan() || iv[1].is_nan() || !(iv[0] < iv[1]) {
                        return bad("interval_union members need a < b".into());
                    }
                }
                for pair in intervals.windows(2) {
                    if pair[0][1] > pair[1][0] {
                        return bad("interval_union members must be sorted and disjoint".into());
                    }
                }
            }
            DomainSpec::Box { min, max } => {
                if min.len() != max.len() || min.iter().zip(max).any(|(a, b)| !(a < b)) {
                    return bad("box needs min < max in every coordinate".into());
                }
            }
            DomainSpec::Ball { center, radius } => {
                if !(*radius > T::zero()) || center.iter().any(|c| !c.is_finite()) {
                    return bad("ball needs a finite center and radius > 0".into());
                }
            }
            DomainSpec::Halfspace { normal, offset } => {
                if (norm(normal) - T::one()).abs() > lit(1e-9) || !offset.is_finite() {
                    return bad("half-space needs a unit normal and finite offset".into());
                }
            }
            DomainSpec::Polytope(p) => {
                if p.halfspaces.is_empty() {
                    return bad("polytope needs at least one half-space".into());
                }
                if p.halfspaces.iter().any(|h| h.normal.len() != n) {
                    return bad("polytope half-space dimension mismatch".into());
                }
                if p.halfspaces.iter().any(|h| (norm(&h.normal) - T::one()).abs() > lit(1e-9)) {
                    return bad("polytope half-space normals must be unit vectors".into());
                }
                if let Some(h) = p.halfspaces.iter().find(|h| !(h.slack(&p.interior_point) > T::zero())) {
                    return bad(format!(
                        "interior point violates half-space with normal {:?}: polytope has empty interior or the point is not interior",
                        h.normal.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>()
                    ));
                }
                if let Some(flag) = p.bounded {
                    if flag != p.is_bounded() {
                        return bad(format!("declared bounded = {flag} contradicts the half-spaces"));
                    }
                }
            }
            DomainSpec::ConvexUnion { parts } => {
                if parts.is_empty() {
                    return bad("convex_union needs at least one part".into());
                }
                for part in parts {
                    part.validate()?;
                    if part.dim() != n {
                        return bad("convex_union parts must share a dimension".into());
                    }
                    if !part.is_convex() {
                        return bad("convex_union parts must be convex".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// True for variants whose membership set is convex.
    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::IntervalUnion { intervals } => intervals.len() == 1,
            DomainSpec::ConvexUnion { parts } => parts.len() == 1,
            _ => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::Interval { a, b } => a.is_finite() && b.is_finite(),
            DomainSpec::IntervalUnion { intervals } => {
                intervals.iter().all(|iv| iv[0].is_finite() && iv[1].is_finite())
            }
            DomainSpec::Box { .. } | DomainSpec::Ball { .. } => true,
            DomainSpec::Halfspace { .. } => false,
            DomainSpec::Polytope(p) => p.is_bounded(),
            DomainSpec::ConvexUnion { parts } => parts.iter().all(|p| p.is_bounded()),
        }
    }

    /// Open-set membership; boundary points are outside.
    pub fn contains(&self, x: &[T]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            DomainSpec::Interval { a, b } => *a < x[0] && x[0] < *b,
            DomainSpec::IntervalUnion { intervals } => intervals.iter().any(|iv| iv[0] < x[0] && x[0] < iv[1]),
            DomainSpec::Box { min, max } => x.iter().zip(min.iter().zip(max)).all(|(v, (lo, hi))| lo < v && v < hi),
            DomainSpec::Ball { center, radius } => {
                let r2 = x.iter().zip(center).fold(T::zero(), |acc, (a, c)| acc + (*a - *c) * (*a - *c));
                r2 < *radius * *radius
            }
            DomainSpec::Halfspace { normal, offset } => dot(normal, x) > *offset,
            DomainSpec::Polytope(p) => p.halfspaces.iter().all(|h| h.slack(x) > T::zero()),
            DomainSpec::ConvexUnion { parts } => parts.iter().any(|p| p.contains(x)),
        }
    }

    /// Ray trace without the membership precondition.
    pub fn trace_raw(&self, x: &[T], w: &[T]) -> RayTrace<T> {
        let mut intervals = Vec::with_capacity(2);
        match self {
            DomainSpec::Interval { a, b } => intervals.extend(interval_trace(*a, *b, x[0], w[0])),
            DomainSpec::IntervalUnion { intervals: ivs } => {
                for iv in ivs {
                    intervals.extend(interval_trace(iv[0], iv[1], x[0], w[0]));
                }
            }
            DomainSpec::Box { min, max } => {
                let mut lo = T::neg_infinity();
                let mut hi = T::infinity();
                for k in 0..x.len() {
                    match interval_trace(min[k], max[k], x[k], w[k]) {
                        Some((a, b)) => {
                            lo = lo.max(a);
                            hi = hi.min(b);
                        }
                        None => {
                            hi = lo;
                            break;
                        }
                    }
                }
                if lo < hi {
                    intervals.push((lo, hi));
                }
            }
            DomainSpec::Ball { center, radius } => {
                let d: Vec<T> = x.iter().zip(center).map(|(a, c)| *a - *c).collect();
                let b = dot(w, &d);
                let c = dot(&d, &d) - *radius * *radius;
                let disc = b * b - c;
                if disc > T::zero() {
                    let s = disc.sqrt();
                    intervals.push((-b - s, -b + s));
                }
            }
            DomainSpec::Halfspace { normal, offset } => {
                let h = HalfspaceSpec {
                    normal: normal.clone(),
                    offset: *offset,
                };
                intervals.extend(halfspace_trace(&h, x, w));
            }
            DomainSpec::Polytope(p) => {
                let mut lo = T::neg_infinity();
                let mut hi = T::infinity();
                for h in &p.halfspaces {
                    match halfspace_trace(h, x, w) {
                        Some((a, b)) => {
                            lo = lo.max(a);
                            hi = hi.min(b);
                        }
                        None => {
                            hi = lo;
                            break;
                        }
                    }
                }
                if lo < hi {
                    intervals.push((lo, hi));
                }
            }
            DomainSpec::ConvexUnion { parts } => {
                for part in parts {
                    intervals.extend(part.trace_raw(x, w).intervals);
                }
            }
        }
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        RayTrace { intervals }
    }

    /// Exact parameter intervals `{t : x + t w in Omega}` for `x` inside the domain.
    pub fn ray_intervals(&self, x: &[T], w: &[T]) -> Result<RayTrace<T>> {
        if !self.contains(x) {
            return Err(Error::outside(x));
        }
        Ok(self.trace_raw(x, w))
    }

    /// Part of a union domain containing `x`.
    fn part_containing(&self, x: &[T]) -> Option<DomainSpec<T>> {
        match self {
            DomainSpec::IntervalUnion { intervals } => intervals
                .iter()
                .find(|iv| iv[0] < x[0] && x[0] < iv[1])
                .map(|iv| DomainSpec::Interval { a: iv[0], b: iv[1] }),
            DomainSpec::ConvexUnion { parts } => parts.iter().find(|p| p.contains(x)).cloned(),
            _ => None,
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn dist_to_boundary(&self, x: &[T]) -> Result<T> {
        if !self.contains(x) {
            return Err(Error::outside(x));
        }
        Ok(match self {
            DomainSpec::Interval { a, b } => (x[0] - *a).min(*b - x[0]),
            DomainSpec::Box { min, max } => x
                .iter()
                .zip(min.iter().zip(max))
                .fold(T::infinity(), |m, (v, (lo, hi))| m.min(*v - *lo).min(*hi - *v)),
            DomainSpec::Ball { center, radius } => {
                let d: Vec<T> = x.iter().zip(center).map(|(a, c)| *a - *c).collect();
                *radius - norm(&d)
            }
            DomainSpec::Halfspace { normal, offset } => dot(normal, x) - *offset,
            DomainSpec::Polytope(p) => p.halfspaces.iter().fold(T::infinity(), |m, h| m.min(h.slack(x))),
            DomainSpec::IntervalUnion { .. } | DomainSpec::ConvexUnion { .. } => {
                return self.part_containing(x).expect("member lies in a part").dist_to_boundary(x)
            }
        })
    }

    /// Width `D_Omega(x)` of the narrowest slab containing the domain and bounded by
    /// a supporting hyperplane at a boundary point nearest to `x`.
    pub fn width(&self, x: &[T]) -> Result<T> {
        if !self.is_convex() {
            return Err(Error::NotConvex(self.kind_name()));
        }
        let d = self.dist_to_boundary(x)?;
        let tie = |s: T| s <= d + lit::<T>(1e-12) * (T::one() + d.abs());
        Ok(match self {
            DomainSpec::Interval { a, b } => *b - *a,
            DomainSpec::Box { min, max } => {
                let mut best = T::infinity();
                for k in 0..x.len() {
                    if tie(x[k] - min[k]) || tie(max[k] - x[k]) {
                        best = best.min(max[k] - min[k]);
                    }
                }
                best
            }
            DomainSpec::Ball { radius, .. } => *radius + *radius,
            DomainSpec::Halfspace { .. } => T::infinity(),
            DomainSpec::Polytope(p) => {
                let mut best = T::infinity();
                for h in &p.halfspaces {
                    if tie(h.slack(x)) {
                        best = best.min(p.support(&h.normal) - h.offset);
                    }
                }
                best
            }
            DomainSpec::IntervalUnion { .. } | DomainSpec::ConvexUnion { .. } => {
                return self.part_containing(x).expect("member lies in a part").width(x)
            }
        })
    }

    /// Axis-aligned bounding box, possibly with infinite extents.
    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        let n = self.dim();
        match self {
            DomainSpec::Interval { a, b } => (vec![*a], vec![*b]),
            DomainSpec::IntervalUnion { intervals } => {
                (vec![intervals[0][0]], vec![intervals[intervals.len() - 1][1]])
            }
            DomainSpec::Box { min, max } => (min.clone(), max.clone()),
            DomainSpec::Ball { center, radius } => (
                center.iter().map(|c| *c - *radius).collect(),
                center.iter().map(|c| *c + *radius).collect(),
            ),
            DomainSpec::Halfspace { .. } => (vec![T::neg_infinity(); n], vec![T::infinity(); n]),
            DomainSpec::Polytope(p) => {
                let mut lo = vec![T::infinity(); n];
                let mut hi = vec![T::neg_infinity(); n];
                for k in 0..n {
                    let mut e = vec![T::zero(); n];
                    e[k] = T::one();
                    hi[k] = p.support(&e);
                    e[k] = -T::one();
                    lo[k] = -p.support(&e);
                }
                (lo, hi)
            }
            DomainSpec::ConvexUnion { parts } => {
                let mut lo = vec![T::infinity(); n];
                let mut hi = vec![T::neg_infinity(); n];
                for part in parts {
                    let (a, b) = part.bounding_box();
                    for k in 0..n {
                        lo[k] = lo[k].min(a[k]);
                        hi[k] = hi[k].max(b[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// A deterministic interior point per part (one point for convex domains).
    pub fn reference_points(&self) -> Vec<Vec<T>> {
        let half = lit::<T>(0.5);
        match self {
            DomainSpec::Interval { a, b } => vec![vec![finite_mid(*a, *b)]],
            DomainSpec::IntervalUnion { intervals } => {
                intervals.iter().map(|iv| vec![finite_mid(iv[0], iv[1])]).collect()
            }
            DomainSpec::Box { min, max } => {
                vec![min.iter().zip(max).map(|(a, b)| half * (*a + *b)).collect()]
            }
            DomainSpec::Ball { center, .. } => vec![center.clone()],
            DomainSpec::Halfspace { normal, offset } => {
                vec![normal.iter().map(|v| *v * (*offset + T::one())).collect()]
            }
            DomainSpec::Polytope(p) => vec![p.interior_point.clone()],
            DomainSpec::ConvexUnion { parts } => parts.iter().flat_map(|p| p.reference_points()).collect(),
        }
    }
}

fn finite_mid<T: Real>(a: T, b: T) -> T {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => lit::<T>(0.5) * (a + b),
        (true, false) => a + T::one(),
        (false, true) => b - T::one(),
        (false, false) => T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> DomainSpec<f64> {
        DomainSpec::<f64>::unit_box(2)
    }

    #[test]
    fn interval_trace_example() {
        let d = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let t = d.ray_intervals(&[0.25], &[1.0]).unwrap();
        assert_eq!(t.intervals, vec![(-0.25, 0.75)]);
    }

    #[test]
    fn ball_trace_from_center() {
        let d = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        for k in 0..8 {
            let th = k as f64 * 0.7;
            let t = d.ray_intervals(&[0.0, 0.0], &[th.cos(), th.sin()]).unwrap();
            assert_eq!(t.intervals.len(), 1);
            assert!((t.intervals[0].0 + 1.0).abs() < 1e-15 && (t.intervals[0].1 - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn halfspace_trace_projection_identity() {
        let d = DomainSpec::<f64>::halfspace(vec![0.0, 1.0], 0.0).unwrap();
        let x = [0.3, 0.7];
        let w = [0.6, -0.8];
        let t = d.ray_intervals(&x, &w).unwrap();
        assert_eq!(t.intervals.len(), 1);
        assert_eq!(t.intervals[0].0, f64::NEG_INFINITY);
        assert!((t.intervals[0].1 - 0.7 / 0.8).abs() < 1e-15);
    }

    #[test]
    fn outside_points_are_rejected() {
        let d = unit_square();
        assert!(matches!(d.ray_intervals(&[1.5, 0.5], &[1.0, 0.0]), Err(Error::OutsideDomain { .. })));
        assert!(d.dist_to_boundary(&[0.0, 0.5]).is_err());
    }

    #[test]
    fn distance_examples() {
        let ball = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(ball.dist_to_boundary(&[0.0, 0.0]).unwrap(), 1.0);
        assert!((unit_square().dist_to_boundary(&[0.3, 0.2]).unwrap() - 0.2).abs() < 1e-15);
        let u = DomainSpec::<f64>::IntervalUnion {
            intervals: vec![[0.0, 1.0], [2.0, 3.0]],
        };
        assert!((u.dist_to_boundary(&[2.9]).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn width_examples() {
        assert_eq!(unit_square().width(&[0.3, 0.2]).unwrap(), 1.0);
        let ball = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(ball.width(&[0.2, -0.4]).unwrap(), 2.0);
        let hs = DomainSpec::<f64>::halfspace(vec![0.0, 1.0], 0.0).unwrap();
        assert!(hs.width(&[3.0, 0.1]).unwrap().is_infinite());
        let rect = DomainSpec::Box {
            min: vec![0.0, 0.0],
            max: vec![1.0, 10.0],
        };
        // nearest face x2 = 0, slab width 10
        assert_eq!(rect.width(&[0.5, 0.1]).unwrap(), 10.0);
        // nearest face x1 = 0, slab width 1
        assert_eq!(rect.width(&[0.1, 5.0]).unwrap(), 1.0);
        let u = DomainSpec::IntervalUnion {
            intervals: vec![[0.0, 1.0], [2.0, 3.0]],
        };
        assert!(matches!(u.width(&[0.5]), Err(Error::NotConvex(_))));
    }

    #[test]
    fn polytope_square_matches_box() {
        let hs = vec![
            HalfspaceSpec { normal: vec![1.0, 0.0], offset: 0.0 },
            HalfspaceSpec { normal: vec![-1.0, 0.0], offset: -1.0 },
            HalfspaceSpec { normal: vec![0.0, 1.0], offset: 0.0 },
            HalfspaceSpec { normal: vec![0.0, -1.0], offset: -1.0 },
        ];
        let p = DomainSpec::<f64>::polytope(hs, vec![0.5, 0.5]).unwrap();
        let b = unit_square();
        assert!(p.is_bounded());
        for &x in &[[0.3, 0.2], [0.5, 0.5], [0.9, 0.45], [0.1, 0.1]] {
            assert!((p.dist_to_boundary(&x).unwrap() - b.dist_to_boundary(&x).unwrap()).abs() < 1e-14);
            assert!((p.width(&x).unwrap() - b.width(&x).unwrap()).abs() < 1e-9);
            let w = [0.6, 0.8];
            let tp = p.ray_intervals(&x, &w).unwrap().intervals;
            let tb = b.ray_intervals(&x, &w).unwrap().intervals;
            assert!((tp[0].0 - tb[0].0).abs() < 1e-14 && (tp[0].1 - tb[0].1).abs() < 1e-14);
        }
    }

    #[test]
    fn triangle_width_uses_opposite_vertex() {
        // Triangle (0,0), (2,0), (0,1): nearest side y = 0 near the bottom, opposite vertex height 1.
        let hs = vec![
            HalfspaceSpec { normal: vec![0.0, 1.0], offset: 0.0 },
            HalfspaceSpec { normal: vec![1.0, 0.0], offset: 0.0 },
            HalfspaceSpec { normal: vec![-1.0, -2.0], offset: -2.0 },
        ];
        let t = DomainSpec::<f64>::polytope(hs, vec![0.5, 0.25]).unwrap();
        assert!((t.width(&[0.8, 0.1]).unwrap() - 1.0).abs() < 1e-9);
        // nearest side x = 0, width 2
        assert!((t.width(&[0.05, 0.3]).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn slab_is_unbounded_with_finite_width() {
        let s = DomainSpec::<f64>::slab(2, 1, 0.0, 1.0).unwrap();
        assert!(!s.is_bounded());
        assert!((s.width(&[5.0, 0.3]).unwrap() - 1.0).abs() < 1e-9);
        let (lo, hi) = s.bounding_box();
        assert!(lo[0].is_infinite() && hi[0].is_infinite());
        assert!((lo[1] - 0.0).abs() < 1e-9 && (hi[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_interior_polytope_is_rejected() {
        let hs = vec![
            HalfspaceSpec { normal: vec![1.0, 0.0], offset: 1.0 },
            HalfspaceSpec { normal: vec![-1.0, 0.0], offset: -1.0 },
        ];
        assert!(matches!(DomainSpec::<f64>::polytope(hs, vec![1.0, 0.0]), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn declared_bounded_flag_is_checked() {
        let json = r#"{"type":"polytope","halfspaces":[{"normal":[0,1],"offset":0},{"normal":[0,-1],"offset":-1}],"interior_point":[0.5,0.5],"bounded":true}"#;
        assert!(DomainSpec::<f64>::from_json(json).is_err());
    }

    #[test]
    fn json_round_trip_and_normalization() {
        let json = r#"{"type":"halfspace","normal":[0,2],"offset":1}"#;
        let d = DomainSpec::<f64>::from_json(json).unwrap();
        match &d {
            DomainSpec::Halfspace { normal, offset } => {
                assert_eq!(normal, &vec![0.0, 1.0]);
                assert_eq!(*offset, 0.5);
            }
            _ => panic!(),
        }
        let again = DomainSpec::<f64>::from_json(&d.to_json()).unwrap();
        assert_eq!(again.to_json(), d.to_json());
        let u = r#"{"type":"interval_union","intervals":[[0,1],[2,3]]}"#;
        assert_eq!(DomainSpec::<f64>::from_json(u).unwrap().dim(), 1);
        assert!(DomainSpec::<f64>::from_json(r#"{"type":"interval_union","intervals":[[2,3],[0,1]]}"#).is_err());
        assert!(DomainSpec::<f64>::from_json(r#"{"type":"ball","center":[0,0],"radius":-1}"#).is_err());
    }

    #[test]
    fn convex_union_trace_is_sorted_union() {
        let u = DomainSpec::ConvexUnion {
            parts: vec![
                DomainSpec::Box { min: vec![2.0, 0.0], max: vec![3.0, 1.0] },
                DomainSpec::Box { min: vec![0.0, 0.0], max: vec![1.0, 1.0] },
            ],
        };
        u.validate().unwrap();
        let t = u.ray_intervals(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(t.intervals, vec![(-0.5, 0.5), (1.5, 2.5)]);
        assert!(!u.is_convex());
    }
}
