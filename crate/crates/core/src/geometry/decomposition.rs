use super::curve::{dist, ParametricCurve, Point};
use super::window::{eta_window, WindowProfile};
use crate::error::{Error, Result};
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
const DENSE: usize = 2048;

/// How the overlap diameters A and d(x) are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiameterMetric {
    /// Max pairwise Euclidean distance over the sub-arc.
    #[default]
    Chordal,
    /// Arc length of the sub-arc.
    ArcLength,
}

/// Overlap between patch `left` (whose upper end lies inside it) and patch
/// `right` (whose lower end lies inside it), as a lifted parameter interval.
#[derive(Debug, Clone)]
pub struct Overlap {
    pub lo: f64,
    pub hi: f64,
    pub left: usize,
    pub right: usize,
    /// A^ov.
    pub diameter: f64,
    /// Diameter table used only when the chord is not the diameter.
    fallback: Option<Vec<f64>>,
}

/// One patch Γ_j, as the lifted parameter interval (lo, hi).
#[derive(Debug, Clone)]
pub struct Patch {
    pub lo: f64,
    pub hi: f64,
    /// Γ_j^tov as a parameter interval inside (lo, hi).
    pub core: (f64, f64),
    /// Γ_j^tr: the open set where χ_j > 0.
    pub support: (f64, f64),
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Overlapping patch decomposition of one curve with its partition of unity.
#[derive(Debug, Clone)]
pub struct PatchDecomposition {
    pub curve: ParametricCurve,
    pub patches: Vec<Patch>,
    pub overlaps: Vec<Overlap>,
    pub c0: f64,
    pub c1: f64,
    pub metric: DiameterMetric,
    delta_min: f64,
}

impl PatchDecomposition {
    /// Equi-sized patches. For closed curves patch j covers
    /// [θ0 + 2πj/N − o/2, θ0 + 2π(j+1)/N + o/2] with o = f·L; for open arcs
    /// the N patches tile [a, b] with consecutive overlaps o = f·L.
    pub fn equal(
        curve: ParametricCurve,
        n: usize,
        overlap_fraction: f64,
        c0: f64,
        c1: f64,
        theta0: f64,
        metric: DiameterMetric,
    ) -> Result<Self> {
        if !(0.0 < c0 && c0 < 0.5 && 0.5 < c1 && c1 < 1.0) {
            return Err(Error::InvalidDecomposition(format!(
                "window thresholds must satisfy 0 < c0 < 1/2 < c1 < 1, got c0={c0}, c1={c1}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidDecomposition("patch count must be positive".into()));
        }
        let mut intervals = Vec::with_capacity(n);
        if curve.is_closed() {
            if n == 1 {
                intervals.push((theta0, theta0 + TWO_PI));
            } else {
                if !(overlap_fraction > 0.0 && overlap_fraction < 0.5) {
                    return Err(Error::InvalidDecomposition(format!(
                        "overlap_fraction {overlap_fraction} gives empty overlaps or empty cores"
                    )));
                }
                let l = TWO_PI / n as f64 / (1.0 - overlap_fraction);
                let o = overlap_fraction * l;
                for j in 0..n {
                    let b = theta0 + TWO_PI * j as f64 / n as f64;
                    intervals.push((b - 0.5 * o, b + TWO_PI / n as f64 + 0.5 * o));
                }
            }
        } else {
            let (a, b) = curve.interval();
            if n == 1 {
                intervals.push((a, b));
            } else {
                if !(overlap_fraction > 0.0 && overlap_fraction < 0.5) {
                    return Err(Error::InvalidDecomposition(format!(
                        "overlap_fraction {overlap_fraction} gives empty overlaps or empty cores"
                    )));
                }
                let l = (b - a) / (n as f64 - (n - 1) as f64 * overlap_fraction);
                let o = overlap_fraction * l;
                for j in 0..n {
                    let s = a + j as f64 * (l - o);
                    intervals.push((s, if j + 1 == n { b } else { s + l }));
                }
            }
        }
        Self::from_intervals(curve, intervals, c0, c1, metric)
    }

    /// Decomposition from explicit lifted parameter intervals, listed in order
    /// along the curve. Consecutive intervals must overlap; for closed curves
    /// the last interval overlaps the first one shifted by 2π.
    pub fn from_intervals(
        curve: ParametricCurve,
        intervals: Vec<(f64, f64)>,
        c0: f64,
        c1: f64,
        metric: DiameterMetric,
    ) -> Result<Self> {
        let n = intervals.len();
        let closed = curve.is_closed();
        let mut patches: Vec<Patch> = intervals
            .iter()
            .map(|&(lo, hi)| Patch {
                lo,
                hi,
                core: (lo, hi),
                support: (lo, hi),
                left: None,
                right: None,
            })
            .collect();
        for &(lo, hi) in &intervals {
            if !(hi > lo) || (closed && n > 1 && hi - lo >= TWO_PI) {
                return Err(Error::InvalidDecomposition(format!("bad patch interval ({lo}, {hi})")));
            }
        }
        if closed && n == 1 && (intervals[0].1 - intervals[0].0 - TWO_PI).abs() > 1e-12 {
            return Err(Error::InvalidDecomposition("a single closed patch must cover the curve".into()));
        }
        if !closed {
            let (a, b) = curve.interval();
            if (intervals[0].0 - a).abs() > 1e-12 || (intervals[n - 1].1 - b).abs() > 1e-12 {
                return Err(Error::InvalidDecomposition("patches must cover the open arc".into()));
            }
        }
        let pairs = if closed && n > 1 { n } else { n.saturating_sub(1) };
        let mut overlaps = Vec::with_capacity(pairs);
        for j in 0..pairs {
            let k = (j + 1) % n;
            let mut lo = intervals[k].0;
            if closed {
                while lo < intervals[j].0 {
                    lo += TWO_PI;
                }
                while lo - TWO_PI > intervals[j].0 {
                    lo -= TWO_PI;
                }
            }
            let hi = intervals[j].1;
            if !(hi > lo) {
                return Err(Error::InvalidDecomposition(format!("patches {j} and {k} do not overlap")));
            }
            let diameter;
            let fallback;
            match metric {
                DiameterMetric::ArcLength => {
                    diameter = curve.arc_length(lo, hi);
                    fallback = None;
                }
                DiameterMetric::Chordal => {
                    let (a, table) = chord_table(&curve, lo, hi);
                    diameter = a;
                    fallback = table;
                }
            }
            overlaps.push(Overlap {
                lo,
                hi,
                left: j,
                right: k,
                diameter,
                fallback,
            });
            patches[j].right = Some(j);
            patches[k].left = Some(j);
        }
        let mut d = PatchDecomposition {
            curve,
            patches,
            overlaps,
            c0,
            c1,
            metric,
            delta_min: f64::INFINITY,
        };
        for j in 0..n {
            let (mut clo, mut chi) = (d.patches[j].lo, d.patches[j].hi);
            let (mut slo, mut shi) = (clo, chi);
            if let Some(o) = d.patches[j].left {
                let ov = &d.overlaps[o];
                let shift = d.lift_shift(ov.hi, d.patches[j].lo);
                clo = ov.hi + shift;
                // χ_j > 0 where d < (1 - c0) A
                slo = d.solve_level(o, (1.0 - c0) * ov.diameter) + shift;
            }
            if let Some(o) = d.patches[j].right {
                let ov = &d.overlaps[o];
                let shift = d.lift_shift(ov.lo, d.patches[j].lo);
                chi = ov.lo + shift;
                // χ_j > 0 where d > (1 - c1) A
                shi = d.solve_level(o, (1.0 - c1) * ov.diameter) + shift;
            }
            if !(chi > clo) {
                return Err(Error::InvalidDecomposition(format!("patch {j} has an empty truncated core")));
            }
            d.patches[j].core = (clo, chi);
            d.patches[j].support = (slo, shi);
        }
        d.delta_min = (0..n).map(|j| d.complement_distance(j)).fold(f64::INFINITY, f64::min);
        if closed && n > 1 && !(d.delta_min > 0.0) {
            return Err(Error::InvalidDecomposition("non-positive delta_min".into()));
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// δ_min restricted to this curve (∞ for a single closed patch).
    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    /// Shift by a multiple of 2π that moves `t` into [reference, reference + 2π).
    fn lift_shift(&self, t: f64, reference: f64) -> f64 {
        if !self.curve.is_closed() {
            return 0.0;
        }
        reference + (t - reference).rem_euclid(TWO_PI) - t
    }

    /// Lift θ into [lo_j, lo_j + 2π) for closed curves; None if θ ∉ Γ_j.
    pub fn lift_into(&self, j: usize, theta: f64) -> Option<f64> {
        let p = &self.patches[j];
        let u = if self.curve.is_closed() {
            p.lo + (theta - p.lo).rem_euclid(TWO_PI)
        } else {
            theta
        };
        if u > p.lo && u < p.hi {
            Some(u)
        } else {
            None
        }
    }

    /// d^ov(x): diameter of the sub-arc from x(u) to the upper end of the
    /// overlap's left patch. `u` must lie in the overlap's lifting.
    pub fn overlap_distance(&self, o: usize, u: f64) -> f64 {
        let ov = &self.overlaps[o];
        match self.metric {
            DiameterMetric::ArcLength => self.curve.arc_length(u, ov.hi).max(0.0),
            DiameterMetric::Chordal => match &ov.fallback {
                None => dist(self.curve.at(u).pos, self.curve.at(ov.hi).pos),
                Some(tab) => {
                    let f = ((u - ov.lo) / (ov.hi - ov.lo)).clamp(0.0, 1.0) * (DENSE - 1) as f64;
                    let i = (f as usize).min(DENSE - 2);
                    let r = f - i as f64;
                    tab[i] * (1.0 - r) + tab[i + 1] * r
                }
            },
        }
    }

    fn solve_level(&self, o: usize, level: f64) -> f64 {
        let ov = &self.overlaps[o];
        let (mut a, mut b) = (ov.lo, ov.hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if self.overlap_distance(o, m) > level {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-15 * (1.0 + b.abs()) {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// θ expressed in the lifting of overlap `o`; both patches sharing the
    /// overlap use this same value so their windows sum to one exactly.
    fn overlap_param(&self, o: usize, theta: f64) -> f64 {
        let ov = &self.overlaps[o];
        if self.curve.is_closed() {
            let mid = 0.5 * (ov.lo + ov.hi);
            mid - PI + (theta - (mid - PI)).rem_euclid(TWO_PI)
        } else {
            theta
        }
    }

    /// Smooth partition-of-unity window χ_j at parameter θ.
    pub fn chi(&self, j: usize, theta: f64) -> Result<f64> {
        if j >= self.patches.len() {
            return Err(Error::Domain(format!("patch index {j} out of range")));
        }
        Ok(self.chi_unchecked(j, theta))
    }

    pub fn chi_unchecked(&self, j: usize, theta: f64) -> f64 {
        let p = &self.patches[j];
        if self.curve.is_closed() && self.patches.len() == 1 {
            return 1.0;
        }
        let u = match self.lift_into(j, theta) {
            Some(u) => u,
            None => {
                // closed endpoints of an open parent belong to the end patches
                if !self.curve.is_closed() && ((theta == p.lo && p.left.is_none()) || (theta == p.hi && p.right.is_none())) {
                    return 1.0;
                }
                return 0.0;
            }
        };
        if let Some(o) = p.left {
            if u < p.core.0 {
                let ov = &self.overlaps[o];
                let uu = self.overlap_param(o, theta);
                let a = ov.diameter;
                let d = self.overlap_distance(o, uu);
                return 1.0 - eta_window(a - d, WindowProfile::new(self.c0 * a, self.c1 * a));
            }
        }
        if let Some(o) = p.right {
            if u > p.core.1 {
                let ov = &self.overlaps[o];
                let uu = self.overlap_param(o, theta);
                let a = ov.diameter;
                let d = self.overlap_distance(o, uu);
                return eta_window(a - d, WindowProfile::new(self.c0 * a, self.c1 * a));
            }
        }
        1.0
    }

    /// Parameter intervals of Γ ∖ Γ_j (one for closed curves, up to two for arcs).
    pub fn complement(&self, j: usize) -> Vec<(f64, f64)> {
        let p = &self.patches[j];
        if self.curve.is_closed() {
            if self.patches.len() == 1 {
                return vec![];
            }
            vec![(p.hi, p.lo + TWO_PI)]
        } else {
            let (a, b) = self.curve.interval();
            let mut v = vec![];
            if p.lo > a {
                v.push((a, p.lo));
            }
            if p.hi < b {
                v.push((p.hi, b));
            }
            v
        }
    }

    fn complement_distance(&self, j: usize) -> f64 {
        let s = self.patches[j].support;
        self.complement(j)
            .into_iter()
            .map(|(a, b)| set_distance(&self.curve, s, &self.curve, (a, b)))
            .fold(f64::INFINITY, f64::min)
    }

    /// dist(Γ_j^tr, Γ_k).
    pub fn patch_distance(&self, j: usize, k: usize) -> Result<f64> {
        if j >= self.len() || k >= self.len() || j == k {
            return Err(Error::Domain(format!("invalid patch pair ({j}, {k})")));
        }
        let pk = &self.patches[k];
        Ok(set_distance(&self.curve, self.patches[j].support, &self.curve, (pk.lo, pk.hi)))
    }

    /// Whether parameter θ lies in the open patch Γ_j.
    pub fn contains(&self, j: usize, theta: f64) -> bool {
        if self.curve.is_closed() && self.patches.len() == 1 {
            return true;
        }
        self.lift_into(j, theta).is_some()
    }
}

/// Diameter of the overlap, and the diameter-to-end table when the chord is
/// not the diameter of every sub-arc ending at `hi`.
fn chord_table(curve: &ParametricCurve, lo: f64, hi: f64) -> (f64, Option<Vec<f64>>) {
    let pts = curve.sample(lo, hi, DENSE);
    let end = pts[DENSE - 1];
    let mut diam = vec![0.0f64; DENSE];
    let mut exact = true;
    for i in (0..DENSE - 1).rev() {
        let mut m = diam[i + 1];
        for q in &pts[i + 1..] {
            m = m.max(dist(pts[i], *q));
        }
        diam[i] = m;
        if m > dist(pts[i], end) * (1.0 + 1e-9) + 1e-14 {
            exact = false;
        }
    }
    if exact {
        (dist(pts[0], end), None)
    } else {
        (diam[0], Some(diam))
    }
}

fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Distance between the closures of two parameter intervals on two curves:
/// dense sampling followed by alternating golden-section refinement.
pub fn set_distance(c1: &ParametricCurve, i1: (f64, f64), c2: &ParametricCurve, i2: (f64, f64)) -> f64 {
    let n = DENSE;
    let t = |k: usize, i: (f64, f64)| i.0 + (i.1 - i.0) * k as f64 / (n - 1) as f64;
    let p1: Vec<Point> = (0..n).map(|k| c1.at(t(k, i1)).pos).collect();
    let p2: Vec<Point> = (0..n).map(|k| c2.at(t(k, i2)).pos).collect();
    let mut best = (f64::INFINITY, 0, 0);
    for (a, pa) in p1.iter().enumerate() {
        for (b, pb) in p2.iter().enumerate() {
            let dd = (pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2);
            if dd < best.0 {
                best = (dd, a, b);
            }
        }
    }
    let h1 = (i1.1 - i1.0) / (n - 1) as f64;
    let h2 = (i2.1 - i2.0) / (n - 1) as f64;
    let (mut u, mut v) = (t(best.1, i1), t(best.2, i2));
    let mut dmin = best.0.sqrt();
    for _ in 0..8 {
        let q = c2.at(v).pos;
        let (nu, _) = golden(|x| dist(c1.at(x).pos, q), (u - h1).max(i1.0), (u + h1).min(i1.1));
        let p = c1.at(nu).pos;
        let (nv, dv) = golden(|y| dist(p, c2.at(y).pos), (v - h2).max(i2.0), (v + h2).min(i2.1));
        u = nu;
        v = nv;
        if dv < dmin {
            dmin = dv;
        }
    }
    dmin
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::Circle;
    use std::sync::Arc;

    fn circle(r: f64) -> ParametricCurve {
        ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], r))).unwrap()
    }

    #[test]
    fn three_patch_disc() {
        let d = PatchDecomposition::equal(circle(1.0), 3, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)
            .unwrap();
        let p = &d.patches[0];
        assert!((p.lo + PI / 6.0).abs() < 1e-14 && (p.hi - 5.0 * PI / 6.0).abs() < 1e-14);
        assert!((p.core.0 - PI / 6.0).abs() < 1e-14 && (p.core.1 - PI / 2.0).abs() < 1e-14);
        // chordal: zero set within chord A/3 = 1/3 of each end
        assert!((d.delta_min() - 1.0 / 3.0).abs() < 1e-9, "{}", d.delta_min());
        let a = PatchDecomposition::equal(circle(1.0), 3, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::ArcLength)
            .unwrap();
        // arc-length variant: chord of an arc of length π/9
        assert!((a.delta_min() - 2.0 * (PI / 18.0).sin()).abs() < 1e-9);
        assert!((a.delta_min() - 0.35).abs() < 0.005);
        assert!((d.delta_min() - 0.35).abs() < 0.02);
    }

    #[test]
    fn six_patch_r2_disc() {
        let a = PatchDecomposition::equal(circle(2.0), 6, 0.375, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::ArcLength)
            .unwrap();
        assert!((a.delta_min() - 4.0 * (PI / 30.0).sin()).abs() < 1e-9);
        assert!((a.delta_min() - 0.42).abs() < 0.005);
        let c = PatchDecomposition::equal(circle(2.0), 6, 0.375, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)
            .unwrap();
        assert!((c.delta_min() - 0.42).abs() < 0.02);
    }

    #[test]
    fn two_halves_brute_force() {
        // halves of the unit circle with 90° overlaps
        let d = PatchDecomposition::from_intervals(
            circle(1.0),
            vec![(-PI / 4.0, PI + PI / 4.0), (PI - PI / 4.0, 2.0 * PI + PI / 4.0)],
            1.0 / 3.0,
            2.0 / 3.0,
            DiameterMetric::Chordal,
        )
        .unwrap();
        let mut brute = f64::INFINITY;
        for j in 0..2 {
            let s = d.patches[j].support;
            let c = d.complement(j)[0];
            let n = 3000;
            for a in 0..=n {
                let pa = d.curve.at(s.0 + (s.1 - s.0) * a as f64 / n as f64).pos;
                for b in 0..=n / 10 {
                    let pb = d.curve.at(c.0 + (c.1 - c.0) * b as f64 / (n / 10) as f64).pos;
                    brute = brute.min(dist(pa, pb));
                }
            }
        }
        assert!((d.delta_min() - brute).abs() < 1e-3, "{} vs {brute}", d.delta_min());
        assert!(d.delta_min() <= brute + 1e-12);
    }

    #[test]
    fn pou_is_exact() {
        for (n, f) in [(2usize, 0.3), (3, 1.0 / 3.0), (5, 0.25), (6, 0.4)] {
            let d = PatchDecomposition::equal(circle(1.3), n, f, 1.0 / 3.0, 2.0 / 3.0, 0.1, DiameterMetric::Chordal)
                .unwrap();
            for k in 0..10_000 {
                let t = TWO_PI * k as f64 / 10_000.0 + 1e-7;
                let s: f64 = (0..n).map(|j| d.chi_unchecked(j, t)).sum();
                assert!((s - 1.0).abs() < 1e-14, "n={n} t={t} sum={s}");
            }
        }
    }

    #[test]
    fn support_and_core_values() {
        let d = PatchDecomposition::equal(circle(1.0), 3, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)
            .unwrap();
        for k in 0..2000 {
            let t = -PI + TWO_PI * k as f64 / 2000.0;
            for j in 0..3 {
                let c = d.chi_unchecked(j, t);
                let p = &d.patches[j];
                let u = p.lo + (t - p.lo).rem_euclid(TWO_PI);
                if u > p.core.0 && u < p.core.1 {
                    assert_eq!(c, 1.0);
                }
                if u >= p.hi || u <= p.lo || u >= p.support.1 || u <= p.support.0 {
                    assert_eq!(c, 0.0);
                }
            }
        }
        assert!(d.chi(3, 0.0).is_err());
    }

    #[test]
    fn open_parent_end_patches() {
        let arc = ParametricCurve::open(Arc::new(Circle::new([0.0, 0.0], 1.0)), 0.02 * PI, 1.98 * PI).unwrap();
        let d = PatchDecomposition::equal(arc, 6, 0.3, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal).unwrap();
        assert_eq!(d.overlaps.len(), 5);
        assert!(d.patches[0].left.is_none() && d.patches[5].right.is_none());
        assert_eq!(d.chi_unchecked(0, 0.02 * PI + 1e-9), 1.0);
        for k in 1..5000 {
            let t = 0.02 * PI + 1.96 * PI * k as f64 / 5000.0;
            let s: f64 = (0..6).map(|j| d.chi_unchecked(j, t)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert!(d.delta_min() > 0.0);
    }

    #[test]
    fn antipodal_patch_distance() {
        let d = PatchDecomposition::equal(circle(1.0), 6, 0.3, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal)
            .unwrap();
        // adjacent patches intersect
        assert!(d.patch_distance(0, 1).unwrap() < 1e-12);
        let p0 = &d.patches[0];
        let p3 = &d.patches[3];
        let gap = (p3.lo - p0.support.1).min(p0.support.0 + TWO_PI - p3.hi);
        let expect = 2.0 * (gap / 2.0).sin();
        assert!((d.patch_distance(0, 3).unwrap() - expect).abs() < 1e-9);
        for j in 0..6 {
            for k in 0..6 {
                if j != k && (j + 1) % 6 != k && (k + 1) % 6 != j {
                    assert!(d.patch_distance(j, k).unwrap() >= d.delta_min() - 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(PatchDecomposition::equal(circle(1.0), 3, 0.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal).is_err());
        assert!(PatchDecomposition::equal(circle(1.0), 3, 0.5, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal).is_err());
        assert!(PatchDecomposition::equal(circle(1.0), 3, 0.3, 0.6, 2.0 / 3.0, 0.0, DiameterMetric::Chordal).is_err());
    }
}
