//! Patches of every boundary component, their partition-of-unity values at
//! the collocation nodes, and the node-to-node exchange pattern between
//! patches.

use crate::bie::{ClosedCurveDiscretization, Discretization, EvalPlan, OpenArcDiscretization, OpenArcParams, Target};
use crate::error::{Error, Result};
use crate::geometry::{dist, set_distance, ParametricCurve, PatchDecomposition, Point};
use crate::linalg::CMatrix;
use rayon::prelude::*;

/// How one connected boundary component is split into subproblems.
#[derive(Debug, Clone)]
pub enum Treatment {
    /// Overlapping open-arc patches with a smooth partition of unity.
    Decomposed(PatchDecomposition),
    /// The whole closed curve is one patch, solved with the combined field
    /// equation (exterior problems only).
    Whole,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub curve: ParametricCurve,
    pub treatment: Treatment,
}

impl Component {
    pub fn decomposed(d: PatchDecomposition) -> Self {
        Component {
            curve: d.curve.clone(),
            treatment: Treatment::Decomposed(d),
        }
    }

    pub fn whole(curve: ParametricCurve) -> Result<Self> {
        if !curve.is_closed() {
            return Err(Error::InvalidDecomposition("only closed curves can be treated as a single patch".into()));
        }
        Ok(Component {
            curve,
            treatment: Treatment::Whole,
        })
    }
}

/// Discretization resolution shared by all patches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub open: OpenArcParams,
    /// Nyström node count of whole closed components.
    pub closed_nodes: usize,
}

pub enum PatchSolver {
    Arc(OpenArcDiscretization),
    Closed(ClosedCurveDiscretization),
}

impl PatchSolver {
    pub fn disc(&self) -> &dyn Discretization {
        match self {
            PatchSolver::Arc(d) => d,
            PatchSolver::Closed(d) => d,
        }
    }
}

/// One subproblem Γ_j.
pub struct PatchEntry {
    pub component: usize,
    /// Index inside the component's decomposition (None for whole curves).
    pub local: Option<usize>,
    pub solver: PatchSolver,
    pub nodes: Vec<Target>,
    /// χ_j at the nodes.
    pub chi: Vec<f64>,
    /// Dense samples of the truncated support Γ_j^tr and half their spacing.
    support_samples: Vec<Point>,
    support_slack: f64,
}

impl PatchEntry {
    pub fn positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|t| t.pos).collect()
    }

    /// Lower bound on the distance from `x` to the truncated support.
    pub fn support_distance(&self, x: Point) -> f64 {
        let d = self.support_samples.iter().map(|p| dist(*p, x)).fold(f64::INFINITY, f64::min);
        (d - self.support_slack).max(0.0)
    }
}

/// Rows of a source patch's evaluation targets that feed receiver nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Feed {
    pub receiver: usize,
    /// (receiver node index, source target row).
    pub links: Vec<(usize, usize)>,
}

/// Everything frequency-independent about a multi-patch boundary.
pub struct Layout {
    pub components: Vec<Component>,
    pub patches: Vec<PatchEntry>,
    /// Per source patch: targets (receiver nodes first, observation points last).
    pub targets: Vec<Vec<Target>>,
    pub feeds: Vec<Vec<Feed>>,
    pub observation: Vec<Point>,
    pub plans: Vec<EvalPlan>,
    pub delta_min: f64,
}

const SUPPORT_SAMPLES: usize = 2048;

impl Layout {
    pub fn new(components: Vec<Component>, resolution: Resolution, observation: &[Point]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDecomposition("no boundary components".into()));
        }
        let mut patches = Vec::new();
        for (c, comp) in components.iter().enumerate() {
            match &comp.treatment {
                Treatment::Whole => {
                    let d = ClosedCurveDiscretization::new(comp.curve.clone(), c, resolution.closed_nodes)?;
                    let nodes = d.collocation();
                    let chi = vec![1.0; nodes.len()];
                    let (samples, slack) = sample_support(&comp.curve, (0.0, 2.0 * std::f64::consts::PI));
                    patches.push(PatchEntry {
                        component: c,
                        local: None,
                        solver: PatchSolver::Closed(d),
                        nodes,
                        chi,
                        support_samples: samples,
                        support_slack: slack,
                    });
                }
                Treatment::Decomposed(dec) => {
                    for (l, p) in dec.patches.iter().enumerate() {
                        let mut bps = vec![];
                        if p.left.is_some() {
                            bps.push(p.core.0);
                        }
                        if p.right.is_some() {
                            bps.push(p.core.1);
                        }
                        let d = if dec.curve.is_closed() && dec.len() == 1 {
                            return Err(Error::InvalidDecomposition(
                                "a closed curve with a single patch must use the whole-curve treatment".into(),
                            ));
                        } else {
                            OpenArcDiscretization::new(dec.curve.clone(), c, (p.lo, p.hi), &bps, resolution.open)?
                        };
                        let nodes = d.collocation();
                        let chi = nodes
                            .iter()
                            .map(|t| dec.chi_unchecked(l, t.on.expect("collocation nodes lie on the curve").1))
                            .collect();
                        let (samples, slack) = sample_support(&dec.curve, p.support);
                        patches.push(PatchEntry {
                            component: c,
                            local: Some(l),
                            solver: PatchSolver::Arc(d),
                            nodes,
                            chi,
                            support_samples: samples,
                            support_slack: slack,
                        });
                    }
                }
            }
        }
        for (i, x) in observation.iter().enumerate() {
            for p in &patches {
                let near = p.nodes.iter().map(|t| dist(t.pos, *x)).fold(f64::INFINITY, f64::min);
                if near < 1e-8 {
                    return Err(Error::config(
                        format!("observation[{i}]"),
                        "observation points must lie off the boundary",
                    ));
                }
            }
        }
        let n = patches.len();
        let mut targets = Vec::with_capacity(n);
        let mut feeds = Vec::with_capacity(n);
        for k in 0..n {
            let mut tk = vec![];
            let mut fk = vec![];
            for j in 0..n {
                if j == k {
                    continue;
                }
                let mut links = vec![];
                for (i, (t, &chi)) in patches[j].nodes.iter().zip(&patches[j].chi).enumerate() {
                    if chi > 0.0 && !in_patch(&components, &patches[k], t) {
                        links.push((i, tk.len()));
                        tk.push(*t);
                    }
                }
                if !links.is_empty() {
                    fk.push(Feed { receiver: j, links });
                }
            }
            tk.extend(observation.iter().map(|&x| Target::free(x)));
            targets.push(tk);
            feeds.push(fk);
        }
        let plans = patches
            .par_iter()
            .zip(targets.par_iter())
            .map(|(p, t)| p.solver.disc().plan(t))
            .collect::<Result<Vec<_>>>()?;
        let delta_min = delta_min(&components);
        Ok(Layout {
            components,
            patches,
            targets,
            feeds,
            observation: observation.to_vec(),
            plans,
            delta_min,
        })
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// Row index of the first observation point among patch k's targets.
    pub fn observation_row(&self, k: usize) -> usize {
        self.targets[k].len() - self.observation.len()
    }

    /// System matrix and evaluation matrix of patch k at ω.
    pub fn matrices(&self, k: usize, omega: f64, c: f64) -> Result<(CMatrix, CMatrix)> {
        let a = self.patches[k].solver.disc().system(omega, c)?;
        let p = self.plans[k].matrix(omega, c)?;
        Ok((a, p))
    }

    /// Neighbouring patches of the same decomposed component.
    pub fn are_neighbours(&self, j: usize, k: usize) -> bool {
        let (pj, pk) = (&self.patches[j], &self.patches[k]);
        if pj.component != pk.component || j == k {
            return false;
        }
        match (&self.components[pj.component].treatment, pj.local, pk.local) {
            (Treatment::Decomposed(d), Some(a), Some(b)) => {
                let o = |p: Option<usize>| p.map(|o| (d.overlaps[o].left, d.overlaps[o].right));
                let pa = &d.patches[a];
                [o(pa.left), o(pa.right)].iter().flatten().any(|&(l, r)| (l == b && r == a) || (l == a && r == b))
            }
            _ => false,
        }
    }
}

/// Whether a boundary target lies in the (open) patch.
fn in_patch(components: &[Component], patch: &PatchEntry, t: &Target) -> bool {
    let Some((cid, tau)) = t.on else {
        return false;
    };
    if cid != patch.component {
        return false;
    }
    match (&components[cid].treatment, patch.local) {
        (Treatment::Decomposed(d), Some(l)) => d.contains(l, tau),
        _ => true,
    }
}

fn sample_support(curve: &ParametricCurve, (a, b): (f64, f64)) -> (Vec<Point>, f64) {
    let pts = curve.sample(a, b, SUPPORT_SAMPLES);
    let gap = pts.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max);
    (pts, 0.5 * gap)
}

/// δ_min over all patches: distance from each truncated support to the rest
/// of the boundary, other components included.
fn delta_min(components: &[Component]) -> f64 {
    let mut best = f64::INFINITY;
    for (c, comp) in components.iter().enumerate() {
        let own: Vec<(f64, f64)> = match &comp.treatment {
            Treatment::Whole => vec![comp.curve.interval()],
            Treatment::Decomposed(d) => {
                best = best.min(d.delta_min());
                d.patches.iter().map(|p| p.support).collect()
            }
        };
        for (o, other) in components.iter().enumerate() {
            if o == c {
                continue;
            }
            for &s in &own {
                best = best.min(set_distance(&comp.curve, s, &other.curve, other.curve.interval()));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog::Circle;
    use crate::geometry::DiameterMetric;
    use std::sync::Arc;

    fn disc3() -> Layout {
        let curve = ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap();
        let d = PatchDecomposition::equal(curve, 3, 0.2, 1.0 / 3.0, 2.0 / 3.0, 0.0, DiameterMetric::Chordal).unwrap();
        let res = Resolution {
            open: OpenArcParams {
                nodes_per_panel: 12,
                ..Default::default()
            },
            closed_nodes: 32,
        };
        Layout::new(vec![Component::decomposed(d)], res, &[[0.5, 0.0]]).unwrap()
    }

    #[test]
    fn feeds_skip_overlaps_and_zero_windows() {
        let l = disc3();
        assert_eq!(l.len(), 3);
        for k in 0..3 {
            assert_eq!(l.observation_row(k) + 1, l.targets[k].len());
            for f in &l.feeds[k] {
                assert_ne!(f.receiver, k);
                assert!(l.are_neighbours(k, f.receiver));
                for &(i, row) in &f.links {
                    let t = l.patches[f.receiver].nodes[i];
                    assert_eq!(l.targets[k][row], t);
                    assert!(l.patches[f.receiver].chi[i] > 0.0);
                }
            }
        }
        // each receiver node with χ > 0 outside Γ_k appears exactly once
        let total: usize = l.feeds[0].iter().map(|f| f.links.len()).sum();
        assert!(total > 0 && total < l.patches[1].nodes.len() + l.patches[2].nodes.len());
    }

    #[test]
    fn delta_min_matches_decomposition() {
        let l = disc3();
        match &l.components[0].treatment {
            Treatment::Decomposed(d) => assert_eq!(l.delta_min, d.delta_min()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn whole_components_and_distance() {
        let a = ParametricCurve::closed(Arc::new(Circle::new([0.0, 0.0], 1.0))).unwrap();
        let b = ParametricCurve::closed(Arc::new(Circle::new([3.0, 0.0], 0.5))).unwrap();
        let res = Resolution {
            open: OpenArcParams::default(),
            closed_nodes: 24,
        };
        let l = Layout::new(vec![Component::whole(a).unwrap(), Component::whole(b).unwrap()], res, &[]).unwrap();
        assert!((l.delta_min - 1.5).abs() < 1e-9);
        assert_eq!(l.targets[0].len(), l.patches[1].nodes.len());
        assert!(!l.are_neighbours(0, 1));
        assert!(Layout::new(vec![], res, &[]).is_err());
    }
}
