//! One-dimensional optimal transport through the monotone rearrangement,
//! with an exact solver for small discrete instances as an oracle.
//!
//! For costs `c(x − z)` with `c` convex the map `T = F_μ^{-1} ∘ F_ν` is an
//! optimal coupling of `ν` and `μ`, so every continuous cost here is the
//! one-dimensional integral `∫ c(T(x) − x) dν(x)`.

use crate::density::{Density1D, ProductDensity};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalName, FunctionalValue};
use crate::quadrature::{integrate_abs, integrate_samples};
use crate::special::delta_unchecked;
use alloc::format;
use alloc::vec::Vec;

/// Convex, even transport cost `c` with `c(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CostFn {
    /// `x²`
    Sq,
    /// `|x|`
    Abs,
    /// `Δ(|x|)`
    Delta,
    /// `Δ(|x| / s)`
    DeltaScaled(f64),
}

impl CostFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            CostFn::Sq => x * x,
            CostFn::Abs => x.abs(),
            CostFn::Delta => delta_unchecked(x.abs()),
            CostFn::DeltaScaled(s) => delta_unchecked(x.abs() / s),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            CostFn::Sq => "sq",
            CostFn::Abs => "abs",
            CostFn::Delta => "delta",
            CostFn::DeltaScaled(_) => "delta_scaled",
        }
    }
}

/// Monotone map pushing `source` (ν) onto `target` (μ).
#[derive(Debug, Clone)]
pub struct TransportPlan1D {
    source: Density1D,
    target: Density1D,
    source_median: f64,
    /// `(a, b)` with `T(x) = a + b x` when both laws are Gaussian.
    affine: Option<(f64, f64)>,
}

impl TransportPlan1D {
    pub fn source(&self) -> &Density1D {
        &self.source
    }

    pub fn target(&self) -> &Density1D {
        &self.target
    }

    /// `T(x) = F_μ^{-1}(F_ν(x))`, through the survival functions above the
    /// median of `ν` so the upper tail keeps its precision.
    pub fn map(&self, x: f64) -> f64 {
        if let Some((a, b)) = self.affine {
            return a + b * x;
        }
        let t = &self.target;
        if x <= self.source_median {
            let u = self.source.cdf(x);
            if u <= 0.0 {
                return t.support().x_lo;
            }
            t.quantile(u.min(0.5)).unwrap_or(t.support().x_lo)
        } else {
            let q = self.source.sf(x);
            if q <= 0.0 {
                return t.support().x_hi;
            }
            t.isf(q.min(0.5)).unwrap_or(t.support().x_hi)
        }
    }

    /// `T'(x) = p_ν(x) / p_μ(T(x))`.
    pub fn derivative(&self, x: f64) -> f64 {
        if let Some((_, b)) = self.affine {
            return b;
        }
        libm::exp(self.source.log_pdf(x) - self.target.log_pdf(self.map(x)))
    }
}

/// The monotone rearrangement from `nu` to `mu`, checked to push `nu` forward
/// onto `mu` at 20 levels.
pub fn monotone_plan(mu: &Density1D, nu: &Density1D) -> Result<TransportPlan1D> {
    let affine = match (mu.as_gaussian(), nu.as_gaussian()) {
        (Some((mm, vm)), Some((mn, vn))) => {
            let b = libm::sqrt(vm / vn);
            Some((mm - b * mn, b))
        }
        _ => None,
    };
    let plan = TransportPlan1D { source: nu.clone(), target: mu.clone(), source_median: nu.median(), affine };
    for k in 1..=20 {
        let u = (k as f64 - 0.5) / 20.0;
        let x = nu.quantile(u)?;
        let y = plan.map(x);
        let back = mu.cdf(y);
        if !((back - u).abs() <= 1e-5) {
            return Err(Error::DegeneratePlan(format!("F_μ(T(F_ν^{{-1}}({u}))) = {back}")));
        }
        let d = plan.derivative(x);
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::DegeneratePlan(format!("T'({x}) = {d}")));
        }
    }
    Ok(plan)
}

/// `∫ c(T(x) − x) dν(x)` for the monotone plan from `nu` to `mu`.
pub fn transport_cost(mu: &Density1D, nu: &Density1D, cost: CostFn) -> Result<FunctionalValue> {
    Ok(transport_costs(mu, nu, &[cost])?[0])
}

/// Several costs from one plan and one pass over the nodes of `nu`.
pub fn transport_costs(mu: &Density1D, nu: &Density1D, costs: &[CostFn]) -> Result<Vec<FunctionalValue>> {
    let plan = monotone_plan(mu, nu)?;
    plan_costs(&plan, costs)
}

pub fn plan_costs(plan: &TransportPlan1D, costs: &[CostFn]) -> Result<Vec<FunctionalValue>> {
    let nu = plan.source();
    let spec = nu.support();
    let disp: Vec<f64> = spec.nodes().map(|x| plan.map(x) - x).collect();
    costs
        .iter()
        .map(|c| {
            let r = if *c == CostFn::Abs {
                // |T − id| has a kink wherever T crosses the diagonal
                integrate_abs(|x| (plan.map(x) - x) * nu.pdf(x), &spec)?
            } else {
                let v: Vec<f64> = disp.iter().zip(nu.node_pdf()).map(|(d, p)| c.eval(*d) * p).collect();
                integrate_samples(&v, &spec)
            };
            Ok(FunctionalValue::new(FunctionalName::Cost, r.value, r.abs_error_estimate))
        })
        .collect()
}

/// `W2(μ, ν)`.
pub fn w2(mu: &Density1D, nu: &Density1D) -> Result<f64> {
    Ok(libm::sqrt(transport_cost(mu, nu, CostFn::Sq)?.value.max(0.0)))
}

/// Sum of the factor costs: an upper bound on the transport cost between the
/// products, with equality for separable costs.
pub fn product_transport_bound(mu: &ProductDensity, nu: &ProductDensity, cost: CostFn) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::ShapeMismatch(format!("{} factors against {}", mu.dim(), nu.dim())));
    }
    mu.factors().iter().zip(nu.factors()).map(|(a, b)| Ok(transport_cost(a, b, cost)?.value)).sum()
}

/// Atoms at the levels `(k − ½)/K`, each of mass `1/K`.
pub fn quantile_atoms(d: &Density1D, k: usize) -> Result<Vec<(f64, f64)>> {
    (1..=k).map(|i| Ok((d.quantile((i as f64 - 0.5) / k as f64)?, 1.0 / k as f64))).collect()
}

/// Largest instance accepted by [`discrete_ot_oracle`].
pub const MAX_ATOMS: usize = 64;
/// Instances up to this size are re-solved exactly as a cross-check.
pub const EXACT_CHECK_ATOMS: usize = 8;

/// Optimal cost between two discrete laws given as `(point, mass)` atoms.
///
/// The value is the north-west-corner matching of the sorted atoms, which is
/// optimal for convex costs. With at most 8 atoms per side it is re-solved as
/// a min-cost flow, and the two must agree to 1e-12.
pub fn discrete_ot_oracle(a: &[(f64, f64)], b: &[(f64, f64)], cost: CostFn) -> Result<f64> {
    check_atoms(a, "first")?;
    check_atoms(b, "second")?;
    let monotone = monotone_matching(a, b, cost);
    if a.len() <= EXACT_CHECK_ATOMS && b.len() <= EXACT_CHECK_ATOMS {
        let exact = min_cost_flow(a, b, cost);
        if (monotone - exact).abs() > 1e-12 * monotone.abs().max(1.0) {
            return Err(Error::OracleMismatch { monotone, exact });
        }
    }
    Ok(monotone)
}

fn check_atoms(a: &[(f64, f64)], side: &str) -> Result<()> {
    if a.is_empty() || a.len() > MAX_ATOMS {
        return Err(Error::arg(format!("{side} law needs 1..={MAX_ATOMS} atoms, got {}", a.len())));
    }
    if a.iter().any(|(x, m)| !x.is_finite() || !(*m >= 0.0 && m.is_finite())) {
        return Err(Error::arg(format!("{side} law has a non-finite point or a negative mass")));
    }
    let total: f64 = a.iter().map(|p| p.1).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::MassMismatch(format!("{side} law has total mass {total}")));
    }
    Ok(())
}

fn sorted(a: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v = a.to_vec();
    v.sort_by(|p, q| p.0.total_cmp(&q.0));
    v
}

/// North-west-corner rule on sorted atoms.
pub fn monotone_matching(a: &[(f64, f64)], b: &[(f64, f64)], cost: CostFn) -> f64 {
    const DUST: f64 = 1e-15;
    let (a, b) = (sorted(a), sorted(b));
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a[0].1, b[0].1);
    let mut total = 0.0;
    while i < a.len() && j < b.len() {
        let m = ra.min(rb);
        total += m * cost.eval(a[i].0 - b[j].0);
        ra -= m;
        rb -= m;
        if ra <= DUST {
            i += 1;
            ra = a.get(i).map_or(0.0, |p| p.1);
        }
        if rb <= DUST {
            j += 1;
            rb = b.get(j).map_or(0.0, |p| p.1);
        }
    }
    total
}

/// Successive shortest paths (Bellman–Ford) on the bipartite network
/// source → a_i → b_j → sink.
fn min_cost_flow(a: &[(f64, f64)], b: &[(f64, f64)], cost: CostFn) -> f64 {
    const DUST: f64 = 1e-15;
    let (n, m) = (a.len(), b.len());
    let nodes = n + m + 2;
    let (src, snk) = (n + m, n + m + 1);
    struct Edge {
        to: usize,
        cap: f64,
        cost: f64,
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut adj: Vec<Vec<usize>> = (0..nodes).map(|_| Vec::new()).collect();
    let mut add = |edges: &mut Vec<Edge>, u: usize, v: usize, cap: f64, c: f64| {
        adj[u].push(edges.len());
        edges.push(Edge { to: v, cap, cost: c });
        adj[v].push(edges.len());
        edges.push(Edge { to: u, cap: 0.0, cost: -c });
    };
    for (i, p) in a.iter().enumerate() {
        add(&mut edges, src, i, p.1, 0.0);
    }
    for (j, q) in b.iter().enumerate() {
        add(&mut edges, n + j, snk, q.1, 0.0);
    }
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            add(&mut edges, i, n + j, f64::INFINITY, cost.eval(p.0 - q.0));
        }
    }
    // relax only on real improvements so rounding cannot fake a negative cycle
    let slack = 1e-12 * (1.0 + edges.iter().map(|e| e.cost.abs()).fold(0.0, f64::max));
    let mut total = 0.0;
    loop {
        let mut dist = alloc::vec![f64::INFINITY; nodes];
        let mut via: Vec<Option<usize>> = alloc::vec![None; nodes];
        dist[src] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u] == f64::INFINITY {
                    continue;
                }
                for &e in &adj[u] {
                    let ed = &edges[e];
                    if ed.cap > DUST && dist[u] + ed.cost < dist[ed.to] - slack {
                        dist[ed.to] = dist[u] + ed.cost;
                        via[ed.to] = Some(e);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[snk] == f64::INFINITY {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = snk;
        let mut hops = 0;
        while let Some(e) = via[v] {
            push = push.min(edges[e].cap);
            v = edges[e ^ 1].to;
            hops += 1;
            if hops > nodes {
                return total;
            }
        }
        let mut v = snk;
        while let Some(e) = via[v] {
            edges[e].cap -= push;
            edges[e ^ 1].cap += push;
            total += push * edges[e].cost;
            v = edges[e ^ 1].to;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Component;
    use crate::special::mean_abs_std_normal;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(m: f64, v: f64) -> Density1D {
        Density1D::gaussian(m, v).unwrap()
    }

    fn grid_of(d: &Density1D) -> Density1D {
        Density1D::grid(d.support(), d.node_log_pdf().to_vec()).unwrap()
    }

    #[test]
    fn plan_examples() {
        let std = Density1D::standard_gaussian();
        let p = monotone_plan(&g(0.0, 4.0), &std).unwrap();
        assert_eq!((p.map(1.3), p.derivative(1.3)), (2.6, 2.0));
        let p = monotone_plan(&g(3.0, 1.0), &std).unwrap();
        assert_eq!((p.map(-0.5), p.derivative(-0.5)), (2.5, 1.0));
        let p = monotone_plan(&std, &std).unwrap();
        assert_eq!(p.map(0.77), 0.77);
    }

    #[test]
    fn general_plan_matches_affine_map() {
        // the same Gaussians as grids go through quantile tables
        let (mu, nu) = (grid_of(&g(0.0, 4.0)), grid_of(&Density1D::standard_gaussian()));
        let p = monotone_plan(&mu, &nu).unwrap();
        for x in [-6.0, -2.0, 0.0, 0.4, 3.0, 6.5] {
            assert!((p.map(x) - 2.0 * x).abs() < 1e-8, "x={x} T={}", p.map(x));
            assert!((p.derivative(x) - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cost_examples() {
        let (mu, nu) = (g(0.0, 4.0), Density1D::standard_gaussian());
        assert!((transport_cost(&mu, &nu, CostFn::Sq).unwrap().value - 1.0).abs() < 1e-7);
        assert!((transport_cost(&mu, &nu, CostFn::Abs).unwrap().value - mean_abs_std_normal()).abs() < 1e-6);
        assert!(transport_cost(&mu, &mu, CostFn::Delta).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn grid_costs_match_closed_forms() {
        let (mu, nu) = (grid_of(&g(0.5, 2.25)), grid_of(&Density1D::standard_gaussian()));
        let c = transport_costs(&mu, &nu, &[CostFn::Sq, CostFn::Abs]).unwrap();
        assert!((c[0].value - (0.25 + 0.25)).abs() < 1e-7);
        // W1 = E|0.5 + 0.5 Z|
        let w1 = 0.5 * (2.0 * crate::special::std_normal_pdf(1.0) + (2.0 * crate::special::std_normal_cdf(1.0) - 1.0));
        assert!((c[1].value - w1).abs() < 1e-7, "{} vs {w1}", c[1].value);
    }

    #[test]
    fn remark_cost_ordering() {
        let std = Density1D::standard_gaussian();
        let mix = Density1D::mixture(vec![Component::new(0.5, -1.0, 1.0), Component::new(0.5, 1.0, 1.0)]).unwrap();
        for mu in [g(0.0, 4.0), g(0.0, 0.25), g(1.0, 1.0), mix] {
            let c = transport_costs(&mu, &std, &[CostFn::Abs, CostFn::Delta]).unwrap();
            let (w1, td) = (c[0].value, c[1].value);
            assert!((1.0 - core::f64::consts::LN_2) * w1.min(w1 * w1) <= td + 1e-6);
            assert!(td <= w1 + 1e-6);
        }
    }

    #[test]
    fn product_examples() {
        let std = Density1D::standard_gaussian();
        let gg = ProductDensity::new(vec![std.clone(), std.clone()]).unwrap();
        let p = ProductDensity::new(vec![g(0.0, 4.0), g(0.0, 4.0)]).unwrap();
        assert!((product_transport_bound(&p, &gg, CostFn::Sq).unwrap() - 2.0).abs() < 1e-7);
        assert!(product_transport_bound(&gg, &gg, CostFn::Sq).unwrap().abs() < 1e-15);
        let s = ProductDensity::new(vec![g(1.0, 1.0), std.clone()]).unwrap();
        assert!((product_transport_bound(&s, &gg, CostFn::Sq).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn discrete_examples() {
        assert_eq!(discrete_ot_oracle(&[(0.0, 1.0)], &[(3.0, 1.0)], CostFn::Sq).unwrap(), 9.0);
        let a = [(0.0, 0.5), (2.0, 0.5)];
        let b = [(1.0, 0.5), (3.0, 0.5)];
        assert_eq!(discrete_ot_oracle(&a, &b, CostFn::Abs).unwrap(), 1.0);
        assert!(discrete_ot_oracle(&[(0.0, 0.6)], &b, CostFn::Abs).is_err());
    }

    #[test]
    fn quantile_discretisation_converges() {
        let (mu, nu) = (g(0.0, 4.0), Density1D::standard_gaussian());
        let c20 = discrete_ot_oracle(&quantile_atoms(&mu, 20).unwrap(), &quantile_atoms(&nu, 20).unwrap(), CostFn::Sq).unwrap();
        let c64 = discrete_ot_oracle(&quantile_atoms(&mu, 64).unwrap(), &quantile_atoms(&nu, 64).unwrap(), CostFn::Sq).unwrap();
        assert!((c64 - 1.0).abs() < 5e-2);
        assert!((c64 - 1.0).abs() < (c20 - 1.0).abs());
    }

    #[test]
    fn flow_solver_agrees_with_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let atoms = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(1..=8);
                let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.iter().map(|w| (rng.gen_range(-3.0..3.0), w / s)).collect::<Vec<_>>()
            };
            let (a, b) = (atoms(&mut rng), atoms(&mut rng));
            for c in [CostFn::Sq, CostFn::Abs, CostFn::Delta, CostFn::DeltaScaled(2.5)] {
                let m = monotone_matching(&a, &b, c);
                let f = min_cost_flow(&a, &b, c);
                assert!((m - f).abs() <= 1e-12 * m.max(1.0), "{c:?}: {m} vs {f}");
            }
        }
    }

    #[test]
    fn crossed_matching_is_never_better() {
        // brute force over permutations on uniform instances
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let k = rng.gen_range(2..=6);
            let a: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen_range(-2.0..2.0), 1.0 / k as f64)).collect();
            let b: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen_range(-2.0..2.0), 1.0 / k as f64)).collect();
            let m = discrete_ot_oracle(&a, &b, CostFn::Delta).unwrap();
            let mut perm: Vec<usize> = (0..k).collect();
            let mut best = f64::INFINITY;
            heap_permutations(&mut perm, k, &mut |p| {
                let c: f64 = p.iter().enumerate().map(|(i, &j)| CostFn::Delta.eval(a[i].0 - b[j].0)).sum::<f64>() / k as f64;
                best = best.min(c);
            });
            assert!((m - best).abs() < 1e-12);
        }
    }

    fn heap_permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == 1 {
            f(p);
            return;
        }
        for i in 0..k {
            heap_permutations(p, k - 1, f);
            let j = if k % 2 == 0 { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
}
