use super::analysis::{Analysis, Centered};
use super::cheeger::{cheeger_terms, CheegerTerms, C_L, LAMBDA};
use super::delta::{delta, C0};
use super::{BoundCertificate, BoundOptions, Constant, Outcome, Provenance, SuiteEntry};
use crate::density::{convolve, heat_flow, Density, Density1D};
use crate::error::{Error, Result};
use crate::functionals::{entropy_1d, entropy_power, fisher_information, relative_entropy_1d};
use crate::quadrature::integrate_samples;
use crate::transport::{plan_costs, transport_cost, CostFn};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

/// `|E X| ≤ MEAN_TOL` counts as mean zero.
pub const MEAN_TOL: f64 = 1e-6;
/// Relative slack allowed in `E|X|² ≤ n`.
pub const MOMENT_SLACK: f64 = 1e-8;
/// Below this a denominator `D` or `W2²` is treated as 0 and the ratio as 0.
pub const RATIO_FLOOR: f64 = 1e-12;

/// One registered inequality, stated as `lhs ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInfo {
    pub id: &'static str,
    pub statement: &'static str,
}

macro_rules! registry {
    ($($id:literal => $s:literal,)*) => {
        /// Every bound, in evaluation order.
        pub const REGISTRY: &[BoundInfo] = &[$(BoundInfo { id: $id, statement: $s },)*];
    };
}

registry! {
    "lsi" => "I/2 >= D",
    "thm1.1-a" => "I - 2D >= n Delta(I(X)/n - 1)",
    "thm1.1-b" => "I - 2D >= (sqrt(I) - W2)^2 + n Delta((W2/sqrt(I))(I(X)/n - 1))",
    "eq1.8" => "I - 2D >= n Delta(I/n), given E|X|^2 <= n",
    "cor1.2" => "I - 2D >= (Delta(4)/16) W2^4/n, given E|X|^2 <= n",
    "hwi" => "W2 sqrt(I) - W2^2/2 >= D",
    "hwi-eps" => "I/(2 eps) + (eps - 1) W2^2/2 >= D for every eps > 0",
    "talagrand" => "2D >= W2^2",
    "eq1.4" => "sqrt(I) >= W2",
    "pinsker" => "D >= TV^2/2 with TV = int |p - q|",
    "stam" => "I(X) N(X)/(2 pi e) >= n",
    "epi" => "N(X + Y) >= N(X) + N(Y)",
    "cor2.2" => "(n/2) log(I/n + 2 - b) + (n/2)(b - 1) >= D with b = E|X|^2/n, and (n/2) log(I/n + 1) >= D when b <= 1",
    "lem3.2" => "W2^2(X, Y)/(2t) >= D(X_t | Y_t)",
    "lem3.3" => "1/I(X + Y) >= 1/I(X) + 1/I(Y)",
    "thm3-t" => "W2^2/(2t) + (n/2) log((n + t I(X))/(n(1 + t))) + t/(2(1 + t)) (I - I(X) + n) >= D at t and at W2/(sqrt(I) - W2)",
    "thm4.1" => "D >= W2^2/2 + T_Delta/(8 pi) for mean-zero laws on the line",
    "thm4.2" => "D >= (1/2 + (1 - log 2) min(1, sqrt(eps))) W2^2 for mean-zero laws with v'' >= eps",
    "cor4.3" => "I/2 - D >= c T_Delta^2/W2^2 and T_Delta^2/(256 pi^2 D), both for the centred law",
    "cor4.4" => "I/2 - D >= c min(1, eps) W2^2 for mean-zero laws with v'' >= eps",
    "thm1.3" => "I/2 - D >= T_Delta(rec)^2/(256 pi^2 D(rec)) with 0/0 = 0",
    "eq1.12" => "I/2 - D >= c' W1(rec)^4/D(rec), given D(rec) <= 1",
    "thm1.4" => "I/2 - D >= c min(1, eps) W2^2(rec), given V'' >= eps I_n",
    "cheeger" => "int |f'| dgamma >= sqrt(2/pi) int |f - m(f)| dgamma",
    "cheeger-delta" => "int Delta(2|f'|/lambda) dgamma >= int Delta(|f - m(f)|) dgamma",
    "talagrand-map" => "D >= W2^2/2 + int Delta(T' - 1) dgamma, with equality",
}

pub fn bound_ids() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|b| b.id)
}

pub fn lookup(id: &str) -> Result<&'static BoundInfo> {
    REGISTRY.iter().find(|b| b.id == id).ok_or_else(|| Error::UnknownBound(id.to_string()))
}

/// `c` in `I − 2D ≥ c W2⁴/n`: `Δ(s) ≥ (Δ(4)/16) s²` on `[0, 4]`.
pub fn cor12_constant() -> f64 {
    delta(4.0).expect("4 > -1") / 16.0
}

/// `4π(√(1 + 1/(4π)) − 1)`: `√(1 + s) − 1 ≥ c s` for `s ≤ 1/(4π)`.
pub fn sqrt_chord_constant() -> f64 {
    4.0 * PI * (libm::sqrt(1.0 + 1.0 / (4.0 * PI)) - 1.0)
}

/// Constant in front of `T_Δ²/W2²` for the deficit itself.
pub fn cor43_constant() -> f64 {
    let c = sqrt_chord_constant();
    c * c / (32.0 * PI * PI)
}

/// `1/(256π²)`.
pub const TENSOR_CONSTANT: f64 = 1.0 / (256.0 * PI * PI);

/// `c'` in `I/2 − D ≥ c' W1⁴/D` after recentering.
pub fn w1_constant() -> f64 {
    C0 * C0 / (512.0 * PI * PI)
}

/// `2c₀²/(1 + √(1 + 2c₀))²` with `c₀ = 1 − log 2`.
pub fn log_concave_constant() -> f64 {
    let s = 1.0 + libm::sqrt(1.0 + 2.0 * C0);
    2.0 * C0 * C0 / (s * s)
}

struct Cert {
    id: &'static str,
    lhs: f64,
    rhs: f64,
    constants: BTreeMap<String, Constant>,
    notes: Vec<String>,
}

impl Cert {
    fn set(&mut self, lhs: f64, rhs: f64) {
        self.lhs = lhs;
        self.rhs = rhs;
    }

    fn k(&mut self, name: &str, value: f64, provenance: Provenance) {
        self.constants.insert(name.to_string(), Constant { value, provenance });
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, tol: f64, error_estimate: f64) -> BoundCertificate {
        let slack = self.lhs - self.rhs;
        BoundCertificate {
            bound_id: self.id.to_string(),
            lhs: self.lhs,
            rhs: self.rhs,
            slack,
            pass: slack >= -tol,
            tol,
            error_estimate,
            constants: self.constants,
            notes: self.notes.join("; "),
        }
    }
}

fn hypothesis(bound: &'static str, reason: impl Into<String>) -> Error {
    Error::Hypothesis { bound, reason: reason.into() }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den <= RATIO_FLOOR {
        0.0
    } else {
        num / den
    }
}

/// Evaluate one bound on `mu`.
pub fn evaluate_bound(id: &str, mu: &Density, opts: &BoundOptions) -> Result<BoundCertificate> {
    evaluate_with(id, &Analysis::new(mu), opts)
}

/// Every bound in `ids` on one density, sharing the computed functionals.
pub fn certify_density(mu: &Density, ids: &[&str], opts: &BoundOptions) -> Vec<Outcome> {
    let a = Analysis::new(mu);
    ids.iter().map(|id| Outcome::from_result(evaluate_with(id, &a, opts))).collect()
}

/// Every `(bound, density)` pair, ordered by bound then battery index.
pub fn certify_suite(battery: &[Density], ids: &[&str], opts: &BoundOptions) -> Vec<SuiteEntry> {
    let per_density: Vec<Vec<Outcome>> = battery.iter().map(|mu| certify_density(mu, ids, opts)).collect();
    let mut out = Vec::with_capacity(ids.len() * battery.len());
    for (k, id) in ids.iter().enumerate() {
        for (index, row) in per_density.iter().enumerate() {
            out.push(SuiteEntry { bound_id: id.to_string(), index, outcome: row[k].clone() });
        }
    }
    out
}

pub(crate) fn evaluate_with(id: &str, a: &Analysis, opts: &BoundOptions) -> Result<BoundCertificate> {
    let info = lookup(id)?;
    if !(opts.tol >= 0.0) {
        return Err(Error::arg(format!("tolerance must be non-negative, got {}", opts.tol)));
    }
    a.take_error();
    let mut c = Cert { id: info.id, lhs: 0.0, rhs: 0.0, constants: BTreeMap::new(), notes: Vec::new() };
    let n = a.n;
    match info.id {
        "lsi" => {
            let (i, d) = (a.i_rel()?, a.d()?);
            c.set(0.5 * i, d);
        }
        "thm1.1-a" => {
            let (i, d, i0) = (a.i_rel()?, a.d()?, a.i_plain()?);
            c.set(i - 2.0 * d, n * delta(i0 / n - 1.0)?);
        }
        "thm1.1-b" => {
            let (i, d, i0) = (a.i_rel()?, a.d()?, a.i_plain()?);
            over_w2(a, &mut c, |w2| {
                let w = libm::sqrt(w2);
                let s = if i > 0.0 { (w / libm::sqrt(i)).min(1.0) } else { 0.0 };
                let r = libm::sqrt(i) - w;
                Ok((i - 2.0 * d, r * r + n * delta(s * (i0 / n - 1.0))?))
            })?;
        }
        "eq1.8" => {
            moment(a, info.id)?;
            let (i, d) = (a.i_rel()?, a.d()?);
            c.set(i - 2.0 * d, n * delta(i / n)?);
        }
        "cor1.2" => {
            moment(a, info.id)?;
            let (i, d) = (a.i_rel()?, a.d()?);
            let k = cor12_constant();
            c.k("c", k, Provenance::DerivedFromProof);
            over_w2(a, &mut c, |w2| Ok((i - 2.0 * d, k * w2 * w2 / n)))?;
        }
        "hwi" => {
            let (i, d) = (a.i_rel()?, a.d()?);
            c.k("kappa", 1.0, Provenance::Paper);
            over_w2(a, &mut c, |w2| Ok((libm::sqrt(w2 * i) - 0.5 * w2, d)))?;
        }
        "hwi-eps" => {
            let (i, d) = (a.i_rel()?, a.d()?);
            if opts.eps_grid.iter().any(|e| !(*e > 0.0)) {
                return Err(Error::arg("every eps in the HWI family must be positive"));
            }
            c.note(format!("eps over {:?} and the balancing value sqrt(I)/W2", opts.eps_grid));
            over_w2(a, &mut c, |w2| {
                let f = |e: f64| i / (2.0 * e) + 0.5 * (e - 1.0) * w2;
                let mut lhs = opts.eps_grid.iter().map(|e| f(*e)).fold(f64::INFINITY, f64::min);
                if w2 > 0.0 && i > 0.0 {
                    lhs = lhs.min(f(libm::sqrt(i / w2)));
                }
                Ok((lhs, d))
            })?;
        }
        "talagrand" => {
            let d = a.d()?;
            over_w2(a, &mut c, |w2| Ok((2.0 * d, w2)))?;
        }
        "eq1.4" => {
            let i = a.i_rel()?;
            over_w2(a, &mut c, |w2| Ok((libm::sqrt(i), libm::sqrt(w2))))?;
        }
        "pinsker" => {
            let (d, tv) = (a.d()?, a.tv()?);
            c.set(d, 0.5 * tv * tv);
        }
        "stam" => {
            let (i0, np) = (a.i_plain()?, a.entropy_power()?);
            c.set(i0 * np / (2.0 * PI * E), n);
        }
        "epi" => {
            let (sum, ny) = smoothed_sum(a, opts, info.id)?;
            let nx = a.entropy_power()?;
            c.set(entropy_power(&sum)?.value, nx + ny);
        }
        "cor2.2" => {
            let (i, d) = (a.i_rel()?, a.d()?);
            let b = a.m2() / n;
            c.k("b", b, Provenance::Measured);
            let mut lhs = 0.5 * n * libm::log(i / n + 2.0 - b) + 0.5 * n * (b - 1.0);
            if b <= 1.0 {
                lhs = lhs.min(0.5 * n * libm::log(i / n + 1.0));
                c.note("b <= 1, simplified form also checked");
            }
            c.set(lhs, d);
        }
        "lem3.2" => {
            let t = time(opts)?;
            c.k("t", t, Provenance::Input);
            let (w2, d) = reversed_transport(a, opts, t, info.id)?;
            c.set(w2 / (2.0 * t), d);
        }
        "lem3.3" => {
            let (sum, _) = smoothed_sum(a, opts, info.id)?;
            let iy = match &opts.partner {
                Some(y) => fisher_information(&Density::Line(y.clone()))?.value,
                None => n / time(opts)?,
            };
            let i_sum = fisher_information(&sum)?.value;
            c.set(1.0 / i_sum, 1.0 / a.i_plain()? + 1.0 / iy);
        }
        "thm3-t" => {
            let t = time(opts)?;
            c.k("t", t, Provenance::Input);
            let (i, d, i0) = (a.i_rel()?, a.d()?, a.i_plain()?);
            let pre = |w2: f64, t: f64| {
                w2 / (2.0 * t)
                    + 0.5 * n * libm::log((n + t * i0) / (n * (1.0 + t)))
                    + t / (2.0 * (1.0 + t)) * (i - i0 + n)
            };
            let limit = 0.5 * i - 0.5 * n * delta(i0 / n - 1.0)?;
            over_w2(a, &mut c, |w2| {
                let w = libm::sqrt(w2);
                let gap = libm::sqrt(i) - w;
                let at_star = if w > 0.0 && gap > 1e-9 * libm::sqrt(i).max(1.0) { pre(w2, w / gap) } else { limit };
                Ok((pre(w2, t).min(at_star), d))
            })?;
            c.note("lhs is the smaller of the values at t and at the balancing time (its limit when undefined)");
        }
        "thm4.1" => {
            let mu = line(a, info.id)?;
            let (d, [w2, _, t_delta]) = (a.d()?, a.line_costs()?);
            if opts.median_variant {
                if mu.median().abs() > MEAN_TOL {
                    return Err(hypothesis(info.id, format!("median {} is not 0", mu.median())));
                }
            } else {
                centred(a, info.id)?;
            }
            if opts.thm41_scaled || opts.median_variant {
                let s = libm::sqrt(2.0 * PI);
                let tp = plan_costs(&a.plan()?, &[CostFn::DeltaScaled(s)])?[0].value;
                let k = if opts.median_variant { 1.0 } else { 0.25 };
                c.k("c", k, Provenance::Paper);
                c.k("scale", s, Provenance::Paper);
                c.set(d, 0.5 * w2 + k * tp);
            } else {
                c.k("c", 1.0 / (8.0 * PI), Provenance::Paper);
                c.set(d, 0.5 * w2 + t_delta / (8.0 * PI));
            }
        }
        "thm4.2" => {
            line(a, info.id)?;
            centred(a, info.id)?;
            let e = eps(a, info.id, &mut c)?;
            let (d, [w2, ..]) = (a.d()?, a.line_costs()?);
            c.k("c", C0, Provenance::Paper);
            c.set(d, (0.5 + C0 * libm::sqrt(e).min(1.0)) * w2);
        }
        "cor4.3" => {
            line(a, info.id)?;
            let cen = a.centered()?[0];
            let (k47, k48) = (cor43_constant(), TENSOR_CONSTANT);
            c.k("c", k47, Provenance::DerivedFromProof);
            c.k("c_entropy_form", k48, Provenance::Paper);
            let r47 = k47 * ratio(cen.t * cen.t, cen.w2_sq);
            let r48 = k48 * ratio(cen.t * cen.t, cen.d);
            c.note(format!("W2^2 form {r47:.6e}, entropy form {r48:.6e}; rhs is the larger"));
            c.set(a.deficit()?, r47.max(r48));
        }
        "cor4.4" => {
            line(a, info.id)?;
            centred(a, info.id)?;
            let e = eps(a, info.id, &mut c)?;
            let k = log_concave_constant();
            c.k("c", k, Provenance::DerivedFromProof);
            c.set(a.deficit()?, k * e.min(1.0) * a.line_costs()?[0]);
        }
        "thm1.3" => {
            let cen = a.centered()?;
            c.k("c", TENSOR_CONSTANT, Provenance::Paper);
            let rhs = cen.iter().map(|r| TENSOR_CONSTANT * ratio(r.t * r.t, r.d)).fold(0.0, f64::max);
            ordering_note(&mut c, &cen);
            c.set(a.deficit()?, rhs);
        }
        "eq1.12" => {
            let cen = a.centered()?;
            let ok: Vec<&Centered> = cen.iter().filter(|r| r.d <= 1.0).collect();
            if ok.is_empty() {
                return Err(hypothesis(info.id, format!("entropy of the recentred law {} exceeds 1", cen[0].d)));
            }
            let k = w1_constant();
            c.k("c", k, Provenance::DerivedFromProof);
            let rhs = ok.iter().map(|r| k * ratio(r.w1 * r.w1 * r.w1 * r.w1, r.d)).fold(0.0, f64::max);
            ordering_note(&mut c, &cen);
            c.set(a.deficit()?, rhs);
        }
        "thm1.4" => {
            let e = eps(a, info.id, &mut c)?;
            let k = log_concave_constant();
            c.k("c", k, Provenance::DerivedFromProof);
            let w = a.centered()?.iter().map(|r| r.w2_sq).fold(0.0, f64::max);
            c.set(a.deficit()?, k * e.min(1.0) * w);
        }
        "cheeger" | "cheeger-delta" => {
            line(a, info.id)?;
            let plan = a.plan()?;
            let delta_form = info.id == "cheeger-delta";
            c.k("lambda", LAMBDA, Provenance::Paper);
            if delta_form {
                c.k("c_L", C_L, Provenance::Paper);
            }
            let mut worst: Option<CheegerTerms> = None;
            for f in &opts.cheeger_fns {
                let t = cheeger_terms(*f, plan.source(), Some(&plan))?;
                let s = if delta_form { t.delta_slack() } else { t.l1_slack() };
                if worst.map_or(true, |w| s < if delta_form { w.delta_slack() } else { w.l1_slack() }) {
                    worst = Some(t);
                }
            }
            let w = worst.ok_or_else(|| Error::arg("no test functions given"))?;
            c.note(format!("tightest test function: {}", w.f.id()));
            if delta_form {
                c.set(w.delta_grad, w.delta_dev);
            } else {
                c.set(w.abs_grad, LAMBDA * w.abs_dev);
            }
        }
        "talagrand-map" => {
            line(a, info.id)?;
            let plan = a.plan()?;
            let g = plan.source();
            let spec = g.support();
            let mut v = Vec::with_capacity(spec.n_points);
            for (x, p) in spec.nodes().zip(g.node_pdf()) {
                if *p < 1e-250 {
                    v.push(0.0);
                    continue;
                }
                let dt = plan.derivative(x);
                if !(dt > 0.0 && dt.is_finite()) {
                    return Err(Error::DegeneratePlan(format!("T'({x}) = {dt}")));
                }
                v.push(delta(dt - 1.0)? * p);
            }
            let integral = integrate_samples(&v, &spec).value;
            c.set(a.d()?, 0.5 * a.line_costs()?[0] + integral);
        }
        _ => unreachable!("registry and evaluator disagree on {}", info.id),
    }
    if !(c.lhs.is_finite() && c.rhs.is_finite()) {
        return Err(Error::NonFiniteIntegrand { x: f64::NAN });
    }
    let err = a.take_error();
    Ok(c.finish(opts.tol, err))
}

/// Evaluate `f` on `W2²`; when only a bracket is known, use the value in the
/// bracket with the largest slack.
fn over_w2(a: &Analysis, c: &mut Cert, f: impl Fn(f64) -> Result<(f64, f64)>) -> Result<()> {
    let b = a.w2_bracket()?;
    if b.hi <= b.lo {
        let (l, r) = f(b.lo)?;
        c.set(l, r);
        return Ok(());
    }
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0, b.lo);
    for k in 0..=32 {
        let w2 = b.lo + (b.hi - b.lo) * k as f64 / 32.0;
        let (l, r) = f(w2)?;
        if l - r > best.0 {
            best = (l - r, l, r, w2);
        }
    }
    c.note(format!("W2^2 in [{:.6e}, {:.6e}], evaluated at {:.6e}", b.lo, b.hi, best.3));
    c.set(best.1, best.2);
    Ok(())
}

fn ordering_note(c: &mut Cert, cen: &[Centered]) {
    if cen.len() > 1 {
        c.note("transport and entropy of the recentred law are coordinate sums; rhs is the larger over both orderings");
    }
}

fn moment(a: &Analysis, id: &'static str) -> Result<()> {
    let m2 = a.m2();
    if m2 > a.n * (1.0 + MOMENT_SLACK) {
        return Err(hypothesis(id, format!("moment hypothesis: E|X|^2 = {m2} exceeds n = {}", a.n)));
    }
    Ok(())
}

fn line<'a>(a: &'a Analysis, id: &'static str) -> Result<&'a Density1D> {
    a.line().ok_or_else(|| hypothesis(id, "needs a law on the line"))
}

fn centred(a: &Analysis, id: &'static str) -> Result<()> {
    let m = a.mean()[0];
    if m.abs() > MEAN_TOL {
        return Err(hypothesis(id, format!("mean {m} is not 0")));
    }
    Ok(())
}

fn eps(a: &Analysis, id: &'static str, c: &mut Cert) -> Result<f64> {
    let e = a.convexity().ok_or_else(|| hypothesis(id, "no certified convexity bound eps"))?;
    c.k("eps", e, Provenance::Input);
    Ok(e)
}

fn time(opts: &BoundOptions) -> Result<f64> {
    if !(opts.t > 0.0 && opts.t.is_finite()) {
        return Err(Error::arg(format!("time t must be positive, got {}", opts.t)));
    }
    Ok(opts.t)
}

/// Law of `X + Y` and `N(Y)`, with `Y = √t Z` unless a partner is given.
fn smoothed_sum(a: &Analysis, opts: &BoundOptions, id: &'static str) -> Result<(Density, f64)> {
    match (&a.mu, &opts.partner) {
        (Density::Line(x), Some(y)) => {
            let ny = libm::exp(2.0 * entropy_1d(y).value);
            Ok((Density::Line(convolve(x, y)?), ny))
        }
        (Density::Plane(_), _) => Err(hypothesis(id, "needs a law on the line or a product")),
        (_, Some(_)) => Err(hypothesis(id, "a partner law is only supported on the line")),
        (_, None) => {
            let t = time(opts)?;
            Ok((a.smoothed(t)?, 2.0 * PI * E * t))
        }
    }
}

/// `(W2²(X, Y), D(X_t|Y_t))`, with `Y = γ_n` unless a partner is given.
fn reversed_transport(a: &Analysis, opts: &BoundOptions, t: f64, id: &'static str) -> Result<(f64, f64)> {
    let one = |x: &Density1D, y: &Density1D| -> Result<(f64, f64)> {
        let w2 = transport_cost(x, y, CostFn::Sq)?.value;
        let d = relative_entropy_1d(&heat_flow(x, t)?, &heat_flow(y, t)?)?.value;
        Ok((w2, d))
    };
    match (&a.mu, &opts.partner) {
        (Density::Line(x), Some(y)) => one(x, y),
        (Density::Line(x), None) => one(x, a.gamma().as_line().expect("line reference")),
        (Density::Product(p), None) => {
            let g = Density1D::gaussian_with(0.0, 1.0, p.factors()[0].settings())?;
            p.factors().iter().try_fold((0.0, 0.0), |acc, f| {
                let (w, d) = one(f, &g)?;
                Ok((acc.0 + w, acc.1 + d))
            })
        }
        (Density::Product(_), Some(_)) => Err(hypothesis(id, "a partner law is only supported on the line")),
        (Density::Plane(_), _) => Err(hypothesis(id, "needs a law on the line or a product")),
    }
}
