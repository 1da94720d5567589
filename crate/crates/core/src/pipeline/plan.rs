use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{prime_power, AffineSpaceSpec};
use crate::constructions::{fmt_sizes, Provider, Request};
use crate::designs::{admissible, params, solve_overlap, y_admissible, DesignParams, GroupType};

use super::PipelineError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Block size exactly `k`.
    Weak(usize),
    /// Block sizes from `K`.
    Full(BTreeSet<usize>),
}

impl Mode {
    pub fn sizes(&self) -> BTreeSet<usize> {
        match self {
            Mode::Weak(k) => BTreeSet::from([*k]),
            Mode::Full(k) => k.clone(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Weak(k) => write!(f, "weak k={k}"),
            Mode::Full(k) => write!(f, "full K={{{}}}", fmt_sizes(k)),
        }
    }
}

/// Search caps standing in for the unknown "sufficiently large" bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_r: usize,
    pub max_q: u64,
    /// Smallest truncation size allowed (the `c` of the overlap lemma).
    pub min_x: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_r: 40,
            max_q: 256,
            min_x: 1,
        }
    }
}

/// What to plan for. `y` fixes the final size `v = alpha y + 1`; any of
/// `r`, `q`, `n`, `x` may be pinned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanRequest {
    pub mode: Mode,
    pub d: u32,
    pub y: Option<u64>,
    pub r: Option<usize>,
    pub q: Option<u64>,
    pub n: Option<u64>,
    pub x: Option<u64>,
    pub limits: Limits,
}

impl PlanRequest {
    pub fn new(mode: Mode, d: u32) -> Self {
        PlanRequest {
            mode,
            d,
            y: None,
            r: None,
            q: None,
            n: None,
            x: None,
            limits: Limits::default(),
        }
    }
}

/// An ingredient the plan relies on and where it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub stage: &'static str,
    pub request: Request,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelinePlan {
    pub mode: Mode,
    pub sizes: BTreeSet<usize>,
    pub params: DesignParams,
    pub d: u32,
    pub y: u64,
    pub r: usize,
    pub q: u64,
    pub n: u64,
    pub x: u64,
    pub v: u64,
    pub bindings: Vec<Binding>,
    pub limits: Limits,
}

impl PipelinePlan {
    /// `q^d`, the number of groups through the middle stages.
    pub fn points(&self) -> u64 {
        self.q.pow(self.d)
    }
}

impl fmt::Display for PipelinePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, d={}: r={} q={} n={} x={} y={} v={}",
            self.mode, self.d, self.r, self.q, self.n, self.x, self.y, self.v
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockReason {
    /// An ingredient could not be resolved. `admissible` says whether it
    /// passes the necessary conditions (so only the registry is lacking).
    Missing { request: Request, admissible: bool },
    Inadmissible(String),
}

/// A candidate parameter choice the planner had to reject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Blocked {
    pub r: usize,
    pub q: Option<u64>,
    pub n: Option<u64>,
    pub x: Option<u64>,
    pub reason: BlockReason,
}

impl fmt::Display for Blocked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.r)?;
        for (name, val) in [("q", self.q), ("n", self.n), ("x", self.x)] {
            if let Some(val) = val {
                write!(f, " {name}={val}")?;
            }
        }
        match &self.reason {
            BlockReason::Missing { request, admissible: true } => {
                write!(f, ": missing ingredient {request} (admissible; not in the registry or generators)")
            }
            BlockReason::Missing { request, admissible: false } => {
                write!(f, ": missing ingredient {request} (fails the necessary conditions)")
            }
            BlockReason::Inadmissible(why) => write!(f, ": {why}"),
        }
    }
}

/// The ingredient requests of a candidate, in stage order.
pub(crate) fn requests(sizes: &BTreeSet<usize>, alpha: u64, r: usize, q: u64, n: u64, x: u64) -> Vec<(&'static str, Request)> {
    let a = alpha as usize;
    let mut out = vec![
        ("inflate by n", Request::gdd(&BTreeSet::from([q as usize]), GroupType::uniform(n as usize, q as usize))),
        ("break blocks", Request::pbd(q as usize, &BTreeSet::from([r]))),
        ("inflate by alpha", Request::gdd(sizes, GroupType::uniform(a, r))),
    ];
    if x < n {
        out.push(("inflate by alpha", Request::gdd(sizes, GroupType::uniform(a, r - 1))));
    }
    out.push(("add point", Request::pbd(n as usize * a + 1, sizes)));
    if x != n {
        out.push(("add point", Request::pbd(x as usize * a + 1, sizes)));
    }
    out
}

fn request_admissible(request: &Request) -> bool {
    match request {
        Request::Pbd { v, sizes } => admissible(*v as u64, sizes).unwrap_or(false),
        Request::Gdd { .. } => true,
    }
}

/// `(n, x)` pairs with `y = n A + x`, `c <= x <= n`: the overlap-lemma
/// witness (with `n` a multiple of gamma) first, then every other
/// representation by decreasing `n`.
fn splits(y: u64, a: u64, c: u64, gamma: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if let Ok(o) = solve_overlap(y, gamma * a, c) {
        out.push((o.n * gamma, o.x));
    }
    let top = y / a;
    for n in (1..=top).rev() {
        let x = y - n * a;
        if x > n {
            break;
        }
        if x >= c && !out.contains(&(n, x)) {
            out.push((n, x));
        }
    }
    out
}

/// Chooses `(r, q, n, x)`: smallest `r`, then smallest `q`, then the first
/// `(n, x)` split for which every ingredient resolves.
pub fn plan(req: &PlanRequest, provider: &mut Provider) -> Result<PipelinePlan, PipelineError> {
    let sizes = req.mode.sizes();
    let p = params(&sizes)?;
    let (alpha, gamma) = (p.alpha, p.gamma);
    if let Some(y) = req.y {
        if !y_admissible(y, &p) {
            return Err(PipelineError::InadmissibleTarget {
                y,
                gamma,
                residue: (y as u128 * (alpha as u128 * y as u128 + 1) % gamma as u128) as u64,
            });
        }
    } else if req.n.is_none() || req.x.is_none() || req.q.is_none() {
        return Err(PipelineError::MissingTarget);
    }

    let rs: Vec<usize> = match req.r {
        Some(r) => vec![r],
        None => (3..=req.limits.max_r).filter(|r| *r as u64 % gamma == 1 % gamma).collect(),
    };
    let mut blocked = Vec::new();
    for r in rs {
        let base = Blocked {
            r,
            q: None,
            n: None,
            x: None,
            reason: BlockReason::Inadmissible(String::new()),
        };
        if r < 3 || r as u64 % gamma != 1 % gamma {
            blocked.push(Blocked {
                reason: BlockReason::Inadmissible(format!("r must be >= 3 and 1 mod gamma = {gamma}")),
                ..base
            });
            continue;
        }
        let step = (r * (r - 1)) as u64;
        let qs: Vec<u64> = match req.q {
            Some(q) => vec![q],
            None => (2..=req.limits.max_q).filter(|q| (q - 1) % step == 0 && prime_power(*q).is_some()).collect(),
        };
        for q in qs {
            let at_q = Blocked { q: Some(q), ..base.clone() };
            if (q - 1) % step != 0 || prime_power(q).is_none() {
                blocked.push(Blocked {
                    reason: BlockReason::Inadmissible(format!("q must be a prime power = 1 mod r(r-1) = {step}")),
                    ..at_q
                });
                continue;
            }
            if let Err(e) = AffineSpaceSpec::new(q, req.d) {
                blocked.push(Blocked {
                    reason: BlockReason::Inadmissible(format!("AG_{}({q}): {e}", req.d)),
                    ..at_q
                });
                continue;
            }
            let a = q.pow(req.d) - 1;
            let candidates: Vec<(u64, u64)> = match (req.y, req.n, req.x) {
                (None, Some(n), Some(x)) => vec![(n, x)],
                (Some(y), n_fix, x_fix) => splits(y, a, req.limits.min_x, gamma)
                    .into_iter()
                    .filter(|&(n, x)| n_fix.is_none_or(|f| f == n) && x_fix.is_none_or(|f| f == x))
                    .collect(),
                _ => unreachable!("target checked above"),
            };
            if candidates.is_empty() {
                blocked.push(Blocked {
                    reason: BlockReason::Inadmissible("no split y = n(q^d - 1) + x with min_x <= x <= n".into()),
                    ..at_q
                });
            }
            'split: for (n, x) in candidates {
                let here = Blocked {
                    n: Some(n),
                    x: Some(x),
                    ..at_q.clone()
                };
                if x == 0 || x > n || !y_admissible(n, &p) || !y_admissible(x, &p) {
                    blocked.push(Blocked {
                        reason: BlockReason::Inadmissible(format!(
                            "n and x must satisfy 1 <= x <= n and t(alpha t + 1) = 0 mod {gamma}"
                        )),
                        ..here
                    });
                    continue;
                }
                let mut bindings = Vec::new();
                for (stage, request) in requests(&sizes, alpha, r, q, n, x) {
                    match provider.source_of(&request) {
                        Some(source) => bindings.push(Binding { stage, request, source }),
                        None => {
                            let admissible = request_admissible(&request);
                            blocked.push(Blocked {
                                reason: BlockReason::Missing { request, admissible },
                                ..here
                            });
                            continue 'split;
                        }
                    }
                }
                let y = n * a + x;
                return Ok(PipelinePlan {
                    mode: req.mode.clone(),
                    sizes,
                    params: p,
                    d: req.d,
                    y,
                    r,
                    q,
                    n,
                    x,
                    v: y * alpha + 1,
                    bindings,
                    limits: req.limits,
                });
            }
        }
    }
    Err(PipelineError::NoParametersWithinLimits(blocked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Generators;
    use crate::pipeline::Registry;

    #[test]
    fn weak_k3_plan() {
        let mut p = Provider::generators_only();
        let mut req = PlanRequest::new(Mode::Weak(3), 2);
        req.y = Some(2197);
        let plan = plan(&req, &mut p).unwrap();
        assert_eq!((plan.r, plan.q, plan.n, plan.x, plan.v), (4, 13, 13, 13, 4395));
        assert_eq!(plan.bindings.len(), 4);
    }

    #[test]
    fn empty_registry_names_the_first_missing_ingredient() {
        let mut p = Provider::new(Registry::new(), Generators::none());
        let mut req = PlanRequest::new(Mode::Weak(3), 2);
        req.y = Some(2197);
        let err = plan(&req, &mut p).unwrap_err();
        let first = err.missing_request().unwrap().clone();
        assert_eq!(first, Request::gdd(&BTreeSet::from([13]), GroupType::uniform(13, 13)));
        assert!(err.to_string().contains("missing ingredient {13}-GDD of type 13^13"));
    }

    #[test]
    fn full_mode_uses_odd_r() {
        let mut p = Provider::generators_only();
        let mut req = PlanRequest::new(Mode::Full(BTreeSet::from([3, 4, 5])), 1);
        req.y = Some(56);
        let plan = plan(&req, &mut p).unwrap();
        assert_eq!(plan.params.gamma, 2);
        // (n, x) = (9, 2) would need a {3,4,5}-GDD of type 1^2
        assert_eq!((plan.r, plan.q, plan.n, plan.x, plan.v), (3, 7, 8, 8, 57));
    }

    #[test]
    fn inadmissible_target() {
        let mut p = Provider::generators_only();
        let mut req = PlanRequest::new(Mode::Weak(3), 2);
        req.y = Some(2);
        assert!(matches!(plan(&req, &mut p), Err(PipelineError::InadmissibleTarget { .. })));
        req.y = None;
        assert_eq!(plan(&req, &mut p), Err(PipelineError::MissingTarget));
    }

    #[test]
    fn splits_follow_the_lemma_first() {
        // A = 8 (q = 3, d = 2), gamma = 3: witness from solve_overlap(y, 24, 1)
        let s = splits(700, 8, 1, 3);
        let o = solve_overlap(700, 24, 1).unwrap();
        assert_eq!(s[0], (3 * o.n, o.x));
        for (n, x) in s {
            assert_eq!(n * 8 + x, 700);
            assert!(1 <= x && x <= n);
        }
    }

    #[test]
    fn planning_is_deterministic() {
        let mut req = PlanRequest::new(Mode::Weak(3), 2);
        req.y = Some(2197);
        let a = plan(&req, &mut Provider::generators_only()).unwrap();
        let b = plan(&req, &mut Provider::generators_only()).unwrap();
        assert_eq!(a, b);
    }
}
