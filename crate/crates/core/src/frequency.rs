//! Error-count transfer from gadget formulas back to the input language.
//!
//! `x ↦ build(params, x)` is one-to-one with polynomially bounded output
//! length. A heuristic for backbone values on the gadgets therefore gives
//! a membership heuristic for `L(Mi)`: build the gadget, ask, read the
//! z-values. Every wrong membership answer comes from a wrong backbone
//! answer on a gadget no longer than `L(n)`, the longest gadget for inputs
//! of length at most `n`, hence
//!
//! ```text
//! errors_B(n) <= errors_A(L(n))
//! ```
//!
//! The harness measures both sides; error counts are observed, not assumed.

use crate::backbone::{backbone_value, BackboneConfig};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::formula::{Formula, PartialAssignment, VarKind, VarName};
use crate::gadget::{build, read_backbone_value, ConstructionParams, Family, FamilyParams, GadgetInstance};
use crate::machine::accepts;
use crate::reduction::invert;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

/// A heuristic's answer on one gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// A claimed backbone value.
    Value(PartialAssignment),
    /// A direct claim about `x ∈ L(Mi)`.
    Membership(bool),
}

type AnswerFn = dyn Fn(&Formula) -> Result<Answer> + Send + Sync;

/// A named, deterministic function from gadget formulas to answers.
pub struct HeuristicAdapter {
    name: String,
    answer: Box<AnswerFn>,
}

impl std::fmt::Debug for HeuristicAdapter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeuristicAdapter").field("name", &self.name).finish()
    }
}

impl HeuristicAdapter {
    pub fn new<F>(name: impl Into<String>, answer: F) -> Self
    where
        F: Fn(&Formula) -> Result<Answer> + Send + Sync + 'static,
    {
        HeuristicAdapter {
            name: name.into(),
            answer: Box::new(answer),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn answer(&self, f: &Formula) -> Result<Answer> {
        (self.answer)(f)
    }
}

pub const BUILTIN_ADAPTERS: [&str; 4] = ["all-true", "all-false", "parity-of-length", "oracle"];

fn z_series(f: &Formula, primed: bool) -> BTreeSet<VarName> {
    f.vars()
        .into_iter()
        .filter(|v| matches!(v.kind(), VarKind::Z { primed: p, .. } if *p == primed))
        .collect()
}

fn all_true(f: &Formula) -> PartialAssignment {
    z_series(f, false).into_iter().map(|v| (v, true)).collect()
}

/// All `zp.ℓ` false if the formula has any, else all `z.ℓ` false.
fn all_false(f: &Formula) -> PartialAssignment {
    let zp = z_series(f, true);
    let set = if zp.is_empty() { z_series(f, false) } else { zp };
    set.into_iter().map(|v| (v, false)).collect()
}

/// The embedded left reduction of a gadget-shaped formula.
fn left_reduction(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Or(sides) => match sides.first()? {
            Formula::And(cs) => cs.last(),
            _ => None,
        },
        _ => None,
    }
}

/// Backbone value of the z-block, or of the zp-block if the z-block is not
/// a backbone.
pub fn designated_value(f: &Formula, cfg: BackboneConfig) -> Result<PartialAssignment> {
    match backbone_value(f, &z_series(f, false), cfg) {
        Err(Error::NotABackbone) => {
            let zp = z_series(f, true);
            if zp.is_empty() {
                return Err(Error::NotABackbone);
            }
            backbone_value(f, &zp, cfg)
        }
        r => r,
    }
}

/// One of [`BUILTIN_ADAPTERS`].
pub fn builtin_adapter(name: &str, cfg: BackboneConfig) -> Option<HeuristicAdapter> {
    let a = match name {
        "all-true" => HeuristicAdapter::new(name, |f| Ok(Answer::Value(all_true(f)))),
        "all-false" => HeuristicAdapter::new(name, |f| Ok(Answer::Value(all_false(f)))),
        "parity-of-length" => HeuristicAdapter::new(name, |f| {
            let x_len = left_reduction(f)
                .map(|l| invert(l).into_pair().1.len())
                .unwrap_or(0);
            Ok(Answer::Value(if x_len % 2 == 0 { all_true(f) } else { all_false(f) }))
        }),
        "oracle" => HeuristicAdapter::new(name, move |f| Ok(Answer::Value(designated_value(f, cfg)?))),
        _ => return None,
    };
    Some(a)
}

#[derive(Debug, Clone)]
pub struct EnumeratedGadget {
    pub x: BitString,
    pub gadget: GadgetInstance,
    pub text: String,
}

impl EnumeratedGadget {
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }
}

/// Gadgets for every nonempty `x` with `|x| <= max_n`, shortest first and
/// lexicographic within a length. Fails if two of them serialize equally.
pub fn enumerate_family(params: &ConstructionParams, max_n: usize) -> Result<Vec<EnumeratedGadget>> {
    if max_n == 0 || max_n >= 24 {
        return Err(Error::InvalidParams(format!("max_n = {max_n} outside 1..=23")));
    }
    let xs: Vec<BitString> = BitString::all_up_to(max_n).collect();
    let items = xs
        .into_par_iter()
        .map(|x| {
            let gadget = build(params, &x)?;
            let text = gadget.formula.serialize();
            Ok(EnumeratedGadget { x, gadget, text })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::with_capacity(items.len());
    for it in &items {
        if !seen.insert(it.text.as_str()) {
            return Err(Error::InvalidParams(format!(
                "two inputs map to the same gadget (second is `{}`)",
                it.x
            )));
        }
    }
    Ok(items)
}

/// Per-gadget outcome of running an adapter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub x: BitString,
    pub len: usize,
    /// `x ∈ L(Mi)`.
    pub member: bool,
    /// The adapter's answer differs from the true backbone value.
    pub error_a: bool,
    /// The induced membership answer is wrong (or unreadable).
    pub error_b: bool,
}

/// Runs `adapter` on every gadget and scores both sides.
pub fn evaluate(
    adapter: &HeuristicAdapter,
    params: &ConstructionParams,
    gadgets: &[EnumeratedGadget],
    cfg: BackboneConfig,
) -> Result<Vec<Evaluation>> {
    gadgets
        .par_iter()
        .map(|g| {
            let f = &g.gadget.formula;
            let member = accepts(&params.machine_i, &g.x)?;
            let truth = designated_value(f, cfg)?;
            let answer = adapter.answer(f)?;
            let (error_a, claim) = match &answer {
                Answer::Value(a) => (*a != truth, read_backbone_value(g.gadget.family, a).ok()),
                Answer::Membership(b) => (*b != member, Some(*b)),
            };
            Ok(Evaluation {
                x: g.x.clone(),
                len: g.len(),
                member,
                error_a,
                error_b: claim != Some(member),
            })
        })
        .collect()
}

/// `len ↦` number of adapter errors on gadgets of length at most `len`,
/// at every distinct gadget length.
pub fn error_count_on_a(evals: &[Evaluation]) -> BTreeMap<usize, usize> {
    let mut by_len: BTreeMap<usize, usize> = BTreeMap::new();
    for e in evals {
        *by_len.entry(e.len).or_default() += usize::from(e.error_a);
    }
    let mut total = 0;
    by_len
        .into_iter()
        .map(|(len, c)| {
            total += c;
            (len, total)
        })
        .collect()
}

fn errors_a_up_to(evals: &[Evaluation], len: usize) -> usize {
    evals.iter().filter(|e| e.len <= len && e.error_a).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub n: usize,
    /// Inputs with `1 <= |x| <= n`.
    pub count: usize,
    /// `L(n)`: longest serialized gadget over those inputs.
    pub max_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub rows: Vec<DensityRow>,
    /// Least-squares slope of `ln L(n)` against `ln n` over `n >= 2`.
    pub q_hat: Option<f64>,
    /// Root-mean-square residual of that fit.
    pub residual: Option<f64>,
    /// Gadget lengths never decrease as `|x|` grows.
    pub monotone: bool,
}

impl DensityProfile {
    pub fn eps_hat(&self) -> Option<f64> {
        self.q_hat.filter(|q| *q != 0.0).map(|q| 1.0 / q)
    }
}

fn fit_loglog(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let sse: f64 = points.iter().map(|(x, y)| (y - icept - slope * x).powi(2)).sum();
    Some((slope, (sse / k).sqrt()))
}

pub fn density_profile(gadgets: &[EnumeratedGadget]) -> DensityProfile {
    let max_n = gadgets.iter().map(|g| g.x.len()).max().unwrap_or(0);
    let mut rows = Vec::with_capacity(max_n);
    let mut monotone = true;
    let mut prev_max = 0;
    for n in 1..=max_n {
        let at_n: Vec<usize> = gadgets.iter().filter(|g| g.x.len() == n).map(|g| g.len()).collect();
        if at_n.iter().any(|&l| l < prev_max) {
            monotone = false;
        }
        prev_max = prev_max.max(at_n.iter().copied().max().unwrap_or(0));
        rows.push(DensityRow {
            n,
            count: gadgets.iter().filter(|g| g.x.len() <= n).count(),
            max_len: prev_max,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 2)
        .map(|r| ((r.n as f64).ln(), (r.max_len as f64).ln()))
        .collect();
    let fit = fit_loglog(&points);
    DensityProfile {
        rows,
        q_hat: fit.map(|f| f.0),
        residual: fit.map(|f| f.1),
        monotone,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferRow {
    pub n: usize,
    pub count_a: usize,
    pub max_len: usize,
    /// `errors_A(L(n))`.
    pub errors_a: usize,
    /// Induced errors on inputs with `|x| <= n`.
    pub errors_b: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub adapter: String,
    pub family: Family,
    pub max_n: usize,
    pub rows: Vec<TransferRow>,
    pub profile: DensityProfile,
    pub evaluations: Vec<Evaluation>,
}

impl TransferReport {
    /// `errors_B(n) <= errors_A(L(n))` at every `n`.
    pub fn inequality_holds(&self) -> bool {
        self.rows.iter().all(|r| r.errors_b <= r.errors_a)
    }

    /// Tab-separated table with a commented header and summary.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let fam = match self.family {
            Family::A3k { k } => format!("a3k k={k}"),
            Family::Thm3 { epsilon, .. } => format!("thm3 epsilon={epsilon}"),
        };
        let _ = writeln!(s, "# transfer report: adapter={} family={fam} max_n={}", self.adapter, self.max_n);
        let _ = writeln!(s, "# h(n) is the measured error count of the adapter, not an assumed bound");
        let _ = writeln!(s, "# L(n) is the measured maximum gadget length over 1 <= |x| <= n");
        s.push_str("n\tcount_A\tmax_len\terrors_A\terrors_B_induced\n");
        for r in &self.rows {
            let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}", r.n, r.count_a, r.max_len, r.errors_a, r.errors_b);
        }
        let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(s, "# injective\ttrue");
        let _ = writeln!(s, "# lengths_monotone\t{}", self.profile.monotone);
        let _ = writeln!(s, "# inequality_holds\t{}", self.inequality_holds());
        let _ = writeln!(s, "# q_hat\t{}", fmt(self.profile.q_hat));
        let _ = writeln!(s, "# fit_residual\t{}", fmt(self.profile.residual));
        let _ = writeln!(s, "# eps_hat\t{}", fmt(self.profile.eps_hat()));
        s
    }
}

/// Enumerates the family up to `max_n`, runs `adapter`, and tabulates both
/// error curves against the measured length bound.
pub fn transfer_check(
    adapter: &HeuristicAdapter,
    params: &ConstructionParams,
    max_n: usize,
    cfg: BackboneConfig,
) -> Result<TransferReport> {
    let gadgets = enumerate_family(params, max_n)?;
    let evaluations = evaluate(adapter, params, &gadgets, cfg)?;
    let profile = density_profile(&gadgets);
    let rows = profile
        .rows
        .iter()
        .map(|d| TransferRow {
            n: d.n,
            count_a: d.count,
            max_len: d.max_len,
            errors_a: errors_a_up_to(&evaluations, d.max_len),
            errors_b: evaluations
                .iter()
                .filter(|e| e.x.len() <= d.n && e.error_b)
                .count(),
        })
        .collect();
    let family = gadgets.first().map(|g| g.gadget.family).unwrap_or(match params.family {
        FamilyParams::A3k { k } => Family::A3k { k },
        FamilyParams::Thm3 { epsilon } => Family::Thm3 { epsilon, m: 0 },
    });
    Ok(TransferReport {
        adapter: adapter.name().to_string(),
        family,
        max_n,
        rows,
        profile,
        evaluations,
    })
}
