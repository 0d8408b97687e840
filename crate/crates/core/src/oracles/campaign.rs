//! Deterministic sampling campaigns over the checkers' admissible domains.
//!
//! Points come from a Kronecker sequence with a seeded Cranley–Patterson
//! shift; the first `2^d` indices are the corners of the unit cube, which map
//! to dyadic endpoints and sector boundaries. Reductions run in index order.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::bht::{verify_bht_premises, BhtParams};
use super::geometry::{
    check_antipodal_separation, directional_derivative_bound, rotate, transversality_det,
};
use super::modulation::{
    opposite_sign_margin, same_sign_margin, ModulationSample, MODULATION_KAPPA,
};
use crate::decomp::{sector_index, Constants, Sign};
use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SameSign,
    OppositeSignSmall,
    AntipodalM1,
    DirectionalDerivative,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::SameSign,
        Regime::OppositeSignSmall,
        Regime::AntipodalM1,
        Regime::DirectionalDerivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::SameSign => "same-sign",
            Regime::OppositeSignSmall => "opposite-sign-small",
            Regime::AntipodalM1 => "antipodal-M1",
            Regime::DirectionalDerivative => "directional-derivative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }

    fn dim(self) -> usize {
        match self {
            Regime::SameSign => 7,
            Regime::OppositeSignSmall => 8,
            Regime::AntipodalM1 => 4,
            Regime::DirectionalDerivative => 4,
        }
    }
}

/// Outcome of one campaign. `samples` is the admissible-sample target and
/// `draws` the number of sequence points consumed to reach it; violations
/// are listed up to [`MAX_RECORDS`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub kind: String,
    pub c: f64,
    pub level: Option<u64>,
    pub samples: usize,
    pub draws: usize,
    pub admissible: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub worst: Option<Value>,
    pub records: Vec<Value>,
    pub extra: BTreeMap<String, f64>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.admissible >= self.samples && self.admissible > 0
    }
}

pub const MAX_RECORDS: usize = 100;
const CHUNK: usize = 8192;
const MAX_DRAW_FACTOR: usize = 64;
const TOP: f64 = 1.0 - 1.0 / (1u64 << 40) as f64;

/// Shifted Kronecker sequence in `[0, 1)^d`.
pub struct Sequence {
    alpha: Vec<f64>,
    shift: Vec<f64>,
}

impl Sequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        // generalised golden ratio: positive root of x^{d+1} = x + 1
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|i| (1.0 / phi.powi(i as i32)).fract()).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        Self { alpha, shift }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn point(&self, n: usize) -> Vec<f64> {
        let d = self.dim();
        if d < usize::BITS as usize && n < 1 << d {
            return (0..d).map(|i| if n >> i & 1 == 1 { TOP } else { 0.0 }).collect();
        }
        self.alpha
            .iter()
            .zip(&self.shift)
            .map(|(a, s)| (s + n as f64 * a).fract())
            .collect()
    }
}

/// Log-uniform value in `[2^lo, 2^hi]`.
fn log_range(u: f64, lo: f64, hi: f64) -> f64 {
    (lo + u * (hi - lo)).exp2()
}

/// Signed log-uniform value, `±[2^lo, 2^hi]`.
fn sym_log(u: f64, lo: f64, hi: f64) -> f64 {
    let v = 2.0 * u - 1.0;
    v.signum() * log_range(v.abs(), lo, hi)
}

fn polar(r: f64, th: f64) -> [f64; 2] {
    [r * th.cos(), r * th.sin()]
}

fn sign_of(u: f64) -> Sign {
    if u < 0.5 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

enum Outcome {
    Skip,
    Margin(f64, Value),
}

#[derive(Default)]
struct Acc {
    draws: usize,
    admissible: usize,
    violations: usize,
    min_margin: f64,
    worst: Option<Value>,
    records: Vec<Value>,
}

impl Acc {
    fn new() -> Self {
        Self {
            min_margin: f64::INFINITY,
            ..Default::default()
        }
    }

    fn push(&mut self, n: usize, o: Outcome) {
        if let Outcome::Margin(m, v) = o {
            self.admissible += 1;
            if !(m >= 0.0) {
                self.violations += 1;
                if self.records.len() < MAX_RECORDS {
                    self.records.push(json!({"index": n, "margin": m, "sample": v}));
                }
            }
            if m < self.min_margin || m.is_nan() {
                self.min_margin = m;
                self.worst = Some(v);
            }
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.admissible += other.admissible;
        self.violations += other.violations;
        for r in other.records {
            if self.records.len() < MAX_RECORDS {
                self.records.push(r);
            }
        }
        if other.min_margin < self.min_margin || other.min_margin.is_nan() {
            self.min_margin = other.min_margin;
            self.worst = other.worst;
        }
        self
    }
}

fn run_range<F>(start: usize, end: usize, f: &F) -> Acc
where
    F: Fn(usize) -> Outcome + Sync,
{
    let chunks = (end - start).div_ceil(CHUNK);
    let parts: Vec<Acc> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut acc = Acc::new();
            for n in start + k * CHUNK..(start + (k + 1) * CHUNK).min(end) {
                acc.push(n, f(n));
            }
            acc
        })
        .collect();
    parts.into_iter().fold(Acc::new(), Acc::merge)
}

/// Draws indices in order until `target` admissible samples are collected.
fn run<F>(target: usize, f: F) -> Acc
where
    F: Fn(usize) -> Outcome + Sync,
{
    let mut acc = Acc::new();
    let mut start = 0usize;
    while acc.admissible < target {
        if start > MAX_DRAW_FACTOR * target.max(CHUNK) {
            break;
        }
        let want = target - acc.admissible;
        let end = if start == 0 { want } else { start + want + want / 8 + 64 };
        acc = acc.merge(run_range(start, end, &f));
        start = end;
    }
    acc.draws = start;
    acc
}

fn summary(kind: &str, c: f64, level: Option<u64>, samples: usize, acc: Acc) -> CampaignSummary {
    CampaignSummary {
        kind: kind.to_string(),
        c,
        level,
        samples,
        draws: acc.draws,
        admissible: acc.admissible,
        violations: acc.violations,
        min_margin: acc.min_margin,
        worst: acc.worst,
        records: acc.records,
        extra: BTreeMap::new(),
    }
}

fn margin_or_skip(r: Result<f64>, v: Value) -> Outcome {
    match r {
        Ok(m) => Outcome::Margin(m, v),
        Err(_) => Outcome::Skip,
    }
}

/// Margins of one modulation regime at `κ = 1/3`.
pub fn modulation_campaign(regime: Regime, c: f64, samples: usize, seed: u64) -> Result<CampaignSummary> {
    let k = Constants::new(c)?;
    let seq = Sequence::new(regime.dim(), seed);
    let level = k.derivative_level();
    let acc = run(samples, |n| {
        let u = seq.point(n);
        match regime {
            Regime::SameSign => {
                let (r1, r2) = (log_range(u[0], -4.0, 20.0), log_range(u[2], -4.0, 20.0));
                let s = ModulationSample {
                    tau1: r1 + sym_log(u[4], -4.0, 24.0),
                    tau2: r2 + sym_log(u[5], -4.0, 24.0),
                    xi1: polar(r1, TAU * u[1]),
                    xi2: polar(r2, TAU * u[3]),
                    sign0: sign_of(u[6]),
                    sign1: Sign::Minus,
                    sign2: Sign::Minus,
                    c,
                };
                margin_or_skip(same_sign_margin(&s, MODULATION_KAPPA), json!(s))
            }
            Regime::OppositeSignSmall => {
                let hi = log_range(u[0], -4.0, 20.0);
                let lo = hi * k.smallness_ratio() * u[2] * (1.0 - 1e-12);
                let (r1, r2) = if u[7] < 0.5 { (hi, lo) } else { (lo, hi) };
                let s = ModulationSample {
                    tau1: r1 + sym_log(u[4], -4.0, 24.0),
                    tau2: -r2 + sym_log(u[5], -4.0, 24.0),
                    xi1: polar(r1, TAU * u[1]),
                    xi2: polar(r2, TAU * u[3]),
                    sign0: sign_of(u[6]),
                    sign1: Sign::Minus,
                    sign2: Sign::Plus,
                    c,
                };
                margin_or_skip(opposite_sign_margin(&s, MODULATION_KAPPA), json!(s))
            }
            Regime::AntipodalM1 => {
                let r1 = log_range(u[0], -4.0, 20.0);
                let mut lam = log_range(u[2], -6.0, 6.0);
                if (lam - 1.0).abs() < 1e-6 {
                    lam = 1.0 + 1e-6;
                }
                let r2 = lam * r1;
                let m1 = k.m1(r1, r2, (r1 - r2).abs()) as f64;
                let th = TAU * u[1];
                let delta = (2.0 * u[3] - 1.0) * 15.0 * PI / m1;
                let xi1 = polar(r1, th);
                let xi2 = polar(r2, th + PI + delta);
                margin_or_skip(
                    check_antipodal_separation(xi1, xi2, c),
                    json!({"xi1": xi1, "xi2": xi2, "c": c}),
                )
            }
            Regime::DirectionalDerivative => {
                let th = u[0] * PI / level as f64 * TOP;
                let xi1 = polar(log_range(u[1], -4.0, 20.0), th);
                let rest = polar(log_range(u[2], -4.0, 20.0), TAU * u[3]);
                let xi = [xi1[0] + rest[0], xi1[1] + rest[1]];
                margin_or_skip(
                    directional_derivative_bound(xi1, xi, c, level),
                    json!({"xi1": xi1, "xi": xi, "c": c, "A": level}),
                )
            }
        }
    });
    let mut s = summary(regime.name(), c, None, samples, acc);
    s.extra.insert("kappa".into(), MODULATION_KAPPA);
    if regime == Regime::DirectionalDerivative {
        s.level = Some(level);
    }
    Ok(s)
}

/// Unit-scale `ξ1`, `ξ2` with `16 ≤ |j1 - j2 ± A| ≤ 32` at level `A ≤ M1`,
/// or `None` when the draw falls outside that set.
pub fn sector_separated_pair(u: &[f64], a: u64, c: f64) -> Option<([f64; 2], [f64; 2])> {
    let k = Constants::new(c).ok()?;
    let ai = a as i64;
    let af = a as f64;
    let j1 = ((u[0] * 2.0 * af) as i64).min(2 * ai - 1) - ai;
    let sep = 16 + ((u[1] * 17.0) as i64).min(16);
    let side = if u[2] < 0.5 { 1 } else { -1 };
    let j2 = (j1 + ai + side * sep + ai).rem_euclid(2 * ai) - ai;
    let w = 0.5f64.min(128.0 / (af * (1.0 - c).sqrt()));
    let lam = 1.0 + (2.0 * u[5] - 1.0) * w;
    let xi1 = polar(1.0, PI * (j1 as f64 + u[3] * TOP) / af);
    let xi2 = polar(lam, PI * (j2 as f64 + u[4] * TOP) / af);
    let xi = [xi1[0] + xi2[0], xi1[1] + xi2[1]];
    let r = xi[0].hypot(xi[1]);
    let ok = r > 0.0
        && sector_index(xi1, a).ok()? == j1
        && sector_index(xi2, a).ok()? == j2
        && k.m1(1.0, lam, r) >= a;
    ok.then_some((xi1, xi2))
}

/// `|det N| - (1-c)/A` over sector-separated pairs at level `A`, plus the
/// largest change of `|det N|` under a random common rotation.
pub fn transversality_campaign(a: u64, c: f64, samples: usize, seed: u64) -> Result<CampaignSummary> {
    Constants::new(c)?;
    if !a.is_power_of_two() || a < 64 {
        return Err(LabError::InvalidParameter(format!("A = {a} must be dyadic ≥ 64")));
    }
    let seq = Sequence::new(8, seed);
    let bound = (1.0 - c) / a as f64;
    let rot_dev = std::sync::Mutex::new(0.0f64);
    let acc = run(samples, |n| {
        let u = seq.point(n);
        let Some((xi1, xi2)) = sector_separated_pair(&u, a, c) else {
            return Outcome::Skip;
        };
        let sign = sign_of(u[6]);
        let Ok(det) = transversality_det(xi1, xi2, c, sign) else {
            return Outcome::Skip;
        };
        let ang = TAU * u[7];
        if let Ok(rd) = transversality_det(rotate(xi1, ang), rotate(xi2, ang), c, sign) {
            let mut g = rot_dev.lock().unwrap();
            *g = g.max((rd - det).abs());
        }
        Outcome::Margin(
            det - bound,
            json!({"xi1": xi1, "xi2": xi2, "sign": sign, "det": det}),
        )
    });
    let mut s = summary("transversality", c, Some(a), samples, acc);
    s.extra.insert("rotation_max_dev".into(), rot_dev.into_inner().unwrap());
    s.extra.insert("bound".into(), bound);
    Ok(s)
}

/// Premise reports for `configs` random sector-separated configurations with
/// `A` drawn from `levels`, `samples` surface points each.
pub fn bht_campaign(
    levels: &[u64],
    c: f64,
    configs: usize,
    samples: usize,
    seed: u64,
) -> Result<CampaignSummary> {
    Constants::new(c)?;
    if levels.is_empty() {
        return Err(LabError::InvalidParameter("no angular levels".into()));
    }
    let seq = Sequence::new(8, seed);
    let mut acc = Acc::new();
    let mut n = 0usize;
    let mut found = 0usize;
    let mut holder_max = 0.0f64;
    let mut diam_max = 0.0f64;
    while found < configs {
        if n > 1000 * configs.max(1) {
            return Err(LabError::Degenerate("too few admissible BHT configurations".into()));
        }
        let u = seq.point(n);
        let a = levels[((u[7] * levels.len() as f64) as usize).min(levels.len() - 1)];
        n += 1;
        let Some((xi1, xi2)) = sector_separated_pair(&u, a, c) else {
            continue;
        };
        let xi = [xi1[0] + xi2[0], xi1[1] + xi2[1]];
        let p = BhtParams {
            xi1,
            xi2,
            a,
            n0: xi[0].hypot(xi[1]),
            n1: 1.0,
            c,
            sign: sign_of(u[6]),
            samples,
            seed: seed ^ (found as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            slab_exponent: 15,
        };
        let r = verify_bht_premises(&p)?;
        holder_max = holder_max.max(r.holder_max);
        diam_max = diam_max.max(r.diam_max);
        // margin: the tightest of the four conditions, normalised
        let m = [
            r.det_min / ((1.0 - c) * 0.5 / a as f64) - 1.0,
            1.0 - r.diam_max,
            r.det_tilde_range.0 - 0.5,
            1.0 + 1e-12 - r.det_tilde_range.1,
            1.0 - r.holder_max,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let m = if r.passed { m.max(0.0) } else { m.min(-f64::MIN_POSITIVE) };
        acc.push(found, Outcome::Margin(m, json!({"params": p, "report": r})));
        found += 1;
    }
    acc.draws = n;
    let mut s = summary("bht", c, None, configs, acc);
    s.extra.insert("holder_max".into(), holder_max);
    s.extra.insert("diam_max".into(), diam_max);
    s.extra.insert("surface_samples".into(), samples as f64);
    Ok(s)
}
