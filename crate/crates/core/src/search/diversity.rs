//! Diversity maximization, the candidate families `F_i`, the `Δ + Cγ`
//! curve, and pair saturation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binom::{binom_int, choose, exact_int, exact_to_string, Exact};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::search::enumerate::{fold_shifted_intersecting, FamilyClass, Universe};
use crate::search::full::{enumerate_complementary_choices, enumerate_maximal_intersecting};
use crate::search::random::{random_intersecting, trial_rng};
use crate::set::{GroundParams, KSet};
use crate::shifting::is_shifted;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    ExhaustiveShifted,
    ExhaustiveFull,
    Randomized,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::ExhaustiveShifted => "exhaustive-shifted",
            SearchMode::ExhaustiveFull => "exhaustive-full",
            SearchMode::Randomized => "randomized",
        })
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive-shifted" | "shifted-exhaustive" | "shifted" => Ok(SearchMode::ExhaustiveShifted),
            "exhaustive-full" | "full-exhaustive" | "full" => Ok(SearchMode::ExhaustiveFull),
            "randomized" | "random" => Ok(SearchMode::Randomized),
            other => Err(Error::Precondition(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub params: GroundParams,
    pub budget: Duration,
    pub mode: SearchMode,
    pub seed: u64,
    /// Number of random families drawn in randomized mode.
    pub trials: u64,
}

impl SearchConfig {
    pub fn new(params: GroundParams, budget: Duration, mode: SearchMode, seed: u64) -> Result<Self> {
        if budget.is_zero() {
            return Err(Error::Precondition("budget must be positive".into()));
        }
        Ok(SearchConfig {
            params,
            budget,
            mode,
            seed,
            trials: 10_000,
        })
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    fn deadline(&self) -> Instant {
        Instant::now() + self.budget
    }
}

/// `F_i = {F : |F ∩ [2i+1]| >= i+1}`.
pub fn candidate_family(n: usize, k: usize, i: usize) -> Result<SetFamily> {
    let params = GroundParams::new(n, k)?;
    if 2 * i + 1 > n || i + 1 > k {
        return Err(Error::Precondition(format!(
            "F_{i} needs 2i+1 <= n and i+1 <= k, got n={n}, k={k}"
        )));
    }
    let window = KSet::prefix(n, 2 * i + 1);
    let fam = SetFamily::from_predicate(params, |s| s.intersection(&window).len() > i);
    if !fam.is_intersecting() || !is_shifted(&fam) {
        return Err(Error::InvariantViolated(format!("F_{i} is not shifted and intersecting")));
    }
    Ok(fam)
}

/// Candidates `F_i` valid for `(n, k)`, with their diversities.
pub fn candidate_rows(params: GroundParams) -> Vec<CandidateRow> {
    let (n, k) = (params.n(), params.k());
    (0..k)
        .take_while(|i| 2 * i < n)
        .filter_map(|i| candidate_family(n, k, i).ok().map(|f| (i, f)))
        .map(|(i, f)| CandidateRow {
            i,
            size: f.len(),
            gamma: f.diversity(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateRow {
    pub i: usize,
    pub size: usize,
    pub gamma: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityReport {
    pub n: usize,
    pub k: usize,
    pub mode: SearchMode,
    pub class: String,
    pub max_gamma: usize,
    /// `C(n-3, k-2)`.
    pub bound: String,
    pub exceeds_bound: bool,
    pub witness: SetFamily,
    pub witness_id: String,
    pub candidates: Vec<CandidateRow>,
    pub beats_candidates: bool,
    pub families_visited: u64,
    /// The budget ran out; `max_gamma` is only a lower bound.
    pub lower_bound_only: bool,
    pub notes: Vec<String>,
    pub wall_ms: u128,
}

impl DiversityReport {
    pub const CSV_HEADER: &'static str = "n,k,class,max_gamma,bound,witness_id";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.k, self.class, self.max_gamma, self.bound, self.witness_id
        )
    }
}

/// Best family so far; ties keep the earlier one.
#[derive(Clone)]
struct Best {
    gamma: usize,
    family: Option<SetFamily>,
}

impl Best {
    fn none() -> Best {
        Best { gamma: 0, family: None }
    }

    fn offer(&mut self, gamma: usize, fam: impl FnOnce() -> SetFamily) {
        if self.family.is_none() || gamma > self.gamma {
            self.gamma = gamma;
            self.family = Some(fam());
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if let Some(f) = other.family {
            self.offer(other.gamma, || f);
        }
        self
    }
}

/// Maximum diversity over the class searched by `cfg.mode`.
///
/// Diversity never drops when a set is added, so every mode only looks at
/// maximal families.
pub fn max_diversity(cfg: &SearchConfig) -> Result<DiversityReport> {
    let start = Instant::now();
    let deadline = cfg.deadline();
    let params = cfg.params;
    let (n, k) = (params.n(), params.k());
    let mut notes = Vec::new();
    let (best, visited, partial, class) = match cfg.mode {
        SearchMode::ExhaustiveShifted => {
            let u = Universe::new(params);
            let ((best, bad_degree), stats) = fold_shifted_intersecting(
                &u,
                FamilyClass::Maximal,
                Some(deadline),
                || (Best::none(), 0u64),
                |acc, v| {
                    if v.max_degree().1 != v.degrees()[0] as usize {
                        acc.1 += 1;
                    }
                    acc.0.offer(v.diversity(), || v.to_family());
                },
                |a, b| (a.0.merge(b.0), a.1 + b.1),
            );
            if bad_degree > 0 {
                notes.push(format!("{bad_degree} shifted families where element 1 is not of maximum degree"));
            }
            (best, stats.visited, stats.partial, "shifted-maximal")
        }
        SearchMode::ExhaustiveFull if n == 2 * k => {
            notes.push("n = 2k: only maximal families (one set from each complementary pair) are searched".into());
            let mut best = Best::none();
            let stats = enumerate_complementary_choices(params, Some(deadline), |f| {
                best.offer(f.diversity(), || f.clone())
            })?;
            (best, stats.visited, stats.partial, "complementary-choice")
        }
        SearchMode::ExhaustiveFull => {
            let mut best = Best::none();
            let stats = enumerate_maximal_intersecting(params, Some(deadline), |f| {
                best.offer(f.diversity(), || f.clone())
            });
            (best, stats.visited, stats.partial, "maximal")
        }
        SearchMode::Randomized => {
            notes.push("the candidate families F_i are part of the sampled pool".into());
            let mut best = Best::none();
            for row in candidate_rows(params) {
                best.offer(row.gamma, || candidate_family(n, k, row.i).expect("valid candidate"));
            }
            let (sampled, drawn) = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut b = Best::none();
                    if Instant::now() >= deadline {
                        return (b, 0u64);
                    }
                    let f = random_intersecting(params, &mut trial_rng(cfg.seed, t), true);
                    b.offer(f.diversity(), || f);
                    (b, 1)
                })
                .reduce(|| (Best::none(), 0), |a, b| (a.0.merge(b.0), a.1 + b.1));
            (best.merge(sampled), drawn, drawn < cfg.trials, "random-maximal")
        }
    };
    let witness = best.family.ok_or(Error::EmptyFamily)?;
    if !witness.is_intersecting() || witness.diversity() != best.gamma {
        return Err(Error::InvariantViolated("diversity witness failed re-validation".into()));
    }
    let bound = binom_int(n as i64 - 3, k as i64 - 2);
    let candidates = candidate_rows(params);
    let best_candidate = candidates.iter().map(|c| c.gamma).max();
    if partial {
        notes.push("budget exhausted: max_gamma is a lower bound".into());
    }
    Ok(DiversityReport {
        n,
        k,
        mode: cfg.mode,
        class: class.into(),
        max_gamma: best.gamma,
        exceeds_bound: exact_int(best.gamma as i64) > exact_int(bound.clone()),
        bound: bound.to_string(),
        witness_id: format!("n{n}-k{k}-{class}"),
        witness,
        beats_candidates: best_candidate.is_some_and(|c| best.gamma > c),
        candidates,
        families_visited: visited,
        lower_bound_only: partial,
        notes,
        wall_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Problem1Row {
    #[serde(serialize_with = "ser_exact")]
    pub c: Exact,
    /// Maximum of `Δ + Cγ`.
    #[serde(serialize_with = "ser_exact")]
    pub max_value: Exact,
    pub delta: usize,
    pub gamma: usize,
    /// `max_value <= C(n-1, k-1)`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Problem1Table {
    pub n: usize,
    pub k: usize,
    pub mode: SearchMode,
    /// `C(n-1, k-1)`.
    pub bound: String,
    pub rows: Vec<Problem1Row>,
    #[serde(serialize_with = "ser_opt_exact")]
    pub largest_c_holding: Option<Exact>,
    /// Distinct `(Δ, γ)` pairs seen.
    pub profile: Vec<(usize, usize)>,
    pub families_visited: u64,
    pub partial: bool,
    pub notes: Vec<String>,
    pub wall_ms: u128,
}

impl Problem1Table {
    pub const CSV_HEADER: &'static str = "n,k,c,max_value,delta,gamma,bound,holds";

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    self.n,
                    self.k,
                    exact_to_string(&r.c),
                    exact_to_string(&r.max_value),
                    r.delta,
                    r.gamma,
                    self.bound,
                    r.holds
                )
            })
            .collect()
    }
}

fn ser_exact<S: serde::Serializer>(v: &Exact, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exact_to_string(v))
}

fn ser_opt_exact<S: serde::Serializer>(v: &Option<Exact>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&exact_to_string(v)),
        None => s.serialize_none(),
    }
}

/// For each `C` in the grid, the maximum of `Δ + Cγ` over the class searched
/// by `cfg.mode`, and the largest `C` for which it stays at most
/// `C(n-1, k-1)`.
///
/// `Δ + Cγ = C|F| - (C-1)Δ` grows when a set is added for `C >= 1`, so only
/// maximal families are scanned.
pub fn problem1_curve(cfg: &SearchConfig, c_grid: &[Exact]) -> Result<Problem1Table> {
    let start = Instant::now();
    let params = cfg.params;
    let (n, k) = (params.n(), params.k());
    if n <= 2 * k {
        return Err(Error::Precondition(format!("need n > 2k, got n={n}, k={k}")));
    }
    let one = exact_int(1);
    if let Some(c) = c_grid.iter().find(|c| **c < one) {
        return Err(Error::Precondition(format!("C = {} is below 1", exact_to_string(c))));
    }
    let deadline = cfg.deadline();
    type Profile = BTreeSet<(usize, usize)>;
    let add = |p: &mut Profile, f_len: usize, delta: usize| {
        p.insert((delta, f_len - delta));
    };
    let (profile, visited, partial) = match cfg.mode {
        SearchMode::ExhaustiveShifted => {
            let u = Universe::new(params);
            let (p, stats) = fold_shifted_intersecting(
                &u,
                FamilyClass::Maximal,
                Some(deadline),
                Profile::new,
                |p, v| add(p, v.len(), v.max_degree().1),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            );
            (p, stats.visited, stats.partial)
        }
        SearchMode::ExhaustiveFull => {
            let mut p = Profile::new();
            let stats = enumerate_maximal_intersecting(params, Some(deadline), |f| add(&mut p, f.len(), f.max_degree().1));
            (p, stats.visited, stats.partial)
        }
        SearchMode::Randomized => {
            let (p, drawn) = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut p = Profile::new();
                    if Instant::now() >= deadline {
                        return (p, 0u64);
                    }
                    let f = random_intersecting(params, &mut trial_rng(cfg.seed, t), true);
                    add(&mut p, f.len(), f.max_degree().1);
                    (p, 1)
                })
                .reduce(
                    || (Profile::new(), 0),
                    |mut a, b| {
                        a.0.extend(b.0);
                        (a.0, a.1 + b.1)
                    },
                );
            (p, drawn, drawn < cfg.trials)
        }
    };
    let bound = exact_int(choose(n - 1, k - 1) as i64);
    let mut rows = Vec::new();
    for c in c_grid {
        let ((delta, gamma), max_value) = profile
            .iter()
            .map(|&(d, g)| ((d, g), exact_int(d as i64) + c * exact_int(g as i64)))
            .fold(None, |acc: Option<((usize, usize), Exact)>, cur| match acc {
                Some(a) if a.1 >= cur.1 => Some(a),
                _ => Some(cur),
            })
            .ok_or(Error::EmptyFamily)?;
        rows.push(Problem1Row {
            c: c.clone(),
            holds: max_value <= bound,
            max_value,
            delta,
            gamma,
        });
    }
    let mut notes = Vec::new();
    if rows.iter().any(|r| r.c == one && !r.holds) {
        notes.push("C = 1 row exceeds C(n-1, k-1): intersecting family larger than a star".into());
    }
    if partial {
        notes.push("budget exhausted: maxima are lower bounds".into());
    }
    let largest_c_holding = rows.iter().filter(|r| r.holds).map(|r| r.c.clone()).max();
    Ok(Problem1Table {
        n,
        k,
        mode: cfg.mode,
        bound: exact_to_string(&bound),
        rows,
        largest_c_holding,
        profile: profile.into_iter().collect(),
        families_visited: visited,
        partial,
        notes,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// `fam ∪ {A : x, y ∈ A}` for an intersecting family whose members all meet
/// `{x, y}`.
pub fn saturate_pair_containing(fam: &SetFamily, x: usize, y: usize) -> Result<SetFamily> {
    let params = fam.params();
    let n = params.n();
    if x == y || x == 0 || y == 0 || x > n || y > n {
        return Err(Error::Precondition(format!("need distinct x, y in [1, {n}], got ({x}, {y})")));
    }
    if params.k() < 2 {
        return Err(Error::Precondition("k-sets containing two elements need k >= 2".into()));
    }
    if !fam.is_intersecting() {
        return Err(Error::Precondition("family is not intersecting".into()));
    }
    let pair = KSet::from_elements(n, &[x.min(y), x.max(y)])?;
    if let Some(bad) = fam.iter().find(|m| !m.intersects(&pair)) {
        return Err(Error::Precondition(format!("{bad} misses {{{x},{y}}}")));
    }
    let added = SetFamily::from_predicate(params, |s| pair.is_subset(s));
    let out = fam.union(&added)?;
    if !out.is_intersecting() {
        return Err(Error::InvariantViolated("saturation broke the intersecting property".into()));
    }
    Ok(out)
}
