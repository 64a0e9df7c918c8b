use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::quantity::Quantity;
use crate::verify::{set_digest, BoundKind, Evaluator, InequalityId, Params};

use super::mutate::mutate_rng;
use super::record::{ExtremalRecord, Lineage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Hillclimb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Toward the side where the inequality is tight: small ratios for lower
    /// bounds, large ratios for upper bounds.
    pub fn toward_tightness(id: InequalityId) -> Direction {
        match id.bound_kind() {
            BoundKind::Lower => Direction::Minimize,
            BoundKind::Upper => Direction::Maximize,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Candidate elements; defaults to `{1, …, 4n}`.
    pub ground: Option<FiniteSet>,
    /// Subsets examined in exhaustive mode, or moves per climb in hillclimb mode.
    pub budget: u64,
    pub seed: u64,
    /// Extra climbs from fresh random starts.
    pub restarts: u32,
    /// Defaults to [`Direction::toward_tightness`].
    pub direction: Option<Direction>,
    pub rational_rate: f64,
    /// Starting set of the first climb; a random subset of the ground otherwise.
    pub start: Option<FiniteSet>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ground: None,
            budget: 1000,
            seed: 0,
            restarts: 0,
            direction: None,
            rational_rate: 0.0,
            start: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub record: ExtremalRecord,
    /// The budget ran out before the enumeration finished.
    pub truncated: bool,
    pub evaluated: u64,
    /// Candidates the entry could not be evaluated on.
    pub skipped: u64,
}

struct Best {
    direction: Direction,
    slot: Option<(Quantity, FiniteSet)>,
}

impl Best {
    /// Orders candidates: better ratio first, then the lexicographically smaller set.
    fn cmp(&self, r1: &Quantity, s1: &FiniteSet, r2: &Quantity, s2: &FiniteSet) -> Ordering {
        let by_ratio = match self.direction {
            Direction::Minimize => r1.total_cmp(r2),
            Direction::Maximize => r2.total_cmp(r1),
        };
        by_ratio.then_with(|| s1.cmp(s2))
    }

    fn offer(&mut self, ratio: Quantity, set: FiniteSet) {
        let better = match &self.slot {
            None => true,
            Some((r, s)) => self.cmp(&ratio, &set, r, s).is_lt(),
        };
        if better {
            self.slot = Some((ratio, set));
        }
    }
}

struct State {
    best: Best,
    evaluated: u64,
    skipped: u64,
}

impl State {
    fn visit(&mut self, id: InequalityId, set: FiniteSet) -> Option<Quantity> {
        self.evaluated += 1;
        let r = Evaluator::new(&set).evaluate(id, &Params::default()).ok().map(|r| r.ratio);
        match &r {
            Some(q) => self.best.offer(q.clone(), set),
            None => self.skipped += 1,
        }
        r
    }
}

/// Next lexicographic `k`-combination of `0..n`, in place.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return false };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

fn pick(ground: &FiniteSet, idx: impl IntoIterator<Item = usize>) -> FiniteSet {
    FiniteSet::new(idx.into_iter().map(|i| ground.elements()[i].clone())).unwrap()
}

/// Best `n`-element set for the registry ratio of `id`.
pub fn search_extremal(id: InequalityId, n: usize, mode: SearchMode, config: &SearchConfig) -> Result<SearchOutcome> {
    if n < 2 {
        return Err(Error::domain("search needs n >= 2"));
    }
    let ground = match &config.ground {
        Some(g) => g.clone(),
        None => FiniteSet::new((1..=4 * n as i64).map(Scalar::int))?,
    };
    if ground.len() < n {
        return Err(Error::domain(format!("ground set has fewer than {n} elements")));
    }
    let direction = config.direction.unwrap_or_else(|| Direction::toward_tightness(id));
    let mut st = State { best: Best { direction, slot: None }, evaluated: 0, skipped: 0 };
    let mut truncated = false;

    match mode {
        SearchMode::Exhaustive => {
            let mut idx: Vec<usize> = (0..n).collect();
            loop {
                if st.evaluated >= config.budget {
                    truncated = true;
                    break;
                }
                st.visit(id, pick(&ground, idx.iter().copied()));
                if !next_combination(&mut idx, ground.len()) {
                    break;
                }
            }
        }
        SearchMode::Hillclimb => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for climb in 0..=config.restarts {
                let start = match (&config.start, climb) {
                    (Some(s), 0) => s.clone(),
                    _ => pick(&ground, sample(&mut rng, ground.len(), n)),
                };
                let mut current = (st.visit(id, start.clone()), start);
                for _ in 0..config.budget {
                    let m = mutate_rng(&current.1, &ground, config.rational_rate, &mut rng);
                    if !m.moved {
                        break;
                    }
                    let Some(r) = st.visit(id, m.set.clone()) else { continue };
                    let accept = match &current.0 {
                        None => true,
                        Some(cur) => match st.best.cmp(&r, &m.set, cur, &m.set) {
                            Ordering::Less => true,
                            Ordering::Equal => rng.gen_bool(0.5),
                            Ordering::Greater => false,
                        },
                    };
                    if accept {
                        current = (Some(r), m.set);
                    }
                }
            }
        }
    }

    let (ratio, set) =
        st.best.slot.ok_or_else(|| Error::domain(format!("{id} could not be evaluated on any candidate")))?;
    let lineage = Lineage::Search {
        mode,
        n,
        budget: config.budget,
        seed: config.seed,
        restarts: config.restarts,
        direction,
        ground: set_digest(&ground),
    };
    Ok(SearchOutcome {
        record: ExtremalRecord::new(set, id, ratio, lineage),
        truncated,
        evaluated: st.evaluated,
        skipped: st.skipped,
    })
}
