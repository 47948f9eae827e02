//! Hull members with their pre-images, and the aggregation rules that merge
//! them to bound the size of the hull.

use crate::error::{Error, Result};
use crate::linalg::{check_len, combine};

/// Pre-image of a hull point: `base · p₀ + Σ w e_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Coeff {
    pub base: f64,
    /// Sorted by index, no duplicates.
    pub terms: Vec<(usize, f64)>,
}

impl Coeff {
    pub fn start() -> Self {
        Self {
            base: 1.0,
            terms: Vec::new(),
        }
    }

    pub fn vertex(index: usize, weight: f64) -> Self {
        Self {
            base: 0.0,
            terms: vec![(index, weight)],
        }
    }

    /// `wa · self + wb · other`
    pub fn blend(&self, wa: f64, other: &Coeff, wb: f64) -> Coeff {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut k) = (0, 0);
        while i < self.terms.len() || k < other.terms.len() {
            match (self.terms.get(i), other.terms.get(k)) {
                (Some(&(ja, va)), Some(&(jb, vb))) if ja == jb => {
                    terms.push((ja, wa * va + wb * vb));
                    i += 1;
                    k += 1;
                }
                (Some(&(ja, va)), Some(&(jb, _))) if ja < jb => {
                    terms.push((ja, wa * va));
                    i += 1;
                }
                (Some(&(ja, va)), None) => {
                    terms.push((ja, wa * va));
                    i += 1;
                }
                (_, Some(&(jb, vb))) => {
                    terms.push((jb, wb * vb));
                    k += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Coeff {
            base: wa * self.base + wb * other.base,
            terms,
        }
    }

    /// Accumulates `weight · self` into the dense vector `x`.
    pub fn add_to(&self, weight: f64, x0: &[f64], x: &mut [f64]) {
        if self.base != 0.0 {
            for (xi, pi) in x.iter_mut().zip(x0) {
                *xi += weight * self.base * pi;
            }
        }
        for &(j, v) in &self.terms {
            x[j] += weight * v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub point: Vec<f64>,
    pub coeff: Coeff,
    /// Iteration at which the point was generated.
    pub born: usize,
    /// Whether the point is the result of a merge.
    pub aggregated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    /// Never merge; with a finite cap the whole hull collapses onto `y`.
    None,
    /// Merge the two oldest points not produced by a merge.
    Oldest,
    /// Merge the two points with the smallest weights.
    SmallestCoeff,
    /// Merge the two points with the largest weights.
    LargestCoeff,
    /// Keep one merged point and fold the oldest remaining point into it.
    OldestIntoAccumulator,
    /// Accumulator scheme, folding the smallest-weight point.
    SmallestIntoAccumulator,
    /// Accumulator scheme, folding the largest-weight point.
    LargestIntoAccumulator,
}

impl Aggregation {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Oldest => "oldest",
            Self::SmallestCoeff => "smallest",
            Self::LargestCoeff => "largest",
            Self::OldestIntoAccumulator => "accumulator",
            Self::SmallestIntoAccumulator => "accumulator-smallest",
            Self::LargestIntoAccumulator => "accumulator-largest",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let rule = match s {
            "none" => Self::None,
            "oldest" => Self::Oldest,
            "smallest" => Self::SmallestCoeff,
            "largest" => Self::LargestCoeff,
            "accumulator" | "accumulator-oldest" => Self::OldestIntoAccumulator,
            "accumulator-smallest" => Self::SmallestIntoAccumulator,
            "accumulator-largest" => Self::LargestIntoAccumulator,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown aggregation rule `{other}`"
                )))
            }
        };
        Ok(rule)
    }
}

/// Hull points with convex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    pub members: Vec<Member>,
    pub lambda: Vec<f64>,
}

impl ActiveSet {
    pub fn new(members: Vec<Member>, lambda: Vec<f64>) -> Result<Self> {
        check_len(members.len(), lambda.len())?;
        Ok(Self { members, lambda })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|m| m.point.clone()).collect()
    }

    /// `Σ λ_j c_j`
    pub fn y(&self) -> Vec<f64> {
        let pts: Vec<&[f64]> = self.members.iter().map(|m| m.point.as_slice()).collect();
        combine(&pts, &self.lambda)
    }

    /// `Σ λ_j coeff_j` as a dense vector.
    pub fn x(&self, x0: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; x0.len()];
        for (m, &l) in self.members.iter().zip(&self.lambda) {
            m.coeff.add_to(l, x0, &mut x);
        }
        x
    }

    /// Removes points with zero weight.
    pub fn discard_zero(&mut self) {
        let mut k = 0;
        while k < self.members.len() {
            if self.lambda[k] > 0.0 {
                k += 1;
            } else {
                self.members.remove(k);
                self.lambda.remove(k);
            }
        }
    }

    /// Replaces everything by the single point `Σ λ_j c_j`.
    pub fn collapse(&mut self) {
        if self.members.len() <= 1 {
            return;
        }
        let point = self.y();
        let mut coeff = Coeff::default();
        for (m, &l) in self.members.iter().zip(&self.lambda) {
            coeff = coeff.blend(1.0, &m.coeff, l);
        }
        let born = self.members.iter().map(|m| m.born).min().unwrap_or(0);
        self.members = vec![Member {
            point,
            coeff,
            born,
            aggregated: true,
        }];
        self.lambda = vec![1.0];
    }

    /// Merges member `drop` into member `keep` with Remark-style weights.
    fn merge(&mut self, keep: usize, drop: usize) {
        let (la, lb) = (self.lambda[keep], self.lambda[drop]);
        let total = la + lb;
        let (wa, wb) = if total > 0.0 {
            (la / total, lb / total)
        } else {
            (0.5, 0.5)
        };
        let b = self.members[drop].clone();
        let a = &mut self.members[keep];
        for (pa, pb) in a.point.iter_mut().zip(&b.point) {
            *pa = wa * *pa + wb * pb;
        }
        a.coeff = a.coeff.blend(wa, &b.coeff, wb);
        a.born = a.born.min(b.born);
        a.aggregated = true;
        self.lambda[keep] = total;
        self.members.remove(drop);
        self.lambda.remove(drop);
    }
}

fn by_age(set: &ActiveSet, candidates: &[usize]) -> Vec<usize> {
    let mut c = candidates.to_vec();
    c.sort_by_key(|&k| (set.members[k].born, k));
    c
}

fn by_weight(set: &ActiveSet, candidates: &[usize], largest: bool) -> Vec<usize> {
    let mut c = by_age(set, candidates);
    c.sort_by(|&a, &b| {
        let ord = set.lambda[a].total_cmp(&set.lambda[b]);
        if largest {
            ord.reverse()
        } else {
            ord
        }
    });
    c
}

/// Merges two members of the set per `rule`, reducing its size by one.
pub fn aggregate(set: &mut ActiveSet, rule: Aggregation) -> Result<()> {
    let n = set.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let pair = match rule {
        Aggregation::None => {
            set.collapse();
            return Ok(());
        }
        Aggregation::Oldest => {
            let fresh: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&k| !set.members[k].aggregated)
                .collect();
            let merged: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&k| set.members[k].aggregated)
                .collect();
            let fresh = by_age(set, &fresh);
            let merged = by_age(set, &merged);
            match fresh.len() {
                0 => [merged[0], merged[1]],
                1 => [fresh[0], merged[0]],
                _ => [fresh[0], fresh[1]],
            }
        }
        Aggregation::SmallestCoeff => {
            let c = by_weight(set, &all, false);
            [c[0], c[1]]
        }
        Aggregation::LargestCoeff => {
            let c = by_weight(set, &all, true);
            [c[0], c[1]]
        }
        Aggregation::OldestIntoAccumulator
        | Aggregation::SmallestIntoAccumulator
        | Aggregation::LargestIntoAccumulator => {
            let pick = |set: &ActiveSet, cands: &[usize]| match rule {
                Aggregation::OldestIntoAccumulator => by_age(set, cands),
                Aggregation::SmallestIntoAccumulator => by_weight(set, cands, false),
                _ => by_weight(set, cands, true),
            };
            match all.iter().copied().find(|&k| set.members[k].aggregated) {
                Some(acc) => {
                    let others: Vec<usize> = all.iter().copied().filter(|&k| k != acc).collect();
                    [acc, pick(set, &others)[0]]
                }
                None => {
                    let c = pick(set, &all);
                    [c[0], c[1]]
                }
            }
        }
    };
    let (keep, drop) = match rule {
        Aggregation::OldestIntoAccumulator
        | Aggregation::SmallestIntoAccumulator
        | Aggregation::LargestIntoAccumulator
            if set.members.iter().any(|m| m.aggregated) =>
        {
            (pair[0], pair[1])
        }
        _ => (pair[0].min(pair[1]), pair[0].max(pair[1])),
    };
    set.merge(keep, drop);
    Ok(())
}
