//! The weighted signed network induced by a strategy profile.
//!
//! Because agents are sorted by type, every tolerated set `K_i` is a
//! contiguous index range. [`Layout`] keeps that range form around so the
//! effort solver can rebuild weights in `O(n²)` per evaluation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{Congestion, Scenario, StrategyProfile, ToleranceInterval};

/// Index ranges `K_i = lo[i]..=hi[i]` plus the mutual-tolerance relation.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub n: usize,
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
    /// Unordered mutually tolerant pairs `(i, j)`, `i < j`.
    pub pairs: Vec<(usize, usize)>,
    /// Per-agent congestion sets when only mutual tolerance congests.
    mutual: Option<Vec<Vec<bool>>>,
}

impl Layout {
    pub fn new(scenario: &Scenario, tolerances: &[ToleranceInterval]) -> Self {
        let thetas = scenario.thetas();
        let n = thetas.len();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for (i, t) in tolerances.iter().enumerate() {
            let first = thetas.partition_point(|&th| th < t.lower);
            let past = thetas.partition_point(|&th| th <= t.upper);
            // Owner is always inside a valid interval.
            lo.push(first.min(i));
            hi.push(past.saturating_sub(1).max(i));
        }
        let mut layout = Self::from_ranges(lo, hi);
        if scenario.params.congestion == Congestion::Mutual {
            let mut sets: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| j == i).collect()).collect();
            for &(i, j) in &layout.pairs {
                sets[i][j] = true;
                sets[j][i] = true;
            }
            layout.mutual = Some(sets);
        }
        layout
    }

    pub fn from_ranges(lo: Vec<usize>, hi: Vec<usize>) -> Self {
        let n = lo.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..=hi[i].min(n - 1) {
                if lo[j] <= i {
                    pairs.push((i, j));
                }
            }
        }
        Layout {
            n,
            lo,
            hi,
            pairs,
            mutual: None,
        }
    }

    /// `Σ_{h ∈ K_a ∪ K_b} x_h` from prefix sums.
    #[inline]
    fn union_sum(&self, prefix: &[f64], x: &[f64], a: usize, b: usize) -> f64 {
        if let Some(sets) = &self.mutual {
            let (sa, sb) = (&sets[a], &sets[b]);
            return (0..self.n).filter(|&h| sa[h] || sb[h]).map(|h| x[h]).sum();
        }
        let (la, ha, lb, hb) = (self.lo[a], self.hi[a], self.lo[b], self.hi[b]);
        if la <= hb + 1 && lb <= ha + 1 {
            prefix[ha.max(hb) + 1] - prefix[la.min(lb)]
        } else {
            prefix[ha + 1] - prefix[la] + prefix[hb + 1] - prefix[lb]
        }
    }

    /// `Σ_{h ∈ K_a} x_h`.
    #[inline]
    fn own_sum(&self, prefix: &[f64], x: &[f64], a: usize) -> f64 {
        match &self.mutual {
            Some(sets) => (0..self.n).filter(|&h| sets[a][h]).map(|h| x[h]).sum(),
            None => prefix[self.hi[a] + 1] - prefix[self.lo[a]],
        }
    }

    /// Fills the dense `n×n` weight matrix for efforts `x`.
    pub fn fill_weights(&self, x: &[f64], prefix: &mut Vec<f64>, w: &mut [f64]) {
        let n = self.n;
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for &v in x {
            acc += v;
            prefix.push(acc);
        }
        w.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            if x[i] > 0.0 {
                w[i * n + i] = (x[i] * x[i] / self.own_sum(prefix, x, i)).min(1.0);
            }
        }
        for &(i, j) in &self.pairs {
            if x[i] > 0.0 && x[j] > 0.0 {
                let g = (x[i] * x[j] / self.union_sum(prefix, x, i, j)).min(1.0);
                w[i * n + j] = g;
                w[j * n + i] = g;
            }
        }
    }

    /// Uncapped link values `x_i x_j / Σ`, used to locate cap kinks.
    pub fn raw_weights(&self, x: &[f64]) -> Vec<(usize, usize, f64)> {
        let mut prefix = vec![0.0];
        let mut acc = 0.0;
        for &v in x {
            acc += v;
            prefix.push(acc);
        }
        let mut out = Vec::new();
        for i in 0..self.n {
            if x[i] > 0.0 {
                out.push((i, i, x[i] * x[i] / self.own_sum(&prefix, x, i)));
            }
        }
        for &(i, j) in &self.pairs {
            if x[i] > 0.0 && x[j] > 0.0 {
                out.push((i, j, x[i] * x[j] / self.union_sum(&prefix, x, i, j)));
            }
        }
        out
    }
}

/// Cohesion count of `i` in its dispute with `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohesionEntry {
    pub i: usize,
    pub j: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub weights: Vec<Vec<f64>>,
    pub tolerated_sets: Vec<Vec<usize>>,
    /// Unordered pairs `(i, j)`, `i < j`, with `g_ij = 0`.
    pub dispute_pairs: Vec<(usize, usize)>,
    pub strengths: Vec<f64>,
    /// One entry per ordered dispute pair.
    pub cohesion: Vec<CohesionEntry>,
    pub degrees: Vec<usize>,
}

impl Network {
    pub fn from_weights(weights: Vec<Vec<f64>>, tolerated_sets: Vec<Vec<usize>>) -> Self {
        let n = weights.len();
        let mut dispute_pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if weights[i][j] <= 0.0 {
                    dispute_pairs.push((i, j));
                }
            }
        }
        let strengths = weights.iter().map(|row| row.iter().sum()).collect();
        let degrees = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && weights[i][j] > 0.0).count())
            .collect();
        let mut net = Network {
            weights,
            tolerated_sets,
            dispute_pairs,
            strengths,
            cohesion: Vec::new(),
            degrees,
        };
        let mut cohesion = Vec::with_capacity(2 * net.dispute_pairs.len());
        for &(i, j) in &net.dispute_pairs {
            cohesion.push(CohesionEntry {
                i,
                j,
                count: net.raw_cohesion(i, j),
            });
            cohesion.push(CohesionEntry {
                i: j,
                j: i,
                count: net.raw_cohesion(j, i),
            });
        }
        net.cohesion = cohesion;
        net
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i][j]
    }

    /// Positive-weight link between distinct agents.
    #[inline]
    pub fn allied(&self, i: usize, j: usize) -> bool {
        i != j && self.weights[i][j] > 0.0
    }

    #[inline]
    pub fn in_dispute(&self, i: usize, j: usize) -> bool {
        i != j && self.weights[i][j] <= 0.0
    }

    pub fn allies(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.allied(i, j))
    }

    fn raw_cohesion(&self, i: usize, j: usize) -> usize {
        (0..self.n())
            .filter(|&h| h != i && h != j && self.allied(i, h) && !self.allied(h, j))
            .count()
    }
}

/// Builds `g` from a profile: congestion-weighted links capped at 1.
pub fn build_network(scenario: &Scenario, profile: &StrategyProfile) -> Network {
    let n = scenario.n();
    let layout = Layout::new(scenario, &profile.tolerances);
    let mut prefix = Vec::with_capacity(n + 1);
    let mut flat = vec![0.0; n * n];
    layout.fill_weights(&profile.efforts, &mut prefix, &mut flat);
    let weights = flat.chunks(n).map(|r| r.to_vec()).collect();
    let tolerated_sets = (0..n).map(|i| (layout.lo[i]..=layout.hi[i]).collect()).collect();
    Network::from_weights(weights, tolerated_sets)
}

/// Number of `i`'s allies that are themselves in dispute with `j`.
pub fn cohesion_count(net: &Network, i: usize, j: usize) -> Result<usize> {
    if i >= net.n() || j >= net.n() || !net.in_dispute(i, j) {
        return Err(Error::NotInDispute(i, j));
    }
    Ok(net.raw_cohesion(i, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceKind {
    /// Not a union of cliques: some opponents share an ally.
    Overlapping,
    /// Segregated into three or more cliques (isolated agents count).
    WeakBalance,
    /// Segregated into exactly two cliques.
    StrongBalance,
    /// Everyone is allied with everyone; no disputes at all.
    SingleClique,
}

impl BalanceKind {
    pub fn is_segregated(self) -> bool {
        !matches!(self, BalanceKind::Overlapping)
    }

    /// Position on the overlapping → weak → strong ladder.
    pub fn rank(self) -> u8 {
        match self {
            BalanceKind::Overlapping => 0,
            BalanceKind::WeakBalance => 1,
            BalanceKind::StrongBalance => 2,
            BalanceKind::SingleClique => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BalanceKind::Overlapping => "overlapping",
            BalanceKind::WeakBalance => "weak_balance",
            BalanceKind::StrongBalance => "strong_balance",
            BalanceKind::SingleClique => "single_clique",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceClass {
    pub kind: BalanceKind,
    /// Clique partition for segregated networks, sorted by smallest member.
    pub cliques: Option<Vec<Vec<usize>>>,
}

/// Classifies the ally relation as overlapping or segregated.
pub fn classify(net: &Network) -> BalanceClass {
    let n = net.n();
    let mut component = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        component[start] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let a = members[cursor];
            cursor += 1;
            for b in net.allies(a) {
                if component[b] == usize::MAX {
                    component[b] = id;
                    members.push(b);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let segregated = groups.iter().all(|g| {
        g.iter()
            .enumerate()
            .all(|(k, &a)| g[k + 1..].iter().all(|&b| net.allied(a, b)))
    });
    if !segregated {
        return BalanceClass {
            kind: BalanceKind::Overlapping,
            cliques: None,
        };
    }
    let kind = match groups.len() {
        1 => BalanceKind::SingleClique,
        2 => BalanceKind::StrongBalance,
        _ => BalanceKind::WeakBalance,
    };
    BalanceClass {
        kind,
        cliques: Some(groups),
    }
}

/// Tolerance bounds weakly increase with type.
pub fn is_ordered(_scenario: &Scenario, profile: &StrategyProfile) -> bool {
    // Agents are sorted by type, so comparing neighbours in index order suffices.
    profile
        .tolerances
        .windows(2)
        .all(|w| w[1].upper >= w[0].upper && w[1].lower >= w[0].lower)
}

/// Graphviz rendering: allies as labelled edges, cliques as node colours.
pub fn to_dot(scenario: &Scenario, net: &Network) -> String {
    const PALETTE: [&str; 8] = [
        "lightblue",
        "palegreen",
        "lightsalmon",
        "khaki",
        "plum",
        "lightpink",
        "lightcyan",
        "wheat",
    ];
    let class = classify(net);
    let mut color = vec!["lightgray"; net.n()];
    if let Some(cliques) = &class.cliques {
        for (k, clique) in cliques.iter().enumerate() {
            for &a in clique {
                color[a] = PALETTE[k % PALETTE.len()];
            }
        }
    }
    let mut out = String::from("graph cohesion {\n  node [style=filled];\n");
    for (i, c) in color.iter().enumerate() {
        let _ = writeln!(
            out,
            "  a{i} [label=\"{:.4}\", fillcolor={c}, clique=\"{}\"];",
            scenario.theta(i),
            class
                .cliques
                .as_ref()
                .and_then(|cs| cs.iter().position(|c| c.contains(&i)))
                .map(|k| k.to_string())
                .unwrap_or_else(|| "none".into())
        );
    }
    for i in 0..net.n() {
        for j in (i + 1)..net.n() {
            if net.allied(i, j) {
                let _ = writeln!(out, "  a{i} -- a{j} [style=solid, label=\"{:.4}\"];", net.weight(i, j));
            }
        }
    }
    out.push_str("}\n");
    out
}
