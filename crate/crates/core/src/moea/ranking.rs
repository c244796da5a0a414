use std::cmp::Ordering;

use super::{hv_contributions_2d, nondominated_sort, Objectives};

/// Non-dominance ranks, per-rank hypervolume contributions and the resulting
/// total selection order (best first).
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPopulation {
    pub ranks: Vec<usize>,
    pub contributions: Vec<f64>,
    /// Member indices, best first.
    pub order: Vec<usize>,
}

impl RankedPopulation {
    /// Indices of the best `count` members.
    pub fn best(&self, count: usize) -> &[usize] {
        &self.order[..count.min(self.order.len())]
    }
}

/// Chooses `keep` survivors, best first.
///
/// Whole non-dominance fronts are taken in rank order while they fit. If the
/// first front has to be cut, the kept part is a subset of maximal hypervolume
/// (exact dynamic program over the sorted front), so the dominated hypervolume
/// of the survivors is never below that of any `keep`-subset, in particular the
/// previous parents. A cut in a later front follows the [`rank_population`] order,
/// since dominated members add no hypervolume.
pub fn select_survivors(points: &[Objectives], ids: &[u64], reference: &Objectives, keep: usize) -> Vec<usize> {
    let ranked = rank_population(points, ids, reference);
    if keep >= points.len() {
        return ranked.order;
    }
    let front: Vec<usize> = ranked.order.iter().copied().filter(|&i| ranked.ranks[i] == 0).collect();
    let mut chosen = vec![false; points.len()];
    if front.len() > keep {
        for i in best_subset(points, ids, &front, reference, keep) {
            chosen[i] = true;
        }
    } else {
        for &i in ranked.order.iter().take(keep) {
            chosen[i] = true;
        }
    }
    ranked.order.into_iter().filter(|&i| chosen[i]).collect()
}

/// Maximum-hypervolume subset of size `keep` of a mutually non-dominated set.
fn best_subset(points: &[Objectives], ids: &[u64], front: &[usize], reference: &Objectives, keep: usize) -> Vec<usize> {
    let mut inside: Vec<usize> = front
        .iter()
        .copied()
        .filter(|&i| points[i][0] < reference[0] && points[i][1] < reference[1])
        .collect();
    inside.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
            .then(ids[a].cmp(&ids[b]))
    });
    let mut picked: Vec<usize> = Vec::with_capacity(keep);
    let slots = keep.min(inside.len());
    if slots > 0 {
        let m = inside.len();
        let f = |i: usize| points[inside[i]];
        // value[j][i]: best volume of j+1 points whose right-most point is i
        let mut value = vec![vec![f64::NEG_INFINITY; m]; slots];
        let mut prev = vec![vec![usize::MAX; m]; slots];
        for (i, v) in value[0].iter_mut().enumerate() {
            *v = (reference[0] - f(i)[0]) * (reference[1] - f(i)[1]);
        }
        for j in 1..slots {
            for i in j..m {
                for p in (j - 1)..i {
                    if value[j - 1][p] == f64::NEG_INFINITY {
                        continue;
                    }
                    let v = value[j - 1][p] + (reference[0] - f(i)[0]) * (f(p)[1] - f(i)[1]);
                    if v > value[j][i] {
                        value[j][i] = v;
                        prev[j][i] = p;
                    }
                }
            }
        }
        let mut last = (0..m).fold(None::<usize>, |best, i| match best {
            Some(b) if value[slots - 1][b] >= value[slots - 1][i] => Some(b),
            _ => Some(i),
        });
        for j in (0..slots).rev() {
            let i = last.expect("a feasible subset exists");
            picked.push(inside[i]);
            last = if j > 0 { Some(prev[j][i]) } else { None };
        }
    }
    // out-of-box members fill any remaining slots in ranking order
    for &i in front {
        if picked.len() == keep {
            break;
        }
        if !picked.contains(&i) {
            picked.push(i);
        }
    }
    picked
}

/// Ranks `points` by non-dominated sorting, then by hypervolume contribution
/// within each rank (larger first), then by objective sum and finally by `ids`.
pub fn rank_population(points: &[Objectives], ids: &[u64], reference: &Objectives) -> RankedPopulation {
    assert_eq!(points.len(), ids.len(), "one id per member");
    let ranks = nondominated_sort(points);
    let mut contributions = vec![0.0; points.len()];
    let depth = ranks.iter().copied().max().map_or(0, |r| r + 1);
    for rank in 0..depth {
        let members: Vec<usize> = (0..points.len()).filter(|&i| ranks[i] == rank).collect();
        let layer: Vec<Objectives> = members.iter().map(|&i| points[i]).collect();
        for (&i, c) in members.iter().zip(hv_contributions_2d(&layer, reference)) {
            contributions[i] = c;
        }
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .cmp(&ranks[b])
            .then(contributions[b].total_cmp(&contributions[a]))
            .then((points[a][0] + points[a][1]).total_cmp(&(points[b][0] + points[b][1])))
            .then(ids[a].cmp(&ids[b]))
            .then(Ordering::Equal)
    });
    RankedPopulation { ranks, contributions, order }
}
