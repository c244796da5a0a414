use super::Objectives;

/// `a` is no worse than `b` in both objectives and strictly better in one.
pub fn dominates(a: &Objectives, b: &Objectives) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Non-dominance rank of every point (0 = non-dominated).
///
/// Points are swept in lexicographic order; each joins the first front whose
/// latest member does not dominate it. Identical points share a rank.
pub fn nondominated_sort(points: &[Objectives]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0].total_cmp(&points[b][0]).then(points[a][1].total_cmp(&points[b][1]))
    });
    let mut fronts: Vec<Objectives> = Vec::new();
    let mut ranks = vec![0; points.len()];
    for idx in order {
        let p = &points[idx];
        let rank = fronts
            .iter()
            .position(|last| !dominates(last, p))
            .unwrap_or(fronts.len());
        if rank == fronts.len() {
            fronts.push(*p);
        } else {
            fronts[rank] = *p;
        }
        ranks[idx] = rank;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_ranks(points: &[Objectives]) -> Vec<usize> {
        let mut ranks = vec![usize::MAX; points.len()];
        let mut rank = 0;
        while ranks.contains(&usize::MAX) {
            let layer: Vec<usize> = (0..points.len())
                .filter(|&i| ranks[i] == usize::MAX)
                .filter(|&i| {
                    !(0..points.len())
                        .any(|j| ranks[j] == usize::MAX && dominates(&points[j], &points[i]))
                })
                .collect();
            for i in layer {
                ranks[i] = rank;
            }
            rank += 1;
        }
        ranks
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&[0.0, 0.0], &[1.0, 1.0]));
        assert!(!dominates(&[0.0, 1.0], &[1.0, 0.0]));
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(dominates(&[1.0, 0.0], &[1.0, 1.0]));
    }

    #[test]
    fn small_sorts() {
        assert_eq!(nondominated_sort(&[[0.0, 1.0], [1.0, 0.0]]), vec![0, 0]);
        assert_eq!(nondominated_sort(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]), vec![0, 1, 2]);
        assert_eq!(nondominated_sort(&[[2.0, 2.0], [1.0, 1.0], [1.0, 1.0]]), vec![1, 0, 0]);
        assert_eq!(nondominated_sort(&[]), Vec::<usize>::new());
    }

    proptest! {
        #[test]
        fn matches_brute_force(pts in prop::collection::vec((0u8..6, 0u8..6), 0..20)) {
            // a coarse grid forces ties and duplicates
            let points: Vec<Objectives> = pts.iter().map(|&(a, b)| [a as f64, b as f64]).collect();
            prop_assert_eq!(nondominated_sort(&points), brute_force_ranks(&points));
        }

        #[test]
        fn matches_brute_force_continuous(pts in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 20)) {
            let points: Vec<Objectives> = pts.iter().map(|&(a, b)| [a, b]).collect();
            prop_assert_eq!(nondominated_sort(&points), brute_force_ranks(&points));
        }
    }
}
