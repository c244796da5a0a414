use super::Objectives;

fn inside(p: &Objectives, reference: &Objectives) -> bool {
    p[0] < reference[0] && p[1] < reference[1]
}

fn sorted_inside(front: &[Objectives], reference: &Objectives) -> Vec<Objectives> {
    let mut pts: Vec<Objectives> = front.iter().copied().filter(|p| inside(p, reference)).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts
}

/// Area of the union of the boxes `[p_1, r_1] × [p_2, r_2]`.
///
/// Dominated points and points outside the reference box add nothing.
pub fn hypervolume_2d(front: &[Objectives], reference: &Objectives) -> f64 {
    let mut volume = 0.0;
    let mut ceiling = reference[1];
    for p in sorted_inside(front, reference) {
        if p[1] < ceiling {
            volume += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    volume
}

/// Hypervolume lost by removing each point on its own.
///
/// For a mutually non-dominated front this is the box spanned by the sorted
/// neighbours, with the reference point closing the two extremes. Dominated
/// points, duplicates and points outside the reference box get 0.
pub fn hv_contributions_2d(front: &[Objectives], reference: &Objectives) -> Vec<f64> {
    let n = front.len();
    let mut order: Vec<usize> = (0..n).filter(|&i| inside(&front[i], reference)).collect();
    order.sort_by(|&a, &b| front[a][0].total_cmp(&front[b][0]).then(front[a][1].total_cmp(&front[b][1])));

    // staircase of the non-dominated in-box points; everything else is "covered"
    let mut stair: Vec<usize> = Vec::new();
    let mut covered: Vec<usize> = Vec::new();
    let mut ceiling = f64::INFINITY;
    for &i in &order {
        if front[i][1] < ceiling {
            stair.push(i);
            ceiling = front[i][1];
        } else {
            covered.push(i);
        }
    }

    let mut contributions = vec![0.0; n];
    for (pos, &i) in stair.iter().enumerate() {
        let p = front[i];
        let right = stair.get(pos + 1).map_or(reference[0], |&j| front[j][0]);
        let top = if pos == 0 { reference[1] } else { front[stair[pos - 1]][1] };
        // covered points lying inside the exclusive box shrink it
        let clip = [right, top];
        let intruders: Vec<Objectives> = covered
            .iter()
            .map(|&j| front[j])
            .filter(|q| inside(q, &clip))
            .collect();
        let lost = if intruders.is_empty() {
            0.0
        } else {
            let clipped: Vec<Objectives> =
                intruders.iter().map(|q| [q[0].max(p[0]), q[1].max(p[1])]).collect();
            hypervolume_2d(&clipped, &clip)
        };
        contributions[i] = (right - p[0]) * (top - p[1]) - lost;
    }
    contributions
}
