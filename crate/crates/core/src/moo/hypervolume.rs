/// Hypervolume dominated by `points` and bounded by `reference`
/// (minimisation). Points not strictly better than the reference in every
/// objective contribute nothing.
pub fn hypervolume(points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let pts: Vec<Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(x, r)| x < r))
        .cloned()
        .collect();
    slice_volume(pts, reference)
}

// Slicing along the last objective; exact and fine for the archive sizes
// used here.
fn slice_volume(mut pts: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let m = reference.len();
    if pts.is_empty() {
        return 0.0;
    }
    if m == 1 {
        let best = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return reference[0] - best;
    }
    if m == 2 {
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut vol = 0.0;
        let mut ceiling = reference[1];
        for p in &pts {
            if p[1] < ceiling {
                vol += (reference[0] - p[0]) * (ceiling - p[1]);
                ceiling = p[1];
            }
        }
        return vol;
    }
    pts.sort_by(|a, b| a[m - 1].total_cmp(&b[m - 1]));
    let mut vol = 0.0;
    for j in 0..pts.len() {
        let upper = if j + 1 < pts.len() { pts[j + 1][m - 1] } else { reference[m - 1] };
        let depth = upper - pts[j][m - 1];
        if depth <= 0.0 {
            continue;
        }
        let slab: Vec<Vec<f64>> = pts[..=j].iter().map(|p| p[..m - 1].to_vec()).collect();
        vol += depth * slice_volume(slab, &reference[..m - 1]);
    }
    vol
}

/// Hypervolume lost when each point is removed from the set.
pub fn hypervolume_contributions(points: &[Vec<f64>], reference: &[f64]) -> Vec<f64> {
    let total = hypervolume(points, reference);
    (0..points.len())
        .map(|i| {
            let rest: Vec<Vec<f64>> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            total - hypervolume(&rest, reference)
        })
        .collect()
}
