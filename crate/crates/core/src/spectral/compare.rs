//! Pairing of sorted spectra.

use faer::c64;

const CLUSTER_TOL: f64 = 1e-6;

/// The first `k` entries of a spectrum sorted by real then imaginary part.
pub fn lowest(sorted: &[c64], k: usize) -> Vec<c64> {
    sorted[..k.min(sorted.len())].to_vec()
}

fn scale(z: c64) -> f64 {
    z.norm().max(1.0)
}

/// Largest relative distance `|a − b| / max(1, |b|)` after pairing by index,
/// where runs of nearly equal reference values are matched as multisets.
///
/// Both inputs are sorted; only the common prefix is compared.
pub fn cluster_distance(values: &[c64], reference: &[c64]) -> f64 {
    let len = values.len().min(reference.len());
    let mut worst: f64 = 0.0;
    let mut start = 0;
    while start < len {
        let mut end = start + 1;
        while end < len && (reference[end].re - reference[end - 1].re).abs() <= CLUSTER_TOL * scale(reference[end]) {
            end += 1;
        }
        let mut unused: Vec<c64> = values[start..end].to_vec();
        for &r in &reference[start..end] {
            let (pos, d) = unused
                .iter()
                .enumerate()
                .map(|(i, v)| (i, (v - r).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("clusters have equal sizes");
            unused.swap_remove(pos);
            worst = worst.max(d / scale(r));
        }
        start = end;
    }
    worst
}
