//! Maximization of smooth functions over the unit sphere.

use nalgebra::Vector3;

/// `n` quasi-uniform points on the unit sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

/// Best point found and its value.
#[derive(Debug, Clone, Copy)]
pub struct SphereMax {
    pub point: Vector3<f64>,
    pub value: f64,
}

/// Maximize `|T n + c|` over unit `n`.
///
/// The lattice picks the starting points; each of the best `starts` is then polished
/// by projected gradient ascent on `|T n + c|²` with step halving.
pub fn max_affine_norm(
    linear: &nalgebra::Matrix3<f64>,
    translation: &Vector3<f64>,
    lattice: &[Vector3<f64>],
    starts: usize,
) -> SphereMax {
    let f = |n: &Vector3<f64>| (linear * n + translation).norm_squared();

    let mut scored: Vec<(f64, usize)> =
        lattice.iter().enumerate().map(|(i, n)| (f(n), i)).collect();
    let starts = starts.clamp(1, scored.len().max(1));
    if scored.len() > starts {
        scored.select_nth_unstable_by(starts - 1, |a, b| b.0.total_cmp(&a.0));
        scored.truncate(starts);
    }

    let mut best = SphereMax {
        point: Vector3::z(),
        value: f64::NEG_INFINITY,
    };
    for &(_, i) in &scored {
        let (n, v) = ascend(linear, translation, lattice[i]);
        if v > best.value {
            best = SphereMax { point: n, value: v };
        }
    }
    best.value = best.value.max(0.0).sqrt();
    best
}

fn ascend(
    linear: &nalgebra::Matrix3<f64>,
    translation: &Vector3<f64>,
    start: Vector3<f64>,
) -> (Vector3<f64>, f64) {
    let f = |n: &Vector3<f64>| (linear * n + translation).norm_squared();
    let mut n = start;
    let mut val = f(&n);
    let mut step = 1.0;
    for _ in 0..500 {
        let grad = 2.0 * linear.transpose() * (linear * n + translation);
        let tangent = grad - n * grad.dot(&n);
        if tangent.norm() < 1e-15 {
            break;
        }
        let mut improved = false;
        while step > 1e-14 {
            let cand = (n + step * tangent).normalize();
            let cv = f(&cand);
            if cv > val {
                n = cand;
                val = cv;
                improved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (n, val)
}
