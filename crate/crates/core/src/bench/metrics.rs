//! Error measures and summary statistics for the studies.

use nalgebra::{DVector, Vector3};

use crate::assembly::Problem;
use crate::error::{Error, Result};
use crate::liegroup::{quat_to_rotation, se3_log, EuclideanTransform};

/// Pose of a rod at `xi` as a Euclidean transform.
pub fn rod_pose(problem: &Problem, x: &DVector<f64>, xi: f64) -> Result<EuclideanTransform> {
    let (r, p) = problem.pose(x, xi)?;
    Ok(EuclideanTransform::new(*quat_to_rotation(&p)?.matrix(), r))
}

/// Root mean square of `‖Log(H_a⁻¹ H_b)‖` over `k` uniform samples of `[0, 1]`.
pub fn twist_error<A, B>(a: A, b: B, k: usize) -> Result<f64>
where
    A: Fn(f64) -> Result<EuclideanTransform>,
    B: Fn(f64) -> Result<EuclideanTransform>,
{
    if k < 2 {
        return Err(Error::Config(format!("twist error needs at least two samples, got {k}")));
    }
    let mut sum = 0.0;
    for i in 0..k {
        let xi = i as f64 / (k - 1) as f64;
        let rel = a(xi)?.inverse().compose(&b(xi)?);
        sum += se3_log(&rel)?.norm().powi(2);
    }
    Ok((sum / k as f64).sqrt())
}

/// Twist error between two discrete rod solutions.
pub fn rod_twist_error(a: (&Problem, &DVector<f64>), b: (&Problem, &DVector<f64>), k: usize) -> Result<f64> {
    twist_error(|xi| rod_pose(a.0, a.1, xi), |xi| rod_pose(b.0, b.1, xi), k)
}

/// Least-squares slope of `ln e` against `ln n`.
pub fn loglog_slope(n: &[f64], e: &[f64]) -> f64 {
    let xs: Vec<f64> = n.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Contact force and moment profiles sampled at `k` uniform points.
pub fn stress_profile(problem: &Problem, x: &DVector<f64>, k: usize) -> Result<Vec<(f64, Vector3<f64>, Vector3<f64>)>> {
    (0..k)
        .map(|i| {
            let xi = i as f64 / (k - 1) as f64;
            let (n, m) = problem.contact_forces(x, xi)?;
            Ok((xi, n, m))
        })
        .collect()
}

/// Largest spread `max − min` of any force component over the samples.
pub fn force_range(profile: &[(f64, Vector3<f64>, Vector3<f64>)]) -> f64 {
    (0..3)
        .map(|c| {
            let (lo, hi) = profile
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, n, _)| (lo.min(n[c]), hi.max(n[c])));
            hi - lo
        })
        .fold(0.0, f64::max)
}
