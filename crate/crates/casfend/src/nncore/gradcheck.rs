//! Central finite-difference gradient checking against backpropagation.

use super::params::ParamSet;

/// Relative error floor: differences below this scale are treated as noise.
const REL_FLOOR: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct GradCheckEntry {
    pub name: String,
    pub trainable: bool,
    /// Max relative error over coordinates (0 for frozen parameters).
    pub max_rel_err: f64,
    /// L2 norm of the backpropagated gradient.
    pub grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub entries: Vec<GradCheckEntry>,
    pub tol: f64,
}

impl GradCheckReport {
    /// Pass iff every trainable parameter is within tolerance and every
    /// frozen parameter reports exactly zero gradient.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| {
            if e.trainable {
                e.max_rel_err < self.tol
            } else {
                e.grad_norm == 0.0
            }
        })
    }

    pub fn max_rel_err(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.max_rel_err)
            .fold(0.0, f64::max)
    }
}

/// Compare the gradients already stored in `params` (filled by a backward
/// pass) against central finite differences of `loss`. `loss` must be a pure,
/// deterministic function of the parameter values. Only trainable parameters
/// are perturbed; frozen parameters are reported with their gradient norm.
pub fn grad_check(
    params: &mut ParamSet,
    mut loss: impl FnMut(&ParamSet) -> f64,
    h: f64,
    tol: f64,
) -> GradCheckReport {
    let names: Vec<(String, bool, usize)> = params
        .iter()
        .map(|p| (p.name.clone(), p.trainable, p.values.len()))
        .collect();
    let mut entries = Vec::with_capacity(names.len());
    for (name, trainable, len) in names {
        let analytic: Vec<f64> = params.get(&name).unwrap().grad.data().to_vec();
        let grad_norm = analytic.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !trainable {
            entries.push(GradCheckEntry {
                name,
                trainable,
                max_rel_err: 0.0,
                grad_norm,
            });
            continue;
        }
        let mut max_rel = 0.0_f64;
        for i in 0..len {
            let orig = params.get(&name).unwrap().values.data()[i];
            params.get_mut(&name).unwrap().values.data_mut()[i] = orig + h;
            let plus = loss(params);
            params.get_mut(&name).unwrap().values.data_mut()[i] = orig - h;
            let minus = loss(params);
            params.get_mut(&name).unwrap().values.data_mut()[i] = orig;
            let fd = (plus - minus) / (2.0 * h);
            let bp = analytic[i];
            let rel = (fd - bp).abs() / fd.abs().max(bp.abs()).max(REL_FLOOR);
            max_rel = max_rel.max(rel);
        }
        entries.push(GradCheckEntry {
            name,
            trainable,
            max_rel_err: max_rel,
            grad_norm,
        });
    }
    GradCheckReport { entries, tol }
}
