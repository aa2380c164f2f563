use crate::numeric::integrate;

use super::LineError;

/// Arrival rate `lambda` (blues) and service rate `mu` (reds), `lambda < mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BusyCycleParams {
    lambda: f64,
    mu: f64,
}

impl BusyCycleParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self, LineError> {
        if !(lambda >= 0.0 && mu > 0.0 && lambda.is_finite() && mu.is_finite()) {
            return Err(LineError::BadRates { lambda, mu });
        }
        if lambda >= mu {
            return Err(LineError::NotSubcritical { lambda, mu });
        }
        Ok(BusyCycleParams { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.lambda / self.mu
    }

    pub fn mean(&self) -> f64 {
        1.0 / (self.mu - self.lambda)
    }

    /// Density without the domain check; `t = 0` gives the limit `mu`.
    pub(crate) fn density(&self, t: f64) -> f64 {
        let (l, m) = (self.lambda, self.mu);
        if t == 0.0 {
            return m;
        }
        if l == 0.0 {
            return m * (-m * t).exp();
        }
        let z = 2.0 * t * (l * m).sqrt();
        (z - (l + m) * t).exp() * i1_scaled(z) / (t * self.rho().sqrt())
    }
}

/// `I_1(z) e^{-z}` for `z >= 0`.
fn i1_scaled(z: f64) -> f64 {
    if z < 700.0 {
        puruspe::In(1, z) * (-z).exp()
    } else {
        // Hankel expansion; the first neglected term is below 1e-13 here.
        let w = 8.0 * z;
        let series = 1.0 - 3.0 / w - 15.0 / (2.0 * w * w) - 315.0 / (6.0 * w * w * w);
        series / (2.0 * std::f64::consts::PI * z).sqrt()
    }
}

/// Busy-cycle density `e^{-(lambda+mu)t} I_1(2t sqrt(lambda mu)) / (t sqrt(rho))`.
pub fn busy_cycle_pdf(params: &BusyCycleParams, t: f64) -> Result<f64, LineError> {
    if t.is_nan() || t <= 0.0 {
        return Err(LineError::Domain(t));
    }
    Ok(params.density(t))
}

/// CDF evaluated at each point of an ascending sample, integrating the
/// density piecewise between neighbours.
pub fn busy_cycle_cdf_sorted<F: Fn(f64) -> f64>(density: F, sorted: &[f64], tol: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    let mut last = 0.0;
    for &t in sorted {
        if t > last {
            acc += integrate(&density, last, t, tol);
            last = t;
        }
        out.push(acc.min(1.0));
    }
    out
}
