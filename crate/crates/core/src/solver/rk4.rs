/// Right-hand side of the second-order system `v_tt = A(v)`.
pub trait RadialOperator {
    /// Writes `A(v)` into `out`. The last node is the frozen outer boundary.
    fn apply(&self, v: &[f64], out: &mut [f64]);
}

/// Classic four-stage Runge-Kutta on the first-order pair `(v, w = v_t)`.
/// Buffers are owned so a run allocates once.
pub struct Rk4 {
    kv: [Vec<f64>; 4],
    kw: [Vec<f64>; 4],
    v_tmp: Vec<f64>,
    w_tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(n: usize) -> Self {
        let z = || vec![0.0; n];
        Self {
            kv: [z(), z(), z(), z()],
            kw: [z(), z(), z(), z()],
            v_tmp: z(),
            w_tmp: z(),
        }
    }

    pub fn step<Op: RadialOperator + ?Sized>(&mut self, op: &Op, v: &mut [f64], w: &mut [f64], dt: f64) {
        let n = v.len();
        let coeffs = [0.5 * dt, 0.5 * dt, dt];
        self.kv[0].copy_from_slice(w);
        op.apply(v, &mut self.kw[0]);
        for stage in 1..4 {
            let c = coeffs[stage - 1];
            for i in 0..n {
                self.v_tmp[i] = v[i] + c * self.kv[stage - 1][i];
                self.w_tmp[i] = w[i] + c * self.kw[stage - 1][i];
            }
            self.kv[stage].copy_from_slice(&self.w_tmp);
            op.apply(&self.v_tmp, &mut self.kw[stage]);
        }
        let h = dt / 6.0;
        for i in 0..n {
            v[i] += h * (self.kv[0][i] + 2.0 * self.kv[1][i] + 2.0 * self.kv[2][i] + self.kv[3][i]);
            w[i] += h * (self.kw[0][i] + 2.0 * self.kw[1][i] + 2.0 * self.kw[2][i] + self.kw[3][i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator;
    impl RadialOperator for Oscillator {
        fn apply(&self, v: &[f64], out: &mut [f64]) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = -x;
            }
        }
    }

    #[test]
    fn fourth_order_on_harmonic_oscillator() {
        let err = |steps: usize| {
            let dt = 1.0 / steps as f64;
            let mut v = vec![1.0];
            let mut w = vec![0.0];
            let mut rk = Rk4::new(1);
            for _ in 0..steps {
                rk.step(&Oscillator, &mut v, &mut w, dt);
            }
            (v[0] - 1.0_f64.cos()).abs()
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 14.0 && ratio < 18.0, "{ratio}");
    }
}
