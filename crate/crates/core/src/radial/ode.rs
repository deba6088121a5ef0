//! Dormand–Prince 5(4) integrator with the step-size policy used by the
//! shooting solvers: growth capped at 2x per step and a maximum step that
//! forces a minimum number of accepted steps over the interval.

pub(crate) const MIN_ACCEPTED_STEPS: usize = 512;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) type State = [f64; 3];

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepControl {
    pub rel_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Steps taken at `min_step` with the error test still failing.
    pub forced: usize,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..3 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Adaptive integrator carrying its step size between calls so that a
/// trajectory can be advanced piecewise between output nodes.
pub(crate) struct Integrator<F: Fn(f64, &State) -> State> {
    rhs: F,
    control: StepControl,
    step: f64,
    /// Running maxima of |y_i|, used as absolute scales for the error test.
    scale: State,
    pub stats: StepStats,
}

impl<F: Fn(f64, &State) -> State> Integrator<F> {
    pub fn new(rhs: F, control: StepControl, y0: &State) -> Self {
        Integrator {
            rhs,
            control,
            step: control.max_step / 64.0,
            scale: [y0[0].abs(), y0[1].abs(), y0[2].abs()],
            stats: StepStats::default(),
        }
    }

    /// Advances `y` from `t` to `t_end`. `observe` is called after every
    /// accepted step with the new `(t, y)` and may return `false` to stop
    /// early; the returned time is where integration stopped.
    pub fn advance<O: FnMut(f64, &State) -> bool>(
        &mut self,
        t: f64,
        y: &mut State,
        t_end: f64,
        mut observe: O,
    ) -> f64 {
        let mut t = t;
        let mut k1 = (self.rhs)(t, y);
        while t < t_end {
            let mut h = self.step.min(self.control.max_step).max(self.control.min_step);
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }
            let y2 = axpy(y, h, &[(A21, &k1)]);
            let k2 = (self.rhs)(t + C2 * h, &y2);
            let y3 = axpy(y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = (self.rhs)(t + C3 * h, &y3);
            let y4 = axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = (self.rhs)(t + C4 * h, &y4);
            let y5 = axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = (self.rhs)(t + C5 * h, &y5);
            let y6 = axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let t_new = if last { t_end } else { t + h };
            let k6 = (self.rhs)(t + h, &y6);
            let y_new = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = (self.rhs)(t_new, &y_new);

            let mut err = 0.0_f64;
            for i in 0..3 {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.scale[i].max(y[i].abs()).max(y_new[i].abs());
                if sc > 0.0 {
                    err = err.max(e.abs() / (self.control.rel_tol * sc));
                } else if e != 0.0 {
                    err = f64::INFINITY;
                }
            }
            if !err.is_finite() && h > self.control.min_step {
                self.step = (h * 0.1).max(self.control.min_step);
                self.stats.rejected += 1;
                continue;
            }
            let at_floor = h <= self.control.min_step * (1.0 + 1e-12);
            if err <= 1.0 || at_floor {
                if err > 1.0 {
                    self.stats.forced += 1;
                }
                t = t_new;
                *y = y_new;
                k1 = k7;
                for (s, v) in self.scale.iter_mut().zip(y.iter()) {
                    *s = s.max(v.abs());
                }
                self.stats.accepted += 1;
                let factor = if err == 0.0 { 2.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 2.0) };
                if !last || factor < 1.0 {
                    self.step = h * factor;
                }
                if !observe(t, y) {
                    return t;
                }
            } else {
                self.stats.rejected += 1;
                self.step = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        t
    }
}
