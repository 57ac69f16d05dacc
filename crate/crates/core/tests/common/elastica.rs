//! Planar inextensible, shear-rigid cantilever by RK4 shooting.
//!
//! `θ' = m / k`, `m' = P cos θ`, `x' = cos θ`, `y' = sin θ` with `θ(0) = 0`
//! and the shooting unknown `m(0)` chosen so that `m(L)` equals the tip moment.
//! The tip force is `(0, −P)`.

#[derive(Clone, Copy, Debug)]
pub struct Elastica {
    pub length: f64,
    pub bending_stiffness: f64,
    pub force: f64,
    pub tip_moment: f64,
}

type State = [f64; 4]; // theta, m, x, y

impl Elastica {
    fn rhs(&self, s: &State) -> State {
        [s[1] / self.bending_stiffness, self.force * s[0].cos(), s[0].cos(), s[0].sin()]
    }

    /// State at the tip for the given clamp moment.
    pub fn integrate(&self, m0: f64, steps: usize) -> State {
        let h = self.length / steps as f64;
        let mut s = [0.0, m0, 0.0, 0.0];
        let add = |a: &State, b: &State, c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]];
        for _ in 0..steps {
            let k1 = self.rhs(&s);
            let k2 = self.rhs(&add(&s, &k1, 0.5 * h));
            let k3 = self.rhs(&add(&s, &k2, 0.5 * h));
            let k4 = self.rhs(&add(&s, &k3, h));
            for i in 0..4 {
                s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        s
    }

    /// Clamp moment `m(0)` by secant iteration from `guess`.
    pub fn shoot(&self, guess: f64, steps: usize) -> f64 {
        let miss = |m0: f64| self.integrate(m0, steps)[1] - self.tip_moment;
        let (mut m_a, mut m_b) = (guess, guess * (1.0 + 1e-3) + 1e-6);
        let (mut f_a, mut f_b) = (miss(m_a), miss(m_b));
        for _ in 0..100 {
            if f_b.abs() < 1e-13 || f_b == f_a {
                break;
            }
            let m_c = m_b - f_b * (m_b - m_a) / (f_b - f_a);
            (m_a, f_a) = (m_b, f_b);
            m_b = m_c;
            f_b = miss(m_b);
        }
        m_b
    }

    /// Tip position `(x, y)` following the solution branch from the unloaded rod
    /// through `levels` equal load steps.
    pub fn tip(&self, levels: usize, steps: usize) -> (f64, f64) {
        let mut m0 = (self.force * self.length + self.tip_moment) / levels as f64;
        for k in 1..=levels {
            let s = k as f64 / levels as f64;
            let partial = Elastica { force: self.force * s, tip_moment: self.tip_moment * s, ..*self };
            m0 = partial.shoot(m0, steps);
            // proportional seed for the next level
            m0 *= (k + 1) as f64 / k as f64;
        }
        m0 *= levels as f64 / (levels + 1) as f64;
        let s = self.integrate(m0, steps);
        (s[2], s[3])
    }
}
