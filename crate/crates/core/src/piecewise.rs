//! Exact piecewise polynomials closed under convolution with normalised boxes.

/// Polynomial pieces on `[knots[i], knots[i+1]]`, each in the local variable
/// `s = x − knots[i]`; zero outside `[knots[0], knots[last]]`.
#[derive(Clone, Debug)]
pub(crate) struct Piecewise {
    knots: Vec<f64>,
    polys: Vec<Vec<f64>>,
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

/// Coefficients of `p(s + delta)`.
fn taylor_shift(c: &[f64], delta: f64) -> Vec<f64> {
    let mut q = c.to_vec();
    let n = q.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            q[j] += delta * q[j + 1];
        }
    }
    q
}

impl Piecewise {
    /// `(1/2a)·1_{[-a, a]}`.
    pub(crate) fn unit_box(a: f64) -> Self {
        Self {
            knots: vec![-a, a],
            polys: vec![vec![0.5 / a]],
        }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x < self.knots[0] || x > self.knots[n - 1] {
            return 0.0;
        }
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        horner(&self.polys[i], x - self.knots[i])
    }

    /// Antiderivative pieces (one degree higher) and their left-end offsets.
    fn antiderivative(&self) -> (Vec<Vec<f64>>, f64) {
        let mut out = Vec::with_capacity(self.polys.len());
        let mut acc = 0.0;
        for (i, p) in self.polys.iter().enumerate() {
            let mut q = vec![acc];
            q.extend(p.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
            let w = self.knots[i + 1] - self.knots[i];
            acc = horner(&q, w);
            out.push(q);
        }
        (out, acc)
    }

    /// Convolution with `(1/2b)·1_{[-b, b]}`: `(Φ(x+b) − Φ(x−b))/(2b)`.
    pub(crate) fn convolve_box(&self, b: f64) -> Self {
        let (anti, total) = self.antiderivative();
        let lo = self.knots[0];
        let hi = self.knots[self.knots.len() - 1];
        let mut knots: Vec<f64> = self.knots.iter().flat_map(|k| [k - b, k + b]).collect();
        knots.sort_by(f64::total_cmp);
        let tol = 1e-13 * (hi - lo + 2.0 * b);
        knots.dedup_by(|a, b| (*a - *b).abs() <= tol);
        let deg = anti[0].len();
        // Φ restricted to the interval [u, v] shifted by `shift`, in local s = x − u.
        let phi_local = |u: f64, v: f64, shift: f64| -> Vec<f64> {
            let mid = 0.5 * (u + v) + shift;
            if mid <= lo {
                return vec![0.0; deg];
            }
            if mid >= hi {
                let mut c = vec![0.0; deg];
                c[0] = total;
                return c;
            }
            let j = match self.knots.binary_search_by(|k| k.total_cmp(&mid)) {
                Ok(j) => j.min(self.knots.len() - 2),
                Err(j) => j - 1,
            };
            let mut c = taylor_shift(&anti[j], u + shift - self.knots[j]);
            c.resize(deg, 0.0);
            c
        };
        let polys = knots
            .windows(2)
            .map(|w| {
                let plus = phi_local(w[0], w[1], b);
                let minus = phi_local(w[0], w[1], -b);
                plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * b)).collect()
            })
            .collect();
        Self { knots, polys }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_identity() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let q = taylor_shift(&c, 0.7);
        for s in [-1.0, 0.0, 0.3, 2.0] {
            assert!((horner(&q, s) - horner(&c, s + 0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_boxes() {
        let f = Piecewise::unit_box(0.5).convolve_box(0.5);
        for x in [-1.2, -1.0, -0.6, 0.0, 0.3, 0.99, 1.5] {
            let t = (1.0 - f64::abs(x)).max(0.0);
            assert!((f.eval(x) - t).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn unequal_boxes_integrate_to_one() {
        let f = Piecewise::unit_box(0.5).convolve_box(0.25).convolve_box(0.1);
        let n = 20_000;
        let h = 2.0 / n as f64;
        let s: f64 = (0..n).map(|i| f.eval(-1.0 + (i as f64 + 0.5) * h)).sum::<f64>() * h;
        assert!((s - 1.0).abs() < 1e-8);
        assert_eq!(f.eval(0.851), 0.0);
        // flat top of height 1 on |x| ≤ 0.5 − 0.25 − 0.1
        assert!((f.eval(0.1) - 1.0).abs() < 1e-13);
    }
}
