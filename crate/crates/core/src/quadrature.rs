//! Gauss–Legendre and Gauss–Hermite rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrences, which
//! is accurate to a few ulps for the orders used here (up to a few hundred).

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` nodes on `[-1, 1]`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// Integrates `f` over `[a, b]` after the substitution `x = a + (b-a) s^2`.
    ///
    /// Removes a square-root type singularity of the integrand at `a`.
    pub fn integrate_sqrt_left<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        self.integrate(0.0, 1.0, |s| 2.0 * h * s * f(a + h * s * s))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite rule for integrals of the form `∫ e^{-x²} f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..m {
            // Initial guesses from the classical asymptotic placement.
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[n - 1],
                3 => 1.91 * z - 0.91 * nodes[n - 2],
                _ => 2.0 * z - nodes[n + 1 - i],
            };
            let mut pp = 0.0;
            for _ in 0..200 {
                let (p, d) = hermite_normalized(n, z);
                pp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = hermite_normalized(n, z);
            if d != 0.0 {
                pp = d;
            }
            nodes[n - 1 - i] = z;
            nodes[i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ e^{-x²} f(x) dx` over the real line.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    /// `E[f(X)]` for `X ~ N(0, sigma²)`.
    pub fn expect_normal<F: FnMut(f64) -> f64>(&self, sigma: f64, mut f: F) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sigma;
        self.integrate(|x| f(scale * x)) / PI.sqrt()
    }
}

/// Orthonormal Hermite recurrence; returns `(p_n, p_n')`.
fn hermite_normalized(n: usize, z: f64) -> (f64, f64) {
    let pim4 = PI.powf(-0.25);
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64 + 1.0;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    let pp = (2.0 * n as f64).sqrt() * p2;
    (p1, pp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        // degree 15 is the exactness limit for 8 nodes
        let exact = |k: i32| if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        for k in 0..16 {
            let got = gl.integrate(-1.0, 1.0, |x| x.powi(k));
            assert!((got - exact(k)).abs() < 1e-14, "x^{k}: {got}");
        }
        let weights: f64 = gl.integrate(-1.0, 1.0, |_| 1.0);
        assert!((weights - 2.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_sqrt_substitution() {
        let gl = GaussLegendre::new(16);
        let got = gl.integrate_sqrt_left(1.0, 2.0, |x| (x - 1.0).sqrt());
        assert!((got - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_moments() {
        let gh = GaussHermite::new(40);
        for (k, want) in [(0, 1.0), (2, 1.0), (4, 3.0), (6, 15.0)] {
            let got = gh.expect_normal(1.0, |x| x.powi(k));
            assert!((got - want).abs() < 1e-12, "moment {k}: {got}");
        }
        let got = gh.integrate(|x| x.cos());
        let want = PI.sqrt() * (-0.25f64).exp();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn high_order_rules_stay_normalized() {
        let gl = GaussLegendre::new(128);
        assert!((gl.integrate(0.0, 1.0, |x| x * x) - 1.0 / 3.0).abs() < 1e-14);
        let gh = GaussHermite::new(128);
        assert!((gh.expect_normal(1.0, |x| x * x) - 1.0).abs() < 1e-11);
    }
}
