//! Gauss–Legendre rules and composite integration on finite intervals.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // roots are symmetric; solve for the positive half with Newton
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` split into `panels` equal sub-intervals.
    pub fn integrate_composite<T>(&self, a: f64, b: f64, panels: usize, f: impl Fn(f64) -> T) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    {
        let h = (b - a) / panels as f64;
        let mut total = T::default();
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut panel = T::default();
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel = panel + f(mid + 0.5 * h * x) * *w;
            }
            total = total + panel * (0.5 * h);
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn known_small_rules() {
        let r = GaussLegendre::new(2);
        assert_relative_eq!(r.nodes()[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.weights()[0], 1.0, epsilon = 1e-15);

        let r = GaussLegendre::new(3);
        assert_relative_eq!(r.nodes()[2], 0.6f64.sqrt(), epsilon = 1e-15);
        assert_eq!(r.nodes()[1], 0.0);
        assert_relative_eq!(r.weights()[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(r.weights()[0], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 4, 7, 16, 33, 64] {
            let r = GaussLegendre::new(n);
            assert_relative_eq!(r.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(r.nodes().windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn smooth_integrals() {
        let r = GaussLegendre::new(16);
        assert_relative_eq!(r.integrate_composite(0.0, PI, 4, f64::sin), 2.0, epsilon = 1e-14);
        assert_relative_eq!(r.integrate_composite(-1.0, 2.0, 3, f64::exp), 2f64.exp() - (-1f64).exp(), max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn exact_for_polynomials_up_to_degree_2n_minus_1(n in 1usize..20, seed in prop::collection::vec(-2.0f64..2.0, 40)) {
            let r = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let coeffs = &seed[..=deg];
            let poly = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            // exact ∫_{-1}^{1} x^k = 2/(k+1) for even k
            let exact: f64 = coeffs.iter().enumerate().filter(|(k, _)| k % 2 == 0).map(|(k, c)| c * 2.0 / (k as f64 + 1.0)).sum();
            let got = r.integrate_composite(-1.0, 1.0, 1, poly);
            prop_assert!((got - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        }
    }
}
