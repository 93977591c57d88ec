//! Fixed-order Gauss-Legendre quadrature.
//!
//! Nodes and weights are generated once per order by Newton iteration on the
//! Legendre polynomial and cached; integration is then a deterministic dot
//! product, so repeated evaluations are bit-stable.

use std::sync::OnceLock;

/// A Gauss-Legendre rule of fixed order on [-1, 1].
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2, "quadrature order must be at least 2");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        // Symmetric rule: only the first half needs solving.
        for i in 0..order.div_ceil(2) {
            // Tricomi-style initial guess, accurate enough for Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }
}

/// Legendre polynomial P_n(x) and its derivative via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

static RULE_128: OnceLock<GaussLegendre> = OnceLock::new();
static RULE_256: OnceLock<GaussLegendre> = OnceLock::new();

/// The default 128-node rule used by the slice-area integral.
pub fn rule_128() -> &'static GaussLegendre {
    RULE_128.get_or_init(|| GaussLegendre::new(128))
}

/// The doubled rule used for convergence self-checks.
pub fn rule_256() -> &'static GaussLegendre {
    RULE_256.get_or_init(|| GaussLegendre::new(256))
}
