//! Floating-point kernels shared by the samplers: compiled polynomials,
//! damped Gauss–Newton, numeric rank, and seed derivation.

use std::collections::BTreeMap;

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polycore::{Coeff, MPoly};

/// Real or complex float scalar.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn from_complex(c: Complex64) -> Self;
}

impl Scalar for f64 {
    fn from_complex(c: Complex64) -> Self {
        c.re
    }
}

impl Scalar for Complex64 {
    fn from_complex(c: Complex64) -> Self {
        c
    }
}

/// Polynomial with float coefficients and dense exponent vectors, evaluated
/// against a shared power table.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPoly<T: Scalar> {
    nvars: usize,
    terms: Vec<(T, Vec<u32>)>,
}

impl<T: Scalar> CompiledPoly<T> {
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (T, Vec<u32>)>) -> Self {
        let mut acc: BTreeMap<Vec<u32>, T> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            let slot = acc.entry(e).or_insert_with(T::zero);
            *slot += c;
        }
        CompiledPoly { nvars, terms: acc.into_iter().filter(|(_, c)| *c != T::zero()).map(|(e, c)| (c, e)).collect() }
    }

    pub fn compile<C: Coeff>(p: &MPoly<C>) -> Self {
        Self::from_terms(p.nvars(), p.terms().map(|(m, c)| (T::from_complex(c.to_complex()), m.0.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.iter().flat_map(|(_, e)| e.iter().copied()).max().unwrap_or(0)
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(_, e)| e[var] > 0).map(|(c, e)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (*c * T::from_real(e[var] as f64), e2)
            }),
        )
    }

    pub fn linear_combination(nvars: usize, parts: &[(T, &CompiledPoly<T>)], constant: T) -> Self {
        let mut terms: Vec<(T, Vec<u32>)> = vec![(constant, vec![0; nvars])];
        for (w, p) in parts {
            terms.extend(p.terms.iter().map(|(c, e)| (*c * *w, e.clone())));
        }
        Self::from_terms(nvars, terms)
    }

    pub fn eval_with(&self, table: &PowerTable<T>) -> T {
        let mut acc = T::zero();
        for (c, e) in &self.terms {
            let mut t = *c;
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= table.pow(v, k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Σ |c|·|x^α|, the natural magnitude against which `eval` is compared.
    pub fn abs_scale_with(&self, table: &PowerTable<T>) -> f64 {
        let mut acc = 0.0;
        for (c, e) in &self.terms {
            let mut t = c.modulus();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= table.pow(v, k).modulus();
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.eval_with(&PowerTable::new(x, self.max_exponent()))
    }
}

/// `x_v^k` for every variable and `k ≤ max`.
pub struct PowerTable<T: Scalar> {
    pows: Vec<Vec<T>>,
}

impl<T: Scalar> PowerTable<T> {
    pub fn new(x: &[T], max: u32) -> Self {
        let pows = x
            .iter()
            .map(|&v| {
                let mut row = Vec::with_capacity(max as usize + 1);
                row.push(T::one());
                for k in 0..max as usize {
                    row.push(row[k] * v);
                }
                row
            })
            .collect();
        PowerTable { pows }
    }

    #[inline]
    pub fn pow(&self, v: usize, k: u32) -> T {
        self.pows[v][k as usize]
    }
}

/// Square or overdetermined polynomial system with compiled partials and
/// per-equation weights.
#[derive(Clone, Debug)]
pub struct System<T: Scalar> {
    nvars: usize,
    eqs: Vec<CompiledPoly<T>>,
    partials: Vec<Vec<CompiledPoly<T>>>,
    max_exp: u32,
}

impl<T: Scalar> System<T> {
    pub fn new(nvars: usize, eqs: Vec<CompiledPoly<T>>) -> Self {
        let partials: Vec<Vec<CompiledPoly<T>>> = eqs.iter().map(|e| (0..nvars).map(|v| e.derivative(v)).collect()).collect();
        let max_exp = eqs.iter().map(|e| e.max_exponent()).max().unwrap_or(0);
        System { nvars, eqs, partials, max_exp }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn equations(&self) -> &[CompiledPoly<T>] {
        &self.eqs
    }

    pub fn eval(&self, x: &[T], weights: &[f64]) -> DVector<T> {
        let table = PowerTable::new(x, self.max_exp);
        DVector::from_iterator(self.eqs.len(), self.eqs.iter().zip(weights).map(|(e, &w)| e.eval_with(&table) * T::from_real(w)))
    }

    pub fn eval_jacobian(&self, x: &[T], weights: &[f64]) -> (DVector<T>, DMatrix<T>) {
        let table = PowerTable::new(x, self.max_exp);
        let f = DVector::from_iterator(self.eqs.len(), self.eqs.iter().zip(weights).map(|(e, &w)| e.eval_with(&table) * T::from_real(w)));
        let mut j = DMatrix::zeros(self.eqs.len(), self.nvars);
        for (i, row) in self.partials.iter().enumerate() {
            let w = T::from_real(weights[i]);
            for (v, p) in row.iter().enumerate() {
                j[(i, v)] = p.eval_with(&table) * w;
            }
        }
        (f, j)
    }

    /// Unweighted absolute values and magnitude scales of every equation.
    pub fn residuals(&self, x: &[T]) -> Vec<(f64, f64)> {
        let table = PowerTable::new(x, self.max_exp);
        self.eqs.iter().map(|e| (e.eval_with(&table).modulus(), e.abs_scale_with(&table))).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NewtonConfig {
    pub max_steps: usize,
    /// Stop once the weighted max-norm residual is below this.
    pub tol: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { max_steps: 50, tol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonResult<T: Scalar> {
    pub x: Vec<T>,
    pub residual: f64,
    pub steps: usize,
    pub converged: bool,
    /// Euclidean residual after every accepted step, starting with the initial.
    pub history: Vec<f64>,
}

fn max_norm<T: Scalar>(v: &DVector<T>) -> f64 {
    v.iter().map(|c| c.modulus()).fold(0.0, f64::max)
}

/// Gauss–Newton on the weighted system with a least-squares (SVD) step and
/// backtracking; accepted steps strictly decrease the Euclidean residual.
pub fn gauss_newton<T: Scalar>(sys: &System<T>, weights: &[f64], x0: Vec<T>, cfg: NewtonConfig) -> NewtonResult<T> {
    let mut x = x0;
    let (mut f, mut j) = sys.eval_jacobian(&x, weights);
    let mut norm = f.norm();
    let mut history = vec![norm];
    let mut steps = 0;
    while steps < cfg.max_steps {
        if !norm.is_finite() {
            break;
        }
        if max_norm(&f) < cfg.tol {
            return NewtonResult { residual: max_norm(&f), x, steps, converged: true, history };
        }
        let svd = j.clone().svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let Ok(dx) = svd.solve(&(-&f), 1e-14 * smax.max(1e-300)) else { break };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<T> = x.iter().zip(dx.iter()).map(|(a, d)| *a + *d * T::from_real(alpha)).collect();
            let ft = sys.eval(&trial, weights);
            let nt = ft.norm();
            if nt.is_finite() && nt < norm {
                x = trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        steps += 1;
        if !accepted {
            break;
        }
        let (f2, j2) = sys.eval_jacobian(&x, weights);
        f = f2;
        j = j2;
        norm = f.norm();
        history.push(norm);
    }
    let residual = max_norm(&f);
    NewtonResult { converged: residual < cfg.tol, residual, x, steps, history }
}

/// Number of singular values above `rel · σ_max`.
pub fn numeric_rank<T: Scalar>(m: &DMatrix<T>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel * smax).count()
}

/// SplitMix64 step; derives independent sub-seeds from a master seed.
pub fn splitmix(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for task `path` under `seed`; the path is folded through SplitMix.
pub fn task_rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let s = path.iter().fold(seed, |acc, &p| splitmix(acc, p));
    ChaCha8Rng::seed_from_u64(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    #[test]
    fn compiled_matches_horner() {
        let p = parse_poly("3z^3*w - (2 - i)*z*w^2 + 7", &["z", "w"]).unwrap();
        let c = CompiledPoly::<Complex64>::compile(&p);
        let x = [Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)];
        assert!((c.eval(&x) - p.evaluate(&x).unwrap()).norm() < 1e-12);
        let d = CompiledPoly::<Complex64>::compile(&p.diff(0));
        assert!((c.derivative(0).eval(&x) - d.eval(&x)).norm() < 1e-12);
    }

    #[test]
    fn newton_circle_line() {
        // x² + y² = 2, x = y, started off the solution
        let circle = CompiledPoly::from_terms(2, [(1.0, vec![2, 0]), (1.0, vec![0, 2]), (-2.0, vec![0, 0])]);
        let line = CompiledPoly::from_terms(2, [(1.0, vec![1, 0]), (-1.0, vec![0, 1])]);
        let sys = System::new(2, vec![circle, line]);
        let r = gauss_newton(&sys, &[1.0, 1.0], vec![3.0, 0.5], NewtonConfig::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-10 && (r.x[1] - 1.0).abs() < 1e-10);
        assert!(r.history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rank() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(numeric_rank(&m, 1e-8), 1);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(splitmix(1, 0), splitmix(1, 1));
        assert_ne!(splitmix(1, 0), splitmix(2, 0));
    }
}
