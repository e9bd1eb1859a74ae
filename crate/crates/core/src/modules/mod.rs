//! Finite-dimensional weight modules: `V(m)`, truncated Verma modules, tensor
//! products and contragredients.

mod decompose;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{qnum, qnum_complex, HalfInt, Num, NumericCtx, Scalar};
use crate::uq::Pbw;

pub use decompose::{clebsch_gordan, decompose, highest_weight_vectors, Decomposition, Summand};

#[derive(Clone, Debug, PartialEq)]
pub enum Label {
    Irreducible(HalfInt),
    Verma { m: HalfInt, depth: usize },
    /// Weights of a complex Verma module are stored relative to `m`.
    VermaComplex { m: Complex64, depth: usize },
    Tensor(Box<Label>, Box<Label>),
    Dual(Box<Label>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Irreducible(m) => write!(f, "V({m})"),
            Label::Verma { m, depth } => write!(f, "M({m})[{depth}]"),
            Label::VermaComplex { m, depth } => write!(f, "M({m})[{depth}]"),
            Label::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
            Label::Dual(a) => write!(f, "{a}*"),
        }
    }
}

/// A module given by its weight basis and generator matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModule<F> {
    pub label: Label,
    /// `H/2`-eigenvalue of each basis vector.
    pub weights: Vec<HalfInt>,
    pub e: Mat<F>,
    pub f: Mat<F>,
    pub k: Mat<F>,
    pub k_inv: Mat<F>,
}

/// Residuals of the defining relations on a module.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub checks: Vec<(&'static str, f64)>,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.1).fold(0.0, f64::max)
    }

    pub fn ok(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| c.1 <= tol)
    }
}

impl<F: Scalar> WeightModule<F> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Basis indices of weight `w`.
    pub fn weight_indices(&self, w: HalfInt) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    /// Distinct weights, highest first.
    pub fn distinct_weights(&self) -> Vec<HalfInt> {
        let mut w = self.weights.clone();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.dedup();
        w
    }

    /// Matrix of an arbitrary element of `U_q(sl2)`.
    pub fn act(&self, x: &Pbw<F>) -> Mat<F> {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        let mut fp = vec![Mat::identity(n)];
        let mut ep = vec![Mat::identity(n)];
        for (m, c) in x.terms() {
            while fp.len() <= m.f as usize {
                let next = fp.last().unwrap().mul(&self.f);
                fp.push(next);
            }
            while ep.len() <= m.e as usize {
                let next = ep.last().unwrap().mul(&self.e);
                ep.push(next);
            }
            let kd = Mat::diag(
                (0..n)
                    .map(|i| {
                        let base = if m.k >= 0 { &self.k } else { &self.k_inv };
                        base[(i, i)].pow(m.k.unsigned_abs())
                    })
                    .collect(),
            );
            let t = fp[m.f as usize].mul(&kd).mul(&ep[m.e as usize]);
            out.add_assign_scaled(&t, c);
        }
        out
    }

    /// Checks `K E K^-1 = q^2 E`, `K F K^-1 = q^-2 F`, `K K^-1 = 1` and
    /// `[E, F] = (K - K^-1)/(q - q^-1)` on the first `cols` basis vectors
    /// (all of them when `None`).
    pub fn check_relations(&self, ctx: &F::Ctx, cols: Option<usize>) -> RelationReport {
        let n = self.dim();
        let c = cols.unwrap_or(n).min(n);
        let rows: Vec<usize> = (0..n).collect();
        let cs: Vec<usize> = (0..c).collect();
        let restrict = |m: &Mat<F>| m.submatrix(&rows, &cs);
        let q2 = F::v_pow(ctx, 4);
        let qm2 = F::v_pow(ctx, -4);
        let kek = self.k.mul(&self.e).mul(&self.k_inv);
        let kfk = self.k.mul(&self.f).mul(&self.k_inv);
        let kk = self.k.mul(&self.k_inv);
        let comm = self.e.mul(&self.f).sub(&self.f.mul(&self.e));
        let d = (F::v_pow(ctx, 2) - F::v_pow(ctx, -2)).inv().expect("q != 1");
        let rhs = self.k.sub(&self.k_inv).scale(&d);
        let res = |a: &Mat<F>, b: &Mat<F>| restrict(a).max_diff(&restrict(b));
        RelationReport {
            checks: vec![
                ("KEK^-1 = q^2 E", res(&kek, &self.e.scale(&q2))),
                ("KFK^-1 = q^-2 F", res(&kfk, &self.f.scale(&qm2))),
                ("KK^-1 = 1", res(&kk, &Mat::identity(n))),
                ("[E,F] = (K-K^-1)/(q-q^-1)", res(&comm, &rhs)),
            ],
        }
    }

    fn k_diag(ctx: &F::Ctx, weights: &[HalfInt]) -> (Mat<F>, Mat<F>) {
        let k = Mat::diag(weights.iter().map(|w| F::k_eigen(ctx, *w)).collect());
        let ki = Mat::diag(weights.iter().map(|w| F::k_eigen(ctx, -*w)).collect());
        (k, ki)
    }
}

/// `V(m)` in the basis `v_m, v_{m-1}, ..., v_{-m}` with `F v_mu = v_{mu-1}` and
/// `E v_mu = [m-mu][m+mu+1] v_{mu+1}`.
pub fn irreducible<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Result<WeightModule<F>> {
    if m.is_negative() {
        return Err(Error::InvalidArgument(format!("spin must be >= 0, got {m}")));
    }
    let mut module = highest_weight_window(ctx, m, m.dim());
    module.label = Label::Irreducible(m);
    Ok(module)
}

/// Memoized [`irreducible`].
pub fn irreducible_cached<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Result<std::sync::Arc<WeightModule<F>>> {
    crate::memo::cached("irreducible", F::ctx_key(ctx), vec![m.twice()], || irreducible::<F>(ctx, m))
}

/// Squared norms `|v_mu|^2` of the basis of `V(m)` for the inner product with
/// `<X u, w> = <u, X^* w>`, normalized by `|v_m|^2 = 1`. All are in `Q(v)`.
pub fn invariant_norms<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Vec<F> {
    let mut out = vec![F::one()];
    for i in 1..m.dim() as i64 {
        // <E v_i, v_{i-1}> = <v_i, K F v_{i-1}>
        let e = qnum::<F>(ctx, HalfInt::from_int(i)) * qnum::<F>(ctx, HalfInt::from_twice(2 * m.twice() - 2 * i + 2));
        let mu = m - HalfInt::from_int(i);
        let prev = out.last().unwrap().clone();
        out.push(prev * e * F::k_eigen(ctx, -mu));
    }
    out
}

/// Adjoint of an operator on `V(m)` for the invariant inner product.
pub fn invariant_adjoint<F: Scalar>(ctx: &F::Ctx, m: HalfInt, t: &Mat<F>) -> Mat<F> {
    let n = invariant_norms::<F>(ctx, m);
    let a = t.adjoint();
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].clone() * n[j].clone() * n[i].inv().expect("nonzero norm"))
}

fn highest_weight_window<F: Scalar>(ctx: &F::Ctx, m: HalfInt, n: usize) -> WeightModule<F> {
    let weights: Vec<HalfInt> = (0..n as i64).map(|i| m - HalfInt::from_int(i)).collect();
    let mut e = Mat::zeros(n, n);
    let mut f = Mat::zeros(n, n);
    for i in 1..n {
        let i64_ = i as i64;
        f[(i, i - 1)] = F::one();
        // mu = m - i: [m - mu] [m + mu + 1] = [i] [2m - i + 1]
        e[(i - 1, i)] = qnum::<F>(ctx, HalfInt::from_int(i64_))
            * qnum::<F>(ctx, HalfInt::from_twice(2 * m.twice() - 2 * i64_ + 2));
    }
    let (k, k_inv) = WeightModule::<F>::k_diag(ctx, &weights);
    WeightModule { label: Label::Verma { m, depth: n }, weights, e, f, k, k_inv }
}

/// The first `depth` vectors `v_m, ..., v_{m-depth+1}` of the Verma module
/// `M(m)`. `F` on the last vector leaves the window, so relations only hold on
/// the span of the first `depth - 1` vectors.
pub fn verma<F: Scalar>(ctx: &F::Ctx, m: HalfInt, depth: usize) -> Result<WeightModule<F>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    Ok(highest_weight_window(ctx, m, depth))
}

/// Truncated Verma module with complex highest weight.
pub fn verma_complex(ctx: &NumericCtx, m: Complex64, depth: usize) -> Result<WeightModule<Num>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let weights: Vec<HalfInt> = (0..depth as i64).map(|i| HalfInt::from_int(-i)).collect();
    let mut e = Mat::zeros(depth, depth);
    let mut f = Mat::zeros(depth, depth);
    let lq = ctx.q.ln();
    for i in 1..depth {
        let fi = i as f64;
        f[(i, i - 1)] = Num::one();
        e[(i - 1, i)] = qnum_complex(ctx, Complex64::new(fi, 0.0)) * qnum_complex(ctx, 2.0 * m - fi + 1.0);
    }
    let kk = |s: f64| -> Vec<Num> { (0..depth).map(|i| Num((s * 2.0 * (m - i as f64) * lq).exp())).collect() };
    Ok(WeightModule {
        label: Label::VermaComplex { m, depth },
        weights,
        e,
        f,
        k: Mat::diag(kk(1.0)),
        k_inv: Mat::diag(kk(-1.0)),
    })
}

/// `a ⊗ b` with `E = E⊗K + 1⊗E`, `F = F⊗1 + K^-1⊗F`, `K = K⊗K`.
pub fn tensor<F: Scalar>(a: &WeightModule<F>, b: &WeightModule<F>) -> WeightModule<F> {
    let ia = Mat::identity(a.dim());
    let ib = Mat::identity(b.dim());
    let weights = a.weights.iter().flat_map(|wa| b.weights.iter().map(move |wb| *wa + *wb)).collect();
    WeightModule {
        label: Label::Tensor(Box::new(a.label.clone()), Box::new(b.label.clone())),
        weights,
        e: a.e.kron(&b.k).add(&ia.kron(&b.e)),
        f: a.f.kron(&ib).add(&a.k_inv.kron(&b.f)),
        k: a.k.kron(&b.k),
        k_inv: a.k_inv.kron(&b.k_inv),
    }
}

/// Contragredient module, `X ↦ π(S X)^T` on the dual basis.
pub fn dual<F: Scalar>(a: &WeightModule<F>) -> WeightModule<F> {
    let m1 = -F::one();
    WeightModule {
        label: Label::Dual(Box::new(a.label.clone())),
        weights: a.weights.iter().map(|w| -*w).collect(),
        // S(E) = -E K^-1, S(F) = -K F, S(K) = K^-1
        e: a.e.mul(&a.k_inv).scale(&m1).transpose(),
        f: a.k.mul(&a.f).scale(&m1).transpose(),
        k: a.k_inv.transpose(),
        k_inv: a.k.transpose(),
    }
}

/// Solves `rho(X) T = T pi(X)` for the given generator images, with `T`
/// restricted to entries where the diagonal `K` images agree. The first pair
/// must be the images of `K`. Returns the kernel basis.
pub fn intertwiners<F: Scalar>(rho: &[&Mat<F>], pi: &[&Mat<F>]) -> Vec<Mat<F>> {
    let (rk, pk) = (rho[0], pi[0]);
    let n = rk.rows();
    let p = pk.rows();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..p).map(move |j| (i, j)))
        .filter(|&(i, j)| rk[(i, i)].approx_eq(&pk[(j, j)], 1e-9))
        .collect();
    let mut eqs: Vec<Vec<F>> = Vec::new();
    for (r, s) in rho.iter().zip(pi) {
        for a in 0..n {
            for b in 0..p {
                // (rho T - T pi)_{ab} = sum_c rho_ac T_cb - T_ac pi_cb
                let row: Vec<F> = unknowns
                    .iter()
                    .map(|&(c, d)| {
                        let mut x = F::zero();
                        if d == b {
                            x = x + r[(a, c)].clone();
                        }
                        if c == a {
                            x = x - s[(d, b)].clone();
                        }
                        x
                    })
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let kernel = if eqs.is_empty() {
        (0..unknowns.len()).map(|i| (0..unknowns.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
    } else {
        Mat::from_rows(eqs).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut t = Mat::zeros(n, p);
            for (x, &(i, j)) in v.into_iter().zip(&unknowns) {
                t[(i, j)] = x;
            }
            t
        })
        .collect()
}

/// JSON form: weights as strings and generator matrices of scalar strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub label: String,
    pub weights: Vec<String>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<String>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<String>>,
}

pub fn mat_to_text<F: Scalar>(m: &Mat<F>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(Scalar::to_text).collect()).collect()
}

pub fn mat_from_text<F: Scalar>(rows: &[Vec<String>]) -> Result<Mat<F>> {
    let parsed: Result<Vec<Vec<F>>> = rows.iter().map(|r| r.iter().map(|s| F::parse_text(s)).collect()).collect();
    let parsed = parsed?;
    if parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    Ok(Mat::from_rows(parsed))
}

impl<F: Scalar> WeightModule<F> {
    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            label: self.label.to_string(),
            weights: self.weights.iter().map(|w| w.to_string()).collect(),
            e: mat_to_text(&self.e),
            f: mat_to_text(&self.f),
            k: mat_to_text(&self.k),
        }
    }

    /// Rebuilds generator matrices from JSON; the label is kept as text only.
    pub fn matrices_from_json(j: &ModuleJson) -> Result<(Vec<HalfInt>, Mat<F>, Mat<F>, Mat<F>)> {
        let weights: Result<Vec<HalfInt>> = j.weights.iter().map(|w| w.parse()).collect();
        Ok((weights?, mat_from_text(&j.e)?, mat_from_text(&j.f)?, mat_from_text(&j.k)?))
    }
}
