//! Equivariant sections `Γ(E_μ)` and the principal series `π_{μ,λ}` of the
//! double on truncated windows.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::dkq::{self, Dk, Multiplier};
use crate::double::{self, YdReport};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::modules::mat_to_text;
use crate::okq::{self, Coef, Pw};
use crate::scalar::{HalfInt, Lambda, Scalar};

/// The matrix coefficients `⟨v^i|·|v_{j_μ}⟩_m` with `v_{j_μ}` of weight `μ`,
/// for `|μ| ≤ m ≤ M`, `m ≡ μ mod 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    mu: HalfInt,
    window: HalfInt,
    spins: Vec<HalfInt>,
    offsets: Vec<usize>,
    dim: usize,
}

impl SectionSpace {
    pub fn new(mu: HalfInt, window: HalfInt) -> Result<Self> {
        if window < mu.abs() {
            return Err(Error::InvalidArgument(format!("window {window} is below |mu| = {}", mu.abs())));
        }
        let spins: Vec<HalfInt> = HalfInt::range_step_one(mu.abs(), window).collect();
        let mut offsets = Vec::with_capacity(spins.len());
        let mut dim = 0;
        for m in &spins {
            offsets.push(dim);
            dim += m.dim();
        }
        Ok(SectionSpace { mu, window, spins, offsets, dim })
    }

    pub fn mu(&self) -> HalfInt {
        self.mu
    }

    pub fn window(&self) -> HalfInt {
        self.window
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the weight-`μ` basis vector of `V(m)`.
    pub fn column_index(&self, m: HalfInt) -> usize {
        (m - self.mu).twice() as usize / 2
    }

    /// Positions of the spin-`m` block, empty if `m` is not a spin of the space.
    pub fn block(&self, m: HalfInt) -> Range<usize> {
        match self.spins.iter().position(|s| *s == m) {
            Some(k) => self.offsets[k]..self.offsets[k] + m.dim(),
            None => 0..0,
        }
    }

    pub fn basis(&self) -> Vec<Coef> {
        self.spins.iter().flat_map(|&m| (0..m.dim()).map(move |i| Coef::new(m, i, self.column_index(m)))).collect()
    }

    pub fn vector<F: Scalar>(&self, k: usize) -> Pw<F> {
        Pw::coef(self.basis()[k])
    }

    /// Coordinates of `f` in the basis, ignoring spins above the window, and the
    /// largest coefficient of `f` lying outside `Γ(E_μ)`.
    pub fn coordinates<F: Scalar>(&self, f: &Pw<F>) -> (Vec<F>, f64) {
        let mut out = vec![F::zero(); self.dim];
        let mut off = 0.0_f64;
        for (&m, a) in f.components() {
            let r = self.block(m);
            let j = if r.is_empty() { None } else { Some(self.column_index(m)) };
            for i in 0..m.dim() {
                for c in 0..m.dim() {
                    let v = &a[(i, c)];
                    if v.is_zero() {
                        continue;
                    }
                    match j {
                        Some(j) if j == c => out[r.start + i] = v.clone(),
                        _ if m > self.window && (m - self.mu).is_integer() && c == (m - self.mu).twice() as usize / 2 => {}
                        _ => off = off.max(v.magnitude()),
                    }
                }
            }
        }
        (out, off)
    }

    /// Largest deviation from `f_(1) (K, f_(2)) = q^{2μ} f` over the basis.
    pub fn equivariance_residual<F: Scalar>(&self, ctx: &F::Ctx) -> f64 {
        let k = Multiplier::<F>::QPowH(1);
        let chi = F::k_eigen(ctx, self.mu);
        let mut worst = 0.0_f64;
        for k_idx in 0..self.dim {
            let f = self.vector::<F>(k_idx);
            let d = dkq::hit_left(ctx, &k, &f).sub(&f.scale(&chi));
            for (_, a) in d.components() {
                for v in a.entries() {
                    if !v.is_zero() {
                        worst = worst.max(v.magnitude());
                    }
                }
            }
        }
        worst
    }

    /// Basis positions whose spin is at most `window - growth`; images of these
    /// vectors under an operator of that growth fit in the window.
    pub fn interior(&self, growth: HalfInt) -> Vec<usize> {
        let top = self.window - growth;
        self.spins.iter().filter(|m| **m <= top).flat_map(|&m| self.block(m)).collect()
    }

    /// `φ(f_a^* f_b)` on the basis.
    pub fn gram<F: Scalar>(&self, ctx: &F::Ctx) -> Mat<F> {
        let basis: Vec<Pw<F>> = (0..self.dim).map(|k| self.vector(k)).collect();
        Mat::from_fn(self.dim, self.dim, |a, b| dkq::inner(ctx, &basis[a], &basis[b]))
    }
}

/// Which leg of `Δ^(2) a = a_(1) ⊗ a_(2) ⊗ a_(3)` is multiplied on the left,
/// which is paired with `q^{(λ+1)H}` and which is multiplied on the right
/// through the antipode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Legs {
    pub left: usize,
    pub pair: usize,
    pub right: usize,
}

impl Legs {
    /// `(q^{(λ+1)H}, a_(2)) a_(1) f S(a_(3))`.
    pub const SELECTED: Legs = Legs { left: 0, pair: 1, right: 2 };

    pub fn all() -> Vec<Legs> {
        let mut out = Vec::new();
        for left in 0..3 {
            for pair in 0..3 {
                if pair != left {
                    out.push(Legs { left, pair, right: 3 - left - pair });
                }
            }
        }
        out
    }
}

impl std::fmt::Display for Legs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "left={} pair={} right={}", self.left, self.pair, self.right)
    }
}

/// A matrix on a section-space window together with the spin shift it can
/// cause. Columns in `space.interior(growth)` are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalOp<F> {
    pub mat: Mat<F>,
    pub growth: HalfInt,
    /// Largest coefficient produced outside `Γ(E_μ)`; zero for a valid action.
    pub off_section: f64,
}

impl<F: Scalar> PrincipalOp<F> {
    pub fn interior(&self, space: &SectionSpace) -> Vec<usize> {
        space.interior(self.growth)
    }

    /// Trace of the spin-`m` diagonal block.
    pub fn block_trace(&self, space: &SectionSpace, m: HalfInt) -> F {
        space.block(m).fold(F::zero(), |acc, k| acc + self.mat[(k, k)].clone())
    }
}

/// `π(x) f = f ◁ S(x)`: the spin-`m` block is `S(x)_m^T`.
pub fn pi_dk<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, x: &Multiplier<F>) -> Result<PrincipalOp<F>> {
    if let Multiplier::Dk(d) = x {
        if let Some(top) = d.spins().into_iter().filter(|m| (*m - space.mu).is_integer() && *m >= space.mu.abs()).max() {
            if top > space.window {
                return Err(Error::WindowTooSmall(format!("x has spin {top}, window is {}", space.window)));
            }
        }
    }
    Ok(pi_dk_truncated(ctx, space, x))
}

/// [`pi_dk`] with the part of `x` above the window dropped.
pub fn pi_dk_truncated<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, x: &Multiplier<F>) -> PrincipalOp<F> {
    let sx = dkq::antipode_multiplier(ctx, x, space.spins());
    let mut mat = Mat::zeros(space.dim, space.dim);
    for &m in space.spins() {
        if let Some(b) = sx.at(ctx, m) {
            let r = space.block(m);
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    mat[(r.start + i, r.start + j)] = b[(j, i)].clone();
                }
            }
        }
    }
    PrincipalOp { mat, growth: HalfInt::ZERO, off_section: 0.0 }
}

/// `π(a) f = (q^{(λ+1)H}, a_(p)) a_(l) f S(a_(r))` for the leg assignment `legs`.
pub fn pi_pw<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, lambda: Lambda, a: &Pw<F>, legs: Legs) -> Result<PrincipalOp<F>> {
    let comps = pi_pw_components(ctx, space, a, legs);
    let mut mat = Mat::zeros(space.dim, space.dim);
    for (twice_nu, m) in &comps.parts {
        mat.add_assign_scaled(m, &F::q_pow_lambda(ctx, lambda, *twice_nu)?);
    }
    Ok(PrincipalOp { mat, growth: comps.growth, off_section: comps.off_section })
}

/// `π(a)` split by the weight `ν` of the paired leg: `π_{μ,λ}(a) = Σ_ν q^{(λ+1)2ν} A_ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct PwComponents<F> {
    /// `(2ν, A_ν)`, increasing in `ν`.
    pub parts: Vec<(i64, Mat<F>)>,
    pub growth: HalfInt,
    pub off_section: f64,
}

pub fn pi_pw_components<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, a: &Pw<F>, legs: Legs) -> PwComponents<F> {
    let mut pieces: BTreeMap<i64, Vec<(Pw<F>, Pw<F>)>> = BTreeMap::new();
    for (c, s) in a.terms() {
        let n = c.m;
        let d = n.dim();
        for k in 0..d {
            for l in 0..d {
                // a_(1) = c_ik, a_(2) = c_kl, a_(3) = c_lj
                let leg = [Coef::new(n, c.i, k), Coef::new(n, k, l), Coef::new(n, l, c.j)];
                let p = leg[legs.pair];
                if p.i != p.j {
                    continue;
                }
                let twice_nu = (n - HalfInt::from_int(p.i as i64)).twice();
                let left = Pw::term(leg[legs.left], s.clone());
                let right = okq::antipode(ctx, &Pw::coef(leg[legs.right]));
                pieces.entry(twice_nu).or_default().push((left, right));
            }
        }
    }
    let growth = a.max_spin().map_or(HalfInt::ZERO, |m| m + m);
    let mut off = 0.0_f64;
    let mut parts = Vec::new();
    for (twice_nu, ps) in pieces {
        let mut mat = Mat::zeros(space.dim, space.dim);
        for col in 0..space.dim {
            let f = space.vector::<F>(col);
            let mut img = Pw::zero();
            for (l, r) in &ps {
                img = img.add(&l.mul(ctx, &f).mul(ctx, r));
            }
            let (v, o) = space.coordinates(&img);
            off = off.max(o);
            for (row, x) in v.into_iter().enumerate() {
                mat[(row, col)] = x;
            }
        }
        parts.push((twice_nu, mat));
    }
    PwComponents { parts, growth, off_section: off }
}

/// `π_{μ,λ}` of a normal-ordered double element `Σ x ⋈ a`, as `Σ π(x) π(a)`.
pub fn pi_double<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, lambda: Lambda, s: &double::Dbl<F>) -> Result<PrincipalOp<F>> {
    let mut mat = Mat::zeros(space.dim, space.dim);
    let mut growth = HalfInt::ZERO;
    let mut off = 0.0_f64;
    for (c, x) in s.terms() {
        let px = pi_dk_truncated(ctx, space, &Multiplier::Dk(x.clone()));
        let pa = pi_pw(ctx, space, lambda, &Pw::coef(*c), Legs::SELECTED)?;
        growth = growth.max(pa.growth);
        off = off.max(pa.off_section);
        mat = mat.add(&px.mat.mul(&pa.mat));
    }
    Ok(PrincipalOp { mat, growth, off_section: off })
}

/// The compatibility relation for `(π_{μ,λ}(x), π_{μ,λ}(a))` on interior columns.
pub fn yd_report<F: Scalar>(
    ctx: &F::Ctx,
    space: &SectionSpace,
    lambda: Lambda,
    legs: Legs,
    xs: &[Dk<F>],
    fs: &[Pw<F>],
    tol: f64,
) -> Result<YdReport> {
    let growth = fs.iter().filter_map(|a| a.max_spin()).max().map_or(HalfInt::ZERO, |m| m + m);
    let cols = space.interior(growth);
    let mut cache: BTreeMap<Coef, Mat<F>> = BTreeMap::new();
    for a in fs {
        for (c, _) in a.terms() {
            for k in 0..c.m.dim() {
                for l in 0..c.m.dim() {
                    let e = Coef::new(c.m, k, l);
                    if !cache.contains_key(&e) {
                        cache.insert(e, pi_pw(ctx, space, lambda, &Pw::coef(e), legs)?.mat);
                    }
                }
            }
        }
    }
    let pw_mat = |a: &Pw<F>| {
        let mut m = Mat::zeros(space.dim, space.dim);
        for (c, s) in a.terms() {
            m = m.add(&cache[&c].scale(&s));
        }
        m
    };
    double::yd_check(ctx, |x| pi_dk_truncated(ctx, space, &Multiplier::Dk(x.clone())).mat, pw_mat, xs, fs, &cols, tol)
}

/// `π(u^*)^† G - G π(u)` on interior rows and columns, with `G` the Gram matrix;
/// zero exactly when `⟨π(u^*) f, g⟩ = ⟨f, π(u) g⟩` there.
pub fn adjointness_residual<F: Scalar>(space: &SectionSpace, gram: &Mat<F>, op: &PrincipalOp<F>, op_star: &PrincipalOp<F>) -> f64 {
    let lhs = op_star.mat.adjoint().mul(gram);
    let rhs = gram.mul(&op.mat);
    let idx = space.interior(op.growth.max(op_star.growth));
    lhs.submatrix(&idx, &idx).max_diff(&rhs.submatrix(&idx, &idx))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub residual: f64,
    pub checked: usize,
    pub worst: Option<String>,
}

/// Adjointness of `π_{μ,λ}` on the generators: the blocks `e^m_ij` of
/// `D(K_q)` inside the window and the coefficients of `V(1/2)`.
pub fn unitarity_check<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, lambda: Lambda) -> Result<UnitarityReport> {
    let gram = space.gram::<F>(ctx);
    let mut report = UnitarityReport { residual: 0.0, checked: 0, worst: None };
    let mut record = |name: String, r: f64| {
        report.checked += 1;
        if r > report.residual || report.worst.is_none() {
            report.residual = report.residual.max(r);
            report.worst = Some(name);
        }
    };
    for &m in space.spins() {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let x = Dk::<F>::unit_matrix(m, i, j);
                let op = pi_dk(ctx, space, &Multiplier::Dk(x.clone()))?;
                let op_star = pi_dk(ctx, space, &Multiplier::Dk(dkq::star(ctx, &x)))?;
                record(format!("e^{m}_{i}{j}"), adjointness_residual(space, &gram, &op, &op_star));
            }
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            let a = Pw::<F>::coef(Coef::new(HalfInt::HALF, i, j));
            let op = pi_pw(ctx, space, lambda, &a, Legs::SELECTED)?;
            let op_star = pi_pw(ctx, space, lambda, &okq::star(ctx, &a), Legs::SELECTED)?;
            record(format!("c^1/2_{i}{j}"), adjointness_residual(space, &gram, &op, &op_star));
        }
    }
    Ok(report)
}

/// Heuristic irreducibility diagnostic: the dimension of the operators that are
/// scalar on each spin block and commute with `π(a)`, `a` in `V(1/2)`, on the
/// interior of the window. The `D(K_q)` action already forces block scalars,
/// so this counts the connected spin blocks under the `O(K_q)` action.
pub fn commutant_dimension<F: Scalar>(ctx: &F::Ctx, space: &SectionSpace, lambda: Lambda, tol: f64) -> Result<usize> {
    let n = space.spins().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], k: usize) -> usize {
        if p[k] == k {
            k
        } else {
            let r = find(p, p[k]);
            p[k] = r;
            r
        }
    }
    let interior = space.interior(HalfInt::ONE);
    for i in 0..2 {
        for j in 0..2 {
            let op = pi_pw(ctx, space, lambda, &Pw::<F>::coef(Coef::new(HalfInt::HALF, i, j)), Legs::SELECTED)?;
            for (a, &ma) in space.spins().iter().enumerate() {
                for (b, &mb) in space.spins().iter().enumerate() {
                    let touches = space.block(mb).filter(|c| interior.contains(c)).any(|c| space.block(ma).any(|r| op.mat[(r, c)].magnitude() > tol));
                    if touches {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        parent[ra] = rb;
                    }
                }
            }
        }
    }
    Ok((0..n).filter(|&k| find(&mut parent, k) == k).count())
}

/// JSON form of an operator with its window metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalOpJson {
    pub mu: String,
    pub window: String,
    pub spins: Vec<String>,
    pub growth: String,
    pub interior: Vec<usize>,
    pub matrix: Vec<Vec<String>>,
}

impl<F: Scalar> PrincipalOp<F> {
    pub fn to_json(&self, space: &SectionSpace) -> PrincipalOpJson {
        PrincipalOpJson {
            mu: space.mu.to_string(),
            window: space.window.to_string(),
            spins: space.spins.iter().map(|m| m.to_string()).collect(),
            growth: self.growth.to_string(),
            interior: self.interior(space),
            matrix: mat_to_text(&self.mat),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, RatFunc};
    use crate::uq::Pbw;

    const C: ExactCtx = ExactCtx;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn section_space_shapes() {
        let s = SectionSpace::new(h(0), h(2)).unwrap();
        assert_eq!(s.spins(), &[h(0), h(2)]);
        assert_eq!(s.dim(), 4);
        assert_eq!(SectionSpace::new(h(1), h(1)).unwrap().dim(), 2);
        let unit = SectionSpace::new(h(0), h(0)).unwrap();
        assert_eq!(unit.basis(), vec![Coef::new(h(0), 0, 0)]);
        assert!(SectionSpace::new(h(2), h(1)).is_err());
        assert_eq!(SectionSpace::new(h(-1), h(3)).unwrap().equivariance_residual::<RatFunc>(&C), 0.0);
    }

    #[test]
    fn unit_acts_trivially() {
        let s = SectionSpace::new(h(0), h(2)).unwrap();
        for legs in Legs::all() {
            let op = pi_pw::<RatFunc>(&C, &s, Lambda::Half(h(-2)), &Pw::unit(), legs).unwrap();
            assert_eq!(op.mat, Mat::identity(s.dim()));
        }
    }

    #[test]
    fn pi_dk_examples() {
        let s = SectionSpace::new(h(0), h(2)).unwrap();
        let p = pi_dk::<RatFunc>(&C, &s, &Multiplier::Dk(Dk::identity_at(h(0)))).unwrap();
        let mut e = Mat::zeros(4, 4);
        e[(0, 0)] = RatFunc::one();
        assert_eq!(p.mat, e);
        let k = pi_dk::<RatFunc>(&C, &s, &Multiplier::Pbw(Pbw::k())).unwrap();
        let want = [0, 2, 0, -2].iter().map(|t| RatFunc::v_pow(-2 * t)).collect();
        assert_eq!(k.mat, Mat::diag(want));
        let low = pi_dk::<RatFunc>(&C, &SectionSpace::new(h(2), h(4)).unwrap(), &Multiplier::Dk(Dk::identity_at(h(1)))).unwrap();
        assert!(low.mat.trace().is_zero());
        assert!(pi_dk::<RatFunc>(&C, &s, &Multiplier::Dk(Dk::identity_at(h(4)))).is_err());
    }
}
