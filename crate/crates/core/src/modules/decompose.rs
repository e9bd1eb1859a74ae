//! Highest-weight vectors and decompositions into irreducibles.

use std::sync::Arc;

use super::{irreducible, tensor, WeightModule};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::memo;
use crate::scalar::{ExactCtx, HalfInt, Mode, RatFunc, Scalar};

/// One irreducible summand: `iota` is `dim x (2s+1)`, `proj` is `(2s+1) x dim`,
/// both in the standard basis of `V(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand<F> {
    pub spin: HalfInt,
    pub iota: Mat<F>,
    pub proj: Mat<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F> {
    pub summands: Vec<Summand<F>>,
}

impl<F: Scalar> Decomposition<F> {
    pub fn spins(&self) -> Vec<HalfInt> {
        self.summands.iter().map(|s| s.spin).collect()
    }

    /// The unique summand of spin `s`, for multiplicity-free decompositions.
    pub fn summand(&self, s: HalfInt) -> Option<&Summand<F>> {
        self.summands.iter().find(|x| x.spin == s)
    }

    /// Checks `P_k ι_j = δ_kj` and `Σ ι_k P_k = 1`; returns the largest residual.
    pub fn completeness_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let n = self.summands.first().map_or(0, |s| s.iota.rows());
        let mut sum = Mat::zeros(n, n);
        for (a, sa) in self.summands.iter().enumerate() {
            sum = sum.add(&sa.iota.mul(&sa.proj));
            for (b, sb) in self.summands.iter().enumerate() {
                let p = sa.proj.mul(&sb.iota);
                let expect = if a == b { Mat::identity(p.rows()) } else { Mat::zeros(p.rows(), p.cols()) };
                worst = worst.max(p.max_diff(&expect));
            }
        }
        worst.max(sum.max_diff(&Mat::identity(n)))
    }

    /// Checks that each inclusion intertwines `E`, `F`, `K` between `V(s)` and the module.
    pub fn intertwining_residual(&self, ctx: &F::Ctx, module: &WeightModule<F>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for s in &self.summands {
            let v = irreducible::<F>(ctx, s.spin)?;
            for (a, b) in [(&module.e, &v.e), (&module.f, &v.f), (&module.k, &v.k)] {
                worst = worst.max(a.mul(&s.iota).max_diff(&s.iota.mul(b)));
            }
        }
        Ok(worst)
    }
}

/// Basis of `ker E` in each weight space, highest weight first.
pub fn highest_weight_vectors<F: Scalar>(module: &WeightModule<F>) -> Vec<(HalfInt, Vec<F>)> {
    let n = module.dim();
    let mut out = Vec::new();
    for w in module.distinct_weights() {
        let src = module.weight_indices(w);
        let dst = module.weight_indices(w + HalfInt::ONE);
        let kernel: Vec<Vec<F>> = if dst.is_empty() {
            (0..src.len()).map(|i| (0..src.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
        } else {
            module.e.submatrix(&dst, &src).kernel()
        };
        for kv in kernel {
            let mut v = vec![F::zero(); n];
            for (c, &i) in kv.into_iter().zip(&src) {
                v[i] = c;
            }
            out.push((w, v));
        }
    }
    out
}

/// Decomposes a semisimple finite-dimensional module into copies of `V(s)`.
///
/// Inclusions send `v_mu` of `V(s)` to `F^(s-mu) h` for a highest-weight vector
/// `h`; projections are the dual basis, computed weight space by weight space.
pub fn decompose<F: Scalar>(module: &WeightModule<F>) -> Result<Decomposition<F>> {
    let n = module.dim();
    let mut cols: Vec<(usize, HalfInt, Vec<F>)> = Vec::new();
    let mut spins = Vec::new();
    for (idx, (w, h)) in highest_weight_vectors(module).into_iter().enumerate() {
        if w.is_negative() {
            return Err(Error::NotRepresentable(format!("highest weight {w} is negative; module is not semisimple")));
        }
        let mut v = h;
        for j in 0..w.dim() {
            cols.push((idx, w - HalfInt::from_int(j as i64), v.clone()));
            v = module.f.mul_vec(&v);
        }
        if v.iter().any(|x| x.magnitude() > 1e-9) {
            return Err(Error::NotRepresentable(format!("F-string from weight {w} does not terminate")));
        }
        spins.push(w);
    }
    if cols.len() != n {
        return Err(Error::Internal(format!("decomposition found {} of {} dimensions", cols.len(), n)));
    }
    let mut iotas: Vec<Mat<F>> = spins.iter().map(|s| Mat::zeros(n, s.dim())).collect();
    let mut projs: Vec<Mat<F>> = spins.iter().map(|s| Mat::zeros(s.dim(), n)).collect();
    for w in module.distinct_weights() {
        let idx = module.weight_indices(w);
        let here: Vec<&(usize, HalfInt, Vec<F>)> = cols.iter().filter(|c| c.1 == w).collect();
        if here.len() != idx.len() {
            return Err(Error::Internal(format!("weight {w}: {} vectors for {} dimensions", here.len(), idx.len())));
        }
        let b = Mat::from_fn(idx.len(), here.len(), |r, c| here[c].2[idx[r]].clone());
        let binv = b.inverse()?;
        for (c, (si, mu, v)) in here.iter().enumerate() {
            let pos = ((spins[*si] - *mu).twice() / 2) as usize;
            for i in 0..n {
                iotas[*si][(i, pos)] = v[i].clone();
            }
            for (r, &i) in idx.iter().enumerate() {
                projs[*si][(pos, i)] = binv[(c, r)].clone();
            }
        }
    }
    let summands = spins
        .into_iter()
        .zip(iotas.into_iter().zip(projs))
        .map(|(spin, (iota, proj))| Summand { spin, iota, proj })
        .collect();
    Ok(Decomposition { summands })
}

/// Decomposition of `V(m) ⊗ V(m2)`, memoized per context.
pub fn clebsch_gordan<F: Scalar>(ctx: &F::Ctx, m: HalfInt, m2: HalfInt) -> Result<Arc<Decomposition<F>>> {
    memo::cached("cg", F::ctx_key(ctx), vec![m.twice(), m2.twice()], || {
        if F::MODE == Mode::Numeric {
            // kernels of numeric weight-space maps lose rank at large spin
            let exact = clebsch_gordan::<RatFunc>(&ExactCtx, m, m2)?;
            let summands = exact
                .summands
                .iter()
                .map(|s| Ok(Summand { spin: s.spin, iota: s.iota.lift(ctx)?, proj: s.proj.lift(ctx)? }))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Decomposition { summands });
        }
        let t = tensor(&irreducible::<F>(ctx, m)?, &irreducible::<F>(ctx, m2)?);
        decompose(&t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::verma;
    use crate::scalar::{ExactCtx, RatFunc};

    const C: ExactCtx = ExactCtx;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn half_times_half() {
        let d = clebsch_gordan::<RatFunc>(&C, h(1), h(1)).unwrap();
        assert_eq!(d.spins(), vec![h(2), h(0)]);
        // spin 0: v+ ⊗ v- - c v- ⊗ v+, killed by E⊗K + 1⊗E
        let s0 = d.summand(h(0)).unwrap();
        let col = s0.iota.col(0);
        assert!(col[0].is_zero() && col[3].is_zero());
        assert!(col[1].is_one());
        assert_eq!(col[2], -RatFunc::v_pow(-2));
        assert_eq!(d.completeness_residual(), 0.0);
    }

    #[test]
    fn cg_with_trivial_is_identity() {
        let d = clebsch_gordan::<RatFunc>(&C, h(2), h(0)).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].iota, Mat::identity(3));
        assert_eq!(d.summands[0].proj, Mat::identity(3));
    }

    #[test]
    fn one_times_half() {
        let d = clebsch_gordan::<RatFunc>(&C, h(2), h(1)).unwrap();
        assert_eq!(d.spins(), vec![h(3), h(1)]);
        let m = tensor(&irreducible::<RatFunc>(&C, h(2)).unwrap(), &irreducible(&C, h(1)).unwrap());
        assert_eq!(d.intertwining_residual(&C, &m).unwrap(), 0.0);
        assert_eq!(d.completeness_residual(), 0.0);
    }

    #[test]
    fn verma_highest_weights() {
        let m = verma::<RatFunc>(&C, h(1), 4).unwrap();
        let ws: Vec<HalfInt> = highest_weight_vectors(&m).into_iter().map(|x| x.0).collect();
        assert_eq!(ws, vec![h(1), h(-3)]);
    }
}
