//! Determinantal zero patterns of the k-subspace polynomial system.
//!
//! For fixed (q, n, k) the system consists of one polynomial per canonical
//! k-subspace U_i of F_q^n: f_{U_i}(u) = det(G·Y_{U_i}^T), where u lists the
//! kn entries of G row-major. The polynomials are never expanded; a pattern
//! records which determinants vanish at a point, symbol per subspace in
//! canonical order. Sweeping a finite extension counts attained patterns,
//! a lower bound on the pattern count over the algebraic closure.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::enumerate_grassmannian;
use crate::matrix::Matrix;
use crate::qmatroid::RankTable;

/// sweep refuses point sets larger than this.
pub const SWEEP_CEILING: u64 = 100_000_000;

/// A {0,*}-string indexed by the canonical Grassmannian ordering: 0 where
/// the determinant vanishes, * where it does not. Ordering is lexicographic
/// with 0 before *.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroPattern {
    /// 0 = vanishes, 1 = nonzero.
    symbols: Vec<u8>,
}

impl ZeroPattern {
    fn from_bits(symbols: Vec<u8>) -> ZeroPattern {
        debug_assert!(symbols.iter().all(|&s| s <= 1));
        ZeroPattern { symbols }
    }

    pub fn parse(s: &str) -> Result<ZeroPattern> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '*' => Ok(1),
                other => Err(Error::InvalidInput(format!(
                    "pattern symbol {other:?} (expected 0 or *)"
                ))),
            })
            .collect::<Result<_>>()?;
        Ok(ZeroPattern { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
    /// True if polynomial i vanishes.
    pub fn is_zero_at(&self, i: usize) -> bool {
        self.symbols[i] == 0
    }
    pub fn zero_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == 0).count()
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            f.write_str(if s == 0 { "0" } else { "*" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroPattern({self})")
    }
}

/// The ordered determinant system F_{n,k} over the prime field F_q: the
/// canonical basis matrices Y_{U_i} of every k-subspace, in canonical order.
pub struct DetSystem {
    field: FieldSpec,
    n: usize,
    k: usize,
    matrices: Vec<Matrix>,
}

impl DetSystem {
    pub fn new(q: u64, n: usize, k: usize) -> Result<DetSystem> {
        let field = FieldSpec::new(q, 1)?;
        if k == 0 || k > n {
            return Err(Error::OutOfRange(format!(
                "determinant system needs 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        let matrices = enumerate_grassmannian(&field, n, k)?
            .into_iter()
            .map(|s| s.basis().clone())
            .collect();
        Ok(DetSystem {
            field,
            n,
            k,
            matrices,
        })
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// Number of polynomials, [n choose k]_q.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
    /// Number of variables, kn.
    pub fn s(&self) -> usize {
        self.k * self.n
    }
    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// Evaluate every determinant at u (a 1×kn row over F_{q^m}, reshaped
    /// row-major into the k×n matrix G).
    pub fn evaluate(&self, u: &Matrix) -> Result<ZeroPattern> {
        let ext = u.field().clone();
        if ext.p() != self.field.p() {
            return Err(Error::FieldMismatch(format!(
                "point over characteristic {}, system over {}",
                ext.p(),
                self.field.p()
            )));
        }
        if u.rows() != 1 || u.cols() != self.s() {
            return Err(Error::Shape(format!(
                "point is {}x{}, expected 1x{}",
                u.rows(),
                u.cols(),
                self.s()
            )));
        }
        let g = Matrix::from_codes(ext.clone(), self.k, self.n, u.codes())?;
        let lifted: Vec<Matrix> = self
            .matrices
            .iter()
            .map(|y| Ok(y.lifted(&ext)?.transpose()))
            .collect::<Result<_>>()?;
        self.pattern_at(&g, &lifted)
    }

    fn pattern_at(&self, g: &Matrix, lifted_yt: &[Matrix]) -> Result<ZeroPattern> {
        let symbols = lifted_yt
            .iter()
            .map(|yt| {
                let det = g.mat_mul(yt)?.det()?;
                Ok(u8::from(det.code() != 0))
            })
            .collect::<Result<_>>()?;
        Ok(ZeroPattern::from_bits(symbols))
    }

    /// The exact set of patterns attained over F_{q^m}^{kn}.
    pub fn sweep(&self, m: u32) -> Result<BTreeSet<ZeroPattern>> {
        if m == 0 {
            return Err(Error::OutOfRange("extension degree must be >= 1".into()));
        }
        let points = BigUint::from(self.field.p()).pow(m * self.s() as u32);
        if points > BigUint::from(SWEEP_CEILING) {
            return Err(Error::CeilingExceeded(format!(
                "sweep over {points} points (ceiling {SWEEP_CEILING})"
            )));
        }
        let points: u64 = points.try_into().unwrap();
        let ext = FieldSpec::new(self.field.p(), m)?;
        let lifted: Vec<Matrix> = self
            .matrices
            .iter()
            .map(|y| Ok(y.lifted(&ext)?.transpose()))
            .collect::<Result<_>>()?;
        let order = ext.order();
        let s = self.s();
        let eval_point = |idx: u64| -> Result<ZeroPattern> {
            let mut rem = idx;
            let codes: Vec<u64> = (0..s)
                .map(|_| {
                    let d = rem % order;
                    rem /= order;
                    d
                })
                .collect();
            let g = Matrix::from_codes(ext.clone(), self.k, self.n, &codes)?;
            self.pattern_at(&g, &lifted)
        };
        #[cfg(feature = "parallel")]
        {
            (0..points)
                .into_par_iter()
                .try_fold(BTreeSet::new, |mut acc, idx| {
                    acc.insert(eval_point(idx)?);
                    Ok(acc)
                })
                .try_reduce(BTreeSet::new, |mut a, mut b| {
                    a.append(&mut b);
                    Ok(a)
                })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut acc = BTreeSet::new();
            for idx in 0..points {
                acc.insert(eval_point(idx)?);
            }
            Ok(acc)
        }
    }
}

/// The target pattern of a rank table: 0 at every non-basis k-subspace, * at
/// every basis, k = ρ(E). A representation of t exists iff some point attains
/// this pattern over some extension.
pub fn pattern_of_qmatroid(t: &RankTable) -> Result<ZeroPattern> {
    let k = t.rank() as usize;
    if k == 0 {
        return Err(Error::DegenerateRank(
            "the zero q-matroid has no k-subspace determinant system".into(),
        ));
    }
    let index = t.index();
    let symbols = index
        .ids_of_dim(k)
        .map(|id| u8::from(t.rank_of(id) as usize == k))
        .collect();
    Ok(ZeroPattern::from_bits(symbols))
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// (Md choose s): patterns of M degree-d polynomials in s variables.
pub fn zero_pattern_bound(m_count: u64, d: u64, s: u64) -> Result<BigUint> {
    if d < 1 {
        return Err(Error::OutOfRange("polynomial degree must be >= 1".into()));
    }
    if m_count < s {
        return Err(Error::OutOfRange(format!(
            "bound hypothesis needs M >= s, got M={m_count}, s={s}"
        )));
    }
    Ok(binom(m_count * d, s))
}

/// Σ_{j=0}^{s} (M choose j): the sharper bound for linear polynomials.
pub fn zero_pattern_bound_linear(m_count: u64, s: u64) -> Result<BigUint> {
    if m_count < s {
        return Err(Error::OutOfRange(format!(
            "bound hypothesis needs M >= s, got M={m_count}, s={s}"
        )));
    }
    Ok((0..=s).map(|j| binom(m_count, j)).sum())
}
