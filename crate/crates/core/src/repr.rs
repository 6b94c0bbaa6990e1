//! Rank-metric codes over F_{q^m} and the q-matroids they represent.
//!
//! The ground field is always the prime subfield F_q (q prime), so base
//! vectors embed into F_{q^m} as constant polynomials. A generator matrix G
//! represents the q-matroid ρ(V) = rank over F_{q^m} of G·Y_V^T, with Y_V
//! the canonical basis matrix of V.

use std::sync::Arc;

use num_bigint::BigUint;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{enumerate_grassmannian, gaussian_binomial, LatticeIndex};
use crate::matrix::Matrix;
use crate::qmatroid::RankTable;

/// min_rank_distance refuses codes with more than this many codewords, and
/// search_representation refuses Grassmannians larger than this.
pub const REPR_CEILING: u64 = 10_000_000;

/// Full-row-rank k×n matrix over F_{q^m}, q prime. k = 0 is the degenerate
/// generator of the zero code, admitted so that the zero q-matroid has a
/// representation witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: Matrix,
}

impl GeneratorMatrix {
    pub fn new(matrix: Matrix) -> Result<GeneratorMatrix> {
        if matrix.rows() > matrix.cols() {
            return Err(Error::Shape(format!(
                "generator is {}x{}, more rows than columns",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rank() != matrix.rows() {
            return Err(Error::DegenerateRank(format!(
                "generator of shape {}x{} is not full row rank",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(GeneratorMatrix { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
    pub fn k(&self) -> usize {
        self.matrix.rows()
    }
    pub fn n(&self) -> usize {
        self.matrix.cols()
    }
    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }
}

/// F_{q^m}-linear code in F_{q^m}^n under the rank metric. The stored
/// generator is in reduced row echelon form; everything about the code (and
/// the q-matroid it represents) depends only on the row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMetricCode {
    generator: GeneratorMatrix,
}

impl RankMetricCode {
    pub fn new(g: GeneratorMatrix) -> RankMetricCode {
        let (rref, _) = g.matrix.rref();
        RankMetricCode {
            generator: GeneratorMatrix { matrix: rref },
        }
    }

    pub fn from_matrix(m: Matrix) -> Result<RankMetricCode> {
        Ok(RankMetricCode::new(GeneratorMatrix::new(m)?))
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }
    pub fn k(&self) -> usize {
        self.generator.k()
    }
    pub fn n(&self) -> usize {
        self.generator.n()
    }
    /// Characteristic q of the ground field.
    pub fn q(&self) -> u64 {
        self.generator.field().p()
    }
    /// Extension degree m of F_{q^m}.
    pub fn m_degree(&self) -> u32 {
        self.generator.field().e()
    }

    /// Orthogonal complement under the standard dot product on F_{q^m}^n.
    pub fn dual(&self) -> RankMetricCode {
        let kernel = self.generator.matrix.kernel_basis();
        let (rref, _) = kernel.rref();
        RankMetricCode {
            generator: GeneratorMatrix { matrix: rref },
        }
    }

    fn codeword_count(&self) -> BigUint {
        BigUint::from(self.generator.field().order()).pow(self.k() as u32)
    }

    /// Exact minimum rank weight over all nonzero codewords.
    pub fn min_rank_distance(&self) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::UndefinedDistance);
        }
        let total = self.codeword_count();
        if total > BigUint::from(REPR_CEILING) {
            return Err(Error::CeilingExceeded(format!(
                "code has {total} codewords (ceiling {REPR_CEILING})"
            )));
        }
        let total: u64 = total.try_into().unwrap();
        let weight_of = |msg: u64| -> usize {
            let c = self.encode(msg);
            rank_weight(&c).unwrap()
        };
        #[cfg(feature = "parallel")]
        let d = (1..total).into_par_iter().map(weight_of).min().unwrap();
        #[cfg(not(feature = "parallel"))]
        let d = (1..total).map(weight_of).min().unwrap();
        Ok(d)
    }

    /// Maximum rank distance flag: equality in the Singleton-type bound
    /// k <= n − d + 1.
    pub fn is_mrd(&self) -> Result<bool> {
        let d = self.min_rank_distance()?;
        Ok(self.k() == self.n() - d + 1)
    }

    /// Codeword for the message with the given code vector index, digits in
    /// base |F_{q^m}|, first coordinate least significant.
    fn encode(&self, msg: u64) -> Matrix {
        let f = self.generator.field().clone();
        let order = f.order();
        let mut rem = msg;
        let codes: Vec<u64> = (0..self.k())
            .map(|_| {
                let d = rem % order;
                rem /= order;
                d
            })
            .collect();
        let u = Matrix::from_codes(f, 1, self.k(), &codes).unwrap();
        u.mat_mul(&self.generator.matrix).unwrap()
    }
}

/// rk(v) = dim over F_q of the span of the coordinates: the rank of the
/// m×n matrix whose column j is the coefficient expansion of v_j.
pub fn rank_weight(v: &Matrix) -> Result<usize> {
    if v.rows() != 1 {
        return Err(Error::Shape(format!("rank weight of a {}-row matrix", v.rows())));
    }
    let f = v.field();
    let m = f.e() as usize;
    let prime = FieldSpec::new(f.p(), 1)?;
    let mut codes = vec![0u64; m * v.cols()];
    for j in 0..v.cols() {
        for (i, digit) in f.coefficients(v.get(0, j)).into_iter().enumerate() {
            codes[i * v.cols() + j] = digit;
        }
    }
    Ok(Matrix::from_codes(prime, m, v.cols(), &codes)?.rank())
}

/// ρ(V) = rank over F_{q^m} of G·Y_V^T for every V in L(F_q^n).
pub fn qmatroid_from_generator(g: &GeneratorMatrix) -> Result<RankTable> {
    let prime = FieldSpec::new(g.field().p(), 1)?;
    let index = LatticeIndex::build(&prime, g.n())?;
    let ranks = ranks_against(&g.matrix, &index)?;
    RankTable::from_raw_ranks(index, ranks)
}

fn ranks_against(g: &Matrix, index: &Arc<LatticeIndex>) -> Result<Vec<u32>> {
    let ext = g.field().clone();
    (0..index.len())
        .map(|id| {
            let yt = index.subspace(id).basis().lifted(&ext)?.transpose();
            Ok(g.mat_mul(&yt)?.rank() as u32)
        })
        .collect()
}

/// Bounded exhaustive search for a generator matrix representing t, trying
/// extension degrees m = 1..m_max in order and candidates in canonical
/// subspace order within each degree. The represented q-matroid depends only
/// on the row space of G, so canonical k-subspaces of F_{q^m}^n exhaust all
/// candidates. Absence of a witness means only "not representable with
/// m <= m_max".
pub fn search_representation(
    t: &RankTable,
    m_max: u32,
) -> Result<Option<GeneratorMatrix>> {
    let base = t.index().field().clone();
    if !base.is_prime_field() {
        return Err(Error::InvalidInput(
            "representability search requires a prime ground field".into(),
        ));
    }
    let n = t.ambient_dim();
    let k = t.rank() as usize;
    if k == 0 {
        let empty = Matrix::zero(base, 0, n);
        return Ok(Some(GeneratorMatrix::new(empty)?));
    }
    if m_max == 0 {
        return Err(Error::OutOfRange("m_max must be >= 1".into()));
    }
    let ceiling = BigUint::from(REPR_CEILING);
    for m in 1..=m_max {
        let order = BigUint::from(base.order()).pow(m);
        let grassmannian = {
            let ord: u64 = order
                .clone()
                .try_into()
                .map_err(|_| Error::FieldTooLarge(base.order(), m))?;
            gaussian_binomial(n as u64, k as u64, ord)?
        };
        if grassmannian > ceiling {
            return Err(Error::CeilingExceeded(format!(
                "search at m = {m} needs {grassmannian} candidates (ceiling {REPR_CEILING})"
            )));
        }
        if order.pow(k as u32) > ceiling {
            return Err(Error::CeilingExceeded(format!(
                "search at m = {m} yields codes of {} codewords (ceiling {REPR_CEILING})",
                order.pow(k as u32)
            )));
        }
    }
    // Low-dimensional non-bases are the cheapest discriminators: test them
    // before any basis. The zero space never discriminates.
    let index = t.index();
    let mut plan: Vec<usize> = (1..index.len()).collect();
    plan.sort_by_key(|&id| {
        let dim = index.dim_of(id);
        let is_basis = t.rank_of(id) as usize == dim && dim == k;
        (is_basis, dim, id)
    });
    for m in 1..=m_max {
        let ext = FieldSpec::new(base.p(), m)?;
        let checks: Vec<(Matrix, u32)> = plan
            .iter()
            .map(|&id| {
                let yt = index.subspace(id).basis().lifted(&ext)?.transpose();
                Ok((yt, t.rank_of(id)))
            })
            .collect::<Result<_>>()?;
        let candidates = enumerate_grassmannian(&ext, n, k)?;
        let matches = |s: &crate::lattice::Subspace| {
            let g = s.basis();
            checks
                .iter()
                .all(|(yt, want)| g.mat_mul(yt).unwrap().rank() as u32 == *want)
        };
        #[cfg(feature = "parallel")]
        let hit = candidates.par_iter().find_first(|s| matches(s));
        #[cfg(not(feature = "parallel"))]
        let hit = candidates.iter().find(|s| matches(s));
        if let Some(s) = hit {
            return Ok(Some(GeneratorMatrix::new(s.basis().clone())?));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatroid::RankTable;

    fn f(p: u64, e: u32) -> FieldSpec {
        FieldSpec::new(p, e).unwrap()
    }

    fn mat(field: &FieldSpec, rows: usize, cols: usize, codes: &[u64]) -> Matrix {
        Matrix::from_codes(field.clone(), rows, cols, codes).unwrap()
    }

    #[test]
    fn generator_validation() {
        let f4 = f(2, 2);
        assert!(GeneratorMatrix::new(mat(&f4, 1, 2, &[1, 2])).is_ok());
        assert!(matches!(
            GeneratorMatrix::new(mat(&f4, 2, 2, &[1, 2, 1, 2])),
            Err(Error::DegenerateRank(_))
        ));
        assert!(matches!(
            GeneratorMatrix::new(mat(&f4, 3, 2, &[1, 0, 0, 1, 1, 1])),
            Err(Error::Shape(_))
        ));
        // Degenerate zero-row generator is allowed.
        assert_eq!(GeneratorMatrix::new(Matrix::zero(f4, 0, 3)).unwrap().k(), 0);
    }

    #[test]
    fn motivating_generator_gives_the_paving_example() {
        // G = [[1, α, 0, 0], [0, 0, 1, α²]] over F_16, α the primitive x.
        let f16 = f(2, 4);
        let alpha = f16.primitive_element();
        let a2 = f16.mul(alpha, alpha);
        let g = GeneratorMatrix::new(mat(
            &f16,
            2,
            4,
            &[1, alpha.code(), 0, 0, 0, 0, 1, a2.code()],
        ))
        .unwrap();
        let t = qmatroid_from_generator(&g).unwrap();
        assert!(t.check_axioms().pass);
        assert_eq!(t.rank(), 2);

        let f2 = f(2, 1);
        let idx = t.index().clone();
        let v = crate::lattice::Subspace::from_rows(&mat(&f2, 2, 4, &[1, 0, 0, 0, 0, 1, 0, 0]));
        let w = crate::lattice::Subspace::from_rows(&mat(&f2, 2, 4, &[0, 0, 1, 0, 0, 0, 0, 1]));
        let paving = RankTable::paving_from_collection(idx, &[v, w], 2).unwrap();
        assert_eq!(t, paving);
        assert_eq!(t.derived_structure().bases.len(), 33);
    }

    #[test]
    fn identity_generator_is_free() {
        let f9 = f(3, 2);
        let g = GeneratorMatrix::new(Matrix::identity(f9, 3)).unwrap();
        let t = qmatroid_from_generator(&g).unwrap();
        let idx = t.index().clone();
        assert_eq!(t, RankTable::uniform(idx, 3).unwrap());
    }

    #[test]
    fn primitive_row_generator_is_loopless_uniform_rank_one() {
        // G = (1, β, β²) over F_8 represents U_{1,3} with empty loop space.
        let f8 = f(2, 3);
        let b = f8.primitive_element();
        let b2 = f8.mul(b, b);
        let g = GeneratorMatrix::new(mat(&f8, 1, 3, &[1, b.code(), b2.code()])).unwrap();
        let t = qmatroid_from_generator(&g).unwrap();
        let idx = t.index().clone();
        assert_eq!(t, RankTable::uniform(idx, 1).unwrap());
        let s = t.derived_structure();
        assert!(s.loops.is_empty());
        assert_eq!(s.loop_space.dim(), 0);
    }

    #[test]
    fn row_space_invariance() {
        // Left-multiplying G by an invertible matrix fixes the q-matroid.
        let f16 = f(2, 4);
        let alpha = f16.primitive_element();
        let g = mat(&f16, 2, 4, &[1, alpha.code(), 0, 0, 0, 0, 1, 3]);
        let u = mat(&f16, 2, 2, &[1, alpha.code(), 0, 1]);
        let g2 = u.mat_mul(&g).unwrap();
        let t1 = qmatroid_from_generator(&GeneratorMatrix::new(g).unwrap()).unwrap();
        let t2 = qmatroid_from_generator(&GeneratorMatrix::new(g2).unwrap()).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn rank_weight_examples() {
        let f8 = f(2, 3);
        let a = f8.primitive_element();
        let a2 = f8.mul(a, a);
        assert_eq!(
            rank_weight(&mat(&f8, 1, 3, &[1, a.code(), a2.code()])).unwrap(),
            3
        );
        assert_eq!(rank_weight(&mat(&f8, 1, 3, &[0, 0, 0])).unwrap(), 0);
        assert_eq!(
            rank_weight(&mat(&f8, 1, 4, &[5, 5, 5, 5])).unwrap(),
            1
        );
        assert!(rank_weight(&mat(&f8, 2, 1, &[1, 1])).is_err());
    }

    #[test]
    fn distance_of_primitive_row_code_is_full() {
        let f8 = f(2, 3);
        let b = f8.primitive_element();
        let code =
            RankMetricCode::from_matrix(mat(&f8, 1, 3, &[1, b.code(), f8.mul(b, b).code()]))
                .unwrap();
        assert_eq!(code.min_rank_distance().unwrap(), 3);
        // k = 1 = n − d + 1: MRD.
        assert!(code.is_mrd().unwrap());

        let idn = RankMetricCode::from_matrix(Matrix::identity(f(2, 2), 3)).unwrap();
        assert_eq!(idn.min_rank_distance().unwrap(), 1);
        assert!(idn.is_mrd().unwrap()); // 3 = 3 − 1 + 1

        let zero = RankMetricCode::from_matrix(Matrix::zero(f8, 0, 3)).unwrap();
        assert!(matches!(zero.min_rank_distance(), Err(Error::UndefinedDistance)));
    }

    #[test]
    fn dual_code_examples() {
        let f16 = f(2, 4);
        let full = RankMetricCode::from_matrix(Matrix::identity(f16.clone(), 3)).unwrap();
        let zero = full.dual();
        assert_eq!(zero.k(), 0);
        assert_eq!(zero.n(), 3);
        assert_eq!(zero.dual().generator().matrix(), full.generator().matrix());

        let alpha = f16.primitive_element();
        let c = RankMetricCode::from_matrix(mat(
            &f16,
            2,
            4,
            &[1, alpha.code(), 0, 0, 0, 0, 1, f16.mul(alpha, alpha).code()],
        ))
        .unwrap();
        let d = c.dual();
        assert_eq!(d.k(), 2);
        // Every row of G is orthogonal to every row of the dual generator.
        let prod = c
            .generator()
            .matrix()
            .mat_mul(&d.generator().matrix().transpose())
            .unwrap();
        assert_eq!(prod, Matrix::zero(f16, 2, 2));
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn dual_code_represents_the_dual_qmatroid() {
        // One fixed instance of the duality identity; randomized ones live
        // in the integration suite.
        let f16 = f(2, 4);
        let alpha = f16.primitive_element();
        let c = RankMetricCode::from_matrix(mat(
            &f16,
            2,
            4,
            &[1, alpha.code(), 0, 0, 0, 0, 1, f16.mul(alpha, alpha).code()],
        ))
        .unwrap();
        let t = qmatroid_from_generator(c.generator()).unwrap();
        let td = qmatroid_from_generator(c.dual().generator()).unwrap();
        assert_eq!(t.dualize().unwrap(), td);
    }

    #[test]
    fn search_finds_u12_at_m_two() {
        // Over F_2 itself every 1×2 generator has a rational kernel point, so
        // some line becomes a loop; the first witness appears at m = 2, and
        // in canonical order it is (1, α) over F_4.
        let idx = LatticeIndex::build(&f(2, 1), 2).unwrap();
        let t = RankTable::uniform(idx, 1).unwrap();
        let g = search_representation(&t, 3).unwrap().unwrap();
        let f4 = f(2, 2);
        assert_eq!(g.field(), &f4);
        assert_eq!(g.matrix(), &mat(&f4, 1, 2, &[1, 2]));
        assert_eq!(qmatroid_from_generator(&g).unwrap(), t);
    }

    #[test]
    fn search_respects_mrd_threshold_for_u24() {
        let idx = LatticeIndex::build(&f(2, 1), 4).unwrap();
        let t = RankTable::uniform(idx, 2).unwrap();
        assert_eq!(search_representation(&t, 3).unwrap(), None);
    }

    #[test]
    fn zero_table_gets_degenerate_witness() {
        let idx = LatticeIndex::build(&f(2, 1), 4).unwrap();
        let t = RankTable::uniform(idx, 0).unwrap();
        let g = search_representation(&t, 2).unwrap().unwrap();
        assert_eq!(g.k(), 0);
        assert_eq!(g.n(), 4);
    }

    #[test]
    fn search_rejects_oversized_sweeps() {
        let idx = LatticeIndex::build(&f(2, 1), 4).unwrap();
        let t = RankTable::uniform(idx, 2).unwrap();
        assert!(matches!(
            search_representation(&t, 12),
            Err(Error::CeilingExceeded(_))
        ));
    }
}
