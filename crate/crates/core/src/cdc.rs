//! Constant dimension codes and the lifted-MRD construction.
//!
//! A CDC is a set of distinct k-dimensional subspaces of F_q^n under the
//! subspace distance d_S(V, W) = dim V + dim W − 2 dim(V∩W). Lifting a
//! Gabidulin MRD code produces the classical lower-bound witness: expand each
//! codeword into a k×(n−k) matrix M over F_q and take rowspan([I_k | M]).

use num_bigint::BigUint;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{LatticeIndex, Subspace};
use crate::matrix::{rank_generic_codes, rank_gf2, Matrix};
use crate::qmatroid::RankTable;
use crate::repr::{GeneratorMatrix, RankMetricCode};

/// min_subspace_distance refuses codes with more pairs than this.
pub const PAIRWISE_CEILING: u64 = 50_000_000;
/// lifted_mrd refuses constructions with more codewords than this.
pub const LIFT_CEILING: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantDimensionCode {
    field: FieldSpec,
    n: usize,
    k: usize,
    /// Canonically ordered, pairwise distinct.
    codewords: Vec<Subspace>,
}

impl ConstantDimensionCode {
    pub fn new(
        field: FieldSpec,
        n: usize,
        k: usize,
        mut codewords: Vec<Subspace>,
    ) -> Result<ConstantDimensionCode> {
        if k > n {
            return Err(Error::OutOfRange(format!("codeword dimension {k} exceeds ambient {n}")));
        }
        for (pos, c) in codewords.iter().enumerate() {
            if c.field() != &field || c.ambient_dim() != n {
                return Err(Error::AmbientMismatch(format!(
                    "codeword {pos} does not live in the declared ambient space"
                )));
            }
            if c.dim() != k {
                return Err(Error::InvalidCollection(format!(
                    "codeword {pos} has dimension {} (expected {k})",
                    c.dim()
                )));
            }
        }
        codewords.sort_by(Subspace::canonical_cmp);
        if codewords.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCollection("duplicate codeword".into()));
        }
        Ok(ConstantDimensionCode {
            field,
            n,
            k,
            codewords,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn len(&self) -> usize {
        self.codewords.len()
    }
    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
    pub fn codewords(&self) -> &[Subspace] {
        &self.codewords
    }

    /// Exact pairwise minimum of d_S; always even here since all codewords
    /// share a dimension.
    pub fn min_subspace_distance(&self) -> Result<usize> {
        let len = self.codewords.len();
        if len < 2 {
            return Err(Error::UndefinedDistance);
        }
        let pairs = len as u64 * (len as u64 - 1) / 2;
        if pairs > PAIRWISE_CEILING {
            return Err(Error::CeilingExceeded(format!(
                "{pairs} codeword pairs (ceiling {PAIRWISE_CEILING})"
            )));
        }
        let k = self.k;
        if self.field.order() == 2 && self.n <= 64 {
            let packs: Vec<Vec<u64>> = self
                .codewords
                .iter()
                .map(|c| c.basis().pack_gf2())
                .collect();
            let row_min = |scratch: &mut Vec<u64>, i: usize| -> usize {
                let mut best = usize::MAX;
                for j in i + 1..len {
                    scratch.clear();
                    scratch.extend_from_slice(&packs[i]);
                    scratch.extend_from_slice(&packs[j]);
                    let d = 2 * rank_gf2(scratch, self.n) - 2 * k;
                    if d < best {
                        best = d;
                        if best == 2 {
                            break;
                        }
                    }
                }
                best
            };
            Ok(self.fold_rows(row_min))
        } else {
            let flats: Vec<Vec<u64>> = self
                .codewords
                .iter()
                .map(|c| c.basis().codes().to_vec())
                .collect();
            let field = self.field.clone();
            let cols = self.n;
            let row_min = |scratch: &mut Vec<u64>, i: usize| -> usize {
                let mut best = usize::MAX;
                for j in i + 1..len {
                    scratch.clear();
                    scratch.extend_from_slice(&flats[i]);
                    scratch.extend_from_slice(&flats[j]);
                    let rank = rank_generic_codes(&field, scratch, 2 * k, cols);
                    let d = 2 * rank - 2 * k;
                    if d < best {
                        best = d;
                        if best == 2 {
                            break;
                        }
                    }
                }
                best
            };
            Ok(self.fold_rows(row_min))
        }
    }

    /// Minimum of a per-row reducer over i = 0..len−1, parallel when enabled.
    /// The reducer sees a reusable scratch buffer.
    fn fold_rows<F>(&self, row_min: F) -> usize
    where
        F: Fn(&mut Vec<u64>, usize) -> usize + Sync,
    {
        let len = self.codewords.len();
        #[cfg(feature = "parallel")]
        {
            (0..len - 1)
                .into_par_iter()
                .map_init(Vec::new, |scratch, i| row_min(scratch, i))
                .min()
                .unwrap()
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut scratch = Vec::new();
            let mut best = usize::MAX;
            for i in 0..len - 1 {
                best = best.min(row_min(&mut scratch, i));
                if best == 2 {
                    break;
                }
            }
            best
        }
    }
}

/// Gabidulin generator over F_{q^mp}: G[i][j] = g_j^{q^i} for the evaluation
/// points g_j = α^j, j = 0..np−1, α the deterministic primitive element. The
/// points are F_q-linearly independent since np <= mp, so the code is MRD
/// with minimum rank distance np − kp + 1.
pub fn gabidulin_code(q: u64, mp: u32, np: usize, kp: usize) -> Result<GeneratorMatrix> {
    if kp == 0 || kp > np || np > mp as usize {
        return Err(Error::OutOfRange(format!(
            "gabidulin parameters need 1 <= k' <= n' <= m', got k'={kp}, n'={np}, m'={mp}"
        )));
    }
    let ext = FieldSpec::new(q, mp)?;
    let alpha = ext.primitive_element();
    let mut codes = Vec::with_capacity(kp * np);
    for i in 0..kp as u32 {
        let frob = q.pow(i);
        for j in 0..np as u64 {
            let g = ext.pow(alpha, j);
            codes.push(ext.pow(g, frob).code());
        }
    }
    GeneratorMatrix::new(Matrix::from_codes(ext, kp, np, &codes)?)
}

fn lifted_mrd_params(q: u64, n: usize, k: usize, d: usize) -> Result<(u32, usize, usize)> {
    if 2 * k > n {
        return Err(Error::OutOfRange(format!("lifting needs 2k <= n, got k={k}, n={n}")));
    }
    if d % 2 != 0 || d < 4 || d > 2 * k {
        return Err(Error::OutOfRange(format!(
            "lifting needs even d with 4 <= d <= 2k, got d={d}, k={k}"
        )));
    }
    let _ = q;
    Ok(((n - k) as u32, k, k - d / 2 + 1))
}

/// The lifted-MRD CDC: exactly q^{(n−k)(k−d/2+1)} many k-subspaces of F_q^n
/// with pairwise subspace distance >= d.
pub fn lifted_mrd(q: u64, n: usize, k: usize, d: usize) -> Result<ConstantDimensionCode> {
    let (mp, np, kp) = lifted_mrd_params(q, n, k, d)?;
    let gab = gabidulin_code(q, mp, np, kp)?;
    let ext = gab.field().clone();
    let count = BigUint::from(ext.order()).pow(kp as u32);
    if count > BigUint::from(LIFT_CEILING) {
        return Err(Error::CeilingExceeded(format!(
            "lifted construction has {count} codewords (ceiling {LIFT_CEILING})"
        )));
    }
    let count: u64 = count.try_into().unwrap();
    let base = FieldSpec::new(q, 1)?;
    let mut codewords = Vec::with_capacity(count as usize);
    for msg in 0..count {
        // Message digits, then c = u·G over F_{q^{n−k}}.
        let mut rem = msg;
        let ucodes: Vec<u64> = (0..kp)
            .map(|_| {
                let digit = rem % ext.order();
                rem /= ext.order();
                digit
            })
            .collect();
        let u = Matrix::from_codes(ext.clone(), 1, kp, &ucodes)?;
        let c = u.mat_mul(gab.matrix())?;
        // Row i of the lifted basis is e_i followed by the expansion of c_i;
        // [I_k | M] is already in reduced row echelon form.
        let mut codes = vec![0u64; k * n];
        for i in 0..k {
            codes[i * n + i] = 1;
            for (t, digit) in ext.coefficients(c.get(0, i)).into_iter().enumerate() {
                codes[i * n + k + t] = digit;
            }
        }
        codewords.push(Subspace::from_canonical(Matrix::from_codes(
            base.clone(),
            k,
            n,
            &codes,
        )?));
    }
    ConstantDimensionCode::new(base, n, k, codewords)
}

/// Exact minimum subspace distance of lifted_mrd(q, n, k, d) without pairwise
/// work: lifted planes satisfy d_S(lift M_i, lift M_j) = 2·rank(M_i − M_j),
/// expansion is F_q-linear, and the underlying code is linear, so the minimum
/// over pairs equals twice the minimum rank weight over nonzero codewords.
pub fn lifted_mrd_exact_distance(q: u64, n: usize, k: usize, d: usize) -> Result<usize> {
    let (mp, np, kp) = lifted_mrd_params(q, n, k, d)?;
    let gab = gabidulin_code(q, mp, np, kp)?;
    Ok(2 * RankMetricCode::new(gab).min_rank_distance()?)
}

/// True iff no pair of members meets in dimension k−1 or higher, i.e. the
/// members form an independent set in the Grassmann graph J_q(n, k);
/// equivalently all pairwise subspace distances are >= 4.
pub fn grassmann_independent_check(members: &[Subspace], k: usize) -> Result<bool> {
    for (pos, s) in members.iter().enumerate() {
        if s.dim() != k {
            return Err(Error::InvalidCollection(format!(
                "member {pos} has dimension {} (expected {k})",
                s.dim()
            )));
        }
        if s.field() != members[0].field() || s.ambient_dim() != members[0].ambient_dim() {
            return Err(Error::AmbientMismatch(
                "members live in different ambient spaces".into(),
            ));
        }
    }
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].intersect(&members[j])?.dim() + 2 > k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy independent set in J_q(n, k): scan the canonical Grassmannian once,
/// keeping every subspace that stays pairwise-admissible with the kept ones.
pub fn greedy_grassmann_independent_set(
    field: &FieldSpec,
    n: usize,
    k: usize,
) -> Result<Vec<Subspace>> {
    let all = crate::lattice::enumerate_grassmannian(field, n, k)?;
    let mut kept: Vec<Subspace> = Vec::new();
    for cand in all {
        let mut ok = true;
        for have in &kept {
            if cand.intersect(have)?.dim() + 2 > k {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(cand);
        }
    }
    Ok(kept)
}

/// Paving q-matroid of rank k from an admissible CDC: delegates to the paving
/// constructor, whose pairwise dim(V∩W) <= k−2 requirement is exactly
/// pairwise subspace distance >= 4.
pub fn cdc_to_paving(c: &ConstantDimensionCode) -> Result<RankTable> {
    let index = LatticeIndex::build(&c.field, c.n)?;
    RankTable::paving_from_collection(index, &c.codewords, c.k as u32)
}
