//! The lattice of subspaces of F_q^n.
//!
//! Subspaces are identified by their canonical reduced-row-echelon basis.
//! Canonical ordering ("canonical-v1"): dimension ascending, then
//! lexicographic on the flattened basis entries under the element-code order.
//! Every id in a LatticeIndex refers to that ordering.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;

/// Full-lattice indexes refuse ambient spaces with more subspaces than this
/// (F_2^7 at 29212 is fine, F_2^8 at 417199 is not).
pub const LATTICE_CEILING: u64 = 120_000;
/// Single-Grassmannian enumeration refuses beyond this many subspaces.
pub const GRASSMANNIAN_CEILING: u64 = 10_000_000;

pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::OutOfRange(format!("q-binomial base {q}")));
    }
    if k > n {
        return Ok(BigUint::zero());
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    Ok(num / den)
}

/// Number of subspaces of F_q^n of every dimension.
pub fn subspace_count(n: u64, q: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for k in 0..=n {
        total += gaussian_binomial(n, k, q)?;
    }
    Ok(total)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    /// Canonical RREF basis, no zero rows; rows = dim, cols = ambient n.
    basis: Matrix,
}

impl Subspace {
    /// Canonicalize the row space of an arbitrary matrix.
    pub fn from_rows(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let dim = pivots.len();
        let mut codes = Vec::with_capacity(dim * m.cols());
        for i in 0..dim {
            codes.extend_from_slice(r.row_codes(i));
        }
        Subspace {
            basis: Matrix::from_codes(m.field().clone(), dim, m.cols(), &codes).unwrap(),
        }
    }

    /// Caller guarantees the matrix is already canonical RREF with no zero rows.
    pub(crate) fn from_canonical(basis: Matrix) -> Subspace {
        Subspace { basis }
    }

    pub fn zero(field: FieldSpec, n: usize) -> Subspace {
        Subspace {
            basis: Matrix::zero(field, 0, n),
        }
    }

    pub fn full(field: FieldSpec, n: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() || self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch(format!(
                "{:?}^{} vs {:?}^{}",
                self.field(),
                self.ambient_dim(),
                other.field(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_rows(&self.basis.stack(&other.basis)?))
    }

    /// Kernel method: left null space of the stacked bases gives the
    /// coefficient vectors of common elements.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = self.basis.stack(&other.basis)?;
        let left_kernel = stacked.transpose().kernel_basis();
        let a = self.dim();
        let mut rows = Matrix::zero(self.field().clone(), left_kernel.rows(), self.ambient_dim());
        let f = self.field();
        for r in 0..left_kernel.rows() {
            for j in 0..self.ambient_dim() {
                let mut acc = f.zero();
                for t in 0..a {
                    acc = f.add(acc, f.mul(left_kernel.get(r, t), self.basis.get(t, j)));
                }
                rows.set(r, j, acc);
            }
        }
        Ok(Subspace::from_rows(&rows))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn ortho_complement(&self) -> Subspace {
        Subspace::from_rows(&self.basis.kernel_basis())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        if self.field() != other.field() || self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        other.dim() <= self.dim()
            && self.basis.stack(&other.basis).unwrap().rank() == self.dim()
    }

    /// d_S(V, W) = dim V + dim W − 2 dim(V ∩ W).
    pub fn subspace_distance(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        let sum_dim = self.basis.stack(&other.basis)?.rank();
        Ok(2 * sum_dim - self.dim() - other.dim())
    }

    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        debug_assert_eq!(self.field(), other.field());
        debug_assert_eq!(self.ambient_dim(), other.ambient_dim());
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.basis.codes().cmp(other.basis.codes()))
    }
}

/// All k-dimensional subspaces of F^n in canonical order, generated by RREF
/// pivot profile and free-entry assignment (each subspace appears exactly
/// once; no dedup pass).
pub fn enumerate_grassmannian(field: &FieldSpec, n: usize, k: usize) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds n = {n}")));
    }
    let count = gaussian_binomial(n as u64, k as u64, field.order())?;
    if count > BigUint::from(GRASSMANNIAN_CEILING) {
        return Err(Error::CeilingExceeded(format!(
            "Grassmannian of {k}-subspaces of {:?}^{n} has {count} elements",
            field
        )));
    }
    let s = field.order();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        emit_profile(field, n, k, &pivots, s, &mut out);
        // Next k-combination of 0..n in lex order.
        let mut i = k;
        loop {
            if i == 0 {
                pivots.clear();
                break;
            }
            i -= 1;
            if pivots[i] + 1 <= n - (k - i) {
                pivots[i] += 1;
                for t in i + 1..k {
                    pivots[t] = pivots[t - 1] + 1;
                }
                break;
            }
        }
        if pivots.is_empty() || k == 0 {
            break;
        }
    }
    out.sort_by(Subspace::canonical_cmp);
    debug_assert_eq!(BigUint::from(out.len() as u64), count);
    Ok(out)
}

fn emit_profile(
    field: &FieldSpec,
    n: usize,
    k: usize,
    pivots: &[usize],
    s: u64,
    out: &mut Vec<Subspace>,
) {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    // Free slots of the profile, row-major.
    let mut free = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        for j in c + 1..n {
            if !is_pivot[j] {
                free.push((i, j));
            }
        }
    }
    let mut base = vec![0u64; k * n];
    for (i, &c) in pivots.iter().enumerate() {
        base[i * n + c] = 1;
    }
    let total: u64 = s.pow(free.len() as u32);
    for mut assign in 0..total {
        let mut codes = base.clone();
        for &(i, j) in &free {
            codes[i * n + j] = assign % s;
            assign /= s;
        }
        out.push(Subspace::from_canonical(
            Matrix::from_codes(field.clone(), k, n, &codes).unwrap(),
        ));
    }
}

/// Relation of an unordered subspace pair inside a LatticeIndex: ids of the
/// meet and join. The pair (i, j) with i <= j is comparable iff meet == i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairInfo {
    pub meet: usize,
    pub join: usize,
}

/// Pair relations are cached for lattices up to this many subspaces.
const PAIR_CACHE_LIMIT: usize = 1024;

pub struct LatticeIndex {
    field: FieldSpec,
    n: usize,
    subspaces: Vec<Subspace>,
    /// dim_start[d]..dim_start[d+1] indexes the d-dimensional subspaces.
    dim_start: Vec<usize>,
    complements: OnceLock<Vec<usize>>,
    pair_cache: OnceLock<Option<Vec<u64>>>,
}

impl fmt::Debug for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({:?}^{}; {} subspaces)", self.field, self.n, self.subspaces.len())
    }
}

impl LatticeIndex {
    pub fn build(field: &FieldSpec, n: usize) -> Result<Arc<LatticeIndex>> {
        let total = subspace_count(n as u64, field.order())?;
        if total > BigUint::from(LATTICE_CEILING) {
            return Err(Error::CeilingExceeded(format!(
                "lattice of {:?}^{n} has {total} subspaces (ceiling {LATTICE_CEILING})",
                field
            )));
        }
        let mut subspaces = Vec::new();
        let mut dim_start = Vec::with_capacity(n + 2);
        for k in 0..=n {
            dim_start.push(subspaces.len());
            subspaces.extend(enumerate_grassmannian(field, n, k)?);
        }
        dim_start.push(subspaces.len());
        Ok(Arc::new(LatticeIndex {
            field: field.clone(),
            n,
            subspaces,
            dim_start,
            complements: OnceLock::new(),
            pair_cache: OnceLock::new(),
        }))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn subspace(&self, id: usize) -> &Subspace {
        &self.subspaces[id]
    }
    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }
    pub fn dim_of(&self, id: usize) -> usize {
        self.subspaces[id].dim()
    }
    pub fn zero_id(&self) -> usize {
        0
    }
    pub fn full_id(&self) -> usize {
        self.subspaces.len() - 1
    }
    pub fn ids_of_dim(&self, d: usize) -> std::ops::Range<usize> {
        self.dim_start[d]..self.dim_start[d + 1]
    }

    pub fn id_of(&self, s: &Subspace) -> Option<usize> {
        if s.field() != &self.field || s.ambient_dim() != self.n {
            return None;
        }
        self.subspaces
            .binary_search_by(|probe| probe.canonical_cmp(s))
            .ok()
    }

    /// complement_ids()[v] is the id of subspace(v)'s orthogonal complement.
    pub fn complement_ids(&self) -> &[usize] {
        self.complements.get_or_init(|| {
            self.subspaces
                .iter()
                .map(|s| self.id_of(&s.ortho_complement()).unwrap())
                .collect()
        })
    }

    fn pair_index(i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        j * (j - 1) / 2 + i
    }

    fn cache(&self) -> Option<&Vec<u64>> {
        self.pair_cache
            .get_or_init(|| {
                if self.len() > PAIR_CACHE_LIMIT {
                    return None;
                }
                let len = self.len();
                let mut table = vec![0u64; len * (len - 1) / 2];
                for j in 1..len {
                    for i in 0..j {
                        let info = self.pair_info_uncached(i, j);
                        table[Self::pair_index(i, j)] = (info.meet as u64) << 32 | info.join as u64;
                    }
                }
                Some(table)
            })
            .as_ref()
    }

    fn pair_info_uncached(&self, i: usize, j: usize) -> PairInfo {
        let (a, b) = (&self.subspaces[i], &self.subspaces[j]);
        let stacked = a.basis().stack(b.basis()).unwrap();
        let (r, pivots) = stacked.rref();
        if pivots.len() == b.dim() {
            // a + b = b, so a is contained in b.
            return PairInfo { meet: i, join: j };
        }
        let mut codes = Vec::with_capacity(pivots.len() * self.n);
        for row in 0..pivots.len() {
            codes.extend_from_slice(r.row_codes(row));
        }
        let join_sub = Subspace::from_canonical(
            Matrix::from_codes(self.field.clone(), pivots.len(), self.n, &codes).unwrap(),
        );
        let join = self.id_of(&join_sub).unwrap();
        let meet = self.id_of(&a.intersect(b).unwrap()).unwrap();
        PairInfo { meet, join }
    }

    /// Meet and join ids of the pair (i, j); requires i < j.
    pub fn pair_info(&self, i: usize, j: usize) -> PairInfo {
        if let Some(table) = self.cache() {
            let packed = table[Self::pair_index(i, j)];
            PairInfo {
                meet: (packed >> 32) as usize,
                join: (packed & 0xffff_ffff) as usize,
            }
        } else {
            self.pair_info_uncached(i, j)
        }
    }
}
