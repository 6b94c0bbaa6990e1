//! q-Matroids as rank tables over a full subspace lattice.
//!
//! A rank table assigns ρ(V) to every subspace id of a LatticeIndex. The
//! axioms checked are: (1) 0 <= ρ(V) <= dim V, (2) V <= W implies
//! ρ(V) <= ρ(W), (3) ρ(V∩W) + ρ(V+W) <= ρ(V) + ρ(W). Axiom 3 is evaluated on
//! incomparable pairs only; for comparable pairs it holds with equality
//! independently of the table (asserted once in the tests).

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeIndex, Subspace};

/// enumerate_qmatroids refuses lattices with more subspaces than this.
pub const ENUMERATION_CEILING: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    /// 1, 2 or 3.
    pub axiom: u8,
    /// Witness subspace ids; axiom 1 repeats the single witness.
    pub ids: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub pass: bool,
    pub violation: Option<AxiomViolation>,
}

#[derive(Clone, Debug)]
pub struct RankTable {
    index: Arc<LatticeIndex>,
    ranks: Vec<u32>,
}

impl PartialEq for RankTable {
    fn eq(&self, other: &Self) -> bool {
        self.index.field() == other.index.field()
            && self.index.ambient_dim() == other.index.ambient_dim()
            && self.ranks == other.ranks
    }
}
impl Eq for RankTable {}

/// Independents, bases, circuits, loops of a rank table, as lattice ids.
#[derive(Clone, Debug)]
pub struct Structure {
    pub rank: u32,
    pub independents: Vec<usize>,
    pub bases: Vec<usize>,
    pub circuits: Vec<usize>,
    pub loops: Vec<usize>,
    pub loop_space: Subspace,
    pub is_paving: bool,
}

impl RankTable {
    /// No axiom validation: the escape hatch for bulk enumeration and for
    /// loading tables that check_axioms is then run against.
    pub fn from_raw_ranks(index: Arc<LatticeIndex>, ranks: Vec<u32>) -> Result<RankTable> {
        if ranks.len() != index.len() {
            return Err(Error::Shape(format!(
                "{} ranks for a lattice of {} subspaces",
                ranks.len(),
                index.len()
            )));
        }
        Ok(RankTable { index, ranks })
    }

    pub fn uniform(index: Arc<LatticeIndex>, k: u32) -> Result<RankTable> {
        if k as usize > index.ambient_dim() {
            return Err(Error::OutOfRange(format!(
                "uniform rank {k} on ambient dimension {}",
                index.ambient_dim()
            )));
        }
        let ranks = (0..index.len())
            .map(|id| (index.dim_of(id) as u32).min(k))
            .collect();
        let t = RankTable { index, ranks };
        t.validated()
    }

    /// Rank k−1 on the members of S, min(dim, k) elsewhere. S must consist of
    /// k-dimensional subspaces with pairwise intersection dimension <= k−2.
    pub fn paving_from_collection(
        index: Arc<LatticeIndex>,
        members: &[Subspace],
        k: u32,
    ) -> Result<RankTable> {
        let n = index.ambient_dim();
        if k == 0 || k as usize >= n {
            return Err(Error::OutOfRange(format!("paving requires 1 <= k <= {}", n - 1)));
        }
        let mut member_ids = Vec::with_capacity(members.len());
        for (pos, s) in members.iter().enumerate() {
            if s.dim() != k as usize {
                return Err(Error::InvalidCollection(format!(
                    "member {pos} has dimension {} (expected {k})",
                    s.dim()
                )));
            }
            let id = index.id_of(s).ok_or_else(|| {
                Error::AmbientMismatch(format!("member {pos} lies outside the indexed lattice"))
            })?;
            member_ids.push(id);
        }
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let meet = members[a].intersect(&members[b])?;
                if meet.dim() + 2 > k as usize {
                    return Err(Error::InvalidCollection(format!(
                        "members {a} and {b} intersect in dimension {} (> {})",
                        meet.dim(),
                        k as i64 - 2
                    )));
                }
            }
        }
        let mut ranks: Vec<u32> = (0..index.len())
            .map(|id| (index.dim_of(id) as u32).min(k))
            .collect();
        for &id in &member_ids {
            ranks[id] = k - 1;
        }
        let t = RankTable { index, ranks };
        t.validated()
    }

    fn validated(self) -> Result<RankTable> {
        match self.check_axioms().violation {
            None => Ok(self),
            Some(v) => Err(Error::AxiomViolation {
                axiom: v.axiom,
                ids: v.ids,
            }),
        }
    }

    pub fn index(&self) -> &Arc<LatticeIndex> {
        &self.index
    }
    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }
    pub fn rank_of(&self, id: usize) -> u32 {
        self.ranks[id]
    }
    /// ρ(E).
    pub fn rank(&self) -> u32 {
        self.ranks[self.index.full_id()]
    }
    pub fn q(&self) -> u64 {
        self.index.field().order()
    }
    pub fn ambient_dim(&self) -> usize {
        self.index.ambient_dim()
    }

    pub fn check_axioms(&self) -> AxiomReport {
        // Axiom 1 over ids first, then pairs in (j, i)-lex order; the first
        // witness in that order is reported, independent of thread count.
        for id in 0..self.index.len() {
            if self.ranks[id] as usize > self.index.dim_of(id) {
                return AxiomReport {
                    pass: false,
                    violation: Some(AxiomViolation {
                        axiom: 1,
                        ids: (id, id),
                    }),
                };
            }
        }
        let row = |j: usize| -> Option<AxiomViolation> {
            for i in 0..j {
                let info = self.index.pair_info(i, j);
                if info.meet == i {
                    if self.ranks[i] > self.ranks[j] {
                        return Some(AxiomViolation { axiom: 2, ids: (i, j) });
                    }
                } else if self.ranks[info.meet] + self.ranks[info.join]
                    > self.ranks[i] + self.ranks[j]
                {
                    return Some(AxiomViolation { axiom: 3, ids: (i, j) });
                }
            }
            None
        };
        #[cfg(feature = "parallel")]
        let violation = (1..self.index.len())
            .into_par_iter()
            .filter_map(|j| row(j).map(|v| (j, v)))
            .min_by_key(|&(j, v)| (j, v.ids.0))
            .map(|(_, v)| v);
        #[cfg(not(feature = "parallel"))]
        let violation = (1..self.index.len()).find_map(row);
        AxiomReport {
            pass: violation.is_none(),
            violation,
        }
    }

    /// ρ*(V) = dim V + ρ(V^⊥) − ρ(E); the input is validated first.
    pub fn dualize(&self) -> Result<RankTable> {
        if let Some(v) = self.check_axioms().violation {
            return Err(Error::AxiomViolation {
                axiom: v.axiom,
                ids: v.ids,
            });
        }
        let comp = self.index.complement_ids();
        let full = self.rank();
        let ranks = (0..self.index.len())
            .map(|v| self.index.dim_of(v) as u32 + self.ranks[comp[v]] - full)
            .collect();
        Ok(RankTable {
            index: self.index.clone(),
            ranks,
        })
    }

    pub fn derived_structure(&self) -> Structure {
        let rank = self.rank();
        let mut independents = Vec::new();
        let mut bases = Vec::new();
        let mut circuits = Vec::new();
        let mut loops = Vec::new();
        for id in 0..self.index.len() {
            let dim = self.index.dim_of(id) as u32;
            let independent = self.ranks[id] == dim;
            if independent {
                independents.push(id);
                if dim == rank {
                    bases.push(id);
                }
                continue;
            }
            if dim == 1 && self.ranks[id] == 0 {
                loops.push(id);
            }
            // Circuit: dependent with every hyperplane independent.
            if self
                .hyperplane_ids(id)
                .iter()
                .all(|&h| self.ranks[h] as usize == self.index.dim_of(h))
            {
                circuits.push(id);
            }
        }
        let field = self.index.field().clone();
        let n = self.index.ambient_dim();
        let mut loop_space = Subspace::zero(field, n);
        for &l in &loops {
            loop_space = loop_space.sum(self.index.subspace(l)).unwrap();
        }
        let is_paving = circuits
            .iter()
            .all(|&c| self.index.dim_of(c) as u32 >= rank);
        Structure {
            rank,
            independents,
            bases,
            circuits,
            loops,
            loop_space,
            is_paving,
        }
    }

    /// Codimension-1 subspaces of subspace(id): kernels of the nonzero
    /// functionals on it, one representative per projective class.
    fn hyperplane_ids(&self, id: usize) -> Vec<usize> {
        let v = self.index.subspace(id);
        let d = v.dim();
        if d == 0 {
            return Vec::new();
        }
        let f = self.index.field().clone();
        let s = f.order();
        let mut out = Vec::new();
        // Normalized functionals c: first nonzero coordinate is 1.
        let mut c = vec![0u64; d];
        loop {
            // Advance to the next coefficient vector.
            let mut i = 0;
            loop {
                c[i] += 1;
                if c[i] < s {
                    break;
                }
                c[i] = 0;
                i += 1;
                if i == d {
                    return out;
                }
            }
            if c.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            let functional =
                crate::matrix::Matrix::from_codes(f.clone(), 1, d, &c).unwrap();
            let coeffs = functional.kernel_basis();
            let rows = coeffs.mat_mul(v.basis()).unwrap();
            let h = Subspace::from_rows(&rows);
            debug_assert_eq!(h.dim(), d - 1);
            out.push(self.index.id_of(&h).unwrap());
        }
    }
}

/// Every rank table with ρ(E) <= k_max on the indexed lattice, in
/// lexicographic rank-vector order. Backtracking over canonical ids with
/// monotonicity bounds from proper subspaces and submodularity enforced at
/// each join keeps axioms invariant, so no post-validation is needed.
pub fn enumerate_qmatroids(index: &Arc<LatticeIndex>, k_max: u32) -> Result<Vec<RankTable>> {
    let len = index.len();
    if len > ENUMERATION_CEILING {
        return Err(Error::CeilingExceeded(format!(
            "q-matroid enumeration over {len} subspaces (ceiling {ENUMERATION_CEILING})"
        )));
    }
    let mut subs_of: Vec<Vec<u32>> = vec![Vec::new(); len];
    let mut join_bucket: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); len];
    for j in 1..len {
        for i in 0..j {
            let info = index.pair_info(i, j);
            if info.meet == i {
                subs_of[j].push(i as u32);
            } else {
                join_bucket[info.join].push((i as u32, j as u32, info.meet as u32));
            }
        }
    }
    let mut out = Vec::new();
    let mut ranks = vec![0u32; len];
    fn dfs(
        index: &Arc<LatticeIndex>,
        subs_of: &[Vec<u32>],
        join_bucket: &[Vec<(u32, u32, u32)>],
        k_max: u32,
        ranks: &mut Vec<u32>,
        depth: usize,
        out: &mut Vec<RankTable>,
    ) {
        let len = subs_of.len();
        if depth == len {
            out.push(RankTable {
                index: index.clone(),
                ranks: ranks.clone(),
            });
            return;
        }
        let dim = index.dim_of(depth) as u32;
        let mut lb = 0;
        for &w in &subs_of[depth] {
            lb = lb.max(ranks[w as usize]);
        }
        let mut ub = dim.min(k_max);
        for &(i, j, meet) in &join_bucket[depth] {
            let cap = ranks[i as usize] + ranks[j as usize] - ranks[meet as usize];
            ub = ub.min(cap);
        }
        for r in lb..=ub {
            ranks[depth] = r;
            dfs(index, subs_of, join_bucket, k_max, ranks, depth + 1, out);
        }
    }
    dfs(index, &subs_of, &join_bucket, k_max, &mut ranks, 0, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lattice::gaussian_binomial;
    use crate::matrix::Matrix;
    use num_bigint::BigUint;

    fn f2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    fn span(field: &FieldSpec, n: usize, rows: &[&[u64]]) -> Subspace {
        let codes: Vec<u64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Subspace::from_rows(&Matrix::from_codes(field.clone(), rows.len(), n, &codes).unwrap())
    }

    fn motivating_paving() -> RankTable {
        let idx = LatticeIndex::build(&f2(), 4).unwrap();
        let v = span(&f2(), 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let w = span(&f2(), 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        RankTable::paving_from_collection(idx, &[v, w], 2).unwrap()
    }

    #[test]
    fn uniform_tables_pass_axioms() {
        for (p, n) in [(2u64, 4usize), (2, 5), (3, 3)] {
            let idx = LatticeIndex::build(&FieldSpec::new(p, 1).unwrap(), n).unwrap();
            for k in 0..=n as u32 {
                let t = RankTable::uniform(idx.clone(), k).unwrap();
                assert!(t.check_axioms().pass, "U_{k},{n} over F_{p}");
                assert_eq!(t.rank(), k);
            }
        }
        let idx = LatticeIndex::build(&f2(), 4).unwrap();
        assert!(RankTable::uniform(idx, 5).is_err());
    }

    #[test]
    fn corrupt_tables_fail_with_reproducible_witness() {
        let idx = LatticeIndex::build(&f2(), 3).unwrap();
        let t = RankTable::uniform(idx.clone(), 2).unwrap();

        // Axiom 1: rank above dimension. Witness is the offending id, twice.
        let mut ranks = t.ranks().to_vec();
        ranks[1] = 3;
        let bad = RankTable::from_raw_ranks(idx.clone(), ranks).unwrap();
        let rep = bad.check_axioms();
        let v = rep.violation.unwrap();
        assert!(!rep.pass);
        assert_eq!(v.axiom, 1);
        assert_eq!(v.ids, (1, 1));
        assert!(bad.rank_of(1) as usize > idx.dim_of(1));

        // Axiom 2: pin ρ(E) below the planes. The planes keep rank 2, so the
        // first comparable pair scanned in the full space's row witnesses it.
        let mut ranks = t.ranks().to_vec();
        ranks[idx.full_id()] = 1;
        let bad = RankTable::from_raw_ranks(idx.clone(), ranks).unwrap();
        let v = bad.check_axioms().violation.unwrap();
        assert_eq!(v.axiom, 2);
        let first_plane = idx.ids_of_dim(2).next().unwrap();
        assert_eq!(v.ids, (first_plane, idx.full_id()));
        assert!(bad.rank_of(v.ids.0) > bad.rank_of(v.ids.1));

        // Axiom 3: lines of rank 0 under planes of rank 1. Monotone and
        // within dimension, but two lines beat their join. The witness is the
        // first incomparable pair in (j, i)-lex order: the first two lines.
        let ranks: Vec<u32> = (0..idx.len())
            .map(|id| if idx.dim_of(id) >= 2 { 1 } else { 0 })
            .collect();
        let bad = RankTable::from_raw_ranks(idx.clone(), ranks).unwrap();
        let v = bad.check_axioms().violation.unwrap();
        assert_eq!(v.axiom, 3);
        assert_eq!(v.ids, (1, 2));
        let info = idx.pair_info(v.ids.0, v.ids.1);
        assert!(
            bad.rank_of(info.meet) + bad.rank_of(info.join)
                > bad.rank_of(v.ids.0) + bad.rank_of(v.ids.1)
        );
    }

    #[test]
    fn submodularity_is_equality_on_comparable_pairs() {
        // Holds for any table whatsoever, which is why the pair scan may skip
        // comparable pairs for axiom 3.
        let idx = LatticeIndex::build(&f2(), 3).unwrap();
        let arbitrary: Vec<u32> = (0..idx.len()).map(|i| (i as u32 * 7 + 3) % 5).collect();
        for j in 1..idx.len() {
            for i in 0..j {
                let info = idx.pair_info(i, j);
                if info.meet == i {
                    assert_eq!(info.join, j);
                    assert_eq!(
                        arbitrary[info.meet] + arbitrary[info.join],
                        arbitrary[i] + arbitrary[j]
                    );
                }
            }
        }
    }

    #[test]
    fn paving_example_has_33_bases() {
        let t = motivating_paving();
        assert!(t.check_axioms().pass);
        assert_eq!(t.rank(), 2);
        let s = t.derived_structure();
        assert_eq!(s.bases.len(), 33);
        assert!(s.is_paving);
        assert!(s.loops.is_empty());
        assert_eq!(s.loop_space.dim(), 0);
        // The dim-2 circuits are exactly the defining collection; the rest
        // are the 3-spaces containing neither member (each member lies in 3
        // of the 15, and none holds both, leaving 9).
        let idx = t.index();
        let v = span(&f2(), 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let w = span(&f2(), 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let mut expect = vec![idx.id_of(&v).unwrap(), idx.id_of(&w).unwrap()];
        expect.extend(
            idx.ids_of_dim(3)
                .filter(|&id| !idx.subspace(id).contains(&v) && !idx.subspace(id).contains(&w)),
        );
        expect.sort();
        assert_eq!(s.circuits, expect);
        assert_eq!(s.circuits.len(), 11);
        let dim2: Vec<usize> = s
            .circuits
            .iter()
            .copied()
            .filter(|&c| idx.dim_of(c) == 2)
            .collect();
        assert_eq!(dim2, {
            let mut m = vec![idx.id_of(&v).unwrap(), idx.id_of(&w).unwrap()];
            m.sort();
            m
        });
    }

    #[test]
    fn paving_rejects_close_members_and_empty_gives_uniform() {
        let idx = LatticeIndex::build(&f2(), 4).unwrap();
        let a = span(&f2(), 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = span(&f2(), 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert!(matches!(
            RankTable::paving_from_collection(idx.clone(), &[a.clone(), b], 2),
            Err(Error::InvalidCollection(_))
        ));
        let empty = RankTable::paving_from_collection(idx.clone(), &[], 2).unwrap();
        assert_eq!(empty, RankTable::uniform(idx.clone(), 2).unwrap());
        assert!(RankTable::paving_from_collection(idx.clone(), &[], 0).is_err());
        assert!(RankTable::paving_from_collection(idx, &[a], 4).is_err());
    }

    #[test]
    fn dual_of_uniform_and_involution() {
        let idx = LatticeIndex::build(&f2(), 4).unwrap();
        for k in 0..=4u32 {
            let t = RankTable::uniform(idx.clone(), k).unwrap();
            let dual = t.dualize().unwrap();
            assert_eq!(dual, RankTable::uniform(idx.clone(), 4 - k).unwrap());
            assert_eq!(dual.dualize().unwrap(), t);
        }
        let idx3 = LatticeIndex::build(&FieldSpec::new(3, 1).unwrap(), 3).unwrap();
        for k in 0..=3u32 {
            let t = RankTable::uniform(idx3.clone(), k).unwrap();
            assert_eq!(t.dualize().unwrap(), RankTable::uniform(idx3.clone(), 3 - k).unwrap());
        }
    }

    #[test]
    fn motivating_paving_is_self_dual() {
        // Its two circuits are each other's orthogonal complements.
        let t = motivating_paving();
        assert_eq!(t.dualize().unwrap(), t);
    }

    #[test]
    fn dualize_rejects_invalid_input() {
        let idx = LatticeIndex::build(&f2(), 3).unwrap();
        let mut ranks = vec![0u32; idx.len()];
        ranks[idx.full_id()] = 3;
        let bad = RankTable::from_raw_ranks(idx, ranks).unwrap();
        assert!(matches!(bad.dualize(), Err(Error::AxiomViolation { .. })));
    }

    #[test]
    fn structure_of_uniform_2_4() {
        let idx = LatticeIndex::build(&f2(), 4).unwrap();
        let t = RankTable::uniform(idx.clone(), 2).unwrap();
        let s = t.derived_structure();
        assert_eq!(s.rank, 2);
        assert_eq!(s.bases.len(), 35);
        assert_eq!(s.independents.len(), 1 + 15 + 35);
        // Circuits of U_{2,4} are exactly the 3-dimensional subspaces.
        assert_eq!(s.circuits.len(), 15);
        assert!(s.circuits.iter().all(|&c| idx.dim_of(c) == 3));
        assert!(s.is_paving);
    }

    #[test]
    fn rank1_loop_space() {
        // ρ(V) = 0 iff V <= span(e1), else 1.
        let idx = LatticeIndex::build(&f2(), 3).unwrap();
        let e1 = span(&f2(), 3, &[&[1, 0, 0]]);
        let contained: Vec<bool> = (0..idx.len())
            .map(|id| e1.contains(idx.subspace(id)))
            .collect();
        let ranks: Vec<u32> = contained.iter().map(|&c| if c { 0 } else { 1 }).collect();
        let t = RankTable::from_raw_ranks(idx.clone(), ranks).unwrap();
        assert!(t.check_axioms().pass);
        let s = t.derived_structure();
        assert_eq!(s.loops, vec![idx.id_of(&e1).unwrap()]);
        assert_eq!(s.loop_space, e1);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn enumeration_counts() {
        let idx2 = LatticeIndex::build(&f2(), 2).unwrap();
        let all = enumerate_qmatroids(&idx2, 1).unwrap();
        assert_eq!(all.iter().filter(|t| t.rank() == 1).count(), 4);
        assert_eq!(all.len(), 5); // plus the zero table

        let idx3 = LatticeIndex::build(&f2(), 3).unwrap();
        let rank1 = enumerate_qmatroids(&idx3, 1).unwrap();
        assert_eq!(rank1.iter().filter(|t| t.rank() == 1).count(), 15);

        // Oracle for the full count on F_2^3: ranks 0 and 3 are unique, and
        // duality gives a bijection between rank 1 and rank 2.
        let all3 = enumerate_qmatroids(&idx3, 3).unwrap();
        assert_eq!(all3.len(), 1 + 15 + 15 + 1);
        for t in &all3 {
            assert!(t.check_axioms().pass);
            let dual = t.dualize().unwrap();
            assert!(all3.contains(&dual));
        }

        // Census over F_3^3 matches the loop-space count Σ [3 i]_3.
        let idx33 = LatticeIndex::build(&FieldSpec::new(3, 1).unwrap(), 3).unwrap();
        let rank1 = enumerate_qmatroids(&idx33, 1).unwrap();
        let expect: BigUint = (0..3u64)
            .map(|i| gaussian_binomial(3, i, 3).unwrap())
            .sum();
        assert_eq!(
            BigUint::from(rank1.iter().filter(|t| t.rank() == 1).count() as u64),
            expect
        );
    }

    #[test]
    fn enumeration_is_sorted_and_ceiling_guarded() {
        let idx = LatticeIndex::build(&f2(), 3).unwrap();
        let all = enumerate_qmatroids(&idx, 3).unwrap();
        for w in all.windows(2) {
            assert!(w[0].ranks() < w[1].ranks());
        }
        let big = LatticeIndex::build(&f2(), 6).unwrap();
        assert!(matches!(
            enumerate_qmatroids(&big, 1),
            Err(Error::CeilingExceeded(_))
        ));
    }
}
