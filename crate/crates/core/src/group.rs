//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..n`. Subgroups and other subsets are sorted index
//! vectors. A group may carry a matrix realization (one matrix per element),
//! which is how images of representations are handled.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::algebra::matrix::MatrixFF;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
    generators: Vec<usize>,
    matrices: Option<Vec<MatrixFF>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table && self.identity == other.identity
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table. Verifies that
    /// the table is a Latin square with a two-sided identity; associativity
    /// is the caller's responsibility (see [`Self::verify_axioms`]).
    pub fn from_table(
        n: usize,
        table: Vec<usize>,
        labels: Vec<String>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        if n == 0 || table.len() != n * n || labels.len() != n {
            return Err(Error::NotAGroup("table shape does not match order".into()));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(Error::NotAGroup("product outside the element set".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x * n + y] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {x} has no inverse")))?;
            if table[y * n + x] != identity {
                return Err(Error::NotAGroup(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
            inverses[x] = y;
        }
        for x in 0..n {
            let mut row: Vec<usize> = table[x * n..(x + 1) * n].to_vec();
            row.sort_unstable();
            row.dedup();
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {x} repeats an element")));
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::NotAGroup("generator index out of range".into()));
        }
        Ok(FiniteGroup {
            n,
            table,
            identity,
            inverses,
            labels,
            generators,
            matrices: None,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with element `k` the `k`-th power of the generator.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let labels = (0..n).map(|k| format!("g^{k}")).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::from_table(n, table, labels, gens).expect("cyclic group table")
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`. Generators are those of
    /// `G` paired with the identity, then those of `H`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (a, b) = (g.n, h.n);
        let n = a * b;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = (x / b, x % b);
                let (y1, y2) = (y / b, y % b);
                table[x * n + y] = g.mul(x1, y1) * b + h.mul(x2, y2);
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", g.labels[x / b], h.labels[x % b]))
            .collect();
        let mut gens: Vec<usize> = g.generators.iter().map(|&x| x * b + h.identity).collect();
        gens.extend(h.generators.iter().map(|&y| g.identity * b + y));
        Self::from_table(n, table, labels, gens).expect("product of groups is a group")
    }

    pub fn with_matrices(mut self, matrices: Vec<MatrixFF>) -> Self {
        assert_eq!(matrices.len(), self.n);
        self.matrices = Some(matrices);
        self
    }

    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        assert!(generators.iter().all(|&g| g < self.n));
        self.generators = generators;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn matrices(&self) -> Option<&[MatrixFF]> {
        self.matrices.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Full check of the group axioms, associativity included (`O(n^3)`).
    pub fn verify_axioms(&self) -> Result<()> {
        for x in 0..self.n {
            for y in 0..self.n {
                let xy = self.mul(x, y);
                for z in 0..self.n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
            if self.mul(x, self.inv(x)) != self.identity {
                return Err(Error::NotAGroup(format!("bad inverse for {x}")));
            }
        }
        Ok(())
    }

    pub fn power(&self, x: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// `h x h^{-1}`.
    pub fn conjugate(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_abelian(&self) -> bool {
        self.subset_is_abelian(&(0..self.n).collect::<Vec<_>>())
    }

    pub fn subset_is_abelian(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| set.iter().all(|&y| self.commute(x, y)))
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if !set.contains(&self.identity) {
            return false;
        }
        let members: BTreeSet<usize> = set.iter().copied().collect();
        set.iter()
            .all(|&x| set.iter().all(|&y| members.contains(&self.mul(x, y))))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        set.iter().all(|&x| {
            self.generators_or_all()
                .into_iter()
                .all(|h| members.contains(&self.conjugate(x, h)))
        })
    }

    fn generators_or_all(&self) -> Vec<usize> {
        if self.generators.is_empty() || self.subgroup_generated(&self.generators).len() != self.n {
            (0..self.n).collect()
        } else {
            self.generators.clone()
        }
    }

    /// Elements whose order is a power of `p` (identity included).
    pub fn p_elements(&self, p: u64) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| is_power_of(self.element_order(x), p))
            .collect()
    }

    pub fn centralizer(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| set.iter().all(|&y| self.commute(x, y)))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        self.centralizer(&(0..self.n).collect::<Vec<_>>())
    }

    pub fn normal_closure(&self, set: &[usize]) -> Vec<usize> {
        let conj: Vec<usize> = set
            .iter()
            .flat_map(|&x| (0..self.n).map(move |h| (x, h)))
            .map(|(x, h)| self.conjugate(x, h))
            .collect();
        self.subgroup_generated(&conj)
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|x| self.element_order(x) as usize == self.n)
    }

    /// The subgroup `set` as a group in its own right, plus the embedding
    /// (index in the new group ↦ index here).
    pub fn induced(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(set) {
            return Err(Error::NotAGroup("subset is not a subgroup".into()));
        }
        let pos: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = set.len();
        let mut table = vec![0; m * m];
        for (i, &x) in set.iter().enumerate() {
            for (j, &y) in set.iter().enumerate() {
                table[i * m + j] = pos[&self.mul(x, y)];
            }
        }
        let labels = set.iter().map(|&x| self.labels[x].clone()).collect();
        let gens = self
            .generators
            .iter()
            .filter_map(|g| pos.get(g).copied())
            .collect::<Vec<_>>();
        let mut sub = FiniteGroup::from_table(m, table, labels, gens)?;
        if sub.subgroup_generated(&sub.generators).len() != m {
            sub.generators = minimal_generators(&sub);
        }
        if let Some(mats) = &self.matrices {
            sub.matrices = Some(set.iter().map(|&x| mats[x].clone()).collect());
        }
        Ok((sub, set.to_vec()))
    }

    /// `G/N` for a normal subgroup `N`, with the projection map. Cosets are
    /// ordered by their least element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::NotAGroup("quotient by a non-normal subset".into()));
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n {
            if proj[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &h in normal {
                proj[self.mul(x, h)] = idx;
            }
        }
        let m = reps.len();
        let mut table = vec![0; m * m];
        for (i, &x) in reps.iter().enumerate() {
            for (j, &y) in reps.iter().enumerate() {
                table[i * m + j] = proj[self.mul(x, y)];
            }
        }
        let labels = reps
            .iter()
            .map(|&x| format!("{}N", self.labels[x]))
            .collect();
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| proj[g]).collect();
        gens.sort_unstable();
        gens.dedup();
        let q = FiniteGroup::from_table(m, table, labels, gens)?;
        Ok((q, proj))
    }

    pub fn image(&self, proj: &[usize], set: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().map(|&x| proj[x]).collect();
        s.into_iter().collect()
    }

    pub fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
        let bs: BTreeSet<usize> = b.iter().copied().collect();
        a.iter().copied().filter(|x| bs.contains(x)).collect()
    }
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 {
        if !n.is_multiple_of(p) {
            return false;
        }
        n /= p;
    }
    n == 1
}

/// Greedy generating set: add the least element not yet covered.
pub fn minimal_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.subgroup_generated(&gens);
    while span.len() < g.order() {
        let x = (0..g.order()).find(|x| !span.contains(x)).unwrap();
        gens.push(x);
        span = g.subgroup_generated(&gens);
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        // permutations of {0,1,2} as arrays, composed (p∘q)(i) = p[q[i]]
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let mut table = vec![0; 36];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                table[i * 6 + j] = idx([p[q[0]], p[q[1]], p[q[2]]]);
            }
        }
        let labels = (0..6).map(|i| format!("{:?}", perms[i])).collect();
        FiniteGroup::from_table(6, table, labels, vec![1, 3]).unwrap()
    }

    #[test]
    fn cyclic_and_products() {
        let z6 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        z6.verify_axioms().unwrap();
        assert!(z6.is_abelian());
        assert!(z6.is_cyclic());
        assert_eq!(z6.element_order(z6.generators()[0]), 2);
        assert_eq!(z6.element_order(z6.generators()[1]), 3);
    }

    #[test]
    fn s3_structure() {
        let g = s3();
        g.verify_axioms().unwrap();
        assert!(!g.is_abelian());
        let a3 = g.subgroup_generated(&[1]);
        assert_eq!(a3.len(), 3);
        assert!(g.is_normal(&a3));
        let t = g.subgroup_generated(&[3]);
        assert!(!g.is_normal(&t));
        let (q, proj) = g.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj[3], 1);
        assert_eq!(g.p_elements(3), vec![0, 1, 2]);
        assert_eq!(g.center(), vec![0]);
    }

    #[test]
    fn rejects_non_groups() {
        // constant table: no identity
        assert!(
            FiniteGroup::from_table(2, vec![0, 0, 0, 0], vec!["a".into(), "b".into()], vec![])
                .is_err()
        );
    }
}
