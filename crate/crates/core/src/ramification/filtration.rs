use crate::cover::BreakTable;
use crate::error::{Error, Result};
use crate::group::{is_power_of, FiniteGroup};

use super::{Herbrand, Q};

/// Lower-numbering filtration `G = G_0 ⊇ G_1 ⊇ ... ⊇ G_{i_max} ⊋ G_{i_max+1} = 1`
/// of a totally ramified cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamFiltration {
    group: FiniteGroup,
    p: u64,
    /// `subgroups[i] = G_i` for `0 <= i <= i_max`.
    subgroups: Vec<Vec<usize>>,
    trivial: Vec<usize>,
}

impl RamFiltration {
    /// `G_i = {σ : i_G(σ) >= i + 1}`.
    pub fn from_breaks(bt: &BreakTable) -> Result<Self> {
        let g = bt.group();
        let top = bt.max_break().unwrap_or(1);
        let subgroups = (0..top)
            .map(|i| {
                g.elements()
                    .filter(|&x| bt.i_g(x).is_none_or(|b| b > i))
                    .collect()
            })
            .collect();
        Self::from_subgroups(g.clone(), bt.residue_characteristic(), subgroups)
    }

    /// Builds a filtration from its groups `G_0, G_1, ...`; trailing trivial
    /// groups are dropped. `G_0` must be the whole group.
    pub fn from_subgroups(
        group: FiniteGroup,
        p: u64,
        mut subgroups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let trivial = vec![group.identity()];
        for s in &mut subgroups {
            s.sort_unstable();
            s.dedup();
        }
        while subgroups.len() > 1 && subgroups.last() == Some(&trivial) {
            subgroups.pop();
        }
        if subgroups.is_empty() {
            subgroups.push(group.elements().collect());
        }
        if subgroups[0].len() != group.order() {
            return Err(Error::InvalidInput("G_0 must be the whole group".into()));
        }
        for (i, s) in subgroups.iter().enumerate() {
            if !group.is_subgroup(s) || !group.is_normal(s) {
                return Err(Error::InvalidInput(format!(
                    "G_{i} is not a normal subgroup"
                )));
            }
            if i > 0 && !s.iter().all(|x| subgroups[i - 1].binary_search(x).is_ok()) {
                return Err(Error::InvalidInput(format!(
                    "G_{i} is not contained in G_{}",
                    i - 1
                )));
            }
        }
        let filt = RamFiltration {
            group,
            p,
            subgroups,
            trivial,
        };
        if !is_power_of(filt.order(1) as u64, p) {
            return Err(Error::NotPGroupWildPart(format!(
                "|G_1| = {} is not a power of {p}",
                filt.order(1)
            )));
        }
        Ok(filt)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.p
    }

    /// Largest `i` with `G_i ≠ 1`, or 0 when `G_0 = 1`.
    pub fn i_max(&self) -> i64 {
        self.subgroups.len() as i64 - 1
    }

    /// `G_i`; `G_i = G_0` for negative `i`.
    pub fn g(&self, i: i64) -> &[usize] {
        if i <= 0 {
            &self.subgroups[0]
        } else {
            self.subgroups.get(i as usize).unwrap_or(&self.trivial)
        }
    }

    /// `G_u = G_{⌈u⌉}` for rational `u`.
    pub fn g_at(&self, u: Q) -> &[usize] {
        self.g(u.ceil().to_integer())
    }

    pub fn order(&self, i: i64) -> usize {
        self.g(i).len()
    }

    /// All stored groups `G_0, ..., G_{i_max}`.
    pub fn subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }

    /// Integers `j >= 0` with `G_j ≠ G_{j+1}`.
    pub fn lower_jumps(&self) -> Vec<i64> {
        (0..=self.i_max())
            .filter(|&j| self.order(j) != self.order(j + 1))
            .collect()
    }

    pub fn is_tame(&self) -> bool {
        self.order(1) == 1
    }

    /// `H_i = G_i ∩ H` on the subgroup `H`, same lower numbering. Returns
    /// the filtration of `H` (indexed in its own group) and the embedding.
    pub fn restrict(&self, subgroup: &[usize]) -> Result<(RamFiltration, Vec<usize>)> {
        let (h, emb) = self.group.induced(subgroup)?;
        let subgroups = (0..=self.i_max())
            .map(|i| {
                let gi = self.g(i);
                (0..h.order())
                    .filter(|&x| gi.binary_search(&emb[x]).is_ok())
                    .collect()
            })
            .collect();
        Ok((Self::from_subgroups(h, self.p, subgroups)?, emb))
    }

    /// Filtration of `G/H` from Herbrand's theorem,
    /// `(G/H)_v = G_{ψ_{L/K'}(v)} H / H`, where `phi_h` is the Herbrand
    /// function of the restricted filtration on `H`.
    pub fn quotient(
        &self,
        normal: &[usize],
        phi_h: &Herbrand,
    ) -> Result<(RamFiltration, Vec<usize>)> {
        let (q, proj) = self.group.quotient(normal)?;
        let psi = phi_h.inverse();
        let mut subgroups = Vec::new();
        let mut v = 0i64;
        loop {
            let u = psi.eval(Q::from_integer(v));
            let img = self.group.image(&proj, self.g_at(u));
            let done = img.len() == 1;
            subgroups.push(img);
            if done {
                break;
            }
            v += 1;
        }
        Ok((Self::from_subgroups(q, self.p, subgroups)?, proj))
    }
}
