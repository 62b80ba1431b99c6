use std::collections::VecDeque;
use std::sync::Arc;

use crate::algebra::{fixed_subspace, FiniteField, MatrixFF};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A linear representation `ρ: G → GL_r(F_{ℓ^n})` of a finite group, stored
/// as one matrix per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    group: FiniteGroup,
    field: Arc<FiniteField>,
    r: usize,
    images: Vec<MatrixFF>,
}

impl Representation {
    /// Takes an image for every element and checks the whole
    /// multiplication table.
    pub fn new(
        group: FiniteGroup,
        field: &Arc<FiniteField>,
        images: Vec<MatrixFF>,
    ) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::GroupMismatch);
        }
        let r = images.first().map_or(0, |m| m.dim());
        for m in &images {
            if **m.field() != **field || m.dim() != r {
                return Err(Error::DimensionMismatch(
                    "images must share one field and one size".into(),
                ));
            }
            if !m.is_invertible() {
                return Err(Error::NotHomomorphism("image is not invertible".into()));
            }
        }
        for x in group.elements() {
            for y in group.elements() {
                if images[x].mul(&images[y])? != images[group.mul(x, y)] {
                    return Err(Error::NotHomomorphism(format!(
                        "ρ({})ρ({}) ≠ ρ({}·{})",
                        group.label(x),
                        group.label(y),
                        group.label(x),
                        group.label(y)
                    )));
                }
            }
        }
        Ok(Representation {
            group,
            field: Arc::clone(field),
            r,
            images,
        })
    }

    /// Extends images of group generators to the whole group by breadth-first
    /// search over words, then checks the full table.
    pub fn from_generator_images(
        group: FiniteGroup,
        field: &Arc<FiniteField>,
        r: usize,
        gens: &[(usize, MatrixFF)],
    ) -> Result<Self> {
        let mut images: Vec<Option<MatrixFF>> = vec![None; group.order()];
        images[group.identity()] = Some(MatrixFF::identity(field, r));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let mx = images[x].clone().expect("queued elements have images");
            for (g, mg) in gens {
                if *g >= group.order() {
                    return Err(Error::InvalidInput(format!("no group element {g}")));
                }
                let y = group.mul(x, *g);
                let my = mx.mul(mg)?;
                match &images[y] {
                    Some(existing) if *existing != my => {
                        return Err(Error::NotHomomorphism(format!(
                            "two words for {} have different images",
                            group.label(y)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        images[y] = Some(my);
                        queue.push_back(y);
                    }
                }
            }
        }
        let images = images
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::InvalidInput("the given elements do not generate the group".into())
            })?;
        Self::new(group, field, images)
    }

    /// The trivial representation of rank `r`.
    pub fn trivial(group: FiniteGroup, field: &Arc<FiniteField>, r: usize) -> Self {
        let images = vec![MatrixFF::identity(field, r); group.order()];
        Representation {
            group,
            field: Arc::clone(field),
            r,
            images,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `ℓ`, the characteristic of the coefficient field.
    pub fn ell(&self) -> u64 {
        self.field.characteristic() as u64
    }

    /// `n` with coefficient field `F_{ℓ^n}`.
    pub fn n(&self) -> u32 {
        self.field.degree()
    }

    pub fn image(&self, x: usize) -> &MatrixFF {
        &self.images[x]
    }

    pub fn images(&self) -> &[MatrixFF] {
        &self.images
    }

    /// `dim V^S` for a set of group elements.
    pub fn fixed_dimension(&self, set: &[usize]) -> Result<usize> {
        if self.r == 0 {
            return Ok(0);
        }
        let mats: Vec<MatrixFF> = set.iter().map(|&x| self.images[x].clone()).collect();
        if mats.is_empty() {
            return Ok(self.r);
        }
        Ok(fixed_subspace(&mats)?.dimension)
    }

    /// Elements acting trivially.
    pub fn kernel(&self) -> Vec<usize> {
        self.group
            .elements()
            .filter(|&x| self.images[x].is_identity())
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    /// Distinct matrices in the image, sorted by entries.
    pub fn image_matrices(&self) -> Vec<MatrixFF> {
        let mut out = self.images.clone();
        out.sort_by(|a, b| a.entries().cmp(b.entries()));
        out.dedup();
        out
    }

    /// Restriction along a subgroup embedding `sub → group`.
    pub fn restrict(&self, sub: FiniteGroup, embedding: &[usize]) -> Result<Self> {
        if embedding.len() != sub.order() {
            return Err(Error::GroupMismatch);
        }
        let images = embedding.iter().map(|&x| self.images[x].clone()).collect();
        Self::new(sub, &self.field, images)
    }

    /// `ρ ⊕ σ` as block-diagonal matrices.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        let (a, b) = (self.r, other.r);
        let n = a + b;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| {
                let mut e = vec![0u32; n * n];
                for i in 0..a {
                    for j in 0..a {
                        e[i * n + j] = x.get(i, j);
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        e[(a + i) * n + a + j] = y.get(i, j);
                    }
                }
                MatrixFF::new(&self.field, n, e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Representation {
            group: self.group.clone(),
            field: Arc::clone(&self.field),
            r: n,
            images,
        })
    }
}
