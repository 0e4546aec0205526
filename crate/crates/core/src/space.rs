//! Finite vector spaces GF(p)^n and their element encoding.
//!
//! Element `idx` of GF(p)^n is the vector of little-endian base-p digits of
//! `idx`, i.e. `idx = sum_j v_j * p^j`. This encoding is part of the on-disk
//! table format and must not change.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};

/// Index of an element of a finite vector space.
pub type ElementIndex = usize;

pub const DEFAULT_ELEMENT_CAP: usize = 1 << 16;
pub const DEFAULT_TRIPLE_CAP: u64 = 1 << 27;

/// Enumeration limits. `element_cap` bounds `p^dim` for every space that is
/// enumerated; `triple_cap` bounds `|V|^3` for laws quantified over triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub element_cap: usize,
    pub triple_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            element_cap: DEFAULT_ELEMENT_CAP,
            triple_cap: DEFAULT_TRIPLE_CAP,
        }
    }
}

impl Limits {
    /// Process-wide limits. `VG_CAP` overrides the element cap.
    pub fn global() -> Limits {
        static GLOBAL: OnceLock<Limits> = OnceLock::new();
        *GLOBAL.get_or_init(|| {
            let mut limits = Limits::default();
            if let Some(cap) = std::env::var("VG_CAP")
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
            {
                limits.element_cap = cap;
            }
            limits
        })
    }

    pub fn check_triples(&self, size: usize, what: &str) -> Result<()> {
        let cube = (size as u64).saturating_pow(3);
        if cube > self.triple_cap {
            return Err(Error::CapExceeded(format!(
                "{what}: |V|^3 = {cube} exceeds {}",
                self.triple_cap
            )));
        }
        Ok(())
    }
}

/// The space GF(p)^dim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceRef {
    field: FieldSpec,
    dim: usize,
}

impl SpaceRef {
    /// A space handle without any size check; use for spaces that are only
    /// manipulated through linear algebra, never enumerated.
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        Self { field, dim }
    }

    /// A space that fits under the global enumeration cap.
    pub fn enumerable(field: FieldSpec, dim: usize) -> Result<Self> {
        let space = Self { field, dim };
        space.size_within(Limits::global().element_cap)?;
        Ok(space)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p^dim`, or `None` on overflow.
    pub fn checked_size(&self) -> Option<usize> {
        (self.field.p() as usize).checked_pow(self.dim as u32)
    }

    pub fn size_within(&self, cap: usize) -> Result<usize> {
        match self.checked_size() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(Error::CapExceeded(format!(
                "GF({})^{} exceeds the enumeration cap {cap}",
                self.field.p(),
                self.dim
            ))),
        }
    }

    /// Size of the space. Panics if the space was never checked against a
    /// cap and overflows `usize`.
    pub fn size(&self) -> usize {
        self.checked_size().expect("space size overflows usize")
    }

    pub fn index_to_vector(&self, idx: ElementIndex) -> Result<Vec<Scalar>> {
        let size = self.checked_size().unwrap_or(usize::MAX);
        if idx >= size {
            return Err(Error::IndexOutOfRange { idx, size });
        }
        Ok(self.decode(idx))
    }

    pub fn vector_to_index(&self, v: &[Scalar]) -> Result<ElementIndex> {
        if v.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in a space of dimension {}",
                v.len(),
                self.dim
            )));
        }
        for (i, &c) in v.iter().enumerate() {
            self.field.check_scalar(i, c)?;
        }
        Ok(self.encode(v))
    }

    /// Digits of `idx`; `idx` must already be in range.
    #[inline]
    pub(crate) fn decode(&self, mut idx: ElementIndex) -> Vec<Scalar> {
        let p = self.field.p() as usize;
        (0..self.dim)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d as Scalar
            })
            .collect()
    }

    /// Index of a vector whose coordinates are already reduced.
    #[inline]
    pub(crate) fn encode(&self, v: &[Scalar]) -> ElementIndex {
        let p = self.field.p() as usize;
        v.iter().rev().fold(0, |acc, &d| acc * p + d as usize)
    }

    pub fn zero(&self) -> ElementIndex {
        0
    }

    /// Index of the j-th standard basis vector.
    pub fn basis_element(&self, j: usize) -> ElementIndex {
        (self.field.p() as usize).pow(j as u32)
    }

    pub fn iter(&self) -> std::ops::Range<ElementIndex> {
        0..self.size()
    }

    fn digitwise(
        &self,
        a: ElementIndex,
        b: ElementIndex,
        op: impl Fn(u32, u32) -> u32,
    ) -> ElementIndex {
        let p = self.field.p() as usize;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.dim {
            let d = op((a % p) as u32, (b % p) as u32) as usize;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn add(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        let f = self.field;
        self.digitwise(a, b, |x, y| f.add(x, y))
    }

    pub fn sub(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        let f = self.field;
        self.digitwise(a, b, |x, y| f.sub(x, y))
    }

    pub fn scale(&self, k: Scalar, a: ElementIndex) -> ElementIndex {
        let f = self.field;
        self.digitwise(a, 0, |x, _| f.mul(k, x))
    }

    pub fn neg(&self, a: ElementIndex) -> ElementIndex {
        self.sub(0, a)
    }

    /// All elements of the span of `basis`, ascending and deduplicated.
    pub fn enumerate_span(&self, basis: &[Vec<Scalar>]) -> Result<Vec<ElementIndex>> {
        let mut span = BTreeSet::from([0]);
        for v in basis {
            let g = self.vector_to_index(v)?;
            let multiples: Vec<ElementIndex> =
                (1..self.field.p()).map(|k| self.scale(k, g)).collect();
            let current: Vec<ElementIndex> = span.iter().copied().collect();
            for s in current {
                for &m in &multiples {
                    span.insert(self.add(s, m));
                }
            }
        }
        Ok(span.into_iter().collect())
    }
}

pub fn index_to_vector(idx: ElementIndex, space: &SpaceRef) -> Result<Vec<Scalar>> {
    space.index_to_vector(idx)
}

pub fn vector_to_index(v: &[Scalar], space: &SpaceRef) -> Result<ElementIndex> {
    space.vector_to_index(v)
}

pub fn enumerate_span(basis: &[Vec<Scalar>], space: &SpaceRef) -> Result<Vec<ElementIndex>> {
    space.enumerate_span(basis)
}
