//! Concrete vector groupoids: null, single-unit, pair, and the groupoid
//! induced by a linear map into the base, plus the anchor morphism and the
//! canonical projection of an induced groupoid.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Multiplication, VectorGroupoid};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::morphisms::{check_morphism, GroupoidMorphism};
use crate::space::{ElementIndex, Limits, SpaceRef};

fn require_enumerable(field: FieldSpec, dim: usize) -> Result<()> {
    SpaceRef::new(field, dim).size_within(Limits::global().element_cap)?;
    Ok(())
}

/// V over itself with every structure map the identity and `x . x = x`.
pub fn null_groupoid(field: FieldSpec, dim: usize) -> Result<VectorGroupoid> {
    require_enumerable(field, dim)?;
    let id = Matrix::identity(field, dim);
    VectorGroupoid::new(
        dim,
        dim,
        id.clone(),
        id.clone(),
        id.clone(),
        id,
        Multiplication::Null,
    )
}

/// V over the zero space with `x . y = x + y` and inversion `-x`.
pub fn single_unit_groupoid(field: FieldSpec, dim: usize) -> Result<VectorGroupoid> {
    require_enumerable(field, dim)?;
    VectorGroupoid::new(
        dim,
        0,
        Matrix::zeros(field, 0, dim),
        Matrix::zeros(field, 0, dim),
        Matrix::zeros(field, dim, 0),
        Matrix::scalar(field, dim, field.neg(1)),
        Multiplication::SingleUnit,
    )
}

/// The pair groupoid X (+) X over X.
pub fn pair_groupoid(field: FieldSpec, base_dim: usize) -> Result<VectorGroupoid> {
    require_enumerable(field, 2 * base_dim)?;
    let n = base_dim;
    let id = Matrix::identity(field, n);
    let zero = Matrix::zeros(field, n, n);
    let alpha = id.hstack(&zero)?;
    let beta = zero.hstack(&id)?;
    let epsilon = id.vstack(&id)?;
    let swap = zero.hstack(&id)?.vstack(&id.hstack(&zero)?)?;
    VectorGroupoid::new(2 * n, n, alpha, beta, epsilon, swap, Multiplication::Pair)
}

/// The multiplication of an induced groupoid, acting on coordinates with
/// respect to a basis of the pullback.
///
/// Ambient vectors are laid out as `[x | y | a]` with `x, y` in X and `a` in
/// the parent's total space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedRule {
    parent: VectorGroupoid,
    h: Matrix,
    x_dim: usize,
    /// Columns are the pullback basis vectors.
    basis: Matrix,
    pivot_rows: Vec<usize>,
    pivot_inverse: Matrix,
}

impl InducedRule {
    fn new(parent: VectorGroupoid, h: Matrix, x_dim: usize, basis: Matrix) -> Result<Self> {
        let pivot_rows = basis.independent_rows();
        if pivot_rows.len() != basis.cols() {
            return Err(Error::ShapeMismatch(
                "pullback basis vectors are linearly dependent".into(),
            ));
        }
        let mut square = Matrix::zeros(basis.field(), basis.cols(), basis.cols());
        for (r, &row) in pivot_rows.iter().enumerate() {
            for c in 0..basis.cols() {
                square.set(r, c, basis.get(row, c));
            }
        }
        let pivot_inverse = square
            .inverse()
            .expect("independent rows of a full-rank basis form an invertible block");
        Ok(Self {
            parent,
            h,
            x_dim,
            basis,
            pivot_rows,
            pivot_inverse,
        })
    }

    pub fn parent(&self) -> &VectorGroupoid {
        &self.parent
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    /// Columns are the pullback basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn dim(&self) -> usize {
        self.basis.cols()
    }

    fn coordinate_space(&self) -> SpaceRef {
        SpaceRef::new(self.basis.field(), self.dim())
    }

    /// The ambient triple `[x | y | a]` of an element.
    pub fn decode(&self, c: ElementIndex) -> Result<Vec<Scalar>> {
        let coords = self.coordinate_space().index_to_vector(c)?;
        self.basis.apply(&coords)
    }

    /// Coordinates of an ambient vector, or `AmbientEscape` if it is not in
    /// the span of the basis.
    pub fn coordinates(&self, w: &[Scalar]) -> Result<Vec<Scalar>> {
        if w.len() != self.basis.rows() {
            return Err(Error::ShapeMismatch(format!(
                "ambient vector of length {}, expected {}",
                w.len(),
                self.basis.rows()
            )));
        }
        let picked: Vec<Scalar> = self.pivot_rows.iter().map(|&r| w[r]).collect();
        let coords = self.pivot_inverse.apply(&picked)?;
        if self.basis.apply(&coords)? != w {
            return Err(Error::AmbientEscape(format!(
                "{w:?} is not in the pullback"
            )));
        }
        Ok(coords)
    }

    pub fn encode(&self, w: &[Scalar]) -> Result<ElementIndex> {
        let coords = self.coordinates(w)?;
        Ok(self.coordinate_space().encode(&coords))
    }

    pub(crate) fn compose(&self, c1: ElementIndex, c2: ElementIndex) -> Result<ElementIndex> {
        let n = self.x_dim;
        let (w1, w2) = (self.decode(c1)?, self.decode(c2)?);
        if w1[n..2 * n] != w2[..n] {
            return Err(Error::AmbientEscape(format!(
                "middle components differ for ({c1}, {c2})"
            )));
        }
        let total = self.parent.total();
        let a = total.vector_to_index(&w1[2 * n..])?;
        let b = total.vector_to_index(&w2[2 * n..])?;
        let ab = self
            .parent
            .compose(a, b)
            .map_err(|e| Error::AmbientEscape(format!("parent product failed: {e}")))?;
        let mut w = w1[..n].to_vec();
        w.extend_from_slice(&w2[n..2 * n]);
        w.extend(total.index_to_vector(ab)?);
        self.encode(&w)
    }
}

/// The groupoid induced on `h*(V) = {(x, y, a) : h x = alpha a, h y = beta a}`
/// by a linear map `h : X -> V0`, expressed in pullback-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedGroupoid {
    pub parent: VectorGroupoid,
    pub h: Matrix,
    pub x: SpaceRef,
    /// `[h, 0, -alpha; 0, h, -beta]`
    pub constraint: Matrix,
    pub pullback_basis: Vec<Vec<Scalar>>,
    pub structure: VectorGroupoid,
}

fn constraint_matrix(parent: &VectorGroupoid, h: &Matrix, x_dim: usize) -> Result<Matrix> {
    let field = parent.field();
    if h.field() != field {
        return Err(Error::FieldMismatch {
            left: field.p(),
            right: h.field().p(),
        });
    }
    let n0 = parent.base().dim();
    if h.shape() != (n0, x_dim) {
        return Err(Error::ShapeMismatch(format!(
            "h must be {n0}x{x_dim}, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let zero = Matrix::zeros(field, n0, x_dim);
    let top = h.hstack(&zero)?.hstack(&parent.alpha().neg())?;
    let bottom = zero.hstack(h)?.hstack(&parent.beta().neg())?;
    top.vstack(&bottom)
}

pub fn induced_groupoid(
    parent: &VectorGroupoid,
    h: &Matrix,
    x_dim: usize,
) -> Result<InducedGroupoid> {
    let constraint = constraint_matrix(parent, h, x_dim)?;
    let basis = constraint.kernel_basis();
    build_induced(parent, h, x_dim, constraint, basis)
}

/// Like [`induced_groupoid`] but with a caller-supplied pullback basis, which
/// must be a basis of the kernel of the constraint matrix.
pub fn induced_groupoid_with_basis(
    parent: &VectorGroupoid,
    h: &Matrix,
    x_dim: usize,
    basis: Vec<Vec<Scalar>>,
) -> Result<InducedGroupoid> {
    let constraint = constraint_matrix(parent, h, x_dim)?;
    let expected = constraint.cols() - constraint.rank();
    if basis.len() != expected {
        return Err(Error::ShapeMismatch(format!(
            "pullback basis has {} vectors, kernel has dimension {expected}",
            basis.len()
        )));
    }
    for v in &basis {
        if constraint.apply(v)?.iter().any(|&c| c != 0) {
            return Err(Error::AmbientEscape(format!(
                "basis vector {v:?} violates the pullback constraints"
            )));
        }
    }
    build_induced(parent, h, x_dim, constraint, basis)
}

fn build_induced(
    parent: &VectorGroupoid,
    h: &Matrix,
    x_dim: usize,
    constraint: Matrix,
    pullback_basis: Vec<Vec<Scalar>>,
) -> Result<InducedGroupoid> {
    let field = parent.field();
    let n = x_dim;
    let m = parent.total().dim();
    let ambient = 2 * n + m;
    let basis = Matrix::from_columns(field, ambient, &pullback_basis)?;
    let rule = InducedRule::new(parent.clone(), h.clone(), n, basis.clone())?;

    let alpha = basis.row_block(0, n);
    let beta = basis.row_block(n, 2 * n);

    // epsilon*(x) = (x, x, epsilon(h x)) on each basis vector of X
    let eps_h = parent.epsilon().mul(h)?;
    let mut eps_columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = vec![0; ambient];
        w[j] = 1;
        w[n + j] = 1;
        w[2 * n..].copy_from_slice(&eps_h.column(j));
        eps_columns.push(rule.coordinates(&w)?);
    }
    let epsilon = Matrix::from_columns(field, basis.cols(), &eps_columns)?;

    // i*(x, y, a) = (y, x, i(a)) on each pullback basis vector
    let mut inv_columns = Vec::with_capacity(basis.cols());
    for v in &pullback_basis {
        let mut w = v[n..2 * n].to_vec();
        w.extend_from_slice(&v[..n]);
        w.extend(parent.inversion().apply(&v[2 * n..])?);
        inv_columns.push(rule.coordinates(&w)?);
    }
    let inversion = Matrix::from_columns(field, basis.cols(), &inv_columns)?;

    let structure = VectorGroupoid::new(
        basis.cols(),
        n,
        alpha,
        beta,
        epsilon,
        inversion,
        Multiplication::Induced(Arc::new(rule)),
    )?;
    Ok(InducedGroupoid {
        parent: parent.clone(),
        h: h.clone(),
        x: SpaceRef::new(field, n),
        constraint,
        pullback_basis,
        structure,
    })
}

impl InducedGroupoid {
    pub fn dim(&self) -> usize {
        self.pullback_basis.len()
    }

    /// `2 dim X + dim V - rank(C)`
    pub fn expected_dim(&self) -> usize {
        2 * self.x.dim() + self.parent.total().dim() - self.constraint.rank()
    }

    pub fn rule(&self) -> &InducedRule {
        match self.structure.multiplication() {
            Multiplication::Induced(rule) => rule,
            _ => unreachable!("induced structure always carries an induced rule"),
        }
    }

    /// `(x, y, a) -> a` in coordinates: the third block of the basis.
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.x.dim();
        let basis = self.rule().basis();
        basis.row_block(2 * n, basis.rows())
    }
}

fn verified(m: GroupoidMorphism) -> Result<GroupoidMorphism> {
    let report = check_morphism(&m)?;
    if let Some(failure) = report.failures().next() {
        return Err(Error::NotAMorphism {
            law_id: failure.law_id.clone(),
            witness: failure.witness.clone().expect("failures carry witnesses"),
        });
    }
    Ok(m)
}

/// `(alpha, beta) : V -> V0 x V0` as a morphism into the pair groupoid of V0,
/// with `f0 = Id`.
pub fn anchor_morphism(g: &VectorGroupoid) -> Result<GroupoidMorphism> {
    let target = pair_groupoid(g.field(), g.base().dim())?;
    let f0 = Matrix::identity(g.field(), g.base().dim());
    verified(GroupoidMorphism::new(g.clone(), target, g.anchor(), f0)?)
}

/// The canonical morphism `(h_V*, h)` from `h*(V)` to the parent.
pub fn canonical_projection(ig: &InducedGroupoid) -> Result<GroupoidMorphism> {
    verified(GroupoidMorphism::new(
        ig.structure.clone(),
        ig.parent.clone(),
        ig.projection_matrix(),
        ig.h.clone(),
    )?)
}
