//! Vector groupoid morphisms, the universal property of the induced
//! groupoid, and transitivity.

use std::collections::{BTreeSet, HashMap};

use crate::constructions::InducedGroupoid;
use crate::error::{Error, Result};
use crate::groupoid::{
    conjugation_between, isotropy_group, GroupoidOps, Tabulated, VectorGroupoid,
};
use crate::linalg::{Matrix, Scalar};
use crate::report::{CheckReport, CheckResult, LawRun};
use crate::space::{ElementIndex, Limits, SpaceRef};

/// A pair of linear maps `(f, f0)` from one groupoid to another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    source: VectorGroupoid,
    target: VectorGroupoid,
    f: Matrix,
    f0: Matrix,
}

impl GroupoidMorphism {
    pub fn new(
        source: VectorGroupoid,
        target: VectorGroupoid,
        f: Matrix,
        f0: Matrix,
    ) -> Result<Self> {
        let field = source.field();
        for (name, m, rows, cols) in [
            ("f", &f, target.total().dim(), source.total().dim()),
            ("f0", &f0, target.base().dim(), source.base().dim()),
        ] {
            if m.field() != field || target.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.p(),
                    right: m.field().p().max(target.field().p()),
                });
            }
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "{name} must be {rows}x{cols}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            source,
            target,
            f,
            f0,
        })
    }

    pub fn identity(g: &VectorGroupoid) -> Self {
        let field = g.field();
        Self {
            source: g.clone(),
            target: g.clone(),
            f: Matrix::identity(field, g.total().dim()),
            f0: Matrix::identity(field, g.base().dim()),
        }
    }

    pub fn source(&self) -> &VectorGroupoid {
        &self.source
    }

    pub fn target(&self) -> &VectorGroupoid {
        &self.target
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn f0(&self) -> &Matrix {
        &self.f0
    }

    /// `f` on an element of the source's total space.
    pub fn map(&self, x: ElementIndex) -> Result<ElementIndex> {
        let v = self.source.total().index_to_vector(x)?;
        self.target.total().vector_to_index(&self.f.apply(&v)?)
    }

    /// `f0` on an element of the source's base.
    pub fn map_base(&self, u: ElementIndex) -> Result<ElementIndex> {
        let v = self.source.base().index_to_vector(u)?;
        self.target.base().vector_to_index(&self.f0.apply(&v)?)
    }
}

fn matrix_law(
    law_id: &str,
    lhs: &Matrix,
    rhs: &Matrix,
    domain: SpaceRef,
    holds: impl Fn(ElementIndex) -> bool,
) -> Result<CheckResult> {
    let mut run = LawRun::default();
    for j in 0..lhs.cols() {
        run.record(
            lhs.column(j) == rhs.column(j),
            &[domain.basis_element(j)],
            None,
        );
    }
    run.finish(law_id, |e, _| holds(e[0]))
}

/// Morphism conditions: compatibility with sources and targets, and
/// `f(xy) = f(x) f(y)` over every composable pair; plus the derived
/// identities `f eps = eps' f0` and `f i = i' f`.
///
/// Law ids: `D2.2.1-alpha`, `D2.2.1-beta`, `D2.2.2`, `P2.3-eps`, `P2.3-inv`,
/// `D3.2-structural`.
pub fn check_morphism(m: &GroupoidMorphism) -> Result<CheckReport> {
    let (src, tgt) = (&m.source, &m.target);
    let limits = Limits::global();
    let n = src.total().size_within(limits.element_cap)?;
    tgt.total().size_within(limits.element_cap)?;
    let mut report = CheckReport::default();

    let f = |x| m.map(x).expect("f maps valid elements");
    let f0 = |u| m.map_base(u).expect("f0 maps valid elements");

    report.push(matrix_law(
        "D2.2.1-alpha",
        &tgt.alpha().mul(&m.f)?,
        &m.f0.mul(src.alpha())?,
        src.total(),
        |x| GroupoidOps::source(tgt, f(x)) == f0(GroupoidOps::source(src, x)),
    )?);
    report.push(matrix_law(
        "D2.2.1-beta",
        &tgt.beta().mul(&m.f)?,
        &m.f0.mul(src.beta())?,
        src.total(),
        |x| GroupoidOps::target(tgt, f(x)) == f0(GroupoidOps::target(src, x)),
    )?);

    let images: Vec<ElementIndex> = (0..n).map(f).collect();
    let mut run = LawRun::default();
    for (x, y) in src.composable_pairs()? {
        let lhs = GroupoidOps::compose(src, x, y).map(|xy| images[xy]);
        let rhs = GroupoidOps::compose(tgt, images[x], images[y]);
        run.record(lhs.is_some() && lhs == rhs, &[x, y], None);
    }
    report.push(run.finish("D2.2.2", |e, _| {
        let lhs = GroupoidOps::compose(src, e[0], e[1]).map(f);
        lhs.is_some() && lhs == GroupoidOps::compose(tgt, f(e[0]), f(e[1]))
    })?);

    report.push(matrix_law(
        "P2.3-eps",
        &m.f.mul(src.epsilon())?,
        &tgt.epsilon().mul(&m.f0)?,
        src.base(),
        |u| f(GroupoidOps::unit(src, u)) == GroupoidOps::unit(tgt, f0(u)),
    )?);
    report.push(matrix_law(
        "P2.3-inv",
        &m.f.mul(src.inversion())?,
        &tgt.inversion().mul(&m.f)?,
        src.total(),
        |x| f(GroupoidOps::invert(src, x)) == GroupoidOps::invert(tgt, f(x)),
    )?);
    report.push(CheckResult::pass("D3.2-structural", 0));
    Ok(report)
}

/// The factorization `v` of a morphism `(u, h)` through `h*(V)`, with the
/// checks that certify it.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub morphism: GroupoidMorphism,
    /// Law ids: `T4.1-pointwise`, `T4.1-alpha`, `T4.1-beta`, `T4.1-commute`,
    /// `T4.1-unique`, followed by the morphism laws of `v`.
    pub report: CheckReport,
}

impl Factorization {
    pub fn all_passed(&self) -> bool {
        self.report.all_passed()
    }
}

/// Factors `(u, h) : (Vp, X) -> (V, V0)` through the induced groupoid as
/// `v(a) = (alpha'(a), beta'(a), u(a))`, an X-morphism with `h_V* v = u`.
pub fn universal_factorization(
    vp: &VectorGroupoid,
    u: &Matrix,
    h: &Matrix,
    ig: &InducedGroupoid,
) -> Result<Factorization> {
    if &ig.h != h {
        return Err(Error::ShapeMismatch(
            "the induced groupoid was built from a different h".into(),
        ));
    }
    if vp.base().dim() != ig.x.dim() {
        return Err(Error::ShapeMismatch(format!(
            "source base has dimension {}, X has dimension {}",
            vp.base().dim(),
            ig.x.dim()
        )));
    }
    let given = GroupoidMorphism::new(vp.clone(), ig.parent.clone(), u.clone(), h.clone())?;
    let given_report = check_morphism(&given)?;
    if let Some(failure) = given_report.failures().next() {
        return Err(Error::NotAMorphism {
            law_id: failure.law_id.clone(),
            witness: failure.witness.clone().expect("failures carry witnesses"),
        });
    }

    let field = vp.field();
    let rule = ig.rule();
    let structure = &ig.structure;
    let limits = Limits::global();
    let vp_size = vp.total().size_within(limits.element_cap)?;
    let h_size = structure.total().size_within(limits.element_cap)?;

    let triple = |a: &[Scalar]| -> Result<Vec<Scalar>> {
        let mut w = vp.alpha().apply(a)?;
        w.extend(vp.beta().apply(a)?);
        w.extend(u.apply(a)?);
        Ok(w)
    };
    let escape = |e: Error| match e {
        Error::AmbientEscape(msg) => Error::EncodingFailure(msg),
        other => other,
    };

    let mut columns = Vec::with_capacity(vp.total().dim());
    for j in 0..vp.total().dim() {
        let mut e = vec![0; vp.total().dim()];
        e[j] = 1;
        columns.push(rule.coordinates(&triple(&e)?).map_err(escape)?);
    }
    let v = Matrix::from_columns(field, structure.total().dim(), &columns)?;
    let morphism = GroupoidMorphism::new(
        vp.clone(),
        structure.clone(),
        v.clone(),
        Matrix::identity(field, ig.x.dim()),
    )?;

    let mut report = CheckReport::default();

    // the formula evaluated at every element agrees with the linear extension
    let pointwise = |a: ElementIndex| -> Result<bool> {
        let vec = vp.total().index_to_vector(a)?;
        let formula = rule.encode(&triple(&vec)?).map_err(escape)?;
        Ok(formula == morphism.map(a)?)
    };
    let mut run = LawRun::default();
    for a in 0..vp_size {
        run.record(pointwise(a)?, &[a], None);
    }
    report.push(run.finish("T4.1-pointwise", |e, _| pointwise(e[0]).unwrap_or(false))?);

    let projection = ig.projection_matrix();
    for (law_id, lhs, rhs) in [
        ("T4.1-alpha", structure.alpha().mul(&v)?, vp.alpha().clone()),
        ("T4.1-beta", structure.beta().mul(&v)?, vp.beta().clone()),
        ("T4.1-commute", projection.mul(&v)?, u.clone()),
    ] {
        let lhs_eval = lhs.clone();
        let rhs_eval = rhs.clone();
        report.push(matrix_law(law_id, &lhs, &rhs, vp.total(), move |a| {
            let vec = vp.total().index_to_vector(a).unwrap_or_default();
            lhs_eval.apply(&vec).ok() == rhs_eval.apply(&vec).ok()
        })?);
    }

    // (alpha*, beta*, h_V*) separates the points of h*(V), so the three
    // constraints pin v(a) down
    let key = |w: ElementIndex| -> Result<Vec<Scalar>> {
        let coords = structure.total().index_to_vector(w)?;
        let mut k = structure.alpha().apply(&coords)?;
        k.extend(structure.beta().apply(&coords)?);
        k.extend(projection.apply(&coords)?);
        Ok(k)
    };
    let mut by_key: HashMap<Vec<Scalar>, Vec<ElementIndex>> = HashMap::new();
    for w in 0..h_size {
        by_key.entry(key(w)?).or_default().push(w);
    }
    let mut run = LawRun::default();
    for a in 0..vp_size {
        let wanted = triple(&vp.total().index_to_vector(a)?)?;
        let image = morphism.map(a)?;
        let matches = by_key.get(&wanted).map(Vec::as_slice).unwrap_or(&[]);
        for w in 0..h_size {
            let satisfies = matches.binary_search(&w).is_ok();
            run.record(satisfies == (w == image), &[a, w], None);
        }
    }
    report.push(run.finish("T4.1-unique", |e, _| {
        let (a, w) = (e[0], e[1]);
        let wanted = vp.total().index_to_vector(a).and_then(|vec| triple(&vec));
        let satisfies = matches!((wanted, key(w)), (Ok(x), Ok(y)) if x == y);
        satisfies == (morphism.map(a).ok() == Some(w))
    })?);

    report.extend(check_morphism(&morphism)?);
    Ok(Factorization { morphism, report })
}

/// Transitivity of a groupoid, decided by the rank of the anchor and
/// cross-checked by enumerating its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transitivity {
    pub transitive: bool,
    pub anchor_rank: usize,
    /// Whether the enumerated anchor image is all of `V0 x V0`.
    pub enumerated: bool,
    /// For a transitive groupoid: `(u, v, x)` with x the least element from
    /// u to v, whose conjugation `G(u) -> G(v)` was verified.
    pub isomorphisms: Vec<(ElementIndex, ElementIndex, ElementIndex)>,
}

impl Transitivity {
    pub fn decisions_agree(&self) -> bool {
        self.transitive == self.enumerated
    }
}

pub fn is_transitive(g: &VectorGroupoid) -> Result<Transitivity> {
    let anchor_rank = g.anchor().rank();
    let transitive = anchor_rank == 2 * g.base().dim();
    let t = Tabulated::new(g)?;
    let base_size = g.base().size();

    let image: BTreeSet<(ElementIndex, ElementIndex)> =
        (0..t.size()).map(|x| (t.source(x), t.target(x))).collect();
    let enumerated = image.len() == base_size * base_size;

    let mut isomorphisms = Vec::new();
    if transitive {
        let groups = (0..base_size)
            .map(|u| isotropy_group(&t, u))
            .collect::<Result<Vec<_>>>()?;
        for u in 0..base_size {
            for v in 0..base_size {
                let Some(x) = t.alpha_fibre(u).iter().copied().find(|&x| t.target(x) == v) else {
                    continue;
                };
                conjugation_between(&t, x, groups[u].clone(), groups[v].clone())?;
                isomorphisms.push((u, v, x));
            }
        }
    }
    Ok(Transitivity {
        transitive,
        anchor_rank,
        enumerated,
        isomorphisms,
    })
}
