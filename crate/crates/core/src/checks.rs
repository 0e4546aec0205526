//! Exhaustive verification of the groupoid and vector groupoid laws.
//!
//! Every law is a pointwise predicate over a quantified tuple of elements
//! (and possibly a scalar). The suites evaluate predicates against a
//! [`Tabulated`] copy of the groupoid, then replay each reported witness
//! against the groupoid itself before the report is returned.
//!
//! Law ids, in report order:
//!
//! | suite      | ids |
//! |------------|-----|
//! | ehresmann  | `alpha-surjective`, `beta-surjective`, `epsilon-injective`, `G1`, `G2`, `G3` |
//! | vector     | `3.1.2-structural`, `3.1.3.1`, `3.1.4.1` .. `3.1.4.4` |
//! | derived    | `P2.1.i` .. `P2.1.vii`, `P2.2.*`, `eps0-absorb-left`, `eps0-absorb-right` |
//! | subspaces  | `C3.1.i-alpha-epi`, `C3.1.i-beta-epi`, `C3.1.ii`, `C3.1.iii-*` |
//!
//! Linearity of the structure maps holds by representation and is recorded
//! as `3.1.2-structural` with zero tuples checked.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::groupoid::{
    conjugation_between, isotropy_conjugation, isotropy_group, GroupoidOps, IsotropyGroup,
    Tabulated, VectorGroupoid,
};
use crate::linalg::{Matrix, Scalar};
use crate::report::{CheckReport, CheckResult, LawRun};
use crate::space::ElementIndex;

// Pointwise predicates. Each returns true when the law holds on the tuple.

fn source_hit<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    o.total().iter().any(|x| o.source(x) == e[0])
}

fn target_hit<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    o.total().iter().any(|x| o.target(x) == e[0])
}

fn unit_injective<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    e[0] == e[1] || o.unit(e[0]) != o.unit(e[1])
}

fn inversion_injective<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    e[0] == e[1] || o.invert(e[0]) != o.invert(e[1])
}

/// `(xy)z` is defined iff `x(yz)` is, and then they agree.
fn g1<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let (x, y, z) = (e[0], e[1], e[2]);
    let left = o.compose(x, y).and_then(|xy| o.compose(xy, z));
    let right = o.compose(y, z).and_then(|yz| o.compose(x, yz));
    left == right
}

fn g2<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let x = e[0];
    o.compose(o.unit(o.source(x)), x) == Some(x) && o.compose(x, o.unit(o.target(x))) == Some(x)
}

fn g3<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let x = e[0];
    let inv = o.invert(x);
    o.compose(inv, x) == Some(o.unit(o.target(x))) && o.compose(x, inv) == Some(o.unit(o.source(x)))
}

/// `x + x^{-1} = eps(alpha x) + eps(beta x)`
fn inverse_sum<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let x = e[0];
    let v = o.total();
    v.add(x, o.invert(x)) == v.add(o.unit(o.source(x)), o.unit(o.target(x)))
}

/// `x (y + z - eps(beta x)) = xy + xz - x`
fn left_affine_sum<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let (x, y, z) = (e[0], e[1], e[2]);
    let v = o.total();
    let operand = v.sub(v.add(y, z), o.unit(o.target(x)));
    let lhs = o.compose(x, operand);
    let rhs = o
        .compose(x, y)
        .zip(o.compose(x, z))
        .map(|(xy, xz)| v.sub(v.add(xy, xz), x));
    lhs.is_some() && lhs == rhs
}

/// `x (k y + (1 - k) eps(beta x)) = k (xy) + (1 - k) x`
fn left_affine_scale<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    k: Option<Scalar>,
) -> bool {
    let (x, y) = (e[0], e[1]);
    let k = k.unwrap_or(0);
    let v = o.total();
    let f = v.field();
    let one_minus_k = f.sub(1, k);
    let operand = v.add(v.scale(k, y), v.scale(one_minus_k, o.unit(o.target(x))));
    let lhs = o.compose(x, operand);
    let rhs = o
        .compose(x, y)
        .map(|xy| v.add(v.scale(k, xy), v.scale(one_minus_k, x)));
    lhs.is_some() && lhs == rhs
}

/// `(y + z - eps(alpha x)) x = yx + zx - x`
fn right_affine_sum<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let (x, y, z) = (e[0], e[1], e[2]);
    let v = o.total();
    let operand = v.sub(v.add(y, z), o.unit(o.source(x)));
    let lhs = o.compose(operand, x);
    let rhs = o
        .compose(y, x)
        .zip(o.compose(z, x))
        .map(|(yx, zx)| v.sub(v.add(yx, zx), x));
    lhs.is_some() && lhs == rhs
}

/// `(k y + (1 - k) eps(alpha x)) x = k (yx) + (1 - k) x`
fn right_affine_scale<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    k: Option<Scalar>,
) -> bool {
    let (x, y) = (e[0], e[1]);
    let k = k.unwrap_or(0);
    let v = o.total();
    let f = v.field();
    let one_minus_k = f.sub(1, k);
    let operand = v.add(v.scale(k, y), v.scale(one_minus_k, o.unit(o.source(x))));
    let lhs = o.compose(operand, x);
    let rhs = o
        .compose(y, x)
        .map(|yx| v.add(v.scale(k, yx), v.scale(one_minus_k, x)));
    lhs.is_some() && lhs == rhs
}

fn product_endpoints<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    let (x, y) = (e[0], e[1]);
    o.compose(x, y)
        .is_some_and(|xy| o.source(xy) == o.source(x) && o.target(xy) == o.target(y))
}

fn inverse_endpoints<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    let x = e[0];
    let inv = o.invert(x);
    o.source(inv) == o.target(x) && o.target(inv) == o.source(x)
}

fn unit_endpoints<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let u = e[0];
    let unit = o.unit(u);
    o.source(unit) == u && o.target(unit) == u
}

fn unit_idempotent<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    let unit = o.unit(e[0]);
    o.compose(unit, unit) == Some(unit) && o.invert(unit) == unit
}

/// `(xy)^{-1} = y^{-1} x^{-1}`
fn inverse_of_product<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    let (x, y) = (e[0], e[1]);
    let lhs = o.compose(x, y).map(|xy| o.invert(xy));
    lhs.is_some() && lhs == o.compose(o.invert(y), o.invert(x))
}

fn isotropy_is_group<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    isotropy_group(o, e[0]).is_ok()
}

fn conjugation_is_isomorphism<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    isotropy_conjugation(o, e[0]).is_ok()
}

fn alpha_after_inversion<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.source(o.invert(e[0])) == o.target(e[0])
}

fn beta_after_inversion<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.target(o.invert(e[0])) == o.source(e[0])
}

fn inversion_fixes_units<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.invert(o.unit(e[0])) == o.unit(e[0])
}

fn inversion_involutive<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.invert(o.invert(e[0])) == e[0]
}

fn alpha_after_unit<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    o.source(o.unit(e[0])) == e[0]
}

fn beta_after_unit<O: GroupoidOps + ?Sized>(o: &O, e: &[ElementIndex], _: Option<Scalar>) -> bool {
    o.target(o.unit(e[0])) == e[0]
}

fn zero_unit_absorbs_left<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.source(e[0]) != 0 || o.compose(o.unit(0), e[0]) == Some(e[0])
}

fn zero_unit_absorbs_right<O: GroupoidOps + ?Sized>(
    o: &O,
    e: &[ElementIndex],
    _: Option<Scalar>,
) -> bool {
    o.target(e[0]) != 0 || o.compose(e[0], o.unit(0)) == Some(e[0])
}

/// Which fibre through zero a subspace law is about.
#[derive(Clone, Copy)]
enum ZeroFibre {
    KerAlpha,
    KerBeta,
    Isotropy,
}

impl ZeroFibre {
    fn contains<O: GroupoidOps + ?Sized>(self, o: &O, x: ElementIndex) -> bool {
        match self {
            ZeroFibre::KerAlpha => o.source(x) == 0,
            ZeroFibre::KerBeta => o.target(x) == 0,
            ZeroFibre::Isotropy => o.source(x) == 0 && o.target(x) == 0,
        }
    }

    /// The fibre as the kernel of a matrix.
    fn kernel_matrix(self, g: &VectorGroupoid) -> Matrix {
        match self {
            ZeroFibre::KerAlpha => g.alpha().clone(),
            ZeroFibre::KerBeta => g.beta().clone(),
            ZeroFibre::Isotropy => g.anchor(),
        }
    }

    /// Witnesses are `[a, b]` with a scalar for a closure failure (`a + k b`
    /// leaves the fibre) or `[e]` for a disagreement with the kernel span.
    fn holds(self, g: &VectorGroupoid, e: &[ElementIndex], k: Option<Scalar>) -> bool {
        let v = g.total();
        match (e, k) {
            ([a, b], Some(k)) => {
                !(self.contains(g, *a) && self.contains(g, *b))
                    || self.contains(g, v.add(*a, v.scale(k, *b)))
            }
            ([x], _) => {
                let span = v
                    .enumerate_span(&self.kernel_matrix(g).kernel_basis())
                    .unwrap_or_default();
                span.binary_search(x).is_ok() == self.contains(g, *x)
            }
            _ => false,
        }
    }
}

/// Compares two matrices column by column; a differing column j is reported
/// as the basis element `e_j` of the domain.
fn matrix_identity(
    g: &VectorGroupoid,
    law_id: &str,
    lhs: &Matrix,
    rhs: &Matrix,
    domain_basis: impl Fn(usize) -> ElementIndex,
    replay: fn(&VectorGroupoid, &[ElementIndex], Option<Scalar>) -> bool,
) -> Result<CheckResult> {
    let mut run = LawRun::default();
    for j in 0..lhs.cols() {
        run.record(lhs.column(j) == rhs.column(j), &[domain_basis(j)], None);
    }
    run.finish(law_id, |e, k| replay(g, e, k))
}

fn surjectivity(
    g: &VectorGroupoid,
    t: &Tabulated,
    law_id: &str,
    map: &Matrix,
    hit: fn(&VectorGroupoid, &[ElementIndex], Option<Scalar>) -> bool,
    of: impl Fn(ElementIndex) -> ElementIndex,
) -> Result<CheckResult> {
    let mut run = LawRun::default();
    if map.rank() == g.base().dim() {
        run.checked = g.base().size() as u64;
        return run.finish(law_id, |e, k| hit(g, e, k));
    }
    let image: BTreeSet<ElementIndex> = (0..t.size()).map(of).collect();
    for u in g.base().iter() {
        run.record(image.contains(&u), &[u], None);
    }
    run.finish(law_id, |e, k| hit(g, e, k))
}

/// Def 2.1: surjective source and target, injective inclusion, G1 to G3.
pub fn check_ehresmann(g: &VectorGroupoid) -> Result<CheckReport> {
    let t = Tabulated::new(g)?;
    ehresmann_with(g, &t)
}

fn ehresmann_with(g: &VectorGroupoid, t: &Tabulated) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let n = t.size();
    let base = g.base();

    report.push(surjectivity(
        g,
        t,
        "alpha-surjective",
        g.alpha(),
        source_hit,
        |x| t.source(x),
    )?);
    report.push(surjectivity(
        g,
        t,
        "beta-surjective",
        g.beta(),
        target_hit,
        |x| t.target(x),
    )?);

    let mut run = LawRun::default();
    if g.epsilon().rank() == base.dim() {
        run.checked = 1;
    } else {
        let u = base.encode(&g.epsilon().kernel_basis()[0]);
        run.record(false, &[u, 0], None);
    }
    report.push(run.finish("epsilon-injective", |e, k| unit_injective(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        for &y in t.alpha_fibre(t.target(x)) {
            let Some(xy) = t.compose(x, y) else { continue };
            for &z in t.alpha_fibre(t.target(xy)) {
                run.record(g1(t, &[x, y, z], None), &[x, y, z], None);
            }
        }
    }
    // triples where only x(yz) is defined
    for y in 0..n {
        for &z in t.alpha_fibre(t.target(y)) {
            let Some(yz) = t.compose(y, z) else { continue };
            for &x in t.beta_fibre(t.source(yz)) {
                let left_defined = t.compose(x, y).and_then(|xy| t.compose(xy, z)).is_some();
                if !left_defined {
                    run.record(false, &[x, y, z], None);
                }
            }
        }
    }
    report.push(run.finish("G1", |e, k| g1(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        run.record(g2(t, &[x], None), &[x], None);
    }
    report.push(run.finish("G2", |e, k| g2(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        run.record(g3(t, &[x], None), &[x], None);
    }
    report.push(run.finish("G3", |e, k| g3(g, e, k))?);
    Ok(report)
}

/// Def 3.1: the inverse-sum condition and the four quasi-linearity laws.
pub fn check_vector_axioms(g: &VectorGroupoid) -> Result<CheckReport> {
    let t = Tabulated::new(g)?;
    vector_with(g, &t)
}

fn vector_with(g: &VectorGroupoid, t: &Tabulated) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let n = t.size();
    let p = g.field().p();

    report.push(CheckResult::pass("3.1.2-structural", 0));

    let mut run = LawRun::default();
    for x in 0..n {
        run.record(inverse_sum(t, &[x], None), &[x], None);
    }
    report.push(run.finish("3.1.3.1", |e, k| inverse_sum(g, e, k))?);

    // alpha(y) = beta(x) = alpha(z)
    let mut run = LawRun::default();
    for x in 0..n {
        let fibre = t.alpha_fibre(t.target(x));
        for &y in fibre {
            for &z in fibre {
                run.record(left_affine_sum(t, &[x, y, z], None), &[x, y, z], None);
            }
        }
    }
    report.push(run.finish("3.1.4.1", |e, k| left_affine_sum(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        for &y in t.alpha_fibre(t.target(x)) {
            for k in 0..p {
                run.record(left_affine_scale(t, &[x, y], Some(k)), &[x, y], Some(k));
            }
        }
    }
    report.push(run.finish("3.1.4.2", |e, k| left_affine_scale(g, e, k))?);

    // alpha(x) = beta(y) = beta(z)
    let mut run = LawRun::default();
    for x in 0..n {
        let fibre = t.beta_fibre(t.source(x));
        for &y in fibre {
            for &z in fibre {
                run.record(right_affine_sum(t, &[x, y, z], None), &[x, y, z], None);
            }
        }
    }
    report.push(run.finish("3.1.4.3", |e, k| right_affine_sum(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        for &y in t.beta_fibre(t.source(x)) {
            for k in 0..p {
                run.record(right_affine_scale(t, &[x, y], Some(k)), &[x, y], Some(k));
            }
        }
    }
    report.push(run.finish("3.1.4.4", |e, k| right_affine_scale(g, e, k))?);
    Ok(report)
}

/// Derived calculation rules, isotropy groups and conjugations, the
/// structure-map identities, and absorption by `eps(0)` on the zero fibres.
pub fn check_derived_rules(g: &VectorGroupoid) -> Result<CheckReport> {
    let t = Tabulated::new(g)?;
    derived_with(g, &t)
}

fn derived_with(g: &VectorGroupoid, t: &Tabulated) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let n = t.size();
    let base = g.base();
    let total = g.total();

    let mut run = LawRun::default();
    for x in 0..n {
        for &y in t.alpha_fibre(t.target(x)) {
            run.record(product_endpoints(t, &[x, y], None), &[x, y], None);
        }
    }
    report.push(run.finish("P2.1.i", |e, k| product_endpoints(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        run.record(inverse_endpoints(t, &[x], None), &[x], None);
    }
    report.push(run.finish("P2.1.ii", |e, k| inverse_endpoints(g, e, k))?);

    let mut run = LawRun::default();
    for u in base.iter() {
        run.record(unit_endpoints(t, &[u], None), &[u], None);
    }
    report.push(run.finish("P2.1.iii", |e, k| unit_endpoints(g, e, k))?);

    let mut run = LawRun::default();
    for u in base.iter() {
        run.record(unit_idempotent(t, &[u], None), &[u], None);
    }
    report.push(run.finish("P2.1.iv", |e, k| unit_idempotent(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        for &y in t.alpha_fibre(t.target(x)) {
            run.record(inverse_of_product(t, &[x, y], None), &[x, y], None);
        }
    }
    report.push(run.finish("P2.1.v", |e, k| inverse_of_product(g, e, k))?);

    let mut groups: Vec<Option<IsotropyGroup>> = Vec::with_capacity(base.size());
    let mut run = LawRun::default();
    for u in base.iter() {
        let group = isotropy_group(t, u).ok();
        run.record(group.is_some(), &[u], None);
        groups.push(group);
    }
    report.push(run.finish("P2.1.vi", |e, k| isotropy_is_group(g, e, k))?);

    let mut run = LawRun::default();
    for x in 0..n {
        let holds = match (&groups[t.source(x)], &groups[t.target(x)]) {
            (Some(dom), Some(cod)) => conjugation_between(t, x, dom.clone(), cod.clone()).is_ok(),
            _ => false,
        };
        run.record(holds, &[x], None);
    }
    report.push(run.finish("P2.1.vii", |e, k| conjugation_is_isomorphism(g, e, k))?);

    let (alpha, beta, eps, inv) = (g.alpha(), g.beta(), g.epsilon(), g.inversion());
    let on_total = |j| total.basis_element(j);
    let on_base = |j| base.basis_element(j);
    report.push(matrix_identity(
        g,
        "P2.2.alpha-inv",
        &alpha.mul(inv)?,
        beta,
        on_total,
        alpha_after_inversion,
    )?);
    report.push(matrix_identity(
        g,
        "P2.2.beta-inv",
        &beta.mul(inv)?,
        alpha,
        on_total,
        beta_after_inversion,
    )?);
    report.push(matrix_identity(
        g,
        "P2.2.inv-eps",
        &inv.mul(eps)?,
        eps,
        on_base,
        inversion_fixes_units,
    )?);
    let id_total = Matrix::identity(g.field(), total.dim());
    let id_base = Matrix::identity(g.field(), base.dim());
    report.push(matrix_identity(
        g,
        "P2.2.inv-inv",
        &inv.mul(inv)?,
        &id_total,
        on_total,
        inversion_involutive,
    )?);
    report.push(matrix_identity(
        g,
        "P2.2.alpha-eps",
        &alpha.mul(eps)?,
        &id_base,
        on_base,
        alpha_after_unit,
    )?);
    report.push(matrix_identity(
        g,
        "P2.2.beta-eps",
        &beta.mul(eps)?,
        &id_base,
        on_base,
        beta_after_unit,
    )?);

    let mut run = LawRun::default();
    for &x in t.alpha_fibre(0) {
        run.record(zero_unit_absorbs_left(t, &[x], None), &[x], None);
    }
    report.push(run.finish("eps0-absorb-left", |e, k| zero_unit_absorbs_left(g, e, k))?);

    let mut run = LawRun::default();
    for &x in t.beta_fibre(0) {
        run.record(zero_unit_absorbs_right(t, &[x], None), &[x], None);
    }
    report.push(run.finish("eps0-absorb-right", |e, k| zero_unit_absorbs_right(g, e, k))?);
    Ok(report)
}

/// Epimorphic source and target, invertible inversion, and the zero fibres
/// as subspaces, with `V(0)` a group.
pub fn check_subspaces(g: &VectorGroupoid) -> Result<CheckReport> {
    let t = Tabulated::new(g)?;
    subspaces_with(g, &t)
}

fn subspaces_with(g: &VectorGroupoid, t: &Tabulated) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let total = g.total();

    report.push(surjectivity(
        g,
        t,
        "C3.1.i-alpha-epi",
        g.alpha(),
        source_hit,
        |x| t.source(x),
    )?);
    report.push(surjectivity(
        g,
        t,
        "C3.1.i-beta-epi",
        g.beta(),
        target_hit,
        |x| t.target(x),
    )?);

    let mut run = LawRun::default();
    if g.inversion().rank() == total.dim() {
        run.checked = 1;
    } else {
        let x = total.encode(&g.inversion().kernel_basis()[0]);
        run.record(false, &[x, 0], None);
    }
    report.push(run.finish("C3.1.ii", |e, k| inversion_injective(g, e, k))?);

    for (law_id, fibre) in [
        ("C3.1.iii-ker-alpha", ZeroFibre::KerAlpha),
        ("C3.1.iii-ker-beta", ZeroFibre::KerBeta),
        ("C3.1.iii-isotropy-zero", ZeroFibre::Isotropy),
    ] {
        report.push(zero_fibre_subspace(g, t, law_id, fibre)?);
    }

    let mut run = LawRun::default();
    run.record(isotropy_group(t, 0).is_ok(), &[0], None);
    report.push(run.finish("C3.1.iii-isotropy-group", |e, k| isotropy_is_group(g, e, k))?);
    Ok(report)
}

fn zero_fibre_subspace(
    g: &VectorGroupoid,
    t: &Tabulated,
    law_id: &str,
    fibre: ZeroFibre,
) -> Result<CheckResult> {
    let total = g.total();
    let members: Vec<ElementIndex> = (0..t.size()).filter(|&x| fibre.contains(t, x)).collect();
    let span = total.enumerate_span(&fibre.kernel_matrix(g).kernel_basis())?;
    let mut run = LawRun::default();
    if members != span {
        let set: BTreeSet<_> = members.iter().copied().collect();
        let odd = span
            .iter()
            .chain(&members)
            .copied()
            .find(|x| set.contains(x) != span.binary_search(x).is_ok())
            .expect("differing sets have a distinguishing element");
        run.record(false, &[odd], None);
    }
    let member_set: BTreeSet<_> = members.iter().copied().collect();
    for &a in &members {
        for &b in &members {
            for k in 0..g.field().p() {
                let holds = member_set.contains(&total.add(a, total.scale(k, b)));
                run.record(holds, &[a, b], Some(k));
            }
        }
    }
    run.finish(law_id, |e, k| fibre.holds(g, e, k))
}

/// Which suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSelection {
    pub ehresmann: bool,
    pub vector: bool,
    pub derived: bool,
    pub subspaces: bool,
}

impl SuiteSelection {
    pub const ALL: SuiteSelection = SuiteSelection {
        ehresmann: true,
        vector: true,
        derived: true,
        subspaces: true,
    };
}

impl Default for SuiteSelection {
    fn default() -> Self {
        Self::ALL
    }
}

/// Runs the selected suites over a single tabulation, in the fixed order
/// ehresmann, vector, derived, subspaces.
pub fn check_all(g: &VectorGroupoid, suites: SuiteSelection) -> Result<CheckReport> {
    let t = Tabulated::new(g)?;
    let mut report = CheckReport::default();
    if suites.ehresmann {
        report.extend(ehresmann_with(g, &t)?);
    }
    if suites.vector {
        report.extend(vector_with(g, &t)?);
    }
    if suites.derived {
        report.extend(derived_with(g, &t)?);
    }
    if suites.subspaces {
        report.extend(subspaces_with(g, &t)?);
    }
    Ok(report)
}
