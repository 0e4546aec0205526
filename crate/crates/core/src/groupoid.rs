//! The vector groupoid data model.
//!
//! A [`VectorGroupoid`] holds a total space V, a base space V0, the four
//! linear structure maps as matrices and a partial multiplication defined on
//! the composable pairs `{(x, y) : beta(x) = alpha(y)}`. Elements are named
//! by their [`ElementIndex`] in the enumerated space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::constructions::InducedRule;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};
use crate::space::{ElementIndex, Limits, SpaceRef};

/// Which structure function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureMap {
    Source,
    Target,
    Unit,
    Invert,
}

/// The partial multiplication, stored either extensionally as a table keyed by
/// composable pairs or intensionally as one of the known formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiplication {
    Table(BTreeMap<(ElementIndex, ElementIndex), ElementIndex>),
    /// `x . x = x`
    Null,
    /// `x . y = x + y`
    SingleUnit,
    /// `(x, y) . (y, z) = (x, z)` on V = X (+) X.
    Pair,
    /// Decode to ambient triples, compose in the parent, re-encode.
    Induced(Arc<InducedRule>),
}

impl Multiplication {
    pub fn kind(&self) -> &'static str {
        match self {
            Multiplication::Table(_) => "table",
            Multiplication::Null => "null",
            Multiplication::SingleUnit => "single_unit",
            Multiplication::Pair => "pair",
            Multiplication::Induced(_) => "induced",
        }
    }
}

/// A generalized vector groupoid over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorGroupoid {
    total: SpaceRef,
    base: SpaceRef,
    alpha: Matrix,
    beta: Matrix,
    epsilon: Matrix,
    inversion: Matrix,
    mult: Multiplication,
}

fn expect_shape(name: &str, m: &Matrix, rows: usize, cols: usize, field: FieldSpec) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch {
            left: field.p(),
            right: m.field().p(),
        });
    }
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch(format!(
            "{name} must be {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl VectorGroupoid {
    /// Validates shapes and, for a table backend, exact coverage of the
    /// composable pairs. The groupoid laws themselves are not checked here.
    pub fn new(
        total_dim: usize,
        base_dim: usize,
        alpha: Matrix,
        beta: Matrix,
        epsilon: Matrix,
        inversion: Matrix,
        mult: Multiplication,
    ) -> Result<Self> {
        let field = alpha.field();
        let (n, n0) = (total_dim, base_dim);
        expect_shape("alpha", &alpha, n0, n, field)?;
        expect_shape("beta", &beta, n0, n, field)?;
        expect_shape("epsilon", &epsilon, n, n0, field)?;
        expect_shape("inversion", &inversion, n, n, field)?;
        if matches!(mult, Multiplication::Pair) && n != 2 * n0 {
            return Err(Error::ShapeMismatch(format!(
                "pair multiplication needs dim V = 2 dim V0, got {n} and {n0}"
            )));
        }
        let g = Self {
            total: SpaceRef::new(field, n),
            base: SpaceRef::new(field, n0),
            alpha,
            beta,
            epsilon,
            inversion,
            mult,
        };
        if let Multiplication::Table(entries) = &g.mult {
            g.validate_table(entries)?;
        }
        Ok(g)
    }

    fn validate_table(
        &self,
        entries: &BTreeMap<(ElementIndex, ElementIndex), ElementIndex>,
    ) -> Result<()> {
        let size = self.total.size_within(Limits::global().element_cap)?;
        for (&(x, y), &xy) in entries {
            for e in [x, y, xy] {
                if e >= size {
                    return Err(Error::IndexOutOfRange { idx: e, size });
                }
            }
            if !self.composable(x, y)? {
                return Err(Error::TableExtraneous(x, y));
            }
        }
        for (x, y) in self.composable_pairs()? {
            if !entries.contains_key(&(x, y)) {
                return Err(Error::TableIncomplete(x, y));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.alpha.field()
    }

    pub fn total(&self) -> SpaceRef {
        self.total
    }

    pub fn base(&self) -> SpaceRef {
        self.base
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn epsilon(&self) -> &Matrix {
        &self.epsilon
    }

    pub fn inversion(&self) -> &Matrix {
        &self.inversion
    }

    pub fn multiplication(&self) -> &Multiplication {
        &self.mult
    }

    /// The anchor map x -> (alpha(x), beta(x)) as a matrix.
    pub fn anchor(&self) -> Matrix {
        self.alpha
            .vstack(&self.beta)
            .expect("alpha and beta share a shape")
    }

    fn map_matrix(&self, map: StructureMap) -> (&Matrix, SpaceRef, SpaceRef) {
        match map {
            StructureMap::Source => (&self.alpha, self.total, self.base),
            StructureMap::Target => (&self.beta, self.total, self.base),
            StructureMap::Unit => (&self.epsilon, self.base, self.total),
            StructureMap::Invert => (&self.inversion, self.total, self.total),
        }
    }

    /// Evaluates a structure map on an element of its domain.
    pub fn apply_structure(&self, map: StructureMap, e: ElementIndex) -> Result<ElementIndex> {
        let (m, domain, codomain) = self.map_matrix(map);
        let v = domain.index_to_vector(e)?;
        Ok(codomain.encode(&m.apply(&v)?))
    }

    pub fn source(&self, x: ElementIndex) -> Result<ElementIndex> {
        self.apply_structure(StructureMap::Source, x)
    }

    pub fn target(&self, x: ElementIndex) -> Result<ElementIndex> {
        self.apply_structure(StructureMap::Target, x)
    }

    pub fn unit(&self, u: ElementIndex) -> Result<ElementIndex> {
        self.apply_structure(StructureMap::Unit, u)
    }

    pub fn invert(&self, x: ElementIndex) -> Result<ElementIndex> {
        self.apply_structure(StructureMap::Invert, x)
    }

    pub fn composable(&self, x: ElementIndex, y: ElementIndex) -> Result<bool> {
        Ok(self.target(x)? == self.source(y)?)
    }

    /// The product `x . y`, defined only when `beta(x) = alpha(y)`.
    pub fn compose(&self, x: ElementIndex, y: ElementIndex) -> Result<ElementIndex> {
        let (beta_x, alpha_y) = (self.target(x)?, self.source(y)?);
        if beta_x != alpha_y {
            return Err(Error::NotComposable {
                x,
                y,
                beta_x,
                alpha_y,
            });
        }
        match &self.mult {
            Multiplication::Table(entries) => entries
                .get(&(x, y))
                .copied()
                .ok_or(Error::TableIncomplete(x, y)),
            Multiplication::Null => Ok(x),
            Multiplication::SingleUnit => Ok(self.total.add(x, y)),
            Multiplication::Pair => {
                let block = self.base.size();
                Ok(x % block + block * (y / block))
            }
            Multiplication::Induced(rule) => rule.compose(x, y),
        }
    }

    /// All composable pairs in ascending lexicographic order.
    pub fn composable_pairs(&self) -> Result<Vec<(ElementIndex, ElementIndex)>> {
        let limits = Limits::global();
        let size = self.total.size_within(limits.element_cap)?;
        if (size as u64).saturating_pow(2) > limits.triple_cap {
            return Err(Error::CapExceeded(format!(
                "|V|^2 = {} pairs exceeds {}",
                (size as u64).saturating_pow(2),
                limits.triple_cap
            )));
        }
        let fibres = self.alpha_fibres()?;
        let mut pairs = Vec::new();
        for x in 0..size {
            let b = self.target(x)?;
            pairs.extend(fibres[b].iter().map(|&y| (x, y)));
        }
        Ok(pairs)
    }

    /// `alpha^{-1}(u)` for every u, each list ascending.
    fn alpha_fibres(&self) -> Result<Vec<Vec<ElementIndex>>> {
        let mut fibres = vec![Vec::new(); self.base.size()];
        for y in self.total.iter() {
            fibres[self.source(y)?].push(y);
        }
        Ok(fibres)
    }

    /// The same groupoid with its multiplication materialized as a table.
    pub fn to_table(&self) -> Result<VectorGroupoid> {
        let mut entries = BTreeMap::new();
        for (x, y) in self.composable_pairs()? {
            entries.insert((x, y), self.compose(x, y)?);
        }
        Ok(Self {
            mult: Multiplication::Table(entries),
            ..self.clone()
        })
    }

    /// Replaces the multiplication without re-validating table coverage.
    /// Used to build deliberately broken groupoids.
    pub fn with_multiplication_unchecked(&self, mult: Multiplication) -> VectorGroupoid {
        Self {
            mult,
            ..self.clone()
        }
    }

    pub fn with_inversion(&self, inversion: Matrix) -> Result<VectorGroupoid> {
        Self::new(
            self.total.dim(),
            self.base.dim(),
            self.alpha.clone(),
            self.beta.clone(),
            self.epsilon.clone(),
            inversion,
            self.mult.clone(),
        )
    }

    pub fn isotropy_group(&self, u: ElementIndex) -> Result<IsotropyGroup> {
        isotropy_group(self, u)
    }

    pub fn isotropy_conjugation(&self, x: ElementIndex) -> Result<GroupIsomorphism> {
        isotropy_conjugation(self, x)
    }
}

impl fmt::Display for VectorGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} groupoid over {}: V = GF({})^{}, V0 = GF({})^{}",
            self.mult.kind(),
            self.field(),
            self.field().p(),
            self.total.dim(),
            self.field().p(),
            self.base.dim()
        )
    }
}

/// Pointwise access to a groupoid's structure functions. `compose` returns
/// `None` when the product is undefined, whether because the pair is not
/// composable or because the backend could not produce it.
pub trait GroupoidOps {
    fn total(&self) -> SpaceRef;
    fn base(&self) -> SpaceRef;
    fn source(&self, x: ElementIndex) -> ElementIndex;
    fn target(&self, x: ElementIndex) -> ElementIndex;
    fn unit(&self, u: ElementIndex) -> ElementIndex;
    fn invert(&self, x: ElementIndex) -> ElementIndex;
    fn compose(&self, x: ElementIndex, y: ElementIndex) -> Option<ElementIndex>;
}

/// Direct evaluation against the matrices and backend. Inputs must be valid
/// element indices.
impl GroupoidOps for VectorGroupoid {
    fn total(&self) -> SpaceRef {
        self.total
    }
    fn base(&self) -> SpaceRef {
        self.base
    }
    fn source(&self, x: ElementIndex) -> ElementIndex {
        VectorGroupoid::source(self, x).expect("valid element")
    }
    fn target(&self, x: ElementIndex) -> ElementIndex {
        VectorGroupoid::target(self, x).expect("valid element")
    }
    fn unit(&self, u: ElementIndex) -> ElementIndex {
        VectorGroupoid::unit(self, u).expect("valid base element")
    }
    fn invert(&self, x: ElementIndex) -> ElementIndex {
        VectorGroupoid::invert(self, x).expect("valid element")
    }
    fn compose(&self, x: ElementIndex, y: ElementIndex) -> Option<ElementIndex> {
        let size = self.total.checked_size()?;
        VectorGroupoid::compose(self, x, y)
            .ok()
            .filter(|&xy| xy < size)
    }
}

const UNDEFINED: u32 = u32::MAX;

/// A fully evaluated copy of a groupoid's structure functions, used by the
/// exhaustive checkers. Requires `|V|^3` within the triple cap.
#[derive(Debug, Clone)]
pub struct Tabulated {
    total: SpaceRef,
    base: SpaceRef,
    source: Vec<ElementIndex>,
    target: Vec<ElementIndex>,
    inverse: Vec<ElementIndex>,
    units: Vec<ElementIndex>,
    alpha_fibres: Vec<Vec<ElementIndex>>,
    beta_fibres: Vec<Vec<ElementIndex>>,
    products: Vec<u32>,
}

impl Tabulated {
    pub fn new(g: &VectorGroupoid) -> Result<Self> {
        let limits = Limits::global();
        let n = g.total.size_within(limits.element_cap)?;
        let n0 = g.base.size_within(limits.element_cap)?;
        limits.check_triples(n, "tabulating the multiplication")?;
        let source: Vec<_> = (0..n).map(|x| g.source(x)).collect::<Result<_>>()?;
        let target: Vec<_> = (0..n).map(|x| g.target(x)).collect::<Result<_>>()?;
        let inverse: Vec<_> = (0..n).map(|x| g.invert(x)).collect::<Result<_>>()?;
        let units: Vec<_> = (0..n0).map(|u| g.unit(u)).collect::<Result<_>>()?;
        let mut alpha_fibres = vec![Vec::new(); n0];
        let mut beta_fibres = vec![Vec::new(); n0];
        for x in 0..n {
            alpha_fibres[source[x]].push(x);
            beta_fibres[target[x]].push(x);
        }
        let mut products = vec![UNDEFINED; n * n];
        for x in 0..n {
            for &y in &alpha_fibres[target[x]] {
                match g.compose(x, y) {
                    Ok(xy) if xy < n => products[x * n + y] = xy as u32,
                    _ => {}
                }
            }
        }
        Ok(Self {
            total: g.total,
            base: g.base,
            source,
            target,
            inverse,
            units,
            alpha_fibres,
            beta_fibres,
            products,
        })
    }

    pub fn size(&self) -> usize {
        self.source.len()
    }

    /// `alpha^{-1}(u)`, ascending.
    pub fn alpha_fibre(&self, u: ElementIndex) -> &[ElementIndex] {
        &self.alpha_fibres[u]
    }

    /// `beta^{-1}(u)`, ascending.
    pub fn beta_fibre(&self, u: ElementIndex) -> &[ElementIndex] {
        &self.beta_fibres[u]
    }

    pub fn composable(&self, x: ElementIndex, y: ElementIndex) -> bool {
        self.target[x] == self.source[y]
    }
}

impl GroupoidOps for Tabulated {
    fn total(&self) -> SpaceRef {
        self.total
    }
    fn base(&self) -> SpaceRef {
        self.base
    }
    #[inline]
    fn source(&self, x: ElementIndex) -> ElementIndex {
        self.source[x]
    }
    #[inline]
    fn target(&self, x: ElementIndex) -> ElementIndex {
        self.target[x]
    }
    #[inline]
    fn unit(&self, u: ElementIndex) -> ElementIndex {
        self.units[u]
    }
    #[inline]
    fn invert(&self, x: ElementIndex) -> ElementIndex {
        self.inverse[x]
    }
    #[inline]
    fn compose(&self, x: ElementIndex, y: ElementIndex) -> Option<ElementIndex> {
        match self.products[x * self.size() + y] {
            UNDEFINED => None,
            xy => Some(xy as ElementIndex),
        }
    }
}

/// The isotropy group `G(u) = alpha^{-1}(u) ∩ beta^{-1}(u)` with its Cayley
/// table. `table[i][j]` is the position in `elements` of
/// `elements[i] . elements[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyGroup {
    pub base_point: ElementIndex,
    pub unit: ElementIndex,
    pub elements: Vec<ElementIndex>,
    pub table: Vec<Vec<usize>>,
}

impl IsotropyGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, e: ElementIndex) -> Option<usize> {
        self.elements.binary_search(&e).ok()
    }
}

/// Computes and verifies the isotropy group at `u`: closure, the unit
/// `epsilon(u)`, inverses via the inversion map, and associativity.
pub fn isotropy_group<G: GroupoidOps + ?Sized>(g: &G, u: ElementIndex) -> Result<IsotropyGroup> {
    let limits = Limits::global();
    let n0 = g.base().size_within(limits.element_cap)?;
    if u >= n0 {
        return Err(Error::IndexOutOfRange { idx: u, size: n0 });
    }
    let n = g.total().size_within(limits.element_cap)?;
    let elements: Vec<ElementIndex> = (0..n)
        .filter(|&x| g.source(x) == u && g.target(x) == u)
        .collect();
    limits.check_triples(elements.len(), "isotropy group associativity")?;
    let not_a_group = |reason: &str, witness: Vec<usize>| Error::NotAGroup {
        unit: u,
        reason: reason.to_string(),
        witness,
    };
    let position = |e: ElementIndex| elements.binary_search(&e).ok();

    let mut table = Vec::with_capacity(elements.len());
    for &a in &elements {
        let mut row = Vec::with_capacity(elements.len());
        for &b in &elements {
            let ab = g
                .compose(a, b)
                .ok_or_else(|| not_a_group("product undefined", vec![a, b]))?;
            row.push(position(ab).ok_or_else(|| not_a_group("not closed", vec![a, b]))?);
        }
        table.push(row);
    }

    let unit = g.unit(u);
    let e = position(unit).ok_or_else(|| not_a_group("unit missing", vec![unit]))?;
    for (i, &a) in elements.iter().enumerate() {
        if table[e][i] != i || table[i][e] != i {
            return Err(not_a_group("unit law", vec![a]));
        }
        let inv = position(g.invert(a)).ok_or_else(|| not_a_group("inverse missing", vec![a]))?;
        if table[i][inv] != e || table[inv][i] != e {
            return Err(not_a_group("inverse law", vec![a]));
        }
    }
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            let ij = table[i][j];
            for k in 0..elements.len() {
                if table[ij][k] != table[i][table[j][k]] {
                    return Err(not_a_group(
                        "associativity",
                        vec![elements[i], elements[j], elements[k]],
                    ));
                }
            }
        }
    }
    Ok(IsotropyGroup {
        base_point: u,
        unit,
        elements,
        table,
    })
}

/// The conjugation `z -> x^{-1} z x` from `G(alpha(x))` to `G(beta(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupIsomorphism {
    pub by: ElementIndex,
    pub domain: IsotropyGroup,
    pub codomain: IsotropyGroup,
    /// `(z, phi(z))` for every z of the domain, ascending in z.
    pub map: Vec<(ElementIndex, ElementIndex)>,
}

impl GroupIsomorphism {
    pub fn apply(&self, z: ElementIndex) -> Option<ElementIndex> {
        self.map
            .binary_search_by_key(&z, |&(a, _)| a)
            .ok()
            .map(|i| self.map[i].1)
    }
}

/// Builds the conjugation by `x` and verifies it is a bijective homomorphism.
pub fn isotropy_conjugation<G: GroupoidOps + ?Sized>(
    g: &G,
    x: ElementIndex,
) -> Result<GroupIsomorphism> {
    let domain = isotropy_group(g, g.source(x))?;
    let codomain = isotropy_group(g, g.target(x))?;
    conjugation_between(g, x, domain, codomain)
}

/// Conjugation by `x` between already verified isotropy groups at
/// `alpha(x)` and `beta(x)`.
pub(crate) fn conjugation_between<G: GroupoidOps + ?Sized>(
    g: &G,
    x: ElementIndex,
    domain: IsotropyGroup,
    codomain: IsotropyGroup,
) -> Result<GroupIsomorphism> {
    let x_inv = g.invert(x);
    let fail = |reason: &str, witness: Vec<usize>| Error::NotAnIsomorphism {
        x,
        reason: reason.to_string(),
        witness,
    };
    let mut map = Vec::with_capacity(domain.order());
    let mut positions = Vec::with_capacity(domain.order());
    for &z in &domain.elements {
        let image = g
            .compose(x_inv, z)
            .and_then(|xz| g.compose(xz, x))
            .ok_or_else(|| fail("conjugate undefined", vec![z]))?;
        let pos = codomain
            .position(image)
            .ok_or_else(|| fail("image outside the target group", vec![z]))?;
        map.push((z, image));
        positions.push(pos);
    }
    let distinct: BTreeSet<usize> = positions.iter().copied().collect();
    if distinct.len() != codomain.order() || domain.order() != codomain.order() {
        let (z, _) = map
            .iter()
            .enumerate()
            .find(|(i, _)| positions[..*i].contains(&positions[*i]))
            .map(|(_, m)| *m)
            .unwrap_or((x, x));
        return Err(fail("not bijective", vec![z]));
    }
    for i in 0..domain.order() {
        for j in 0..domain.order() {
            let lhs = positions[domain.table[i][j]];
            let rhs = codomain.table[positions[i]][positions[j]];
            if lhs != rhs {
                return Err(fail(
                    "not a homomorphism",
                    vec![domain.elements[i], domain.elements[j]],
                ));
            }
        }
    }
    Ok(GroupIsomorphism {
        by: x,
        domain,
        codomain,
        map,
    })
}
