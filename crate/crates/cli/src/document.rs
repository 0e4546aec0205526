//! JSON documents describing groupoids, morphisms and factorization inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vecgroupoid::{
    induced_groupoid, induced_groupoid_with_basis, FieldSpec, GroupoidMorphism, InducedGroupoid,
    Matrix, Multiplication, Scalar, VectorGroupoid,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub p: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MultiplicationDoc {
    Pair,
    Null,
    SingleUnit,
    Table {
        entries: Vec<[usize; 3]>,
    },
    Induced {
        parent: Box<GroupoidDoc>,
        h: Vec<Vec<Scalar>>,
        x_dim: usize,
        /// Ambient vectors `[x | y | a]` spanning the pullback.
        basis: Vec<Vec<Scalar>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub field: FieldDoc,
    pub base_dim: usize,
    pub total_dim: usize,
    pub alpha: Vec<Vec<Scalar>>,
    pub beta: Vec<Vec<Scalar>>,
    pub epsilon: Vec<Vec<Scalar>>,
    pub inversion: Vec<Vec<Scalar>>,
    pub multiplication: MultiplicationDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: GroupoidDoc,
    pub target: GroupoidDoc,
    pub f: Vec<Vec<Scalar>>,
    pub f0: Vec<Vec<Scalar>>,
}

/// Inputs of the universal factorization: a morphism `(u, h)` from `source`
/// over X into `parent` over V0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizeDoc {
    pub source: GroupoidDoc,
    pub parent: GroupoidDoc,
    pub u: Vec<Vec<Scalar>>,
    pub h: Vec<Vec<Scalar>>,
}

/// Parses JSON text, reporting syntax and schema errors with their position.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn matrix(
    field: FieldSpec,
    name: &str,
    rows: usize,
    cols: usize,
    data: &[Vec<Scalar>],
) -> Result<Matrix, CliError> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(
            vecgroupoid::Error::ShapeMismatch(format!("{name} must be {rows}x{cols}")).into(),
        );
    }
    Ok(Matrix::from_rows(field, cols, data)?)
}

fn rows(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.to_rows()
}

impl GroupoidDoc {
    pub fn from_groupoid(g: &VectorGroupoid) -> Self {
        let multiplication = match g.multiplication() {
            Multiplication::Pair => MultiplicationDoc::Pair,
            Multiplication::Null => MultiplicationDoc::Null,
            Multiplication::SingleUnit => MultiplicationDoc::SingleUnit,
            Multiplication::Table(t) => MultiplicationDoc::Table {
                entries: t.iter().map(|(&(x, y), &xy)| [x, y, xy]).collect(),
            },
            Multiplication::Induced(rule) => MultiplicationDoc::Induced {
                parent: Box::new(GroupoidDoc::from_groupoid(rule.parent())),
                h: rows(rule.h()),
                x_dim: rule.x_dim(),
                basis: (0..rule.basis().cols())
                    .map(|c| rule.basis().column(c))
                    .collect(),
            },
        };
        Self {
            field: FieldDoc { p: g.field().p() },
            base_dim: g.base().dim(),
            total_dim: g.total().dim(),
            alpha: rows(g.alpha()),
            beta: rows(g.beta()),
            epsilon: rows(g.epsilon()),
            inversion: rows(g.inversion()),
            multiplication,
        }
    }

    pub fn to_groupoid(&self) -> Result<VectorGroupoid, CliError> {
        let field = FieldSpec::new(self.field.p)?;
        let (n, n0) = (self.total_dim, self.base_dim);
        let alpha = matrix(field, "alpha", n0, n, &self.alpha)?;
        let beta = matrix(field, "beta", n0, n, &self.beta)?;
        let epsilon = matrix(field, "epsilon", n, n0, &self.epsilon)?;
        let inversion = matrix(field, "inversion", n, n, &self.inversion)?;

        let mult = match &self.multiplication {
            MultiplicationDoc::Pair => Multiplication::Pair,
            MultiplicationDoc::Null => Multiplication::Null,
            MultiplicationDoc::SingleUnit => Multiplication::SingleUnit,
            MultiplicationDoc::Table { entries } => {
                let mut table = BTreeMap::new();
                for &[x, y, xy] in entries {
                    if table.insert((x, y), xy).is_some() {
                        return Err(CliError::Invalid(format!(
                            "duplicate table entry for ({x}, {y})"
                        )));
                    }
                }
                Multiplication::Table(table)
            }
            MultiplicationDoc::Induced { .. } => {
                let ig = self.to_induced()?;
                let g = ig.structure;
                let stored = [&alpha, &beta, &epsilon, &inversion];
                let rebuilt = [g.alpha(), g.beta(), g.epsilon(), g.inversion()];
                if stored != rebuilt {
                    return Err(CliError::Invalid(
                        "structure maps disagree with the induced construction".into(),
                    ));
                }
                return Ok(g);
            }
        };
        Ok(VectorGroupoid::new(
            n, n0, alpha, beta, epsilon, inversion, mult,
        )?)
    }

    /// The induced groupoid described by an `induced` multiplication block.
    pub fn to_induced(&self) -> Result<InducedGroupoid, CliError> {
        let MultiplicationDoc::Induced {
            parent,
            h,
            x_dim,
            basis,
        } = &self.multiplication
        else {
            return Err(CliError::Invalid("not an induced groupoid".into()));
        };
        let parent = parent.to_groupoid()?;
        let h = matrix(parent.field(), "h", parent.base().dim(), *x_dim, h)?;
        let ig = induced_groupoid_with_basis(&parent, &h, *x_dim, basis.clone())?;
        if ig.structure.total().dim() != self.total_dim || *x_dim != self.base_dim {
            return Err(CliError::Invalid(
                "declared dimensions disagree with the induced construction".into(),
            ));
        }
        Ok(ig)
    }
}

impl MorphismDoc {
    pub fn from_morphism(m: &GroupoidMorphism) -> Self {
        Self {
            source: GroupoidDoc::from_groupoid(m.source()),
            target: GroupoidDoc::from_groupoid(m.target()),
            f: rows(m.f()),
            f0: rows(m.f0()),
        }
    }

    pub fn to_morphism(&self) -> Result<GroupoidMorphism, CliError> {
        let source = self.source.to_groupoid()?;
        let target = self.target.to_groupoid()?;
        let field = source.field();
        let f = matrix(
            field,
            "f",
            target.total().dim(),
            source.total().dim(),
            &self.f,
        )?;
        let f0 = matrix(
            field,
            "f0",
            target.base().dim(),
            source.base().dim(),
            &self.f0,
        )?;
        Ok(GroupoidMorphism::new(source, target, f, f0)?)
    }
}

/// Loaded factorization inputs.
pub struct FactorizeInputs {
    pub source: VectorGroupoid,
    pub u: Matrix,
    pub h: Matrix,
    pub induced: InducedGroupoid,
}

impl FactorizeDoc {
    pub fn load(&self) -> Result<FactorizeInputs, CliError> {
        let source = self.source.to_groupoid()?;
        let parent = self.parent.to_groupoid()?;
        let field = parent.field();
        let x_dim = source.base().dim();
        let u = matrix(
            field,
            "u",
            parent.total().dim(),
            source.total().dim(),
            &self.u,
        )?;
        let h = matrix(field, "h", parent.base().dim(), x_dim, &self.h)?;
        let induced = induced_groupoid(&parent, &h, x_dim)?;
        Ok(FactorizeInputs {
            source,
            u,
            h,
            induced,
        })
    }
}

/// Pretty JSON with arrays of numbers kept on one line, newline-terminated.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("documents serialize to JSON");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&inner.join(", "));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
