//! The JSON algebra specification format.
//!
//! Scalars are always strings (`"p/q"` or `"p"`) so values round-trip
//! exactly. Map entries `[i, j, v]` mean `map(e_j)` has coefficient `v` on
//! `e_i`; form entries `[i, j, v]` mean `B(e_i, e_j) = v`.

use std::collections::BTreeMap;

use homnov_core::{Algebra, BilinearForm, Field, LinearOperator, Matrix, Scalar, StructureBundle};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type ProductEntry = (usize, usize, usize, String);
pub type MatrixEntry = (usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default = "default_field")]
    pub field: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub products: BTreeMap<String, Vec<ProductEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<MatrixEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, Vec<MatrixEntry>>,
}

fn default_field() -> String {
    "Q".to_string()
}

/// A spec file with every entry parsed into exact values.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub field: Field,
    pub dim: usize,
    pub basis: Option<Vec<String>>,
    pub products: BTreeMap<String, Algebra>,
    pub maps: BTreeMap<String, LinearOperator>,
    pub forms: BTreeMap<String, BilinearForm>,
}

/// Names chosen on the command line for each bundle role.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub dot: Option<String>,
    pub star: Option<String>,
    pub alpha: Option<String>,
    pub del: Option<String>,
    pub form: Option<String>,
}

pub fn parse_scalar(field: Field, s: &str) -> Result<Scalar, CliError> {
    let v = Scalar::parse(field, s).map_err(|e| CliError::Input(format!("scalar {s:?}: {e}")))?;
    if field == Field::Rational && v.to_string() != s {
        return Err(CliError::Input(format!(
            "scalar {s:?} is not in canonical form (expected {:?})",
            v.to_string()
        )));
    }
    Ok(v)
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with one structure constant or matrix entry per line.
    pub fn to_json(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut out = format!("{{\n  \"field\": {},\n  \"dim\": {}", q(&self.field), self.dim);
        if let Some(b) = &self.basis {
            let names: Vec<String> = b.iter().map(|n| q(n)).collect();
            out += &format!(",\n  \"basis\": [{}]", names.join(", "));
        }
        let section = |out: &mut String, key: &str, table: Vec<(&String, Vec<String>)>| {
            *out += &format!(",\n  \"{key}\": {{");
            for (n, (name, rows)) in table.iter().enumerate() {
                let sep = if n > 0 { "," } else { "" };
                if rows.is_empty() {
                    *out += &format!("{sep}\n    {}: []", q(name));
                } else {
                    *out += &format!("{sep}\n    {}: [\n      {}\n    ]", q(name), rows.join(",\n      "));
                }
            }
            *out += if table.is_empty() { "}" } else { "\n  }" };
        };
        let products = self
            .products
            .iter()
            .map(|(k, v)| {
                (
                    k,
                    v.iter()
                        .map(|(i, j, l, c)| format!("[{i}, {j}, {l}, {}]", q(c)))
                        .collect(),
                )
            })
            .collect();
        section(&mut out, "products", products);
        fn matrices(t: &BTreeMap<String, Vec<MatrixEntry>>) -> Vec<(&String, Vec<String>)> {
            let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
            t.iter()
                .map(|(k, v)| (k, v.iter().map(|(i, j, c)| format!("[{i}, {j}, {}]", q(c))).collect()))
                .collect()
        }
        if !self.maps.is_empty() {
            section(&mut out, "maps", matrices(&self.maps));
        }
        if !self.forms.is_empty() {
            section(&mut out, "forms", matrices(&self.forms));
        }
        out += "\n}\n";
        out
    }

    /// Parses every entry, in `field` if given and in the file's own field otherwise.
    pub fn resolve(&self, field: Option<Field>) -> Result<Resolved, CliError> {
        let field = match field {
            Some(f) => f,
            None => self.field.parse()?,
        };
        if let Some(b) = &self.basis {
            if b.len() != self.dim {
                return Err(CliError::Input(format!(
                    "basis lists {} names for dimension {}",
                    b.len(),
                    self.dim
                )));
            }
        }
        let mut products = BTreeMap::new();
        for (name, entries) in &self.products {
            let parsed = entries
                .iter()
                .map(|(i, j, k, v)| Ok((*i, *j, *k, parse_scalar(field, v)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let a = Algebra::new(field, self.dim, parsed).map_err(|e| in_entry("product", name, e))?;
            products.insert(name.clone(), a.with_label(name.clone()));
        }
        let matrix = |what: &str, name: &str, entries: &[MatrixEntry]| -> Result<Matrix, CliError> {
            let parsed = entries
                .iter()
                .map(|(i, j, v)| Ok((*i, *j, parse_scalar(field, v)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            Matrix::from_entries(field, self.dim, parsed).map_err(|e| in_entry(what, name, e))
        };
        let mut maps = BTreeMap::new();
        for (name, entries) in &self.maps {
            let m = matrix("map", name, entries)?;
            maps.insert(name.clone(), LinearOperator::new(m).with_label(name.clone()));
        }
        let mut forms = BTreeMap::new();
        for (name, entries) in &self.forms {
            let m = matrix("form", name, entries)?;
            forms.insert(name.clone(), BilinearForm::new(m).with_label(name.clone()));
        }
        Ok(Resolved {
            field,
            dim: self.dim,
            basis: self.basis.clone(),
            products,
            maps,
            forms,
        })
    }

    /// Emits a bundle under the role names `dot`, `star`, `alpha`, `del` and `form`.
    pub fn from_bundle(bundle: &StructureBundle, basis: Option<Vec<String>>) -> Self {
        let mut products = BTreeMap::new();
        let mut maps = BTreeMap::new();
        let mut forms = BTreeMap::new();
        if let Some(a) = bundle.dot() {
            products.insert("dot".to_string(), product_entries(a));
        }
        if let Some(a) = bundle.star() {
            products.insert("star".to_string(), product_entries(a));
        }
        if let Some(m) = bundle.alpha() {
            maps.insert("alpha".to_string(), matrix_entries(m.matrix()));
        }
        if let Some(m) = bundle.del() {
            maps.insert("del".to_string(), matrix_entries(m.matrix()));
        }
        if let Some(b) = bundle.form() {
            forms.insert("form".to_string(), matrix_entries(b.matrix()));
        }
        SpecFile {
            field: bundle.field().to_string(),
            dim: bundle.dim(),
            basis: basis.filter(|b| b.len() == bundle.dim()),
            products,
            maps,
            forms,
        }
    }
}

fn in_entry(what: &str, name: &str, e: homnov_core::Error) -> CliError {
    CliError::Input(format!("{what} {name:?}: {e}"))
}

pub fn product_entries(a: &Algebra) -> Vec<ProductEntry> {
    a.nonzero_entries()
        .map(|(i, j, k, v)| (i, j, k, v.to_string()))
        .collect()
}

pub fn matrix_entries(m: &Matrix) -> Vec<MatrixEntry> {
    let n = m.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if !v.is_zero() {
                out.push((i, j, v.to_string()));
            }
        }
    }
    out
}

impl Resolved {
    fn lookup<'a, T>(
        &self,
        table: &'a BTreeMap<String, T>,
        what: &str,
        bound: &Option<String>,
        default: &str,
    ) -> Result<Option<&'a T>, CliError> {
        match bound {
            Some(name) => table
                .get(name)
                .map(Some)
                .ok_or_else(|| CliError::Input(format!("no {what} named {name:?}"))),
            None => Ok(table.get(default)),
        }
    }

    /// Assembles a bundle from role bindings.
    ///
    /// Unbound roles fall back to entries named after the role. A file with a
    /// single product and no `dot`/`star` name binds it as `star`; a file with
    /// a single form binds it as `form`; a file without products gets the
    /// zero product.
    pub fn bundle(&self, b: &Bindings) -> Result<StructureBundle, CliError> {
        let mut dot = self.lookup(&self.products, "product", &b.dot, "dot")?.cloned();
        let mut star = self.lookup(&self.products, "product", &b.star, "star")?.cloned();
        if dot.is_none() && star.is_none() {
            match self.products.len() {
                0 => star = Some(Algebra::zero(self.field, self.dim)),
                1 => star = self.products.values().next().cloned(),
                _ => {
                    return Err(CliError::Input(format!(
                        "several products ({}); choose one with --star or --dot",
                        self.products.keys().cloned().collect::<Vec<_>>().join(", ")
                    )))
                }
            }
        }
        let mut bundle = match (dot.take(), star.take()) {
            (Some(d), Some(s)) => StructureBundle::from_pair(d, s)?,
            (Some(d), None) => StructureBundle::from_dot(d),
            (None, Some(s)) => StructureBundle::from_star(s),
            (None, None) => unreachable!(),
        };
        if let Some(m) = self.lookup(&self.maps, "map", &b.alpha, "alpha")? {
            bundle = bundle.with_alpha(m.clone())?;
        }
        if let Some(m) = self.lookup(&self.maps, "map", &b.del, "del")? {
            bundle = bundle.with_del(m.clone())?;
        }
        let mut form = self.lookup(&self.forms, "form", &b.form, "form")?;
        if form.is_none() && b.form.is_none() && self.forms.len() == 1 {
            form = self.forms.values().next();
        }
        if let Some(f) = form {
            bundle = bundle.with_form(f.clone())?;
        }
        Ok(bundle)
    }
}
