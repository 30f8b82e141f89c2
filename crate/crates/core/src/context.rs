//! Formal contexts and the derivation operators of their Galois connection.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::{AttrSet, ObjSet};
use crate::error::{Error, Result};

/// A binary table of objects by attributes.
///
/// The incidence is stored twice: one attribute row per object and one
/// object column per attribute. Both views are filled at construction and
/// the context is immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<AttrSet>,
    cols: Vec<ObjSet>,
}

fn check_unique(names: &[String], dup: fn(String) -> Error) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(dup(name.clone()));
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from per-object attribute rows.
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<AttrSet>) -> Result<Self> {
        check_unique(&objects, Error::DuplicateObject)?;
        check_unique(&attributes, Error::DuplicateAttribute)?;
        if rows.len() != objects.len() {
            return Err(Error::RowCount {
                expected: objects.len(),
                found: rows.len(),
            });
        }
        let n_attrs = attributes.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.width() != n_attrs) {
            return Err(Error::RowWidth {
                row,
                expected: n_attrs,
                found: r.width(),
            });
        }
        let mut cols: Vec<ObjSet> = (0..n_attrs).map(|_| ObjSet::empty(objects.len())).collect();
        for (g, row) in rows.iter().enumerate() {
            for m in row {
                cols[m].insert(g);
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            cols,
        })
    }

    /// Builds a context with generated names `g1..` and `m1..` from a predicate.
    pub fn from_fn(n_objects: usize, n_attrs: usize, mut incident: impl FnMut(usize, usize) -> bool) -> Self {
        let rows = (0..n_objects)
            .map(|g| AttrSet::from_indices(n_attrs, (0..n_attrs).filter(|&m| incident(g, m))))
            .collect();
        Self::new(default_names("g", n_objects), default_names("m", n_attrs), rows).expect("generated names are unique")
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Attributes of object `g`.
    pub fn row(&self, g: usize) -> &AttrSet {
        &self.rows[g]
    }

    pub fn rows(&self) -> &[AttrSet] {
        &self.rows
    }

    /// Objects having attribute `m`.
    pub fn column(&self, m: usize) -> &ObjSet {
        &self.cols[m]
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn all_objects(&self) -> ObjSet {
        ObjSet::full(self.n_objects())
    }

    pub fn all_attributes(&self) -> AttrSet {
        AttrSet::full(self.n_attributes())
    }

    /// Attributes shared by every object of `objects`; the empty set maps to
    /// the whole attribute universe.
    pub fn intent_of(&self, objects: &ObjSet) -> AttrSet {
        let mut out = self.all_attributes();
        for g in objects {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// Objects having every attribute of `attrs`; the empty set maps to the
    /// whole object universe.
    pub fn extent_of(&self, attrs: &AttrSet) -> ObjSet {
        let mut out = self.all_objects();
        for m in attrs {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// Attribute-side closure `B''`.
    pub fn closure(&self, attrs: &AttrSet) -> AttrSet {
        self.intent_of(&self.extent_of(attrs))
    }

    /// Object-side closure `A''`.
    pub fn object_closure(&self, objects: &ObjSet) -> ObjSet {
        self.extent_of(&self.intent_of(objects))
    }

    /// Sub-context on the listed objects, in the listed order, over the
    /// same attribute list.
    pub fn select_objects(&self, objects: &[usize]) -> Result<Self> {
        let mut seen = ObjSet::empty(self.n_objects());
        for &g in objects {
            if g >= self.n_objects() || seen.contains(g) {
                return Err(Error::BadPartition(g));
            }
            seen.insert(g);
        }
        Self::new(
            objects.iter().map(|&g| self.objects[g].clone()).collect(),
            self.attributes.clone(),
            objects.iter().map(|&g| self.rows[g].clone()).collect(),
        )
    }

    /// Seeded coin-toss context: every incidence bit is an independent
    /// Bernoulli(`p`) draw.
    ///
    /// The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
    /// `SeedableRng::seed_from_u64`. Bits are drawn row by row, attribute by
    /// attribute; each draw takes one 53-bit uniform `u` in `[0, 1)` and sets
    /// the bit iff `u < p`. Objects are named `g1..`, attributes `m1..`.
    pub fn coin_toss(n_objects: usize, n_attrs: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Probability(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self::from_fn(n_objects, n_attrs, |_, _| rng.gen::<f64>() < p))
    }
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}
