use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Complex, Degree, GradedObject, Window};
use crate::cob::morphism::TermJson;
use crate::cob::{FlatTangle, Morphism};
use crate::error::{Error, Result};
use crate::ring::{Coeff, RingKind};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub(crate) struct ObjectJson {
    /// `2t`
    pub t: i32,
    pub q: i32,
    pub tangle: FlatTangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct EntryJson {
    pub from: usize,
    pub to: usize,
    pub morphism: Vec<TermJson>,
}

/// Serialized complex. Entries are sorted by `(from, to)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub(crate) objects: Vec<ObjectJson>,
    pub(crate) diff: Vec<EntryJson>,
    /// `[2·lo, 2·hi]`
    pub(crate) window: Option<[i32; 2]>,
    pub(crate) ring: RingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub(crate) bottom: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub(crate) top: Option<usize>,
}

impl<R: Coeff> Complex<R> {
    pub fn to_json_value(&self) -> Result<ComplexJson> {
        if self.has_loops() {
            return Err(Error::Unsupported("serializing a complex with free loops".into()));
        }
        let objects = self
            .objects
            .iter()
            .map(|o| ObjectJson {
                t: o.degree.t2,
                q: o.degree.q,
                tangle: o.obj.tangle.clone(),
            })
            .collect();
        let mut diff = Vec::new();
        for (&(from, to), m) in &self.diff {
            diff.push(EntryJson {
                from,
                to,
                morphism: m.to_json_terms()?,
            });
        }
        let (bottom, top) = if self.objects.is_empty() {
            (Some(self.bottom), Some(self.top))
        } else {
            (None, None)
        };
        Ok(ComplexJson {
            objects,
            diff,
            window: self.window.map(|w| [w.lo2, w.hi2]),
            ring: R::KIND,
            bottom,
            top,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value()?)?)
    }

    pub fn from_json_value(j: &ComplexJson) -> Result<Self> {
        if j.ring != R::KIND {
            return Err(Error::Parse(format!("complex over {} read as {}", j.ring, R::KIND)));
        }
        let (bottom, top) = match j.objects.first() {
            Some(o) => (o.tangle.bottom(), o.tangle.top()),
            None => (j.bottom.unwrap_or(0), j.top.unwrap_or(0)),
        };
        let objects: Vec<GradedObject> = j
            .objects
            .iter()
            .map(|o| GradedObject::new(Degree::new(o.t, o.q), o.tangle.clone()))
            .collect();
        let mut diff = BTreeMap::new();
        for e in &j.diff {
            let (a, b) = (objects.get(e.from), objects.get(e.to));
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Parse(format!("entry {}->{} out of range", e.from, e.to)));
            };
            let m = Morphism::from_json_terms(a.tangle(), b.tangle(), &e.morphism)?;
            if diff.insert((e.from, e.to), m).is_some() {
                return Err(Error::Parse(format!("duplicate entry {}->{}", e.from, e.to)));
            }
        }
        let window = j.window.map(|[lo, hi]| Window::new(lo, hi));
        Complex::from_parts(bottom, top, objects, diff, window)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}
